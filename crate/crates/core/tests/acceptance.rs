//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use regtag::grammar::splice_segments;
use regtag::lexicalizer::cfg_derivation_trees;
use regtag::spine::{wfc_search_bound, CycleWitness};
use regtag::{
    build_spine_graph, cfg_to_regular_tag, check_regular_form, compile_regular_tag, eliminate_improper,
    enumerate_accepted, enumerate_derived, enumerate_regular, extend_to_regular_form, is_derivable, is_proper,
    language_up_to, parse_cfg_file, parse_grammar_file, parse_tree, project_labels, trace_wfc, Cfg, Derivability,
    DerivationBudget, ExpansionStrategy, Recognizer, SpineGraph, Symbol, TagGrammar, TokenString, Tree,
};

type Outcome = Result<String, String>;
type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn tag_fixtures() -> Vec<(String, TagGrammar)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(root().join("tag")).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, parse_grammar_file(&fs::read_to_string(&p).unwrap()).unwrap())
        })
        .collect()
}

fn cfg_fixtures() -> Vec<(String, Cfg)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(root().join("cfg")).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, parse_cfg_file(&fs::read_to_string(&p).unwrap()).unwrap())
        })
        .collect()
}

fn fixture(name: &str) -> TagGrammar {
    tag_fixtures().into_iter().find(|(n, _)| n == name).unwrap().1
}

fn regular_fixtures() -> Vec<(String, TagGrammar)> {
    tag_fixtures().into_iter().filter(|(_, g)| check_regular_form(g).unwrap().is_regular).collect()
}

/// Every lexicalizer output the library accepts, by CFG, strategy and mode.
fn lexicalizer_outputs() -> Vec<(String, TagGrammar)> {
    let mut out = Vec::new();
    for (name, c) in cfg_fixtures() {
        for (sname, s) in [("leftmost", ExpansionStrategy::Leftmost), ("rightmost", ExpansionStrategy::Rightmost)] {
            for lexicalized in [false, true] {
                if let Ok(g) = cfg_to_regular_tag(&c, &s, lexicalized) {
                    out.push((format!("{name}/{sname}/{}", if lexicalized { "lex" } else { "plain" }), g));
                }
            }
        }
    }
    out
}

fn tree(s: &str) -> Tree {
    parse_tree(s).unwrap()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn derived(g: &TagGrammar, n: usize, completed: bool) -> Result<BTreeSet<Tree>, String> {
    let e = enumerate_derived(g, DerivationBudget::nodes(n), completed).map_err(|e| e.to_string())?;
    check(e.complete, || format!("enumeration at {n} nodes hit the step budget"))?;
    Ok(e.trees)
}

fn criterion_1() -> Outcome {
    let g0 = fixture("G0");
    let g1 = fixture("G1");
    check(check_regular_form(&g0).unwrap().is_regular, || "G0 judged not in regular form".into())?;
    let c1 = check_regular_form(&g1).unwrap();
    check(!c1.is_regular, || "G1 judged in regular form".into())?;
    let witness = tree("(A (B A*))");
    check(c1.witnesses.iter().any(|w| w.cycle_tree == witness && w.wfc_equivalent == Some(false)), || {
        "witness (A (B A*)) not reported".into()
    })?;

    let b20 = DerivationBudget::nodes(20);
    let d = is_derivable(&g1, &witness, false, b20).unwrap();
    check(d == Derivability::NotDerivable, || format!("witness derivability at budget 20: {d:?}"))?;
    let all = derived(&g1, 20, false)?;
    check(!all.contains(&witness), || "witness enumerated in G1 at 20 nodes".into())?;
    let reg = enumerate_regular(&g1, b20, false).unwrap().trees;
    check(reg != all, || "G1: regular-only and unrestricted derivations agree at 20 nodes".into())?;
    let g0_all = derived(&g0, 20, false)?;
    let g0_reg = enumerate_regular(&g0, b20, false).unwrap().trees;
    check(g0_all == g0_reg, || "G0: regular-only and unrestricted derivations differ at 20 nodes".into())?;
    Ok(format!("G1 has {} derived vs {} regular trees at 20 nodes; witness underivable", all.len(), reg.len()))
}

fn criterion_2() -> Outcome {
    let mut grammars = regular_fixtures();
    grammars.extend(lexicalizer_outputs());
    let mut compared = 0;
    for (name, g) in &grammars {
        if !check_regular_form(g).unwrap().is_regular {
            return Err(format!("{name}: lexicalizer output not in regular form"));
        }
        for n in [8, 10, 12] {
            let all = derived(g, n, false).map_err(|e| format!("{name}: {e}"))?;
            let reg = enumerate_regular(g, DerivationBudget::nodes(n), false).unwrap().trees;
            check(all == reg, || format!("{name} at {n} nodes: {} derived vs {} regular", all.len(), reg.len()))?;
            compared += all.len();
        }
    }
    Ok(format!("{} grammars x budgets 8/10/12, {compared} trees compared", grammars.len()))
}

fn criterion_3() -> Outcome {
    let fixtures = tag_fixtures();
    let mut with_improper = 0;
    for (name, g) in &fixtures {
        let has_improper = g.auxiliary.iter().any(|a| !is_proper(&a.tree).unwrap());
        with_improper += has_improper as usize;
        let (g2, m) = eliminate_improper(g).map_err(|e| format!("{name}: {e}"))?;
        check(g2.auxiliary.iter().all(|a| is_proper(&a.tree).unwrap()), || format!("{name}: improper tree left"))?;
        let want = derived(g, 12, true)?;
        let got: BTreeSet<Tree> =
            derived(&g2, 12, true)?.iter().map(|t| project_labels(t, &m).unwrap()).collect();
        check(got == want, || format!("{name}: {} projected vs {} original trees", got.len(), want.len()))?;
    }
    check(fixtures.len() >= 5 && with_improper >= 1, || "too few fixtures".into())?;
    Ok(format!("{} fixtures ({with_improper} with improper trees) at 12 nodes", fixtures.len()))
}

fn criterion_4() -> Outcome {
    let g1 = fixture("G1");
    let (ext, added) = extend_to_regular_form(&g1).map_err(|e| e.to_string())?;
    check(check_regular_form(&ext).unwrap().is_regular, || "extension not in regular form".into())?;
    let (again, added_again) = extend_to_regular_form(&ext).map_err(|e| e.to_string())?;
    check(added_again.is_empty() && again == ext, || "extension not idempotent".into())?;
    let small = language_up_to(&g1, 8).unwrap();
    let big = language_up_to(&ext, 8).unwrap();
    check(small.is_subset(&big), || "L(G1) not contained in L(extended) up to length 8".into())?;
    let t_small = derived(&g1, 12, true)?;
    let t_big = derived(&ext, 12, true)?;
    check(t_small.is_subset(&t_big), || "T(G1) not contained in T(extended) at 12 nodes".into())?;
    Ok(format!(
        "{} trees added; {} vs {} strings up to length 8; {} vs {} trees at 12 nodes",
        added.len(),
        small.len(),
        big.len(),
        t_small.len(),
        t_big.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut grammars = regular_fixtures();
    let fixtures = grammars.len();
    grammars.extend(lexicalizer_outputs());
    for (name, g) in &grammars {
        let a = compile_regular_tag(g).map_err(|e| format!("{name}: {e}"))?;
        let accepted: BTreeSet<Tree> = enumerate_accepted(&a, 12).into_iter().collect();
        let want = derived(g, 12, true)?;
        check(accepted == want, || format!("{name}: {} accepted vs {} derived", accepted.len(), want.len()))?;
    }
    Ok(format!("{fixtures} fixtures and {} lexicalizer outputs at 12 nodes", grammars.len() - fixtures))
}

fn all_strings(alphabet: &[Symbol], max_len: usize) -> Vec<TokenString> {
    let mut out = vec![TokenString::default()];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |a| {
                    let mut v = w.0.clone();
                    v.push(a.clone());
                    TokenString(v)
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let (mut exhaustive, mut sampled) = (0, 0);
    for (name, g) in regular_fixtures() {
        let r = Recognizer::for_grammar(&g).map_err(|e| format!("{name}: {e}"))?;
        let language = language_up_to(&g, 10).unwrap();
        let alphabet: Vec<Symbol> = g.terminals.iter().filter(|t| !t.is_epsilon()).cloned().collect();
        for w in all_strings(&alphabet, 6) {
            check(r.recognize(&w).unwrap() == language.contains(&w), || format!("{name}: disagreement on \"{w}\""))?;
            exhaustive += 1;
        }
        let mut samples: Vec<TokenString> = (0..400)
            .map(|_| {
                let len = rng.gen_range(7..=10);
                TokenString((0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect())
            })
            .collect();
        let long: Vec<&TokenString> = language.iter().filter(|w| w.len() > 6).collect();
        for _ in 0..long.len().min(100) {
            samples.push(long[rng.gen_range(0..long.len())].clone());
        }
        for w in samples {
            check(r.recognize(&w).unwrap() == language.contains(&w), || format!("{name}: disagreement on \"{w}\""))?;
            sampled += 1;
        }
    }
    Ok(format!("0 disagreements over {exhaustive} exhaustive and {sampled} sampled strings"))
}

fn median_time(r: &Recognizer, w: &TokenString, runs: usize) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let start = Instant::now();
            assert!(r.recognize(w).unwrap());
            start.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

fn criterion_7() -> Outcome {
    const MAX_RATIO: f64 = 9.0;
    let r = Recognizer::for_grammar(&fixture("G0")).unwrap();
    let a = Symbol::terminal("a");
    median_time(&r, &TokenString(vec![a.clone(); 64]), 3);
    let times: Vec<(usize, Duration)> = [64, 128, 256, 512]
        .into_iter()
        .map(|n| (n, median_time(&r, &TokenString(vec![a.clone(); n]), 5)))
        .collect();
    let ratios: Vec<f64> = times.windows(2).map(|p| p[1].1.as_secs_f64() / p[0].1.as_secs_f64()).collect();
    let shown: Vec<String> = times.iter().map(|(n, t)| format!("n={n}: {:.2} ms", t.as_secs_f64() * 1e3)).collect();
    let detail = format!("{}; ratios {:.2}/{:.2}/{:.2}", shown.join(", "), ratios[0], ratios[1], ratios[2]);
    check(ratios[1] <= MAX_RATIO && ratios[2] <= MAX_RATIO, || format!("ratio above {MAX_RATIO}: {detail}"))?;
    Ok(detail)
}

fn criterion_8() -> Outcome {
    const DEPTH: usize = 5;
    let cfgs = cfg_fixtures();
    let mut checked = 0;
    for (name, c) in &cfgs {
        let want = cfg_derivation_trees(c, DEPTH);
        for (sname, s) in [("leftmost", ExpansionStrategy::Leftmost), ("rightmost", ExpansionStrategy::Rightmost)] {
            for lexicalized in [false, true] {
                let g = match cfg_to_regular_tag(c, &s, lexicalized) {
                    Ok(g) => g,
                    Err(regtag::Error::NotLexicalizable(_)) if lexicalized && name == "optional" => continue,
                    Err(e) => return Err(format!("{name}/{sname}: {e}")),
                };
                let tag = format!("{name}/{sname}/{}", if lexicalized { "lex" } else { "plain" });
                check(check_regular_form(&g).unwrap().is_regular, || format!("{tag}: not in regular form"))?;
                if lexicalized {
                    check(g.initial.iter().chain(&g.auxiliary).all(|t| t.tree.count_anchors() == 1), || {
                        format!("{tag}: elementary tree without a single anchor")
                    })?;
                }
                let budget = DerivationBudget { max_steps: 200_000_000, ..DerivationBudget::nodes(usize::MAX).with_depth(DEPTH) };
                let e = enumerate_derived(&g, budget, true).map_err(|e| format!("{tag}: {e}"))?;
                check(e.complete, || format!("{tag}: enumeration to depth {DEPTH} hit the step budget"))?;
                let got = e.trees;
                check(got == want, || format!("{tag}: {} TAG vs {} CFG trees to depth {DEPTH}", got.len(), want.len()))?;
                if lexicalized {
                    checked += 1;
                }
            }
        }
    }
    let gcfg1 = &cfgs.iter().find(|(n, _)| n == "GCFG1").unwrap().1;
    check(cfg_derivation_trees(gcfg1, 4).len() == 3, || "GCFG1 should have 3 trees to depth 4".into())?;
    check(cfgs.len() >= 10 && checked >= 20, || format!("corpus too small: {checked} lexicalized runs"))?;
    Ok(format!("{} CFGs, {checked} lexicalized runs, depth {DEPTH}", cfgs.len()))
}

/// Independent simulation of the three-move stack automaton. Frames are
/// (tree name, index); every interleaving of pop-in-place moves is tried.
fn simulate(sg: &SpineGraph, walk: &[usize]) -> Option<Vec<String>> {
    fn has_edge(sg: &SpineGraph, v: &Symbol, aux: &str, j: usize) -> bool {
        sg.edges.iter().any(|e| &e.source == v && e.label.aux_name == aux && e.label.index == j)
    }
    fn go(sg: &SpineGraph, walk: &[usize], at: &Symbol, stack: Vec<(String, usize)>, trace: &mut Vec<String>) -> bool {
        if let Some((aux, j)) = stack.last() {
            if !has_edge(sg, at, aux, j + 1) {
                let mut popped = stack.clone();
                popped.pop();
                trace.push(format!("pop@{at}"));
                if go(sg, walk, at, popped, trace) {
                    return true;
                }
                trace.pop();
            }
        }
        let Some((&e, rest)) = walk.split_first() else {
            return stack.is_empty();
        };
        let edge = &sg.edges[e];
        let (name, j) = (&edge.label.aux_name, edge.label.index);
        let mut next = stack.clone();
        let mv = if j == 0 {
            next.push((name.clone(), 0));
            "push"
        } else if stack.last() == Some(&(name.clone(), j - 1)) {
            next.last_mut().unwrap().1 = j;
            "advance"
        } else {
            return false;
        };
        trace.push(format!("{mv} {}:{j}", name));
        if go(sg, rest, &edge.target, next, trace) {
            return true;
        }
        trace.pop();
        false
    }
    let first = sg.edges[*walk.first()?].source.clone();
    let mut trace = Vec::new();
    go(sg, walk, &first, Vec::new(), &mut trace).then_some(trace)
}

/// Searches all walks from the cycle's start vertex up to the length bound
/// for an accepted walk whose segments concatenate to the cycle tree.
fn exhaustive_verdict(sg: &SpineGraph, w: &CycleWitness) -> bool {
    let bound = wfc_search_bound(&w.cycle_tree);
    let mut out_edges: HashMap<&Symbol, Vec<usize>> = HashMap::new();
    for (i, e) in sg.edges.iter().enumerate() {
        out_edges.entry(&e.source).or_default().push(i);
    }
    let mut walks: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(walk) = walks.pop() {
        if !walk.is_empty() {
            let segs: Vec<Tree> = walk.iter().map(|&e| sg.edges[e].label.segment.clone()).collect();
            if splice_segments(&segs).as_ref() == Some(&w.cycle_tree) && simulate(sg, &walk).is_some() {
                return true;
            }
        }
        if walk.len() < bound {
            let at = walk.last().map_or(&w.vertex_sequence[0], |&e| &sg.edges[e].target);
            for &e in out_edges.get(at).into_iter().flatten() {
                let mut next = walk.clone();
                next.push(e);
                walks.push(next);
            }
        }
    }
    false
}

fn criterion_9() -> Outcome {
    let g1 = fixture("G1");
    let sg = build_spine_graph(&g1).unwrap();
    let c = check_regular_form(&g1).unwrap();
    check(c.witnesses.len() == 8, || format!("{} simple cycles, expected 8", c.witnesses.len()))?;
    let mut equivalent = 0;
    for w in &c.witnesses {
        let traced = trace_wfc(&sg, &w.edges).unwrap();
        let sim = simulate(&sg, &w.edges);
        check(traced == sim.is_some(), || format!("trace disagrees on {}", w.report_line()))?;
        let verdict = exhaustive_verdict(&sg, w);
        check(w.wfc_equivalent == Some(verdict), || format!("verdict disagrees on {}", w.report_line()))?;
        equivalent += verdict as usize;
        println!("    {} | trace: {}", w.report_line(), sim.map_or("rejected".into(), |t| t.join(", ")));
    }
    Ok(format!("8 cycles traced, {equivalent} wfc-equivalent"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "regular-form decision on G0/G1", Duration::from_secs(1), criterion_1),
        (2, "regular = unrestricted derivation on regular-form grammars", Duration::from_secs(30), criterion_2),
        (3, "improper-tree elimination preserves projected trees", Duration::from_secs(30), criterion_3),
        (4, "extension of G1", Duration::from_secs(5), criterion_4),
        (5, "compiled automaton accepts exactly the derived trees", Duration::from_secs(60), criterion_5),
        (6, "recognizer agrees with brute-force membership", Duration::from_secs(60), criterion_6),
        (7, "cubic scaling, t(2n)/t(n) <= 9.0", Duration::from_secs(120), criterion_7),
        (8, "lexicalization corpus", Duration::from_secs(60), criterion_8),
        (9, "wfc automaton on the G1 cycles", Duration::from_secs(1), criterion_9),
    ];
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > limit => Err(format!("{d}; took {:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs())),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{status} criterion {id}: {title} [{:.2}s] {detail}", elapsed.as_secs_f64());
        failed += outcome.is_err() as usize;
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
