//! The `regtag` command line, as a library function for testability.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::automaton::{compile_with, enumerate_accepted, CompileOptions};
use crate::error::Error;
use crate::grammar::TagGrammar;
use crate::lexicalizer::{cfg_to_regular_tag, close_substitution, ExpansionStrategy};
use crate::oracle::{enumerate_derived, enumerate_regular, language_up_to, DerivationBudget};
use crate::recognizer::{derive_yield_cfg, Recognizer};
use crate::spine::{build_spine_graph, check_regular_form, extend_to_regular_form, to_dot, SpineGraph};
use crate::text::{parse_cfg_file, parse_grammar_file, render_automaton, render_grammar, render_trees};
use crate::tree::{canonical_order, TokenString};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 success or accepted, 1 negative answer or rejected, 2 usage or
    /// input error, 3 budget or state cap exceeded.
    pub exit_code: i32,
    pub report: String,
}

impl CommandResult {
    fn new(exit_code: i32, report: impl Into<String>) -> Self {
        CommandResult { exit_code, report: report.into() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "regtag", version, about = "Regular-form tree adjoining grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a grammar is in regular form and list the simple cycles.
    Check { grammar: PathBuf },
    /// Add the trees needed to put a grammar in regular form.
    Extend {
        grammar: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Translate a CFG into a regular-form TAG.
    Lexicalize {
        cfg: PathBuf,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: Strategy,
        #[arg(long)]
        lexicalized: bool,
        #[arg(long)]
        close_substitution: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recognize a whitespace-separated token string.
    Parse {
        grammar: PathBuf,
        input: String,
        #[arg(long)]
        chart: bool,
        #[arg(long, default_value_t = 100_000)]
        state_cap: usize,
    },
    /// List derivable trees up to a node budget.
    Enumerate {
        grammar: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_nodes: usize,
        #[arg(long, default_value_t = DerivationBudget::DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Also drop trees with more node levels than this.
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        regular_only: bool,
        #[arg(long)]
        completed_only: bool,
    },
    /// Compile a regular-form grammar into a tree automaton.
    Compile {
        grammar: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        state_cap: usize,
    },
    /// Show the spine graph.
    Graph {
        grammar: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Cross-check the decision, the automaton and the recognizer against
    /// brute-force enumeration.
    Oracle {
        grammar: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_nodes: usize,
        #[arg(long, default_value_t = DerivationBudget::DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Longest string compared between recognizer and exact language.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 100_000)]
        state_cap: usize,
    },
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::StateExplosion { .. } | Error::ExtensionDiverged(_) | Error::NonterminationGuard(_) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn fail(e: Error) -> CommandResult {
    CommandResult::new(exit_for(&e), format!("error: {e}\n"))
}

fn read(path: &Path) -> Result<String, CommandResult> {
    fs::read_to_string(path)
        .map_err(|e| CommandResult::new(EXIT_INPUT, format!("error: cannot read {}: {e}\n", path.display())))
}

fn load_grammar(path: &Path) -> Result<TagGrammar, CommandResult> {
    let text = read(path)?;
    parse_grammar_file(&text).map_err(|e| CommandResult::new(EXIT_INPUT, format!("{}:{e}\n", path.display())))
}

/// Writes `text` to `output` or appends it to the report.
fn emit(report: &mut String, output: Option<&Path>, text: &str) -> Result<(), CommandResult> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CommandResult::new(EXIT_INPUT, format!("error: cannot write {}: {e}\n", path.display()))),
        None => {
            report.push_str(text);
            Ok(())
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return CommandResult::new(code, e.render().to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(r) | Err(r) => r,
    }
}

const NEGATIVE_NOTE: &str = "note: this decides regular form only; a grammar outside regular form may still \
generate a recognizable tree set.\n";

fn dispatch(command: Command) -> Result<CommandResult, CommandResult> {
    match command {
        Command::Check { grammar } => {
            let g = load_grammar(&grammar)?;
            let check = check_regular_form(&g).map_err(fail)?;
            let mut report = String::new();
            writeln!(report, "regular form: {}", if check.is_regular { "yes" } else { "no" }).unwrap();
            for w in &check.witnesses {
                writeln!(report, "{}", w.report_line()).unwrap();
            }
            if check.is_regular {
                Ok(CommandResult::new(EXIT_OK, report))
            } else {
                report.push_str(NEGATIVE_NOTE);
                Ok(CommandResult::new(EXIT_NEGATIVE, report))
            }
        }
        Command::Extend { grammar, output } => {
            let g = load_grammar(&grammar)?;
            let (ext, added) = extend_to_regular_form(&g).map_err(fail)?;
            let mut report = String::new();
            for t in &added {
                writeln!(report, "# added {t}").unwrap();
            }
            emit(&mut report, output.as_deref(), &render_grammar(&ext))?;
            Ok(CommandResult::new(EXIT_OK, report))
        }
        Command::Lexicalize { cfg, strategy, lexicalized, close_substitution: close, output } => {
            let text = read(&cfg)?;
            let c = parse_cfg_file(&text).map_err(|e| CommandResult::new(EXIT_INPUT, format!("{}:{e}\n", cfg.display())))?;
            let s = match strategy {
                Strategy::Leftmost => ExpansionStrategy::Leftmost,
                Strategy::Rightmost => ExpansionStrategy::Rightmost,
            };
            let mut g = cfg_to_regular_tag(&c, &s, lexicalized).map_err(fail)?;
            if close {
                g = close_substitution(&g).map_err(fail)?;
            }
            let mut report = String::new();
            emit(&mut report, output.as_deref(), &render_grammar(&g))?;
            Ok(CommandResult::new(EXIT_OK, report))
        }
        Command::Parse { grammar, input, chart, state_cap } => {
            let g = load_grammar(&grammar)?;
            let opts = CompileOptions { state_cap, ..CompileOptions::default() };
            let (a, _) = compile_with(&g, opts).map_err(fail)?;
            let r = Recognizer::new(derive_yield_cfg(&a), g.terminals.clone());
            let w = TokenString::parse(&input);
            let accepted = r.recognize(&w).map_err(fail)?;
            let mut report = String::new();
            if chart {
                for (i, j, names) in r.chart(&w).map_err(fail)? {
                    writeln!(report, "[{i},{j}] {}", names.join(" ")).unwrap();
                }
            }
            writeln!(report, "{}", if accepted { "accepted" } else { "rejected" }).unwrap();
            Ok(CommandResult::new(if accepted { EXIT_OK } else { EXIT_NEGATIVE }, report))
        }
        Command::Enumerate { grammar, max_nodes, max_steps, max_depth, regular_only, completed_only } => {
            let g = load_grammar(&grammar)?;
            let b = DerivationBudget { max_nodes, max_steps, max_depth };
            let out = if regular_only {
                enumerate_regular(&g, b, completed_only)
            } else {
                enumerate_derived(&g, b, completed_only)
            }
            .map_err(fail)?;
            let mut report = render_trees(&canonical_order(out.trees));
            if out.complete {
                Ok(CommandResult::new(EXIT_OK, report))
            } else {
                writeln!(report, "# incomplete: step budget of {max_steps} exhausted").unwrap();
                Ok(CommandResult::new(EXIT_BUDGET, report))
            }
        }
        Command::Compile { grammar, output, state_cap } => {
            let g = load_grammar(&grammar)?;
            let opts = CompileOptions { state_cap, ..CompileOptions::default() };
            let (a, stats) = compile_with(&g, opts).map_err(fail)?;
            let mut report = String::new();
            if output.is_some() {
                writeln!(report, "# {} states, {} transitions", stats.states, stats.transitions).unwrap();
            }
            emit(&mut report, output.as_deref(), &render_automaton(&a))?;
            Ok(CommandResult::new(EXIT_OK, report))
        }
        Command::Graph { grammar, dot } => {
            let g = load_grammar(&grammar)?;
            let sg = build_spine_graph(&g).map_err(fail)?;
            let report = if dot { to_dot(&sg) } else { graph_listing(&sg) };
            Ok(CommandResult::new(EXIT_OK, report))
        }
        Command::Oracle { grammar, max_nodes, max_steps, max_len, state_cap } => {
            let g = load_grammar(&grammar)?;
            oracle_report(&g, DerivationBudget { max_nodes, max_steps, max_depth: None }, max_len, state_cap)
        }
    }
}

fn graph_listing(sg: &SpineGraph) -> String {
    let mut out = String::new();
    let vertices: Vec<&str> = sg.vertices.iter().map(|v| v.name()).collect();
    writeln!(out, "vertices: {}", vertices.join(" ")).unwrap();
    for (i, e) in sg.edges.iter().enumerate() {
        writeln!(
            out,
            "{} {} -> {} {}:{} {}",
            SpineGraph::edge_name(i),
            e.source,
            e.target,
            e.label.aux_name,
            e.label.index,
            e.label.segment
        )
        .unwrap();
    }
    out
}

fn all_strings(alphabet: &[crate::tree::Symbol], max_len: usize) -> Vec<TokenString> {
    let mut out = vec![TokenString::default()];
    let mut frontier = vec![TokenString::default()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for a in alphabet {
                let mut v = w.0.clone();
                v.push(a.clone());
                next.push(TokenString(v));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn oracle_report(g: &TagGrammar, b: DerivationBudget, max_len: usize, state_cap: usize) -> Result<CommandResult, CommandResult> {
    let mut report = String::new();
    let mut ok = true;
    let mut partial = false;

    let all = enumerate_derived(g, b, false).map_err(fail)?;
    let reg = enumerate_regular(g, b, false).map_err(fail)?;
    partial |= !all.complete || !reg.complete;
    let same = all.trees == reg.trees;
    writeln!(
        report,
        "derived vs regular-only at {} nodes: {} vs {} trees, {}",
        b.max_nodes,
        all.trees.len(),
        reg.trees.len(),
        if same { "equal" } else { "different" }
    )
    .unwrap();

    let check = check_regular_form(g).map_err(fail)?;
    writeln!(report, "regular form: {}", if check.is_regular { "yes" } else { "no" }).unwrap();
    if check.is_regular && !same && !partial {
        ok = false;
        writeln!(report, "MISMATCH: grammar is in regular form but the tree sets differ").unwrap();
    }

    if check.is_regular {
        let (a, _) =
            compile_with(g, CompileOptions { state_cap, ..CompileOptions::default() }).map_err(fail)?;
        let accepted: std::collections::BTreeSet<_> = enumerate_accepted(&a, b.max_nodes).into_iter().collect();
        let completed: std::collections::BTreeSet<_> =
            all.trees.iter().filter(|t| crate::oracle::is_completed(g, t)).cloned().collect();
        let agree = accepted == completed;
        ok &= agree || partial;
        writeln!(
            report,
            "automaton vs enumeration at {} nodes: {} vs {} trees, {}",
            b.max_nodes,
            accepted.len(),
            completed.len(),
            if agree { "equal" } else { "different" }
        )
        .unwrap();

        let r = Recognizer::new(derive_yield_cfg(&a), g.terminals.clone());
        let language = language_up_to(g, max_len).map_err(fail)?;
        let alphabet: Vec<_> = g.terminals.iter().cloned().collect();
        let mut disagreements = 0;
        let strings = all_strings(&alphabet, max_len);
        for w in &strings {
            if r.recognize(w).map_err(fail)? != language.contains(w) {
                disagreements += 1;
                writeln!(report, "MISMATCH on \"{w}\"").unwrap();
            }
        }
        ok &= disagreements == 0;
        writeln!(
            report,
            "recognizer vs exact language up to length {max_len}: {} strings, {disagreements} disagreements",
            strings.len()
        )
        .unwrap();
    } else {
        report.push_str(NEGATIVE_NOTE);
    }

    let code = if !ok {
        EXIT_NEGATIVE
    } else if partial {
        writeln!(report, "# incomplete: step budget of {} exhausted", b.max_steps).unwrap();
        EXIT_BUDGET
    } else {
        EXIT_OK
    };
    Ok(CommandResult::new(code, report))
}
