//! String recognition for regular-form TAGs: the compiled automaton's yield
//! language as a binarized CFG, parsed with CKY.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{compile_regular_tag, TreeAutomaton};
use crate::error::{Error, Result};
use crate::grammar::TagGrammar;
use crate::tree::{Symbol, TokenString};

/// Context-free grammar over automaton states (plus fresh binarization
/// states). Right-hand sides have at most two symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YieldGrammar {
    pub names: Vec<String>,
    pub starts: BTreeSet<usize>,
    pub terminal_rules: BTreeSet<(usize, Symbol)>,
    pub epsilon_rules: BTreeSet<usize>,
    pub unary_rules: BTreeSet<(usize, usize)>,
    pub binary_rules: BTreeSet<(usize, usize, usize)>,
}

impl YieldGrammar {
    pub fn num_symbols(&self) -> usize {
        self.names.len()
    }

    /// Productions as text, one per line, for inspection.
    pub fn productions(&self) -> Vec<String> {
        let n = &self.names;
        let mut out = Vec::new();
        out.extend(self.terminal_rules.iter().map(|(a, t)| format!("{} -> {}", n[*a], t)));
        out.extend(self.epsilon_rules.iter().map(|a| format!("{} -> <eps>", n[*a])));
        out.extend(self.unary_rules.iter().map(|(a, b)| format!("{} -> {}", n[*a], n[*b])));
        out.extend(self.binary_rules.iter().map(|(a, b, c)| format!("{} -> {} {}", n[*a], n[*b], n[*c])));
        out
    }
}

/// The CFG whose language is the set of yields of the trees `a` accepts.
pub fn derive_yield_cfg(a: &TreeAutomaton) -> YieldGrammar {
    let mut yg = YieldGrammar { names: a.state_names.clone(), ..YieldGrammar::default() };
    yg.starts = a.finals.iter().map(|q| q.0).collect();
    let mut fresh: HashMap<Vec<usize>, usize> = HashMap::new();
    for ((sym, children), targets) in &a.transitions {
        let kids: Vec<usize> = children.iter().map(|q| q.0).collect();
        for q in targets.iter().map(|q| q.0) {
            match kids.len() {
                0 if sym.is_terminal() => {
                    yg.terminal_rules.insert((q, sym.clone()));
                }
                0 => {
                    yg.epsilon_rules.insert(q);
                }
                1 => {
                    yg.unary_rules.insert((q, kids[0]));
                }
                n => {
                    let left = prefix_symbol(&mut yg, &mut fresh, &kids[..n - 1]);
                    yg.binary_rules.insert((q, left, kids[n - 1]));
                }
            }
        }
    }
    yg
}

/// Symbol deriving exactly the concatenation of `seq`, nested to the left.
fn prefix_symbol(yg: &mut YieldGrammar, fresh: &mut HashMap<Vec<usize>, usize>, seq: &[usize]) -> usize {
    if seq.len() == 1 {
        return seq[0];
    }
    if let Some(&x) = fresh.get(seq) {
        return x;
    }
    let left = prefix_symbol(yg, fresh, &seq[..seq.len() - 1]);
    let x = yg.names.len();
    let name = seq.iter().map(|&s| yg.names[s].as_str()).collect::<Vec<_>>().join("+");
    yg.names.push(format!("[{name}]"));
    yg.binary_rules.insert((x, left, seq[seq.len() - 1]));
    fresh.insert(seq.to_vec(), x);
    x
}

type Bits = Vec<u64>;

fn bit(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(bits: &mut Bits, i: usize) -> bool {
    let was = bit(bits, i);
    bits[i / 64] |= 1 << (i % 64);
    !was
}

fn ones(bits: &Bits) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
    })
}

/// CKY recognizer with nullable and unary-chain preprocessing done once.
#[derive(Clone, Debug)]
pub struct Recognizer {
    grammar: YieldGrammar,
    terminals: BTreeSet<Symbol>,
    nullable: Vec<bool>,
    /// `up[b]` = every `a` with `a =>* b` through unary rules, `b` included.
    up: Vec<Vec<usize>>,
    /// Binary rules `(a, b, c)` for `a -> b c`, sorted.
    binary: Vec<(usize, usize, usize)>,
    by_terminal: HashMap<Symbol, Vec<usize>>,
    words: usize,
}

pub type Chart = Vec<(usize, usize, Vec<String>)>;

impl Recognizer {
    pub fn new(grammar: YieldGrammar, terminals: BTreeSet<Symbol>) -> Self {
        let n = grammar.num_symbols();
        let mut nullable = vec![false; n];
        for &a in &grammar.epsilon_rules {
            nullable[a] = true;
        }
        loop {
            let mut changed = false;
            for &(a, b) in &grammar.unary_rules {
                if nullable[b] && !nullable[a] {
                    nullable[a] = true;
                    changed = true;
                }
            }
            for &(a, b, c) in &grammar.binary_rules {
                if nullable[b] && nullable[c] && !nullable[a] {
                    nullable[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut unary: Vec<(usize, usize)> = grammar.unary_rules.iter().copied().collect();
        for &(a, b, c) in &grammar.binary_rules {
            if nullable[b] {
                unary.push((a, c));
            }
            if nullable[c] {
                unary.push((a, b));
            }
        }
        let mut parents = vec![Vec::new(); n];
        for &(a, b) in &unary {
            parents[b].push(a);
        }
        let up = (0..n)
            .map(|b| {
                let mut seen = vec![false; n];
                let mut stack = vec![b];
                seen[b] = true;
                while let Some(x) = stack.pop() {
                    for &a in &parents[x] {
                        if !seen[a] {
                            seen[a] = true;
                            stack.push(a);
                        }
                    }
                }
                (0..n).filter(|&a| seen[a]).collect()
            })
            .collect();

        let binary: Vec<(usize, usize, usize)> = grammar.binary_rules.iter().copied().collect();
        let mut by_terminal: HashMap<Symbol, Vec<usize>> = HashMap::new();
        for (a, t) in &grammar.terminal_rules {
            by_terminal.entry(t.clone()).or_default().push(*a);
        }
        Recognizer { words: n.div_ceil(64).max(1), grammar, terminals, nullable, up, binary, by_terminal }
    }

    /// Compiles `g` and prepares the recognizer.
    pub fn for_grammar(g: &TagGrammar) -> Result<Self> {
        let a = compile_regular_tag(g)?;
        Ok(Self::new(derive_yield_cfg(&a), g.terminals.clone()))
    }

    pub fn grammar(&self) -> &YieldGrammar {
        &self.grammar
    }

    fn check_tokens(&self, w: &TokenString) -> Result<()> {
        match w.0.iter().find(|t| !self.terminals.contains(*t)) {
            Some(t) => Err(Error::UnknownToken(t.name().to_string())),
            None => Ok(()),
        }
    }

    fn close(&self, cell: &mut Bits, found: &[usize]) {
        for &b in found {
            for &a in &self.up[b] {
                set_bit(cell, a);
            }
        }
    }

    /// Fills the chart; `cells[i * (n + 1) + j]` covers tokens `i..j`.
    ///
    /// Besides the cells, every symbol keeps two position sets per chart
    /// boundary: `right_ends(i, b)` holds the `k` with `b` in cell `i..k`,
    /// `left_ends(j, c)` the `k` with `c` in cell `k..j`. A binary rule
    /// `a -> b c` covers `i..j` iff those two sets intersect.
    fn fill(&self, w: &TokenString) -> Vec<Bits> {
        let n = w.len();
        let width = n + 1;
        let syms = self.grammar.num_symbols();
        let kw = width.div_ceil(64);
        let mut cells = vec![vec![0u64; self.words]; width * width];
        let mut right_ends = vec![0u64; width * syms * kw];
        let mut left_ends = vec![0u64; width * syms * kw];
        let row = |at: usize, sym: usize| (at * syms + sym) * kw;
        let record = |cell: &Bits, i: usize, j: usize, right_ends: &mut [u64], left_ends: &mut [u64]| {
            for s in ones(cell) {
                right_ends[row(i, s) + j / 64] |= 1 << (j % 64);
                left_ends[row(j, s) + i / 64] |= 1 << (i % 64);
            }
        };
        for (i, tok) in w.0.iter().enumerate() {
            let found = self.by_terminal.get(tok).cloned().unwrap_or_default();
            let mut cell = std::mem::take(&mut cells[i * width + i + 1]);
            self.close(&mut cell, &found);
            record(&cell, i, i + 1, &mut right_ends, &mut left_ends);
            cells[i * width + i + 1] = cell;
        }
        let mut found = Vec::new();
        let mut mark = vec![0u64; self.words];
        for span in 2..=n {
            for i in 0..=n - span {
                let j = i + span;
                let (lo, hi) = ((i + 1) / 64, (j - 1) / 64);
                found.clear();
                mark.iter_mut().for_each(|m| *m = 0);
                for &(a, b, c) in &self.binary {
                    if bit(&mark, a) {
                        continue;
                    }
                    let x = &right_ends[row(i, b) + lo..=row(i, b) + hi];
                    let y = &left_ends[row(j, c) + lo..=row(j, c) + hi];
                    if x.iter().zip(y).any(|(p, q)| p & q != 0) {
                        set_bit(&mut mark, a);
                        found.push(a);
                    }
                }
                let mut cell = std::mem::take(&mut cells[i * width + j]);
                self.close(&mut cell, &found);
                record(&cell, i, j, &mut right_ends, &mut left_ends);
                cells[i * width + j] = cell;
            }
        }
        cells
    }

    pub fn recognize(&self, w: &TokenString) -> Result<bool> {
        self.check_tokens(w)?;
        if w.is_empty() {
            return Ok(self.grammar.starts.iter().any(|&s| self.nullable[s]));
        }
        let n = w.len();
        let cells = self.fill(w);
        let top = &cells[n];
        Ok(self.grammar.starts.iter().any(|&s| bit(top, s)))
    }

    /// Non-empty chart cells `(i, j, symbols)` in order of span, then start.
    pub fn chart(&self, w: &TokenString) -> Result<Chart> {
        self.check_tokens(w)?;
        let n = w.len();
        let cells = self.fill(w);
        let mut out = Vec::new();
        for span in 1..=n {
            for i in 0..=n - span {
                let j = i + span;
                let names: Vec<String> =
                    ones(&cells[i * (n + 1) + j]).map(|s| self.grammar.names[s].clone()).collect();
                if !names.is_empty() {
                    out.push((i, j, names));
                }
            }
        }
        Ok(out)
    }
}

/// Whether `w` is in the string language of the regular-form TAG `g`.
pub fn recognize(g: &TagGrammar, w: &TokenString) -> Result<bool> {
    if let Some(t) = w.0.iter().find(|t| !g.terminals.contains(*t)) {
        return Err(Error::UnknownToken(t.name().to_string()));
    }
    Recognizer::for_grammar(g)?.recognize(w)
}
