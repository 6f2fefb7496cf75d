//! Context-free grammars and their translation into tree substitution
//! grammars and regular-form TAGs through the left-corner derivation graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::cycles;
use crate::error::{Error, Result};
use crate::grammar::{ensure_valid, NamedTree, TagGrammar};
use crate::spine::check_regular_form;
use crate::tree::{NodeAddress, Symbol, Tree};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: Symbol,
    /// Empty for an epsilon production.
    pub rhs: Vec<Symbol>,
}

impl Production {
    pub fn new(lhs: Symbol, rhs: Vec<Symbol>) -> Self {
        Production { lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    pub terminals: BTreeSet<Symbol>,
    pub nonterminals: BTreeSet<Symbol>,
    pub start: Symbol,
    pub productions: Vec<Production>,
}

impl Cfg {
    /// Alphabets are read off the productions.
    pub fn new(start: Symbol, productions: Vec<Production>) -> Self {
        let mut terminals = BTreeSet::new();
        let mut nonterminals: BTreeSet<Symbol> = [start.clone()].into();
        for p in &productions {
            nonterminals.insert(p.lhs.clone());
            for s in &p.rhs {
                if s.is_nonterminal() {
                    nonterminals.insert(s.clone());
                } else if s.is_terminal() {
                    terminals.insert(s.clone());
                }
            }
        }
        Cfg { terminals, nonterminals, start, productions }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_nonterminal() {
            return Err(Error::InvalidCfg(format!("start symbol {} is not a non-terminal", self.start)));
        }
        for p in &self.productions {
            if !p.lhs.is_nonterminal() {
                return Err(Error::InvalidCfg(format!("left-hand side of `{p}` is not a non-terminal")));
            }
            if p.rhs.iter().any(Symbol::is_epsilon) {
                return Err(Error::InvalidCfg(format!("`{p}` mentions the empty string inside a right-hand side")));
            }
            for s in &p.rhs {
                let known = if s.is_nonterminal() { &self.nonterminals } else { &self.terminals };
                if !known.contains(s) {
                    return Err(Error::InvalidCfg(format!("symbol {s} of `{p}` is not in the alphabet")));
                }
            }
        }
        Ok(())
    }
}

/// Picks the right-hand-side position a production is expanded through.
#[derive(Clone, Default)]
pub enum ExpansionStrategy {
    #[default]
    Leftmost,
    Rightmost,
    Custom(Arc<dyn Fn(&Production) -> usize + Send + Sync>),
}

impl ExpansionStrategy {
    pub fn select(&self, p: &Production) -> Result<usize> {
        let n = p.rhs.len();
        let i = match self {
            ExpansionStrategy::Leftmost => 0,
            ExpansionStrategy::Rightmost => n.saturating_sub(1),
            ExpansionStrategy::Custom(f) => f(p),
        };
        if i < n {
            Ok(i)
        } else {
            Err(Error::InvalidCfg(format!("strategy selected position {i} of `{p}`")))
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "leftmost" => Some(ExpansionStrategy::Leftmost),
            "rightmost" => Some(ExpansionStrategy::Rightmost),
            _ => None,
        }
    }
}

impl fmt::Debug for ExpansionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionStrategy::Leftmost => f.write_str("Leftmost"),
            ExpansionStrategy::Rightmost => f.write_str("Rightmost"),
            ExpansionStrategy::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// Depth-one tree of a production; epsilon productions get an epsilon leaf.
fn production_tree(p: &Production) -> Tree {
    let children = if p.rhs.is_empty() {
        vec![Tree::leaf(Symbol::epsilon())]
    } else {
        p.rhs.iter().cloned().map(Tree::leaf).collect()
    };
    Tree::node(p.lhs.clone(), children)
}

/// One initial tree per production, no auxiliary trees.
pub fn cfg_to_tsg(c: &Cfg) -> Result<TagGrammar> {
    c.validate()?;
    let mut g = TagGrammar::from_trees(c.start.clone(), c.productions.iter().map(production_tree).collect(), vec![]);
    g.terminals.extend(c.terminals.iter().cloned());
    g.nonterminals.extend(c.nonterminals.iter().cloned());
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcgEdge {
    pub from: Symbol,
    pub to: Symbol,
    /// Index into the grammar's productions.
    pub production: usize,
    /// Selected right-hand-side position; `None` for an epsilon production,
    /// whose edge leads to the epsilon sink.
    pub position: Option<usize>,
}

/// Left-corner derivation graph: an edge `X -> Y` for every production
/// `X -> .. Y ..` whose selected child is `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg {
    /// Non-terminals, then terminals, then the epsilon sink if used.
    pub vertices: Vec<Symbol>,
    pub edges: Vec<LcgEdge>,
    pub productions: Vec<Production>,
}

impl Lcg {
    fn index(&self) -> HashMap<&Symbol, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let index = self.index();
        self.edges.iter().map(|e| (index[&e.from], index[&e.to])).collect()
    }
}

pub fn build_lcg(c: &Cfg, s: &ExpansionStrategy) -> Result<Lcg> {
    c.validate()?;
    let mut vertices: Vec<Symbol> = c.nonterminals.iter().chain(&c.terminals).cloned().collect();
    let mut edges = Vec::with_capacity(c.productions.len());
    for (i, p) in c.productions.iter().enumerate() {
        if p.rhs.is_empty() {
            edges.push(LcgEdge { from: p.lhs.clone(), to: Symbol::epsilon(), production: i, position: None });
        } else {
            let pos = s.select(p)?;
            edges.push(LcgEdge { from: p.lhs.clone(), to: p.rhs[pos].clone(), production: i, position: Some(pos) });
        }
    }
    if edges.iter().any(|e| e.position.is_none()) {
        vertices.push(Symbol::epsilon());
    }
    Ok(Lcg { vertices, edges, productions: c.productions.clone() })
}

/// One step of a stacked tree: a production node whose selected child is
/// still open.
#[derive(Clone, Debug)]
struct Shape {
    lhs: Symbol,
    children: Vec<Tree>,
    selected: Option<usize>,
}

fn shapes(l: &Lcg, edge: usize, fills: &HashMap<usize, (usize, Vec<Tree>)>) -> Vec<Shape> {
    let e = &l.edges[edge];
    let p = &l.productions[e.production];
    let base = Shape {
        lhs: p.lhs.clone(),
        children: p.rhs.iter().cloned().map(Tree::leaf).collect(),
        selected: e.position,
    };
    match fills.get(&e.production) {
        None => vec![base],
        Some((slot, trees)) => trees
            .iter()
            .map(|t| {
                let mut s = base.clone();
                s.children[*slot] = t.clone();
                s
            })
            .collect(),
    }
}

fn assemble(steps: &[&Shape], end: &Tree) -> Tree {
    let mut acc = end.clone();
    for s in steps.iter().rev() {
        acc = match s.selected {
            Some(i) => {
                let mut children = s.children.clone();
                children[i] = acc;
                Tree::node(s.lhs.clone(), children)
            }
            None => Tree::node(s.lhs.clone(), vec![Tree::leaf(Symbol::epsilon())]),
        };
    }
    acc
}

/// Every tree obtained by stacking the edges' productions, one per choice of
/// variant at each edge.
fn stack_all(l: &Lcg, edges: &[usize], end: &Tree, fills: &HashMap<usize, (usize, Vec<Tree>)>) -> Vec<Tree> {
    let options: Vec<Vec<Shape>> = edges.iter().map(|&e| shapes(l, e, fills)).collect();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(edges.len());
    fn go<'a>(options: &'a [Vec<Shape>], pick: &mut Vec<&'a Shape>, end: &Tree, out: &mut Vec<Tree>) {
        match options.split_first() {
            None => out.push(assemble(pick, end)),
            Some((first, rest)) => {
                for s in first {
                    pick.push(s);
                    go(rest, pick, end, out);
                    pick.pop();
                }
            }
        }
    }
    go(&options, &mut pick, end, &mut out);
    out
}

fn dedup(trees: Vec<Tree>) -> Vec<Tree> {
    let mut seen = HashSet::new();
    trees.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

/// Trees of the simple paths from a non-terminal to a terminal or the
/// epsilon sink, in order of start vertex.
pub fn lcg_initial_trees(l: &Lcg) -> Vec<Tree> {
    let pairs = l.pairs();
    let mut out = Vec::new();
    for v in (0..l.vertices.len()).filter(|&v| l.vertices[v].is_nonterminal()) {
        for path in cycles::simple_paths(l.vertices.len(), &pairs, v, |u| !l.vertices[u].is_nonterminal()) {
            let end = Tree::leaf(l.edges[*path.last().unwrap()].to.clone());
            out.extend(stack_all(l, &path, &end, &HashMap::new()));
        }
    }
    dedup(out)
}

/// Productions lying on some simple cycle whose tree has no terminal leaf,
/// each with the position of its leftmost unselected non-terminal.
fn productions_to_fill(l: &Lcg, cycles: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for cycle in cycles {
        let has_terminal = cycle.iter().any(|&e| l.productions[l.edges[e].production].rhs.iter().any(Symbol::is_terminal));
        if has_terminal {
            continue;
        }
        for &e in cycle {
            let edge = &l.edges[e];
            let p = &l.productions[edge.production];
            let slot = p.rhs.iter().enumerate().position(|(i, s)| Some(i) != edge.position && s.is_nonterminal());
            if let Some(slot) = slot {
                out.insert(edge.production, slot);
            }
        }
    }
    out
}

/// Trees of the simple cycles, one per rotation, with the returning start
/// vertex as foot.
///
/// With `lexicalize`, every production lying on a terminal-free cycle has its
/// leftmost unselected non-terminal replaced by each initial tree of that
/// label, in every auxiliary tree that uses it. Filling per production
/// rather than per tree keeps segments shared between rotations, which the
/// regular-form condition needs.
pub fn lcg_aux_trees(l: &Lcg, lexicalize: bool) -> Vec<Tree> {
    let pairs = l.pairs();
    let found = cycles::simple_cycles(l.vertices.len(), &pairs);
    let mut fills: HashMap<usize, (usize, Vec<Tree>)> = HashMap::new();
    if lexicalize {
        let initial = lcg_initial_trees(l);
        for (production, slot) in productions_to_fill(l, &found) {
            let label = &l.productions[production].rhs[slot];
            let trees: Vec<Tree> = initial.iter().filter(|t| &t.label == label).cloned().collect();
            fills.insert(production, (slot, trees));
        }
    }
    let mut out = Vec::new();
    for cycle in &found {
        let foot = Tree::foot(l.edges[cycle[0]].from.clone());
        out.extend(stack_all(l, cycle, &foot, &fills));
    }
    dedup(out)
}

/// Marks the shallowest, leftmost terminal leaf as anchor. Returns false if
/// there is none.
pub fn mark_anchor(t: &mut Tree) -> bool {
    let mut level: Vec<NodeAddress> = vec![NodeAddress::root()];
    while !level.is_empty() {
        for addr in &level {
            let node = t.get(addr).unwrap();
            if node.is_leaf() && node.label.is_terminal() {
                let anchored = Tree { anchor: true, ..node.clone() };
                *t = t.replace_at(addr, anchored).unwrap();
                return true;
            }
        }
        level = level
            .iter()
            .flat_map(|a| (0..t.get(a).unwrap().children.len()).map(move |i| a.child(i)))
            .collect();
    }
    false
}

/// Unit productions `X -> Y` forming a cycle, if any; reported as the
/// non-terminal that derives itself.
fn unit_cycle(c: &Cfg) -> Option<Symbol> {
    let mut next: BTreeMap<&Symbol, Vec<&Symbol>> = BTreeMap::new();
    for p in &c.productions {
        if let [y] = p.rhs.as_slice() {
            if y.is_nonterminal() {
                next.entry(&p.lhs).or_default().push(y);
            }
        }
    }
    for &x in next.keys() {
        let mut seen = HashSet::new();
        let mut stack = next[x].clone();
        while let Some(y) = stack.pop() {
            if y == x {
                return Some(x.clone());
            }
            if seen.insert(y) {
                stack.extend(next.get(y).into_iter().flatten().copied());
            }
        }
    }
    None
}

/// Translates `c` into a TAG in regular form whose trees are exactly the
/// derivation trees of `c`. With `lexicalized`, every elementary tree gets
/// one anchor.
pub fn cfg_to_regular_tag(c: &Cfg, s: &ExpansionStrategy, lexicalized: bool) -> Result<TagGrammar> {
    c.validate()?;
    if lexicalized {
        if let Some(p) = c.productions.iter().find(|p| p.rhs.is_empty()) {
            return Err(Error::NotLexicalizable(format!("epsilon production `{p}`")));
        }
        if let Some(x) = unit_cycle(c) {
            return Err(Error::NotLexicalizable(format!("unit productions cycle through {x}")));
        }
    }
    let l = build_lcg(c, s)?;
    let mut initial = lcg_initial_trees(&l);
    let mut auxiliary = lcg_aux_trees(&l, lexicalized);
    if lexicalized {
        for t in initial.iter_mut().chain(auxiliary.iter_mut()) {
            if !mark_anchor(t) {
                return Err(Error::NotLexicalizable(format!("no terminal available to anchor {t}")));
            }
        }
    }
    let mut g = TagGrammar::from_trees(c.start.clone(), initial, auxiliary);
    g.terminals.extend(c.terminals.iter().cloned());
    g.nonterminals.extend(c.nonterminals.iter().cloned());
    if !check_regular_form(&g)?.is_regular {
        return Err(Error::ConstructionNotRegular);
    }
    Ok(g)
}

/// Every substitution instance of `t` using `closed[label]` at each slot.
fn fill_slots(t: &Tree, closed: &BTreeMap<Symbol, Vec<Tree>>) -> Vec<Tree> {
    if t.is_substitution_node() {
        return closed.get(&t.label).cloned().unwrap_or_default();
    }
    let mut out = vec![Vec::with_capacity(t.children.len())];
    for c in &t.children {
        let options = fill_slots(c, closed);
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for o in &options {
                let mut v: Vec<Tree> = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(|children| Tree { children, ..t.clone() }).collect()
}

/// Substitutes initial trees at every substitution node until none is left.
/// Labels are closed in dependency order; a label whose initial trees
/// (transitively) contain a slot for itself has no finite closure.
pub fn close_substitution(g: &TagGrammar) -> Result<TagGrammar> {
    ensure_valid(g)?;
    let mut deps: BTreeMap<Symbol, BTreeSet<Symbol>> = BTreeMap::new();
    for n in &g.initial {
        let entry = deps.entry(n.tree.label.clone()).or_default();
        n.tree.walk(&mut NodeAddress::root(), &mut |_, node| {
            if node.is_substitution_node() {
                entry.insert(node.label.clone());
            }
        });
    }
    let mut closed: BTreeMap<Symbol, Vec<Tree>> = BTreeMap::new();
    let mut done: BTreeSet<Symbol> = BTreeSet::new();
    let mut initial = Vec::new();
    // names in closed order, per original tree
    let mut by_label: BTreeMap<Symbol, Vec<&NamedTree>> = BTreeMap::new();
    for n in &g.initial {
        by_label.entry(n.tree.label.clone()).or_default().push(n);
    }
    while done.len() < deps.len() {
        let ready: Vec<Symbol> = deps
            .iter()
            .filter(|(x, d)| !done.contains(*x) && d.iter().all(|y| done.contains(y) || !deps.contains_key(y)))
            .map(|(x, _)| x.clone())
            .collect();
        if ready.is_empty() {
            let stuck: Vec<String> = deps.keys().filter(|x| !done.contains(*x)).map(|x| x.to_string()).collect();
            return Err(Error::NonterminationGuard(format!("substitution cycle through {}", stuck.join(", "))));
        }
        for x in ready {
            let mut trees = Vec::new();
            for n in &by_label[&x] {
                for (i, t) in fill_slots(&n.tree, &closed).into_iter().enumerate() {
                    let name = if i == 0 { n.name.clone() } else { format!("{}_{}", n.name, i) };
                    initial.push(NamedTree::new(name, t.clone()));
                    trees.push(t);
                }
            }
            closed.insert(x.clone(), dedup(trees));
            done.insert(x);
        }
    }
    let mut auxiliary = Vec::new();
    for n in &g.auxiliary {
        for (i, t) in fill_slots(&n.tree, &closed).into_iter().enumerate() {
            let name = if i == 0 { n.name.clone() } else { format!("{}_{}", n.name, i) };
            auxiliary.push(NamedTree::new(name, t));
        }
    }
    let mut seen = HashSet::new();
    initial.retain(|n: &NamedTree| seen.insert(n.tree.clone()));
    let mut seen = HashSet::new();
    auxiliary.retain(|n: &NamedTree| seen.insert(n.tree.clone()));
    let mut out = TagGrammar::new(g.start.clone(), initial, auxiliary);
    out.terminals.extend(g.terminals.iter().cloned());
    out.nonterminals.extend(g.nonterminals.iter().cloned());
    Ok(out)
}

/// Derivation trees of `c` rooted in the start symbol with at most
/// `max_depth` levels of nodes.
pub fn cfg_derivation_trees(c: &Cfg, max_depth: usize) -> BTreeSet<Tree> {
    // level[x] = x-rooted derivation trees of depth <= d
    let mut level: BTreeMap<Symbol, BTreeSet<Tree>> = BTreeMap::new();
    for _ in 1..max_depth {
        let mut next: BTreeMap<Symbol, BTreeSet<Tree>> = BTreeMap::new();
        for p in &c.productions {
            let entry = next.entry(p.lhs.clone()).or_default();
            if p.rhs.is_empty() {
                entry.insert(production_tree(p));
                continue;
            }
            let mut partial: Vec<Vec<Tree>> = vec![Vec::new()];
            for s in &p.rhs {
                let options: Vec<Tree> = if s.is_nonterminal() {
                    level.get(s).map(|set| set.iter().cloned().collect()).unwrap_or_default()
                } else {
                    vec![Tree::leaf(s.clone())]
                };
                let mut grown = Vec::with_capacity(partial.len() * options.len());
                for prefix in &partial {
                    for o in &options {
                        let mut v = prefix.clone();
                        v.push(o.clone());
                        grown.push(v);
                    }
                }
                partial = grown;
            }
            entry.extend(partial.into_iter().map(|children| Tree::node(p.lhs.clone(), children)));
        }
        level = next;
    }
    level.remove(&c.start).unwrap_or_default()
}
