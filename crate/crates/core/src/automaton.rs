//! Bottom-up finite tree automata and compilation of regular-form TAGs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::grammar::{ensure_valid, TagGrammar, TreeKind};
use crate::spine::check_regular_form;
use crate::tree::{canonical_order, NodeAddress, Symbol, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

/// Nondeterministic bottom-up tree automaton. `transitions` maps a symbol
/// and a sequence of child states to the possible parent states; leaves use
/// the empty sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeAutomaton {
    pub alphabet: BTreeSet<Symbol>,
    pub state_names: Vec<String>,
    pub finals: BTreeSet<StateId>,
    pub transitions: BTreeMap<(Symbol, Vec<StateId>), BTreeSet<StateId>>,
}

impl TreeAutomaton {
    pub fn from_parts(
        alphabet: BTreeSet<Symbol>,
        state_names: Vec<String>,
        finals: BTreeSet<StateId>,
        transitions: BTreeMap<(Symbol, Vec<StateId>), BTreeSet<StateId>>,
    ) -> Self {
        TreeAutomaton { alphabet, state_names, finals, transitions }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.state_names.push(name.into());
        StateId(self.state_names.len() - 1)
    }

    pub fn add_transition(&mut self, sym: Symbol, children: Vec<StateId>, target: StateId) {
        self.alphabet.insert(sym.clone());
        self.transitions.entry((sym, children)).or_default().insert(target);
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.values().map(BTreeSet::len).sum()
    }

    /// Transitions on `sym`, in key order.
    pub fn transitions_on<'a>(
        &'a self,
        sym: &'a Symbol,
    ) -> impl Iterator<Item = (&'a Vec<StateId>, &'a BTreeSet<StateId>)> + 'a {
        self.transitions
            .range((sym.clone(), Vec::new())..)
            .take_while(move |((s, _), _)| s == sym)
            .map(|((_, children), targets)| (children, targets))
    }
}

/// The set of states the automaton can reach at the root of `t`.
pub fn run_automaton(a: &TreeAutomaton, t: &Tree) -> Result<BTreeSet<StateId>> {
    if !a.alphabet.contains(&t.label) {
        return Err(Error::UnknownSymbol(t.label.clone()));
    }
    let mut child_sets = Vec::with_capacity(t.children.len());
    for c in &t.children {
        child_sets.push(run_automaton(a, c)?);
    }
    let mut out = BTreeSet::new();
    for (children, targets) in a.transitions_on(&t.label) {
        if children.len() == child_sets.len() && children.iter().zip(&child_sets).all(|(q, set)| set.contains(q)) {
            out.extend(targets.iter().copied());
        }
    }
    Ok(out)
}

pub fn accepts(a: &TreeAutomaton, t: &Tree) -> Result<bool> {
    Ok(run_automaton(a, t)?.iter().any(|q| a.finals.contains(q)))
}

/// All accepted trees with at most `max_nodes` nodes, in canonical order.
pub fn enumerate_accepted(a: &TreeAutomaton, max_nodes: usize) -> Vec<Tree> {
    // by_size[n][q] = trees of exactly n nodes reaching q
    let mut by_size: Vec<HashMap<StateId, BTreeSet<Tree>>> = vec![HashMap::new(); max_nodes + 1];
    for n in 1..=max_nodes {
        let mut level: HashMap<StateId, BTreeSet<Tree>> = HashMap::new();
        for ((sym, children), targets) in &a.transitions {
            let trees: Vec<Tree> = if children.is_empty() {
                if n != 1 {
                    continue;
                }
                vec![Tree::leaf(sym.clone())]
            } else {
                if n < children.len() + 1 {
                    continue;
                }
                let mut acc = Vec::new();
                fill_children(&by_size, children, n - 1, &mut Vec::new(), &mut |kids| {
                    acc.push(Tree::node(sym.clone(), kids.to_vec()));
                });
                acc
            };
            for q in targets {
                level.entry(*q).or_default().extend(trees.iter().cloned());
            }
        }
        by_size[n] = level;
    }
    let mut out = Vec::new();
    for level in &by_size {
        for q in &a.finals {
            if let Some(trees) = level.get(q) {
                out.extend(trees.iter().cloned());
            }
        }
    }
    canonical_order(out)
}

fn fill_children(
    by_size: &[HashMap<StateId, BTreeSet<Tree>>],
    states: &[StateId],
    budget: usize,
    prefix: &mut Vec<Tree>,
    emit: &mut impl FnMut(&[Tree]),
) {
    let Some((q, rest)) = states.split_first() else {
        if budget == 0 {
            emit(prefix);
        }
        return;
    };
    // leave at least one node for each remaining child
    for size in 1..=budget.saturating_sub(rest.len()) {
        let Some(trees) = by_size[size].get(q) else { continue };
        for t in trees {
            prefix.push(t.clone());
            fill_children(by_size, rest, budget - size, prefix, emit);
            prefix.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Compilation fails once this many states exist.
    pub state_cap: usize,
    /// Longest nesting stack; `None` means one more than the number of
    /// non-terminals.
    pub max_nesting: Option<usize>,
    /// Require the frames of a nesting stack to carry distinct labels.
    pub distinct_roots: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { state_cap: 100_000, max_nesting: None, distinct_roots: true }
    }
}

/// A node of an elementary tree: index into `elementary` and address.
type ElemNode = (usize, NodeAddress);

/// A node together with the stack of host nodes whose adjoined trees
/// enclose it along a spine.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Compiled {
    node: ElemNode,
    nesting: Vec<ElemNode>,
}

struct Compiler<'g> {
    trees: Vec<(TreeKind, &'g str, &'g Tree)>,
    feet: Vec<Option<NodeAddress>>,
    aux_by_root: HashMap<Symbol, Vec<usize>>,
    init_by_root: HashMap<Symbol, Vec<usize>>,
    max_nesting: usize,
    distinct_roots: bool,
    state_cap: usize,
    ids: HashMap<Compiled, StateId>,
    states: Vec<Compiled>,
    queue: VecDeque<StateId>,
    deepest: usize,
}

impl<'g> Compiler<'g> {
    fn node(&self, n: &ElemNode) -> &'g Tree {
        self.trees[n.0].2.get(&n.1).unwrap()
    }

    fn state(&mut self, c: Compiled) -> Result<StateId> {
        if let Some(&id) = self.ids.get(&c) {
            return Ok(id);
        }
        if self.states.len() >= self.state_cap {
            return Err(Error::StateExplosion { cap: self.state_cap });
        }
        let id = StateId(self.states.len());
        self.deepest = self.deepest.max(c.nesting.len());
        self.ids.insert(c.clone(), id);
        self.states.push(c);
        self.queue.push_back(id);
        Ok(id)
    }

    /// A node can host an adjunction unless it is a terminal, a foot, a
    /// substitution slot or the root of an auxiliary tree. Adjoining at an
    /// auxiliary root or foot is the same as stacking at the host node.
    fn adjoinable(&self, n: &ElemNode) -> bool {
        let t = self.node(n);
        t.label.is_nonterminal()
            && !t.foot
            && !t.is_substitution_node()
            && !(self.trees[n.0].0 == TreeKind::Auxiliary && n.1.is_root())
    }

    /// States for the position of `n`: the node itself, or an auxiliary
    /// tree stacked on it.
    fn closure_top(&mut self, n: &ElemNode, nesting: &[ElemNode]) -> Result<Vec<StateId>> {
        let mut out = vec![self.state(Compiled { node: n.clone(), nesting: nesting.to_vec() })?];
        if !self.adjoinable(n) || nesting.len() + 1 > self.max_nesting {
            return Ok(out);
        }
        let label = &self.node(n).label;
        if self.distinct_roots && nesting.iter().any(|f| &self.node(f).label == label) {
            return Ok(out);
        }
        let mut stacked = Vec::with_capacity(nesting.len() + 1);
        stacked.push(n.clone());
        stacked.extend_from_slice(nesting);
        for b in self.aux_by_root.get(label).cloned().unwrap_or_default() {
            out.push(self.state(Compiled { node: (b, NodeAddress::root()), nesting: stacked.clone() })?);
        }
        Ok(out)
    }

    fn child_states(&mut self, parent: &Compiled, i: usize) -> Result<Vec<StateId>> {
        let (tree, addr) = &parent.node;
        let child: ElemNode = (*tree, addr.child(i));
        let t = self.node(&child);
        if t.foot {
            let (host, rest) = parent.nesting.split_first().expect("spine nodes carry a host");
            let (host, rest) = (host.clone(), rest.to_vec());
            return self.closure_top(&host, &rest);
        }
        if t.is_substitution_node() {
            let mut out = Vec::new();
            for a in self.init_by_root.get(&t.label).cloned().unwrap_or_default() {
                out.extend(self.closure_top(&(a, NodeAddress::root()), &[])?);
            }
            return Ok(out);
        }
        let on_spine = self.feet[*tree].as_ref().is_some_and(|f| child.1.is_prefix_of(f));
        let nesting = if on_spine { parent.nesting.clone() } else { Vec::new() };
        self.closure_top(&child, &nesting)
    }
}

/// Statistics of a compilation run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileStats {
    pub states: usize,
    pub transitions: usize,
    /// Deepest nesting stack among reachable states.
    pub deepest_nesting: usize,
}

/// Compiles a regular-form TAG to a tree automaton accepting exactly its
/// completed trees.
pub fn compile_regular_tag(g: &TagGrammar) -> Result<TreeAutomaton> {
    compile_with(g, CompileOptions::default()).map(|(a, _)| a)
}

pub fn compile_with(g: &TagGrammar, opts: CompileOptions) -> Result<(TreeAutomaton, CompileStats)> {
    ensure_valid(g)?;
    if !check_regular_form(g)?.is_regular {
        return Err(Error::NotRegularForm);
    }
    let trees: Vec<(TreeKind, &str, &Tree)> = g.elementary().map(|(k, n)| (k, n.name.as_str(), &n.tree)).collect();
    let mut aux_by_root: HashMap<Symbol, Vec<usize>> = HashMap::new();
    let mut init_by_root: HashMap<Symbol, Vec<usize>> = HashMap::new();
    for (i, (kind, _, t)) in trees.iter().enumerate() {
        match kind {
            TreeKind::Auxiliary => aux_by_root.entry(t.label.clone()).or_default().push(i),
            TreeKind::Initial => init_by_root.entry(t.label.clone()).or_default().push(i),
        }
    }
    let mut c = Compiler {
        feet: trees.iter().map(|(_, _, t)| t.foot_address()).collect(),
        trees,
        aux_by_root,
        init_by_root,
        max_nesting: opts.max_nesting.unwrap_or(g.nonterminals.len() + 1),
        distinct_roots: opts.distinct_roots,
        state_cap: opts.state_cap,
        ids: HashMap::new(),
        states: Vec::new(),
        queue: VecDeque::new(),
        deepest: 0,
    };

    let mut finals = BTreeSet::new();
    for a in c.init_by_root.get(&g.start).cloned().unwrap_or_default() {
        finals.extend(c.closure_top(&(a, NodeAddress::root()), &[])?);
    }

    let mut transitions: BTreeMap<(Symbol, Vec<StateId>), BTreeSet<StateId>> = BTreeMap::new();
    while let Some(id) = c.queue.pop_front() {
        let state = c.states[id.0].clone();
        let node = c.node(&state.node);
        let mut choices = Vec::with_capacity(node.children.len());
        for i in 0..node.children.len() {
            choices.push(c.child_states(&state, i)?);
        }
        for tuple in product(&choices) {
            transitions.entry((node.label.clone(), tuple)).or_default().insert(id);
        }
    }

    let mut alphabet: BTreeSet<Symbol> = g.terminals.iter().chain(&g.nonterminals).cloned().collect();
    alphabet.extend(transitions.keys().map(|(s, _)| s.clone()));
    let names = c.states.iter().map(|s| state_name(&c, s)).collect();
    let stats = CompileStats {
        states: c.states.len(),
        transitions: transitions.values().map(BTreeSet::len).sum(),
        deepest_nesting: c.deepest,
    };
    Ok((TreeAutomaton::from_parts(alphabet, names, finals, transitions), stats))
}

fn state_name(c: &Compiler, s: &Compiled) -> String {
    let node = |n: &ElemNode| format!("{}@{}", c.trees[n.0].1, n.1);
    let mut out = node(&s.node);
    for f in &s.nesting {
        out.push('^');
        out.push_str(&node(f));
    }
    out
}

fn product(choices: &[Vec<StateId>]) -> Vec<Vec<StateId>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for &q in options {
                let mut v = prefix.clone();
                v.push(q);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::NamedTree;
    use crate::oracle::{enumerate_derived, DerivationBudget};
    use crate::text::parse_tree;

    fn tr(s: &str) -> Tree {
        parse_tree(s).unwrap()
    }

    fn toy() -> TreeAutomaton {
        let mut a = TreeAutomaton::default();
        let qa = a.add_state("q_a");
        let qs = a.add_state("q_S");
        a.add_transition(Symbol::terminal("a"), vec![], qa);
        a.add_transition(Symbol::nonterminal("S"), vec![qa], qs);
        a.alphabet.insert(Symbol::terminal("b"));
        a.finals.insert(qs);
        a
    }

    #[test]
    fn toy_runs() {
        let a = toy();
        assert_eq!(run_automaton(&a, &tr("(S a)")).unwrap(), [StateId(1)].into());
        assert_eq!(run_automaton(&a, &tr("a")).unwrap(), [StateId(0)].into());
        assert!(run_automaton(&a, &tr("(S b)")).unwrap().is_empty());
        assert!(accepts(&a, &tr("(S a)")).unwrap());
        assert!(!accepts(&a, &tr("(S (S a))")).unwrap());
        assert_eq!(run_automaton(&a, &tr("(S c)")), Err(Error::UnknownSymbol(Symbol::terminal("c"))));
        let mut none = a.clone();
        none.finals.clear();
        assert!(!accepts(&none, &tr("(S a)")).unwrap());
        assert!(enumerate_accepted(&none, 5).is_empty());
        assert_eq!(enumerate_accepted(&a, 2), vec![tr("(S a)")]);
    }

    fn g(init: &[&str], aux: &[&str]) -> TagGrammar {
        TagGrammar::from_trees(
            Symbol::nonterminal("S"),
            init.iter().map(|s| tr(s)).collect(),
            aux.iter().map(|s| tr(s)).collect(),
        )
    }

    fn assert_matches_oracle(g: &TagGrammar, n: usize) {
        let a = compile_regular_tag(g).unwrap();
        let got: BTreeSet<Tree> = enumerate_accepted(&a, n).into_iter().collect();
        let want = enumerate_derived(g, DerivationBudget::nodes(n), true).unwrap();
        assert!(want.complete);
        assert_eq!(got, want.trees);
    }

    #[test]
    fn g0_compiles() {
        let g0 = g(&["(S a)"], &["(S a S*)"]);
        let a = compile_regular_tag(&g0).unwrap();
        assert_eq!(enumerate_accepted(&a, 7), vec![tr("(S a)"), tr("(S a (S a))"), tr("(S a (S a (S a)))")]);
        assert_matches_oracle(&g0, 12);
    }

    #[test]
    fn substitution_only() {
        assert_matches_oracle(&g(&["(S A A)", "(A a)", "(A b)"], &[]), 12);
    }

    #[test]
    fn interior_spine_adjunction() {
        assert_matches_oracle(&g(&["(S b)"], &["(S a (B S* c))", "(B (S a B*) c)", "(B d B*)"]), 12);
        assert_matches_oracle(&g(&["(S b)"], &["(S (T a S*) c)"]), 12);
    }

    #[test]
    fn larger_nesting_bound_changes_nothing() {
        let g = g(&["(S b)"], &["(S a (B S* c))", "(B (S a B*) c)", "(B d B*)"]);
        let (small, stats) = compile_with(&g, CompileOptions::default()).unwrap();
        let loose = CompileOptions { max_nesting: Some(8), distinct_roots: false, ..CompileOptions::default() };
        let (big, big_stats) = compile_with(&g, loose).unwrap();
        assert!(stats.deepest_nesting <= g.nonterminals.len() + 1);
        assert!(big_stats.states >= stats.states);
        assert_eq!(enumerate_accepted(&small, 12), enumerate_accepted(&big, 12));
    }

    #[test]
    fn rejects_g1() {
        let g1 = TagGrammar::new(
            Symbol::nonterminal("S"),
            vec![NamedTree::new("alpha", tr("(S (A (B b) a))"))],
            vec![NamedTree::new("beta_A", tr("(A (B A* b))")), NamedTree::new("beta_B", tr("(B (A B* a))"))],
        );
        assert_eq!(compile_regular_tag(&g1), Err(Error::NotRegularForm));
    }

    #[test]
    fn state_cap_is_reported() {
        let g0 = g(&["(S a)"], &["(S a S*)"]);
        let opts = CompileOptions { state_cap: 1, ..CompileOptions::default() };
        assert_eq!(compile_with(&g0, opts).map(|_| ()), Err(Error::StateExplosion { cap: 1 }));
    }
}
