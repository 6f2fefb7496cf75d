//! Bounded brute-force enumeration of derivable trees.
//!
//! The derivable set of a TAG is infinite in general; enumeration here is a
//! fixpoint over adjunction and substitution that discards every tree larger
//! than the node budget (and, optionally, deeper than a depth bound).
//! Neither operation ever shrinks a tree or makes it shallower, so the
//! result is exactly the set of derivable trees within the budget.
//!
//! When only completed trees are wanted, arguments of substitution and
//! adjunction are restricted to trees without open substitution nodes.
//! Filling a slot commutes with the operation that moves it into a host,
//! so every completed tree still has such a derivation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::Result;
use crate::grammar::{adjoin, ensure_valid, is_proper, spine, substitute, TagGrammar, TreeKind};
use crate::tree::{NodeAddress, Symbol, TokenString, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationBudget {
    /// Largest tree (in nodes) kept during the closure.
    pub max_nodes: usize,
    /// Cap on attempted operations.
    pub max_steps: usize,
    /// Deepest tree (in node levels) kept, if bounded.
    pub max_depth: Option<usize>,
}

impl DerivationBudget {
    pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

    pub fn nodes(max_nodes: usize) -> Self {
        DerivationBudget { max_nodes: max_nodes.max(1), max_steps: Self::DEFAULT_MAX_STEPS, max_depth: None }
    }

    pub fn with_depth(self, max_depth: usize) -> Self {
        DerivationBudget { max_depth: Some(max_depth), ..self }
    }
}

impl Default for DerivationBudget {
    fn default() -> Self {
        Self::nodes(12)
    }
}

/// Everything the regular-adjunction restriction looks at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityContext {
    pub host_kind: TreeKind,
    pub host_root_label: Symbol,
    pub site_on_spine: bool,
    pub site_is_root_or_foot: bool,
    pub host_spine_labels: BTreeSet<Symbol>,
    pub aux_root_label: Symbol,
    pub aux_is_proper: bool,
    pub aux_spine_labels: BTreeSet<Symbol>,
}

/// Whether an adjunction is a regular one.
///
/// Into an initial tree or off the spine: always. At the root or foot of an
/// auxiliary host: only proper trees. Elsewhere on the spine: only if no
/// tree rooted like the host could adjoin on the adjoined tree's spine,
/// which for pure TAGs is a test on labels.
pub fn is_regular_step(ctx: &RegularityContext) -> bool {
    if ctx.host_kind == TreeKind::Initial || !ctx.site_on_spine {
        return true;
    }
    if ctx.site_is_root_or_foot {
        return ctx.aux_is_proper;
    }
    !ctx.aux_spine_labels.contains(&ctx.host_root_label)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Unrestricted,
    Regular,
}

/// Result of a bounded enumeration. `complete` is false when the step
/// budget ran out before the fixpoint was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub trees: BTreeSet<Tree>,
    pub complete: bool,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivability {
    Derivable,
    NotDerivable,
    /// The step budget ran out before the question was settled.
    Unknown,
}

struct Site {
    label: Symbol,
    addr: NodeAddress,
    on_spine: bool,
    root_or_foot: bool,
}

struct Item {
    tree: Tree,
    size: usize,
    kind: TreeKind,
    proper: bool,
    spine_labels: BTreeSet<Symbol>,
    sites: Vec<Site>,
    slots: Vec<(Symbol, NodeAddress)>,
}

impl Item {
    fn new(tree: Tree) -> Self {
        let foot = tree.foot_address();
        let kind = if foot.is_some() { TreeKind::Auxiliary } else { TreeKind::Initial };
        let (proper, spine_labels) = match kind {
            TreeKind::Auxiliary => (
                is_proper(&tree).unwrap(),
                spine(&tree).unwrap().iter().map(|a| tree.get(a).unwrap().label.clone()).collect(),
            ),
            TreeKind::Initial => (true, BTreeSet::new()),
        };
        let mut sites = Vec::new();
        let mut slots = Vec::new();
        tree.walk(&mut NodeAddress::root(), &mut |addr, node| {
            if !node.label.is_nonterminal() {
                return;
            }
            if node.is_substitution_node() {
                slots.push((node.label.clone(), addr.clone()));
            } else {
                let on_spine = foot.as_ref().is_some_and(|f| addr.is_prefix_of(f));
                let root_or_foot = addr.is_root() || foot.as_ref() == Some(addr);
                sites.push(Site { label: node.label.clone(), addr: addr.clone(), on_spine, root_or_foot });
            }
        });
        Item { size: tree.size(), tree, kind, proper, spine_labels, sites, slots }
    }
}

struct Closure<'g> {
    grammar: &'g TagGrammar,
    budget: DerivationBudget,
    mode: Mode,
    closed_args: bool,
    items: Vec<Item>,
    seen: HashSet<Tree>,
    aux_by_root: HashMap<Symbol, Vec<usize>>,
    init_by_root: HashMap<Symbol, Vec<usize>>,
    steps: usize,
}

impl<'g> Closure<'g> {
    fn new(grammar: &'g TagGrammar, budget: DerivationBudget, mode: Mode, closed_args: bool) -> Self {
        Closure {
            grammar,
            budget,
            mode,
            closed_args,
            items: Vec::new(),
            seen: HashSet::new(),
            aux_by_root: HashMap::new(),
            init_by_root: HashMap::new(),
            steps: 0,
        }
    }

    fn add(&mut self, tree: Tree) {
        if tree.size() > self.budget.max_nodes
            || self.budget.max_depth.is_some_and(|d| tree.depth() > d)
            || self.seen.contains(&tree)
        {
            return;
        }
        self.seen.insert(tree.clone());
        let item = Item::new(tree);
        let index = self.items.len();
        let by_root = match item.kind {
            TreeKind::Auxiliary => &mut self.aux_by_root,
            TreeKind::Initial => &mut self.init_by_root,
        };
        by_root.entry(item.tree.label.clone()).or_default().push(index);
        self.items.push(item);
    }

    fn regular(&self, host: &Item, site: &Site, aux: &Item) -> bool {
        match self.mode {
            Mode::Unrestricted => true,
            Mode::Regular => is_regular_step(&RegularityContext {
                host_kind: host.kind,
                host_root_label: host.tree.label.clone(),
                site_on_spine: site.on_spine,
                site_is_root_or_foot: site.root_or_foot,
                host_spine_labels: host.spine_labels.clone(),
                aux_root_label: aux.tree.label.clone(),
                aux_is_proper: aux.proper,
                aux_spine_labels: aux.spine_labels.clone(),
            }),
        }
    }

    /// Returns false when the step budget is exhausted.
    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.budget.max_steps
    }

    fn run(mut self) -> Enumeration {
        for (_, named) in self.grammar.elementary() {
            self.add(named.tree.clone());
        }
        let max = self.budget.max_nodes;
        let mut i = 0;
        while i < self.items.len() {
            let mut produced = Vec::new();
            let item = &self.items[i];

            // item as host, arguments up to and including itself
            for site in &item.sites {
                for &j in self.aux_by_root.get(&site.label).into_iter().flatten().filter(|&&j| j <= i) {
                    let aux = &self.items[j];
                    if item.size + aux.size - 1 > max
                        || (self.closed_args && !aux.slots.is_empty())
                        || !self.regular(item, site, aux)
                    {
                        continue;
                    }
                    produced.push((i, Op::Adjoin(site.addr.clone()), j));
                }
            }
            for (label, addr) in &item.slots {
                for &j in self.init_by_root.get(label).into_iter().flatten().filter(|&&j| j <= i) {
                    let arg = &self.items[j];
                    if item.size + arg.size - 1 <= max && !(self.closed_args && !arg.slots.is_empty()) {
                        produced.push((i, Op::Substitute(addr.clone()), j));
                    }
                }
            }
            // item as argument into earlier hosts
            let usable = !(self.closed_args && !item.slots.is_empty());
            for h in (0..i).filter(|_| usable) {
                let host = &self.items[h];
                if host.size + item.size - 1 > max {
                    continue;
                }
                match item.kind {
                    TreeKind::Auxiliary => {
                        for site in host.sites.iter().filter(|s| s.label == item.tree.label) {
                            if self.regular(host, site, item) {
                                produced.push((h, Op::Adjoin(site.addr.clone()), i));
                            }
                        }
                    }
                    TreeKind::Initial => {
                        for (_, addr) in host.slots.iter().filter(|(l, _)| *l == item.tree.label) {
                            produced.push((h, Op::Substitute(addr.clone()), i));
                        }
                    }
                }
            }

            for (h, op, a) in produced {
                if !self.tick() {
                    return self.finish(false);
                }
                let host = &self.items[h].tree;
                let arg = &self.items[a].tree;
                let result = match op {
                    Op::Adjoin(addr) => adjoin(host, &addr, arg),
                    Op::Substitute(addr) => substitute(host, &addr, arg),
                };
                self.add(result.expect("sites are pre-checked"));
            }
            i += 1;
        }
        self.finish(true)
    }

    fn finish(self, complete: bool) -> Enumeration {
        Enumeration { trees: self.items.into_iter().map(|it| it.tree).collect(), complete, steps: self.steps }
    }
}

enum Op {
    Adjoin(NodeAddress),
    Substitute(NodeAddress),
}

/// A completed tree: initial, rooted in the start symbol, closed frontier.
pub fn is_completed(g: &TagGrammar, t: &Tree) -> bool {
    !t.has_foot() && t.label == g.start && t.is_closed()
}

fn enumerate(g: &TagGrammar, b: DerivationBudget, completed_only: bool, mode: Mode) -> Result<Enumeration> {
    ensure_valid(g)?;
    let mut out = Closure::new(g, b, mode, completed_only).run();
    if completed_only {
        out.trees.retain(|t| is_completed(g, t));
    }
    Ok(out)
}

/// All derivable trees (initial and auxiliary) within the budget, or only
/// the completed ones.
pub fn enumerate_derived(g: &TagGrammar, b: DerivationBudget, completed_only: bool) -> Result<Enumeration> {
    enumerate(g, b, completed_only, Mode::Unrestricted)
}

/// Like [`enumerate_derived`] with every adjunction restricted to regular
/// adjunction. Substitution is unrestricted.
pub fn enumerate_regular(g: &TagGrammar, b: DerivationBudget, completed_only: bool) -> Result<Enumeration> {
    enumerate(g, b, completed_only, Mode::Regular)
}

/// Membership of `t` among the derivable trees. Only trees up to the size of
/// `t` are built, whatever the node budget says, since operations never
/// shrink trees; only the step budget can leave the answer open.
pub fn is_derivable(g: &TagGrammar, t: &Tree, regular_only: bool, b: DerivationBudget) -> Result<Derivability> {
    let mode = if regular_only { Mode::Regular } else { Mode::Unrestricted };
    let out = enumerate(g, DerivationBudget { max_nodes: t.size(), ..b }, false, mode)?;
    Ok(if out.trees.contains(t) {
        Derivability::Derivable
    } else if out.complete {
        Derivability::NotDerivable
    } else {
        Derivability::Unknown
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSample {
    pub strings: BTreeSet<TokenString>,
    pub complete: bool,
}

/// Yields of the completed trees within the budget.
pub fn sample_language(g: &TagGrammar, b: DerivationBudget) -> Result<LanguageSample> {
    let out = enumerate_derived(g, b, true)?;
    Ok(LanguageSample {
        strings: out.trees.iter().map(|t| TokenString(t.yield_symbols())).collect(),
        complete: out.complete,
    })
}

/// A piece of yield, possibly with a hole where the foot sits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Piece {
    left: Vec<u32>,
    right: Option<Vec<u32>>,
}

impl Piece {
    fn word(w: Vec<u32>) -> Self {
        Piece { left: w, right: None }
    }

    fn len(&self) -> usize {
        self.left.len() + self.right.as_ref().map_or(0, Vec::len)
    }

    fn concat(&self, other: &Piece) -> Piece {
        match (&self.right, &other.right) {
            (Some(r), None) => {
                let mut right = r.clone();
                right.extend_from_slice(&other.left);
                Piece { left: self.left.clone(), right: Some(right) }
            }
            (None, r) => {
                let mut left = self.left.clone();
                left.extend_from_slice(&other.left);
                Piece { left, right: r.clone() }
            }
            (Some(_), Some(_)) => unreachable!("at most one foot below a node"),
        }
    }

    fn wrap(&self, l: &[u32], r: &[u32]) -> Piece {
        let mut left = l.to_vec();
        left.extend_from_slice(&self.left);
        match &self.right {
            Some(right) => {
                let mut right = right.clone();
                right.extend_from_slice(r);
                Piece { left, right: Some(right) }
            }
            None => {
                left.extend_from_slice(r);
                Piece { left, right: None }
            }
        }
    }
}

/// Left and right yield of an auxiliary tree around its foot.
type Wrap = (Vec<u32>, Vec<u32>);

/// The exact language of `g` restricted to strings of at most `max_len`
/// tokens.
///
/// Works on yields rather than trees: every node of an elementary tree
/// contributes the yield of its children, optionally wrapped by the
/// left/right yield of some derivable auxiliary tree adjoined there. Yields
/// never shrink, so pruning by length is exact and the fixpoint is finite
/// even when the grammar is infinitely ambiguous.
pub fn language_up_to(g: &TagGrammar, max_len: usize) -> Result<BTreeSet<TokenString>> {
    ensure_valid(g)?;
    let symbols: Vec<Symbol> = g.terminals.iter().cloned().collect();
    let ids: HashMap<Symbol, u32> = symbols.iter().cloned().enumerate().map(|(i, s)| (s, i as u32)).collect();

    let mut init: BTreeMap<Symbol, BTreeSet<Vec<u32>>> = BTreeMap::new();
    let mut aux: BTreeMap<Symbol, BTreeSet<Wrap>> = BTreeMap::new();
    loop {
        let mut changed = false;
        for (kind, named) in g.elementary() {
            let pieces = node_pieces(&named.tree, &ids, &init, &aux, max_len);
            let label = named.tree.label.clone();
            for p in pieces {
                changed |= match (kind, p.right) {
                    (TreeKind::Initial, None) => init.entry(label.clone()).or_default().insert(p.left),
                    (TreeKind::Auxiliary, Some(r)) => aux.entry(label.clone()).or_default().insert((p.left, r)),
                    _ => false,
                };
            }
        }
        if !changed {
            break;
        }
    }
    Ok(init
        .get(&g.start)
        .into_iter()
        .flatten()
        .map(|w| TokenString(w.iter().map(|&i| symbols[i as usize].clone()).collect()))
        .collect())
}

type InitYields = BTreeMap<Symbol, BTreeSet<Vec<u32>>>;
type AuxYields = BTreeMap<Symbol, BTreeSet<(Vec<u32>, Vec<u32>)>>;

fn node_pieces(
    node: &Tree,
    ids: &HashMap<Symbol, u32>,
    init: &InitYields,
    aux: &AuxYields,
    max_len: usize,
) -> BTreeSet<Piece> {
    let mut out = BTreeSet::new();
    if node.is_leaf() {
        if node.foot {
            out.insert(Piece { left: vec![], right: Some(vec![]) });
        } else if node.label.is_terminal() {
            if max_len >= 1 {
                out.insert(Piece::word(vec![ids[&node.label]]));
            }
        } else if node.label.is_epsilon() {
            out.insert(Piece::word(vec![]));
        } else if let Some(words) = init.get(&node.label) {
            out.extend(words.iter().cloned().map(Piece::word));
        }
        return out;
    }
    let mut inner: BTreeSet<Piece> = [Piece::word(vec![])].into();
    for child in &node.children {
        let pieces = node_pieces(child, ids, init, aux, max_len);
        let mut next = BTreeSet::new();
        for a in &inner {
            for b in &pieces {
                if a.len() + b.len() <= max_len {
                    next.insert(a.concat(b));
                }
            }
        }
        inner = next;
        if inner.is_empty() {
            return inner;
        }
    }
    for p in &inner {
        out.insert(p.clone());
        for (l, r) in aux.get(&node.label).into_iter().flatten() {
            if p.len() + l.len() + r.len() <= max_len {
                out.insert(p.wrap(l, r));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_tree;

    fn tr(s: &str) -> Tree {
        parse_tree(s).unwrap()
    }

    fn g0() -> TagGrammar {
        TagGrammar::from_trees(Symbol::nonterminal("S"), vec![tr("(S a)")], vec![tr("(S a S*)")])
    }

    fn g1() -> TagGrammar {
        TagGrammar::from_trees(
            Symbol::nonterminal("S"),
            vec![tr("(S (A (B b) a))")],
            vec![tr("(A (B A* b))"), tr("(B (A B* a))")],
        )
    }

    fn set(trees: &[&str]) -> BTreeSet<Tree> {
        trees.iter().map(|s| tr(s)).collect()
    }

    /// Independent count for G0: completed trees are chains S(a, S(a, ...)).
    fn g0_chain(n: usize) -> Tree {
        let mut t = tr("(S a)");
        for _ in 1..n {
            t = Tree::node(Symbol::nonterminal("S"), vec![Tree::leaf(Symbol::terminal("a")), t]);
        }
        t
    }

    #[test]
    fn g0_completed_trees() {
        let out = enumerate_derived(&g0(), DerivationBudget::nodes(7), true).unwrap();
        assert!(out.complete);
        assert_eq!(out.trees, set(&["(S a)", "(S a (S a))", "(S a (S a (S a)))"]));
        for n in [2, 7, 9, 12] {
            let chains: BTreeSet<Tree> = (1..=n).map(g0_chain).filter(|t| t.size() <= n).collect();
            assert_eq!(enumerate_derived(&g0(), DerivationBudget::nodes(n), true).unwrap().trees, chains);
        }
        // a chain of k tokens has 2k nodes, so nine nodes admit four tokens
        assert_eq!(enumerate_derived(&g0(), DerivationBudget::nodes(9), true).unwrap().trees.len(), 4);
    }

    #[test]
    fn tiny_budget_keeps_only_elementary_initial() {
        let out = enumerate_derived(&g0(), DerivationBudget::nodes(2), true).unwrap();
        assert_eq!(out.trees, set(&["(S a)"]));
    }

    #[test]
    fn no_initial_trees_means_no_completed_trees() {
        let g = TagGrammar::from_trees(Symbol::nonterminal("S"), vec![], vec![tr("(S a S*)")]);
        assert!(enumerate_derived(&g, DerivationBudget::nodes(9), true).unwrap().trees.is_empty());
        assert!(enumerate_regular(&g, DerivationBudget::nodes(9), true).unwrap().trees.is_empty());
        assert!(sample_language(&g, DerivationBudget::nodes(9)).unwrap().strings.is_empty());
    }

    fn ctx(kind: TreeKind, on_spine: bool, root_or_foot: bool, aux_proper: bool) -> RegularityContext {
        RegularityContext {
            host_kind: kind,
            host_root_label: Symbol::nonterminal("A"),
            site_on_spine: on_spine,
            site_is_root_or_foot: root_or_foot,
            host_spine_labels: [Symbol::nonterminal("A"), Symbol::nonterminal("B")].into(),
            aux_root_label: Symbol::nonterminal("B"),
            aux_is_proper: aux_proper,
            aux_spine_labels: [Symbol::nonterminal("B"), Symbol::nonterminal("A")].into(),
        }
    }

    #[test]
    fn regular_step_clauses() {
        assert!(is_regular_step(&ctx(TreeKind::Initial, false, false, false)));
        // beta_B into the interior spine node B of beta_A: beta_B's spine has A.
        assert!(!is_regular_step(&ctx(TreeKind::Auxiliary, true, false, true)));
        assert!(!is_regular_step(&ctx(TreeKind::Auxiliary, true, true, false)));
        assert!(is_regular_step(&ctx(TreeKind::Auxiliary, true, true, true)));
        assert!(is_regular_step(&ctx(TreeKind::Auxiliary, false, false, false)));
        let mut c = ctx(TreeKind::Auxiliary, true, false, true);
        c.aux_spine_labels = [Symbol::nonterminal("B"), Symbol::nonterminal("C")].into();
        assert!(is_regular_step(&c));
    }

    #[test]
    fn completed_only_is_a_filter() {
        let subst = TagGrammar::from_trees(
            Symbol::nonterminal("S"),
            vec![tr("(S A b (B A c))"), tr("(A a)"), tr("(A <eps>)"), tr("(B (A b) S)")],
            vec![tr("(A A* d)"), tr("(B b B* A)"), tr("(S (A a) S*)")],
        );
        for g in [g0(), g1(), subst] {
            for n in [6, 9, 12] {
                let all = enumerate_derived(&g, DerivationBudget::nodes(n), false).unwrap();
                let done = enumerate_derived(&g, DerivationBudget::nodes(n), true).unwrap();
                let want: BTreeSet<Tree> = all.trees.into_iter().filter(|t| is_completed(&g, t)).collect();
                assert_eq!(done.trees, want);
                assert!(done.steps <= all.steps);
            }
        }
    }

    #[test]
    fn depth_bound_is_a_filter() {
        let all = enumerate_derived(&g1(), DerivationBudget::nodes(14), false).unwrap().trees;
        let shallow = enumerate_derived(&g1(), DerivationBudget::nodes(14).with_depth(4), false).unwrap().trees;
        let want: BTreeSet<Tree> = all.into_iter().filter(|t| t.depth() <= 4).collect();
        assert_eq!(shallow, want);
    }

    #[test]
    fn regular_matches_unrestricted_on_g0() {
        let b = DerivationBudget::nodes(9);
        assert_eq!(enumerate_regular(&g0(), b, true).unwrap().trees, enumerate_derived(&g0(), b, true).unwrap().trees);
        let b = DerivationBudget::nodes(10);
        assert_eq!(enumerate_regular(&g0(), b, false).unwrap().trees, enumerate_derived(&g0(), b, false).unwrap().trees);
    }

    #[test]
    fn regular_is_strictly_smaller_on_g1() {
        let imp = tr("(A (B (A (B A* b) a)))");
        let b = DerivationBudget::nodes(imp.size());
        let all = enumerate_derived(&g1(), b, false).unwrap().trees;
        let reg = enumerate_regular(&g1(), b, false).unwrap().trees;
        assert!(reg.is_subset(&all));
        assert!(all.contains(&imp));
        assert!(!reg.contains(&imp));
    }

    #[test]
    fn derivability_queries() {
        let b = DerivationBudget::nodes(12);
        assert_eq!(is_derivable(&g0(), &tr("(S a (S a))"), true, b).unwrap(), Derivability::Derivable);
        assert_eq!(is_derivable(&g0(), &tr("(S a)"), false, b).unwrap(), Derivability::Derivable);
        for regular in [false, true] {
            assert_eq!(is_derivable(&g1(), &tr("(A (B A*))"), regular, b).unwrap(), Derivability::NotDerivable);
        }
        let starved = DerivationBudget { max_steps: 1, ..DerivationBudget::nodes(12) };
        assert_eq!(is_derivable(&g0(), &tr("(S a (S a (S a)))"), false, starved).unwrap(), Derivability::Unknown);
    }

    #[test]
    fn language_samples() {
        let words = |s: &LanguageSample| s.strings.iter().map(|w| w.to_string()).collect::<Vec<_>>();
        let s = sample_language(&g0(), DerivationBudget::nodes(7)).unwrap();
        assert_eq!(words(&s), ["a", "a a", "a a a"]);
        let s = sample_language(&g1(), DerivationBudget::nodes(5)).unwrap();
        assert_eq!(words(&s), ["b a"]);
    }

    #[test]
    fn exact_language_agrees_with_tree_enumeration() {
        for g in [g0(), g1()] {
            let sample = sample_language(&g, DerivationBudget::nodes(12)).unwrap().strings;
            let exact = language_up_to(&g, 4).unwrap();
            let short: BTreeSet<_> = sample.iter().filter(|w| w.0.len() <= 4).cloned().collect();
            assert!(short.is_subset(&exact));
        }
        let exact: Vec<String> = language_up_to(&g0(), 3).unwrap().iter().map(|w| w.to_string()).collect();
        assert_eq!(exact, ["a", "a a", "a a a"]);
    }

    #[test]
    fn step_budget_flags_partial_results() {
        let out = enumerate_derived(&g1(), DerivationBudget { max_steps: 3, ..DerivationBudget::nodes(12) }, false).unwrap();
        assert!(!out.complete);
    }
}
