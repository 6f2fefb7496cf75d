//! Tree adjoining grammars and the adjunction/substitution calculus.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tree::{NodeAddress, Symbol, SymbolKind, Tree, EPSILON_NAME};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeKind {
    Initial,
    Auxiliary,
}

/// An elementary tree together with its name in the grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedTree {
    pub name: String,
    pub tree: Tree,
}

impl NamedTree {
    pub fn new(name: impl Into<String>, tree: Tree) -> Self {
        NamedTree { name: name.into(), tree }
    }
}

/// A pure TAG: terminals, non-terminals, initial trees, auxiliary trees and
/// a start symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagGrammar {
    pub terminals: BTreeSet<Symbol>,
    pub nonterminals: BTreeSet<Symbol>,
    pub initial: Vec<NamedTree>,
    pub auxiliary: Vec<NamedTree>,
    pub start: Symbol,
}

impl TagGrammar {
    /// Builds a grammar whose alphabets are inferred from the tree labels.
    pub fn new(start: Symbol, initial: Vec<NamedTree>, auxiliary: Vec<NamedTree>) -> Self {
        let mut g = TagGrammar {
            terminals: BTreeSet::new(),
            nonterminals: BTreeSet::new(),
            initial,
            auxiliary,
            start,
        };
        g.infer_alphabets();
        g
    }

    /// Like [`TagGrammar::new`] with generated names `a1..` and `b1..`.
    pub fn from_trees(start: Symbol, initial: Vec<Tree>, auxiliary: Vec<Tree>) -> Self {
        let initial = initial.into_iter().enumerate().map(|(i, t)| NamedTree::new(format!("a{}", i + 1), t)).collect();
        let auxiliary =
            auxiliary.into_iter().enumerate().map(|(i, t)| NamedTree::new(format!("b{}", i + 1), t)).collect();
        Self::new(start, initial, auxiliary)
    }

    /// Adds every label occurring in the trees (and the start symbol) to the
    /// alphabets.
    pub fn infer_alphabets(&mut self) {
        if self.start.is_nonterminal() {
            self.nonterminals.insert(self.start.clone());
        }
        for named in self.initial.iter().chain(&self.auxiliary) {
            for label in named.tree.labels() {
                match label.kind() {
                    SymbolKind::Terminal => {
                        self.terminals.insert(label);
                    }
                    SymbolKind::NonTerminal => {
                        self.nonterminals.insert(label);
                    }
                    SymbolKind::Epsilon => {}
                }
            }
        }
    }

    pub fn elementary(&self) -> impl Iterator<Item = (TreeKind, &NamedTree)> {
        self.initial
            .iter()
            .map(|t| (TreeKind::Initial, t))
            .chain(self.auxiliary.iter().map(|t| (TreeKind::Auxiliary, t)))
    }

    /// Labels that root at least one elementary auxiliary tree.
    pub fn auxiliary_roots(&self) -> BTreeSet<Symbol> {
        self.auxiliary.iter().map(|t| t.tree.label.clone()).collect()
    }

    pub fn tree_names(&self) -> HashSet<&str> {
        self.elementary().map(|(_, t)| t.name.as_str()).collect()
    }

    /// A tree name not yet used in the grammar, built from `prefix`.
    pub fn fresh_name(&self, prefix: &str) -> String {
        let used = self.tree_names();
        (1..).map(|i| format!("{prefix}{i}")).find(|n| !used.contains(n.as_str())).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    FootNotFrontier,
    FootOnTerminal,
    FootLabelMismatch,
    MultipleFeet,
    NonFrontierTerminal,
    AnchorNotTerminalLeaf,
    MultipleAnchors,
    InitialHasFoot,
    AuxiliaryWithoutFoot,
    UnknownLabel(Symbol),
    KindConflict(String),
    BadSymbolName(String),
    StartNotNonterminal,
    DuplicateTreeName,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::FootNotFrontier => f.write_str("foot is not a frontier node"),
            ViolationKind::FootOnTerminal => f.write_str("foot is not a non-terminal"),
            ViolationKind::FootLabelMismatch => f.write_str("foot label ≠ root label"),
            ViolationKind::MultipleFeet => f.write_str("more than one foot"),
            ViolationKind::NonFrontierTerminal => f.write_str("non-frontier terminal"),
            ViolationKind::AnchorNotTerminalLeaf => f.write_str("anchor is not a terminal leaf"),
            ViolationKind::MultipleAnchors => f.write_str("more than one anchor"),
            ViolationKind::InitialHasFoot => f.write_str("initial tree has a foot"),
            ViolationKind::AuxiliaryWithoutFoot => f.write_str("auxiliary tree has no foot"),
            ViolationKind::UnknownLabel(s) => write!(f, "label {s} is not in the alphabet"),
            ViolationKind::KindConflict(name) => write!(f, "{name} is both terminal and non-terminal"),
            ViolationKind::BadSymbolName(name) => write!(f, "bad symbol name {name:?}"),
            ViolationKind::StartNotNonterminal => f.write_str("start symbol is not a non-terminal"),
            ViolationKind::DuplicateTreeName => f.write_str("duplicate tree name"),
        }
    }
}

/// A broken well-formedness condition, located by tree name and address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub tree: Option<String>,
    pub address: Option<NodeAddress>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(tree) = &self.tree {
            write!(f, "tree {tree}")?;
            if let Some(addr) = &self.address {
                write!(f, " at {addr}")?;
            }
            f.write_str(": ")?;
        }
        write!(f, "{}", self.kind)
    }
}

/// Every violated well-formedness condition; empty iff `g` is valid.
pub fn validate_grammar(g: &TagGrammar) -> Vec<Violation> {
    let mut out = Vec::new();
    let global = |kind| Violation { tree: None, address: None, kind };

    if !g.start.is_nonterminal() || !g.nonterminals.contains(&g.start) {
        out.push(global(ViolationKind::StartNotNonterminal));
    }
    for sym in g.terminals.iter().chain(&g.nonterminals) {
        if sym.name().is_empty() || sym.name() == EPSILON_NAME || sym.is_epsilon() {
            out.push(global(ViolationKind::BadSymbolName(sym.name().to_string())));
        }
    }
    let terminal_names: HashSet<&str> = g.terminals.iter().map(Symbol::name).collect();
    for sym in &g.nonterminals {
        if terminal_names.contains(sym.name()) {
            out.push(global(ViolationKind::KindConflict(sym.name().to_string())));
        }
    }

    let mut seen = HashSet::new();
    for (kind, named) in g.elementary() {
        let at = |address: Option<NodeAddress>, kind| Violation { tree: Some(named.name.clone()), address, kind };
        if !seen.insert(named.name.as_str()) {
            out.push(at(None, ViolationKind::DuplicateTreeName));
        }
        let tree = &named.tree;
        let feet = tree.count_feet();
        match kind {
            TreeKind::Initial if feet > 0 => out.push(at(tree.foot_address(), ViolationKind::InitialHasFoot)),
            TreeKind::Auxiliary if feet == 0 => out.push(at(None, ViolationKind::AuxiliaryWithoutFoot)),
            _ => {}
        }
        if feet > 1 {
            out.push(at(None, ViolationKind::MultipleFeet));
        }
        if tree.count_anchors() > 1 {
            out.push(at(None, ViolationKind::MultipleAnchors));
        }
        tree.walk(&mut NodeAddress::root(), &mut |addr, node| {
            let here = || Some(addr.clone());
            let known = match node.label.kind() {
                SymbolKind::Terminal => g.terminals.contains(&node.label),
                SymbolKind::NonTerminal => g.nonterminals.contains(&node.label),
                SymbolKind::Epsilon => true,
            };
            if !known {
                out.push(at(here(), ViolationKind::UnknownLabel(node.label.clone())));
            }
            if !node.is_leaf() && !node.label.is_nonterminal() {
                out.push(at(here(), ViolationKind::NonFrontierTerminal));
            }
            if node.foot {
                if !node.is_leaf() {
                    out.push(at(here(), ViolationKind::FootNotFrontier));
                }
                if !node.label.is_nonterminal() {
                    out.push(at(here(), ViolationKind::FootOnTerminal));
                } else if node.label != tree.label {
                    out.push(at(here(), ViolationKind::FootLabelMismatch));
                }
            }
            if node.anchor && !(node.is_leaf() && node.label.is_terminal()) {
                out.push(at(here(), ViolationKind::AnchorNotTerminalLeaf));
            }
        });
    }
    out
}

pub(crate) fn ensure_valid(g: &TagGrammar) -> Result<()> {
    let violations = validate_grammar(g);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidGrammar(violations))
    }
}

/// Root-to-foot addresses, root first.
pub fn spine(aux: &Tree) -> Result<Vec<NodeAddress>> {
    let foot = aux.foot_address().ok_or(Error::NotAuxiliaryTree)?;
    Ok((0..=foot.depth()).map(|d| NodeAddress(foot.0[..d].to_vec())).collect())
}

/// No node strictly between root and foot carries the root label.
pub fn is_proper(aux: &Tree) -> Result<bool> {
    let path = spine(aux)?;
    let interior = &path[1..path.len() - 1];
    Ok(interior.iter().all(|addr| aux.get(addr).map(|n| &n.label) != Some(&aux.label)))
}

/// Splits `aux` at every spine node carrying the root label. Splicing the
/// segments in order (each at the previous one's foot) rebuilds `aux`.
pub fn proper_segments(aux: &Tree) -> Result<Vec<Tree>> {
    let path = spine(aux)?;
    let cuts: Vec<&NodeAddress> =
        path[..path.len() - 1].iter().filter(|addr| aux.get(addr).unwrap().label == aux.label).collect();
    let mut segments = Vec::with_capacity(cuts.len());
    for (i, cut) in cuts.iter().enumerate() {
        let sub = aux.get(cut).unwrap().clone();
        let segment = match cuts.get(i + 1) {
            Some(next) => {
                let rel = NodeAddress(next.0[cut.depth()..].to_vec());
                sub.replace_at(&rel, Tree::foot(aux.label.clone())).unwrap()
            }
            None => sub,
        };
        segments.push(segment);
    }
    Ok(segments)
}

/// Splices a sequence of auxiliary trees, each at the previous one's foot.
pub fn splice_segments(segments: &[Tree]) -> Option<Tree> {
    let (last, rest) = segments.split_last()?;
    let mut acc = last.clone();
    for seg in rest.iter().rev() {
        acc = seg.splice_at_foot(acc)?;
    }
    Some(acc)
}

/// Adjoins `aux` at `at` in `host`: the subtree there is excised, `aux` is
/// put in its place and the excised subtree replaces the foot of `aux`.
pub fn adjoin(host: &Tree, at: &NodeAddress, aux: &Tree) -> Result<Tree> {
    if !aux.has_foot() {
        return Err(Error::NotAuxiliaryTree);
    }
    let site = host.get(at).ok_or_else(|| Error::BadAddress(at.clone()))?;
    if site.label != aux.label {
        return Err(Error::LabelMismatch { site: site.label.clone(), root: aux.label.clone() });
    }
    if site.is_substitution_node() {
        return Err(Error::IllegalSite { address: at.clone(), reason: "substitution node" });
    }
    let inserted = aux.splice_at_foot(site.clone()).ok_or(Error::NotAuxiliaryTree)?;
    Ok(host.replace_at(at, inserted).unwrap())
}

/// Substitutes the initial tree `init` at the frontier non-terminal `at`.
pub fn substitute(host: &Tree, at: &NodeAddress, init: &Tree) -> Result<Tree> {
    let site = host.get(at).ok_or_else(|| Error::BadAddress(at.clone()))?;
    if !site.is_leaf() {
        return Err(Error::IllegalSite { address: at.clone(), reason: "not a frontier node" });
    }
    if site.foot {
        return Err(Error::IllegalSite { address: at.clone(), reason: "foot node" });
    }
    if !site.label.is_nonterminal() {
        return Err(Error::IllegalSite { address: at.clone(), reason: "terminal node" });
    }
    if init.has_foot() {
        return Err(Error::NotInitialTree);
    }
    if site.label != init.label {
        return Err(Error::LabelMismatch { site: site.label.clone(), root: init.label.clone() });
    }
    Ok(host.replace_at(at, init.clone()).unwrap())
}

/// Total relabeling from a refined alphabet back to a base alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProjectionMap {
    pub map: BTreeMap<Symbol, Symbol>,
}

impl ProjectionMap {
    pub fn identity(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        ProjectionMap { map: symbols.into_iter().map(|s| (s.clone(), s)).collect() }
    }

    pub fn get<'a>(&'a self, sym: &'a Symbol) -> Option<&'a Symbol> {
        if sym.is_epsilon() {
            return Some(sym);
        }
        self.map.get(sym)
    }
}

pub fn project_labels(t: &Tree, m: &ProjectionMap) -> Result<Tree> {
    t.map_labels(&mut |sym| m.get(sym).cloned().ok_or_else(|| Error::UnmappedLabel(sym.clone())))
}

/// Relabels `g` so that no elementary auxiliary tree is improper.
///
/// Non-terminals are split into `X_0`/`X_1`; terminals keep their names.
/// Initial trees and off-spine nodes use index 0. Each auxiliary tree is
/// duplicated with root and foot at index `b` in {0, 1}; its interior spine
/// nodes carrying the root's base symbol get `1 - b`, other spine nodes 0.
pub fn eliminate_improper(g: &TagGrammar) -> Result<(TagGrammar, ProjectionMap)> {
    ensure_valid(g)?;
    let taken: HashSet<String> = g.nonterminals.iter().chain(&g.terminals).map(|s| s.name().to_string()).collect();
    let mut sep = String::from("_");
    while g
        .nonterminals
        .iter()
        .any(|x| taken.contains(&format!("{x}{sep}0")) || taken.contains(&format!("{x}{sep}1")))
    {
        sep.push('_');
    }
    let refine = |sym: &Symbol, index: u8| -> Symbol {
        if sym.is_nonterminal() {
            Symbol::nonterminal(&format!("{}{sep}{index}", sym.name()))
        } else {
            sym.clone()
        }
    };

    let mut projection = ProjectionMap::default();
    for x in &g.nonterminals {
        for i in 0..2 {
            projection.map.insert(refine(x, i), x.clone());
        }
    }
    for a in &g.terminals {
        projection.map.insert(a.clone(), a.clone());
    }

    let relabel_flat = |tree: &Tree| -> Tree {
        tree.map_labels::<()>(&mut |s| Ok(refine(s, 0))).unwrap()
    };
    let initial = g.initial.iter().map(|n| NamedTree::new(n.name.clone(), relabel_flat(&n.tree))).collect();

    let mut auxiliary = Vec::with_capacity(g.auxiliary.len() * 2);
    for named in &g.auxiliary {
        let foot = named.tree.foot_address().ok_or(Error::NotAuxiliaryTree)?;
        for b in 0..2u8 {
            let mut copy = named.tree.clone();
            relabel_aux(&mut copy, &NodeAddress::root(), &foot, &named.tree.label, b, &refine);
            auxiliary.push(NamedTree::new(format!("{}_{b}", named.name), copy));
        }
    }

    let start = refine(&g.start, 0);
    let mut refined = TagGrammar::new(start, initial, auxiliary);
    for a in &g.terminals {
        refined.terminals.insert(a.clone());
    }
    Ok((refined, projection))
}

fn relabel_aux(
    node: &mut Tree,
    addr: &NodeAddress,
    foot: &NodeAddress,
    root_label: &Symbol,
    b: u8,
    refine: &impl Fn(&Symbol, u8) -> Symbol,
) {
    let on_spine = addr.is_prefix_of(foot);
    let index = if addr.is_root() || addr == foot {
        b
    } else if on_spine && &node.label == root_label {
        1 - b
    } else {
        0
    };
    node.label = refine(&node.label, index);
    for i in 0..node.children.len() {
        let child_addr = addr.child(i);
        relabel_aux(&mut node.children[i], &child_addr, foot, root_label, b, refine);
    }
}
