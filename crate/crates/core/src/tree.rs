//! Symbols, ordered labeled trees and node addresses.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Reserved name of the empty-string leaf.
pub const EPSILON_NAME: &str = "<eps>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Terminal,
    NonTerminal,
    Epsilon,
}

/// A grammar symbol. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    kind: SymbolKind,
}

impl Symbol {
    pub fn new(name: &str, kind: SymbolKind) -> Self {
        Symbol { name: Arc::from(name), kind }
    }

    pub fn terminal(name: &str) -> Self {
        Self::new(name, SymbolKind::Terminal)
    }

    pub fn nonterminal(name: &str) -> Self {
        Self::new(name, SymbolKind::NonTerminal)
    }

    pub fn epsilon() -> Self {
        Self::new(EPSILON_NAME, SymbolKind::Epsilon)
    }

    /// Classifies a token by its spelling: `<eps>`, an upper-case initial
    /// (non-terminal) or anything else (terminal).
    pub fn classify(name: &str) -> Self {
        if name == EPSILON_NAME {
            Self::epsilon()
        } else if name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            Self::nonterminal(name)
        } else {
            Self::terminal(name)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_terminal(&self) -> bool {
        self.kind == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self) -> bool {
        self.kind == SymbolKind::NonTerminal
    }

    pub fn is_epsilon(&self) -> bool {
        self.kind == SymbolKind::Epsilon
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Path of child indices from the root; the root is the empty path.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeAddress(pub Vec<usize>);

impl NodeAddress {
    pub fn root() -> Self {
        NodeAddress(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        NodeAddress(path)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &NodeAddress) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn join(&self, rest: &NodeAddress) -> Self {
        let mut path = self.0.clone();
        path.extend_from_slice(&rest.0);
        NodeAddress(path)
    }
}

impl From<Vec<usize>> for NodeAddress {
    fn from(path: Vec<usize>) -> Self {
        NodeAddress(path)
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, index) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered labeled tree with optional foot and anchor markers.
///
/// Equality, ordering and hashing are structural over labels, children and
/// foot flags. Anchor flags are presentation only and are ignored.
#[derive(Clone)]
pub struct Tree {
    pub label: Symbol,
    pub children: Vec<Tree>,
    pub foot: bool,
    pub anchor: bool,
}

impl Tree {
    pub fn leaf(label: Symbol) -> Self {
        Tree { label, children: Vec::new(), foot: false, anchor: false }
    }

    pub fn node(label: Symbol, children: Vec<Tree>) -> Self {
        Tree { label, children, foot: false, anchor: false }
    }

    pub fn foot(label: Symbol) -> Self {
        Tree { label, children: Vec::new(), foot: true, anchor: false }
    }

    pub fn anchor(label: Symbol) -> Self {
        Tree { label, children: Vec::new(), foot: false, anchor: true }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Frontier non-terminal that is not a foot.
    pub fn is_substitution_node(&self) -> bool {
        self.is_leaf() && self.label.is_nonterminal() && !self.foot
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Tree::depth).max().unwrap_or(0)
    }

    pub fn get(&self, at: &NodeAddress) -> Option<&Tree> {
        let mut node = self;
        for &i in &at.0 {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    fn get_mut(&mut self, at: &NodeAddress) -> Option<&mut Tree> {
        let mut node = self;
        for &i in &at.0 {
            node = node.children.get_mut(i)?;
        }
        Some(node)
    }

    /// Copy of `self` with the subtree at `at` replaced.
    pub fn replace_at(&self, at: &NodeAddress, replacement: Tree) -> Option<Tree> {
        let mut out = self.clone();
        *out.get_mut(at)? = replacement;
        Some(out)
    }

    /// All node addresses in pre-order.
    pub fn addresses(&self) -> Vec<NodeAddress> {
        let mut out = Vec::with_capacity(self.size());
        self.walk(&mut NodeAddress::root(), &mut |addr, _| out.push(addr.clone()));
        out
    }

    /// Pre-order traversal with addresses.
    pub fn walk<'a>(&'a self, addr: &mut NodeAddress, visit: &mut impl FnMut(&NodeAddress, &'a Tree)) {
        visit(addr, self);
        for (i, child) in self.children.iter().enumerate() {
            addr.0.push(i);
            child.walk(addr, visit);
            addr.0.pop();
        }
    }

    pub fn foot_address(&self) -> Option<NodeAddress> {
        let mut found = None;
        self.walk(&mut NodeAddress::root(), &mut |addr, node| {
            if node.foot && found.is_none() {
                found = Some(addr.clone());
            }
        });
        found
    }

    pub fn has_foot(&self) -> bool {
        self.foot || self.children.iter().any(Tree::has_foot)
    }

    pub fn count_feet(&self) -> usize {
        usize::from(self.foot) + self.children.iter().map(Tree::count_feet).sum::<usize>()
    }

    pub fn count_anchors(&self) -> usize {
        usize::from(self.anchor) + self.children.iter().map(Tree::count_anchors).sum::<usize>()
    }

    /// Replaces the foot leaf with `filler`. Returns `None` if there is no foot.
    pub fn splice_at_foot(&self, filler: Tree) -> Option<Tree> {
        let at = self.foot_address()?;
        self.replace_at(&at, filler)
    }

    /// Terminal labels of the frontier, left to right. Epsilon leaves and
    /// non-terminal leaves contribute nothing.
    pub fn yield_symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_yield(&mut out);
        out
    }

    fn collect_yield(&self, out: &mut Vec<Symbol>) {
        if self.is_leaf() {
            if self.label.is_terminal() {
                out.push(self.label.clone());
            }
        } else {
            for child in &self.children {
                child.collect_yield(out);
            }
        }
    }

    /// Every frontier node is a terminal or epsilon leaf.
    pub fn is_closed(&self) -> bool {
        if self.is_leaf() {
            !self.label.is_nonterminal()
        } else {
            self.children.iter().all(Tree::is_closed)
        }
    }

    pub fn labels(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.walk(&mut NodeAddress::root(), &mut |_, node| out.push(node.label.clone()));
        out
    }

    pub fn has_terminal_leaf(&self) -> bool {
        if self.is_leaf() {
            self.label.is_terminal()
        } else {
            self.children.iter().any(Tree::has_terminal_leaf)
        }
    }

    /// Structure-preserving relabeling.
    pub fn map_labels<E>(&self, f: &mut impl FnMut(&Symbol) -> Result<Symbol, E>) -> Result<Tree, E> {
        let mut children = Vec::with_capacity(self.children.len());
        for child in &self.children {
            children.push(child.map_labels(f)?);
        }
        Ok(Tree { label: f(&self.label)?, children, foot: self.foot, anchor: self.anchor })
    }

    /// Copy with every anchor flag cleared.
    pub fn without_anchors(&self) -> Tree {
        Tree {
            label: self.label.clone(),
            children: self.children.iter().map(Tree::without_anchors).collect(),
            foot: self.foot,
            anchor: false,
        }
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.foot == other.foot && self.children == other.children
    }
}

impl Eq for Tree {}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.label.hash(state);
        self.foot.hash(state);
        self.children.hash(state);
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.label
            .cmp(&other.label)
            .then(self.foot.cmp(&other.foot))
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_leaf() {
            if self.anchor {
                f.write_str("@")?;
            }
            write!(f, "{}", self.label)?;
            if self.foot {
                f.write_str("*")?;
            }
            return Ok(());
        }
        write!(f, "({}", self.label)?;
        for child in &self.children {
            write!(f, " {child}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sentence over terminal symbols. Ordered by length, then tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TokenString(pub Vec<Symbol>);

impl TokenString {
    /// Whitespace-separated tokens, each taken as a terminal.
    pub fn parse(s: &str) -> Self {
        TokenString(s.split_whitespace().map(Symbol::terminal).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for TokenString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TokenString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TokenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Canonical ordering for tree sets: by size, then structure.
pub fn canonical_order(trees: impl IntoIterator<Item = Tree>) -> Vec<Tree> {
    let mut out: Vec<Tree> = trees.into_iter().collect();
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}
