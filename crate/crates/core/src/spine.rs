//! Spine graphs, well-formed cycles and the regular-form decision.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use crate::cycles;
use crate::error::{Error, Result};
use crate::grammar::{ensure_valid, spine, splice_segments, NamedTree, TagGrammar};
use crate::tree::{NodeAddress, Symbol, Tree};

/// `<aux_name, index, segment>`. The segment's foot-flagged leaf marks where
/// the next segment along the spine continues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub aux_name: String,
    pub index: usize,
    pub segment: Tree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineEdge {
    pub source: Symbol,
    pub target: Symbol,
    pub label: EdgeLabel,
}

/// Reduced spine graph. Edges are numbered by position; reports call the
/// edge at position `i` `e{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpineGraph {
    pub vertices: BTreeSet<Symbol>,
    pub edges: Vec<SpineEdge>,
}

impl SpineGraph {
    pub fn edge_name(i: usize) -> String {
        format!("e{}", i + 1)
    }

    fn out_edges(&self, v: &Symbol) -> impl Iterator<Item = (usize, &SpineEdge)> {
        let v = v.clone();
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == v)
    }

    fn has_out_edge(&self, v: &Symbol, aux: &str, index: usize) -> bool {
        self.out_edges(v).any(|(_, e)| e.label.aux_name == aux && e.label.index == index)
    }
}

/// Edges of an elementary auxiliary tree, one per pair of consecutive kept
/// spine nodes. A spine node is kept when its label roots some auxiliary
/// tree; root and foot always are.
fn tree_edges(named: &NamedTree, roots: &BTreeSet<Symbol>) -> Result<Vec<SpineEdge>> {
    let aux = &named.tree;
    let path = spine(aux)?;
    let kept: Vec<&NodeAddress> = path
        .iter()
        .enumerate()
        .filter(|(i, a)| *i == 0 || *i == path.len() - 1 || roots.contains(&aux.get(a).unwrap().label))
        .map(|(_, a)| a)
        .collect();
    let mut edges = Vec::new();
    for (index, pair) in kept.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        let sub = aux.get(from).unwrap();
        let target = aux.get(to).unwrap().label.clone();
        let rel = NodeAddress(to.0[from.depth()..].to_vec());
        let segment = sub.replace_at(&rel, Tree::foot(target.clone())).unwrap();
        edges.push(SpineEdge {
            source: sub.label.clone(),
            target,
            label: EdgeLabel { aux_name: named.name.clone(), index, segment },
        });
    }
    Ok(edges)
}

/// The reduced spine graph of `g`. Spine nodes whose label roots no
/// auxiliary tree are fused into the surrounding edges of the same tree.
pub fn build_spine_graph(g: &TagGrammar) -> Result<SpineGraph> {
    ensure_valid(g)?;
    let roots = g.auxiliary_roots();
    let mut edges = Vec::new();
    for named in &g.auxiliary {
        edges.extend(tree_edges(named, &roots)?);
    }
    Ok(SpineGraph { vertices: roots, edges })
}

type Frame = (usize, usize);

fn aux_ids(sg: &SpineGraph) -> HashMap<&str, usize> {
    let mut ids = HashMap::new();
    for e in &sg.edges {
        let next = ids.len();
        ids.entry(e.label.aux_name.as_str()).or_insert(next);
    }
    ids
}

/// Stacks reachable from `stack` at `v` by pop-in-place moves only.
fn pop_closure(sg: &SpineGraph, names: &[&str], v: &Symbol, stack: Vec<Frame>) -> Vec<Vec<Frame>> {
    let mut out = vec![stack];
    loop {
        let top = out.last().unwrap();
        match top.last() {
            Some(&(aux, j)) if !sg.has_out_edge(v, names[aux], j + 1) => {
                let mut next = top.clone();
                next.pop();
                out.push(next);
            }
            _ => return out,
        }
    }
}

/// The stack after traversing `edge` from `stack`, if a move allows it.
fn step(stack: &[Frame], edge: &SpineEdge, aux: usize) -> Option<Vec<Frame>> {
    let j = edge.label.index;
    let mut next = stack.to_vec();
    if j == 0 {
        next.push((aux, 0));
        Some(next)
    } else if stack.last() == Some(&(aux, j - 1)) {
        *next.last_mut().unwrap() = (aux, j);
        Some(next)
    } else {
        None
    }
}

/// Whether the stack automaton can trace exactly this edge sequence,
/// starting and halting with an empty stack.
pub fn trace_wfc(sg: &SpineGraph, walk: &[usize]) -> Result<bool> {
    for &e in walk {
        if e >= sg.edges.len() {
            return Err(Error::UnknownEdge(e));
        }
    }
    for (position, pair) in walk.windows(2).enumerate() {
        if sg.edges[pair[0]].target != sg.edges[pair[1]].source {
            return Err(Error::NotAWalk { position: position + 1 });
        }
    }
    let ids = aux_ids(sg);
    let mut names = vec![""; ids.len()];
    for (&n, &i) in &ids {
        names[i] = n;
    }
    let Some(&first) = walk.first() else {
        return Ok(true);
    };
    let mut stacks: BTreeSet<Vec<Frame>> = [Vec::new()].into();
    let mut at = sg.edges[first].source.clone();
    for &e in walk {
        let edge = &sg.edges[e];
        let aux = ids[edge.label.aux_name.as_str()];
        let mut next = BTreeSet::new();
        for s in stacks {
            for s in pop_closure(sg, &names, &at, s) {
                if let Some(t) = step(&s, edge, aux) {
                    next.insert(t);
                }
            }
        }
        stacks = next;
        at = edge.target.clone();
        if stacks.is_empty() {
            return Ok(false);
        }
    }
    Ok(stacks.into_iter().any(|s| pop_closure(sg, &names, &at, s).last().unwrap().is_empty()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    /// Cyclic vertex list, first = last.
    pub vertex_sequence: Vec<Symbol>,
    /// Positions into the graph's edge list.
    pub edges: Vec<usize>,
    pub edge_sequence: Vec<EdgeLabel>,
    pub cycle_tree: Tree,
    pub wfc_equivalent: Option<bool>,
}

impl CycleWitness {
    /// One report line: edges, vertices, tree and verdict.
    pub fn report_line(&self) -> String {
        let edges: Vec<String> = self.edges.iter().map(|&e| SpineGraph::edge_name(e)).collect();
        let vertices: Vec<&str> = self.vertex_sequence.iter().map(Symbol::name).collect();
        let verdict = match self.wfc_equivalent {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        format!("cycle [{}] {} tree {} equivalent: {}", edges.join(","), vertices.join("->"), self.cycle_tree, verdict)
    }
}

/// All simple cycles of `sg`, once per rotation and per choice of parallel
/// edge.
pub fn simple_cycles(sg: &SpineGraph) -> Vec<CycleWitness> {
    let vertices: Vec<&Symbol> = sg.vertices.iter().collect();
    let index: HashMap<&Symbol, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let pairs: Vec<(usize, usize)> = sg.edges.iter().map(|e| (index[&e.source], index[&e.target])).collect();
    cycles::simple_cycles(vertices.len(), &pairs)
        .into_iter()
        .map(|edges| {
            let mut vertex_sequence: Vec<Symbol> = edges.iter().map(|&e| sg.edges[e].source.clone()).collect();
            vertex_sequence.push(vertex_sequence[0].clone());
            let segments: Vec<Tree> = edges.iter().map(|&e| sg.edges[e].label.segment.clone()).collect();
            CycleWitness {
                vertex_sequence,
                edge_sequence: edges.iter().map(|&e| sg.edges[e].label.clone()).collect(),
                edges,
                cycle_tree: splice_segments(&segments).expect("segments chain at their feet"),
                wfc_equivalent: None,
            }
        })
        .collect()
}

/// Matches `segment` against the top of `target`. On success returns the
/// address (relative to `target`) where the segment's foot landed.
fn match_segment(segment: &Tree, target: &Tree) -> Option<NodeAddress> {
    fn go(seg: &Tree, t: &Tree, here: &mut NodeAddress) -> Option<NodeAddress> {
        if seg.label != t.label {
            return None;
        }
        if seg.foot {
            return Some(here.clone());
        }
        if t.foot || seg.children.len() != t.children.len() {
            return None;
        }
        let mut found = None;
        for (i, (s, c)) in seg.children.iter().zip(&t.children).enumerate() {
            if s.has_foot() {
                here.0.push(i);
                let r = go(s, c, here);
                here.0.pop();
                found = Some(r?);
            } else if s != c {
                return None;
            }
        }
        found
    }
    go(segment, target, &mut NodeAddress::root())
}

/// Longest walk the equivalence search can need for `tree`: every segment
/// is non-empty, so each edge moves the foot position down at least one
/// level.
pub fn wfc_search_bound(tree: &Tree) -> usize {
    tree.foot_address().map_or(0, |f| f.depth())
}

/// Whether some wfc of `sg` concatenates to exactly `tree`.
pub fn has_equivalent_wfc(sg: &SpineGraph, tree: &Tree) -> bool {
    let Some(foot) = tree.foot_address() else {
        return false;
    };
    let ids = aux_ids(sg);
    let mut names = vec![""; ids.len()];
    for (&n, &i) in &ids {
        names[i] = n;
    }
    let mut seen: HashSet<(NodeAddress, Vec<Frame>)> = HashSet::new();
    let mut todo = vec![(NodeAddress::root(), Vec::new())];
    while let Some((addr, stack)) = todo.pop() {
        if !seen.insert((addr.clone(), stack.clone())) {
            continue;
        }
        let sub = tree.get(&addr).unwrap();
        let v = &sub.label;
        for s in pop_closure(sg, &names, v, stack) {
            if addr == foot {
                if s.is_empty() {
                    return true;
                }
                continue;
            }
            if s.len() > wfc_search_bound(tree) {
                continue;
            }
            for (_, edge) in sg.out_edges(v) {
                let Some(next) = step(&s, edge, ids[edge.label.aux_name.as_str()]) else {
                    continue;
                };
                if let Some(rel) = match_segment(&edge.label.segment, sub) {
                    todo.push((addr.join(&rel), next));
                }
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularFormCheck {
    pub is_regular: bool,
    pub witnesses: Vec<CycleWitness>,
}

/// Regular form holds iff every simple cycle of the spine graph is
/// equivalent to a wfc.
pub fn check_regular_form(g: &TagGrammar) -> Result<RegularFormCheck> {
    let sg = build_spine_graph(g)?;
    Ok(check_graph(&sg))
}

pub fn check_graph(sg: &SpineGraph) -> RegularFormCheck {
    let mut cache: HashMap<Tree, bool> = HashMap::new();
    let mut witnesses = simple_cycles(sg);
    for w in &mut witnesses {
        let ok = *cache.entry(w.cycle_tree.clone()).or_insert_with(|| has_equivalent_wfc(sg, &w.cycle_tree));
        w.wfc_equivalent = Some(ok);
    }
    RegularFormCheck { is_regular: witnesses.iter().all(|w| w.wfc_equivalent == Some(true)), witnesses }
}

/// Passes allowed before extension gives up.
pub const EXTENSION_PASSES: usize = 2;

/// Adds the tree of every simple cycle that is not equivalent to a wfc as a
/// new elementary auxiliary tree. Returns the extended grammar and the
/// added trees in order.
pub fn extend_to_regular_form(g: &TagGrammar) -> Result<(TagGrammar, Vec<Tree>)> {
    let mut out = g.clone();
    let mut added = Vec::new();
    for _ in 0..EXTENSION_PASSES {
        let check = check_regular_form(&out)?;
        if check.is_regular {
            return Ok((out, added));
        }
        let mut present: HashSet<Tree> = out.auxiliary.iter().map(|n| n.tree.clone()).collect();
        for w in check.witnesses.into_iter().filter(|w| w.wfc_equivalent == Some(false)) {
            if present.insert(w.cycle_tree.clone()) {
                let name = out.fresh_name("x");
                out.auxiliary.push(NamedTree::new(name, w.cycle_tree.clone()));
                added.push(w.cycle_tree);
            }
        }
    }
    if check_regular_form(&out)?.is_regular {
        Ok((out, added))
    } else {
        Err(Error::ExtensionDiverged(EXTENSION_PASSES))
    }
}

fn dot_id(s: &Symbol) -> String {
    let name = s.name();
    if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        name.to_string()
    } else {
        format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// DOT rendering, edges in graph order labelled `aux:index`.
pub fn to_dot(sg: &SpineGraph) -> String {
    if sg.edges.is_empty() {
        return "digraph{}\n".to_string();
    }
    let mut out = String::from("digraph{\n");
    for e in &sg.edges {
        let label = format!("{}:{}", e.label.aux_name, e.label.index).replace('"', "\\\"");
        writeln!(out, "  {} -> {} [label=\"{}\"];", dot_id(&e.source), dot_id(&e.target), label).unwrap();
    }
    out.push_str("}\n");
    out
}
