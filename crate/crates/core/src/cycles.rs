//! Simple cycles and simple paths in small directed multigraphs.
//!
//! Vertices are `0..n`, edges are `(source, target)` pairs addressed by
//! their index. Parallel edges are distinct, so a cycle through two
//! vertices joined by two edges each way is reported four times.

/// Every directed cycle with pairwise-distinct vertices, as edge-index
/// sequences. A cycle is reported once per vertex it passes through
/// (each rotation starts at a different vertex). Output is ordered by
/// start vertex, then by edge indices.
pub fn simple_cycles(num_vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let out_edges = adjacency(num_vertices, edges);
    let mut cycles = Vec::new();
    let mut on_path = vec![false; num_vertices];
    let mut path = Vec::new();
    for start in 0..num_vertices {
        on_path[start] = true;
        cycle_dfs(start, start, edges, &out_edges, &mut on_path, &mut path, &mut cycles);
        on_path[start] = false;
    }
    cycles
}

fn cycle_dfs(
    start: usize,
    at: usize,
    edges: &[(usize, usize)],
    out_edges: &[Vec<usize>],
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
) {
    for &e in &out_edges[at] {
        let next = edges[e].1;
        path.push(e);
        if next == start {
            cycles.push(path.clone());
        } else if !on_path[next] {
            on_path[next] = true;
            cycle_dfs(start, next, edges, out_edges, on_path, path, cycles);
            on_path[next] = false;
        }
        path.pop();
    }
}

/// Every directed path from `from` with pairwise-distinct vertices that ends
/// at the first vertex satisfying `is_target`. Target vertices are not
/// passed through.
pub fn simple_paths(
    num_vertices: usize,
    edges: &[(usize, usize)],
    from: usize,
    is_target: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let out_edges = adjacency(num_vertices, edges);
    let mut paths = Vec::new();
    let mut on_path = vec![false; num_vertices];
    on_path[from] = true;
    path_dfs(from, edges, &out_edges, &is_target, &mut on_path, &mut Vec::new(), &mut paths);
    paths
}

fn path_dfs(
    at: usize,
    edges: &[(usize, usize)],
    out_edges: &[Vec<usize>],
    is_target: &impl Fn(usize) -> bool,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
) {
    for &e in &out_edges[at] {
        let next = edges[e].1;
        if on_path[next] {
            continue;
        }
        path.push(e);
        if is_target(next) {
            paths.push(path.clone());
        } else {
            on_path[next] = true;
            path_dfs(next, edges, out_edges, is_target, on_path, path, paths);
            on_path[next] = false;
        }
        path.pop();
    }
}

fn adjacency(num_vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); num_vertices];
    for (i, &(s, _)) in edges.iter().enumerate() {
        out[s].push(i);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop() {
        assert_eq!(simple_cycles(1, &[(0, 0)]), vec![vec![0]]);
    }

    #[test]
    fn two_vertex_multigraph_has_eight_rotations() {
        // A=0, B=1; e1 A->B, e2 B->A, e3 B->A, e4 A->B
        let edges = [(0, 1), (1, 0), (1, 0), (0, 1)];
        let cycles = simple_cycles(2, &edges);
        assert_eq!(
            cycles,
            vec![vec![0, 1], vec![0, 2], vec![3, 1], vec![3, 2], vec![1, 0], vec![1, 3], vec![2, 0], vec![2, 3]]
        );
    }

    #[test]
    fn no_edges() {
        assert!(simple_cycles(3, &[]).is_empty());
    }

    #[test]
    fn triangle_with_chord() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 2)];
        let cycles = simple_cycles(3, &edges);
        // 0->1->2->0 (3 rotations) and 0->2->0 (2 rotations)
        assert_eq!(cycles.len(), 5);
        for c in &cycles {
            let mut seen: Vec<usize> = c.iter().map(|&e| edges[e].0).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), c.len());
        }
    }

    #[test]
    fn paths_stop_at_targets() {
        let edges = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let paths = simple_paths(4, &edges, 0, |v| v == 2);
        assert_eq!(paths, vec![vec![0, 1], vec![2]]);
    }
}
