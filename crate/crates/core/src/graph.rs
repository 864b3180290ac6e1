//! The graph with loops attached to a monomial set, and its elementary
//! invariants: cohesion, bipartiteness, edge graph, diameter, complement,
//! edge-pinching.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{Monomial2, MonomialSet};

/// Graph with loops on vertices `1..=n`. Each edge or loop is a generator;
/// `edge_index` maps the vertex pair back to the 1-based generator index.
#[derive(Debug, Clone)]
pub struct LoopGraph {
    n: usize,
    /// Neighbor lists; a loop contributes its base vertex once.
    adj: Vec<Vec<usize>>,
    edge_index: BTreeMap<(usize, usize), usize>,
}

impl MonomialSet {
    pub fn graph(&self) -> LoopGraph {
        let n = self.n();
        let mut adj = vec![Vec::new(); n + 1];
        let mut edge_index = BTreeMap::new();
        for (k, g) in self.gens().iter().enumerate() {
            edge_index.insert((g.lo, g.hi), k + 1);
            if g.is_loop() {
                adj[g.lo].push(g.lo);
            } else {
                adj[g.lo].push(g.hi);
                adj[g.hi].push(g.lo);
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        LoopGraph { n, adj, edge_index }
    }
}

impl LoopGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// 1-based generator index of the edge or loop on `(u, v)`.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u <= v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    pub fn loop_at(&self, v: usize) -> Option<usize> {
        self.edge_index.get(&(v, v)).copied()
    }

    pub fn has_loops(&self) -> bool {
        self.edge_index.keys().any(|&(a, b)| a == b)
    }

    /// Vertices incident to at least one generator.
    pub fn covered_vertices(&self) -> Vec<usize> {
        (1..=self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    /// Connected components of the covered vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for start in self.covered_vertices() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// DOT rendering; loops appear as self-edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph monomials {\n");
        for v in 1..=self.n {
            out.push_str(&format!("  x{v};\n"));
        }
        for (&(a, b), idx) in &self.edge_index {
            out.push_str(&format!("  x{a} -- x{b} [label=\"f{idx}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Outcome of the cohesion test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Cohesion {
    Cohesive {
        /// Declared variables never used by a generator. They are reported
        /// but never counted as incohesion.
        isolated_variables: Vec<usize>,
    },
    Partitioned { left: Vec<usize>, right: Vec<usize> },
}

/// True iff the covered vertices form one connected component.
pub fn cohesion(set: &MonomialSet) -> Cohesion {
    let g = set.graph();
    let comps = g.components();
    if comps.len() <= 1 {
        Cohesion::Cohesive { isolated_variables: set.unused_variables() }
    } else {
        let left = comps[0].clone();
        let right = comps[1..].iter().flatten().copied().collect();
        Cohesion::Partitioned { left, right }
    }
}

pub fn is_cohesive(set: &MonomialSet) -> bool {
    matches!(cohesion(set), Cohesion::Cohesive { .. })
}

/// Errs with the partition witness when `set` is not cohesive.
pub fn require_cohesive(set: &MonomialSet) -> Result<()> {
    match cohesion(set) {
        Cohesion::Cohesive { .. } => Ok(()),
        Cohesion::Partitioned { left, right } => Err(Error::Incohesive { left, right }),
    }
}

/// Bipartiteness of the underlying graph; any loop is an odd cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Bipartiteness {
    Bipartite {
        /// Color (0/1) per vertex, index 0 unused; uncovered vertices get 0.
        coloring: Vec<u8>,
    },
    OddCycle {
        /// Vertex list of an odd closed walk witness; a single vertex for a loop.
        vertices: Vec<usize>,
    },
}

pub fn bipartiteness(g: &LoopGraph) -> Bipartiteness {
    for v in 1..=g.n() {
        if g.loop_at(v).is_some() {
            return Bipartiteness::OddCycle { vertices: vec![v] };
        }
    }
    let n = g.n();
    let mut color = vec![u8::MAX; n + 1];
    let mut parent = vec![0usize; n + 1];
    for start in 1..=n {
        if color[start] != u8::MAX || g.neighbors(start).is_empty() {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = color[u] ^ 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if color[w] == color[u] && w != u {
                    // Walk both BFS branches up to the meeting point.
                    let path_to_root = |mut x: usize| {
                        let mut path = vec![x];
                        while x != start && parent[x] != 0 {
                            x = parent[x];
                            path.push(x);
                        }
                        path
                    };
                    let pu = path_to_root(u);
                    let pw = path_to_root(w);
                    let common: std::collections::BTreeSet<_> = pu.iter().copied().collect();
                    let meet = *pw.iter().find(|x| common.contains(x)).unwrap();
                    let mut cycle: Vec<usize> =
                        pu.iter().take_while(|&&x| x != meet).copied().collect();
                    cycle.push(meet);
                    let tail: Vec<usize> =
                        pw.iter().take_while(|&&x| x != meet).copied().collect();
                    cycle.extend(tail.into_iter().rev());
                    return Bipartiteness::OddCycle { vertices: cycle };
                }
            }
        }
    }
    for c in color.iter_mut() {
        if *c == u8::MAX {
            *c = 0;
        }
    }
    Bipartiteness::Bipartite { coloring: color }
}

pub fn is_bipartite(g: &LoopGraph) -> bool {
    matches!(bipartiteness(g), Bipartiteness::Bipartite { .. })
}

/// Simple graph on vertices `1..=n`, used for edge graphs and complements.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n + 1];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Longest shortest path; `None` means disconnected (infinite).
    pub fn diameter(&self) -> Option<usize> {
        if self.n == 0 {
            return Some(0);
        }
        let mut best = 0;
        for start in 1..=self.n {
            let mut dist = vec![usize::MAX; self.n + 1];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            for v in 1..=self.n {
                if dist[v] == usize::MAX {
                    return None;
                }
                best = best.max(dist[v]);
            }
        }
        Some(best)
    }

    pub fn to_dot(&self, label: &str) -> String {
        let mut out = format!("graph {label} {{\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {label}{v};\n"));
        }
        for a in 1..=self.n {
            for &b in &self.adj[a] {
                if a < b {
                    out.push_str(&format!("  {label}{a} -- {label}{b};\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The edge graph: one vertex per generator, adjacent iff the generators
/// share a variable. Always simple.
pub fn edge_graph(set: &MonomialSet) -> SimpleGraph {
    let m = set.m();
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            if set.gen(i).shared_var(set.gen(j)).is_some() {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::new(m, &edges)
}

/// `I = (f)` is linearly presented iff the edge graph has diameter <= 2.
/// Requires a cohesive set.
pub fn is_linearly_presented(set: &MonomialSet) -> Result<bool> {
    require_cohesive(set)?;
    Ok(edge_graph(set).diameter().map_or(false, |d| d <= 2))
}

/// Searches the complement of a simple graph for an induced 4-cycle.
/// Errs when the input has loops.
pub fn complement_induced_c4(set: &MonomialSet) -> Result<Option<[usize; 4]>> {
    let g = set.graph();
    if g.has_loops() {
        return Err(Error::LoopsPresent);
    }
    let n = set.n();
    let comp_edge = |a: usize, b: usize| a != b && g.edge_between(a, b).is_none();
    // Brute force over 4-subsets: an induced C4 has each vertex of degree 2
    // within the subset, i.e. one of the three pairings is a 4-cycle with
    // both diagonals absent.
    for a in 1..=n {
        for b in (a + 1)..=n {
            for c in (b + 1)..=n {
                for d in (c + 1)..=n {
                    let quad = [a, b, c, d];
                    // Orderings a-b-c-d, a-b-d-c, a-c-b-d cover all C4s.
                    let cycles = [[a, b, c, d], [a, b, d, c], [a, c, b, d]];
                    for cyc in cycles {
                        let ring = (0..4).all(|k| comp_edge(cyc[k], cyc[(k + 1) % 4]));
                        let diag1 = comp_edge(cyc[0], cyc[2]);
                        let diag2 = comp_edge(cyc[1], cyc[3]);
                        if ring && !diag1 && !diag2 {
                            let _ = quad;
                            return Ok(Some(cyc));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Result of an edge-pinching `x_j -> x_i`.
#[derive(Debug, Clone, Serialize)]
pub struct Pinched {
    pub set: MonomialSet,
    /// Pairs of original generator indices whose images collapsed.
    pub merged: Vec<(usize, usize)>,
    /// `old_to_new[v]` is the new index of old variable `v` (index 0 unused).
    pub old_to_new: Vec<usize>,
}

/// Substitutes `x_j := x_i` along a proper edge `(i, j)` and relabels the
/// remaining variables densely. Collapsing generator pairs are reported,
/// not silently merged away without trace.
pub fn pinch(set: &MonomialSet, i: usize, j: usize) -> Result<Pinched> {
    if i == j || set.graph().edge_between(i, j).is_none() {
        return Err(Error::NotAProperEdge { i, j });
    }
    let n = set.n();
    let mut old_to_new = vec![0usize; n + 1];
    let mut next = 0;
    for v in 1..=n {
        if v == j {
            continue;
        }
        next += 1;
        old_to_new[v] = next;
    }
    old_to_new[j] = old_to_new[i];
    let mut images: Vec<(Monomial2, usize)> = Vec::new(); // (image, original index)
    let mut merged = Vec::new();
    let mut kept: Vec<Monomial2> = Vec::new();
    for (k, gmon) in set.gens().iter().enumerate() {
        let img = Monomial2::new(old_to_new[gmon.lo], old_to_new[gmon.hi]);
        if let Some(&(_, first)) = images.iter().find(|(m, _)| *m == img) {
            merged.push((first, k + 1));
        } else {
            images.push((img, k + 1));
            kept.push(img);
        }
    }
    let new_set = MonomialSet::new(n - 1, kept)?;
    Ok(Pinched { set: new_set, merged, old_to_new })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn villa() -> MonomialSet {
        MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap()
    }

    fn square() -> MonomialSet {
        MonomialSet::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap()
    }

    #[test]
    fn cohesion_witnesses() {
        assert!(is_cohesive(&square()));
        assert!(is_cohesive(&villa()));
        let split = MonomialSet::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        match cohesion(&split) {
            Cohesion::Partitioned { left, right } => {
                assert_eq!(left, vec![1, 2]);
                assert_eq!(right, vec![3, 4]);
            }
            _ => panic!("expected partition"),
        }
    }

    #[test]
    fn loop_alone_on_extra_vertex_breaks_cohesion() {
        let set = MonomialSet::from_pairs(3, &[(1, 2), (3, 3)]).unwrap();
        assert!(!is_cohesive(&set));
    }

    #[test]
    fn edge_graph_of_mixed_example() {
        // {x1^2, x1x2, x2x3, x1x3}: f1 adjacent to f2, f4; f2-f3, f2-f4, f3-f4.
        let set = MonomialSet::from_pairs(3, &[(1, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let l = edge_graph(&set);
        assert_eq!(l.neighbors(1), &[2, 4]);
        assert_eq!(l.neighbors(2), &[1, 3, 4]);
        assert_eq!(l.neighbors(3), &[2, 4]);
        assert_eq!(l.neighbors(4), &[1, 2, 3]);
    }

    #[test]
    fn edge_graph_single_vertex_and_triangle() {
        let single = MonomialSet::from_pairs(2, &[(1, 2)]).unwrap();
        assert_eq!(edge_graph(&single).neighbors(1), &[] as &[usize]);
        let tri = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let l = edge_graph(&tri);
        assert_eq!(l.diameter(), Some(1));
    }

    #[test]
    fn diameter_examples() {
        let path = SimpleGraph::new(4, &[(1, 2), (2, 3), (3, 4)]);
        assert_eq!(path.diameter(), Some(3));
        let disconnected = SimpleGraph::new(3, &[(1, 2)]);
        assert_eq!(disconnected.diameter(), None);
    }

    #[test]
    fn bipartite_examples() {
        assert!(is_bipartite(&square().graph()));
        let tri = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        match bipartiteness(&tri.graph()) {
            Bipartiteness::OddCycle { vertices } => assert_eq!(vertices.len(), 3),
            _ => panic!("triangle must not be bipartite"),
        }
        // A loop is an odd cycle.
        match bipartiteness(&villa().graph()) {
            Bipartiteness::OddCycle { vertices } => assert_eq!(vertices.len(), 1),
            _ => panic!("loops force non-bipartite"),
        }
    }

    #[test]
    fn linear_presentation_path_is_not() {
        let path = MonomialSet::from_pairs(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(is_linearly_presented(&path).unwrap(), false);
        let villa = villa();
        assert_eq!(is_linearly_presented(&villa).unwrap(), false);
    }

    #[test]
    fn linear_presentation_k4() {
        let k4 = MonomialSet::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert!(is_linearly_presented(&k4).unwrap());
    }

    #[test]
    fn complement_c4_cases() {
        let k4 = MonomialSet::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert_eq!(complement_induced_c4(&k4).unwrap(), None);
        // 8-cycle: complement contains an induced 4-cycle.
        let oct = MonomialSet::from_pairs(
            8,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 1)],
        )
        .unwrap();
        assert!(complement_induced_c4(&oct).unwrap().is_some());
        assert!(complement_induced_c4(&villa()).is_err());
    }

    #[test]
    fn pinch_square_gives_loop_triangle() {
        let p = pinch(&square(), 1, 2).unwrap();
        assert_eq!(p.set.n(), 3);
        assert_eq!(p.merged, vec![]);
        // x2 -> x1, relabel {1,3,4} -> {1,2,3}: images x1^2, x1*x2, x2*x3, x3*x1.
        assert_eq!(
            p.set.gens(),
            &[
                Monomial2::new(1, 1),
                Monomial2::new(1, 2),
                Monomial2::new(2, 3),
                Monomial2::new(3, 1)
            ]
        );
        // Bipartite pinch preserves the rank.
        assert_eq!(square().algebra_dimension(), 3);
        assert_eq!(p.set.algebra_dimension(), 3);
    }

    #[test]
    fn pinch_non_edge_is_rejected() {
        assert!(matches!(pinch(&square(), 1, 3), Err(Error::NotAProperEdge { .. })));
        assert!(matches!(pinch(&square(), 2, 2), Err(Error::NotAProperEdge { .. })));
    }

    #[test]
    fn pinch_triangle_collapses_generators() {
        let tri = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let p = pinch(&tri, 1, 2).unwrap();
        assert_eq!(p.set.m(), 2); // x1^2 and x1*x2 survive; x2x3, x1x3 collapse
        assert_eq!(p.merged.len(), 1);
    }

    #[test]
    fn dot_is_well_formed() {
        let dot = villa().graph().to_dot();
        assert!(dot.starts_with("graph"));
        assert_eq!(dot.matches("--").count(), 5);
        assert!(dot.ends_with("}\n"));
    }
}
