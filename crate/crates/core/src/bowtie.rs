//! Bow ties: two edge-disjoint odd cycles (loops allowed) joined by a
//! unique path, possibly degenerated to a shared vertex. Induced bow ties
//! drive the three headline decisions: polarizability, normality and the
//! odd cycle condition.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{cohesion, require_cohesive, Cohesion};
use crate::monomial::MonomialSet;
use crate::walk::{canonical_edges, Walk};

/// An odd cycle, either a loop (length 1) or a simple cycle of odd length,
/// as an ordered edge list with its vertex ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCycle {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl OddCycle {
    fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().copied().collect()
    }

    fn edge_set(&self) -> BTreeSet<usize> {
        self.edges.iter().copied().collect()
    }
}

/// All loops plus all odd simple cycles; with `chordless_only`, only those
/// with no chord among their vertices.
pub fn enumerate_odd_cycles(set: &MonomialSet, chordless_only: bool) -> Vec<OddCycle> {
    let g = set.graph();
    let mut out = Vec::new();
    for v in 1..=set.n() {
        if let Some(e) = g.loop_at(v) {
            out.push(OddCycle { edges: vec![e], vertices: vec![v] });
        }
    }
    for cyc in crate::walk::enumerate_simple_cycles(set, set.n()) {
        if cyc.len() % 2 == 0 {
            continue;
        }
        let oc = ordered_cycle(set, &cyc);
        if chordless_only && has_chord(set, &oc) {
            continue;
        }
        out.push(oc);
    }
    out.sort_by(|a, b| {
        let ka = canonical_edges(&a.edges);
        let kb = canonical_edges(&b.edges);
        (a.edges.len(), ka).cmp(&(b.edges.len(), kb))
    });
    out
}

fn ordered_cycle(set: &MonomialSet, cyc: &[usize]) -> OddCycle {
    // enumerate_simple_cycles returns edges in traversal order.
    let mut vertices = Vec::with_capacity(cyc.len());
    if cyc.len() == 1 {
        return OddCycle { edges: cyc.to_vec(), vertices: vec![set.gen(cyc[0]).lo] };
    }
    let shared = set.gen(cyc[0]).shared_var(set.gen(cyc[1])).unwrap();
    let mut cur = set.gen(cyc[0]).other(shared);
    for &e in cyc {
        vertices.push(cur);
        cur = set.gen(e).other(cur);
    }
    OddCycle { edges: cyc.to_vec(), vertices }
}

/// A proper edge joining two non-consecutive vertices of the cycle.
fn has_chord(set: &MonomialSet, c: &OddCycle) -> bool {
    if c.edges.len() < 3 {
        return false;
    }
    let g = set.graph();
    let vs = &c.vertices;
    let edge_set = c.edge_set();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if let Some(e) = g.edge_between(vs[i], vs[j]) {
                if !set.gen(e).is_loop() && !edge_set.contains(&e) {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BowTieKind {
    PathDegenerate,
    Monedge,
    General,
}

/// Two edge-disjoint odd cycles joined by a unique path. `path` is empty
/// iff the cycles share exactly one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BowTie {
    pub cycle1: OddCycle,
    pub cycle2: OddCycle,
    /// Ordered edge list from a vertex of `cycle1` to a vertex of `cycle2`.
    pub path: Vec<usize>,
}

impl BowTie {
    pub fn kind(&self) -> BowTieKind {
        match self.path.len() {
            0 => BowTieKind::PathDegenerate,
            1 => BowTieKind::Monedge,
            _ => BowTieKind::General,
        }
    }

    /// Number of structural cycles that are loops (0, 1 or 2).
    pub fn loop_count(&self) -> usize {
        usize::from(self.cycle1.edges.len() == 1) + usize::from(self.cycle2.edges.len() == 1)
    }

    /// All vertices of the configuration, path interior included.
    pub fn vertex_set(&self, set: &MonomialSet) -> BTreeSet<usize> {
        let mut s = self.cycle1.vertex_set();
        s.extend(self.cycle2.vertex_set());
        for &e in &self.path {
            s.insert(set.gen(e).lo);
            s.insert(set.gen(e).hi);
        }
        s
    }

    pub fn edge_set(&self) -> BTreeSet<usize> {
        let mut s = self.cycle1.edge_set();
        s.extend(self.cycle2.edge_set());
        s.extend(self.path.iter().copied());
        s
    }

    /// The even closed walk supported on the bow tie: around cycle1 from
    /// the attachment vertex, along the path, around cycle2, back.
    pub fn to_walk(&self, set: &MonomialSet) -> Walk {
        let (a1, a2) = self.attachments(set);
        let mut edges = rotate_cycle(set, &self.cycle1, a1);
        edges.extend(self.path.iter().copied());
        edges.extend(rotate_cycle(set, &self.cycle2, a2));
        edges.extend(self.path.iter().rev().copied());
        Walk::new(set, edges).expect("bow tie supports an even closed walk")
    }

    /// Attachment vertices on cycle1 and cycle2 (equal when degenerate).
    pub fn attachments(&self, set: &MonomialSet) -> (usize, usize) {
        if self.path.is_empty() {
            let shared = *self
                .cycle1
                .vertex_set()
                .intersection(&self.cycle2.vertex_set())
                .next()
                .expect("degenerate bow tie shares a vertex");
            return (shared, shared);
        }
        let pv = path_vertex_chain(set, &self.path);
        let (s, e) = (pv[0], pv[pv.len() - 1]);
        if self.cycle1.vertex_set().contains(&s) {
            (s, e)
        } else {
            (e, s)
        }
    }

    pub fn canonical_walk_key(&self, set: &MonomialSet) -> Vec<usize> {
        self.to_walk(set).canonical_key().to_vec()
    }
}

/// Vertex chain v0..vk of an ordered path edge list.
fn path_vertex_chain(set: &MonomialSet, path: &[usize]) -> Vec<usize> {
    if path.len() == 1 {
        let g = set.gen(path[0]);
        return vec![g.lo, g.hi];
    }
    let first = set.gen(path[0]);
    let shared = first.shared_var(set.gen(path[1])).unwrap();
    let mut cur = first.other(shared);
    let mut chain = vec![cur];
    for &e in path {
        cur = set.gen(e).other(cur);
        chain.push(cur);
    }
    chain
}

/// Rotates a cycle's edge list to start and end at `anchor`.
fn rotate_cycle(set: &MonomialSet, c: &OddCycle, anchor: usize) -> Vec<usize> {
    if c.edges.len() == 1 {
        return c.edges.clone();
    }
    let pos = c
        .vertices
        .iter()
        .position(|&v| v == anchor)
        .expect("anchor lies on the cycle");
    let mut out = c.edges[pos..].to_vec();
    out.extend_from_slice(&c.edges[..pos]);
    let _ = set;
    out
}

/// All bow ties of the graph, deduplicated under swapping the two cycles.
/// Path-degenerate configurations are included with an empty path.
pub fn enumerate_bowties(set: &MonomialSet) -> Vec<BowTie> {
    let odd = enumerate_odd_cycles(set, false);
    let g = set.graph();
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..odd.len() {
        for j in (i + 1)..odd.len() {
            let (c1, c2) = (&odd[i], &odd[j]);
            if !c1.edge_set().is_disjoint(&c2.edge_set()) {
                continue;
            }
            let v1 = c1.vertex_set();
            let v2 = c2.vertex_set();
            let shared: Vec<usize> = v1.intersection(&v2).copied().collect();
            match shared.len() {
                0 => {
                    for path in connecting_paths(set, &g, &v1, &v2) {
                        push_bowtie(set, &mut seen, &mut out, c1, c2, path);
                    }
                }
                1 => push_bowtie(set, &mut seen, &mut out, c1, c2, Vec::new()),
                _ => {}
            }
        }
    }
    out.sort_by_key(|b| {
        let w = b.to_walk(set);
        (w.len(), w.canonical_key().to_vec())
    });
    out
}

fn push_bowtie(
    set: &MonomialSet,
    seen: &mut BTreeSet<(Vec<usize>, Vec<usize>, Vec<usize>)>,
    out: &mut Vec<BowTie>,
    c1: &OddCycle,
    c2: &OddCycle,
    path: Vec<usize>,
) {
    let k1: Vec<usize> = c1.edge_set().into_iter().collect();
    let k2: Vec<usize> = c2.edge_set().into_iter().collect();
    let mut pk: Vec<usize> = path.clone();
    pk.sort_unstable();
    let key = if k1 <= k2 { (k1.clone(), k2.clone(), pk.clone()) } else { (k2.clone(), k1.clone(), pk) };
    if seen.insert(key) {
        out.push(BowTie { cycle1: c1.clone(), cycle2: c2.clone(), path });
        let _ = set;
    }
}

/// Simple paths from a vertex of `v1` to a vertex of `v2` whose interior
/// avoids both cycles.
fn connecting_paths(
    set: &MonomialSet,
    g: &crate::graph::LoopGraph,
    v1: &BTreeSet<usize>,
    v2: &BTreeSet<usize>,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for &start in v1 {
        let mut edges = Vec::new();
        let mut visited = BTreeSet::from([start]);
        path_dfs(set, g, start, v1, v2, &mut visited, &mut edges, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn path_dfs(
    set: &MonomialSet,
    g: &crate::graph::LoopGraph,
    cur: usize,
    v1: &BTreeSet<usize>,
    v2: &BTreeSet<usize>,
    visited: &mut BTreeSet<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for &w in g.neighbors(cur) {
        if w == cur || visited.contains(&w) {
            continue;
        }
        let e = g.edge_between(cur, w).unwrap();
        if v2.contains(&w) {
            let mut p = edges.clone();
            p.push(e);
            out.push(p);
            continue;
        }
        if v1.contains(&w) {
            continue;
        }
        visited.insert(w);
        edges.push(e);
        path_dfs(set, g, w, v1, v2, visited, edges, out);
        edges.pop();
        visited.remove(&w);
    }
    let _ = set;
}

/// True iff no proper edge of the graph joins two bow-tie vertices outside
/// the bow tie's own edges. Extra loops at bow-tie vertices are deletable
/// and never spoil inducedness.
pub fn is_induced_bowtie(set: &MonomialSet, b: &BowTie) -> bool {
    let g = set.graph();
    let mut verts = b.cycle1.vertex_set();
    verts.extend(b.cycle2.vertex_set());
    if !b.path.is_empty() {
        verts.extend(path_vertex_chain(set, &b.path));
    }
    let own = b.edge_set();
    let vs: Vec<usize> = verts.into_iter().collect();
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if let Some(e) = g.edge_between(vs[i], vs[j]) {
                if !own.contains(&e) {
                    return false;
                }
            }
        }
    }
    true
}

/// Outcome of the polarizability decision with its companions.
#[derive(Debug, Clone, Serialize)]
pub struct PolarReport {
    pub polarizable: bool,
    /// Induced bow ties that are neither a loop-loop monedge nor a
    /// path-degenerate configuration with exactly one loop, ordered by
    /// canonical walk key.
    pub witnesses: Vec<BowTie>,
    pub normal: bool,
    pub odd_cycle_condition: bool,
}

/// A bow tie is harmless for polarizability iff it is a monedge whose two
/// cycles are loops, or path-degenerate with exactly one structural loop.
fn polar_harmless(b: &BowTie) -> bool {
    match b.kind() {
        BowTieKind::Monedge => b.loop_count() == 2,
        BowTieKind::PathDegenerate => b.loop_count() == 1,
        BowTieKind::General => false,
    }
}

/// A bow tie is harmless for normality iff it is path-degenerate or
/// monedge, looped or not.
fn normal_harmless(b: &BowTie) -> bool {
    !matches!(b.kind(), BowTieKind::General)
}

/// Decides polarizability: every induced bow tie must be of one of the two
/// harmless shapes. Requires a cohesive set.
pub fn is_polarizable(set: &MonomialSet) -> Result<PolarReport> {
    require_cohesive(set)?;
    let induced: Vec<BowTie> = enumerate_bowties(set)
        .into_iter()
        .filter(|b| is_induced_bowtie(set, b))
        .collect();
    let witnesses: Vec<BowTie> =
        induced.iter().filter(|b| !polar_harmless(b)).cloned().collect();
    let normal = induced.iter().all(normal_harmless);
    let occ = odd_cycle_condition(set)?;
    Ok(PolarReport {
        polarizable: witnesses.is_empty(),
        witnesses,
        normal,
        odd_cycle_condition: occ.holds,
    })
}

/// `k[f]` is integrally closed iff every induced bow tie is
/// path-degenerate or monedge.
pub fn is_normal(set: &MonomialSet) -> Result<bool> {
    require_cohesive(set)?;
    Ok(enumerate_bowties(set)
        .into_iter()
        .filter(|b| is_induced_bowtie(set, b))
        .all(|b| normal_harmless(&b)))
}

#[derive(Debug, Clone, Serialize)]
pub struct OddCycleCondition {
    pub holds: bool,
    /// First pair of vertex-disjoint chordless odd cycles joined by no edge.
    pub violation: Option<(OddCycle, OddCycle)>,
}

/// For every two vertex-disjoint chordless odd cycles (loops included),
/// some proper edge must join them. Requires a connected graph.
pub fn odd_cycle_condition(set: &MonomialSet) -> Result<OddCycleCondition> {
    match cohesion(set) {
        Cohesion::Cohesive { .. } => {}
        Cohesion::Partitioned { left, right } => {
            return Err(Error::Incohesive { left, right });
        }
    }
    let g = set.graph();
    let chordless = enumerate_odd_cycles(set, true);
    for i in 0..chordless.len() {
        for j in (i + 1)..chordless.len() {
            let (c1, c2) = (&chordless[i], &chordless[j]);
            let v1 = c1.vertex_set();
            let v2 = c2.vertex_set();
            if !v1.is_disjoint(&v2) {
                continue;
            }
            let joined = v1
                .iter()
                .any(|&a| v2.iter().any(|&b| g.edge_between(a, b).is_some()));
            if !joined {
                return Ok(OddCycleCondition {
                    holds: false,
                    violation: Some((c1.clone(), c2.clone())),
                });
            }
        }
    }
    Ok(OddCycleCondition { holds: true, violation: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn villa() -> MonomialSet {
        MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap()
    }

    fn k4() -> MonomialSet {
        MonomialSet::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn two_triangles_shared_vertex() -> MonomialSet {
        MonomialSet::from_pairs(5, &[(1, 2), (2, 5), (5, 1), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn odd_cycles_of_villa_are_three_loops() {
        let cycles = enumerate_odd_cycles(&villa(), false);
        assert_eq!(cycles.len(), 3);
        assert!(cycles.iter().all(|c| c.edges.len() == 1));
    }

    #[test]
    fn k4_has_four_chordless_triangles() {
        let cycles = enumerate_odd_cycles(&k4(), true);
        assert_eq!(cycles.len(), 4);
        assert!(cycles.iter().all(|c| c.edges.len() == 3));
    }

    #[test]
    fn square_has_no_odd_cycles_or_bowties() {
        let sq = MonomialSet::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert!(enumerate_odd_cycles(&sq, false).is_empty());
        assert!(enumerate_bowties(&sq).is_empty());
    }

    #[test]
    fn villa_has_three_bowties() {
        let set = villa();
        let ties = enumerate_bowties(&set);
        assert_eq!(ties.len(), 3);
        let kinds: Vec<(BowTieKind, usize)> =
            ties.iter().map(|b| (b.kind(), b.path.len())).collect();
        assert_eq!(
            kinds.iter().filter(|(k, _)| *k == BowTieKind::Monedge).count(),
            2
        );
        assert_eq!(
            kinds.iter().filter(|(k, _)| *k == BowTieKind::General).count(),
            1
        );
        assert!(ties.iter().all(|b| is_induced_bowtie(&set, b)));
        assert!(ties.iter().all(|b| b.loop_count() == 2));
    }

    #[test]
    fn degenerate_bowtie_detected() {
        let set = two_triangles_shared_vertex();
        let ties = enumerate_bowties(&set);
        assert_eq!(ties.len(), 1);
        assert_eq!(ties[0].kind(), BowTieKind::PathDegenerate);
        assert!(is_induced_bowtie(&set, &ties[0]));
        assert_eq!(ties[0].loop_count(), 0);
    }

    #[test]
    fn cross_edge_spoils_inducedness() {
        // Two triangles joined by an edge plus a cross edge between them.
        let set = MonomialSet::from_pairs(
            6,
            &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (3, 4), (2, 5)],
        )
        .unwrap();
        let ties = enumerate_bowties(&set);
        let monedge: Vec<&BowTie> =
            ties.iter().filter(|b| b.kind() == BowTieKind::Monedge).collect();
        assert!(!monedge.is_empty());
        assert!(monedge.iter().all(|b| !is_induced_bowtie(&set, b)));
    }

    #[test]
    fn extra_loops_do_not_spoil_inducedness() {
        let set = villa();
        let ties = enumerate_bowties(&set);
        let general = ties.iter().find(|b| b.kind() == BowTieKind::General).unwrap();
        // The loops(1,3) bow tie ignores the deletable loop x2^2.
        assert!(is_induced_bowtie(&set, general));
    }

    #[test]
    fn bowtie_walks_are_valid_and_even() {
        let set = villa();
        for b in enumerate_bowties(&set) {
            let w = b.to_walk(&set);
            assert_eq!(w.len() % 2, 0);
            assert!(crate::walk::split_decomposition(&w).is_none());
        }
    }

    #[test]
    fn polarizability_headliners() {
        // Complete simple graphs and complete graphs with all loops.
        assert!(is_polarizable(&k4()).unwrap().polarizable);
        let mut pairs: Vec<(usize, usize)> =
            (1..=4).flat_map(|a| ((a + 1)..=4).map(move |b| (a, b))).collect();
        pairs.extend((1..=4).map(|a| (a, a)));
        let veronese = MonomialSet::from_pairs(4, &pairs).unwrap();
        assert!(is_polarizable(&veronese).unwrap().polarizable);
        // The loop chain is not polarizable: its general bow tie witnesses.
        let report = is_polarizable(&villa()).unwrap();
        assert!(!report.polarizable);
        assert_eq!(report.witnesses.len(), 1);
        assert_eq!(report.witnesses[0].kind(), BowTieKind::General);
        assert!(!report.normal);
        assert!(!report.odd_cycle_condition);
    }

    #[test]
    fn odd_cycle_condition_cases() {
        assert!(odd_cycle_condition(&k4()).unwrap().holds);
        let occ = odd_cycle_condition(&villa()).unwrap();
        assert!(!occ.holds);
        let (a, b) = occ.violation.unwrap();
        assert_eq!((a.edges.len(), b.edges.len()), (1, 1));
        // Two triangles two apart with no joining edge.
        let far = MonomialSet::from_pairs(
            8,
            &[(1, 2), (2, 3), (3, 1), (3, 7), (7, 4), (4, 5), (5, 6), (6, 4)],
        )
        .unwrap();
        assert!(!odd_cycle_condition(&far).unwrap().holds);
    }

    #[test]
    fn normality_matches_odd_cycle_condition_on_examples() {
        for set in [villa(), k4(), two_triangles_shared_vertex()] {
            assert_eq!(
                is_normal(&set).unwrap(),
                odd_cycle_condition(&set).unwrap().holds
            );
        }
    }

    #[test]
    fn incohesive_inputs_fail_fast() {
        let split = MonomialSet::from_pairs(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(matches!(is_polarizable(&split), Err(Error::Incohesive { .. })));
        assert!(matches!(is_normal(&split), Err(Error::Incohesive { .. })));
        assert!(matches!(odd_cycle_condition(&split), Err(Error::Incohesive { .. })));
    }
}
