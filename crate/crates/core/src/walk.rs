//! Even closed walks: construction, canonical form, splitting,
//! recurrence analysis, classification into cycle arrangements and
//! molecules, skeletons, enumeration and decomposability.
//!
//! A walk is stored as its structural edge sequence (1-based generator
//! indices) together with the derived vertex sequence: edge `t` runs from
//! `vertices[t]` to `vertices[t+1 mod 2r]`. Walks are identified up to
//! rotation and reversal of the edge sequence; the lexicographically least
//! representative is the canonical key.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result, WalkError};
use crate::monomial::{FineDegree, MonomialSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Walk {
    edges: Vec<usize>,
    vertices: Vec<usize>,
    canonical: Vec<usize>,
}

/// Derives the vertex sequence of a strict walk (no immediate edge
/// repetition). Distinct consecutive monomials share exactly one variable,
/// which pins every vertex.
fn derive_vertices(set: &MonomialSet, edges: &[usize]) -> std::result::Result<Vec<usize>, WalkError> {
    let len = edges.len();
    let mut vertices = vec![0usize; len];
    for t in 0..len {
        let e = edges[t];
        let f = edges[(t + 1) % len];
        if e == f {
            return Err(WalkError::ImmediateRepetition { edge: e, pos: t + 1 });
        }
        let shared = set
            .gen(e)
            .shared_var(set.gen(f))
            .ok_or(WalkError::NonAdjacent { pos: t + 1, next: (t % len) + 2 })?;
        vertices[(t + 1) % len] = shared;
    }
    for t in 0..len {
        let g = set.gen(edges[t]);
        let (a, b) = (vertices[t], vertices[(t + 1) % len]);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if (lo, hi) != (g.lo, g.hi) {
            return Err(WalkError::InconsistentVertices);
        }
    }
    Ok(vertices)
}

/// Lexicographically least edge sequence over all rotations of the
/// sequence and of its reversal.
pub fn canonical_edges(edges: &[usize]) -> Vec<usize> {
    let len = edges.len();
    let mut best: Option<Vec<usize>> = None;
    let mut consider = |candidate: Vec<usize>| {
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    };
    for r in 0..len {
        let mut rot: Vec<usize> = edges[r..].to_vec();
        rot.extend_from_slice(&edges[..r]);
        consider(rot);
    }
    let rev: Vec<usize> = edges.iter().rev().copied().collect();
    for r in 0..len {
        let mut rot: Vec<usize> = rev[r..].to_vec();
        rot.extend_from_slice(&rev[..r]);
        consider(rot);
    }
    best.unwrap_or_default()
}

impl Walk {
    /// Builds a walk from an edge-index sequence, deriving and validating
    /// the vertex sequence.
    pub fn new(set: &MonomialSet, edges: Vec<usize>) -> Result<Self> {
        let len = edges.len();
        if len % 2 != 0 {
            return Err(WalkError::OddLength(len).into());
        }
        if len < 4 {
            return Err(WalkError::TooShort(len).into());
        }
        for &e in &edges {
            if e < 1 || e > set.m() {
                return Err(WalkError::BadEdgeIndex { index: e, m: set.m() }.into());
            }
        }
        let vertices = derive_vertices(set, &edges)?;
        let canonical = canonical_edges(&edges);
        Ok(Walk { edges, vertices, canonical })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Canonical key: two walks are the same iff their keys match.
    pub fn canonical_key(&self) -> &[usize] {
        &self.canonical
    }

    /// The walk re-anchored on its canonical representative.
    pub fn canonical_walk(&self, set: &MonomialSet) -> Walk {
        Walk::new(set, self.canonical.clone()).expect("canonical form of a valid walk is valid")
    }

    /// Distinct generator indices in the support, ascending.
    pub fn support_edges(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.edges.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn support_vertices(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.vertices.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Edge multiset as index -> multiplicity.
    pub fn edge_counts(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        for &e in &self.edges {
            *c.entry(e).or_insert(0) += 1;
        }
        c
    }

    /// lcm of the distinct edges in the support.
    pub fn lcm(&self, set: &MonomialSet) -> FineDegree {
        set.lcm_of(self.support_edges())
    }
}

// ---------------------------------------------------------------------------
// Recurrence report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct VertexRepetition {
    pub vertex: usize,
    /// 1-based positions in the vertex sequence.
    pub positions: Vec<usize>,
    /// Occurs exactly twice.
    pub unique: bool,
    /// Every pair of occurrences has odd index gap (opposite parity).
    pub parity_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRepetition {
    pub edge: usize,
    pub positions: Vec<usize>,
    pub unique: bool,
    /// Even index gap between the two occurrences.
    pub parity_ok: bool,
    /// Second traversal runs the edge in the opposite direction.
    pub sense_reversing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub vertex_reps: Vec<VertexRepetition>,
    pub edge_reps: Vec<EdgeRepetition>,
}

impl RecurrenceReport {
    /// All flags of all repetitions hold.
    pub fn all_ok(&self) -> bool {
        self.vertex_reps.iter().all(|r| r.unique && r.parity_ok)
            && self.edge_reps.iter().all(|r| r.unique && r.parity_ok && r.sense_reversing)
    }
}

/// Flags every vertex and edge repetition of the walk with the conditions
/// that characterize non-split walks: uniqueness of recurrence, index
/// parity, and (for edges) sense reversal.
pub fn recurrence_report(w: &Walk) -> RecurrenceReport {
    let len = w.len();
    let mut vert_pos: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, &v) in w.vertices.iter().enumerate() {
        vert_pos.entry(v).or_default().push(t);
    }
    let mut vertex_reps = Vec::new();
    for (v, pos) in vert_pos {
        if pos.len() < 2 {
            continue;
        }
        let unique = pos.len() == 2;
        let parity_ok = pos
            .iter()
            .enumerate()
            .all(|(a, &pa)| pos.iter().skip(a + 1).all(|&pb| (pb - pa) % 2 == 1));
        vertex_reps.push(VertexRepetition {
            vertex: v,
            positions: pos.iter().map(|p| p + 1).collect(),
            unique,
            parity_ok,
        });
    }
    let mut edge_pos: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, &e) in w.edges.iter().enumerate() {
        edge_pos.entry(e).or_default().push(t);
    }
    let mut edge_reps = Vec::new();
    for (e, pos) in edge_pos {
        if pos.len() < 2 {
            continue;
        }
        let unique = pos.len() == 2;
        let parity_ok = pos
            .iter()
            .enumerate()
            .all(|(a, &pa)| pos.iter().skip(a + 1).all(|&pb| (pb - pa) % 2 == 0));
        let sense_reversing = pos.iter().enumerate().all(|(a, &pa)| {
            pos.iter().skip(a + 1).all(|&pb| {
                w.vertices[pa] == w.vertices[(pb + 1) % len]
                    && w.vertices[(pa + 1) % len] == w.vertices[pb]
            })
        });
        edge_reps.push(EdgeRepetition {
            edge: e,
            positions: pos.iter().map(|p| p + 1).collect(),
            unique,
            parity_ok,
            sense_reversing,
        });
    }
    RecurrenceReport { vertex_reps, edge_reps }
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

/// A decomposition of a walk into two even closed subwalks at a repeated
/// vertex. The parts are raw edge sequences: a part may be the trivial
/// back-and-forth pair `{f, f}` or carry a repetition at its wrap, which a
/// strict [`Walk`] cannot represent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitParts {
    /// The re-anchored edge sequence on which the split was found. It uses
    /// the same edge multiset as the input walk.
    pub anchor_edges: Vec<usize>,
    pub anchor_vertices: Vec<usize>,
    pub vertex: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Edge/vertex sequence pair for walks that may carry immediate
/// repetitions (they arise while re-sequencing a walk).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Loose {
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl Loose {
    fn canonical_pair(&self) -> (Vec<usize>, Vec<usize>) {
        let len = self.edges.len();
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut consider = |e: Vec<usize>, v: Vec<usize>| {
            let cand = (e, v);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        };
        for r in 0..len {
            let mut e: Vec<usize> = self.edges[r..].to_vec();
            e.extend_from_slice(&self.edges[..r]);
            let mut v: Vec<usize> = self.vertices[r..].to_vec();
            v.extend_from_slice(&self.vertices[..r]);
            consider(e, v);
        }
        // Reversal: edge t' = e[len-1-t]; the start vertex of the reversed
        // walk position t is vertices[(len - t) % len].
        let rev_e: Vec<usize> = self.edges.iter().rev().copied().collect();
        let rev_v: Vec<usize> = (0..len).map(|t| self.vertices[(len - t) % len]).collect();
        for r in 0..len {
            let mut e: Vec<usize> = rev_e[r..].to_vec();
            e.extend_from_slice(&rev_e[..r]);
            let mut v: Vec<usize> = rev_v[r..].to_vec();
            v.extend_from_slice(&rev_v[..r]);
            consider(e, v);
        }
        best.unwrap()
    }

    /// Reverses the traversal of the cyclic window of `len` edges starting
    /// at `start`. Valid whenever the window's endpoints visit the same
    /// vertex.
    fn reverse_window(&self, start: usize, win: usize) -> Loose {
        let l = self.edges.len();
        // Rotate so the window begins at 0.
        let e: Vec<usize> = (0..l).map(|t| self.edges[(start + t) % l]).collect();
        let v: Vec<usize> = (0..l).map(|t| self.vertices[(start + t) % l]).collect();
        debug_assert_eq!(v[0], v[win % l]);
        let mut ne = e.clone();
        let mut nv = v.clone();
        ne[..win].reverse();
        // New vertex sequence inside the window: position 0 keeps v[0];
        // positions 1..win take the old window vertices in reverse.
        for t in 1..win {
            nv[t] = v[win - t];
        }
        Loose { edges: ne, vertices: nv }
    }
}

fn rotational_split(l: &Loose) -> Option<SplitParts> {
    let len = l.edges.len();
    for i in 0..len {
        for j in (i + 1)..len {
            if l.vertices[i] == l.vertices[j] && (j - i) % 2 == 0 && j - i < len {
                let mut anchor_e: Vec<usize> = l.edges[i..].to_vec();
                anchor_e.extend_from_slice(&l.edges[..i]);
                let mut anchor_v: Vec<usize> = l.vertices[i..].to_vec();
                anchor_v.extend_from_slice(&l.vertices[..i]);
                let cut = j - i;
                return Some(SplitParts {
                    left: anchor_e[..cut].to_vec(),
                    right: anchor_e[cut..].to_vec(),
                    vertex: l.vertices[i],
                    anchor_edges: anchor_e,
                    anchor_vertices: anchor_v,
                });
            }
        }
    }
    None
}

/// A sense-preserving edge repetition re-sequences into a trivial pair
/// plus the rest: with `e` traversed the same way at positions `i < j`,
/// reversing the in-between window pairs the two copies up.
fn sense_preserving_fold(l: &Loose) -> Option<SplitParts> {
    let len = l.edges.len();
    for i in 0..len {
        for j in (i + 1)..len {
            if l.edges[i] == l.edges[j]
                && l.vertices[i] == l.vertices[j]
                && l.vertices[(i + 1) % len] == l.vertices[(j + 1) % len]
            {
                // Reverse the window between the two traversals; the
                // reversed copy now runs against the first, and the pair
                // peels off at the shared start vertex.
                let folded = l.reverse_window(i, j - i);
                if let Some(split) = rotational_split(&folded) {
                    return Some(split);
                }
            }
        }
    }
    None
}

/// Decides whether the walk splits into two smaller even closed walks,
/// returning the first decomposition found.
///
/// The search covers every edge sequence that defines the same closed
/// traversal: all rotations, plus the re-sequencings obtained by reversing
/// the traversal between two same-vertex visits (a repetition with odd gap;
/// even gaps split outright). This closure is what makes a traversal like a
/// triangle walked around twice split into `{f,f}` pairs even though no
/// rotation exhibits the cut.
pub fn split_decomposition(w: &Walk) -> Option<SplitParts> {
    let start = Loose { edges: w.edges.clone(), vertices: w.vertices.clone() };
    // Cheap complete checks first: an even-gap vertex repetition splits in
    // place, and a same-direction edge repetition splits after one fold.
    if let Some(split) = rotational_split(&start) {
        return Some(split);
    }
    if let Some(split) = sense_preserving_fold(&start) {
        return Some(split);
    }
    let mut seen = BTreeSet::new();
    seen.insert(start.canonical_pair());
    let mut queue = VecDeque::from([start]);
    let mut guard = 0usize;
    while let Some(cur) = queue.pop_front() {
        guard += 1;
        debug_assert!(guard < 200_000, "re-sequencing orbit unexpectedly large");
        if let Some(split) = rotational_split(&cur) {
            return Some(split);
        }
        let len = cur.edges.len();
        let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (t, &v) in cur.vertices.iter().enumerate() {
            by_vertex.entry(v).or_default().push(t);
        }
        for pos in by_vertex.values() {
            for a in 0..pos.len() {
                for b in (a + 1)..pos.len() {
                    let (i, j) = (pos[a], pos[b]);
                    for (s, win) in [(i, j - i), (j, len - (j - i))] {
                        if win == 0 || win == len {
                            continue;
                        }
                        let next = cur.reverse_window(s, win);
                        if seen.insert(next.canonical_pair()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn is_non_split(w: &Walk) -> bool {
    split_decomposition(w).is_none()
}

// ---------------------------------------------------------------------------
// Classification: cycle arrangements and molecules
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WalkClassKind {
    EvenCycle,
    CycleArrangement,
    Molecule,
}

impl WalkClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WalkClassKind::EvenCycle => "cycle",
            WalkClassKind::CycleArrangement => "arrangement",
            WalkClassKind::Molecule => "molecule",
        }
    }
}

/// Structural decomposition of a walk: constituent cycles (as ordered edge
/// lists) and, for molecules, structural paths (each traversed twice by
/// the walk).
#[derive(Debug, Clone, Serialize)]
pub struct WalkClass {
    pub kind: WalkClassKind,
    pub cycles: Vec<Vec<usize>>,
    pub paths: Vec<Vec<usize>>,
}

fn cycle_vertices(set: &MonomialSet, cycle: &[usize], start_hint: Option<usize>) -> Vec<usize> {
    // A constituent cycle arrives as an ordered closed edge list; rebuild
    // its vertex ring. Loops have a single vertex.
    if cycle.len() == 1 {
        return vec![set.gen(cycle[0]).lo];
    }
    let mut verts = Vec::with_capacity(cycle.len());
    let first = set.gen(cycle[0]);
    let second = set.gen(cycle[1]);
    let shared = first.shared_var(second).expect("consecutive cycle edges share a vertex");
    let mut cur = first.other(shared);
    if let Some(h) = start_hint {
        if first.contains(h) {
            cur = h;
        }
    }
    for &e in cycle {
        verts.push(cur);
        cur = set.gen(e).other(cur);
    }
    verts
}

fn vertex_set(set: &MonomialSet, edges: &[usize]) -> BTreeSet<usize> {
    let mut s = BTreeSet::new();
    for &e in edges {
        s.insert(set.gen(e).lo);
        s.insert(set.gen(e).hi);
    }
    s
}

/// Peels simple cycles off a closed walk with no edge repetition.
fn peel_cycles(edges: &[usize], verts: &[usize]) -> Vec<Vec<usize>> {
    if edges.is_empty() {
        return Vec::new();
    }
    let mut first_pos: BTreeMap<usize, usize> = BTreeMap::new();
    for (t, &v) in verts.iter().enumerate() {
        if let Some(&s) = first_pos.get(&v) {
            let cycle: Vec<usize> = edges[s..t].to_vec();
            let mut rest_e: Vec<usize> = edges[..s].to_vec();
            rest_e.extend_from_slice(&edges[t..]);
            let mut rest_v: Vec<usize> = verts[..s].to_vec();
            rest_v.extend_from_slice(&verts[t..]);
            let mut out = vec![cycle];
            out.extend(peel_cycles(&rest_e, &rest_v));
            return out;
        }
        first_pos.insert(v, t);
    }
    vec![edges.to_vec()]
}

/// Peels a closed walk into constituent cycles and doubled structural
/// paths, following the minimal edge repetition window first.
fn peel(edges: &[usize], verts: &[usize]) -> Result<(Vec<Vec<usize>>, Vec<Vec<usize>>)> {
    let len = edges.len();
    let mut pos: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, &e) in edges.iter().enumerate() {
        pos.entry(e).or_default().push(t);
    }
    let mut best: Option<(usize, usize)> = None; // (gap, start)
    for p in pos.values() {
        if p.len() < 2 {
            continue;
        }
        for a in 0..p.len() {
            for b in (a + 1)..p.len() {
                for (gap, start) in [(p[b] - p[a], p[a]), (len - (p[b] - p[a]), p[b])] {
                    if best.map_or(true, |(g, _)| gap < g) {
                        best = Some((gap, start));
                    }
                }
            }
        }
    }
    let Some((gap, start)) = best else {
        return Ok((peel_cycles(edges, verts), Vec::new()));
    };
    if gap < 2 {
        return Err(Error::NotClassifiable(
            "edge repeated with no room for a constituent cycle".into(),
        ));
    }
    // Rotate the first occurrence to position 0; its twin sits at `gap`.
    let e: Vec<usize> = (0..len).map(|t| edges[(start + t) % len]).collect();
    let v: Vec<usize> = (0..len).map(|t| verts[(start + t) % len]).collect();
    let l0 = gap;
    // Sense reversal of the pair makes the inner window a closed walk.
    if v[1] != v[l0] {
        return Err(Error::NotClassifiable("repeated edge is not sense-reversing".into()));
    }
    let inner_e = &e[1..l0];
    let inner_v = &v[1..l0];
    let mut path = vec![e[0]];
    let mut a = l0 + 1;
    let mut b = len - 1;
    while a < b && e[a] == e[b] {
        path.push(e[a]);
        a += 1;
        b -= 1;
    }
    if a > b {
        return Err(Error::NotClassifiable("doubled path closes onto itself".into()));
    }
    let core_e = &e[a..=b];
    let core_v = &v[a..=b];
    let (mut cycles, mut paths) = (peel_cycles(inner_e, inner_v), Vec::new());
    let (more_cycles, more_paths) = peel(core_e, core_v)?;
    cycles.extend(more_cycles);
    paths.push(path);
    paths.extend(more_paths);
    Ok((cycles, paths))
}

/// Groups constituent cycles into structural cycle arrangements
/// (connected components under vertex sharing).
fn arrangement_groups(set: &MonomialSet, cycles: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = cycles.len();
    let vsets: Vec<BTreeSet<usize>> = cycles.iter().map(|c| vertex_set(set, c)).collect();
    let mut group = (0..k).collect::<Vec<usize>>();
    fn find(group: &mut Vec<usize>, x: usize) -> usize {
        if group[x] != x {
            let r = find(group, group[x]);
            group[x] = r;
        }
        group[x]
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if !vsets[i].is_disjoint(&vsets[j]) {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a] = b;
                }
            }
        }
    }
    let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        let r = find(&mut group, i);
        map.entry(r).or_default().push(i);
    }
    map.into_values().collect()
}

fn validate_class(set: &MonomialSet, class: &WalkClass, walk_len: usize) -> Result<()> {
    let nc = |msg: String| Error::NotClassifiable(msg);
    let cycles = &class.cycles;
    let paths = &class.paths;
    let cyc_edges: Vec<BTreeSet<usize>> =
        cycles.iter().map(|c| c.iter().copied().collect()).collect();
    let cyc_verts: Vec<BTreeSet<usize>> = cycles.iter().map(|c| vertex_set(set, c)).collect();
    // Constituent cycles are simple closed walks.
    for c in cycles {
        let vs = cycle_vertices(set, c, None);
        let distinct: BTreeSet<usize> = vs.iter().copied().collect();
        if distinct.len() != c.len() && c.len() > 1 {
            return Err(nc("constituent cycle is not simple".into()));
        }
    }
    // Edge-disjointness and vertex-sharing limits.
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            if !cyc_edges[i].is_disjoint(&cyc_edges[j]) {
                return Err(nc("constituent cycles share an edge".into()));
            }
            if cyc_verts[i].intersection(&cyc_verts[j]).count() > 1 {
                return Err(nc("constituent cycles share more than one vertex".into()));
            }
        }
    }
    // Each vertex lies in at most two cycles.
    {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for vs in &cyc_verts {
            for &v in vs {
                *count.entry(v).or_default() += 1;
            }
        }
        if count.values().any(|&c| c > 2) {
            return Err(nc("a vertex lies in more than two constituent cycles".into()));
        }
    }
    let total: usize =
        cycles.iter().map(|c| c.len()).sum::<usize>() + 2 * paths.iter().map(|p| p.len()).sum::<usize>();
    if total != walk_len {
        return Err(Error::Internal(format!(
            "classified edges {total} do not account for walk length {walk_len}"
        )));
    }
    if paths.is_empty() {
        return Ok(());
    }
    // Molecule axioms.
    let groups = arrangement_groups(set, cycles);
    if groups.len() != paths.len() + 1 {
        return Err(nc(format!(
            "molecule must have one more arrangement than paths, got {} vs {}",
            groups.len(),
            paths.len()
        )));
    }
    let group_verts: Vec<BTreeSet<usize>> = groups
        .iter()
        .map(|g| g.iter().flat_map(|&i| cyc_verts[i].iter().copied()).collect())
        .collect();
    let path_verts: Vec<BTreeSet<usize>> = paths.iter().map(|p| vertex_set(set, p)).collect();
    for i in 0..paths.len() {
        for j in (i + 1)..paths.len() {
            if !path_verts[i].is_disjoint(&path_verts[j]) {
                return Err(nc("structural paths share a vertex".into()));
            }
        }
    }
    for (pi, pv) in path_verts.iter().enumerate() {
        let mut meets = 0;
        for gv in &group_verts {
            let shared: Vec<usize> = gv.intersection(pv).copied().collect();
            match shared.len() {
                0 => {}
                1 => {
                    meets += 1;
                    // The meeting vertex must be extremal on the path.
                    let ends = path_endpoints(set, &paths[pi]);
                    if !ends.contains(&shared[0]) {
                        return Err(nc("path meets an arrangement off its endpoint".into()));
                    }
                }
                _ => return Err(nc("path shares more than one vertex with an arrangement".into())),
            }
        }
        if meets != 2 {
            return Err(nc(format!("structural path meets {meets} arrangements, need 2")));
        }
    }
    for gv in &group_verts {
        if !path_verts.iter().any(|pv| !gv.is_disjoint(pv)) {
            return Err(nc("an arrangement meets no structural path".into()));
        }
    }
    Ok(())
}

/// Extremal vertices of an ordered path edge list.
fn path_endpoints(set: &MonomialSet, path: &[usize]) -> Vec<usize> {
    if path.len() == 1 {
        let g = set.gen(path[0]);
        return vec![g.lo, g.hi];
    }
    let first = set.gen(path[0]);
    let second = set.gen(path[1]);
    let shared = first.shared_var(second).expect("path edges are consecutive");
    let start = first.other(shared);
    let last = set.gen(path[path.len() - 1]);
    let before = set.gen(path[path.len() - 2]);
    let shared2 = last.shared_var(before).expect("path edges are consecutive");
    let end = last.other(shared2);
    vec![start, end]
}

/// Classifies a walk whose repetitions satisfy the structural recurrence
/// hypotheses (each vertex at most twice, each edge at most twice and
/// sense-reversing) as an even cycle, cycle arrangement or molecule.
///
/// Index-parity of the repetitions is deliberately not required: split
/// arrangements and molecules classify fine, and their skeletons are how
/// the split shows up on the second decision path.
pub fn classify_non_split(set: &MonomialSet, w: &Walk) -> Result<WalkClass> {
    let report = recurrence_report(w);
    if !report.vertex_reps.iter().all(|r| r.unique) {
        return Err(Error::NotClassifiable("a vertex occurs more than twice".into()));
    }
    if !report.edge_reps.iter().all(|r| r.unique && r.sense_reversing) {
        return Err(Error::NotClassifiable(
            "an edge repetition is not unique or not sense-reversing".into(),
        ));
    }
    let (cycles, paths) = peel(&w.edges, &w.vertices)?;
    let kind = if !paths.is_empty() {
        WalkClassKind::Molecule
    } else if cycles.len() == 1 {
        WalkClassKind::EvenCycle
    } else {
        WalkClassKind::CycleArrangement
    };
    let class = WalkClass { kind, cycles, paths };
    validate_class(set, &class, w.len())?;
    Ok(class)
}

// ---------------------------------------------------------------------------
// Skeletons
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SkeletonNodeKind {
    Cycle { edges: Vec<usize> },
    PathEdge { edge: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct SkeletonNode {
    pub kind: SkeletonNodeKind,
    /// Black nodes are odd constituent cycles; path edges and even cycles
    /// are white.
    pub black: bool,
    vertices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skeleton {
    pub nodes: Vec<SkeletonNode>,
    pub links: Vec<(usize, usize)>,
}

/// Builds the skeleton: one node per constituent cycle (black iff odd),
/// one white node per structural-path edge, links wherever the two
/// sub-configurations meet.
pub fn build_skeleton(set: &MonomialSet, class: &WalkClass) -> Skeleton {
    let mut nodes = Vec::new();
    for c in &class.cycles {
        nodes.push(SkeletonNode {
            kind: SkeletonNodeKind::Cycle { edges: c.clone() },
            black: c.len() % 2 == 1,
            vertices: vertex_set(set, c).into_iter().collect(),
        });
    }
    for p in &class.paths {
        for &e in p {
            nodes.push(SkeletonNode {
                kind: SkeletonNodeKind::PathEdge { edge: e },
                black: false,
                vertices: vertex_set(set, &[e]).into_iter().collect(),
            });
        }
    }
    let mut links = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let vi: BTreeSet<usize> = nodes[i].vertices.iter().copied().collect();
            if nodes[j].vertices.iter().any(|v| vi.contains(v)) {
                links.push((i, j));
            }
        }
    }
    Skeleton { nodes, links }
}

/// A skeleton certifies a non-split configuration iff it is a tree and
/// deleting any one link leaves two components with an odd number of
/// black nodes each.
pub fn skeleton_non_split(s: &Skeleton) -> bool {
    let n = s.nodes.len();
    if n == 0 {
        return false;
    }
    if s.links.len() != n - 1 || !skeleton_connected(s) {
        return false;
    }
    for skip in 0..s.links.len() {
        let comp = component_from(s, s.links[skip].0, skip);
        let black_in: usize =
            comp.iter().filter(|&&i| s.nodes[i].black).count();
        let black_total = s.nodes.iter().filter(|nd| nd.black).count();
        let black_out = black_total - black_in;
        if black_in % 2 == 0 || black_out % 2 == 0 {
            return false;
        }
    }
    true
}

fn skeleton_connected(s: &Skeleton) -> bool {
    component_from(s, 0, usize::MAX).len() == s.nodes.len()
}

fn component_from(s: &Skeleton, start: usize, skip_link: usize) -> Vec<usize> {
    let mut seen = vec![false; s.nodes.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut out = vec![start];
    while let Some(u) = stack.pop() {
        for (k, &(a, b)) in s.links.iter().enumerate() {
            if k == skip_link {
                continue;
            }
            let other = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                out.push(other);
                stack.push(other);
            }
        }
    }
    out
}

/// DOT rendering of a classified walk: one color per constituent cycle,
/// dashed structural paths.
pub fn class_to_dot(set: &MonomialSet, class: &WalkClass) -> String {
    const COLORS: [&str; 8] =
        ["red", "blue", "darkgreen", "orange", "purple", "brown", "cadetblue", "magenta"];
    let mut out = String::from("graph walk {\n");
    let mut verts = BTreeSet::new();
    for c in class.cycles.iter().chain(class.paths.iter()) {
        for &e in c {
            verts.insert(set.gen(e).lo);
            verts.insert(set.gen(e).hi);
        }
    }
    for v in verts {
        out.push_str(&format!("  x{v};\n"));
    }
    for (k, c) in class.cycles.iter().enumerate() {
        for &e in c {
            let g = set.gen(e);
            out.push_str(&format!(
                "  x{} -- x{} [label=\"f{}\", color={}];\n",
                g.lo,
                g.hi,
                e,
                COLORS[k % COLORS.len()]
            ));
        }
    }
    for p in &class.paths {
        for &e in p {
            let g = set.gen(e);
            out.push_str(&format!(
                "  x{} -- x{} [label=\"f{}\", style=dashed];\n",
                g.lo, g.hi, e
            ));
        }
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// How aggressively the walk enumerator prunes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneMode {
    /// Per-edge budget only: every even closed walk without immediate
    /// backtracking.
    BudgetOnly,
    /// Also require occurrence uniqueness and sense-reversing edge
    /// repetitions (the classification hypotheses).
    Classifiable,
    /// Additionally require the index-parity conditions necessary for a
    /// walk to be non-split.
    RecurrenceClean,
}

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub max_len: usize,
    /// Allowed 1-based generator indices; everything when empty.
    pub edge_filter: Option<Vec<usize>>,
    /// Componentwise cap on the fine degree of the walk's polar syzygy
    /// (lcm of edges times the repeated-vertex factor).
    pub tdeg_cap: Option<FineDegree>,
    /// Cap on the total of that fine degree.
    pub tdeg_total_cap: Option<u32>,
    pub prune: PruneMode,
}

impl EnumOptions {
    pub fn with_max_len(max_len: usize) -> Self {
        EnumOptions {
            max_len,
            edge_filter: None,
            tdeg_cap: None,
            tdeg_total_cap: None,
            prune: PruneMode::RecurrenceClean,
        }
    }
}

struct EnumState<'a> {
    set: &'a MonomialSet,
    opts: &'a EnumOptions,
    allowed: Vec<bool>,
    edges: Vec<usize>,
    verts: Vec<usize>,
    edge_use: Vec<u8>,
    first_dir: Vec<(usize, usize)>,
    out: BTreeSet<Vec<usize>>,
}

/// Enumerates closed even walks of length 4..=max_len with per-edge budget
/// 2, anchored at the minimal vertex they visit, deduplicated by canonical
/// key, sorted by (length, key).
pub fn enumerate_closed_even_walks(set: &MonomialSet, opts: &EnumOptions) -> Vec<Walk> {
    let m = set.m();
    let mut allowed = vec![true; m + 1];
    if let Some(filter) = &opts.edge_filter {
        allowed = vec![false; m + 1];
        for &e in filter {
            allowed[e] = true;
        }
    }
    let mut st = EnumState {
        set,
        opts,
        allowed,
        edges: Vec::new(),
        verts: Vec::new(),
        edge_use: vec![0; m + 1],
        first_dir: vec![(0, 0); m + 1],
        out: BTreeSet::new(),
    };
    for v0 in 1..=set.n() {
        dfs(&mut st, v0, v0);
    }
    st.out
        .into_iter()
        .map(|edges| Walk::new(set, edges).expect("enumerated walks are valid"))
        .collect()
}

fn incidents(set: &MonomialSet, allowed: &[bool], v: usize) -> Vec<usize> {
    (1..=set.m()).filter(|&e| allowed[e] && set.gen(e).contains(v)).collect()
}

/// Projected fine degree of the polar syzygy of the current (possibly
/// unfinished) walk: per vertex, the max exponent used so far plus one if
/// the vertex already recurs in the loop-stripped chain.
fn tdeg_lower_bound(set: &MonomialSet, edges: &[usize], verts: &[usize], closed: bool) -> FineDegree {
    let n = set.n();
    let mut maxexp = vec![0u32; n + 1];
    for &e in edges {
        let g = set.gen(e);
        maxexp[g.lo] = maxexp[g.lo].max(g.exponent_of(g.lo));
        maxexp[g.hi] = maxexp[g.hi].max(g.exponent_of(g.hi));
    }
    let mut stripped = vec![0u32; n + 1];
    let len = edges.len();
    for (t, &v) in verts.iter().enumerate() {
        // Skip occurrences swallowed by a loop step.
        let prev_loop = if t == 0 {
            closed && len > 0 && set.gen(edges[len - 1]).is_loop()
        } else {
            set.gen(edges[t - 1]).is_loop()
        };
        if prev_loop {
            continue;
        }
        stripped[v] += 1;
    }
    let mut deg = vec![0u32; n];
    for v in 1..=n {
        if maxexp[v] > 0 {
            deg[v - 1] = maxexp[v] + u32::from(stripped[v] >= 2);
        }
    }
    FineDegree(deg)
}

fn dfs(st: &mut EnumState, v0: usize, cur: usize) {
    // st.verts[t] is the start vertex of st.edges[t]; the current vertex
    // is carried separately, so closing never duplicates an occurrence.
    let len = st.edges.len();
    if len >= 4 && len % 2 == 0 && cur == v0 && st.edges[len - 1] != st.edges[0] {
        let mut ok = true;
        if let Some(cap) = &st.opts.tdeg_cap {
            let deg = tdeg_lower_bound(st.set, &st.edges, &st.verts, true);
            ok = deg.leq(cap)
                && st.opts.tdeg_total_cap.map_or(true, |t| deg.total() <= t);
        }
        if ok && !st.out.contains(st.edges.as_slice()) {
            let key = canonical_edges(&st.edges);
            if !st.out.contains(&key) {
                let w = Walk::new(st.set, st.edges.clone()).expect("enumerated walk is valid");
                let keep = match st.opts.prune {
                    PruneMode::BudgetOnly => true,
                    PruneMode::Classifiable => {
                        let rep = recurrence_report(&w);
                        rep.vertex_reps.iter().all(|r| r.unique)
                            && rep.edge_reps.iter().all(|r| r.unique && r.sense_reversing)
                    }
                    PruneMode::RecurrenceClean => recurrence_report(&w).all_ok(),
                };
                if keep {
                    st.out.insert(key);
                }
            }
        }
    }
    if len == st.opts.max_len {
        return;
    }
    for e in incidents(st.set, &st.allowed, cur) {
        if st.edge_use[e] == 2 {
            continue;
        }
        if len > 0 && st.edges[len - 1] == e {
            continue;
        }
        let next = st.set.gen(e).other(cur);
        if next < v0 {
            continue;
        }
        if st.opts.prune != PruneMode::BudgetOnly {
            // Certain violations prune early; the yield re-verifies in full.
            if st.edge_use[e] == 1 {
                let (fv, fw) = st.first_dir[e];
                if !(cur == fw && next == fv) {
                    continue;
                }
                if st.opts.prune == PruneMode::RecurrenceClean {
                    let first_pos = st.edges.iter().position(|&x| x == e).unwrap();
                    if (len - first_pos) % 2 != 0 {
                        continue;
                    }
                }
            }
            if next != v0 {
                let prev: Vec<usize> = st
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| v == next)
                    .map(|(t, _)| t)
                    .collect();
                if prev.len() >= 2 {
                    continue;
                }
                if st.opts.prune == PruneMode::RecurrenceClean {
                    if let Some(&p) = prev.first() {
                        if (len + 1 - p) % 2 != 1 {
                            continue;
                        }
                    }
                }
            }
        }
        if let Some(cap) = &st.opts.tdeg_cap {
            st.edges.push(e);
            let deg = tdeg_lower_bound(st.set, &st.edges, &st.verts, false);
            st.edges.pop();
            if !deg.leq(cap) || st.opts.tdeg_total_cap.map_or(false, |t| deg.total() > t) {
                continue;
            }
        }
        if st.edge_use[e] == 0 {
            st.first_dir[e] = (cur, next);
        }
        st.edge_use[e] += 1;
        st.edges.push(e);
        st.verts.push(cur);
        dfs(st, v0, next);
        st.verts.pop();
        st.edges.pop();
        st.edge_use[e] -= 1;
    }
}

/// All simple cycles of even length 4..=max_len, one walk per canonical key.
pub fn enumerate_even_cycles(set: &MonomialSet, max_len: usize) -> Vec<Walk> {
    enumerate_simple_cycles(set, max_len)
        .into_iter()
        .filter(|c| c.len() % 2 == 0 && c.len() >= 4)
        .map(|c| Walk::new(set, c).expect("cycles are valid walks"))
        .collect()
}

/// Ordered edge lists of all simple cycles (length >= 3) up to max_len.
pub fn enumerate_simple_cycles(set: &MonomialSet, max_len: usize) -> Vec<Vec<usize>> {
    let g = set.graph();
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let max_len = max_len.min(set.n());
    // Anchor each cycle at its minimal vertex; kill the reflection by
    // requiring the second vertex below the last.
    for v0 in 1..=set.n() {
        let mut path = vec![v0];
        let mut edges: Vec<usize> = Vec::new();
        cycle_dfs(set, &g, v0, v0, &mut path, &mut edges, max_len, &mut out);
    }
    out.into_iter().collect()
}

fn cycle_dfs(
    set: &MonomialSet,
    g: &crate::graph::LoopGraph,
    v0: usize,
    cur: usize,
    path: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    max_len: usize,
    out: &mut BTreeSet<Vec<usize>>,
) {
    for &w in g.neighbors(cur) {
        if w == cur {
            continue; // loops are not simple-cycle steps
        }
        let e = g.edge_between(cur, w).unwrap();
        if w == v0 {
            if path.len() >= 3 && path[1] < path[path.len() - 1] {
                let mut cyc = edges.clone();
                cyc.push(e);
                out.insert(canonical_edges(&cyc));
            }
            continue;
        }
        if w < v0 || path.contains(&w) || path.len() == max_len {
            continue;
        }
        path.push(w);
        edges.push(e);
        cycle_dfs(set, g, v0, w, path, edges, max_len, out);
        edges.pop();
        path.pop();
    }
    let _ = set;
}

/// Non-split even closed walks up to `max_len`, deduplicated and sorted.
pub fn enumerate_non_split_walks(set: &MonomialSet, opts: &EnumOptions) -> Vec<Walk> {
    enumerate_closed_even_walks(set, opts)
        .into_iter()
        .filter(is_non_split)
        .collect()
}

// ---------------------------------------------------------------------------
// Decomposability
// ---------------------------------------------------------------------------

/// Witness that a non-split walk is decomposable: a squarefree set `h`
/// supported on the walk's vertices whose doubled insertion re-sequences
/// into a walk splitting into two parts, each containing every `h` and
/// neither containing the original walk's full edge multiset.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub h_set: Vec<usize>,
    pub augmented: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Bounded search for a decomposing set of size <= max_set.
/// Errs on split input.
pub fn is_decomposable(
    set: &MonomialSet,
    w: &Walk,
    max_set: usize,
) -> Result<Option<Decomposition>> {
    if split_decomposition(w).is_some() {
        return Err(Error::SplitWalk);
    }
    let support: BTreeSet<usize> = w.support_vertices().into_iter().collect();
    let candidates: Vec<usize> = (1..=set.m())
        .filter(|&i| {
            let g = set.gen(i);
            g.is_squarefree() && support.contains(&g.lo) && support.contains(&g.hi)
        })
        .collect();
    let base = w.edge_counts();
    for size in 1..=max_set.min(candidates.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let h_set: Vec<usize> = combo.iter().map(|&k| candidates[k]).collect();
            let mut counts = base.clone();
            for &h in &h_set {
                *counts.entry(h).or_insert(0) += 2;
            }
            if let Some((aug, left, right)) = find_augmented_split(set, &counts, &base, &h_set) {
                return Ok(Some(Decomposition { h_set, augmented: aug, left, right }));
            }
            if !next_combination(&mut combo, candidates.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] != i + n - k {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates closed traversals of the full multiset (immediate
/// repetitions allowed) and looks for an even-gap vertex repetition that
/// cuts it into two admissible parts.
fn find_augmented_split(
    set: &MonomialSet,
    counts: &BTreeMap<usize, usize>,
    base: &BTreeMap<usize, usize>,
    h_set: &[usize],
) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let total: usize = counts.values().sum();
    if total % 2 != 0 {
        return None;
    }
    let first_edge = *counts.keys().next()?;
    let g0 = set.gen(first_edge);
    let starts: Vec<usize> = if g0.is_loop() { vec![g0.lo] } else { vec![g0.lo, g0.hi] };
    for start in starts {
        let mut remaining = counts.clone();
        *remaining.get_mut(&first_edge).unwrap() -= 1;
        let mut edges = vec![first_edge];
        let mut verts = vec![start];
        let cur = g0.other(start);
        if let Some(found) = augmented_dfs(set, &mut remaining, &mut edges, &mut verts, start, cur, total, base, h_set)
        {
            return Some(found);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn augmented_dfs(
    set: &MonomialSet,
    remaining: &mut BTreeMap<usize, usize>,
    edges: &mut Vec<usize>,
    verts: &mut Vec<usize>,
    v0: usize,
    cur: usize,
    total: usize,
    base: &BTreeMap<usize, usize>,
    h_set: &[usize],
) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    if edges.len() == total {
        if cur != v0 {
            return None;
        }
        return check_splits(edges, verts, base, h_set);
    }
    let candidates: Vec<usize> = remaining
        .iter()
        .filter(|&(&e, &c)| c > 0 && set.gen(e).contains(cur))
        .map(|(&e, _)| e)
        .collect();
    for e in candidates {
        *remaining.get_mut(&e).unwrap() -= 1;
        let next = set.gen(e).other(cur);
        edges.push(e);
        verts.push(cur);
        // verts[t] is the start of edge t; cur was pushed as start of e.
        let found =
            augmented_dfs(set, remaining, edges, verts, v0, next, total, base, h_set);
        verts.pop();
        edges.pop();
        *remaining.get_mut(&e).unwrap() += 1;
        if found.is_some() {
            return found;
        }
    }
    None
}

fn check_splits(
    edges: &[usize],
    verts_starts: &[usize],
    base: &BTreeMap<usize, usize>,
    h_set: &[usize],
) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    // verts_starts[t] = start vertex of edge t (already complete).
    let len = edges.len();
    let part_ok = |part: &[usize]| {
        if part.len() % 2 != 0 || part.is_empty() {
            return false;
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &e in part {
            *counts.entry(e).or_insert(0) += 1;
        }
        if !h_set.iter().all(|h| counts.contains_key(h)) {
            return false;
        }
        // The part must not contain the original walk's full multiset.
        !base.iter().all(|(e, &c)| counts.get(e).copied().unwrap_or(0) >= c)
    };
    for i in 0..len {
        for j in (i + 1)..len {
            if verts_starts[i] == verts_starts[j] && (j - i) % 2 == 0 {
                let left: Vec<usize> = edges[i..j].to_vec();
                let right: Vec<usize> =
                    edges[j..].iter().chain(edges[..i].iter()).copied().collect();
                if part_ok(&left) && part_ok(&right) {
                    let mut anchor: Vec<usize> = edges[i..].to_vec();
                    anchor.extend_from_slice(&edges[..i]);
                    return Some((anchor, left, right));
                }
            }
        }
    }
    None
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

    /// Two triangles sharing one vertex: x5 common to (1,2,5) and (3,4,5).
    fn degenerate_bowtie() -> MonomialSet {
        MonomialSet::from_pairs(5, &[(1, 2), (2, 5), (5, 1), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn villa_bowtie_walk_derives_vertices() {
        let set = villa();
        let w = Walk::new(&set, vec![1, 2, 4, 5, 4, 2]).unwrap();
        assert_eq!(w.vertices(), &[1, 1, 2, 3, 3, 2]);
    }

    #[test]
    fn degenerate_sequences_rejected() {
        let set = villa();
        assert!(matches!(
            Walk::new(&set, vec![2, 4, 2, 4]),
            Err(Error::Walk(WalkError::InconsistentVertices))
        ));
        assert!(matches!(
            Walk::new(&set, vec![2, 2, 4, 4]),
            Err(Error::Walk(WalkError::ImmediateRepetition { .. }))
        ));
        assert!(matches!(Walk::new(&set, vec![1, 2, 4]), Err(Error::Walk(_))));
        assert!(matches!(Walk::new(&set, vec![1, 2]), Err(Error::Walk(_))));
        assert!(matches!(
            Walk::new(&set, vec![1, 2, 5, 4]),
            Err(Error::Walk(WalkError::NonAdjacent { .. }))
        ));
    }

    #[test]
    fn canonical_form_is_rotation_reversal_invariant() {
        let set = villa();
        let a = Walk::new(&set, vec![1, 2, 4, 5, 4, 2]).unwrap();
        let b = Walk::new(&set, vec![5, 4, 2, 1, 2, 4]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        let sq = square();
        let c = Walk::new(&sq, vec![3, 2, 1, 4]).unwrap();
        let d = Walk::new(&sq, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(c.canonical_key(), d.canonical_key());
        // Canonicalization is idempotent.
        assert_eq!(canonical_edges(a.canonical_key()), a.canonical_key());
    }

    #[test]
    fn distinct_four_cycles_have_distinct_keys() {
        let k4 = MonomialSet::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
            .unwrap();
        let cycles = enumerate_even_cycles(&k4, 4);
        assert_eq!(cycles.len(), 3);
        let keys: BTreeSet<_> = cycles.iter().map(|c| c.canonical_key().to_vec()).collect();
        assert_eq!(keys.len(), 3);
    }

    #[test]
    fn even_cycle_is_non_split() {
        let set = square();
        let w = Walk::new(&set, vec![1, 2, 3, 4]).unwrap();
        assert!(split_decomposition(&w).is_none());
    }

    #[test]
    fn degenerate_bowtie_is_non_split() {
        let set = degenerate_bowtie();
        // Traverse triangle (1,2,5) then (3,4,5) from the shared vertex 5.
        let e = |a, b| set.index_of(&crate::monomial::Monomial2::new(a, b)).unwrap();
        let w = Walk::new(&set, vec![e(5, 1), e(1, 2), e(2, 5), e(5, 3), e(3, 4), e(4, 5)]).unwrap();
        assert!(split_decomposition(&w).is_none());
        let rep = recurrence_report(&w);
        assert!(rep.all_ok());
    }

    #[test]
    fn two_squares_sharing_a_vertex_split() {
        let set = MonomialSet::from_pairs(
            7,
            &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 7), (7, 1)],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let split = split_decomposition(&w).expect("two glued squares split");
        assert_eq!(split.vertex, 1);
        assert_eq!(split.left.len() % 2, 0);
        assert_eq!(split.right.len() % 2, 0);
        assert!(!recurrence_report(&w).all_ok());
    }

    #[test]
    fn doubled_triangle_splits_despite_no_rotational_cut() {
        let set = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 1, 2, 3]).unwrap();
        let split = split_decomposition(&w).expect("same-direction edge repetition must split");
        let mut sizes = [split.left.len(), split.right.len()];
        sizes.sort_unstable();
        assert_eq!(sizes, [2, 4]);
        assert!(!recurrence_report(&w).all_ok());
    }

    #[test]
    fn monedge_bowtie_recurrence_and_classification() {
        let set = villa();
        let w = Walk::new(&set, vec![2, 3, 2, 1]).unwrap();
        assert!(split_decomposition(&w).is_none());
        let rep = recurrence_report(&w);
        assert!(rep.all_ok());
        let class = classify_non_split(&set, &w).unwrap();
        assert_eq!(class.kind, WalkClassKind::Molecule);
        assert_eq!(class.cycles.len(), 2);
        assert_eq!(class.paths, vec![vec![2]]);
    }

    #[test]
    fn villa_bowtie_full_pipeline() {
        let set = villa();
        let w = Walk::new(&set, vec![1, 2, 4, 5, 4, 2]).unwrap();
        let rep = recurrence_report(&w);
        assert!(rep.all_ok());
        // f2 and f4 repeat sense-reversing with even gap; x2 repeats with odd gap.
        assert_eq!(rep.edge_reps.len(), 2);
        assert!(rep.vertex_reps.iter().any(|r| r.vertex == 2));
        let class = classify_non_split(&set, &w).unwrap();
        assert_eq!(class.kind, WalkClassKind::Molecule);
        let mut cycles = class.cycles.clone();
        cycles.sort();
        assert_eq!(cycles, vec![vec![1], vec![5]]);
        assert_eq!(class.paths.len(), 1);
        let mut path = class.paths[0].clone();
        path.sort_unstable();
        assert_eq!(path, vec![2, 4]);
        let skel = build_skeleton(&set, &class);
        // black - white - white - black path: two loops, two path edges.
        assert_eq!(skel.nodes.iter().filter(|n| n.black).count(), 2);
        assert_eq!(skel.nodes.len(), 4);
        assert_eq!(skel.links.len(), 3);
        assert!(skeleton_non_split(&skel));
    }

    #[test]
    fn even_cycle_class_and_skeleton() {
        let set = square();
        let w = Walk::new(&set, vec![1, 2, 3, 4]).unwrap();
        let class = classify_non_split(&set, &w).unwrap();
        assert_eq!(class.kind, WalkClassKind::EvenCycle);
        let skel = build_skeleton(&set, &class);
        assert_eq!(skel.nodes.len(), 1);
        assert!(!skel.nodes[0].black);
        assert!(skel.links.is_empty());
        assert!(skeleton_non_split(&skel));
    }

    #[test]
    fn split_chain_arrangement_skeleton_agrees() {
        // square - triangle - triangle chain: skeleton white-black-black,
        // cutting the first link isolates the even square: split.
        let set = MonomialSet::from_pairs(
            8,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1), // square at 1..4
                (4, 5),
                (5, 6),
                (6, 4), // triangle at 4
                (6, 7),
                (7, 8),
                (8, 6), // triangle at 6
            ],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 5, 6, 8, 9, 10, 7, 4]).unwrap();
        let class = classify_non_split(&set, &w).unwrap();
        assert_eq!(class.kind, WalkClassKind::CycleArrangement);
        assert_eq!(class.cycles.len(), 3);
        let skel = build_skeleton(&set, &class);
        assert!(!skeleton_non_split(&skel));
        assert!(split_decomposition(&w).is_some());
    }

    #[test]
    fn loop_square_sixcycle_loop_chain_is_non_split() {
        // loop - square - hexagon - loop, glued at single vertices.
        let set = MonomialSet::from_pairs(
            9,
            &[
                (1, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1), // square 1-2-3-4
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 9),
                (9, 4), // hexagon 4-5-6-7-8-9
                (7, 7),
            ],
        )
        .unwrap();
        let w =
            Walk::new(&set, vec![1, 2, 3, 4, 6, 7, 8, 12, 9, 10, 11, 5]).unwrap();
        let class = classify_non_split(&set, &w).unwrap();
        assert_eq!(class.kind, WalkClassKind::CycleArrangement);
        assert_eq!(class.cycles.len(), 4);
        let skel = build_skeleton(&set, &class);
        // black - white - white - black chain again, just bigger.
        assert!(skeleton_non_split(&skel));
        assert!(split_decomposition(&w).is_none());
    }

    #[test]
    fn necklace_of_triangles_and_squares_splits_every_traversal() {
        // Ring of four cycles T,T,S,S glued at single vertices: the skeleton
        // is a 4-cycle, so no traversal is non-split.
        let set = MonomialSet::from_pairs(
            10,
            &[
                (1, 5), (5, 2),   // triangle a: 1,5,2
                (1, 2),
                (2, 6), (6, 3),   // triangle b: 2,6,3
                (2, 3),
                (3, 7), (7, 8), (8, 4), (3, 4), // square c: 3,7,8,4
                (4, 9), (9, 10), (10, 1), (4, 1), // square d: 4,9,10,1
            ],
        )
        .unwrap();
        let opts = EnumOptions {
            max_len: 14,
            edge_filter: None,
            tdeg_cap: None,
            tdeg_total_cap: None,
            prune: PruneMode::Classifiable,
        };
        let walks = enumerate_closed_even_walks(&set, &opts);
        let full: Vec<&Walk> = walks.iter().filter(|w| w.support_edges().len() == 14 && w.len() == 14).collect();
        assert!(!full.is_empty(), "the ring supports closed traversals");
        for w in full {
            if let Ok(class) = classify_non_split(&set, w) {
                let skel = build_skeleton(&set, &class);
                assert!(!skeleton_non_split(&skel));
            }
            assert!(split_decomposition(w).is_some(), "ring traversal {:?} must split", w.edges());
        }
    }

    #[test]
    fn enumerate_villa_non_split_walks() {
        let set = villa();
        let walks = enumerate_non_split_walks(&set, &EnumOptions::with_max_len(6));
        assert_eq!(walks.len(), 3);
        let lens: Vec<usize> = walks.iter().map(|w| w.len()).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 4).count(), 2);
        assert_eq!(lens.iter().filter(|&&l| l == 6).count(), 1);
    }

    #[test]
    fn enumerate_bipartite_square() {
        let set = square();
        let walks = enumerate_non_split_walks(&set, &EnumOptions::with_max_len(8));
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].len(), 4);
        let cycles = enumerate_even_cycles(&set, 4);
        assert_eq!(cycles.len(), 1);
    }

    #[test]
    fn triangle_has_no_even_cycles() {
        let set = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(enumerate_even_cycles(&set, 3).is_empty());
    }

    #[test]
    fn villa_bowtie_is_indecomposable() {
        let set = villa();
        let w = Walk::new(&set, vec![1, 2, 4, 5, 4, 2]).unwrap();
        assert!(is_decomposable(&set, &w, 2).unwrap().is_none());
    }

    #[test]
    fn chorded_even_cycle_is_decomposable() {
        // Hexagon with a chord cutting it into two squares.
        let set = MonomialSet::from_pairs(
            6,
            &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let d = is_decomposable(&set, &w, 1).unwrap().expect("chord decomposes the hexagon");
        assert_eq!(d.h_set, vec![7]);
        assert_eq!(d.left.len() % 2, 0);
        assert!(d.left.contains(&7) && d.right.contains(&7));
    }

    #[test]
    fn non_induced_bowtie_is_decomposable_via_cross_edge() {
        // Two triangles joined by one edge, plus a cross edge between them.
        let set = MonomialSet::from_pairs(
            6,
            &[
                (1, 2), (2, 3), (3, 1),        // triangle A
                (4, 5), (5, 6), (6, 4),        // triangle B
                (3, 4),                        // connecting edge
                (2, 5),                        // cross edge: not induced
            ],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 7, 4, 5, 6, 7, 3]).unwrap();
        assert!(split_decomposition(&w).is_none());
        let d = is_decomposable(&set, &w, 1).unwrap().expect("cross edge decomposes");
        assert_eq!(d.h_set, vec![8]);
    }

    #[test]
    fn split_input_to_decomposable_errs() {
        let set = MonomialSet::from_pairs(
            7,
            &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 7), (7, 1)],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(matches!(is_decomposable(&set, &w, 1), Err(Error::SplitWalk)));
    }
}
