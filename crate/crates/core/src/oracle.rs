//! Independent verification by exact rational linear algebra on
//! fine-graded slices.
//!
//! In fine degree `b` every syzygy has entry `alpha_j * x^b / f_j` over
//! the generators dividing `x^b`, so the slice is the rational null space
//! of the log-matrix restricted to those columns, and multiplying a
//! homogeneous vector by a monomial leaves its coefficient coordinates
//! untouched. Slices are therefore compared coefficient-wise.
//!
//! Only degrees on the join lattice of generator log-vectors need
//! scanning: for any `b`, the divisor set of `x^b` equals that of the
//! join `b* <= b` of its divisors' logs, so the slice at `b` is the slice
//! at `b*` shifted, contributing no new generators and no new failures.

use std::collections::BTreeMap;

use num::{FromPrimitive, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::graph::require_cohesive;
use crate::linalg::{Matrix, RowSpan};
use crate::monomial::{FineDegree, MonomialSet};
use crate::syzygy::SyzygyVector;
use crate::walk::{enumerate_closed_even_walks, EnumOptions, PruneMode};
use crate::Rat;

fn rat(x: i64) -> Rat {
    Rat::from_i64(x).unwrap()
}

/// Join lattice of the generator log-vectors, truncated to total degree
/// `bound`, sorted by (total degree, lex).
pub fn join_lattice(set: &MonomialSet, bound: u32) -> Vec<FineDegree> {
    let logs: Vec<FineDegree> = (1..=set.m()).map(|i| set.log(i)).collect();
    let mut joins: std::collections::BTreeSet<FineDegree> = std::collections::BTreeSet::new();
    let mut frontier: Vec<FineDegree> = Vec::new();
    for l in &logs {
        if l.total() <= bound && joins.insert(l.clone()) {
            frontier.push(l.clone());
        }
    }
    while let Some(b) = frontier.pop() {
        for l in &logs {
            let j = b.join(l);
            if j.total() <= bound && joins.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<FineDegree> = joins.into_iter().collect();
    out.sort_by_key(|b| (b.total(), b.0.clone()));
    out
}

/// Slice of the differential syzygy module at fine degree `b`: dimension
/// and a rational basis of coefficient vectors (length m, zero outside
/// the divisors of `x^b`).
pub fn z_slice(set: &MonomialSet, b: &FineDegree) -> (usize, Vec<Vec<Rat>>) {
    let divisors = set.divisors_of(b);
    if divisors.len() < 2 {
        return (0, Vec::new());
    }
    // Constraint matrix: rows are variables, columns the dividing
    // generators, entries the exponents.
    let rows: Vec<Vec<Rat>> = (1..=set.n())
        .map(|v| divisors.iter().map(|&j| rat(set.gen(j).exponent_of(v) as i64)).collect())
        .collect();
    let kernel = Matrix::from_rows(rows).nullspace();
    let dim = kernel.len();
    let basis = kernel
        .into_iter()
        .map(|k| {
            let mut full = vec![Rat::zero(); set.m()];
            for (slot, &j) in divisors.iter().enumerate() {
                full[j - 1] = k[slot].clone();
            }
            full
        })
        .collect();
    (dim, basis)
}

pub fn z_slice_dim(set: &MonomialSet, b: &FineDegree) -> usize {
    z_slice(set, b).0
}

/// Dimension of the span of the shifts of `gens` inside the slice at `b`.
/// A generator participates iff its multidegree divides `x^b`; its
/// coordinates there are its integer coefficients.
pub fn span_slice_dim(gens: &[SyzygyVector], b: &FineDegree, m: usize) -> usize {
    let mut span = RowSpan::new(m);
    for v in gens {
        if v.multidegree.leq(b) {
            let coeffs: Vec<Rat> = v.coeff_vector().into_iter().map(rat).collect();
            span.insert(&coeffs);
        }
    }
    span.dim()
}

/// Per-degree account of one fine-graded slice.
#[derive(Debug, Clone, Serialize)]
pub struct GradedSliceReport {
    pub b: FineDegree,
    pub dim_z: usize,
    pub dim_span_z_gens: usize,
    pub dim_p: usize,
    pub new_min_gens: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuReport {
    pub mu: usize,
    /// (multidegree, new minimal generators there), ascending.
    pub generators: Vec<(FineDegree, usize)>,
    pub degree_bound: u32,
    /// Join degrees above the bound exist, so the count is only verified
    /// up to the bound.
    pub truncated: bool,
}

/// Minimal generator count of the differential syzygy module up to the
/// degree bound: at each join degree, kernel dimension minus the span of
/// all lower slices shifted up.
pub fn mu_z(set: &MonomialSet, degree_bound: u32) -> Result<MuReport> {
    require_cohesive(set)?;
    let joins = join_lattice(set, degree_bound);
    let full = join_lattice(set, u32::MAX);
    let truncated = full.len() != joins.len();
    let bases: BTreeMap<FineDegree, Vec<Vec<Rat>>> =
        joins.iter().map(|b| (b.clone(), z_slice(set, b).1)).collect();
    let mut mu = 0;
    let mut generators = Vec::new();
    for b in &joins {
        let basis = &bases[b];
        if basis.is_empty() {
            continue;
        }
        let mut lower = RowSpan::new(set.m());
        for (b2, basis2) in &bases {
            if b2 != b && b2.leq(b) {
                for v in basis2 {
                    lower.insert(v);
                }
            }
        }
        let mut fresh = 0;
        for v in basis {
            if lower.insert(v) {
                fresh += 1;
            }
        }
        if fresh > 0 {
            mu += fresh;
            generators.push((b.clone(), fresh));
        }
    }
    Ok(MuReport { mu, generators, degree_bound, truncated })
}

/// Pool of polar syzygies available to slices up to the bound: one vector
/// per canonical non-split-candidate walk whose polar degree fits under
/// the componentwise caps.
fn polar_pool(set: &MonomialSet, degree_bound: u32) -> Vec<SyzygyVector> {
    let mut cap = vec![0u32; set.n()];
    for i in 1..=set.m() {
        let l = set.log(i);
        for (k, c) in cap.iter_mut().enumerate() {
            *c = (*c).max(l.0[k]);
        }
    }
    let opts = EnumOptions {
        max_len: 2 * set.m(),
        edge_filter: None,
        tdeg_cap: Some(FineDegree(cap)),
        tdeg_total_cap: Some(degree_bound),
        prune: PruneMode::RecurrenceClean,
    };
    enumerate_closed_even_walks(set, &opts)
        .iter()
        .map(|w| crate::syzygy::t_vector(set, w))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceCheck {
    pub ok: bool,
    pub first_failure: Option<FineDegree>,
    pub degree_bound: u32,
}

/// Slicewise equality of the polar and differential syzygy modules up to
/// the degree bound. Returns the first fine degree where the polar span
/// falls short.
pub fn polarizable_oracle(set: &MonomialSet, degree_bound: u32) -> Result<SliceCheck> {
    require_cohesive(set)?;
    let pool = polar_pool(set, degree_bound);
    for b in join_lattice(set, degree_bound) {
        let dim_z = z_slice_dim(set, &b);
        if dim_z == 0 {
            continue;
        }
        let dim_p = span_slice_dim(&pool, &b, set.m());
        debug_assert!(dim_p <= dim_z, "polar slice exceeds differential slice");
        if dim_p != dim_z {
            return Ok(SliceCheck { ok: false, first_failure: Some(b), degree_bound });
        }
    }
    Ok(SliceCheck { ok: true, first_failure: None, degree_bound })
}

/// True iff the given homogeneous vectors generate every slice of the
/// differential syzygy module up to the bound.
pub fn generation_check(
    set: &MonomialSet,
    gens: &[SyzygyVector],
    degree_bound: u32,
) -> SliceCheck {
    for b in join_lattice(set, degree_bound) {
        let dim_z = z_slice_dim(set, &b);
        if dim_z == 0 {
            continue;
        }
        if span_slice_dim(gens, &b, set.m()) != dim_z {
            return SliceCheck { ok: false, first_failure: Some(b), degree_bound };
        }
    }
    SliceCheck { ok: true, first_failure: None, degree_bound }
}

/// Slicewise test that the syzygies of the ideal `(f)` are generated by
/// the linear ones. In fine degree `b` the syzygy slice of the ideal is
/// the hyperplane `sum alpha_j = 0` over the divisors of `x^b`; the
/// linear syzygies are the difference vectors of generator pairs sharing
/// a variable.
pub fn linear_presentation_oracle(set: &MonomialSet, degree_bound: u32) -> Result<SliceCheck> {
    require_cohesive(set)?;
    let m = set.m();
    // Linear syzygies: e_i - e_j with multidegree lcm(f_i, f_j) of total 3.
    let mut linear: Vec<(FineDegree, Vec<Rat>)> = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            if set.gen(i).shared_var(set.gen(j)).is_some() {
                let mdeg = set.log(i).join(&set.log(j));
                let mut v = vec![Rat::zero(); m];
                v[i - 1] = rat(1);
                v[j - 1] = rat(-1);
                linear.push((mdeg, v));
            }
        }
    }
    for b in join_lattice(set, degree_bound) {
        let divisors = set.divisors_of(&b);
        if divisors.len() < 2 {
            continue;
        }
        let target = divisors.len() - 1;
        let mut span = RowSpan::new(m);
        let mut got = 0;
        for (mdeg, v) in &linear {
            if mdeg.leq(&b) && span.insert(v) {
                got += 1;
                if got == target {
                    break;
                }
            }
        }
        if got != target {
            return Ok(SliceCheck { ok: false, first_failure: Some(b), degree_bound });
        }
    }
    Ok(SliceCheck { ok: true, first_failure: None, degree_bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub slices: Vec<GradedSliceReport>,
    pub polarizable_oracle: bool,
    pub first_failure: Option<FineDegree>,
    pub mu_z: usize,
    pub mu_generators: Vec<(FineDegree, usize)>,
    pub agree_with_theorem: bool,
    pub degree_bound: u32,
    pub truncated: bool,
}

/// Full oracle run: per-slice dimensions, polar/differential comparison,
/// minimal generator count, and agreement with the combinatorial decision.
pub fn oracle_report(set: &MonomialSet, degree_bound: u32) -> Result<OracleReport> {
    require_cohesive(set)?;
    let pool = polar_pool(set, degree_bound);
    let zgens = crate::syzygy::generators_z(set)?;
    let joins = join_lattice(set, degree_bound);
    let bases: BTreeMap<FineDegree, Vec<Vec<Rat>>> =
        joins.iter().map(|b| (b.clone(), z_slice(set, b).1)).collect();
    let mut slices = Vec::new();
    let mut first_failure = None;
    for b in &joins {
        let dim_z = bases[b].len();
        if dim_z == 0 {
            continue;
        }
        let dim_p = span_slice_dim(&pool, b, set.m());
        let dim_span_z_gens = span_slice_dim(&zgens, b, set.m());
        let mut lower = RowSpan::new(set.m());
        for (b2, basis2) in &bases {
            if b2 != b && b2.leq(b) {
                for v in basis2 {
                    lower.insert(v);
                }
            }
        }
        let mut fresh = 0;
        for v in &bases[b] {
            if lower.insert(v) {
                fresh += 1;
            }
        }
        if dim_p != dim_z && first_failure.is_none() {
            first_failure = Some(b.clone());
        }
        slices.push(GradedSliceReport {
            b: b.clone(),
            dim_z,
            dim_span_z_gens,
            dim_p,
            new_min_gens: fresh,
        });
    }
    let mu = mu_z(set, degree_bound)?;
    let theorem = crate::bowtie::is_polarizable(set)?;
    Ok(OracleReport {
        polarizable_oracle: first_failure.is_none(),
        agree_with_theorem: first_failure.is_none() == theorem.polarizable,
        slices,
        first_failure,
        mu_z: mu.mu,
        mu_generators: mu.generators,
        degree_bound,
        truncated: mu.truncated,
    })
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

    fn deg(v: &[u32]) -> FineDegree {
        FineDegree(v.to_vec())
    }

    #[test]
    fn villa_slice_dimensions() {
        let set = villa();
        // Divisors of x1^2 x2 x3^2 are f1, f2, f4, f5; kernel is 1-dim.
        assert_eq!(z_slice_dim(&set, &deg(&[2, 1, 2])), 1);
        // Too few divisors.
        assert_eq!(z_slice_dim(&set, &deg(&[2, 0, 0])), 0);
        assert_eq!(z_slice_dim(&set, &deg(&[1, 1, 0])), 0);
    }

    #[test]
    fn square_slice_dimension() {
        let set = square();
        assert_eq!(z_slice_dim(&set, &deg(&[1, 1, 1, 1])), 1);
    }

    #[test]
    fn span_of_own_multidegree_is_one() {
        let set = square();
        let zs = crate::syzygy::generators_z(&set).unwrap();
        assert_eq!(span_slice_dim(&zs, &deg(&[1, 1, 1, 1]), set.m()), 1);
        assert_eq!(span_slice_dim(&[], &deg(&[1, 1, 1, 1]), set.m()), 0);
    }

    #[test]
    fn villa_oracle_fails_at_the_bowtie_degree() {
        let set = villa();
        let check = polarizable_oracle(&set, 6).unwrap();
        assert!(!check.ok);
        assert_eq!(check.first_failure, Some(deg(&[2, 1, 2])));
    }

    #[test]
    fn square_and_complete_graphs_pass() {
        assert!(polarizable_oracle(&square(), 8).unwrap().ok);
        let k4 = MonomialSet::from_pairs(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
            .unwrap();
        assert!(polarizable_oracle(&k4, 8).unwrap().ok);
    }

    #[test]
    fn villa_mu_counts_three_bowtie_degrees() {
        let set = villa();
        let mu = mu_z(&set, 8).unwrap();
        assert_eq!(mu.mu, 3);
        let degs: Vec<FineDegree> = mu.generators.iter().map(|(b, _)| b.clone()).collect();
        assert!(degs.contains(&deg(&[2, 2, 0])));
        assert!(degs.contains(&deg(&[0, 2, 2])));
        assert!(degs.contains(&deg(&[2, 1, 2])));
    }

    #[test]
    fn generation_check_accepts_the_generators() {
        let set = villa();
        let zs = crate::syzygy::generators_z(&set).unwrap();
        assert!(generation_check(&set, &zs, 8).ok);
        // Dropping the long bow tie breaks generation at its degree.
        let partial: Vec<SyzygyVector> = zs
            .iter()
            .filter(|v| v.multidegree != deg(&[2, 1, 2]))
            .cloned()
            .collect();
        let check = generation_check(&set, &partial, 8);
        assert!(!check.ok);
        assert_eq!(check.first_failure, Some(deg(&[2, 1, 2])));
    }

    #[test]
    fn linear_presentation_oracle_cases() {
        // Path of four edges: the disjoint end pair has no linear cover.
        let path = MonomialSet::from_pairs(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let check = linear_presentation_oracle(&path, 6).unwrap();
        assert!(!check.ok);
        assert_eq!(check.first_failure, Some(deg(&[1, 1, 0, 1, 1])));
        // Triangle: edge graph is complete.
        let k3 = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(linear_presentation_oracle(&k3, 6).unwrap().ok);
        assert!(!linear_presentation_oracle(&villa(), 8).unwrap().ok);
    }

    #[test]
    fn oracle_report_is_consistent() {
        let set = villa();
        let report = oracle_report(&set, 8).unwrap();
        assert!(!report.polarizable_oracle);
        assert!(report.agree_with_theorem);
        assert_eq!(report.mu_z, 3);
        for s in &report.slices {
            assert!(s.dim_p <= s.dim_z);
            assert!(s.dim_span_z_gens <= s.dim_z);
        }
    }
}
