//! Syzygy vectors attached to even closed walks.
//!
//! A walk `{g_1, ..., g_2r}` with lcm `g` carries the vector whose entry
//! for generator `f_i` is the signed sum of `g/g_j` over the positions
//! where `g_j = f_i`, signs alternating along the canonical representative.
//! The binomial `T`-relation of the walk yields a second vector by taking
//! `T`-derivatives and evaluating at the edges; the two differ exactly by
//! the product of the repeated vertices of the loop-stripped walk.

use std::collections::BTreeMap;

use num::{BigInt, FromPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::require_cohesive;
use crate::linalg::Matrix;
use crate::monomial::{FineDegree, MonomialSet};
use crate::walk::{enumerate_even_cycles, EnumOptions, Walk};
use crate::Rat;

/// `coeff * x^exponents`; the zero monomial has coeff 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedMonomial {
    pub coeff: i64,
    pub exponents: FineDegree,
}

impl SignedMonomial {
    pub fn zero(n: usize) -> Self {
        SignedMonomial { coeff: 0, exponents: FineDegree::zero(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }
}

/// A length-m vector of signed monomials, fine-homogeneous: every nonzero
/// entry satisfies `entry_i * f_i = coeff_i * x^multidegree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyzygyVector {
    pub entries: Vec<SignedMonomial>,
    pub multidegree: FineDegree,
    /// Canonical edge sequence of the walk this vector came from.
    pub source_walk: Option<Vec<usize>>,
}

impl SyzygyVector {
    /// Integer coefficients only; in a fine-graded slice these are the full
    /// coordinates of the vector.
    pub fn coeff_vector(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.coeff).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Checks `exponents(entry_i) + log f_i == multidegree` for nonzero entries.
    pub fn is_homogeneous(&self, set: &MonomialSet) -> bool {
        self.entries.iter().enumerate().all(|(k, e)| {
            e.is_zero() || e.exponents.add(&set.log(k + 1)) == self.multidegree
        })
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, by: &FineDegree) -> SyzygyVector {
        SyzygyVector {
            entries: self
                .entries
                .iter()
                .map(|e| {
                    if e.is_zero() {
                        e.clone()
                    } else {
                        SignedMonomial { coeff: e.coeff, exponents: e.exponents.add(by) }
                    }
                })
                .collect(),
            multidegree: self.multidegree.add(by),
            source_walk: self.source_walk.clone(),
        }
    }
}

/// The differential syzygy of an arbitrary edge sequence, signs taken from
/// the sequence as given (position 1 positive).
pub fn z_of_sequence(set: &MonomialSet, edges: &[usize]) -> SyzygyVector {
    let g = set.lcm_of(edges.iter().copied());
    let mut coeffs = vec![0i64; set.m()];
    for (t, &e) in edges.iter().enumerate() {
        coeffs[e - 1] += if t % 2 == 0 { 1 } else { -1 };
    }
    let entries = (1..=set.m())
        .map(|i| {
            if coeffs[i - 1] == 0 {
                SignedMonomial::zero(set.n())
            } else {
                let exp = g.checked_sub(&set.log(i)).expect("edges divide their lcm");
                SignedMonomial { coeff: coeffs[i - 1], exponents: exp }
            }
        })
        .collect();
    SyzygyVector { entries, multidegree: g, source_walk: None }
}

/// The differential syzygy of a walk, sign pinned by its canonical
/// representative.
pub fn z_vector(set: &MonomialSet, w: &Walk) -> SyzygyVector {
    let mut v = z_of_sequence(set, w.canonical_key());
    v.source_walk = Some(w.canonical_key().to_vec());
    v
}

/// Expands `sum entry_i * d f_i` symbolically and checks it vanishes.
/// Errs on inhomogeneous input.
pub fn verify_differential_syzygy(set: &MonomialSet, v: &SyzygyVector) -> Result<bool> {
    if !v.is_homogeneous(set) {
        return Err(Error::Internal("inhomogeneous syzygy vector".into()));
    }
    // terms[(variable, exponent vector)] accumulates integer coefficients.
    let mut terms: BTreeMap<(usize, FineDegree), i64> = BTreeMap::new();
    for (k, entry) in v.entries.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let f = set.gen(k + 1);
        // d(f) contributes c * f/x_var on dx_var, once per distinct
        // variable of the monomial, with c the exponent.
        let vars: &[usize] = if f.is_loop() { &[f.lo] } else { &[f.lo, f.hi] };
        for &var in vars {
            let c = f.exponent_of(var) as i64;
            let mut exp = entry.exponents.clone().0;
            exp[var - 1] += f.exponent_of(var) - 1;
            if f.lo != f.hi {
                exp[f.other(var) - 1] += 1;
            }
            let key = (var, FineDegree(exp));
            *terms.entry(key).or_insert(0) += entry.coeff * c;
        }
    }
    Ok(terms.values().all(|&c| c == 0))
}

/// The binomial relation of a walk: odd-position edges minus even-position
/// edges, anchored on the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binomial {
    /// Exponent of `T_i` in the positive monomial, length m.
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl Binomial {
    pub fn degree(&self) -> u32 {
        self.plus.iter().sum()
    }
}

pub fn p_binomial(set: &MonomialSet, w: &Walk) -> Binomial {
    let mut plus = vec![0u32; set.m()];
    let mut minus = vec![0u32; set.m()];
    for (t, &e) in w.canonical_key().iter().enumerate() {
        if t % 2 == 0 {
            plus[e - 1] += 1;
        } else {
            minus[e - 1] += 1;
        }
    }
    Binomial { plus, minus }
}

/// Substitutes `T_j -> f_j` and compares exponent vectors of the two sides.
pub fn verify_binomial_relation(set: &MonomialSet, p: &Binomial) -> bool {
    let mut lhs = FineDegree::zero(set.n());
    let mut rhs = FineDegree::zero(set.n());
    for i in 1..=set.m() {
        for _ in 0..p.plus[i - 1] {
            lhs = lhs.add(&set.log(i));
        }
        for _ in 0..p.minus[i - 1] {
            rhs = rhs.add(&set.log(i));
        }
    }
    lhs == rhs
}

/// The polar syzygy of a walk: the `T`-gradient of its binomial evaluated
/// at the edges, anchored consistently with [`z_vector`].
pub fn t_vector(set: &MonomialSet, w: &Walk) -> SyzygyVector {
    let p = p_binomial(set, w);
    // Product of the odd-position edges; equal to the even-position
    // product because the binomial is a relation.
    let mut big = FineDegree::zero(set.n());
    for i in 1..=set.m() {
        for _ in 0..p.plus[i - 1] {
            big = big.add(&set.log(i));
        }
    }
    let entries: Vec<SignedMonomial> = (1..=set.m())
        .map(|i| {
            let c = p.plus[i - 1] as i64 - p.minus[i - 1] as i64;
            if c == 0 {
                SignedMonomial::zero(set.n())
            } else {
                let exp = big.checked_sub(&set.log(i)).expect("edge divides the product");
                SignedMonomial { coeff: c, exponents: exp }
            }
        })
        .collect();
    SyzygyVector {
        entries,
        multidegree: big,
        source_walk: Some(w.canonical_key().to_vec()),
    }
}

/// Product of the repeated vertices of the walk after deleting loop
/// steps, as an exponent vector. Computed structurally and cross-checked
/// against the quotient of the polar and differential multidegrees; a
/// mismatch is a hard internal error. Errs on split input.
pub fn m_factor(set: &MonomialSet, w: &Walk) -> Result<FineDegree> {
    if crate::walk::split_decomposition(w).is_some() {
        return Err(Error::SplitWalk);
    }
    let canon = w.canonical_walk(set);
    let edges = canon.edges();
    let verts = canon.vertices();
    let len = edges.len();
    let mut stripped: BTreeMap<usize, u32> = BTreeMap::new();
    for t in 0..len {
        let prev = edges[(t + len - 1) % len];
        if set.gen(prev).is_loop() {
            continue;
        }
        *stripped.entry(verts[t]).or_insert(0) += 1;
    }
    let mut exp = vec![0u32; set.n()];
    for (&v, &count) in &stripped {
        if count >= 2 {
            exp[v - 1] = count - 1;
        }
    }
    let structural = FineDegree(exp);
    let quotient = t_vector(set, w)
        .multidegree
        .checked_sub(&z_vector(set, w).multidegree)
        .ok_or_else(|| Error::Internal("polar degree below differential degree".into()))?;
    if structural != quotient {
        return Err(Error::Internal(format!(
            "repeated-vertex factor {structural} disagrees with degree quotient {quotient}"
        )));
    }
    Ok(structural)
}

/// Differential syzygies of every even cycle and every induced bow tie,
/// deduplicated by canonical walk key. Requires a cohesive set.
pub fn generators_z(set: &MonomialSet) -> Result<Vec<SyzygyVector>> {
    require_cohesive(set)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for w in enumerate_even_cycles(set, set.n()) {
        if seen.insert(w.canonical_key().to_vec()) {
            out.push(z_vector(set, &w));
        }
    }
    for b in crate::bowtie::enumerate_bowties(set) {
        if !crate::bowtie::is_induced_bowtie(set, &b) {
            continue;
        }
        let w = b.to_walk(set);
        if seen.insert(w.canonical_key().to_vec()) {
            out.push(z_vector(set, &w));
        }
    }
    out.sort_by(|a, b| {
        (a.multidegree.total(), &a.source_walk).cmp(&(b.multidegree.total(), &b.source_walk))
    });
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorsP {
    pub vectors: Vec<SyzygyVector>,
    pub max_len: usize,
    /// Some walk lengths were cut off by `max_len`.
    pub truncated: bool,
}

/// Polar syzygies of every non-split even closed walk up to `max_len`.
pub fn generators_p(set: &MonomialSet, max_len: usize) -> Result<GeneratorsP> {
    require_cohesive(set)?;
    let walks =
        crate::walk::enumerate_non_split_walks(set, &EnumOptions::with_max_len(max_len));
    let truncated = walks.iter().any(|w| w.len() == max_len);
    let vectors = walks.iter().map(|w| t_vector(set, w)).collect();
    Ok(GeneratorsP { vectors, max_len, truncated })
}

/// Exact rank of the vectors evaluated at a generic rational point.
/// Variables map to distinct primes; the point is re-randomized (seeded)
/// and the maximum rank kept when two evaluations disagree.
pub fn generic_rank(set: &MonomialSet, vectors: &[SyzygyVector], seed: u64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    const PRIMES: [u64; 20] =
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];
    let n = set.n();
    let base: Vec<u64> = PRIMES[..n].to_vec();
    let eval_rank = |point: &[u64]| -> usize {
        let rows: Vec<Vec<Rat>> = vectors
            .iter()
            .map(|v| {
                v.entries
                    .iter()
                    .map(|e| {
                        if e.is_zero() {
                            Rat::zero()
                        } else {
                            let mut val = BigInt::from_i64(e.coeff).unwrap();
                            for (k, &exp) in e.exponents.0.iter().enumerate() {
                                val *= BigInt::from_u64(point[k]).unwrap().pow(exp);
                            }
                            Rat::from_integer(val)
                        }
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).rank()
    };
    let r1 = eval_rank(&base);
    if r1 == vectors.len().min(set.m()) {
        return r1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled = base.clone();
    shuffled.shuffle(&mut rng);
    let r2 = eval_rank(&shuffled);
    if r1 == r2 {
        return r1;
    }
    let mut third = base;
    third.shuffle(&mut rng);
    r1.max(r2).max(eval_rank(&third))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial2;

    fn villa() -> MonomialSet {
        MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap()
    }

    fn villa_bowtie(set: &MonomialSet) -> Walk {
        Walk::new(set, vec![1, 2, 4, 5, 4, 2]).unwrap()
    }

    fn square() -> MonomialSet {
        MonomialSet::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap()
    }

    fn deg(v: &[u32]) -> FineDegree {
        FineDegree(v.to_vec())
    }

    #[test]
    fn villa_z_vector_matches_worked_value() {
        let set = villa();
        let z = z_vector(&set, &villa_bowtie(&set));
        // (x2x3^2, -2x1x3^2, 0, 2x1^2x3, -x1^2x2), up to global sign.
        let expected = [
            (1i64, deg(&[0, 1, 2])),
            (-2, deg(&[1, 0, 2])),
            (0, deg(&[0, 0, 0])),
            (2, deg(&[2, 0, 1])),
            (-1, deg(&[2, 1, 0])),
        ];
        let sign = if z.entries[0].coeff > 0 { 1 } else { -1 };
        for (entry, (c, e)) in z.entries.iter().zip(expected.iter()) {
            assert_eq!(entry.coeff, sign * c);
            if *c != 0 {
                assert_eq!(&entry.exponents, e);
            }
        }
        assert_eq!(z.multidegree, deg(&[2, 1, 2]));
        assert!(verify_differential_syzygy(&set, &z).unwrap());
    }

    #[test]
    fn square_z_vector_direct_formula() {
        let set = square();
        let w = Walk::new(&set, vec![1, 2, 3, 4]).unwrap();
        let z = z_vector(&set, &w);
        assert_eq!(z.multidegree, deg(&[1, 1, 1, 1]));
        let coeffs = z.coeff_vector();
        assert_eq!(coeffs.iter().map(|c| c.abs()).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        assert!(verify_differential_syzygy(&set, &z).unwrap());
    }

    #[test]
    fn perturbed_vector_fails_verification() {
        let set = villa();
        let mut z = z_vector(&set, &villa_bowtie(&set));
        z.entries[1].coeff = -z.entries[1].coeff;
        assert!(!verify_differential_syzygy(&set, &z).unwrap());
        let zero = SyzygyVector {
            entries: vec![SignedMonomial::zero(3); 5],
            multidegree: deg(&[0, 0, 0]),
            source_walk: None,
        };
        assert!(verify_differential_syzygy(&set, &zero).unwrap());
    }

    #[test]
    fn villa_binomial_and_t_vector() {
        let set = villa();
        let w = villa_bowtie(&set);
        let p = p_binomial(&set, &w);
        // T1*T4^2 - T2^2*T5 up to swapping the sides.
        let mut sides = [p.plus.clone(), p.minus.clone()];
        sides.sort();
        assert_eq!(sides[0], vec![0, 2, 0, 0, 1]);
        assert_eq!(sides[1], vec![1, 0, 0, 2, 0]);
        assert!(verify_binomial_relation(&set, &p));
        let t = t_vector(&set, &w);
        let z = z_vector(&set, &w);
        let m = m_factor(&set, &w).unwrap();
        assert_eq!(m, deg(&[0, 1, 0])); // x2
        assert_eq!(t, z.shift(&m));
        assert_eq!(t.multidegree, deg(&[2, 2, 2]));
    }

    #[test]
    fn even_cycle_polar_equals_differential() {
        let set = square();
        let w = Walk::new(&set, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(t_vector(&set, &w), z_vector(&set, &w));
        assert_eq!(m_factor(&set, &w).unwrap(), FineDegree::zero(4));
        let p = p_binomial(&set, &w);
        assert!(verify_binomial_relation(&set, &p));
    }

    #[test]
    fn degenerate_bowtie_m_factor_is_shared_vertex() {
        let set = MonomialSet::from_pairs(
            5,
            &[(1, 2), (2, 5), (5, 1), (3, 4), (4, 5), (3, 5)],
        )
        .unwrap();
        let e = |a, b| set.index_of(&Monomial2::new(a, b)).unwrap();
        let w = Walk::new(&set, vec![e(5, 1), e(1, 2), e(2, 5), e(5, 3), e(3, 4), e(4, 5)]).unwrap();
        let m = m_factor(&set, &w).unwrap();
        assert_eq!(m, deg(&[0, 0, 0, 0, 1])); // x5
        assert_eq!(t_vector(&set, &w), z_vector(&set, &w).shift(&m));
    }

    #[test]
    fn random_nonrelation_fails_binomial_check() {
        let set = villa();
        let p = Binomial { plus: vec![1, 0, 0, 0, 0], minus: vec![0, 1, 0, 0, 0] };
        assert!(!verify_binomial_relation(&set, &p));
    }

    #[test]
    fn villa_generators() {
        let set = villa();
        let zs = generators_z(&set).unwrap();
        assert_eq!(zs.len(), 3);
        for z in &zs {
            assert!(verify_differential_syzygy(&set, z).unwrap());
        }
        let ps = generators_p(&set, 6).unwrap();
        assert_eq!(ps.vectors.len(), 3);
        // The loops(1,3) bow tie contributes t = x2 * z.
        let long = ps.vectors.iter().find(|v| v.multidegree == deg(&[2, 2, 2])).unwrap();
        let zlong = zs.iter().find(|v| v.multidegree == deg(&[2, 1, 2])).unwrap();
        assert_eq!(long, &zlong.shift(&deg(&[0, 1, 0])));
    }

    #[test]
    fn generic_ranks_match_height() {
        let set = villa();
        let zs = generators_z(&set).unwrap();
        let ps = generators_p(&set, 6).unwrap();
        let expected = set.m() - set.algebra_dimension();
        assert_eq!(generic_rank(&set, &zs, 0), expected);
        assert_eq!(generic_rank(&set, &ps.vectors, 0), expected);
        let sq = square();
        let zs = generators_z(&sq).unwrap();
        assert_eq!(generic_rank(&sq, &zs, 0), 1);
    }

    #[test]
    fn split_relation_on_glued_squares() {
        let set = MonomialSet::from_pairs(
            7,
            &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 7), (7, 1)],
        )
        .unwrap();
        let w = Walk::new(&set, vec![1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let split = crate::walk::split_decomposition(&w).unwrap();
        let zw = z_of_sequence(&set, &split.anchor_edges);
        let z1 = z_of_sequence(&set, &split.left);
        let z2 = z_of_sequence(&set, &split.right);
        let g = set.lcm_of(split.anchor_edges.iter().copied());
        let s1 = g.checked_sub(&z1.multidegree).unwrap();
        let s2 = g.checked_sub(&z2.multidegree).unwrap();
        let lifted1 = z1.shift(&s1);
        let lifted2 = z2.shift(&s2);
        for i in 0..set.m() {
            let a = &lifted1.entries[i];
            let b = &lifted2.entries[i];
            let c = &zw.entries[i];
            let sum = a.coeff + b.coeff;
            assert_eq!(c.coeff, sum);
            if c.coeff != 0 {
                assert_eq!(c.exponents, if a.coeff != 0 { a.exponents.clone() } else { b.exponents.clone() });
            }
        }
    }
}
