//! Degree-2 monomials, generator sets and fine (multigraded) degrees.
//!
//! Variable indices are 1-based everywhere, matching the usual naming
//! `x1, x2, ...` used in input files and reports. Generator indices are
//! 1-based as well.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::Rat;

/// A degree-2 monomial `x_lo * x_hi` with `lo <= hi`; a loop iff `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial2 {
    pub lo: usize,
    pub hi: usize,
}

impl Monomial2 {
    pub fn new(a: usize, b: usize) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Monomial2 { lo, hi }
    }

    pub fn is_loop(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_squarefree(&self) -> bool {
        self.lo < self.hi
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// Exponent of `x_v` in the monomial (0, 1 or 2).
    pub fn exponent_of(&self, v: usize) -> u32 {
        (self.lo == v) as u32 + (self.hi == v) as u32
    }

    /// The endpoint other than `v`; for a loop this is `v` itself.
    pub fn other(&self, v: usize) -> usize {
        debug_assert!(self.contains(v));
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }

    /// A common variable of two monomials, if any. For distinct monomials
    /// the common variable is unique.
    pub fn shared_var(&self, other: &Monomial2) -> Option<usize> {
        if other.contains(self.lo) {
            Some(self.lo)
        } else if other.contains(self.hi) {
            Some(self.hi)
        } else {
            None
        }
    }
}

impl fmt::Display for Monomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_loop() {
            write!(f, "x{}^2", self.lo)
        } else {
            write!(f, "x{}*x{}", self.lo, self.hi)
        }
    }
}

/// A fine (Z^n) degree: a vector of nonnegative exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FineDegree(pub Vec<u32>);

impl FineDegree {
    pub fn zero(n: usize) -> Self {
        FineDegree(vec![0; n])
    }

    pub fn of_monomial(n: usize, m: &Monomial2) -> Self {
        let mut v = vec![0u32; n];
        v[m.lo - 1] += 1;
        v[m.hi - 1] += 1;
        FineDegree(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &FineDegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum (the lcm of the monomials).
    pub fn join(&self, other: &FineDegree) -> FineDegree {
        FineDegree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn add(&self, other: &FineDegree) -> FineDegree {
        FineDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; none when not `other <= self`.
    pub fn checked_sub(&self, other: &FineDegree) -> Option<FineDegree> {
        if other.leq(self) {
            Some(FineDegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }

    pub fn exponent_string(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for FineDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// An ordered set of distinct degree-2 monomials in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialSet {
    n: usize,
    gens: Vec<Monomial2>,
}

impl MonomialSet {
    pub fn new(n: usize, gens: Vec<Monomial2>) -> Result<Self> {
        for g in &gens {
            if g.lo < 1 {
                return Err(Error::IndexOutOfRange { index: g.lo, n });
            }
            if g.hi > n {
                return Err(Error::IndexOutOfRange { index: g.hi, n });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for g in &gens {
            if !seen.insert((g.lo, g.hi)) {
                return Err(Error::DuplicateMonomial { lo: g.lo, hi: g.hi });
            }
        }
        Ok(MonomialSet { n, gens })
    }

    /// Convenience constructor from `(i, j)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(a, b)| Monomial2::new(a, b)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.gens.len()
    }

    /// Generator `f_i`, 1-based.
    pub fn gen(&self, i: usize) -> &Monomial2 {
        &self.gens[i - 1]
    }

    pub fn gens(&self) -> &[Monomial2] {
        &self.gens
    }

    /// 1-based index of a monomial in the set.
    pub fn index_of(&self, m: &Monomial2) -> Option<usize> {
        self.gens.iter().position(|g| g == m).map(|p| p + 1)
    }

    pub fn log(&self, i: usize) -> FineDegree {
        FineDegree::of_monomial(self.n, self.gen(i))
    }

    /// The m x n matrix of generator exponent vectors.
    pub fn log_matrix(&self) -> Vec<Vec<u32>> {
        self.gens
            .iter()
            .map(|g| (1..=self.n).map(|v| g.exponent_of(v)).collect())
            .collect()
    }

    /// `dim k[f]`, computed as the exact rational rank of the log-matrix.
    pub fn algebra_dimension(&self) -> usize {
        let rows = self
            .log_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(|e| Rat::from_integer(e.into())).collect())
            .collect();
        Matrix::<Rat>::from_rows(rows).rank()
    }

    /// lcm of the given generators (1-based indices, repeats ignored).
    pub fn lcm_of<I: IntoIterator<Item = usize>>(&self, edges: I) -> FineDegree {
        let mut acc = FineDegree::zero(self.n);
        for e in edges {
            acc = acc.join(&self.log(e));
        }
        acc
    }

    /// 1-based indices of generators dividing `x^b`.
    pub fn divisors_of(&self, b: &FineDegree) -> Vec<usize> {
        (1..=self.m()).filter(|&i| self.log(i).leq(b)).collect()
    }

    /// Declared variables that occur in no generator.
    pub fn unused_variables(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&v| !self.gens.iter().any(|g| g.contains(v)))
            .collect()
    }

    /// Canonical `.mon` rendering; reparses to an equal set.
    pub fn to_mon_string(&self) -> String {
        let mut out = format!("vars {}\n", self.n);
        for g in &self.gens {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the `.mon` format: `#` starts a comment, an optional header
    /// `vars <n>` declares the variable count, then one monomial per line
    /// as `x<i>*x<j>`, `x<i>^2` or a bare pair `<i> <j>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared_n: Option<usize> = None;
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new(); // (lo, hi, line)
        let mut saw_monomial = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars") {
                if saw_monomial || declared_n.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "vars header must appear once, before any monomial".into(),
                    });
                }
                let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad variable count {:?}", rest.trim()),
                })?;
                if n == 0 {
                    return Err(Error::Parse { line: line_no, msg: "vars must be >= 1".into() });
                }
                declared_n = Some(n);
                continue;
            }
            let (a, b) = parse_monomial_line(line, line_no)?;
            saw_monomial = true;
            let m = Monomial2::new(a, b);
            pairs.push((m.lo, m.hi, line_no));
        }
        if pairs.is_empty() {
            return Err(Error::EmptySet);
        }
        let max_index = pairs.iter().map(|&(_, hi, _)| hi).max().unwrap();
        let n = declared_n.unwrap_or(max_index);
        for &(lo, hi, line) in &pairs {
            if lo < 1 {
                return Err(Error::Parse { line, msg: format!("variable index {lo} < 1") });
            }
            if hi > n {
                return Err(Error::Parse {
                    line,
                    msg: format!("variable index {hi} exceeds declared count {n}"),
                });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(lo, hi, line) in &pairs {
            if !seen.insert((lo, hi)) {
                return Err(Error::Parse {
                    line,
                    msg: format!("duplicate monomial {}", Monomial2 { lo, hi }),
                });
            }
        }
        MonomialSet::new(n, pairs.into_iter().map(|(lo, hi, _)| Monomial2 { lo, hi }).collect())
    }
}

fn parse_var(token: &str, line: usize) -> Result<usize> {
    let t = token.trim();
    let rest = t.strip_prefix('x').ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected variable like x3, got {t:?}"),
    })?;
    let idx: usize = rest.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad variable index in {t:?}"),
    })?;
    if idx < 1 {
        return Err(Error::Parse { line, msg: format!("variable index {idx} < 1") });
    }
    Ok(idx)
}

fn parse_monomial_line(line: &str, line_no: usize) -> Result<(usize, usize)> {
    if line.contains('*') {
        let parts: Vec<&str> = line.split('*').collect();
        if parts.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("monomial must have degree 2, got {line:?}"),
            });
        }
        let degree_err = || Error::Parse {
            line: line_no,
            msg: format!("monomial must have degree 2, got {line:?}"),
        };
        // Either x<i>*x<j> or exponents smuggled in; reject powers here.
        if parts.iter().any(|p| p.contains('^')) {
            return Err(degree_err());
        }
        return Ok((parse_var(parts[0], line_no)?, parse_var(parts[1], line_no)?));
    }
    if let Some(caret) = line.find('^') {
        let (base, exp) = line.split_at(caret);
        let exp = &exp[1..];
        if exp.trim() != "2" {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("monomial must have degree 2, got {line:?}"),
            });
        }
        let v = parse_var(base, line_no)?;
        return Ok((v, v));
    }
    // Bare pair of indices.
    let nums: Vec<&str> = line.split_whitespace().collect();
    if nums.len() == 2 {
        let parse = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad index {s:?}"),
            })
        };
        let a = parse(nums[0])?;
        let b = parse(nums[1])?;
        if a < 1 || b < 1 {
            return Err(Error::Parse { line: line_no, msg: "variable index < 1".into() });
        }
        return Ok((a, b));
    }
    Err(Error::Parse { line: line_no, msg: format!("malformed token {line:?}") })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_forms() {
        let set = MonomialSet::parse("x1*x2\nx2^2").unwrap();
        assert_eq!(set.n(), 2);
        assert_eq!(set.gens(), &[Monomial2::new(1, 2), Monomial2::new(2, 2)]);
    }

    #[test]
    fn parse_bare_pairs_and_comments() {
        let set = MonomialSet::parse("# a square\nvars 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        assert_eq!(set.n(), 4);
        assert_eq!(set.m(), 4);
    }

    #[test]
    fn duplicate_in_different_spellings_rejected() {
        let err = MonomialSet::parse("x1*x1\nx1^2").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
    }

    #[test]
    fn degree_errors() {
        assert!(MonomialSet::parse("x1*x2*x3").is_err());
        assert!(MonomialSet::parse("x1^3").is_err());
        assert!(MonomialSet::parse("x1").is_err());
        assert!(MonomialSet::parse("x0^2").is_err());
    }

    #[test]
    fn loop_chain_example_parses() {
        let set = MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap();
        assert_eq!(set.m(), 5);
        assert_eq!(set.n(), 3);
    }

    #[test]
    fn declared_unused_variable_is_flagged_not_rejected() {
        let set = MonomialSet::parse("vars 3\nx1*x2").unwrap();
        assert_eq!(set.unused_variables(), vec![3]);
    }

    #[test]
    fn mon_round_trip() {
        let set = MonomialSet::parse("vars 3\nx1^2\nx1*x2\nx2*x3").unwrap();
        let again = MonomialSet::parse(&set.to_mon_string()).unwrap();
        assert_eq!(set, again);
    }

    #[test]
    fn dimension_examples() {
        // Triangle: exact elimination on [[1,1,0],[0,1,1],[1,0,1]].
        let tri = MonomialSet::from_pairs(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(tri.algebra_dimension(), 3);
        // 4-cycle (connected bipartite): n - 1.
        let sq = MonomialSet::from_pairs(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert_eq!(sq.algebra_dimension(), 3);
        // Loop chain: connected with loops gives n.
        let villa = MonomialSet::parse("x1^2\nx1*x2\nx2^2\nx2*x3\nx3^2").unwrap();
        assert_eq!(villa.algebra_dimension(), 3);
    }

    #[test]
    fn fine_degree_ops() {
        let a = FineDegree(vec![2, 1, 0]);
        let b = FineDegree(vec![1, 1, 1]);
        assert!(!a.leq(&b));
        assert_eq!(a.join(&b), FineDegree(vec![2, 1, 1]));
        assert_eq!(a.total(), 3);
        assert_eq!(b.checked_sub(&FineDegree(vec![1, 0, 1])), Some(FineDegree(vec![0, 1, 0])));
        assert_eq!(a.checked_sub(&b), None);
    }
}
