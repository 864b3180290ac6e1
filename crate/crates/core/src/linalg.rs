//! Exact dense linear algebra, generic over the scalar type.
//!
//! Everything here is plain Gaussian elimination. The scalar is any
//! field-like type implementing the `num-traits` numeric traits; the rest
//! of the crate instantiates it with [`crate::Rat`] so every rank and
//! kernel is exact.

use num::traits::{Num, Signed};

/// Scalar admissible for exact elimination. Division must be exact
/// (a field), which holds for rationals and floating point alike.
pub trait Scalar: Clone + PartialEq + Num + Signed {}
impl<T> Scalar for T where T: Clone + PartialEq + Num + Signed {}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form.
    /// Returns the pivot columns; the rank is their count.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = K::one() / self.get(row, col).clone();
            for c in col..self.cols {
                let v = self.get(row, c).clone() * inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c).clone() - factor.clone() * self.get(row, c).clone();
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![K::zero(); self.cols];
            vec[free] = K::one();
            for (&pc, r) in pivots.iter().zip(0..) {
                vec[pc] = K::zero() - m.get(r, free).clone();
            }
            basis.push(vec);
        }
        basis
    }
}

/// Row space maintained incrementally in reduced echelon form.
#[derive(Debug, Clone)]
pub struct RowSpan<K> {
    width: usize,
    rows: Vec<Vec<K>>,
    pivots: Vec<usize>,
}

impl<K: Scalar> RowSpan<K> {
    pub fn new(width: usize) -> Self {
        RowSpan { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [K]) {
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for c in p..self.width {
                    v[c] = v[c].clone() - factor.clone() * row[c].clone();
                }
            }
        }
    }

    pub fn contains(&self, v: &[K]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| x.is_zero())
    }

    /// Inserts a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &[K]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = K::one() / v[p].clone();
        for c in p..self.width {
            v[c] = v[c].clone() * inv.clone();
        }
        // Back-substitute into existing rows so the basis stays reduced.
        for (row, &rp) in self.rows.iter_mut().zip(self.pivots.iter()) {
            debug_assert!(rp != p);
            if !row[p].is_zero() {
                let factor = row[p].clone();
                for c in p..self.width {
                    row[c] = row[c].clone() - factor.clone() * v[c].clone();
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num::{FromPrimitive, Zero};

    fn q(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn rank_of_triangle_incidence() {
        // Exponent rows of {x1x2, x2x3, x1x3}.
        let m = qm(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn rank_of_even_cycle_is_deficient() {
        let m = qm(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let m = qm(&[&[2, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 2]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        for r in 0..m.rows() {
            let mut acc = q(0);
            for c in 0..m.cols() {
                acc = acc + m.get(r, c).clone() * ns[0][c].clone();
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn row_span_insert_tracks_rank() {
        let mut span = RowSpan::<Rat>::new(3);
        assert!(span.insert(&[q(1), q(2), q(0)]));
        assert!(span.insert(&[q(0), q(1), q(1)]));
        assert!(!span.insert(&[q(1), q(3), q(1)]));
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&[q(2), q(5), q(1)]));
        assert!(!span.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn works_for_f64_too() {
        let m = Matrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(m.rank(), 1);
    }
}
