//! Dense exact-rational matrices and the little linear algebra the
//! construction pipeline needs: RREF, nullspace, solving against a fixed
//! column basis, determinants.

use crate::scalar::rat_int;
use num::{BigInt, BigRational, Signed, Zero};

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rat>>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![vec![Rat::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = rat_int(1);
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Rat>>) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        debug_assert!(data.iter().all(|r| r.len() == cols));
        RatMat { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i][j] = v;
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i][j] = &out.data[i][j] + a * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = &out.data[i][j] - &other.data[i][j];
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> RatMat {
        let mut out = self.clone();
        for row in &mut out.data {
            for v in row.iter_mut() {
                *v = &*v * c;
            }
        }
        out
    }

    /// Matrix commutator `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &RatMat) -> RatMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self.data[i][i].clone()).fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    /// Column-major flattening (the basis-solver convention).
    pub fn flatten(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.data[i][j].clone());
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].clone();
            for j in c..self.cols {
                self.data[r][j] = &self.data[r][j] / &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in c..self.cols {
                        self.data[i][j] = &self.data[i][j] - &f * &self.data[r][j];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right nullspace, each vector scaled to a primitive
    /// integer vector with positive leading entry.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = rat_int(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.data[r][free].clone();
            }
            basis.push(primitive_integer_vector(&v));
        }
        basis
    }

    /// Exact determinant by fraction Gaussian elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = rat_int(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.data[i][c].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.data.swap(c, p);
                det = -det;
            }
            det = &det * &m.data[c][c];
            let inv = m.data[c][c].clone();
            for i in c + 1..n {
                if m.data[i][c].is_zero() {
                    continue;
                }
                let f = &m.data[i][c] / &inv;
                for j in c..n {
                    m.data[i][j] = &m.data[i][j] - &f * &m.data[c][j];
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = rat_int(1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i][j] = aug.data[i][n + j].clone();
            }
        }
        Some(inv)
    }
}

/// Scale a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. Deterministic representative for extracted
/// root vectors and nullspace bases.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<Rat> {
    let mut denom_lcm = BigInt::from(1);
    for x in v {
        if !x.is_zero() {
            denom_lcm = num::integer::lcm(denom_lcm, x.denom().clone());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(denom_lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num::integer::gcd(g, x.clone());
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let first = ints.iter().find(|x| !x.is_zero());
    let sign = if let Some(f) = first {
        if f.is_negative() {
            BigInt::from(-1)
        } else {
            BigInt::from(1)
        }
    } else {
        BigInt::from(1)
    };
    let g = g * sign;
    ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect()
}

/// Solver for expressing vectors in a fixed column basis.
///
/// Holds the inverse of the pivot-row square block, so repeated solves are
/// one small matrix-vector product plus a consistency check.
pub struct BasisSolver {
    basis: RatMat,
    pivot_rows: Vec<usize>,
    block_inv: RatMat,
}

impl BasisSolver {
    /// `basis` is (ambient dim) x (basis size) with full column rank.
    pub fn new(basis: RatMat) -> Option<Self> {
        let n = basis.cols;
        let mut work = basis.clone();
        // RREF of the transpose marks independent rows of `basis`.
        let mut t = RatMat::zeros(basis.cols, basis.rows);
        for i in 0..basis.rows {
            for j in 0..basis.cols {
                t.data[j][i] = basis.data[i][j].clone();
            }
        }
        let pivot_rows = t.rref();
        if pivot_rows.len() < n {
            return None;
        }
        work.data = pivot_rows.iter().map(|&r| basis.data[r].clone()).collect();
        work.rows = n;
        let block_inv = work.inverse()?;
        Some(BasisSolver { basis, pivot_rows, block_inv })
    }

    /// Coordinates of `v` in the basis; `None` if `v` is outside the span.
    pub fn solve(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.basis.rows);
        let n = self.basis.cols;
        let mut x = vec![Rat::zero(); n];
        for (i, row) in self.block_inv.data.iter().enumerate() {
            let mut acc = Rat::zero();
            for (j, coef) in row.iter().enumerate() {
                if !coef.is_zero() {
                    let b = &v[self.pivot_rows[j]];
                    if !b.is_zero() {
                        acc = acc + coef * b;
                    }
                }
            }
            x[i] = acc;
        }
        // Consistency on all ambient rows.
        for r in 0..self.basis.rows {
            let mut acc = Rat::zero();
            for j in 0..n {
                let b = &self.basis.data[r][j];
                if !b.is_zero() && !x[j].is_zero() {
                    acc = acc + b * &x[j];
                }
            }
            if acc != v[r] {
                return None;
            }
        }
        Some(x)
    }
}
