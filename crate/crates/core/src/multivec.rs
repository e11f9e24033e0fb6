//! Exterior algebra over a simple Lie algebra: wedge products, the Schouten
//! bracket, ad-actions, the sharp map of bivectors and the CDYBE right-hand
//! side.
//!
//! Schouten convention (calibrated, see `convention`): for decomposables
//! `[x_1^..^x_p, y_1^..^y_q] = sum_{a,b} (-1)^{a+b} [x_a,y_b] ^ x_(rest) ^ y_(rest)`
//! with 1-based positions. On degree (1,1) this is the Lie bracket, and it
//! makes `r(lambda)` from the coth family satisfy the modified CDYBE with
//! right-hand side `cybe_rhs = 1/2 [r_0, r_0]`.

use crate::error::{CoreError, Result};
use crate::ratmat::Rat;
use crate::rootsys::{CartanType, SimpleLieAlgebra};
use crate::scalar::{rat, Coeff};
use num::complex::Complex64;
use num::Zero;
use std::collections::BTreeMap;

/// Sparse element of the exterior algebra over `g`.
///
/// Keys are strictly increasing basis-index tuples; zero coefficients are
/// pruned on insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector<S: Coeff> {
    pub cartan_type: CartanType,
    pub dim: usize,
    terms: BTreeMap<Vec<usize>, S>,
}

/// Merge sorted index tuples into one strictly increasing key, tracking the
/// sign of the shuffle; `None` if any index repeats.
pub fn wedge_keys(parts: &[&[usize]]) -> Option<(Vec<usize>, i32)> {
    let mut all: Vec<usize> = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    for p in parts {
        all.extend_from_slice(p);
    }
    let mut sign = 1i32;
    // insertion sort, counting inversions
    for i in 1..all.len() {
        let mut j = i;
        while j > 0 && all[j - 1] > all[j] {
            all.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in all.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((all, sign))
}

impl<S: Coeff> MultiVector<S> {
    pub fn zero(alg: &SimpleLieAlgebra) -> Self {
        MultiVector { cartan_type: alg.cartan_type, dim: alg.dim, terms: BTreeMap::new() }
    }

    pub fn basis_vector(alg: &SimpleLieAlgebra, index: usize) -> Self {
        let mut m = Self::zero(alg);
        m.add_term(&[index], S::one());
        m
    }

    /// Degree-1 element from a dense coefficient vector.
    pub fn from_vector(alg: &SimpleLieAlgebra, v: &[S]) -> Self {
        let mut m = Self::zero(alg);
        for (i, c) in v.iter().enumerate() {
            m.add_term(&[i], c.clone());
        }
        m
    }

    /// Add `c * e_{k1} ^ ... ^ e_{kd}` (indices in any order).
    pub fn add_term(&mut self, key: &[usize], c: S) {
        if c.is_zero() {
            return;
        }
        let Some((sorted, sign)) = wedge_keys(&[key]) else {
            return;
        };
        let c = if sign < 0 { c.neg() } else { c };
        let entry = self.terms.entry(sorted);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let new = o.get().clone() + c;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[usize]) -> S {
        self.terms.get(key).cloned().unwrap_or_else(S::zero)
    }

    /// Degree when homogeneous, `None` for 0 or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.len();
        if it.all(|k| k.len() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k, c.clone().neg());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = MultiVector { cartan_type: self.cartan_type, dim: self.dim, terms: BTreeMap::new() };
        for (k, v) in &self.terms {
            out.add_term(k, v.clone() * c.clone());
        }
        out
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = MultiVector { cartan_type: self.cartan_type, dim: self.dim, terms: BTreeMap::new() };
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some((key, sign)) = wedge_keys(&[ka, kb]) {
                    let mut c = ca.clone() * cb.clone();
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(&key, c);
                }
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.cartan_type != other.cartan_type || self.dim != other.dim {
            return Err(CoreError::AlgebraMismatch);
        }
        Ok(())
    }

    fn check_alg(&self, alg: &SimpleLieAlgebra) -> Result<()> {
        if self.cartan_type != alg.cartan_type || self.dim != alg.dim {
            return Err(CoreError::AlgebraMismatch);
        }
        Ok(())
    }
}

impl MultiVector<Rat> {
    /// Exact-to-float promotion.
    pub fn promote(&self) -> MultiVector<Complex64> {
        let mut out = MultiVector { cartan_type: self.cartan_type, dim: self.dim, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), crate::scalar::rat_to_c64(c));
        }
        out
    }
}

/// Schouten bracket, extended from the Lie bracket by the graded Leibniz
/// rule; works termwise so mixed-degree inputs are fine.
pub fn schouten<S: Coeff>(alg: &SimpleLieAlgebra, a: &MultiVector<S>, b: &MultiVector<S>) -> Result<MultiVector<S>> {
    a.check_alg(alg)?;
    b.check_alg(alg)?;
    a.check_same(b)?;
    let mut out = MultiVector::zero(alg);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let c = ca.clone() * cb.clone();
            for (pa, &ia) in ka.iter().enumerate() {
                let rest_a: Vec<usize> = ka.iter().enumerate().filter(|(q, _)| *q != pa).map(|(_, &x)| x).collect();
                for (pb, &jb) in kb.iter().enumerate() {
                    let rest_b: Vec<usize> = kb.iter().enumerate().filter(|(q, _)| *q != pb).map(|(_, &x)| x).collect();
                    let pos_sign = if (pa + pb) % 2 == 0 { 1 } else { -1 };
                    for (k, sc) in alg.bracket_sparse(ia, jb) {
                        if let Some((key, merge_sign)) = wedge_keys(&[&[*k], &rest_a, &rest_b]) {
                            let mut coeff = c.clone() * S::from_rat(sc);
                            if pos_sign * merge_sign < 0 {
                                coeff = coeff.neg();
                            }
                            out.add_term(&key, coeff);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Extension of `ad(x)` to the exterior algebra as a degree-preserving
/// derivation; equals `schouten` with a degree-1 first argument.
pub fn ad_action<S: Coeff>(alg: &SimpleLieAlgebra, x: &MultiVector<S>, m: &MultiVector<S>) -> Result<MultiVector<S>> {
    if x.degree().is_some_and(|d| d != 1) {
        return Err(CoreError::InvalidInput("ad_action needs a degree-1 element".into()));
    }
    schouten(alg, x, m)
}

/// ad of a single basis generator.
pub fn ad_generator<S: Coeff>(alg: &SimpleLieAlgebra, index: usize, m: &MultiVector<S>) -> Result<MultiVector<S>> {
    ad_action(alg, &MultiVector::basis_vector(alg, index), m)
}

/// Generator set used for invariance reports: h_i and E_{+-alpha_i} for
/// the simple roots.
pub fn invariance_generators(alg: &SimpleLieAlgebra) -> Vec<usize> {
    let mut gens: Vec<usize> = (0..alg.rank).collect();
    for (p, root) in alg.root_data.positive_roots.iter().enumerate() {
        if root.height() == 1 {
            gens.push(alg.e_index(p));
            gens.push(alg.f_index(p));
        }
    }
    gens
}

/// Max residual of `ad(gen) m` over the generator set.
pub fn is_ad_invariant<S: Coeff>(alg: &SimpleLieAlgebra, m: &MultiVector<S>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in invariance_generators(alg) {
        let r = ad_generator(alg, g, m)?;
        worst = worst.max(r.max_coeff_norm());
    }
    Ok(worst)
}

/// Apply the sharp map of a bivector: `(x^y)# z = kappa(y,z) x - kappa(x,z) y`.
pub fn sharp_apply<S: Coeff>(alg: &SimpleLieAlgebra, b: &MultiVector<S>, z: &[S]) -> Result<Vec<S>> {
    b.check_alg(alg)?;
    if z.len() != alg.dim {
        return Err(CoreError::DimensionMismatch { expected: alg.dim, got: z.len() });
    }
    if b.degree().is_some_and(|d| d != 2) {
        return Err(CoreError::InvalidInput("sharp needs a bivector".into()));
    }
    let kappa_row = |i: usize, z: &[S]| -> S {
        let mut acc = S::zero();
        for (j, zj) in z.iter().enumerate() {
            if !zj.is_zero() {
                let k = alg.killing_entry(i, j);
                if !k.is_zero() {
                    acc = acc + S::from_rat(k) * zj.clone();
                }
            }
        }
        acc
    };
    let mut out = vec![S::zero(); alg.dim];
    for (key, c) in &b.terms {
        let (i, j) = (key[0], key[1]);
        let kj = kappa_row(j, z);
        let ki = kappa_row(i, z);
        out[i] = out[i].clone() + c.clone() * kj;
        out[j] = out[j].clone() - c.clone() * ki;
    }
    Ok(out)
}

/// Dense matrix of the sharp map.
pub fn sharp_matrix<S: Coeff>(alg: &SimpleLieAlgebra, b: &MultiVector<S>) -> Result<Vec<Vec<S>>> {
    let mut cols = Vec::with_capacity(alg.dim);
    for j in 0..alg.dim {
        let mut z = vec![S::zero(); alg.dim];
        z[j] = S::one();
        cols.push(sharp_apply(alg, b, &z)?);
    }
    // transpose into row-major
    let mut rows = vec![vec![S::zero(); alg.dim]; alg.dim];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            rows[i][j] = v.clone();
        }
    }
    Ok(rows)
}

/// The standard r-matrix `r_0 = sum_a E_a ^ E_{-a}`, exact.
pub fn r0(alg: &SimpleLieAlgebra) -> MultiVector<Rat> {
    let nb = crate::rootsys::normalized_basis(alg);
    let mut m = MultiVector::zero(alg);
    for p in 0..alg.num_pos() {
        m.add_term(&[alg.e_index(p), alg.f_index(p)], rat(1, 1) / nb.kappa_ef[p].clone());
    }
    m
}

/// Right-hand side of the modified CDYBE with coupling 2: `1/2 [r_0, r_0]`.
pub fn cybe_rhs(alg: &SimpleLieAlgebra) -> MultiVector<Rat> {
    let r = r0(alg);
    schouten(alg, &r, &r).expect("same algebra").scale(&rat(1, 2))
}
