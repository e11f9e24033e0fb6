//! Simple Lie algebras over the rationals: construction from Cartan data,
//! Killing form, normalized root vectors and the coordinate conventions on
//! the Cartan subalgebra.

pub mod matrices;
mod extract;

use crate::error::{CoreError, Result};
use crate::ratmat::{Rat, RatMat};
use crate::scalar::rat_to_f64;
use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::G => "G",
        };
        write!(f, "{s}")
    }
}

/// Cartan type of a supported simple Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub const SUPPORTED: [(Series, usize); 10] = [
        (Series::A, 1),
        (Series::A, 2),
        (Series::A, 3),
        (Series::A, 4),
        (Series::B, 2),
        (Series::B, 3),
        (Series::C, 2),
        (Series::C, 3),
        (Series::D, 4),
        (Series::G, 2),
    ];

    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let t = CartanType { series, rank };
        if Self::SUPPORTED.contains(&(series, rank)) {
            Ok(t)
        } else {
            Err(CoreError::UnsupportedType(t.to_string()))
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || CoreError::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().ok_or_else(err)? {
            'A' | 'a' => Series::A,
            'B' | 'b' => Series::B,
            'C' | 'c' => Series::C,
            'D' | 'd' => Series::D,
            'G' | 'g' => Series::G,
            _ => return Err(err()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| err())?;
        Self::new(series, rank)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// A root, stored as integer coordinates in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            if c == 1 {
                write!(f, "a{}", i + 1)?;
            } else {
                write!(f, "{}a{}", c, i + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Root datum: simple-root labels and the positive roots.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub simple_roots: Vec<String>,
    pub positive_roots: Vec<Root>,
}

/// Root-space tag of a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisRole {
    Cartan(usize),
    /// (positive-root index, sign)
    RootVector(usize, i8),
}

type Sparse = Vec<(usize, Rat)>;

/// A simple Lie algebra with exact rational structure constants.
///
/// Basis layout: indices `0..n` are the simple coroots `h_i = [E_i, E_{-i}]`
/// (normalized so `kappa(h_i, .) = alpha_i(.)`), then one raw root vector
/// `e_alpha` per positive root, then the matching `f_alpha`.
pub struct SimpleLieAlgebra {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub dim: usize,
    pub labels: Vec<String>,
    pub root_data: RootDatum,
    pub basis_roles: Vec<BasisRole>,
    brackets: Vec<Vec<Sparse>>,
    brackets_f64: Vec<Vec<Vec<(usize, f64)>>>,
    killing: RatMat,
    killing_f64: Vec<Vec<f64>>,
    /// Per positive root p, the values alpha(h_k) for k < n.
    root_on_cartan: Vec<Vec<Rat>>,
    normalized: NormalizedBasis,
}

/// The paper-normalized basis data: `kappa(E_a, E_{-a}) = 1`,
/// `h_a = [E_a, E_{-a}]`, and the Killing-dual Cartan basis.
#[derive(Debug, Clone)]
pub struct NormalizedBasis {
    /// kappa(e_a, f_a) of the raw root vectors, per positive root.
    pub kappa_ef: Vec<Rat>,
    /// Dual basis: column i holds the h-basis coordinates of `h-dual_i`
    /// with kappa(h-dual_i, h_j) = delta_ij.
    pub dual: RatMat,
}

pub fn build_algebra(t: CartanType) -> Result<SimpleLieAlgebra> {
    CartanType::new(t.series, t.rank)?;
    let data = match (t.series, t.rank) {
        (Series::A, n) => matrices::sl_data(n),
        (Series::B, n) => matrices::so_data(n, 2 * n + 1),
        (Series::C, n) => matrices::sp_data(n),
        (Series::D, n) => matrices::so_data(n, 2 * n),
        (Series::G, _) => matrices::g2_data(),
    };
    let ex = extract::extract(&data);
    let n = ex.n;
    let num_pos = ex.pos_coords.len();
    let dim = ex.dim;
    assert_eq!(dim, n + 2 * num_pos);

    let mut labels: Vec<String> = (0..n).map(|i| format!("h{}", i + 1)).collect();
    let mut basis_roles: Vec<BasisRole> = (0..n).map(BasisRole::Cartan).collect();
    for (p, c) in ex.pos_coords.iter().enumerate() {
        labels.push(format!("E+{:?}", c));
        basis_roles.push(BasisRole::RootVector(p, 1));
    }
    for (p, c) in ex.pos_coords.iter().enumerate() {
        labels.push(format!("E-{:?}", c));
        basis_roles.push(BasisRole::RootVector(p, -1));
    }
    let _ = &labels;

    let brackets = ex.brackets;
    let brackets_f64: Vec<Vec<Vec<(usize, f64)>>> = brackets
        .iter()
        .map(|row| row.iter().map(|s| s.iter().map(|(k, c)| (*k, rat_to_f64(c))).collect()).collect())
        .collect();

    // Killing form kappa(x_i, x_j) = trace(ad x_i . ad x_j), exact.
    let killing = {
        let mut g = RatMat::zeros(dim, dim);
        // ad_i as sparse (row, col, val) lists
        let ads: Vec<Vec<(usize, usize, Rat)>> = (0..dim)
            .map(|i| {
                let mut entries = Vec::new();
                for j in 0..dim {
                    for (k, c) in &brackets[i][j] {
                        entries.push((*k, j, c.clone()));
                    }
                }
                entries
            })
            .collect();
        for i in 0..dim {
            let mut map: std::collections::HashMap<(usize, usize), Rat> = std::collections::HashMap::new();
            for (r, c, v) in &ads[i] {
                map.insert((*r, *c), v.clone());
            }
            for j in i..dim {
                let mut acc = Rat::zero();
                for (r, c, v) in &ads[j] {
                    if let Some(u) = map.get(&(*c, *r)) {
                        acc = acc + u * v;
                    }
                }
                g.data[i][j] = acc.clone();
                g.data[j][i] = acc;
            }
        }
        g
    };
    let killing_f64: Vec<Vec<f64>> = killing.data.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();

    // alpha(h_k) = (row of Cartan Killing block) . coords, exact.
    let root_on_cartan: Vec<Vec<Rat>> = ex
        .pos_coords
        .iter()
        .map(|coords| {
            (0..n)
                .map(|k| {
                    let mut acc = Rat::zero();
                    for (j, &cj) in coords.iter().enumerate() {
                        if cj != 0 {
                            acc = acc + &killing.data[j][k] * Rat::from_integer(cj.into());
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    // kappa(e_a, f_a) per positive root.
    let kappa_ef: Vec<Rat> = (0..num_pos).map(|p| killing.data[n + p][n + num_pos + p].clone()).collect();
    for k in &kappa_ef {
        assert!(!k.is_zero());
    }

    // Killing-dual Cartan basis.
    let cartan_block = RatMat::from_rows((0..n).map(|i| killing.data[i][..n].to_vec()).collect());
    let dual = cartan_block.inverse().expect("Cartan Killing block is invertible");

    let root_data = RootDatum {
        simple_roots: (0..n)
            .map(|i| {
                Root { coords: (0..n).map(|j| i64::from(i == j)).collect() }.to_string()
            })
            .collect(),
        positive_roots: ex.pos_coords.iter().map(|c| Root { coords: c.clone() }).collect(),
    };

    Ok(SimpleLieAlgebra {
        cartan_type: t,
        rank: n,
        dim,
        labels,
        root_data,
        basis_roles,
        brackets,
        brackets_f64,
        killing,
        killing_f64,
        root_on_cartan,
        normalized: NormalizedBasis { kappa_ef, dual },
    })
}

/// The Killing Gram matrix (ad-trace form), exact.
pub fn killing_form(alg: &SimpleLieAlgebra) -> &RatMat {
    &alg.killing
}

/// The paper-normalized basis data for `alg`.
pub fn normalized_basis(alg: &SimpleLieAlgebra) -> &NormalizedBasis {
    &alg.normalized
}

impl SimpleLieAlgebra {
    pub fn num_pos(&self) -> usize {
        self.root_data.positive_roots.len()
    }

    /// Basis index of the raw root vector e_alpha.
    pub fn e_index(&self, p: usize) -> usize {
        self.rank + p
    }

    /// Basis index of the raw root vector f_alpha.
    pub fn f_index(&self, p: usize) -> usize {
        self.rank + self.num_pos() + p
    }

    pub fn root(&self, p: usize) -> &Root {
        &self.root_data.positive_roots[p]
    }

    pub fn root_label(&self, p: usize, sign: i8) -> String {
        format!("{}{}", if sign >= 0 { "+" } else { "-" }, self.root(p))
    }

    pub fn bracket_sparse(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.brackets[i][j]
    }

    pub fn bracket_sparse_f64(&self, i: usize, j: usize) -> &[(usize, f64)] {
        &self.brackets_f64[i][j]
    }

    pub fn killing_entry(&self, i: usize, j: usize) -> &Rat {
        &self.killing.data[i][j]
    }

    pub fn killing_entry_f64(&self, i: usize, j: usize) -> f64 {
        self.killing_f64[i][j]
    }

    /// kappa on dense complex coefficient vectors.
    pub fn killing_c64(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let row = &self.killing_f64[i];
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() && row[j] != 0.0 {
                    acc += xi * yj * row[j];
                }
            }
        }
        acc
    }

    /// Lie bracket on dense complex coefficient vectors.
    pub fn bracket_c64(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in &self.brackets_f64[i][j] {
                    out[*k] += xi * yj * *c;
                }
            }
        }
        out
    }

    /// alpha(h_k) for the positive root p and Cartan basis index k.
    pub fn root_value_on_h(&self, p: usize, k: usize) -> &Rat {
        &self.root_on_cartan[p][k]
    }

    /// `<alpha, lambda>` for lambda given in the dual-basis coordinates
    /// (lambda = sum lambda_i h-dual_i): equals sum_i coords_i lambda_i.
    pub fn pairing_coords(&self, p: usize, lambda: &[Complex64]) -> Result<Complex64> {
        if lambda.len() != self.rank {
            return Err(CoreError::DimensionMismatch { expected: self.rank, got: lambda.len() });
        }
        let mut acc = Complex64::zero();
        for (i, &c) in self.root(p).coords.iter().enumerate() {
            if c != 0 {
                acc += lambda[i] * c as f64;
            }
        }
        Ok(acc)
    }

    /// `alpha(v)` for an element of the Cartan subalgebra, exact.
    /// `v` may be the full coefficient vector or just its Cartan head.
    pub fn pairing_element(&self, p: usize, v: &[Rat]) -> Result<Rat> {
        if v.len() != self.rank && v.len() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        if v.len() == self.dim {
            for (i, x) in v.iter().enumerate().skip(self.rank) {
                if !x.is_zero() {
                    return Err(CoreError::InvalidInput(format!(
                        "element has a component outside the Cartan subalgebra at index {i}"
                    )));
                }
            }
        }
        let mut acc = Rat::zero();
        for k in 0..self.rank {
            if !v[k].is_zero() {
                acc = acc + &self.root_on_cartan[p][k] * &v[k];
            }
        }
        Ok(acc)
    }

    /// Same-algebra check used by multivector operations.
    pub fn same_as(&self, other: &SimpleLieAlgebra) -> bool {
        self.cartan_type == other.cartan_type
    }
}

impl NormalizedBasis {
    /// Coordinates of h-dual_i in the h basis.
    pub fn dual_coords(&self, i: usize) -> Vec<Rat> {
        (0..self.dual.rows).map(|k| self.dual.data[k][i].clone()).collect()
    }

    /// h_alpha for the positive root: its h-basis coordinates are the
    /// integer simple-root coordinates of alpha.
    pub fn h_alpha_coords(&self, root: &Root) -> Vec<Rat> {
        root.coords.iter().map(|&c| Rat::from_integer(c.into())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    /// Independent oracle: generate the full root system from a Cartan
    /// matrix by closing under simple reflections, and count positives.
    fn reflection_orbit_positive_count(cartan: &[&[i64]]) -> usize {
        let n = cartan.len();
        let mut roots: std::collections::BTreeSet<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        loop {
            let mut new_roots = Vec::new();
            for r in &roots {
                for i in 0..n {
                    // s_i(r) = r - <r, alpha_i^vee> alpha_i with pairing from the Cartan matrix
                    let pairing: i64 = (0..n).map(|j| cartan[i][j] * r[j]).sum();
                    let mut s = r.clone();
                    s[i] -= pairing;
                    if !roots.contains(&s) {
                        new_roots.push(s);
                    }
                }
            }
            if new_roots.is_empty() {
                break;
            }
            roots.extend(new_roots);
        }
        roots.iter().filter(|r| r.iter().sum::<i64>() > 0).count()
    }

    #[test]
    fn a1_dimension_forced() {
        let alg = build_algebra(CartanType::parse("A1").unwrap()).unwrap();
        assert_eq!(alg.dim, 3);
        assert_eq!(alg.num_pos(), 1);
    }

    #[test]
    fn root_counts_match_reflection_oracle() {
        // Cartan matrices, rows indexed by the reflecting simple root.
        let a2: &[&[i64]] = &[&[2, -1], &[-1, 2]];
        let g2: &[&[i64]] = &[&[2, -1], &[-3, 2]];
        let b2: &[&[i64]] = &[&[2, -2], &[-1, 2]];
        let a3: &[&[i64]] = &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]];
        assert_eq!(reflection_orbit_positive_count(a2), 3);
        assert_eq!(reflection_orbit_positive_count(g2), 6);
        assert_eq!(reflection_orbit_positive_count(b2), 4);
        assert_eq!(reflection_orbit_positive_count(a3), 6);

        let alg = build_algebra(CartanType::parse("A2").unwrap()).unwrap();
        assert_eq!(alg.dim, 8);
        assert_eq!(alg.num_pos(), 3);
        let alg = build_algebra(CartanType::parse("G2").unwrap()).unwrap();
        assert_eq!(alg.dim, 14);
        assert_eq!(alg.num_pos(), 6);
        let alg = build_algebra(CartanType::parse("B2").unwrap()).unwrap();
        assert_eq!(alg.num_pos(), 4);
        let alg = build_algebra(CartanType::parse("A3").unwrap()).unwrap();
        assert_eq!(alg.num_pos(), 6);
    }

    #[test]
    fn unsupported_types_rejected() {
        assert!(matches!(CartanType::parse("E6"), Err(CoreError::UnsupportedType(_))));
        assert!(matches!(CartanType::parse("A5"), Err(CoreError::UnsupportedType(_))));
        assert!(matches!(CartanType::parse("D3"), Err(CoreError::UnsupportedType(_))));
        assert!(matches!(CartanType::parse(""), Err(CoreError::UnsupportedType(_))));
    }

    #[test]
    fn sl2_killing_matches_ad_oracle() {
        // Oracle: Chevalley sl2 brackets [h,e]=2e, [h,f]=-2f, [e,f]=h.
        // ad matrices in basis (e, h, f), multiplied and traced by hand.
        let ad_e = [[0.0, -2.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
        let ad_f = [[0.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 2.0, 0.0]];
        let ad_h = [[2.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -2.0]];
        let trace_prod = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| -> f64 {
            let mut t = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    t += a[i][j] * b[j][i];
                }
            }
            t
        };
        assert_eq!(trace_prod(&ad_e, &ad_f), 4.0);
        assert_eq!(trace_prod(&ad_h, &ad_h), 8.0);

        let alg = build_algebra(CartanType::parse("A1").unwrap()).unwrap();
        let e = alg.e_index(0);
        let f = alg.f_index(0);
        assert_eq!(alg.killing_entry(e, f), &rat_int(4));
        // basis h_1 = h/4, so kappa(h_1, h_1) = 8/16 = 1/2
        assert_eq!(alg.killing_entry(0, 0), &rat(1, 2));
        // root grading forces kappa(e, e) = 0
        assert!(alg.killing_entry(e, e).is_zero());
    }

    #[test]
    fn killing_ad_invariance_and_nondegeneracy() {
        for name in ["A2", "B2"] {
            let alg = build_algebra(CartanType::parse(name).unwrap()).unwrap();
            let d = alg.dim;
            // kappa([x,y],z) + kappa(y,[x,z]) = 0 exactly on all basis triples
            for x in 0..d {
                for y in 0..d {
                    for z in 0..d {
                        let mut acc = Rat::zero();
                        for (k, c) in alg.bracket_sparse(x, y) {
                            acc = acc + c * alg.killing_entry(*k, z);
                        }
                        for (k, c) in alg.bracket_sparse(x, z) {
                            acc = acc + c * alg.killing_entry(y, *k);
                        }
                        assert!(acc.is_zero(), "ad-invariance failed at ({x},{y},{z})");
                    }
                }
            }
            assert!(!killing_form(&alg).det().is_zero());
        }
    }

    #[test]
    fn jacobi_identity_exact_on_a2() {
        let alg = build_algebra(CartanType::parse("A2").unwrap()).unwrap();
        let d = alg.dim;
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let mut acc = vec![Rat::zero(); d];
                    let mut add_double = |i: usize, j: usize, scale: &Rat| {
                        for (k, c) in alg.bracket_sparse(i, j) {
                            acc_add(&mut acc, *k, &(scale * c));
                        }
                    };
                    fn acc_add(acc: &mut [Rat], k: usize, v: &Rat) {
                        acc[k] = &acc[k] + v;
                    }
                    for (k, c) in alg.bracket_sparse(x, y) {
                        add_double(*k, z, c);
                    }
                    for (k, c) in alg.bracket_sparse(y, z) {
                        add_double(*k, x, c);
                    }
                    for (k, c) in alg.bracket_sparse(z, x) {
                        add_double(*k, y, c);
                    }
                    assert!(acc.iter().all(|v| v.is_zero()), "Jacobi failed at ({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn normalization_on_sl2() {
        let alg = build_algebra(CartanType::parse("A1").unwrap()).unwrap();
        let nb = normalized_basis(&alg);
        // E_{-a} = f / kappa(e,f) = f/4; h_a = h/4 which is basis vector 0.
        assert_eq!(nb.kappa_ef[0], rat_int(4));
        assert_eq!(nb.h_alpha_coords(alg.root(0)), vec![rat_int(1)]);
        // h-dual_1 = 2 h_1 = h/2
        assert_eq!(nb.dual_coords(0), vec![rat_int(2)]);
        // <alpha, h-dual_1> = 1
        assert_eq!(alg.pairing_element(0, &[rat_int(2)]).unwrap(), rat_int(1));
    }

    #[test]
    fn h_alpha_reproduces_the_root_functional() {
        for name in ["A2", "C2", "G2"] {
            let alg = build_algebra(CartanType::parse(name).unwrap()).unwrap();
            let n = alg.rank;
            for p in 0..alg.num_pos() {
                // h_alpha = [E_a, E_{-a}] = [e, f]/kappa(e, f)
                let e = alg.e_index(p);
                let f = alg.f_index(p);
                let kef = &normalized_basis(&alg).kappa_ef[p];
                let mut h = vec![Rat::zero(); alg.dim];
                for (k, c) in alg.bracket_sparse(e, f) {
                    h[*k] = c / kef;
                }
                // equals the integer coordinates of alpha on the h basis
                for (j, &cj) in alg.root(p).coords.iter().enumerate() {
                    assert_eq!(h[j], rat_int(cj));
                }
                for x in h.iter().skip(n) {
                    assert!(x.is_zero());
                }
                // kappa(h_alpha, h_k) = alpha(h_k) for every Cartan basis vector
                for k in 0..n {
                    let mut acc = Rat::zero();
                    for (j, hj) in h.iter().enumerate().take(n) {
                        acc = acc + hj * alg.killing_entry(j, k);
                    }
                    assert_eq!(&acc, alg.root_value_on_h(p, k));
                }
            }
        }
    }

    #[test]
    fn ad_h_acts_by_the_root_value() {
        for name in ["A3", "B3", "G2"] {
            let alg = build_algebra(CartanType::parse(name).unwrap()).unwrap();
            for p in 0..alg.num_pos() {
                for k in 0..alg.rank {
                    let val = alg.root_value_on_h(p, k).clone();
                    for (sign, idx) in [(1i8, alg.e_index(p)), (-1, alg.f_index(p))] {
                        let br = alg.bracket_sparse(k, idx);
                        if val.is_zero() {
                            assert!(br.is_empty());
                        } else {
                            assert_eq!(br.len(), 1);
                            assert_eq!(br[0].0, idx);
                            let expect = if sign > 0 { val.clone() } else { -val.clone() };
                            assert_eq!(br[0].1, expect);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn root_grading_of_brackets_on_sl3() {
        let alg = build_algebra(CartanType::parse("A2").unwrap()).unwrap();
        // [g_a, g_b] lies in g_{a+b}
        for p in 0..alg.num_pos() {
            for q in 0..alg.num_pos() {
                for (sp, ip) in [(1i64, alg.e_index(p)), (-1, alg.f_index(p))] {
                    for (sq, iq) in [(1i64, alg.e_index(q)), (-1, alg.f_index(q))] {
                        let sum: Vec<i64> = alg
                            .root(p)
                            .coords
                            .iter()
                            .zip(&alg.root(q).coords)
                            .map(|(a, b)| sp * a + sq * b)
                            .collect();
                        for (k, _) in alg.bracket_sparse(ip, iq) {
                            let target: Vec<i64> = match alg.basis_roles[*k] {
                                BasisRole::Cartan(_) => vec![0; alg.rank],
                                BasisRole::RootVector(r, s) => {
                                    alg.root(r).coords.iter().map(|&c| c * i64::from(s)).collect()
                                }
                            };
                            if matches!(alg.basis_roles[*k], BasisRole::Cartan(_)) {
                                assert!(sum.iter().all(|&c| c == 0));
                            } else {
                                assert_eq!(sum, target);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_is_linear_and_dual_is_dual() {
        let alg = build_algebra(CartanType::parse("B2").unwrap()).unwrap();
        let nb = normalized_basis(&alg);
        let n = alg.rank;
        // kappa(h_i, h-dual_j) = delta_ij
        for i in 0..n {
            for j in 0..n {
                let dual_j = nb.dual_coords(j);
                let mut acc = Rat::zero();
                for (k, c) in dual_j.iter().enumerate() {
                    acc = acc + c * alg.killing_entry(i, k);
                }
                assert_eq!(acc, if i == j { rat_int(1) } else { Rat::zero() });
            }
        }
        // linearity of the pairing in lambda
        let a = Complex64::new(2.0, 1.0);
        let b = Complex64::new(-0.5, 0.25);
        let l1 = vec![Complex64::new(0.3, 0.1), Complex64::new(1.2, 0.0)];
        let l2 = vec![Complex64::new(-0.7, 0.4), Complex64::new(0.5, -0.2)];
        for p in 0..alg.num_pos() {
            let mixed: Vec<Complex64> = l1.iter().zip(&l2).map(|(x, y)| a * x + b * y).collect();
            let lhs = alg.pairing_coords(p, &mixed).unwrap();
            let rhs = a * alg.pairing_coords(p, &l1).unwrap() + b * alg.pairing_coords(p, &l2).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
        // dimension mismatch is rejected
        assert!(matches!(
            alg.pairing_coords(0, &[Complex64::zero()]),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }
}
