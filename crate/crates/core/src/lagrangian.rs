//! The double d = g (+) g: invariant bilinear form, the subalgebras
//! l(S, lambda0), Lagrangian verification, diagonal intersection,
//! characteristic pairs, the rootwise Cayley transform, the fibers
//! W(lambda) of a dynamical r-matrix, and the unique-extension corollary.

use crate::cxla::{self, CMat, CVec};
use crate::dynr::{
    closed_roots, lambda0_representative, tau_coefficients, Classification, RMatrixFamily,
};
use crate::error::{CoreError, Result};
use crate::rootsys::{CartanType, SimpleLieAlgebra};
use num::complex::Complex64;
use num::Zero;

/// An element (X, Y) of g (+) g with complex coefficient vectors.
#[derive(Debug, Clone)]
pub struct DoubleElement {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

impl DoubleElement {
    pub fn new(alg: &SimpleLieAlgebra, x: Vec<Complex64>, y: Vec<Complex64>) -> Result<Self> {
        if x.len() != alg.dim || y.len() != alg.dim {
            return Err(CoreError::DimensionMismatch { expected: alg.dim, got: x.len().max(y.len()) });
        }
        Ok(DoubleElement { x, y })
    }

    /// Componentwise bracket [(X1,Y1),(X2,Y2)] = ([X1,X2],[Y1,Y2]).
    pub fn bracket(&self, alg: &SimpleLieAlgebra, other: &DoubleElement) -> DoubleElement {
        DoubleElement {
            x: alg.bracket_c64(&self.x, &other.x),
            y: alg.bracket_c64(&self.y, &other.y),
        }
    }

    fn to_cvec(&self) -> CVec {
        let mut v = Vec::with_capacity(2 * self.x.len());
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.y);
        CVec::from_vec(v)
    }

    fn from_cvec(dim: usize, v: &CVec) -> DoubleElement {
        DoubleElement {
            x: (0..dim).map(|i| v[i]).collect(),
            y: (0..dim).map(|i| v[dim + i]).collect(),
        }
    }
}

/// The invariant form on the double: `1/2 (kappa(Y1,Y2) - kappa(X1,X2))`.
pub fn d_form(alg: &SimpleLieAlgebra, a: &DoubleElement, b: &DoubleElement) -> Complex64 {
    0.5 * (alg.killing_c64(&a.y, &b.y) - alg.killing_c64(&a.x, &b.x))
}

/// A subspace of the double, stored as a (2 dim g) x k basis matrix.
#[derive(Debug, Clone)]
pub struct DSubspace {
    pub cartan_type: CartanType,
    pub basis: CMat,
}

impl DSubspace {
    pub fn from_elements(alg: &SimpleLieAlgebra, elements: &[DoubleElement]) -> Result<Self> {
        let cols: Vec<Vec<Complex64>> = elements
            .iter()
            .map(|e| {
                let mut v = e.x.clone();
                v.extend_from_slice(&e.y);
                v
            })
            .collect();
        let basis = cxla::from_columns(2 * alg.dim, &cols);
        if cxla::rank(&basis, 1e-10) < basis.ncols() {
            return Err(CoreError::InvalidInput("subspace basis is not linearly independent".into()));
        }
        Ok(DSubspace { cartan_type: alg.cartan_type, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn element(&self, alg: &SimpleLieAlgebra, j: usize) -> DoubleElement {
        let col = self.basis.column(j).into_owned();
        DoubleElement::from_cvec(alg.dim, &col)
    }

    /// Largest principal angle to another subspace.
    pub fn angle_to(&self, other: &DSubspace) -> f64 {
        cxla::principal_angle_max(&self.basis, &other.basis)
    }
}

fn unit(dim: usize, i: usize, scale: Complex64) -> Vec<Complex64> {
    let mut v = vec![Complex64::zero(); dim];
    v[i] = scale;
    v
}

/// The Lagrangian subalgebra l(S, mu): span of the diagonal Cartan,
/// `(E_{+-a}, e^{+-2<a,mu>} E_{+-a})` over `[S]`, and `(E_{-a}, 0)`,
/// `(0, E_{+a})` over the complement.
pub fn build_l(alg: &SimpleLieAlgebra, s: &[usize], mu: &[Complex64]) -> Result<DSubspace> {
    if mu.len() != alg.rank {
        return Err(CoreError::DimensionMismatch { expected: alg.rank, got: mu.len() });
    }
    let closure = closed_roots(alg, s)?;
    let d = alg.dim;
    let one = Complex64::new(1.0, 0.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for k in 0..alg.rank {
        let mut v = unit(2 * d, k, one);
        v[d + k] = one;
        cols.push(v);
    }
    let member: std::collections::BTreeSet<usize> = closure.members.iter().copied().collect();
    for p in 0..alg.num_pos() {
        if member.contains(&p) {
            let w = alg.pairing_coords(p, mu)?;
            let phi = (2.0 * w).exp();
            let mut v = unit(2 * d, alg.e_index(p), one);
            v[d + alg.e_index(p)] = phi;
            cols.push(v);
            let mut v = unit(2 * d, alg.f_index(p), one);
            v[d + alg.f_index(p)] = one / phi;
            cols.push(v);
        } else {
            cols.push(unit(2 * d, alg.f_index(p), one));
            cols.push(unit(2 * d, d + alg.e_index(p), one));
        }
    }
    Ok(DSubspace { cartan_type: alg.cartan_type, basis: cxla::from_columns(2 * d, &cols) })
}

/// Report of the Lagrangian-subalgebra test.
#[derive(Debug, Clone)]
pub struct LagrangianReport {
    pub dim_ok: bool,
    pub isotropy_residual: f64,
    pub closure_residual: f64,
}

impl LagrangianReport {
    pub fn pass(&self, isotropy_tol: f64, closure_tol: f64) -> bool {
        self.dim_ok && self.isotropy_residual <= isotropy_tol && self.closure_residual <= closure_tol
    }
}

/// Check dimension, isotropy of the invariant form, and closure under the
/// componentwise bracket (least-squares distance from the span).
pub fn is_lagrangian_subalgebra(alg: &SimpleLieAlgebra, w: &DSubspace) -> LagrangianReport {
    let k = w.dim();
    let dim_ok = k == alg.dim;
    // normalized basis columns
    let normalized: Vec<DoubleElement> = (0..k)
        .map(|j| {
            let col = w.basis.column(j).into_owned();
            let n = col.norm();
            let col = col / Complex64::new(n.max(1e-300), 0.0);
            DoubleElement::from_cvec(alg.dim, &col)
        })
        .collect();
    let mut isotropy: f64 = 0.0;
    for i in 0..k {
        for j in i..k {
            isotropy = isotropy.max(d_form(alg, &normalized[i], &normalized[j]).norm());
        }
    }
    let q = cxla::orthonormal_span(&w.basis, 1e-12);
    let mut closure: f64 = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let br = normalized[i].bracket(alg, &normalized[j]);
            let v = br.to_cvec();
            let res = cxla::residual_against(&q, &v);
            closure = closure.max(res / v.norm().max(1.0));
        }
    }
    LagrangianReport { dim_ok, isotropy_residual: isotropy, closure_residual: closure }
}

/// Basis of `W  g_diag`, by nullspace computation at the given threshold.
pub fn diagonal_intersection(alg: &SimpleLieAlgebra, w: &DSubspace, threshold: f64) -> DSubspace {
    let d = alg.dim;
    let k = w.dim();
    // [B_W | -Diag] c = 0: pairs (c, x) with B_W c = (x, x).
    let mut m = CMat::zeros(2 * d, k + d);
    m.view_mut((0, 0), (2 * d, k)).copy_from(&w.basis);
    let one = Complex64::new(1.0, 0.0);
    for i in 0..d {
        m[(i, k + i)] = -one;
        m[(d + i, k + i)] = -one;
    }
    let ns = cxla::nullspace(&m, threshold);
    let mut cols = Vec::new();
    for j in 0..ns.ncols() {
        let c = ns.column(j);
        let mut v = vec![Complex64::zero(); 2 * d];
        for (bj, coef) in c.iter().take(k).enumerate() {
            if coef.norm() > 0.0 {
                for i in 0..2 * d {
                    v[i] += w.basis[(i, bj)] * coef;
                }
            }
        }
        cols.push(v);
    }
    let basis = cxla::orthonormal_span(&cxla::from_columns(2 * d, &cols), 1e-10);
    DSubspace { cartan_type: alg.cartan_type, basis }
}

/// Characteristic pair of a Lagrangian subalgebra with diagonal
/// intersection h: D = h is implicit, J = sum J_a E_a ^ E_{-a}.
#[derive(Debug, Clone)]
pub struct CharPair {
    pub j: Vec<Complex64>,
}

/// Extract the characteristic pair: for each root covector (0, E_a) in the
/// dual fiber, solve for the unique element `(x, x) + xi` of W modulo the
/// diagonal Cartan; then `J_a = 2 x_{E_a}`.
pub fn extract_char_pair(alg: &SimpleLieAlgebra, w: &DSubspace) -> Result<CharPair> {
    let d = alg.dim;
    let k = w.dim();
    let mut m = CMat::zeros(2 * d, k + d);
    m.view_mut((0, 0), (2 * d, k)).copy_from(&w.basis);
    let one = Complex64::new(1.0, 0.0);
    for i in 0..d {
        m[(i, k + i)] = -one;
        m[(d + i, k + i)] = -one;
    }
    let mut j_coeffs = Vec::with_capacity(alg.num_pos());
    for p in 0..alg.num_pos() {
        // xi = (0, E_a)
        let mut rhs = vec![Complex64::zero(); 2 * d];
        rhs[d + alg.e_index(p)] = one;
        let rhs = CVec::from_vec(rhs);
        let (sol, res) = cxla::lstsq(&m, &rhs, 1e-12);
        if res > 1e-8 {
            return Err(CoreError::NotTransverse(format!(
                "no graph element over the covector at root {} (residual {res:.3e})",
                alg.root_label(p, 1)
            )));
        }
        j_coeffs.push(2.0 * sol[k + alg.e_index(p)]);
    }
    Ok(CharPair { j: j_coeffs })
}

/// Rootwise Cayley transform `phi = (c + 1) / (c - 1)`.
pub fn cayley_of(c: Complex64, root_label: &str) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let dist = (c - one).norm();
    if dist < 1e-12 {
        return Err(CoreError::CayleyPole { root: root_label.to_string(), dist });
    }
    Ok((c + one) / (c - one))
}

/// Compare the Cayley eigenvalues of r#(lambda) on n-circ with
/// `e^{+-2<a, lambda+lambda0>}`; returns the max relative deviation.
///
/// The transform is evaluated through tau = c - 1 ((c+1)/(c-1) =
/// (tau+2)/tau), which keeps it conditioned where coth approaches 1.
pub fn cayley_eigencheck(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<f64> {
    let closure = fam.closure(alg);
    let tau = tau_coefficients(alg, fam, lambda)?;
    let two = Complex64::new(2.0, 0.0);
    let mut worst: f64 = 0.0;
    for &p in &closure.members {
        let w = fam.argument(alg, p, lambda)?;
        let t = tau[p];
        if t.norm() < 1e-300 {
            return Err(CoreError::CayleyPole { root: alg.root_label(p, 1), dist: t.norm() });
        }
        // +a line: r# eigenvalue c = 1 + tau, Cayley must be e^{2w}
        let phi_plus = (t + two) / t;
        worst = worst.max((phi_plus - (2.0 * w).exp()).norm() / (2.0 * w).exp().norm().max(1.0));
        // -a line: r# eigenvalue -c, Cayley must be e^{-2w}
        let phi_minus = t / (t + two);
        worst = worst.max((phi_minus - (-2.0 * w).exp()).norm() / (-2.0 * w).exp().norm().max(1.0));
    }
    Ok(worst)
}

/// Multiplicativity `phi_a phi_b = phi_{a+b}` on composable pairs in `[S]`,
/// with the tau-conditioned Cayley evaluation.
pub fn cayley_multiplicativity(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<f64> {
    let closure = fam.closure(alg);
    let tau = tau_coefficients(alg, fam, lambda)?;
    let two = Complex64::new(2.0, 0.0);
    let phi: std::collections::BTreeMap<usize, Complex64> = closure
        .members
        .iter()
        .map(|&p| {
            let t = tau[p];
            if t.norm() < 1e-300 {
                return Err(CoreError::CayleyPole { root: alg.root_label(p, 1), dist: t.norm() });
            }
            Ok((p, (t + two) / t))
        })
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for &p in &closure.members {
        for &q in &closure.members {
            let sum: Vec<i64> = alg.root(p).coords.iter().zip(&alg.root(q).coords).map(|(a, b)| a + b).collect();
            if let Some(rp) = alg.root_data.positive_roots.iter().position(|r| r.coords == sum) {
                if let Some(phi_sum) = phi.get(&rp) {
                    let dev = (phi[&p] * phi[&q] - phi_sum).norm() / phi_sum.norm().max(1.0);
                    worst = worst.max(dev);
                }
            }
        }
    }
    Ok(worst)
}

/// The fiber Lagrangian subalgebra W(lambda) of the characteristic pair
/// (h, tau(lambda)): spanned by the diagonal Cartan and, per positive root,
/// `(tau_a E_a, (tau_a + 2) E_a)` and `((tau_a + 2) E_{-a}, tau_a E_{-a})`.
pub fn w_of_lambda(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<DSubspace> {
    let tau = tau_coefficients(alg, fam, lambda)?;
    let d = alg.dim;
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for k in 0..alg.rank {
        let mut v = unit(2 * d, k, one);
        v[d + k] = one;
        cols.push(v);
    }
    for (p, t) in tau.iter().enumerate() {
        let mut v = vec![Complex64::zero(); 2 * d];
        v[alg.e_index(p)] = *t;
        v[d + alg.e_index(p)] = t + two;
        cols.push(v);
        let mut v = vec![Complex64::zero(); 2 * d];
        v[alg.f_index(p)] = t + two;
        v[d + alg.f_index(p)] = *t;
        cols.push(v);
    }
    Ok(DSubspace { cartan_type: alg.cartan_type, basis: cxla::from_columns(2 * d, &cols) })
}

/// Classify a Lagrangian subspace with diagonal intersection h back to an
/// (S, lambda0) pair, via its characteristic pair and the Cayley relation.
pub fn classify_subspace(alg: &SimpleLieAlgebra, w: &DSubspace, tol: f64) -> Result<Classification> {
    let report = is_lagrangian_subalgebra(alg, w);
    if !report.pass(1e-9, 1e-8) {
        return Err(CoreError::NotClassifiable(format!(
            "input is not a Lagrangian subalgebra (dim_ok {}, isotropy {:.3e}, closure {:.3e})",
            report.dim_ok, report.isotropy_residual, report.closure_residual
        )));
    }
    let inter = diagonal_intersection(alg, w, 1e-8);
    if inter.dim() != alg.rank {
        return Err(CoreError::NotTransverse(format!(
            "diagonal intersection has dimension {}, expected {}",
            inter.dim(),
            alg.rank
        )));
    }
    let pair = extract_char_pair(alg, w)?;
    let zero_tol = 1e-8;
    let active: Vec<bool> = pair.j.iter().map(|j| j.norm() > zero_tol).collect();
    let mut s: Vec<usize> = (0..alg.num_pos())
        .filter(|&p| active[p] && alg.root(p).height() == 1)
        .map(|p| alg.root(p).coords.iter().position(|&c| c == 1).expect("simple"))
        .collect();
    s.sort_unstable();
    let closure = closed_roots(alg, &s)?;
    let closure_set: std::collections::BTreeSet<usize> = closure.members.iter().copied().collect();
    for (p, &a) in active.iter().enumerate() {
        if a != closure_set.contains(&p) {
            return Err(CoreError::NotClassifiable(format!(
                "nonzero characteristic coefficients are not the closure of a simple subset (root {})",
                alg.root_label(p, 1)
            )));
        }
    }
    // phi_a = (J_a + 2)/J_a, and the multiplicativity relations.
    let mut eigenvalues: Vec<(usize, Complex64)> = Vec::new();
    let two = Complex64::new(2.0, 0.0);
    for &p in &closure.members {
        let j = pair.j[p];
        eigenvalues.push((p, (j + two) / j));
    }
    let cay_of = |p: usize| eigenvalues.iter().find(|(q, _)| *q == p).map(|(_, c)| *c);
    let mut residual: f64 = 0.0;
    for &p in &closure.members {
        for &q in &closure.members {
            let sum: Vec<i64> = alg.root(p).coords.iter().zip(&alg.root(q).coords).map(|(a, b)| a + b).collect();
            if let Some(rp) = alg.root_data.positive_roots.iter().position(|r| r.coords == sum) {
                if let (Some(ca), Some(cb), Some(cab)) = (cay_of(p), cay_of(q), cay_of(rp)) {
                    let dev = (ca * cb - cab).norm() / cab.norm().max(1.0);
                    residual = residual.max(dev);
                    if dev > tol {
                        return Err(CoreError::NotClassifiable(format!(
                            "Cayley multiplicativity fails at {} + {} ({dev:.3e})",
                            alg.root_label(p, 1),
                            alg.root_label(q, 1)
                        )));
                    }
                }
            }
        }
    }
    let lambda0_rep = lambda0_representative(alg, &s, &eigenvalues)?;
    let n = alg.rank;
    Ok(Classification {
        s,
        eigenvalues,
        lambda0_rep,
        omega: vec![vec![Complex64::zero(); n]; n],
        residual,
    })
}

/// Extension of a Lagrangian subalgebra to the unique dynamical family
/// through it: classify W0 = l(S, l0) and return (S, l0 - mu, omega = 0),
/// verified so that the fiber at mu reproduces W0.
pub fn extend_from_point(
    alg: &SimpleLieAlgebra,
    w0: &DSubspace,
    mu: &[Complex64],
) -> Result<(RMatrixFamily, f64)> {
    if mu.len() != alg.rank {
        return Err(CoreError::DimensionMismatch { expected: alg.rank, got: mu.len() });
    }
    let cls = classify_subspace(alg, w0, 1e-8)?;
    let lambda0: Vec<Complex64> = cls.lambda0_rep.iter().zip(mu).map(|(l, m)| l - m).collect();
    let fam = RMatrixFamily::new(alg, &cls.s, lambda0, None)?;
    let fiber = w_of_lambda(alg, &fam, mu)?;
    let angle = fiber.angle_to(w0);
    Ok((fam, angle))
}
