//! The Courant algebroid E = (TU (+) T*U) x (g (+) g): inner product,
//! bracket on jet sections via the constant/function-scaled rule system,
//! the Dirac fibers L(lambda), closure verification, the Maurer-Cartan
//! residual for theta + tau, and the three-condition characteristic-pair
//! check for (U x h, tau).
//!
//! TU and T*U fibers are labeled by h throughout: the coordinate vector
//! field d/d lambda_i is the dual basis element hdual_i, and the 1-form
//! d lambda_i is h_i.

use crate::cxla::{self, CMat, CVec};
use crate::dynr::{cdybe_residual, zero_weight_residual, RMatrixFamily};
use crate::error::{CoreError, Result};
use crate::multivec::{r0, schouten, sharp_apply, MultiVector};
use crate::rootsys::{normalized_basis, SimpleLieAlgebra};
use crate::scalar::{rat_to_c64, rat_to_f64};
use num::complex::Complex64;
use num::Zero;

/// Coefficient functions on U, closed under first partial derivatives:
/// constants, coordinates, `exp(w . l + c)`, `coth(w . l + c)`, sums and
/// products; or a numeric 1-jet anchored at one point.
#[derive(Debug, Clone)]
pub enum Func {
    Const(Complex64),
    /// The coordinate lambda_i.
    Coord(usize),
    /// exp(w . lambda + c)
    Exp { w: Vec<Complex64>, c: Complex64 },
    /// coth(w . lambda + c)
    Coth { w: Vec<Complex64>, c: Complex64 },
    Sum(Vec<Func>),
    Prod(Vec<Func>),
    /// Numeric 1-jet at a fixed point.
    Jet { at: Vec<Complex64>, value: Complex64, partials: Vec<Complex64> },
}

impl Func {
    pub fn one() -> Func {
        Func::Const(Complex64::new(1.0, 0.0))
    }

    pub fn eval(&self, lambda: &[Complex64]) -> Result<Complex64> {
        match self {
            Func::Const(c) => Ok(*c),
            Func::Coord(i) => lambda
                .get(*i)
                .copied()
                .ok_or(CoreError::DimensionMismatch { expected: *i + 1, got: lambda.len() }),
            Func::Exp { w, c } => Ok((dot(w, lambda) + c).exp()),
            Func::Coth { w, c } => {
                let z = dot(w, lambda) + c;
                crate::dynr::coth_checked(z, crate::dynr::POLE_TOL, "section coefficient")
            }
            Func::Sum(fs) => {
                let mut acc = Complex64::zero();
                for f in fs {
                    acc += f.eval(lambda)?;
                }
                Ok(acc)
            }
            Func::Prod(fs) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for f in fs {
                    acc *= f.eval(lambda)?;
                }
                Ok(acc)
            }
            Func::Jet { at, value, .. } => {
                if at.len() != lambda.len()
                    || at.iter().zip(lambda).any(|(a, l)| (a - l).norm() > 1e-14)
                {
                    return Err(CoreError::JetMissing(
                        "numeric jet evaluated away from its anchor point".into(),
                    ));
                }
                Ok(*value)
            }
        }
    }

    /// Closed-form first partial; stays inside the algebra.
    pub fn partial(&self, i: usize) -> Func {
        match self {
            Func::Const(_) => Func::Const(Complex64::zero()),
            Func::Coord(j) => Func::Const(if *j == i { Complex64::new(1.0, 0.0) } else { Complex64::zero() }),
            Func::Exp { w, c } => {
                let wi = w.get(i).copied().unwrap_or_else(Complex64::zero);
                Func::Prod(vec![Func::Const(wi), Func::Exp { w: w.clone(), c: *c }])
            }
            Func::Coth { w, c } => {
                // d coth(z)/dz = 1 - coth^2(z)
                let wi = w.get(i).copied().unwrap_or_else(Complex64::zero);
                let cth = Func::Coth { w: w.clone(), c: *c };
                Func::Prod(vec![
                    Func::Const(wi),
                    Func::Sum(vec![
                        Func::one(),
                        Func::Prod(vec![Func::Const(Complex64::new(-1.0, 0.0)), cth.clone(), cth]),
                    ]),
                ])
            }
            Func::Sum(fs) => Func::Sum(fs.iter().map(|f| f.partial(i)).collect()),
            Func::Prod(fs) => {
                let mut terms = Vec::new();
                for (k, _) in fs.iter().enumerate() {
                    let factors: Vec<Func> = fs
                        .iter()
                        .enumerate()
                        .map(|(j, f)| if j == k { f.partial(i) } else { f.clone() })
                        .collect();
                    terms.push(Func::Prod(factors));
                }
                Func::Sum(terms)
            }
            Func::Jet { at, partials, .. } => Func::Jet {
                at: at.clone(),
                value: partials.get(i).copied().unwrap_or_else(Complex64::zero),
                // second derivatives of a 1-jet are unavailable; eval of a
                // further partial is a jet-missing error by construction
                partials: vec![Complex64::new(f64::NAN, 0.0); partials.len()],
            },
        }
    }
}

fn dot(w: &[Complex64], l: &[Complex64]) -> Complex64 {
    w.iter().zip(l).map(|(a, b)| a * b).sum()
}

/// A fiber value (xi, eta; X, Y): xi, eta in h (coordinates over the h_i
/// basis), X, Y in g (coordinates over the algebra basis).
#[derive(Debug, Clone)]
pub struct EFiberElement {
    pub xi: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

impl EFiberElement {
    pub fn zero(alg: &SimpleLieAlgebra) -> Self {
        EFiberElement {
            xi: vec![Complex64::zero(); alg.rank],
            eta: vec![Complex64::zero(); alg.rank],
            x: vec![Complex64::zero(); alg.dim],
            y: vec![Complex64::zero(); alg.dim],
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.xi
            .iter()
            .chain(&self.eta)
            .chain(&self.x)
            .chain(&self.y)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Flatten to the fiber coordinate layout [xi, eta, x, y].
    pub fn to_cvec(&self) -> CVec {
        let mut v = Vec::with_capacity(2 * self.xi.len() + 2 * self.x.len());
        v.extend_from_slice(&self.xi);
        v.extend_from_slice(&self.eta);
        v.extend_from_slice(&self.x);
        v.extend_from_slice(&self.y);
        CVec::from_vec(v)
    }

    pub fn sub(&self, other: &EFiberElement) -> EFiberElement {
        EFiberElement {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a - b).collect(),
            eta: self.eta.iter().zip(&other.eta).map(|(a, b)| a - b).collect(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Killing form restricted to h, on h-basis coordinates.
fn kappa_h(alg: &SimpleLieAlgebra, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += ai * bj * alg.killing_entry_f64(i, j);
            }
        }
    }
    acc
}

/// The pseudo-metric on E:
/// `1/2 (kappa(xi1,eta2) + kappa(eta1,xi2)) + 1/4 (kappa(Y1,Y2) - kappa(X1,X2))`.
pub fn e_inner(alg: &SimpleLieAlgebra, a: &EFiberElement, b: &EFiberElement) -> Complex64 {
    0.5 * (kappa_h(alg, &a.xi, &b.eta) + kappa_h(alg, &a.eta, &b.xi))
        + 0.25 * (alg.killing_c64(&a.y, &b.y) - alg.killing_c64(&a.x, &b.x))
}

/// A section of E in the closed rule class: constant TU (+) T*U part plus a
/// finite sum of coefficient-function x constant (g (+) g)-fiber terms.
#[derive(Debug, Clone)]
pub struct ESection {
    pub xi: Vec<Complex64>,
    pub eta: Vec<Complex64>,
    pub terms: Vec<(Func, Vec<Complex64>, Vec<Complex64>)>,
}

impl ESection {
    pub fn zero(alg: &SimpleLieAlgebra) -> Self {
        ESection { xi: vec![Complex64::zero(); alg.rank], eta: vec![Complex64::zero(); alg.rank], terms: Vec::new() }
    }

    /// A constant section with the given fiber value.
    pub fn constant(alg: &SimpleLieAlgebra, v: &EFiberElement) -> Self {
        let mut s = Self::zero(alg);
        s.xi = v.xi.clone();
        s.eta = v.eta.clone();
        if v.x.iter().any(|z| !z.is_zero()) || v.y.iter().any(|z| !z.is_zero()) {
            s.terms.push((Func::one(), v.x.clone(), v.y.clone()));
        }
        s
    }

    /// A function-scaled constant (0,0;X,Y) term.
    pub fn scaled(alg: &SimpleLieAlgebra, f: Func, x: Vec<Complex64>, y: Vec<Complex64>) -> Self {
        let mut s = Self::zero(alg);
        s.terms.push((f, x, y));
        s
    }

    pub fn value_at(&self, alg: &SimpleLieAlgebra, lambda: &[Complex64]) -> Result<EFiberElement> {
        let mut v = EFiberElement::zero(alg);
        v.xi = self.xi.clone();
        v.eta = self.eta.clone();
        for (f, x, y) in &self.terms {
            let c = f.eval(lambda)?;
            for (i, xv) in x.iter().enumerate() {
                v.x[i] += c * xv;
            }
            for (i, yv) in y.iter().enumerate() {
                v.y[i] += c * yv;
            }
        }
        Ok(v)
    }
}

/// Derivation action of a constant TU part xi (h-basis coordinates) on a
/// coefficient function: `xi . f = sum_i kappa(xi, h_i) df/dl_i`, since the
/// coordinate field d/dl_i is hdual_i.
fn tangent_derivative(alg: &SimpleLieAlgebra, xi: &[Complex64], f: &Func, lambda: &[Complex64]) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for i in 0..alg.rank {
        let mut coeff = Complex64::zero();
        for (k, xk) in xi.iter().enumerate() {
            if !xk.is_zero() {
                coeff += xk * alg.killing_entry_f64(k, i);
            }
        }
        if !coeff.is_zero() {
            acc += coeff * f.partial(i).eval(lambda)?;
        }
    }
    Ok(acc)
}

/// The Courant bracket of two class sections, evaluated at `lambda`.
///
/// Rules: constant (g (+) g) parts bracket pointwise; function-scaled parts
/// add the T*U correction `(g df - f dg) (e1, e2)_E` with `d lambda_i`
/// mapped to `h_i`; a constant TU part differentiates the other section's
/// coefficients; constant TU (+) T*U parts bracket to zero.
pub fn courant_bracket_at(
    alg: &SimpleLieAlgebra,
    s1: &ESection,
    s2: &ESection,
    lambda: &[Complex64],
) -> Result<EFiberElement> {
    let mut out = EFiberElement::zero(alg);
    for (f, x1, y1) in &s1.terms {
        let fv = f.eval(lambda)?;
        let fparts: Vec<Complex64> = (0..alg.rank).map(|i| f.partial(i).eval(lambda)).collect::<Result<_>>()?;
        for (g, x2, y2) in &s2.terms {
            let gv = g.eval(lambda)?;
            // fg [e1, e2] on the (g (+) g) block
            let fg = fv * gv;
            let bx = alg.bracket_c64(x1, x2);
            let by = alg.bracket_c64(y1, y2);
            for i in 0..alg.dim {
                out.x[i] += fg * bx[i];
                out.y[i] += fg * by[i];
            }
            // (g df - f dg)(e1, e2)_E, converted to the eta slot
            let inner = 0.25 * (alg.killing_c64(y1, y2) - alg.killing_c64(x1, x2));
            if inner.norm() > 0.0 {
                for i in 0..alg.rank {
                    let gdf = gv * fparts[i];
                    let fdg = fv * g.partial(i).eval(lambda)?;
                    out.eta[i] += (gdf - fdg) * inner;
                }
            }
        }
    }
    // constant TU parts differentiate the opposite coefficients
    if s1.xi.iter().any(|z| !z.is_zero()) {
        for (g, x2, y2) in &s2.terms {
            let dg = tangent_derivative(alg, &s1.xi, g, lambda)?;
            for i in 0..alg.dim {
                out.x[i] += dg * x2[i];
                out.y[i] += dg * y2[i];
            }
        }
    }
    if s2.xi.iter().any(|z| !z.is_zero()) {
        for (f, x1, y1) in &s1.terms {
            let df = tangent_derivative(alg, &s2.xi, f, lambda)?;
            for i in 0..alg.dim {
                out.x[i] -= df * x1[i];
                out.y[i] -= df * y1[i];
            }
        }
    }
    Ok(out)
}

/// Variant of the rootwise Cayley factor used by the Dirac fibers, for
/// falsification controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiVariant {
    /// phi_a = e^{2<a, l+l0>} (the Dirac case).
    Standard,
    /// phi_a = e^{3<a, l+l0>}: breaks the derivative condition.
    ExponentThree,
    /// phi_{+a} = 2 e^{2<a, l+l0>}, phi_{-a} unchanged: C_a C_{-a} = 2.
    ConstantProductTwo,
}

fn phi_factor(variant: PhiVariant, w: Complex64, sign: i8) -> Complex64 {
    match (variant, sign) {
        (PhiVariant::Standard, 1) => (2.0 * w).exp(),
        (PhiVariant::Standard, _) => (-2.0 * w).exp(),
        (PhiVariant::ExponentThree, 1) => (3.0 * w).exp(),
        (PhiVariant::ExponentThree, _) => (-3.0 * w).exp(),
        (PhiVariant::ConstantProductTwo, 1) => 2.0 * (2.0 * w).exp(),
        (PhiVariant::ConstantProductTwo, _) => (-2.0 * w).exp(),
    }
}

/// The fiber of the maximal isotropic subbundle L at one point.
#[derive(Debug, Clone)]
pub struct DiracFiber {
    pub basis: CMat,
    q: CMat,
}

impl DiracFiber {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Least-squares membership residual of a fiber value, normalized.
    pub fn membership_residual(&self, v: &EFiberElement) -> f64 {
        let mut vec = v.to_cvec();
        let n = vec.norm();
        if n > 1.0 {
            vec /= Complex64::new(n, 0.0);
        }
        cxla::residual_against(&self.q, &vec)
    }
}

fn require_zero_gauge(fam: &RMatrixFamily) -> Result<()> {
    if fam.omega.iter().flatten().any(|z| z.norm() > 0.0) {
        return Err(CoreError::InvalidInput("Dirac fiber construction requires omega = 0".into()));
    }
    Ok(())
}

/// Build L(lambda) for the family: the d-block, `(0,0;E_{+-a}, phi E_{+-a})`
/// over `[S]`, and the two k_+- families over the complement.
pub fn build_l_fiber_variant(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    lambda: &[Complex64],
    variant: PhiVariant,
) -> Result<DiracFiber> {
    require_zero_gauge(fam)?;
    let n = alg.rank;
    let d = alg.dim;
    let rows = 2 * n + 2 * d;
    let nb = normalized_basis(alg);
    let one = Complex64::new(1.0, 0.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    // (k, 0; k, -k) over the dual Cartan basis
    for i in 0..n {
        let mut v = vec![Complex64::zero(); rows];
        for (k, c) in nb.dual_coords(i).iter().enumerate() {
            let cv = rat_to_c64(c);
            v[k] = cv;
            v[2 * n + k] = cv;
            v[2 * n + d + k] = -cv;
        }
        cols.push(v);
    }
    // (0, h; h, h)
    for i in 0..n {
        let mut v = vec![Complex64::zero(); rows];
        v[n + i] = one;
        v[2 * n + i] = one;
        v[2 * n + d + i] = one;
        cols.push(v);
    }
    let member: std::collections::BTreeSet<usize> = fam.closure(alg).members.iter().copied().collect();
    for p in 0..alg.num_pos() {
        if member.contains(&p) {
            let w = fam.argument(alg, p, lambda)?;
            for (sign, idx) in [(1i8, alg.e_index(p)), (-1, alg.f_index(p))] {
                let mut v = vec![Complex64::zero(); rows];
                v[2 * n + idx] = one;
                v[2 * n + d + idx] = phi_factor(variant, w, sign);
                cols.push(v);
            }
        } else {
            let mut v = vec![Complex64::zero(); rows];
            v[2 * n + alg.f_index(p)] = one;
            cols.push(v);
            let mut v = vec![Complex64::zero(); rows];
            v[2 * n + d + alg.e_index(p)] = one;
            cols.push(v);
        }
    }
    let basis = cxla::from_columns(rows, &cols);
    let q = cxla::orthonormal_span(&basis, 1e-12);
    Ok(DiracFiber { basis, q })
}

/// The Dirac fiber of the family (phi = e^{2<a, l+l0>}).
pub fn build_l_fiber(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<DiracFiber> {
    build_l_fiber_variant(alg, fam, lambda, PhiVariant::Standard)
}

/// Max |e_inner| over normalized basis pairs of the fiber.
pub fn fiber_isotropy_residual(alg: &SimpleLieAlgebra, fiber: &DiracFiber) -> f64 {
    let n = alg.rank;
    let d = alg.dim;
    let k = fiber.dim();
    let col_elem = |j: usize| -> EFiberElement {
        let col = fiber.basis.column(j);
        let norm = col.norm().max(1e-300);
        let get = |i: usize| col[i] / norm;
        EFiberElement {
            xi: (0..n).map(get).collect(),
            eta: (n..2 * n).map(get).collect(),
            x: (2 * n..2 * n + d).map(get).collect(),
            y: (2 * n + d..2 * n + 2 * d).map(get).collect(),
        }
    };
    let mut worst: f64 = 0.0;
    for i in 0..k {
        let a = col_elem(i);
        for j in i..k {
            worst = worst.max(e_inner(alg, &a, &col_elem(j)).norm());
        }
    }
    worst
}

/// The graph fiber of theta# + tau# over the dual fiber, using the
/// explicit images theta#(0,h;X_-+k,X_+-k) = (k,0;h,h) and
/// tau#(...) = 1/2 (0,0;tau#X_+,tau#X_+) - 1/2 (0,0;tau#X_-,tau#X_-).
pub fn graph_fiber(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<DiracFiber> {
    require_zero_gauge(fam)?;
    let n = alg.rank;
    let d = alg.dim;
    let rows = 2 * n + 2 * d;
    let nb = normalized_basis(alg);
    let one = Complex64::new(1.0, 0.0);
    let tau = crate::dynr::tau_coefficients(alg, fam, lambda)?;
    let tau_mv = crate::dynr::diagonal_bivector(alg, &tau);
    let sharp = |z: &[Complex64]| sharp_apply(alg, &tau_mv, z).expect("bivector sharp");
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    // zeta = (0, h_i; 0, 0) -> graph element (0, h_i; h_i, h_i)
    for i in 0..n {
        let mut v = vec![Complex64::zero(); rows];
        v[n + i] = one;
        v[2 * n + i] = one;
        v[2 * n + d + i] = one;
        cols.push(v);
    }
    // zeta = (0,0; k, -k) for k = hdual_i -> (k, 0; k, -k)
    for i in 0..n {
        let mut v = vec![Complex64::zero(); rows];
        for (k, c) in nb.dual_coords(i).iter().enumerate() {
            let cv = rat_to_c64(c);
            v[k] = cv;
            v[2 * n + k] = cv;
            v[2 * n + d + k] = -cv;
        }
        cols.push(v);
    }
    // zeta = (0,0;0,E_a): graph element (0,0; t/2 E_a, (t/2+1) E_a);
    // zeta = (0,0;E_{-a},0): graph element (0,0; (t/2+1) E_{-a}, t/2 E_{-a}).
    for p in 0..alg.num_pos() {
        let mut zx = vec![Complex64::zero(); d];
        zx[alg.e_index(p)] = one;
        let tx = sharp(&zx);
        let mut v = vec![Complex64::zero(); rows];
        for i in 0..d {
            v[2 * n + i] = 0.5 * tx[i];
            v[2 * n + d + i] = 0.5 * tx[i];
        }
        v[2 * n + d + alg.e_index(p)] += one;
        cols.push(v);

        let mut zy = vec![Complex64::zero(); d];
        zy[alg.f_index(p)] = one;
        let ty = sharp(&zy);
        let mut v = vec![Complex64::zero(); rows];
        for i in 0..d {
            v[2 * n + i] -= 0.5 * ty[i];
            v[2 * n + d + i] -= 0.5 * ty[i];
        }
        v[2 * n + alg.f_index(p)] += one;
        cols.push(v);
    }
    let basis = cxla::from_columns(rows, &cols);
    let q = cxla::orthonormal_span(&basis, 1e-12);
    Ok(DiracFiber { basis, q })
}

/// The closed-form spanning sections of L for a family, with the phi of the
/// chosen variant.
pub fn spanning_sections(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    variant: PhiVariant,
) -> Result<Vec<ESection>> {
    require_zero_gauge(fam)?;
    let n = alg.rank;
    let d = alg.dim;
    let nb = normalized_basis(alg);
    let one = Complex64::new(1.0, 0.0);
    let mut sections = Vec::new();
    // (hdual_i, 0; hdual_i, -hdual_i): constant, TU part acts as d/dl_i
    for i in 0..n {
        let mut v = EFiberElement::zero(alg);
        for (k, c) in nb.dual_coords(i).iter().enumerate() {
            let cv = rat_to_c64(c);
            v.xi[k] = cv;
            v.x[k] = cv;
            v.y[k] = -cv;
        }
        sections.push(ESection::constant(alg, &v));
    }
    // (0, h_i; h_i, h_i)
    for i in 0..n {
        let mut v = EFiberElement::zero(alg);
        v.eta[i] = one;
        v.x[i] = one;
        v.y[i] = one;
        sections.push(ESection::constant(alg, &v));
    }
    let member: std::collections::BTreeSet<usize> = fam.closure(alg).members.iter().copied().collect();
    let (exp_scale, plus_offset) = match variant {
        PhiVariant::Standard => (2.0, Complex64::zero()),
        PhiVariant::ExponentThree => (3.0, Complex64::zero()),
        PhiVariant::ConstantProductTwo => (2.0, Complex64::new(2.0f64.ln(), 0.0)),
    };
    for p in 0..alg.num_pos() {
        if member.contains(&p) {
            let l0arg = alg.pairing_coords(p, &fam.lambda0)?;
            for (sign, idx) in [(1i8, alg.e_index(p)), (-1, alg.f_index(p))] {
                let sgn = f64::from(sign);
                let w: Vec<Complex64> = alg
                    .root(p)
                    .coords
                    .iter()
                    .map(|&c| Complex64::new(sgn * exp_scale * c as f64, 0.0))
                    .collect();
                let c = sgn * exp_scale * l0arg + if sign == 1 { plus_offset } else { Complex64::zero() };
                let mut s = ESection::zero(alg);
                let mut x = vec![Complex64::zero(); d];
                x[idx] = one;
                s.terms.push((Func::one(), x, vec![Complex64::zero(); d]));
                let mut y = vec![Complex64::zero(); d];
                y[idx] = one;
                s.terms.push((Func::Exp { w, c }, vec![Complex64::zero(); d], y));
                sections.push(s);
            }
        } else {
            let mut x = vec![Complex64::zero(); d];
            x[alg.f_index(p)] = one;
            sections.push(ESection::scaled(alg, Func::one(), x, vec![Complex64::zero(); d]));
            let mut y = vec![Complex64::zero(); d];
            y[alg.e_index(p)] = one;
            sections.push(ESection::scaled(alg, Func::one(), vec![Complex64::zero(); d], y));
        }
    }
    Ok(sections)
}

/// Dirac closure report: max membership residual of all pairwise brackets.
#[derive(Debug, Clone)]
pub struct DiracClosureReport {
    pub max_residual: f64,
    pub pairs_checked: usize,
    pub samples: usize,
}

/// Check that the brackets of all ordered pairs of spanning sections stay
/// inside the fiber at every sample.
pub fn dirac_closure_check_variant(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    lambdas: &[Vec<Complex64>],
    variant: PhiVariant,
) -> Result<DiracClosureReport> {
    let sections = spanning_sections(alg, fam, variant)?;
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    for lambda in lambdas {
        let fiber = build_l_fiber_variant(alg, fam, lambda, variant)?;
        for (i, s1) in sections.iter().enumerate() {
            for (j, s2) in sections.iter().enumerate() {
                if i == j {
                    continue;
                }
                let v = courant_bracket_at(alg, s1, s2, lambda)?;
                worst = worst.max(fiber.membership_residual(&v));
                pairs += 1;
            }
        }
    }
    Ok(DiracClosureReport { max_residual: worst, pairs_checked: pairs, samples: lambdas.len() })
}

pub fn dirac_closure_check(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    lambdas: &[Vec<Complex64>],
) -> Result<DiracClosureReport> {
    dirac_closure_check_variant(alg, fam, lambdas, PhiVariant::Standard)
}

/// Maurer-Cartan residual of theta + tau, split into the
/// `Gamma(g^g^TU)` side (h-invariance of tau) and the `^3 g` side (the
/// modified CDYBE residual).
pub fn mc_residual(alg: &SimpleLieAlgebra, fam: &RMatrixFamily, lambda: &[Complex64]) -> Result<(f64, f64)> {
    let h_part = zero_weight_residual(alg, fam, lambda)?;
    let cdybe = cdybe_residual(alg, fam, lambda)?;
    Ok((h_part, cdybe.rel))
}

/// Report of the three Dirac conditions for the characteristic pair
/// (U x h, tau).
#[derive(Debug, Clone)]
pub struct CharPairReport {
    /// D = U x h is a subalgebroid: max ||[h_i, h_j]||, exactly zero.
    pub cond1_subalgebroid: f64,
    /// Maurer-Cartan equation mod h: coefficients with no h-factor.
    pub cond2_mc_mod_h: f64,
    /// Dual bracket stays conormal: the h-pairing of [xi, eta]_tau and the
    /// g*-bracket of conormal covectors.
    pub cond3_conormal: f64,
}

impl CharPairReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.cond1_subalgebroid <= tol && self.cond2_mc_mod_h <= tol && self.cond3_conormal <= tol
    }
}

/// Condition 2 residual from a tau 1-jet: `[r0, tau] + 1/2 [tau, tau]
/// + sum_i h_i ^ d tau/dl_i`, projected mod h (terms without any Cartan
/// index must vanish), normalized to the summand scale.
pub fn mc_mod_h_residual_of(
    alg: &SimpleLieAlgebra,
    tau: &MultiVector<Complex64>,
    tau_partials: &[MultiVector<Complex64>],
) -> Result<f64> {
    let r0c = r0(alg).promote();
    let half = Complex64::new(0.5, 0.0);
    let mut m = schouten(alg, &r0c, tau)?;
    m = m.add(&schouten(alg, tau, tau)?.scale(&half))?;
    let mut alt = MultiVector::zero(alg);
    for (i, dt) in tau_partials.iter().enumerate() {
        alt = alt.add(&MultiVector::basis_vector(alg, i).wedge(dt)?)?;
    }
    m = m.add(&alt)?;
    let scale = m.max_coeff_norm().max(tau.max_coeff_norm()).max(1.0);
    let mut worst: f64 = 0.0;
    for (key, c) in m.terms() {
        if key.iter().all(|&i| i >= alg.rank) {
            worst = worst.max(c.norm());
        }
    }
    Ok(worst / scale)
}

/// Condition 3 residual for an arbitrary bivector tau: for conormal
/// covectors v, w in {E_{+-a}} (Killing-identified), the pairing
/// `kappa(w, [h_j, tau# v]) - kappa(v, [h_j, tau# w])` and the h-component
/// of the dual bracket `[v, w]_R = [Rv, w] + [v, Rw]` must vanish.
pub fn conormal_bracket_residual_of(alg: &SimpleLieAlgebra, tau: &MultiVector<Complex64>) -> Result<f64> {
    let d = alg.dim;
    let n = alg.rank;
    let one = Complex64::new(1.0, 0.0);
    let mut covectors: Vec<Vec<Complex64>> = Vec::with_capacity(2 * alg.num_pos());
    for p in 0..alg.num_pos() {
        let mut v = vec![Complex64::zero(); d];
        v[alg.e_index(p)] = one;
        covectors.push(v);
        let mut v = vec![Complex64::zero(); d];
        v[alg.f_index(p)] = one;
        covectors.push(v);
    }
    let sharp_images: Vec<Vec<Complex64>> = covectors
        .iter()
        .map(|v| sharp_apply(alg, tau, v))
        .collect::<Result<_>>()?;
    let r_op = |v: &[Complex64]| -> Vec<Complex64> {
        let mut out = v.to_vec();
        for (i, o) in out.iter_mut().enumerate() {
            if i < n {
                *o = Complex64::zero();
            } else if i >= n + alg.num_pos() {
                *o = -*o;
            }
        }
        out
    };
    let mut worst: f64 = 0.0;
    for (a, va) in covectors.iter().enumerate() {
        for (b, vb) in covectors.iter().enumerate() {
            if a == b {
                continue;
            }
            for j in 0..n {
                let mut hj = vec![Complex64::zero(); d];
                hj[j] = one;
                let lhs = alg.killing_c64(vb, &alg.bracket_c64(&hj, &sharp_images[a]));
                let rhs = alg.killing_c64(va, &alg.bracket_c64(&hj, &sharp_images[b]));
                worst = worst.max((lhs - rhs).norm());
            }
            // g*-bracket of the covectors stays conormal to h
            let rbr = {
                let t1 = alg.bracket_c64(&r_op(va), vb);
                let t2 = alg.bracket_c64(va, &r_op(vb));
                t1.iter().zip(&t2).map(|(x, y)| x + y).collect::<Vec<_>>()
            };
            for j in 0..n {
                let mut hj = vec![Complex64::zero(); d];
                hj[j] = one;
                worst = worst.max(alg.killing_c64(&rbr, &hj).norm());
            }
        }
    }
    Ok(worst)
}

/// The Theorem-style three-condition check for the family's
/// characteristic pair (U x h, tau(lambda)).
pub fn charpair_dirac_check(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    lambda: &[Complex64],
) -> Result<CharPairReport> {
    // Condition 1: h is an abelian subalgebra, exactly.
    let mut cond1: f64 = 0.0;
    for i in 0..alg.rank {
        for j in 0..alg.rank {
            for (_, c) in alg.bracket_sparse(i, j) {
                cond1 = cond1.max(rat_to_f64(c).abs());
            }
        }
    }
    // tau value and partials
    let jet = crate::dynr::family_jet(alg, fam, lambda)?;
    let tau = jet.value.sub(&r0(alg).promote())?;
    let cond2 = mc_mod_h_residual_of(alg, &tau, &jet.partials)?;
    let cond3 = conormal_bracket_residual_of(alg, &tau)?;
    Ok(CharPairReport { cond1_subalgebroid: cond1, cond2_mc_mod_h: cond2, cond3_conormal: cond3 })
}

/// `|| [s1, s2] + [s2, s1] ||` at a point.
pub fn antisymmetry_residual(
    alg: &SimpleLieAlgebra,
    s1: &ESection,
    s2: &ESection,
    lambda: &[Complex64],
) -> Result<f64> {
    let a = courant_bracket_at(alg, s1, s2, lambda)?;
    let b = courant_bracket_at(alg, s2, s1, lambda)?;
    let sum = EFiberElement {
        xi: a.xi.iter().zip(&b.xi).map(|(x, y)| x + y).collect(),
        eta: a.eta.iter().zip(&b.eta).map(|(x, y)| x + y).collect(),
        x: a.x.iter().zip(&b.x).map(|(x, y)| x + y).collect(),
        y: a.y.iter().zip(&b.y).map(|(x, y)| x + y).collect(),
    };
    Ok(sum.max_norm())
}

/// Anchor property `rho [e1, e2] = [rho e1, rho e2]` tested on a coordinate
/// function: both sides act on `f` as derivations at `lambda`.
pub fn anchor_residual(
    alg: &SimpleLieAlgebra,
    s1: &ESection,
    s2: &ESection,
    f: &Func,
    lambda: &[Complex64],
) -> Result<f64> {
    let br = courant_bracket_at(alg, s1, s2, lambda)?;
    let lhs = tangent_derivative(alg, &br.xi, f, lambda)?;
    // [rho e1, rho e2] f = xi1.(xi2.f) - xi2.(xi1.f) for constant parts
    let mut rhs = Complex64::zero();
    for i in 0..alg.rank {
        let mut c1 = Complex64::zero();
        for (k, xk) in s1.xi.iter().enumerate() {
            c1 += xk * alg.killing_entry_f64(k, i);
        }
        if c1.is_zero() {
            continue;
        }
        let fi = f.partial(i);
        rhs += c1 * tangent_derivative(alg, &s2.xi, &fi, lambda)?;
    }
    let mut rhs2 = Complex64::zero();
    for i in 0..alg.rank {
        let mut c2 = Complex64::zero();
        for (k, xk) in s2.xi.iter().enumerate() {
            c2 += xk * alg.killing_entry_f64(k, i);
        }
        if c2.is_zero() {
            continue;
        }
        let fi = f.partial(i);
        rhs2 += c2 * tangent_derivative(alg, &s1.xi, &fi, lambda)?;
    }
    Ok((lhs - (rhs - rhs2)).norm())
}

/// Leibniz property `[e1, f e2] = f [e1,e2] + (rho(e1) f) e2 - (e1,e2) D f`
/// for a constant section e2 (pure (g (+) g) part) and f in the function
/// algebra; `D f = (0, sum_i df/dl_i h_i; 0, 0)`.
pub fn leibniz_residual(
    alg: &SimpleLieAlgebra,
    s1: &ESection,
    e2_x: &[Complex64],
    e2_y: &[Complex64],
    f: &Func,
    lambda: &[Complex64],
) -> Result<f64> {
    let fe2 = ESection::scaled(alg, f.clone(), e2_x.to_vec(), e2_y.to_vec());
    let lhs = courant_bracket_at(alg, s1, &fe2, lambda)?;

    let e2 = ESection::scaled(alg, Func::one(), e2_x.to_vec(), e2_y.to_vec());
    let base = courant_bracket_at(alg, s1, &e2, lambda)?;
    let fv = f.eval(lambda)?;
    let rho_f = tangent_derivative(alg, &s1.xi, f, lambda)?;
    let e1val = s1.value_at(alg, lambda)?;
    let e2val = e2.value_at(alg, lambda)?;
    let inner = e_inner(alg, &e1val, &e2val);
    let mut rhs = EFiberElement::zero(alg);
    for i in 0..alg.rank {
        rhs.eta[i] = base.eta[i] * fv - inner * f.partial(i).eval(lambda)?;
        rhs.xi[i] = base.xi[i] * fv;
    }
    for i in 0..alg.dim {
        rhs.x[i] = base.x[i] * fv + rho_f * e2val.x[i];
        rhs.y[i] = base.y[i] * fv + rho_f * e2val.y[i];
    }
    Ok(lhs.sub(&rhs).max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynr::SamplePolicy;
    use crate::rootsys::{build_algebra, CartanType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(name: &str) -> SimpleLieAlgebra {
        build_algebra(CartanType::parse(name).unwrap()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit(d: usize, i: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::zero(); d];
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn func_partials_match_finite_differences() {
        let f = Func::Prod(vec![
            Func::Coord(0),
            Func::Exp { w: vec![c(2.0), c(-1.0)], c: c(0.3) },
            Func::Sum(vec![Func::one(), Func::Coth { w: vec![c(1.0), c(0.5)], c: c(0.2) }]),
        ]);
        let l = vec![Complex64::new(0.7, 0.1), Complex64::new(0.4, 0.05)];
        let h = 1e-6;
        for i in 0..2 {
            let mut lp = l.clone();
            lp[i] += c(h);
            let mut lm = l.clone();
            lm[i] -= c(h);
            let fd = (f.eval(&lp).unwrap() - f.eval(&lm).unwrap()) / c(2.0 * h);
            let an = f.partial(i).eval(&l).unwrap();
            assert!((fd - an).norm() < 1e-7 * an.norm().max(1.0), "partial {i}");
        }
    }

    #[test]
    fn jet_functions_anchor_to_their_point() {
        let l = vec![c(0.5)];
        let f = Func::Jet { at: l.clone(), value: c(2.0), partials: vec![c(3.0)] };
        assert_eq!(f.eval(&l).unwrap(), c(2.0));
        assert_eq!(f.partial(0).eval(&l).unwrap(), c(3.0));
        assert!(matches!(f.eval(&[c(0.6)]), Err(CoreError::JetMissing(_))));
    }

    #[test]
    fn e_inner_examples() {
        let a2 = alg("A2");
        let n = a2.rank;
        let d = a2.dim;
        let nb = crate::rootsys::normalized_basis(&a2);
        // a = (k, 0; k, -k) is isotropic
        for i in 0..n {
            let mut a = EFiberElement::zero(&a2);
            for (k, cc) in nb.dual_coords(i).iter().enumerate() {
                let cv = crate::scalar::rat_to_c64(cc);
                a.xi[k] = cv;
                a.x[k] = cv;
                a.y[k] = -cv;
            }
            assert!(e_inner(&a2, &a, &a).norm() < 1e-14);
        }
        // ((0,0;E_a,0), (0,0;E_{-a},0)) = -1/4 (with the normalized E_{-a})
        let kef = crate::scalar::rat_to_c64(&nb.kappa_ef[0]);
        let mut a = EFiberElement::zero(&a2);
        a.x = unit(d, a2.e_index(0));
        let mut b = EFiberElement::zero(&a2);
        b.x = unit(d, a2.f_index(0)).iter().map(|z| z / kef).collect();
        assert!((e_inner(&a2, &a, &b) - c(-0.25)).norm() < 1e-14);
        // A-fiber vs A*-fiber: the pairing is half the duality of the
        // double: e_inner((k,0;X,X), (0,h;Z,W)) = 1/2 kappa(k,h) + 1/2 B_d
        let mut af = EFiberElement::zero(&a2);
        af.xi = unit(n, 0);
        af.x = unit(d, a2.e_index(1));
        af.y = unit(d, a2.e_index(1));
        let mut dual = EFiberElement::zero(&a2);
        dual.eta = unit(n, 1);
        dual.x = unit(d, a2.f_index(1));
        // A*-element (0,h; X_- + k, X_+ - k) with k=0, X_- = f, X_+ = 0
        let inner = e_inner(&a2, &af, &dual);
        let kappa_kh = a2.killing_entry_f64(0, 1);
        let b_d = 0.5 * (a2.killing_c64(&af.y, &dual.y) - a2.killing_c64(&af.x, &dual.x));
        let expect = 0.5 * kappa_kh + 0.5 * b_d;
        assert!((inner - expect).norm() < 1e-13);
    }

    #[test]
    fn bracket_rules_constant_and_derivative() {
        let a2 = alg("A2");
        let d = a2.dim;
        // constants bracket pointwise
        let s1 = ESection::scaled(&a2, Func::one(), unit(d, a2.e_index(0)), unit(d, 0));
        let s2 = ESection::scaled(&a2, Func::one(), unit(d, a2.f_index(0)), unit(d, a2.e_index(1)));
        let l = vec![c(0.4), c(0.8)];
        let v = courant_bracket_at(&a2, &s1, &s2, &l).unwrap();
        let bx = a2.bracket_c64(&unit(d, a2.e_index(0)), &unit(d, a2.f_index(0)));
        let by = a2.bracket_c64(&unit(d, 0), &unit(d, a2.e_index(1)));
        for i in 0..d {
            assert!((v.x[i] - bx[i]).norm() < 1e-14);
            assert!((v.y[i] - by[i]).norm() < 1e-14);
        }
        assert!(v.xi.iter().all(|z| z.norm() < 1e-15));
        assert!(v.eta.iter().all(|z| z.norm() < 1e-15));

        // tangent part differentiates coefficients: the paper's
        // [(hdual_i-tangent, h_j; 0,0), (0,0; fX, gY)] = (0,0; df/dl_i X, dg/dl_i Y)
        let nb = crate::rootsys::normalized_basis(&a2);
        let mut tt = EFiberElement::zero(&a2);
        for (k, cc) in nb.dual_coords(0).iter().enumerate() {
            tt.xi[k] = crate::scalar::rat_to_c64(cc);
        }
        tt.eta = unit(a2.rank, 1);
        let s_tt = ESection::constant(&a2, &tt);
        let f = Func::Prod(vec![Func::Coord(0), Func::Coord(0)]);
        let g = Func::Exp { w: vec![c(2.0), c(0.0)], c: c(0.0) };
        let mut s_fg = ESection::zero(&a2);
        s_fg.terms.push((f.clone(), unit(d, a2.e_index(2)), vec![Complex64::zero(); d]));
        s_fg.terms.push((g.clone(), vec![Complex64::zero(); d], unit(d, a2.f_index(1))));
        let v = courant_bracket_at(&a2, &s_tt, &s_fg, &l).unwrap();
        let df = f.partial(0).eval(&l).unwrap();
        let dg = g.partial(0).eval(&l).unwrap();
        assert!((v.x[a2.e_index(2)] - df).norm() < 1e-13);
        assert!((v.y[a2.f_index(1)] - dg).norm() < 1e-13);
    }

    #[test]
    fn bracket_step3_display_on_sl2() {
        // [(0,0;E_a, e^{2x} C E_a), (0,0;E_{-a}, e^{-2x} C^{-1} E_{-a})]
        //   = (0, h_a; h_a, h_a)
        let a1 = alg("A1");
        let d = a1.dim;
        let nb = crate::rootsys::normalized_basis(&a1);
        let kef = crate::scalar::rat_to_c64(&nb.kappa_ef[0]);
        let cc = Complex64::new(1.7, 0.3);
        let mut s1 = ESection::zero(&a1);
        s1.terms.push((Func::one(), unit(d, a1.e_index(0)), vec![Complex64::zero(); d]));
        s1.terms.push((
            Func::Exp { w: vec![c(2.0)], c: cc.ln() },
            vec![Complex64::zero(); d],
            unit(d, a1.e_index(0)),
        ));
        // E_{-a} = f / kappa(e,f)
        let fvec: Vec<Complex64> = unit(d, a1.f_index(0)).iter().map(|z| z / kef).collect();
        let mut s2 = ESection::zero(&a1);
        s2.terms.push((Func::one(), fvec.clone(), vec![Complex64::zero(); d]));
        s2.terms.push((
            Func::Exp { w: vec![c(-2.0)], c: -cc.ln() },
            vec![Complex64::zero(); d],
            fvec,
        ));
        let l = vec![Complex64::new(0.45, 0.1)];
        let v = courant_bracket_at(&a1, &s1, &s2, &l).unwrap();
        // h_a = h_1 = basis 0; eta must be h_a, x and y must both be h_a
        assert!((v.eta[0] - c(1.0)).norm() < 1e-12, "eta {:?}", v.eta);
        assert!((v.x[0] - c(1.0)).norm() < 1e-12);
        assert!((v.y[0] - c(1.0)).norm() < 1e-12);
        assert!(v.xi[0].norm() < 1e-14);
        for i in 1..d {
            assert!(v.x[i].norm() < 1e-13 && v.y[i].norm() < 1e-13);
        }
    }

    #[test]
    fn l_fiber_is_half_dimensional_isotropic_and_graphical() {
        let b2 = alg("B2");
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let policy = SamplePolicy::default();
        for s in [vec![], vec![0], vec![0, 1]] {
            let l0 = policy.sample_lambda(&mut rng, &b2, None).unwrap();
            let fam = RMatrixFamily::new(&b2, &s, l0, None).unwrap();
            let l = policy.sample_lambda(&mut rng, &b2, Some(&fam)).unwrap();
            let fiber = build_l_fiber(&b2, &fam, &l).unwrap();
            assert_eq!(fiber.dim(), b2.rank + b2.dim);
            assert!(fiber_isotropy_residual(&b2, &fiber) <= 1e-12);
            // graph consistency with theta# + tau#
            let graph = graph_fiber(&b2, &fam, &l).unwrap();
            let angle = cxla::principal_angle_max(&fiber.basis, &graph.basis);
            assert!(angle <= 1e-9, "S={s:?}: angle {angle:.3e}");
        }
    }

    #[test]
    fn dirac_closure_holds_for_the_family_and_fails_for_variants() {
        let a2 = alg("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let policy = SamplePolicy::default();
        let l0 = policy.sample_lambda(&mut rng, &a2, None).unwrap();
        let fam = RMatrixFamily::new(&a2, &[0, 1], l0, None).unwrap();
        let ls: Vec<Vec<Complex64>> = (0..3)
            .map(|_| policy.sample_lambda(&mut rng, &a2, Some(&fam)).unwrap())
            .collect();
        let rep = dirac_closure_check(&a2, &fam, &ls).unwrap();
        assert!(rep.max_residual <= 1e-9, "closure residual {}", rep.max_residual);
        let rep3 = dirac_closure_check_variant(&a2, &fam, &ls, PhiVariant::ExponentThree).unwrap();
        assert!(rep3.max_residual >= 1e-3, "exp-3 variant: {}", rep3.max_residual);
        let rep2 = dirac_closure_check_variant(&a2, &fam, &ls, PhiVariant::ConstantProductTwo).unwrap();
        assert!(rep2.max_residual >= 1e-3, "Cophi variant: {}", rep2.max_residual);
    }

    #[test]
    fn mc_residual_and_charpair_conditions() {
        let b2 = alg("B2");
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let policy = SamplePolicy::default();
        let l0 = policy.sample_lambda(&mut rng, &b2, None).unwrap();
        let fam = RMatrixFamily::new(&b2, &[0], l0, None).unwrap();
        let l = policy.sample_lambda(&mut rng, &b2, Some(&fam)).unwrap();
        let (h_part, cdybe_part) = mc_residual(&b2, &fam, &l).unwrap();
        assert!(h_part <= 1e-12);
        assert!(cdybe_part <= 1e-9);
        let rep = charpair_dirac_check(&b2, &fam, &l).unwrap();
        assert!(rep.pass(1e-9), "{rep:?}");

        // tau = 0: everything passes exactly
        let fam0 = RMatrixFamily::new(&b2, &[], vec![c(0.1), c(0.1)], None).unwrap();
        let rep = charpair_dirac_check(&b2, &fam0, &l).unwrap();
        assert_eq!(rep.cond1_subalgebroid, 0.0);
        assert_eq!(rep.cond2_mc_mod_h, 0.0);
        assert!(rep.cond3_conormal <= 1e-14);
        let (h0, c0) = mc_residual(&b2, &fam0, &l).unwrap();
        assert_eq!(h0, 0.0);
        assert_eq!(c0, 0.0);

        // An added E_{a1} ^ h_1 term carries an h-factor, so it leaves the
        // characteristic pair unchanged mod U x h: all three conditions
        // still pass. The perturbation is caught by the zero-weight side.
        let jet = crate::dynr::family_jet(&b2, &fam, &l).unwrap();
        let mut tau = jet.value.sub(&r0(&b2).promote()).unwrap();
        tau.add_term(&[0, b2.e_index(0)], c(1.0));
        assert!(conormal_bracket_residual_of(&b2, &tau).unwrap() <= 1e-12);
        assert!(mc_mod_h_residual_of(&b2, &tau, &jet.partials).unwrap() <= 1e-12);
        let mut bad = r0(&b2).promote();
        bad.add_term(&[0, b2.e_index(0)], c(1.0));
        assert!(crate::dynr::zero_weight_residual_of(&b2, &bad).unwrap() > 1e-3);
        // A perturbation with no h-leg and nonzero weight does break
        // condition 3: tau + E_{a1} ^ E_{a2}.
        let mut tau2 = jet.value.sub(&r0(&b2).promote()).unwrap();
        tau2.add_term(&[b2.e_index(0), b2.e_index(1)], c(1.0));
        assert!(conormal_bracket_residual_of(&b2, &tau2).unwrap() > 1e-3);
    }

    #[test]
    fn courant_axioms_on_the_test_sections() {
        let a2 = alg("A2");
        let d = a2.dim;
        let n = a2.rank;
        let nb = crate::rootsys::normalized_basis(&a2);
        let l = vec![Complex64::new(0.6, 0.05), Complex64::new(0.9, 0.1)];
        // test sections: tangent + dual-Cartan constants, function-scaled
        // root sections
        let mut sections = Vec::new();
        for i in 0..n {
            let mut v = EFiberElement::zero(&a2);
            for (k, cc) in nb.dual_coords(i).iter().enumerate() {
                let cv = crate::scalar::rat_to_c64(cc);
                v.xi[k] = cv;
                v.x[k] = cv;
                v.y[k] = -cv;
            }
            sections.push(ESection::constant(&a2, &v));
            let mut v = EFiberElement::zero(&a2);
            v.eta[i] = Complex64::new(1.0, 0.0);
            v.x[i] = Complex64::new(1.0, 0.0);
            v.y[i] = Complex64::new(1.0, 0.0);
            sections.push(ESection::constant(&a2, &v));
        }
        sections.push(ESection::scaled(
            &a2,
            Func::Exp { w: vec![c(2.0), c(2.0)], c: c(0.1) },
            unit(d, a2.e_index(2)),
            unit(d, a2.f_index(0)),
        ));
        sections.push(ESection::scaled(&a2, Func::Coord(1), unit(d, a2.f_index(2)), unit(d, 1)));
        for s1 in &sections {
            for s2 in &sections {
                assert!(antisymmetry_residual(&a2, s1, s2, &l).unwrap() < 1e-12);
                for f in [Func::Coord(0), Func::Exp { w: vec![c(2.0), c(0.0)], c: c(0.0) }] {
                    assert!(anchor_residual(&a2, s1, s2, &f, &l).unwrap() <= 1e-10);
                }
            }
        }
        // Leibniz for f in {lambda_i, e^{2<a,l>}} against direct evaluation
        for f in [
            Func::Coord(0),
            Func::Exp { w: vec![c(2.0), c(0.0)], c: c(0.0) },
            Func::Exp { w: vec![c(2.0), c(2.0)], c: c(-0.2) },
        ] {
            for s1 in &sections {
                let res = leibniz_residual(&a2, s1, &unit(d, a2.e_index(1)), &unit(d, a2.f_index(1)), &f, &l).unwrap();
                assert!(res <= 1e-10, "Leibniz residual {res:.3e}");
            }
        }
    }
}
