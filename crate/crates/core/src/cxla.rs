//! Complex dense linear algebra: orthonormal bases, principal angles,
//! least-squares membership, nullspaces.
//!
//! Decompositions are built on a cyclic Jacobi eigensolver for Hermitian
//! matrices (applied to A^H A) and modified Gram-Schmidt, which stay exact
//! on the highly structured, singular-value-degenerate bases this crate
//! produces.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn from_columns(rows: usize, cols: &[Vec<Complex64>]) -> CMat {
    let mut m = CMat::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        assert_eq!(col.len(), rows);
        for (i, v) in col.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

/// Rescale each column to unit norm (zero columns untouched); returns the
/// normalized matrix and the scales. Span computations use this so that
/// relative thresholds measure angular dependence, not column magnitudes.
fn normalize_columns(m: &CMat) -> (CMat, Vec<f64>) {
    let mut out = m.clone();
    let mut scales = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let n = m.column(j).norm();
        let s = if n > 0.0 { n } else { 1.0 };
        scales.push(s);
        let inv = Complex64::new(1.0 / s, 0.0);
        for i in 0..m.nrows() {
            out[(i, j)] *= inv;
        }
    }
    (out, scales)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns (eigenvalues, eigenvector columns), unsorted.
pub fn hermitian_eig(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    assert_eq!(n, h.ncols());
    let mut a = h.clone();
    let mut v = CMat::identity(n, n);
    let scale = a.norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)].norm();
                if g <= 1e-18 * scale {
                    continue;
                }
                let phase = a[(p, q)] / g;
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let zeta = (alpha - beta) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = [[c, -s phase], [s conj(phase), c]] on the (p,q) plane
                let sp = s * phase;
                let spc = s * phase.conj();
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp + spc * akq;
                    a[(k, q)] = -sp * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk + sp * aqk;
                    a[(q, k)] = -spc * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp + spc * vkq;
                    v[(k, q)] = -sp * vkp + c * vkq;
                }
            }
        }
    }
    let eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    (eigs, v)
}

/// Singular values (descending) and right singular vectors of `m`, from the
/// Hermitian eigendecomposition of m^H m.
fn singular_right(m: &CMat) -> (Vec<f64>, CMat) {
    let h = m.adjoint() * m;
    let (eigs, v) = hermitian_eig(&h);
    let mut order: Vec<usize> = (0..eigs.len()).collect();
    order.sort_by(|&a, &b| eigs[b].partial_cmp(&eigs[a]).unwrap_or(std::cmp::Ordering::Equal));
    let sv: Vec<f64> = order.iter().map(|&i| eigs[i].max(0.0).sqrt()).collect();
    let mut vs = CMat::zeros(v.nrows(), v.ncols());
    for (jq, &i) in order.iter().enumerate() {
        vs.set_column(jq, &v.column(i));
    }
    (sv, vs)
}

/// Orthonormal basis of the column span by modified Gram-Schmidt with
/// reorthogonalization, on column-normalized input; directions whose
/// residual falls below `rel_tol` (relative to the unit columns) are
/// treated as dependent.
pub fn orthonormal_span(m: &CMat, rel_tol: f64) -> CMat {
    if m.ncols() == 0 {
        return m.clone();
    }
    let tol = rel_tol.max(1e-12);
    let (mn, _) = normalize_columns(m);
    let rows = mn.nrows();
    let mut q: Vec<CVec> = Vec::new();
    for j in 0..mn.ncols() {
        let mut v: CVec = mn.column(j).into_owned();
        for _ in 0..2 {
            for u in &q {
                let c = u.dotc(&v);
                v -= u * c;
            }
        }
        let n = v.norm();
        if n > tol {
            q.push(v / Complex64::new(n, 0.0));
        }
    }
    let mut out = CMat::zeros(rows, q.len());
    for (j, col) in q.iter().enumerate() {
        out.set_column(j, col);
    }
    out
}

pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let (mn, _) = normalize_columns(m);
    let (sv, _) = singular_right(&mn);
    let smax = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > rel_tol * smax && s > 0.0).count()
}

/// Right nullspace basis: right singular vectors with
/// sigma <= rel_tol * sigma_max, mapped back to the original column scales.
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    let ncols = m.ncols();
    if ncols == 0 {
        return CMat::zeros(0, 0);
    }
    let (mn, scales) = normalize_columns(m);
    let (sv, v) = singular_right(&mn);
    let smax = sv.first().copied().unwrap_or(0.0).max(1e-300);
    let keep: Vec<usize> = (0..ncols).filter(|&i| sv[i] <= rel_tol * smax).collect();
    let mut ns = CMat::zeros(ncols, keep.len());
    for (jq, &i) in keep.iter().enumerate() {
        for c in 0..ncols {
            ns[(c, jq)] = v[(c, i)] / scales[c];
        }
    }
    ns
}

/// Largest singular value.
pub fn sigma_max(m: &CMat) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let (sv, _) = singular_right(m);
    sv.first().copied().unwrap_or(0.0)
}

/// Distance of `v` from the span of the orthonormal columns `q`.
pub fn residual_against(q: &CMat, v: &CVec) -> f64 {
    let coeffs = q.adjoint() * v;
    let proj = q * coeffs;
    (v - proj).norm()
}

/// Largest principal angle between two column spans (radians), via
/// sin(theta_max) = sigma_max((1 - P_b) Q_a), symmetrized.
pub fn principal_angle_max(a: &CMat, b: &CMat) -> f64 {
    let qa = orthonormal_span(a, 1e-12);
    let qb = orthonormal_span(b, 1e-12);
    let part = |x: &CMat, y: &CMat| -> f64 {
        let proj = y * (y.adjoint() * x);
        sigma_max(&(x - proj))
    };
    let s = part(&qa, &qb).max(part(&qb, &qa));
    s.clamp(0.0, 1.0).asin()
}

/// Least-squares solution via the pseudo-inverse in the column-normalized
/// frame (singular values below rel_tol * sigma_max are truncated), and the
/// residual norm.
pub fn lstsq(a: &CMat, b: &CVec, rel_tol: f64) -> (CVec, f64) {
    let (an, scales) = normalize_columns(a);
    let (sv, v) = singular_right(&an);
    let smax = sv.first().copied().unwrap_or(0.0).max(1e-300);
    let atb = an.adjoint() * b;
    let mut x = CVec::zeros(a.ncols());
    for (i, &s) in sv.iter().enumerate() {
        if s > rel_tol * smax {
            let vi = v.column(i).into_owned();
            let coeff = vi.dotc(&atb) / Complex64::new(s * s, 0.0);
            x += vi * coeff;
        }
    }
    for (j, s) in scales.iter().enumerate() {
        x[j] /= Complex64::new(*s, 0.0);
    }
    let res = (a * &x - b).norm();
    (x, res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hermitian_eig_reconstructs() {
        let n = 12;
        let raw = CMat::from_fn(n, n, |i, j| c(((i * 5 + j * 3) % 7) as f64 - 3.0, ((i + 2 * j) % 5) as f64 - 2.0));
        let h = &raw * raw.adjoint() + CMat::identity(n, n) * c(0.5, 0.0);
        let (eigs, v) = hermitian_eig(&h);
        assert!((v.adjoint() * &v - CMat::identity(n, n)).norm() < 1e-12);
        for i in 0..n {
            let vi = v.column(i).into_owned();
            let res = (&h * &vi - &vi * c(eigs[i], 0.0)).norm();
            assert!(res < 1e-10 * h.norm(), "eigpair {i}: {res:.3e}");
        }
    }

    #[test]
    fn handles_degenerate_structured_bases() {
        // Block-sparse columns with heavily repeated singular values, the
        // pattern that arises from subalgebra bases in the double.
        let n = 16;
        let mut m = CMat::zeros(n, n);
        for j in 0..8 {
            m[(j, j)] = c(1.0, 0.0);
            m[(j + 8, j)] = c(-1.0, 0.0);
        }
        for j in 8..16 {
            m[(j - 8, j)] = c(-1.0, 0.0);
            m[(j, j)] = c(-1.0, 0.0);
        }
        m[(3, 2)] = c(0.0, 1.0);
        let b = CVec::from_fn(n, |i, _| c(i as f64 * 0.1 - 0.4, 0.3));
        let (x, res) = lstsq(&m, &b, 1e-12);
        assert!(res < 1e-12, "residual {res:.3e}");
        assert!((&m * &x - &b).norm() < 1e-12);
    }

    #[test]
    fn nullspace_and_rank() {
        // column 2 = column 0 + i * column 1
        let mut m = CMat::from_fn(4, 3, |i, j| c((i + j) as f64, (i as f64) * 0.5 - j as f64));
        for i in 0..4 {
            let v = m[(i, 0)] + c(0.0, 1.0) * m[(i, 1)];
            m[(i, 2)] = v;
        }
        assert_eq!(rank(&m, 1e-10), 2);
        let ns = nullspace(&m, 1e-10);
        assert_eq!(ns.ncols(), 1);
        assert!((&m * ns.column(0)).norm() < 1e-12 * ns.column(0).norm());
    }

    #[test]
    fn principal_angles_detect_equality_and_difference() {
        let a = CMat::from_fn(6, 2, |i, j| c((i + j * 3) as f64, (i as f64) * 0.2));
        let mut b = CMat::zeros(6, 2);
        for i in 0..6 {
            b[(i, 0)] = a[(i, 0)] * c(2.0, 1.0) + a[(i, 1)] * c(0.0, -0.5);
            b[(i, 1)] = a[(i, 1)] * c(-1.0, 0.25);
        }
        assert!(principal_angle_max(&a, &b) < 1e-12);
        let mut b2 = b.clone();
        b2[(5, 1)] += c(10.0, 0.0);
        assert!(principal_angle_max(&a, &b2) > 1e-3);
        // scale robustness: one huge column, one tiny
        let mut a2 = a.clone();
        for i in 0..6 {
            a2[(i, 0)] *= c(1e13, 0.0);
            a2[(i, 1)] *= c(1e-9, 0.0);
        }
        assert!(principal_angle_max(&a, &a2) < 1e-10);
    }

    #[test]
    fn lstsq_minimum_norm_and_scaling() {
        let a = CMat::from_fn(2, 4, |i, j| c((i * 4 + j) as f64 + 1.0, 0.0));
        let b = CVec::from_vec(vec![c(1.0, 0.5), c(2.0, -0.25)]);
        let (x, res) = lstsq(&a, &b, 1e-12);
        assert!(res < 1e-12);
        assert!(x.norm() > 0.0);
        // ill-scaled but consistent square system
        let m = from_columns(
            3,
            &[
                vec![c(1e8, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0), c(1e-8, 0.0)],
            ],
        );
        let b = CVec::from_vec(vec![c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let (x, res) = lstsq(&m, &b, 1e-12);
        assert!(res < 1e-10);
        assert!((x[2] - c(4e8, 0.0)).norm() < 1.0);
    }
}
