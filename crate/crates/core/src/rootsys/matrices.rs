//! Defining matrix representations used to realize the supported algebras:
//! sl(n+1), so(2n+1), sp(2n), so(2n) with antidiagonal Gram/symplectic forms
//! (so the Cartan subalgebra is diagonal), and a 7x7 realization of G2 as
//! the derivation algebra of the split octonions.

use crate::ratmat::{primitive_integer_vector, Rat, RatMat};
use crate::scalar::rat_int;
use num::Zero;

/// A matrix Lie algebra handed to the extraction pipeline.
///
/// `cartan` elements must be diagonal in the defining representation and lie
/// in the span of `basis`. `regular` is a diagonal matrix used only through
/// differences of its diagonal entries; it fixes the positive system.
pub struct DefiningData {
    pub basis: Vec<RatMat>,
    pub cartan: Vec<RatMat>,
    pub regular: RatMat,
}

fn unit(m: usize, i: usize, j: usize) -> RatMat {
    let mut e = RatMat::zeros(m, m);
    e.set(i, j, rat_int(1));
    e
}

fn diag(entries: &[i64]) -> RatMat {
    let m = entries.len();
    let mut d = RatMat::zeros(m, m);
    for (i, &v) in entries.iter().enumerate() {
        d.set(i, i, rat_int(v));
    }
    d
}

/// Type A_n: sl(n+1) with the matrix-unit basis.
pub fn sl_data(n: usize) -> DefiningData {
    let m = n + 1;
    let mut basis = Vec::new();
    let mut cartan = Vec::new();
    for i in 0..n {
        let mut h = RatMat::zeros(m, m);
        h.set(i, i, rat_int(1));
        h.set(i + 1, i + 1, rat_int(-1));
        cartan.push(h.clone());
        basis.push(h);
    }
    for i in 0..m {
        for j in 0..m {
            if i != j {
                basis.push(unit(m, i, j));
            }
        }
    }
    let regular = diag(&(0..m).map(|i| (m - i) as i64).collect::<Vec<_>>());
    DefiningData { basis, cartan, regular }
}

/// Nullspace of a linear matrix constraint `X -> X^T G + G X` (orthogonal)
/// or `X -> X^T J + J X` (symplectic), returned as primitive basis matrices.
fn matrix_constraint_nullspace(m: usize, form: &RatMat) -> Vec<RatMat> {
    // Unknown X as m*m flat vector (row-major: X[i][j] at i*m+j).
    // Constraint rows: (X^T F + F X)[r][c] = sum_k X[k][r] F[k][c] + F[r][k] X[k][c] = 0.
    let mut rows = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            let mut row = vec![Rat::zero(); m * m];
            for k in 0..m {
                if !form.get(k, c).is_zero() {
                    row[k * m + r] = &row[k * m + r] + form.get(k, c);
                }
                if !form.get(r, k).is_zero() {
                    row[k * m + c] = &row[k * m + c] + form.get(r, k);
                }
            }
            rows.push(row);
        }
    }
    let constraint = RatMat::from_rows(rows);
    constraint
        .nullspace()
        .into_iter()
        .map(|flat| {
            let mut x = RatMat::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    x.set(i, j, flat[i * m + j].clone());
                }
            }
            x
        })
        .collect()
}

/// Types B_n (m = 2n+1) and D_n (m = 2n): so(m) for the antidiagonal form.
pub fn so_data(n: usize, m: usize) -> DefiningData {
    let mut form = RatMat::zeros(m, m);
    for i in 0..m {
        form.set(i, m - 1 - i, rat_int(1));
    }
    let basis = matrix_constraint_nullspace(m, &form);
    let mut cartan = Vec::new();
    for i in 0..n {
        let mut h = RatMat::zeros(m, m);
        h.set(i, i, rat_int(1));
        h.set(m - 1 - i, m - 1 - i, rat_int(-1));
        cartan.push(h);
    }
    let mut t = vec![0i64; m];
    for i in 0..n {
        t[i] = (n - i) as i64;
        t[m - 1 - i] = -((n - i) as i64);
    }
    DefiningData { basis, cartan, regular: diag(&t) }
}

/// Type C_n: sp(2n) for the antidiagonal symplectic form.
pub fn sp_data(n: usize) -> DefiningData {
    let m = 2 * n;
    let mut form = RatMat::zeros(m, m);
    for i in 0..n {
        form.set(i, m - 1 - i, rat_int(1));
        form.set(m - 1 - i, i, rat_int(-1));
    }
    let basis = matrix_constraint_nullspace(m, &form);
    let mut cartan = Vec::new();
    for i in 0..n {
        let mut h = RatMat::zeros(m, m);
        h.set(i, i, rat_int(1));
        h.set(m - 1 - i, m - 1 - i, rat_int(-1));
        cartan.push(h);
    }
    let mut t = vec![0i64; m];
    for i in 0..n {
        t[i] = (n - i) as i64;
        t[m - 1 - i] = -((n - i) as i64);
    }
    DefiningData { basis, cartan, regular: diag(&t) }
}

// --- Split octonions (Zorn vector matrices) and G2 ---

// Element layout in raw coordinates: (a, v1, v2, v3, w1, w2, w3, b).
fn zorn_mul(x: &[Rat; 8], y: &[Rat; 8]) -> [Rat; 8] {
    let (a1, b1) = (&x[0], &x[7]);
    let (a2, b2) = (&y[0], &y[7]);
    let v1 = &x[1..4];
    let w1 = &x[4..7];
    let v2 = &y[1..4];
    let w2 = &y[4..7];
    let dot = |u: &[Rat], v: &[Rat]| -> Rat { u.iter().zip(v).map(|(a, b)| a * b).fold(Rat::zero(), |s, t| s + t) };
    let cross = |u: &[Rat], v: &[Rat]| -> [Rat; 3] {
        [
            &u[1] * &v[2] - &u[2] * &v[1],
            &u[2] * &v[0] - &u[0] * &v[2],
            &u[0] * &v[1] - &u[1] * &v[0],
        ]
    };
    let a = a1 * a2 + dot(v1, w2);
    let b = b1 * b2 + dot(w1, v2);
    let ww = cross(w1, w2);
    let vv = cross(v1, v2);
    let mut out = [
        a,
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        b,
    ];
    for i in 0..3 {
        out[1 + i] = a1 * &v2[i] + b2 * &v1[i] - &ww[i];
        out[4 + i] = a2 * &w1[i] + b1 * &w2[i] + &vv[i];
    }
    out
}

// O-basis: 0 = identity, 1 = u = diag(1,-1), 2..4 = v_i, 5..7 = w_i.
fn obasis_to_raw(c: &[Rat; 8]) -> [Rat; 8] {
    let mut raw = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    raw[0] = &c[0] + &c[1];
    raw[7] = &c[0] - &c[1];
    for i in 0..3 {
        raw[1 + i] = c[2 + i].clone();
        raw[4 + i] = c[5 + i].clone();
    }
    raw
}

fn raw_to_obasis(raw: &[Rat; 8]) -> [Rat; 8] {
    let half = crate::scalar::rat(1, 2);
    let mut c = [
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
        Rat::zero(),
    ];
    c[0] = (&raw[0] + &raw[7]) * &half;
    c[1] = (&raw[0] - &raw[7]) * &half;
    for i in 0..3 {
        c[2 + i] = raw[1 + i].clone();
        c[5 + i] = raw[4 + i].clone();
    }
    c
}

fn octonion_mul_table() -> Vec<Vec<[Rat; 8]>> {
    let mut table = vec![vec![std::array::from_fn::<Rat, 8, _>(|_| Rat::zero()); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let mut ei = std::array::from_fn::<Rat, 8, _>(|_| Rat::zero());
            ei[i] = rat_int(1);
            let mut ej = std::array::from_fn::<Rat, 8, _>(|_| Rat::zero());
            ej[j] = rat_int(1);
            let prod = zorn_mul(&obasis_to_raw(&ei), &obasis_to_raw(&ej));
            table[i][j] = raw_to_obasis(&prod);
        }
    }
    table
}

/// Derivation D_A of the split octonions for traceless diagonal A:
/// v -> Av, w -> -A^T w, restricted to the 7-dim trace-zero part
/// (basis u, v1..3, w1..3).
fn g2_cartan_matrix(a: [i64; 3]) -> RatMat {
    let mut d = RatMat::zeros(7, 7);
    for i in 0..3 {
        d.set(1 + i, 1 + i, rat_int(a[i]));
        d.set(4 + i, 4 + i, rat_int(-a[i]));
    }
    d
}

/// Type G2: derivations of the split octonions, as 7x7 matrices on the
/// trace-zero part.
pub fn g2_data() -> DefiningData {
    let table = octonion_mul_table();
    // Unknown: 8x8 matrix M in O-basis coordinates, flat index i*8+j.
    // Constraint per basis pair (p,q), component r:
    //   sum_j M[r][j] table[p][q][j] - sum_i M[i][p] table[i][q][r]
    //                               - sum_i M[i][q] table[p][i][r] = 0.
    let mut rows = Vec::new();
    for p in 0..8 {
        for q in 0..8 {
            for r in 0..8 {
                let mut row = vec![Rat::zero(); 64];
                for j in 0..8 {
                    if !table[p][q][j].is_zero() {
                        row[r * 8 + j] = &row[r * 8 + j] + &table[p][q][j];
                    }
                }
                for i in 0..8 {
                    if !table[i][q][r].is_zero() {
                        row[i * 8 + p] = &row[i * 8 + p] - &table[i][q][r];
                    }
                    if !table[p][i][r].is_zero() {
                        row[i * 8 + q] = &row[i * 8 + q] - &table[p][i][r];
                    }
                }
                rows.push(row);
            }
        }
    }
    let constraint = RatMat::from_rows(rows);
    let nullspace = constraint.nullspace();
    assert_eq!(nullspace.len(), 14, "der(O) must be 14-dimensional");
    let mut basis = Vec::new();
    for flat in nullspace {
        // Derivations kill the identity and preserve the trace-zero part.
        for j in 0..8 {
            assert!(flat[j * 8].is_zero() || j == 0, "derivation must kill the identity");
            assert!(flat[j].is_zero(), "derivation must preserve the trace-zero part");
        }
        let mut x = RatMat::zeros(7, 7);
        for i in 0..7 {
            for j in 0..7 {
                x.set(i, j, flat[(i + 1) * 8 + (j + 1)].clone());
            }
        }
        let flat7: Vec<Rat> = x.flatten();
        let prim = primitive_integer_vector(&flat7);
        for j in 0..7 {
            for i in 0..7 {
                x.set(i, j, prim[j * 7 + i].clone());
            }
        }
        basis.push(x);
    }
    let cartan = vec![g2_cartan_matrix([1, -1, 0]), g2_cartan_matrix([0, 1, -1])];
    let regular = g2_cartan_matrix([2, 1, -3]);
    DefiningData { basis, cartan, regular }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octonions_are_unital_and_alternative() {
        let table = octonion_mul_table();
        // identity
        for j in 0..8 {
            for r in 0..8 {
                let expect = if r == j { rat_int(1) } else { Rat::zero() };
                assert_eq!(table[0][j][r], expect);
                assert_eq!(table[j][0][r], expect);
            }
        }
        // alternative law on basis elements: (xx)y = x(xy)
        let mul = |x: &[Rat; 8], y: &[Rat; 8]| {
            let mut out = std::array::from_fn::<Rat, 8, _>(|_| Rat::zero());
            for i in 0..8 {
                for j in 0..8 {
                    if x[i].is_zero() || y[j].is_zero() {
                        continue;
                    }
                    for r in 0..8 {
                        if !table[i][j][r].is_zero() {
                            out[r] = &out[r] + &(&x[i] * &y[j]) * &table[i][j][r];
                        }
                    }
                }
            }
            out
        };
        for i in 0..8 {
            for j in 0..8 {
                let mut x = std::array::from_fn::<Rat, 8, _>(|_| Rat::zero());
                x[i] = rat_int(1);
                let mut y = std::array::from_fn::<Rat, 8, _>(|_| Rat::zero());
                y[j] = rat_int(1);
                let xx = mul(&x, &x);
                let xy = mul(&x, &y);
                assert_eq!(mul(&xx, &y), mul(&x, &xy), "alternativity failed at ({i},{j})");
            }
        }
    }

    #[test]
    fn dimensions_match_the_classical_counts() {
        assert_eq!(sl_data(1).basis.len(), 3);
        assert_eq!(sl_data(2).basis.len(), 8);
        assert_eq!(so_data(2, 5).basis.len(), 10);
        assert_eq!(so_data(3, 7).basis.len(), 21);
        assert_eq!(sp_data(2).basis.len(), 10);
        assert_eq!(so_data(4, 8).basis.len(), 28);
    }

    #[test]
    fn g2_has_dimension_14() {
        let data = g2_data();
        assert_eq!(data.basis.len(), 14);
        // Cartan elements commute.
        assert!(data.cartan[0].bracket(&data.cartan[1]).is_zero());
    }
}
