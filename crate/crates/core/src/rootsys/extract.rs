//! Extraction of root data from a defining matrix representation by exact
//! simultaneous diagonalization of ad(h) over the rationals.

use super::matrices::DefiningData;
use crate::ratmat::{primitive_integer_vector, BasisSolver, Rat, RatMat};
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub(crate) struct Extraction {
    pub n: usize,
    pub dim: usize,
    /// Positive roots as integer coordinates in the simple-root basis,
    /// sorted by (height, coords).
    pub pos_coords: Vec<Vec<i64>>,
    /// Structure tensor in the final basis: brackets[i][j] = [(k, c)].
    pub brackets: Vec<Vec<Vec<(usize, Rat)>>>,
}

fn diag_of(m: &RatMat) -> Vec<Rat> {
    for i in 0..m.rows {
        for j in 0..m.cols {
            if i != j {
                assert!(m.get(i, j).is_zero(), "Cartan/regular matrices must be diagonal");
            }
        }
    }
    (0..m.rows).map(|i| m.get(i, i).clone()).collect()
}

fn stack_for_weight(ads: &[RatMat], w: &[Rat]) -> RatMat {
    let d = ads[0].rows;
    let mut rows = Vec::with_capacity(ads.len() * d);
    for (k, ad) in ads.iter().enumerate() {
        for i in 0..d {
            let mut row = ad.data[i].clone();
            row[i] = &row[i] - &w[k];
            rows.push(row);
        }
    }
    RatMat::from_rows(rows)
}

/// Structure tensor of a list of basis matrices, via one basis solver.
fn structure_tensor(basis: &[RatMat], solver: &BasisSolver) -> Vec<Vec<Vec<(usize, Rat)>>> {
    let d = basis.len();
    let mut tensor = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let br = basis[i].bracket(&basis[j]);
            let coords = solver
                .solve(&br.flatten())
                .expect("bracket must stay inside the algebra span");
            let sparse: Vec<(usize, Rat)> = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            tensor[j][i] = sparse.iter().map(|(k, c)| (*k, -c.clone())).collect();
            tensor[i][j] = sparse;
        }
    }
    tensor
}

fn ad_matrix(tensor: &[Vec<Vec<(usize, Rat)>>], coeffs: &[Rat]) -> RatMat {
    let d = tensor.len();
    let mut ad = RatMat::zeros(d, d);
    for (i, ci) in coeffs.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for j in 0..d {
            for (k, c) in &tensor[i][j] {
                ad.data[*k][j] = &ad.data[*k][j] + ci * c;
            }
        }
    }
    ad
}

fn trace_product(a: &RatMat, b: &RatMat) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..a.rows {
        for j in 0..a.cols {
            if !a.data[i][j].is_zero() && !b.data[j][i].is_zero() {
                acc = acc + &a.data[i][j] * &b.data[j][i];
            }
        }
    }
    acc
}

pub(crate) fn extract(data: &DefiningData) -> Extraction {
    let d = data.basis.len();
    let n = data.cartan.len();
    let m = data.basis[0].rows;

    let flat = RatMat::from_rows({
        // columns = flattened basis matrices
        let flats: Vec<Vec<Rat>> = data.basis.iter().map(|b| b.flatten()).collect();
        (0..m * m).map(|r| flats.iter().map(|f| f[r].clone()).collect()).collect()
    });
    let solver = BasisSolver::new(flat).expect("defining basis must be linearly independent");

    // ad(H_k) on the algebra, in the raw basis.
    let ads: Vec<RatMat> = data
        .cartan
        .iter()
        .map(|h| {
            let mut ad = RatMat::zeros(d, d);
            for (j, b) in data.basis.iter().enumerate() {
                let coords = solver.solve(&h.bracket(b).flatten()).expect("ad(h) must preserve the algebra");
                for (k, c) in coords.into_iter().enumerate() {
                    ad.data[k][j] = c;
                }
            }
            ad
        })
        .collect();

    // Candidate weights: differences of defining-representation diagonals.
    let h_diags: Vec<Vec<Rat>> = data.cartan.iter().map(diag_of).collect();
    let t_diag = diag_of(&data.regular);
    let mut candidates: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for p in 0..m {
        for q in 0..m {
            if p == q {
                continue;
            }
            let w: Vec<Rat> = (0..n).map(|k| &h_diags[k][p] - &h_diags[k][q]).collect();
            if w.iter().all(|x| x.is_zero()) {
                continue;
            }
            let tv = &t_diag[p] - &t_diag[q];
            if let Some(prev) = candidates.get(&w) {
                assert_eq!(prev, &tv, "regular element must be in the Cartan span");
            } else {
                candidates.insert(w, tv);
            }
        }
    }

    // Joint eigenspaces.
    struct RootVec {
        w: Vec<Rat>,
        tval: Rat,
        vec: Vec<Rat>,
    }
    let mut roots: Vec<RootVec> = Vec::new();
    for (w, tv) in &candidates {
        let ns = stack_for_weight(&ads, w).nullspace();
        if ns.is_empty() {
            continue;
        }
        assert_eq!(ns.len(), 1, "root spaces of a simple algebra are one-dimensional");
        assert!(!tv.is_zero(), "regular element must not vanish on any root");
        roots.push(RootVec { w: w.clone(), tval: tv.clone(), vec: primitive_integer_vector(&ns[0]) });
    }

    // Zero-weight space must be exactly the Cartan.
    let zero_space = {
        let w0 = vec![Rat::zero(); n];
        stack_for_weight(&ads, &w0).nullspace()
    };
    assert_eq!(zero_space.len(), n, "centralizer of the Cartan must be the Cartan");
    assert_eq!(roots.len() + n, d, "weight spaces must exhaust the algebra");

    let pos_set: std::collections::BTreeSet<Vec<Rat>> = roots
        .iter()
        .filter(|r| r.tval.is_positive())
        .map(|r| r.w.clone())
        .collect();
    assert_eq!(pos_set.len() * 2, roots.len(), "roots must come in opposite pairs");
    for r in &roots {
        let neg: Vec<Rat> = r.w.iter().map(|x| -x.clone()).collect();
        assert!(
            pos_set.contains(&r.w) || pos_set.contains(&neg),
            "every root must be plus or minus a positive root"
        );
    }

    // Simple roots: positive roots that are not sums of two positive roots.
    let mut simple: Vec<Vec<Rat>> = pos_set
        .iter()
        .filter(|a| {
            !pos_set.iter().any(|b| {
                if *a == b {
                    return false;
                }
                let diff: Vec<Rat> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                pos_set.contains(&diff)
            })
        })
        .cloned()
        .collect();
    assert_eq!(simple.len(), n, "number of simple roots must equal the rank");
    simple.sort_by(|a, b| b.cmp(a));

    // Integer coordinates of every positive root in the simple basis.
    let simple_mat = RatMat::from_rows((0..n).map(|r| (0..n).map(|c| simple[c][r].clone()).collect()).collect());
    let simple_inv = simple_mat.inverse().expect("simple roots must be linearly independent");
    let coords_of = |w: &[Rat]| -> Vec<i64> {
        (0..n)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, wj) in w.iter().enumerate() {
                    acc = acc + &simple_inv.data[i][j] * wj;
                }
                assert!(acc.is_integer(), "root coordinates must be integers");
                let v = acc.to_integer().to_i64().expect("root coordinate fits i64");
                assert!(v >= 0, "positive roots must have nonnegative coordinates");
                v
            })
            .collect()
    };

    struct PosRoot {
        coords: Vec<i64>,
        e_vec: Vec<Rat>,
        f_vec: Vec<Rat>,
    }
    let mut positives: Vec<PosRoot> = pos_set
        .iter()
        .map(|w| {
            let neg: Vec<Rat> = w.iter().map(|x| -x.clone()).collect();
            let e_vec = roots.iter().find(|r| &r.w == w).unwrap().vec.clone();
            let f_vec = roots.iter().find(|r| r.w == neg).unwrap().vec.clone();
            PosRoot { coords: coords_of(w), e_vec, f_vec }
        })
        .collect();
    positives.sort_by(|a, b| {
        let ha: i64 = a.coords.iter().sum();
        let hb: i64 = b.coords.iter().sum();
        ha.cmp(&hb).then(a.coords.cmp(&b.coords))
    });

    // Raw-basis structure tensor, used only for the Killing normalization
    // of the simple coroots.
    let raw_tensor = structure_tensor(&data.basis, &solver);
    let to_matrix = |coords: &[Rat]| -> RatMat {
        let mut acc = RatMat::zeros(m, m);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.sub(&data.basis[i].scale(&-c.clone()));
            }
        }
        acc
    };

    let mut h_mats = Vec::with_capacity(n);
    for i in 0..n {
        let pr = positives
            .iter()
            .find(|p| p.coords.iter().enumerate().all(|(j, &c)| c == i64::from(j == i)))
            .expect("simple root present among positive roots");
        let ad_e = ad_matrix(&raw_tensor, &pr.e_vec);
        let ad_f = ad_matrix(&raw_tensor, &pr.f_vec);
        let kappa = trace_product(&ad_e, &ad_f);
        assert!(!kappa.is_zero(), "kappa(e, f) is nonzero for simple algebras");
        let e_mat = to_matrix(&pr.e_vec);
        let f_mat = to_matrix(&pr.f_vec);
        h_mats.push(e_mat.bracket(&f_mat).scale(&(Rat::one() / kappa)));
    }

    let mut final_basis = h_mats;
    for p in &positives {
        final_basis.push(to_matrix(&p.e_vec));
    }
    for p in &positives {
        final_basis.push(to_matrix(&p.f_vec));
    }
    let final_flat = RatMat::from_rows({
        let flats: Vec<Vec<Rat>> = final_basis.iter().map(|b| b.flatten()).collect();
        (0..m * m).map(|r| flats.iter().map(|f| f[r].clone()).collect()).collect()
    });
    let final_solver = BasisSolver::new(final_flat).expect("final basis must be independent");
    let brackets = structure_tensor(&final_basis, &final_solver);

    Extraction {
        n,
        dim: d,
        pos_coords: positives.into_iter().map(|p| p.coords).collect(),
        brackets,
    }
}
