//! The verification suite behind `drx verify`: runs every check for one or
//! all coth families on an algebra and assembles a deterministic report.

use anyhow::Result;
use drx_core::courant::{
    antisymmetry_residual, charpair_dirac_check, dirac_closure_check, leibniz_residual, mc_residual, ESection,
    EFiberElement, Func,
};
use drx_core::dynr::{
    alt_dr, cdybe_residual_jet, eval_r, family_jet, ode_residual, vanishing_dichotomy_check,
    zero_weight_residual, RJet, RMatrixFamily, SamplePolicy,
};
use drx_core::lagrangian::{
    build_l, cayley_eigencheck, cayley_multiplicativity, classify_subspace, diagonal_intersection,
    is_lagrangian_subalgebra, w_of_lambda,
};
use drx_core::multivec::MultiVector;
use drx_core::rootsys::{normalized_basis, CartanType, SimpleLieAlgebra};
use num::complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub weight: f64,
    pub isotropy: f64,
    pub fd: f64,
    pub courant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { residual: 1e-9, weight: 1e-12, isotropy: 1e-12, fd: 1e-6, courant: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleCounts {
    pub lambda: usize,
    pub lambda0: usize,
    pub dirac: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        SampleCounts { lambda: 10, lambda0: 5, dirac: 3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// 1-based simple-root indices of the family, if family-scoped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0_index: Option<usize>,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub algebra: CartanType,
    pub seed: u64,
    pub samples: SampleCounts,
    pub tolerances: Tolerances,
    pub perturbed: bool,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn push(&mut self, name: &str, scope: Option<(&[usize], usize)>, value: f64, tolerance: f64) {
        let (s, idx) = match scope {
            Some((s, idx)) => (Some(s.iter().map(|i| i + 1).collect()), Some(idx)),
            None => (None, None),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            s,
            lambda0_index: idx,
            value,
            tolerance,
            pass: value.is_finite() && value <= tolerance,
        });
    }
}

/// Central finite-difference cross-check of `alt_dr` (step 1e-5),
/// relative to the analytic value.
fn fd_alt_dr_residual(
    alg: &SimpleLieAlgebra,
    fam: &RMatrixFamily,
    lambda: &[Complex64],
) -> drx_core::Result<f64> {
    let analytic = alt_dr(alg, fam, lambda)?;
    let h = 1e-5;
    let mut fd = MultiVector::zero(alg);
    for i in 0..alg.rank {
        let mut lp = lambda.to_vec();
        lp[i] += Complex64::new(h, 0.0);
        let mut lm = lambda.to_vec();
        lm[i] -= Complex64::new(h, 0.0);
        let dr = eval_r(alg, fam, &lp)?
            .sub(&eval_r(alg, fam, &lm)?)?
            .scale(&Complex64::new(1.0 / (2.0 * h), 0.0));
        fd = fd.add(&MultiVector::basis_vector(alg, i).wedge(&dr)?)?;
    }
    let diff = analytic.sub(&fd)?.max_coeff_norm();
    Ok(diff / analytic.max_coeff_norm().max(1.0))
}

fn perturbed_jet(alg: &SimpleLieAlgebra, jet: &RJet) -> RJet {
    let mut value = jet.value.clone();
    value.add_term(&[alg.e_index(0), alg.e_index(1)], Complex64::new(0.01, 0.0));
    RJet { value, partials: jet.partials.clone() }
}

fn courant_axiom_checks(alg: &SimpleLieAlgebra, tols: &Tolerances, rec: &mut Recorder) -> Result<()> {
    let n = alg.rank;
    let d = alg.dim;
    let nb = normalized_basis(alg);
    let lambda: Vec<Complex64> = (0..n).map(|i| Complex64::new(0.6 + 0.07 * i as f64, 0.05)).collect();
    let unit = |i: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[i] = Complex64::new(1.0, 0.0);
        v
    };
    let mut sections = Vec::new();
    for i in 0..n {
        let mut v = EFiberElement::zero(alg);
        for (k, c) in nb.dual_coords(i).iter().enumerate() {
            let cv = drx_core::scalar::rat_to_c64(c);
            v.xi[k] = cv;
            v.x[k] = cv;
            v.y[k] = -cv;
        }
        sections.push(ESection::constant(alg, &v));
        let mut v = EFiberElement::zero(alg);
        v.eta[i] = Complex64::new(1.0, 0.0);
        v.x[i] = Complex64::new(1.0, 0.0);
        v.y[i] = Complex64::new(1.0, 0.0);
        sections.push(ESection::constant(alg, &v));
    }
    let root_exp = |scale: f64| Func::Exp {
        w: alg.root(0).coords.iter().map(|&c| Complex64::new(scale * c as f64, 0.0)).collect(),
        c: Complex64::new(0.0, 0.0),
    };
    sections.push(ESection::scaled(alg, root_exp(2.0), unit(alg.e_index(0)), unit(alg.f_index(0))));
    sections.push(ESection::scaled(alg, Func::Coord(0), unit(alg.f_index(0)), unit(0)));

    let test_funcs = [Func::Coord(0), root_exp(2.0)];
    let mut antisym: f64 = 0.0;
    let mut anchor: f64 = 0.0;
    let mut leibniz: f64 = 0.0;
    for s1 in &sections {
        for s2 in &sections {
            antisym = antisym.max(antisymmetry_residual(alg, s1, s2, &lambda)?);
            for f in &test_funcs {
                anchor = anchor.max(anchor_residual_wrap(alg, s1, s2, f, &lambda)?);
            }
        }
        for f in &test_funcs {
            leibniz = leibniz.max(leibniz_residual(
                alg,
                s1,
                &unit(alg.e_index(0)),
                &unit(alg.f_index(0)),
                f,
                &lambda,
            )?);
        }
    }
    rec.push("courant_antisymmetry", None, antisym, 1e-12);
    rec.push("courant_anchor", None, anchor, tols.courant);
    rec.push("courant_leibniz", None, leibniz, tols.courant);
    Ok(())
}

fn anchor_residual_wrap(
    alg: &SimpleLieAlgebra,
    s1: &ESection,
    s2: &ESection,
    f: &Func,
    lambda: &[Complex64],
) -> drx_core::Result<f64> {
    drx_core::courant::anchor_residual(alg, s1, s2, f, lambda)
}

/// Run the whole suite for the listed subsets.
#[allow(clippy::too_many_arguments)]
pub fn run_verify(
    alg: &SimpleLieAlgebra,
    subsets: &[Vec<usize>],
    fixed_lambda0: Option<Vec<Complex64>>,
    seed: u64,
    counts: SampleCounts,
    tols: Tolerances,
    perturb: bool,
) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let policy = SamplePolicy::default();
    let mut rec = Recorder { checks: Vec::new() };
    let lambda0_count = if fixed_lambda0.is_some() { 1 } else { counts.lambda0 };

    for s in subsets {
        for l0_idx in 0..lambda0_count {
            let lambda0 = match &fixed_lambda0 {
                Some(l0) => l0.clone(),
                None => policy.sample_lambda(&mut rng, alg, None)?,
            };
            let fam = RMatrixFamily::new(alg, s, lambda0, None)?;
            let scope = Some((s.as_slice(), l0_idx));
            let lambdas: Vec<Vec<Complex64>> = (0..counts.lambda)
                .map(|_| policy.sample_lambda(&mut rng, alg, Some(&fam)))
                .collect::<drx_core::Result<_>>()?;

            // CDYBE (optionally with the falsification perturbation)
            let mut worst_cdybe: f64 = 0.0;
            for l in &lambdas {
                let jet = family_jet(alg, &fam, l)?;
                let jet = if perturb { perturbed_jet(alg, &jet) } else { jet };
                worst_cdybe = worst_cdybe.max(cdybe_residual_jet(alg, &jet)?.rel);
            }
            let name = if perturb { "cdybe_residual[perturbed]" } else { "cdybe_residual" };
            rec.push(name, scope, worst_cdybe, tols.residual);

            let mut worst: f64 = 0.0;
            for l in &lambdas {
                worst = worst.max(zero_weight_residual(alg, &fam, l)?);
            }
            rec.push("zero_weight_residual", scope, worst, tols.weight);

            let mut worst: f64 = 0.0;
            for l in lambdas.iter().take(3) {
                worst = worst.max(fd_alt_dr_residual(alg, &fam, l)?);
            }
            rec.push("alt_dr_vs_finite_differences", scope, worst, tols.fd);

            let mut worst: f64 = 0.0;
            for l in &lambdas {
                worst = worst.max(ode_residual(alg, &fam, l)?);
            }
            rec.push("ode_residual", scope, worst, tols.residual);

            let dichotomy = vanishing_dichotomy_check(alg, &fam, &lambdas[..3.min(lambdas.len())], 1e-8)?;
            rec.push("vanishing_dichotomy", scope, if dichotomy.pass { 0.0 } else { 1.0 }, 0.5);

            let mut worst_eig: f64 = 0.0;
            let mut worst_mult: f64 = 0.0;
            for l in &lambdas {
                worst_eig = worst_eig.max(cayley_eigencheck(alg, &fam, l)?);
                worst_mult = worst_mult.max(cayley_multiplicativity(alg, &fam, l)?);
            }
            rec.push("cayley_eigencheck", scope, worst_eig, tols.residual);
            rec.push("cayley_multiplicativity", scope, worst_mult, tols.residual);

            // Lagrangian subalgebra l(S, lambda0)
            let w0 = build_l(alg, s, &fam.lambda0)?;
            let lrep = is_lagrangian_subalgebra(alg, &w0);
            rec.push(
                "lagrangian_dimension",
                scope,
                if lrep.dim_ok { 0.0 } else { 1.0 },
                0.5,
            );
            rec.push("lagrangian_isotropy", scope, lrep.isotropy_residual, tols.isotropy);
            rec.push("lagrangian_closure", scope, lrep.closure_residual, tols.residual);
            let inter = diagonal_intersection(alg, &w0, 1e-8);
            rec.push(
                "diagonal_intersection_dim",
                scope,
                (inter.dim() as f64 - alg.rank as f64).abs(),
                0.5,
            );

            let mut worst: f64 = 0.0;
            for l in &lambdas {
                let w = w_of_lambda(alg, &fam, l)?;
                let shifted: Vec<Complex64> = l.iter().zip(&fam.lambda0).map(|(a, b)| a + b).collect();
                let target = build_l(alg, s, &shifted)?;
                worst = worst.max(w.angle_to(&target));
            }
            rec.push("w_of_lambda_matches_l", scope, worst, tols.residual);

            // Roundtrip classification of the fiber at the first sample
            let l_star = &lambdas[0];
            let cls = classify_subspace(alg, &w_of_lambda(alg, &fam, l_star)?, 1e-8)?;
            rec.push(
                "roundtrip_s_recovered",
                scope,
                if cls.s == fam.s { 0.0 } else { 1.0 },
                0.5,
            );
            let mut worst: f64 = 0.0;
            for (p, cay) in &cls.eigenvalues {
                let arg = fam.argument(alg, *p, l_star)?;
                let expect = (2.0 * arg).exp();
                worst = worst.max((cay - expect).norm() / expect.norm().max(1.0));
            }
            rec.push("roundtrip_eigenvalues", scope, worst, tols.residual);

            let dirac = dirac_closure_check(alg, &fam, &lambdas[..counts.dirac.min(lambdas.len())])?;
            rec.push("dirac_closure", scope, dirac.max_residual, tols.residual);

            let (mc_h, mc_cdybe) = mc_residual(alg, &fam, l_star)?;
            rec.push("mc_residual_h_invariance", scope, mc_h, tols.weight);
            rec.push("mc_residual_cdybe", scope, mc_cdybe, tols.residual);

            let cp = charpair_dirac_check(alg, &fam, l_star)?;
            rec.push("charpair_cond1_subalgebroid", scope, cp.cond1_subalgebroid, tols.residual);
            rec.push("charpair_cond2_mc_mod_h", scope, cp.cond2_mc_mod_h, tols.residual);
            rec.push("charpair_cond3_conormal", scope, cp.cond3_conormal, tols.residual);
        }
    }

    courant_axiom_checks(alg, &tols, &mut rec)?;

    let pass = rec.checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        algebra: alg.cartan_type,
        seed,
        samples: counts,
        tolerances: tols,
        perturbed: perturb,
        checks: rec.checks,
        pass,
    })
}
