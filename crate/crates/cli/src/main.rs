//! Command-line front end: build algebras, enumerate families, run the
//! verification suites, classify, extend and export JSON artifacts.

mod io;
mod verify;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use drx_core::dynr::{classify_from_samples, eval_r, RMatrixFamily, SamplePolicy};
use drx_core::json::{
    classification_to_dto, family_to_dto, multivector_from_dto, multivector_to_dto, subspace_from_dto,
    subspace_to_dto, ComplexDto, RSampleDto, RSamplesDto, SubspaceDto,
};
use drx_core::lagrangian::{build_l, extend_from_point};
use drx_core::rootsys::{build_algebra, CartanType};
use drx_core::CoreError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "drx", version, about = "dynamical r-matrices, Lagrangian subalgebras and Dirac structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect constructed algebras
    Algebra {
        #[command(subcommand)]
        sub: AlgebraCommand,
    },
    /// Run the verification suite for one family or all subsets S
    Verify(VerifyArgs),
    /// Classify a subspace or sampled r-matrix JSON back to (S, lambda0)
    Classify {
        /// Input file: a subspace dump or an r-samples dump
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a Lagrangian subalgebra to the dynamical family through it
    Extend {
        /// Subspace JSON with diagonal intersection h
        #[arg(long)]
        input: PathBuf,
        /// Base point mu, comma-separated complex coordinates
        #[arg(long)]
        mu: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export JSON artifacts (family, subspace, r-samples)
    Export(ExportArgs),
}

#[derive(Debug, Subcommand)]
enum AlgebraCommand {
    /// Dump basis labels, roots, exact structure constants and Killing form
    Info {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    algebra: String,
    /// Comma-separated 1-based simple-root indices ("" for the empty set)
    #[arg(long, conflicts_with = "all_s")]
    s: Option<String>,
    /// Verify every subset of simple roots
    #[arg(long)]
    all_s: bool,
    /// Fixed lambda0 (comma-separated complex); sampled when absent
    #[arg(long)]
    lambda0: Option<String>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Generic lambda samples per family
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// lambda0 draws per subset (ignored when --lambda0 is given)
    #[arg(long, default_value_t = 5)]
    lambda0_samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol_residual: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_weight: f64,
    #[arg(long, default_value_t = 1e-12)]
    tol_isotropy: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_courant: f64,
    /// Inject the falsification perturbation r -> r + 0.01 E_{a1}^E_{a2}
    #[arg(long)]
    perturb: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// What to export: family | subspace | rsamples
    #[arg(long)]
    what: String,
    #[arg(long)]
    algebra: String,
    #[arg(long, default_value = "")]
    s: String,
    /// lambda0, comma-separated complex; zero when absent
    #[arg(long)]
    lambda0: Option<String>,
    /// Sample count for rsamples
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // classification/verification failures exit 1; config errors 2
            let code = match err.downcast_ref::<CoreError>() {
                Some(
                    CoreError::NotTransverse(_)
                    | CoreError::NotDynamical(_)
                    | CoreError::NotClassifiable(_)
                    | CoreError::NearPole { .. }
                    | CoreError::CayleyPole { .. }
                    | CoreError::JetMissing(_),
                ) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Algebra { sub } => match sub {
            AlgebraCommand::Info { algebra, out } => {
                let alg = build_algebra(CartanType::parse(&algebra)?)?;
                io::write_json(&drx_core::json::algebra_dump(&alg), out.as_deref())?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Verify(args) => cmd_verify(args),
        Command::Classify { input, out } => cmd_classify(&input, out.as_deref()),
        Command::Extend { input, mu, out } => cmd_extend(&input, &mu, out.as_deref()),
        Command::Export(args) => cmd_export(args),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let alg = build_algebra(CartanType::parse(&args.algebra)?)?;
    let subsets: Vec<Vec<usize>> = if args.all_s {
        (0..(1u32 << alg.rank))
            .map(|mask| (0..alg.rank).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        let s = args.s.as_deref().unwrap_or("");
        vec![io::parse_s(s, alg.rank)?]
    };
    let fixed_lambda0 = match &args.lambda0 {
        Some(text) => Some(io::parse_complex_vec(text, alg.rank)?),
        None => None,
    };
    if args.perturb && alg.rank < 2 {
        bail!("--perturb needs rank >= 2 (it adds 0.01 E_{{a1}}^E_{{a2}})");
    }
    let counts = verify::SampleCounts {
        lambda: args.samples.max(3),
        lambda0: args.lambda0_samples.max(1),
        dirac: 3,
    };
    let tols = verify::Tolerances {
        residual: args.tol_residual,
        weight: args.tol_weight,
        isotropy: args.tol_isotropy,
        fd: args.tol_fd,
        courant: args.tol_courant,
    };
    for t in [tols.residual, tols.weight, tols.isotropy, tols.fd, tols.courant] {
        if !(t > 0.0) {
            bail!("tolerances must be positive");
        }
    }
    let report = verify::run_verify(&alg, &subsets, fixed_lambda0, args.seed, counts, tols, args.perturb)?;
    io::write_json(&report, args.out.as_deref())?;
    if report.pass {
        eprintln!("verify: {} checks passed", report.checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let first = report.first_failure().expect("some check failed");
        eprintln!(
            "verify: FAILED {} of {} checks (first: {} value {:.3e} tolerance {:.3e})",
            failed.len(),
            report.checks.len(),
            first.name,
            first.value,
            first.tolerance
        );
        Ok(ExitCode::from(1))
    }
}

fn cmd_classify(input: &std::path::Path, out: Option<&std::path::Path>) -> Result<ExitCode> {
    let value = io::read_json_value(input)?;
    let algebra: CartanType = serde_json::from_value(
        value
            .get("algebra")
            .cloned()
            .ok_or_else(|| anyhow!("input has no \"algebra\" field"))?,
    )
    .context("parsing algebra spec")?;
    let alg = build_algebra(algebra)?;
    let cls = if value.get("basis").is_some() {
        let dto: SubspaceDto = serde_json::from_value(value).context("parsing subspace")?;
        let w = subspace_from_dto(&alg, &dto)?;
        drx_core::lagrangian::classify_subspace(&alg, &w, 1e-8)?
    } else if value.get("samples").is_some() {
        let dto: RSamplesDto = serde_json::from_value(value).context("parsing r-samples")?;
        let samples: Vec<(Vec<num::complex::Complex64>, drx_core::MultiVector<num::complex::Complex64>)> = dto
            .samples
            .iter()
            .map(|s| {
                let lam: Vec<num::complex::Complex64> = s.lambda.iter().map(|&z| z.into()).collect();
                let r = multivector_from_dto(&alg, &s.r)?;
                Ok((lam, r))
            })
            .collect::<drx_core::Result<_>>()?;
        classify_from_samples(&alg, &samples, 1e-9)?
    } else {
        bail!("input is neither a subspace (\"basis\") nor an r-samples (\"samples\") dump");
    };
    io::write_json(&classification_to_dto(&alg, &cls), out)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, serde::Serialize)]
struct ExtendOutput {
    family: drx_core::json::FamilyDto,
    verification_angle: f64,
    pass: bool,
}

fn cmd_extend(input: &std::path::Path, mu: &str, out: Option<&std::path::Path>) -> Result<ExitCode> {
    let value = io::read_json_value(input)?;
    let dto: SubspaceDto = serde_json::from_value(value).context("parsing subspace")?;
    let alg = build_algebra(dto.algebra)?;
    let mu = io::parse_complex_vec(mu, alg.rank)?;
    let w0 = subspace_from_dto(&alg, &dto)?;
    let (fam, angle) = extend_from_point(&alg, &w0, &mu)?;
    let output = ExtendOutput { family: family_to_dto(&fam), verification_angle: angle, pass: angle <= 1e-9 };
    io::write_json(&output, out)?;
    if output.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("extend: verification angle {angle:.3e} exceeds 1e-9");
        Ok(ExitCode::from(1))
    }
}

fn cmd_export(args: ExportArgs) -> Result<ExitCode> {
    let alg = build_algebra(CartanType::parse(&args.algebra)?)?;
    let s = io::parse_s(&args.s, alg.rank)?;
    let lambda0 = match &args.lambda0 {
        Some(text) => io::parse_complex_vec(text, alg.rank)?,
        None => vec![num::complex::Complex64::new(0.0, 0.0); alg.rank],
    };
    match args.what.as_str() {
        "family" => {
            let fam = RMatrixFamily::new(&alg, &s, lambda0, None)?;
            io::write_json(&family_to_dto(&fam), args.out.as_deref())?;
        }
        "subspace" => {
            let w = build_l(&alg, &s, &lambda0)?;
            io::write_json(&subspace_to_dto(&alg, &w), args.out.as_deref())?;
        }
        "rsamples" => {
            let fam = RMatrixFamily::new(&alg, &s, lambda0, None)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let policy = SamplePolicy::default();
            let mut samples = Vec::new();
            for _ in 0..args.samples.max(2) {
                let l = policy.sample_lambda(&mut rng, &alg, Some(&fam))?;
                let r = eval_r(&alg, &fam, &l)?;
                samples.push(RSampleDto {
                    lambda: l.iter().map(|&z| ComplexDto::from(z)).collect(),
                    r: multivector_to_dto(&r),
                });
            }
            io::write_json(&RSamplesDto { algebra: alg.cartan_type, samples }, args.out.as_deref())?;
        }
        other => bail!("unknown export kind {other:?} (expected family | subspace | rsamples)"),
    }
    Ok(ExitCode::SUCCESS)
}
