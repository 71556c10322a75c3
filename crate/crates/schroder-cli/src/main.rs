//! Command-line front door for the composition-operator toolkit.
//!
//! Subcommands map one-to-one onto the library pipeline: validate and
//! classify a rational self-map of the disc, build the Koenigs
//! eigenfunction and the spectral projections, solve the non-homogeneous
//! Schroeder equation, report the spectrum, and run the verification
//! suites. All input and output is UTF-8 JSON; exit codes separate usage
//! errors (1), domain rejections (2), and numerical failures (3) so CI
//! scripts can branch on the failure class. Reports carry no timestamps
//! and fix every summation order, so identical invocations produce
//! byte-identical output.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use schroder::{
    build_koenigs, build_projection_family, contour_verify, hardy_membership, hurst_reference,
    resolve, resolve_at_eigenvalue, resolve_superattracting, sample_grid, spectrum_report,
    ClassKind, Error, FunctionRep, RationalFunction, SchroederData, SolveMode, SolveRequest,
    Tolerances, TruncatedPowerSeries, WeightedHardyParams, COMPACTNESS_RADII, COMPACTNESS_SAMPLES,
};

use input::{parse_complex_pair, parse_function, parse_symbol, parse_tol_override};
use report::{
    emit, CheckRow, Failure, HardyOut, KoenigsReport, ProjectReport, SampleOut, SeriesOut,
    SolveReport, VerifyReport,
};

/// Verification thresholds. The eigenfunction normalization is exact up to
/// a handful of rounding steps; the algebraic identities inherit the
/// conditioning of the functional rows, so their indices are capped below.
const KAPPA_NORMALIZATION_TOL: f64 = 1e-12;
const EIGEN_RELATION_TOL: f64 = 1e-9;
const BIORTHOGONALITY_TOL: f64 = 1e-9;
const PROJECTION_ALGEBRA_TOL: f64 = 1e-9;
const CONTOUR_TOL: f64 = 1e-6;
/// Indices above these grow divisor products past what an absolute
/// threshold can survive in double precision.
const ALGEBRA_INDEX_CAP: usize = 6;
const EIGEN_RELATION_CAP: usize = 4;
const CONTOUR_INDEX_CAP: usize = 2;
const CONTOUR_NODES: usize = 256;

#[derive(Parser)]
#[command(
    name = "schroder",
    version,
    about = "Spectral analysis of composition operators on the unit disc",
    long_about = "Spectral analysis of composition operators C f = f(phi) for rational \
self-maps phi of the unit disc: classification, Koenigs eigenfunction, rank-one spectral \
projections, the non-homogeneous Schroeder equation, spectrum and compactness reports, \
and numerical verification suites.\n\nMaps and functions are JSON, passed inline, as \
@path, or as - for stdin. Rational form: {\"num\":[[re,im],...],\"den\":[[re,im],...]} \
with coefficients in ascending degree order. Right sides may also be a series: \
{\"series\":{\"center\":[re,im],\"coeffs\":[[re,im],...]}}."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Shared truncation order for every series in the run (at least 8).
    #[arg(long, global = true, default_value_t = 64, value_name = "N")]
    order: usize,

    /// Largest projection and eigenvalue index built (at most order/2;
    /// defaults to min(12, order/2)).
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<usize>,

    /// Override a named tolerance, e.g. solver_residual=1e-6. Repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Compact single-line JSON.
    Json,
    /// Indented JSON.
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Return the solution's coefficient table about the fixed point.
    Series,
    /// Skip the series; the solution is audited pointwise only.
    Pointwise,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Koenigs,
    Projections,
    Contour,
    All,
}

impl Suite {
    fn covers(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Koenigs => "koenigs",
            Suite::Projections => "projections",
            Suite::Contour => "contour",
            Suite::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a rational self-map and print its classification.
    Analyze {
        /// Map JSON (inline, @path, or -).
        symbol: String,
    },
    /// Print the Koenigs eigenfunction coefficient table.
    Koenigs {
        symbol: String,
    },
    /// Apply one spectral projection to a function.
    Project {
        symbol: String,
        /// Projection index.
        #[arg(long)]
        n: usize,
        /// Function to project (rational or series JSON).
        #[arg(long, value_name = "FUNCTION")]
        f: String,
    },
    /// Solve lambda f - f(phi) = g.
    #[command(group(
        ArgGroup::new("spectral_parameter").required(true).args(["lambda", "eigen_n"])
    ))]
    Solve {
        symbol: String,
        /// Spectral parameter RE,IM; values on the eigenvalue ladder are
        /// rejected (use --eigen-n for those).
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Solve at the eigenvalue of this index instead; g must have no
        /// component along the matching eigenfunction.
        #[arg(long, value_name = "N")]
        eigen_n: Option<usize>,
        /// Right side g (rational or series JSON).
        #[arg(long, value_name = "FUNCTION")]
        g: String,
        #[arg(long, value_enum, default_value_t = Mode::Series)]
        mode: Mode,
        /// Evaluate the solution at this point, RE,IM. Repeatable.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Report the operator spectrum and compactness verdict.
    Spectrum {
        symbol: String,
        /// Append a contour-quadrature check of the projection at this
        /// index. Repeatable.
        #[arg(long, value_name = "N")]
        contour: Vec<usize>,
    },
    /// Run the numerical verification suites; exits 3 when a check fails.
    Verify {
        symbol: String,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Weighted Hardy space membership for a power of the eigenfunction.
    Hardy {
        symbol: String,
        /// Weight exponent, at most 0; 0 is the classical Hardy space.
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Eigenfunction power under test.
        #[arg(long)]
        p: usize,
        /// Coefficients entering the growth estimate (at least 1000). The
        /// eigenfunction is built at order max(--order, this value).
        #[arg(long, default_value_t = 1024, value_name = "K")]
        truncation_k: usize,
    },
    /// Estimate sup |phi| over the disc and decide compactness.
    Compactness {
        symbol: String,
    },
}

struct Ctx {
    order: usize,
    max_n: usize,
    tol: Tolerances,
    pretty: bool,
    output: Option<PathBuf>,
}

impl Ctx {
    fn output(&self) -> Option<&Path> {
        self.output.as_deref()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let pretty = matches!(cli.format, Format::Pretty);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprint!("{}", report::render_error(&failure, pretty));
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let Cli {
        command,
        order,
        max_n,
        tol: overrides,
        format,
        output,
    } = cli;
    if order < 8 {
        return Err(Failure::usage(format!(
            "--order {order} is below the minimum 8"
        )));
    }
    let max_n = max_n.unwrap_or_else(|| (order / 2).min(12));
    if max_n < 1 || max_n > order / 2 {
        return Err(Failure::usage(format!(
            "--max-n {max_n} must lie in 1..={} (half of --order {order})",
            order / 2
        )));
    }
    let mut tol = Tolerances::default();
    for spec in &overrides {
        let (name, value) = parse_tol_override(spec)?;
        tol.set(name, value)
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let ctx = Ctx {
        order,
        max_n,
        tol,
        pretty: matches!(format, Format::Pretty),
        output,
    };
    match command {
        Command::Analyze { symbol } => cmd_analyze(&ctx, &symbol),
        Command::Koenigs { symbol } => cmd_koenigs(&ctx, &symbol),
        Command::Project { symbol, n, f } => cmd_project(&ctx, &symbol, n, &f),
        Command::Solve {
            symbol,
            lambda,
            eigen_n,
            g,
            mode,
            at,
        } => cmd_solve(&ctx, &symbol, lambda.as_deref(), eigen_n, &g, mode, &at),
        Command::Spectrum { symbol, contour } => cmd_spectrum(&ctx, &symbol, &contour),
        Command::Verify { symbol, suite } => cmd_verify(&ctx, &symbol, suite),
        Command::Hardy {
            symbol,
            a,
            p,
            truncation_k,
        } => cmd_hardy(&ctx, &symbol, a, p, truncation_k),
        Command::Compactness { symbol } => cmd_compactness(&ctx, &symbol),
    }
}

fn cmd_analyze(ctx: &Ctx, symbol_arg: &str) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let classification = symbol.classify(&ctx.tol)?;
    emit(&classification, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_koenigs(ctx: &Ctx, symbol_arg: &str) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let kd = build_koenigs(&symbol, ctx.order, 1, &ctx.tol)?;
    let report = KoenigsReport {
        alpha: kd.alpha(),
        lambda1: kd.lambda1(),
        order: kd.order(),
        eval_radius: kd.eval_radius(),
        coefficients: kd.kappa().coeffs().to_vec(),
    };
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_project(ctx: &Ctx, symbol_arg: &str, n: usize, f_arg: &str) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let f = parse_function(f_arg, &ctx.tol)?;
    let kd = build_koenigs(&symbol, ctx.order, ctx.max_n, &ctx.tol)?;
    let pf = build_projection_family(&kd, ctx.max_n)?;
    let fs = f.taylor_at(kd.alpha(), ctx.order, &ctx.tol)?;
    let functional_value = pf.functional_value(n, &fs)?;
    let projection = pf.apply_projection(n, &fs)?;
    let report = ProjectReport {
        n,
        lambda_n: kd.eigenvalue(n),
        functional_value,
        functional_row: pf.functional_row(n)?.to_vec(),
        projection: SeriesOut::from(&projection),
    };
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_solve(
    ctx: &Ctx,
    symbol_arg: &str,
    lambda_arg: Option<&str>,
    eigen_n: Option<usize>,
    g_arg: &str,
    mode: Mode,
    at: &[String],
) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let g = parse_function(g_arg, &ctx.tol)?;
    let solve_mode = match mode {
        Mode::Series => SolveMode::SeriesOutput,
        Mode::Pointwise => SolveMode::PointwiseOutput,
    };
    let points = at
        .iter()
        .map(|s| parse_complex_pair(s, "--at"))
        .collect::<Result<Vec<_>, _>>()?;
    let classification = symbol.classify(&ctx.tol)?;
    let (lambda, result) = match classification.kind {
        ClassKind::Schroeder => {
            let data = SchroederData::build(&symbol, ctx.order, ctx.max_n, &ctx.tol)?;
            match (lambda_arg, eigen_n) {
                (Some(raw), None) => {
                    let lambda = parse_complex_pair(raw, "--lambda")?;
                    let result = resolve(
                        &data,
                        &SolveRequest {
                            lambda,
                            g,
                            mode: solve_mode,
                        },
                    )?;
                    (lambda, result)
                }
                (None, Some(n)) => {
                    let result = resolve_at_eigenvalue(&data, n, &g, solve_mode)?;
                    (data.koenigs().eigenvalue(n), result)
                }
                _ => unreachable!("clap enforces exactly one spectral parameter"),
            }
        }
        ClassKind::Superattracting => {
            if eigen_n.is_some() {
                return Err(Error::WrongClassification {
                    expected: "schroeder",
                    found: "superattracting",
                }
                .into());
            }
            let raw = lambda_arg.expect("clap enforces exactly one spectral parameter");
            let lambda = parse_complex_pair(raw, "--lambda")?;
            let result = resolve_superattracting(
                &symbol,
                ctx.order,
                &ctx.tol,
                &SolveRequest {
                    lambda,
                    g,
                    mode: solve_mode,
                },
            )?;
            (lambda, result)
        }
        ClassKind::Automorphism => return Err(Error::AutomorphismSymbol.into()),
        ClassKind::NoInteriorFixedPoint => return Err(Error::NoInteriorFixedPoint.into()),
    };
    let samples = points
        .iter()
        .map(|&z| {
            Ok(SampleOut {
                z,
                value: result.evaluator.eval(z)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = SolveReport {
        lambda,
        mode: match mode {
            Mode::Series => "series",
            Mode::Pointwise => "pointwise",
        },
        eigen_n,
        diagnostics: result.diagnostics,
        series: result.series.as_ref().map(SeriesOut::from),
        samples,
    };
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_spectrum(ctx: &Ctx, symbol_arg: &str, contour: &[usize]) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let mut report = spectrum_report(&symbol, ctx.max_n, &ctx.tol)?;
    if !contour.is_empty() {
        let data = SchroederData::build(&symbol, ctx.order, ctx.max_n, &ctx.tol)?;
        let f = probe_function(&ctx.tol)?;
        let zs = sample_grid(
            data.koenigs().alpha(),
            0.5 * data.koenigs().eval_radius(),
            4,
        );
        for &n in contour {
            report
                .contour_checks
                .push(contour_verify(&data, n, &f, &zs, CONTOUR_NODES, None)?);
        }
    }
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_verify(ctx: &Ctx, symbol_arg: &str, suite: Suite) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let data = SchroederData::build(&symbol, ctx.order, ctx.max_n, &ctx.tol)?;
    let kd = data.koenigs();
    let pf = data.projections();
    let probe = probe_function(&ctx.tol)?;
    let probe_series = probe.taylor_at(kd.alpha(), ctx.order, &ctx.tol)?;
    let mut checks = Vec::new();

    if suite.covers(Suite::Koenigs) {
        let (c0, c1) = kd.kappa_zero_check();
        checks.push(CheckRow::new(
            "kappa_normalization",
            c0.max(c1),
            KAPPA_NORMALIZATION_TOL,
        ));
        let grid = sample_grid(kd.alpha(), 0.8 * kd.eval_radius(), 50);
        let mut worst: f64 = 0.0;
        for n in 1..=ctx.max_n.min(EIGEN_RELATION_CAP) {
            worst = worst.max(kd.eigen_relation_residual(&symbol, n, &grid)?);
        }
        checks.push(CheckRow::new("eigen_relation", worst, EIGEN_RELATION_TOL));
    }

    if suite.covers(Suite::Projections) {
        let cap = ctx.max_n.min(ALGEBRA_INDEX_CAP);
        let mut worst: f64 = 0.0;
        for n in 0..=cap {
            for m in 0..=cap {
                let value = pf.functional_value(n, kd.kappa_power(m)?)?;
                let expected = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((value - Complex64::new(expected, 0.0)).norm());
            }
        }
        checks.push(CheckRow::new("biorthogonality", worst, BIORTHOGONALITY_TOL));

        // The algebraic identities hold to relative precision: the output
        // lives on an eigenfunction power whose high-order coefficients can
        // be large, so deviations are measured against that scale.
        let zero = TruncatedPowerSeries::zero(kd.alpha(), ctx.order);
        let mut worst: f64 = 0.0;
        for n in 0..=cap {
            let pn = pf.apply_projection(n, &probe_series)?;
            for m in 0..=cap {
                let pm_pn = pf.apply_projection(m, &pn)?;
                let expect = if m == n { &pn } else { &zero };
                let scale = kd.kappa_power(m)?.max_coeff_norm().max(1.0);
                worst = worst.max(pm_pn.sub(expect)?.max_coeff_norm() / scale);
            }
        }
        checks.push(CheckRow::new(
            "projection_idempotency",
            worst,
            PROJECTION_ALGEBRA_TOL,
        ));

        let composed = probe_series.compose(data.phi_series(), ctx.tol.compose_center)?;
        let mut worst: f64 = 0.0;
        for n in 0..=cap {
            let left = pf.apply_projection(n, &composed)?;
            let right = pf.apply_projection(n, &probe_series)?.scale(kd.eigenvalue(n));
            let scale = kd.kappa_power(n)?.max_coeff_norm().max(1.0);
            worst = worst.max(left.sub(&right)?.max_coeff_norm() / scale);
        }
        checks.push(CheckRow::new(
            "projection_commutation",
            worst,
            PROJECTION_ALGEBRA_TOL,
        ));
    }

    if suite.covers(Suite::Contour) {
        let zs = sample_grid(kd.alpha(), 0.5 * kd.eval_radius(), 4);
        let mut worst: f64 = 0.0;
        for n in 0..=ctx.max_n.min(CONTOUR_INDEX_CAP) {
            let check = contour_verify(&data, n, &probe, &zs, CONTOUR_NODES, None)?;
            worst = worst.max(check.max_error);
        }
        checks.push(CheckRow::new("contour_projection", worst, CONTOUR_TOL));
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        suite: suite.name(),
        order: ctx.order,
        max_n: ctx.max_n,
        checks,
        all_pass,
    };
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(if all_pass { 0 } else { 3 })
}

fn cmd_hardy(
    ctx: &Ctx,
    symbol_arg: &str,
    a: f64,
    p: usize,
    truncation_k: usize,
) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let params = WeightedHardyParams { a, truncation_k };
    params.validate()?;
    let kd = build_koenigs(&symbol, ctx.order.max(truncation_k), 1, &ctx.tol)?;
    let membership = hardy_membership(&kd, p, &params, &ctx.tol)?;
    let essential_radius_reference = match hurst_reference(&symbol, a, ctx.max_n, &ctx.tol) {
        Ok(reference) => Some(reference),
        Err(Error::NotRealMultiplier { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let report = HardyOut {
        membership,
        essential_radius_reference,
    };
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

fn cmd_compactness(ctx: &Ctx, symbol_arg: &str) -> Result<u8, Failure> {
    let symbol = parse_symbol(symbol_arg, &ctx.tol)?;
    let report = symbol.compactness_probe(&COMPACTNESS_RADII, COMPACTNESS_SAMPLES, &ctx.tol)?;
    emit(&report, ctx.pretty, ctx.output())?;
    Ok(0)
}

/// Fixed probe used by the verification checks: holomorphic well past the
/// closed disc, nonconstant, with a nonreal coefficient so no projection
/// component vanishes by accident.
fn probe_function(tol: &Tolerances) -> Result<FunctionRep, Error> {
    let f = RationalFunction::new(
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.25, 0.25)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0)],
        tol.pole_margin,
        tol.common_root,
    )?;
    Ok(FunctionRep::Rational(f))
}
