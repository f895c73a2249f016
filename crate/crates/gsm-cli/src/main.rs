//! `gsm` — evaluate the exponential kernel, CK-extensions and the
//! coherent-state transform at points, run the verification suites, and
//! emit machine-diffable reports and plot data.
//!
//! Exit codes are a stable contract: 0 pass, 1 check failure, 2 usage,
//! 3 outside the quadrature validity region, 4 capability exceeded,
//! 5 resource limit.

mod output;
mod parse;
mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsm_core::bargmann::{
    segal_bargmann, segal_bargmann_ck_route, GsmFunction, SuiteOrders, TransformCtrl,
};
use gsm_core::ck::{ck_hermite_gaussian, ck_polynomial, kernel_e, CkCtrl, CkRoute};
use gsm_core::clifford::{Multivector, Signature, SplitPoint};
use gsm_core::function_algebra::{phi_k, CliffordPolynomial, HermiteGaussian};
use output::{multivector_csv, multivector_json, multivector_lines, ConfigEcho, SuiteReport};
use parse::{parse_field_spec, parse_float_list, parse_grid_spec, parse_input_spec, FieldSpec, GridVar, InputSpec};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "gsm",
    version,
    about = "Kernel, CK-extension and coherent-state transform evaluator with verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the exponential kernel e(bx, xi) at a point
    EvalKernel(EvalArgs),
    /// Evaluate a CK-extension at a point
    CkEval(CkEvalArgs),
    /// Evaluate the coherent-state transform or the psi basis at a point
    TransformEval(TransformEvalArgs),
    /// Run a named verification suite and write its report
    Verify(VerifyArgs),
    /// Sample a field on a coordinate grid and emit CSV rows
    PlotData(PlotArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Paravector part dimension minus one: x lives in R^{p+1}
    #[arg(long, default_value_t = 0)]
    p: usize,
    /// Slice part dimension: y lives in R^q
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Coordinates x_0..x_p, comma separated (default zeros)
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Coordinates y_1..y_q, comma separated (default zeros)
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Frequency vector xi_0..xi_p, comma separated (default zeros)
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<String>,
    /// Override the headline tolerance of a verification suite
    #[arg(long)]
    tol: Option<f64>,
    /// Nodes per axis of the position-space rule
    #[arg(long, default_value_t = 40)]
    x_order: usize,
    /// Nodes per axis of the frequency-space rule
    #[arg(long, default_value_t = 60)]
    xi_order: usize,
    /// Half-line nodes of the radial rule
    #[arg(long, default_value_t = 80)]
    radial_order: usize,
    /// Resolution of the sphere rule
    #[arg(long, default_value_t = 16)]
    sphere_order: usize,
    /// Seed of the chacha8 point generator (echoed in reports)
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output format (eval commands default to a plain blade table)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also write the output to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Print zero blades too
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct CkEvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary data: monomial:k | monomial-gaussian:k | hermite:k | psi:k
    #[arg(long)]
    input: String,
    /// Evaluation route for Gaussian-weighted data
    #[arg(long, value_enum, default_value_t = RouteArg::Delta)]
    route: RouteArg,
    /// Print zero blades too
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct TransformEvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Input: hermite:k | monomial-gaussian:k (transformed) | psi:k (basis)
    #[arg(long)]
    input: String,
    /// Transform route
    #[arg(long, value_enum, default_value_t = RouteArg::Fourier)]
    route: RouteArg,
    /// Print zero blades too
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which suite to run
    #[arg(value_enum)]
    suite: Suite,
    /// Largest total degree of the basis indices in the gram suites
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Field to sample: psi:k | kernel
    #[arg(long)]
    field: String,
    /// Grid spec: var=min:max:count[,var=...] with vars x0..xp and r
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum RouteArg {
    /// Laplacian series
    Delta,
    /// Frequency-space integral
    Fourier,
    /// Heat flow then CK series (transforms only)
    Ck,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Suite {
    Clifford,
    Kernel,
    Ck,
    Quadrature,
    Isometry,
    Basis,
    Schrodinger,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Kernel => "kernel",
            Suite::Ck => "ck",
            Suite::Quadrature => "quadrature",
            Suite::Isometry => "isometry",
            Suite::Basis => "basis",
            Suite::Schrodinger => "schrodinger",
            Suite::All => "all",
        }
    }
}

/// Failures mapped onto the stable exit-code contract.
enum CliError {
    Usage(String),
    Check(String),
    Region(String),
    Capability(String),
    Resource(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
            CliError::Region(_) => 3,
            CliError::Capability(_) => 4,
            CliError::Resource(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Check(m)
            | CliError::Region(m)
            | CliError::Capability(m)
            | CliError::Resource(m) => m,
        }
    }
}

impl From<gsm_core::Error> for CliError {
    fn from(e: gsm_core::Error) -> Self {
        match e {
            gsm_core::Error::RegionExceeded(_, _) => CliError::Region(e.to_string()),
            gsm_core::Error::Capability(_) => CliError::Capability(e.to_string()),
            other => CliError::Check(other.to_string()),
        }
    }
}

fn main() {
    // GSM_NUM_WORKERS caps the rayon pool; reductions are order-fixed, so
    // any worker count yields identical bytes.
    if let Ok(v) = std::env::var("GSM_NUM_WORKERS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::EvalKernel(args) => cmd_eval_kernel(args),
        Cmd::CkEval(args) => cmd_ck_eval(args),
        Cmd::TransformEval(args) => cmd_transform_eval(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::PlotData(args) => cmd_plot_data(args),
    }
}

fn signature(common: &CommonArgs) -> Result<Signature, CliError> {
    Ok(Signature::new(common.p, common.q)?)
}

fn point(common: &CommonArgs, sig: Signature) -> Result<SplitPoint, CliError> {
    let x = match &common.x {
        Some(s) => parse_float_list(s).map_err(CliError::Usage)?,
        None => vec![0.0; sig.p() + 1],
    };
    let y = match &common.y {
        Some(s) => parse_float_list(s).map_err(CliError::Usage)?,
        None => vec![0.0; sig.q()],
    };
    if x.len() != sig.p() + 1 {
        return Err(CliError::Usage(format!(
            "--x needs p + 1 = {} coordinates, got {}",
            sig.p() + 1,
            x.len()
        )));
    }
    if y.len() != sig.q() {
        return Err(CliError::Usage(format!(
            "--y needs q = {} coordinates, got {}",
            sig.q(),
            y.len()
        )));
    }
    Ok(SplitPoint::new(sig, x, y))
}

fn frequency(common: &CommonArgs, sig: Signature) -> Result<Vec<f64>, CliError> {
    let xi = match &common.xi {
        Some(s) => parse_float_list(s).map_err(CliError::Usage)?,
        None => vec![0.0; sig.p() + 1],
    };
    if xi.len() != sig.p() + 1 {
        return Err(CliError::Usage(format!(
            "--xi needs p + 1 = {} coordinates, got {}",
            sig.p() + 1,
            xi.len()
        )));
    }
    Ok(xi)
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    print!("{text}");
    std::io::stdout().flush().ok();
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| CliError::Check(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn emit_value(
    mv: &Multivector,
    common: &CommonArgs,
    all: bool,
    route: Option<&str>,
) -> Result<(), CliError> {
    if let Some(route) = route {
        eprintln!("route: {route}");
    }
    let text = match common.format {
        None => {
            let mut t = multivector_lines(mv, all).join("\n");
            t.push('\n');
            t
        }
        Some(Format::Json) => {
            let mut value = multivector_json(mv, all);
            if let Some(route) = route {
                value["route"] = serde_json::Value::String(route.to_string());
            }
            let mut t = serde_json::to_string_pretty(&value).expect("json");
            t.push('\n');
            t
        }
        Some(Format::Csv) => multivector_csv(mv, all),
    };
    emit(&text, &common.out)
}

fn cmd_eval_kernel(args: EvalArgs) -> Result<(), CliError> {
    let sig = signature(&args.common)?;
    let bx = point(&args.common, sig)?;
    let xi = frequency(&args.common, sig)?;
    let value = kernel_e(&bx, &xi);
    emit_value(&value, &args.common, args.all, None)
}

fn cmd_ck_eval(args: CkEvalArgs) -> Result<(), CliError> {
    let sig = signature(&args.common)?;
    let bx = point(&args.common, sig)?;
    let spec = parse_input_spec(&args.input, sig.p() + 1).map_err(CliError::Usage)?;
    let ctrl = CkCtrl {
        xi_order: args.common.xi_order,
        ..CkCtrl::default()
    };
    let (value, route) = match spec {
        InputSpec::Monomial(k) => {
            let f0 = CliffordPolynomial::scalar_monomial(sig, k);
            (ck_polynomial(&f0, &bx), "finite-series")
        }
        InputSpec::MonomialGaussian(k) | InputSpec::Psi(k) => {
            let f0 = HermiteGaussian::monomial_gaussian(sig, k, 0.25);
            ck_route_eval(&f0, &bx, args.route, &ctrl)?
        }
        InputSpec::Hermite(k) => {
            let f0 = phi_k(sig, &k);
            ck_route_eval(&f0, &bx, args.route, &ctrl)?
        }
    };
    emit_value(&value, &args.common, args.all, Some(route))
}

fn ck_route_eval(
    f0: &HermiteGaussian,
    bx: &SplitPoint,
    route: RouteArg,
    ctrl: &CkCtrl,
) -> Result<(Multivector, &'static str), CliError> {
    match route {
        RouteArg::Fourier => Ok((
            ck_hermite_gaussian(f0, bx, CkRoute::Fourier, ctrl)?,
            "frequency-integral",
        )),
        _ => Ok((
            ck_hermite_gaussian(f0, bx, CkRoute::DeltaSeries, ctrl)?,
            "laplacian-series",
        )),
    }
}

fn cmd_transform_eval(args: TransformEvalArgs) -> Result<(), CliError> {
    let sig = signature(&args.common)?;
    let bx = point(&args.common, sig)?;
    let spec = parse_input_spec(&args.input, sig.p() + 1).map_err(CliError::Usage)?;
    let ctrl = TransformCtrl {
        xi_order: args.common.xi_order,
        ..TransformCtrl::default()
    };
    let (value, route) = match spec {
        InputSpec::Psi(k) => {
            let psi = GsmFunction::psi_k(sig, &k, &ctrl.series);
            (psi.eval(&bx), "ck-series")
        }
        InputSpec::Hermite(k) => transform_route_eval(&phi_k(sig, &k), &bx, args.route, &ctrl)?,
        InputSpec::MonomialGaussian(k) => {
            let f = HermiteGaussian::monomial_gaussian(sig, k, 0.25);
            transform_route_eval(&f, &bx, args.route, &ctrl)?
        }
        InputSpec::Monomial(_) => {
            return Err(CliError::Usage(
                "transform-eval needs square-integrable input (hermite:k, monomial-gaussian:k or psi:k)"
                    .to_string(),
            ))
        }
    };
    emit_value(&value, &args.common, args.all, Some(route))
}

fn transform_route_eval(
    f: &HermiteGaussian,
    bx: &SplitPoint,
    route: RouteArg,
    ctrl: &TransformCtrl,
) -> Result<(Multivector, &'static str), CliError> {
    match route {
        RouteArg::Ck => Ok((segal_bargmann_ck_route(f, bx, ctrl)?, "heat-then-ck")),
        _ => Ok((segal_bargmann(f, bx, ctrl)?, "frequency-integral")),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let sig = signature(&args.common)?;
    let cfg = suites::RunCfg {
        sig,
        max_degree: args.max_degree,
        orders: SuiteOrders {
            x_order: args.common.x_order,
            xi_order: args.common.xi_order,
            radial_order: args.common.radial_order,
            sphere_order: args.common.sphere_order,
        },
        tol: args.common.tol,
        seed: args.common.seed,
    };
    let started = Instant::now();
    let mut checks = Vec::new();
    let parts: Vec<Suite> = match args.suite {
        Suite::All => vec![
            Suite::Clifford,
            Suite::Kernel,
            Suite::Ck,
            Suite::Quadrature,
            Suite::Isometry,
            Suite::Basis,
            Suite::Schrodinger,
        ],
        single => vec![single],
    };
    for part in parts {
        let mut part_checks = match part {
            Suite::Clifford => suites::clifford_suite(&cfg)?,
            Suite::Kernel => suites::kernel_suite(&cfg)?,
            Suite::Ck => suites::ck_suite(&cfg)?,
            Suite::Quadrature => suites::quadrature_suite(&cfg)?,
            Suite::Isometry => suites::isometry_suite(&cfg)?,
            Suite::Basis => suites::basis_suite(&cfg)?,
            Suite::Schrodinger => suites::schrodinger_suite(&cfg)?,
            Suite::All => unreachable!(),
        };
        checks.append(&mut part_checks);
    }
    let elapsed = started.elapsed().as_millis();

    let config = ConfigEcho {
        p: sig.p(),
        q: sig.q(),
        max_degree: args.max_degree,
        x_order: cfg.orders.x_order,
        xi_order: cfg.orders.xi_order,
        radial_order: cfg.orders.radial_order,
        sphere_order: cfg.orders.sphere_order,
        tol: args.common.tol,
        seed: args.common.seed,
        generator: "chacha8".to_string(),
    };
    let report = SuiteReport::new(args.suite.name(), config, checks);
    let text = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, &args.common.out)?;
    let passed = report.checks.iter().filter(|c| c.pass).count();
    eprintln!(
        "suite '{}': {passed}/{} checks passed in {elapsed} ms",
        report.suite,
        report.checks.len()
    );
    if report.pass {
        Ok(())
    } else {
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Check(format!(
            "{} check(s) failed: {}",
            failing.len(),
            failing.join(", ")
        )))
    }
}

const MAX_GRID_POINTS: usize = 1_000_000;
const MAX_PLOT_RADIUS: f64 = 12.0;

fn cmd_plot_data(args: PlotArgs) -> Result<(), CliError> {
    let sig = signature(&args.common)?;
    let base = point(&args.common, sig)?;
    let field = parse_field_spec(&args.field, sig.p() + 1).map_err(CliError::Usage)?;
    let axes = parse_grid_spec(&args.grid, sig.p()).map_err(CliError::Usage)?;
    let total: usize = axes.iter().map(|a| a.count).product();
    if total > MAX_GRID_POINTS {
        return Err(CliError::Resource(format!(
            "grid has {total} points, limit is {MAX_GRID_POINTS}"
        )));
    }
    for a in &axes {
        if a.var == GridVar::R && a.min.abs().max(a.max.abs()) > MAX_PLOT_RADIUS {
            return Err(CliError::Capability(format!(
                "radial grid values beyond {MAX_PLOT_RADIUS} are outside the series' validated range"
            )));
        }
    }
    // slice direction: the base point's, or the first slice axis at y = 0
    let omega = base.omega().unwrap_or_else(|| {
        let mut w = vec![0.0; sig.q()];
        w[0] = 1.0;
        w
    });
    let xi = frequency(&args.common, sig)?;
    let psi = match &field {
        FieldSpec::Psi(k) => Some(GsmFunction::psi_k(sig, k, &CkCtrl::default())),
        FieldSpec::Kernel => None,
    };

    let mut header: Vec<String> = (0..=sig.p()).map(|i| format!("x{i}")).collect();
    for j in 1..=sig.q() {
        header.push(format!("y{j}"));
    }
    for mask in 0..sig.dim() {
        header.push(format!("re_{}", output::blade_label(mask)));
        header.push(format!("im_{}", output::blade_label(mask)));
    }
    header.push("abs".to_string());
    let mut text = header.join(",");
    text.push('\n');

    let mut counters = vec![0usize; axes.len()];
    for _ in 0..total {
        let mut x = base.x().to_vec();
        let mut r = base.r();
        for (a, &i) in axes.iter().zip(counters.iter()) {
            match a.var {
                GridVar::X(j) => x[j] = a.value(i),
                GridVar::R => r = a.value(i),
            }
        }
        let y: Vec<f64> = omega.iter().map(|w| r * w).collect();
        let bx = SplitPoint::new(sig, x, y);
        let value = match &field {
            FieldSpec::Psi(_) => psi.as_ref().expect("set above").eval(&bx),
            FieldSpec::Kernel => kernel_e(&bx, &xi),
        };
        let mut row: Vec<String> = bx.x().iter().map(|v| v.to_string()).collect();
        row.extend(bx.y().iter().map(|v| v.to_string()));
        for mask in 0..sig.dim() {
            let c = value.coeff(mask);
            row.push(c.re.to_string());
            row.push(c.im.to_string());
        }
        row.push(value.norm().to_string());
        text.push_str(&row.join(","));
        text.push('\n');

        for a in (0..axes.len()).rev() {
            counters[a] += 1;
            if counters[a] < axes[a].count {
                break;
            }
            counters[a] = 0;
        }
    }
    emit(&text, &args.common.out)
}
