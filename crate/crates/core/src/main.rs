use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperratak::experiments::{self, BENCH_HEADER, DEMO_HEADER};
use hyperratak::grid::{self, fmt_f64, GridJob, GridSpec, Rect};
use hyperratak::padeexp::{pade_exp, unitarity_defect};
use hyperratak::poles::{build_pencil, check_report, PoleCase};
use hyperratak::reference::{OracleConfig, OracleMode};
use hyperratak::{pfq, Cx, Error, EvalOptions, HyperParams, Method, OmegaKind, Status};

const EXIT_BAD_ARGS: u8 = 1;
const EXIT_K_MAX: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperratak", version, about = "Generalized hypergeometric functions by stabilized sequence transformations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate pFq at one point.
    Eval(EvalArgs),
    /// Evaluate on a rectangular grid and write CSV and optional PPM images.
    Grid(GridArgs),
    /// Reciprocal poles of the model pencils and the bound checks, as CSV.
    Poles(PolesArgs),
    /// Diagonal Padé approximation of exp(z).
    PadeExp(PadeArgs),
    /// Direct versus recurrence values per order k, as CSV.
    UnstableDemo(DemoArgs),
    /// Time cursor iteration to fixed orders, as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct SeriesArgs {
    /// Upper parameters, comma separated (complex entries like 1+2i).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    alpha: String,
    /// Lower parameters, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    beta: String,
}

#[derive(Args, Clone)]
struct MethodArgs {
    /// drummond or weniger.
    #[arg(long, default_value = "weniger")]
    method: String,
    /// Remainder estimate: a_n, a_np1, n_gamma_a_n or aitken.
    #[arg(long, default_value = "a_np1")]
    omega: String,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    gamma: f64,
    /// Relative tolerance of the stopping rule [default: 8 eps].
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1 << 20)]
    kmax: usize,
    /// Index of the first partial sum.
    #[arg(long, default_value_t = 0)]
    n: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Argument as re,im.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[command(flatten)]
    method: MethodArgs,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    re_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    re_max: f64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    im_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    im_max: f64,
    #[arg(long, default_value_t = 101)]
    n_re: usize,
    #[arg(long, default_value_t = 101)]
    n_im: usize,
    /// Reference values for rel_err: auto, maclaurin, stable-weniger or none.
    #[arg(long, default_value = "auto")]
    oracle: String,
    /// Output CSV, one row per cell.
    #[arg(long, required_unless_present = "from_csv")]
    out: Option<PathBuf>,
    /// Phase portrait (P6 PPM).
    #[arg(long)]
    ppm: Option<PathBuf>,
    /// Relative error map (P6 PPM).
    #[arg(long)]
    error_ppm: Option<PathBuf>,
    /// Render the images from an existing CSV instead of evaluating; the grid
    /// shape is taken from the file.
    #[arg(long)]
    from_csv: Option<PathBuf>,
}

#[derive(Args)]
struct PolesArgs {
    /// Comma separated cases, or "all".
    #[arg(long, default_value = "all")]
    case: String,
    #[arg(long, default_value = "0,1,2")]
    n: String,
    #[arg(long, default_value = "5,10,20")]
    k: String,
    /// Values of alpha for the 1F0 cases [default: 0.5 for drummond1f0,
    /// -0.5,0.5,0.9 for delta1f0].
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PadeArgs {
    /// Argument as re,im.
    #[arg(long, default_value = "0,1e6", allow_hyphen_values = true)]
    z: String,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 1 << 31)]
    kmax: usize,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value = "-2,0", allow_hyphen_values = true)]
    z: String,
    #[arg(long, default_value_t = 200)]
    k_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Orders to time, comma separated.
    #[arg(long, default_value = "250,500,1000,2000")]
    k: String,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    /// drummond, weniger or both.
    #[arg(long, default_value = "both")]
    method: String,
    /// Argument of the fixed 1F1(5/4; 3/2; z) input.
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    z: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carrying the exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Overflow(_)) { EXIT_OVERFLOW } else { EXIT_BAD_ARGS };
        Fail(code, e.to_string())
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail(EXIT_BAD_ARGS, e.to_string())
    }
}

impl From<csv::Error> for Fail {
    fn from(e: csv::Error) -> Self {
        Fail(EXIT_BAD_ARGS, e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> Fail {
    Fail(EXIT_BAD_ARGS, msg.into())
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Fail> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(format!("bad {what} entry '{t}'"))))
        .collect()
}

fn parse_z(s: &str) -> Result<Cx<f64>, Fail> {
    match list::<f64>(s, "z")?.as_slice() {
        [re] => Ok(Cx::new(*re, 0.0)),
        [re, im] => Ok(Cx::new(*re, *im)),
        _ => Err(bad(format!("z must be re,im, got '{s}'"))),
    }
}

fn parse_params(s: &SeriesArgs) -> Result<HyperParams<f64>, Fail> {
    let alpha = list::<Cx<f64>>(&s.alpha, "alpha")?;
    let beta = list::<Cx<f64>>(&s.beta, "beta")?;
    Ok(HyperParams::new(alpha, beta)?)
}

fn parse_opts(m: &MethodArgs) -> Result<EvalOptions<f64>, Fail> {
    let mut opts = EvalOptions::<f64> {
        method: m.method.parse()?,
        omega: m.omega.parse::<OmegaKind>()?,
        gamma: m.gamma,
        n: m.n,
        k_max: m.kmax,
        ..Default::default()
    };
    if let Some(t) = m.tol {
        if !(t > 0.0) {
            return Err(bad("tol must be positive"));
        }
        opts.tol = t;
    }
    Ok(opts)
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Converged => 0,
        Status::Overflow => EXIT_OVERFLOW,
        Status::KMaxReached | Status::Running => EXIT_K_MAX,
    }
}

fn fmt_cx(z: Cx<f64>) -> String {
    format!("{} {} {}i", fmt_f64(z.re), if z.im.is_sign_negative() { '-' } else { '+' }, fmt_f64(z.im.abs()))
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Fail> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| bad(format!("{}: {e}", p.display())))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_eval(a: &EvalArgs) -> Result<u8, Fail> {
    let params = parse_params(&a.series)?;
    let z = parse_z(&a.z)?;
    let opts = parse_opts(&a.method)?;
    let r = pfq(&params, z, &opts)?;
    println!("value = {}", fmt_cx(r.value));
    println!("k = {}", r.k);
    println!("converged = {}", r.converged);
    println!("err_est = {}", fmt_f64(r.err_est));
    match r.status {
        Status::KMaxReached => eprintln!("warning: k_max reached without convergence"),
        Status::Overflow => eprintln!("warning: overflow, returning the last finite value"),
        _ => {}
    }
    Ok(status_code(r.status))
}

fn parse_oracle(s: &str) -> Result<Option<OracleConfig>, Fail> {
    let mode = match s.to_ascii_lowercase().as_str() {
        "none" => return Ok(None),
        "auto" => OracleMode::Auto,
        "maclaurin" => OracleMode::Maclaurin,
        "stable-weniger" | "weniger" => OracleMode::StableWeniger,
        _ => return Err(bad(format!("unknown oracle '{s}'"))),
    };
    Ok(Some(OracleConfig { mode, ..Default::default() }))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), Fail> {
    std::fs::write(path, bytes).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn cmd_grid(a: &GridArgs) -> Result<u8, Fail> {
    let rect = Rect { re_min: a.re_min, re_max: a.re_max, im_min: a.im_min, im_max: a.im_max };
    let spec = GridSpec::new(rect, a.n_re, a.n_im)?;
    let cells = match &a.from_csv {
        Some(p) => grid::read_csv(File::open(p).map_err(|e| bad(format!("{}: {e}", p.display())))?)?,
        None => {
            let job = GridJob {
                params: parse_params(&a.series)?,
                opts: parse_opts(&a.method)?,
                spec,
                oracle: parse_oracle(&a.oracle)?,
            };
            let cells = grid::run_grid(&job)?;
            grid::write_csv(&cells, output(a.out.as_ref())?)?;
            cells
        }
    };
    let (w, h) = if a.from_csv.is_some() { grid::infer_shape(&cells)? } else { (a.n_re, a.n_im) };
    if let Some(p) = &a.ppm {
        write_file(p, &grid::phase_ppm(&cells, w, h)?)?;
    }
    if let Some(p) = &a.error_ppm {
        write_file(p, &grid::error_ppm(&cells, w, h)?)?;
    }
    let converged = cells.iter().filter(|c| c.status == grid::CellStatus::Converged).count();
    eprintln!("{converged}/{} cells converged", cells.len());
    Ok(0)
}

fn cmd_poles(a: &PolesArgs) -> Result<u8, Fail> {
    let cases: Vec<PoleCase> = if a.case.eq_ignore_ascii_case("all") { PoleCase::ALL.to_vec() } else { list(&a.case, "case")? };
    let ns: Vec<usize> = list(&a.n, "n")?;
    let ks: Vec<usize> = list(&a.k, "k")?;
    let user_alpha: Option<Vec<f64>> = a.alpha.as_deref().map(|s| list(s, "alpha")).transpose()?;
    let mut w = csv::Writer::from_writer(output(a.out.as_ref())?);
    w.write_record(["case", "n", "k", "alpha", "index", "re_zeta", "im_zeta", "bound_lower", "bound_upper", "all_pass", "checks"])?;
    let mut failures = 0;
    for case in cases {
        let alphas: Vec<Option<f64>> = match (case.needs_alpha(), &user_alpha) {
            (false, _) => vec![None],
            (true, Some(v)) => v.iter().copied().map(Some).collect(),
            (true, None) if case == PoleCase::Drummond1F0 => vec![Some(0.5)],
            (true, None) => vec![Some(-0.5), Some(0.5), Some(0.9)],
        };
        for &n in &ns {
            for &k in &ks {
                for &alpha in &alphas {
                    let report = check_report(&build_pencil(case, n, k, alpha)?)?;
                    if !report.all_pass() {
                        failures += 1;
                    }
                    let checks = report
                        .checks
                        .iter()
                        .map(|c| format!("{}={}", c.name, if c.pass { "pass" } else { "fail" }))
                        .collect::<Vec<_>>()
                        .join(";");
                    for (i, zeta) in report.reciprocal_poles.iter().enumerate() {
                        w.write_record([
                            case.to_string(),
                            n.to_string(),
                            k.to_string(),
                            fmt_f64(report.alpha),
                            i.to_string(),
                            fmt_f64(zeta.re),
                            fmt_f64(zeta.im),
                            fmt_f64(report.bound_lower),
                            fmt_f64(report.bound_upper),
                            report.all_pass().to_string(),
                            checks.clone(),
                        ])?;
                    }
                }
            }
        }
    }
    w.flush()?;
    if failures > 0 {
        eprintln!("{failures} report(s) failed a check");
    }
    Ok(0)
}

fn cmd_pade(a: &PadeArgs) -> Result<u8, Fail> {
    let z = parse_z(&a.z)?;
    let tol = a.tol.unwrap_or(8.0 * f64::EPSILON);
    let r = pade_exp(z, tol, a.kmax)?;
    println!("value = {}", fmt_cx(r.value));
    println!("k = {}", r.k);
    println!("converged = {}", r.converged);
    println!("abs_error = {}", fmt_f64((r.value - z.exp()).norm()));
    println!("unitarity_defect = {}", fmt_f64(unitarity_defect(r.value)));
    Ok(status_code(r.status))
}

fn cmd_demo(a: &DemoArgs) -> Result<u8, Fail> {
    let params = parse_params(&SeriesArgs { alpha: a.alpha.clone(), beta: a.beta.clone() })?;
    let rows = experiments::unstable_demo(&params, parse_z(&a.z)?, a.k_max)?;
    let mut w = csv::Writer::from_writer(output(a.out.as_ref())?);
    w.write_record(DEMO_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.route.as_str().to_string(),
            r.k.to_string(),
            fmt_f64(r.value.re),
            fmt_f64(r.value.im),
            fmt_f64(r.approx_rel_err),
            fmt_f64(r.true_rel_err),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

fn cmd_bench(a: &BenchArgs) -> Result<u8, Fail> {
    let ks: Vec<usize> = list(&a.k, "k")?;
    let methods = match a.method.to_ascii_lowercase().as_str() {
        "both" => vec![Method::Drummond, Method::FactorialLevin],
        m => vec![m.parse::<Method>()?],
    };
    let rows = experiments::bench(&methods, &experiments::bench_params(), parse_z(&a.z)?, &ks, a.runs)?;
    let mut w = csv::Writer::from_writer(output(a.out.as_ref())?);
    w.write_record(BENCH_HEADER)?;
    for r in rows {
        let per_step = if r.k == 0 { String::new() } else { fmt_f64(r.median_seconds / r.k as f64) };
        w.write_record([
            r.method.to_string(),
            r.k.to_string(),
            fmt_f64(r.median_seconds),
            per_step,
            r.ratio.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_BAD_ARGS } else { 0 });
        }
    };
    let r = match &cli.cmd {
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Grid(a) => cmd_grid(a),
        Cmd::Poles(a) => cmd_poles(a),
        Cmd::PadeExp(a) => cmd_pade(a),
        Cmd::UnstableDemo(a) => cmd_demo(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
