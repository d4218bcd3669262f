//! Command-line experiment runner.
//!
//! Flags may also come from a `key = value` file given with `--config`.
//! File entries are spliced in as `--key=value` directly after the
//! subcommand, so anything on the real command line overrides them.
//! Exit status: 0 success, 2 precondition error, 3 accuracy or resource error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    sketch_integral, voronoi_h, voronoi_phase_slope, BumpKind, BumpWeight, Sign, SketchParams,
};
use crate::charsums::{
    a1_bound_sweep, closed_form_m0, correlation_sum, kloosterman, recursive_charsum_a2, write_bound_csv,
    CorrelationKey, CorrelationSign, GeneralKey, KloostermanTable, DEFAULT_OP_BUDGET,
};
use crate::coefficients::{read_cache, write_cache, CoefficientProvider, FormKind};
use crate::deltamethod::{delta_eval, poisson_check, DeltaExpansion};
use crate::error::{LabError, Result};
use crate::expsums::{
    bound_calculator, constant_coefficients, dyadic_grid, exponent_from_f64, exponent_sweep, fit_slope, Exponent,
    CSV_HEADER,
};
use crate::hardy::{conditional_exponents, hardy_z, hardy_zeros, moment_table, write_moment_csv};
use crate::selftest::run_selftest;
use crate::summation::with_workers;

/// Environment variable naming the coefficient cache directory.
pub const CACHE_ENV: &str = "GL3LAB_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "gl3lab", version, about = "Numerical experiments on twisted GL(3) sums", args_override_self = true)]
pub struct Cli {
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel sums.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// CSV output path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// gnuplot script written next to the CSV; needs `--out`.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    /// Coefficient cache directory; overrides the environment variable.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    #[value(alias = "eisenstein", alias = "eisenstein-d3")]
    D3,
    #[value(alias = "sym2")]
    Sym2delta,
    /// λ ≡ 1.
    Constant,
}

impl Form {
    fn kind(self) -> Option<FormKind> {
        match self {
            Form::D3 => Some(FormKind::EisensteinD3),
            Form::Sym2delta => Some(FormKind::SymSquareDelta),
            Form::Constant => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    /// Sharp cutoff `n ≤ T`.
    None,
    /// Plateau `[1, 2]`.
    OneTwo,
    /// Support `[1/2, 1]`.
    HalfOne,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or inspect the coefficient cache.
    Coeffs(CoeffsArgs),
    /// Dyadic sweep of the twisted sum with a fitted growth exponent.
    Twist(TwistArgs),
    /// Fit log₂|S| against log₂T from a sweep CSV.
    ExponentFit(FitArgs),
    /// Evaluate the delta-symbol expansion at one n.
    DeltaCheck(DeltaArgs),
    /// Poisson summation for a random periodic function.
    PoissonCheck(PoissonArgs),
    /// One Kloosterman sum S(a, b; c).
    Kloosterman(KloostermanArgs),
    /// Correlation sum of two Kloosterman sums.
    CorrSum(CorrArgs),
    /// Bound ratios of the iterated character sum over all A ≠ B.
    CharsumIter(IterArgs),
    /// One value of the general iterated character sum.
    CharsumGeneral(GeneralArgs),
    /// The oscillatory integral ℐ(m, n, q).
    OscQuad(OscArgs),
    /// The Voronoi transform ℋ±(x) for the Eisenstein parameters.
    VoronoiH(VoronoiArgs),
    /// Hardy's Z on a grid, optionally with its zeros.
    HardyZ(HardyArgs),
    /// First and third moments of Z against the divisor-sum approximation.
    HardyF3(MomentArgs),
    /// Closed-form exponents.
    BoundCalc(BoundArgs),
    /// Run the reduced invariant suite.
    Selftest,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_enum, default_value = "d3")]
    pub form: Form,
    #[arg(long, default_value_t = 1 << 16)]
    pub n_max: usize,
    /// Number of leading coefficients to print.
    #[arg(long, default_value_t = 10)]
    pub show: usize,
}

#[derive(Debug, Args)]
pub struct TwistArgs {
    #[arg(long, value_enum, default_value = "sym2delta")]
    pub form: Form,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 1024.0)]
    pub tmin: f64,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub weight: WeightArg,
    /// Inertness scale of the weight.
    #[arg(long, default_value_t = 4.0)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV as written by `twist`.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    #[arg(long = "C")]
    pub c: f64,
    /// Size parameter N with |n| ≤ N and C > N^ε.
    #[arg(long = "N")]
    pub big_n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    /// Period of K.
    #[arg(long, default_value_t = 7)]
    pub c: usize,
    #[arg(long, default_value_t = 1)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// V is the even plateau weight dilated by this factor.
    #[arg(long, default_value_t = 5.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct KloostermanArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: i64,
    #[arg(long)]
    pub c: u64,
}

#[derive(Debug, Args)]
pub struct CorrArgs {
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub n1: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub n2: i64,
    #[arg(long)]
    pub c1: u64,
    #[arg(long)]
    pub c2: u64,
    #[arg(long, value_enum, default_value = "plus")]
    pub sign: SignArg,
}

#[derive(Debug, Args)]
pub struct IterArgs {
    #[arg(long = "C")]
    pub c: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub u: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub v: i64,
    #[arg(long, default_value_t = DEFAULT_OP_BUDGET)]
    pub budget: f64,
}

#[derive(Debug, Args)]
pub struct GeneralArgs {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub u: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub v: i64,
    #[arg(long = "C")]
    pub c: u64,
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub q1: u64,
    #[arg(long, default_value_t = 1)]
    pub q2: u64,
    #[arg(long, default_value_t = 1)]
    pub q3: u64,
    #[arg(long = "Q")]
    pub big_q: u64,
    #[arg(long)]
    pub k: u32,
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: i64,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: i64,
    #[arg(long, default_value_t = DEFAULT_OP_BUDGET)]
    pub budget: f64,
}

#[derive(Debug, Args)]
pub struct OscArgs {
    #[arg(long = "T")]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[arg(long, default_value_t = 4.0)]
    pub y: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VoronoiArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long, value_enum, default_value = "plus")]
    pub sign: SignArg,
    /// Centre of the narrow test weight.
    #[arg(long, default_value_t = 1.0)]
    pub center: f64,
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    /// Also report the finite-difference phase slope with this relative step.
    #[arg(long)]
    pub slope_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HardyArgs {
    #[arg(long, default_value_t = 0.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 50.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// List the sign changes found at this grid step.
    #[arg(long)]
    pub zeros: bool,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, default_value_t = 20.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 400.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 20.0)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// β as `p/q` or a decimal.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long, default_value = "0")]
    pub delta: String,
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| LabError::domain(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(LabError::domain(format!("config line {}: bad key '{key}'", i + 1)));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

const SUBCOMMANDS: &[&str] = &[
    "coeffs", "twist", "exponent-fit", "delta-check", "poisson-check", "kloosterman", "corr-sum", "charsum-iter",
    "charsum-general", "osc-quad", "voronoi-h", "hardy-z", "hardy-f3", "bound-calc", "selftest",
];

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Splice config-file entries in as flags after the subcommand.
///
/// A `command` key supplies the subcommand when none is given.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| LabError::domain(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config(&text)?;
    let mut args = args;
    let mut pos = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let mut flags = Vec::new();
    for (k, v) in entries {
        if k == "command" {
            if pos.is_none() {
                args.push(OsString::from(v));
                pos = Some(args.len() - 1);
            }
            continue;
        }
        match v.as_str() {
            "true" => flags.push(OsString::from(format!("--{k}"))),
            "false" => {}
            _ => flags.push(OsString::from(format!("--{k}={v}"))),
        }
    }
    let pos = pos.ok_or_else(|| LabError::domain("no subcommand on the command line or in the config"))?;
    args.splice(pos + 1..pos + 1, flags);
    Ok(args)
}

/// Parse and run; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_args(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, &mut io::stdout()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Dispatch one parsed command; human-readable output goes to `log`.
pub fn run(cli: &Cli, log: &mut (dyn Write + Send)) -> Result<i32> {
    if cli.plot.is_some() && cli.out.is_none() {
        return Err(LabError::domain("--plot needs --out"));
    }
    match cli.workers {
        Some(0) => Err(LabError::domain("--workers must be >= 1")),
        Some(w) => with_workers(w, || dispatch(cli, log))?,
        None => dispatch(cli, log),
    }
}

fn dispatch(cli: &Cli, log: &mut (dyn Write + Send)) -> Result<i32> {
    match &cli.command {
        Command::Coeffs(a) => coeffs(cli, a, log),
        Command::Twist(a) => twist(cli, a, log),
        Command::ExponentFit(a) => exponent_fit(a, log),
        Command::DeltaCheck(a) => delta_check(a, log),
        Command::PoissonCheck(a) => poisson(cli, a, log),
        Command::Kloosterman(a) => {
            let s = kloosterman(a.a, a.b, a.c)?;
            writeln!(log, "S({}, {}; {}) = {s:.12}", a.a, a.b, a.c)?;
            Ok(0)
        }
        Command::CorrSum(a) => corr_sum(a, log),
        Command::CharsumIter(a) => charsum_iter(cli, a, log),
        Command::CharsumGeneral(a) => charsum_general(a, log),
        Command::OscQuad(a) => osc_quad(a, log),
        Command::VoronoiH(a) => voronoi(a, log),
        Command::HardyZ(a) => hardy(cli, a, log),
        Command::HardyF3(a) => hardy_f3(cli, a, log),
        Command::BoundCalc(a) => bound_calc(a, log),
        Command::Selftest => {
            let checks = run_selftest();
            for c in &checks {
                writeln!(log, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(log, "{} checks, {failed} failed", checks.len())?;
            Ok(if failed == 0 { 0 } else { 3 })
        }
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("gl3lab-cache"))
}

/// Coefficients up to `n_max`, read from or added to the cache.
pub fn load_coefficients(dir: &Path, kind: FormKind, n_max: usize) -> Result<CoefficientProvider> {
    let path = dir.join(format!("{}-{n_max}.gl3c", kind.name()));
    if path.exists() {
        let p = read_cache(&path)?;
        if p.kind() == kind && p.max_index() >= n_max {
            return Ok(p);
        }
    }
    let p = CoefficientProvider::build(kind, n_max)?;
    fs::create_dir_all(dir)?;
    write_cache(&p, &path)?;
    Ok(p)
}

fn coefficient_table(cli: &Cli, form: Form, n_max: usize) -> Result<Vec<f64>> {
    Ok(match form.kind() {
        Some(kind) => load_coefficients(&cache_dir(cli), kind, n_max)?.table().to_vec(),
        None => constant_coefficients(n_max),
    })
}

/// Write CSV through `body` to `--out` (or `log`) and emit the plot script.
fn emit_csv(
    cli: &Cli,
    log: &mut (dyn Write + Send),
    plot: (&str, &str, bool),
    body: impl FnOnce(&mut (dyn Write + Send)) -> Result<()>,
) -> Result<()> {
    match &cli.out {
        None => body(log),
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
            writeln!(log, "wrote {}", path.display())?;
            if let Some(script) = &cli.plot {
                let (x, y, log_axes) = plot;
                fs::write(script, gnuplot_script(path, x, y, log_axes))?;
                writeln!(log, "wrote {}", script.display())?;
            }
            Ok(())
        }
    }
}

/// gnuplot script plotting column `y` against column `x` of a CSV.
pub fn gnuplot_script(csv: &Path, x: &str, y: &str, log_axes: bool) -> String {
    let logs = if log_axes { "set logscale xy 2\n" } else { "" };
    format!(
        "set datafile separator ','\nset key autotitle columnhead\n{logs}set xlabel '{x}'\nset ylabel '{y}'\n\
         plot '{}' using '{x}':'{y}' with linespoints\n",
        csv.display()
    )
}

fn coeffs(cli: &Cli, a: &CoeffsArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let kind = a.form.kind().ok_or_else(|| LabError::domain("the constant form has no cache"))?;
    let dir = cache_dir(cli);
    let p = load_coefficients(&dir, kind, a.n_max)?;
    writeln!(log, "{} coefficients up to {} in {}", kind.name(), p.max_index(), dir.display())?;
    for (i, v) in p.table().iter().take(a.show).enumerate() {
        writeln!(log, "lambda(1, {}) = {v:.12}", i + 1)?;
    }
    Ok(0)
}

fn twist(cli: &Cli, a: &TwistArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    if !(a.tmin >= 1.0 && a.tmax >= a.tmin) {
        return Err(LabError::domain("need 1 <= tmin <= tmax"));
    }
    let (kmin, kmax) = (a.tmin.log2().ceil() as u32, a.tmax.log2().floor() as u32);
    let grid = dyadic_grid(kmin, kmax);
    let weight = match a.weight {
        WeightArg::None => None,
        WeightArg::OneTwo => Some(BumpWeight::new(BumpKind::PlateauOnOneTwo, a.y)?),
        WeightArg::HalfOne => Some(BumpWeight::new(BumpKind::PlateauOnHalfOne, a.y)?),
    };
    let reach = weight.as_ref().map_or(1.0, |w| w.support().1);
    let n_max = (reach * (kmax as f64).exp2()).floor() as usize;
    let table = coefficient_table(cli, a.form, n_max.max(1))?;
    let report = exponent_sweep(&table, a.alpha, a.beta, &grid, weight.as_ref())?;
    emit_csv(cli, log, ("T", "abs", true), |w| report.write_csv(w))?;
    write!(log, "fitted_slope = {:.6} ± {:.6}", report.fitted_slope, report.slope_stderr)?;
    if let Some(p) = &report.predicted {
        write!(log, "; predicted exponent {} (kms {})", p.exponent, p.kms)?;
    }
    writeln!(log)?;
    Ok(0)
}

fn exponent_fit(a: &FitArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let bad = |e: csv::Error| LabError::domain(format!("{}: {e}", a.input.display()));
    let mut reader = csv::Reader::from_path(&a.input).map_err(bad)?;
    let header = reader.headers().map_err(bad)?.clone();
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(LabError::domain(format!("expected header {CSV_HEADER}")));
    }
    let mut points = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(bad)?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| LabError::domain(format!("bad number '{}'", &rec[i])))
        };
        points.push((num(6)?, num(7)?));
    }
    let (slope, stderr) = fit_slope(&points)?;
    writeln!(log, "fitted_slope = {slope:.6} ± {stderr:.6} over {} points", points.len())?;
    Ok(0)
}

fn delta_check(a: &DeltaArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let exp = DeltaExpansion::new(a.c, a.q)?;
    let big_n = a.big_n.unwrap_or(a.n.unsigned_abs().max(1));
    writeln!(log, "{:.9}", delta_eval(&exp, a.n, big_n)?)?;
    Ok(0)
}

fn poisson(cli: &Cli, a: &PoissonArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    if a.c == 0 {
        return Err(LabError::domain("period c must be >= 1"));
    }
    let v = BumpWeight::new(BumpKind::SymmetricPlateau, 2.0)?.dilate(a.scale);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::with_capacity(a.instances);
    for _ in 0..a.instances {
        let k: Vec<Complex64> =
            (0..a.c).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        rows.push(poisson_check(&k, &v)?);
    }
    emit_csv(cli, log, ("instance", "diff", false), |w| {
        writeln!(w, "instance,lhs_re,lhs_im,rhs_re,rhs_im,diff,cutoff,tail_bound,quad_error")?;
        for (i, r) in rows.iter().enumerate() {
            writeln!(
                w,
                "{i},{:.16e},{:.16e},{:.16e},{:.16e},{:.3e},{},{:.3e},{:.3e}",
                r.lhs.re, r.lhs.im, r.rhs.re, r.rhs.im, r.diff, r.cutoff, r.tail_bound, r.quad_error
            )?;
        }
        Ok(())
    })?;
    let worst = rows.iter().map(|r| r.diff).fold(0.0, f64::max);
    writeln!(log, "max diff = {worst:.3e}")?;
    Ok(0)
}

fn corr_sum(a: &CorrArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let sign = match a.sign {
        SignArg::Plus => CorrelationSign::Plus,
        SignArg::Minus => CorrelationSign::Minus,
    };
    let key = CorrelationKey { m: a.m, n1: a.n1, n2: a.n2, c1: a.c1, c2: a.c2, sign };
    let v = correlation_sum(&key)?;
    writeln!(log, "brute force = {:.9} {:+.9}i", v.re, v.im)?;
    if a.m == 0 {
        writeln!(log, "closed form = {}", closed_form_m0(&key)?)?;
    }
    Ok(0)
}

fn charsum_iter(cli: &Cli, a: &IterArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let table = KloostermanTable::new(a.c)?;
    let rows: Vec<_> =
        a1_bound_sweep(a.u, a.v, &table, a.k, a.budget)?.into_iter().filter(|r| r.k == a.k).collect();
    emit_csv(cli, log, ("A", "ratio", false), |w| write_bound_csv(w, &rows))?;
    let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    writeln!(log, "max bound_ratio = {worst:.6} over {} pairs", rows.len())?;
    Ok(0)
}

fn charsum_general(a: &GeneralArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let key = GeneralKey {
        u: a.u,
        v: a.v,
        c: a.c,
        q: a.q,
        q1: a.q1,
        q2: a.q2,
        q3: a.q3,
        big_q: a.big_q,
        k: a.k,
        a: a.a,
        b: a.b,
    };
    let r = recursive_charsum_a2(&key, a.budget)?;
    writeln!(log, "value = {:.9}; envelope = {:.6}; bound_ratio = {:.6}", r.value, r.envelope, r.bound_ratio)?;
    Ok(0)
}

fn osc_quad(a: &OscArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let w = BumpWeight::new(BumpKind::PlateauOnOneTwo, a.y)?;
    let p = SketchParams { t: a.t, alpha: a.alpha, beta: a.beta, m: a.m, n: a.n, q: a.q };
    let r = sketch_integral(&p, &w, a.tol)?;
    writeln!(
        log,
        "I = {:.12e} {:+.12e}i; error estimate {:.2e}; {} panels",
        r.value.re, r.value.im, r.error_estimate, r.panels
    )?;
    Ok(0)
}

fn voronoi(a: &VoronoiArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    let sign = match a.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    let h = BumpWeight::narrow(a.center, a.width)?;
    let params = crate::coefficients::SpectralParams::eisenstein();
    let r = voronoi_h(a.x, &h, &params, sign)?;
    writeln!(log, "H(x) = {:.12e} {:+.12e}i; error estimate {:.2e}", r.value.re, r.value.im, r.error_estimate)?;
    if let Some(step) = a.slope_step {
        let s = voronoi_phase_slope(a.x, &h, &params, sign, step)?;
        writeln!(log, "phase slope measured {:.6e}, predicted {:.6e}", s.measured, s.predicted)?;
    }
    Ok(0)
}

fn hardy(cli: &Cli, a: &HardyArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    if !(a.step > 0.0 && a.tmax >= a.tmin) {
        return Err(LabError::domain("need step > 0 and tmax >= tmin"));
    }
    let count = ((a.tmax - a.tmin) / a.step).floor() as usize;
    let mut rows = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let t = a.tmin + a.step * i as f64;
        rows.push((t, hardy_z(t)?));
    }
    emit_csv(cli, log, ("t", "Z", false), |w| {
        writeln!(w, "t,Z")?;
        for (t, z) in &rows {
            writeln!(w, "{t:.16e},{z:.16e}")?;
        }
        Ok(())
    })?;
    if a.zeros {
        let z = hardy_zeros(a.tmin, a.tmax, a.step)?;
        writeln!(log, "{} zeros in [{}, {}]", z.len(), a.tmin, a.tmax)?;
        for t in z {
            writeln!(log, "{t:.9}")?;
        }
    }
    Ok(0)
}

fn hardy_f3(cli: &Cli, a: &MomentArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    if !(a.step > 0.0 && a.tmax >= a.tmin && a.tmin > 0.0) {
        return Err(LabError::domain("need step > 0 and 0 < tmin <= tmax"));
    }
    let count = ((a.tmax - a.tmin) / a.step + 1e-9).floor() as usize;
    let ts: Vec<f64> = (0..=count).map(|i| a.tmin + a.step * i as f64).collect();
    let n_max = (a.tmax / std::f64::consts::PI).powf(1.5).floor() as usize + 1;
    let d3 = load_coefficients(&cache_dir(cli), FormKind::EisensteinD3, n_max)?;
    let rows = moment_table(d3.table(), &ts, a.tol)?;
    emit_csv(cli, log, ("T", "diff", false), |w| write_moment_csv(w, &rows))?;
    let worst = rows.iter().map(|r| r.envelope_ratio()).fold(0.0, f64::max);
    writeln!(log, "max envelope ratio = {worst:.4}")?;
    Ok(0)
}

/// Parse `p/q`, an integer, or a decimal (converted to the nearest simple fraction).
pub fn parse_exponent(s: &str) -> Result<Exponent> {
    if let Ok(r) = s.trim().parse::<Exponent>() {
        return Ok(r);
    }
    let x: f64 = s.trim().parse().map_err(|_| LabError::domain(format!("'{s}' is not a rational exponent")))?;
    exponent_from_f64(x).ok_or_else(|| LabError::domain(format!("'{s}' has no small rational form")))
}

fn bound_calc(a: &BoundArgs, log: &mut (dyn Write + Send)) -> Result<i32> {
    if a.beta.is_none() && a.eta.is_none() {
        return Err(LabError::domain("give --beta and/or --eta"));
    }
    if let Some(beta) = &a.beta {
        let r = bound_calculator(a.alpha, parse_exponent(beta)?);
        for (k, v) in r.to_map() {
            writeln!(log, "{k} = {v}")?;
        }
        writeln!(log, "in_range = {}; kms_valid = {}; improves_on_kms = {}", r.in_range, r.kms_valid, r.improves_on_kms)?;
    }
    if let Some(eta) = &a.eta {
        let c = conditional_exponents(parse_exponent(eta)?, parse_exponent(&a.delta)?)?;
        for (k, v) in c.to_map() {
            writeln!(log, "{k} = {v}")?;
        }
        writeln!(log, "zeros_threshold_met = {}", c.zeros_threshold_met)?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_entries_precede_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# sweep\nq = 5\nC = 20\n").unwrap();
        let args = os(&["gl3lab", "delta-check", "--config", cfg.to_str().unwrap(), "--q", "3", "--n", "0"]);
        let cli = Cli::try_parse_from(expand_args(args).unwrap()).unwrap();
        match cli.command {
            Command::DeltaCheck(d) => assert_eq!((d.q, d.c), (3, 20.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        fs::write(&cfg, "command = delta-check\nbogus = 1\n").unwrap();
        let args = os(&["gl3lab", "--config", cfg.to_str().unwrap()]);
        assert_eq!(main_with_args(args), 2);
    }

    #[test]
    fn delta_check_prints_one() {
        let cli = Cli::try_parse_from(["gl3lab", "delta-check", "--n", "0", "--q", "3", "--C", "50"]).unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&cli, &mut out).unwrap(), 0);
        assert_eq!(String::from_utf8(out).unwrap().trim(), "1.000000000");
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(parse_exponent("2/3").unwrap(), Exponent::new(2, 3));
        assert_eq!(parse_exponent("0.5").unwrap(), Exponent::new(1, 2));
        assert!(parse_exponent("x").is_err());
    }
}
