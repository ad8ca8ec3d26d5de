use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use roughsum::dyadic::{
    b_set, bisect, decompose_peaked, greedy_decompose, is_dyadic, n_of, tilde_set, DyadicInterval,
};
use roughsum::experiments::{
    run_experiment, write_report, ExperimentReport, OutputFormat, Params, EXPERIMENTS,
    SCHEMA_VERSION,
};
use roughsum::levy_area::{area_one_var, build_area_table, MAX_TABLE_KNOTS};
use roughsum::lognorm::{big_l_norm_quadrature, big_l_norm_spectral, trig_poly, QuadratureSpec, Scheme};
use roughsum::series::{
    coeffs_finite2var_example, partial_sum_path, CoefficientSeq, DiscreteOns, OrthonormalSystem,
    SamplePoint,
};
use roughsum::variation::p_var_exact;
use roughsum::{Error, IntervalZ, LatticePath};

const OUT_DIR_ENV: &str = "ROUGHSUM_OUT_DIR";

#[derive(Parser)]
#[command(name = "roughsum", version, about = "p-variation, Lévy area and series experiments")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    emit: Emit,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact p-variation of a path file.
    Pvar(PvarArgs),
    /// Lévy area and its 1-variation.
    Area(RangeArgs),
    /// Dyadic decompositions of an integer interval.
    Dyadic {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Partial-sum paths and example coefficient sequences.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Coefficient and integral log-norms of a trigonometric polynomial.
    Norm(NormArgs),
    /// Run a named experiment (or `all`) and write its report.
    Exp(ExpArgs),
}

#[derive(Args)]
struct RangeArgs {
    /// Path as headerless CSV (one knot per row) or a JSON array of rows.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    from: Option<usize>,
    #[arg(long)]
    to: Option<usize>,
}

#[derive(Args)]
struct PvarArgs {
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long)]
    p: f64,
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// Partial sums `x_k = sum_{j<=k} c_j u_j(ω)`.
    Path {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, value_enum, default_value = "fourier")]
        system: SystemArg,
        /// Angle for the Fourier system.
        #[arg(long)]
        theta: Option<f64>,
        /// Sample index for the discrete system.
        #[arg(long)]
        omega: Option<usize>,
        /// Size of the discrete system.
        #[arg(long, default_value_t = 64)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Last index; defaults to the coefficient degree.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Coefficients `1/(n 2^{n/2})` on `(2^n, 2^{n+1}]`, as CSV.
    Finite2var {
        #[arg(long)]
        n_max: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Fourier,
    Discrete,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    coeffs: PathBuf,
    #[arg(long)]
    s: f64,
    #[arg(long, value_enum, default_value = "spectral")]
    method: NormMethod,
    #[arg(long = "M", default_value_t = 2048)]
    grid: usize,
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum NormMethod {
    Spectral,
    Direct,
}

#[derive(Args)]
struct ExpArgs {
    /// Experiment name, or `all`.
    name: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    theta_grid: Option<usize>,
    /// Extra parameter as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// File of `key=value` lines; `--set` and flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
    out: PathBuf,
}

/// Failure of the command itself, as opposed to a failed predicate.
#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        Self(e.to_string())
    }
}

impl From<io::Error> for UsageError {
    fn from(e: io::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<serde_json::Error> for UsageError {
    fn from(e: serde_json::Error) -> Self {
        Self(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Pvar(args) => pvar(&args, cli.emit),
        Command::Area(args) => area(&args, cli.emit),
        Command::Dyadic { from, to } => dyadic(from, to),
        Command::Series(cmd) => series(cmd, cli.emit),
        Command::Norm(args) => norm(&args),
        Command::Exp(args) => exp(&args, cli.emit),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_path(path: &Path) -> Result<LatticePath, UsageError> {
    let file = BufReader::new(File::open(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?);
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    Ok(if is_json {
        LatticePath::read_json(file)?
    } else {
        LatticePath::read_csv(file)?
    })
}

fn read_coeffs(path: &Path) -> Result<CoefficientSeq, UsageError> {
    let file = File::open(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(CoefficientSeq::read_csv(BufReader::new(file))?)
}

fn interval(path: &LatticePath, args: &RangeArgs) -> Result<IntervalZ, UsageError> {
    let iv = IntervalZ {
        a: args.from.unwrap_or(0),
        b: args.to.unwrap_or(path.n()),
    };
    path.check_interval(iv)?;
    Ok(iv)
}

fn print_json(value: &impl Serialize) -> Result<(), UsageError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn print_csv(header: &[&str], rows: &[Vec<String>]) -> Result<(), UsageError> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn pvar(args: &PvarArgs, emit: Emit) -> CmdResult {
    let path = read_path(&args.range.input)?;
    let iv = interval(&path, &args.range)?;
    let res = p_var_exact(&path, args.p, iv)?;
    match emit {
        Emit::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "p": args.p,
            "from": iv.a,
            "to": iv.b,
            "power_sum": res.power_sum,
            "norm": res.norm(args.p),
            "partition": res.partition,
        }))?,
        Emit::Csv => print_csv(
            &["p", "from", "to", "power_sum", "norm"],
            &[vec![
                format!("{:?}", args.p),
                iv.a.to_string(),
                iv.b.to_string(),
                format!("{:?}", res.power_sum),
                format!("{:?}", res.norm(args.p)),
            ]],
        )?,
    }
    Ok(true)
}

fn area(args: &RangeArgs, emit: Emit) -> CmdResult {
    let path = read_path(&args.input)?;
    let iv = interval(&path, args)?;
    let one_var = area_one_var(&path, iv)?;
    let two_var = p_var_exact(&path, 2.0, iv)?;
    let sub = if iv.is_empty() { None } else { Some(path.restrict(iv)?) };
    let d = path.dim();
    let matrix: Vec<Vec<f64>> = match &sub {
        Some(sub) if sub.n() <= MAX_TABLE_KNOTS => build_area_table(sub)?
            .get(0, sub.n())
            .chunks(d)
            .map(<[f64]>::to_vec)
            .collect(),
        Some(sub) => {
            let m = roughsum::levy_area::area_between(sub, 0.0, sub.n() as f64)?;
            m.chunks(d).map(<[f64]>::to_vec).collect()
        }
        None => vec![vec![0.0; d]; d],
    };
    let rough = two_var.power_sum + one_var.power_sum;
    match emit {
        Emit::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "from": iv.a,
            "to": iv.b,
            "area": matrix,
            "area_one_var": one_var.power_sum,
            "area_partition": one_var.partition,
            "rough_norm_sq": rough,
        }))?,
        Emit::Csv => print_csv(
            &["from", "to", "area_one_var", "rough_norm_sq"],
            &[vec![
                iv.a.to_string(),
                iv.b.to_string(),
                format!("{:?}", one_var.power_sum),
                format!("{rough:?}"),
            ]],
        )?,
    }
    Ok(true)
}

fn spans(pieces: &[DyadicInterval]) -> Vec<[usize; 2]> {
    pieces.iter().map(|p| [p.start(), p.end()]).collect()
}

fn dyadic(from: usize, to: usize) -> CmdResult {
    let j = IntervalZ::new(from, to)?;
    let peaked = decompose_peaked(j)?;
    let bisection = if is_dyadic(j) {
        serde_json::Value::Null
    } else {
        let b = bisect(j)?;
        json!({
            "parts": [[b.parts[0].a, b.parts[0].b], [b.parts[1].a, b.parts[1].b]],
            "enclosing": spans(&b.enclosing),
        })
    };
    print_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "interval": [from, to],
        "n_of": n_of(j)?,
        "peak": peaked.point,
        "peaked": spans(&peaked.pieces),
        "greedy": spans(&greedy_decompose(j)?),
        "bisection": bisection,
        "b_set_size": b_set(j, None)?.len(),
        "tilde_set_size": tilde_set(j)?.len(),
    }))?;
    Ok(true)
}

fn series(cmd: SeriesCommand, emit: Emit) -> CmdResult {
    let mut out = io::stdout().lock();
    match cmd {
        SeriesCommand::Path {
            coeffs,
            system,
            theta,
            omega,
            m,
            seed,
            n,
        } => {
            let coeffs = read_coeffs(&coeffs)?;
            let (system, sample) = match system {
                SystemArg::Fourier => (
                    OrthonormalSystem::Fourier,
                    SamplePoint::Theta(theta.ok_or_else(|| UsageError("--theta is required".into()))?),
                ),
                SystemArg::Discrete => (
                    OrthonormalSystem::Discrete(DiscreteOns::haar(m, seed)?),
                    SamplePoint::Omega(omega.ok_or_else(|| UsageError("--omega is required".into()))?),
                ),
            };
            let path = partial_sum_path(&system, &coeffs, &sample, n.unwrap_or(coeffs.degree()))?;
            match emit {
                Emit::Json => {
                    path.write_json(&mut out)?;
                    writeln!(out)?;
                }
                Emit::Csv => path.write_csv(&mut out)?,
            }
        }
        SeriesCommand::Finite2var { n_max } => coeffs_finite2var_example(n_max)?.write_csv(&mut out)?,
    }
    Ok(true)
}

fn norm(args: &NormArgs) -> CmdResult {
    let coeffs = read_coeffs(&args.coeffs)?;
    let q = QuadratureSpec {
        m: args.grid,
        scheme: Scheme::Adaptive,
        diag_exclusion: args.h,
        ..QuadratureSpec::default()
    };
    let spectral = big_l_norm_spectral(&coeffs, args.s, &q)?;
    let direct = big_l_norm_quadrature(trig_poly(&coeffs), args.s, &q)?;
    let value = match args.method {
        NormMethod::Spectral => spectral,
        NormMethod::Direct => direct.value,
    };
    print_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "s": args.s,
        "method": if args.method == NormMethod::Spectral { "spectral" } else { "direct" },
        "value": value,
        "l_norm": roughsum::lognorm::l_norm(&coeffs, args.s)?,
        "spectral": spectral,
        "direct": direct.value,
        "band": direct.band,
        "gap": (spectral - direct.value).abs(),
    }))?;
    Ok(true)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn exp_params(args: &ExpArgs) -> Result<BTreeMap<String, String>, UsageError> {
    let mut map = match &args.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| UsageError(format!("--set expects key=value, got `{kv}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let flags: [(&str, Option<String>); 7] = [
        ("seed", args.seed.map(|v| v.to_string())),
        ("trials", args.trials.map(|v| v.to_string())),
        ("m", args.m.map(|v| v.to_string())),
        ("n", args.n.map(|v| v.to_string())),
        ("n_max", args.n_max.map(|v| v.to_string())),
        ("theta", args.theta.map(|v| v.to_string())),
        ("grid", args.theta_grid.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    }
    Ok(map)
}

fn exp(args: &ExpArgs, emit: Emit) -> CmdResult {
    let names: Vec<&str> = if args.name == "all" {
        EXPERIMENTS.to_vec()
    } else {
        vec![args.name.as_str()]
    };
    let given = exp_params(args)?;
    let format = match emit {
        Emit::Json => OutputFormat::Json,
        Emit::Csv => OutputFormat::Csv,
    };
    let mut all_pass = true;
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for name in names {
        // with `all`, shared keys only reach the experiments that use them
        let params = if args.name == "all" {
            Params::new(BTreeMap::new())
        } else {
            Params::new(given.clone())
        };
        let report = run_experiment(name, params)?;
        let file = write_report(&report, &args.out, format)?;
        eprintln!(
            "{}: {} ({} ms) -> {}",
            report.name,
            if report.pass { "pass" } else { "FAIL" },
            report.runtime_ms,
            file.display()
        );
        all_pass &= report.pass;
        reports.push(report);
    }
    if args.name == "all" && !given.is_empty() {
        eprintln!("note: parameters are ignored with `all`; defaults were used");
    }
    match emit {
        Emit::Json if reports.len() == 1 => print_json(&reports[0])?,
        Emit::Json => print_json(&reports)?,
        Emit::Csv => {
            for r in &reports {
                print!("{}", r.to_csv()?);
            }
        }
    }
    Ok(all_pass)
}
