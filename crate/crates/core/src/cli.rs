//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 numerical error, 2 configuration or input error,
//! 3 failed hypothesis in strict mode.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::grid::{fmt17, GridFunction};
use crate::growth::{log_space, muckenhoupt_constant, reverse_holder_constant, GrowthFunction};
use crate::intrinsic::OperatorKind;
use crate::norms::SpaceKind;
use crate::verify::{emit_report, Corpus, SuiteId, TheoremSuite};

pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

/// Environment variable overriding every output location.
pub const OUT_ENV: &str = "ILP_OUT";

#[derive(Debug, Parser)]
#[command(name = "ilp", version, about = "Intrinsic Littlewood-Paley operators and Morrey/Campanato norms on grids")]
pub struct Cli {
    /// Run configuration file (flat key = value, # comments).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-ball values and the total norm of a grid function.
    Norm {
        /// musielak_morrey, weighted_orlicz_morrey, campanato, campanato_star,
        /// bmo, classical_morrey or l_phi (default: the `space` key).
        #[arg(long)]
        space: Option<String>,
        /// Input CSV with header `x,value` or `x,y,value`.
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        /// Ball family as `stride:r_min` (default: the ball_* keys).
        #[arg(long, value_name = "SPEC")]
        balls: Option<String>,
        /// Output CSV (default: stdout).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Applies an intrinsic operator and writes the result as a grid CSV.
    Operator {
        /// s_alpha, s_alpha_beta, g_alpha, g_star, comm_s, comm_g or comm_gstar.
        #[arg(long)]
        op: String,
        /// Input function as a grid CSV.
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        /// Commutator symbol b on the same grid.
        #[arg(long, value_name = "CSV")]
        symbol: Option<PathBuf>,
        /// Output CSV (default: stdout).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Muckenhoupt and reverse Hölder constants of the configured growth function.
    Apcheck {
        /// Weight CSV (overrides the weight_csv key; implies a weighted family).
        #[arg(long, value_name = "CSV")]
        weight: Option<PathBuf>,
        /// Muckenhoupt exponent (default: the growth function's own).
        #[arg(long)]
        q: Option<f64>,
        /// Reverse Hölder exponent (default: the r_exp key).
        #[arg(long)]
        r_exp: Option<f64>,
        /// Output CSV (default: stdout).
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Runs theorem suites and writes ratios.csv, hypotheses.csv and summary.csv.
    Verify {
        /// Suite id or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Output directory (default: the out_dir key).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Exit with code 3 when a suite's hypotheses fail.
        #[arg(long)]
        strict: bool,
    },
    /// Writes every corpus member as a grid CSV plus a manifest.
    Corpus {
        /// Output directory (default: the out_dir key).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

/// Errors that are the caller's fault map to exit code 2.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Csv(_) | Error::Io(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        c.set(k.trim(), v.trim())?;
    }
    c.validate()?;
    Ok(c)
}

fn output_dir(flag: Option<&PathBuf>, config: &RunConfig) -> PathBuf {
    if let Some(dir) = std::env::var_os(OUT_ENV) {
        return PathBuf::from(dir);
    }
    flag.cloned().unwrap_or_else(|| config.out_dir.clone())
}

/// Relative output files land under `ILP_OUT` when it is set.
fn output_file(flag: Option<&PathBuf>) -> Option<PathBuf> {
    let p = flag?;
    match std::env::var_os(OUT_ENV) {
        Some(dir) if p.is_relative() => Some(Path::new(&dir).join(p)),
        _ => Some(p.clone()),
    }
}

fn write_output(path: Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, text)?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_input(path: &Path) -> Result<GridFunction> {
    GridFunction::load_csv(path).map_err(|e| match e {
        Error::Io(io) => Error::Config(format!("cannot read {}: {io}", path.display())),
        other => other,
    })
}

pub fn parse_operator(name: &str, config: &RunConfig) -> Result<OperatorKind> {
    let lambda = config.lambda.unwrap_or(4.0);
    Ok(match name {
        "s_alpha" => OperatorKind::SAlpha,
        "s_alpha_beta" => OperatorKind::SAlphaBeta { beta: config.beta },
        "g_alpha" => OperatorKind::GAlpha,
        "g_star" => OperatorKind::GStar { lambda },
        "comm_s" => OperatorKind::CommutatorS,
        "comm_g" => OperatorKind::CommutatorG,
        "comm_gstar" => OperatorKind::CommutatorGStar { lambda },
        _ => return Err(Error::Config(format!("unknown operator '{name}'"))),
    })
}

fn norm_cmd(c: &RunConfig, space: Option<&str>, input: &Path, balls: Option<&str>) -> Result<String> {
    let f = load_input(input)?;
    let grid = *f.grid();
    let family = match balls {
        Some(spec) => {
            let (s, r) = spec
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("--balls expects stride:r_min, got '{spec}'")))?;
            let stride = s.parse().map_err(|_| Error::Config(format!("bad ball stride '{s}'")))?;
            let r_min = r.parse().map_err(|_| Error::Config(format!("bad ball radius '{r}'")))?;
            crate::grid::BallFamily::dyadic(&grid, stride, r_min).map_err(|e| Error::Config(e.to_string()))?
        }
        None => c.balls(&grid)?,
    };
    let spec = c.space(space.unwrap_or(&c.space), &grid, family)?;
    let mut out = String::new();
    let pad = if grid.dim() == 1 { "," } else { ",," };
    out.push_str(if grid.dim() == 1 { "cx,r,ball_norm\n" } else { "cx,cy,r,ball_norm\n" });
    let total = if matches!(spec.kind, SpaceKind::LPhi { .. }) {
        spec.norm(&f)?
    } else {
        let values = spec.ball_values(&f)?;
        for (b, v) in spec.balls.balls().iter().zip(&values) {
            let center: Vec<String> = b.center[..grid.dim()].iter().map(|x| fmt17(*x)).collect();
            out.push_str(&format!("{},{},{}\n", center.join(","), fmt17(b.radius), fmt17(*v)));
        }
        values.into_iter().fold(0.0, f64::max)
    };
    out.push_str(&format!("TOTAL{pad},{}\n", fmt17(total)));
    Ok(out)
}

fn operator_cmd(c: &RunConfig, op: &str, input: &Path, symbol: Option<&Path>) -> Result<String> {
    let kind = parse_operator(op, c)?;
    let f = load_input(input)?;
    let b = symbol.map(load_input).transpose()?;
    if kind.is_commutator() && b.is_none() {
        return Err(Error::Config(format!("{op} needs --symbol")));
    }
    if let Some(b) = &b {
        if b.grid() != f.grid() {
            return Err(Error::Config("symbol and input grids differ".into()));
        }
    }
    let result = c.intrinsic(f.grid())?.apply(kind, &f, b.as_ref())?;
    let mut buf = Vec::new();
    result.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

fn apcheck_cmd(c: &RunConfig, weight: Option<&Path>, q: Option<f64>, r_exp: Option<f64>) -> Result<String> {
    let mut c = c.clone();
    if let Some(w) = weight {
        c.weight_csv = Some(if w.is_absolute() { w.to_path_buf() } else { std::env::current_dir()?.join(w) });
        if c.family == crate::config::Family::Power {
            c.family = crate::config::Family::WeightedPower;
        }
    }
    let grid = match &c.weight_csv {
        Some(p) => *load_input(&c.base_dir.join(p))?.grid(),
        None => c.grid()?,
    };
    let phi: GrowthFunction = c.growth(&grid)?;
    let q = q.unwrap_or(phi.muckenhoupt_q);
    let r_exp = r_exp.unwrap_or(c.r_exp);
    let balls = c.balls(&grid)?;
    let ts = log_space(1e-4, 1e4, 9);
    let weight = c.weight(&grid)?;
    let mk = muckenhoupt_constant(&phi, q, &grid, &balls, &ts)?;
    let rh = reverse_holder_constant(&weight, r_exp, &balls)?;
    let mut out = String::from("check,param,fitted_constant,pass\n");
    out.push_str(&format!("muckenhoupt,q={q},{},{}\n", fmt17(mk), mk.is_finite() && mk <= c.cap));
    out.push_str(&format!(
        "reverse_holder,r_exp={r_exp},{},{}\n",
        fmt17(rh),
        rh.is_finite() && rh <= c.cap
    ));
    Ok(out)
}

fn verify_cmd(c: &RunConfig, suite: &str, out: Option<&PathBuf>, strict: bool) -> Result<i32> {
    let ids: Vec<SuiteId> = if suite == "all" {
        SuiteId::ALL.to_vec()
    } else {
        suite
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| Error::Config(format!("unknown suite '{s}'"))))
            .collect::<Result<_>>()?
    };
    let grid = c.grid()?;
    let params = c.suite_params();
    let corpus = Corpus::with_seed(&grid, params.corpus_seed)?;
    let op = params.intrinsic(&grid)?;
    let mut results = Vec::with_capacity(ids.len());
    for id in ids {
        let s = TheoremSuite::build(id, &grid, &params)?;
        results.push(s.run(&op, &corpus)?);
    }
    let dir = output_dir(out, c);
    emit_report(&dir, &results)?;
    let mut stdout = io::stdout().lock();
    for r in &results {
        let status = if !r.ran() { "skipped_hypothesis" } else if r.passed() { "pass" } else { "fail" };
        writeln!(stdout, "{:10} {:18} max_ratio={}", r.id, status, fmt17(r.max_ratio()))?;
    }
    writeln!(stdout, "report written to {}", dir.display())?;
    let skipped = results.iter().any(|r| !r.ran());
    let failed = results.iter().any(|r| r.ran() && !r.passed());
    Ok(if failed {
        EXIT_NUMERICAL
    } else if skipped && (strict || c.strict) {
        EXIT_HYPOTHESIS
    } else {
        0
    })
}

fn corpus_cmd(c: &RunConfig, out: Option<&PathBuf>) -> Result<()> {
    let grid = c.grid()?;
    let corpus = Corpus::with_seed(&grid, c.seed)?;
    let dir = output_dir(out, c);
    fs::create_dir_all(&dir)?;
    let mut manifest = String::from("name,kind,file\n");
    for m in corpus.members() {
        let file = format!("{}.csv", m.name);
        m.function.save_csv(dir.join(&file))?;
        manifest.push_str(&format!("{},{:?},{file}\n", m.name, m.kind));
    }
    fs::write(dir.join("manifest.csv"), manifest)?;
    fs::write(dir.join("corpus.sha256"), format!("{}  seed={}\n", corpus.hash(), corpus.seed()))?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let c = load_config(cli)?;
    match &cli.command {
        Command::Norm { space, input, balls, out } => {
            write_output(output_file(out.as_ref()), &norm_cmd(&c, space.as_deref(), input, balls.as_deref())?)?;
        }
        Command::Operator { op, input, symbol, out } => {
            write_output(output_file(out.as_ref()), &operator_cmd(&c, op, input, symbol.as_deref())?)?;
        }
        Command::Apcheck { weight, q, r_exp, out } => {
            write_output(output_file(out.as_ref()), &apcheck_cmd(&c, weight.as_deref(), *q, *r_exp)?)?;
        }
        Command::Verify { suite, out, strict } => return verify_cmd(&c, suite, out.as_ref(), *strict),
        Command::Corpus { out } => corpus_cmd(&c, out.as_ref())?,
    }
    Ok(0)
}

/// Runs the parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: --jobs: {e}");
            return EXIT_CONFIG;
        }
    }
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point for the binary: parses `std::env::args`.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() { EXIT_CONFIG } else { 0 }
        }
    }
}
