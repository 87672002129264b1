//! `grassmann-harmonics`: verification harness and data emitter.
//!
//! Exit codes: 0 when every assertion passes, 1 on an assertion failure,
//! 2 on a config or input error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grassmann_harmonics::config::{LambdaSpec, Normalization, RunConfig};
use grassmann_harmonics::io::{decompose, parse_group_element, write_profile_csv};
use grassmann_harmonics::report::{Report, BUILD_ID};
use grassmann_harmonics::verify::{eval_cfun, eval_spherical, run, Check};
use grassmann_harmonics::{Error, C64};

const THREADS_ENV: &str = "GRASSMANN_HARMONICS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "grassmann-harmonics", version = BUILD_ID, about = "Spherical functions and Poisson transforms on SU(r,r+b) line bundles")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// TOML run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    r: Option<usize>,
    #[arg(long, global = true)]
    b: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    l: Option<i64>,
    /// Comma-separated bundle indices for checks that sweep l.
    #[arg(long, global = true, allow_hyphen_values = true)]
    l_sweep: Option<String>,
    /// Comma-separated magnitudes, or `;`-separated points such as `2,1;3,0.5`.
    #[arg(long, global = true)]
    lambda: Option<String>,
    #[arg(long = "R-max", alias = "r-max", global = true)]
    r_max: Option<f64>,
    #[arg(long = "R-step", alias = "r-step", global = true)]
    r_step: Option<f64>,
    /// Assertion tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    normalization: Option<NormArg>,
    /// Report directory (default `reports`).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Killing,
    Unit,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Table of phi_{lambda,l} on a chamber grid.
    EvalSpherical,
    /// Harish-Chandra c(lambda, l) on the configured points.
    EvalCfun,
    /// Iwasawa and Cartan factors of a matrix given as JSON.
    Decompose {
        /// JSON file with row-major [re, im] pairs; `-` reads stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Run a verification check.
    Verify {
        #[arg(value_enum)]
        check: CheckArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    KeyLemma,
    Ode,
    Connection,
    NormLimit,
    PoissonAsymptotics,
    Restriction,
    Inversion,
    LemmaA,
    All,
}

impl CheckArg {
    fn checks(self) -> Vec<Check> {
        match self {
            CheckArg::KeyLemma => vec![Check::KeyLemma],
            CheckArg::Ode => vec![Check::Ode],
            CheckArg::Connection => vec![Check::Connection],
            CheckArg::NormLimit => vec![Check::NormLimit],
            CheckArg::PoissonAsymptotics => vec![Check::PoissonAsymptotics],
            CheckArg::Restriction => vec![Check::Restriction],
            CheckArg::Inversion => vec![Check::Inversion],
            CheckArg::LemmaA => vec![Check::LemmaA],
            CheckArg::All => Check::ALL.to_vec(),
        }
    }
}

enum Failure {
    Assertion,
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Failure::Config(format!("--{what}: '{x}' is not a number"))))
        .collect()
}

fn parse_lambda(s: &str) -> Result<LambdaSpec, Failure> {
    if s.contains(';') {
        let pts = s.split(';').map(|p| parse_list::<f64>(p, "lambda")).collect::<Result<_, _>>()?;
        Ok(LambdaSpec::Points(pts))
    } else {
        Ok(LambdaSpec::List(parse_list(s, "lambda")?))
    }
}

fn build_config(o: &Opts) -> Result<RunConfig, Failure> {
    let mut cfg = match &o.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(r) = o.r {
        cfg.r = r;
    }
    if let Some(b) = o.b {
        cfg.b = b;
    }
    if let Some(l) = o.l {
        cfg.l = l;
        cfg.l_sweep = Some(vec![l]);
    }
    if let Some(s) = &o.l_sweep {
        cfg.l_sweep = Some(parse_list(s, "l-sweep")?);
    }
    if let Some(s) = &o.lambda {
        cfg.lambda = Some(parse_lambda(s)?);
    }
    if o.r_max.is_some() {
        cfg.r_max = o.r_max;
    }
    if o.r_step.is_some() {
        cfg.r_step = o.r_step;
    }
    if o.tol.is_some() {
        cfg.tol.assert = o.tol;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(n) = o.normalization {
        cfg.normalization = match n {
            NormArg::Killing => Normalization::Killing,
            NormArg::Unit => Normalization::Unit,
        };
    }
    if o.output.is_some() {
        cfg.output = o.output.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("{THREADS_ENV}='{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output.clone().unwrap_or_else(|| PathBuf::from("reports"))
}

fn emit(mut rep: Report, dir: &Path) -> Result<bool, Failure> {
    rep.stamp();
    let (json, csv) = rep.write(dir)?;
    let status = if rep.pass() { "PASS" } else { "FAIL" };
    println!("{status} {} -> {} {}", rep.meta.check, json.display(), csv.display());
    for f in &rep.summary.failures {
        println!("  {f}");
    }
    Ok(rep.pass())
}

/// `t` columns and `phi` of an `eval-spherical` report in profile CSV form.
fn profile_rows(rep: &Report, r: usize) -> Vec<(Vec<f64>, C64)> {
    rep.grid
        .iter()
        .map(|p| (p.point[p.point.len() - r..].to_vec(), C64::new(p.aux["re"], p.aux["im"])))
        .collect()
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Config(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let cfg = build_config(&cli.opts)?;
    let dir = out_dir(&cfg);
    let ok = match &cli.cmd {
        Cmd::EvalSpherical => {
            let rep = eval_spherical(&cfg)?;
            let single = !rep.grid.is_empty() && cfg.lambda.as_ref().is_none_or(|s| s.points(cfg.r).len() == 1);
            if single && rep.pass() {
                std::fs::create_dir_all(&dir).map_err(Error::from)?;
                let path = dir.join("eval-spherical-profile.csv");
                std::fs::write(&path, write_profile_csv(cfg.r, &profile_rows(&rep, cfg.r))?).map_err(Error::from)?;
            }
            emit(rep, &dir)?
        }
        Cmd::EvalCfun => emit(eval_cfun(&cfg)?, &dir)?,
        Cmd::Decompose { input } => {
            let g = parse_group_element(&read_input(input)?, cfg.r)?;
            let d = decompose(&g).map_err(|e| Failure::Config(e.to_string()))?;
            let doc = serde_json::json!({
                "meta": { "check": "decompose", "build": BUILD_ID, "config": cfg },
                "decomposition": d,
            });
            let text = serde_json::to_string_pretty(&doc).expect("json");
            std::fs::create_dir_all(&dir).map_err(Error::from)?;
            std::fs::write(dir.join("decompose.json"), &text).map_err(Error::from)?;
            println!("{text}");
            d.iwasawa.residual <= 1e-9 && d.cartan.residual <= 1e-9
        }
        Cmd::Verify { check } => {
            let mut all = true;
            for c in check.checks() {
                all &= emit(run(c, &cfg)?, &dir)?;
            }
            all
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
