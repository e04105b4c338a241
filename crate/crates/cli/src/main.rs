use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use loopvir_cli::config::{OutputFormat, RunConfig};
use loopvir_cli::report::Report;
use loopvir_cli::suites::{self, Tables};

/// Exact checks of the Virasoro generators on univalent-function
/// coefficients, plus the spectral and Loewner numerics.
#[derive(Parser)]
#[command(name = "loopvir", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML config file (flat key set); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Operator cache directory (overrides LOOPVIR_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Record wall time per check.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Extra series order for residue constructions.
    #[arg(long, global = true, allow_hyphen_values = true)]
    extra_order: Option<i64>,
}

#[derive(Args, Default)]
struct Symbolic {
    #[arg(long)]
    level: Option<u32>,
    /// Exact rational, `p/q`.
    #[arg(long)]
    kappa: Option<String>,
    /// Exact rational, `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Args, Default)]
struct Caps {
    #[arg(long)]
    max_mode: Option<u32>,
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    max_level: Option<u32>,
    #[arg(long)]
    max_index: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Commutation relations on all test monomials.
    VerifyCommutators(#[command(flatten)] Caps),
    /// Gram matrix of a level, checked against the geometric generators.
    Gram(#[command(flatten)] Symbolic),
    /// Kac determinant and its roots at a given kappa.
    Kac(#[command(flatten)] Symbolic),
    /// Level-2 null vector identity and kernel vectors.
    Singular(#[command(flatten)] Symbolic),
    /// Generator construction and its cross-checks.
    Operators(#[command(flatten)] Caps),
    /// Reflection coefficient R(lambda).
    Reflection(#[command(flatten)] Symbolic),
    /// Annulus kernel limit and bubble mass of a circular hole.
    BubbleLimit(BubbleArgs),
    /// Loewner checks and a sampled trace.
    LoewnerDemo(LoewnerArgs),
    /// Every acceptance criterion.
    ReportAll(#[command(flatten)] Caps),
    /// Operator-table cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args)]
struct BubbleArgs {
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// CSV of the error against theta'.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct LoewnerArgs {
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Number of seeded drivers in the variance check.
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    #[arg(long)]
    driver_csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Build modes -K..=K and store them.
    Warm(#[command(flatten)] Caps),
    Clear,
    Stat,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Caps {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.max_mode, self.max_mode);
        set(&mut c.max_degree, self.max_degree);
        set(&mut c.max_level, self.max_level);
        set(&mut c.max_index, self.max_index);
    }
}

impl Symbolic {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.level, self.level);
        set(&mut c.kappa, self.kappa);
        if self.lambda.is_some() {
            c.lambda = self.lambda;
        }
    }
}

fn build_config(common: &Common) -> Result<RunConfig, String> {
    let mut c = match &common.config {
        Some(p) => RunConfig::load(p).map_err(|e| e.to_string())?,
        None => RunConfig::default(),
    };
    c.apply_env();
    if common.cache_dir.is_some() {
        c.cache_dir = common.cache_dir.clone();
    }
    set(&mut c.format, common.format);
    if common.output.is_some() {
        c.output = common.output.clone();
    }
    c.timing |= common.timing;
    set(&mut c.seed, common.seed);
    set(&mut c.tolerance, common.tolerance);
    set(&mut c.extra_order, common.extra_order);
    Ok(c)
}

fn emit(cfg: &RunConfig, report: &Report) -> Result<(), String> {
    let body = match cfg.format {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Text => report.to_text(),
    };
    match &cfg.output {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn with_table(
    cfg: &RunConfig,
    f: impl FnOnce(&mut loopvir::geom::OperatorTable) -> Result<Report, String>,
) -> Result<Report, String> {
    let mut t = Tables::open(cfg);
    let r = f(&mut t.table)?;
    t.persist();
    Ok(r)
}

fn cache_dir(cfg: &RunConfig) -> PathBuf {
    cfg.cache_dir
        .clone()
        .unwrap_or_else(|| Path::new(".loopvir-cache").to_path_buf())
}

fn run(cli: Cli) -> Result<Report, String> {
    let mut cfg = build_config(&cli.common)?;
    let cfg_err = |e: loopvir_cli::config::ConfigError| e.to_string();
    let report = match cli.command {
        Command::VerifyCommutators(caps) => {
            caps.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            with_table(&cfg, |t| Ok(suites::verify_commutators(&cfg, t)))?
        }
        Command::Gram(s) => {
            s.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            with_table(&cfg, |t| suites::gram(&cfg, t).map_err(cfg_err))?
        }
        Command::Kac(s) => {
            s.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            suites::kac(&cfg).map_err(cfg_err)?
        }
        Command::Singular(s) => {
            s.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            with_table(&cfg, |t| suites::singular(&cfg, t).map_err(cfg_err))?
        }
        Command::Operators(caps) => {
            caps.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            with_table(&cfg, |t| Ok(suites::operators(&cfg, t)))?
        }
        Command::Reflection(s) => {
            s.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            suites::reflection(&cfg).map_err(cfg_err)?
        }
        Command::BubbleLimit(b) => {
            set(&mut cfg.q, b.q);
            set(&mut cfg.x0, b.x0);
            set(&mut cfg.r, b.r);
            cfg.validate().map_err(cfg_err)?;
            suites::bubble_limit(&cfg, b.csv.as_deref())
        }
        Command::LoewnerDemo(l) => {
            set(&mut cfg.kappa, l.kappa);
            set(&mut cfg.t_end, l.t_end);
            set(&mut cfg.dt, l.dt);
            set(&mut cfg.runs, l.runs);
            cfg.validate().map_err(cfg_err)?;
            suites::loewner_demo(&cfg, l.trace_csv.as_deref(), l.driver_csv.as_deref())
                .map_err(cfg_err)?
        }
        Command::ReportAll(caps) => {
            caps.apply(&mut cfg);
            cfg.validate().map_err(cfg_err)?;
            with_table(&cfg, |t| Ok(suites::report_all(&cfg, t)))?
        }
        Command::Cache(c) => {
            let dir = cache_dir(&cfg);
            match c {
                CacheCommand::Warm(caps) => {
                    caps.apply(&mut cfg);
                    cfg.validate().map_err(cfg_err)?;
                    suites::cache_warm(&cfg, &dir)
                }
                CacheCommand::Clear => suites::cache_clear(&cfg, &dir),
                CacheCommand::Stat => suites::cache_stat(&cfg, &dir),
            }
        }
    };
    emit(&cfg, &report)?;
    Ok(report)
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => ExitCode::from(r.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
