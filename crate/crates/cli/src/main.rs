//! `hermsim`: tables, sample paths, validation suites and chaos windows.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use config::{ConfigError, Rep, Route, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "hermsim", version, about = "Simulation of generalized Hermite processes")]
struct Cli {
    /// JSON file with configuration keys; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and dump the Meyer tables for a Hurst vector.
    Tables {
        #[command(flatten)]
        model: ModelFlags,
    },
    /// Generate one sample path as CSV plus a metadata JSON file.
    Generate {
        #[command(flatten)]
        model: ModelFlags,
        #[command(flatten)]
        path: PathFlags,
    },
    /// Run validation suites and write their reports.
    Validate {
        #[command(flatten)]
        model: ModelFlags,
        /// meyer, farima, combinatorics, chaos, moments, rate, fullseries-rate,
        /// covariance, selfsim or all.
        #[arg(long)]
        suite: Option<String>,
        /// Reduced replica counts.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        replicas: Option<usize>,
    },
    /// Export the generalized FARIMA field on a window `[k_lo, k_hi]^d`.
    Sigma {
        #[command(flatten)]
        model: ModelFlags,
        #[arg(long = "J")]
        level: Option<i32>,
        #[arg(long)]
        k_lo: Option<i64>,
        #[arg(long)]
        k_hi: Option<i64>,
        /// FARIMA truncation.
        #[arg(long = "P")]
        farima_order: Option<usize>,
        #[arg(long, value_enum)]
        route: Option<Route>,
        #[arg(long)]
        replica: Option<u64>,
    },
}

#[derive(Args, Debug, Default)]
struct ModelFlags {
    /// Hurst indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    h: Option<Vec<f64>>,
    /// Dimension; a single --h value is repeated d times.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    table_half_width: Option<f64>,
    #[arg(long)]
    table_dx: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct PathFlags {
    #[arg(long = "rep", value_enum)]
    representation: Option<Rep>,
    /// Level J (or N for the full series).
    #[arg(long = "J", visible_alias = "N")]
    level: Option<i32>,
    /// Time horizon.
    #[arg(long = "T")]
    t_max: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    replica: Option<u64>,
    /// Relative-offset band B.
    #[arg(long = "B")]
    band: Option<i64>,
    /// Partial-sum window, as lo,hi.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    q_range: Option<Vec<i64>>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    b_prime: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    /// FARIMA truncation P.
    #[arg(long = "P")]
    farima_order: Option<usize>,
    /// FARIMA truncation per unit time when P is not given.
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    base_level: Option<i32>,
    /// Gauss nodes per cell for the direct representation.
    #[arg(long)]
    quad_nodes: Option<usize>,
    #[arg(long)]
    gl_order: Option<usize>,
}

macro_rules! overlay {
    ($cfg:expr, $src:expr, $($field:ident),+) => {
        $( if let Some(v) = $src.$field.clone() { $cfg.$field = v.into(); } )+
    };
}

impl ModelFlags {
    fn apply(&self, c: &mut RunConfig) {
        if self.h.is_some() {
            c.h = self.h.clone();
        }
        if self.d.is_some() {
            c.d = self.d;
        }
        if self.seed.is_some() {
            c.seed = self.seed;
        }
        if self.out.is_some() {
            c.out = self.out.clone();
        }
        overlay!(c, self, table_half_width, table_dx);
    }
}

impl PathFlags {
    fn apply(&self, c: &mut RunConfig) {
        overlay!(c, self, representation, level, t_max, grid_n, replica, band, b, b_prime, g, horizon, quad_nodes, gl_order);
        if let Some(q) = &self.q_range {
            c.q_range = Some((q[0], q[1]));
        }
        if self.farima_order.is_some() {
            c.farima_order = self.farima_order;
        }
        if self.base_level.is_some() {
            c.base_level = self.base_level;
        }
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut c = RunConfig::load(cli.config.as_deref())?;
    if cli.threads.is_some() {
        c.threads = cli.threads;
    }
    match &cli.command {
        Command::Tables { model } => model.apply(&mut c),
        Command::Generate { model, path } => {
            model.apply(&mut c);
            path.apply(&mut c);
        }
        Command::Validate { model, suite, quick, replicas } => {
            model.apply(&mut c);
            if let Some(s) = suite {
                c.suite = s.clone();
            }
            c.quick |= *quick;
            if replicas.is_some() {
                c.replicas = *replicas;
            }
        }
        Command::Sigma { model, level, k_lo, k_hi, farima_order, route, replica } => {
            model.apply(&mut c);
            if let Some(v) = level {
                c.level = *v;
            }
            if let Some(v) = k_lo {
                c.k_lo = *v;
            }
            if let Some(v) = k_hi {
                c.k_hi = *v;
            }
            if let Some(v) = route {
                c.route = *v;
            }
            if let Some(v) = replica {
                c.replica = *v;
            }
            if farima_order.is_some() {
                c.farima_order = *farima_order;
            }
        }
    }
    c.check()?;
    Ok(c)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<hermsim::Error>() {
        Some(hermsim::Error::Budget(_)) | Some(hermsim::Error::Size(_)) => 3,
        Some(hermsim::Error::Numerical(_)) => 1,
        Some(_) => 2,
        None => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    log::info!("resolved config: {}", serde_json::to_string(&cfg).unwrap_or_default());
    if let Some(n) = cfg.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure thread pool: {e}");
        }
    }
    let result = match &cli.command {
        Command::Tables { .. } => commands::tables(&cfg),
        Command::Generate { .. } => commands::generate(&cfg),
        Command::Validate { .. } => commands::validate(&cfg),
        Command::Sigma { .. } => commands::sigma(&cfg),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
