use std::path::PathBuf;

use bsrmg::lfa::RelaxationVariant;
use bsrmg::solver::{BsrConfig, InnerMgConfig, SchurMode, DEFAULT_MAX_ITERATIONS};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};
use crate::experiments::{
    lfa_smooth, lfa_two_grid, mg_measure, mg_solve, CycleKind, MgSettings, RunOptions, Sweep,
    VariantArg,
};
use crate::pool::threads_from_env;
use crate::reproduce::{render_diff, Table, MEASURE_CYCLES, SOLVE_TOL};
use crate::rows::{write_rows, Format};

/// Multigrid with Braess-Sarazin relaxation for elliptic distributed control,
/// and its local Fourier analysis.
///
/// Worker threads are taken from BSRMG_THREADS (default 1); output order does
/// not depend on it.
#[derive(Debug, Parser)]
#[command(name = "bsrmg", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for random initial guesses
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,

    /// Fill the runtime_ms column
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// LFA smoothing factor, optimized over ω unless --omega is given
    LfaSmooth(LfaSmoothArgs),
    /// LFA two-grid convergence factor of the stiffness relaxation (ω = 3/4)
    LfaTwoGrid(GridArgs),
    /// Measured asymptotic convergence factor on the homogeneous problem
    MgMeasure(MgMeasureArgs),
    /// Iterations to solve the peaked-target problem
    MgSolve(MgSolveArgs),
    /// Run one of the reference tables and diff against the tabulated values
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', default_value = "1e-2")]
    pub beta: Vec<f64>,
    /// Cells per side (h = 1/n), powers of two >= 8
    #[arg(long, value_delimiter = ',', default_value = "64")]
    pub n: Vec<usize>,
    /// Total smoothing steps, split as ν1 = ⌈ν/2⌉, ν2 = ⌊ν/2⌋
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub nu: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct LfaSmoothArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Stiffness)]
    pub variant: VariantArg,
    #[arg(long, value_delimiter = ',', default_value = "1e-2")]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "64")]
    pub n: Vec<usize>,
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// banded Cholesky on the Schur complement
    Exact,
    /// inner V-cycles on the Schur complement
    Inexact,
    /// conjugate gradients on the Schur complement
    Cg,
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = VariantArg::Stiffness)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = CycleKind::W)]
    pub cycle: CycleKind,
    /// Overrides the mode's default α
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Overrides the mode's default ω
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub cg_tol: f64,
    #[arg(long, default_value_t = 3)]
    pub inner_cycles: usize,
    #[arg(long, default_value_t = 0.8)]
    pub omega_j: f64,
    /// Write the finest-level operators as MatrixMarket files into DIR
    #[arg(long, value_name = "DIR")]
    pub export_matrices: Option<PathBuf>,
}

impl RelaxArgs {
    fn settings(&self, default_mode: ModeArg) -> Result<MgSettings> {
        let mode = self.mode.unwrap_or(default_mode);
        let variant: RelaxationVariant = self.variant.into();
        let mut bsr = match mode {
            ModeArg::Exact => BsrConfig::exact(),
            ModeArg::Inexact => BsrConfig {
                schur: SchurMode::InnerMg(InnerMgConfig {
                    n_cycles: self.inner_cycles,
                    omega_j: self.omega_j,
                    ..InnerMgConfig::default()
                }),
                ..BsrConfig::inexact()
            },
            ModeArg::Cg => BsrConfig {
                schur: SchurMode::Cg {
                    tol: self.cg_tol,
                    max_it: 100_000,
                },
                ..BsrConfig::exact()
            },
        };
        bsr.variant = variant;
        if variant == RelaxationVariant::DiagMass {
            // LFA optimum of the diagonal variant at α = 1
            bsr.omega = 8.0 / 7.0 * bsr.alpha;
        }
        if let Some(a) = self.alpha {
            bsr.omega *= a / bsr.alpha;
            bsr.alpha = a;
        }
        if let Some(w) = self.omega {
            bsr.omega = w;
        }
        bsr.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(MgSettings {
            cycle: self.cycle,
            bsr,
            export_dir: self.export_matrices.clone(),
        })
    }
}

#[derive(Debug, Args)]
pub struct MgMeasureArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub relax: RelaxArgs,
    #[arg(long, default_value_t = MEASURE_CYCLES)]
    pub cycles: usize,
}

#[derive(Debug, Args)]
pub struct MgSolveArgs {
    /// Use the settings of table 5 (ν = 1) or table 6 (ν = 2)
    #[arg(long, value_parser = clap::value_parser!(u8).range(5..=6))]
    pub table: Option<u8>,
    #[arg(long, value_delimiter = ',', default_value = "1e-2")]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "64")]
    pub n: Vec<usize>,
    /// Defaults to 1, or to the table's ν
    #[arg(long, value_delimiter = ',')]
    pub nu: Vec<usize>,
    #[command(flatten)]
    pub relax: RelaxArgs,
    #[arg(long, default_value_t = SOLVE_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_it: usize,
    #[arg(long, value_enum, default_value_t = StartArg::Random)]
    pub start: StartArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Random,
    Zero,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub table: Table,
    /// Add the n = 512 rows of tables 5 and 6
    #[arg(long = "include-512")]
    pub include_512: bool,
}

/// Runs a parsed command line, writing rows to the requested sink. The
/// reproduce diff goes to stderr.
pub fn run(cli: &Cli) -> Result<()> {
    let opts = RunOptions {
        seed: cli.seed,
        timing: cli.timing,
        threads: threads_from_env(),
    };
    let rows = match &cli.command {
        Command::LfaSmooth(a) => lfa_smooth(
            "lfa-smooth",
            a.variant.into(),
            &a.beta,
            &a.n,
            a.omega,
            &opts,
        )?,
        Command::LfaTwoGrid(a) => lfa_two_grid("lfa-two-grid", &sweep(a), &opts)?,
        Command::MgMeasure(a) => mg_measure(
            "mg-measure",
            &sweep(&a.grid),
            &a.relax.settings(ModeArg::Exact)?,
            a.cycles,
            &opts,
        )?,
        Command::MgSolve(a) => {
            let nus = match (a.nu.is_empty(), a.table) {
                (false, _) => a.nu.clone(),
                (true, Some(6)) => vec![2],
                (true, _) => vec![1],
            };
            let id = a
                .table
                .map_or_else(|| "mg-solve".to_string(), |t| format!("mg-solve-table{t}"));
            mg_solve(
                &id,
                &Sweep {
                    betas: a.beta.clone(),
                    ns: a.n.clone(),
                    nus,
                },
                &a.relax.settings(ModeArg::Inexact)?,
                a.tol,
                a.max_it,
                a.start == StartArg::Random,
                &opts,
            )?
        }
        Command::Reproduce(a) => {
            let rows = a.table.run(a.include_512, &opts)?;
            let comps = a.table.compare(&rows, a.include_512);
            eprint!("{}", render_diff(a.table, &comps));
            rows
        }
    };
    write_rows(&rows, cli.format, cli.output.as_deref())
}

fn sweep(a: &GridArgs) -> Sweep {
    Sweep {
        betas: a.beta.clone(),
        ns: a.n.clone(),
        nus: a.nu.clone(),
    }
}
