use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bsrmg::discretization::{assemble_rhs, ProblemData, UniformGrid};
use bsrmg::lfa::{optimal_smoothing, smoothing_factor, two_grid_factor, RelaxationVariant};
use bsrmg::lfa::{TwoGridConfig, DEFAULT_DENSITY};
use bsrmg::linalg::CsrMatrix;
use bsrmg::solver::{BsrConfig, CycleConfig, InitialGuess, MgHierarchy};
use clap::ValueEnum;

use crate::error::{CliError, Result};
use crate::pool::parallel_map;
use crate::rows::{Metric, ResultRow};

/// Parameter lists crossed into runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub betas: Vec<f64>,
    /// cells per side; `h = 1/n`
    pub ns: Vec<usize>,
    pub nus: Vec<usize>,
}

impl Sweep {
    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.ns.is_empty() || self.nus.is_empty() {
            return Err(CliError::Usage(
                "beta, n and nu lists must be nonempty".into(),
            ));
        }
        if let Some(b) = self.betas.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
            return Err(CliError::Usage(format!("beta must be positive, got {b}")));
        }
        if let Some(n) = self.ns.iter().find(|n| **n < 8 || !n.is_power_of_two()) {
            return Err(CliError::Usage(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if self.nus.contains(&0) {
            return Err(CliError::Usage("nu must be at least 1".into()));
        }
        Ok(())
    }

    fn grids(&self) -> Vec<(f64, usize)> {
        self.betas
            .iter()
            .flat_map(|&b| self.ns.iter().map(move |&n| (b, n)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub timing: bool,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CycleKind {
    V,
    W,
}

impl CycleKind {
    pub fn config(self, nu: usize) -> CycleConfig {
        match self {
            Self::V => CycleConfig::v(nu),
            Self::W => CycleConfig::w(nu),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Stiffness,
    Diag,
}

impl From<VariantArg> for RelaxationVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Stiffness => RelaxationVariant::Stiffness,
            VariantArg::Diag => RelaxationVariant::DiagMass,
        }
    }
}

struct Stamp {
    start: Instant,
    enabled: bool,
}

impl Stamp {
    fn start(enabled: bool) -> Self {
        Self {
            start: Instant::now(),
            enabled,
        }
    }

    fn ms(&self) -> Option<u64> {
        self.enabled
            .then(|| self.start.elapsed().as_millis() as u64)
    }
}

#[allow(clippy::too_many_arguments)]
fn row(
    experiment: &str,
    beta: f64,
    n: usize,
    cycle: CycleConfig,
    metric: Metric,
    value: Option<f64>,
    runtime_ms: Option<u64>,
    seed: Option<u64>,
) -> ResultRow {
    ResultRow {
        experiment: experiment.to_string(),
        beta,
        h: 1.0 / n as f64,
        nu1: cycle.nu1,
        nu2: cycle.nu2,
        metric,
        value,
        runtime_ms,
        seed,
    }
}

fn flatten(results: Vec<Result<Vec<ResultRow>>>) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Optimal (or fixed-ω) LFA smoothing factor per `(β, n)`: an `omega` row
/// and a `mu` row each.
pub fn lfa_smooth(
    experiment: &str,
    variant: RelaxationVariant,
    betas: &[f64],
    ns: &[usize],
    omega: Option<f64>,
    opts: &RunOptions,
) -> Result<Vec<ResultRow>> {
    let sweep = Sweep {
        betas: betas.to_vec(),
        ns: ns.to_vec(),
        nus: vec![1],
    };
    sweep.validate()?;
    let one = CycleConfig::split(1, 1);
    let results = parallel_map(&sweep.grids(), opts.threads, |&(beta, n)| {
        let stamp = Stamp::start(opts.timing);
        let h = 1.0 / n as f64;
        let (w, mu) = match omega {
            Some(w) => (w, smoothing_factor(w, variant, beta, h, DEFAULT_DENSITY)?),
            None => optimal_smoothing(variant, beta, h)?,
        };
        let ms = stamp.ms();
        Ok(vec![
            row(experiment, beta, n, one, Metric::Omega, Some(w), ms, None),
            row(experiment, beta, n, one, Metric::Mu, Some(mu), ms, None),
        ])
    });
    flatten(results)
}

/// LFA two-grid factor of the stiffness relaxation with `ω = 3/4`.
pub fn lfa_two_grid(experiment: &str, sweep: &Sweep, opts: &RunOptions) -> Result<Vec<ResultRow>> {
    sweep.validate()?;
    let tasks: Vec<(f64, usize, usize)> = sweep
        .grids()
        .into_iter()
        .flat_map(|(b, n)| sweep.nus.iter().map(move |&nu| (b, n, nu)))
        .collect();
    let results = parallel_map(&tasks, opts.threads, |&(beta, n, nu)| {
        let stamp = Stamp::start(opts.timing);
        let split = CycleConfig::split(nu, 2);
        let cfg = TwoGridConfig::stiffness(beta, 1.0 / n as f64, split.nu1, split.nu2);
        let rho = two_grid_factor(&cfg)?;
        Ok(vec![row(
            experiment,
            beta,
            n,
            split,
            Metric::RhoLfa,
            Some(rho),
            stamp.ms(),
            None,
        )])
    });
    flatten(results)
}

/// Multigrid settings shared by measurement and solve runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MgSettings {
    pub cycle: CycleKind,
    pub bsr: BsrConfig,
    pub export_dir: Option<PathBuf>,
}

/// Measured asymptotic factor on the homogeneous problem from a seeded
/// random start. One hierarchy per `(β, n)` serves every ν.
pub fn mg_measure(
    experiment: &str,
    sweep: &Sweep,
    settings: &MgSettings,
    n_cycles: usize,
    opts: &RunOptions,
) -> Result<Vec<ResultRow>> {
    sweep.validate()?;
    if n_cycles == 0 {
        return Err(CliError::Usage("cycles must be at least 1".into()));
    }
    let results = parallel_map(&sweep.grids(), opts.threads, |&(beta, n)| {
        let mg = MgHierarchy::build(n, beta, settings.bsr)?;
        export(&mg, settings, beta, n)?;
        let mut rows = Vec::new();
        for &nu in &sweep.nus {
            let stamp = Stamp::start(opts.timing);
            let cycle = settings.cycle.config(nu);
            let report = mg.measure_rho(&cycle, n_cycles, opts.seed)?;
            rows.push(row(
                experiment,
                beta,
                n,
                cycle,
                Metric::RhoHat,
                Some(report.rho_hat),
                stamp.ms(),
                Some(opts.seed),
            ));
        }
        Ok(rows)
    });
    flatten(results)
}

/// Iterations to reduce the residual of the peaked-target problem by `tol`.
pub fn mg_solve(
    experiment: &str,
    sweep: &Sweep,
    settings: &MgSettings,
    tol: f64,
    max_it: usize,
    random_start: bool,
    opts: &RunOptions,
) -> Result<Vec<ResultRow>> {
    sweep.validate()?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!(
            "tol must lie in (0, 1), got {tol}"
        )));
    }
    let initial = if random_start {
        InitialGuess::Random { seed: opts.seed }
    } else {
        InitialGuess::Zero
    };
    let results = parallel_map(&sweep.grids(), opts.threads, |&(beta, n)| {
        let mg = MgHierarchy::build(n, beta, settings.bsr)?;
        export(&mg, settings, beta, n)?;
        let rhs = assemble_rhs(&ProblemData::peaked_target(UniformGrid::new(n)?));
        let mut rows = Vec::new();
        for &nu in &sweep.nus {
            let stamp = Stamp::start(opts.timing);
            let cycle = settings.cycle.config(nu);
            let sol = mg.solve_to_tol(&rhs, &cycle, tol, max_it, initial)?;
            rows.push(row(
                experiment,
                beta,
                n,
                cycle,
                Metric::Iters,
                sol.report.iterations_to_tol.map(|k| k as f64),
                stamp.ms(),
                random_start.then_some(opts.seed),
            ));
        }
        Ok(rows)
    });
    flatten(results)
}

/// Writes the finest-level blocks and the first prolongation as
/// MatrixMarket files named `n{n}_beta{β}_{block}.mtx`.
fn export(mg: &MgHierarchy, settings: &MgSettings, beta: f64, n: usize) -> Result<()> {
    let Some(dir) = &settings.export_dir else {
        return Ok(());
    };
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let sys = mg.system(0);
    let mut blocks: Vec<(&str, &CsrMatrix)> = vec![
        ("L", &sys.operator),
        ("M", &sys.mass),
        ("K", &sys.stiffness),
        ("Afd", &sys.a_fd),
    ];
    if mg.num_levels() > 1 {
        blocks.push(("P", &mg.transfer(0).prolongation));
    }
    for (name, m) in blocks {
        let path = dir.join(format!("n{n}_beta{beta:e}_{name}.mtx"));
        let file = File::create(&path).map_err(io_err(&path))?;
        m.write_matrix_market(BufWriter::new(file))
            .map_err(io_err(&path))?;
    }
    Ok(())
}
