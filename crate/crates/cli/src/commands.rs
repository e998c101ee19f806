use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use cframe_core::duality::{canonical_dual, is_dual_pair, riesz_type_check};
use cframe_core::frame::{classify, optimal_bounds, verify_operator_identities, AnalysisOptions, Bounds};
use cframe_core::scalar::ScalarMode;
use cframe_core::suite::{run_suite, SuiteKind};
use cframe_core::{FrameMap, FrameReport, IntegrationMode, Rational, Scalar, ToleranceConfig};

use crate::config::{frame_spec, JobConfig, ModeSpec};
use crate::presets::preset;
use crate::report::{
    flat_matrix, witness, BoundsSection, CheckEntry, DualSection, FlagsSection, PairSection, Provenance, Report, Status,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
/// Not a frame, not a dual pair, or a failing property.
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_UNCONVERGED: u8 = 3;

/// Overrides `equality_tol`.
pub const TOLERANCE_ENV: &str = "CFRAME_TOLERANCE";

#[derive(Debug, Clone)]
pub enum Source {
    Example(String),
    Path(PathBuf),
}

#[derive(Debug, Clone)]
pub struct JobOptions {
    pub source: Source,
    pub grid: Option<usize>,
    pub exact: bool,
    /// Value of the tolerance environment variable, if set.
    pub tolerance_override: Option<String>,
}

impl JobOptions {
    pub fn example(name: &str) -> Self {
        Self {
            source: Source::Example(name.into()),
            grid: None,
            exact: false,
            tolerance_override: None,
        }
    }

    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn grid(mut self, grid: usize) -> Self {
        self.grid = Some(grid);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit: u8,
}

/// Loads the configuration and applies `--exact` and `--grid`.
pub fn load(opts: &JobOptions) -> Result<JobConfig> {
    let mut config = match &opts.source {
        Source::Example(name) => preset(name)?,
        Source::Path(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            JobConfig::from_json(&text).with_context(|| format!("invalid config {}", path.display()))?
        }
    };
    if opts.exact {
        config.algebra.scalar_mode = ModeSpec::Rational;
    }
    if let Some(g) = opts.grid {
        config.grid_size = g;
    }
    config.validate()?;
    Ok(config)
}

fn tolerances(config: &JobConfig, opts: &JobOptions) -> Result<ToleranceConfig> {
    let mut cfg = config.tolerance_config()?;
    if let Some(raw) = &opts.tolerance_override {
        let tol: f64 = raw
            .trim()
            .parse()
            .with_context(|| format!("{TOLERANCE_ENV}={raw:?} is not a number"))?;
        cfg.equality_tol = tol;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn analysis_options<T: Scalar>(config: &JobConfig, cfg: ToleranceConfig) -> AnalysisOptions {
    let mode = if T::exact() {
        IntegrationMode::Exact
    } else {
        IntegrationMode::Quadrature {
            panels: config.grid_size,
        }
    };
    AnalysisOptions::new::<T>().with_tolerances(cfg).with_mode(mode)
}

#[derive(Clone, Copy)]
enum Command {
    Analyze,
    Dual,
    VerifyPair,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Dual => "dual",
            Command::VerifyPair => "verify-pair",
        }
    }
}

pub fn analyze(opts: &JobOptions) -> Result<Outcome> {
    run_job(Command::Analyze, opts)
}

pub fn dual(opts: &JobOptions) -> Result<Outcome> {
    run_job(Command::Dual, opts)
}

pub fn verify_pair(opts: &JobOptions) -> Result<Outcome> {
    run_job(Command::VerifyPair, opts)
}

fn run_job(cmd: Command, opts: &JobOptions) -> Result<Outcome> {
    let config = load(opts)?;
    let cfg = tolerances(&config, opts)?;
    let report = match config.scalar_mode() {
        ScalarMode::Float => job::<f64>(cmd, &config, cfg)?,
        ScalarMode::Rational => job::<Rational>(cmd, &config, cfg)?,
    };
    let exit = match report.status {
        Status::Ok => EXIT_OK,
        Status::NotAFrame | Status::NotDual => EXIT_NEGATIVE,
        Status::Unconverged => EXIT_UNCONVERGED,
    };
    Ok(Outcome {
        text: report.to_json(),
        exit,
    })
}

/// Analysis shared by every job command.
fn base_report<T: Scalar>(
    cmd: Command,
    config: &JobConfig,
    f: &FrameMap<T>,
    opts: &AnalysisOptions,
) -> Result<(Report, FrameReport<T>)> {
    let cfg = &opts.tolerances;
    let fr = classify(f, opts)?;
    let checks = verify_operator_identities(f, opts)?;
    let bounds = Bounds {
        lower: fr.lower_bound.clone(),
        upper: fr.upper_bound.clone(),
        exact: fr.exact_bounds,
    };
    let status = if fr.unconverged {
        Status::Unconverged
    } else if fr.is_frame {
        Status::Ok
    } else {
        Status::NotAFrame
    };
    let report = Report {
        command: cmd.name(),
        status,
        bounds: BoundsSection::new(&bounds, cfg),
        flags: FlagsSection::new(&fr),
        witness_low: witness(&fr),
        moment: flat_matrix(&fr.moment),
        checks: checks.iter().map(CheckEntry::from).collect(),
        dual: None,
        pair: None,
        diagnostic: None,
        config: config.clone(),
        provenance: Provenance::new(config),
    };
    Ok((report, fr))
}

fn job<T: Scalar>(cmd: Command, config: &JobConfig, cfg: ToleranceConfig) -> Result<Report> {
    let opts = analysis_options::<T>(config, cfg);
    let f = config.frame::<T>()?;
    let (mut report, fr) = base_report(cmd, config, &f, &opts)?;
    match cmd {
        Command::Analyze => {}
        Command::Dual => {
            if !fr.is_frame {
                report.diagnostic = Some(format!(
                    "frame operator is singular: lower bound {} does not exceed {:e}",
                    fr.lower_bound, cfg.positivity_tol
                ));
                report.status = Status::NotAFrame;
                return Ok(report);
            }
            let g = canonical_dual(&f, &opts)?;
            let gb = optimal_bounds(&g, &opts)?;
            let pair = is_dual_pair(&f, &g, &opts)?;
            let riesz_type = if f.measure().is_atomic() {
                riesz_type_check(&f, &opts)?.riesz_type
            } else {
                None
            };
            if !pair.is_dual_pair && report.status == Status::Ok {
                report.status = Status::NotDual;
            }
            report.dual = Some(DualSection {
                frame: frame_spec(&g),
                bounds: BoundsSection::new(&gb, &cfg),
                is_dual_pair: pair.is_dual_pair,
                identity_residual: pair.identity_residual,
                tolerance: cfg.equality_tol,
                riesz_type,
            });
        }
        Command::VerifyPair => {
            let Some(g) = config.second_frame::<T>()? else {
                bail!("verify-pair needs a second_frame in the config");
            };
            let pair = is_dual_pair(&f, &g, &opts)?;
            let gb = optimal_bounds(&g, &opts)?;
            report.status = match (pair.is_dual_pair, report.status) {
                (_, Status::Unconverged) => Status::Unconverged,
                (true, _) => Status::Ok,
                (false, _) => Status::NotDual,
            };
            report.pair = Some(PairSection {
                is_dual_pair: pair.is_dual_pair,
                exact: T::exact(),
                cross_moment: flat_matrix(&pair.cross_moment),
                identity_residual: pair.identity_residual,
                tolerance: cfg.equality_tol,
                second_bounds: BoundsSection::new(&gb, &cfg),
            });
        }
    }
    Ok(report)
}

/// Runs a property suite and renders one line per property.
pub fn check(suite: SuiteKind, seed: u64, cases: usize) -> Result<Outcome> {
    let report = run_suite(suite, seed, cases)?;
    let mut text = String::new();
    writeln!(text, "suite {suite} seed {seed} cases {cases}")?;
    for p in &report.properties {
        write!(
            text,
            "{:<10} {:<30} {:>5}/{:<5} worst {:e}",
            p.suite, p.name, p.passed, p.total, p.worst_residual
        )?;
        if let Some(fail) = &p.first_failure {
            write!(text, "  first failure: {fail}")?;
        }
        text.push('\n');
    }
    let pass = report.all_pass();
    writeln!(text, "result: {}", if pass { "pass" } else { "fail" })?;
    Ok(Outcome {
        text,
        exit: if pass { EXIT_OK } else { EXIT_NEGATIVE },
    })
}
