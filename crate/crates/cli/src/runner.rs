//! Single restorations and sweep grids, with all artifacts written under one
//! output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ogstv_core::{
    blur_operator, degrade, project_box, psnr, solve_with_observer, ImageGrid, NoiseSpec,
    QualityReport, SolveReport, SolverParams, Termination,
};

use crate::config::{default_mu, KernelChoice, SolverOverrides, SweepConfig};
use crate::error::{CliError, Result};
use crate::pgm;

pub const RESULTS_CSV_HEADER: &str = "image,kernel,level,seed,mu,iters,psnr_db,ree,seconds,status";
pub const TRACE_CSV_HEADER: &str = "iter,objective,psnr_db,seconds";

/// Fully resolved single-run request.
#[derive(Debug, Clone)]
pub struct RestoreArgs {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    pub kernel: KernelChoice,
    pub noise_level: Option<f64>,
    pub seed: u64,
    pub mu: Option<f64>,
    pub overrides: SolverOverrides,
    /// Treat the input as clean and degrade it first.
    pub degrade_input: bool,
    pub reference: Option<PathBuf>,
    pub emit_trace: bool,
}

#[derive(Debug)]
pub struct RestoreOutcome {
    pub quality: Option<QualityReport>,
    pub iterations: usize,
    pub seconds: f64,
    pub restored_path: PathBuf,
}

fn resolve_mu(args_mu: Option<f64>, kernel: &KernelChoice, level: Option<f64>) -> Result<f64> {
    if let Some(mu) = args_mu {
        return Ok(mu);
    }
    level
        .and_then(|l| default_mu(&kernel.spec, l))
        .ok_or_else(|| {
            CliError::usage(format!(
                "--mu is required: no built-in value for kernel `{}` at this noise level",
                kernel.label
            ))
        })
}

/// Reads the input, optionally degrades it, solves, and writes the restored
/// image plus quality, trace and replay-config files into the output dir.
pub fn run_restore(args: &RestoreArgs) -> Result<RestoreOutcome> {
    let input = pgm::read_image(&args.input)?;
    let mu = resolve_mu(args.mu, &args.kernel, args.noise_level)?;
    let params = args
        .overrides
        .apply(mu)
        .map_err(CliError::Usage)?;

    fs::create_dir_all(&args.output_dir).map_err(|e| CliError::io(&args.output_dir, e))?;

    let mut reference = match &args.reference {
        Some(path) => Some(pgm::read_image(path)?),
        None => None,
    };

    let observed = if args.degrade_input {
        if reference.is_none() {
            reference = Some(input.clone());
        }
        let noise = NoiseSpec::new(args.noise_level.unwrap_or(0.0), args.seed)
            .map_err(CliError::Core)?;
        let g = degrade(&input, &args.kernel.spec, &noise)?;
        pgm::write_image(&g, &args.output_dir.join("degraded.pgm"))?;
        g
    } else {
        input
    };

    let blur = blur_operator(&args.kernel.spec, observed.height(), observed.width())?;

    let mut trace_rows = Vec::new();
    let started = Instant::now();
    let report = {
        let reference = reference.as_ref();
        solve_with_observer(&observed, &blur, &params, |snap| {
            let psnr_db = reference
                .and_then(|r| psnr(snap.estimate, r, 1.0).ok())
                .unwrap_or(f64::NAN);
            trace_rows.push((
                snap.iteration,
                snap.objective,
                psnr_db,
                snap.elapsed.as_secs_f64(),
            ));
        })?
    };
    let seconds = started.elapsed().as_secs_f64();

    let restored_path = args.output_dir.join("restored.pgm");
    let display = project_box(&report.restored, params.box_range);
    pgm::write_image(&display, &restored_path)?;

    let quality = match &reference {
        Some(r) => Some(QualityReport::compute(&report.restored, r, 1.0)?),
        None => None,
    };

    write_quality_file(
        &args.output_dir.join("quality.txt"),
        quality.as_ref(),
        &report,
        seconds,
    )?;
    if args.emit_trace {
        let mut csv = String::from(TRACE_CSV_HEADER);
        csv.push('\n');
        for (iter, objective, psnr_db, secs) in &trace_rows {
            writeln!(csv, "{iter},{objective},{psnr_db},{secs}").expect("string write");
        }
        let path = args.output_dir.join("trace.csv");
        fs::write(&path, csv).map_err(|e| CliError::io(&path, e))?;
    }
    write_replay_config(args, mu, &params)?;

    Ok(RestoreOutcome {
        quality,
        iterations: report.iterations,
        seconds,
        restored_path,
    })
}

fn write_quality_file(
    path: &Path,
    quality: Option<&QualityReport>,
    report: &SolveReport,
    seconds: f64,
) -> Result<()> {
    let mut text = String::new();
    match quality {
        Some(q) => {
            writeln!(text, "psnr_db = {}", q.psnr_db).unwrap();
            writeln!(text, "ree = {}", q.relative_error).unwrap();
            writeln!(text, "max_intensity = {}", q.max_intensity).unwrap();
        }
        None => {
            writeln!(text, "psnr_db = nan").unwrap();
            writeln!(text, "ree = nan").unwrap();
        }
    }
    writeln!(text, "iterations = {}", report.iterations).unwrap();
    writeln!(text, "seconds = {seconds}").unwrap();
    writeln!(
        text,
        "termination = {}",
        match report.termination {
            Termination::Converged => "converged",
            Termination::IterationCap => "iteration_cap",
        }
    )
    .unwrap();
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// The resolved configuration, sufficient to replay the run bit-for-bit.
fn write_replay_config(args: &RestoreArgs, mu: f64, params: &SolverParams) -> Result<()> {
    let mut text = String::new();
    writeln!(text, "input = {}", args.input.display()).unwrap();
    writeln!(text, "kernel = {}", args.kernel.label).unwrap();
    if let Some(level) = args.noise_level {
        writeln!(text, "noise = {level}").unwrap();
    }
    writeln!(text, "seed = {}", args.seed).unwrap();
    writeln!(text, "degrade = {}", args.degrade_input).unwrap();
    if let Some(reference) = &args.reference {
        writeln!(text, "reference = {}", reference.display()).unwrap();
    }
    writeln!(text, "mu = {mu}").unwrap();
    writeln!(text, "beta1 = {}", params.beta1).unwrap();
    writeln!(text, "beta2 = {}", params.beta2).unwrap();
    writeln!(text, "beta3 = {}", params.beta3).unwrap();
    writeln!(text, "gamma = {}", params.gamma).unwrap();
    writeln!(text, "group_size = {}", params.group.size()).unwrap();
    writeln!(text, "inner_iters = {}", params.inner.max_inner_iterations).unwrap();
    writeln!(text, "tol = {}", params.outer_tolerance).unwrap();
    writeln!(text, "max_iters = {}", params.max_outer_iterations).unwrap();
    let path = args.output_dir.join("run_config.txt");
    fs::write(&path, text).map_err(|e| CliError::io(&path, e))
}

/// One row of the sweep results table.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub image: String,
    pub kernel: String,
    pub level: f64,
    pub seed: u64,
    pub mu: f64,
    pub iterations: usize,
    pub psnr_db: f64,
    pub relative_error: f64,
    pub seconds: f64,
    pub status: String,
}

impl ResultRow {
    fn to_csv(&self) -> String {
        // commas in failure text would break the fixed schema
        let status = self.status.replace(',', ";");
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.image,
            self.kernel,
            self.level,
            self.seed,
            self.mu,
            self.iterations,
            self.psnr_db,
            self.relative_error,
            self.seconds,
            status
        )
    }
}

/// Runs the full levels x seeds grid over one clean image and writes
/// `results.csv`. Per-run failures land in the row's status column without
/// aborting the sweep. Returns the rows alongside the CSV path.
pub fn run_sweep(
    config: &SweepConfig,
    output_dir: &Path,
    cli_overrides: &SolverOverrides,
) -> Result<(PathBuf, Vec<ResultRow>)> {
    config.validate().map_err(CliError::Usage)?;
    fs::create_dir_all(output_dir).map_err(|e| CliError::io(output_dir, e))?;
    let clean = pgm::read_image(&config.image)?;
    let image_id = config
        .image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into());
    let overrides = config.solver.merged_with(cli_overrides);

    let mut rows = Vec::new();
    for &level in &config.levels {
        for &seed in &config.seeds {
            let mu = config
                .resolve_mu(level)
                .expect("validated mu coverage");
            let mut row = ResultRow {
                image: image_id.clone(),
                kernel: config.kernel.label.clone(),
                level,
                seed,
                mu,
                iterations: 0,
                psnr_db: f64::NAN,
                relative_error: f64::NAN,
                seconds: 0.0,
                status: "ok".into(),
            };
            match sweep_single(&clean, config, level, seed, mu, &overrides) {
                Ok((report, quality, seconds)) => {
                    row.iterations = report.iterations;
                    row.psnr_db = quality.psnr_db;
                    row.relative_error = quality.relative_error;
                    row.seconds = seconds;
                }
                Err(err) => row.status = err.to_string(),
            }
            rows.push(row);
        }
    }

    let mut csv = String::from(RESULTS_CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    let csv_path = output_dir.join("results.csv");
    fs::write(&csv_path, csv).map_err(|e| CliError::io(&csv_path, e))?;
    Ok((csv_path, rows))
}

fn sweep_single(
    clean: &ImageGrid,
    config: &SweepConfig,
    level: f64,
    seed: u64,
    mu: f64,
    overrides: &SolverOverrides,
) -> Result<(SolveReport, QualityReport, f64)> {
    let params = overrides.apply(mu).map_err(CliError::Usage)?;
    let noise = NoiseSpec::new(level, seed)?;
    let g = degrade(clean, &config.kernel.spec, &noise)?;
    let blur = blur_operator(&config.kernel.spec, g.height(), g.width())?;
    let started = Instant::now();
    let report = ogstv_core::solve(&g, &blur, &params)?;
    let seconds = started.elapsed().as_secs_f64();
    let quality = QualityReport::compute(&report.restored, clean, 1.0)?;
    Ok((report, quality, seconds))
}
