//! The `analyze`, `sweep`, `simulate` and `boundary` subcommands.

use std::path::PathBuf;

use hgda_core::ogda::stability_threshold;
use hgda_core::{
    analyze, analyze_uncertified, bisect_boundary, empirical_rate, eta_stability_boundary,
    nash_residual, ogda_verdict, optimal_learning_rate, replicate_history, simulate,
    simulated_verdict, GameMatrix, HgdaAnalysis, Tolerances, Trajectory, Verdict,
};
use rayon::prelude::*;

use crate::config::{BoundaryMethod, ExperimentConfig, Format};
use crate::error::CliError;
use crate::output::{ensure_dir, phase_portrait_svg, Cell, Table};

/// Largest block-companion disagreement accepted before reporting a
/// numerical failure.
pub const COMPANION_TOLERANCE: f64 = 1e-6;

/// What a command printed and wrote.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}: {value}"));
    }
}

/// Verdict and predicted spectral radius at one learning rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub verdict: Verdict,
    pub radius: f64,
}

fn run_analysis(cfg: &ExperimentConfig, game: &GameMatrix, eta: f64) -> Result<HgdaAnalysis, CliError> {
    let scheme = cfg.build_scheme(eta)?;
    let tol = Tolerances::DEFAULT;
    let an = if cfg.scheme.allow_uncertified {
        analyze_uncertified(&scheme, game, &tol)?
    } else {
        analyze(&scheme, game, &tol)?
    };
    if !(an.companion_mismatch <= COMPANION_TOLERANCE) {
        return Err(CliError::Numerical(format!(
            "analysed roots and block-companion eigenvalues differ by {:e} at eta = {eta}",
            an.companion_mismatch
        )));
    }
    Ok(an)
}

/// OGDA uses the exact closed form; other schemes the general pipeline.
pub fn predict(cfg: &ExperimentConfig, game: &GameMatrix, eta: f64) -> Result<Prediction, CliError> {
    if cfg.is_ogda() {
        let r = ogda_verdict(game, eta, &Tolerances::DEFAULT)?;
        return Ok(Prediction { verdict: r.verdict, radius: r.spectral_radius });
    }
    let an = run_analysis(cfg, game, eta)?;
    Ok(Prediction { verdict: an.verdict(), radius: an.spectral_radius() })
}

fn trajectory(cfg: &ExperimentConfig, game: &GameMatrix, eta: f64, steps: usize) -> Result<Trajectory, CliError> {
    let scheme = cfg.build_scheme(eta)?;
    let init = replicate_history(&cfg.initial_state(game.dim())?, scheme.horizon());
    Ok(simulate(&scheme, game, &init, steps, cfg.sim.guard)?)
}

fn wants(cfg: &ExperimentConfig, f: Format) -> bool {
    cfg.output.formats.contains(&f)
}

pub fn cmd_analyze(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let game = cfg.build_game()?;
    let eta = cfg.single_eta()?;
    let an = run_analysis(cfg, &game, eta)?;
    let mut out = Outcome::default();

    let (verdict, radius) = if cfg.is_ogda() {
        let r = ogda_verdict(&game, eta, &Tolerances::DEFAULT)?;
        (r.verdict, r.spectral_radius)
    } else {
        (an.verdict(), an.spectral_radius())
    };
    out.line("verdict", verdict);
    out.line("spectral_radius", format!("{radius:.6}"));
    if !an.nash_ok {
        out.line("note", "stability only, limits not certified as Nash equilibria");
    }
    if cfg.is_ogda() {
        out.line("eta_threshold", format!("{:.6}", stability_threshold(&game)));
        let opt = optimal_learning_rate(&game, &Tolerances::DEFAULT)?;
        out.line("eta_opt", format!("{:.6}", opt.eta));
        out.line("radius_opt", format!("{:.6}", opt.radius));
    }
    out.line("common_factor_degree", an.common.factor.degree().unwrap_or(0));
    out.line("companion_mismatch", format!("{:.3e}", an.companion_mismatch));

    if wants(cfg, Format::Csv) {
        let dir = ensure_dir(&cfg.output.dir)?;
        let mut t = Table::new(["re", "im", "modulus", "source"]);
        let n_common = an.common.factor_roots.len();
        let n_reduction = an.report.roots.len() - n_common;
        for (i, z) in an.report.roots.iter().enumerate() {
            let source = if i < n_reduction { "reduction" } else { "common" };
            t.push(vec![z.re.into(), z.im.into(), z.norm().into(), source.into()]);
        }
        let path = dir.join("roots.csv");
        t.write(&path)?;
        out.files.push(path);
    }
    Ok(out)
}

/// The sweep table: one row per learning rate, ascending.
pub fn sweep_table(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Table, CliError> {
    cfg.validate_sim()?;
    let game = cfg.build_game()?;
    let etas = cfg.sweep_etas()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads:?} worker threads: {e}")))?;

    let rows: Vec<Vec<Cell>> = pool.install(|| {
        etas.par_iter()
            .map(|&eta| {
                let p = predict(cfg, &game, eta)?;
                let rate = if p.verdict == Verdict::Stable && cfg.sim.enabled {
                    let traj = trajectory(cfg, &game, eta, cfg.sim.steps)?;
                    empirical_rate(&traj, cfg.sim.tail_fraction).ok()
                } else {
                    None
                };
                Ok(vec![eta.into(), p.verdict.as_str().into(), p.radius.into(), rate.into()])
            })
            .collect::<Result<_, CliError>>()
    })?;

    let mut t = Table::new(["eta", "verdict", "predicted_radius", "empirical_rate"]);
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub fn cmd_sweep(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Outcome, CliError> {
    let t = sweep_table(cfg, threads)?;
    let mut out = Outcome::default();
    out.line("points", t.rows.len());
    let best = t
        .rows
        .iter()
        .filter_map(|r| match (&r[0], &r[2]) {
            (Cell::Num(eta), Cell::Num(rad)) => Some((*eta, *rad)),
            _ => None,
        })
        .min_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((eta, rad)) = best {
        out.line("min_radius_eta", format!("{eta:.6}"));
        out.line("min_radius", format!("{rad:.6}"));
    }
    let dir = ensure_dir(&cfg.output.dir)?;
    let path = dir.join("sweep.csv");
    t.write(&path)?;
    out.files.push(path);
    Ok(out)
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate_sim()?;
    let game = cfg.build_game()?;
    let eta = cfg.single_eta()?;
    let traj = trajectory(cfg, &game, eta, cfg.sim.steps)?;
    let n = game.dim();
    let mut out = Outcome::default();

    out.line("final_norm", format!("{:e}", traj.final_residual()));
    match traj.diverged_at {
        Some(t) => out.line("diverged_at", t),
        None => out.line("diverged_at", "none"),
    }
    match empirical_rate(&traj, cfg.sim.tail_fraction) {
        Ok(r) => out.line("empirical_rate", format!("{r:.6}")),
        Err(e) => out.line("empirical_rate", format!("unavailable ({e})")),
    }
    if !traj.diverged() {
        let (rx, ry) = nash_residual(&traj, &game)?;
        out.line("nash_residual_x", format!("{rx:e}"));
        out.line("nash_residual_y", format!("{ry:e}"));
    }

    let dir = ensure_dir(&cfg.output.dir)?;
    if wants(cfg, Format::Csv) {
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=n).map(|i| format!("y{i}")));
        header.push("norm".into());
        let mut t = Table::new(header);
        for (step, (w, r)) in traj.states.iter().zip(&traj.residuals).enumerate() {
            let mut row = vec![Cell::Int(step as u64)];
            row.extend(w.x.iter().chain(&w.y).map(|&v| Cell::Num(v)));
            row.push(Cell::Num(*r));
            t.push(row);
        }
        let path = dir.join("trajectory.csv");
        t.write(&path)?;
        out.files.push(path);
    }
    if wants(cfg, Format::Svg) {
        if n == 1 {
            let pts: Vec<(f64, f64)> = traj.states.iter().map(|w| (w.x[0], w.y[0])).collect();
            let path = dir.join("phase.svg");
            std::fs::write(&path, phase_portrait_svg(&pts, &format!("eta = {eta}")))?;
            out.files.push(path);
        } else {
            out.line("svg", "skipped (phase portrait needs a 1x1 game)");
        }
    }
    Ok(out)
}

/// Stable/unstable transition point found by the requested method.
pub fn find_boundary(cfg: &ExperimentConfig, game: &GameMatrix, method: BoundaryMethod) -> Result<f64, CliError> {
    let b = &cfg.boundary;
    let (lo, hi) = match (b.lo, b.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(CliError::Config("boundary.lo and boundary.hi are required".into())),
    };
    let tol = Tolerances::DEFAULT;
    let width = b.width.unwrap_or(tol.boundary_bisection);
    match method {
        BoundaryMethod::Analytic => {
            if cfg.is_ogda() {
                Ok(bisect_boundary(lo, hi, width, |eta| Ok(ogda_verdict(game, eta, &tol)?.verdict))?)
            } else {
                let scheme = cfg.build_scheme(lo)?;
                let tol = Tolerances { boundary_bisection: width, ..tol };
                Ok(eta_stability_boundary(&scheme, game, (lo, hi), &tol)?)
            }
        }
        BoundaryMethod::Simulation => {
            if b.steps == 0 {
                return Err(CliError::Config("boundary.steps must be positive".into()));
            }
            let mut failure = None;
            let found = bisect_boundary(lo, hi, width, |eta| match trajectory(cfg, game, eta, b.steps) {
                Ok(traj) => simulated_verdict(&traj),
                Err(e) => {
                    failure = Some(e);
                    Ok(Verdict::Marginal)
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(found?)
        }
    }
}

pub fn cmd_boundary(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate_sim()?;
    let game = cfg.build_game()?;
    let mut out = Outcome::default();
    let mut t = Table::new(["method", "eta_star"]);
    for &m in &cfg.boundary.methods {
        let eta = find_boundary(cfg, &game, m)?;
        let name = match m {
            BoundaryMethod::Analytic => "analytic",
            BoundaryMethod::Simulation => "simulation",
        };
        out.line(&format!("eta_star_{name}"), format!("{eta:.6}"));
        t.push(vec![name.into(), eta.into()]);
    }
    if cfg.is_ogda() {
        out.line("eta_threshold", format!("{:.6}", stability_threshold(&game)));
    }
    if wants(cfg, Format::Csv) {
        let dir = ensure_dir(&cfg.output.dir)?;
        let path = dir.join("boundary.csv");
        t.write(&path)?;
        out.files.push(path);
    }
    Ok(out)
}
