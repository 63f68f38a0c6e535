//! Time-domain simulation of scheme dynamics on bilinear games.

use crate::error::{Error, Result};
use crate::matrix::GameMatrix;
use crate::scheme::HgdaScheme;
use crate::stability::Verdict;

/// Default fraction of the trajectory used for rate regression.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

const MIN_RATE_POINTS: usize = 10;

/// Joint strategy `w = (x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl JointState {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    pub fn zeros(n: usize) -> Self {
        Self { x: vec![0.0; n], y: vec![0.0; n] }
    }

    /// Euclidean norm of the concatenation `(x, y)`.
    pub fn norm(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { x: self.x.iter().map(|v| v * c).collect(), y: self.y.iter().map(|v| v * c).collect() }
    }
}

/// `k` copies of `seed`: the default history for a horizon-`k` scheme.
pub fn replicate_history(seed: &JointState, k: usize) -> Vec<JointState> {
    vec![seed.clone(); k]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `states[t]` for `t = 0..=T`, truncated at the divergence step.
    pub states: Vec<JointState>,
    /// Requested number of steps `T`.
    pub steps: usize,
    /// `‖w_t‖` for every stored state.
    pub residuals: Vec<f64>,
    /// First step whose norm exceeded the guard.
    pub diverged_at: Option<usize>,
}

impl Trajectory {
    pub fn last(&self) -> &JointState {
        self.states.last().expect("trajectory holds at least the initial history")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().expect("trajectory holds at least the initial history")
    }

    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }
}

/// Iterates the scheme from the initial history `init = [w_0, …, w_{k-1}]`
/// up to `w_T`, with `∇_x f = A y` and `∇_y f = Aᵀ x`. Stops early once
/// `‖w_t‖ > guard`.
pub fn simulate(
    scheme: &HgdaScheme,
    game: &GameMatrix,
    init: &[JointState],
    steps: usize,
    guard: f64,
) -> Result<Trajectory> {
    let k = scheme.horizon();
    let n = game.dim();
    if init.len() != k {
        return Err(Error::InvalidInput(format!(
            "scheme of horizon {k} needs {k} initial states, got {}",
            init.len()
        )));
    }
    if let Some(bad) = init.iter().position(|w| w.x.len() != n || w.y.len() != n) {
        return Err(Error::InvalidInput(format!(
            "initial state {bad} does not match the {n}x{n} game"
        )));
    }
    if steps < k {
        return Err(Error::InvalidInput(format!("need at least {k} steps, got {steps}")));
    }
    if !(guard > 0.0) {
        return Err(Error::InvalidInput(format!("divergence guard must be positive, got {guard}")));
    }
    let a = game.entries();
    let eta = scheme.eta();

    let mut states: Vec<JointState> = init.to_vec();
    let mut residuals: Vec<f64> = states.iter().map(JointState::norm).collect();
    // Gradients of the stored states: (A y_t, Aᵀ x_t).
    let mut grads: Vec<(Vec<f64>, Vec<f64>)> =
        states.iter().map(|w| (a.mul_vec(&w.y), a.tr_mul_vec(&w.x))).collect();
    let mut diverged_at = residuals.iter().position(|&r| r > guard);

    let mut t = k;
    while t <= steps && diverged_at.is_none() {
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 1..=k {
            let (p, q) = (scheme.p()[i - 1], scheme.q()[i - 1]);
            let prev = &states[t - i];
            let (gx, gy) = &grads[t - i];
            for j in 0..n {
                x[j] += p * prev.x[j] - eta * q * gx[j];
                y[j] += p * prev.y[j] + eta * q * gy[j];
            }
        }
        let w = JointState { x, y };
        let r = w.norm();
        grads.push((a.mul_vec(&w.y), a.tr_mul_vec(&w.x)));
        states.push(w);
        residuals.push(r);
        if !(r <= guard) {
            diverged_at = Some(t);
        }
        t += 1;
    }

    Ok(Trajectory { states, steps, residuals, diverged_at })
}

/// Per-step contraction factor: `exp` of the least-squares slope of
/// `ln ‖w_t‖` over the final `tail_fraction` of the trajectory. The window
/// ends before the first exact zero residual.
pub fn empirical_rate(traj: &Trajectory, tail_fraction: f64) -> Result<f64> {
    rate_from_residuals(&traj.residuals, tail_fraction)
}

/// [`empirical_rate`] on a raw residual sequence.
pub fn rate_from_residuals(residuals: &[f64], tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "tail fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let usable = residuals.iter().position(|&r| r == 0.0).unwrap_or(residuals.len());
    let window = ((usable as f64) * tail_fraction).floor() as usize;
    if window < MIN_RATE_POINTS {
        return Err(Error::InsufficientData(format!(
            "{window} usable residuals in the tail window, need {MIN_RATE_POINTS}"
        )));
    }
    let start = usable - window;
    let pts: Vec<(f64, f64)> =
        (start..usable).map(|t| (t as f64, residuals[t].ln())).collect();
    if pts.iter().any(|(_, v)| !v.is_finite()) {
        return Err(Error::InsufficientData("non-finite residual in the tail window".into()));
    }
    let m = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_v = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(t, v)| (t - mean_t) * (v - mean_v)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - mean_t) * (t - mean_t)).sum();
    Ok((sxy / sxx).exp())
}

/// `(‖A y_T‖, ‖Aᵀ x_T‖)` at the final state; both vanish at a Nash
/// equilibrium.
pub fn nash_residual(traj: &Trajectory, game: &GameMatrix) -> Result<(f64, f64)> {
    if let Some(t) = traj.diverged_at {
        return Err(Error::InvalidInput(format!(
            "trajectory diverged at step {t}; no limit to evaluate"
        )));
    }
    let w = traj.last();
    let a = game.entries();
    let norm = |v: Vec<f64>| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok((norm(a.mul_vec(&w.y)), norm(a.tr_mul_vec(&w.x))))
}

/// Residual below which a simulated run counts as converged outright.
const CONVERGED_FLOOR: f64 = 1e-200;

/// Classifies a trajectory by its behaviour: divergence past the guard or a
/// growing tail is unstable, a vanishing or shrinking tail is stable.
pub fn simulated_verdict(traj: &Trajectory) -> Result<Verdict> {
    if traj.diverged() {
        return Ok(Verdict::Unstable);
    }
    if traj.final_residual() < CONVERGED_FLOOR {
        return Ok(Verdict::Stable);
    }
    let rate = empirical_rate(traj, DEFAULT_TAIL_FRACTION)?;
    Ok(if rate < 1.0 {
        Verdict::Stable
    } else if rate > 1.0 {
        Verdict::Unstable
    } else {
        Verdict::Marginal
    })
}
