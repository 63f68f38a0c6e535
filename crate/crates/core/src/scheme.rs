//! Members of the historical gradient descent/ascent family.
//!
//! A scheme of horizon `k` updates both players from their last `k` joint
//! states:
//!
//! ```text
//! x_{t+k} = Σ p_i x_{t+k-i} - η Σ q_i ∇_x f(x_{t+k-i}, y_{t+k-i})
//! y_{t+k} = Σ p_i y_{t+k-i} + η Σ q_i ∇_y f(x_{t+k-i}, y_{t+k-i})
//! ```

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct HgdaScheme {
    p: Vec<f64>,
    q: Vec<f64>,
    eta: f64,
    nash_compatible: bool,
}

impl HgdaScheme {
    /// `p` are the smoothness weights, `q` the gradient weights; both have
    /// length `k >= 1`. `eta` may be negative.
    pub fn new(p: Vec<f64>, q: Vec<f64>, eta: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidInput("scheme horizon must be at least 1".into()));
        }
        if p.len() != q.len() {
            return Err(Error::InvalidInput(format!(
                "p has {} weights but q has {}",
                p.len(),
                q.len()
            )));
        }
        if p.iter().chain(&q).any(|v| !v.is_finite()) || !eta.is_finite() {
            return Err(Error::InvalidInput("scheme parameters must be finite".into()));
        }
        let nash_compatible = nash_conditions(&p, &q).is_ok();
        Ok(Self { p, q, eta, nash_compatible })
    }

    /// Plain simultaneous gradient descent/ascent: k = 1, p = (1), q = (1).
    pub fn gda(eta: f64) -> Self {
        Self { p: vec![1.0], q: vec![1.0], eta, nash_compatible: true }
    }

    /// Optimistic GDA: k = 2, p = (1, 0), q = (2, -1).
    pub fn ogda(eta: f64) -> Self {
        Self { p: vec![1.0, 0.0], q: vec![2.0, -1.0], eta, nash_compatible: true }
    }

    /// Same weights, different learning rate.
    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..self.clone() }
    }

    pub fn horizon(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `Σ p_i = 1` and `Σ q_i != 0`: limit points, if any, are Nash equilibria.
    pub fn nash_compatible(&self) -> bool {
        self.nash_compatible
    }
}

/// Checks `Σ p_i = 1` and `Σ q_i ≠ 0`, naming the first violated condition.
pub(crate) fn nash_conditions(p: &[f64], q: &[f64]) -> Result<()> {
    let tol = Tolerances::DEFAULT.nash;
    let sp: f64 = p.iter().sum();
    let sq: f64 = q.iter().sum();
    if (1.0 - sp).abs() > tol {
        return Err(Error::Contract(format!("S(1) = 1 - Σp = {:e} is not zero", 1.0 - sp)));
    }
    if sq.abs() <= tol {
        return Err(Error::Contract(format!("G(1) = Σq = {sq:e} vanishes")));
    }
    Ok(())
}
