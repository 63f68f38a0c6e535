//! Schur stability of real polynomials.
//!
//! Two independent deciders: the Jury table (no root computation) and an
//! explicit root-based classification. The root-based one also produces the
//! spectral radius, which is the asymptotic per-step contraction factor of
//! the associated recurrence.

use std::fmt;

use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, RootSet};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Every root strictly inside the unit circle (by more than the band).
    Stable,
    /// Some root within the band around the unit circle, none beyond it.
    Marginal,
    /// Some root outside the unit circle by more than the band.
    Unstable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Marginal => "marginal",
            Verdict::Unstable => "unstable",
        }
    }

    pub fn is_stable(self) -> bool {
        self == Verdict::Stable
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub spectral_radius: f64,
    pub roots: RootSet,
    /// Roots with `| |z| - 1 | <= band`.
    pub boundary_roots: RootSet,
    /// Predicted per-step contraction factor; present only when stable.
    pub rate: Option<f64>,
}

impl StabilityReport {
    /// Classifies an explicit root set.
    ///
    /// A simple pole at `z = 1` would not prevent convergence of the signal
    /// itself, but it is only listed among the boundary roots; the verdict
    /// stays marginal.
    pub fn from_roots(roots: RootSet, band: f64) -> Result<Self> {
        check_band(band)?;
        let spectral_radius = roots.spectral_radius();
        let boundary_roots: RootSet =
            roots.iter().copied().filter(|z| (z.norm() - 1.0).abs() <= band).collect();
        let verdict = if spectral_radius < 1.0 - band {
            Verdict::Stable
        } else if spectral_radius > 1.0 + band {
            Verdict::Unstable
        } else {
            Verdict::Marginal
        };
        let rate = verdict.is_stable().then_some(spectral_radius);
        Ok(Self { verdict, spectral_radius, roots, boundary_roots, rate })
    }
}

fn check_band(band: f64) -> Result<()> {
    if !(band > 0.0 && band <= 0.1) {
        return Err(Error::InvalidInput(format!("marginal band must lie in (0, 0.1], got {band}")));
    }
    Ok(())
}

/// Root-based verdict for `p`.
pub fn root_verdict(p: &Polynomial, band: f64) -> Result<StabilityReport> {
    check_band(band)?;
    StabilityReport::from_roots(p.roots()?, band)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JuryOutcome {
    Stable,
    NotStable,
}

/// Jury's tabular test for Schur stability.
///
/// Checks `p(1) > 0`, `(-1)^d p(-1) > 0`, `|c₀| < c_d`, then builds the Jury
/// array (each row rescaled to unit max-norm, which leaves every condition
/// unchanged) and requires `|first| > |last|` on each row down to length 3.
pub fn jury_test(p: &Polynomial) -> Result<JuryOutcome> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::InvalidInput("Jury test needs degree >= 1".into())),
    };
    if !p.is_finite() {
        return Err(Error::InvalidInput("polynomial has non-finite coefficients".into()));
    }
    let degenerate = Tolerances::DEFAULT.jury_degenerate;
    let sign = p.leading().signum();
    let scale = p.max_abs_coeff();
    let a: Vec<f64> = p.coeffs().iter().map(|c| sign * c / scale).collect();

    let at_one: f64 = a.iter().sum();
    let at_minus_one: f64 = a.iter().rev().fold(0.0, |acc, &c| -acc + c);
    let alt = if degree % 2 == 0 { at_minus_one } else { -at_minus_one };
    if at_one <= 0.0 || alt <= 0.0 {
        return Ok(JuryOutcome::NotStable);
    }

    let mut row = a;
    loop {
        let first = row[0].abs();
        let last = row[row.len() - 1].abs();
        if (first - last).abs() <= degenerate {
            return Err(Error::Inconclusive(format!(
                "degenerate Jury table row of length {} (|{first:e}| vs |{last:e}|); use the root-based verdict",
                row.len()
            )));
        }
        // The leading coefficient is last in ascending order: for the first row
        // the condition reads |c₀| < c_d, for derived rows |b₀| > |b_last|.
        let ok = if row.len() == degree + 1 { first < last } else { first > last };
        if !ok {
            return Ok(JuryOutcome::NotStable);
        }
        if row.len() <= 3 {
            return Ok(JuryOutcome::Stable);
        }
        let m = row.len() - 1;
        let mut next: Vec<f64> = (0..m).map(|k| row[0] * row[k] - row[m] * row[m - k]).collect();
        let norm = next.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if norm == 0.0 {
            return Err(Error::Inconclusive("Jury table row vanished".into()));
        }
        next.iter_mut().for_each(|v| *v /= norm);
        row = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn jury_examples() {
        let half = Polynomial::new(vec![-0.5, 1.0]);
        assert_eq!(jury_test(&half).unwrap(), JuryOutcome::Stable);
        let two = Polynomial::new(vec![-2.0, 1.0]);
        assert_eq!(jury_test(&two).unwrap(), JuryOutcome::NotStable);
        let spiral = Polynomial::new(vec![0.5, -1.0, 1.0]);
        assert_eq!(jury_test(&spiral).unwrap(), JuryOutcome::Stable);
    }

    #[test]
    fn jury_rejects_constants() {
        assert!(matches!(jury_test(&Polynomial::constant(3.0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn jury_negative_leading_coefficient() {
        let p = Polynomial::new(vec![0.25, -1.0, 2.0, -2.0, 1.0]).scale(-1.0);
        assert_eq!(jury_test(&p).unwrap(), JuryOutcome::Stable);
    }

    #[test]
    fn jury_higher_degree_with_planted_roots() {
        let stable = Polynomial::from_complex_roots(&[
            Complex64::new(0.3, 0.8),
            Complex64::new(0.3, -0.8),
            Complex64::new(-0.95, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(-0.2, 0.5),
            Complex64::new(-0.2, -0.5),
        ]);
        assert_eq!(jury_test(&stable).unwrap(), JuryOutcome::Stable);
        let unstable = Polynomial::from_complex_roots(&[
            Complex64::new(0.3, 0.8),
            Complex64::new(0.3, -0.8),
            Complex64::new(-1.05, 0.0),
            Complex64::new(0.1, 0.0),
        ]);
        assert_eq!(jury_test(&unstable).unwrap(), JuryOutcome::NotStable);
    }

    #[test]
    fn root_verdict_examples() {
        let spiral = Polynomial::new(vec![0.5, -1.0, 1.0]);
        let r = root_verdict(&spiral, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert_relative_eq!(r.spectral_radius, 0.5f64.sqrt(), max_relative = 1e-14);
        assert_eq!(r.rate, Some(r.spectral_radius));

        // OGDA on f = xy at λ = 1/3: -(z²-z)² - λ(2z-1)², dominant roots on the unit circle.
        let boundary = Polynomial::new(vec![-1.0 / 3.0, 4.0 / 3.0, -7.0 / 3.0, 2.0, -1.0]);
        let r = root_verdict(&boundary, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::Marginal);
        assert_relative_eq!(r.spectral_radius, 1.0, max_relative = 1e-9);
        assert_eq!(r.rate, None);

        let unit = Polynomial::from_real_roots(&[1.0, 0.5]);
        let r = root_verdict(&unit, 1e-7).unwrap();
        assert_eq!(r.verdict, Verdict::Marginal);
        assert_eq!(r.boundary_roots.len(), 1);
        assert!((r.boundary_roots.roots[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn band_is_validated() {
        let p = Polynomial::new(vec![-0.5, 1.0]);
        assert!(root_verdict(&p, 0.0).is_err());
        assert!(root_verdict(&p, 0.5).is_err());
    }
}
