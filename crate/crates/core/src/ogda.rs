//! Closed-form analysis of optimistic GDA on bilinear games.
//!
//! Every eigenvalue λ of `η² A Aᵀ` contributes the roots of
//! `z² - z(1 + 2√λ j) + √λ j = 0` and their conjugates to the
//! characteristic equation. The dynamics converge iff the larger root
//! modulus stays below one for every λ, i.e. iff `η² γ² < 1/3`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{game_spectrum, GameMatrix};
use crate::polynomial::{Polynomial, RootSet};
use crate::stability::{StabilityReport, Verdict};
use crate::tolerance::Tolerances;

/// `η² γ²` at which the dominant root reaches the unit circle.
pub const CRITICAL_LAMBDA: f64 = 1.0 / 3.0;

/// Roots of `z² - z(1 + 2√λ j) + √λ j = 0` for one eigenvalue λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub lambda: f64,
    /// Root with the larger modulus.
    pub z1: Complex64,
    pub z2: Complex64,
    pub norm1: f64,
    pub norm2: f64,
}

pub fn root_pair(lambda: f64) -> Result<RootPair> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("eigenvalue must be positive, got {lambda}")));
    }
    let (z1, z2) = quadratic_roots(lambda);
    let (norm1, norm2) = root_norms(lambda);
    Ok(RootPair { lambda, z1, z2, norm1, norm2 })
}

/// `(1 + 2√λ j ± √(1 - 4λ)) / 2`, larger modulus first. Valid for λ >= 0.
fn quadratic_roots(lambda: f64) -> (Complex64, Complex64) {
    let s = lambda.sqrt();
    let disc = Complex64::new(1.0 - 4.0 * lambda, 0.0).sqrt();
    let base = Complex64::new(1.0, 2.0 * s);
    ((base + disc) * 0.5, (base - disc) * 0.5)
}

/// Moduli of the two roots from their closed forms.
fn root_norms(lambda: f64) -> (f64, f64) {
    if lambda <= 0.25 {
        let r = (1.0 - 4.0 * lambda).sqrt();
        ((2.0 + 2.0 * r).sqrt() / 2.0, (2.0 - 2.0 * r).max(0.0).sqrt() / 2.0)
    } else {
        let r = (lambda * (4.0 * lambda - 1.0)).sqrt();
        ((2.0 * lambda + r).sqrt(), (2.0 * lambda - r).sqrt())
    }
}

/// Modulus of the dominant root for eigenvalue λ > 0.
pub fn dominant_root_norm(lambda: f64) -> f64 {
    root_norms(lambda).0
}

/// `1 / (√3 γ)`: OGDA converges iff `|η|` is below this.
pub fn stability_threshold(game: &GameMatrix) -> f64 {
    1.0 / (3f64.sqrt() * game.spectral_norm())
}

/// The quartic factors `(z² - z)² + λ (2z - 1)²`, one per `λ ∈ Λ`.
pub fn characteristic_factors(game: &GameMatrix, eta: f64) -> Result<Vec<Polynomial>> {
    let spectrum = game_spectrum(game, eta)?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let l = lambda.max(0.0);
            Polynomial::new(vec![l, -4.0 * l, 1.0 + 4.0 * l, -2.0, 1.0])
        })
        .collect())
}

/// `∏_{λ ∈ Λ} [(z² - z)² + λ (2z - 1)²]`, the monic degree-4n characteristic
/// polynomial of the OGDA recursion.
pub fn characteristic_poly_ogda(game: &GameMatrix, eta: f64) -> Result<Polynomial> {
    Ok(characteristic_factors(game, eta)?.iter().fold(Polynomial::one(), |acc, f| &acc * f))
}

/// Roots of [`characteristic_poly_ogda`], found numerically factor by factor.
/// For small `λ` the expanded product has tight clusters around 0 and 1 that
/// companion rooting resolves only to about `ε^{1/2n}`.
pub fn characteristic_roots_ogda(game: &GameMatrix, eta: f64) -> Result<RootSet> {
    let mut roots = RootSet::default();
    for f in characteristic_factors(game, eta)? {
        roots.extend(&f.roots()?);
    }
    Ok(roots)
}

/// All 4n characteristic roots, from the closed form.
pub fn ogda_roots(game: &GameMatrix, eta: f64) -> Result<RootSet> {
    let spectrum = game_spectrum(game, eta)?;
    let mut roots = Vec::with_capacity(4 * spectrum.eigenvalues.len());
    for &lambda in &spectrum.eigenvalues {
        let (z1, z2) = quadratic_roots(lambda.max(0.0));
        roots.extend([z1, z2, z1.conj(), z2.conj()]);
    }
    Ok(RootSet::new(roots))
}

/// Stability of OGDA on `game` at learning rate `eta`.
///
/// The verdict comes from comparing `η² γ²` with 1/3; the spectral radius is
/// the largest dominant-root modulus over Λ. `η = 0` freezes the dynamics
/// and is reported as marginal.
pub fn ogda_verdict(game: &GameMatrix, eta: f64, tol: &Tolerances) -> Result<StabilityReport> {
    game.ensure_nonsingular(tol)?;
    let roots = ogda_roots(game, eta)?;
    let mut report = StabilityReport::from_roots(roots, tol.marginal_band)?;
    let spectrum = game_spectrum(game, eta)?;
    report.spectral_radius = spectrum
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { dominant_root_norm(l) } else { 1.0 })
        .fold(0.0, f64::max);

    let x = eta * eta * game.spectral_norm() * game.spectral_norm();
    report.verdict = if eta == 0.0 || (x - CRITICAL_LAMBDA).abs() <= 4.0 * f64::EPSILON {
        Verdict::Marginal
    } else if x < CRITICAL_LAMBDA {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    report.rate = report.verdict.is_stable().then_some(report.spectral_radius);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalRate {
    pub eta: f64,
    /// Spectral radius at `eta`.
    pub radius: f64,
}

/// Learning rate minimizing the OGDA spectral radius.
///
/// With all eigenvalues of `A Aᵀ` equal the optimum is `1/(2γ)`. Otherwise it
/// is the unique `η` in `(0, 1/(√3γ))` where the dominant-root moduli of the
/// smallest and largest eigenvalue coincide, found by bisection.
pub fn optimal_learning_rate(game: &GameMatrix, tol: &Tolerances) -> Result<OptimalRate> {
    game.ensure_nonsingular(tol)?;
    let spectrum = game_spectrum(game, 1.0)?;
    let (lo_eig, hi_eig) = (spectrum.min(), spectrum.max());
    if hi_eig - lo_eig <= tol.equal_eigenvalues * hi_eig {
        return Ok(OptimalRate {
            eta: 1.0 / (2.0 * game.spectral_norm()),
            radius: dominant_root_norm(0.25),
        });
    }
    let gap = |eta: f64| {
        let e2 = eta * eta;
        dominant_root_norm(e2 * lo_eig) - dominant_root_norm(e2 * hi_eig)
    };
    let mut lo = 0.0;
    let mut hi = stability_threshold(game);
    while hi - lo > tol.rate_bisection {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eta = 0.5 * (lo + hi);
    let e2 = eta * eta;
    let radius = dominant_root_norm(e2 * lo_eig).max(dominant_root_norm(e2 * hi_eig));
    Ok(OptimalRate { eta, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn scalar_game() -> GameMatrix {
        GameMatrix::from_rows(&[[1.0]]).unwrap()
    }

    #[test]
    fn root_pair_examples() {
        let rp = root_pair(0.25).unwrap();
        assert_relative_eq!(rp.norm1, SQRT_HALF, max_relative = 1e-15);
        assert_relative_eq!(rp.norm2, SQRT_HALF, max_relative = 1e-15);

        assert_relative_eq!(root_pair(1.0 / 3.0).unwrap().norm1, 1.0, max_relative = 1e-15);

        // Closed-form moduli at λ = 0.01, cross-checked against the quadratic formula.
        let rp = root_pair(0.01).unwrap();
        assert_relative_eq!(rp.norm1, 0.994_936_153_005, max_relative = 1e-11);
        assert_relative_eq!(rp.norm2, 0.100_508_962_005, max_relative = 1e-10);
        assert_relative_eq!(rp.z1.norm(), rp.norm1, max_relative = 1e-13);
        assert_relative_eq!(rp.z2.norm(), rp.norm2, max_relative = 1e-12);
    }

    #[test]
    fn root_pair_rejects_nonpositive() {
        assert!(root_pair(0.0).is_err());
        assert!(root_pair(-1.0).is_err());
    }

    #[test]
    fn root_pair_solves_quadratic() {
        for &lambda in &[1e-4, 0.1, 0.25, 0.3, 1.0 / 3.0, 0.5, 2.0, 10.0] {
            let rp = root_pair(lambda).unwrap();
            let s = lambda.sqrt();
            for z in [rp.z1, rp.z2] {
                let res = z * z - z * Complex64::new(1.0, 2.0 * s) + Complex64::new(0.0, s);
                assert!(res.norm() <= 1e-10, "λ = {lambda}: residual {}", res.norm());
            }
            assert!(rp.norm1 >= rp.norm2);
            assert_relative_eq!(rp.z1.norm(), rp.norm1, max_relative = 1e-12);
        }
    }

    #[test]
    fn characteristic_polynomial_scalar_game() {
        let chi = characteristic_poly_ogda(&scalar_game(), 0.5).unwrap();
        for (a, b) in chi.coeffs().iter().zip([0.25, -1.0, 2.0, -2.0, 1.0]) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        for z in chi.roots().unwrap().iter() {
            assert!((z.norm() - SQRT_HALF).abs() < 1e-7);
        }
    }

    #[test]
    fn zero_learning_rate_is_decoupled() {
        let g = GameMatrix::from_rows(&[[1.0, 0.0], [0.0, 2.0]]).unwrap();
        let chi = characteristic_poly_ogda(&g, 0.0).unwrap();
        let expected = Polynomial::new(vec![0.0, -1.0, 1.0]).square().pow(2);
        assert_eq!(chi, expected);
        let report = ogda_verdict(&g, 0.0, &Tolerances::DEFAULT).unwrap();
        assert_eq!(report.verdict, Verdict::Marginal);
        assert_eq!(report.spectral_radius, 1.0);
    }

    #[test]
    fn threshold_examples() {
        let tol = Tolerances::DEFAULT;
        let g = scalar_game();
        let stable = ogda_verdict(&g, 0.57, &tol).unwrap();
        assert_eq!(stable.verdict, Verdict::Stable);
        assert_eq!(ogda_verdict(&g, 0.6, &tol).unwrap().verdict, Verdict::Unstable);
        let mirrored = ogda_verdict(&g, -0.57, &tol).unwrap();
        assert_eq!(mirrored.verdict, Verdict::Stable);
        assert_eq!(mirrored.spectral_radius, stable.spectral_radius);
    }

    #[test]
    fn threshold_is_sharp() {
        let tol = Tolerances::DEFAULT;
        let g = scalar_game();
        let eta = 1.0 / 3f64.sqrt();
        assert_eq!(ogda_verdict(&g, eta - 1e-6, &tol).unwrap().verdict, Verdict::Stable);
        assert_eq!(ogda_verdict(&g, eta + 1e-6, &tol).unwrap().verdict, Verdict::Unstable);
        assert_eq!(ogda_verdict(&g, eta, &tol).unwrap().verdict, Verdict::Marginal);
    }

    #[test]
    fn singular_game_is_unsupported() {
        let g = GameMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(ogda_verdict(&g, 0.1, &Tolerances::DEFAULT), Err(Error::Unsupported(_))));
    }

    #[test]
    fn optimal_rate_equal_eigenvalues() {
        let tol = Tolerances::DEFAULT;
        let opt = optimal_learning_rate(&scalar_game(), &tol).unwrap();
        assert_eq!(opt.eta, 0.5);
        assert_relative_eq!(opt.radius, SQRT_HALF, epsilon = 1e-12);
        for c in [0.3, 2.0, 7.5] {
            let g = GameMatrix::scaled_identity(3, c).unwrap();
            let opt = optimal_learning_rate(&g, &tol).unwrap();
            assert_relative_eq!(opt.eta, 1.0 / (2.0 * c), max_relative = 1e-12);
        }
    }
}
