//! Stability of general historical GDA schemes on bilinear games.
//!
//! A scheme with smoothness polynomial `S(z) = z^k - Σ p_i z^{k-i}` and
//! gradient polynomial `G(z) = Σ q_i z^{k-i}` has characteristic equation
//! `det([[S I, G η A], [-G η Aᵀ, S I]]) = 0`. Writing `S = P S'`, `G = P G'`
//! with `P` collecting the common roots, this factors as `P^{2n}` times
//! `Σ_j a_j (-S'²)^{n-j} (G'²)^j`, where the `a_j` are the coefficients of the
//! characteristic polynomial of `η² A Aᵀ`.

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::{block_companion, characteristic_polynomial, game_spectrum, GameMatrix};
use crate::polynomial::{common_roots, reduction_polynomial, CommonFactor, Polynomial, RootSet};
use crate::scheme::{nash_conditions, HgdaScheme};
use crate::stability::{StabilityReport, Verdict};
use crate::tolerance::Tolerances;

/// `(S(z), G(z))` of a scheme.
pub fn transfer_functions(scheme: &HgdaScheme) -> (Polynomial, Polynomial) {
    let k = scheme.horizon();
    let mut s = vec![0.0; k + 1];
    let mut g = vec![0.0; k];
    s[k] = 1.0;
    for (i, (&p, &q)) in scheme.p().iter().zip(scheme.q()).enumerate() {
        // weight i+1 multiplies z^{k-i-1}
        s[k - i - 1] = -p;
        g[k - i - 1] = q;
    }
    (Polynomial::new(s), Polynomial::new(g))
}

/// `S(1) = 0` and `G(1) != 0`.
pub fn check_nash_conditions(scheme: &HgdaScheme) -> bool {
    nash_conditions(scheme.p(), scheme.q()).is_ok()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HgdaAnalysis {
    pub s: Polynomial,
    pub g: Polynomial,
    /// Common factor `P` and the deflated `S'`, `G'`.
    pub common: CommonFactor,
    /// Reduction polynomial built from `S'` and `G'`.
    pub reduction: Polynomial,
    /// Verdict over the roots of the reduction polynomial and of `P`.
    pub report: StabilityReport,
    /// Whether limit points are certified to be Nash equilibria.
    pub nash_ok: bool,
    /// Hausdorff distance between the analysed roots and the eigenvalues of
    /// the block companion of the time-domain recursion.
    pub companion_mismatch: f64,
}

impl HgdaAnalysis {
    pub fn verdict(&self) -> Verdict {
        self.report.verdict
    }

    pub fn spectral_radius(&self) -> f64 {
        self.report.spectral_radius
    }
}

/// Full stability analysis of `scheme` on `game`.
///
/// Fails with a contract error when the scheme does not satisfy
/// `S(1) = 0`, `G(1) != 0`, and with an unsupported-input error on singular
/// games.
pub fn analyze(scheme: &HgdaScheme, game: &GameMatrix, tol: &Tolerances) -> Result<HgdaAnalysis> {
    nash_conditions(scheme.p(), scheme.q())?;
    analyze_inner(scheme, game, tol, true)
}

/// Same as [`analyze`] but accepts schemes whose limits are not certified
/// as Nash equilibria. The result has `nash_ok == false` in that case, so
/// the verdict speaks to stability only.
pub fn analyze_uncertified(
    scheme: &HgdaScheme,
    game: &GameMatrix,
    tol: &Tolerances,
) -> Result<HgdaAnalysis> {
    let nash_ok = check_nash_conditions(scheme);
    analyze_inner(scheme, game, tol, nash_ok)
}

fn analyze_inner(
    scheme: &HgdaScheme,
    game: &GameMatrix,
    tol: &Tolerances,
    nash_ok: bool,
) -> Result<HgdaAnalysis> {
    game.ensure_nonsingular(tol)?;
    let (s, g) = transfer_functions(scheme);
    let common = if g.is_zero() {
        CommonFactor {
            factor: Polynomial::one(),
            factor_roots: RootSet::default(),
            s_reduced: s.clone(),
            g_reduced: g.clone(),
        }
    } else {
        common_roots(&s, &g, tol.common_root)?
    };

    let eta = scheme.eta();
    let a = game.entries();
    let gram = a.matmul(&a.transpose())?.scaled(eta * eta);
    let charpoly = characteristic_polynomial(&gram)?;
    let n = game.dim();
    let alpha: Vec<f64> = charpoly.coeffs()[..n].iter().rev().copied().collect();
    let reduction = reduction_polynomial(&common.s_reduced, &common.g_reduced, &alpha)?;

    let mut roots = reduction_roots(&common.s_reduced, &common.g_reduced, game, eta)?;
    roots.extend(&common.factor_roots);
    let report = StabilityReport::from_roots(roots, tol.marginal_band)?;

    let companion = RootSet::new(eigen::eigenvalues(&block_companion(scheme, game)?)?);
    let companion_mismatch = report.roots.hausdorff(&companion);

    Ok(HgdaAnalysis { s, g, common, reduction, report, nash_ok, companion_mismatch })
}

/// Roots of the reduction polynomial through its factorization
/// `Σ_j a_j (-S²)^{n-j} (G²)^j = ∏_{λ ∈ Λ} -(S² + λ G²)`.
///
/// Rooting the expanded form directly loses accuracy when eigenvalues of
/// `η² A Aᵀ` are small: the roots of `S` then become near-2n-fold clusters.
/// Each factor only carries near-double roots.
pub fn reduction_roots(s: &Polynomial, g: &Polynomial, game: &GameMatrix, eta: f64) -> Result<RootSet> {
    let spectrum = game_spectrum(game, eta)?;
    let s2 = s.square();
    let g2 = g.square();
    let mut roots = RootSet::default();
    for &lambda in &spectrum.eigenvalues {
        let factor = &s2 + &g2.scale(lambda.max(0.0));
        if factor.degree().is_some_and(|d| d > 0) {
            roots.extend(&factor.roots()?);
        }
    }
    Ok(roots)
}

/// Bisects `[lo, hi]` until its width is at most `width`, keeping the two
/// ends on opposite sides of the stable / not-stable divide.
pub fn bisect_boundary<F>(lo: f64, hi: f64, width: f64, mut verdict: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<Verdict>,
{
    if !(lo < hi) || !(width > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bracket [{lo}, {hi}] with width {width} is not a valid search interval"
        )));
    }
    let v_lo = verdict(lo)?;
    let v_hi = verdict(hi)?;
    let lo_stable = v_lo.is_stable();
    if lo_stable == v_hi.is_stable() {
        return Err(Error::InvalidBracket { lo, hi, verdict: v_lo.to_string() });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > width {
        let mid = 0.5 * (a + b);
        if verdict(mid)?.is_stable() == lo_stable {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Learning rate at which `scheme` (with its `η` replaced) changes between
/// stable and not stable on `game`, searched inside `bracket`.
pub fn eta_stability_boundary(
    scheme: &HgdaScheme,
    game: &GameMatrix,
    bracket: (f64, f64),
    tol: &Tolerances,
) -> Result<f64> {
    bisect_boundary(bracket.0, bracket.1, tol.boundary_bisection, |eta| {
        Ok(analyze(&scheme.with_eta(eta), game, tol)?.verdict())
    })
}
