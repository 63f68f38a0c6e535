//! Random instance generators used by the acceptance suite.
//!
//! All draws go through [`SplitMix64`], so a seed pins every instance.

use hgda_core::rng::SplitMix64;
use hgda_core::{Complex64, HgdaScheme, JointState, Polynomial, Trajectory};

/// Joint state with coordinates uniform in `[-1, 1)`.
pub fn random_state(rng: &mut SplitMix64, n: usize) -> JointState {
    JointState::new(
        (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect(),
        (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect(),
    )
}

/// Scheme of horizon `k` with `Σ p = 1`, every `p_i` in `[-1, 1]` and `q`
/// uniform in `[-1, 1]` (redrawn in the measure-zero case `Σ q = 0`).
pub fn random_nash_scheme(rng: &mut SplitMix64, k: usize, eta: f64) -> HgdaScheme {
    assert!(k >= 1);
    loop {
        let mut p: Vec<f64> = (0..k - 1).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let last = 1.0 - p.iter().sum::<f64>();
        if last.abs() > 1.0 {
            continue;
        }
        p.push(last);
        let q: Vec<f64> = (0..k).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let scheme = HgdaScheme::new(p, q, eta).expect("finite weights");
        if scheme.nash_compatible() {
            return scheme;
        }
    }
}

/// Roots of a random monic `P` of degree 1 to 3 with every root of modulus
/// at most 0.9: all real, or a conjugate pair (plus a real root at degree 3).
pub fn random_stable_roots(rng: &mut SplitMix64) -> Vec<Complex64> {
    let degree = rng.range_inclusive(1, 3);
    let real = |rng: &mut SplitMix64| Complex64::new(rng.uniform(-0.9, 0.9), 0.0);
    if degree >= 2 && rng.next_f64() < 0.5 {
        let z = Complex64::from_polar(rng.uniform(0.05, 0.9), rng.uniform(0.1, 3.0));
        let mut roots = vec![z, z.conj()];
        if degree == 3 {
            roots.push(real(rng));
        }
        roots
    } else {
        (0..degree).map(|_| real(rng)).collect()
    }
}

/// Moves the first root (or the leading conjugate pair) to modulus 1.1.
pub fn destabilize(roots: &[Complex64]) -> Vec<Complex64> {
    let mut moved = roots.to_vec();
    if moved[0].im != 0.0 {
        let z = Complex64::from_polar(1.1, moved[0].arg());
        moved[0] = z;
        moved[1] = z.conj();
    } else {
        moved[0] = Complex64::new(if moved[0].re < 0.0 { -1.1 } else { 1.1 }, 0.0);
    }
    moved
}

/// Scheme with `S = z(z-1)P` and `G = (2z-1)P` for monic `P`.
pub fn family_scheme(p: &Polynomial, eta: f64) -> HgdaScheme {
    let s = &Polynomial::new(vec![0.0, -1.0, 1.0]) * p;
    let g = &Polynomial::new(vec![-1.0, 2.0]) * p;
    let k = s.degree().expect("nonzero P");
    let weights = |c: &[f64], sign: f64| -> Vec<f64> {
        (1..=k).map(|i| sign * c.get(k - i).copied().unwrap_or(0.0)).collect()
    };
    HgdaScheme::new(weights(s.coeffs(), -1.0), weights(g.coeffs(), 1.0), eta).expect("finite weights")
}

/// Diverged past the guard, or grew at every one of the last 100 steps.
pub fn diverges(traj: &Trajectory) -> bool {
    if traj.diverged() {
        return true;
    }
    let r = &traj.residuals;
    r.len() > 100 && r[r.len() - 101..].windows(2).all(|p| p[1] > p[0])
}
