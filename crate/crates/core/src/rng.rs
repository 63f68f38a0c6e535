//! Seeded pseudo-random numbers and random test instances.
//!
//! The generator is SplitMix64, fixed bit-exactly so that fixtures can be
//! regenerated from any language:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15            (wrapping)
//! z      <- state
//! z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (wrapping)
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB  (wrapping)
//! output <- z ^ (z >> 31)
//! ```
//!
//! A uniform double in `[0, 1)` is `(output >> 11) * 2^-53`.

use crate::error::{Error, Result};
use crate::matrix::{GameMatrix, Matrix};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

/// Constraints for [`random_game`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGameSpec {
    pub dim: usize,
    /// Re-sample while `|det A|` is below this.
    pub det_guard: f64,
    /// Re-sample while the condition number `σ_max / σ_min` exceeds this.
    pub cond_guard: Option<f64>,
}

const MAX_RESAMPLES: usize = 10_000;

/// Square game with entries uniform in `[-1, 1)`, drawn row-major, re-sampled
/// until the guards hold.
pub fn random_game(rng: &mut SplitMix64, spec: &RandomGameSpec) -> Result<GameMatrix> {
    if spec.dim == 0 {
        return Err(Error::InvalidInput("random game dimension must be positive".into()));
    }
    for _ in 0..MAX_RESAMPLES {
        let data: Vec<f64> = (0..spec.dim * spec.dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let game = GameMatrix::new(Matrix::from_vec(spec.dim, spec.dim, data)?)?;
        if game.determinant().abs() < spec.det_guard {
            continue;
        }
        if let Some(max_cond) = spec.cond_guard {
            if game.condition_number()? > max_cond {
                continue;
            }
        }
        return Ok(game);
    }
    Err(Error::InvalidInput(format!(
        "no {0}x{0} matrix satisfied the guards after {MAX_RESAMPLES} draws",
        spec.dim
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_stream() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = SplitMix64::new(17);
        for _ in 0..10_000 {
            let u = rng.uniform(-1.0, 1.0);
            assert!((-1.0..1.0).contains(&u));
        }
    }

    #[test]
    fn random_game_respects_guards() {
        let mut rng = SplitMix64::new(3);
        let spec = RandomGameSpec { dim: 4, det_guard: 1e-3, cond_guard: Some(5.0) };
        for _ in 0..20 {
            let g = random_game(&mut rng, &spec).unwrap();
            assert!(g.determinant().abs() >= 1e-3);
            assert!(g.condition_number().unwrap() <= 5.0);
        }
    }
}
