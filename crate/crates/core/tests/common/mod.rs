#![allow(dead_code)]

use hgda_core::rng::{random_game, RandomGameSpec, SplitMix64};
use hgda_core::{GameMatrix, HgdaScheme, Matrix, Polynomial};

pub fn game(seed: u64, dim: usize) -> GameMatrix {
    let mut rng = SplitMix64::new(seed);
    random_game(&mut rng, &RandomGameSpec { dim, det_guard: 1e-3, cond_guard: None }).unwrap()
}

pub fn conditioned_game(seed: u64, dim: usize, cond: f64) -> GameMatrix {
    let mut rng = SplitMix64::new(seed);
    random_game(&mut rng, &RandomGameSpec { dim, det_guard: 1e-3, cond_guard: Some(cond) }).unwrap()
}

pub fn square(seed: u64, dim: usize) -> Matrix {
    let mut rng = SplitMix64::new(seed);
    let data = (0..dim * dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
    Matrix::from_vec(dim, dim, data).unwrap()
}

pub fn poly(rng: &mut SplitMix64, degree: usize, amp: f64) -> Polynomial {
    loop {
        let c: Vec<f64> = (0..=degree).map(|_| rng.uniform(-amp, amp)).collect();
        if c[degree].abs() > 0.05 {
            return Polynomial::new(c);
        }
    }
}

/// Scheme with `Σ p = 1`, all weights in `[-1, 1]`.
pub fn nash_scheme(rng: &mut SplitMix64, k: usize, eta: f64) -> HgdaScheme {
    loop {
        let mut p: Vec<f64> = (0..k - 1).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let last = 1.0 - p.iter().sum::<f64>();
        if last.abs() > 1.0 {
            continue;
        }
        p.push(last);
        let q: Vec<f64> = (0..k).map(|_| rng.uniform(-1.0, 1.0)).collect();
        if q.iter().sum::<f64>().abs() < 1e-3 {
            continue;
        }
        return HgdaScheme::new(p, q, eta).unwrap();
    }
}
