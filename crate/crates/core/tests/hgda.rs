mod common;

use hgda_core::rng::SplitMix64;
use hgda_core::eigen::eigenvalues;
use hgda_core::{
    analyze, block_companion, ogda_verdict, Complex64, HgdaScheme, Polynomial, RootSet, Tolerances,
    Verdict,
};
use proptest::prelude::*;

/// Scheme with `S = z(z-1)P`, `G = (2z-1)P` for monic `P`.
fn family(p: &Polynomial, eta: f64) -> HgdaScheme {
    let s = &Polynomial::new(vec![0.0, -1.0, 1.0]) * p;
    let g = &Polynomial::new(vec![-1.0, 2.0]) * p;
    let k = s.degree().unwrap();
    let weights = |c: &[f64], sign: f64| -> Vec<f64> {
        (1..=k).map(|i| sign * c.get(k - i).copied().unwrap_or(0.0)).collect()
    };
    HgdaScheme::new(weights(s.coeffs(), -1.0), weights(g.coeffs(), 1.0), eta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn general_pipeline_specializes_to_ogda(seed in any::<u64>(), dim in 1usize..=6, frac in -1.5f64..1.5) {
        prop_assume!(frac.abs() > 0.02 && (frac.abs() - 1.0).abs() > 0.02);
        let g = common::game(seed, dim);
        let eta = frac / (3f64.sqrt() * g.spectral_norm());
        let tol = Tolerances::DEFAULT;
        let general = analyze(&HgdaScheme::ogda(eta), &g, &tol).unwrap();
        let closed = ogda_verdict(&g, eta, &tol).unwrap();
        // radii this close to 1 fall inside the marginal band of the root path
        prop_assume!((closed.spectral_radius - 1.0).abs() > 1e-6);
        prop_assert_eq!(general.verdict(), closed.verdict);
        prop_assert!((general.spectral_radius() - closed.spectral_radius).abs() < 1e-6);
    }

    #[test]
    fn joint_roots_match_companion_eigenvalues(seed in any::<u64>(), k in 1usize..=4, dim in 1usize..=4) {
        let mut rng = SplitMix64::new(seed);
        let g = common::game(seed ^ 0x5eed, dim);
        let eta = rng.uniform(-1.0, 1.0) / g.spectral_norm();
        let scheme = common::nash_scheme(&mut rng, k, eta);
        let an = analyze(&scheme, &g, &Tolerances::DEFAULT).unwrap();
        let companion = RootSet::new(eigenvalues(&block_companion(&scheme, &g).unwrap()).unwrap());
        let d = RootSet::new(an.report.roots.distinct(1e-6)).hausdorff(&RootSet::new(companion.distinct(1e-6)));
        prop_assert!(d < 1e-6, "{}", d);
    }

    #[test]
    fn stable_common_factor_keeps_the_verdict(seed in any::<u64>(), m in 1usize..=3, dim in 1usize..=3, frac in 0.1f64..0.95) {
        let mut rng = SplitMix64::new(seed);
        let g = common::conditioned_game(seed ^ 0xfeed, dim, 10.0);
        let eta = frac / (3f64.sqrt() * g.spectral_norm());
        let roots: Vec<Complex64> = (0..m).map(|_| Complex64::new(rng.uniform(-0.9, 0.9), 0.0)).collect();
        let tol = Tolerances::DEFAULT;
        let stable = analyze(&family(&Polynomial::from_complex_roots(&roots), eta), &g, &tol).unwrap();
        prop_assert_eq!(stable.verdict(), Verdict::Stable);

        let mut moved = roots.clone();
        moved[0] = Complex64::new(if moved[0].re < 0.0 { -1.1 } else { 1.1 }, 0.0);
        let unstable = analyze(&family(&Polynomial::from_complex_roots(&moved), eta), &g, &tol).unwrap();
        prop_assert_eq!(unstable.verdict(), Verdict::Unstable);
    }
}
