//! Convergence analysis of gradient dynamics in unconstrained bilinear
//! zero-sum games `f(x, y) = xᵀ A y`.
//!
//! The crate simulates simultaneous gradient descent/ascent (GDA), its
//! optimistic variant (OGDA) and the general historical family (weights
//! `p_i` on past strategies, `q_i` on past gradients), and decides
//! analytically whether they converge: a scheme converges to the Nash
//! equilibrium exactly when a polynomial built from its transfer functions
//! and the spectrum of `η² A Aᵀ` is Schur stable.
//!
//! ```
//! use hgda_core::{analyze, GameMatrix, HgdaScheme, Tolerances, Verdict};
//!
//! let game = GameMatrix::from_rows(&[[1.0]]).unwrap();
//! let analysis = analyze(&HgdaScheme::ogda(0.5), &game, &Tolerances::DEFAULT).unwrap();
//! assert_eq!(analysis.verdict(), Verdict::Stable);
//! assert!((analysis.spectral_radius() - 0.5f64.sqrt()).abs() < 1e-7);
//! ```

pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod hgda;
pub mod matrix;
pub mod ogda;
pub mod polynomial;
pub mod rng;
pub mod scheme;
pub mod stability;
pub mod tolerance;

pub use dynamics::{
    empirical_rate, nash_residual, replicate_history, simulate, simulated_verdict, JointState,
    Trajectory,
};
pub use error::{Error, Result};
pub use hgda::{
    analyze, analyze_uncertified, bisect_boundary, check_nash_conditions, eta_stability_boundary,
    transfer_functions, HgdaAnalysis,
};
pub use matrix::{
    block_companion, characteristic_polynomial, game_spectrum, spectral_norm,
    symmetric_eigenvalues, GameMatrix, Matrix, Spectrum,
};
pub use num_complex::Complex64;
pub use ogda::{
    characteristic_factors, characteristic_poly_ogda, characteristic_roots_ogda, ogda_verdict, optimal_learning_rate, root_pair, OptimalRate,
    RootPair,
};
pub use polynomial::{common_roots, reduction_polynomial, CommonFactor, Polynomial, RootSet};
pub use scheme::HgdaScheme;
pub use stability::{jury_test, root_verdict, JuryOutcome, StabilityReport, Verdict};
pub use tolerance::Tolerances;
