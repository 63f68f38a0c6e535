//! Numerical tolerances shared by every analyzer.
//!
//! Boundary classification (stable / marginal / unstable) depends on several
//! epsilons interacting, so they all live in one record.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum relative asymmetry accepted by the symmetric eigensolver.
    pub symmetry: f64,
    /// Half-width of the band around the unit circle classified as marginal.
    pub marginal_band: f64,
    /// Pairing distance for common roots of S(z) and G(z).
    pub common_root: f64,
    /// Radius used to merge numerically split repeated roots.
    pub root_cluster: f64,
    /// Matrices with |det A| at or below this are treated as singular.
    pub singular_det: f64,
    /// Tolerance on S(1) = 0 and G(1) != 0.
    pub nash: f64,
    /// Relative size below which leading coefficients of the reduction
    /// polynomial are dropped.
    pub trim: f64,
    /// Jury table entries closer than this to degeneracy are inconclusive.
    pub jury_degenerate: f64,
    /// Relative spread under which all eigenvalues of AA^T count as equal.
    pub equal_eigenvalues: f64,
    /// Bracket width at which the optimal-rate bisection stops.
    pub rate_bisection: f64,
    /// Bracket width at which the stability-boundary bisection stops.
    pub boundary_bisection: f64,
    /// Norm above which a trajectory is declared divergent.
    pub divergence_guard: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        symmetry: 1e-12,
        marginal_band: 1e-7,
        common_root: 1e-8,
        root_cluster: 1e-6,
        singular_det: 1e-12,
        nash: 1e-12,
        trim: 1e-12,
        jury_degenerate: 1e-12,
        equal_eigenvalues: 1e-9,
        rate_bisection: 1e-10,
        boundary_bisection: 1e-6,
        divergence_guard: 1e12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
