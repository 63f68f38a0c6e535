//! Real-coefficient univariate polynomials.
//!
//! Coefficients are stored in ascending order (`c₀ + c₁z + … + c_d z^d`) with
//! trailing zeros trimmed, so the last stored coefficient is the leading one.
//! The zero polynomial has no coefficients and no degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tolerance::Tolerances;

const POLISH_STEPS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// From ascending coefficients; exact trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Like [`Polynomial::new`] but rejects non-finite coefficients.
    pub fn try_new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("polynomial has non-finite coefficients".into()));
        }
        Ok(Self::new(coeffs))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`.
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| &acc * &Self::new(vec![-r, 1.0]))
    }

    /// Monic polynomial with the given roots. The root multiset should be
    /// closed under conjugation; imaginary parts of the product are dropped.
    pub fn from_complex_roots(roots: &[Complex64]) -> Self {
        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); acc.len() + 1];
            for (i, &c) in acc.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            acc = next;
        }
        Self::new(acc.into_iter().map(|c| c.re).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z`.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// `p(z)²`.
    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Coefficients in reverse order: `z^d p(1/z)`.
    pub fn reversed(&self) -> Self {
        Self::new(self.coeffs.iter().rev().copied().collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect())
    }

    /// Drops leading coefficients whose magnitude is at most `rel` times the
    /// largest coefficient.
    pub fn trim_relative(&self, rel: f64) -> Self {
        let cutoff = rel * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cutoff) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let d = divisor
            .degree()
            .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let Some(n) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if n < d {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; n - d + 1];
        for i in (0..=n - d).rev() {
            let c = rem[i + d] / lead;
            quot[i] = c;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
            rem[i + d] = 0.0;
        }
        rem.truncate(d);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// All complex roots, repeated per multiplicity.
    ///
    /// Exact zero roots are split off first; the rest are eigenvalues of the
    /// balanced Frobenius companion matrix, each refined by a few guarded
    /// Newton steps. Accuracy degrades to O(ε^{1/m}) for a root of
    /// multiplicity m.
    pub fn roots(&self) -> Result<RootSet> {
        let Some(degree) = self.degree() else {
            return Err(Error::InvalidInput("roots of the zero polynomial".into()));
        };
        if !self.is_finite() {
            return Err(Error::InvalidInput("polynomial has non-finite coefficients".into()));
        }
        let zeros = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
        let rest = &self.coeffs[zeros..];
        let d = degree - zeros;
        if d == 1 {
            roots.push(Complex64::new(-rest[0] / rest[1], 0.0));
        } else if d > 1 {
            let lead = rest[d];
            let mut companion = Matrix::zeros(d, d);
            for j in 0..d {
                companion[(0, j)] = -rest[d - 1 - j] / lead;
            }
            for i in 1..d {
                companion[(i, i - 1)] = 1.0;
            }
            let raw = eigen::hessenberg_eigenvalues(companion)?;
            let reduced = Polynomial { coeffs: rest.to_vec() };
            roots.extend(reduced.polish(raw));
        }
        Ok(RootSet { roots })
    }

    /// Newton refinement that never moves a root more than half-way towards
    /// its nearest neighbour and only accepts steps that lower the residual.
    fn polish(&self, roots: Vec<Complex64>) -> Vec<Complex64> {
        let n = roots.len();
        (0..n)
            .map(|i| {
                let start = roots[i];
                let gap = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (roots[j] - start).norm())
                    .fold(f64::INFINITY, f64::min);
                let reach = 0.5 * gap;
                let mut z = start;
                let (mut pz, mut dpz) = self.eval_with_derivative(z);
                for _ in 0..POLISH_STEPS {
                    if pz.norm() == 0.0 || dpz.norm() == 0.0 {
                        break;
                    }
                    let cand = z - pz / dpz;
                    if !cand.is_finite() || (cand - start).norm() > reach {
                        break;
                    }
                    let (pc, dpc) = self.eval_with_derivative(cand);
                    if pc.norm() >= pz.norm() {
                        break;
                    }
                    z = cand;
                    pz = pc;
                    dpz = dpc;
                }
                // Keep real roots real.
                if start.im == 0.0 {
                    z.im = 0.0;
                }
                z
            })
            .collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a != 1.0 => write!(f, "{a}")?,
                _ => {}
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + rhs.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        Polynomial::new(coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Roots of a polynomial, repeated per multiplicity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
}

impl RootSet {
    pub fn new(roots: Vec<Complex64>) -> Self {
        Self { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.roots.iter()
    }

    /// Largest root modulus; zero for an empty set.
    pub fn spectral_radius(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Groups roots lying within `radius * (1 + |z|)` of a cluster centroid.
    /// Each cluster is reported once, at its centroid, with its size.
    pub fn clusters(&self, radius: f64) -> Vec<(Complex64, usize)> {
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.roots {
            let hit = clusters
                .iter_mut()
                .find(|(c, _)| (*c - z).norm() <= radius * (1.0 + z.norm()));
            match hit {
                Some((c, m)) => {
                    *c = (*c * *m as f64 + z) / (*m + 1) as f64;
                    *m += 1;
                }
                None => clusters.push((z, 1)),
            }
        }
        clusters
    }

    /// Distinct roots: cluster centroids.
    pub fn distinct(&self, radius: f64) -> Vec<Complex64> {
        self.clusters(radius).into_iter().map(|(c, _)| c).collect()
    }

    /// Symmetric Hausdorff distance between the two point sets; ignores
    /// multiplicities. Infinite when exactly one side is empty.
    pub fn hausdorff(&self, other: &RootSet) -> f64 {
        fn one_sided(a: &[Complex64], b: &[Complex64]) -> f64 {
            a.iter()
                .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        }
        if self.is_empty() && other.is_empty() {
            return 0.0;
        }
        one_sided(&self.roots, &other.roots).max(one_sided(&other.roots, &self.roots))
    }

    pub fn extend(&mut self, other: &RootSet) {
        self.roots.extend_from_slice(&other.roots);
    }
}

impl FromIterator<Complex64> for RootSet {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self { roots: iter.into_iter().collect() }
    }
}

/// Result of [`common_roots`]: `s ≈ factor · s_reduced`, `g ≈ factor · g_reduced`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonFactor {
    /// Monic polynomial whose roots are the shared roots.
    pub factor: Polynomial,
    pub factor_roots: RootSet,
    pub s_reduced: Polynomial,
    pub g_reduced: Polynomial,
}

/// Finds the roots shared by `s` and `g` by pairing their roots within
/// distance `tol` (greedy, nearest pairs first) and deflates both by the
/// product of the paired factors.
///
/// Numerically split repeated roots are first merged into their centroids.
pub fn common_roots(s: &Polynomial, g: &Polynomial, tol: f64) -> Result<CommonFactor> {
    if s.is_zero() || g.is_zero() {
        return Err(Error::InvalidInput("common roots need nonzero polynomials".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("pairing tolerance must be positive, got {tol}")));
    }
    let radius = Tolerances::DEFAULT.root_cluster;
    let rs = if s.degree() == Some(0) { RootSet::default() } else { s.roots()? };
    let rg = if g.degree() == Some(0) { RootSet::default() } else { g.roots()? };
    let mut cs = rs.clusters(radius);
    let mut cg = rg.clusters(radius);

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, (a, _)) in cs.iter().enumerate() {
        for (j, (b, _)) in cg.iter().enumerate() {
            let d = (a - b).norm();
            if d <= tol {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut shared = Vec::new();
    for (_, i, j) in candidates {
        let m = cs[i].1.min(cg[j].1);
        if m == 0 {
            continue;
        }
        let centre = (cs[i].0 + cg[j].0) * 0.5;
        shared.extend(std::iter::repeat(centre).take(m));
        cs[i].1 -= m;
        cg[j].1 -= m;
    }

    if shared.is_empty() {
        return Ok(CommonFactor {
            factor: Polynomial::one(),
            factor_roots: RootSet::default(),
            s_reduced: s.clone(),
            g_reduced: g.clone(),
        });
    }
    let factor = Polynomial::from_complex_roots(&shared);
    let (s_reduced, _) = s.div_rem(&factor)?;
    let (g_reduced, _) = g.div_rem(&factor)?;
    Ok(CommonFactor { factor, factor_roots: RootSet::new(shared), s_reduced, g_reduced })
}

/// Expands `Σ_{j=0}^{n} a_j (-S²)^{n-j} (G²)^j` with `a_0 = 1`, where
/// `alpha = [a_1, …, a_n]` are the non-leading coefficients of the monic
/// characteristic polynomial of `η² A Aᵀ` (`x^n + a_1 x^{n-1} + … + a_n`).
///
/// Leading coefficients below `1e-12 · max|c|` are trimmed.
pub fn reduction_polynomial(s: &Polynomial, g: &Polynomial, alpha: &[f64]) -> Result<Polynomial> {
    if s.is_zero() && g.is_zero() {
        return Err(Error::InvalidInput("reduction polynomial needs S or G nonzero".into()));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidInput("non-finite characteristic coefficient".into()));
    }
    let n = alpha.len();
    let neg_s2 = -&s.square();
    let g2 = g.square();
    // powers[i] = (-S²)^i, built once.
    let mut s_pows = Vec::with_capacity(n + 1);
    s_pows.push(Polynomial::one());
    for i in 0..n {
        s_pows.push(&s_pows[i] * &neg_s2);
    }
    let mut total = s_pows[n].clone();
    let mut g_pow = Polynomial::one();
    for (j, &a) in alpha.iter().enumerate() {
        g_pow = &g_pow * &g2;
        if a != 0.0 {
            let term = (&s_pows[n - j - 1] * &g_pow).scale(a);
            total = &total + &term;
        }
    }
    Ok(total.trim_relative(Tolerances::DEFAULT.trim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn z_minus(r: f64) -> Polynomial {
        Polynomial::new(vec![-r, 1.0])
    }

    fn sort_roots(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn arithmetic_examples() {
        let z = Polynomial::monomial(1.0, 1);
        assert_eq!((&z_minus(1.0) * &z).coeffs(), &[0.0, -1.0, 1.0]);
        let two_z_minus_one = Polynomial::new(vec![-1.0, 2.0]);
        assert_eq!(two_z_minus_one.square().coeffs(), &[1.0, -4.0, 4.0]);
        let z2 = Polynomial::monomial(1.0, 2);
        let sum = &z2 + &z2.scale(-1.0);
        assert!(sum.is_zero());
        assert_eq!(sum.degree(), None);
    }

    #[test]
    fn division_recovers_factor() {
        let p = &(&z_minus(0.5) * &z_minus(-2.0)) * &Polynomial::new(vec![1.0, 0.0, 1.0]);
        let (q, r) = p.div_rem(&z_minus(0.5)).unwrap();
        assert!(r.max_abs_coeff() < 1e-14);
        let expected = &z_minus(-2.0) * &Polynomial::new(vec![1.0, 0.0, 1.0]);
        for (a, b) in q.coeffs().iter().zip(expected.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn roots_examples() {
        let r = sort_roots(Polynomial::new(vec![-1.0, 0.0, 1.0]).roots().unwrap().roots);
        assert!((r[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        // z² - z + 0.5 = 0  =>  z = (1 ± j)/2.
        let r = sort_roots(Polynomial::new(vec![0.5, -1.0, 1.0]).roots().unwrap().roots);
        assert!((r[0] - Complex64::new(0.5, -0.5)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.5, 0.5)).norm() < 1e-14);
        assert_relative_eq!(r[0].norm(), 0.5f64.sqrt(), max_relative = 1e-14);

        let triple = z_minus(0.5).pow(3);
        let r = triple.roots().unwrap();
        assert_eq!(r.len(), 3);
        for z in r.iter() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn roots_of_zero_polynomial_fail() {
        assert!(matches!(Polynomial::zero().roots(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = &Polynomial::monomial(1.0, 3) * &z_minus(2.0);
        let r = sort_roots(p.roots().unwrap().roots);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 3);
        assert!((r[3] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn common_roots_examples() {
        let s = Polynomial::new(vec![0.0, -1.0, 1.0]);
        let g = Polynomial::new(vec![-1.0, 2.0]);
        let cf = common_roots(&s, &g, 1e-8).unwrap();
        assert_eq!(cf.factor, Polynomial::one());
        assert_eq!(cf.s_reduced, s);
        assert_eq!(cf.g_reduced, g);

        let shared = z_minus(0.25);
        let cf = common_roots(&(&s * &shared), &(&g * &shared), 1e-8).unwrap();
        assert_eq!(cf.factor.degree(), Some(1));
        assert_relative_eq!(cf.factor.coeffs()[0], -0.25, epsilon = 1e-12);
        for (a, b) in cf.s_reduced.coeffs().iter().zip(s.coeffs()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }

        let tol = 1e-8;
        let cf = common_roots(&z_minus(0.3), &z_minus(0.3 - 2.0 * tol), tol).unwrap();
        assert_eq!(cf.factor, Polynomial::one());
    }

    #[test]
    fn common_roots_handles_repeated_root_in_g() {
        // S = z(z-1)(z-0.5), G = (2z-1)(z-0.5) = 2(z-0.5)².
        let half = z_minus(0.5);
        let s = &Polynomial::new(vec![0.0, -1.0, 1.0]) * &half;
        let g = &Polynomial::new(vec![-1.0, 2.0]) * &half;
        let cf = common_roots(&s, &g, 1e-8).unwrap();
        assert_eq!(cf.factor.degree(), Some(1));
        assert_relative_eq!(cf.factor.coeffs()[0], -0.5, epsilon = 1e-12);
        assert_eq!(cf.g_reduced.degree(), Some(1));
    }

    #[test]
    fn reduction_examples() {
        let s = Polynomial::new(vec![0.0, -1.0, 1.0]);
        let g = Polynomial::new(vec![-1.0, 2.0]);
        let red = reduction_polynomial(&s, &g, &[-0.25]).unwrap();
        let expected = [-0.25, 1.0, -2.0, 2.0, -1.0];
        for (a, b) in red.coeffs().iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-15);
        }
        for z in red.roots().unwrap().iter() {
            assert!((z.norm() - 0.5f64.sqrt()).abs() < 1e-7);
        }

        // GDA: -(z-1)² - λ has roots 1 ± j√λ.
        let lambda = 0.09;
        let red = reduction_polynomial(&z_minus(1.0), &Polynomial::one(), &[-lambda]).unwrap();
        assert_eq!(red.coeffs(), &[-1.0 - lambda, 2.0, -1.0]);
        for z in red.roots().unwrap().iter() {
            assert_relative_eq!(z.norm(), (1.0 + lambda).sqrt(), max_relative = 1e-14);
        }

        let red = reduction_polynomial(&s, &g, &[0.0, 0.0]).unwrap();
        assert_eq!(red, s.square().pow(2));
    }

    #[test]
    fn reduction_rejects_double_zero() {
        assert!(reduction_polynomial(&Polynomial::zero(), &Polynomial::zero(), &[1.0]).is_err());
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::new(vec![-0.25, 1.0, -2.0, 2.0, -1.0]);
        assert_eq!(p.to_string(), "-z^4 + 2z^3 - 2z^2 + z - 0.25");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }
}
