//! Gaussian states of n optical modes in the quadrature representation.
//!
//! A state is a mean vector of length 2n and a symmetric 2n x 2n covariance
//! matrix, ordered with all x quadratures first and all p quadratures second
//! ("xxpp"). The vacuum quadrature variance is 1/4, the shot-noise level.
//! Mode indices in this module are zero-based.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Variance of a single vacuum quadrature (the shot-noise level).
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Symmetry tolerance enforced on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Residual tolerance for the symplectic condition S^T Omega S = Omega.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Convert a squeezing level in dB to the squeezing parameter r.
///
/// The convention is dB = -10 log10(Var / 0.25) for a squeezed variance
/// Var = e^{-2r} / 4, hence r = dB ln(10) / 20.
pub fn db_to_r(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

/// Inverse of [`db_to_r`].
pub fn r_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

/// The symplectic form Omega in xxpp ordering: [[0, I], [-I, 0]].
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let n = n_modes;
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega[(i, n + i)] = 1.0;
        omega[(n + i, i)] = -1.0;
    }
    omega
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// A multimode Gaussian state: mean vector and covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Build a state from a mean vector and covariance matrix, checking
    /// dimensions and symmetry. The stored covariance is symmetrized to
    /// absorb floating-point drift.
    pub fn new(n_modes: usize, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self, CoreError> {
        if n_modes == 0 {
            return Err(CoreError::EmptyRegister);
        }
        let dim = 2 * n_modes;
        if mean.len() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: mean.len(),
            });
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: cov.nrows(),
            });
        }
        let asym = max_abs(&(&cov - cov.transpose()));
        if asym > SYMMETRY_TOL {
            return Err(CoreError::NotSymmetric(asym));
        }
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self { n_modes, mean, cov })
    }

    /// The n-mode vacuum: zero mean, covariance (1/4) I.
    pub fn vacuum(n_modes: usize) -> Result<Self, CoreError> {
        if n_modes == 0 {
            return Err(CoreError::EmptyRegister);
        }
        Ok(Self {
            n_modes,
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn check_mode(&self, mode: usize) -> Result<(), CoreError> {
        if mode >= self.n_modes {
            return Err(CoreError::ModeOutOfRange {
                mode,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    /// Squeeze the p quadrature of one mode: x variance scales by e^{2r},
    /// p variance by e^{-2r}.
    pub fn squeeze_p(&self, mode: usize, r: f64) -> Result<Self, CoreError> {
        self.check_mode(mode)?;
        if r < 0.0 {
            return Err(CoreError::param("r", "squeezing parameter must be >= 0"));
        }
        let n = self.n_modes;
        let mut s = DMatrix::identity(2 * n, 2 * n);
        s[(mode, mode)] = r.exp();
        s[(n + mode, n + mode)] = (-r).exp();
        let transform = SymplecticTransform {
            matrix: s,
            label: "squeeze".into(),
        };
        self.apply(&transform)
    }

    /// Apply a symplectic transform: mean -> S mean, cov -> S cov S^T.
    pub fn apply(&self, transform: &SymplecticTransform) -> Result<Self, CoreError> {
        let dim = 2 * self.n_modes;
        if transform.matrix.nrows() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: transform.matrix.nrows(),
            });
        }
        let s = &transform.matrix;
        let cov = s * &self.cov * s.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            n_modes: self.n_modes,
            mean: s * &self.mean,
            cov,
        })
    }

    /// Shift the p quadrature mean of one mode. Covariances are untouched.
    pub fn displace_p(&self, mode: usize, amount: f64) -> Result<Self, CoreError> {
        self.check_mode(mode)?;
        let mut out = self.clone();
        out.mean[self.n_modes + mode] += amount;
        Ok(out)
    }

    /// Pure-loss channel on one mode with transmissivity eta:
    /// mean -> sqrt(eta) mean, cov -> eta cov + (1 - eta)/4 I on that mode.
    pub fn apply_loss(&self, mode: usize, eta: f64) -> Result<Self, CoreError> {
        self.check_mode(mode)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(CoreError::InvalidTransmissivity(eta));
        }
        let n = self.n_modes;
        let dim = 2 * n;
        // X = diag(1, ..., sqrt(eta), ..., 1); cov -> X cov X + (1-eta)/4 on the mode
        let mut x = DMatrix::identity(dim, dim);
        x[(mode, mode)] = eta.sqrt();
        x[(n + mode, n + mode)] = eta.sqrt();
        let mut cov = &x * &self.cov * &x;
        cov[(mode, mode)] += (1.0 - eta) * VACUUM_VARIANCE;
        cov[(n + mode, n + mode)] += (1.0 - eta) * VACUUM_VARIANCE;
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self {
            n_modes: n,
            mean: &x * &self.mean,
            cov,
        })
    }

    /// Mean and variance of a linear quadrature combination.
    pub fn combination_stats(&self, c: &QuadratureCombination) -> Result<(f64, f64), CoreError> {
        let dim = 2 * self.n_modes;
        if c.coefficients.len() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                got: c.coefficients.len(),
            });
        }
        let mean = c.coefficients.dot(&self.mean);
        let variance = (c.coefficients.transpose() * &self.cov * &c.coefficients)[(0, 0)];
        Ok((mean, variance))
    }

    /// One joint homodyne draw of several quadrature combinations.
    ///
    /// The combinations are projected to their joint normal distribution and
    /// sampled with a seeded ChaCha generator, so results are reproducible
    /// for a fixed seed. Fails if the projected covariance has an eigenvalue
    /// below -1e-8, which signals a corrupted upstream state.
    pub fn sample_quadratures(
        &self,
        combos: &[QuadratureCombination],
        seed: u64,
    ) -> Result<DVector<f64>, CoreError> {
        if combos.is_empty() {
            return Err(CoreError::EmptyCombination);
        }
        let k = combos.len();
        let mut mean = DVector::zeros(k);
        let mut proj = DMatrix::zeros(k, 2 * self.n_modes);
        for (i, c) in combos.iter().enumerate() {
            let (m, _) = self.combination_stats(c)?;
            mean[i] = m;
            proj.row_mut(i).copy_from(&c.coefficients.transpose());
        }
        let cov = &proj * &self.cov * proj.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;

        // Factor cov = L L^T via symmetric eigendecomposition; tolerates
        // exactly singular (degenerate normal) projections.
        let eig = cov.symmetric_eigen();
        let mut scaled = eig.eigenvectors.clone();
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < -1e-8 {
                return Err(CoreError::NotPositiveSemidefinite(lambda));
            }
            let s = lambda.max(0.0).sqrt();
            scaled.column_mut(j).scale_mut(s);
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        Ok(mean + scaled * z)
    }
}

/// A linear symplectic map on the 2n quadratures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    label: String,
}

impl SymplecticTransform {
    /// Wrap a matrix after checking S^T Omega S = Omega.
    pub fn new(matrix: DMatrix<f64>, label: impl Into<String>) -> Result<Self, CoreError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 || matrix.nrows() == 0 {
            return Err(CoreError::DimensionMismatch {
                expected: matrix.ncols(),
                got: matrix.nrows(),
            });
        }
        let omega = symplectic_form(matrix.nrows() / 2);
        let residual = max_abs(&(matrix.transpose() * &omega * &matrix - &omega));
        if residual > SYMPLECTIC_TOL {
            return Err(CoreError::NotSymplectic(residual));
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            label: "identity".into(),
        }
    }

    /// Fourier transform of one mode: a 90 degree phase-space rotation
    /// (x -> -p, p -> x on that mode).
    pub fn fourier(n_modes: usize, mode: usize) -> Result<Self, CoreError> {
        if mode >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode, n_modes });
        }
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m[(mode, mode)] = 0.0;
        m[(n_modes + mode, n_modes + mode)] = 0.0;
        m[(mode, n_modes + mode)] = -1.0;
        m[(n_modes + mode, mode)] = 1.0;
        Ok(Self {
            matrix: m,
            label: "fourier".into(),
        })
    }

    /// 180 degree phase-space rotation of one mode (x -> -x, p -> -p).
    pub fn rotate_pi(n_modes: usize, mode: usize) -> Result<Self, CoreError> {
        if mode >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode, n_modes });
        }
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m[(mode, mode)] = -1.0;
        m[(n_modes + mode, n_modes + mode)] = -1.0;
        Ok(Self {
            matrix: m,
            label: "rotate_pi".into(),
        })
    }

    /// Beam splitter on modes k, l with transmittance t. The mode map is
    /// real: kk = sqrt(T), kl = sqrt(1-T), lk = +-sqrt(1-T), ll = -+sqrt(T),
    /// the upper sign for `plus_variant = true`.
    pub fn beam_splitter(
        n_modes: usize,
        k: usize,
        l: usize,
        t: f64,
        plus_variant: bool,
    ) -> Result<Self, CoreError> {
        if k >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode: k, n_modes });
        }
        if l >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode: l, n_modes });
        }
        if k == l {
            return Err(CoreError::param("modes", "beam splitter needs k != l"));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(CoreError::InvalidTransmittance(t));
        }
        let sign = if plus_variant { 1.0 } else { -1.0 };
        let n = n_modes;
        let mut m = DMatrix::identity(2 * n, 2 * n);
        // the same real 2x2 block acts on the x pair and on the p pair
        for off in [0, n] {
            m[(off + k, off + k)] = t.sqrt();
            m[(off + k, off + l)] = (1.0 - t).sqrt();
            m[(off + l, off + k)] = sign * (1.0 - t).sqrt();
            m[(off + l, off + l)] = -sign * t.sqrt();
        }
        Ok(Self {
            matrix: m,
            label: "beamsplitter".into(),
        })
    }

    /// Compose: apply `self` after `first`.
    pub fn after(&self, first: &Self) -> Result<Self, CoreError> {
        if self.matrix.nrows() != first.matrix.nrows() {
            return Err(CoreError::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: first.matrix.nrows(),
            });
        }
        Self::new(&self.matrix * &first.matrix, "composite")
    }

    pub fn inverse(&self) -> Self {
        // symplectic inverse: S^{-1} = Omega^{-1} S^T Omega
        let omega = symplectic_form(self.matrix.nrows() / 2);
        Self {
            matrix: -&omega * self.matrix.transpose() * &omega,
            label: format!("{}_inv", self.label),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Max-norm residual of the symplectic condition.
    pub fn symplectic_residual(&self) -> f64 {
        let omega = symplectic_form(self.matrix.nrows() / 2);
        max_abs(&(self.matrix.transpose() * &omega * &self.matrix - &omega))
    }
}

/// Weights on (x_1..x_n, p_1..p_n) defining a scalar observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureCombination {
    coefficients: DVector<f64>,
}

impl QuadratureCombination {
    pub fn new(coefficients: DVector<f64>) -> Result<Self, CoreError> {
        if coefficients.iter().all(|v| *v == 0.0) {
            return Err(CoreError::EmptyCombination);
        }
        Ok(Self { coefficients })
    }

    /// The single quadrature x_mode.
    pub fn x(n_modes: usize, mode: usize) -> Result<Self, CoreError> {
        if mode >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode, n_modes });
        }
        let mut c = DVector::zeros(2 * n_modes);
        c[mode] = 1.0;
        Ok(Self { coefficients: c })
    }

    /// The single quadrature p_mode.
    pub fn p(n_modes: usize, mode: usize) -> Result<Self, CoreError> {
        if mode >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode, n_modes });
        }
        let mut c = DVector::zeros(2 * n_modes);
        c[n_modes + mode] = 1.0;
        Ok(Self { coefficients: c })
    }

    /// The difference p_i - p_j.
    pub fn p_diff(n_modes: usize, i: usize, j: usize) -> Result<Self, CoreError> {
        for m in [i, j] {
            if m >= n_modes {
                return Err(CoreError::ModeOutOfRange { mode: m, n_modes });
            }
        }
        if i == j {
            return Err(CoreError::EmptyCombination);
        }
        let mut c = DVector::zeros(2 * n_modes);
        c[n_modes + i] = 1.0;
        c[n_modes + j] = -1.0;
        Ok(Self { coefficients: c })
    }

    /// The nullifier p_a - sum of x_b over neighbors b.
    pub fn nullifier(n_modes: usize, a: usize, neighbors: &[usize]) -> Result<Self, CoreError> {
        if a >= n_modes {
            return Err(CoreError::ModeOutOfRange { mode: a, n_modes });
        }
        let mut c = DVector::zeros(2 * n_modes);
        c[n_modes + a] = 1.0;
        for &b in neighbors {
            if b >= n_modes {
                return Err(CoreError::ModeOutOfRange { mode: b, n_modes });
            }
            c[b] -= 1.0;
        }
        Ok(Self { coefficients: c })
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    /// Entrywise sum with another combination.
    pub fn plus(&self, other: &Self) -> Result<Self, CoreError> {
        if self.coefficients.len() != other.coefficients.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.coefficients.len(),
                got: other.coefficients.len(),
            });
        }
        Self::new(&self.coefficients + &other.coefficients)
    }

    /// Entrywise difference with another combination.
    pub fn minus(&self, other: &Self) -> Result<Self, CoreError> {
        if self.coefficients.len() != other.coefficients.len() {
            return Err(CoreError::DimensionMismatch {
                expected: self.coefficients.len(),
                got: other.coefficients.len(),
            });
        }
        Self::new(&self.coefficients - &other.coefficients)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_variances() {
        let v1 = GaussianState::vacuum(1).unwrap();
        let x = QuadratureCombination::x(1, 0).unwrap();
        let (_, var) = v1.combination_stats(&x).unwrap();
        assert_abs_diff_eq!(var, 0.25);

        let v8 = GaussianState::vacuum(8).unwrap();
        assert_abs_diff_eq!(v8.cov().trace(), 4.0);

        let v2 = GaussianState::vacuum(2).unwrap();
        let d = QuadratureCombination::p_diff(2, 0, 1).unwrap();
        let (_, var) = v2.combination_stats(&d).unwrap();
        assert_abs_diff_eq!(var, 0.5);
    }

    #[test]
    fn vacuum_rejects_zero_modes() {
        assert!(GaussianState::vacuum(0).is_err());
    }

    #[test]
    fn squeeze_scales_p_variance() {
        let v = GaussianState::vacuum(1).unwrap();
        let p = QuadratureCombination::p(1, 0).unwrap();

        // r = 0 is the identity
        let same = v.squeeze_p(0, 0.0).unwrap();
        assert_eq!(same.cov(), v.cov());

        // r = ln(10)/2 squeezes p variance by e^{-2r} = 1/10
        let r = 10f64.ln() / 2.0;
        let sq = v.squeeze_p(0, r).unwrap();
        let (_, var) = sq.combination_stats(&p).unwrap();
        assert_abs_diff_eq!(var, 0.025, epsilon = 1e-15);

        // 5 dB of squeezing
        let sq = v.squeeze_p(0, db_to_r(5.0)).unwrap();
        let (_, var) = sq.combination_stats(&p).unwrap();
        assert_abs_diff_eq!(var, 0.25 * 10f64.powf(-0.5), epsilon = 1e-12);
    }

    #[test]
    fn squeeze_rejects_bad_input() {
        let v = GaussianState::vacuum(1).unwrap();
        assert!(v.squeeze_p(1, 0.5).is_err());
        assert!(v.squeeze_p(0, -0.1).is_err());
    }

    #[test]
    fn fourier_twice_is_rotate_pi() {
        let v = GaussianState::vacuum(2)
            .unwrap()
            .squeeze_p(0, 0.3)
            .unwrap()
            .displace_p(0, 0.7)
            .unwrap();
        let f = SymplecticTransform::fourier(2, 0).unwrap();
        let twice = v.apply(&f).unwrap().apply(&f).unwrap();
        let rot = SymplecticTransform::rotate_pi(2, 0).unwrap();
        let once = v.apply(&rot).unwrap();
        assert_abs_diff_eq!(
            (twice.mean() - once.mean()).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            (twice.cov() - once.cov()).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn balanced_beam_splitter_entries() {
        let bs = SymplecticTransform::beam_splitter(2, 0, 1, 0.5, true).unwrap();
        let h = 0.5f64.sqrt();
        let m = bs.matrix();
        assert_abs_diff_eq!(m[(0, 0)], h);
        assert_abs_diff_eq!(m[(0, 1)], h);
        assert_abs_diff_eq!(m[(1, 0)], h);
        assert_abs_diff_eq!(m[(1, 1)], -h);
    }

    #[test]
    fn beam_splitter_symplectic_for_random_t() {
        for t in [0.0, 0.1, 1.0 / 78.0, 0.5, 6.0 / 7.0, 1.0] {
            for plus in [true, false] {
                let bs = SymplecticTransform::beam_splitter(3, 0, 2, t, plus).unwrap();
                assert!(bs.symplectic_residual() < 1e-10);
            }
        }
        assert!(SymplecticTransform::beam_splitter(2, 0, 1, 1.2, true).is_err());
    }

    #[test]
    fn apply_identity_and_inverse() {
        let v = GaussianState::vacuum(2).unwrap().squeeze_p(1, 0.8).unwrap();
        let id = SymplecticTransform::identity(2);
        assert_eq!(v.apply(&id).unwrap().cov(), v.cov());

        // squeeze then inverse squeeze recovers the vacuum
        let vac = GaussianState::vacuum(1).unwrap();
        let sq = vac.squeeze_p(0, 0.9).unwrap();
        let mut inv = DMatrix::identity(2, 2);
        inv[(0, 0)] = (-0.9f64).exp();
        inv[(1, 1)] = 0.9f64.exp();
        let back = sq
            .apply(&SymplecticTransform::new(inv, "unsqueeze").unwrap())
            .unwrap();
        assert_abs_diff_eq!((back.cov() - vac.cov()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let v = GaussianState::vacuum(2).unwrap();
        let f = SymplecticTransform::fourier(3, 0).unwrap();
        assert!(v.apply(&f).is_err());
    }

    #[test]
    fn displacement_moves_mean_only() {
        let v = GaussianState::vacuum(8).unwrap();
        let shifted = v.displace_p(4, 0.3).unwrap();
        assert_eq!(shifted.cov(), v.cov());
        assert_abs_diff_eq!(shifted.mean()[8 + 4], 0.3);

        let back = shifted.displace_p(4, -0.3).unwrap();
        assert_eq!(back.mean(), v.mean());

        // displacement on mode 5 (one-based) shifts <p5 - p6> by +eps
        let d = QuadratureCombination::p_diff(8, 4, 5).unwrap();
        let (mean, _) = shifted.combination_stats(&d).unwrap();
        assert_abs_diff_eq!(mean, 0.3);
    }

    #[test]
    fn loss_limits() {
        let v = GaussianState::vacuum(2)
            .unwrap()
            .squeeze_p(0, 0.6)
            .unwrap()
            .displace_p(0, 1.0)
            .unwrap();
        let unchanged = v.apply_loss(0, 1.0).unwrap();
        assert_abs_diff_eq!((unchanged.cov() - v.cov()).norm(), 0.0, epsilon = 1e-14);

        let reset = v.apply_loss(0, 0.0).unwrap();
        assert_abs_diff_eq!(reset.cov()[(0, 0)], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(reset.cov()[(2, 2)], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(reset.mean()[0], 0.0);

        assert!(v.apply_loss(0, 1.5).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_degenerate_limit_exact() {
        let v = GaussianState::vacuum(2)
            .unwrap()
            .displace_p(0, 2.0)
            .unwrap();
        let combos = vec![
            QuadratureCombination::p(2, 0).unwrap(),
            QuadratureCombination::p_diff(2, 0, 1).unwrap(),
        ];
        let a = v.sample_quadratures(&combos, 7).unwrap();
        let b = v.sample_quadratures(&combos, 7).unwrap();
        assert_eq!(a, b);

        // zero-covariance limit returns the exact means
        let tiny = GaussianState::new(
            2,
            v.mean().clone(),
            DMatrix::zeros(4, 4),
        )
        .unwrap();
        let exact = tiny.sample_quadratures(&combos, 1).unwrap();
        assert_abs_diff_eq!(exact[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(exact[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn db_round_trip() {
        let r = db_to_r(5.0);
        assert_abs_diff_eq!(r_to_db(r), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(db_to_r(5.0), 0.5756462732485115, epsilon = 1e-12);
    }
}
