//! Kernel-recursive filters with ALD sparsification.
//!
//! The model keeps a growing dictionary of centers `x_j`, coefficients Θ and
//! the inverse `Q = [K + diag(r)]⁻¹`, where `K` is the dictionary Gram matrix
//! and `r_j` the per-sample regularization `(γ/λ)·G_j`. Each admitted sample
//! borders `Q` by one row and column:
//!
//! ```text
//! z = Q h,   ε = κ(x,x) + (γ/λ)G − zᵀh
//! Q ← ε⁻¹ [[εQ + zzᵀ, −z], [−zᵀ, 1]]
//! Θ ← [Θ − z e/ε ; e/ε]
//! ```
//!
//! `G = 1/Ω(e)` comes from the error weighting of the kernel in use: the NRGA
//! weighting for KRNRGA, the generalized-Gaussian one for KRGMCC, and `Ω ≡ 1`
//! for KRLS.

use serde::{Deserialize, Serialize};

use crate::cost::{kernel_profile, NrgaParams};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linalg::{dot, squared_distance, Matrix};

/// Smallest Schur complement accepted by the recursion.
pub const EPS_FLOOR: f64 = 1e-12;

/// |e| is clamped to this before evaluating Ω, which diverges at 0 for β < 2.
pub const OMEGA_ERROR_FLOOR: f64 = 1e-8;

/// Default ALD threshold.
pub const DEFAULT_ALD_THRESHOLD: f64 = 0.01;

/// Below this an ALD residual is treated as singular for the running K⁻¹.
const ALD_SINGULAR: f64 = 1e-12;

/// Reproducing kernel and, implicitly, the error weighting that goes with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum KernelConfig {
    /// NRGA kernel on the Euclidean distance; NRGA error weighting.
    Nrga(NrgaParams),
    /// exp(−‖u−v‖²/2σ²); unweighted errors (KRLS).
    Gaussian { sigma: f64 },
    /// exp(−λ_g‖u−v‖^α_g); generalized-Gaussian error weighting (KRGMCC).
    GeneralizedGaussian { lambda: f64, alpha: f64 },
}

impl KernelConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelConfig::Nrga(_) => Ok(()),
            KernelConfig::Gaussian { sigma } => ensure_positive("sigma", sigma),
            KernelConfig::GeneralizedGaussian { lambda, alpha } => {
                ensure_positive("lambda", lambda)?;
                ensure_positive("alpha", alpha)
            }
        }
    }

    /// κ(u, v).
    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::Argument(format!(
                "kernel arguments differ in length: {} vs {}",
                u.len(),
                v.len()
            )));
        }
        Ok(self.eval_sq(squared_distance(u, v)))
    }

    /// Kernel value as a function of the squared distance.
    fn eval_sq(&self, d2: f64) -> f64 {
        match *self {
            KernelConfig::Nrga(p) => kernel_profile(p.b(), p.beta(), p.lambda(), d2.sqrt()),
            KernelConfig::Gaussian { sigma } => (-d2 / (2.0 * sigma * sigma)).exp(),
            KernelConfig::GeneralizedGaussian { lambda, alpha } => {
                (-lambda * d2.powf(alpha / 2.0)).exp()
            }
        }
    }

    /// κ(x, x).
    pub fn peak(&self) -> f64 {
        self.eval_sq(0.0)
    }

    /// The λ in γ/λ; 1 for the baseline kernels.
    pub fn reg_scale(&self) -> f64 {
        match *self {
            KernelConfig::Nrga(p) => p.lambda(),
            _ => 1.0,
        }
    }

    /// Diagonal weight Ω(e) for an a-priori error e.
    pub fn omega(&self, e: f64) -> OmegaWeight {
        let a = e.abs().max(OMEGA_ERROR_FLOOR);
        let value = match *self {
            KernelConfig::Nrga(p) => {
                let (b, beta, lambda) = (p.b(), p.beta(), p.lambda());
                let bb = b + beta;
                a.powf(beta - 2.0) * (-(bb / beta) * (lambda * a.powf(beta) / bb).ln_1p()).exp()
            }
            KernelConfig::Gaussian { .. } => 1.0,
            KernelConfig::GeneralizedGaussian { lambda, alpha } => {
                (-lambda * a.powf(alpha)).exp() * a.powf(alpha - 2.0)
            }
        };
        OmegaWeight { value }
    }
}

/// One diagonal entry of Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaWeight {
    pub value: f64,
}

impl OmegaWeight {
    /// G = Ω⁻¹.
    pub fn inverse(&self) -> f64 {
        1.0 / self.value
    }
}

/// Named kernel filter with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelAlgorithm {
    Krnrga {
        b: f64,
        beta: f64,
        lambda: f64,
        gamma: f64,
    },
    /// σ is the Gaussian-equivalent width: λ_g = 1/(2σ²).
    Krgmcc {
        sigma: f64,
        alpha: f64,
        gamma: f64,
    },
    Krls {
        sigma: f64,
        gamma: f64,
    },
}

impl KernelAlgorithm {
    pub const NAMES: [&'static str; 3] = ["krnrga", "krgmcc", "krls"];

    pub fn kernel(&self) -> Result<KernelConfig> {
        let k = match *self {
            KernelAlgorithm::Krnrga { b, beta, lambda, .. } => {
                KernelConfig::Nrga(NrgaParams::new(b, beta, lambda)?)
            }
            KernelAlgorithm::Krgmcc { sigma, alpha, .. } => {
                ensure_positive("sigma", sigma)?;
                KernelConfig::GeneralizedGaussian {
                    lambda: 1.0 / (2.0 * sigma * sigma),
                    alpha,
                }
            }
            KernelAlgorithm::Krls { sigma, .. } => KernelConfig::Gaussian { sigma },
        };
        k.validate()?;
        Ok(k)
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            KernelAlgorithm::Krnrga { gamma, .. }
            | KernelAlgorithm::Krgmcc { gamma, .. }
            | KernelAlgorithm::Krls { gamma, .. } => gamma,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelAlgorithm::Krnrga { .. } => "krnrga",
            KernelAlgorithm::Krgmcc { .. } => "krgmcc",
            KernelAlgorithm::Krls { .. } => "krls",
        }
    }

    /// Fresh model seeded with the first training pair.
    pub fn init(&self, ald_threshold: Option<f64>, x: &[f64], d: f64) -> Result<KernelModel> {
        KernelModel::init(self.kernel()?, self.gamma(), ald_threshold, x, d)
    }
}

/// What happened to one training pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateInfo {
    /// A-priori error d − ŷ.
    pub error: f64,
    pub admitted: bool,
    /// ALD residual δ, or NaN when ALD is off.
    pub residual: f64,
}

/// Dictionary, coefficients and inverse system matrix of a kernel filter.
#[derive(Debug, Clone)]
pub struct KernelModel {
    centers: Vec<Vec<f64>>,
    theta: Vec<f64>,
    q: Matrix,
    kernel: KernelConfig,
    gamma: f64,
    ald_threshold: Option<f64>,
    /// Running inverse of the dictionary Gram matrix, kept only while ALD is
    /// on and the inverse is well conditioned.
    k_inv: Option<Matrix>,
    reg: Vec<f64>,
}

impl KernelModel {
    /// One-center model: Q₁ = 1/(γ/λ + κ(x₁,x₁)), Θ₁ = Q₁d₁.
    ///
    /// `ald_threshold = None` admits every sample.
    pub fn init(
        kernel: KernelConfig,
        gamma: f64,
        ald_threshold: Option<f64>,
        x: &[f64],
        d: f64,
    ) -> Result<Self> {
        kernel.validate()?;
        ensure_positive("gamma", gamma)?;
        if let Some(t) = ald_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Argument(format!(
                    "ald_threshold must satisfy ald_threshold >= 0, got {t}"
                )));
            }
        }
        if x.is_empty() {
            return Err(Error::Argument("input vector must not be empty".into()));
        }
        for &v in x {
            ensure_finite("input", v)?;
        }
        ensure_finite("desired output", d)?;
        let peak = kernel.peak();
        let r = gamma / kernel.reg_scale();
        let q1 = 1.0 / (r + peak);
        Ok(Self {
            centers: vec![x.to_vec()],
            theta: vec![q1 * d],
            q: Matrix::scalar(q1),
            kernel,
            gamma,
            ald_threshold,
            k_inv: ald_threshold.map(|_| Matrix::scalar(1.0 / peak)),
            reg: vec![r],
        })
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.kernel
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn ald_threshold(&self) -> Option<f64> {
        self.ald_threshold
    }

    /// Realized diagonal regularization `(γ/λ)·G_j` of every center.
    pub fn regularization(&self) -> &[f64] {
        &self.reg
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        let want = self.centers[0].len();
        if x.len() != want {
            return Err(Error::Argument(format!(
                "input has length {}, dictionary uses {want}",
                x.len()
            )));
        }
        Ok(())
    }

    pub fn kernel_eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        self.kernel.eval(u, v)
    }

    fn kernel_row(&self, x: &[f64]) -> Vec<f64> {
        self.centers
            .iter()
            .map(|c| self.kernel.eval_sq(squared_distance(c, x)))
            .collect()
    }

    /// ŷ = Σ_j Θ_j κ(c_j, x).
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(dot(&self.kernel_row(x), &self.theta))
    }

    fn ald_with_row(&self, h: &[f64]) -> (bool, f64, Option<Vec<f64>>) {
        let Some(t) = self.ald_threshold else {
            return (true, f64::NAN, None);
        };
        let Some(k_inv) = &self.k_inv else {
            return (true, f64::NAN, None);
        };
        let a = k_inv.mul_vec(h);
        let delta = self.kernel.peak() - dot(h, &a);
        if !delta.is_finite() {
            log::warn!("ALD residual is not finite; admitting sample");
            return (true, delta, None);
        }
        (delta > t, delta, Some(a))
    }

    /// ALD test: δ = κ(x,x) − hᵀK⁻¹h, admit iff δ exceeds the threshold.
    pub fn ald_admit(&self, x: &[f64]) -> Result<(bool, f64)> {
        self.check_dim(x)?;
        let h = self.kernel_row(x);
        let (admit, delta, _) = self.ald_with_row(&h);
        Ok((admit, delta))
    }

    /// Process one training pair. A degenerate Schur complement leaves the
    /// model untouched and returns [`Error::Degenerate`].
    pub fn update(&mut self, x: &[f64], d: f64) -> Result<UpdateInfo> {
        self.check_dim(x)?;
        ensure_finite("desired output", d)?;
        for &v in x {
            ensure_finite("input", v)?;
        }
        let h = self.kernel_row(x);
        let error = d - dot(&h, &self.theta);
        let (admitted, residual, ald_proj) = self.ald_with_row(&h);
        if !admitted {
            return Ok(UpdateInfo {
                error,
                admitted,
                residual,
            });
        }

        let z = self.q.mul_vec(&h);
        let r = self.gamma / self.kernel.reg_scale() * self.kernel.omega(error).inverse();
        let eps = self.kernel.peak() + r - dot(&z, &h);
        if !(eps.is_finite() && eps > EPS_FLOOR) {
            log::debug!("skipping sample: Schur complement {eps}");
            return Err(Error::Degenerate(format!(
                "Schur complement {eps} below floor {EPS_FLOOR}"
            )));
        }

        self.q.border_in_place(&z, eps);
        let step = error / eps;
        for (t, zi) in self.theta.iter_mut().zip(&z) {
            *t -= zi * step;
        }
        self.theta.push(step);
        self.reg.push(r);
        self.centers.push(x.to_vec());

        if let (Some(k_inv), Some(a)) = (&mut self.k_inv, ald_proj) {
            if residual > ALD_SINGULAR {
                k_inv.border_in_place(&a, residual);
            } else {
                log::warn!("dictionary Gram matrix is ill-conditioned; ALD disabled from here on");
                self.k_inv = None;
            }
        }

        Ok(UpdateInfo {
            error,
            admitted,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use nalgebra::{DMatrix, DVector};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn nrga(b: f64, beta: f64, lambda: f64) -> KernelConfig {
        KernelConfig::Nrga(NrgaParams::new(b, beta, lambda).unwrap())
    }

    fn random_points(seed: u64, n: usize, dim: usize) -> Vec<(Vec<f64>, f64)> {
        let mut rng = rng_from_seed(seed);
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let d = x.iter().map(|v| v.sin()).sum::<f64>() + 0.1 * rng.sample::<f64, _>(StandardNormal);
                (x, d)
            })
            .collect()
    }

    fn gram(model: &KernelModel) -> DMatrix<f64> {
        let c = model.centers();
        DMatrix::from_fn(c.len(), c.len(), |i, j| model.kernel_eval(&c[i], &c[j]).unwrap())
    }

    #[test]
    fn kernel_peaks() {
        let x = [0.3, -1.2];
        assert!((nrga(200.0, 2.2, 1.1).eval(&x, &x).unwrap() - 202.2 / 200.0).abs() < 1e-15);
        assert_eq!(KernelConfig::Gaussian { sigma: 0.7 }.eval(&x, &x).unwrap(), 1.0);
        assert_eq!(
            KernelConfig::GeneralizedGaussian { lambda: 0.5, alpha: 3.0 }.eval(&x, &x).unwrap(),
            1.0
        );
    }

    #[test]
    fn kernel_symmetry_and_length_check() {
        let k = nrga(10.0, 2.1, 1.0);
        let (u, v) = ([0.1, 0.5, -0.3], [1.0, -0.2, 0.4]);
        assert_eq!(k.eval(&u, &v).unwrap(), k.eval(&v, &u).unwrap());
        assert!(k.eval(&u, &v[..2]).is_err());
    }

    #[test]
    fn nrga_vector_kernel_scalar_oracle() {
        // ‖u−v‖ = 1: k = (b+β)/b · (λ/(b+β) + 1)^(−b/β)
        let (b, beta, lambda) = (200.0_f64, 2.0_f64, 1.1_f64);
        let want = (b + beta) / b * (lambda / (b + beta) + 1.0).powf(-b / beta);
        let got = nrga(b, beta, lambda).eval(&[0.6, 0.0], &[0.0, 0.8]).unwrap();
        assert!((got - want).abs() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn omega_forms() {
        let k = nrga(100.0, 2.0, 1.0);
        // β = 2: Ω = (λe²/(b+β) + 1)^(−(b+β)/β)
        let e: f64 = 0.9;
        let want = (e * e / 102.0 + 1.0).powf(-51.0);
        assert!((k.omega(e).value - want).abs() < 1e-14);
        assert_eq!(KernelConfig::Gaussian { sigma: 1.0 }.omega(123.0).value, 1.0);
        let g = KernelConfig::GeneralizedGaussian { lambda: 0.3, alpha: 2.0 };
        assert!((g.omega(-1.5).value - (-0.3 * 2.25_f64).exp()).abs() < 1e-15);
        // β < 2 is regularized at e = 0
        let w = nrga(10.0, 1.5, 1.0).omega(0.0);
        assert!(w.value.is_finite() && w.value > 0.0);
    }

    #[test]
    fn init_examples() {
        let k = nrga(200.0, 2.2, 1.1);
        let m = KernelModel::init(k, 0.1, None, &[0.4, 0.2], 0.0).unwrap();
        assert_eq!(m.theta(), &[0.0]);
        let m = KernelModel::init(k, 0.1, None, &[0.4, 0.2], 1.5).unwrap();
        let q1 = 1.0 / (0.1 / 1.1 + 202.2 / 200.0);
        assert!((m.q()[(0, 0)] - q1).abs() < 1e-15);
        let y = m.predict(&[0.4, 0.2]).unwrap();
        assert!((y - m.theta()[0] * 202.2 / 200.0).abs() < 1e-15);
        assert!(KernelModel::init(k, 0.0, None, &[1.0], 1.0).is_err());
        assert!(KernelModel::init(k, 0.1, Some(-1.0), &[1.0], 1.0).is_err());
    }

    #[test]
    fn predict_examples() {
        let g = KernelConfig::Gaussian { sigma: 1.0 };
        let m = KernelModel::init(g, 0.1, None, &[1.0, 2.0], 0.0).unwrap();
        assert_eq!(m.predict(&[5.0, 5.0]).unwrap(), 0.0);
        assert!(m.predict(&[1.0]).is_err());
    }

    #[test]
    fn predict_matches_loop_sum() {
        let k = nrga(10.0, 2.1, 1.0);
        let data = random_points(4, 8, 3);
        let mut m = KernelModel::init(k, 0.1, None, &data[0].0, data[0].1).unwrap();
        for (x, d) in &data[1..] {
            m.update(x, *d).unwrap();
        }
        assert_eq!(m.len(), 8);
        let x = [0.2, -0.4, 0.9];
        let mut want = 0.0;
        for (c, t) in m.centers().iter().zip(m.theta()) {
            let r = c.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            want += t * (10.0 + 2.1) / 10.0 * (r.powf(2.1) / 12.1 + 1.0).powf(-10.0 / 2.1);
        }
        assert!((m.predict(&x).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn zero_error_sample_appends_zero() {
        let g = KernelConfig::Gaussian { sigma: 1.0 };
        let mut m = KernelModel::init(g, 0.1, None, &[0.0], 1.0).unwrap();
        let before = m.theta().to_vec();
        let x = [0.5];
        let d = m.predict(&x).unwrap();
        let info = m.update(&x, d).unwrap();
        assert!(info.admitted);
        assert_eq!(info.error, 0.0);
        assert_eq!(m.theta()[0], before[0]);
        assert_eq!(m.theta()[1], 0.0);
    }

    #[test]
    fn q_inverse_block_reconstruction() {
        let k = nrga(200.0, 2.2, 1.1);
        let data = random_points(5, 5, 4);
        let mut m = KernelModel::init(k, 0.1, None, &data[0].0, data[0].1).unwrap();
        for (x, d) in &data[1..] {
            assert!(m.update(x, *d).unwrap().admitted);
        }
        let q_inv = gram(&m) + DMatrix::from_diagonal(&DVector::from_column_slice(m.regularization()));
        let q = DMatrix::from_fn(5, 5, |i, j| m.q()[(i, j)]);
        let prod = &q * &q_inv;
        assert!((prod - DMatrix::identity(5, 5)).amax() < 1e-8);
    }

    #[test]
    fn theta_matches_dense_solve_with_frozen_weights() {
        let k = nrga(10.0, 2.1, 1.0);
        let data = random_points(6, 5, 2);
        let mut m = KernelModel::init(k, 0.1, None, &data[0].0, data[0].1).unwrap();
        for (x, d) in &data[1..] {
            m.update(x, *d).unwrap();
        }
        let a = gram(&m) + DMatrix::from_diagonal(&DVector::from_column_slice(m.regularization()));
        let d = DVector::from_iterator(5, data.iter().map(|p| p.1));
        let theta = a.lu().solve(&d).unwrap();
        for (got, want) in m.theta().iter().zip(theta.iter()) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn krls_matches_regularized_solve() {
        let gamma = 0.1;
        let data = random_points(7, 20, 3);
        let mut m = KernelAlgorithm::Krls { sigma: 1.0, gamma }
            .init(None, &data[0].0, data[0].1)
            .unwrap();
        for (x, d) in &data[1..] {
            m.update(x, *d).unwrap();
        }
        let a = gram(&m) + DMatrix::identity(20, 20) * gamma;
        let d = DVector::from_iterator(20, data.iter().map(|p| p.1));
        let theta = a.lu().solve(&d).unwrap();
        for (got, want) in m.theta().iter().zip(theta.iter()) {
            assert!((got - want).abs() < 1e-8);
        }
    }

    #[test]
    fn krgmcc_weighting_at_alpha_two() {
        let k = KernelAlgorithm::Krgmcc { sigma: 2.7, gamma: 0.1, alpha: 2.0 }.kernel().unwrap();
        let lg = 1.0 / (2.0 * 2.7 * 2.7);
        for e in [-2.0_f64, 0.3, 1.7] {
            assert!((k.omega(e).value - (-lg * e * e).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn ald_rejects_existing_center() {
        let g = KernelConfig::Gaussian { sigma: 1.0 };
        let mut m = KernelModel::init(g, 0.1, Some(0.01), &[0.0, 0.0], 1.0).unwrap();
        m.update(&[1.0, 0.5], 0.3).unwrap();
        let (admit, delta) = m.ald_admit(&[1.0, 0.5]).unwrap();
        assert!(!admit);
        assert!(delta.abs() < 1e-10);
        let before = m.theta().to_vec();
        let info = m.update(&[1.0, 0.5], 5.0).unwrap();
        assert!(!info.admitted);
        assert_eq!(m.theta(), &before[..]);
    }

    #[test]
    fn ald_zero_threshold_admits_distinct() {
        let g = KernelConfig::Gaussian { sigma: 1.0 };
        let data = random_points(8, 30, 2);
        let mut m = KernelModel::init(g, 0.1, Some(0.0), &data[0].0, data[0].1).unwrap();
        for (x, d) in &data[1..] {
            m.update(x, *d).unwrap();
        }
        assert_eq!(m.len(), 30);
    }

    #[test]
    fn ald_matches_batch_oracle() {
        let g = KernelConfig::Gaussian { sigma: 1.0 };
        let mut rng = rng_from_seed(9);
        let data: Vec<(Vec<f64>, f64)> = (0..200)
            .map(|_| (vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)], rng.random::<f64>()))
            .collect();
        let mut m = KernelModel::init(g, 0.1, Some(0.01), &data[0].0, data[0].1).unwrap();
        for (x, d) in &data[1..] {
            m.update(x, *d).unwrap();
        }

        let mut dict: Vec<&Vec<f64>> = vec![&data[0].0];
        for (x, _) in &data[1..] {
            let n = dict.len();
            let k = DMatrix::from_fn(n, n, |i, j| g.eval(dict[i], dict[j]).unwrap());
            let h = DVector::from_iterator(n, dict.iter().map(|c| g.eval(c, x).unwrap()));
            let a = k.lu().solve(&h).unwrap();
            let delta = 1.0 - h.dot(&a);
            if delta > 0.01 {
                dict.push(x);
            }
        }
        assert!(m.len() < 200);
        assert_eq!(m.len(), dict.len());
    }

    #[test]
    fn q_stays_symmetric() {
        let k = nrga(10.0, 2.1, 1.0);
        let mut rng = rng_from_seed(10);
        let x0 = [0.0];
        let mut m = KernelModel::init(k, 0.1, Some(0.01), &x0, 0.0).unwrap();
        for _ in 0..1000 {
            let x: [f64; 1] = [rng.random_range(-3.0..3.0)];
            let d = x[0].sin();
            let _ = m.update(&x, d);
            assert_eq!(m.theta().len(), m.len());
            assert_eq!(m.q().dim(), m.len());
            assert_eq!(m.regularization().len(), m.len());
        }
        assert!(m.q().max_asymmetry() <= 1e-10);
    }

    #[test]
    fn learning_curve_decreases() {
        let seeds = 20;
        let n = 50;
        let mut curve = vec![0.0; n];
        for seed in 0..seeds {
            let mut rng = rng_from_seed(100 + seed);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let f = |x: f64| (1.5 * x).sin() + 0.3 * x;
            let mut m = KernelAlgorithm::Krnrga { b: 10.0, beta: 2.1, lambda: 1.0, gamma: 0.1 }
                .init(None, &[xs[0]], f(xs[0]))
                .unwrap();
            for i in 1..n {
                let info = m.update(&[xs[i]], f(xs[i])).unwrap();
                curve[i] += info.error * info.error / seeds as f64;
            }
        }
        // windowed averages after the first 10 samples do not increase
        let window = |a: usize| curve[a..a + 10].iter().sum::<f64>() / 10.0;
        let w: Vec<f64> = [10, 20, 30, 40].iter().map(|&a| window(a)).collect();
        for pair in w.windows(2) {
            assert!(pair[1] <= pair[0], "{w:?}");
        }
    }
}
