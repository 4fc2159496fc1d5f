//! Online linear filters driven by the RGA family.
//!
//! Every filter here has the same shape:
//!
//! ```text
//! y_i = c_iᵀ x_i
//! e_i = d_i − y_i
//! c_{i+1} = c_i + g(e_i) · x_i
//! ```
//!
//! and differs only in the scalar gain `g(e)`. For RGA that gain is
//! `μ·λ·f(e)`, so the user-facing μ is the step applied to the instantaneous
//! gradient and the effective LMS-style step is η = μλ.

use serde::{Deserialize, Serialize};

use crate::cost::{rational_factor, AsymParams, RgaParams};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linalg::dot;

/// Update rule of a [`FilterState`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Algo {
    Rga(RgaParams),
    Narga(AsymParams),
    /// Asymmetric correntropy with Gaussian kernel widths σ₊ (e ≥ 0), σ₋ (e < 0).
    Macc { sigma_plus: f64, sigma_minus: f64 },
    /// Asymmetric generalized correntropy with shape α_g.
    Gmacc {
        sigma_plus: f64,
        sigma_minus: f64,
        alpha: f64,
    },
}

/// One regressor / desired-output pair.
#[derive(Debug, Clone, Copy)]
pub struct SampleIO<'a> {
    pub x: &'a [f64],
    pub d: f64,
}

impl<'a> SampleIO<'a> {
    pub fn new(x: &'a [f64], d: f64) -> Self {
        Self { x, d }
    }
}

/// Weights and configuration of a linear adaptive filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    weights: Vec<f64>,
    step_mu: f64,
    algo: Algo,
    iter: u64,
}

impl FilterState {
    /// Zero-initialized filter with `len` taps.
    pub fn new(len: usize, step_mu: f64, algo: Algo) -> Result<Self> {
        if len == 0 {
            return Err(Error::Argument("filter length must be at least 1".into()));
        }
        ensure_positive("mu", step_mu)?;
        match algo {
            Algo::Macc {
                sigma_plus,
                sigma_minus,
            } => {
                ensure_positive("sigma_plus", sigma_plus)?;
                ensure_positive("sigma_minus", sigma_minus)?;
            }
            Algo::Gmacc {
                sigma_plus,
                sigma_minus,
                alpha,
            } => {
                ensure_positive("sigma_plus", sigma_plus)?;
                ensure_positive("sigma_minus", sigma_minus)?;
                ensure_positive("alpha", alpha)?;
            }
            Algo::Rga(_) | Algo::Narga(_) => {}
        }
        Ok(Self {
            weights: vec![0.0; len],
            step_mu,
            algo,
            iter: 0,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Overwrite the weights, e.g. to start from a known point.
    pub fn set_weights(&mut self, w: &[f64]) -> Result<()> {
        self.check_len(w.len())?;
        self.weights.copy_from_slice(w);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn step_mu(&self) -> f64 {
        self.step_mu
    }

    pub fn algo(&self) -> &Algo {
        &self.algo
    }

    pub fn iterations(&self) -> u64 {
        self.iter
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.weights.len() {
            return Err(Error::Argument(format!(
                "regressor length {n} does not match filter length {}",
                self.weights.len()
            )));
        }
        Ok(())
    }

    /// Filter output cᵀx.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(dot(&self.weights, x))
    }

    /// Scalar g(e) such that the update is c ← c + g(e)·x.
    pub fn gain(&self, e: f64) -> f64 {
        let mu = self.step_mu;
        match self.algo {
            Algo::Rga(p) => mu * p.lambda() * p.grad_factor(e),
            Algo::Narga(p) => {
                let lambda = p.lambda_for(e);
                let alpha = -p.b();
                let beta = p.beta();
                mu * lambda * rational_factor(e, beta, lambda, (alpha - beta).abs(), alpha / beta - 1.0)
            }
            Algo::Macc {
                sigma_plus,
                sigma_minus,
            } => {
                let s = if e >= 0.0 { sigma_plus } else { sigma_minus };
                let s2 = s * s;
                mu * e / s2 * (-e * e / (2.0 * s2)).exp()
            }
            Algo::Gmacc {
                sigma_plus,
                sigma_minus,
                alpha,
            } => {
                if e == 0.0 {
                    return 0.0;
                }
                let s = if e >= 0.0 { sigma_plus } else { sigma_minus };
                let a = e.abs();
                mu * alpha / s.powf(alpha) * a.powf(alpha - 1.0) * e.signum() * (-(a / s).powf(alpha)).exp()
            }
        }
    }

    /// Effective data-dependent LMS step: g(e)/e, so that c ← c + step·e·x.
    pub fn effective_step(&self, e: f64) -> f64 {
        if e == 0.0 {
            0.0
        } else {
            self.gain(e) / e
        }
    }

    /// One adaptation step with any algorithm. Returns the a-priori error.
    pub fn step(&mut self, io: SampleIO<'_>) -> Result<f64> {
        ensure_finite("desired output", io.d)?;
        let e = io.d - self.predict(io.x)?;
        let g = self.gain(e);
        self.iter += 1;
        let diverged = !e.is_finite()
            || !g.is_finite()
            || self.weights.iter().zip(io.x).any(|(w, x)| !(w + g * x).is_finite());
        if diverged {
            return Err(Error::Divergence { iteration: self.iter });
        }
        for (w, x) in self.weights.iter_mut().zip(io.x) {
            *w += g * x;
        }
        Ok(e)
    }

    fn require(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Argument(format!("{what} called on a {:?} filter", self.algo)))
        }
    }

    /// RGA update; errors if the filter is not configured for RGA.
    pub fn rga_step(&mut self, io: SampleIO<'_>) -> Result<f64> {
        self.require(matches!(self.algo, Algo::Rga(_)), "rga_step")?;
        self.step(io)
    }

    /// NARGA update; errors if the filter is not configured for NARGA.
    pub fn narga_step(&mut self, io: SampleIO<'_>) -> Result<f64> {
        self.require(matches!(self.algo, Algo::Narga(_)), "narga_step")?;
        self.step(io)
    }

    /// MACC / GMACC update.
    pub fn baseline_step(&mut self, io: SampleIO<'_>) -> Result<f64> {
        self.require(
            matches!(self.algo, Algo::Macc { .. } | Algo::Gmacc { .. }),
            "baseline_step",
        )?;
        self.step(io)
    }
}

/// Named algorithm with its parameters, as used in scenario tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmKind {
    Lms,
    Lmf,
    Lmp {
        p: f64,
    },
    Sa,
    Lmls {
        lambda: f64,
    },
    Rlmls {
        lambda: f64,
        beta: f64,
    },
    Mcc {
        sigma: f64,
    },
    Gmcc {
        lambda: f64,
        alpha: f64,
    },
    Rga {
        alpha: f64,
        beta: f64,
        lambda: f64,
    },
    Narga {
        b: f64,
        beta: f64,
        lambda_plus: f64,
        lambda_minus: f64,
    },
    Macc {
        sigma_plus: f64,
        sigma_minus: f64,
    },
    Gmacc {
        sigma_plus: f64,
        sigma_minus: f64,
        alpha: f64,
    },
}

impl AlgorithmKind {
    pub const NAMES: [&'static str; 12] = [
        "lms", "lmf", "lmp", "sa", "lmls", "rlmls", "mcc", "gmcc", "rga", "narga", "macc", "gmacc",
    ];

    /// Update rule realizing this algorithm.
    pub fn algo(&self) -> Result<Algo> {
        Ok(match *self {
            AlgorithmKind::Lms => Algo::Rga(RgaParams::new(2.0, 2.0, 1.0)?),
            AlgorithmKind::Lmf => Algo::Rga(RgaParams::new(4.0, 4.0, 1.0)?),
            AlgorithmKind::Lmp { p } => Algo::Rga(RgaParams::new(p, p, 1.0)?),
            AlgorithmKind::Sa => Algo::Rga(RgaParams::new(1.0, 1.0, 1.0)?),
            AlgorithmKind::Lmls { lambda } => Algo::Rga(RgaParams::new(0.0, 2.0, lambda)?),
            AlgorithmKind::Rlmls { lambda, beta } => Algo::Rga(RgaParams::new(0.0, beta, lambda)?),
            AlgorithmKind::Mcc { sigma } => {
                ensure_positive("sigma", sigma)?;
                Algo::Rga(RgaParams::alpha_neg_infinity(2.0, 1.0 / (sigma * sigma))?)
            }
            AlgorithmKind::Gmcc { lambda, alpha } => {
                Algo::Rga(RgaParams::alpha_neg_infinity(alpha, lambda)?)
            }
            AlgorithmKind::Rga {
                alpha,
                beta,
                lambda,
            } => Algo::Rga(RgaParams::new(alpha, beta, lambda)?),
            AlgorithmKind::Narga {
                b,
                beta,
                lambda_plus,
                lambda_minus,
            } => Algo::Narga(AsymParams::new(b, beta, lambda_plus, lambda_minus)?),
            AlgorithmKind::Macc {
                sigma_plus,
                sigma_minus,
            } => Algo::Macc {
                sigma_plus,
                sigma_minus,
            },
            AlgorithmKind::Gmacc {
                sigma_plus,
                sigma_minus,
                alpha,
            } => Algo::Gmacc {
                sigma_plus,
                sigma_minus,
                alpha,
            },
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Lms => "lms",
            AlgorithmKind::Lmf => "lmf",
            AlgorithmKind::Lmp { .. } => "lmp",
            AlgorithmKind::Sa => "sa",
            AlgorithmKind::Lmls { .. } => "lmls",
            AlgorithmKind::Rlmls { .. } => "rlmls",
            AlgorithmKind::Mcc { .. } => "mcc",
            AlgorithmKind::Gmcc { .. } => "gmcc",
            AlgorithmKind::Rga { .. } => "rga",
            AlgorithmKind::Narga { .. } => "narga",
            AlgorithmKind::Macc { .. } => "macc",
            AlgorithmKind::Gmacc { .. } => "gmacc",
        }
    }
}

/// Zero-initialized filter of length `len` running `kind` with step `mu`.
pub fn make_baseline(kind: &AlgorithmKind, mu: f64, len: usize) -> Result<FilterState> {
    FilterState::new(len, mu, kind.algo()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn stream(seed: u64, len: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
        let mut rng = rng_from_seed(seed);
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
                let d: f64 = 2.0 * rng.sample::<f64, _>(StandardNormal);
                (x, d)
            })
            .collect()
    }

    /// Identification data: d = c·x + small noise, so every filter stays stable.
    fn sysid_stream(seed: u64, len: usize, n: usize) -> Vec<(Vec<f64>, f64)> {
        let mut rng = rng_from_seed(seed);
        let c: Vec<f64> = (0..len).map(|i| 1.0 / (i + 1) as f64).collect();
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
                let d = dot(&c, &x) + 0.1 * rng.sample::<f64, _>(StandardNormal);
                (x, d)
            })
            .collect()
    }

    #[test]
    fn predict_examples() {
        let f = make_baseline(&AlgorithmKind::Lms, 0.1, 3).unwrap();
        assert_eq!(f.predict(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let mut f = f;
        f.set_weights(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(f.predict(&[3.0, 1.0, 4.0]).unwrap(), 3.0);
        assert!(f.predict(&[1.0]).is_err());
    }

    #[test]
    fn predict_matches_loop_sum() {
        let mut rng = rng_from_seed(3);
        let w: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut f = make_baseline(&AlgorithmKind::Lms, 0.1, 9).unwrap();
        f.set_weights(&w).unwrap();
        let mut want = 0.0;
        for i in 0..9 {
            want += w[i] * x[i];
        }
        assert!((f.predict(&x).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn zero_error_leaves_weights() {
        let kinds = [
            AlgorithmKind::Rga {
                alpha: -100.0,
                beta: 2.1,
                lambda: 0.01,
            },
            AlgorithmKind::Narga {
                b: 100.0,
                beta: 1.5,
                lambda_plus: 0.061,
                lambda_minus: 0.6,
            },
            AlgorithmKind::Macc {
                sigma_plus: 1.3,
                sigma_minus: 1.6,
            },
            AlgorithmKind::Gmacc {
                sigma_plus: 1.3,
                sigma_minus: 1.6,
                alpha: 2.0,
            },
        ];
        for k in kinds {
            let mut f = make_baseline(&k, 0.5, 3).unwrap();
            f.set_weights(&[0.5, -0.2, 0.1]).unwrap();
            let x = [1.0, 2.0, -1.0];
            let d = f.predict(&x).unwrap();
            let e = f.step(SampleIO::new(&x, d)).unwrap();
            assert_eq!(e, 0.0);
            assert_eq!(f.weights(), &[0.5, -0.2, 0.1]);
            assert_eq!(f.iterations(), 1);
        }
    }

    #[test]
    fn limit_branches_match_textbook_updates() {
        let data = sysid_stream(11, 5, 1000);
        let mu = 0.002;
        type Update = fn(f64) -> f64;
        let cases: [(AlgorithmKind, Update); 3] = [
            (AlgorithmKind::Lms, |e| e),
            (AlgorithmKind::Lmf, |e| e * e * e),
            (AlgorithmKind::Sa, |e: f64| e.signum()),
        ];
        for (kind, g) in cases {
            let mut f = make_baseline(&kind, mu, 5).unwrap();
            let mut w = vec![0.0; 5];
            for (x, d) in &data {
                f.step(SampleIO::new(x, *d)).unwrap();
                let e = d - dot(&w, x);
                for (wi, xi) in w.iter_mut().zip(x) {
                    *wi += mu * g(e) * xi;
                }
                for (a, b) in f.weights().iter().zip(&w) {
                    assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{kind:?}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn mcc_matches_hand_coded() {
        let data = stream(12, 4, 100);
        let mu = 0.03;
        let mut f = make_baseline(&AlgorithmKind::Mcc { sigma: 1.0 }, mu, 4).unwrap();
        let mut w = vec![0.0; 4];
        for (x, d) in &data {
            f.step(SampleIO::new(x, *d)).unwrap();
            let e = d - dot(&w, x);
            for (wi, xi) in w.iter_mut().zip(x) {
                *wi += mu * e * (-e * e / 2.0).exp() * xi;
            }
            for (a, b) in f.weights().iter().zip(&w) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lmls_gradient_is_log_derivative() {
        // d/de ln(λe²/2 + 1) = λe / (λe²/2 + 1); the filter gain divides out λ.
        let lambda = 0.8;
        let f = make_baseline(&AlgorithmKind::Lmls { lambda }, 1.0, 1).unwrap();
        for e in [-3.0, -0.4, 0.2, 1.0, 5.0] {
            let want = lambda * e / (lambda * e * e / 2.0 + 1.0);
            assert!((f.gain(e) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn narga_with_equal_scales_equals_rga() {
        let data = stream(13, 6, 200);
        let (b, beta, lambda) = (100.0, 1.5, 0.2);
        let mut n = make_baseline(
            &AlgorithmKind::Narga {
                b,
                beta,
                lambda_plus: lambda,
                lambda_minus: lambda,
            },
            0.3,
            6,
        )
        .unwrap();
        let mut r = make_baseline(
            &AlgorithmKind::Rga {
                alpha: -b,
                beta,
                lambda,
            },
            0.3,
            6,
        )
        .unwrap();
        for (x, d) in &data {
            let en = n.narga_step(SampleIO::new(x, *d)).unwrap();
            let er = r.rga_step(SampleIO::new(x, *d)).unwrap();
            assert_eq!(en.to_bits(), er.to_bits());
            for (a, c) in n.weights().iter().zip(r.weights()) {
                assert_eq!(a.to_bits(), c.to_bits());
            }
        }
    }

    #[test]
    fn narga_effective_step_matches_variable_step_form() {
        let (b, beta, lp, lm, mu) = (100.0, 1.5, 0.061, 0.6, 0.08);
        let f = make_baseline(
            &AlgorithmKind::Narga {
                b,
                beta,
                lambda_plus: lp,
                lambda_minus: lm,
            },
            mu,
            1,
        )
        .unwrap();
        for e in [-4.0_f64, -0.5, 0.3, 2.0, 10.0] {
            let l = if e >= 0.0 { lp } else { lm };
            let a: f64 = e.abs();
            // u_i = −μλ|e|^(β−2)(λ|e|^β/(b+β) + 1)^(−(b+β)/β)
            let u = -mu * l * a.powf(beta - 2.0) * (l * a.powf(beta) / (b + beta) + 1.0).powf(-(b + beta) / beta);
            let step = f.effective_step(e);
            assert!(step > 0.0);
            assert!((step - u.abs()).abs() <= 1e-12 * u.abs());
        }
    }

    #[test]
    fn macc_symmetric_equals_mcc() {
        let m = make_baseline(
            &AlgorithmKind::Macc {
                sigma_plus: 1.5,
                sigma_minus: 1.5,
            },
            0.1,
            1,
        )
        .unwrap();
        let c = make_baseline(&AlgorithmKind::Mcc { sigma: 1.5 }, 0.1, 1).unwrap();
        for e in [-3.0, -1.0, 0.5, 2.5] {
            assert!((m.gain(e) - c.gain(e)).abs() < 1e-15);
        }
    }

    #[test]
    fn gmacc_alpha_two_is_rescaled_macc() {
        // GMACC(σ, α=2) gain = μ·2/σ²·e·exp(−e²/σ²) = 2·MACC(σ/√2) gain·… ;
        // the kernels coincide under σ_gmacc = √2·σ_macc.
        let s = 1.2;
        let g = make_baseline(
            &AlgorithmKind::Gmacc {
                sigma_plus: s * std::f64::consts::SQRT_2,
                sigma_minus: s * std::f64::consts::SQRT_2,
                alpha: 2.0,
            },
            0.1,
            1,
        )
        .unwrap();
        let m = make_baseline(
            &AlgorithmKind::Macc {
                sigma_plus: s,
                sigma_minus: s,
            },
            0.1,
            1,
        )
        .unwrap();
        for e in [-2.0, -0.3, 0.7, 3.0] {
            assert!((g.gain(e) - m.gain(e)).abs() < 1e-14);
        }
    }

    #[test]
    fn impulse_rejection() {
        for k in [
            AlgorithmKind::Macc {
                sigma_plus: 1.3,
                sigma_minus: 1.6,
            },
            AlgorithmKind::Gmacc {
                sigma_plus: 1.3,
                sigma_minus: 1.6,
                alpha: 2.0,
            },
            AlgorithmKind::Mcc { sigma: 1.0 },
        ] {
            let f = make_baseline(&k, 0.1, 1).unwrap();
            assert!(f.gain(100.0).abs() < 1e-100);
            assert!(f.gain(-100.0).abs() < 1e-100);
        }
    }

    #[test]
    fn bounded_influence_profile() {
        let kinds = [
            AlgorithmKind::Rga {
                alpha: -100.0,
                beta: 2.1,
                lambda: 0.01,
            },
            AlgorithmKind::Rga {
                alpha: -1000.0,
                beta: 6.0,
                lambda: 0.01,
            },
            AlgorithmKind::Narga {
                b: 100.0,
                beta: 1.5,
                lambda_plus: 0.061,
                lambda_minus: 0.6,
            },
            AlgorithmKind::Macc {
                sigma_plus: 1.3,
                sigma_minus: 1.6,
            },
            AlgorithmKind::Gmacc {
                sigma_plus: 3.0,
                sigma_minus: 1.2,
                alpha: 2.0,
            },
        ];
        for k in kinds {
            let f = make_baseline(&k, 0.1, 1).unwrap();
            for sign in [1.0, -1.0] {
                let profile: Vec<f64> = (0..=120)
                    .map(|i| f.gain(sign * 10f64.powf(-3.0 + i as f64 * 0.05)).abs())
                    .collect();
                let peak = profile.iter().cloned().fold(0.0, f64::max);
                assert!(peak.is_finite() && peak > 0.0);
                let tail = *profile.last().unwrap();
                assert!(tail < 1e-3 * peak, "{k:?} tail {tail} peak {peak}");
            }
        }
    }

    #[test]
    fn step_requires_matching_algorithm() {
        let mut f = make_baseline(&AlgorithmKind::Lms, 0.1, 2).unwrap();
        let x = [1.0, 1.0];
        assert!(f.narga_step(SampleIO::new(&x, 1.0)).is_err());
        assert!(f.baseline_step(SampleIO::new(&x, 1.0)).is_err());
        assert!(f.rga_step(SampleIO::new(&x, 1.0)).is_ok());
    }

    #[test]
    fn divergence_is_reported() {
        let mut f = make_baseline(&AlgorithmKind::Lmf, 1.0, 2).unwrap();
        let x = [10.0, -10.0];
        let mut failed = None;
        for _ in 0..50 {
            if let Err(e) = f.step(SampleIO::new(&x, 1.0)) {
                failed = Some(e);
                break;
            }
        }
        match failed {
            Some(Error::Divergence { iteration }) => assert!(iteration >= 1),
            other => panic!("expected divergence, got {other:?}"),
        }
        assert!(f.weights().iter().all(|w| w.is_finite()));
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(make_baseline(&AlgorithmKind::Lms, 0.0, 3).is_err());
        assert!(make_baseline(&AlgorithmKind::Lms, 0.1, 0).is_err());
        assert!(make_baseline(&AlgorithmKind::Mcc { sigma: 0.0 }, 0.1, 3).is_err());
        assert!(make_baseline(
            &AlgorithmKind::Macc {
                sigma_plus: -1.0,
                sigma_minus: 1.0
            },
            0.1,
            3
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn deterministic_trajectories(seed in 0u64..1000) {
            let data = stream(seed, 4, 50);
            let kind = AlgorithmKind::Rga { alpha: -100.0, beta: 2.1, lambda: 0.01 };
            let run = || {
                let mut f = make_baseline(&kind, 0.45, 4).unwrap();
                for (x, d) in &data {
                    f.step(SampleIO::new(x, *d)).unwrap();
                }
                f.weights().iter().map(|w| w.to_bits()).collect::<Vec<_>>()
            };
            prop_assert_eq!(run(), run());
        }
    }
}
