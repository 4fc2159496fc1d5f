//! The RGA cost family and the kernels derived from it.
//!
//! The RGA cost is
//!
//! ```text
//! P(e; α, β, λ) = |α−β|/α · [ (λ|e|^β / |α−β| + 1)^(α/β) − 1 ]
//! ```
//!
//! with shape parameters α ∈ ℝ, β > 0 and scale λ > 0. Its limits recover
//! familiar losses:
//!
//! | limit      | cost                        | algorithm       |
//! |------------|-----------------------------|-----------------|
//! | α = β      | (λ/β)·|e|^β                 | LMP / LMS / LMF |
//! | α → 0      | ln(λ|e|^β/β + 1)            | RLMLS / LMLS    |
//! | α → −∞     | 1 − exp(−λ|e|^β/β)          | GMCC / MCC      |
//!
//! The α → +∞ limit, exp(λ|e|^β/β) − 1, produces a divergent filter and is
//! rejected at construction.
//!
//! For α = −b < 0 the cost is an offset of the NRGA kernel
//! `k(e) = (b+β)/b · (λ|e|^β/(b+β) + 1)^(−b/β)`, which peaks at (b+β)/b and
//! is positive definite for 0 < β ≤ 2.

use serde::Serialize;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};

/// Below this distance the analytic limit replaces the general formula.
pub const BRANCH_EPS: f64 = 1e-9;

/// Convergence tolerance of the Jacobi eigensolver behind
/// [`gram_min_eigenvalue`].
pub const EIGEN_TOL: f64 = 1e-10;

/// Which closed form [`rga_cost`] and [`rga_grad_factor`] evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    General,
    AlphaEqualsBeta,
    AlphaZero,
    AlphaNegInfinity,
}

/// Shape and scale of one member of the RGA family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RgaParams {
    alpha: f64,
    beta: f64,
    lambda: f64,
    branch: Branch,
}

impl RgaParams {
    /// Finite α. The α = β and α = 0 limits are selected automatically when
    /// α is within [`BRANCH_EPS`] of them.
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        if alpha == f64::INFINITY {
            return Err(Error::Argument(
                "alpha = +inf yields a divergent filter and is not supported".into(),
            ));
        }
        if !alpha.is_finite() {
            return Err(Error::Argument(format!(
                "alpha must be finite (use RgaParams::alpha_neg_infinity for the GMCC limit), got {alpha}"
            )));
        }
        ensure_positive("beta", beta)?;
        ensure_positive("lambda", lambda)?;
        let branch = if (alpha - beta).abs() <= BRANCH_EPS {
            Branch::AlphaEqualsBeta
        } else if alpha.abs() <= BRANCH_EPS {
            Branch::AlphaZero
        } else {
            Branch::General
        };
        Ok(Self {
            alpha,
            beta,
            lambda,
            branch,
        })
    }

    /// The α → −∞ limit (generalized correntropy).
    pub fn alpha_neg_infinity(beta: f64, lambda: f64) -> Result<Self> {
        ensure_positive("beta", beta)?;
        ensure_positive("lambda", lambda)?;
        Ok(Self {
            alpha: f64::NEG_INFINITY,
            beta,
            lambda,
            branch: Branch::AlphaNegInfinity,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Unchecked cost evaluation for finite `e`.
    pub(crate) fn cost(&self, e: f64) -> f64 {
        let (beta, lambda) = (self.beta, self.lambda);
        let t = e.abs().powf(beta);
        match self.branch {
            Branch::AlphaEqualsBeta => lambda / beta * t,
            Branch::AlphaZero => (lambda * t / beta).ln_1p(),
            Branch::AlphaNegInfinity => -(-lambda * t / beta).exp_m1(),
            Branch::General => {
                let gap = (self.alpha - beta).abs();
                gap / self.alpha * (self.alpha / beta * (lambda * t / gap).ln_1p()).exp_m1()
            }
        }
    }

    /// Unchecked gradient factor f(e) for finite `e`.
    pub(crate) fn grad_factor(&self, e: f64) -> f64 {
        if e == 0.0 {
            return 0.0;
        }
        let beta = self.beta;
        match self.branch {
            Branch::AlphaEqualsBeta => e.signum() * e.abs().powf(beta - 1.0),
            Branch::AlphaZero => {
                let a = e.abs();
                e.signum() * a.powf(beta - 1.0) / (self.lambda * a.powf(beta) / beta + 1.0)
            }
            Branch::AlphaNegInfinity => {
                let a = e.abs();
                e.signum() * a.powf(beta - 1.0) * (-self.lambda * a.powf(beta) / beta).exp()
            }
            Branch::General => {
                let gap = (self.alpha - beta).abs();
                let exponent = self.alpha / beta - 1.0;
                rational_factor(e, beta, self.lambda, gap, exponent)
            }
        }
    }
}

/// `sgn(e)·|e|^(β−1)·(λ|e|^β/gap + 1)^exponent`, shared by the RGA and NARGA
/// updates so that equal parameters give bit-identical steps.
#[inline]
pub(crate) fn rational_factor(e: f64, beta: f64, lambda: f64, gap: f64, exponent: f64) -> f64 {
    if e == 0.0 {
        return 0.0;
    }
    let a = e.abs();
    e.signum() * a.powf(beta - 1.0) * (exponent * (lambda * a.powf(beta) / gap).ln_1p()).exp()
}

/// Parameters of the symmetric NRGA kernel, b = −α > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NrgaParams {
    b: f64,
    beta: f64,
    lambda: f64,
}

impl NrgaParams {
    pub fn new(b: f64, beta: f64, lambda: f64) -> Result<Self> {
        ensure_positive("b", b)?;
        ensure_positive("beta", beta)?;
        ensure_positive("lambda", lambda)?;
        Ok(Self { b, beta, lambda })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Kernel value at zero, (b+β)/b.
    pub fn peak(&self) -> f64 {
        (self.b + self.beta) / self.b
    }

    /// The equivalent RGA parameters (α = −b).
    pub fn to_rga(&self) -> RgaParams {
        RgaParams::new(-self.b, self.beta, self.lambda).expect("validated at construction")
    }

    pub(crate) fn kernel(&self, e: f64) -> f64 {
        kernel_profile(self.b, self.beta, self.lambda, e)
    }
}

#[inline]
pub(crate) fn kernel_profile(b: f64, beta: f64, lambda: f64, e: f64) -> f64 {
    let bb = b + beta;
    bb / b * (-(b / beta) * (lambda * e.abs().powf(beta) / bb).ln_1p()).exp()
}

/// Parameters of the asymmetric kernel: separate scales for e ≥ 0 and e < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymParams {
    b: f64,
    beta: f64,
    lambda_plus: f64,
    lambda_minus: f64,
}

impl AsymParams {
    pub fn new(b: f64, beta: f64, lambda_plus: f64, lambda_minus: f64) -> Result<Self> {
        ensure_positive("b", b)?;
        ensure_positive("beta", beta)?;
        ensure_positive("lambda_plus", lambda_plus)?;
        ensure_positive("lambda_minus", lambda_minus)?;
        Ok(Self {
            b,
            beta,
            lambda_plus,
            lambda_minus,
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// Scale that applies to an error of this sign.
    pub fn lambda_for(&self, e: f64) -> f64 {
        if e >= 0.0 {
            self.lambda_plus
        } else {
            self.lambda_minus
        }
    }

    pub(crate) fn kernel(&self, e: f64) -> f64 {
        kernel_profile(self.b, self.beta, self.lambda_for(e), e)
    }
}

/// RGA cost P(e; α, β, λ).
pub fn rga_cost(p: &RgaParams, e: f64) -> Result<f64> {
    ensure_finite("error", e)?;
    Ok(p.cost(e))
}

/// Scalar f(e) such that the instantaneous gradient of the RGA cost with
/// respect to the weights is −λ·f(e)·x.
///
/// `f(0) = 0` for every β, including β < 1 where |e|^(β−1) diverges.
pub fn rga_grad_factor(p: &RgaParams, e: f64) -> Result<f64> {
    ensure_finite("error", e)?;
    Ok(p.grad_factor(e))
}

/// NRGA kernel k(e); even, strictly decreasing in |e|, peak (b+β)/b.
pub fn nrga_kernel(p: &NrgaParams, e: f64) -> Result<f64> {
    ensure_finite("error", e)?;
    Ok(p.kernel(e))
}

/// Asymmetric NRGA kernel: λ₊ for e ≥ 0, λ₋ for e < 0.
pub fn asym_kernel(p: &AsymParams, e: f64) -> Result<f64> {
    ensure_finite("error", e)?;
    Ok(p.kernel(e))
}

/// NRGA cost (b+β)/b − k(e), nonnegative and zero only at e = 0.
pub fn nrga_cost(p: &NrgaParams, e: f64) -> Result<f64> {
    Ok(p.peak() - nrga_kernel(p, e)?)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Argument("sample sequences must be non-empty".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Argument(format!(
            "sample sequences differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    for v in x.iter().chain(y) {
        ensure_finite("sample", *v)?;
    }
    Ok(())
}

/// Sample NRGA entropy: mean kernel value over paired differences.
pub fn nrga_entropy(p: &NrgaParams, x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let sum: f64 = x.iter().zip(y).map(|(a, b)| p.kernel(a - b)).sum();
    Ok(sum / x.len() as f64)
}

/// Induced metric √(k(0) − ρ̂(X, Y)).
pub fn induced_metric(p: &NrgaParams, x: &[f64], y: &[f64]) -> Result<f64> {
    let rho = nrga_entropy(p, x, y)?;
    // rounding can push the mean a hair above the peak
    Ok((p.peak() - rho).max(0.0).sqrt())
}

/// Gram matrix G_ij = k(x_i − x_j).
pub fn gram_matrix(p: &NrgaParams, points: &[f64]) -> Result<Matrix> {
    for v in points {
        ensure_finite("point", *v)?;
    }
    Ok(Matrix::from_fn(points.len(), |i, j| {
        p.kernel(points[i] - points[j])
    }))
}

/// Smallest eigenvalue of the NRGA Gram matrix over `points`.
pub fn gram_min_eigenvalue(p: &NrgaParams, points: &[f64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Argument(format!(
            "need at least 2 points for a Gram matrix, got {}",
            points.len()
        )));
    }
    if points.len() > 64 {
        return Err(Error::Argument(format!(
            "at most 64 points supported, got {}",
            points.len()
        )));
    }
    let g = gram_matrix(p, points)?;
    let eig = symmetric_eigenvalues(&g, EIGEN_TOL)?;
    Ok(eig[0])
}
