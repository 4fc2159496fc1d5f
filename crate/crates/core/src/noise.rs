//! Seeded noise generators.
//!
//! Eleven named environments (`noise1` … `noise11`) cover Gaussian, impulsive,
//! light-tailed, heavy-tailed and skewed measurement noise. Impulses are a
//! Bernoulli-gated zero-mean Gaussian added on top of the base distribution.
//!
//! Every stream is a ChaCha8 generator seeded from a 64-bit seed. Gaussian
//! variates use the ziggurat sampler from `rand_distr`; gamma variates use
//! Marsaglia–Tsang. Both are deterministic given the seed, so a `NoiseSpec`
//! always reproduces the same sequence.

use rand::Rng;
use rand_distr::{Distribution, Exp1, FisherF, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, StreamRng};

/// Impulse probability used by the presets.
pub const DEFAULT_IMPULSE_PROB: f64 = 0.05;
/// Impulse variance used by the presets.
pub const DEFAULT_IMPULSE_VAR: f64 = 1000.0;
/// Contamination probability of the mixed-Gaussian presets.
pub const DEFAULT_MIX_PROB: f64 = 0.1;

/// Noise distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseKind {
    Gaussian {
        mean: f64,
        var: f64,
    },
    GaussianPlusImpulse {
        var: f64,
        imp_var: f64,
        imp_prob: f64,
    },
    /// Zero-mean Laplace with the given variance.
    LaplacePlusImpulse {
        var: f64,
        imp_var: f64,
        imp_prob: f64,
    },
    /// `low` or `high` with probability ½ each.
    BinaryPlusImpulse {
        low: f64,
        high: f64,
        imp_var: f64,
        imp_prob: f64,
    },
    UniformPlusImpulse {
        lo: f64,
        hi: f64,
        imp_var: f64,
        imp_prob: f64,
    },
    /// Generalized Gaussian with scale `alpha_g` and shape `beta_g`.
    GgdPlusImpulse {
        alpha_g: f64,
        beta_g: f64,
        imp_var: f64,
        imp_prob: f64,
    },
    /// (1−m)·H + m·Z with H ~ N(0, var_a), Z ~ N(0, var_b), Pr{m = 1} = p.
    MixedGaussian {
        var_a: f64,
        var_b: f64,
        p: f64,
    },
    /// As [`NoiseKind::MixedGaussian`] with H = A + B, A ~ N(0, var_a1),
    /// B ~ N(0, var_a2).
    MixedGaussianSum {
        var_a1: f64,
        var_a2: f64,
        var_b: f64,
        p: f64,
    },
    /// Raw F(d1, d2) variates, optionally shifted to zero mean.
    FDist {
        d1: f64,
        d2: f64,
        #[serde(default)]
        centered: bool,
    },
    /// Rayleigh(σ), optionally shifted to zero mean.
    Rayleigh {
        sigma: f64,
        #[serde(default)]
        centered: bool,
    },
}

/// Number of named presets.
pub const PRESET_COUNT: usize = 11;

impl NoiseKind {
    /// Serialized `kind` tags.
    pub const KIND_NAMES: [&'static str; 10] = [
        "gaussian",
        "gaussian_plus_impulse",
        "laplace_plus_impulse",
        "binary_plus_impulse",
        "uniform_plus_impulse",
        "ggd_plus_impulse",
        "mixed_gaussian",
        "mixed_gaussian_sum",
        "f_dist",
        "rayleigh",
    ];

    /// Named environment `noise{index}`, 1-based.
    pub fn preset(index: usize) -> Result<Self> {
        let (iv, ip) = (DEFAULT_IMPULSE_VAR, DEFAULT_IMPULSE_PROB);
        let kind = match index {
            1 => NoiseKind::Gaussian { mean: 0.0, var: 1.0 },
            2 => NoiseKind::GaussianPlusImpulse {
                var: 1.0,
                imp_var: iv,
                imp_prob: ip,
            },
            3 => NoiseKind::LaplacePlusImpulse {
                var: 2.0,
                imp_var: iv,
                imp_prob: ip,
            },
            4 => NoiseKind::BinaryPlusImpulse {
                low: -2.0,
                high: 2.0,
                imp_var: iv,
                imp_prob: ip,
            },
            5 => NoiseKind::UniformPlusImpulse {
                lo: -std::f64::consts::SQRT_2,
                hi: std::f64::consts::SQRT_2,
                imp_var: iv,
                imp_prob: ip,
            },
            6 => NoiseKind::GgdPlusImpulse {
                alpha_g: 3.0,
                beta_g: 0.3,
                imp_var: iv,
                imp_prob: ip,
            },
            7 => NoiseKind::MixedGaussian {
                var_a: 1.0,
                var_b: 400.0,
                p: DEFAULT_MIX_PROB,
            },
            8 => NoiseKind::MixedGaussianSum {
                var_a1: 0.8,
                var_a2: 8.0,
                var_b: 400.0,
                p: DEFAULT_MIX_PROB,
            },
            9 => NoiseKind::FDist {
                d1: 5.0,
                d2: 14.0,
                centered: false,
            },
            10 => NoiseKind::Gaussian { mean: 0.0, var: 0.1 },
            11 => NoiseKind::Rayleigh {
                sigma: 1.5,
                centered: true,
            },
            _ => {
                return Err(Error::Argument(format!(
                    "noise preset index must be in 1..={PRESET_COUNT}, got {index}"
                )))
            }
        };
        Ok(kind)
    }

    /// Look up `noise1` … `noise11`.
    pub fn preset_by_name(name: &str) -> Result<Self> {
        let index = name
            .strip_prefix("noise")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| Error::Argument(format!("unknown noise preset '{name}'")))?;
        Self::preset(index)
    }

    pub fn preset_names() -> Vec<String> {
        (1..=PRESET_COUNT).map(|i| format!("noise{i}")).collect()
    }

    /// Replace the impulse probability (impulsive kinds) or the mixing
    /// probability (mixed-Gaussian kinds). Other kinds are returned unchanged.
    pub fn with_contamination(mut self, prob: f64) -> Self {
        match &mut self {
            NoiseKind::GaussianPlusImpulse { imp_prob, .. }
            | NoiseKind::LaplacePlusImpulse { imp_prob, .. }
            | NoiseKind::BinaryPlusImpulse { imp_prob, .. }
            | NoiseKind::UniformPlusImpulse { imp_prob, .. }
            | NoiseKind::GgdPlusImpulse { imp_prob, .. } => *imp_prob = prob,
            NoiseKind::MixedGaussian { p, .. } | NoiseKind::MixedGaussianSum { p, .. } => *p = prob,
            _ => {}
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn pos(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must be > 0, got {v}")))
            }
        }
        fn nonneg(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must be >= 0, got {v}")))
            }
        }
        fn prob(name: &str, v: f64) -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must lie in [0, 1], got {v}")))
            }
        }
        fn finite(name: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Argument(format!("{name} must be finite, got {v}")))
            }
        }
        match *self {
            NoiseKind::Gaussian { mean, var } => {
                finite("mean", mean)?;
                nonneg("var", var)
            }
            NoiseKind::GaussianPlusImpulse {
                var,
                imp_var,
                imp_prob,
            }
            | NoiseKind::LaplacePlusImpulse {
                var,
                imp_var,
                imp_prob,
            } => {
                pos("var", var)?;
                pos("imp_var", imp_var)?;
                prob("imp_prob", imp_prob)
            }
            NoiseKind::BinaryPlusImpulse {
                low,
                high,
                imp_var,
                imp_prob,
            } => {
                finite("low", low)?;
                finite("high", high)?;
                pos("imp_var", imp_var)?;
                prob("imp_prob", imp_prob)
            }
            NoiseKind::UniformPlusImpulse {
                lo,
                hi,
                imp_var,
                imp_prob,
            } => {
                finite("lo", lo)?;
                finite("hi", hi)?;
                if lo >= hi {
                    return Err(Error::Argument(format!("uniform bounds need lo < hi, got [{lo}, {hi}]")));
                }
                pos("imp_var", imp_var)?;
                prob("imp_prob", imp_prob)
            }
            NoiseKind::GgdPlusImpulse {
                alpha_g,
                beta_g,
                imp_var,
                imp_prob,
            } => {
                pos("alpha_g", alpha_g)?;
                pos("beta_g", beta_g)?;
                pos("imp_var", imp_var)?;
                prob("imp_prob", imp_prob)
            }
            NoiseKind::MixedGaussian { var_a, var_b, p } => {
                pos("var_a", var_a)?;
                pos("var_b", var_b)?;
                prob("p", p)
            }
            NoiseKind::MixedGaussianSum {
                var_a1,
                var_a2,
                var_b,
                p,
            } => {
                pos("var_a1", var_a1)?;
                pos("var_a2", var_a2)?;
                pos("var_b", var_b)?;
                prob("p", p)
            }
            NoiseKind::FDist { d1, d2, .. } => {
                pos("d1", d1)?;
                pos("d2", d2)
            }
            NoiseKind::Rayleigh { sigma, .. } => pos("sigma", sigma),
        }
    }

    /// Analytic mean.
    pub fn mean(&self) -> f64 {
        match *self {
            NoiseKind::Gaussian { mean, .. } => mean,
            NoiseKind::BinaryPlusImpulse { low, high, .. } => 0.5 * (low + high),
            NoiseKind::UniformPlusImpulse { lo, hi, .. } => 0.5 * (lo + hi),
            NoiseKind::FDist { d1: _, d2, centered } => {
                if centered {
                    0.0
                } else if d2 > 2.0 {
                    d2 / (d2 - 2.0)
                } else {
                    f64::INFINITY
                }
            }
            NoiseKind::Rayleigh { sigma, centered } => {
                if centered {
                    0.0
                } else {
                    rayleigh_mean(sigma)
                }
            }
            _ => 0.0,
        }
    }

    /// Analytic variance (∞ where it does not exist).
    pub fn variance(&self) -> f64 {
        match *self {
            NoiseKind::Gaussian { var, .. } => var,
            NoiseKind::GaussianPlusImpulse {
                var,
                imp_var,
                imp_prob,
            }
            | NoiseKind::LaplacePlusImpulse {
                var,
                imp_var,
                imp_prob,
            } => var + imp_prob * imp_var,
            NoiseKind::BinaryPlusImpulse {
                low,
                high,
                imp_var,
                imp_prob,
            } => 0.25 * (high - low).powi(2) + imp_prob * imp_var,
            NoiseKind::UniformPlusImpulse {
                lo,
                hi,
                imp_var,
                imp_prob,
            } => (hi - lo).powi(2) / 12.0 + imp_prob * imp_var,
            NoiseKind::GgdPlusImpulse {
                alpha_g,
                beta_g,
                imp_var,
                imp_prob,
            } => ggd_variance(alpha_g, beta_g) + imp_prob * imp_var,
            NoiseKind::MixedGaussian { var_a, var_b, p } => (1.0 - p) * var_a + p * var_b,
            NoiseKind::MixedGaussianSum {
                var_a1,
                var_a2,
                var_b,
                p,
            } => (1.0 - p) * (var_a1 + var_a2) + p * var_b,
            NoiseKind::FDist { d1, d2, .. } => {
                if d2 > 4.0 {
                    2.0 * d2 * d2 * (d1 + d2 - 2.0) / (d1 * (d2 - 2.0).powi(2) * (d2 - 4.0))
                } else {
                    f64::INFINITY
                }
            }
            NoiseKind::Rayleigh { sigma, .. } => (4.0 - std::f64::consts::PI) / 2.0 * sigma * sigma,
        }
    }
}

/// α²·Γ(3/β)/Γ(1/β).
pub fn ggd_variance(alpha_g: f64, beta_g: f64) -> f64 {
    alpha_g * alpha_g * (libm::lgamma(3.0 / beta_g) - libm::lgamma(1.0 / beta_g)).exp()
}

fn rayleigh_mean(sigma: f64) -> f64 {
    sigma * (std::f64::consts::PI / 2.0).sqrt()
}

/// A noise distribution plus the seed of its stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn generator(&self) -> Result<NoiseGenerator> {
        NoiseGenerator::new(self.kind.clone(), self.seed)
    }

    /// First `n` samples of the stream.
    pub fn sample(&self, n: usize) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::Argument("sample count must be at least 1".into()));
        }
        let mut g = self.generator()?;
        Ok((0..n).map(|_| g.next_sample()).collect())
    }
}

/// Stateful sampler for one [`NoiseSpec`].
#[derive(Debug, Clone)]
pub struct NoiseGenerator {
    sampler: Sampler,
    rng: StreamRng,
}

#[derive(Debug, Clone)]
enum Sampler {
    Gaussian { mean: f64, sd: f64 },
    Laplace { scale: f64 },
    Binary { low: f64, high: f64 },
    Uniform { lo: f64, width: f64 },
    Ggd { alpha: f64, inv_beta: f64, gamma: Gamma<f64> },
    Mixed { sd_a: f64, sd_b: f64, p: f64 },
    MixedSum { sd_a1: f64, sd_a2: f64, sd_b: f64, p: f64 },
    F { dist: FisherF<f64>, shift: f64 },
    Rayleigh { sigma: f64, shift: f64 },
    Impulsive(Box<WithImpulse>),
}

#[derive(Debug, Clone, Copy)]
struct Impulse {
    sd: f64,
    prob: f64,
}

impl NoiseGenerator {
    pub fn new(kind: NoiseKind, seed: u64) -> Result<Self> {
        kind.validate()?;
        let (base, impulse) = Self::build(&kind)?;
        Ok(Self {
            sampler: match impulse {
                Some(imp) => Sampler::with_impulse(base, imp),
                None => base,
            },
            rng: rng_from_seed(seed),
        })
    }

    fn build(kind: &NoiseKind) -> Result<(Sampler, Option<Impulse>)> {
        let imp = |v: f64, p: f64| Some(Impulse { sd: v.sqrt(), prob: p });
        Ok(match *kind {
            NoiseKind::Gaussian { mean, var } => (Sampler::Gaussian { mean, sd: var.sqrt() }, None),
            NoiseKind::GaussianPlusImpulse {
                var,
                imp_var,
                imp_prob,
            } => (
                Sampler::Gaussian {
                    mean: 0.0,
                    sd: var.sqrt(),
                },
                imp(imp_var, imp_prob),
            ),
            NoiseKind::LaplacePlusImpulse {
                var,
                imp_var,
                imp_prob,
            } => (
                Sampler::Laplace {
                    scale: (var / 2.0).sqrt(),
                },
                imp(imp_var, imp_prob),
            ),
            NoiseKind::BinaryPlusImpulse {
                low,
                high,
                imp_var,
                imp_prob,
            } => (Sampler::Binary { low, high }, imp(imp_var, imp_prob)),
            NoiseKind::UniformPlusImpulse {
                lo,
                hi,
                imp_var,
                imp_prob,
            } => (Sampler::Uniform { lo, width: hi - lo }, imp(imp_var, imp_prob)),
            NoiseKind::GgdPlusImpulse {
                alpha_g,
                beta_g,
                imp_var,
                imp_prob,
            } => (ggd_sampler(alpha_g, beta_g)?, imp(imp_var, imp_prob)),
            NoiseKind::MixedGaussian { var_a, var_b, p } => (
                Sampler::Mixed {
                    sd_a: var_a.sqrt(),
                    sd_b: var_b.sqrt(),
                    p,
                },
                None,
            ),
            NoiseKind::MixedGaussianSum {
                var_a1,
                var_a2,
                var_b,
                p,
            } => (
                Sampler::MixedSum {
                    sd_a1: var_a1.sqrt(),
                    sd_a2: var_a2.sqrt(),
                    sd_b: var_b.sqrt(),
                    p,
                },
                None,
            ),
            NoiseKind::FDist { d1, d2, centered } => {
                let dist = FisherF::new(d1, d2).map_err(|e| Error::Argument(format!("F({d1}, {d2}): {e}")))?;
                let shift = if centered {
                    if d2 <= 2.0 {
                        return Err(Error::Argument(
                            "centered F noise needs d2 > 2 for a finite mean".into(),
                        ));
                    }
                    d2 / (d2 - 2.0)
                } else {
                    0.0
                };
                (Sampler::F { dist, shift }, None)
            }
            NoiseKind::Rayleigh { sigma, centered } => (
                Sampler::Rayleigh {
                    sigma,
                    shift: if centered { rayleigh_mean(sigma) } else { 0.0 },
                },
                None,
            ),
        })
    }

    /// Next variate of the stream.
    pub fn next_sample(&mut self) -> f64 {
        self.sampler.draw(&mut self.rng)
    }
}

fn ggd_sampler(alpha_g: f64, beta_g: f64) -> Result<Sampler> {
    let gamma = Gamma::new(1.0 / beta_g, 1.0)
        .map_err(|e| Error::Argument(format!("GGD shape {beta_g}: {e}")))?;
    Ok(Sampler::Ggd {
        alpha: alpha_g,
        inv_beta: 1.0 / beta_g,
        gamma,
    })
}

/// Base sampler plus a Bernoulli-gated Gaussian impulse.
#[derive(Debug, Clone)]
struct WithImpulse {
    base: Sampler,
    impulse: Impulse,
}

impl Sampler {
    fn with_impulse(base: Sampler, impulse: Impulse) -> Sampler {
        Sampler::Impulsive(Box::new(WithImpulse { base, impulse }))
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            Sampler::Gaussian { mean, sd } => mean + sd * normal(rng),
            Sampler::Laplace { scale } => {
                let mag: f64 = Exp1.sample(rng);
                if rng.random::<bool>() {
                    scale * mag
                } else {
                    -scale * mag
                }
            }
            Sampler::Binary { low, high } => {
                if rng.random::<bool>() {
                    *high
                } else {
                    *low
                }
            }
            Sampler::Uniform { lo, width } => lo + width * rng.random::<f64>(),
            Sampler::Ggd {
                alpha,
                inv_beta,
                gamma,
            } => {
                let g: f64 = gamma.sample(rng);
                let mag = alpha * g.powf(*inv_beta);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            Sampler::Mixed { sd_a, sd_b, p } => {
                let h = sd_a * normal(rng);
                let z = sd_b * normal(rng);
                if rng.random::<f64>() < *p {
                    z
                } else {
                    h
                }
            }
            Sampler::MixedSum {
                sd_a1,
                sd_a2,
                sd_b,
                p,
            } => {
                let m = sd_a1 * normal(rng) + sd_a2 * normal(rng);
                let z = sd_b * normal(rng);
                if rng.random::<f64>() < *p {
                    z
                } else {
                    m
                }
            }
            Sampler::F { dist, shift } => dist.sample(rng) - shift,
            Sampler::Rayleigh { sigma, shift } => {
                let e: f64 = Exp1.sample(rng);
                sigma * (2.0 * e).sqrt() - shift
            }
            Sampler::Impulsive(w) => {
                let base = w.base.draw(rng);
                if rng.random::<f64>() < w.impulse.prob {
                    base + w.impulse.sd * normal(rng)
                } else {
                    base
                }
            }
        }
    }
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Zero-mean generalized Gaussian variates: |v| = α·G^(1/β), G ~ Gamma(1/β, 1),
/// with a fair random sign.
pub fn ggd_sample(alpha_g: f64, beta_g: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    NoiseSpec::new(
        NoiseKind::GgdPlusImpulse {
            alpha_g,
            beta_g,
            imp_var: 1.0,
            imp_prob: 0.0,
        },
        seed,
    )
    .sample(n)
}
