//! Named, fully parameterized scenarios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::sysid::{run_sysid, AlgorithmSpec, SysIdScenario, SysIdTrace};
use crate::experiments::theory::{predict_steady_state_msd, TheoryPrediction};
use crate::experiments::timeseries::TimeSeriesScenario;
use crate::filters::{AlgorithmKind, KernelAlgorithm};
use crate::noise::NoiseKind;

/// One λ of a theory check together with the steps simulated at it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheorySetting {
    pub lambda: f64,
    pub mus: Vec<f64>,
}

/// Simulated versus predicted steady-state MSD for RGA under Gaussian noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryScenario {
    pub filter_len: usize,
    pub n_samples: usize,
    pub runs: usize,
    pub alpha: f64,
    pub beta: f64,
    pub settings: Vec<TheorySetting>,
    pub noise_vars: Vec<f64>,
}

/// One (λ, σ_v²) cell of a theory scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryCase {
    pub label: String,
    pub lambda: f64,
    pub noise_var: f64,
    pub scenario: SysIdScenario,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryComparison {
    pub algorithm: String,
    pub lambda: f64,
    pub mu: f64,
    pub noise_var: f64,
    pub predicted: TheoryPrediction,
    /// Ensemble steady-state NMSD over the last 10% of iterations, dB.
    pub simulated_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryTrace {
    pub cases: Vec<(String, SysIdTrace)>,
    pub comparisons: Vec<TheoryComparison>,
}

impl TheoryScenario {
    pub fn validate(&self) -> Result<()> {
        if self.settings.is_empty() || self.noise_vars.is_empty() {
            return Err(Error::Argument("theory scenario needs settings and noise_vars".into()));
        }
        for c in self.cases() {
            c.scenario.validate()?;
            for a in &c.scenario.algorithms {
                predict_steady_state_msd(
                    self.filter_len,
                    a.mu,
                    c.lambda,
                    c.noise_var,
                    self.filter_len as f64,
                )?;
            }
        }
        Ok(())
    }

    pub fn cases(&self) -> Vec<TheoryCase> {
        let mut out = Vec::new();
        for s in &self.settings {
            for &var in &self.noise_vars {
                let algorithms = s
                    .mus
                    .iter()
                    .map(|&mu| {
                        AlgorithmSpec::new(
                            format!("rga_mu{mu}"),
                            mu,
                            AlgorithmKind::Rga {
                                alpha: self.alpha,
                                beta: self.beta,
                                lambda: s.lambda,
                            },
                        )
                    })
                    .collect();
                let mut sc = SysIdScenario::new(NoiseKind::Gaussian { mean: 0.0, var }, algorithms);
                sc.filter_len = self.filter_len;
                sc.n_samples = self.n_samples;
                sc.runs = self.runs;
                out.push(TheoryCase {
                    label: format!("lambda{}_var{}", s.lambda, var),
                    lambda: s.lambda,
                    noise_var: var,
                    scenario: sc,
                });
            }
        }
        out
    }
}

/// Simulate every case and set it against the closed-form prediction.
/// White unit-variance input gives tr(R_x) = L.
pub fn run_theory(t: &TheoryScenario, master_seed: u64) -> Result<TheoryTrace> {
    t.validate()?;
    let mut cases = Vec::new();
    let mut comparisons = Vec::new();
    for c in t.cases() {
        let trace = run_sysid(&c.scenario, master_seed)?;
        for (spec, at) in c.scenario.algorithms.iter().zip(&trace.algorithms) {
            let predicted = predict_steady_state_msd(
                t.filter_len,
                spec.mu,
                c.lambda,
                c.noise_var,
                t.filter_len as f64,
            )?;
            comparisons.push(TheoryComparison {
                algorithm: format!("{}/{}", c.label, spec.label),
                lambda: c.lambda,
                mu: spec.mu,
                noise_var: c.noise_var,
                predicted,
                simulated_db: at.steady_state_db(),
            });
        }
        cases.push((c.label, trace));
    }
    Ok(TheoryTrace { cases, comparisons })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScenarioKind {
    SysId(SysIdScenario),
    TimeSeries(TimeSeriesScenario),
    Theory(TheoryScenario),
}

impl ScenarioKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            ScenarioKind::SysId(s) => s.validate(),
            ScenarioKind::TimeSeries(s) => s.validate(),
            ScenarioKind::Theory(s) => s.validate(),
        }
    }

    /// Override the Monte Carlo count where the scenario has one.
    pub fn set_runs(&mut self, runs: usize) {
        match self {
            ScenarioKind::SysId(s) => s.runs = runs,
            ScenarioKind::Theory(s) => s.runs = runs,
            ScenarioKind::TimeSeries(_) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub kind: ScenarioKind,
}

fn spec(label: &str, mu: f64, params: AlgorithmKind) -> AlgorithmSpec {
    AlgorithmSpec::new(label, mu, params)
}

fn rga(mu: f64, lambda: f64, alpha: f64, beta: f64) -> AlgorithmSpec {
    spec("rga", mu, AlgorithmKind::Rga { alpha, beta, lambda })
}

/// Symmetric-noise line-up for noise preset `n` (1..=6).
pub fn symmetric_lineup(n: usize) -> Vec<AlgorithmSpec> {
    let six = n == 6;
    let gmcc = match n {
        1 | 2 => (0.0055, 0.01, 2.0),
        3 => (0.007, 0.01, 1.0),
        4 => (0.0012, 0.01, 4.0),
        5 => (0.0012, 0.01, 6.0),
        _ => (0.01, 0.1, 3.0),
    };
    let rga_row = match n {
        1 | 2 => rga(0.45, 0.01, -100.0, 2.1),
        3 => rga(0.57, 0.01, -100.0, 1.5),
        4 => rga(0.018, 0.01, -1000.0, 6.0),
        5 => rga(0.033, 0.01, -1000.0, 8.0),
        _ => rga(0.065, 0.1, -100.0, 2.2),
    };
    vec![
        spec("lms", 0.0027, AlgorithmKind::Lms),
        spec("mcc", if six { 0.009 } else { 0.03 }, AlgorithmKind::Mcc { sigma: 1.0 }),
        spec("lmls", if six { 0.009 } else { 0.02 }, AlgorithmKind::Lmls { lambda: 1.0 }),
        spec(
            "gmcc",
            gmcc.0,
            AlgorithmKind::Gmcc {
                lambda: gmcc.1,
                alpha: gmcc.2,
            },
        ),
        rga_row,
        spec("lmf", 0.00035, AlgorithmKind::Lmf),
        spec("sa", if six { 0.005 } else { 0.009 }, AlgorithmKind::Sa),
        spec(
            "rlmls",
            0.05,
            AlgorithmKind::Rlmls {
                lambda: 1.0,
                beta: 1.0,
            },
        ),
    ]
}

/// Asymmetric-noise line-up for noise preset `n` (7..=9).
pub fn asymmetric_lineup(n: usize) -> Vec<AlgorithmSpec> {
    let (mcc_mu, macc_mu, sp, sm, rga_mu, beta, narga_mu, lp, lm) = match n {
        7 => (0.018, 0.018, 1.3, 1.6, 0.5, 1.5, 0.08, 0.061, 0.6),
        8 => (0.018, 0.018, 2.6, 0.8, 0.35, 1.5, 0.105, 0.036, 0.35),
        _ => (0.01, 0.025, 3.0, 1.2, 0.5, 1.56, 0.34, 0.5, 0.06),
    };
    vec![
        spec("mcc", mcc_mu, AlgorithmKind::Mcc { sigma: 1.0 }),
        spec(
            "macc",
            macc_mu,
            AlgorithmKind::Macc {
                sigma_plus: sp,
                sigma_minus: sm,
            },
        ),
        spec(
            "gmcc",
            mcc_mu,
            AlgorithmKind::Gmcc {
                lambda: 1.0,
                alpha: 2.0,
            },
        ),
        rga(rga_mu, 0.01, -100.0, beta),
        spec(
            "gmacc",
            macc_mu,
            AlgorithmKind::Gmacc {
                sigma_plus: sp,
                sigma_minus: sm,
                alpha: 2.0,
            },
        ),
        spec(
            "narga",
            narga_mu,
            AlgorithmKind::Narga {
                b: 100.0,
                beta,
                lambda_plus: lp,
                lambda_minus: lm,
            },
        ),
    ]
}

/// Kernel line-up for noise preset 10 or 11.
pub fn kernel_lineup(n: usize) -> Vec<KernelAlgorithm> {
    let (b, beta, lambda, sigma) = if n == 10 {
        (200.0, 2.2, 1.1, 2.7)
    } else {
        (10.0, 2.1, 1.0, 2.3)
    };
    vec![
        KernelAlgorithm::Krnrga {
            b,
            beta,
            lambda,
            gamma: 0.1,
        },
        KernelAlgorithm::Krgmcc {
            sigma,
            alpha: 2.0,
            gamma: 0.1,
        },
        KernelAlgorithm::Krls {
            sigma: 1.0,
            gamma: 0.1,
        },
    ]
}

fn preset(n: usize) -> NoiseKind {
    NoiseKind::preset(n).expect("preset index in range")
}

/// All named scenarios.
pub fn scenario_registry() -> Vec<Scenario> {
    let mut out = Vec::new();

    let lambdas = [0.005, 0.01, 0.05, 0.2];
    let sweep = lambdas
        .iter()
        .map(|&l| {
            let mut a = rga(0.45, l, -100.0, 2.1);
            a.label = format!("rga_lambda{l}");
            a
        })
        .collect();
    out.push(Scenario {
        name: "fig6".into(),
        description: "RGA lambda sweep under Gaussian noise (noise1)".into(),
        kind: ScenarioKind::SysId(SysIdScenario::new(preset(1), sweep)),
    });

    for (i, tag) in ["a", "b", "c", "d", "e", "f"].iter().enumerate() {
        let n = i + 1;
        out.push(Scenario {
            name: format!("fig7{tag}"),
            description: format!("symmetric-noise comparison under noise{n}"),
            kind: ScenarioKind::SysId(SysIdScenario::new(preset(n), symmetric_lineup(n))),
        });
    }

    for (tag, n) in [("a", 2), ("b", 5)] {
        let mut s = SysIdScenario::new(preset(n), symmetric_lineup(n));
        s.flip_at = Some(2500);
        out.push(Scenario {
            name: format!("fig8{tag}"),
            description: format!("tracking, plant flips to -c_o at 2500, noise{n}"),
            kind: ScenarioKind::SysId(s),
        });
    }

    for (tag, n) in [("a", 7), ("b", 8), ("c", 9)] {
        out.push(Scenario {
            name: format!("fig9{tag}"),
            description: format!("asymmetric-noise comparison under noise{n}"),
            kind: ScenarioKind::SysId(SysIdScenario::new(preset(n), asymmetric_lineup(n))),
        });
    }

    for (tag, n) in [("a", 10), ("b", 11)] {
        out.push(Scenario {
            name: format!("fig13{tag}"),
            description: format!("Chua series prediction under noise{n}"),
            kind: ScenarioKind::TimeSeries(TimeSeriesScenario::new(preset(n), kernel_lineup(n))),
        });
    }

    out.push(Scenario {
        name: "fig14".into(),
        description: "steady-state MSD theory vs simulation, alpha=-1000, beta=2".into(),
        kind: ScenarioKind::Theory(TheoryScenario {
            filter_len: 9,
            n_samples: 5000,
            runs: 100,
            alpha: -1000.0,
            beta: 2.0,
            settings: vec![
                TheorySetting {
                    lambda: 0.01,
                    mus: vec![0.45, 1.0],
                },
                TheorySetting {
                    lambda: 0.05,
                    mus: vec![0.09, 0.2],
                },
            ],
            noise_vars: vec![0.1, 0.5, 1.0],
        }),
    });
    out
}

/// Look up a scenario by name.
pub fn find_scenario(name: &str) -> Option<Scenario> {
    scenario_registry().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let names: Vec<String> = scenario_registry().into_iter().map(|s| s.name).collect();
        let want = [
            "fig6", "fig7a", "fig7b", "fig7c", "fig7d", "fig7e", "fig7f", "fig8a", "fig8b", "fig9a",
            "fig9b", "fig9c", "fig13a", "fig13b", "fig14",
        ];
        assert_eq!(names, want);
    }

    #[test]
    fn every_scenario_validates() {
        for s in scenario_registry() {
            s.kind.validate().unwrap_or_else(|e| panic!("{}: {e}", s.name));
        }
    }

    #[test]
    fn fig7d_rga_row() {
        let ScenarioKind::SysId(s) = find_scenario("fig7d").unwrap().kind else {
            panic!("fig7d is a sysid scenario");
        };
        let r = s.algorithms.iter().find(|a| a.label == "rga").unwrap();
        assert_eq!(r.mu, 0.018);
        assert_eq!(
            r.params,
            AlgorithmKind::Rga {
                alpha: -1000.0,
                beta: 6.0,
                lambda: 0.01
            }
        );
    }

    #[test]
    fn fig9a_narga_row() {
        let ScenarioKind::SysId(s) = find_scenario("fig9a").unwrap().kind else {
            panic!("fig9a is a sysid scenario");
        };
        let r = s.algorithms.iter().find(|a| a.label == "narga").unwrap();
        assert_eq!(r.mu, 0.08);
        assert_eq!(
            r.params,
            AlgorithmKind::Narga {
                b: 100.0,
                beta: 1.5,
                lambda_plus: 0.061,
                lambda_minus: 0.6
            }
        );
    }

    #[test]
    fn tracking_scenarios_flip() {
        for name in ["fig8a", "fig8b"] {
            let ScenarioKind::SysId(s) = find_scenario(name).unwrap().kind else {
                panic!();
            };
            assert_eq!(s.flip_at, Some(2500));
        }
    }

    #[test]
    fn theory_cases_expand() {
        let ScenarioKind::Theory(t) = find_scenario("fig14").unwrap().kind else {
            panic!();
        };
        let cases = t.cases();
        assert_eq!(cases.len(), 6);
        assert!(cases.iter().all(|c| c.scenario.algorithms.len() == 2));
    }
}
