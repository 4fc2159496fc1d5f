//! Monte Carlo system identification.
//!
//! Each run draws a unit-norm plant `c_o`, feeds a tapped delay line of white
//! unit-variance Gaussian input through it, adds noise, and steps every
//! algorithm on the same data. NMSD curves are averaged across runs on a
//! linear scale and reported in dB.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::metrics::{median, nmsd_linear, to_db};
use crate::filters::{make_baseline, AlgorithmKind, FilterState, SampleIO};
use crate::linalg::dot;
use crate::noise::{NoiseKind, NoiseSpec};
use crate::rng::{derive_seed, rng_from_seed, StreamRole};

/// Runs processed per parallel batch; bounds memory for large ensembles.
const BATCH: usize = 64;

/// One algorithm entry of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub label: String,
    pub mu: f64,
    pub params: AlgorithmKind,
}

impl AlgorithmSpec {
    pub fn new(label: impl Into<String>, mu: f64, params: AlgorithmKind) -> Self {
        Self {
            label: label.into(),
            mu,
            params,
        }
    }

    pub fn build(&self, len: usize) -> Result<FilterState> {
        make_baseline(&self.params, self.mu, len)
    }
}

fn default_crossing_db() -> f64 {
    -10.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SysIdScenario {
    pub filter_len: usize,
    pub n_samples: usize,
    pub runs: usize,
    pub noise: NoiseKind,
    /// Iteration at which the plant switches to −c_o.
    #[serde(default)]
    pub flip_at: Option<usize>,
    /// Level used for the per-run convergence-time statistic.
    #[serde(default = "default_crossing_db")]
    pub crossing_db: f64,
    pub algorithms: Vec<AlgorithmSpec>,
}

impl SysIdScenario {
    pub fn new(noise: NoiseKind, algorithms: Vec<AlgorithmSpec>) -> Self {
        Self {
            filter_len: 9,
            n_samples: 5000,
            runs: 100,
            noise,
            flip_at: None,
            crossing_db: default_crossing_db(),
            algorithms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.filter_len == 0 {
            return Err(Error::Argument("filter_len must be at least 1".into()));
        }
        if self.n_samples == 0 || self.runs == 0 {
            return Err(Error::Argument("n_samples and runs must be at least 1".into()));
        }
        if let Some(f) = self.flip_at {
            if f >= self.n_samples {
                return Err(Error::Argument(format!(
                    "flip_at ({f}) must be below n_samples ({})",
                    self.n_samples
                )));
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::Argument("scenario lists no algorithms".into()));
        }
        self.noise.validate()?;
        for a in &self.algorithms {
            a.build(self.filter_len)
                .map_err(|e| Error::Argument(format!("algorithm '{}': {e}", a.label)))?;
        }
        Ok(())
    }

    /// Index where the steady-state window starts (last 10%).
    pub fn steady_start(&self) -> usize {
        self.n_samples - (self.n_samples / 10).max(1)
    }
}

/// Ensemble result for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmTrace {
    pub label: String,
    /// Ensemble NMSD per iteration in dB; NaN if every run diverged.
    pub nmsd_db: Vec<f64>,
    /// Per-run steady-state NMSD (linear); NaN for diverged runs.
    pub steady_state_runs: Vec<f64>,
    /// Per-run first iteration at or below the crossing level.
    pub crossing_runs: Vec<Option<usize>>,
    pub diverged_runs: usize,
}

impl AlgorithmTrace {
    /// Mean of the ensemble curve over the steady-state window, in dB.
    pub fn steady_state_db(&self) -> f64 {
        let n = self.nmsd_db.len();
        let start = n - (n / 10).max(1);
        let w = &self.nmsd_db[start..];
        to_db(w.iter().map(|v| 10f64.powf(v / 10.0)).sum::<f64>() / w.len() as f64)
    }

    /// Median over runs of the per-run steady-state NMSD, in dB.
    pub fn median_steady_state_db(&self) -> f64 {
        to_db(median(&self.steady_state_runs))
    }

    /// Median over runs of the crossing iteration; runs that never cross
    /// count as `n_samples`.
    pub fn median_crossing(&self) -> f64 {
        let n = self.nmsd_db.len();
        let v: Vec<f64> = self
            .crossing_runs
            .iter()
            .zip(&self.steady_state_runs)
            .filter(|(_, s)| s.is_finite())
            .map(|(c, _)| c.unwrap_or(n) as f64)
            .collect();
        median(&v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SysIdTrace {
    pub master_seed: u64,
    pub runs: usize,
    pub algorithms: Vec<AlgorithmTrace>,
    /// Runs in which every algorithm diverged.
    pub failed_runs: usize,
}

impl SysIdTrace {
    pub fn get(&self, label: &str) -> Option<&AlgorithmTrace> {
        self.algorithms.iter().find(|a| a.label == label)
    }
}

struct RunOutcome {
    /// Linear NMSD curve per algorithm, None if it diverged.
    curves: Vec<Option<Vec<f64>>>,
    crossings: Vec<Option<usize>>,
}

fn unit_sphere(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let n = dot(&v, &v).sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn simulate_run(s: &SysIdScenario, master_seed: u64, run: u64) -> Result<RunOutcome> {
    let len = s.filter_len;
    let mut input_rng = rng_from_seed(derive_seed(master_seed, run, StreamRole::Input));
    let mut system_rng = rng_from_seed(derive_seed(master_seed, run, StreamRole::System));
    let mut noise = NoiseSpec::new(s.noise, derive_seed(master_seed, run, StreamRole::Noise)).generator()?;

    let mut c_o = unit_sphere(&mut system_rng, len);
    let mut filters: Vec<Option<FilterState>> = s
        .algorithms
        .iter()
        .map(|a| a.build(len).map(Some))
        .collect::<Result<_>>()?;
    let mut curves: Vec<Vec<f64>> = vec![Vec::with_capacity(s.n_samples); filters.len()];
    let mut crossings = vec![None; filters.len()];
    let crossing = 10f64.powf(s.crossing_db / 10.0);

    let mut x = vec![0.0; len];
    for _ in 1..len {
        x.rotate_right(1);
        x[0] = input_rng.sample(StandardNormal);
    }
    for i in 0..s.n_samples {
        if s.flip_at == Some(i) {
            c_o.iter_mut().for_each(|c| *c = -*c);
        }
        x.rotate_right(1);
        x[0] = input_rng.sample(StandardNormal);
        let d = dot(&c_o, &x) + noise.next_sample();
        for (k, slot) in filters.iter_mut().enumerate() {
            let Some(f) = slot else { continue };
            match f.step(SampleIO::new(&x, d)) {
                Ok(_) => {
                    let v = nmsd_linear(f.weights(), &c_o)?;
                    if !v.is_finite() {
                        *slot = None;
                        continue;
                    }
                    if crossings[k].is_none() && v <= crossing {
                        crossings[k] = Some(i);
                    }
                    curves[k].push(v);
                }
                Err(Error::Divergence { .. }) => *slot = None,
                Err(e) => return Err(e),
            }
        }
    }
    let curves = filters
        .iter()
        .zip(curves)
        .map(|(f, c)| f.as_ref().map(|_| c))
        .collect();
    Ok(RunOutcome { curves, crossings })
}

/// Run the Monte Carlo ensemble. Output is a pure function of
/// `(scenario, master_seed)` regardless of thread count.
pub fn run_sysid(s: &SysIdScenario, master_seed: u64) -> Result<SysIdTrace> {
    s.validate()?;
    let n_alg = s.algorithms.len();
    let n = s.n_samples;
    let start = s.steady_start();
    let mut sums = vec![vec![0.0; n]; n_alg];
    let mut counts = vec![0usize; n_alg];
    let mut steady = vec![Vec::with_capacity(s.runs); n_alg];
    let mut cross = vec![Vec::with_capacity(s.runs); n_alg];
    let mut failed_runs = 0;

    let mut first = 0;
    while first < s.runs {
        let last = (first + BATCH).min(s.runs);
        let batch: Vec<Result<RunOutcome>> = (first..last)
            .into_par_iter()
            .map(|r| simulate_run(s, master_seed, r as u64))
            .collect();
        for outcome in batch {
            let outcome = outcome?;
            if outcome.curves.iter().all(Option::is_none) {
                failed_runs += 1;
            }
            for (k, curve) in outcome.curves.into_iter().enumerate() {
                match curve {
                    Some(c) => {
                        for (acc, v) in sums[k].iter_mut().zip(&c) {
                            *acc += v;
                        }
                        counts[k] += 1;
                        steady[k].push(c[start..].iter().sum::<f64>() / (n - start) as f64);
                        cross[k].push(outcome.crossings[k]);
                    }
                    None => {
                        steady[k].push(f64::NAN);
                        cross[k].push(None);
                    }
                }
            }
        }
        first = last;
    }

    let algorithms = s
        .algorithms
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let nmsd_db = if counts[k] == 0 {
                vec![f64::NAN; n]
            } else {
                sums[k].iter().map(|v| to_db(v / counts[k] as f64)).collect()
            };
            AlgorithmTrace {
                label: a.label.clone(),
                nmsd_db,
                steady_state_runs: std::mem::take(&mut steady[k]),
                crossing_runs: std::mem::take(&mut cross[k]),
                diverged_runs: s.runs - counts[k],
            }
        })
        .collect();
    Ok(SysIdTrace {
        master_seed,
        runs: s.runs,
        algorithms,
        failed_runs,
    })
}
