//! One-step prediction of the Chua series with kernel-recursive filters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chua::{build_dataset, ChuaConfig, EmbeddedDataset};
use crate::error::{Error, Result};
use crate::experiments::metrics::mse;
use crate::filters::kernel::DEFAULT_ALD_THRESHOLD;
use crate::filters::KernelAlgorithm;
use crate::noise::{NoiseKind, NoiseSpec};
use crate::rng::{derive_seed, StreamRole};

fn default_order() -> usize {
    5
}

fn default_train() -> usize {
    3000
}

fn default_test() -> usize {
    100
}

fn default_ald() -> Option<f64> {
    Some(DEFAULT_ALD_THRESHOLD)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSeriesScenario {
    #[serde(default)]
    pub chua: ChuaConfig,
    pub noise: NoiseKind,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_train")]
    pub n_train: usize,
    #[serde(default = "default_test")]
    pub n_test: usize,
    /// ALD threshold; None admits every training sample. Written as a
    /// number or the string "off".
    #[serde(default = "default_ald", with = "ald_repr")]
    pub ald_threshold: Option<f64>,
    pub algorithms: Vec<KernelAlgorithm>,
}

mod ald_repr {
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Threshold(f64),
        Word(String),
    }

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(t) => s.serialize_f64(*t),
            None => s.serialize_str("off"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Threshold(t) => Ok(Some(t)),
            Repr::Word(w) if w == "off" => Ok(None),
            Repr::Word(w) => Err(de::Error::custom(format!(
                "ald_threshold must be a number or \"off\", got \"{w}\""
            ))),
        }
    }
}

impl TimeSeriesScenario {
    pub fn new(noise: NoiseKind, algorithms: Vec<KernelAlgorithm>) -> Self {
        Self {
            chua: ChuaConfig::default(),
            noise,
            order: default_order(),
            n_train: default_train(),
            n_test: default_test(),
            ald_threshold: default_ald(),
            algorithms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.chua.params.validate()?;
        self.noise.validate()?;
        if self.order == 0 || self.n_train == 0 || self.n_test == 0 {
            return Err(Error::Argument("order, n_train and n_test must be at least 1".into()));
        }
        if let Some(t) = self.ald_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Argument(format!(
                    "ald_threshold must satisfy ald_threshold >= 0, got {t}"
                )));
            }
        }
        if self.algorithms.is_empty() {
            return Err(Error::Argument("scenario lists no algorithms".into()));
        }
        for a in &self.algorithms {
            a.kernel()?;
            if !(a.gamma().is_finite() && a.gamma() > 0.0) {
                return Err(Error::Argument(format!(
                    "gamma must satisfy gamma > 0, got {}",
                    a.gamma()
                )));
            }
        }
        Ok(())
    }

    pub fn dataset(&self, master_seed: u64) -> Result<EmbeddedDataset> {
        let series = self.chua.series(self.order + self.n_train + self.n_test)?;
        let noise = NoiseSpec::new(self.noise, derive_seed(master_seed, 0, StreamRole::Noise));
        build_dataset(&series, Some(&noise), self.order, self.n_train, self.n_test)
    }
}

/// Training and test record of one kernel filter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelTrace {
    pub label: String,
    /// A-priori squared error per training pair.
    pub train_sq_errors: Vec<f64>,
    /// Squared error per clean test pair.
    pub test_sq_errors: Vec<f64>,
    pub test_mse: f64,
    pub dictionary_size: usize,
    /// Training pairs skipped for a degenerate Schur complement.
    pub degenerate_events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeriesTrace {
    pub master_seed: u64,
    pub algorithms: Vec<KernelTrace>,
}

impl TimeSeriesTrace {
    pub fn get(&self, label: &str) -> Option<&KernelTrace> {
        self.algorithms.iter().find(|a| a.label == label)
    }
}

fn train_and_score(alg: &KernelAlgorithm, s: &TimeSeriesScenario, data: &EmbeddedDataset) -> Result<KernelTrace> {
    let mut train = data.train();
    let (x0, d0) = train.next().expect("n_train >= 1");
    let mut model = alg.init(s.ald_threshold, x0, d0)?;
    let mut train_sq_errors = Vec::with_capacity(s.n_train);
    train_sq_errors.push(d0 * d0);
    let mut degenerate_events = 0;
    for (x, d) in train {
        match model.update(x, d) {
            Ok(info) => train_sq_errors.push(info.error * info.error),
            Err(Error::Degenerate(msg)) => {
                log::warn!("{}: {msg}", alg.name());
                degenerate_events += 1;
                let e = d - model.predict(x)?;
                train_sq_errors.push(e * e);
            }
            Err(e) => return Err(e),
        }
    }
    let test_errors: Vec<f64> = data
        .test()
        .map(|(x, d)| model.predict(x).map(|y| d - y))
        .collect::<Result<_>>()?;
    Ok(KernelTrace {
        label: alg.name().to_string(),
        test_mse: mse(&test_errors)?,
        test_sq_errors: test_errors.iter().map(|e| e * e).collect(),
        train_sq_errors,
        dictionary_size: model.len(),
        degenerate_events,
    })
}

/// Train every algorithm online on the noisy pairs, then score it on the
/// clean test pairs with frozen coefficients. Algorithms run in parallel;
/// the output order follows the scenario.
pub fn run_timeseries(s: &TimeSeriesScenario, master_seed: u64) -> Result<TimeSeriesTrace> {
    s.validate()?;
    let data = s.dataset(master_seed)?;
    let algorithms = s
        .algorithms
        .par_iter()
        .map(|alg| train_and_score(alg, s, &data))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeriesTrace {
        master_seed,
        algorithms,
    })
}
