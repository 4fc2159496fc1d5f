//! Chua's circuit series and delay-embedded prediction datasets.
//!
//! State is `(u1, u2, iL)`: the voltages across C1 and C2 and the inductor
//! current. The diode is piecewise linear,
//! `φ(u) = m1·u + ½(m0 − m1)(|u + Bp| − |u − Bp|)`, with inner slope m0 and
//! outer slope m1.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::noise::NoiseSpec;

/// Which form of the second and third state equations to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ChuaVariant {
    /// `u̇2 = (u1 − u2)/RC2 + iL/C2`, `i̇L = −u2/L`.
    #[default]
    Textbook,
    /// `u̇2 = (u1 − u2)/RC2 − iL/C1`, `i̇L = −u2/L`. Not bounded for the
    /// double-scroll constants: the (u2, iL) block is a saddle.
    Verbatim,
}

/// Circuit constants in normalized units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChuaParams {
    pub c1: f64,
    pub c2: f64,
    pub r: f64,
    pub l_ind: f64,
    pub m0: f64,
    pub m1: f64,
    pub bp: f64,
    pub variant: ChuaVariant,
}

impl Default for ChuaParams {
    /// Double-scroll constants: 1/C1 = 9, 1/C2 = 1, 1/L = 7, G = 1/R = 0.7,
    /// slopes −0.8 inside and −0.5 outside the breakpoints.
    fn default() -> Self {
        Self {
            c1: 1.0 / 9.0,
            c2: 1.0,
            r: 1.0 / 0.7,
            l_ind: 1.0 / 7.0,
            m0: -0.8,
            m1: -0.5,
            bp: 1.0,
            variant: ChuaVariant::Textbook,
        }
    }
}

pub type State = [f64; 3];

impl ChuaParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("c1", self.c1)?;
        ensure_positive("c2", self.c2)?;
        ensure_positive("r", self.r)?;
        ensure_positive("l_ind", self.l_ind)?;
        ensure_positive("bp", self.bp)?;
        ensure_finite("m0", self.m0)?;
        ensure_finite("m1", self.m1)
    }

    /// Diode characteristic φ(u).
    pub fn phi(&self, u: f64) -> f64 {
        self.m1 * u + 0.5 * (self.m0 - self.m1) * ((u + self.bp).abs() - (u - self.bp).abs())
    }
}

/// Right-hand side of the circuit equations.
pub fn chua_derivative(p: &ChuaParams, s: &State) -> State {
    let [u1, u2, il] = *s;
    let du1 = (u2 - u1) / (p.r * p.c1) - p.phi(u1) / p.c1;
    let du2 = match p.variant {
        ChuaVariant::Textbook => (u1 - u2) / (p.r * p.c2) + il / p.c2,
        ChuaVariant::Verbatim => (u1 - u2) / (p.r * p.c2) - il / p.c1,
    };
    let dil = -u2 / p.l_ind;
    [du1, du2, dil]
}

fn axpy(s: &State, h: f64, k: &State) -> State {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]]
}

/// One classical RK4 step.
pub fn rk4_step(p: &ChuaParams, s: &State, h: f64) -> State {
    let k1 = chua_derivative(p, s);
    let k2 = chua_derivative(p, &axpy(s, h / 2.0, &k1));
    let k3 = chua_derivative(p, &axpy(s, h / 2.0, &k2));
    let k4 = chua_derivative(p, &axpy(s, h, &k3));
    let mut out = *s;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate with RK4, discard `transient` steps, then run `steps` more and
/// return u1 after every `sample_every`-th of them.
pub fn integrate_rk4(
    p: &ChuaParams,
    state0: State,
    h: f64,
    transient: usize,
    steps: usize,
    sample_every: usize,
) -> Result<Vec<f64>> {
    p.validate()?;
    ensure_positive("h", h)?;
    if sample_every == 0 || steps < sample_every {
        return Err(Error::Argument(format!(
            "need steps >= sample_every >= 1, got steps={steps}, sample_every={sample_every}"
        )));
    }
    for v in state0 {
        ensure_finite("initial state", v)?;
    }
    let mut s = state0;
    let mut out = Vec::with_capacity(steps / sample_every);
    for k in 1..=(transient + steps) {
        s = rk4_step(p, &s, h);
        if !s.iter().all(|v| v.is_finite()) {
            return Err(Error::Integration { step: k });
        }
        if k > transient && (k - transient) % sample_every == 0 {
            out.push(s[0]);
        }
    }
    Ok(out)
}

/// Everything needed to reproduce a sampled series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChuaConfig {
    pub params: ChuaParams,
    pub state0: State,
    pub h: f64,
    pub transient: usize,
    pub sample_every: usize,
}

impl Default for ChuaConfig {
    fn default() -> Self {
        Self {
            params: ChuaParams::default(),
            state0: [0.1, 0.0, 0.0],
            h: 0.01,
            transient: 5000,
            sample_every: 10,
        }
    }
}

impl ChuaConfig {
    /// `n` samples of u1.
    pub fn series(&self, n: usize) -> Result<Vec<f64>> {
        integrate_rk4(
            &self.params,
            self.state0,
            self.h,
            self.transient,
            n * self.sample_every,
            self.sample_every,
        )
    }
}

/// Write a series as `index,u1` CSV.
pub fn write_series_csv(path: &Path, series: &[f64]) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "index,u1")?;
    for (i, v) in series.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Delay-embedded one-step prediction pairs.
///
/// Pair `j` predicts `x[P + j]` from `(x[P+j−1], …, x[j])`. The first
/// `n_train` pairs are for training, the remaining `n_test` for testing.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedDataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    /// Targets before noise was added.
    pub clean_targets: Vec<f64>,
    pub n_train: usize,
    pub n_test: usize,
}

impl EmbeddedDataset {
    pub fn train(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.inputs[..self.n_train]
            .iter()
            .map(Vec::as_slice)
            .zip(self.targets[..self.n_train].iter().copied())
    }

    pub fn test(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.inputs[self.n_train..]
            .iter()
            .map(Vec::as_slice)
            .zip(self.targets[self.n_train..].iter().copied())
    }
}

/// Contaminate the training region of `series` with `noise` and embed it.
///
/// Samples `x[0 .. P + n_train]` receive noise, so training inputs and
/// targets are both noisy; test targets stay clean.
pub fn build_dataset(
    series: &[f64],
    noise: Option<&NoiseSpec>,
    p: usize,
    n_train: usize,
    n_test: usize,
) -> Result<EmbeddedDataset> {
    if p == 0 || n_train == 0 {
        return Err(Error::Argument("embedding order and training size must be positive".into()));
    }
    let need = p + n_train + n_test;
    if series.len() < need {
        return Err(Error::Argument(format!(
            "series has {} samples, need at least {need}",
            series.len()
        )));
    }
    let mut x = series[..need].to_vec();
    if let Some(spec) = noise {
        let v = spec.sample(p + n_train)?;
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += vi;
        }
    }
    let n = n_train + n_test;
    let inputs = (0..n)
        .map(|j| (0..p).map(|k| x[p + j - 1 - k]).collect())
        .collect();
    let targets = (0..n).map(|j| x[p + j]).collect();
    let clean_targets = series[p..need].to_vec();
    Ok(EmbeddedDataset {
        inputs,
        targets,
        clean_targets,
        n_train,
        n_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseKind;

    #[test]
    fn origin_is_equilibrium() {
        let p = ChuaParams::default();
        assert_eq!(chua_derivative(&p, &[0.0, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        let s = integrate_rk4(&p, [0.0; 3], 0.01, 10, 100, 10).unwrap();
        assert!(s.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_inside_breakpoints() {
        let p = ChuaParams::default();
        let (rc1, rc2) = (p.r * p.c1, p.r * p.c2);
        let a = [
            [-1.0 / rc1 - p.m0 / p.c1, 1.0 / rc1, 0.0],
            [1.0 / rc2, -1.0 / rc2, 1.0 / p.c2],
            [0.0, -1.0 / p.l_ind, 0.0],
        ];
        for s in [[0.3, -0.2, 0.5], [-0.9, 1.4, -2.0], [0.05, 0.0, 0.0]] {
            let got = chua_derivative(&p, &s);
            for i in 0..3 {
                let want: f64 = (0..3).map(|j| a[i][j] * s[j]).sum();
                assert!((got[i] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_is_continuous_at_breakpoints() {
        let p = ChuaParams::default();
        for bp in [p.bp, -p.bp] {
            let d = 1e-13;
            assert!((p.phi(bp - d) - p.phi(bp + d)).abs() < 1e-12);
        }
        assert!((p.phi(2.0) - (p.m1 * 2.0 + (p.m0 - p.m1))).abs() < 1e-15);
    }

    #[test]
    fn rk4_is_fourth_order() {
        // Stay inside |u1| < Bp so the vector field is smooth.
        let p = ChuaParams::default();
        let s0 = [0.01, 0.0, 0.0];
        let t = 1.0;
        let run = |h: f64| {
            let n = (t / h).round() as usize;
            let mut s = s0;
            for _ in 0..n {
                s = rk4_step(&p, &s, h);
            }
            s
        };
        let reference = run(0.1 / 64.0);
        let err = |h: f64| {
            let s = run(h);
            (0..3).map(|i| (s[i] - reference[i]).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(run(0.05)[0].abs() < p.bp);
        assert!(e1 / e2 >= 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn double_scroll_stays_bounded() {
        let p = ChuaParams::default();
        let s = integrate_rk4(&p, [0.1, 0.0, 0.0], 0.01, 0, 100_000, 1).unwrap();
        let max = s.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(max < 10.0);
        // both scrolls are visited
        assert!(s.iter().any(|&v| v > 1.0) && s.iter().any(|&v| v < -1.0));
    }

    #[test]
    fn verbatim_form_blows_up() {
        let p = ChuaParams {
            variant: ChuaVariant::Verbatim,
            ..ChuaParams::default()
        };
        match integrate_rk4(&p, [0.1, 0.0, 0.0], 0.01, 0, 100_000, 1) {
            Err(Error::Integration { .. }) => {}
            Ok(s) => assert!(s.iter().any(|v| v.abs() > 1e6)),
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn unit_resistance_is_unbounded() {
        // G = 1 leaves the outer region expanding; no attractor forms.
        let p = ChuaParams {
            r: 1.0,
            ..ChuaParams::default()
        };
        match integrate_rk4(&p, [0.1, 0.0, 0.0], 0.01, 0, 100_000, 1) {
            Err(Error::Integration { .. }) => {}
            Ok(s) => assert!(s.iter().any(|v| v.abs() > 1e6)),
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = ChuaParams::default();
        assert!(integrate_rk4(&p, [0.1, 0.0, 0.0], 0.0, 0, 10, 1).is_err());
        assert!(integrate_rk4(&p, [0.1, 0.0, 0.0], 0.01, 0, 5, 10).is_err());
        assert!(integrate_rk4(&p, [f64::NAN, 0.0, 0.0], 0.01, 0, 10, 1).is_err());
    }

    #[test]
    fn constant_series_embeds_to_constants() {
        let series = vec![0.7; 20];
        let ds = build_dataset(&series, None, 5, 10, 5).unwrap();
        assert_eq!(ds.inputs.len(), 15);
        assert!(ds.inputs.iter().all(|x| x == &vec![0.7; 5]));
        assert!(ds.targets.iter().all(|&t| t == 0.7));
    }

    #[test]
    fn embedding_is_shift_consistent() {
        let series: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let noise = NoiseSpec::new(NoiseKind::preset(10).unwrap(), 3);
        let ds = build_dataset(&series, Some(&noise), 5, 20, 10).unwrap();
        for i in 1..ds.targets.len() {
            assert_eq!(ds.inputs[i][0], ds.targets[i - 1]);
        }
        assert_eq!(ds.train().count(), 20);
        assert_eq!(ds.test().count(), 10);
        for (j, (_, t)) in ds.test().enumerate() {
            assert_eq!(t, (5 + 20 + j) as f64);
        }
    }

    #[test]
    fn noise_only_in_training_region() {
        let series = ChuaConfig::default().series(3105).unwrap();
        let noise = NoiseSpec::new(NoiseKind::preset(10).unwrap(), 11);
        let ds = build_dataset(&series, Some(&noise), 5, 3000, 100).unwrap();
        let diff: Vec<f64> = ds.targets[..3000]
            .iter()
            .zip(&ds.clean_targets[..3000])
            .map(|(a, b)| a - b)
            .collect();
        let m = diff.iter().sum::<f64>() / 3000.0;
        let var = diff.iter().map(|d| (d - m) * (d - m)).sum::<f64>() / 2999.0;
        assert!((var - 0.1).abs() < 0.015, "variance {var}");
        assert_eq!(&ds.targets[3000..], &ds.clean_targets[3000..]);
    }

    #[test]
    fn too_short_series_rejected() {
        assert!(build_dataset(&[0.0; 10], None, 5, 5, 1).is_err());
    }

    #[test]
    fn pipeline_is_deterministic() {
        let cfg = ChuaConfig::default();
        let noise = NoiseSpec::new(NoiseKind::preset(11).unwrap(), 5);
        let a = build_dataset(&cfg.series(400).unwrap(), Some(&noise), 5, 300, 50).unwrap();
        let b = build_dataset(&cfg.series(400).unwrap(), Some(&noise), 5, 300, 50).unwrap();
        assert_eq!(a, b);
    }
}
