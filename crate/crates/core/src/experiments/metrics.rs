//! Performance measures.

use crate::error::{Error, Result};

/// Value reported instead of −∞ when the estimate is exact.
pub const NMSD_FLOOR_DB: f64 = -400.0;

/// ‖c − c_o‖² / ‖c_o‖².
pub fn nmsd_linear(c: &[f64], c_o: &[f64]) -> Result<f64> {
    if c.len() != c_o.len() {
        return Err(Error::Argument(format!(
            "weight vectors differ in length: {} vs {}",
            c.len(),
            c_o.len()
        )));
    }
    let norm: f64 = c_o.iter().map(|v| v * v).sum();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Argument("reference weight vector must be nonzero and finite".into()));
    }
    let dev: f64 = c.iter().zip(c_o).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(dev / norm)
}

/// Linear ratio to dB, clamped at [`NMSD_FLOOR_DB`].
pub fn to_db(ratio: f64) -> f64 {
    if ratio <= 0.0 {
        NMSD_FLOOR_DB
    } else {
        (10.0 * ratio.log10()).max(NMSD_FLOOR_DB)
    }
}

/// Normalized mean-square deviation in dB.
pub fn nmsd_db(c: &[f64], c_o: &[f64]) -> Result<f64> {
    nmsd_linear(c, c_o).map(to_db)
}

/// Mean of squared errors.
pub fn mse(errors: &[f64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::Argument("mse of an empty sequence".into()));
    }
    Ok(errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64)
}

/// Median of the finite entries; NaN when there are none.
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    #[test]
    fn nmsd_examples() {
        let c_o = [0.6, 0.8];
        assert!(nmsd_db(&[0.0, 0.0], &c_o).unwrap().abs() < 1e-12);
        assert_eq!(nmsd_db(&c_o, &c_o).unwrap(), NMSD_FLOOR_DB);
        let c = [0.6 + 0.1, 0.8];
        assert!((nmsd_db(&c, &c_o).unwrap() + 20.0).abs() < 1e-9);
    }

    #[test]
    fn nmsd_errors() {
        assert!(nmsd_db(&[1.0], &[0.0]).is_err());
        assert!(nmsd_db(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[0.0; 4]).unwrap(), 0.0);
        assert_eq!(mse(&[1.0, -1.0]).unwrap(), 1.0);
        assert!(mse(&[]).is_err());
    }

    #[test]
    fn mse_matches_two_pass() {
        let mut rng = rng_from_seed(1);
        let e: Vec<f64> = (0..1000).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mut squares = Vec::with_capacity(e.len());
        for v in &e {
            squares.push(v * v);
        }
        let mut total = 0.0;
        for s in &squares {
            total += s;
        }
        let want = total / 1000.0;
        assert!((mse(&e).unwrap() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn median_skips_non_finite() {
        assert_eq!(median(&[3.0, f64::NAN, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0]), 2.5);
        assert!(median(&[f64::NAN]).is_nan());
    }
}
