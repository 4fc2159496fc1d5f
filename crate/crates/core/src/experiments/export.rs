//! CSV export of run traces.

use std::io::Write;

use crate::error::{Error, Result};
use crate::experiments::registry::TheoryTrace;
use crate::experiments::sysid::SysIdTrace;
use crate::experiments::timeseries::TimeSeriesTrace;

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Rows `(scenario, algorithm, iteration, nmsd_db)`.
pub fn write_sysid_csv<W: Write>(out: W, scenario: &str, trace: &SysIdTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "algorithm", "iteration", "nmsd_db"]).map_err(csv_err)?;
    for a in &trace.algorithms {
        for (i, v) in a.nmsd_db.iter().enumerate() {
            w.write_record([scenario, &a.label, &i.to_string(), &v.to_string()])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Same layout as [`write_sysid_csv`], one algorithm label per (case, step).
pub fn write_theory_csv<W: Write>(out: W, scenario: &str, trace: &TheoryTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "algorithm", "iteration", "nmsd_db"]).map_err(csv_err)?;
    for (case, t) in &trace.cases {
        for a in &t.algorithms {
            let label = format!("{case}/{}", a.label);
            for (i, v) in a.nmsd_db.iter().enumerate() {
                w.write_record([scenario, &label, &i.to_string(), &v.to_string()])
                    .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Rows `(scenario, algorithm, sample, sq_error, test_mse)` over the test set.
pub fn write_timeseries_csv<W: Write>(out: W, scenario: &str, trace: &TimeSeriesTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scenario", "algorithm", "sample", "sq_error", "test_mse"])
        .map_err(csv_err)?;
    for a in &trace.algorithms {
        let mse = a.test_mse.to_string();
        for (i, e) in a.test_sq_errors.iter().enumerate() {
            w.write_record([scenario, &a.label, &i.to_string(), &e.to_string(), &mse])
                .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sysid::AlgorithmTrace;

    #[test]
    fn sysid_layout() {
        let t = SysIdTrace {
            master_seed: 0,
            runs: 1,
            failed_runs: 0,
            algorithms: vec![AlgorithmTrace {
                label: "lms, fast".into(),
                nmsd_db: vec![0.0, -3.5],
                steady_state_runs: vec![0.1],
                crossing_runs: vec![None],
                diverged_runs: 0,
            }],
        };
        let mut buf = Vec::new();
        write_sysid_csv(&mut buf, "demo", &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "scenario,algorithm,iteration,nmsd_db\ndemo,\"lms, fast\",0,0\ndemo,\"lms, fast\",1,-3.5\n"
        );
    }
}
