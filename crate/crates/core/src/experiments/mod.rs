//! Monte Carlo harness, time-series prediction, theory checks and the
//! named-scenario registry.

use std::io::Write;

pub mod export;
pub mod metrics;
pub mod registry;
pub mod sysid;
pub mod theory;
pub mod timeseries;

pub use metrics::{mse, nmsd_db, NMSD_FLOOR_DB};
pub use registry::{find_scenario, run_theory, scenario_registry, Scenario, ScenarioKind};
pub use sysid::{run_sysid, AlgorithmSpec, SysIdScenario, SysIdTrace};
pub use theory::{predict_steady_state_msd, TheoryPrediction};
pub use timeseries::{run_timeseries, TimeSeriesScenario, TimeSeriesTrace};

use crate::error::Result;
use registry::TheoryTrace;

/// Result of running any scenario kind.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioOutput {
    SysId(SysIdTrace),
    TimeSeries(TimeSeriesTrace),
    Theory(TheoryTrace),
}

impl ScenarioOutput {
    pub fn write_csv<W: Write>(&self, out: W, scenario: &str) -> Result<()> {
        match self {
            ScenarioOutput::SysId(t) => export::write_sysid_csv(out, scenario, t),
            ScenarioOutput::TimeSeries(t) => export::write_timeseries_csv(out, scenario, t),
            ScenarioOutput::Theory(t) => export::write_theory_csv(out, scenario, t),
        }
    }
}

pub fn run_scenario(kind: &ScenarioKind, master_seed: u64) -> Result<ScenarioOutput> {
    Ok(match kind {
        ScenarioKind::SysId(s) => ScenarioOutput::SysId(run_sysid(s, master_seed)?),
        ScenarioKind::TimeSeries(s) => ScenarioOutput::TimeSeries(run_timeseries(s, master_seed)?),
        ScenarioKind::Theory(s) => ScenarioOutput::Theory(run_theory(s, master_seed)?),
    })
}
