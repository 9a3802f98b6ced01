//! Studies over random and hexagonal deployments, CSV/SVG output and the
//! validation suite. Everything here runs in `f64`.

mod cdf;
mod output;
pub mod plot;
mod sweep;
pub mod validation;

pub use cdf::{hex_isd_for_density, run_cdf_experiment, CdfConditioning, CdfOptions, CdfResult, DeploymentKind};
pub use output::{save, save_json, write_cdf_csv, write_sweep_csv, SWEEP_HEADER};
pub use sweep::{
    mc_cell_se, run_activity_sweep, run_pilot_sweep, sample_sweep_scenes, SweepArgmax, SweepMeta, SweepOptions,
    SweepPoint, SweepResult, MC_LABEL,
};
pub use validation::{run_validation_suite, CheckResult, ValidationOutcome, ValidationPlan};
