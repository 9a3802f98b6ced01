//! Monte-Carlo engine for the uplink pilot and data phases.

mod block;
mod mc;
mod sinr;
mod toy;

pub use block::{complex_normal, ls_estimate, pilot_phase_rx, CMatrix, ChannelBlock, PilotMode};
pub use mc::{
    appendix_checks_for, appendix_term_checks, estimate_sinr_mc, AppendixReport, AppendixTolerances, IdentityCheck, McEstimate, McOptions,
};
pub use sinr::{se_per_ue, SinrBreakdown};
pub use toy::{toy_config, toy_deployment, toy_deployments};
