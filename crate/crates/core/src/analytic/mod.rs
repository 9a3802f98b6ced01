//! Closed-form SINR, average-SE bound, asymptotic limit and pilot-length
//! optimisation.

mod bound;
mod closed;
mod lambert;
mod pilot;

pub use bound::{
    asymptotic_se, asymptotic_se_at, average_symbol_energy, avg_se_lower_bound, avg_sinr_lower_bound,
    mean_inverted_power, part_time_sleep_se,
};
pub use closed::{estimate_energy, sinr_closed_form, sinr_from_ratios};
pub use lambert::lambert_w;
pub use pilot::{
    argmax_concave, optimal_pilot_length_asymptotic, optimize_pilot_length, optimize_pilot_length_asymptotic,
    PilotOptimum,
};
