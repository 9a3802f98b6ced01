//! Configuration, propagation laws, pilot book and activity sampling.

mod activity;
mod config;
mod pilot;
mod propagation;

pub use activity::{fill_activity, sample_activity, ActivityPattern};
pub use config::SystemConfig;
pub use pilot::{make_pilot_book, PilotBook};
pub use propagation::{channel_inversion_power, pathloss};

use crate::real::Real;

/// Pre-log factor `A (1 - B/S)` of the uplink SE expressions.
pub fn prelog<T: Real>(activity: T, pilot_len: usize, block_len: usize) -> T {
    activity * (T::one() - T::from_usize_lossy(pilot_len) / T::from_usize_lossy(block_len))
}
