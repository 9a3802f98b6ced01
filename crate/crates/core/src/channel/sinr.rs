use serde::Serialize;

use crate::model::{prelog, SystemConfig};
use crate::real::Real;

/// Terms of the effective SINR of one tagged UE with MR combining.
///
/// `intra[i]` is the interference from tagged-cell UE `i` (zero at the
/// tagged UE itself); `inter[j][i]` from UE `i` of cell `j` (the tagged
/// cell's row is all zeros).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SinrBreakdown<T> {
    pub signal: T,
    pub intra: Vec<T>,
    pub self_variance: T,
    pub inter: Vec<Vec<T>>,
    pub noise: T,
    pub sinr: T,
}

impl<T: Real> SinrBreakdown<T> {
    pub fn assemble(signal: T, intra: Vec<T>, self_variance: T, inter: Vec<Vec<T>>, noise: T) -> Self {
        let mut s = Self {
            signal,
            intra,
            self_variance,
            inter,
            noise,
            sinr: T::zero(),
        };
        s.sinr = signal / s.denominator();
        s
    }

    pub fn intra_total(&self) -> T {
        self.intra.iter().copied().sum()
    }

    pub fn inter_total(&self) -> T {
        self.inter.iter().flatten().copied().sum()
    }

    pub fn denominator(&self) -> T {
        self.intra_total() + self.self_variance + self.inter_total() + self.noise
    }
}

/// `A (1 - B/S) log2(1 + sinr)`.
pub fn se_per_ue<T: Real>(sinr: T, cfg: &SystemConfig<T>) -> T {
    prelog(cfg.activity, cfg.pilot_len, cfg.block_len) * sinr.ln_1p() / T::LN_2()
}
