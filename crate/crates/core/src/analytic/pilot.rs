use serde::Serialize;

use super::bound::{asymptotic_se, asymptotic_se_at, avg_se_lower_bound};
use super::lambert::lambert_w;
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::real::Real;

/// Integer argmax of a concave sequence on `lo..=hi`: ternary search, then
/// a scan of the two neighbours on each side. Ties go to the smaller index.
pub fn argmax_concave<T: Real>(lo: usize, hi: usize, mut f: impl FnMut(usize) -> T) -> usize {
    assert!(lo <= hi, "empty search range");
    let (mut a, mut b) = (lo, hi);
    while b - a > 2 {
        let m1 = a + (b - a) / 3;
        let m2 = b - (b - a) / 3;
        if f(m1) < f(m2) {
            a = m1 + 1;
        } else {
            b = m2;
        }
    }
    let mut best = a.saturating_sub(2).max(lo);
    let mut best_val = f(best);
    for x in best + 1..=(b + 2).min(hi) {
        let v = f(x);
        if v > best_val {
            best = x;
            best_val = v;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PilotOptimum<T> {
    /// Stationary point of the asymptotic SE in `B`.
    pub continuous: T,
    /// Better of its floor and ceiling, within `K..=S`.
    pub integer: usize,
}

/// Pilot length maximising [`asymptotic_se`]:
/// `B* = (AK/(alpha-1) + S) / W(e (1 + S (alpha-1)/(AK))) - AK/(alpha-1)`.
pub fn optimal_pilot_length_asymptotic<T: Real>(cfg: &SystemConfig<T>) -> Result<PilotOptimum<T>> {
    if cfg.activity <= T::zero() {
        return Err(Error::domain(
            "optimal_pilot_length_asymptotic",
            "undefined for A = 0: the asymptotic SE vanishes for every B",
        ));
    }
    if cfg.alpha <= T::lit(2.0) {
        return Err(Error::domain("optimal_pilot_length_asymptotic", "pathloss exponent must exceed 2"));
    }
    let k = T::from_usize_lossy(cfg.ues_per_cell);
    let s = T::from_usize_lossy(cfg.block_len);
    let c = cfg.activity * k / (cfg.alpha - T::one());
    let w = lambert_w(T::E() * (T::one() + s / c))?;
    let continuous = (c + s) / w - c;

    let lo = cfg.ues_per_cell;
    let hi = cfg.block_len;
    let floor = continuous.floor().to_usize().unwrap_or(lo).clamp(lo, hi);
    let ceil = (floor + 1).min(hi);
    let f = |b: usize| asymptotic_se(&cfg.with_pilot_len(b));
    let integer = if f(ceil)? > f(floor)? { ceil } else { floor };
    Ok(PilotOptimum { continuous, integer })
}

/// Integer `B` in `K..=S` maximising [`avg_se_lower_bound`]; the `B` field
/// of `cfg` is ignored.
pub fn optimize_pilot_length<T: Real>(cfg: &SystemConfig<T>) -> Result<usize> {
    cfg.validate_ignoring_pilot()?;
    let f = |b: usize| avg_se_lower_bound(&cfg.with_pilot_len(b)).unwrap_or(T::neg_infinity());
    Ok(argmax_concave(cfg.ues_per_cell, cfg.block_len, f))
}

/// Integer argmax of [`asymptotic_se`] over `K..=S` by direct search.
pub fn optimize_pilot_length_asymptotic<T: Real>(cfg: &SystemConfig<T>) -> Result<usize> {
    cfg.validate_ignoring_pilot()?;
    let f = |b: usize| asymptotic_se_at(cfg, T::from_usize_lossy(b));
    Ok(argmax_concave(cfg.ues_per_cell, cfg.block_len, f))
}
