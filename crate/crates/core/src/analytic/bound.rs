use crate::error::{Error, Result};
use crate::model::{prelog, SystemConfig};
use crate::real::Real;

fn check_alpha<T: Real>(op: &'static str, alpha: T) -> Result<()> {
    if alpha > T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::domain(op, "pathloss exponent must exceed 2"))
    }
}

/// Lower bound on the SINR averaged over PPP deployments with
/// channel-inversion power control.
pub fn avg_sinr_lower_bound<T: Real>(cfg: &SystemConfig<T>) -> Result<T> {
    check_alpha("avg_sinr_lower_bound", cfg.alpha)?;
    let one = T::one();
    let two = T::lit(2.0);
    let m = T::from_usize_lossy(cfg.antennas);
    let k = T::from_usize_lossy(cfg.ues_per_cell);
    let b = T::from_usize_lossy(cfg.pilot_len);
    let a = cfg.activity;
    let al = cfg.alpha;
    let s = cfg.sigma2 / cfg.rho;

    let pilot_square = k * k / b * (T::lit(4.0) * a * a / ((al - two) * (al - two)) + a * a / (al - one));
    let pilot_cross = two * k * a / (al - two) * (one + one / b + a * (k - one) / b + two * s / b);
    let base = (one + s / b) * (one + (k - one) * a + s);
    let coherent = a * (m + one - a) / b * k / (al - one);
    Ok(m / (pilot_square + pilot_cross + base + coherent))
}

/// `A (1 - B/S) log2(1 + avg_sinr_lower_bound)`.
pub fn avg_se_lower_bound<T: Real>(cfg: &SystemConfig<T>) -> Result<T> {
    let sinr = avg_sinr_lower_bound(cfg)?;
    Ok(prelog(cfg.activity, cfg.pilot_len, cfg.block_len) * sinr.ln_1p() / T::LN_2())
}

/// Limit of [`avg_se_lower_bound`] as `M` grows:
/// `A (1 - B/S) log2(1 + B (alpha - 1) / (A K))`, and 0 at `A = 0`.
pub fn asymptotic_se<T: Real>(cfg: &SystemConfig<T>) -> Result<T> {
    check_alpha("asymptotic_se", cfg.alpha)?;
    if cfg.activity <= T::zero() {
        return Ok(T::zero());
    }
    let b = T::from_usize_lossy(cfg.pilot_len);
    Ok(asymptotic_se_at(cfg, b))
}

/// [`asymptotic_se`] with a real-valued pilot length.
pub fn asymptotic_se_at<T: Real>(cfg: &SystemConfig<T>, b: T) -> T {
    let k = T::from_usize_lossy(cfg.ues_per_cell);
    let s = T::from_usize_lossy(cfg.block_len);
    let a = cfg.activity;
    a * (T::one() - b / s) * (b * (cfg.alpha - T::one()) / (a * k)).ln_1p() / T::LN_2()
}

/// SE when a fraction `A` of the blocks is used with all `K` UEs active.
pub fn part_time_sleep_se<T: Real>(cfg: &SystemConfig<T>) -> Result<T> {
    Ok(cfg.activity * avg_se_lower_bound(&cfg.with_activity(T::one()))?)
}

/// Average symbol energy under channel inversion as quoted with the
/// network model: `rho omega Gamma(alpha/2 - 1) / (pi lambda)^(alpha/2)`.
///
/// This is not the mean of `rho omega d^alpha` for a Rayleigh serving
/// distance; see [`mean_inverted_power`] for that quantity.
pub fn average_symbol_energy<T: Real>(cfg: &SystemConfig<T>) -> Result<T> {
    check_alpha("average_symbol_energy", cfg.alpha)?;
    let half = cfg.alpha * T::lit(0.5);
    Ok(cfg.rho * cfg.omega * (half - T::one()).gamma() / (T::PI() * cfg.lambda).powf(half))
}

/// `E[rho omega d^alpha]` with `d ~ Rayleigh(1/sqrt(2 pi lambda))`:
/// `rho omega Gamma(1 + alpha/2) / (pi lambda)^(alpha/2)`.
pub fn mean_inverted_power<T: Real>(cfg: &SystemConfig<T>) -> T {
    let half = cfg.alpha * T::lit(0.5);
    cfg.rho * cfg.omega * (half + T::one()).gamma() / (T::PI() * cfg.lambda).powf(half)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig() -> SystemConfig<f64> {
        SystemConfig::reference()
    }

    #[test]
    fn inactive_network() {
        let c = fig().with_activity(0.0);
        let s = c.sigma2 / c.rho;
        let b = c.pilot_len as f64;
        let expected = 100.0 / ((1.0 + s / b) * (1.0 + s));
        assert!((avg_sinr_lower_bound(&c).unwrap() - expected).abs() < 1e-12 * expected);
        assert_eq!(avg_se_lower_bound(&c).unwrap(), 0.0);
        assert_eq!(asymptotic_se(&c).unwrap(), 0.0);
        assert_eq!(part_time_sleep_se(&c).unwrap(), 0.0);
    }

    #[test]
    fn term_by_term_reference_point() {
        // M=100, K=30, A=1, B=60, alpha=3.76, rho/sigma2 = 5 dB; terms added
        // in reverse order
        let (m, k, a, b, al) = (100.0f64, 30.0, 1.0, 60.0, 3.76);
        let s = 10f64.powf(-0.5);
        let t4 = a * (m + 1.0 - a) / b * (k / (al - 1.0));
        let t3 = (1.0 + s / b) * (1.0 + (k - 1.0) * a + s);
        let t2 = (2.0 * k * a / (al - 2.0)) * (1.0 + 1.0 / b + a * (k - 1.0) / b + 2.0 * s / b);
        let t1 = (k * k / b) * (4.0 * a * a / ((al - 2.0) * (al - 2.0)) + a * a / (al - 1.0));
        let expected = m / (((t4 + t3) + t2) + t1);
        let got = avg_sinr_lower_bound(&fig()).unwrap();
        assert!((got - expected).abs() <= 1e-13 * expected, "{got} vs {expected}");
    }

    #[test]
    fn large_m_limit() {
        let c = fig().with_activity(0.5).with_pilot_len(97).with_antennas(100_000_000);
        let lim = 97.0 * 2.76 / 15.0;
        assert!((avg_sinr_lower_bound(&c).unwrap() / lim - 1.0).abs() < 1e-3);
        let gap = 1.0 - avg_se_lower_bound(&c).unwrap() / asymptotic_se(&c).unwrap();
        assert!((0.0..1e-3).contains(&gap), "{gap}");
    }

    #[test]
    fn asymptotic_reference_value() {
        let c = fig().with_activity(0.5).with_pilot_len(97);
        let expected = 0.5 * (303.0 / 400.0) * (1.0 + 97.0 * 2.76 / 15.0f64).log2();
        assert!((asymptotic_se(&c).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 1.6045).abs() < 5e-5);
        assert_eq!(asymptotic_se(&c.with_pilot_len(400)).unwrap(), 0.0);
    }

    #[test]
    fn alpha_domain() {
        let c = SystemConfig { alpha: 2.0, ..fig() };
        assert!(avg_sinr_lower_bound(&c).is_err());
        assert!(asymptotic_se(&c).is_err());
        assert!(average_symbol_energy(&c).is_err());
    }

    #[test]
    fn symbol_energy_examples() {
        let c = SystemConfig {
            alpha: 4.0,
            lambda: 1.0 / std::f64::consts::PI,
            rho: 1.0,
            omega: 1.0,
            ..fig()
        };
        assert!((average_symbol_energy(&c).unwrap() - 1.0).abs() < 1e-12);
        assert!((mean_inverted_power(&c) - 2.0).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for l in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let e = average_symbol_energy(&SystemConfig { lambda: l, ..fig() }).unwrap();
            assert!(e < last);
            last = e;
        }
    }

    #[test]
    fn part_time_sleep_at_full_activity() {
        let c = fig();
        assert_eq!(part_time_sleep_se(&c).unwrap(), avg_se_lower_bound(&c).unwrap());
    }
}
