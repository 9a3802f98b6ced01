use crate::channel::SinrBreakdown;
use crate::error::{Error, Result};
use crate::geometry::{Deployment, InterferenceRatios};
use crate::model::SystemConfig;
use crate::real::Real;

fn check_ue<T: Real>(dep: &Deployment<T>, k: usize) -> Result<()> {
    if k >= dep.ues_in(dep.tagged_cell) {
        return Err(Error::domain("sinr_closed_form", "tagged UE index out of range"));
    }
    Ok(())
}

/// Per-antenna LS estimate energy `E ||hhat_0k||^2 / M`:
/// `beta_00k + sum A p_ji beta_0ji / (p_0k B) + sigma2 / (p_0k B)`.
fn estimate_energy_per_antenna<T: Real>(dep: &Deployment<T>, cfg: &SystemConfig<T>, k: usize) -> T {
    let t = dep.tagged_cell;
    let p0k = dep.powers[t][k];
    let b = T::from_usize_lossy(cfg.pilot_len);
    let contamination: T = dep
        .interfering_cells()
        .flat_map(|j| dep.powers[j].iter().zip(&dep.tagged_betas[j]).map(|(p, beta)| *p * *beta))
        .sum();
    dep.tagged_betas[t][k] + (cfg.activity * contamination + cfg.sigma2) / (p0k * b)
}

/// `E ||hhat_0k||^2` of the LS estimate.
pub fn estimate_energy<T: Real>(dep: &Deployment<T>, cfg: &SystemConfig<T>, k: usize) -> Result<T> {
    check_ue(dep, k)?;
    Ok(T::from_usize_lossy(cfg.antennas) * estimate_energy_per_antenna(dep, cfg, k))
}

/// Closed-form effective SINR of tagged-cell UE `k` with LS estimation and
/// MR combining, split into its terms. Valid for both pilot modes.
pub fn sinr_closed_form<T: Real>(dep: &Deployment<T>, cfg: &SystemConfig<T>, k: usize) -> Result<SinrBreakdown<T>> {
    check_ue(dep, k)?;
    let t = dep.tagged_cell;
    let m = T::from_usize_lossy(cfg.antennas);
    let b = T::from_usize_lossy(cfg.pilot_len);
    let a = cfg.activity;
    let p0k = dep.powers[t][k];
    let beta = dep.tagged_betas[t][k];
    let energy = m * estimate_energy_per_antenna(dep, cfg, k);

    let intra = dep.powers[t]
        .iter()
        .zip(&dep.tagged_betas[t])
        .enumerate()
        .map(|(i, (&p, &bt))| if i == k { T::zero() } else { p * a * bt * energy })
        .collect();
    let coherent = a * m * (m + T::one() - a) / (p0k * b);
    let inter = (0..dep.num_cells())
        .map(|j| {
            if j == t {
                return vec![T::zero(); dep.ues_in(j)];
            }
            dep.powers[j]
                .iter()
                .zip(&dep.tagged_betas[j])
                .map(|(&p, &bt)| p * (a * bt * energy + coherent * bt * bt * p))
                .collect()
        })
        .collect();
    Ok(SinrBreakdown::assemble(
        p0k * m * m * beta * beta,
        intra,
        p0k * beta * energy,
        inter,
        cfg.sigma2 * energy,
    ))
}

/// The same SINR under channel-inversion power control, where it depends on
/// the layout only through the two distance-ratio sums and is equal for every
/// UE of the tagged cell (`K` taken from `cfg`).
pub fn sinr_from_ratios<T: Real>(cfg: &SystemConfig<T>, ratios: &InterferenceRatios<T>) -> T {
    let one = T::one();
    let m = T::from_usize_lossy(cfg.antennas);
    let k = T::from_usize_lossy(cfg.ues_per_cell);
    let b = T::from_usize_lossy(cfg.pilot_len);
    let a = cfg.activity;
    let s = cfg.sigma2 / cfg.rho;
    let first = one + a * ratios.first / b + s / b;
    let second = one + a * (k - one) + a * ratios.first + s;
    m / (first * second + a * (m + one - a) * ratios.second / b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DistanceMetric, Point2};

    fn isolated(k: usize) -> (SystemConfig<f64>, Deployment<f64>) {
        let cfg = SystemConfig {
            ues_per_cell: k,
            activity: 1.0,
            sigma2: 0.0,
            ..SystemConfig::reference()
        };
        // equal distances, so equal beta and p
        let ues = (0..k).map(|i| Point2::polar(0.3, i as f64)).collect();
        let dep = Deployment::new(&cfg, vec![Point2::origin()], vec![ues], 0, DistanceMetric::Euclidean).unwrap();
        (cfg, dep)
    }

    #[test]
    fn single_ue_reaches_m() {
        let (cfg, dep) = isolated(1);
        let s = sinr_closed_form(&dep, &cfg, 0).unwrap();
        assert!((s.sinr - 100.0).abs() < 1e-10);
    }

    #[test]
    fn two_equal_ues_halve_it() {
        let (cfg, dep) = isolated(2);
        let s = sinr_closed_form(&dep, &cfg, 1).unwrap();
        assert!((s.sinr - 50.0).abs() < 1e-10);
    }

    #[test]
    fn out_of_range_ue() {
        let (cfg, dep) = isolated(2);
        assert!(sinr_closed_form(&dep, &cfg, 2).is_err());
    }
}
