use rand::Rng;

use super::{Deployment, DistanceMetric, Point2};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::real::Real;

/// Hexagonal BS lattice with `tiers` rings around a centre site.
#[derive(Debug, Clone)]
pub struct HexLattice<T> {
    pub inter_site_distance: T,
    pub tiers: usize,
    /// Centre first, then ring by ring.
    pub sites: Vec<Point2<T>>,
    /// The six translations that tile the plane with copies of the cluster.
    pub wrap_shifts: Vec<Point2<T>>,
}

fn axial_to_xy<T: Real>(q: i64, r: i64, isd: T) -> Point2<T> {
    let (q, r) = (T::lit(q as f64), T::lit(r as f64));
    Point2::new(isd * (q + r * T::lit(0.5)), isd * r * T::lit(3.0).sqrt() * T::lit(0.5))
}

// 60 degree rotation in axial coordinates
fn rotate(q: i64, r: i64) -> (i64, i64) {
    (-r, q + r)
}

impl<T: Real> HexLattice<T> {
    pub fn new(inter_site_distance: T, tiers: usize) -> Self {
        let t = tiers as i64;
        let mut sites = vec![Point2::origin()];
        for ring in 1..=t {
            // walk the ring starting at axial (ring, 0)
            let (mut q, mut r) = (ring, 0);
            let dirs = [(-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0), (0, 1)];
            for (dq, dr) in dirs {
                for _ in 0..ring {
                    sites.push(axial_to_xy(q, r, inter_site_distance));
                    q += dq;
                    r += dr;
                }
            }
        }
        // a cluster of 3t^2 + 3t + 1 cells repeats along (t + 1, t)
        let (mut q, mut r) = (t + 1, t);
        let mut wrap_shifts = Vec::with_capacity(6);
        for _ in 0..6 {
            wrap_shifts.push(axial_to_xy(q, r, inter_site_distance));
            (q, r) = rotate(q, r);
        }
        Self {
            inter_site_distance,
            tiers,
            sites,
            wrap_shifts,
        }
    }

    pub fn circumradius(&self) -> T {
        self.inter_site_distance / T::lit(3.0).sqrt()
    }

    pub fn metric(&self) -> DistanceMetric<T> {
        DistanceMetric::Torus {
            shifts: self.wrap_shifts.clone(),
        }
    }

    /// Uniform point in the hexagonal cell around `center`.
    pub fn sample_in_cell<R: Rng + ?Sized>(&self, rng: &mut R, center: Point2<T>) -> Point2<T> {
        let half = self.inter_site_distance * T::lit(0.5);
        let rc = self.circumradius();
        let (s60, c60) = (T::lit(3.0).sqrt() * T::lit(0.5), T::lit(0.5));
        loop {
            let x = (T::lit(2.0) * T::unit(rng) - T::one()) * half;
            let y = (T::lit(2.0) * T::unit(rng) - T::one()) * rc;
            if (c60 * x + s60 * y).abs() <= half && (-c60 * x + s60 * y).abs() <= half {
                return center + Point2::new(x, y);
            }
        }
    }
}

pub fn hex_site_count(tiers: usize) -> usize {
    1 + 3 * tiers * (tiers + 1)
}

/// Symmetric hexagonal layout: the centre cell is tagged, every cell gets
/// `K` UEs uniform over its hexagon, and distances wrap around the cluster.
pub fn hexagonal_deployment<T: Real, R: Rng + ?Sized>(
    cfg: &SystemConfig<T>,
    inter_site_distance: T,
    tiers: usize,
    rng: &mut R,
) -> Result<Deployment<T>> {
    if tiers < 1 {
        return Err(Error::domain("hexagonal_deployment", "tiers must be at least 1"));
    }
    let lattice = HexLattice::new(inter_site_distance, tiers);
    let ues = lattice
        .sites
        .iter()
        .map(|&c| {
            (0..cfg.ues_per_cell)
                .map(|_| lattice.sample_in_cell(rng, c))
                .collect()
        })
        .collect();
    let mut dep = Deployment::new(cfg, lattice.sites.clone(), ues, 0, lattice.metric())?;
    dep.meta.kind = "hexagonal".into();
    dep.meta.assumptions.push(format!(
        "{tiers}-tier hexagonal layout ({} cells), inter-site distance {inter_site_distance} km, wrap-around distances",
        lattice.sites.len()
    ));
    Ok(dep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn site_counts() {
        assert_eq!(HexLattice::new(1.0f64, 1).sites.len(), 7);
        assert_eq!(HexLattice::new(1.0f64, 2).sites.len(), 19);
        assert_eq!(hex_site_count(3), 37);
        assert_eq!(HexLattice::new(1.0f64, 3).sites.len(), 37);
    }

    #[test]
    fn sites_are_distinct_lattice_points() {
        let lat = HexLattice::new(1.0f64, 2);
        for (i, a) in lat.sites.iter().enumerate() {
            for b in &lat.sites[i + 1..] {
                assert!(a.dist(*b) > 0.999);
            }
        }
    }

    #[test]
    fn wrapped_cluster_is_periodic() {
        // every site is at distance >= isd from every image of every other site
        let lat = HexLattice::new(1.0f64, 2);
        let m = lat.metric();
        for (i, a) in lat.sites.iter().enumerate() {
            for (j, b) in lat.sites.iter().enumerate() {
                let d = m.dist(*a, *b);
                if i == j {
                    assert!(d < 1e-12);
                } else {
                    assert!(d > 0.999, "{i} {j} {d}");
                }
            }
        }
        // sqrt(19) * isd between images
        for s in &lat.wrap_shifts {
            assert!((s.norm() - 19f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ues_stay_inside_their_hexagon() {
        let cfg = SystemConfig::<f64>::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dep = hexagonal_deployment(&cfg, 0.5, 2, &mut rng).unwrap();
        assert_eq!(dep.num_cells(), 19);
        let rc = 0.5 / 3f64.sqrt();
        for (j, ues) in dep.ue_positions.iter().enumerate() {
            assert_eq!(ues.len(), 30);
            for (i, u) in ues.iter().enumerate() {
                assert!(dep.serving_distances[j][i] <= rc + 1e-12);
                // nearest site (with wrap) is the serving one
                for (l, b) in dep.bs_positions.iter().enumerate() {
                    assert!(dep.metric.dist(*u, *b) + 1e-12 >= dep.serving_distances[j][i], "{j} {l}");
                }
            }
        }
    }

    #[test]
    fn hexagon_sampling_is_centred() {
        let lat = HexLattice::new(1.0f64, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 100_000;
        let (mut sx, mut sy, mut sr2) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let p = lat.sample_in_cell(&mut rng, Point2::origin());
            sx += p.x;
            sy += p.y;
            sr2 += p.norm2();
        }
        assert!((sx / n as f64).abs() < 0.005 && (sy / n as f64).abs() < 0.005);
        // E|p|^2 over a regular hexagon with inradius 1/2 is 5/36
        assert!((sr2 / n as f64 - 5.0 / 36.0).abs() < 0.002);
    }

    #[test]
    fn zero_tiers_rejected() {
        let cfg = SystemConfig::<f64>::reference();
        assert!(hexagonal_deployment(&cfg, 1.0, 0, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
