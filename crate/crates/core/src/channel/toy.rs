use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{place_ues_voronoi, Deployment, DistanceMetric, Point2};
use crate::model::SystemConfig;
use crate::real::Real;

/// Small system used to validate the Monte-Carlo engine against the closed
/// forms: `M = 32`, `K = 4`, `B = 8`, `A = 0.5`.
pub fn toy_config<T: Real>() -> SystemConfig<T> {
    SystemConfig {
        antennas: 32,
        ues_per_cell: 4,
        activity: T::lit(0.5),
        pilot_len: 8,
        ..SystemConfig::reference()
    }
}

/// A seeded `n_cells` layout: tagged BS at the origin, the others at random
/// distance 1..2 in roughly even directions, `K` UEs uniform in each
/// Voronoi cell cut to a disc of radius 3.
pub fn toy_deployment<T: Real>(cfg: &SystemConfig<T>, n_cells: usize, seed: u64) -> Result<Deployment<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others = n_cells.saturating_sub(1);
    let mut bs = vec![Point2::origin()];
    for j in 0..others {
        let r = T::one() + T::unit(&mut rng);
        let jitter = T::lit(rng.random_range(-0.25..0.25));
        let theta = T::TAU() * (T::from_usize_lossy(j) + jitter) / T::from_usize_lossy(others);
        bs.push(Point2::polar(r, theta));
    }
    let placed = place_ues_voronoi(&mut rng, &bs, cfg.ues_per_cell, Point2::origin(), T::lit(3.0));
    let mut dep = Deployment::new(cfg, bs, placed.ues, 0, DistanceMetric::Euclidean)?;
    dep.meta.kind = "toy".into();
    dep.meta.placement = Some("voronoi".into());
    dep.meta.seed = Some(seed);
    dep.meta.window_radius = Some(3.0);
    dep.meta.boundary_cells = placed.boundary_cells;
    Ok(dep)
}

/// `count` toy layouts cycling through 2, 3, 4 and 5 cells.
pub fn toy_deployments<T: Real>(cfg: &SystemConfig<T>, count: usize, seed: u64) -> Result<Vec<Deployment<T>>> {
    (0..count)
        .map(|i| toy_deployment(cfg, 2 + i % 4, seed.wrapping_add(i as u64)))
        .collect()
}
