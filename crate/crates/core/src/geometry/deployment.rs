use serde::Serialize;

use super::Point2;
use crate::error::{Error, Result};
use crate::model::{channel_inversion_power, pathloss, SystemConfig};
use crate::real::Real;

/// How distances between UEs and BSs are measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceMetric<T> {
    Euclidean,
    /// Wrap-around: the shortest distance over the listed lattice
    /// translations (the identity is implied).
    Torus { shifts: Vec<Point2<T>> },
}

impl<T: Real> DistanceMetric<T> {
    pub fn dist(&self, a: Point2<T>, b: Point2<T>) -> T {
        match self {
            DistanceMetric::Euclidean => a.dist(b),
            DistanceMetric::Torus { shifts } => {
                let d = a - b;
                shifts
                    .iter()
                    .map(|s| (d + *s).norm2())
                    .fold(d.norm2(), T::min)
                    .sqrt()
            }
        }
    }
}

/// Provenance recorded with a deployment.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DeploymentMeta {
    pub kind: String,
    pub placement: Option<String>,
    pub seed: Option<u64>,
    pub window_radius: Option<f64>,
    /// Cells whose Voronoi region was cut by the simulation window.
    pub boundary_cells: Vec<usize>,
    pub assumptions: Vec<String>,
}

/// BS and UE layout with the derived distances, attenuations and
/// channel-inversion powers, seen from one tagged cell.
///
/// Per-cell vectors are indexed `[cell][ue]`. `cross_*` quantities are
/// towards the tagged BS, `serving_*` towards the UE's own BS.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deployment<T> {
    pub bs_positions: Vec<Point2<T>>,
    pub ue_positions: Vec<Vec<Point2<T>>>,
    pub serving_distances: Vec<Vec<T>>,
    pub cross_distances: Vec<Vec<T>>,
    pub serving_betas: Vec<Vec<T>>,
    pub tagged_betas: Vec<Vec<T>>,
    pub powers: Vec<Vec<T>>,
    pub tagged_cell: usize,
    pub metric: DistanceMetric<T>,
    pub meta: DeploymentMeta,
}

impl<T: Real> Deployment<T> {
    pub fn new(
        cfg: &SystemConfig<T>,
        bs_positions: Vec<Point2<T>>,
        ue_positions: Vec<Vec<Point2<T>>>,
        tagged_cell: usize,
        metric: DistanceMetric<T>,
    ) -> Result<Self> {
        if bs_positions.is_empty() || bs_positions.len() != ue_positions.len() {
            return Err(Error::domain(
                "deployment",
                "need one UE list per BS and at least one BS",
            ));
        }
        if tagged_cell >= bs_positions.len() {
            return Err(Error::domain("deployment", "tagged cell out of range"));
        }
        let mut dep = Self {
            bs_positions,
            ue_positions,
            serving_distances: Vec::new(),
            cross_distances: Vec::new(),
            serving_betas: Vec::new(),
            tagged_betas: Vec::new(),
            powers: Vec::new(),
            tagged_cell,
            metric,
            meta: DeploymentMeta::default(),
        };
        dep.recompute(cfg)?;
        Ok(dep)
    }

    fn recompute(&mut self, cfg: &SystemConfig<T>) -> Result<()> {
        let tagged = self.bs_positions[self.tagged_cell];
        let per_cell = |f: &dyn Fn(usize, Point2<T>) -> T| -> Vec<Vec<T>> {
            self.ue_positions
                .iter()
                .enumerate()
                .map(|(j, ues)| ues.iter().map(|&u| f(j, u)).collect())
                .collect()
        };
        let serving = per_cell(&|j, u| self.metric.dist(u, self.bs_positions[j]));
        let cross = per_cell(&|_, u| self.metric.dist(u, tagged));
        let betas = |d: &Vec<Vec<T>>| -> Result<Vec<Vec<T>>> {
            d.iter()
                .map(|c| c.iter().map(|&x| pathloss(x, cfg.alpha, cfg.omega)).collect())
                .collect()
        };
        let serving_betas = betas(&serving)?;
        let tagged_betas = betas(&cross)?;
        let powers = serving_betas
            .iter()
            .map(|c| c.iter().map(|&b| channel_inversion_power(b, cfg.rho)).collect())
            .collect::<Result<_>>()?;
        self.serving_distances = serving;
        self.cross_distances = cross;
        self.serving_betas = serving_betas;
        self.tagged_betas = tagged_betas;
        self.powers = powers;
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn ues_in(&self, cell: usize) -> usize {
        self.ue_positions[cell].len()
    }

    pub fn ue_counts(&self) -> Vec<usize> {
        self.ue_positions.iter().map(Vec::len).collect()
    }

    /// Indices of all non-tagged cells.
    pub fn interfering_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_cells()).filter(move |&j| j != self.tagged_cell)
    }

    /// Same layout seen from another cell.
    pub fn retag(&self, cfg: &SystemConfig<T>, cell: usize) -> Result<Self> {
        Self::new(
            cfg,
            self.bs_positions.clone(),
            self.ue_positions.clone(),
            cell,
            self.metric.clone(),
        )
        .map(|d| Self {
            meta: self.meta.clone(),
            ..d
        })
    }

    /// All positions shifted by `offset`, derived quantities recomputed.
    pub fn translated(&self, cfg: &SystemConfig<T>, offset: Point2<T>) -> Result<Self> {
        let bs = self.bs_positions.iter().map(|&p| p + offset).collect();
        let ues = self
            .ue_positions
            .iter()
            .map(|c| c.iter().map(|&p| p + offset).collect())
            .collect();
        Self::new(cfg, bs, ues, self.tagged_cell, self.metric.clone()).map(|d| Self {
            meta: self.meta.clone(),
            ..d
        })
    }

    /// Sums over all interfering UEs of `beta_0ji / beta_jji` and its square.
    ///
    /// Under channel inversion these equal the distance-ratio sums
    /// `sum (d_jji / d_0ji)^alpha` and `sum (d_jji / d_0ji)^(2 alpha)`, which
    /// fully determine the SINR of every UE in the tagged cell.
    pub fn interference_ratios(&self) -> InterferenceRatios<T> {
        let mut r = InterferenceRatios::default();
        for j in self.interfering_cells() {
            for (bt, bs) in self.tagged_betas[j].iter().zip(&self.serving_betas[j]) {
                let q = *bt / *bs;
                r.first = r.first + q;
                r.second = r.second + q * q;
            }
        }
        r
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `sum (d_jji/d_0ji)^alpha` and `sum (d_jji/d_0ji)^(2 alpha)` over the
/// interfering UEs of a layout.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct InterferenceRatios<T> {
    pub first: T,
    pub second: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> SystemConfig<f64> {
        SystemConfig::reference()
    }

    fn two_cell() -> Deployment<f64> {
        let bs = vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)];
        let ues = vec![
            vec![Point2::new(0.5, 0.0), Point2::new(0.0, -0.25)],
            vec![Point2::new(1.5, 0.0)],
        ];
        Deployment::new(&cfg(), bs, ues, 0, DistanceMetric::Euclidean).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let d = two_cell();
        assert_eq!(d.serving_distances, vec![vec![0.5, 0.25], vec![0.5]]);
        assert_eq!(d.cross_distances[1], vec![1.5]);
        for (bs, ps) in d.serving_betas.iter().zip(&d.powers) {
            for (b, p) in bs.iter().zip(ps) {
                assert!((b * p - cfg().rho).abs() < 1e-12);
            }
        }
        let r = d.interference_ratios();
        let q = (0.5f64 / 1.5).powf(3.76);
        assert!((r.first - q).abs() < 1e-14);
        assert!((r.second - q * q).abs() < 1e-14);
    }

    #[test]
    fn colocated_ue_is_rejected() {
        let bs = vec![Point2::new(0.0, 0.0)];
        let ues = vec![vec![Point2::new(0.0, 0.0)]];
        assert!(Deployment::new(&cfg(), bs, ues, 0, DistanceMetric::Euclidean).is_err());
    }

    #[test]
    fn retag_swaps_cross_distances() {
        let d = two_cell().retag(&cfg(), 1).unwrap();
        assert_eq!(d.cross_distances[0], vec![1.5, 2.0f64.hypot(0.25)]);
        assert_eq!(d.interfering_cells().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn torus_metric_takes_shortest_image() {
        let m = DistanceMetric::Torus {
            shifts: vec![Point2::new(10.0, 0.0), Point2::new(-10.0, 0.0)],
        };
        assert_eq!(m.dist(Point2::new(4.5, 0.0), Point2::new(-4.5, 0.0)), 1.0);
    }

    #[test]
    fn serializes_to_json() {
        let json = two_cell().to_json().unwrap();
        assert!(json.contains("\"bs_positions\""));
        assert!(json.contains("\"euclidean\""));
    }

    // Positions on a dyadic grid and integer offsets keep every sum exact,
    // so translation must not change a single bit.
    proptest! {
        #[test]
        fn translation_invariance(
            raw in proptest::collection::vec((-4096i32..4096, -4096i32..4096), 4..12),
            ox in -50i32..50, oy in -50i32..50,
        ) {
            let pt = |(x, y): (i32, i32)| Point2::new(x as f64 / 1024.0, y as f64 / 1024.0);
            let bs = vec![Point2::new(0.015625, 0.0), Point2::new(2.5, 1.0)];
            let mut ues = vec![Vec::new(), Vec::new()];
            for (n, &r) in raw.iter().enumerate() {
                let p = pt(r);
                if bs.iter().all(|b| *b != p) {
                    ues[n % 2].push(p);
                }
            }
            let d = Deployment::new(&cfg(), bs, ues, 0, DistanceMetric::Euclidean).unwrap();
            let t = d.translated(&cfg(), Point2::new(ox as f64, oy as f64)).unwrap();
            prop_assert_eq!(&d.serving_distances, &t.serving_distances);
            prop_assert_eq!(&d.cross_distances, &t.cross_distances);
            prop_assert_eq!(&d.serving_betas, &t.serving_betas);
            prop_assert_eq!(&d.tagged_betas, &t.tagged_betas);
            prop_assert_eq!(&d.powers, &t.powers);
        }
    }
}
