use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::sinr_from_ratios;
use crate::channel::se_per_ue;
use crate::error::{Error, Result};
use crate::geometry::{
    hexagonal_deployment, place_ues_voronoi, sample_ppp, sample_typical_cell, InterferenceRatios, PlacementMode,
    Point2, SceneOptions,
};
use crate::parallel::{chunk_sizes, run_seeded};
use crate::stats::{empirical_cdf, percentile, Summary};
use crate::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeploymentKind {
    Random,
    #[serde(alias = "hex")]
    Hexagonal,
}

impl fmt::Display for DeploymentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeploymentKind::Random => "random",
            DeploymentKind::Hexagonal => "hexagonal",
        })
    }
}

impl FromStr for DeploymentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "hex" | "hexagonal" => Ok(Self::Hexagonal),
            other => Err(Error::Parse(format!("unknown deployment kind {other:?}"))),
        }
    }
}

/// Which cells of a random deployment enter the CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfConditioning {
    /// One typical cell (BS at the origin) per realisation.
    TypicalCell,
    /// Every cell whose BS lies in the inner half-radius of the window.
    WindowCells,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CdfOptions {
    pub realizations: usize,
    pub seed: u64,
    pub workers: usize,
    pub conditioning: CdfConditioning,
    pub placement: PlacementMode,
    pub window_radius: Option<f64>,
    pub hex_tiers: usize,
}

impl CdfOptions {
    pub fn new(realizations: usize, seed: u64) -> Self {
        Self {
            realizations,
            seed,
            workers: 1,
            conditioning: CdfConditioning::TypicalCell,
            placement: PlacementMode::Voronoi,
            window_radius: None,
            hex_tiers: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CdfResult {
    pub kind: DeploymentKind,
    pub conditioning: Option<CdfConditioning>,
    /// Per-cell SE samples, ascending.
    pub values: Vec<f64>,
    pub mean: f64,
    pub p10: f64,
    pub p90: f64,
    pub seed: u64,
    pub config_hash: String,
    pub assumptions: Vec<String>,
}

impl CdfResult {
    /// `(value, quantile)` pairs of the empirical CDF.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        empirical_cdf(&self.values)
    }

    pub fn spread(&self) -> f64 {
        self.p90 - self.p10
    }
}

/// Inter-site distance giving one hexagon of area `1/lambda` per BS.
pub fn hex_isd_for_density(lambda: f64) -> f64 {
    (2.0 / (3f64.sqrt() * lambda)).sqrt()
}

fn cell_se(cfg: &Config, r: &InterferenceRatios<f64>) -> f64 {
    cfg.ues_per_cell as f64 * se_per_ue(sinr_from_ratios(cfg, r), cfg)
}

/// Ratio sums seen by every BS within `inner` of the origin.
fn window_cell_ratios(bs: &[Point2<f64>], ues: &[Vec<Point2<f64>>], alpha: f64, inner: f64) -> Vec<InterferenceRatios<f64>> {
    let half = 0.5 * alpha;
    bs.iter()
        .enumerate()
        .filter(|(_, b)| b.norm() <= inner)
        .map(|(t, &tb)| {
            let mut r = InterferenceRatios::default();
            for (j, (&b, cell)) in bs.iter().zip(ues).enumerate() {
                if j == t {
                    continue;
                }
                for u in cell {
                    let q = (u.dist2(b) / u.dist2(tb)).powf(half);
                    r.first += q;
                    r.second += q * q;
                }
            }
            r
        })
        .collect()
}

/// Empirical distribution of the per-cell SE (sum over the `K` UEs of the
/// closed-form SE) over random or hexagonal layouts.
pub fn run_cdf_experiment(cfg: &Config, kind: DeploymentKind, opts: &CdfOptions) -> Result<CdfResult> {
    cfg.validate()?;
    let chunks = chunk_sizes(opts.realizations, 16);
    let window = opts.window_radius.unwrap_or(10.0 * cfg.cell_scale());
    let isd = hex_isd_for_density(cfg.lambda);
    let per_chunk = run_seeded(chunks.len(), opts.workers, opts.seed, |i, rng| -> Result<Vec<f64>> {
        let mut out = Vec::new();
        for _ in 0..chunks[i] {
            match kind {
                DeploymentKind::Hexagonal => {
                    let dep = hexagonal_deployment(cfg, isd, opts.hex_tiers, rng)?;
                    out.push(cell_se(cfg, &dep.interference_ratios()));
                }
                DeploymentKind::Random => match opts.conditioning {
                    CdfConditioning::TypicalCell => {
                        let so = SceneOptions::new(opts.placement).with_window(window);
                        let scene = sample_typical_cell(rng, cfg, &so);
                        out.push(cell_se(cfg, &scene.interference_ratios(cfg.alpha)));
                    }
                    CdfConditioning::WindowCells => {
                        if opts.placement != PlacementMode::Voronoi {
                            return Err(Error::domain("run_cdf_experiment", "window-cells mode needs voronoi placement"));
                        }
                        let bs = sample_ppp(rng, cfg.lambda, window);
                        if bs.is_empty() {
                            continue;
                        }
                        let placed = place_ues_voronoi(rng, &bs, cfg.ues_per_cell, Point2::origin(), window);
                        for r in window_cell_ratios(&bs, &placed.ues, cfg.alpha, 0.5 * window) {
                            out.push(cell_se(cfg, &r));
                        }
                    }
                },
            }
        }
        Ok(out)
    });
    let mut values = Vec::new();
    for c in per_chunk {
        values.extend(c?);
    }
    values.sort_by(f64::total_cmp);
    let mut assumptions = Vec::new();
    let conditioning = match kind {
        DeploymentKind::Hexagonal => {
            assumptions.push(format!(
                "hexagonal grid with {} tiers and wrap-around distances; inter-site distance {isd:.6} km (one cell per 1/lambda)",
                opts.hex_tiers
            ));
            None
        }
        DeploymentKind::Random => {
            assumptions.push(format!("PPP window radius {window} km; {} placement", opts.placement));
            Some(opts.conditioning)
        }
    };
    Ok(CdfResult {
        kind,
        conditioning,
        mean: Summary::of(values.iter().copied()).mean,
        p10: percentile(&values, 10.0),
        p90: percentile(&values, 90.0),
        values,
        seed: opts.seed,
        config_hash: cfg.hash_hex(),
        assumptions,
    })
}
