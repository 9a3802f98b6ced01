use serde::Serialize;

use crate::analytic::{
    asymptotic_se, avg_se_lower_bound, optimize_pilot_length, optimize_pilot_length_asymptotic, sinr_from_ratios,
};
use crate::channel::se_per_ue;
use crate::error::Result;
use crate::geometry::{sample_ratio_sums, InterferenceRatios, MomentOptions, PlacementMode, SceneKind, SceneOptions};
use crate::stats::Summary;
use crate::Config;

/// Label attached to Monte-Carlo averages over a finite window: dropping
/// the far interferers can only raise the SE.
pub const MC_LABEL: &str = "upper bound (finite simulation window)";

/// Random-deployment Monte-Carlo settings shared by the sweeps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepOptions {
    pub scenes: usize,
    pub seed: u64,
    pub workers: usize,
    pub kind: SceneKind,
    pub placement: PlacementMode,
    pub window_radius: Option<f64>,
}

impl SweepOptions {
    /// Desk-scale default: 200 typical-UE scenes with Voronoi placement.
    pub fn new(seed: u64) -> Self {
        Self {
            scenes: 200,
            seed,
            workers: 1,
            kind: SceneKind::TypicalUe,
            placement: PlacementMode::Voronoi,
            window_radius: None,
        }
    }

    fn moment_options(&self) -> MomentOptions<f64> {
        let mut scene = SceneOptions::new(self.placement);
        scene.window_radius = self.window_radius;
        MomentOptions {
            kind: self.kind,
            scene,
            n_draws: self.scenes,
            seed: self.seed,
            workers: self.workers,
        }
    }
}

/// Distance-ratio sums of the sweep's random scenes. Under channel
/// inversion they determine the SINR for every `(A, B, M)`, so one draw
/// serves the whole sweep.
pub fn sample_sweep_scenes(cfg: &Config, opts: &SweepOptions) -> Vec<InterferenceRatios<f64>> {
    sample_ratio_sums(cfg, &opts.moment_options())
}

/// Mean per-cell SE over the scenes with its 95% half-width.
pub fn mc_cell_se(cfg: &Config, scenes: &[InterferenceRatios<f64>]) -> (f64, f64) {
    let k = cfg.ues_per_cell as f64;
    let s = Summary::of(scenes.iter().map(|r| k * se_per_ue(sinr_from_ratios(cfg, r), cfg)));
    (s.mean, s.ci95())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub axis: f64,
    /// Pilot length used for the bound and Monte-Carlo columns.
    pub pilot_len: usize,
    pub se_bound: f64,
    pub se_mc_mean: f64,
    pub se_mc_ci: f64,
    pub se_limit: Option<f64>,
    /// Pilot length used for the asymptotic column.
    pub limit_pilot_len: Option<usize>,
    pub se_pts: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepMeta {
    pub seed: u64,
    pub n_scenes: usize,
    pub scene_kind: SceneKind,
    pub placement: PlacementMode,
    pub window_radius: f64,
    pub mc_label: &'static str,
    pub config: Config,
    pub config_hash: String,
    /// Grid argmax of each curve (pilot sweep only).
    pub argmax: Option<SweepArgmax>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepArgmax {
    pub se_bound: f64,
    pub se_mc_mean: f64,
    pub se_limit: f64,
}

/// Per-cell SE (`K` times the per-UE value) along one axis.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub axis_name: String,
    pub points: Vec<SweepPoint>,
    pub meta: SweepMeta,
}

impl SweepResult {
    fn meta(cfg: &Config, opts: &SweepOptions, argmax: Option<SweepArgmax>) -> SweepMeta {
        SweepMeta {
            seed: opts.seed,
            n_scenes: opts.scenes,
            scene_kind: opts.kind,
            placement: opts.placement,
            window_radius: opts.moment_options().scene.window(cfg),
            mc_label: MC_LABEL,
            config: *cfg,
            config_hash: cfg.hash_hex(),
            argmax,
        }
    }
}

/// SE against the activity probability with `B` optimised for the bound at
/// every point; the asymptotic column uses its own optimal `B`, and the
/// part-time-sleep column scales the full-activity optimum by `A`.
pub fn run_activity_sweep(cfg: &Config, activities: &[f64], opts: &SweepOptions) -> Result<SweepResult> {
    cfg.validate_ignoring_pilot()?;
    let scenes = sample_sweep_scenes(cfg, opts);
    let k = cfg.ues_per_cell as f64;
    let full = cfg.with_activity(1.0);
    let full = full.with_pilot_len(optimize_pilot_length(&full)?);
    let full_se = k * avg_se_lower_bound(&full)?;
    let points = activities
        .iter()
        .map(|&a| {
            let c = cfg.with_activity(a);
            c.validate_ignoring_pilot()?;
            let c = c.with_pilot_len(optimize_pilot_length(&c)?);
            let (mean, ci) = mc_cell_se(&c, &scenes);
            let (limit, limit_b) = if a > 0.0 {
                let b = optimize_pilot_length_asymptotic(&c)?;
                (k * asymptotic_se(&c.with_pilot_len(b))?, b)
            } else {
                (0.0, c.ues_per_cell)
            };
            Ok(SweepPoint {
                axis: a,
                pilot_len: c.pilot_len,
                se_bound: k * avg_se_lower_bound(&c)?,
                se_mc_mean: mean,
                se_mc_ci: ci,
                se_limit: Some(limit),
                limit_pilot_len: Some(limit_b),
                se_pts: Some(a * full_se),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis_name: "activity".into(),
        points,
        meta: SweepResult::meta(cfg, opts, None),
    })
}

/// SE against the pilot length at the configuration's `M` and `A`.
pub fn run_pilot_sweep(cfg: &Config, pilot_lens: &[usize], opts: &SweepOptions) -> Result<SweepResult> {
    cfg.validate_ignoring_pilot()?;
    let scenes = sample_sweep_scenes(cfg, opts);
    let k = cfg.ues_per_cell as f64;
    let points = pilot_lens
        .iter()
        .map(|&b| {
            let c = cfg.with_pilot_len(b);
            c.validate()?;
            let (mean, ci) = mc_cell_se(&c, &scenes);
            Ok(SweepPoint {
                axis: b as f64,
                pilot_len: b,
                se_bound: k * avg_se_lower_bound(&c)?,
                se_mc_mean: mean,
                se_mc_ci: ci,
                se_limit: Some(k * asymptotic_se(&c)?),
                limit_pilot_len: Some(b),
                se_pts: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let arg = |f: fn(&SweepPoint) -> f64| {
        points
            .iter()
            .fold(None::<&SweepPoint>, |best, p| match best {
                Some(q) if f(q) >= f(p) => Some(q),
                _ => Some(p),
            })
            .map_or(f64::NAN, |p| p.axis)
    };
    let argmax = SweepArgmax {
        se_bound: arg(|p| p.se_bound),
        se_mc_mean: arg(|p| p.se_mc_mean),
        se_limit: arg(|p| p.se_limit.unwrap_or(f64::NEG_INFINITY)),
    };
    Ok(SweepResult {
        axis_name: "pilot_len".into(),
        points,
        meta: SweepResult::meta(cfg, opts, Some(argmax)),
    })
}
