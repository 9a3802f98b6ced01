use rand::Rng;
use serde::Serialize;

use super::ppp::{nearest_distance_scale, rayleigh_cdf, sample_ppp};
use super::scene::{sample_typical_cell, sample_typical_scene, Scene, SceneKind, SceneOptions};
use super::{InterferenceRatios, Point2};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::parallel::{chunk_sizes, run_seeded};
use crate::real::Real;
use crate::stats::{ks_critical, ks_statistic, Summary};

const SCENES_PER_CHUNK: usize = 256;

/// `E[sum (d_jji/d_0ji)^alpha] = 2K/(alpha - 2)`.
pub fn expected_first_ratio_moment(k: usize, alpha: f64) -> f64 {
    2.0 * k as f64 / (alpha - 2.0)
}

/// `E[sum (d_jji/d_0ji)^(2 alpha)] = K/(alpha - 1)`.
pub fn expected_second_ratio_moment(k: usize, alpha: f64) -> f64 {
    k as f64 / (alpha - 1.0)
}

/// Upper bound on the second moment of the first ratio sum,
/// `4K^2/(alpha-2)^2 + K^2/(alpha-1)`.
pub fn first_ratio_square_bound(k: usize, alpha: f64) -> f64 {
    let k = k as f64;
    4.0 * k * k / ((alpha - 2.0) * (alpha - 2.0)) + k * k / (alpha - 1.0)
}

/// Monte-Carlo run settings for the scene statistics.
#[derive(Debug, Clone, Copy)]
pub struct MomentOptions<T> {
    pub kind: SceneKind,
    pub scene: SceneOptions<T>,
    pub n_draws: usize,
    pub seed: u64,
    pub workers: usize,
}

impl<T: Real> MomentOptions<T> {
    pub fn new(kind: SceneKind, scene: SceneOptions<T>, n_draws: usize, seed: u64) -> Self {
        Self {
            kind,
            scene,
            n_draws,
            seed,
            workers: 1,
        }
    }
}

pub fn sample_scene<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SystemConfig<T>,
    kind: SceneKind,
    opts: &SceneOptions<T>,
) -> Scene<T> {
    match kind {
        SceneKind::TypicalUe => sample_typical_scene(rng, cfg, opts),
        SceneKind::TypicalCell => sample_typical_cell(rng, cfg, opts),
    }
}

/// Per-scene ratio sums, in draw order.
pub fn sample_ratio_sums<T: Real>(cfg: &SystemConfig<T>, opts: &MomentOptions<T>) -> Vec<InterferenceRatios<T>> {
    let chunks = chunk_sizes(opts.n_draws, SCENES_PER_CHUNK);
    run_seeded(chunks.len(), opts.workers, opts.seed, |i, rng| {
        (0..chunks[i])
            .map(|_| sample_scene(rng, cfg, opts.kind, &opts.scene).interference_ratios(cfg.alpha))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatioMoments {
    pub first: Summary,
    pub second: Summary,
    /// Statistics of the squared first sum.
    pub first_sq: Summary,
}

pub fn ratio_moments<T: Real>(cfg: &SystemConfig<T>, opts: &MomentOptions<T>) -> RatioMoments {
    let sums = sample_ratio_sums(cfg, opts);
    let first = || sums.iter().map(|r| r.first.as_f64());
    RatioMoments {
        first: Summary::of(first()),
        second: Summary::of(sums.iter().map(|r| r.second.as_f64())),
        first_sq: Summary::of(first().map(|x| x * x)),
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentCheck {
    pub gamma: u32,
    pub expected: f64,
    pub observed: Summary,
    pub rel_err: f64,
}

/// Empirical `E[sum (d_jji/d_0ji)^(gamma alpha)]` against its closed form.
pub fn ratio_moment_check<T: Real>(cfg: &SystemConfig<T>, gamma: u32, opts: &MomentOptions<T>) -> Result<MomentCheck> {
    let (k, alpha) = (cfg.ues_per_cell, cfg.alpha.as_f64());
    if alpha <= 2.0 {
        return Err(Error::domain("ratio_moment_check", "alpha must exceed 2"));
    }
    let sums = sample_ratio_sums(cfg, opts);
    let (expected, observed) = match gamma {
        1 => (
            expected_first_ratio_moment(k, alpha),
            Summary::of(sums.iter().map(|r| r.first.as_f64())),
        ),
        2 => (
            expected_second_ratio_moment(k, alpha),
            Summary::of(sums.iter().map(|r| r.second.as_f64())),
        ),
        _ => return Err(Error::domain("ratio_moment_check", "gamma must be 1 or 2")),
    };
    Ok(MomentCheck {
        gamma,
        expected,
        observed,
        rel_err: (observed.mean - expected) / expected,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WindowConvergence {
    pub radius: f64,
    pub inner: Summary,
    pub outer: Summary,
    /// `(outer - inner) / outer` on the means.
    pub rel_diff: f64,
}

/// First ratio moment at the configured window `R` against `2R`, on common
/// scenes: each scene is drawn on the `2R` window and also evaluated with
/// only the cells whose BS lies within `R`.
pub fn window_convergence<T: Real>(cfg: &SystemConfig<T>, opts: &MomentOptions<T>) -> WindowConvergence {
    let radius = opts.scene.window(cfg);
    let wide = MomentOptions {
        scene: opts.scene.with_window(radius + radius),
        ..*opts
    };
    let center = |s: &Scene<T>| match s.kind {
        SceneKind::TypicalUe => Point2::origin(),
        SceneKind::TypicalCell => s.tagged_bs,
    };
    let r2 = radius * radius;
    let chunks = chunk_sizes(opts.n_draws, SCENES_PER_CHUNK);
    let pairs: Vec<(f64, f64)> = run_seeded(chunks.len(), opts.workers, opts.seed, |i, rng| {
        (0..chunks[i])
            .map(|_| {
                let mut s = sample_scene(rng, cfg, wide.kind, &wide.scene);
                let outer = s.interference_ratios(cfg.alpha).first.as_f64();
                let c = center(&s);
                let keep: Vec<bool> = s.interferer_bs.iter().map(|b| b.dist2(c) <= r2).collect();
                let mut it = keep.iter();
                s.interferer_bs.retain(|_| *it.next().unwrap());
                let mut it = keep.iter();
                let tagged = s.ues.remove(0);
                s.ues.retain(|_| *it.next().unwrap());
                s.ues.insert(0, tagged);
                (s.interference_ratios(cfg.alpha).first.as_f64(), outer)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let inner = Summary::of(pairs.iter().map(|p| p.0));
    let outer = Summary::of(pairs.iter().map(|p| p.1));
    WindowConvergence {
        radius: radius.as_f64(),
        inner,
        outer,
        rel_diff: (outer.mean - inner.mean) / outer.mean,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsResult {
    pub n: usize,
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

/// KS test of the nearest-BS distance from the origin in a PPP of
/// intensity `lambda` against `Rayleigh(1/sqrt(2 pi lambda))`.
///
/// The distances come from full PPP draws, not from the Rayleigh sampler
/// used by the scenes.
pub fn nearest_distance_ks(lambda: f64, n: usize, seed: u64, level: f64) -> KsResult {
    // P(no point within 6/sqrt(lambda)) = exp(-36 pi)
    let window = 6.0 / lambda.sqrt();
    let chunks = chunk_sizes(n, 1024);
    let d: Vec<f64> = run_seeded(chunks.len(), 1, seed, |i, rng| {
        (0..chunks[i])
            .map(|_| {
                sample_ppp(rng, lambda, window)
                    .iter()
                    .map(|p| p.norm())
                    .fold(window, f64::min)
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let sigma = nearest_distance_scale(lambda);
    let statistic = ks_statistic(&d, |x| rayleigh_cdf(x, sigma));
    let critical = ks_critical(n, level);
    KsResult {
        n,
        statistic,
        critical,
        pass: statistic < critical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PlacementMode;

    #[test]
    fn closed_forms() {
        assert!((expected_first_ratio_moment(30, 3.76) - 34.090909).abs() < 1e-5);
        assert!((expected_second_ratio_moment(30, 3.76) - 10.869565).abs() < 1e-5);
        assert!((first_ratio_square_bound(30, 3.76) - (4.0 * 900.0 / 1.76f64.powi(2) + 900.0 / 2.76)).abs() < 1e-9);
    }

    #[test]
    fn displaced_moments_small_run() {
        let cfg = SystemConfig::<f64>::reference();
        let opts = MomentOptions::new(SceneKind::TypicalCell, SceneOptions::new(PlacementMode::Displaced), 2000, 1);
        let m = ratio_moments(&cfg, &opts);
        let e1 = expected_first_ratio_moment(30, 3.76);
        assert!((m.first.mean - e1).abs() < 0.08 * e1, "{}", m.first.mean);
    }

    #[test]
    fn gamma_must_be_one_or_two() {
        let cfg = SystemConfig::<f64>::reference();
        let opts = MomentOptions::new(SceneKind::TypicalCell, SceneOptions::default(), 1, 1);
        assert!(ratio_moment_check(&cfg, 3, &opts).is_err());
    }

    #[test]
    fn workers_do_not_change_sums() {
        let cfg = SystemConfig::<f64>::reference();
        let mut opts = MomentOptions::new(
            SceneKind::TypicalUe,
            SceneOptions::new(PlacementMode::Voronoi).with_window(4.0),
            600,
            3,
        );
        let a = sample_ratio_sums(&cfg, &opts);
        opts.workers = 3;
        assert_eq!(a, sample_ratio_sums(&cfg, &opts));
    }

    #[test]
    fn ks_small() {
        let r = nearest_distance_ks(4.0, 2000, 11, 0.01);
        assert!(r.pass, "{r:?}");
    }
}
