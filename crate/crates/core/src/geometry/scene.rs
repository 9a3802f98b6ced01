use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ppp::{nearest_distance_scale, sample_ppp_annulus, sample_rayleigh};
use super::voronoi::{voronoi_cell, ConvexPolygon};
use super::{Deployment, DistanceMetric, InterferenceRatios, Point2, PointGrid};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::real::Real;

/// How UEs are dropped around their BSs in random deployments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlacementMode {
    /// Uniform over the Poisson-Voronoi cell (exact nearest-BS association).
    Voronoi,
    /// Uniform in a disc of area `1/lambda` around the BS, redrawn until the
    /// UE is closer to its BS than to the tagged BS.
    Disc,
    /// Rayleigh(`1/sqrt(2 pi lambda)`) displacement from the BS in a uniform
    /// direction; interfering UEs closer to the tagged BS than to their own
    /// are removed. This is the association model behind the closed-form
    /// distance-ratio moments.
    Displaced,
}

impl PlacementMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlacementMode::Voronoi => "voronoi",
            PlacementMode::Disc => "disc",
            PlacementMode::Displaced => "displaced",
        }
    }
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlacementMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "voronoi" => Ok(Self::Voronoi),
            "disc" => Ok(Self::Disc),
            "displaced" => Ok(Self::Displaced),
            other => Err(Error::Parse(format!("unknown placement mode {other:?}"))),
        }
    }
}

/// Which point the random scene is centred on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    /// Typical UE at the origin, its BS at a Rayleigh distance, other BSs a
    /// PPP outside the disc through the serving BS.
    TypicalUe,
    /// Typical BS at the origin, other BSs a PPP over the whole window.
    TypicalCell,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneOptions<T> {
    pub placement: PlacementMode,
    /// Defaults to `10 / sqrt(lambda)`.
    pub window_radius: Option<T>,
}

impl<T: Real> Default for SceneOptions<T> {
    fn default() -> Self {
        Self {
            placement: PlacementMode::Voronoi,
            window_radius: None,
        }
    }
}

impl<T: Real> SceneOptions<T> {
    pub fn new(placement: PlacementMode) -> Self {
        Self {
            placement,
            window_radius: None,
        }
    }

    pub fn with_window(mut self, r: T) -> Self {
        self.window_radius = Some(r);
        self
    }

    pub fn window(&self, cfg: &SystemConfig<T>) -> T {
        self.window_radius
            .unwrap_or_else(|| T::lit(10.0) * cfg.cell_scale())
    }
}

/// One random realisation around the tagged cell.
///
/// Index 0 of `ues` is the tagged cell; `ues[j + 1]` belongs to
/// `interferer_bs[j]`. For [`SceneKind::TypicalUe`] the typical UE sits at
/// the origin and is `ues[0][0]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene<T> {
    pub kind: SceneKind,
    pub placement: PlacementMode,
    /// Distance from the typical UE to its BS (typical-UE scenes only).
    pub d00k: Option<T>,
    pub tagged_bs: Point2<T>,
    pub interferer_bs: Vec<Point2<T>>,
    pub ues: Vec<Vec<Point2<T>>>,
    pub window_radius: T,
    /// Cells (scene indices) whose Voronoi region was cut by the window.
    pub boundary_cells: Vec<usize>,
}

/// Typical-UE scene: `d00k ~ Rayleigh(1/sqrt(2 pi lambda))`, interfering BSs
/// a PPP on the window minus the disc of radius `d00k` around the UE.
pub fn sample_typical_scene<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SystemConfig<T>,
    opts: &SceneOptions<T>,
) -> Scene<T> {
    let window = opts.window(cfg);
    let d00k = sample_rayleigh(rng, nearest_distance_scale(cfg.lambda)).min(window);
    let tagged_bs = Point2::polar(d00k, T::TAU() * T::unit(rng));
    let interferer_bs = sample_ppp_annulus(rng, cfg.lambda, Point2::origin(), d00k, window);
    let mut scene = Scene {
        kind: SceneKind::TypicalUe,
        placement: opts.placement,
        d00k: Some(d00k),
        tagged_bs,
        interferer_bs,
        ues: Vec::new(),
        window_radius: window,
        boundary_cells: Vec::new(),
    };
    scene.place_ues(rng, cfg, Some(Point2::origin()));
    scene
}

/// Typical-cell scene: tagged BS at the origin, other BSs a PPP on the
/// window disc.
pub fn sample_typical_cell<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &SystemConfig<T>,
    opts: &SceneOptions<T>,
) -> Scene<T> {
    let window = opts.window(cfg);
    let interferer_bs = sample_ppp_annulus(rng, cfg.lambda, Point2::origin(), T::zero(), window);
    let mut scene = Scene {
        kind: SceneKind::TypicalCell,
        placement: opts.placement,
        d00k: None,
        tagged_bs: Point2::origin(),
        interferer_bs,
        ues: Vec::new(),
        window_radius: window,
        boundary_cells: Vec::new(),
    };
    scene.place_ues(rng, cfg, None);
    scene
}

impl<T: Real> Scene<T> {
    pub fn bs_positions(&self) -> Vec<Point2<T>> {
        std::iter::once(self.tagged_bs)
            .chain(self.interferer_bs.iter().copied())
            .collect()
    }

    fn place_ues<R: Rng + ?Sized>(&mut self, rng: &mut R, cfg: &SystemConfig<T>, typical: Option<Point2<T>>) {
        let bs = self.bs_positions();
        let k = cfg.ues_per_cell;
        let (ues, boundary) = match self.placement {
            PlacementMode::Voronoi => {
                let placed = place_ues_voronoi(rng, &bs, k, Point2::origin(), self.window_radius);
                (placed.ues, placed.boundary_cells)
            }
            PlacementMode::Disc => (place_ues_disc(rng, &bs, k, cfg.lambda), Vec::new()),
            PlacementMode::Displaced => (place_ues_displaced(rng, &bs, k, cfg.lambda), Vec::new()),
        };
        self.ues = ues;
        self.boundary_cells = boundary;
        if let Some(u) = typical {
            if let Some(first) = self.ues[0].first_mut() {
                *first = u;
            } else {
                self.ues[0].push(u);
            }
        }
    }

    /// Distance-ratio sums of the interfering UEs towards the tagged BS,
    /// computed directly from positions.
    pub fn interference_ratios(&self, alpha: T) -> InterferenceRatios<T> {
        let half = alpha * T::lit(0.5);
        let mut r = InterferenceRatios::default();
        for (b, ues) in self.interferer_bs.iter().zip(&self.ues[1..]) {
            for u in ues {
                let q = (u.dist2(*b) / u.dist2(self.tagged_bs)).powf(half);
                r.first = r.first + q;
                r.second = r.second + q * q;
            }
        }
        r
    }

    pub fn to_deployment(&self, cfg: &SystemConfig<T>) -> Result<Deployment<T>> {
        let mut dep = Deployment::new(cfg, self.bs_positions(), self.ues.clone(), 0, DistanceMetric::Euclidean)?;
        dep.meta.kind = match self.kind {
            SceneKind::TypicalUe => "random/typical-ue".into(),
            SceneKind::TypicalCell => "random/typical-cell".into(),
        };
        dep.meta.placement = Some(self.placement.to_string());
        dep.meta.window_radius = Some(self.window_radius.as_f64());
        dep.meta.boundary_cells = self.boundary_cells.clone();
        Ok(dep)
    }
}

/// Result of [`place_ues_voronoi`].
#[derive(Debug, Clone)]
pub struct VoronoiPlacement<T> {
    pub ues: Vec<Vec<Point2<T>>>,
    /// Cells touching the window boundary; their UEs are uniform over the
    /// part of the cell inside the window.
    pub boundary_cells: Vec<usize>,
}

/// `k` UEs per BS, uniform over each Voronoi cell intersected with the
/// window disc.
pub fn place_ues_voronoi<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    bs: &[Point2<T>],
    k: usize,
    window_center: Point2<T>,
    window_radius: T,
) -> VoronoiPlacement<T> {
    assert!(!bs.is_empty(), "need at least one BS");
    let bounds = ConvexPolygon::square(window_center, window_radius);
    let spacing = (bounds.area() / T::from_usize_lossy(bs.len())).sqrt();
    let grid = PointGrid::new(bs, spacing);
    let r2 = window_radius * window_radius;
    let mut scratch = Vec::new();
    let mut boundary_cells = Vec::new();
    let ues = (0..bs.len())
        .map(|j| {
            let cell = voronoi_cell(bs, &grid, j, &bounds, &mut scratch);
            if cell.max_dist2_from(window_center) > r2 {
                boundary_cells.push(j);
            }
            (0..k)
                .map(|_| loop {
                    let p = cell.sample_uniform(rng);
                    if p.dist2(window_center) <= r2 {
                        break p;
                    }
                })
                .collect()
        })
        .collect();
    if !boundary_cells.is_empty() {
        log::debug!("{} cells cut by the window boundary", boundary_cells.len());
    }
    VoronoiPlacement { ues, boundary_cells }
}

fn place_ues_disc<T: Real, R: Rng + ?Sized>(rng: &mut R, bs: &[Point2<T>], k: usize, lambda: T) -> Vec<Vec<Point2<T>>> {
    let radius = (T::PI() * lambda).sqrt().recip();
    let tagged = bs[0];
    bs.iter()
        .enumerate()
        .map(|(j, &b)| {
            (0..k)
                .map(|_| loop {
                    let u = b + Point2::polar(radius * T::unit(rng).sqrt(), T::TAU() * T::unit(rng));
                    if j == 0 || u.dist2(b) < u.dist2(tagged) {
                        break u;
                    }
                })
                .collect()
        })
        .collect()
}

fn place_ues_displaced<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    bs: &[Point2<T>],
    k: usize,
    lambda: T,
) -> Vec<Vec<Point2<T>>> {
    let sigma = nearest_distance_scale(lambda);
    let tagged = bs[0];
    bs.iter()
        .enumerate()
        .map(|(j, &b)| {
            (0..k)
                .filter_map(|_| {
                    let u = b + Point2::polar(sample_rayleigh(rng, sigma), T::TAU() * T::unit(rng));
                    (j == 0 || u.dist2(b) < u.dist2(tagged)).then_some(u)
                })
                .collect()
        })
        .collect()
}
