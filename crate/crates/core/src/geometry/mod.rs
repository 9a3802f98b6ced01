//! Base-station and UE layouts: PPP scenes, Voronoi cells, hexagonal grids.

mod deployment;
mod grid;
mod hex;
mod moments;
mod point;
mod ppp;
mod scene;
mod voronoi;

pub use deployment::{Deployment, DeploymentMeta, DistanceMetric, InterferenceRatios};
pub use grid::PointGrid;
pub use hex::{hex_site_count, hexagonal_deployment, HexLattice};
pub use moments::{
    expected_first_ratio_moment, expected_second_ratio_moment, first_ratio_square_bound, nearest_distance_ks,
    ratio_moment_check, ratio_moments, sample_ratio_sums, sample_scene, window_convergence, KsResult, MomentCheck,
    MomentOptions, RatioMoments, WindowConvergence,
};
pub use point::Point2;
pub use ppp::{nearest_distance_scale, rayleigh_cdf, sample_ppp, sample_ppp_annulus, sample_rayleigh};
pub use scene::{
    place_ues_voronoi, sample_typical_cell, sample_typical_scene, PlacementMode, Scene, SceneKind, SceneOptions,
    VoronoiPlacement,
};
pub use voronoi::{voronoi_cell, ConvexPolygon};
