use rand::Rng;

use super::{Point2, PointGrid};
use crate::real::Real;

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon<T> {
    pub vertices: Vec<Point2<T>>,
}

impl<T: Real> ConvexPolygon<T> {
    pub fn square(center: Point2<T>, half_width: T) -> Self {
        let h = half_width;
        Self {
            vertices: vec![
                center + Point2::new(-h, -h),
                center + Point2::new(h, -h),
                center + Point2::new(h, h),
                center + Point2::new(-h, h),
            ],
        }
    }

    pub fn area(&self) -> T {
        let n = self.vertices.len();
        if n < 3 {
            return T::zero();
        }
        let mut a = T::zero();
        for i in 0..n {
            a = a + self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        a * T::lit(0.5)
    }

    /// Keeps the part where `dot(normal, x) <= offset`.
    pub fn clip(&mut self, normal: Point2<T>, offset: T) {
        let n = self.vertices.len();
        if n == 0 {
            return;
        }
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let fa = normal.dot(a) - offset;
            let fb = normal.dot(b) - offset;
            if fa <= T::zero() {
                out.push(a);
            }
            if (fa < T::zero() && fb > T::zero()) || (fa > T::zero() && fb < T::zero()) {
                let t = fa / (fa - fb);
                out.push(a + (b - a).scale(t));
            }
        }
        self.vertices = out;
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            (b - a).cross(p - a) >= T::zero()
        })
    }

    pub fn max_dist2_from(&self, p: Point2<T>) -> T {
        self.vertices
            .iter()
            .map(|v| v.dist2(p))
            .fold(T::zero(), T::max)
    }

    /// Uniform point over the polygon via area-weighted fan triangulation.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2<T> {
        let v = &self.vertices;
        let n = v.len();
        debug_assert!(n >= 3);
        let total = self.area();
        let mut target = T::unit(rng) * total;
        let mut tri = n - 3;
        for i in 1..n - 1 {
            let a = (v[i] - v[0]).cross(v[i + 1] - v[0]) * T::lit(0.5);
            if target < a {
                tri = i - 1;
                break;
            }
            target = target - a;
        }
        let (a, b, c) = (v[0], v[tri + 1], v[tri + 2]);
        let mut u = T::unit(rng);
        let mut w = T::unit(rng);
        if u + w > T::one() {
            u = T::one() - u;
            w = T::one() - w;
        }
        a + (b - a).scale(u) + (c - a).scale(w)
    }
}

/// Voronoi cell of `sites[j]` intersected with `bounds`.
///
/// Bisectors are applied in order of increasing neighbour distance; the loop
/// stops once no further site can cut the current polygon.
pub fn voronoi_cell<T: Real>(
    sites: &[Point2<T>],
    grid: &PointGrid<T>,
    j: usize,
    bounds: &ConvexPolygon<T>,
    scratch: &mut Vec<usize>,
) -> ConvexPolygon<T> {
    let c = sites[j];
    let mut poly = bounds.clone();
    let mut radius = grid_guess(sites.len(), bounds);
    let mut applied_r2: Option<T> = None;
    loop {
        grid.within(c, radius, scratch);
        let everything = scratch.len() == sites.len();
        let mut near: Vec<(T, usize)> = scratch
            .iter()
            .filter(|&&i| i != j)
            .map(|&i| (sites[i].dist2(c), i))
            .filter(|&(d2, _)| applied_r2.is_none_or(|r2| d2 > r2))
            .collect();
        near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for &(d2, i) in &near {
            // a site at distance d only cuts points farther than d/2 from c
            if d2 > T::lit(4.0) * poly.max_dist2_from(c) {
                return poly;
            }
            let s = sites[i];
            poly.clip(s - c, (s.norm2() - c.norm2()) * T::lit(0.5));
        }
        let r2 = radius * radius;
        if everything || r2 > T::lit(4.0) * poly.max_dist2_from(c) {
            return poly;
        }
        applied_r2 = Some(r2);
        radius = radius * T::lit(2.0);
    }
}

fn grid_guess<T: Real>(n: usize, bounds: &ConvexPolygon<T>) -> T {
    // about 30 neighbours on average
    let per_site = bounds.area().abs() / T::from_usize_lossy(n.max(1));
    (per_site * T::lit(30.0) / T::PI()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_area_and_clip() {
        let mut sq = ConvexPolygon::square(Point2::origin(), 1.0f64);
        assert_eq!(sq.area(), 4.0);
        sq.clip(Point2::new(1.0, 0.0), 0.0);
        assert!((sq.area() - 2.0).abs() < 1e-15);
        assert!(sq.contains(Point2::new(-0.5, 0.3)));
        assert!(!sq.contains(Point2::new(0.5, 0.3)));
    }

    #[test]
    fn uniform_sampling_mean_is_centroid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tri = ConvexPolygon {
            vertices: vec![Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(0.0, 3.0), ],
        };
        let n = 200_000;
        let mut sx = 0.0;
        let mut sy = 0.0;
        for _ in 0..n {
            let p = tri.sample_uniform(&mut rng);
            assert!(tri.contains(p));
            sx += p.x;
            sy += p.y;
        }
        assert!((sx / n as f64 - 1.0).abs() < 0.01);
        assert!((sy / n as f64 - 1.0).abs() < 0.01);
    }

    #[test]
    fn cells_partition_the_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sites: Vec<Point2<f64>> = (0..150)
            .map(|_| Point2::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)))
            .collect();
        let grid = PointGrid::new(&sites, 0.65);
        let bounds = ConvexPolygon::square(Point2::origin(), 5.0);
        let mut scratch = Vec::new();
        let cells: Vec<_> = (0..sites.len())
            .map(|j| voronoi_cell(&sites, &grid, j, &bounds, &mut scratch))
            .collect();
        let total: f64 = cells.iter().map(|c| c.area()).sum();
        assert!((total - 100.0).abs() < 1e-9, "total area {total}");
        for _ in 0..3000 {
            let p = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let (owner, _) = grid.nearest(p);
            assert!(cells[owner].contains(p));
        }
    }
}
