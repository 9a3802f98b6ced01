use super::Point2;
use crate::real::Real;

/// Uniform bucket grid over a fixed point set for nearest-neighbour and
/// radius queries.
#[derive(Debug, Clone)]
pub struct PointGrid<T> {
    points: Vec<Point2<T>>,
    origin: Point2<T>,
    cell: T,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl<T: Real> PointGrid<T> {
    /// `cell` is the bucket side length; about one expected point per bucket
    /// is a good choice.
    pub fn new(points: &[Point2<T>], cell: T) -> Self {
        assert!(!points.is_empty(), "grid needs at least one point");
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = |a: T, b: T| ((b - a) / cell).floor().to_usize().unwrap_or(0) + 1;
        let (nx, ny) = (span(lo.x, hi.x), span(lo.y, hi.y));
        let mut grid = Self {
            points: points.to_vec(),
            origin: lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.bucket_of(*p);
            grid.buckets[cy * nx + cx].push(i);
        }
        grid
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    fn coord(&self, v: T, lo: T, n: usize) -> isize {
        let c = ((v - lo) / self.cell).floor().to_isize().unwrap_or(isize::MIN / 4);
        c.clamp(-1, n as isize)
    }

    fn bucket_of(&self, p: Point2<T>) -> (usize, usize) {
        let cx = self.coord(p.x, self.origin.x, self.nx).clamp(0, self.nx as isize - 1);
        let cy = self.coord(p.y, self.origin.y, self.ny).clamp(0, self.ny as isize - 1);
        (cx as usize, cy as usize)
    }

    /// Visits every point in the square ring at Chebyshev bucket distance
    /// `ring` around the bucket of `p`. Returns false once the ring lies
    /// entirely outside the grid.
    fn visit_ring(&self, cx: isize, cy: isize, ring: isize, mut f: impl FnMut(usize)) -> bool {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let mut any = false;
        for y in (cy - ring)..=(cy + ring) {
            if y < 0 || y >= ny {
                continue;
            }
            let edge_row = y == cy - ring || y == cy + ring;
            let step = if edge_row || ring == 0 { 1 } else { 2 * ring };
            let mut x = cx - ring;
            while x <= cx + ring {
                if x >= 0 && x < nx {
                    any = true;
                    for &i in &self.buckets[(y * nx + x) as usize] {
                        f(i);
                    }
                }
                x += step.max(1);
            }
        }
        any
    }

    /// Index and squared distance of the point closest to `p`; ties go to the
    /// lower index.
    pub fn nearest(&self, p: Point2<T>) -> (usize, T) {
        let cx = self.coord(p.x, self.origin.x, self.nx);
        let cy = self.coord(p.y, self.origin.y, self.ny);
        let mut best = (usize::MAX, T::infinity());
        let mut ring = 0isize;
        loop {
            let inside = self.visit_ring(cx, cy, ring, |i| {
                let d = self.points[i].dist2(p);
                if d < best.1 || (d == best.1 && i < best.0) {
                    best = (i, d);
                }
            });
            if best.0 != usize::MAX {
                // anything in a further ring is at least `ring * cell` away
                let reach = T::from_usize_lossy(ring as usize) * self.cell;
                if reach * reach > best.1 {
                    return best;
                }
            }
            if !inside && ring > 0 && best.0 != usize::MAX {
                return best;
            }
            ring += 1;
        }
    }

    /// Indices of all points within distance `r` of `p`.
    pub fn within(&self, p: Point2<T>, r: T, out: &mut Vec<usize>) {
        out.clear();
        let r2 = r * r;
        let lo = |v: T, o: T| ((v - r - o) / self.cell).floor().to_isize().unwrap_or(0);
        let hi = |v: T, o: T| ((v + r - o) / self.cell).floor().to_isize().unwrap_or(-1);
        let x0 = lo(p.x, self.origin.x).max(0);
        let x1 = hi(p.x, self.origin.x).min(self.nx as isize - 1);
        let y0 = lo(p.y, self.origin.y).max(0);
        let y1 = hi(p.y, self.origin.y).min(self.ny as isize - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                for &i in &self.buckets[(y as usize) * self.nx + x as usize] {
                    if self.points[i].dist2(p) <= r2 {
                        out.push(i);
                    }
                }
            }
        }
    }
}
