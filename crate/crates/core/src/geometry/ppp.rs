use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::Point2;
use crate::real::Real;

fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let n: f64 = Poisson::new(mean).expect("positive Poisson mean").sample(rng);
    n as usize
}

/// Homogeneous PPP of intensity `lambda` on the disc of radius
/// `window_radius` centred at the origin.
pub fn sample_ppp<T: Real, R: Rng + ?Sized>(rng: &mut R, lambda: T, window_radius: T) -> Vec<Point2<T>> {
    sample_ppp_annulus(rng, lambda, Point2::origin(), T::zero(), window_radius)
}

/// Homogeneous PPP of intensity `lambda` on the annulus
/// `inner <= |x - center| < outer`.
pub fn sample_ppp_annulus<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    lambda: T,
    center: Point2<T>,
    inner: T,
    outer: T,
) -> Vec<Point2<T>> {
    let (r0, r1) = (inner * inner, outer * outer);
    let mean = (lambda * T::PI() * (r1 - r0)).as_f64();
    let n = poisson_count(rng, mean);
    (0..n)
        .map(|_| {
            let r = (r0 + (r1 - r0) * T::unit(rng)).sqrt();
            center + Point2::polar(r, T::TAU() * T::unit(rng))
        })
        .collect()
}

/// Rayleigh draw with scale `sigma`.
pub fn sample_rayleigh<T: Real, R: Rng + ?Sized>(rng: &mut R, sigma: T) -> T {
    // 1 - U lies in (0, 1], keeping the log finite
    let u = T::one() - T::unit(rng);
    sigma * (-T::lit(2.0) * u.ln()).sqrt()
}

/// Scale of the nearest-BS distance law in a PPP of intensity `lambda`:
/// `1 / sqrt(2 pi lambda)`.
pub fn nearest_distance_scale<T: Real>(lambda: T) -> T {
    (T::lit(2.0) * T::PI() * lambda).sqrt().recip()
}

pub fn rayleigh_cdf(x: f64, sigma: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        1.0 - (-x * x / (2.0 * sigma * sigma)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::Summary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn count_is_poisson_with_disc_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let counts: Vec<f64> = (0..10_000)
            .map(|_| sample_ppp(&mut rng, 4.0, 5.0).len() as f64)
            .collect();
        let s = Summary::of(counts.iter().copied());
        let mean = 100.0 * std::f64::consts::PI;
        // sd of the sample mean is sqrt(314/1e4) ~ 0.18
        assert!((s.mean - mean).abs() < 3.0 * (mean / 1e4).sqrt(), "mean {}", s.mean);
        let var = s.std_dev * s.std_dev;
        // equidispersion; sd of the sample variance ~ mean*sqrt(2/n) ~ 4.4
        assert!((var - s.mean).abs() < 4.0 * mean * (2.0f64 / 1e4).sqrt(), "var {var}");
    }

    #[test]
    fn points_lie_in_window_and_are_reproducible() {
        let a = sample_ppp(&mut ChaCha8Rng::seed_from_u64(4), 2.0, 3.0);
        let b = sample_ppp(&mut ChaCha8Rng::seed_from_u64(4), 2.0, 3.0);
        assert_eq!(a, b);
        assert!(a.iter().all(|p: &Point2<f64>| p.norm() < 3.0));
    }

    #[test]
    fn annulus_excludes_inner_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let c = Point2::new(0.3, -0.2);
        for _ in 0..100 {
            let pts = sample_ppp_annulus(&mut rng, 3.0, c, 0.7, 4.0);
            assert!(pts.iter().all(|p| { let d = p.dist(c); (0.7..4.0).contains(&d) }));
        }
    }

    #[test]
    fn rayleigh_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sigma = nearest_distance_scale(4.0f64);
        let s = Summary::of((0..100_000).map(|_| sample_rayleigh(&mut rng, sigma)));
        // sigma * sqrt(pi/2) = 1/(2 sqrt(lambda)) = 0.25
        assert!((s.mean - 0.25).abs() < 0.0025);
    }
}
