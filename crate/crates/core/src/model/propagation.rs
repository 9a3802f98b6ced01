use crate::error::{Error, Result};
use crate::real::Real;

/// Average channel attenuation `omega^-1 * d^-alpha` at distance `d` km.
pub fn pathloss<T: Real>(distance: T, alpha: T, omega: T) -> Result<T> {
    if !(distance > T::zero()) {
        return Err(Error::domain(
            "pathloss",
            format!("distance must be positive, got {distance}"),
        ));
    }
    Ok((omega * distance.powf(alpha)).recip())
}

/// Statistical channel inversion: the symbol energy `rho / beta` that gives
/// every UE the same average received energy `M * rho` at its serving BS.
pub fn channel_inversion_power<T: Real>(beta_serving: T, rho: T) -> Result<T> {
    if !(beta_serving > T::zero()) {
        return Err(Error::domain(
            "channel_inversion_power",
            format!("attenuation must be positive, got {beta_serving}"),
        ));
    }
    Ok(rho / beta_serving)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_distance_gives_inverse_omega() {
        assert_eq!(pathloss(1.0, 3.76, 1.0).unwrap(), 1.0);
        assert_eq!(pathloss(2.0, 4.0, 1.0).unwrap(), 1.0 / 16.0);
    }

    #[test]
    fn half_km_with_large_omega() {
        // 1e-4 * 2^3.76 evaluated independently
        let expected = 1e-4 * (3.76f64 * std::f64::consts::LN_2).exp();
        let got = pathloss(0.5, 3.76, 1e4).unwrap();
        assert!((got - expected).abs() / expected < 1e-14);
        // quoted reference value, good to about four digits
        assert!((got - 1.3543e-3).abs() / 1.3543e-3 < 1e-3);
    }

    #[test]
    fn non_positive_distance_is_domain_error() {
        assert!(pathloss(0.0, 3.76, 1.0).is_err());
        assert!(pathloss(-1.0f32, 3.76, 1.0).is_err());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(channel_inversion_power(1.0, 1.0).unwrap(), 1.0);
        assert!((channel_inversion_power(1e-6f64, 1.0).unwrap() - 1e6).abs() < 1e-6);
        assert!(channel_inversion_power(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn pathloss_monotone(d in 0.01f64..50.0, step in 1.001f64..3.0, alpha in 2.01f64..6.0, omega in 0.1f64..1e5) {
            let near = pathloss(d, alpha, omega).unwrap();
            prop_assert!(pathloss(d * step, alpha, omega).unwrap() < near);
            prop_assert!(pathloss(d, alpha, omega * step).unwrap() < near);
        }

        #[test]
        fn inverted_power_times_attenuation_is_target(d in 0.01f64..20.0, rho in 0.01f64..100.0) {
            let beta = pathloss(d, 3.76, 1.0).unwrap();
            let p = channel_inversion_power(beta, rho).unwrap();
            prop_assert!((p * beta - rho).abs() <= 4.0 * f64::EPSILON * rho);
        }
    }
}
