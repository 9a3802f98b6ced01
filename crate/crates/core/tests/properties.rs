use mimo_se::analytic::{
    argmax_concave, asymptotic_se, avg_se_lower_bound, avg_sinr_lower_bound, lambert_w, optimal_pilot_length_asymptotic,
    optimize_pilot_length,
};
use mimo_se::{Config, ConfigF32};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = Config> {
    (1usize..400, 1usize..40, 0.05f64..1.0, 2.2f64..5.0, -10.0f64..20.0).prop_map(|(m, k, a, alpha, snr)| {
        let mut c = Config::reference().with_antennas(m).with_activity(a).with_snr_db(snr);
        c.ues_per_cell = k;
        c.alpha = alpha;
        c.pilot_len = 2 * k;
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_depends_on_power_ratio_only(cfg in config(), scale in 0.01f64..100.0, lambda in 0.1f64..10.0) {
        let mut other = cfg;
        other.rho *= scale;
        other.sigma2 *= scale;
        other.lambda = lambda;
        other.omega = scale;
        let (a, b) = (avg_sinr_lower_bound(&cfg).unwrap(), avg_sinr_lower_bound(&other).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn bound_grows_with_antennas_towards_limit(cfg in config()) {
        let se = avg_se_lower_bound(&cfg).unwrap();
        let more = avg_se_lower_bound(&cfg.with_antennas(cfg.antennas + 1)).unwrap();
        let limit = asymptotic_se(&cfg).unwrap();
        prop_assert!(more >= se);
        prop_assert!(se <= limit * (1.0 + 1e-12));
    }

    #[test]
    fn f32_tracks_f64(cfg in config()) {
        let c32 = ConfigF32 {
            antennas: cfg.antennas,
            ues_per_cell: cfg.ues_per_cell,
            activity: cfg.activity as f32,
            pilot_len: cfg.pilot_len,
            block_len: cfg.block_len,
            alpha: cfg.alpha as f32,
            rho: cfg.rho as f32,
            sigma2: cfg.sigma2 as f32,
            lambda: cfg.lambda as f32,
            omega: cfg.omega as f32,
        };
        let (a, b) = (avg_sinr_lower_bound(&cfg).unwrap(), avg_sinr_lower_bound(&c32).unwrap() as f64);
        prop_assert!((a - b).abs() <= 1e-4 * a, "{a} vs {b}");
        let (a, b) = (asymptotic_se(&cfg).unwrap(), asymptotic_se(&c32).unwrap() as f64);
        prop_assert!((a - b).abs() <= 1e-4 * a.max(1e-3), "{a} vs {b}");
    }

    #[test]
    fn lambert_w_f32_matches_f64(x in 0.0f64..1e4) {
        let w64 = lambert_w(x).unwrap();
        let w32 = lambert_w(x as f32).unwrap() as f64;
        prop_assert!((w64 - w32).abs() <= 1e-5 * w64.max(1.0));
    }

    #[test]
    fn concave_search_matches_scan(lo in 0usize..50, len in 0usize..300, peak in -100.0f64..400.0, curv in 1e-4f64..10.0) {
        let hi = lo + len;
        let f = |b: usize| -curv * (b as f64 - peak).powi(2);
        let found = argmax_concave(lo, hi, f);
        let best = (lo..=hi).map(f).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(f(found), best);
    }
}

#[test]
fn pilot_optimum_is_shape_generic() {
    let c64 = Config::reference().with_activity(0.5);
    let c32 = ConfigF32::reference().with_activity(0.5);
    let o64 = optimal_pilot_length_asymptotic(&c64).unwrap();
    let o32 = optimal_pilot_length_asymptotic(&c32).unwrap();
    assert_eq!(o64.integer, 97);
    assert_eq!(o32.integer, 97);
    assert!((o64.continuous - f64::from(o32.continuous)).abs() < 1e-3);
    assert_eq!(optimize_pilot_length(&c64).unwrap(), optimize_pilot_length(&c32).unwrap());
}
