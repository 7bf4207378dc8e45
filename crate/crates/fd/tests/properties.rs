//! Randomized checks of the curve distance used for node classification.

use proptest::prelude::*;
use spiral_core::spiral::fermi_map;
use spiral_core::SpiralSpec;
use spiral_fd::grid::distance_to_curve;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn points_on_the_curve_have_zero_distance(a0 in 0.25f64..2.0, theta in 0.0f64..80.0) {
        let spec = SpiralSpec::pure(a0).unwrap();
        let p = fermi_map(&spec, theta, 0.0);
        prop_assert!(distance_to_curve(&spec, p) <= 1e-9 * (1.0 + theta) * a0);
    }

    #[test]
    fn normal_offsets_bound_the_distance(theta in 7.0f64..80.0, v in 0.05f64..0.95) {
        let spec = SpiralSpec::power_tail(1.0, 0.3, 1.5).unwrap();
        let u = v * std::f64::consts::TAU * 0.9;
        let p = fermi_map(&spec, theta, u);
        let d = distance_to_curve(&spec, p);
        prop_assert!(d <= u + 1e-12);
        prop_assert!(d > 0.0);
    }
}
