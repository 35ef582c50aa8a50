use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crlab::bounds::{lichnerowicz_bound, lichnerowicz_bound_exact};
use crlab::geodesic_lab::{
    closed_form_geodesic, cotangent_lift, integrate_connection_geodesic, integrate_hj_geodesic, riemannian_distance,
    GeodesicState,
};
use crlab::sphere_model::{contact_form, SpherePoint, TangentVector};
use num_bigint::BigInt;
use num_rational::BigRational;

fn random_state(n: usize, seed: u64, speed: f64, b: f64) -> GeodesicState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = SpherePoint::random(n, &mut rng);
    let v = TangentVector::random_unit_horizontal(&p, &mut rng).scale(speed);
    GeodesicState::new(p, v, b).unwrap()
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn connection_geodesics_stay_horizontal_with_constant_speed(
        n in 1usize..=2, seed in any::<u64>(), speed in 0.2f64..2.0, b in -2.0f64..2.0,
    ) {
        let init = random_state(n, seed, speed, b);
        let trace = integrate_connection_geodesic(&init, 1.0, 1e-3).unwrap();
        for sample in &trace.samples {
            let norm: f64 = sample.point.coords().iter().map(|c| c * c).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
            prop_assert!(contact_form(&sample.point, &sample.velocity).unwrap().abs() < 1e-9);
            prop_assert!((sample.speed() - speed).abs() < 1e-9);
        }
    }

    #[test]
    fn integrator_matches_closed_form(
        n in 1usize..=2, seed in any::<u64>(), speed in 0.2f64..2.0, b in -2.0f64..2.0,
    ) {
        let init = random_state(n, seed, speed, b);
        let trace = integrate_connection_geodesic(&init, 1.0, 1e-3).unwrap();
        let exact = closed_form_geodesic(&init, 1.0).unwrap();
        prop_assert!(distance(trace.end().point.coords(), exact.coords()) < 1e-9);
    }

    #[test]
    fn hamiltonian_flow_projects_to_connection_geodesic(
        seed in any::<u64>(), b in -1.5f64..1.5,
    ) {
        let init = random_state(1, seed, 1.0, b);
        let lift = cotangent_lift(init.v(), b).unwrap();
        let hj = integrate_hj_geodesic(&lift, 1.0, 1e-3).unwrap();
        let exact = closed_form_geodesic(&init, 1.0).unwrap();
        prop_assert!(distance(hj.end().point.coords(), exact.coords()) < 1e-6);
        prop_assert!(hj.diagnostics.hamiltonian_drift.unwrap() < 1e-7);
    }

    #[test]
    fn geodesics_are_no_shorter_than_chords(
        n in 1usize..=2, seed in any::<u64>(), b in -2.0f64..2.0, len in 0.1f64..3.0,
    ) {
        let init = random_state(n, seed, 1.0, b);
        let end = closed_form_geodesic(&init, len).unwrap();
        prop_assert!(riemannian_distance(init.x(), &end) <= len + 1e-12);
    }

    #[test]
    fn bound_is_monotone_in_k(n in 1usize..=3, k in 0.01f64..50.0, dk in 0.0f64..10.0) {
        let lo = lichnerowicz_bound(n, k).unwrap();
        let hi = lichnerowicz_bound(n, k + dk).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(lo > k);
    }

    #[test]
    fn exact_and_float_bounds_agree(n in 1usize..=3, num in 1i64..1000, den in 1i64..100) {
        let exact = lichnerowicz_bound_exact(n, &BigRational::new(BigInt::from(num), BigInt::from(den))).unwrap();
        let float = lichnerowicz_bound(n, num as f64 / den as f64).unwrap();
        let exact = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
        prop_assert!((exact - float).abs() <= 1e-12 * float.abs().max(1.0));
    }
}
