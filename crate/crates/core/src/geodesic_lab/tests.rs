use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exec::Exec;
use crate::ph_calculus::ScalarField;
use crate::sphere_model::{contact_form, horizontal_frame};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn random_state(n: usize, seed: u64, b: f64) -> GeodesicState {
    let mut r = rng(seed);
    let p = SpherePoint::random(n, &mut r);
    let v = TangentVector::random_unit_horizontal(&p, &mut r);
    GeodesicState::new(p, v, b).unwrap()
}

#[test]
fn great_circle_examples() {
    let x0 = SpherePoint::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    let v = TangentVector::horizontal(&x0, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    let end = great_circle(&v, FRAC_PI_2).unwrap();
    assert!(dist(end.coords(), &[0.0, 1.0, 0.0, 0.0]) < 1e-15);
    assert_eq!(great_circle(&v, 0.0).unwrap(), x0);
    let vertical = TangentVector::new(&x0, vec![0.0, 0.0, 1.0, 0.0]).unwrap();
    assert!(matches!(great_circle(&vertical, 1.0), Err(Error::NotHorizontal { .. })));
}

#[test]
fn great_circle_stays_lengthy() {
    let mut r = rng(3);
    for _ in 0..10 {
        let p = SpherePoint::random(2, &mut r);
        let v = TangentVector::random_unit_horizontal(&p, &mut r);
        for k in 0..20 {
            let s = 0.3 * k as f64;
            let x = great_circle(&v, s).unwrap();
            let vel = axpy(s.cos(), v.vec(), &scaled(-s.sin(), p.coords()));
            assert!(contact_form(&x, &vel).unwrap().abs() < 1e-12);
        }
    }
}

#[test]
fn connection_geodesic_with_zero_multiplier_is_a_great_circle() {
    for seed in 0..3 {
        let init = random_state(1, seed, 0.0);
        let trace = integrate_connection_geodesic(&init, TAU, 1e-3).unwrap();
        let expected = great_circle(init.v(), TAU).unwrap();
        assert!(dist(trace.end().point.coords(), expected.coords()) < 1e-6);
        assert!((trace.end().s - TAU).abs() < 1e-12);
    }
}

#[test]
fn connection_geodesic_conserves_speed_and_lengthiness() {
    for (seed, b) in [(1, 0.7), (2, -1.9), (5, 3.0)] {
        let init = random_state(1 + seed as usize % 2, seed, b);
        let trace = integrate_connection_geodesic(&init, TAU, 1e-3).unwrap();
        assert!(trace.diagnostics.max_theta < 1e-7, "{:?}", trace.diagnostics);
        assert!(trace.diagnostics.max_speed_drift < 1e-7, "{:?}", trace.diagnostics);
        assert!(trace.samples.iter().all(|s| s.b == b));
    }
}

#[test]
fn connection_geodesic_matches_closed_form() {
    for (seed, b) in [(11, 0.4), (12, -2.5)] {
        let mut init = random_state(2, seed, b);
        init = GeodesicState::new(init.x().clone(), init.v().scale(1.7), b).unwrap();
        let trace = integrate_connection_geodesic(&init, 3.0, 1e-3).unwrap();
        for s in [&trace.samples[700], trace.end()] {
            let (pos, vel) = closed_form_state(init.x().coords(), init.v().vec(), b, s.s);
            assert!(dist(&pos, s.point.coords()) < 1e-8);
            assert!(dist(&vel, &s.velocity) < 1e-8);
        }
    }
}

#[test]
fn integrator_rejects_bad_input() {
    let init = random_state(1, 4, 0.0);
    assert!(matches!(integrate_connection_geodesic(&init, 1.0, 0.0), Err(Error::InvalidStep(_))));
    assert!(matches!(integrate_connection_geodesic(&init, 1.0, 0.05), Err(Error::InvalidStep(_))));
    let p = init.x().clone();
    let t = TangentVector::new(&p, times_i(p.coords())).unwrap();
    assert!(matches!(GeodesicState::new(p, t, 0.0), Err(Error::NotHorizontal { .. })));
}

#[test]
fn canonical_lift_pairings() {
    let mut r = rng(8);
    for n in 1..=2 {
        let p = SpherePoint::random(n, &mut r);
        let frame = horizontal_frame(&p).unwrap();
        let lift = canonical_lift(&frame.vectors()[0]).unwrap();
        assert!((lift.reeb_pairing() - 1.0).abs() < 1e-12);
        assert!((lift.pair(frame.vectors()[0].vec()) - 1.0).abs() < 1e-12);
        assert!(lift.pair(frame.vectors()[1].vec()).abs() < 1e-12);

        let zero = canonical_lift(&TangentVector::zero(&p)).unwrap();
        assert!((zero.reeb_pairing() - 1.0).abs() < 1e-12);
        assert!(frame.vectors().iter().all(|x| zero.pair(x.vec()).abs() < 1e-12));

        let v = TangentVector::random_unit_horizontal(&p, &mut r);
        let lift = canonical_lift(&v).unwrap();
        let ambient = lift.velocity();
        assert!(dist(&ambient, v.vec()) < 1e-9);
        let u_dot = lift.cometric_image();
        let u = lift.chart.coordinates(&p).unwrap();
        let shifted = lift.chart.point(&axpy(1e-6, &u_dot, &u)).unwrap();
        let fd: Vec<f64> = shifted.coords().iter().zip(p.coords()).map(|(a, b)| (a - b) / 1e-6).collect();
        assert!(dist(&fd, v.vec()) < 1e-5);
    }
}

#[test]
fn hamiltonian_gradient_matches_finite_differences() {
    let init = random_state(1, 21, 0.0);
    let state = cotangent_lift(init.v(), 0.8).unwrap();
    let g = state.hamiltonian_gradient();
    for (j, gj) in g.iter().enumerate() {
        let h = 1e-6;
        let mut plus = state.clone();
        let mut minus = state.clone();
        plus.x[j] += h;
        minus.x[j] -= h;
        let fd = (plus.hamiltonian() - minus.hamiltonian()) / (2.0 * h);
        assert!((fd - gj).abs() < 1e-7);
    }
}

#[test]
fn chart_switch_preserves_the_covector() {
    let init = random_state(2, 22, 0.0);
    let state = cotangent_lift(init.v(), -1.3).unwrap();
    let other = state.switch_chart().unwrap();
    assert_ne!(other.chart, state.chart);
    assert!(dist(other.point().unwrap().coords(), state.point().unwrap().coords()) < 1e-12);
    assert!((other.hamiltonian() - state.hamiltonian()).abs() < 1e-12);
    assert!((other.reeb_pairing() - state.reeb_pairing()).abs() < 1e-12);
}

#[test]
fn hamiltonian_flow_matches_connection_geodesics() {
    for seed in 0..6u64 {
        let n = 1 + seed as usize % 2;
        let b = [1.0, 0.0, -0.6, 2.2, 1.0, -3.0][seed as usize];
        let init = random_state(n, 100 + seed, b);
        let lift = cotangent_lift(init.v(), b).unwrap();
        let hj = integrate_hj_geodesic(&lift, 1.0, 1e-3).unwrap();
        let cn = integrate_connection_geodesic(&init, 1.0, 1e-3).unwrap();
        let worst = hj
            .samples
            .iter()
            .zip(&cn.samples)
            .map(|(a, c)| dist(a.point.coords(), c.point.coords()))
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "seed {seed}: {worst}");
        assert!(hj.diagnostics.hamiltonian_drift.unwrap() < 1e-7);
        assert!(hj.diagnostics.max_theta < 1e-9);
        assert!(hj.samples.iter().all(|s| (s.b - b).abs() < 1e-8));
    }
}

#[test]
fn hamiltonian_flow_crosses_charts() {
    let p = SpherePoint::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
    let v = TangentVector::horizontal(&p, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    let init = GeodesicState::new(p, v.clone(), 0.2).unwrap();
    let lift = cotangent_lift(&v, 0.2).unwrap();
    let hj = integrate_hj_geodesic(&lift, 5.0, 1e-3).unwrap();
    assert!(hj.diagnostics.chart_switches >= 1);
    let end = closed_form_geodesic(&init, 5.0).unwrap();
    assert!(dist(hj.end().point.coords(), end.coords()) < 1e-6);
}

#[test]
fn doubling_the_covector_halves_the_time() {
    let init = random_state(1, 31, 0.0);
    let lift = cotangent_lift(init.v(), 0.9).unwrap();
    let double = CotangentState::new(lift.chart, lift.x.clone(), lift.xi.iter().map(|c| 2.0 * c).collect()).unwrap();
    let slow = integrate_hj_geodesic(&lift, 1.0, 1e-3).unwrap();
    let fast = integrate_hj_geodesic(&double, 0.5, 1e-3).unwrap();
    assert!(dist(slow.end().point.coords(), fast.end().point.coords()) < 1e-6);
}

#[test]
fn hamiltonian_flow_requires_positive_energy() {
    let p = SpherePoint::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
    let lift = cotangent_lift(&TangentVector::zero(&p), 1.0).unwrap();
    assert!(matches!(integrate_hj_geodesic(&lift, 1.0, 1e-3), Err(Error::InvalidParameter(_))));
}

#[test]
fn shooting_recovers_horizontal_great_circle_arcs() {
    let mut r = rng(41);
    for t in [0.3, 1.0, FRAC_PI_2] {
        let p = SpherePoint::random(1, &mut r);
        let v = TangentVector::random_unit_horizontal(&p, &mut r);
        let y = great_circle(&v, t).unwrap();
        let est = cc_distance(&p, &y, &ShootingBudget::default(), Exec::default()).unwrap();
        assert!(est.converged);
        assert!((est.estimate - t).abs() < 1e-4, "t = {t}: {}", est.estimate);
        let cert = est.certificate_trace(50).unwrap();
        assert!(dist(cert.end().point.coords(), y.coords()) < 1e-5);
    }
}

#[test]
fn shooting_respects_the_contraction_inequality() {
    let mut r = rng(42);
    let budget = ShootingBudget::default();
    let mut converged = 0;
    for _ in 0..10 {
        let x = SpherePoint::random(1, &mut r);
        let y = SpherePoint::random(1, &mut r);
        let est = cc_distance(&x, &y, &budget, Exec::default()).unwrap();
        assert!(riemannian_distance(&x, &y) <= est.estimate + 1e-6);
        converged += est.converged as usize;
    }
    assert!(converged >= 9);
    let x = SpherePoint::random(1, &mut r);
    assert_eq!(cc_distance(&x, &x, &budget, Exec::default()).unwrap().estimate, 0.0);
}

#[test]
fn shooting_is_independent_of_the_execution_strategy() {
    let mut r = rng(43);
    let x = SpherePoint::random(1, &mut r);
    let y = SpherePoint::random(1, &mut r);
    let budget = ShootingBudget::default();
    let a = cc_distance(&x, &y, &budget, Exec::Sequential).unwrap();
    let b = cc_distance(&x, &y, &budget, Exec::Parallel).unwrap();
    assert_eq!(a.estimate, b.estimate);
}

#[test]
fn exp_map_examples() {
    let mut r = rng(44);
    let p = SpherePoint::random(1, &mut r);
    assert_eq!(exp_map(&TangentVector::zero(&p)).unwrap(), p);
    let w = TangentVector::random_unit_horizontal(&p, &mut r).scale(0.8);
    let y = exp_map(&w).unwrap();
    let est = cc_distance(&p, &y, &ShootingBudget::default(), Exec::default()).unwrap();
    assert!(est.estimate <= w.norm() + 1e-6);
}

#[test]
fn equality_case_cosine_fit() {
    let f = s3_quadratic(0.0, 1.0).unwrap();
    let x0 = SpherePoint::new(vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]).unwrap();
    let v = TangentVector::horizontal(&x0, vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0, 0.0]).unwrap();
    let init = GeodesicState::new(x0, v, 0.0).unwrap();
    let trace = integrate_connection_geodesic(&init, PI, 1e-3).unwrap();
    for s in trace.samples.iter().step_by(97) {
        assert!((f.eval(&s.point).unwrap() - (2.0 * s.s).cos()).abs() < 1e-9);
    }
    let fit = eigen_along_geodesic(&f, &trace).unwrap();
    assert!((fit.amplitude - 1.0).abs() < 1e-9);
    assert!((fit.frequency - 2.0).abs() < 1e-9);
    assert!(fit.residual < 1e-9);
}

#[test]
fn cosine_fit_recovers_the_maximum() {
    let mut r = rng(45);
    for _ in 0..5 {
        let (a, b) = (r.gen_range(-2.0..2.0), r.gen_range(0.2..2.0));
        let f = s3_quadratic(a, b).unwrap();
        let x0 = max_point(a, b).unwrap();
        let v = TangentVector::random_unit_horizontal(&x0, &mut r);
        let init = GeodesicState::new(x0, v, 0.0).unwrap();
        let trace = integrate_connection_geodesic(&init, 2.0, 1e-3).unwrap();
        let fit = eigen_along_geodesic(&f, &trace).unwrap();
        assert!((fit.amplitude - f64::hypot(a, b)).abs() < 1e-8);
        assert!((fit.frequency - 2.0).abs() < 1e-8);
    }
}

#[test]
fn cosine_fit_rejects_constant_fields() {
    let init = random_state(1, 46, 0.0);
    let trace = integrate_connection_geodesic(&init, 1.0, 1e-2).unwrap();
    let f = ScalarField::constant(1, 3);
    assert!(matches!(eigen_along_geodesic(&f, &trace), Err(Error::DegenerateFit(_))));
}

#[test]
fn reach_set_for_the_model_case() {
    let set = reach_set_mpi2(0.0, 1.0, 16).unwrap();
    assert!((set.alpha - 1.0).abs() < 1e-15);
    assert_eq!(set.resolved_order(1e-8), Some(TupleOrder::ComplexPairs));
    for p in &set.points {
        let c = p.point.coords();
        let (lambda, mu) = (c[0], c[2]);
        assert!((c[1] + lambda).abs() < 1e-8 && (c[3] + mu).abs() < 1e-8);
        assert!((lambda * lambda + mu * mu - 0.5).abs() < 1e-8);
    }
    assert!(set.max_value_error() < 1e-9);
    assert!(set.max_gradient_norm() < 1e-9);
    assert!(set.max_hessian_tt() < 1e-9);
    assert!(matches!(reach_set_mpi2(1.0, 0.0, 4), Err(Error::InvalidParameter(_))));
}

#[test]
fn reach_set_for_random_coefficients() {
    let mut r = rng(47);
    for _ in 0..5 {
        let (a, b) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let set = reach_set_mpi2(a, b, 12).unwrap();
        assert_eq!(set.resolved_order(1e-8), Some(TupleOrder::ComplexPairs));
        assert!(set.max_value_error() < 1e-9);
        assert!(set.max_gradient_norm() < 1e-9);
        let w = horizontal_frame(&set.x0).unwrap().vectors()[0].scale(FRAC_PI_2);
        let landed = exp_map(&w).unwrap();
        assert!(TupleOrder::ALL.iter().any(|o| reach_set_residual(&landed, a, b, *o) < 1e-8));
    }
}

#[test]
fn trace_csv_has_the_documented_columns() {
    let init = random_state(1, 48, 0.5);
    let trace = integrate_connection_geodesic(&init, 0.05, 1e-2).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "s,x_1,x_2,x_3,x_4,v_1,v_2,v_3,v_4,b,theta_vdot,speed");
    assert_eq!(lines.count(), trace.len());
}
