use super::*;
use crate::exec::Exec;
use crate::poly_engine::harmonic_basis;
use crate::sphere_model::{axpy, reeb};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hom(n: usize, terms: &[(i64, &[u8])]) -> ScalarField {
    let h = HomogeneousPolynomial::from_int_terms(ambient_dim(n), terms).unwrap();
    ScalarField::from_homogeneous(n, &h).unwrap()
}

fn pt(c: &[f64]) -> SpherePoint {
    SpherePoint::new(c.to_vec()).unwrap()
}

fn harmonic_bases(n: usize, max_degree: u32) -> Vec<SubspaceBasis> {
    (1..=max_degree).map(|l| harmonic_basis(n, l, Exec::Sequential)).collect()
}

/// Central difference of `g` along the great circle through `p` with velocity `v`.
fn along_circle(p: &SpherePoint, v: &[f64], g: impl Fn(&SpherePoint) -> f64) -> f64 {
    let h = 1e-5;
    let r = sphere_model::norm(v);
    let step = |s: f64| {
        let c: Vec<f64> = p.coords().iter().zip(v).map(|(a, b)| a * (s * r).cos() + b / r * (s * r).sin()).collect();
        SpherePoint::normalize(&c).unwrap()
    };
    (g(&step(h)) - g(&step(-h))) / (2.0 * h)
}

#[test]
fn reeb_derivative_examples() {
    let f = hom(1, &[(1, &[1, 0, 0, 0])]);
    assert_eq!(reeb_derivative(&f, &pt(&[0.0, 0.0, 1.0, 0.0])).unwrap(), -1.0);
    let c = ScalarField::constant(1, 5);
    let p = pt(&[0.6, 0.0, 0.8, 0.0]);
    assert_eq!(reeb_derivative(&c, &p).unwrap(), 0.0);
    assert!(horizontal_gradient(&c, &p).unwrap().vec().iter().all(|v| *v == 0.0));
}

#[test]
fn horizontal_gradient_represents_derivatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bases = harmonic_bases(1, 3);
    for _ in 0..30 {
        let f = ScalarField::random_combination(1, &bases, &mut rng);
        let p = SpherePoint::random(1, &mut rng);
        let g = horizontal_gradient(&f, &p).unwrap();
        let x = TangentVector::random_horizontal(&p, &mut rng);
        let xf = along_circle(&p, x.vec(), |q| f.eval(q).unwrap());
        assert!((levi_form(&g, &x).unwrap() - xf).abs() < 1e-6);
        assert!(webster_metric_t(&g).abs() < 1e-12);
    }
}

fn webster_metric_t(v: &TangentVector) -> f64 {
    sphere_model::webster_metric(v, &reeb(v.base())).unwrap()
}

#[test]
fn greenleaf_eigenvalues_on_s3() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cases: [(ScalarField, f64); 3] = [
        (hom(1, &[(1, &[1, 0, 0, 0])]), -2.0),
        (hom(1, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]), -8.0),
        (hom(1, &[(1, &[2, 0, 0, 0]), (-1, &[0, 0, 2, 0])]), -4.0),
    ];
    for (f, mu) in &cases {
        for _ in 0..10 {
            let p = SpherePoint::random(1, &mut rng);
            let lhs = sublaplacian_greenleaf(f, &p).unwrap();
            assert!((lhs - mu * f.eval(&p).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn frame_route_matches_greenleaf() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=2 {
        let bases = harmonic_bases(n, 3);
        for _ in 0..50 {
            let f = ScalarField::random_combination(n, &bases, &mut rng);
            let p = SpherePoint::random(n, &mut rng);
            let a = sublaplacian_frame(&f, &p).unwrap();
            let b = sublaplacian_greenleaf(&f, &p).unwrap();
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }
    let p = SpherePoint::random(1, &mut rng);
    assert!(sublaplacian_frame(&ScalarField::constant(1, 3), &p).unwrap().abs() < 1e-15);
}

#[test]
fn sublaplacian_leibniz_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let bases = harmonic_bases(1, 2);
    for _ in 0..20 {
        let f = ScalarField::random_combination(1, &bases, &mut rng);
        let g = ScalarField::random_combination(1, &bases, &mut rng);
        let fg = f.product(&g).unwrap();
        let p = SpherePoint::random(1, &mut rng);
        let lhs = sublaplacian_frame(&fg, &p).unwrap()
            - f.eval(&p).unwrap() * sublaplacian_frame(&g, &p).unwrap()
            - g.eval(&p).unwrap() * sublaplacian_frame(&f, &p).unwrap();
        let rhs =
            2.0 * levi_form(&horizontal_gradient(&f, &p).unwrap(), &horizontal_gradient(&g, &p).unwrap()).unwrap();
        assert!((lhs - rhs).abs() < 1e-8);
    }
}

#[test]
fn reeb_field_is_parallel() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let ctx = Exact::new(1);
    let t = field::reeb(&ctx);
    for _ in 0..20 {
        let p = SpherePoint::random(1, &mut rng);
        let x = TangentVector::random_horizontal(&p, &mut rng);
        let d = tanaka_webster_derivative(&x, &t).unwrap();
        assert!(d.norm() < 1e-12);
    }
}

#[test]
fn metric_compatibility_against_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 1..=2 {
        for _ in 0..20 {
            let p = SpherePoint::random(n, &mut rng);
            let y = random_tangent_field(n, &mut rng);
            let z = random_tangent_field(n, &mut rng);
            let raw: Vec<f64> = (0..ambient_dim(n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = TangentVector::new(&p, axpy(-dot(&raw, p.coords()), p.coords(), &raw)).unwrap();
            let yf: Vec<Polynomial<f64>> = y.iter().map(|c| c.to_f64()).collect();
            let zf: Vec<Polynomial<f64>> = z.iter().map(|c| c.to_f64()).collect();
            let gyz = |q: &SpherePoint| {
                yf.iter().zip(&zf).map(|(a, b)| a.eval(q.coords()) * b.eval(q.coords())).sum::<f64>()
            };
            let lhs = along_circle(&p, x.vec(), gyz);
            let at = |v: &[Polynomial<f64>]| v.iter().map(|c| c.eval(p.coords())).collect::<Vec<_>>();
            let rhs = dot(tanaka_webster_derivative(&x, &y).unwrap().vec(), &at(&zf))
                + dot(&at(&yf), tanaka_webster_derivative(&x, &z).unwrap().vec());
            assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
        }
    }
}

#[test]
fn connection_axioms_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=2 {
        for _ in 0..30 {
            let p = SpherePoint::random(n, &mut rng);
            let (x, y, z) = (random_tangent_field(n, &mut rng), random_tangent_field(n, &mut rng), random_tangent_field(n, &mut rng));
            let r = connection_residuals(&p, &x, &y, &z).unwrap();
            assert!(r.max() < 1e-9, "{r:?}");
        }
    }
}

#[test]
fn hessian_block_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for n in 1..=2 {
        let bases = harmonic_bases(n, 3);
        for _ in 0..30 {
            let f = ScalarField::random_combination(n, &bases, &mut rng);
            let p = SpherePoint::random(n, &mut rng);
            let h = tw_hessian(&f, &p).unwrap();
            assert!((h.horizontal_trace() - sublaplacian_greenleaf(&f, &p).unwrap()).abs() < 1e-8);
            assert!(h.antisymmetry_residual() < 1e-9);
            let lap = h.horizontal_trace();
            assert!(h.horizontal_norm_sq() >= lap * lap / (2 * n) as f64 - 1e-9);
            let x = TangentVector::random_horizontal(&p, &mut rng);
            let y = TangentVector::random_horizontal(&p, &mut rng);
            assert!(hessian_commutation_residual(&f, &p, &x, &y).unwrap().abs() < 1e-9);
        }
    }
}

#[test]
fn hessian_of_s3_extremal_eigenfunction() {
    let f = hom(1, &[(2, &[1, 1, 0, 0]), (2, &[0, 0, 1, 1])]);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..20 {
        let p = SpherePoint::random(1, &mut rng);
        let h = tw_hessian(&f, &p).unwrap();
        let fv = f.eval(&p).unwrap();
        for (j, row) in h.horizontal().iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let g = if j == k { 1.0 } else { 0.0 };
                assert!((v + 4.0 * fv * g).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn ricci_is_twice_n_plus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (n, k) in [(1usize, 4.0), (2, 6.0), (3, 8.0)] {
        for _ in 0..20 {
            let p = SpherePoint::random(n, &mut rng);
            let x = TangentVector::random_unit_horizontal(&p, &mut rng);
            assert!((ricci(&x).unwrap() - k).abs() < 1e-9);
            assert!((ricci(&x.scale(2.0)).unwrap() - 4.0 * k).abs() < 1e-9);
        }
    }
}

#[test]
fn closed_form_curvature_matches_connection() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=2 {
        for _ in 0..20 {
            let p = SpherePoint::random(n, &mut rng);
            let v: Vec<TangentVector> = (0..3).map(|_| TangentVector::random_horizontal(&p, &mut rng)).collect();
            let a = curvature(&v[0], &v[1], &v[2]).unwrap();
            let b = curvature_from_connection(&v[0], &v[1], &v[2]).unwrap();
            let diff: f64 = a.vec().iter().zip(b.vec()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-9);
        }
    }
}

#[test]
fn operator_l_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let p = SpherePoint::random(1, &mut rng);
    assert_eq!(operator_l(&ScalarField::constant(1, 2), &p).unwrap(), 0.0);
    let kernel = hom(1, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
    assert!(reeb_derivative(&kernel, &p).unwrap().abs() < 1e-15);
    let exact = operator_l_poly(&kernel);
    assert!((exact.eval(&p).unwrap() - operator_l(&kernel, &p).unwrap()).abs() < 1e-12);
}

#[test]
fn lemma2_for_first_coordinate() {
    let f = hom(1, &[(1, &[1, 0, 0, 0])]);
    let check = lemma2_check(&f);
    assert_eq!(check.lhs, -BigRational::one());
    assert_eq!(check.rhs, -BigRational::one());
    let kernel = hom(1, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
    let check = lemma2_check(&kernel);
    assert!(check.rhs.is_zero());
    assert!(check.lhs.is_zero());
}

#[test]
fn lemma1_divergence() {
    let f = hom(1, &[(1, &[1, 0, 0, 0])]);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let p = SpherePoint::random(1, &mut rng);
        assert!((divergence_j_gradient(&f, &p).unwrap() + 2.0 * p.y(0)).abs() < 1e-9);
        assert!(lemma1_residual(&f, &p).unwrap().abs() < 1e-9);
    }
    for n in 1..=2 {
        let bases = harmonic_bases(n, 3);
        for _ in 0..20 {
            let f = ScalarField::random_combination(n, &bases, &mut rng);
            let p = SpherePoint::random(n, &mut rng);
            assert!(lemma1_residual(&f, &p).unwrap().abs() < 1e-9);
        }
    }
}

#[test]
fn bochner_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let p = SpherePoint::random(1, &mut rng);
    assert!(bochner_residual(&ScalarField::constant(1, 1), &p).unwrap().abs() < 1e-15);
    let x1 = hom(1, &[(1, &[1, 0, 0, 0])]);
    for _ in 0..20 {
        let p = SpherePoint::random(1, &mut rng);
        assert!(bochner_residual(&x1, &p).unwrap().abs() < 1e-8);
    }
    let bases = harmonic_bases(2, 3);
    for _ in 0..20 {
        let f = ScalarField::random_combination(2, &bases, &mut rng);
        let p = SpherePoint::random(2, &mut rng);
        let t = bochner_terms(&f, &p).unwrap();
        assert!(t.residual().abs() < 1e-8 * t.lhs.abs().max(1.0), "{t:?}");
    }
}

#[test]
fn third_order_commutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let bases = harmonic_bases(1, 3);
    for _ in 0..30 {
        let f = ScalarField::random_combination(1, &bases, &mut rng);
        let p = SpherePoint::random(1, &mut rng);
        let x = TangentVector::random_horizontal(&p, &mut rng);
        let y = TangentVector::random_horizontal(&p, &mut rng);
        assert!(third_commutation_residual(&f, &p, &x, &x).unwrap().abs() < 1e-12);
        assert!(third_commutation_residual(&f, &p, &x, &y).unwrap().abs() < 1e-8);
    }
    let kernel = hom(1, &[(1, &[2, 0, 0, 0]), (1, &[0, 0, 2, 0]), (-1, &[0, 2, 0, 0]), (-1, &[0, 0, 0, 2])]);
    let p = SpherePoint::random(1, &mut rng);
    let x = TangentVector::random_horizontal(&p, &mut rng);
    let y = TangentVector::random_horizontal(&p, &mut rng);
    assert!(third_commutation_residual(&kernel, &p, &x, &y).unwrap().abs() < 1e-8);
}

#[test]
fn rayleigh_identity_for_kernel_eigenfunction() {
    let f = hom(1, &[(1, &[1, 1, 0, 0]), (1, &[0, 0, 1, 1])]);
    let grad = sphere_integral(horizontal_gradient_norm_sq_poly(&f).poly());
    let sq = sphere_integral(&(f.poly().clone() * f.poly().clone()));
    assert_eq!(grad, sq * BigRational::from_integer(8.into()));
}

#[test]
fn non_horizontal_inputs_rejected() {
    let p = pt(&[1.0, 0.0, 0.0, 0.0]);
    let f = hom(1, &[(1, &[1, 0, 0, 0])]);
    let t = reeb(&p);
    let x = TangentVector::horizontal(&p, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    assert!(matches!(third_commutation_residual(&f, &p, &t, &x), Err(Error::NotHorizontal { .. })));
    assert!(ricci(&t).is_err());
}

proptest! {
    #[test]
    fn matrix_lemma(m in 1usize..6, c in -5.0f64..5.0, seed in any::<u64>(), eps in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let a: Vec<Vec<f64>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { c } else { 0.0 } + eps * noise[i][j]).collect())
            .collect();
        prop_assert!(trace_defect(&a) >= -1e-9);
        let scalar: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| if i == j { c } else { 0.0 }).collect()).collect();
        prop_assert!(trace_defect(&scalar).abs() < 1e-9);
        prop_assert!(scalar_deviation(&scalar) < 1e-12);
        if scalar_deviation(&a) > 1e-3 {
            prop_assert!(trace_defect(&a) > 0.0);
        }
    }

    #[test]
    fn trace_inequality_pointwise(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases = harmonic_bases(n, 2);
        let f = ScalarField::random_combination(n, &bases, &mut rng);
        let p = SpherePoint::random(n, &mut rng);
        let h = tw_hessian(&f, &p).unwrap();
        let lap = h.horizontal_trace();
        prop_assert!(h.horizontal_norm_sq() >= lap * lap / (2 * n) as f64 - 1e-9);
    }

    #[test]
    fn j_is_parallel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SpherePoint::random(1, &mut rng);
        let (x, y, z) = (random_tangent_field(1, &mut rng), random_tangent_field(1, &mut rng), random_tangent_field(1, &mut rng));
        let r = connection_residuals(&p, &x, &y, &z).unwrap();
        prop_assert!(r.parallel_j < 1e-9);
    }
}
