//! The equality case on `S³`: `f = a(|z₁|² − |z₂|²) + 2b Re(z₁ z̄₂)` restricted to the sphere.

use std::f64::consts::FRAC_PI_2;

use num_rational::BigRational;
use serde::Serialize;

use super::{great_circle, GeodesicTrace};
use crate::error::{Error, Result};
use crate::ph_calculus::{sphere_gradient, tw_hessian, ScalarField};
use crate::poly_engine::{Monomial, RationalPolynomial};
use crate::sphere_model::{horizontal_frame, SpherePoint};

/// `a(x₁² + y₁² − x₂² − y₂²) + 2b(x₁x₂ + y₁y₂)` on `S³`, with coordinates ordered
/// `(x₁, x₂, y₁, y₂)`.
pub fn s3_quadratic(a: f64, b: f64) -> Result<ScalarField> {
    let exact = |c: f64| {
        BigRational::from_float(c).ok_or_else(|| Error::InvalidParameter(format!("coefficient {c} is not finite")))
    };
    let (ra, rb) = (exact(a)?, exact(b)?);
    let two_b = &rb + &rb;
    let terms = [
        (Monomial::from_exponents(&[2, 0, 0, 0]), ra.clone()),
        (Monomial::from_exponents(&[0, 0, 2, 0]), ra.clone()),
        (Monomial::from_exponents(&[0, 2, 0, 0]), -ra.clone()),
        (Monomial::from_exponents(&[0, 0, 0, 2]), -ra),
        (Monomial::from_exponents(&[1, 1, 0, 0]), two_b.clone()),
        (Monomial::from_exponents(&[0, 0, 1, 1]), two_b),
    ];
    ScalarField::new(1, RationalPolynomial::from_terms(4, terms))
}

/// A point where [`s3_quadratic`] attains its maximum `α = √(a² + b²)`.
pub fn max_point(a: f64, b: f64) -> Result<SpherePoint> {
    if b == 0.0 {
        return SpherePoint::new(if a >= 0.0 { vec![1.0, 0.0, 0.0, 0.0] } else { vec![0.0, 1.0, 0.0, 0.0] });
    }
    let alpha = a.hypot(b);
    let ratio = (alpha - a) / b;
    let xi = 1.0 / (1.0 + ratio * ratio).sqrt();
    SpherePoint::normalize(&[xi, ratio * xi, 0.0, 0.0])
}

/// Least-squares fit of `A cos(ωs)` to a field sampled along a trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CosineFit {
    pub amplitude: f64,
    pub frequency: f64,
    /// Largest pointwise deviation between the samples and the fitted curve.
    pub residual: f64,
}

const FREQUENCY_GRID: usize = 2000;
const MAX_FREQUENCY: f64 = 10.0;

fn best_amplitude(s: &[f64], y: &[f64], omega: f64) -> (f64, f64) {
    let (mut cy, mut cc) = (0.0, 0.0);
    for (si, yi) in s.iter().zip(y) {
        let c = (omega * si).cos();
        cy += c * yi;
        cc += c * c;
    }
    let amp = if cc > 0.0 { cy / cc } else { 0.0 };
    let sse = s.iter().zip(y).map(|(si, yi)| (amp * (omega * si).cos() - yi).powi(2)).sum();
    (amp, sse)
}

/// Fits `f(γ(s)) ≈ A cos(ωs)` by a frequency grid search followed by Gauss–Newton.
pub fn eigen_along_geodesic(f: &ScalarField, trace: &GeodesicTrace) -> Result<CosineFit> {
    let s: Vec<f64> = trace.samples.iter().map(|p| p.s).collect();
    let y = trace.samples.iter().map(|p| f.eval(&p.point)).collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
    if y.len() < 3 || !(hi - lo > 1e-12) {
        return Err(Error::DegenerateFit("field is constant along the trace".into()));
    }
    let (mut omega, mut amp, mut best) = (0.0, 0.0, f64::INFINITY);
    for k in 1..=FREQUENCY_GRID {
        let w = MAX_FREQUENCY * k as f64 / FREQUENCY_GRID as f64;
        let (a, sse) = best_amplitude(&s, &y, w);
        if sse < best {
            (omega, amp, best) = (w, a, sse);
        }
    }
    for _ in 0..50 {
        let (mut jtj, mut jtr) = ([[0.0; 2]; 2], [0.0; 2]);
        for (si, yi) in s.iter().zip(&y) {
            let (sn, cs) = (omega * si).sin_cos();
            let r = amp * cs - yi;
            let g = [cs, -amp * si * sn];
            for i in 0..2 {
                jtr[i] += g[i] * r;
                for j in 0..2 {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let da = -(jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        let dw = -(jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det;
        amp += da;
        omega += dw;
        if da.abs() + dw.abs() < 1e-15 {
            break;
        }
    }
    let residual = s.iter().zip(&y).map(|(si, yi)| (amp * (omega * si).cos() - yi).abs()).fold(0.0, f64::max);
    Ok(CosineFit { amplitude: amp, frequency: omega, residual })
}

/// Orderings of the ambient coordinates used to read a 4-tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TupleOrder {
    /// `(x¹, y¹, x², y²)`.
    ComplexPairs,
    /// `(x¹, x², y¹, y²)`.
    RealThenImaginary,
}

impl TupleOrder {
    pub const ALL: [TupleOrder; 2] = [TupleOrder::ComplexPairs, TupleOrder::RealThenImaginary];

    fn read(self, p: &[f64]) -> [f64; 4] {
        match self {
            TupleOrder::ComplexPairs => [p[0], p[2], p[1], p[3]],
            TupleOrder::RealThenImaginary => [p[0], p[1], p[2], p[3]],
        }
    }
}

/// Deviation of `p` from `{(λ, μ, −bλ/(α−a), −bμ/(α−a)) : λ² + μ² = (α−a)/(2α)}` when
/// read in the given coordinate order.
pub fn reach_set_residual(p: &SpherePoint, a: f64, b: f64, order: TupleOrder) -> f64 {
    let alpha = a.hypot(b);
    let [lambda, mu, third, fourth] = order.read(p.coords());
    let slope = b / (alpha - a);
    let radius = (alpha - a) / (2.0 * alpha);
    (third + slope * lambda)
        .abs()
        .max((fourth + slope * mu).abs())
        .max((lambda * lambda + mu * mu - radius).abs())
}

#[derive(Clone, Debug)]
pub struct ReachPoint {
    pub point: SpherePoint,
    pub value: f64,
    /// `|∇f|` for the round metric.
    pub gradient_norm: f64,
    /// `(∇²f)(T, T)`.
    pub hessian_tt: f64,
    /// Membership residual for each entry of [`TupleOrder::ALL`].
    pub residuals: [f64; 2],
}

#[derive(Clone, Debug)]
pub struct ReachSet {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub x0: SpherePoint,
    pub points: Vec<ReachPoint>,
}

impl ReachSet {
    /// The first coordinate order under which every point is a member within `tol`.
    pub fn resolved_order(&self, tol: f64) -> Option<TupleOrder> {
        TupleOrder::ALL
            .iter()
            .enumerate()
            .find(|(i, _)| self.points.iter().all(|p| p.residuals[*i] < tol))
            .map(|(_, o)| *o)
    }

    pub fn max_membership_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residuals[0].min(p.residuals[1])).fold(0.0, f64::max)
    }

    pub fn max_value_error(&self) -> f64 {
        self.points.iter().map(|p| (p.value + self.alpha).abs()).fold(0.0, f64::max)
    }

    pub fn max_gradient_norm(&self) -> f64 {
        self.points.iter().map(|p| p.gradient_norm).fold(0.0, f64::max)
    }

    pub fn max_hessian_tt(&self) -> f64 {
        self.points.iter().map(|p| p.hessian_tt.abs()).fold(0.0, f64::max)
    }
}

/// The points `γ(π/2)` reached by unit-speed `b = 0` geodesics leaving a maximum point
/// of [`s3_quadratic`] in `samples` evenly spaced horizontal directions.
pub fn reach_set_mpi2(a: f64, b: f64, samples: usize) -> Result<ReachSet> {
    if b == 0.0 || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("reach set needs b != 0, got {b}")));
    }
    let f = s3_quadratic(a, b)?;
    let x0 = max_point(a, b)?;
    let frame = horizontal_frame(&x0)?;
    let points = (0..samples)
        .map(|k| {
            let phi = std::f64::consts::TAU * k as f64 / samples as f64;
            let v = frame.combine(&[phi.cos(), phi.sin()]);
            let point = great_circle(&v, FRAC_PI_2)?;
            let residuals = TupleOrder::ALL.map(|o| reach_set_residual(&point, a, b, o));
            Ok(ReachPoint {
                value: f.eval(&point)?,
                gradient_norm: sphere_gradient(&f, &point)?.norm(),
                hessian_tt: tw_hessian(&f, &point)?.tt(),
                residuals,
                point,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReachSet { a, b, alpha: a.hypot(b), x0, points })
}
