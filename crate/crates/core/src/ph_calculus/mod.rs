//! Pseudohermitian calculus on polynomial scalar fields over `S^{2n+1}`.
//!
//! Pointwise quantities are computed from jets of the ambient polynomial at the sample
//! point, with the adapted frame `(T, X_1, …, X_{2n})` extended to horizontal fields
//! `X̃(q) = X − <X,q>q − <X,iq>iq`. Quantities that are integrated over the sphere are
//! produced as exact rational polynomials instead.

pub mod field;
pub mod ring;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly_engine::{
    ambient_dim, sphere_integral, HomogeneousPolynomial, Monomial, Polynomial, RationalPolynomial, SubspaceBasis,
};
use crate::sphere_model::{
    self, dot, horizontal_frame, levi_form, times_i, HorizontalFrame, SpherePoint, TangentVector,
};
use field::Field;
use ring::{Ambient, Exact, Jet, Local, Pointwise};

const ORDER_SECOND: u32 = 2;
const ORDER_THIRD: u32 = 3;

/// The restriction to the sphere of a polynomial in the ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    n: usize,
    poly: RationalPolynomial,
    approx: Polynomial<f64>,
}

impl ScalarField {
    pub fn new(n: usize, poly: RationalPolynomial) -> Result<Self> {
        if poly.num_vars() != ambient_dim(n) {
            return Err(Error::DimensionMismatch { expected: ambient_dim(n), got: poly.num_vars() });
        }
        let approx = poly.to_f64();
        Ok(ScalarField { n, poly, approx })
    }

    pub fn from_homogeneous(n: usize, h: &HomogeneousPolynomial) -> Result<Self> {
        Self::new(n, h.poly().clone())
    }

    /// The field `c` for an integer constant.
    pub fn constant(n: usize, c: i64) -> Self {
        let poly = RationalPolynomial::constant(ambient_dim(n), BigRational::from_integer(BigInt::from(c)));
        Self::new(n, poly).expect("dimension is consistent")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &RationalPolynomial {
        &self.poly
    }

    pub fn eval(&self, p: &SpherePoint) -> Result<f64> {
        self.approx.checked_eval(p.coords())
    }

    fn check(&self, p: &SpherePoint) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: ambient_dim(self.n), got: p.ambient_dim() });
        }
        Ok(())
    }

    fn local(&self, p: &SpherePoint, order: u32) -> Result<(Local, Jet)> {
        self.check(p)?;
        let ctx = Local::new(p.coords(), order);
        let f = ctx.lift(&self.poly);
        Ok((ctx, f))
    }

    /// `f₀ = T(f)` as an exact field.
    pub fn reeb_field(&self) -> ScalarField {
        let ctx = Exact::new(self.n);
        let f0 = field::apply(&ctx, &field::reeb(&ctx), &self.poly);
        Self::new(self.n, f0).expect("dimension is preserved")
    }

    /// A random combination of basis elements with integer coefficients in `[-3, 3]`.
    pub fn random_combination<G: Rng + ?Sized>(n: usize, bases: &[SubspaceBasis], rng: &mut G) -> Self {
        let mut poly = RationalPolynomial::zero(ambient_dim(n));
        for basis in bases {
            for h in basis.elements() {
                let c: i64 = rng.gen_range(-3..=3);
                if c != 0 {
                    poly = poly + h.poly().scale(&BigRational::from_integer(BigInt::from(c)));
                }
            }
        }
        Self::new(n, poly).expect("bases live in the ambient space")
    }

    /// The product of two fields.
    pub fn product(&self, other: &ScalarField) -> Result<ScalarField> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: ambient_dim(self.n), got: ambient_dim(other.n) });
        }
        Self::new(self.n, self.poly.clone() * other.poly.clone())
    }
}

fn constant_field(ctx: &Local, v: &[f64]) -> Field<Jet> {
    v.iter().map(|c| ctx.constant(*c)).collect()
}

/// Horizontal extension `X̃` of a vector at the base point.
fn extend(ctx: &Local, v: &[f64]) -> Field<Jet> {
    field::project_h(ctx, &constant_field(ctx, v))
}

fn values(v: &[Jet]) -> Vec<f64> {
    v.iter().map(Jet::value).collect()
}

fn adapted_fields(ctx: &Local, frame: &HorizontalFrame) -> Vec<Field<Jet>> {
    let mut out = vec![field::reeb(ctx)];
    out.extend(frame.vectors().iter().map(|x| extend(ctx, x.vec())));
    out
}

fn check_horizontal_at(p: &SpherePoint, v: &TangentVector) -> Result<()> {
    if v.base().coords().iter().zip(p.coords()).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::BasePointMismatch);
    }
    if !v.is_horizontal() {
        return Err(Error::NotHorizontal { theta: dot(v.vec(), &times_i(p.coords())) });
    }
    Ok(())
}

/// `f₀(p) = T(f)(p)`.
pub fn reeb_derivative(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    let (ctx, jet) = f.local(p, 1)?;
    Ok(dot(&jet.gradient(), &times_i(ctx.point())))
}

/// `∇^H f` at `p`.
pub fn horizontal_gradient(f: &ScalarField, p: &SpherePoint) -> Result<TangentVector> {
    let (ctx, jet) = f.local(p, 1)?;
    let g = values(&field::horizontal_gradient(&ctx, &jet));
    TangentVector::horizontal(p, g)
}

/// The gradient of `f` for the round metric at `p`.
pub fn sphere_gradient(f: &ScalarField, p: &SpherePoint) -> Result<TangentVector> {
    let (ctx, jet) = f.local(p, 1)?;
    TangentVector::new(p, values(&field::gradient(&ctx, &jet)))
}

/// `Δ_b f` as an exact polynomial, via `Δ_b = Δ − T²` and the harmonic decomposition of
/// each homogeneous piece.
pub fn sublaplacian_greenleaf_poly(f: &ScalarField) -> ScalarField {
    let n = f.n;
    let ctx = Exact::new(n);
    let t = field::reeb(&ctx);
    let mut out = RationalPolynomial::zero(ambient_dim(n));
    for (d, piece) in f.poly.homogeneous_parts() {
        let shift = BigRational::from_integer(BigInt::from(-(d as i64) * (d as i64 + 2 * n as i64)));
        let t2 = field::apply(&ctx, &t, &field::apply(&ctx, &t, &piece));
        out = out + piece.laplacian() + piece.scale(&shift) - t2;
    }
    ScalarField::new(n, out).expect("dimension is preserved")
}

pub fn sublaplacian_greenleaf(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    f.check(p)?;
    sublaplacian_greenleaf_poly(f).eval(p)
}

/// `|∇^H f|²` as an exact polynomial.
pub fn horizontal_gradient_norm_sq_poly(f: &ScalarField) -> ScalarField {
    let ctx = Exact::new(f.n);
    let g = field::horizontal_gradient(&ctx, &f.poly);
    ScalarField::new(f.n, field::dot(&ctx, &g, &g)).expect("dimension is preserved")
}

/// `∇_X Y` for a polynomial vector field `Y` tangent near `X.base()`.
pub fn tanaka_webster_derivative(x: &TangentVector, y: &[RationalPolynomial]) -> Result<TangentVector> {
    let p = x.base();
    if y.len() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: y.len() });
    }
    let ctx = Local::new(p.coords(), 1);
    let yj: Field<Jet> = y.iter().map(|c| ctx.lift(c)).collect();
    let y_at = values(&yj);
    let inner = dot(&y_at, p.coords());
    if inner.abs() > 1e-12 * sphere_model::norm(&y_at).max(1.0) {
        return Err(Error::NotTangent { inner });
    }
    let xj = constant_field(&ctx, x.vec());
    TangentVector::new(p, values(&field::covariant(&ctx, &xj, &yj)))
}

/// The zeroth-order part `Γ_q(X, Y)` of `∇_X Y = D_X Y + Γ_q(X, Y)` at an ambient point `q`.
pub fn connection_term(q: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
    field::covariant(&Pointwise::new(q), x, y)
}

/// `Δ_b f = Σ_j {X_j² f − (∇_{X_j} X_j) f}` over the adapted frame.
pub fn sublaplacian_frame(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    let frame = horizontal_frame(p)?;
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    Ok(frame
        .vectors()
        .iter()
        .map(|x| {
            let xt = extend(&ctx, x.vec());
            field::hessian(&ctx, &xt, &xt, &jet).value()
        })
        .sum())
}

/// `∇²f` over the adapted frame `(T, X_1, …, X_{2n})`.
#[derive(Clone, Debug)]
pub struct HessianBlock {
    pub base: SpherePoint,
    pub frame: HorizontalFrame,
    /// `values[a][b] = (∇²f)(e_a, e_b)` with `e_0 = T`.
    pub values: Vec<Vec<f64>>,
    /// `f₀` at the base point.
    pub f0: f64,
}

impl HessianBlock {
    /// `π_H ∇²f`, the `2n × 2n` horizontal block.
    pub fn horizontal(&self) -> Vec<Vec<f64>> {
        self.values[1..].iter().map(|row| row[1..].to_vec()).collect()
    }

    pub fn horizontal_trace(&self) -> f64 {
        (1..self.values.len()).map(|j| self.values[j][j]).sum()
    }

    /// `|π_H ∇²f|² = Σ_{j,k} (∇²f)(X_j, X_k)²`.
    pub fn horizontal_norm_sq(&self) -> f64 {
        self.horizontal().iter().flatten().map(|v| v * v).sum()
    }

    /// `(∇²f)(T, T) = f₀₀`.
    pub fn tt(&self) -> f64 {
        self.values[0][0]
    }

    /// Largest deviation of `(∇²f)(X_j,X_k) − (∇²f)(X_k,X_j)` from `2Ω(X_j,X_k) f₀`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let xs = self.frame.vectors();
        let mut worst: f64 = 0.0;
        for (j, a) in xs.iter().enumerate() {
            for (k, b) in xs.iter().enumerate() {
                let om = dot(a.vec(), &times_i(b.vec()));
                let r = self.values[j + 1][k + 1] - self.values[k + 1][j + 1] - 2.0 * om * self.f0;
                worst = worst.max(r.abs());
            }
        }
        worst
    }
}

pub fn tw_hessian(f: &ScalarField, p: &SpherePoint) -> Result<HessianBlock> {
    let frame = horizontal_frame(p)?;
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    let e = adapted_fields(&ctx, &frame);
    let values = e
        .iter()
        .map(|a| e.iter().map(|b| field::hessian(&ctx, a, b, &jet).value()).collect())
        .collect();
    let f0 = field::apply(&ctx, &e[0], &jet).value();
    Ok(HessianBlock { base: p.clone(), frame, values, f0 })
}

/// `(∇²f)(X,Y) − (∇²f)(Y,X) − 2Ω(X,Y) f₀` for horizontal `X, Y` at `p`.
pub fn hessian_commutation_residual(
    f: &ScalarField,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<f64> {
    check_horizontal_at(p, x)?;
    check_horizontal_at(p, y)?;
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    let (xt, yt) = (extend(&ctx, x.vec()), extend(&ctx, y.vec()));
    let f0 = field::apply(&ctx, &field::reeb(&ctx), &jet).value();
    let om = dot(x.vec(), &times_i(y.vec()));
    Ok(field::hessian(&ctx, &xt, &yt, &jet).value() - field::hessian(&ctx, &yt, &xt, &jet).value() - 2.0 * om * f0)
}

/// `(∇³f)(X,T,Y) − (∇³f)(Y,T,X) − 2Ω(X,Y) f₀₀` for horizontal `X, Y` at `p`.
pub fn third_commutation_residual(
    f: &ScalarField,
    p: &SpherePoint,
    x: &TangentVector,
    y: &TangentVector,
) -> Result<f64> {
    check_horizontal_at(p, x)?;
    check_horizontal_at(p, y)?;
    let (ctx, jet) = f.local(p, ORDER_THIRD)?;
    let (xt, yt) = (extend(&ctx, x.vec()), extend(&ctx, y.vec()));
    let t = field::reeb(&ctx);
    let f00 = field::hessian(&ctx, &t, &t, &jet).value();
    let om = dot(x.vec(), &times_i(y.vec()));
    let a = field::hessian3(&ctx, &xt, &t, &yt, &jet).value();
    let b = field::hessian3(&ctx, &yt, &t, &xt, &jet).value();
    Ok(a - b - 2.0 * om * f00)
}

/// `R(X,Y)Z = G(Y,Z)X − G(X,Z)Y + G(JY,Z)JX − G(JX,Z)JY − 2G(JX,Y)JZ` on horizontal vectors.
pub fn curvature(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> Result<TangentVector> {
    let p = x.base();
    for v in [x, y, z] {
        check_horizontal_at(p, v)?;
    }
    let (jx, jy, jz) = (times_i(x.vec()), times_i(y.vec()), times_i(z.vec()));
    let g = dot;
    let coeffs = [
        (g(y.vec(), z.vec()), x.vec().to_vec()),
        (-g(x.vec(), z.vec()), y.vec().to_vec()),
        (g(&jy, z.vec()), jx.clone()),
        (-g(&jx, z.vec()), jy),
        (-2.0 * g(&jx, y.vec()), jz),
    ];
    let mut out = vec![0.0; p.ambient_dim()];
    for (c, v) in coeffs {
        out = sphere_model::axpy(c, &v, &out);
    }
    TangentVector::horizontal(p, out)
}

/// `R(X,Y)Z` computed from the connection on horizontal extensions.
pub fn curvature_from_connection(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> Result<TangentVector> {
    let p = x.base();
    for v in [x, y, z] {
        check_horizontal_at(p, v)?;
    }
    let ctx = Local::new(p.coords(), ORDER_SECOND);
    let r = field::curvature(&ctx, &extend(&ctx, x.vec()), &extend(&ctx, y.vec()), &extend(&ctx, z.vec()));
    TangentVector::new(p, values(&r))
}

/// `ρ(X, X) = Σ_j G(R(X_j, X)X, X_j)`.
pub fn ricci(x: &TangentVector) -> Result<f64> {
    let frame = horizontal_frame(x.base())?;
    frame.vectors().iter().map(|e| levi_form(&curvature(e, x, x)?, e)).sum()
}

/// `Lf` at `p`.
pub fn operator_l(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    Ok(field::operator_l(&ctx, &jet).value())
}

/// `Lf` as an exact polynomial.
pub fn operator_l_poly(f: &ScalarField) -> ScalarField {
    let ctx = Exact::new(f.n);
    ScalarField::new(f.n, field::operator_l(&ctx, &f.poly)).expect("dimension is preserved")
}

/// The individual terms of `½Δ_b|∇^H f|² = |π_H∇²f|² + (∇^H f)(Δ_b f) + ρ(∇^H f, ∇^H f) + 2Lf`.
#[derive(Clone, Debug, PartialEq)]
pub struct BochnerTerms {
    pub lhs: f64,
    pub hessian_sq: f64,
    pub gradient_term: f64,
    pub ricci_term: f64,
    pub l_term: f64,
}

impl BochnerTerms {
    pub fn rhs(&self) -> f64 {
        self.hessian_sq + self.gradient_term + self.ricci_term + 2.0 * self.l_term
    }

    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs()
    }
}

pub fn bochner_terms(f: &ScalarField, p: &SpherePoint) -> Result<BochnerTerms> {
    let frame = horizontal_frame(p)?;
    let (ctx, jet) = f.local(p, ORDER_THIRD)?;
    let xs: Vec<Field<Jet>> = frame.vectors().iter().map(|x| extend(&ctx, x.vec())).collect();
    let grad_h = field::horizontal_gradient(&ctx, &jet);
    let norm_sq = field::dot(&ctx, &grad_h, &grad_h);
    let lhs = 0.5 * xs.iter().map(|x| field::hessian(&ctx, x, x, &norm_sq).value()).sum::<f64>();
    let hessian_sq = xs
        .iter()
        .flat_map(|a| xs.iter().map(move |b| (a, b)))
        .map(|(a, b)| field::hessian(&ctx, a, b, &jet).value().powi(2))
        .sum();
    let lap = ctx.lift(sublaplacian_greenleaf_poly(f).poly());
    let gradient_term = field::apply(&ctx, &grad_h, &lap).value();
    let g_at = TangentVector::horizontal(p, values(&grad_h))?;
    let ricci_term = ricci(&g_at)?;
    let l_term = field::operator_l(&ctx, &jet).value();
    Ok(BochnerTerms { lhs, hessian_sq, gradient_term, ricci_term, l_term })
}

pub fn bochner_residual(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    Ok(bochner_terms(f, p)?.residual())
}

fn divergence(ctx: &Local, frame: &HorizontalFrame, v: &[Jet]) -> f64 {
    adapted_fields(ctx, frame)
        .iter()
        .map(|e| field::dot(ctx, &field::covariant(ctx, e, v), e).value())
        .sum()
}

/// `div(J∇^H f) − 2n f₀` at `p`.
pub fn lemma1_residual(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    let frame = horizontal_frame(p)?;
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    let v = field::complex_j(&ctx, &field::horizontal_gradient(&ctx, &jet));
    let f0 = field::apply(&ctx, &field::reeb(&ctx), &jet).value();
    Ok(divergence(&ctx, &frame, &v) - 2.0 * f.n as f64 * f0)
}

/// `div(J∇^H f)` at `p`.
pub fn divergence_j_gradient(f: &ScalarField, p: &SpherePoint) -> Result<f64> {
    let frame = horizontal_frame(p)?;
    let (ctx, jet) = f.local(p, ORDER_SECOND)?;
    let v = field::complex_j(&ctx, &field::horizontal_gradient(&ctx, &jet));
    Ok(divergence(&ctx, &frame, &v))
}

/// Sphere averages of both sides of `∫ Lf = −4n ∫ f₀²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Check {
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl Lemma2Check {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn lemma2_check(f: &ScalarField) -> Lemma2Check {
    let lhs = sphere_integral(operator_l_poly(f).poly());
    let f0 = f.reeb_field();
    let sq = f0.poly.clone() * f0.poly.clone();
    let rhs = sphere_integral(&sq) * BigRational::from_integer(BigInt::from(-4 * f.n as i64));
    Lemma2Check { lhs, rhs }
}

/// A random tangent vector field whose ambient components are affine with small integer
/// coefficients before tangential projection.
pub fn random_tangent_field<G: Rng + ?Sized>(n: usize, rng: &mut G) -> Vec<RationalPolynomial> {
    let dim = ambient_dim(n);
    let ctx = Exact::new(n);
    let raw: Vec<RationalPolynomial> = (0..dim)
        .map(|_| {
            let mut p = RationalPolynomial::zero(dim);
            for _ in 0..3 {
                let k = rng.gen_range(0..dim);
                let c: i64 = rng.gen_range(-4..=4);
                p = p + RationalPolynomial::monomial(dim, Monomial::var(k), BigRational::from_integer(c.into()));
            }
            p + ctx.int(rng.gen_range(-2..=2))
        })
        .collect();
    field::tangential(&ctx, &raw)
}

/// Residuals of the connection axioms at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionResiduals {
    /// `X g(Y,Z) − g(∇_X Y, Z) − g(Y, ∇_X Z)`.
    pub metric: f64,
    /// `|∇_X (JY) − J ∇_X Y|` for horizontal `Y`.
    pub parallel_j: f64,
    /// `|T_∇(X,Y) + 2Ω(X,Y)T|` for horizontal `X, Y`.
    pub torsion: f64,
    /// `|∇_X T|`.
    pub parallel_reeb: f64,
}

impl ConnectionResiduals {
    pub fn max(&self) -> f64 {
        self.metric.abs().max(self.parallel_j).max(self.torsion).max(self.parallel_reeb)
    }
}

/// Evaluates the axioms on the polynomial fields `x, y, z`. The fields are first made
/// tangent, and for the `J` and torsion checks horizontal, by the ambient projections.
pub fn connection_residuals(
    p: &SpherePoint,
    x: &[RationalPolynomial],
    y: &[RationalPolynomial],
    z: &[RationalPolynomial],
) -> Result<ConnectionResiduals> {
    for v in [x, y, z] {
        if v.len() != p.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: v.len() });
        }
    }
    let ctx = Local::new(p.coords(), 1);
    let lift = |v: &[RationalPolynomial]| -> Field<Jet> { v.iter().map(|c| ctx.lift(c)).collect() };
    let (xr, yr, zr) = (lift(x), lift(y), lift(z));
    let (xt, yt, zt) = (field::tangential(&ctx, &xr), field::tangential(&ctx, &yr), field::tangential(&ctx, &zr));
    let (xh, yh) = (field::project_h(&ctx, &xr), field::project_h(&ctx, &yr));

    let metric = field::apply(&ctx, &xt, &field::dot(&ctx, &yt, &zt)).value()
        - field::dot(&ctx, &field::covariant(&ctx, &xt, &yt), &zt).value()
        - field::dot(&ctx, &yt, &field::covariant(&ctx, &xt, &zt)).value();

    let jy = field::complex_j(&ctx, &yh);
    let lhs = field::covariant(&ctx, &xt, &jy);
    let rhs = field::complex_j(&ctx, &field::covariant(&ctx, &xt, &yh));
    let parallel_j = sphere_model::norm(&values(&field::sub(&lhs, &rhs)));

    let t = field::reeb(&ctx);
    let om = field::omega(&ctx, &xh, &yh).value();
    let tor = values(&field::torsion(&ctx, &xh, &yh));
    let torsion = sphere_model::norm(&sphere_model::axpy(2.0 * om, &values(&t), &tor));

    let parallel_reeb = sphere_model::norm(&values(&field::covariant(&ctx, &xt, &t)));
    Ok(ConnectionResiduals { metric, parallel_j, torsion, parallel_reeb })
}

/// `m|A|² − tr(A)²`, nonnegative for every real `m × m` matrix.
pub fn trace_defect(a: &[Vec<f64>]) -> f64 {
    let m = a.len() as f64;
    let norm_sq: f64 = a.iter().flatten().map(|v| v * v).sum();
    let tr: f64 = (0..a.len()).map(|i| a[i][i]).sum();
    m * norm_sq - tr * tr
}

/// Largest entry of `A − (tr A / m) I`.
pub fn scalar_deviation(a: &[Vec<f64>]) -> f64 {
    let m = a.len();
    let tr: f64 = (0..m).map(|i| a[i][i]).sum();
    let mut worst: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { tr / m as f64 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests;
