//! The standard CR sphere `S^{2n+1} ⊂ R^{2n+2}`.
//!
//! Coordinates are laid out as `(x¹,…,x^{n+1}, y¹,…,y^{n+1})` and `z^j = x^j + i y^j`.
//! The Reeb field is `T = x^j ∂/∂y^j − y^j ∂/∂x^j`, the horizontal space at `p` is the
//! Euclidean orthogonal complement of `{p, ip}`, `J` is multiplication by `i` on it and the
//! Levi form is the Euclidean inner product restricted to `H`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::poly_engine::MAX_VARS;

pub const POINT_TOL: f64 = 1e-12;
pub const TANGENT_TOL: f64 = 1e-12;
pub const FRAME_TOL: f64 = 1e-10;
const SEED_SKIP: f64 = 1e-8;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Ambient multiplication by `i`: `(a, b) ↦ (−b, a)`.
pub(crate) fn times_i(v: &[f64]) -> Vec<f64> {
    let h = v.len() / 2;
    v[h..].iter().map(|c| -c).chain(v[..h].iter().copied()).collect()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

pub(crate) fn scaled(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|a| alpha * a).collect()
}

/// `v − <v,p>p − <v,ip>ip`: the Euclidean projection onto `H_p`.
pub(crate) fn project_h_raw(p: &[f64], v: &[f64]) -> Vec<f64> {
    let ip = times_i(p);
    let a = dot(v, p);
    let b = dot(v, &ip);
    v.iter().zip(p).zip(&ip).map(|((vk, pk), ik)| vk - a * pk - b * ik).collect()
}

/// A point of `S^{2n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
    n: usize,
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let len = coords.len();
        if len < 4 || len % 2 == 1 || len > MAX_VARS {
            return Err(Error::DimensionMismatch { expected: 4, got: len });
        }
        let r = norm(&coords);
        if (r - 1.0).abs() > POINT_TOL {
            return Err(Error::NotOnSphere { norm: r });
        }
        Ok(SpherePoint { coords, n: len / 2 - 1 })
    }

    /// Radial projection of a nonzero ambient vector onto the sphere.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let r = norm(v);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NotOnSphere { norm: r });
        }
        let coords: Vec<f64> = v.iter().map(|c| c / r).collect();
        Self::new(coords)
    }

    /// A uniformly distributed point.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let v: Vec<f64> = (0..2 * n + 2).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(p) = Self::normalize(&v) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// CR dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.coords[j]
    }

    pub fn y(&self, j: usize) -> f64 {
        self.coords[self.n + 1 + j]
    }

    fn same_as(&self, other: &SpherePoint) -> bool {
        self.coords.len() == other.coords.len()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| (a - b).abs() <= POINT_TOL)
    }
}

/// A tangent vector at a point of the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    base: SpherePoint,
    vec: Vec<f64>,
    horizontal: bool,
}

fn tolerance_for(v: &[f64]) -> f64 {
    TANGENT_TOL * norm(v).max(1.0)
}

impl TangentVector {
    pub fn new(base: &SpherePoint, vec: Vec<f64>) -> Result<Self> {
        if vec.len() != base.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: base.ambient_dim(), got: vec.len() });
        }
        let inner = dot(&vec, base.coords());
        if inner.abs() > tolerance_for(&vec) {
            return Err(Error::NotTangent { inner });
        }
        let horizontal = dot(&vec, &times_i(base.coords())).abs() <= tolerance_for(&vec);
        Ok(TangentVector { base: base.clone(), vec, horizontal })
    }

    /// A tangent vector that must also be horizontal.
    pub fn horizontal(base: &SpherePoint, vec: Vec<f64>) -> Result<Self> {
        let t = Self::new(base, vec)?;
        if !t.horizontal {
            return Err(Error::NotHorizontal { theta: dot(&t.vec, &times_i(base.coords())) });
        }
        Ok(t)
    }

    pub fn zero(base: &SpherePoint) -> Self {
        TangentVector { base: base.clone(), vec: vec![0.0; base.ambient_dim()], horizontal: true }
    }

    /// A random horizontal vector with Gaussian frame coefficients.
    pub fn random_horizontal<R: Rng + ?Sized>(base: &SpherePoint, rng: &mut R) -> Self {
        let v: Vec<f64> = (0..base.ambient_dim()).map(|_| rng.sample(StandardNormal)).collect();
        let h = project_h_raw(base.coords(), &v);
        TangentVector { base: base.clone(), vec: h, horizontal: true }
    }

    /// A random horizontal vector of unit length.
    pub fn random_unit_horizontal<R: Rng + ?Sized>(base: &SpherePoint, rng: &mut R) -> Self {
        loop {
            let v = Self::random_horizontal(base, rng);
            let r = v.norm();
            if r > 1e-6 {
                return v.scale(1.0 / r);
            }
        }
    }

    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn vec(&self) -> &[f64] {
        &self.vec
    }

    pub fn is_horizontal(&self) -> bool {
        self.horizontal
    }

    pub fn norm(&self) -> f64 {
        norm(&self.vec)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        TangentVector { base: self.base.clone(), vec: scaled(alpha, &self.vec), horizontal: self.horizontal }
    }

    pub fn add(&self, other: &TangentVector) -> Result<Self> {
        check_same_base(self, other)?;
        Ok(TangentVector {
            base: self.base.clone(),
            vec: axpy(1.0, &self.vec, &other.vec),
            horizontal: self.horizontal && other.horizontal,
        })
    }
}

fn check_same_base(a: &TangentVector, b: &TangentVector) -> Result<()> {
    if a.base.same_as(&b.base) {
        Ok(())
    } else {
        Err(Error::BasePointMismatch)
    }
}

fn check_dim(p: &SpherePoint, v: &[f64]) -> Result<()> {
    if v.len() == p.ambient_dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: v.len() })
    }
}

/// The Reeb vector `T_p = (−y, x)`.
pub fn reeb(p: &SpherePoint) -> TangentVector {
    TangentVector { base: p.clone(), vec: times_i(p.coords()), horizontal: false }
}

/// `θ_p(v) = Σ_j (x^j v_{y^j} − y^j v_{x^j})`.
pub fn contact_form(p: &SpherePoint, v: &[f64]) -> Result<f64> {
    check_dim(p, v)?;
    let inner = dot(v, p.coords());
    if inner.abs() > tolerance_for(v) {
        return Err(Error::NotTangent { inner });
    }
    Ok(dot(v, &times_i(p.coords())))
}

/// `J` on the horizontal space.
pub fn complex_structure(x: &TangentVector) -> Result<TangentVector> {
    if !x.horizontal {
        return Err(Error::NotHorizontal { theta: dot(&x.vec, &times_i(x.base.coords())) });
    }
    Ok(TangentVector { base: x.base.clone(), vec: times_i(&x.vec), horizontal: true })
}

/// `π_H v = v − θ(v) T`.
pub fn horizontal_project(p: &SpherePoint, v: &[f64]) -> Result<TangentVector> {
    let th = contact_form(p, v)?;
    let t = times_i(p.coords());
    let h = axpy(-th, &t, v);
    let h = project_h_raw(p.coords(), &h);
    Ok(TangentVector { base: p.clone(), vec: h, horizontal: true })
}

/// The Levi form `G_θ` on horizontal vectors.
pub fn levi_form(x: &TangentVector, y: &TangentVector) -> Result<f64> {
    check_same_base(x, y)?;
    for v in [x, y] {
        if !v.horizontal {
            return Err(Error::NotHorizontal { theta: dot(&v.vec, &times_i(v.base.coords())) });
        }
    }
    Ok(dot(&x.vec, &y.vec))
}

/// The Webster metric `g_θ`, which is the round metric.
pub fn webster_metric(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    check_same_base(u, v)?;
    Ok(dot(&u.vec, &v.vec))
}

/// `Ω(X, Y) = g_θ(X, JY)`.
pub fn levi_omega(x: &TangentVector, y: &TangentVector) -> Result<f64> {
    check_same_base(x, y)?;
    Ok(dot(&x.vec, &times_i(&y.vec)))
}

/// An ordered Levi-orthonormal frame `X_1,…,X_{2n}` with `X_{α+n} = J X_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalFrame {
    base: SpherePoint,
    vectors: Vec<TangentVector>,
}

impl HorizontalFrame {
    /// Validates the frame invariants.
    pub fn new(base: &SpherePoint, vectors: Vec<TangentVector>) -> Result<Self> {
        let n = base.n();
        if vectors.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: vectors.len() });
        }
        for (j, a) in vectors.iter().enumerate() {
            if !a.base.same_as(base) {
                return Err(Error::BasePointMismatch);
            }
            if !a.horizontal {
                return Err(Error::FrameConstruction);
            }
            for (k, b) in vectors.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                if (dot(&a.vec, &b.vec) - target).abs() > FRAME_TOL {
                    return Err(Error::FrameConstruction);
                }
            }
        }
        for alpha in 0..n {
            let jx = times_i(&vectors[alpha].vec);
            if jx.iter().zip(&vectors[alpha + n].vec).any(|(a, b)| (a - b).abs() > FRAME_TOL) {
                return Err(Error::FrameConstruction);
            }
        }
        Ok(HorizontalFrame { base: base.clone(), vectors })
    }

    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn vectors(&self) -> &[TangentVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coefficients of a horizontal vector in this frame.
    pub fn coefficients(&self, v: &TangentVector) -> Result<Vec<f64>> {
        check_same_base(v, &self.vectors[0])?;
        Ok(self.vectors.iter().map(|x| dot(&x.vec, &v.vec)).collect())
    }

    /// The horizontal vector `Σ c_j X_j`.
    pub fn combine(&self, coeffs: &[f64]) -> TangentVector {
        let mut out = vec![0.0; self.base.ambient_dim()];
        for (c, x) in coeffs.iter().zip(&self.vectors) {
            out = axpy(*c, &x.vec, &out);
        }
        TangentVector { base: self.base.clone(), vec: out, horizontal: true }
    }
}

/// Gram–Schmidt over the projected ambient basis vectors in index order.
pub fn horizontal_frame(p: &SpherePoint) -> Result<HorizontalFrame> {
    let n = p.n();
    let dim = p.ambient_dim();
    let mut alphas: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut span: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
    for k in 0..dim {
        if alphas.len() == n {
            break;
        }
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let mut w = project_h_raw(p.coords(), &e);
        for s in &span {
            let c = dot(&w, s);
            w = axpy(-c, s, &w);
        }
        let r = norm(&w);
        if r < SEED_SKIP {
            continue;
        }
        let w = scaled(1.0 / r, &w);
        span.push(times_i(&w));
        span.push(w.clone());
        alphas.push(w);
    }
    if alphas.len() < n {
        return Err(Error::FrameConstruction);
    }
    let mut vectors: Vec<TangentVector> =
        alphas.iter().map(|a| TangentVector { base: p.clone(), vec: a.clone(), horizontal: true }).collect();
    for a in &alphas {
        vectors.push(TangentVector { base: p.clone(), vec: times_i(a), horizontal: true });
    }
    HorizontalFrame::new(p, vectors)
}

/// The frame `X = ∂/∂x₁ − F ∂/∂x₂ − G ∂/∂y₂`, `Y = ∂/∂y₁ + G ∂/∂x₂ − F ∂/∂y₂` on
/// `S³ ∖ {x₂ = y₂ = 0}`, unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitS3Frame {
    pub f: f64,
    pub g: f64,
    pub x: TangentVector,
    pub y: TangentVector,
}

pub fn explicit_s3_frame(p: &SpherePoint) -> Result<ExplicitS3Frame> {
    if p.n() != 1 {
        return Err(Error::DimensionMismatch { expected: 4, got: p.ambient_dim() });
    }
    let (x1, x2, y1, y2) = (p.x(0), p.x(1), p.y(0), p.y(1));
    let r2 = x2 * x2 + y2 * y2;
    if r2 < 1e-14 {
        return Err(Error::ExcludedCircle);
    }
    let f = (x1 * x2 + y1 * y2) / r2;
    let g = (x1 * y2 - y1 * x2) / r2;
    let x = TangentVector::horizontal(p, vec![1.0, -f, 0.0, -g]).map_err(|_| Error::FrameConstruction)?;
    let y = TangentVector::horizontal(p, vec![0.0, g, 1.0, -f]).map_err(|_| Error::FrameConstruction)?;
    Ok(ExplicitS3Frame { f, g, x, y })
}

impl ExplicitS3Frame {
    /// The orthonormal frame `(X/|X|, Y/|Y|)`.
    pub fn normalized(&self) -> Result<HorizontalFrame> {
        let r = self.x.norm();
        HorizontalFrame::new(self.x.base(), vec![self.x.scale(1.0 / r), self.y.scale(1.0 / r)])
    }
}
