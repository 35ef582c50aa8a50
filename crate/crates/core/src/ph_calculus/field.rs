//! Vector-field calculus for the Tanaka–Webster connection of the sphere.
//!
//! A vector field is a list of `2n+2` ambient components. Every formula here is the
//! polynomial expression whose restriction to the sphere is the named quantity, so the
//! routines work verbatim over exact polynomials and over jets.

use super::ring::{Ambient, Ring};

pub type Field<R> = Vec<R>;

pub fn add<R: Ring>(a: &[R], b: &[R]) -> Field<R> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<R: Ring>(a: &[R], b: &[R]) -> Field<R> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<R: Ring>(c: &R, a: &[R]) -> Field<R> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn dot<A: Ambient>(ctx: &A, a: &[A::R], b: &[A::R]) -> A::R {
    a.iter().zip(b).fold(ctx.zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Ambient multiplication by `i`.
pub fn times_i<R: Ring>(v: &[R]) -> Field<R> {
    let h = v.len() / 2;
    v[h..].iter().map(|c| -c.clone()).chain(v[..h].iter().cloned()).collect()
}

pub fn position<A: Ambient>(ctx: &A) -> Field<A::R> {
    (0..ctx.dim()).map(|k| ctx.coord(k)).collect()
}

/// The Reeb field `T = iq`.
pub fn reeb<A: Ambient>(ctx: &A) -> Field<A::R> {
    times_i(&position(ctx))
}

pub fn theta<A: Ambient>(ctx: &A, v: &[A::R]) -> A::R {
    dot(ctx, v, &reeb(ctx))
}

/// `Ω(X, Y) = <X, iY>`.
pub fn omega<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R]) -> A::R {
    dot(ctx, x, &times_i(y))
}

/// `v − <v,q>q − <v,iq>iq`.
pub fn project_h<A: Ambient>(ctx: &A, v: &[A::R]) -> Field<A::R> {
    let q = position(ctx);
    let iq = times_i(&q);
    let a = dot(ctx, v, &q);
    let b = dot(ctx, v, &iq);
    v.iter()
        .zip(q.iter().zip(&iq))
        .map(|(vk, (qk, ik))| vk.clone() - a.clone() * qk.clone() - b.clone() * ik.clone())
        .collect()
}

/// `v − <v,q>q`.
pub fn tangential<A: Ambient>(ctx: &A, v: &[A::R]) -> Field<A::R> {
    let q = position(ctx);
    let a = dot(ctx, v, &q);
    v.iter().zip(&q).map(|(vk, qk)| vk.clone() - a.clone() * qk.clone()).collect()
}

/// `J`, extended by `JT = 0`.
pub fn complex_j<A: Ambient>(ctx: &A, v: &[A::R]) -> Field<A::R> {
    times_i(&project_h(ctx, v))
}

/// The derivation `X(f) = Σ X_k ∂_k f`.
pub fn apply<A: Ambient>(ctx: &A, x: &[A::R], f: &A::R) -> A::R {
    x.iter().enumerate().fold(ctx.zero(), |acc, (k, xk)| acc + xk.clone() * f.partial(k))
}

/// Componentwise ambient derivative `D_X Y`.
pub fn ambient_derivative<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R]) -> Field<A::R> {
    y.iter().map(|yk| apply(ctx, x, yk)).collect()
}

pub fn bracket<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R]) -> Field<A::R> {
    sub(&ambient_derivative(ctx, x, y), &ambient_derivative(ctx, y, x))
}

/// `∇_X Y = D_X Y + <X,Y>q − Ω(X,Y)T − θ(X)JY − θ(Y)JX`.
pub fn covariant<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R]) -> Field<A::R> {
    let q = position(ctx);
    let t = times_i(&q);
    let dxy = ambient_derivative(ctx, x, y);
    let xy = dot(ctx, x, y);
    let om = omega(ctx, x, y);
    let thx = theta(ctx, x);
    let thy = theta(ctx, y);
    let jx = complex_j(ctx, x);
    let jy = complex_j(ctx, y);
    (0..ctx.dim())
        .map(|k| {
            dxy[k].clone() + xy.clone() * q[k].clone()
                - om.clone() * t[k].clone()
                - thx.clone() * jy[k].clone()
                - thy.clone() * jx[k].clone()
        })
        .collect()
}

/// `T_∇(X, Y) = ∇_X Y − ∇_Y X − [X, Y]`.
pub fn torsion<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R]) -> Field<A::R> {
    let a = covariant(ctx, x, y);
    let b = covariant(ctx, y, x);
    sub(&sub(&a, &b), &bracket(ctx, x, y))
}

/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]} Z`.
pub fn curvature<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R], z: &[A::R]) -> Field<A::R> {
    let a = covariant(ctx, x, &covariant(ctx, y, z));
    let b = covariant(ctx, y, &covariant(ctx, x, z));
    let c = covariant(ctx, &bracket(ctx, x, y), z);
    sub(&sub(&a, &b), &c)
}

pub fn euclidean_gradient<A: Ambient>(ctx: &A, f: &A::R) -> Field<A::R> {
    (0..ctx.dim()).map(|k| f.partial(k)).collect()
}

/// Gradient for the Webster metric (the round metric).
pub fn gradient<A: Ambient>(ctx: &A, f: &A::R) -> Field<A::R> {
    tangential(ctx, &euclidean_gradient(ctx, f))
}

/// `∇^H f = π_H ∇f`.
pub fn horizontal_gradient<A: Ambient>(ctx: &A, f: &A::R) -> Field<A::R> {
    project_h(ctx, &euclidean_gradient(ctx, f))
}

/// `(∇²f)(X, Y) = X(Y f) − (∇_X Y) f`.
pub fn hessian<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R], f: &A::R) -> A::R {
    apply(ctx, x, &apply(ctx, y, f)) - apply(ctx, &covariant(ctx, x, y), f)
}

/// `(∇³f)(X, Y, Z) = X((∇²f)(Y,Z)) − (∇²f)(∇_X Y, Z) − (∇²f)(Y, ∇_X Z)`.
pub fn hessian3<A: Ambient>(ctx: &A, x: &[A::R], y: &[A::R], z: &[A::R], f: &A::R) -> A::R {
    apply(ctx, x, &hessian(ctx, y, z, f))
        - hessian(ctx, &covariant(ctx, x, y), z, f)
        - hessian(ctx, y, &covariant(ctx, x, z), f)
}

/// `Lf = (J∇^H f)(Tf) − (J∇_T ∇^H f)(f)`.
pub fn operator_l<A: Ambient>(ctx: &A, f: &A::R) -> A::R {
    let t = reeb(ctx);
    let grad_h = horizontal_gradient(ctx, f);
    let f0 = apply(ctx, &t, f);
    let first = apply(ctx, &complex_j(ctx, &grad_h), &f0);
    let second = apply(ctx, &complex_j(ctx, &covariant(ctx, &t, &grad_h)), f);
    first - second
}
