use super::{GeodesicState, GeodesicTrace, TraceSample};
use crate::error::{Error, Result};
use crate::ph_calculus::connection_term;
use crate::sphere_model::{axpy, dot, norm, project_h_raw, scaled, times_i, SpherePoint};

/// Largest admissible integration step.
pub const MAX_STEP: f64 = 1e-2;

/// `γ̈ = −Γ_γ(γ̇, γ̇) − 2b Jγ̇`, the ambient form of `∇_γ̇ γ̇ = −2b Jγ̇`.
fn acceleration(x: &[f64], v: &[f64], b: f64) -> Vec<f64> {
    let gamma = connection_term(x, v, v);
    let jv = times_i(&project_h_raw(x, v));
    gamma.iter().zip(&jv).map(|(g, j)| -g - 2.0 * b * j).collect()
}

pub(crate) fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::InvalidStep(step));
    }
    Ok(())
}

pub(crate) fn step_count(length: f64, step: f64) -> Result<usize> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(Error::InvalidParameter(format!("integration length {length} must be finite and nonnegative")));
    }
    Ok((length / step).ceil() as usize)
}

/// Integrates `∇_γ̇ γ̇ = −2b Jγ̇` with classical Runge–Kutta, renormalizing the position
/// to the sphere after every step. The step is shrunk so that `s_max` is hit exactly.
pub fn integrate_connection_geodesic(init: &GeodesicState, s_max: f64, step: f64) -> Result<GeodesicTrace> {
    check_step(step)?;
    let steps = step_count(s_max, step)?;
    let h = if steps == 0 { 0.0 } else { s_max / steps as f64 };
    let b = init.b();
    let mut x = init.x().coords().to_vec();
    let mut v = init.v().vec().to_vec();
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TraceSample { s: 0.0, point: init.x().clone(), velocity: v.clone(), b });
    for k in 1..=steps {
        let a1 = acceleration(&x, &v, b);
        let (x2, v2) = (axpy(h / 2.0, &v, &x), axpy(h / 2.0, &a1, &v));
        let a2 = acceleration(&x2, &v2, b);
        let (x3, v3) = (axpy(h / 2.0, &v2, &x), axpy(h / 2.0, &a2, &v));
        let a3 = acceleration(&x3, &v3, b);
        let (x4, v4) = (axpy(h, &v3, &x), axpy(h, &a3, &v));
        let a4 = acceleration(&x4, &v4, b);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
            v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        let r = norm(&x);
        x.iter_mut().for_each(|c| *c /= r);
        let radial = dot(&v, &x);
        v = axpy(-radial, &x, &v);
        let point = SpherePoint::new(x.clone())?;
        samples.push(TraceSample { s: h * k as f64, point, velocity: v.clone(), b });
    }
    Ok(GeodesicTrace::from_samples(samples))
}

/// Position and velocity at time `t` of the connection geodesic with initial data
/// `(x, v)` and constant multiplier `b`:
/// `γ(t) = e^{−iβτ}(x cos ωτ + ω^{-1}(u + iβx) sin ωτ)` with `r = |v|`, `u = v/r`,
/// `β = b/r`, `ω = √(1+β²)` and `τ = rt`.
pub fn closed_form_state(x: &[f64], v: &[f64], b: f64, t: f64) -> (Vec<f64>, Vec<f64>) {
    let r = norm(v);
    if r == 0.0 {
        return (x.to_vec(), vec![0.0; x.len()]);
    }
    let u = scaled(1.0 / r, v);
    let beta = b / r;
    let omega = (1.0 + beta * beta).sqrt();
    let tau = r * t;
    let ix = times_i(x);
    let big_b = scaled(1.0 / omega, &axpy(beta, &ix, &u));
    let (s, c) = (omega * tau).sin_cos();
    let inner = axpy(s, &big_b, &scaled(c, x));
    let inner_dot = axpy(omega * c, &big_b, &scaled(-omega * s, x));
    let rotate = |w: &[f64]| {
        let (sp, cp) = (beta * tau).sin_cos();
        axpy(-sp, &times_i(w), &scaled(cp, w))
    };
    let pos = rotate(&inner);
    let vel = scaled(r, &axpy(1.0, &rotate(&inner_dot), &scaled(-beta, &rotate(&times_i(&inner)))));
    (pos, vel)
}

/// The endpoint `γ(t)` of [`closed_form_state`].
pub fn closed_form_geodesic(init: &GeodesicState, t: f64) -> Result<SpherePoint> {
    let (pos, _) = closed_form_state(init.x().coords(), init.v().vec(), init.b(), t);
    SpherePoint::normalize(&pos)
}
