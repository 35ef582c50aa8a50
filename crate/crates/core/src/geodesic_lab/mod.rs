//! Lengthy geodesics of the Tanaka–Webster connection and of the sub-Riemannian
//! Hamiltonian on odd spheres.
//!
//! Two independent integrators are provided: a fourth-order Runge–Kutta scheme for the
//! second-order equation `∇_γ̇ γ̇ = −2b Jγ̇` in ambient coordinates, and the canonical
//! equations of `H(u, ξ) = ½ g^{ij}(u) ξ_i ξ_j` in a pair of stereographic charts. On
//! top of these sit a shooting estimator for the Carnot–Carathéodory distance and the
//! equality-case phenomenology on `S³`.

mod connection;
mod hamilton;
mod s3;
mod shooting;

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sphere_model::{axpy, dot, norm, scaled, times_i, SpherePoint, TangentVector, TANGENT_TOL};

pub use connection::{closed_form_geodesic, closed_form_state, integrate_connection_geodesic, MAX_STEP};
pub use hamilton::{canonical_lift, cotangent_lift, integrate_hj_geodesic, Chart, CotangentState};
pub use s3::{
    eigen_along_geodesic, max_point, reach_set_mpi2, reach_set_residual, s3_quadratic, CosineFit, ReachPoint, ReachSet,
    TupleOrder,
};
pub use shooting::{cc_distance, riemannian_distance, CcEstimate, ShootingBudget, ShootingParams};

/// Initial data for a lengthy geodesic: a point, a horizontal velocity and the
/// multiplier `b`.
#[derive(Clone, Debug)]
pub struct GeodesicState {
    x: SpherePoint,
    v: TangentVector,
    b: f64,
}

impl GeodesicState {
    pub fn new(x: SpherePoint, v: TangentVector, b: f64) -> Result<Self> {
        if v.base() != &x {
            return Err(Error::BasePointMismatch);
        }
        if !v.is_horizontal() {
            return Err(Error::NotHorizontal { theta: dot(v.vec(), &times_i(x.coords())) });
        }
        if !b.is_finite() {
            return Err(Error::InvalidParameter(format!("multiplier b = {b} is not finite")));
        }
        Ok(GeodesicState { x, v, b })
    }

    pub fn x(&self) -> &SpherePoint {
        &self.x
    }

    pub fn v(&self) -> &TangentVector {
        &self.v
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// One sample of a trace: arc parameter, position, ambient velocity and multiplier.
#[derive(Clone, Debug)]
pub struct TraceSample {
    pub s: f64,
    pub point: SpherePoint,
    pub velocity: Vec<f64>,
    pub b: f64,
}

impl TraceSample {
    /// `θ(γ̇)` at this sample.
    pub fn theta(&self) -> f64 {
        dot(&self.velocity, &times_i(self.point.coords()))
    }

    pub fn speed(&self) -> f64 {
        norm(&self.velocity)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TraceDiagnostics {
    /// Largest `|θ(γ̇)|` over the samples.
    pub max_theta: f64,
    /// Largest deviation of `|γ̇|` from its initial value.
    pub max_speed_drift: f64,
    /// Largest deviation of the Hamiltonian from its initial value (Hamiltonian traces only).
    pub hamiltonian_drift: Option<f64>,
    pub chart_switches: usize,
}

#[derive(Clone, Debug)]
pub struct GeodesicTrace {
    pub samples: Vec<TraceSample>,
    pub diagnostics: TraceDiagnostics,
}

impl GeodesicTrace {
    pub(crate) fn from_samples(samples: Vec<TraceSample>) -> Self {
        let v0 = samples.first().map(TraceSample::speed).unwrap_or(0.0);
        let mut diagnostics = TraceDiagnostics::default();
        for s in &samples {
            diagnostics.max_theta = diagnostics.max_theta.max(s.theta().abs());
            diagnostics.max_speed_drift = diagnostics.max_speed_drift.max((s.speed() - v0).abs());
        }
        GeodesicTrace { samples, diagnostics }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start(&self) -> &TraceSample {
        &self.samples[0]
    }

    pub fn end(&self) -> &TraceSample {
        &self.samples[self.samples.len() - 1]
    }

    /// Linear interpolation of the position at parameter `s`, renormalized to the sphere.
    pub fn position_at(&self, s: f64) -> Result<SpherePoint> {
        let first = self.start().s;
        let last = self.end().s;
        if !(first..=last).contains(&s) {
            return Err(Error::InvalidParameter(format!("s = {s} outside [{first}, {last}]")));
        }
        let idx = self.samples.partition_point(|p| p.s < s);
        if idx == 0 {
            return Ok(self.samples[0].point.clone());
        }
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let w = (s - a.s) / (b.s - a.s);
        let mixed = axpy(w, &axpy(-1.0, a.point.coords(), b.point.coords()), a.point.coords());
        SpherePoint::normalize(&mixed)
    }

    /// Writes one row per sample with columns `s, x_1.., v_1.., b, theta_vdot, speed`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.samples.first().map(|s| s.point.ambient_dim()).unwrap_or(0);
        let mut header = vec!["s".to_string()];
        header.extend((1..=dim).map(|k| format!("x_{k}")));
        header.extend((1..=dim).map(|k| format!("v_{k}")));
        header.extend(["b", "theta_vdot", "speed"].map(String::from));
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row = vec![s.s];
            row.extend_from_slice(s.point.coords());
            row.extend_from_slice(&s.velocity);
            row.extend([s.b, s.theta(), s.speed()]);
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

fn check_unit_horizontal(v: &TangentVector) -> Result<()> {
    if !v.is_horizontal() {
        return Err(Error::NotHorizontal { theta: dot(v.vec(), &times_i(v.base().coords())) });
    }
    if (v.norm() - 1.0).abs() > TANGENT_TOL.sqrt() {
        return Err(Error::InvalidParameter(format!("direction has norm {}, expected 1", v.norm())));
    }
    Ok(())
}

/// `x0 cos s + v sin s`, the `b = 0` lengthy geodesic with unit horizontal initial velocity.
pub fn great_circle(v: &TangentVector, s: f64) -> Result<SpherePoint> {
    check_unit_horizontal(v)?;
    let x0 = v.base().coords();
    SpherePoint::normalize(&axpy(s.sin(), v.vec(), &scaled(s.cos(), x0)))
}

/// `γ(|w|)` for the `b = 0` geodesic leaving `x0` in the direction `w/|w|`.
pub fn exp_map(w: &TangentVector) -> Result<SpherePoint> {
    if !w.is_horizontal() {
        return Err(Error::NotHorizontal { theta: dot(w.vec(), &times_i(w.base().coords())) });
    }
    let r = w.norm();
    if r == 0.0 {
        return Ok(w.base().clone());
    }
    great_circle(&w.scale(1.0 / r), r)
}


#[cfg(test)]
mod tests;
