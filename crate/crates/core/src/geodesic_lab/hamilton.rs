//! Canonical equations of the sub-Riemannian Hamiltonian in stereographic charts.
//!
//! The chart `North` is `u = x'/(1 + x_N)` and `South` is `u = x'/(1 − x_N)`, where `x'`
//! collects the first `2n+1` ambient coordinates. In either chart the cometric is
//! `g^{ij} = Σ_a (Dφ X_a)^i (Dφ X_a)^j` over an orthonormal frame of `H`, which equals
//! `Dφ π_H Dφᵀ`, so `H(u, ξ) = ½ |π_H Dφᵀ ξ|²` with `x = ψ(u)` the inverse chart map.

use num_dual::{Dual64, DualNum};

use super::connection::{check_step, step_count};
use super::{GeodesicTrace, TraceSample};
use crate::error::{Error, Result};
use crate::sphere_model::{dot, project_h_raw, times_i, SpherePoint, TangentVector};

/// Coordinates are handed to the other chart once `|u|` exceeds this radius.
const HANDOFF_RADIUS: f64 = 2.0;
/// Coordinates this large mean the trajectory reached the chart's pole within a step.
const EXIT_RADIUS: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Chart {
    North,
    South,
}

impl Chart {
    fn sign(self) -> f64 {
        match self {
            Chart::North => 1.0,
            Chart::South => -1.0,
        }
    }

    fn other(self) -> Chart {
        match self {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        }
    }

    /// The chart in which `p` sits closest to the origin.
    pub fn preferred(p: &SpherePoint) -> Chart {
        if p.coords()[p.ambient_dim() - 1] >= 0.0 {
            Chart::North
        } else {
            Chart::South
        }
    }

    pub fn coordinates(self, p: &SpherePoint) -> Result<Vec<f64>> {
        let x = p.coords();
        let m = x.len() - 1;
        let den = 1.0 + self.sign() * x[m];
        if den.abs() < 1e-12 {
            return Err(Error::InvalidParameter(format!("point is the pole of the {self:?} chart")));
        }
        Ok(x[..m].iter().map(|c| c / den).collect())
    }

    fn psi<D: DualNum<f64> + Copy>(self, u: &[D]) -> Vec<D> {
        let s = u.iter().fold(D::from(0.0), |acc, &c| acc + c * c);
        let den = s + 1.0;
        let mut x: Vec<D> = u.iter().map(|&c| c * 2.0 / den).collect();
        x.push((-s + 1.0) * self.sign() / den);
        x
    }

    pub fn point(self, u: &[f64]) -> Result<SpherePoint> {
        SpherePoint::normalize(&self.psi(u))
    }

    /// `Dφᵀ ξ` at `x = ψ(u)`, i.e. the ambient covector representing `ξ`.
    fn pull_back<D: DualNum<f64> + Copy>(self, x: &[D], xi: &[f64]) -> Vec<D> {
        let m = x.len() - 1;
        let den = x[m] * self.sign() + 1.0;
        let mut a: Vec<D> = xi.iter().map(|&c| D::from(c) / den).collect();
        let last = x[..m].iter().zip(xi).fold(D::from(0.0), |acc, (&xk, &c)| acc + xk * c);
        a.push(-last * self.sign() / (den * den));
        a
    }

    /// `∂_j ψ(u)` as ambient vectors.
    fn jacobian(self, u: &[f64]) -> Vec<Vec<f64>> {
        let s: f64 = u.iter().map(|c| c * c).sum();
        let den = 1.0 + s;
        (0..u.len())
            .map(|j| {
                let mut col: Vec<f64> = u.iter().map(|uk| -4.0 * uk * u[j] / (den * den)).collect();
                col[j] += 2.0 / den;
                col.push(-4.0 * self.sign() * u[j] / (den * den));
                col
            })
            .collect()
    }
}

fn hamiltonian_generic<D: DualNum<f64> + Copy>(chart: Chart, u: &[D], xi: &[f64]) -> D {
    let x = chart.psi(u);
    let a = chart.pull_back(&x, xi);
    let ix: Vec<D> = {
        let h = x.len() / 2;
        x[h..].iter().map(|&c| -c).chain(x[..h].iter().copied()).collect()
    };
    let dot = |p: &[D], q: &[D]| p.iter().zip(q).fold(D::from(0.0), |acc, (&s, &t)| acc + s * t);
    let (ax, ai) = (dot(&a, &x), dot(&a, &ix));
    let pa: Vec<D> = (0..a.len()).map(|k| a[k] - ax * x[k] - ai * ix[k]).collect();
    dot(&pa, &pa) * 0.5
}

/// A covector `ξ` at the point with chart coordinates `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentState {
    pub chart: Chart,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl CotangentState {
    pub fn new(chart: Chart, x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.len() < 3 || x.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: x.len(), got: xi.len() });
        }
        Ok(CotangentState { chart, x, xi })
    }

    pub fn point(&self) -> Result<SpherePoint> {
        self.chart.point(&self.x)
    }

    /// The ambient covector `Dφᵀ ξ`, whose restriction to the tangent space is `ξ`.
    pub fn ambient_covector(&self) -> Vec<f64> {
        self.chart.pull_back(&self.chart.psi(&self.x), &self.xi)
    }

    /// `ξ(w)` for an ambient tangent vector `w` at [`CotangentState::point`].
    pub fn pair(&self, w: &[f64]) -> f64 {
        dot(&self.ambient_covector(), w)
    }

    /// `ξ(T)`, conserved along the flow and equal to the multiplier `b`.
    pub fn reeb_pairing(&self) -> f64 {
        let x = self.chart.psi(&self.x);
        self.pair(&times_i(&x))
    }

    pub fn hamiltonian(&self) -> f64 {
        hamiltonian_generic(self.chart, &self.x, &self.xi)
    }

    /// `g(u) ξ` in chart coordinates.
    pub fn cometric_image(&self) -> Vec<f64> {
        let x = self.chart.psi(&self.x);
        let pa = project_h_raw(&x, &self.chart.pull_back(&x, &self.xi));
        let m = self.x.len();
        let den = 1.0 + self.chart.sign() * x[m];
        (0..m).map(|k| (pa[k] - self.chart.sign() * x[k] * pa[m] / den) / den).collect()
    }

    /// The ambient velocity `π_H Dφᵀ ξ` of the projected curve.
    pub fn velocity(&self) -> Vec<f64> {
        let x = self.chart.psi(&self.x);
        project_h_raw(&x, &self.chart.pull_back(&x, &self.xi))
    }

    /// `∂H/∂u`, one forward-mode dual pass per coordinate.
    pub fn hamiltonian_gradient(&self) -> Vec<f64> {
        (0..self.x.len())
            .map(|j| {
                let u: Vec<Dual64> = self
                    .x
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| Dual64::new(c, if k == j { 1.0 } else { 0.0 }))
                    .collect();
                hamiltonian_generic(self.chart, &u, &self.xi).eps
            })
            .collect()
    }

    /// Re-expresses the state in the other chart.
    pub fn switch_chart(&self) -> Result<CotangentState> {
        let p = self.point()?;
        let chart = self.chart.other();
        let u = chart.coordinates(&p)?;
        let a = self.ambient_covector();
        let xi = chart.jacobian(&u).iter().map(|col| dot(&a, col)).collect();
        Ok(CotangentState { chart, x: u, xi })
    }

    fn derivative(&self) -> (Vec<f64>, Vec<f64>) {
        let du = self.cometric_image();
        let dxi = self.hamiltonian_gradient().iter().map(|g| -g).collect();
        (du, dxi)
    }

    fn shifted(&self, h: f64, d: &(Vec<f64>, Vec<f64>)) -> CotangentState {
        CotangentState {
            chart: self.chart,
            x: self.x.iter().zip(&d.0).map(|(a, b)| a + h * b).collect(),
            xi: self.xi.iter().zip(&d.1).map(|(a, b)| a + h * b).collect(),
        }
    }

    fn radius(&self) -> f64 {
        self.x.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// `ξ = ⟨v + b·iq, ·⟩` restricted to the tangent space at `v`'s base point, expressed in
/// the preferred chart: `ξ(T) = b` and `ξ(X) = ⟨v, X⟩` for horizontal `X`.
pub fn cotangent_lift(v: &TangentVector, b: f64) -> Result<CotangentState> {
    if !v.is_horizontal() {
        return Err(Error::NotHorizontal { theta: dot(v.vec(), &times_i(v.base().coords())) });
    }
    let p = v.base();
    let chart = Chart::preferred(p);
    let u = chart.coordinates(p)?;
    let iq = times_i(p.coords());
    let a: Vec<f64> = v.vec().iter().zip(&iq).map(|(vk, ik)| vk + b * ik).collect();
    let xi = chart.jacobian(&u).iter().map(|col| dot(&a, col)).collect();
    CotangentState::new(chart, u, xi)
}

/// The canonical lift, normalized by `ξ(T) = 1`.
pub fn canonical_lift(v: &TangentVector) -> Result<CotangentState> {
    cotangent_lift(v, 1.0)
}

/// Integrates `u̇ = ∂H/∂ξ`, `ξ̇ = −∂H/∂u` with classical Runge–Kutta, handing the state
/// to the other chart whenever the coordinates leave the disc of radius 2.
pub fn integrate_hj_geodesic(init: &CotangentState, t_max: f64, step: f64) -> Result<GeodesicTrace> {
    check_step(step)?;
    let h0 = init.hamiltonian();
    if !(h0 > 0.0) {
        return Err(Error::InvalidParameter(format!("Hamiltonian {h0} must be positive")));
    }
    let steps = step_count(t_max, step)?;
    let h = if steps == 0 { 0.0 } else { t_max / steps as f64 };
    let sample = |st: &CotangentState, t: f64| -> Result<TraceSample> {
        Ok(TraceSample { s: t, point: st.point()?, velocity: st.velocity(), b: st.reeb_pairing() })
    };
    let mut state = init.clone();
    let mut switches = 0;
    let mut drift: f64 = 0.0;
    let mut samples = vec![sample(&state, 0.0)?];
    for k in 1..=steps {
        let k1 = state.derivative();
        let k2 = state.shifted(h / 2.0, &k1).derivative();
        let k3 = state.shifted(h / 2.0, &k2).derivative();
        let k4 = state.shifted(h, &k3).derivative();
        let combined = (
            (0..state.x.len()).map(|i| (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]) / 6.0).collect(),
            (0..state.x.len()).map(|i| (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]) / 6.0).collect(),
        );
        state = state.shifted(h, &combined);
        let t = h * k as f64;
        let r = state.radius();
        if !r.is_finite() || r > EXIT_RADIUS {
            return Err(Error::ChartExit { t });
        }
        if r > HANDOFF_RADIUS {
            state = state.switch_chart()?;
            switches += 1;
        }
        drift = drift.max((state.hamiltonian() - h0).abs());
        samples.push(sample(&state, t)?);
    }
    let mut trace = GeodesicTrace::from_samples(samples);
    trace.diagnostics.hamiltonian_drift = Some(drift);
    trace.diagnostics.chart_switches = switches;
    Ok(trace)
}
