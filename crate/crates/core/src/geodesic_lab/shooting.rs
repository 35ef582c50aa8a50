//! Upper bounds on the Carnot–Carathéodory distance by shooting lengthy geodesics.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::connection::closed_form_state;
use super::{GeodesicTrace, TraceSample};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::sphere_model::{dot, horizontal_frame, norm, SpherePoint, TangentVector};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ShootingBudget {
    /// Initial horizontal directions tried at the start point.
    pub directions: usize,
    /// Multipliers tried, evenly spaced in `[-b_range, b_range]`.
    pub b_values: usize,
    pub b_range: f64,
    /// Lengths tried, evenly spaced in `(0, 2π]`.
    pub lengths: usize,
    /// How many of the best grid candidates are refined.
    pub refine: usize,
    pub iterations: usize,
    /// Endpoint error below which a shot counts as converged.
    pub tolerance: f64,
    /// Seed for the random directions used when `n > 1`.
    pub seed: u64,
}

impl Default for ShootingBudget {
    fn default() -> Self {
        ShootingBudget {
            directions: 24,
            b_values: 13,
            b_range: 4.0,
            lengths: 12,
            refine: 48,
            iterations: 100,
            tolerance: 1e-5,
            seed: 7,
        }
    }
}

/// A shot: unit horizontal direction, multiplier and length.
#[derive(Clone, Debug)]
pub struct ShootingParams {
    pub direction: TangentVector,
    pub b: f64,
    pub length: f64,
}

#[derive(Clone, Debug)]
pub struct CcEstimate {
    /// Length of the best shot, an upper bound for the distance whenever `converged`.
    pub estimate: f64,
    pub converged: bool,
    pub endpoint_error: f64,
    pub certificate: ShootingParams,
}

impl CcEstimate {
    /// Samples the certificate geodesic at `samples + 1` evenly spaced parameters.
    pub fn certificate_trace(&self, samples: usize) -> Result<GeodesicTrace> {
        let p = &self.certificate;
        let x = p.direction.base().coords();
        let count = samples.max(1);
        let out = (0..=count)
            .map(|k| {
                let s = p.length * k as f64 / count as f64;
                let (pos, vel) = closed_form_state(x, p.direction.vec(), p.b, s);
                Ok(TraceSample { s, point: SpherePoint::normalize(&pos)?, velocity: vel, b: p.b })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeodesicTrace::from_samples(out))
    }
}

/// The round-metric distance `arccos⟨x, y⟩`.
pub fn riemannian_distance(x: &SpherePoint, y: &SpherePoint) -> f64 {
    dot(x.coords(), y.coords()).clamp(-1.0, 1.0).acos()
}

struct Problem<'a> {
    x: &'a [f64],
    y: &'a [f64],
    frame: Vec<Vec<f64>>,
}

impl Problem<'_> {
    fn direction(&self, c: &[f64]) -> Vec<f64> {
        let scale = norm(c);
        let mut v = vec![0.0; self.x.len()];
        for (ck, xk) in c.iter().zip(&self.frame) {
            for (vi, xi) in v.iter_mut().zip(xk) {
                *vi += ck / scale * xi;
            }
        }
        v
    }

    fn endpoint_error(&self, p: &[f64]) -> f64 {
        let m = self.frame.len();
        let (end, _) = closed_form_state(self.x, &self.direction(&p[..m]), p[m], p[m + 1]);
        end.iter().zip(self.y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    fn residual(&self, p: &[f64]) -> DVector<f64> {
        let m = self.frame.len();
        let (end, _) = closed_form_state(self.x, &self.direction(&p[..m]), p[m], p[m + 1]);
        let mut r: Vec<f64> = end.iter().zip(self.y).map(|(a, b)| a - b).collect();
        r.push(p[..m].iter().map(|c| c * c).sum::<f64>() - 1.0);
        DVector::from_vec(r)
    }

    fn jacobian(&self, p: &[f64]) -> DMatrix<f64> {
        let h = 1e-7;
        let rows = self.x.len() + 1;
        let mut jac = DMatrix::zeros(rows, p.len());
        for j in 0..p.len() {
            let mut plus = p.to_vec();
            let mut minus = p.to_vec();
            plus[j] += h;
            minus[j] -= h;
            let d = (self.residual(&plus) - self.residual(&minus)) / (2.0 * h);
            jac.set_column(j, &d);
        }
        jac
    }

    /// Levenberg–Marquardt on the endpoint residual.
    fn refine(&self, start: &[f64], iterations: usize) -> Vec<f64> {
        let mut p = start.to_vec();
        let mut r = self.residual(&p);
        let mut cost = r.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..iterations {
            if cost < 1e-26 {
                break;
            }
            let jac = self.jacobian(&p);
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let grad = &jt * &r;
            let mut improved = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += lambda * (jtj[(i, i)] + 1e-9);
                }
                let Some(step) = a.lu().solve(&(-&grad)) else {
                    lambda *= 4.0;
                    continue;
                };
                let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let tr = self.residual(&trial);
                let tc = tr.norm_squared();
                if tc.is_finite() && tc < cost {
                    p = trial;
                    r = tr;
                    cost = tc;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        p
    }
}

fn initial_directions(dim: usize, budget: &ShootingBudget) -> Vec<Vec<f64>> {
    if dim == 2 {
        return (0..budget.directions)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / budget.directions as f64;
                vec![phi.cos(), phi.sin()]
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    (0..budget.directions)
        .map(|_| {
            let c: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = norm(&c);
            c.iter().map(|v| v / r).collect()
        })
        .collect()
}

/// Estimates the Carnot–Carathéodory distance from `x` to `y` by shooting geodesics of
/// the Tanaka–Webster connection over a grid of directions, multipliers and lengths,
/// then refining the best candidates by Levenberg–Marquardt. The shortest converged shot
/// is returned; if none converges the most accurate one is returned with
/// `converged = false`.
pub fn cc_distance(x: &SpherePoint, y: &SpherePoint, budget: &ShootingBudget, exec: Exec) -> Result<CcEstimate> {
    if x.ambient_dim() != y.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: x.ambient_dim(), got: y.ambient_dim() });
    }
    if budget.directions == 0 || budget.b_values == 0 || budget.lengths == 0 || budget.refine == 0 {
        return Err(Error::InvalidParameter("shooting budget must be nonempty".into()));
    }
    if x == y {
        return Ok(CcEstimate {
            estimate: 0.0,
            converged: true,
            endpoint_error: 0.0,
            certificate: ShootingParams { direction: TangentVector::zero(x), b: 0.0, length: 0.0 },
        });
    }
    let frame = horizontal_frame(x)?;
    let problem = Problem {
        x: x.coords(),
        y: y.coords(),
        frame: frame.vectors().iter().map(|v| v.vec().to_vec()).collect(),
    };
    let dirs = initial_directions(frame.len(), budget);
    let b_at = |k: usize| {
        if budget.b_values == 1 {
            0.0
        } else {
            -budget.b_range + 2.0 * budget.b_range * k as f64 / (budget.b_values - 1) as f64
        }
    };
    let per_dir = budget.b_values * budget.lengths;
    let grid: Vec<Vec<f64>> = exec.map_range(dirs.len() * per_dir, |idx| {
        let (d, rest) = (idx / per_dir, idx % per_dir);
        let (bk, lk) = (rest / budget.lengths, rest % budget.lengths);
        let mut p = dirs[d].clone();
        p.push(b_at(bk));
        p.push(std::f64::consts::TAU * (lk + 1) as f64 / budget.lengths as f64);
        p
    });
    let errors = exec.map(&grid, |p| problem.endpoint_error(p));
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| errors[a].total_cmp(&errors[b]).then(a.cmp(&b)));
    order.truncate(budget.refine);
    let refined = exec.map(&order, |&i| {
        let p = problem.refine(&grid[i], budget.iterations);
        let err = problem.endpoint_error(&p);
        (p, err)
    });
    let m = frame.len();
    let best = refined
        .iter()
        .filter(|(p, e)| *e < budget.tolerance && p.iter().all(|c| c.is_finite()))
        .min_by(|a, b| a.0[m + 1].abs().total_cmp(&b.0[m + 1].abs()))
        .map(|r| (r, true))
        .or_else(|| refined.iter().min_by(|a, b| a.1.total_cmp(&b.1)).map(|r| (r, false)));
    let Some(((p, err), converged)) = best else {
        return Err(Error::InvalidParameter("no shooting candidates".into()));
    };
    let mut c = problem.direction(&p[..m]);
    let (mut b, mut length) = (p[m], p[m + 1]);
    if length < 0.0 {
        c.iter_mut().for_each(|v| *v = -*v);
        b = -b;
        length = -length;
    }
    let direction = TangentVector::horizontal(x, c)?;
    Ok(CcEstimate {
        estimate: length,
        converged,
        endpoint_error: *err,
        certificate: ShootingParams { direction, b, length },
    })
}
