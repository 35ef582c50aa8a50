//! Suite orchestration and the machine-readable report.
//!
//! Every suite is a fixed, ordered list of checks. Randomized checks draw each trial from
//! its own ChaCha stream derived from the configured seed, so results do not depend on
//! how trials are scheduled. A check records the worst residual over its trials together
//! with the inputs that produced it.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{check_bound, lichnerowicz_bound_exact, SATISFY_TOL};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geodesic_lab::{
    cc_distance, cotangent_lift, eigen_along_geodesic, great_circle, integrate_connection_geodesic,
    integrate_hj_geodesic, max_point, reach_set_mpi2, riemannian_distance, s3_quadratic, GeodesicState,
    ShootingBudget,
};
use crate::ph_calculus::{
    bochner_residual, connection_residuals, hessian_commutation_residual, lemma1_residual, lemma2_check,
    random_tangent_field, sublaplacian_frame, sublaplacian_greenleaf, third_commutation_residual, tw_hessian,
    ScalarField,
};
use crate::poly_engine::{ambient_dim, harmonic_basis, RationalPolynomial, SubspaceBasis};
use crate::spectral_probe::{
    harmonic_reeb_kernel, harmonic_weight_count, kernel_t0sq_shift, spectrum_fragment, weight_count,
};
use crate::sphere_model::{horizontal_frame, SpherePoint, TangentVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Spectrum,
    Bochner,
    Lemmas,
    Geodesics,
    Bound,
    S3,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Spectrum,
        SuiteName::Bochner,
        SuiteName::Lemmas,
        SuiteName::Geodesics,
        SuiteName::Bound,
        SuiteName::S3,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteName::Spectrum => "spectrum",
            SuiteName::Bochner => "bochner",
            SuiteName::Lemmas => "lemmas",
            SuiteName::Geodesics => "geodesics",
            SuiteName::Bound => "bound",
            SuiteName::S3 => "s3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    /// The formula or statement the check exercises.
    pub paper_ref: String,
    pub status: Status,
    pub residual: f64,
    pub inputs: Value,
}

impl Check {
    fn new(id: impl Into<String>, description: &str, formula: &str, residual: f64, tol: f64, inputs: Value) -> Self {
        let mut inputs = inputs;
        if let Value::Object(map) = &mut inputs {
            map.insert("tol".into(), json!(tol));
        }
        Check {
            id: id.into(),
            description: description.into(),
            paper_ref: formula.into(),
            status: if residual <= tol { Status::Pass } else { Status::Fail },
            residual,
            inputs,
        }
    }

    fn exact(id: impl Into<String>, description: &str, formula: &str, ok: bool, inputs: Value) -> Self {
        Check::new(id, description, formula, if ok { 0.0 } else { 1.0 }, 0.0, inputs)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: SuiteName,
    pub checks: Vec<Check>,
    pub max_residual: f64,
    pub mean_residual: f64,
}

impl SuiteReport {
    fn new(name: SuiteName, checks: Vec<Check>) -> Self {
        let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        let mean_residual =
            if checks.is_empty() { 0.0 } else { checks.iter().map(|c| c.residual).sum::<f64>() / checks.len() as f64 };
        SuiteReport { name, checks, max_residual, mean_residual }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub config: Config,
    pub suites: Vec<SuiteReport>,
    pub elapsed_seconds: Option<f64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// Where and how suites run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub exec: Exec,
    /// Directory receiving geodesic traces as CSV.
    pub csv_dir: Option<PathBuf>,
}

/// An independent random stream for one trial of one check.
fn trial_rng(seed: u64, salt: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((salt << 32) | trial as u64);
    rng
}

/// The worst trial of a randomized check.
struct Worst {
    residual: f64,
    mean: f64,
    input: Value,
}

fn worst(samples: Vec<(f64, Value)>) -> Worst {
    let mean = samples.iter().map(|s| s.0).sum::<f64>() / samples.len().max(1) as f64;
    let mut best = (f64::NEG_INFINITY, Value::Null);
    for (r, input) in samples {
        if r > best.0 || r.is_nan() {
            best = (r, input);
            if r.is_nan() {
                break;
            }
        }
    }
    let residual = if best.0.is_nan() { f64::NAN } else { best.0.max(0.0) };
    Worst { residual, mean, input: best.1 }
}

fn trials<F>(exec: Exec, count: usize, f: F) -> Result<Worst>
where
    F: Fn(usize) -> Result<(f64, Value)> + Sync + Send,
{
    Ok(worst(exec.map_range(count, f).into_iter().collect::<Result<Vec<_>>>()?))
}

fn randomized(id: &str, description: &str, formula: &str, w: Worst, tol: f64, extra: Value) -> Check {
    let mut inputs = extra;
    if let Value::Object(map) = &mut inputs {
        map.insert("worst".into(), w.input);
        map.insert("mean_residual".into(), json!(w.mean));
    }
    Check::new(id, description, formula, w.residual, tol, inputs)
}

fn harmonic_bases(n: usize, max_degree: u32, exec: Exec) -> Vec<SubspaceBasis> {
    exec.map(&(1..=max_degree).collect::<Vec<_>>(), |&l| harmonic_basis(n, l, Exec::Sequential))
}

fn rat(c: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}

fn spectrum_suite(c: &Config, exec: Exec) -> Result<Vec<Check>> {
    let n = c.n;
    let ni = n as i64;
    let mut checks = Vec::new();
    let degrees: Vec<u32> = (1..=c.degree).collect();
    let fragments = exec.map(&degrees, |&l| spectrum_fragment(n, l, Exec::Sequential));
    for fragment in fragments {
        let fragment = fragment?;
        let l = fragment.degree as i64;
        let mut lambdas: Vec<i64> = (0..=l).map(|j| (l - 2 * j).pow(2)).collect();
        lambdas.sort_unstable();
        lambdas.dedup();
        let expected: Vec<i64> = lambdas.iter().map(|lam| lam - l * (2 * ni + l)).collect();
        let computed = fragment.eigenvalues();
        checks.push(Check::exact(
            format!("spectrum.l{l}.eigenvalues"),
            "sublaplacian eigenvalues on harmonic polynomials of degree l",
            "Δ_b = −λ − l(2n+l) on Ker(T₀² + λ) ∩ H_l, λ = (l − 2j)²",
            computed == expected,
            json!({"n": n, "degree": l, "computed": computed, "expected": expected}),
        ));
        let mults: Vec<(i64, usize, usize)> = fragment
            .entries
            .iter()
            .map(|e| {
                let lam = rat(e.t0sq_eigenvalue);
                (e.sublaplacian_eigenvalue, e.multiplicity, harmonic_weight_count(n, fragment.degree, &lam))
            })
            .collect();
        checks.push(Check::exact(
            format!("spectrum.l{l}.multiplicities"),
            "eigenspace dimensions agree with weight counting",
            "dim Ker(T₀² + λ) ∩ H_l = W_l(λ) − W_{l−2}(λ)",
            mults.iter().all(|(_, a, b)| a == b),
            json!({"n": n, "degree": l, "mu_null_space_weights": mults}),
        ));
        let named: Vec<i64> = match l {
            1 => vec![-2 * ni],
            2 => vec![-4 * (ni + 1), -4 * ni],
            3 => vec![-6 * ni - 8, -6 * ni],
            _ => vec![],
        };
        if !named.is_empty() {
            checks.push(Check::exact(
                format!("spectrum.l{l}.named_values"),
                "closed-form eigenvalues are present",
                "−2n; −4(n+1), −4n; −6n−8, −6n ∈ Spec(Δ_b)",
                named.iter().all(|m| computed.contains(m)),
                json!({"n": n, "degree": l, "values": named, "computed": computed}),
            ));
        }
    }
    let shifts: Vec<i64> = vec![0, 1, 2, 3, 4, 5, 9];
    let dims = exec.map(&shifts, |&lam| -> Result<(i64, usize, usize)> {
        let r = rat(lam);
        Ok((lam, kernel_t0sq_shift(n, 2, &r, Exec::Sequential)?.dim(), weight_count(n, 2, &r)))
    });
    let dims = dims.into_iter().collect::<Result<Vec<_>>>()?;
    checks.push(Check::exact(
        "spectrum.kernel.p2",
        "dim Ker(T₀² + λ) ∩ P₂ by null space and by weight counting",
        "Ker(T₀² + λI) ∩ P_l spanned by monomials of weight ±√λ",
        dims.iter().all(|(_, a, b)| a == b),
        json!({"n": n, "lambda_null_space_weights": dims}),
    ));
    let reeb = harmonic_reeb_kernel(n, 2, exec)?.dim();
    let counted = harmonic_weight_count(n, 2, &rat(0));
    checks.push(Check::exact(
        "spectrum.kernel.h2",
        "dim Ker(T₀) ∩ H₂ by null space and by weight counting",
        "Ker(T₀) ∩ H₂",
        reeb == counted,
        json!({"n": n, "null_space": reeb, "weights": counted}),
    ));
    Ok(checks)
}

fn bochner_suite(c: &Config, exec: Exec) -> Result<Vec<Check>> {
    let bases = harmonic_bases(c.n, 3, exec);
    let w = trials(exec, c.trials, |t| {
        let mut rng = trial_rng(c.seed, 1, t);
        let f = ScalarField::random_combination(c.n, &bases, &mut rng);
        let p = SpherePoint::random(c.n, &mut rng);
        let r = bochner_residual(&f, &p)?.abs();
        Ok((r, json!({"trial": t, "point": p.coords(), "f": f.poly().to_string()})))
    })?;
    Ok(vec![randomized(
        "bochner.residual",
        "Bochner identity for random harmonic combinations of degree at most 3",
        "½Δ_b|∇^H f|² = |π_H∇²f|² + (∇^H f)(Δ_b f) + ρ(∇^H f, ∇^H f) + 2Lf",
        w,
        c.tol,
        json!({"n": c.n, "trials": c.trials, "seed": c.seed}),
    )])
}

fn lemmas_suite(c: &Config, exec: Exec) -> Result<Vec<Check>> {
    let n = c.n;
    let bases = harmonic_bases(n, 3, exec);
    let base = json!({"n": n, "trials": c.trials, "seed": c.seed});
    let random_field = |salt: u64, t: usize| {
        let mut rng = trial_rng(c.seed, salt, t);
        let f = ScalarField::random_combination(n, &bases, &mut rng);
        let p = SpherePoint::random(n, &mut rng);
        (rng, f, p)
    };
    let mut checks = Vec::new();

    let w = trials(exec, c.trials, |t| {
        let (_, f, p) = random_field(2, t);
        Ok((lemma1_residual(&f, &p)?.abs(), json!({"trial": t, "point": p.coords(), "f": f.poly().to_string()})))
    })?;
    checks.push(randomized(
        "lemmas.lemma1",
        "pointwise divergence identity",
        "div(J∇^H f) = 2n f₀",
        w,
        c.lemma_tol,
        base.clone(),
    ));

    let x1 = ScalarField::new(n, RationalPolynomial::var(ambient_dim(n), 0))?;
    let l2 = lemma2_check(&x1);
    checks.push(Check::exact(
        "lemmas.lemma2.x1",
        "integral identity for f = x¹ by exact sphere integration",
        "∫ Lf = −4n ∫ f₀²",
        l2.holds(),
        json!({"n": n, "lhs": l2.lhs.to_string(), "rhs": l2.rhs.to_string()}),
    ));
    let exact_trials = c.trials.min(10);
    let results = exec.map_range(exact_trials, |t| {
        let (_, f, _) = random_field(3, t);
        let check = lemma2_check(&f);
        (check.holds(), json!({"trial": t, "f": f.poly().to_string(), "lhs": check.lhs.to_string(), "rhs": check.rhs.to_string()}))
    });
    let failing: Vec<&Value> = results.iter().filter(|r| !r.0).map(|r| &r.1).collect();
    checks.push(Check::exact(
        "lemmas.lemma2.random",
        "integral identity for random harmonic combinations",
        "∫ Lf = −4n ∫ f₀²",
        failing.is_empty(),
        json!({"n": n, "trials": exact_trials, "seed": c.seed, "failing": failing}),
    ));

    let w = trials(exec, c.trials, |t| {
        let (mut rng, f, p) = random_field(4, t);
        let x = TangentVector::random_horizontal(&p, &mut rng);
        let y = TangentVector::random_horizontal(&p, &mut rng);
        let block = tw_hessian(&f, &p)?.antisymmetry_residual();
        let pair = hessian_commutation_residual(&f, &p, &x, &y)?.abs();
        Ok((block.max(pair), json!({"trial": t, "point": p.coords(), "f": f.poly().to_string()})))
    })?;
    checks.push(randomized(
        "lemmas.hessian_antisymmetry",
        "antisymmetric part of the horizontal Hessian",
        "(∇²f)(X,Y) − (∇²f)(Y,X) = 2Ω(X,Y) f₀",
        w,
        c.commutation_tol,
        base.clone(),
    ));

    let w = trials(exec, c.trials, |t| {
        let (mut rng, f, p) = random_field(5, t);
        let x = TangentVector::random_horizontal(&p, &mut rng);
        let y = TangentVector::random_horizontal(&p, &mut rng);
        let r = third_commutation_residual(&f, &p, &x, &y)?.abs();
        Ok((r, json!({"trial": t, "point": p.coords(), "f": f.poly().to_string()})))
    })?;
    checks.push(randomized(
        "lemmas.third_order_commutation",
        "third-order commutation through the Reeb direction",
        "(∇³f)(X,T,Y) − (∇³f)(Y,T,X) = 2Ω(X,Y) f₀₀",
        w,
        c.commutation_tol,
        base.clone(),
    ));

    let w = trials(exec, c.trials, |t| {
        let mut rng = trial_rng(c.seed, 6, t);
        let p = SpherePoint::random(n, &mut rng);
        let (x, y, z) = (random_tangent_field(n, &mut rng), random_tangent_field(n, &mut rng), random_tangent_field(n, &mut rng));
        let r = connection_residuals(&p, &x, &y, &z)?;
        Ok((r.max(), json!({"trial": t, "point": p.coords(), "components": [r.metric, r.parallel_j, r.torsion, r.parallel_reeb]})))
    })?;
    checks.push(randomized(
        "lemmas.connection_axioms",
        "metric compatibility, parallel J, pure torsion and parallel Reeb field",
        "∇g = 0, ∇J = 0, T_∇(X,Y) = 2Ω(X,Y)T, ∇T = 0",
        w,
        c.connection_tol,
        base.clone(),
    ));

    let w = trials(exec, c.trials, |t| {
        let (_, f, p) = random_field(7, t);
        let r = (sublaplacian_frame(&f, &p)? - sublaplacian_greenleaf(&f, &p)?).abs();
        Ok((r, json!({"trial": t, "point": p.coords(), "f": f.poly().to_string()})))
    })?;
    checks.push(randomized(
        "lemmas.route_agreement",
        "frame sublaplacian against the ambient formula",
        "Σ_j (X_j² − ∇_{X_j}X_j) f = Δ_S f − T²f",
        w,
        c.route_tol,
        base,
    ));
    Ok(checks)
}

fn geodesics_suite(c: &Config, opts: &RunOptions) -> Result<Vec<Check>> {
    let exec = opts.exec;
    let n = c.n;
    let length = c.steps as f64 * c.step_size;
    let base = json!({"n": n, "trials": c.geodesic_trials, "seed": c.seed, "length": length, "step": c.step_size});
    if let Some(dir) = &opts.csv_dir {
        std::fs::create_dir_all(dir)?;
    }
    let results = exec.map_range(c.geodesic_trials, |t| -> Result<Value> {
        let mut rng = trial_rng(c.seed, 10, t);
        let p = SpherePoint::random(n, &mut rng);
        let v = TangentVector::random_unit_horizontal(&p, &mut rng);
        let b = if t == 0 { 0.0 } else { rng.gen_range(-3.0..3.0) };
        let init = GeodesicState::new(p.clone(), v.clone(), b)?;
        let cn = integrate_connection_geodesic(&init, length, c.step_size)?;
        let hj = integrate_hj_geodesic(&cotangent_lift(&v, b)?, length, c.step_size)?;
        if let Some(dir) = &opts.csv_dir {
            cn.save_csv(&dir.join(format!("geodesic_{t:03}_connection.csv")))?;
            hj.save_csv(&dir.join(format!("geodesic_{t:03}_hamilton.csv")))?;
        }
        let agreement = cn
            .samples
            .iter()
            .zip(&hj.samples)
            .map(|(a, h)| a.point.coords().iter().zip(h.point.coords()).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(json!({
            "trial": t, "point": p.coords(), "velocity": v.vec(), "b": b,
            "agreement": agreement,
            "hamiltonian_drift": hj.diagnostics.hamiltonian_drift,
            "theta": cn.diagnostics.max_theta.max(hj.diagnostics.max_theta),
            "speed_drift": cn.diagnostics.max_speed_drift,
            "chart_switches": hj.diagnostics.chart_switches,
        }))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let pick = |key: &str| -> Worst {
        worst(results.iter().map(|r| (r[key].as_f64().unwrap_or(f64::NAN), r.clone())).collect())
    };
    let mut checks = vec![
        randomized(
            "geodesics.hj_agreement",
            "Hamiltonian and connection geodesics with matched initial data coincide",
            "γ̇ = g(γ)ξ with ξ(T) = b  ⇔  ∇_γ̇ γ̇ = −2b Jγ̇",
            pick("agreement"),
            c.hj_tol,
            base.clone(),
        ),
        randomized(
            "geodesics.hamiltonian_drift",
            "conservation of H along the canonical equations",
            "H(x,ξ) = ½ g^{ij}(x) ξ_i ξ_j",
            pick("hamiltonian_drift"),
            c.hamiltonian_tol,
            base.clone(),
        ),
        randomized(
            "geodesics.lengthiness",
            "geodesics with horizontal initial data stay horizontal",
            "θ(γ̇) = 0",
            pick("theta"),
            c.lengthiness_tol,
            base.clone(),
        ),
        randomized(
            "geodesics.speed",
            "speed is conserved along connection geodesics",
            "|γ̇| = const",
            pick("speed_drift"),
            c.speed_tol,
            base,
        ),
    ];

    let w = trials(exec, c.geodesic_trials, |t| {
        let mut rng = trial_rng(c.seed, 11, t);
        let p = SpherePoint::random(n, &mut rng);
        let v = TangentVector::random_unit_horizontal(&p, &mut rng);
        let trace = integrate_connection_geodesic(&GeodesicState::new(p.clone(), v.clone(), 0.0)?, TAU, c.step_size)?;
        let expected = great_circle(&v, TAU)?;
        let r = trace.end().point.coords().iter().zip(expected.coords()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        Ok((r, json!({"trial": t, "point": p.coords(), "velocity": v.vec()})))
    })?;
    checks.push(randomized(
        "geodesics.great_circle",
        "b = 0 geodesics are horizontal great circles",
        "γ(s) = x₀ cos s + v sin s",
        w,
        c.great_circle_tol,
        json!({"n": n, "trials": c.geodesic_trials, "seed": c.seed, "length": TAU, "step": c.step_size}),
    ));

    let budget = ShootingBudget { tolerance: c.cc_tol, ..ShootingBudget::default() };
    let pairs = exec.map_range(c.cc_pairs, |t| -> Result<(f64, bool, Value)> {
        let mut rng = trial_rng(c.seed, 12, t);
        let x = SpherePoint::random(n, &mut rng);
        let y = SpherePoint::random(n, &mut rng);
        let est = cc_distance(&x, &y, &budget, Exec::Sequential)?;
        let d = riemannian_distance(&x, &y);
        let input = json!({"trial": t, "x": x.coords(), "y": y.coords(), "riemannian": d,
            "estimate": est.estimate, "endpoint_error": est.endpoint_error, "converged": est.converged});
        Ok((d - est.estimate, est.converged, input))
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    let contraction = worst(pairs.iter().filter(|p| p.1).map(|p| (p.0, p.2.clone())).collect());
    checks.push(randomized(
        "geodesics.contraction",
        "Riemannian distance never exceeds the shooting estimate",
        "d(x,y) ≤ ρ(x,y)",
        contraction,
        c.contraction_tol,
        json!({"n": n, "pairs": c.cc_pairs, "seed": c.seed}),
    ));
    let misses: Vec<Value> = pairs.iter().filter(|p| !p.1).map(|p| p.2.clone()).collect();
    let miss_rate = misses.len() as f64 / c.cc_pairs as f64;
    checks.push(Check::new(
        "geodesics.shooting",
        "fraction of pairs where shooting misses the endpoint tolerance",
        "ρ(x,y) = inf of lengths of lengthy curves from x to y",
        miss_rate,
        1.0 - c.cc_success_rate,
        json!({"n": n, "pairs": c.cc_pairs, "seed": c.seed, "endpoint_tol": c.cc_tol, "budget": budget, "misses": misses}),
    ));
    Ok(checks)
}

fn bound_suite(c: &Config, exec: Exec) -> Result<Vec<Check>> {
    let n = c.n;
    let report = check_bound(n, c.degree_max, c.k_samples, c.seed, exec)?;
    let k_exact = rat(2 * (n as i64 + 1));
    let bound_exact = lichnerowicz_bound_exact(n, &k_exact)?;
    let bound_exact_f = bound_exact.to_f64().unwrap_or(f64::NAN);
    let mut checks = vec![
        Check::new(
            "bound.k",
            "sampled minimum of the Ricci term equals 2(n+1)",
            "ρ(X,X) + 2A(X,JX) ≥ k G(X,X)",
            (report.k.k - 2.0 * (n as f64 + 1.0)).abs().max(report.k.variance),
            c.equality_tol,
            json!({"n": n, "estimate": report.k, "expected": k_exact.to_string()}),
        ),
        Check::new(
            "bound.value",
            "floating-point bound against the exact rational bound",
            "−μ ≥ 2nk/(2n−1)",
            (report.bound - bound_exact_f).abs(),
            c.equality_tol,
            json!({"n": n, "bound": report.bound, "exact": bound_exact.to_string(), "entries": report.entries}),
        ),
    ];
    for e in report.kernel_entries() {
        checks.push(Check::new(
            format!("bound.kernel.l{}.mu{}", e.degree, e.mu),
            "eigenvalue with a Reeb-invariant eigenfunction obeys the bound",
            "Eigen(Δ_b; μ) ∩ Ker T ≠ 0  ⇒  −μ ≥ 2nk/(2n−1)",
            (report.bound - (-e.mu as f64)).max(0.0),
            SATISFY_TOL,
            json!({"n": n, "entry": e, "bound": report.bound}),
        ));
    }
    Ok(checks)
}

fn s3_suite(c: &Config, exec: Exec) -> Result<Vec<Check>> {
    let (a, b) = (c.a, c.b);
    let alpha = a.hypot(b);
    let f = s3_quadratic(a, b)?;
    let x0 = max_point(a, b)?;
    let frame = horizontal_frame(&x0)?;
    let base = json!({"a": a, "b": b, "alpha": alpha, "x0": x0.coords()});
    let mut checks = Vec::new();

    let w = trials(exec, c.reach_samples, |k| {
        let phi = TAU * k as f64 / c.reach_samples as f64;
        let v = frame.combine(&[phi.cos(), phi.sin()]);
        let trace = integrate_connection_geodesic(&GeodesicState::new(x0.clone(), v.clone(), 0.0)?, PI, c.step_size)?;
        let fit = eigen_along_geodesic(&f, &trace)?;
        let r = fit.residual.max((fit.amplitude - alpha).abs()).max((fit.frequency - 2.0).abs());
        Ok((r, json!({"direction": v.vec(), "fit": fit})))
    })?;
    checks.push(randomized(
        "s3.cosine_fit",
        "f along unit geodesics from a maximum point is α cos 2s",
        "f(γ(s)) = α cos(s√c), c = k/(2n−1) = 4",
        w,
        c.fit_tol,
        base.clone(),
    ));

    let w = trials(exec, c.trials, |t| {
        let mut rng = trial_rng(c.seed, 20, t);
        let p = SpherePoint::random(1, &mut rng);
        let h = tw_hessian(&f, &p)?;
        let fp = f.eval(&p)?;
        let r = h
            .horizontal()
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().enumerate().map(move |(k, v)| (v + if j == k { 4.0 * fp } else { 0.0 }).abs()))
            .fold(0.0, f64::max);
        Ok((r, json!({"trial": t, "point": p.coords()})))
    })?;
    checks.push(randomized(
        "s3.hessian_identity",
        "horizontal Hessian of the extremal eigenfunction",
        "π_H∇²f + 4f G = 0",
        w,
        c.identity_tol,
        json!({"a": a, "b": b, "trials": c.trials, "seed": c.seed}),
    ));

    let set = reach_set_mpi2(a, b, c.reach_samples)?;
    let resolved = set.resolved_order(c.reach_tol);
    let points: Vec<&[f64]> = set.points.iter().map(|p| p.point.coords()).collect();
    let reach = json!({"a": a, "b": b, "alpha": alpha, "samples": c.reach_samples, "resolved_order": resolved, "points": points});
    checks.push(Check::new(
        "s3.reach_membership",
        "γ(π/2) lies on the parametrized critical set",
        "M_{π/2} ⊂ {(λ, μ, −bλ/(α−a), −bμ/(α−a)) : λ² + μ² = (α−a)/(2α)}",
        set.max_membership_residual(),
        c.reach_tol,
        reach.clone(),
    ));
    checks.push(Check::new(
        "s3.reach_value",
        "f attains its minimum −α on the reached set",
        "f(γ(π/2)) = −α",
        set.max_value_error(),
        c.critical_tol,
        base.clone(),
    ));
    checks.push(Check::new(
        "s3.reach_critical",
        "reached points are critical",
        "∇f = 0 on M_{π/2}",
        set.max_gradient_norm(),
        c.critical_tol,
        base.clone(),
    ));
    checks.push(Check::new(
        "s3.reach_degenerate",
        "the Reeb direction is degenerate for the Hessian",
        "(∇²f)(T,T) = 0 on M_{π/2}",
        set.max_hessian_tt(),
        c.critical_tol,
        base,
    ));
    Ok(checks)
}

/// Runs one suite. The configuration is validated before any computation.
pub fn run_suite(name: SuiteName, config: &Config, opts: &RunOptions) -> Result<SuiteReport> {
    config.validate()?;
    if name == SuiteName::S3 && config.b == 0.0 {
        return Err(Error::Config("the s3 suite needs b != 0".into()));
    }
    let exec = opts.exec;
    let checks = match name {
        SuiteName::Spectrum => spectrum_suite(config, exec)?,
        SuiteName::Bochner => bochner_suite(config, exec)?,
        SuiteName::Lemmas => lemmas_suite(config, exec)?,
        SuiteName::Geodesics => geodesics_suite(config, opts)?,
        SuiteName::Bound => bound_suite(config, exec)?,
        SuiteName::S3 => s3_suite(config, exec)?,
    };
    Ok(SuiteReport::new(name, checks))
}

/// Runs several suites in order and assembles the report.
pub fn run_suites(names: &[SuiteName], config: &Config, opts: &RunOptions) -> Result<Report> {
    config.validate()?;
    let start = Instant::now();
    let suites = names.iter().map(|&n| run_suite(n, config, opts)).collect::<Result<Vec<_>>>()?;
    Ok(Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        suites,
        elapsed_seconds: config.timing.then(|| start.elapsed().as_secs_f64()),
    })
}
