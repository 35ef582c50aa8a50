//! The Lichnerowicz-type lower bound `−μ ≥ 2nk/(2n−1)` for sublaplacian eigenvalues
//! whose eigenspace meets the kernel of the Reeb field, checked on sphere spectra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ph_calculus::ricci;
use crate::spectral_probe::{spectrum_fragment, MAX_DEGREE};
use crate::sphere_model::{SpherePoint, TangentVector};

/// Tolerance for `−μ ≥ bound`.
pub const SATISFY_TOL: f64 = 1e-9;
/// Tolerance for reporting `−μ = bound`.
pub const EQUALITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KEstimate {
    /// The minimum of `ρ(X,X) + 2A(X,JX)` over the samples.
    pub k: f64,
    pub mean: f64,
    pub variance: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Samples `ρ(X,X) + 2A(X,JX)` over random unit horizontal `X` at random points and
/// returns its minimum. The pseudo-Hermitian torsion `A` vanishes on spheres.
pub fn estimate_k(n: usize, num_samples: usize, seed: u64) -> Result<KEstimate> {
    if num_samples == 0 {
        return Err(Error::InvalidParameter("estimate_k needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..num_samples)
        .map(|_| {
            let p = SpherePoint::random(n, &mut rng);
            let x = TangentVector::random_unit_horizontal(&p, &mut rng);
            ricci(&x)
        })
        .collect::<Result<Vec<f64>>>()?;
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / count;
    let k = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(KEstimate { k, mean, variance, samples: num_samples, seed })
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("CR dimension n must be at least 1".into()));
    }
    Ok(())
}

/// `2nk/(2n−1)` in floating point.
pub fn lichnerowicz_bound(n: usize, k: f64) -> Result<f64> {
    check_n(n)?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
    }
    Ok(2.0 * n as f64 * k / (2.0 * n as f64 - 1.0))
}

/// `2nk/(2n−1)` exactly.
pub fn lichnerowicz_bound_exact(n: usize, k: &BigRational) -> Result<BigRational> {
    check_n(n)?;
    if !k.is_positive() {
        return Err(Error::InvalidParameter(format!("k = {k} must be positive")));
    }
    let n = BigInt::from(n);
    Ok(k * BigRational::new(BigInt::from(2) * &n, BigInt::from(2) * &n - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub degree: u32,
    /// Eigenvalue of `Δ_b`.
    pub mu: i64,
    /// `λ` with `T₀² = −λ` on the same eigenspace.
    pub t0sq_eigenvalue: i64,
    pub multiplicity: usize,
    /// Whether the eigenspace lies in the kernel of the Reeb field.
    pub reeb_kernel: bool,
    pub satisfies: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: KEstimate,
    pub bound: f64,
    pub degree_max: u32,
    pub entries: Vec<BoundEntry>,
    pub satisfy_tol: f64,
    pub equality_tol: f64,
}

impl BoundReport {
    /// Entries the bound applies to.
    pub fn kernel_entries(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| e.reeb_kernel)
    }

    /// Whether every kernel entry satisfies the bound.
    pub fn holds(&self) -> bool {
        self.kernel_entries().all(|e| e.satisfies)
    }
}

/// Estimates `k`, forms the bound and compares it with every eigenvalue of degree
/// `1..=degree_max`. Only eigenspaces inside the Reeb kernel are subject to the bound;
/// the others are listed for reference.
pub fn check_bound(n: usize, degree_max: u32, k_samples: usize, seed: u64, exec: Exec) -> Result<BoundReport> {
    if degree_max > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree_max {degree_max} exceeds {MAX_DEGREE}")));
    }
    let k = estimate_k(n, k_samples, seed)?;
    let bound = lichnerowicz_bound(n, k.k)?;
    let degrees: Vec<u32> = (1..=degree_max).collect();
    let fragments = exec.map(&degrees, |&d| spectrum_fragment(n, d, Exec::Sequential));
    let mut entries = Vec::new();
    for fragment in fragments {
        let fragment = fragment?;
        for e in &fragment.entries {
            let minus_mu = -e.sublaplacian_eigenvalue as f64;
            entries.push(BoundEntry {
                degree: fragment.degree,
                mu: e.sublaplacian_eigenvalue,
                t0sq_eigenvalue: e.t0sq_eigenvalue,
                multiplicity: e.multiplicity,
                reeb_kernel: e.reeb_kernel,
                satisfies: minus_mu >= bound - SATISFY_TOL,
                equality: (minus_mu - bound).abs() <= EQUALITY_TOL,
            });
        }
    }
    Ok(BoundReport { n, k, bound, degree_max, entries, satisfy_tol: SATISFY_TOL, equality_tol: EQUALITY_TOL })
}
