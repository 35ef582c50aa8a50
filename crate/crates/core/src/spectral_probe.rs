//! The Reeb derivation `T₀ = x^j ∂/∂y^j − y^j ∂/∂x^j` on polynomial spaces and the
//! spectrum fragments of the sublaplacian obtained from `Δ_b f + T²f = −ℓ(2n+ℓ) f`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::poly_engine::{
    ambient_dim, binomial, dim_homogeneous, laplacian_matrix, operator_matrix, sphere_integral, HomogeneousPolynomial,
    Monomial, RationalMatrix, RationalPolynomial, SubspaceBasis,
};

pub const MAX_DEGREE: u32 = 6;

fn check_degree(degree: u32) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {degree} exceeds {MAX_DEGREE}")));
    }
    Ok(())
}

/// `T₀` applied to an exact polynomial.
pub fn reeb_apply(n: usize, p: &RationalPolynomial) -> RationalPolynomial {
    let mut out = RationalPolynomial::zero(ambient_dim(n));
    for j in 0..=n {
        let (x, y) = (j, n + 1 + j);
        out = out + RationalPolynomial::var(ambient_dim(n), x) * p.partial(y)
            - RationalPolynomial::var(ambient_dim(n), y) * p.partial(x);
    }
    out
}

/// Matrix of `T₀` on the graded-lex monomial basis of `P_ℓ`.
pub fn reeb_derivation_matrix(n: usize, degree: u32) -> RationalMatrix {
    operator_matrix(ambient_dim(n), degree, degree, |p| reeb_apply(n, p))
}

/// Gram matrix of the monomials of `P_ℓ` for the sphere-average inner product.
pub fn monomial_gram_matrix(n: usize, degree: u32) -> RationalMatrix {
    let nv = ambient_dim(n);
    let basis = Monomial::all_of_degree(nv, degree);
    let rows = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| sphere_integral(&RationalPolynomial::monomial(nv, a.times(b), BigRational::from_integer(1.into()))))
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(rows)
}

fn t0_squared_shift(n: usize, degree: u32, lambda: &BigRational) -> RationalMatrix {
    let t = reeb_derivation_matrix(n, degree);
    t.mul(&t).add_scaled_identity(lambda)
}

/// Exact basis of `Ker(T₀² + λI) ∩ P_ℓ`.
pub fn kernel_t0sq_shift(n: usize, degree: u32, lambda: &BigRational, exec: Exec) -> Result<SubspaceBasis> {
    check_degree(degree)?;
    let ns = t0_squared_shift(n, degree, lambda).null_space(exec);
    Ok(SubspaceBasis::from_null_vectors(n, degree, ns))
}

/// Exact basis of `Ker(T₀² + λI) ∩ H_ℓ`.
pub fn harmonic_kernel_t0sq_shift(n: usize, degree: u32, lambda: &BigRational, exec: Exec) -> Result<SubspaceBasis> {
    check_degree(degree)?;
    let stacked = laplacian_matrix(n, degree).vstack(&t0_squared_shift(n, degree, lambda));
    Ok(SubspaceBasis::from_null_vectors(n, degree, stacked.null_space(exec)))
}

/// Exact basis of `Ker(T₀) ∩ H_ℓ`.
pub fn harmonic_reeb_kernel(n: usize, degree: u32, exec: Exec) -> Result<SubspaceBasis> {
    check_degree(degree)?;
    let stacked = laplacian_matrix(n, degree).vstack(&reeb_derivation_matrix(n, degree));
    Ok(SubspaceBasis::from_null_vectors(n, degree, stacked.null_space(exec)))
}

/// `Ker(T₀) ∩ H₂`, the Reeb-invariant spherical harmonics of degree two.
pub fn reeb_kernel_eigenfunctions(n: usize, exec: Exec) -> SubspaceBasis {
    harmonic_reeb_kernel(n, 2, exec).expect("degree 2 is in range")
}

fn perfect_square_root(lambda: &BigRational) -> Option<u32> {
    if !lambda.is_integer() || lambda.is_negative() {
        return None;
    }
    let v: u64 = lambda.to_integer().try_into().ok()?;
    let r = (v as f64).sqrt().round() as u64;
    (r * r == v).then_some(r as u32)
}

/// `dim Ker(T₀² + λI) ∩ P_ℓ` by counting complex monomials `z^α z̄^β` of weight `|α| − |β|`
/// with `(|α| − |β|)² = λ`.
pub fn weight_count(n: usize, degree: u32, lambda: &BigRational) -> usize {
    let Some(w) = perfect_square_root(lambda) else {
        return 0;
    };
    (0..=degree)
        .filter(|a| (*a as i64 - (degree - a) as i64).unsigned_abs() == w as u64)
        .map(|a| (binomial(a as u64 + n as u64, n as u64) * binomial((degree - a) as u64 + n as u64, n as u64)) as usize)
        .sum()
}

/// `dim Ker(T₀² + λI) ∩ H_ℓ`, using that `P_ℓ = H_ℓ ⊕ |z|² P_{ℓ−2}` and `|z|²` has weight zero.
pub fn harmonic_weight_count(n: usize, degree: u32, lambda: &BigRational) -> usize {
    let lower = if degree >= 2 { weight_count(n, degree - 2, lambda) } else { 0 };
    weight_count(n, degree, lambda) - lower
}

/// One eigenvalue of a spectrum fragment.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    /// `λ` with `T₀² H = −λ H`.
    pub t0sq_eigenvalue: i64,
    pub multiplicity: usize,
    /// `μ = λ − ℓ(2n+ℓ)`, the eigenvalue of `Δ_b`.
    pub sublaplacian_eigenvalue: i64,
    /// `λ = 0`, i.e. the eigenfunctions lie in `Ker(T)`.
    pub reeb_kernel: bool,
    pub eigenbasis: SubspaceBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumFragment {
    pub n: usize,
    pub degree: u32,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumFragment {
    pub fn eigenvalues(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.sublaplacian_eigenvalue).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// Diagonalizes `T₀²` on `H_ℓ` by testing the candidates `λ = (ℓ − 2j)²`.
pub fn spectrum_fragment(n: usize, degree: u32, exec: Exec) -> Result<SpectrumFragment> {
    if degree == 0 {
        return Err(Error::InvalidParameter("spectrum fragments start at degree 1".into()));
    }
    check_degree(degree)?;
    let shift = (degree * (2 * n as u32 + degree)) as i64;
    let candidates: Vec<i64> = (0..=degree / 2).rev().map(|j| ((degree - 2 * j) as i64).pow(2)).collect();
    let bases = exec.map(&candidates, |lambda| {
        harmonic_kernel_t0sq_shift(n, degree, &BigRational::from_integer(BigInt::from(*lambda)), Exec::Sequential)
    });
    let mut entries = Vec::new();
    for (lambda, basis) in candidates.into_iter().zip(bases) {
        let basis = basis?;
        if basis.dim() == 0 {
            continue;
        }
        entries.push(SpectrumEntry {
            t0sq_eigenvalue: lambda,
            multiplicity: basis.dim(),
            sublaplacian_eigenvalue: lambda - shift,
            reeb_kernel: lambda == 0,
            eigenbasis: basis,
        });
    }
    let fragment = SpectrumFragment { n, degree, entries };
    let expected = dim_homogeneous(ambient_dim(n), degree)
        - if degree >= 2 { dim_homogeneous(ambient_dim(n), degree - 2) } else { 0 };
    if fragment.total_multiplicity() != expected {
        return Err(Error::InvalidParameter(format!(
            "eigenspaces of T0^2 on H_{degree} have total dimension {} instead of {expected}",
            fragment.total_multiplicity()
        )));
    }
    Ok(fragment)
}

/// Fragments for several degrees, computed independently.
pub fn spectrum_fragments(n: usize, degrees: &[u32], exec: Exec) -> Result<Vec<SpectrumFragment>> {
    exec.map(degrees, |d| spectrum_fragment(n, *d, Exec::Sequential)).into_iter().collect()
}

type SparseTensor = Vec<((usize, usize, usize), BigRational)>;

/// Symmetric tensors `a_{ijk}` on `R^{n+1}` with `Σ_j a_{ijj} = 0`, as index maps.
fn traceless_symmetric_cubic_tensors(n: usize) -> Vec<SparseTensor> {
    let m = n + 1;
    let mut vars = Vec::new();
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                vars.push((i, j, k));
            }
        }
    }
    let index = |i: usize, j: usize, k: usize| {
        let mut s = [i, j, k];
        s.sort_unstable();
        vars.iter().position(|v| *v == (s[0], s[1], s[2])).expect("sorted triple is a variable")
    };
    let mut rows = vec![vec![BigRational::zero(); vars.len()]; m];
    for (i, row) in rows.iter_mut().enumerate() {
        for j in 0..m {
            row[index(i, j, j)] += BigRational::from_integer(1.into());
        }
    }
    let ns = RationalMatrix::from_rows(rows).null_space(Exec::Sequential);
    ns.into_iter()
        .map(|v| {
            let mut entries = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let c = &v[index(i, j, k)];
                        if !c.is_zero() {
                            entries.push(((i, j, k), c.clone()));
                        }
                    }
                }
            }
            entries
        })
        .collect()
}

/// Spanning set of the cubic families `(a_{ijk} x^i + b_{ijk} y^i)(x^j x^k + y^j y^k)` for
/// `λ = 1` and `a_{ijk} x^i (x^j x^k − 3 y^j y^k) + b_{ijk} (y^i y^j − 3 x^i x^j) y^k` for
/// `λ = 9`, with `a, b` symmetric and traceless.
pub fn cubic_family(n: usize, lambda: u32) -> Result<Vec<HomogeneousPolynomial>> {
    if lambda != 1 && lambda != 9 {
        return Err(Error::InvalidParameter(format!("no cubic family for λ = {lambda}")));
    }
    let nv = ambient_dim(n);
    let x = |i: usize| RationalPolynomial::var(nv, i);
    let y = |i: usize| RationalPolynomial::var(nv, n + 1 + i);
    let three = BigRational::from_integer(3.into());
    let mut out = Vec::new();
    for tensor in traceless_symmetric_cubic_tensors(n) {
        let mut pa = RationalPolynomial::zero(nv);
        let mut pb = RationalPolynomial::zero(nv);
        for ((i, j, k), c) in &tensor {
            let (i, j, k) = (*i, *j, *k);
            let (ta, tb) = if lambda == 1 {
                let q = x(j) * x(k) + y(j) * y(k);
                (x(i) * q.clone(), y(i) * q)
            } else {
                (
                    x(i) * (x(j) * x(k) - (y(j) * y(k)).scale(&three)),
                    (y(i) * y(j) - (x(i) * x(j)).scale(&three)) * y(k),
                )
            };
            pa = pa + ta.scale(c);
            pb = pb + tb.scale(c);
        }
        out.push(HomogeneousPolynomial::new(pa, 3)?);
        out.push(HomogeneousPolynomial::new(pb, 3)?);
    }
    Ok(out)
}

/// Spanning set of `{Σ a_{ij}(x^i x^j + y^i y^j) : a symmetric, tr a = 0}`.
pub fn quadratic_reeb_family(n: usize) -> Vec<HomogeneousPolynomial> {
    let nv = ambient_dim(n);
    let m = n + 1;
    let x = |i: usize| RationalPolynomial::var(nv, i);
    let y = |i: usize| RationalPolynomial::var(nv, n + 1 + i);
    let q = |i: usize, j: usize| x(i) * x(j) + y(i) * y(j);
    let mut out = Vec::new();
    for i in 0..m {
        for j in i..m {
            let p = if i == j {
                if i + 1 == m {
                    continue;
                }
                q(i, i) - q(m - 1, m - 1)
            } else {
                q(i, j)
            };
            out.push(HomogeneousPolynomial::new(p, 2).expect("quadratic"));
        }
    }
    out
}
