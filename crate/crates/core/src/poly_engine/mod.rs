//! Exact arithmetic on polynomials in the ambient coordinates of `R^{2n+2}`:
//! the Euclidean Laplacian, harmonic subspaces, and closed-form averages
//! of polynomials over the unit sphere.

mod linalg;
mod polynomial;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use linalg::{rank_of, rref_in_place, RationalMatrix};
pub use polynomial::{Coefficient, HomogeneousPolynomial, Monomial, Polynomial, RationalPolynomial, MAX_VARS};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Number of ambient variables for CR dimension `n`.
pub fn ambient_dim(n: usize) -> usize {
    2 * n + 2
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim P_l` for homogeneous polynomials of degree `l` in `num_vars` variables.
pub fn dim_homogeneous(num_vars: usize, degree: u32) -> usize {
    binomial(degree as u64 + num_vars as u64 - 1, num_vars as u64 - 1) as usize
}

/// Linearly independent homogeneous polynomials spanning a subspace of `P_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    pub n: usize,
    pub degree: u32,
    basis: Vec<HomogeneousPolynomial>,
}

impl SubspaceBasis {
    pub fn new(n: usize, degree: u32, basis: Vec<HomogeneousPolynomial>) -> Result<Self> {
        let monomials = Monomial::all_of_degree(ambient_dim(n), degree);
        for h in &basis {
            if h.num_vars() != ambient_dim(n) || (h.degree() != degree && !h.is_zero()) {
                return Err(Error::InvalidParameter("basis element outside the ambient space".into()));
            }
        }
        let coords: Vec<_> = basis.iter().map(|h| h.coordinates(&monomials)).collect();
        if rank_of(&coords) != basis.len() {
            return Err(Error::InvalidParameter("basis elements are linearly dependent".into()));
        }
        Ok(SubspaceBasis { n, degree, basis })
    }

    pub(crate) fn from_null_vectors(n: usize, degree: u32, vectors: Vec<Vec<BigRational>>) -> Self {
        let monomials = Monomial::all_of_degree(ambient_dim(n), degree);
        let basis = vectors
            .iter()
            .map(|v| HomogeneousPolynomial::from_coordinates(ambient_dim(n), degree, &monomials, v))
            .collect();
        SubspaceBasis { n, degree, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn elements(&self) -> &[HomogeneousPolynomial] {
        &self.basis
    }

    /// Exact membership test: `h` lies in the span.
    pub fn contains(&self, h: &HomogeneousPolynomial) -> bool {
        if h.is_zero() {
            return true;
        }
        let monomials = Monomial::all_of_degree(ambient_dim(self.n), self.degree);
        let mut coords: Vec<_> = self.basis.iter().map(|b| b.coordinates(&monomials)).collect();
        let r = rank_of(&coords);
        coords.push(h.coordinates(&monomials));
        rank_of(&coords) == r
    }
}

/// Matrix of a linear map `P_l -> P_m` in the graded-lex monomial bases.
pub fn operator_matrix(
    num_vars: usize,
    from_degree: u32,
    to_degree: u32,
    op: impl Fn(&RationalPolynomial) -> RationalPolynomial,
) -> RationalMatrix {
    let domain = Monomial::all_of_degree(num_vars, from_degree);
    let codomain = Monomial::all_of_degree(num_vars, to_degree);
    let index: HashMap<Monomial, usize> = codomain.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut m = RationalMatrix::zeros(codomain.len(), domain.len());
    for (c, mono) in domain.iter().enumerate() {
        let image = op(&RationalPolynomial::monomial(num_vars, *mono, BigRational::one()));
        for (tm, coeff) in image.terms() {
            let r = *index.get(tm).expect("operator left the target degree");
            m.set(r, c, coeff.clone());
        }
    }
    m
}

pub fn euclidean_laplacian(h: &HomogeneousPolynomial) -> HomogeneousPolynomial {
    h.euclidean_laplacian()
}

/// Matrix of the Euclidean Laplacian `P_l -> P_{l-2}`.
pub fn laplacian_matrix(n: usize, degree: u32) -> RationalMatrix {
    let nv = ambient_dim(n);
    if degree < 2 {
        return RationalMatrix::zeros(0, dim_homogeneous(nv, degree));
    }
    operator_matrix(nv, degree, degree - 2, |p| p.laplacian())
}

/// Basis of the harmonic homogeneous polynomials of degree `degree`.
pub fn harmonic_basis(n: usize, degree: u32, exec: Exec) -> SubspaceBasis {
    let ns = laplacian_matrix(n, degree).null_space(exec);
    SubspaceBasis::from_null_vectors(n, degree, ns)
}

fn double_factorial_odd(k: u32) -> BigInt {
    // (2k-1)!!
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// Average of a monomial over the unit sphere in `R^{num_vars}`.
pub fn monomial_sphere_average(num_vars: usize, m: &Monomial) -> BigRational {
    if (0..num_vars).any(|k| m.exponent(k) % 2 == 1) {
        return BigRational::zero();
    }
    let halves: Vec<u32> = (0..num_vars).map(|k| m.exponent(k) as u32 / 2).collect();
    let total: u32 = halves.iter().sum();
    let numer = halves.iter().fold(BigInt::one(), |acc, &k| acc * double_factorial_odd(k));
    let denom = (0..total).fold(BigInt::one(), |acc, j| acc * BigInt::from(num_vars as u32 + 2 * j));
    BigRational::new(numer, denom)
}

/// Exact average of a polynomial over the unit sphere (normalized measure).
pub fn sphere_integral(p: &RationalPolynomial) -> BigRational {
    let nv = p.num_vars();
    p.terms().fold(BigRational::zero(), |acc, (m, c)| acc + c * monomial_sphere_average(nv, m))
}
