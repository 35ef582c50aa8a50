use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest number of ambient variables supported (CR dimension n <= 3).
pub const MAX_VARS: usize = 8;

/// Coefficient field for [`Polynomial`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Coefficient for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Exponent vector of a monomial. Ordered graded-lexicographically:
/// higher total degree first, then lexicographic with `x_1 > x_2 > ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(index: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut e = [0; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, var: usize) -> u8 {
        self.0[var]
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut e = [0; MAX_VARS];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.0[k] + other.0[k];
        }
        Monomial(e)
    }

    /// Monomials of degree `degree` in `num_vars` variables, in graded-lex order.
    pub fn all_of_degree(num_vars: usize, degree: u32) -> Vec<Monomial> {
        fn rec(var: usize, num_vars: usize, left: u32, cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
            if var + 1 == num_vars {
                cur[var] = left as u8;
                out.push(Monomial(*cur));
                cur[var] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[var] = e as u8;
                rec(var + 1, num_vars, left - e, cur, out);
            }
            cur[var] = 0;
        }
        let mut out = Vec::new();
        if num_vars == 0 {
            if degree == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, num_vars, degree, &mut [0; MAX_VARS], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `num_vars` real variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C> {
    num_vars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type RationalPolynomial = Polynomial<BigRational>;

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(num_vars: usize) -> Self {
        assert!(num_vars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        Polynomial { num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(num_vars: usize, c: C) -> Self {
        Self::monomial(num_vars, Monomial::ONE, c)
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        Self::monomial(num_vars, Monomial::var(index), C::one())
    }

    pub fn monomial(num_vars: usize, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(num_vars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(num_vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let v = slot.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Largest total degree present; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.num_vars, self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())))
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[var] -= 1;
            out.add_term(dm, c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// Euclidean Laplacian `sum_k d^2/dx_k^2`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            for var in 0..self.num_vars {
                let e = m.0[var];
                if e < 2 {
                    continue;
                }
                let mut dm = *m;
                dm.0[var] -= 2;
                out.add_term(dm, c.clone() * C::from_i64((e as i64) * (e as i64 - 1)));
            }
        }
        out
    }

    /// Keeps only terms of total degree `<= order`.
    pub fn truncate(&mut self, order: u32) {
        self.terms.retain(|m, _| m.degree() <= order);
    }

    /// Product truncated to total degree `<= order`.
    pub fn mul_truncated(&self, other: &Self, order: u32) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > order {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > order {
                    continue;
                }
                out.add_term(ma.times(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Self> {
        let mut parts: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_insert_with(|| Self::zero(self.num_vars))
                .add_term(*m, c.clone());
        }
        parts
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = c.to_f64();
                for (k, &xk) in x.iter().enumerate() {
                    let e = m.0[k];
                    if e > 0 {
                        v *= xk.powi(e as i32);
                    }
                }
                v
            })
            .sum()
    }

    pub fn checked_eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: x.len() });
        }
        Ok(self.eval(x))
    }

    pub fn eval_exact(&self, x: &[C]) -> C {
        assert_eq!(x.len(), self.num_vars);
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, xk) in x.iter().enumerate() {
                for _ in 0..m.0[k] {
                    v = v * xk.clone();
                }
            }
            acc = acc + v;
        }
        acc
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.num_vars, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coefficients(|c| c.to_f64())
    }
}

impl Polynomial<f64> {
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl RationalPolynomial {
    /// Sum of |coefficient|, used as a cheap size bound in tests.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c.abs())
    }
}

impl<C: Coefficient> Add for Polynomial<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Coefficient> Sub for Polynomial<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl<C: Coefficient> Neg for Polynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        let n = self.num_vars;
        Polynomial::from_terms(n, self.terms.into_iter().map(|(m, c)| (m, -c)))
    }
}

impl<C: Coefficient> Mul for Polynomial<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.num_vars;
        let half = n / 2;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for k in 0..n {
                let e = m.0[k];
                if e == 0 {
                    continue;
                }
                let name = if n.is_multiple_of(2) && k >= half {
                    format!("y{}", k - half + 1)
                } else if n.is_multiple_of(2) {
                    format!("x{}", k + 1)
                } else {
                    format!("u{}", k + 1)
                };
                if e == 1 {
                    write!(f, "*{name}")?;
                } else {
                    write!(f, "*{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Homogeneous polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct HomogeneousPolynomial {
    degree: u32,
    poly: RationalPolynomial,
}

impl HomogeneousPolynomial {
    pub fn new(poly: RationalPolynomial, degree: u32) -> Result<Self> {
        if !poly.is_homogeneous_of(degree) {
            return Err(Error::InvalidParameter(format!(
                "polynomial is not homogeneous of degree {degree}"
            )));
        }
        Ok(HomogeneousPolynomial { degree, poly })
    }

    pub fn zero(num_vars: usize, degree: u32) -> Self {
        HomogeneousPolynomial { degree, poly: Polynomial::zero(num_vars) }
    }

    /// Builds from integer coefficients on explicit exponent vectors.
    pub fn from_int_terms(num_vars: usize, terms: &[(i64, &[u8])]) -> Result<Self> {
        let poly = Polynomial::from_terms(
            num_vars,
            terms.iter().map(|(c, e)| (Monomial::from_exponents(e), BigRational::from_i64(*c))),
        );
        let degree = terms.first().map(|(_, e)| e.iter().map(|&x| x as u32).sum()).unwrap_or(0);
        Self::new(poly, degree)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn poly(&self) -> &RationalPolynomial {
        &self.poly
    }

    pub fn into_poly(self) -> RationalPolynomial {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn euclidean_laplacian(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial {
            degree: self.degree.saturating_sub(2),
            poly: self.poly.laplacian(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.poly.checked_eval(x)
    }

    /// Derivative of the ambient polynomial at `x` along the ambient vector `v`.
    pub fn directional_derivative(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        let n = self.num_vars();
        if x.len() != n || v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len().min(v.len()) });
        }
        Ok((0..n).filter(|&k| v[k] != 0.0).map(|k| v[k] * self.poly.partial(k).eval(x)).sum())
    }

    /// Coordinates in the graded-lex monomial basis of the degree-`degree` space.
    pub fn coordinates(&self, basis: &[Monomial]) -> Vec<BigRational> {
        basis.iter().map(|m| self.poly.coefficient(m)).collect()
    }

    pub fn from_coordinates(num_vars: usize, degree: u32, basis: &[Monomial], coords: &[BigRational]) -> Self {
        let poly = Polynomial::from_terms(num_vars, basis.iter().copied().zip(coords.iter().cloned()));
        HomogeneousPolynomial { degree, poly }
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    #[test]
    fn graded_lex_enumeration() {
        let ms = Monomial::all_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0], Monomial::from_exponents(&[2, 0, 0]));
        assert_eq!(ms[1], Monomial::from_exponents(&[1, 1, 0]));
        assert_eq!(ms[5], Monomial::from_exponents(&[0, 0, 2]));
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(sorted, ms);
        assert_eq!(Monomial::all_of_degree(4, 3).len(), 20);
    }

    #[test]
    fn no_zero_terms_survive() {
        let x = RationalPolynomial::var(4, 0);
        let p = x.clone() - x;
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn laplacian_of_x1_squared_plus_y1_squared() {
        let p = HomogeneousPolynomial::from_int_terms(4, &[(1, &[2, 0, 0, 0]), (1, &[0, 0, 2, 0])]).unwrap();
        let lap = p.euclidean_laplacian();
        assert_eq!(lap.degree(), 0);
        assert_eq!(lap.poly(), &RationalPolynomial::constant(4, q(4)));
    }

    #[test]
    fn laplacian_of_symplectic_form_vanishes() {
        // x1*y2 - x2*y1
        let p = HomogeneousPolynomial::from_int_terms(4, &[(1, &[1, 0, 0, 1]), (-1, &[0, 1, 1, 0])]).unwrap();
        assert!(p.euclidean_laplacian().is_zero());
    }

    #[test]
    fn evaluate_and_directional_derivative() {
        let x1 = HomogeneousPolynomial::from_int_terms(4, &[(1, &[1, 0, 0, 0])]).unwrap();
        assert_eq!(x1.evaluate(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 1.0);
        let h = HomogeneousPolynomial::from_int_terms(4, &[(2, &[1, 1, 0, 0]), (2, &[0, 0, 1, 1])]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.evaluate(&[s, s, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        // x1*y1: derivative is y1 v_x1 + x1 v_y1
        let xy = HomogeneousPolynomial::from_int_terms(4, &[(1, &[1, 0, 1, 0])]).unwrap();
        let p = [0.3, 0.1, -0.7, 0.2];
        let v = [1.5, -2.0, 0.25, 4.0];
        let d = xy.directional_derivative(&p, &v).unwrap();
        assert!((d - (p[2] * v[0] + p[0] * v[2])).abs() < 1e-15);
        assert!(matches!(
            xy.evaluate(&[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_homogeneous_rejected() {
        let p = RationalPolynomial::var(4, 0) + RationalPolynomial::constant(4, q(1));
        assert!(HomogeneousPolynomial::new(p, 1).is_err());
    }

    #[test]
    fn truncated_product_matches_full_product() {
        let a = RationalPolynomial::var(2, 0) + RationalPolynomial::constant(2, q(2));
        let b = RationalPolynomial::var(2, 1) * RationalPolynomial::var(2, 1) + RationalPolynomial::var(2, 0);
        let mut full = a.clone() * b.clone();
        full.truncate(2);
        assert_eq!(a.mul_truncated(&b, 2), full);
    }
}
