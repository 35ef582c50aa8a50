//! Scalar rings on which vector-field calculus is carried out.
//!
//! Two rings are provided. [`RationalPolynomial`] gives exact global results whose
//! restriction to the sphere is the quantity of interest. [`Jet`] is a truncated Taylor
//! expansion at a fixed point, stored densely; every derivative lowers the order to
//! which the expansion is trustworthy, so the order is chosen to cover the deepest
//! derivative chain an operation takes.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::poly_engine::{Monomial, RationalPolynomial};

pub trait Ring:
    Clone + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn partial(&self, var: usize) -> Self;
}

/// A space of scalar functions on a neighbourhood in `R^{2n+2}`.
pub trait Ambient: Sync {
    type R: Ring;

    fn n(&self) -> usize;

    fn dim(&self) -> usize {
        2 * self.n() + 2
    }

    /// The coordinate function `q_k`.
    fn coord(&self, k: usize) -> Self::R;

    fn int(&self, c: i64) -> Self::R;

    /// Embeds an exact polynomial.
    fn lift(&self, p: &RationalPolynomial) -> Self::R;

    fn zero(&self) -> Self::R {
        self.int(0)
    }
}

impl Ring for RationalPolynomial {
    fn partial(&self, var: usize) -> Self {
        RationalPolynomial::partial(self, var)
    }
}

/// Exact global polynomials with rational coefficients.
#[derive(Clone, Copy, Debug)]
pub struct Exact {
    n: usize,
}

impl Exact {
    pub fn new(n: usize) -> Self {
        Exact { n }
    }
}

impl Ambient for Exact {
    type R = RationalPolynomial;

    fn n(&self) -> usize {
        self.n
    }

    fn coord(&self, k: usize) -> RationalPolynomial {
        RationalPolynomial::var(self.dim(), k)
    }

    fn int(&self, c: i64) -> RationalPolynomial {
        RationalPolynomial::constant(self.dim(), BigRational::from_integer(BigInt::from(c)))
    }

    fn lift(&self, p: &RationalPolynomial) -> RationalPolynomial {
        p.clone()
    }
}

/// Constants: every derivative vanishes.
impl Ring for f64 {
    fn partial(&self, _var: usize) -> Self {
        0.0
    }
}

/// Values of constant fields at a single point, for zeroth-order expressions.
#[derive(Clone, Debug)]
pub struct Pointwise<'a> {
    point: &'a [f64],
}

impl<'a> Pointwise<'a> {
    pub fn new(point: &'a [f64]) -> Self {
        Pointwise { point }
    }
}

impl Ambient for Pointwise<'_> {
    type R = f64;

    fn n(&self) -> usize {
        self.point.len() / 2 - 1
    }

    fn coord(&self, k: usize) -> f64 {
        self.point[k]
    }

    fn int(&self, c: i64) -> f64 {
        c as f64
    }

    fn lift(&self, p: &RationalPolynomial) -> f64 {
        p.to_f64().eval(self.point)
    }
}

/// Monomial bookkeeping shared by all jets of a given size.
#[derive(Debug)]
pub struct JetLayout {
    dim: usize,
    order: u32,
    monomials: Vec<Monomial>,
    linear: Vec<usize>,
    products: Vec<(usize, usize, usize)>,
    partials: Vec<Vec<(usize, usize, f64)>>,
}

type LayoutCache = HashMap<(usize, u32), Arc<JetLayout>>;

impl JetLayout {
    fn build(dim: usize, order: u32) -> Self {
        let mut monomials = Vec::new();
        for d in 0..=order {
            monomials.extend(Monomial::all_of_degree(dim, d));
        }
        let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let linear = (0..dim).map(|k| index.get(&Monomial::var(k)).copied().unwrap_or(0)).collect();
        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if a.degree() + b.degree() <= order {
                    products.push((i, j, index[&a.times(b)]));
                }
            }
        }
        let partials = (0..dim)
            .map(|v| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.exponent(v) > 0)
                    .map(|(i, m)| {
                        let mut e = m.0;
                        e[v] -= 1;
                        (i, index[&Monomial(e)], m.exponent(v) as f64)
                    })
                    .collect()
            })
            .collect();
        JetLayout { dim, order, monomials, linear, products, partials }
    }

    /// Shared layout for `dim` variables truncated at `order`.
    pub fn get(dim: usize, order: u32) -> Arc<JetLayout> {
        static CACHE: OnceLock<Mutex<LayoutCache>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().expect("jet layout cache poisoned");
        guard.entry((dim, order)).or_insert_with(|| Arc::new(JetLayout::build(dim, order))).clone()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// A truncated Taylor expansion `Σ c_α δ^α` about a base point.
#[derive(Clone, Debug)]
pub struct Jet {
    layout: Arc<JetLayout>,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(layout: &Arc<JetLayout>, c: f64) -> Self {
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = c;
        Jet { layout: layout.clone(), coeffs }
    }

    /// The value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// First-order coefficients, i.e. the gradient at the base point.
    pub fn gradient(&self) -> Vec<f64> {
        self.layout.linear.iter().map(|&i| self.coeffs[i]).collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet { layout: self.layout.clone(), coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    fn zip(self, rhs: Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| f(*a, *b)).collect();
        Jet { layout: self.layout, coeffs }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut coeffs = vec![0.0; self.layout.len()];
        for &(i, j, k) in &self.layout.products {
            let a = self.coeffs[i];
            if a != 0.0 {
                coeffs[k] += a * rhs.coeffs[j];
            }
        }
        Jet { layout: self.layout, coeffs }
    }
}

impl Ring for Jet {
    fn partial(&self, var: usize) -> Jet {
        let mut coeffs = vec![0.0; self.layout.len()];
        for &(src, dst, factor) in &self.layout.partials[var] {
            coeffs[dst] += factor * self.coeffs[src];
        }
        Jet { layout: self.layout.clone(), coeffs }
    }
}

/// Jets at a fixed point of `R^{2n+2}`.
#[derive(Clone, Debug)]
pub struct Local {
    n: usize,
    point: Vec<f64>,
    layout: Arc<JetLayout>,
}

impl Local {
    pub fn new(point: &[f64], order: u32) -> Self {
        let layout = JetLayout::get(point.len(), order);
        Local { n: point.len() / 2 - 1, point: point.to_vec(), layout }
    }

    pub fn constant(&self, c: f64) -> Jet {
        Jet::constant(&self.layout, c)
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }
}

impl Ambient for Local {
    type R = Jet;

    fn n(&self) -> usize {
        self.n
    }

    fn coord(&self, k: usize) -> Jet {
        let mut j = self.constant(self.point[k]);
        if self.layout.order >= 1 {
            j.coeffs[self.layout.linear[k]] = 1.0;
        }
        j
    }

    fn int(&self, c: i64) -> Jet {
        self.constant(c as f64)
    }

    fn lift(&self, p: &RationalPolynomial) -> Jet {
        let max_deg = p.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<Jet>> = (0..self.dim())
            .map(|k| {
                let q = self.coord(k);
                let mut v = vec![self.constant(1.0)];
                for d in 1..=max_deg {
                    let next = v[d - 1].clone() * q.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = self.constant(0.0);
        for (m, c) in p.terms() {
            let mut term = self.constant(c.to_f64().unwrap_or(f64::NAN));
            for (k, pk) in powers.iter().enumerate() {
                let e = m.exponent(k) as usize;
                if e > 0 {
                    term = term * pk[e].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_engine::HomogeneousPolynomial;

    #[test]
    fn jet_matches_polynomial_derivatives() {
        let h = HomogeneousPolynomial::from_int_terms(4, &[(3, &[2, 1, 0, 0]), (-2, &[0, 1, 1, 1])]).unwrap();
        let p = [0.3, -0.7, 0.2, 0.5];
        let local = Local::new(&p, 3);
        let j = local.lift(h.poly());
        let exact = h.poly().to_f64();
        assert!((j.value() - exact.eval(&p)).abs() < 1e-14);
        for a in 0..4 {
            for b in 0..4 {
                let jd = j.partial(a).partial(b).value();
                let pd = h.poly().partial(a).partial(b).to_f64().eval(&p);
                assert!((jd - pd).abs() < 1e-13);
            }
        }
        let third = j.partial(0).partial(0).partial(1).value();
        assert!((third - 6.0).abs() < 1e-13);
    }

    #[test]
    fn jet_products_follow_leibniz() {
        let local = Local::new(&[0.1, 0.2, 0.3, 0.4], 2);
        let x = local.coord(0);
        let y = local.coord(3);
        let prod = x.clone() * y.clone();
        let lhs = prod.partial(0).value();
        assert!((lhs - 0.4).abs() < 1e-15);
        assert!((prod.partial(0).partial(3).value() - 1.0).abs() < 1e-15);
        assert!((x.scale(2.0).value() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn layouts_are_shared() {
        let a = JetLayout::get(6, 3);
        let b = JetLayout::get(6, 3);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.len(), 84);
    }
}
