//! Sparse Laurent polynomials in one and two variables over [`Scalar`].

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::scalar::Scalar;

/// Generalised binomial coefficient C(n, r) for integer n and r ≥ 0.
pub fn binomial(n: i64, r: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..r as i64 {
        num *= BigInt::from(n - k);
        den *= BigInt::from(k + 1);
    }
    BigRational::new(num, den)
}

pub fn binomial_scalar(n: i64, r: u32) -> Scalar {
    Scalar::from_rational(binomial(n, r))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A Laurent polynomial Σ c_k x^k in a single variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i32, Scalar>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn constant(c: Scalar) -> Laurent {
        Laurent::monomial(c, 0)
    }

    pub fn monomial(c: Scalar, exp: i32) -> Laurent {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, exp: i32) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: i32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn shift(&self, by: i32) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(k, v)| (k + by, v.clone())).collect() }
    }

    /// x ↦ ζ x for a scalar ζ.
    pub fn dilate(&self, zeta: &Scalar) -> Laurent {
        let mut out = Laurent::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, &(c * &zeta.pow(*k as i64).expect("nonzero dilation")));
        }
        out
    }

    pub fn derivative(&self) -> Laurent {
        let mut out = Laurent::zero();
        for (k, c) in &self.terms {
            if *k != 0 {
                out.add_term(k - 1, &(c * &Scalar::from_int(*k as i64)));
            }
        }
        out
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(&Scalar::from_int(-1))
    }
}

/// A Laurent polynomial Σ c_{ij} z^i w^j.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(i32, i32), Scalar>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn one() -> Poly2 {
        Poly2::monomial(Scalar::one(), 0, 0)
    }

    pub fn monomial(c: Scalar, zexp: i32, wexp: i32) -> Poly2 {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((zexp, wexp), c);
        }
        Poly2 { terms }
    }

    /// `z - c w`.
    pub fn linear(c: &Scalar) -> Poly2 {
        let mut p = Poly2::monomial(Scalar::one(), 1, 0);
        p.add_term(0, 1, &-c);
        p
    }

    pub fn from_z(l: &Laurent) -> Poly2 {
        Poly2 { terms: l.terms().map(|(k, c)| ((k, 0), c.clone())).collect() }
    }

    pub fn from_w(l: &Laurent) -> Poly2 {
        Poly2 { terms: l.terms().map(|(k, c)| ((0, k), c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((i32, i32), &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, zexp: i32, wexp: i32) -> Scalar {
        self.terms.get(&(zexp, wexp)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, zexp: i32, wexp: i32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (zexp, wexp);
        let slot = self.terms.entry(key).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn shift(&self, dz: i32, dw: i32) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|((i, j), v)| ((i + dz, j + dw), v.clone())).collect() }
    }

    pub fn min_z(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_z(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_w(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_w(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// z ↦ α z, w ↦ β w.
    pub fn dilate(&self, alpha: &Scalar, beta: &Scalar) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), c) in &self.terms {
            let f = &alpha.pow(*i as i64).expect("nonzero") * &beta.pow(*j as i64).expect("nonzero");
            out.add_term(*i, *j, &(c * &f));
        }
        out
    }

    pub fn dz(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), c) in &self.terms {
            if *i != 0 {
                out.add_term(i - 1, *j, &(c * &Scalar::from_int(*i as i64)));
            }
        }
        out
    }

    pub fn dw(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i, j), c) in &self.terms {
            if *j != 0 {
                out.add_term(*i, j - 1, &(c * &Scalar::from_int(*j as i64)));
            }
        }
        out
    }

    /// Coefficient of z^i as a Laurent polynomial in w.
    pub fn z_coeff(&self, zexp: i32) -> Laurent {
        let mut out = Laurent::zero();
        for ((i, j), c) in self.terms.range((zexp, i32::MIN)..=(zexp, i32::MAX)) {
            debug_assert_eq!(*i, zexp);
            out.add_term(*j, c);
        }
        out
    }

    /// Restrict to the diagonal w = z.
    pub fn diagonal(&self) -> Laurent {
        let mut out = Laurent::zero();
        for ((i, j), c) in &self.terms {
            out.add_term(i + j, c);
        }
        out
    }

    /// Exact division by `z - c w`, if it divides.
    pub fn div_linear(&self, c: &Scalar) -> Option<Poly2> {
        if self.is_zero() {
            return Some(Poly2::zero());
        }
        let zmin = self.min_z().unwrap();
        let zmax = self.max_z().unwrap();
        // synthetic division in z with coefficients in Q(ζ)[w, 1/w]
        let cw = Laurent::monomial(c.clone(), 1);
        let mut carry = Laurent::zero();
        let mut quotient = Poly2::zero();
        for i in (zmin..=zmax).rev() {
            let coeff = &self.z_coeff(i) + &carry;
            if i == zmin {
                return coeff.is_zero().then_some(quotient);
            }
            for (j, v) in coeff.terms() {
                quotient.add_term(i - 1, j, v);
            }
            carry = &coeff * &cw;
        }
        unreachable!()
    }
}

impl Add<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, c);
        }
        out
    }
}

impl Sub<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for ((i, j), c) in &rhs.terms {
            out.add_term(*i, *j, &-c);
        }
        out
    }
}

impl Mul<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &rhs.terms {
                out.add_term(a + c, b + d, &(x * y));
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&Scalar::from_int(-1))
    }
}
