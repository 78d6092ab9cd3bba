//! Bivariate rational functions with poles on the locus `z = 0`, `w = 0`,
//! `z = ζ w` (ζ a root of unity).
//!
//! A [`RatFunc`] stores a Laurent numerator in (z, w) over a monic product of
//! linear factors `(z - ζ w)^m`. Poles at `z = 0` and `w = 0` live in the
//! negative exponents of the numerator. The canonical form cancels every
//! linear factor that divides the numerator, so equality of two canonical
//! values is structural.

mod interpolation;
mod partial;
mod poly;
mod series;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use interpolation::{verify_interpolation_identity, InterpolationReport};
pub use partial::PartialFraction;
pub use poly::{binomial, binomial_scalar, factorial, Laurent, Poly2};
pub use series::{Direction, SeriesExpansion};

/// The root of unity ζ_den^num, kept as the reduced fraction num/den in Q/Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    num: u32,
    den: u32,
}

impl Root {
    pub fn new(num: i64, den: u32) -> Root {
        assert!(den >= 1);
        let n = num.rem_euclid(den as i64) as u32;
        let g = n.gcd(&den);
        if n == 0 {
            return Root { num: 0, den: 1 };
        }
        Root { num: n / g, den: den / g }
    }

    pub fn one() -> Root {
        Root { num: 0, den: 1 }
    }

    pub fn minus_one() -> Root {
        Root::new(1, 2)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn value(&self) -> Scalar {
        Scalar::root(self.den, self.num as i64)
    }

    pub fn mul(self, other: Root) -> Root {
        let l = self.den.lcm(&other.den);
        Root::new((self.num * (l / self.den) + other.num * (l / other.den)) as i64, l)
    }

    pub fn inv(self) -> Root {
        Root::new(-(self.num as i64), self.den)
    }

    pub fn pow(self, k: i64) -> Root {
        Root::new(self.num as i64 * k, self.den)
    }

    /// Exponent j with self = ζ_n^j, if self is an n-th root of unity.
    pub fn index_in(&self, n: u32) -> Option<u32> {
        n.is_multiple_of(self.den).then(|| self.num * (n / self.den))
    }
}

/// A canonical rational function `num / Π (z - ζ w)^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly2,
    den: BTreeMap<Root, u32>,
}

impl Default for RatFunc {
    fn default() -> RatFunc {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly2::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly2::one())
    }

    pub fn constant(c: Scalar) -> RatFunc {
        RatFunc::from_poly(Poly2::monomial(c, 0, 0))
    }

    pub fn monomial(c: Scalar, zexp: i32, wexp: i32) -> RatFunc {
        RatFunc::from_poly(Poly2::monomial(c, zexp, wexp))
    }

    pub fn from_poly(num: Poly2) -> RatFunc {
        RatFunc { num, den: BTreeMap::new() }
    }

    /// `num / Π (z - ζ w)^m`, canonicalised.
    pub fn new(num: Poly2, den: impl IntoIterator<Item = (Root, u32)>) -> RatFunc {
        let mut d = BTreeMap::new();
        for (r, m) in den {
            if m > 0 {
                *d.entry(r).or_insert(0) += m;
            }
        }
        RatFunc { num, den: d }.canonical()
    }

    /// `1 / (z - ζ w)^m`.
    pub fn pole(root: Root, m: u32) -> RatFunc {
        RatFunc::new(Poly2::one(), [(root, m)])
    }

    /// `1 / (z^d - w^d)^m`, i.e. every d-th root of unity with multiplicity m.
    pub fn power_difference(d: u32, m: u32) -> RatFunc {
        RatFunc::new(Poly2::one(), (0..d).map(|k| (Root::new(k as i64, d), m)))
    }

    /// The polynomial `z^d - w^d`, as a rational function.
    pub fn power_difference_poly(d: u32) -> Poly2 {
        let mut p = Poly2::monomial(Scalar::one(), d as i32, 0);
        p.add_term(0, d as i32, &Scalar::from_int(-1));
        p
    }

    /// Reject a factor outside the allowed locus, as met when assembling a
    /// denominator from an arbitrary polynomial: only `z^a w^b` times linear
    /// factors `(z - ζ w)` with ζ a root of unity are admissible.
    pub fn from_factored(
        num: Poly2,
        scalar: Scalar,
        linear: impl IntoIterator<Item = (Scalar, u32)>,
    ) -> Result<RatFunc> {
        let mut den = Vec::new();
        for (c, m) in linear {
            let root = root_of(&c).ok_or_else(|| Error::DisallowedPole {
                factor: format!("(z - ({})*w)", c.to_text()),
            })?;
            den.push((root, m));
        }
        let inv = scalar.inv()?;
        Ok(RatFunc::new(num.scale(&inv), den))
    }

    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Root, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when there is no pole at any `z = ζ w`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_empty()
    }

    pub fn poles(&self) -> impl Iterator<Item = (Root, u32)> + '_ {
        self.den.iter().map(|(r, m)| (*r, *m))
    }

    /// Pole order at `z = ζ w` (0 when absent).
    pub fn pole_order(&self, root: Root) -> u32 {
        self.den.get(&root).copied().unwrap_or(0)
    }

    fn canonical(mut self) -> RatFunc {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let roots: Vec<Root> = self.den.keys().copied().collect();
        for r in roots {
            let c = r.value();
            let m = self.den.get_mut(&r).unwrap();
            while *m > 0 {
                match self.num.div_linear(&c) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
            if *m == 0 {
                self.den.remove(&r);
            }
        }
        self
    }

    pub fn scale(&self, c: &Scalar) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly2) -> RatFunc {
        RatFunc { num: &self.num * p, den: self.den.clone() }.canonical()
    }

    /// Multiply numerator by the remaining factors to reach denominator `target`.
    fn lift_to(&self, target: &BTreeMap<Root, u32>) -> Poly2 {
        let mut num = self.num.clone();
        for (r, m) in target {
            let have = self.den.get(r).copied().unwrap_or(0);
            let lin = Poly2::linear(&r.value());
            for _ in have..*m {
                num = &num * &lin;
            }
        }
        num
    }

    fn join_den(&self, other: &RatFunc) -> BTreeMap<Root, u32> {
        let mut den = self.den.clone();
        for (r, m) in &other.den {
            let e = den.entry(*r).or_insert(0);
            *e = (*e).max(*m);
        }
        den
    }

    /// z ↦ α z, w ↦ β w for roots of unity α, β.
    pub fn dilate(&self, alpha: Root, beta: Root) -> RatFunc {
        // (α z - c β w) = α (z - c β/α w)
        let a = alpha.value();
        let mut num = self.num.dilate(&a, &beta.value());
        let mut den = BTreeMap::new();
        let mut total = 0i64;
        for (r, m) in &self.den {
            den.insert(r.mul(beta).mul(alpha.inv()), *m);
            total += *m as i64;
        }
        num = num.scale(&a.pow(-total).expect("nonzero"));
        RatFunc { num, den }.canonical()
    }

    pub fn dz(&self) -> RatFunc {
        self.derivative(true)
    }

    pub fn dw(&self) -> RatFunc {
        self.derivative(false)
    }

    fn derivative(&self, in_z: bool) -> RatFunc {
        // d(N/ΠL^m) = (N' ΠL - N Σ m L' Π_{s≠r} L) / ΠL^{m+1}
        let dn = if in_z { self.num.dz() } else { self.num.dw() };
        let lins: Vec<(Root, u32, Poly2)> =
            self.den.iter().map(|(r, m)| (*r, *m, Poly2::linear(&r.value()))).collect();
        let mut all = Poly2::one();
        for (_, _, l) in &lins {
            all = &all * l;
        }
        let mut num = &dn * &all;
        for (i, (r, m, _)) in lins.iter().enumerate() {
            // d/dz (z - c w) = 1, d/dw = -c
            let dl = if in_z { Scalar::one() } else { -r.value() };
            let mut others = Poly2::one();
            for (j, (_, _, l)) in lins.iter().enumerate() {
                if i != j {
                    others = &others * l;
                }
            }
            let term = (&self.num * &others).scale(&(&dl * &Scalar::from_int(*m as i64)));
            num = &num - &term;
        }
        let den = self.den.iter().map(|(r, m)| (*r, m + 1));
        RatFunc::new(num, den)
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Restriction to w = z; fails if there is a pole at z = w.
    pub fn diagonal(&self) -> Result<Laurent> {
        if self.den.contains_key(&Root::one()) {
            return Err(Error::Invalid("diagonal restriction through the pole z = w".into()));
        }
        // (z - c z) = (1 - c) z
        let mut scale = Scalar::one();
        let mut zpow = 0i32;
        for (r, m) in &self.den {
            let f = &Scalar::one() - &r.value();
            scale = &scale * &f.pow(*m as i64)?;
            zpow += *m as i32;
        }
        Ok(self.num.diagonal().scale(&scale.inv()?).shift(-zpow))
    }

    /// f(w, z).
    pub fn swap_variables(&self) -> RatFunc {
        // (w - c z) = -c (z - c^{-1} w)
        let mut num = Poly2::zero();
        for ((i, j), c) in self.num.terms() {
            num.add_term(j, i, c);
        }
        let mut scale = Scalar::one();
        let mut den = Vec::new();
        for (r, m) in &self.den {
            scale = &scale * &(-r.value()).pow(*m as i64).expect("nonzero");
            den.push((r.inv(), *m));
        }
        RatFunc::new(num.scale(&scale.inv().expect("nonzero")), den)
    }

    /// Substitute z ↦ z^s, w ↦ w^s.
    pub fn power_substitute(&self, s: u32) -> RatFunc {
        let mut num = Poly2::zero();
        for ((i, j), c) in self.num.terms() {
            num.add_term(i * s as i32, j * s as i32, c);
        }
        // z^s - c w^s = Π_{ρ^s = c} (z - ρ w)
        let mut den = Vec::new();
        for (r, m) in &self.den {
            let base_den = r.den() * s;
            for k in 0..s {
                den.push((Root::new((r.num() + k * r.den()) as i64, base_den), *m));
            }
        }
        RatFunc::new(num, den)
    }

    /// Smallest root-of-unity order covering every coefficient and pole.
    pub fn natural_order(&self) -> u32 {
        let mut m = 1u32;
        for (_, c) in self.num.terms() {
            m = m.lcm(&c.order());
        }
        for r in self.den.keys() {
            m = m.lcm(&r.den());
        }
        m
    }
}

/// Identify `c` as a root of unity, if it is one.
pub fn root_of(c: &Scalar) -> Option<Root> {
    let order = c.order();
    // a root of unity in Q(ζ_M) has order dividing lcm(2, M)
    let bound = order.lcm(&2);
    (0..bound).map(|k| Root::new(k as i64, bound)).find(|r| &r.value() == c)
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc { num: &self.num + &rhs.num, den: self.den.clone() }.canonical();
        }
        let den = self.join_den(rhs);
        let num = &self.lift_to(&den) + &rhs.lift_to(&den);
        RatFunc { num, den }.canonical()
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let mut den = self.den.clone();
        for (r, m) in &rhs.den {
            *den.entry(*r).or_insert(0) += m;
        }
        RatFunc { num: &self.num * &rhs.num, den }.canonical()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self, self.natural_order()))
    }
}

impl RatFunc {
    /// Canonical text with `e` denoting ζ_order in any non-rational coefficient.
    pub fn to_text(&self, order: u32) -> String {
        text::render(self, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zw(c: i64, i: i32, j: i32) -> Poly2 {
        Poly2::monomial(Scalar::from_int(c), i, j)
    }

    #[test]
    fn roots_reduce() {
        assert_eq!(Root::new(2, 4), Root::minus_one());
        assert_eq!(Root::new(4, 4), Root::one());
        assert_eq!(Root::new(1, 4).mul(Root::new(1, 4)), Root::minus_one());
        assert_eq!(Root::new(1, 2).index_in(4), Some(2));
        assert_eq!(Root::new(1, 4).index_in(2), None);
    }

    #[test]
    fn cancellation_gives_canonical_form() {
        // (z + w) / (z^2 - w^2) = 1 / (z - w)
        let num = &zw(1, 1, 0) + &zw(1, 0, 1);
        let f = &RatFunc::from_poly(num) * &RatFunc::power_difference(2, 1);
        assert_eq!(f, RatFunc::pole(Root::one(), 1));
    }

    #[test]
    fn sum_of_simple_poles() {
        // 1/(z-w) + 1/(z+w) = 2z/(z^2-w^2)
        let s = &RatFunc::pole(Root::one(), 1) + &RatFunc::pole(Root::minus_one(), 1);
        let expect = RatFunc::new(zw(2, 1, 0), [(Root::one(), 1), (Root::minus_one(), 1)]);
        assert_eq!(s, expect);
    }

    #[test]
    fn derivative_of_pole() {
        // d/dz 1/(z+w) = -1/(z+w)^2 ; d/dw = -1/(z+w)^2
        let p = RatFunc::pole(Root::minus_one(), 1);
        let e = RatFunc::pole(Root::minus_one(), 2).scale(&Scalar::from_int(-1));
        assert_eq!(p.dz(), e);
        assert_eq!(p.dw(), e);
        // d/dz (z^-1) = -z^-2
        assert_eq!(RatFunc::monomial(Scalar::one(), -1, 0).dz(), RatFunc::monomial(Scalar::from_int(-1), -2, 0));
    }

    #[test]
    fn dilation_moves_poles() {
        // 1/(z+w) with z -> -z gives 1/(w - z) = -1/(z - w)
        let p = RatFunc::pole(Root::minus_one(), 1).dilate(Root::minus_one(), Root::one());
        assert_eq!(p, RatFunc::pole(Root::one(), 1).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn swapping_variables() {
        // -1/(z - w) becomes -1/(w - z) = 1/(z - w)
        let f = RatFunc::pole(Root::one(), 1).scale(&Scalar::from_int(-1));
        assert_eq!(f.swap_variables(), RatFunc::pole(Root::one(), 1));
        let g = RatFunc::new(Poly2::monomial(Scalar::one(), 2, -1), [(Root::new(1, 4), 2)]);
        assert_eq!(g.swap_variables().swap_variables(), g);
    }

    #[test]
    fn power_substitution() {
        assert_eq!(RatFunc::pole(Root::one(), 1).power_substitute(2), RatFunc::power_difference(2, 1));
    }

    #[test]
    fn diagonal_restriction() {
        // 1/(z+w) at w=z is 1/(2z)
        let d = RatFunc::pole(Root::minus_one(), 1).diagonal().unwrap();
        assert_eq!(d, Laurent::monomial(Scalar::frac(1, 2), -1));
        assert!(RatFunc::pole(Root::one(), 1).diagonal().is_err());
    }

    #[test]
    fn off_locus_factor_is_rejected() {
        let err = RatFunc::from_factored(Poly2::one(), Scalar::one(), [(Scalar::from_int(2), 1)]).unwrap_err();
        assert!(matches!(err, Error::DisallowedPole { .. }));
        let ok = RatFunc::from_factored(Poly2::one(), Scalar::from_int(2), [(Scalar::root(4, 1), 1)]).unwrap();
        assert_eq!(ok, RatFunc::pole(Root::new(1, 4), 1).scale(&Scalar::frac(1, 2)));
    }
}
