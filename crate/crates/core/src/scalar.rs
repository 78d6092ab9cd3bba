//! Exact arithmetic in the cyclotomic fields Q(ζ_M).
//!
//! A [`Scalar`] is a polynomial in ζ_M with rational coefficients, reduced
//! modulo the M-th cyclotomic polynomial Φ_M. Values of different orders
//! interoperate: binary operations promote both operands to Q(ζ_lcm).
//! Values that happen to be rational are always stored at order 1, which
//! keeps the common case (rational structure constants) cheap.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_rational::BigRational;
use smallvec::{smallvec, SmallVec};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

mod rat;

use rat::Rat;

type Poly = Vec<Rat>;

/// Coefficients of a scalar; rationals stay inline.
type Coeffs = SmallVec<[Rat; 1]>;

/// Precomputed data for Q(ζ_M).
#[derive(Debug)]
struct Cyclotomic {
    /// Monic Φ_M, lowest degree first.
    phi: Vec<Rat>,
    /// ζ_M^e reduced, for 0 ≤ e < M.
    powers: Vec<Poly>,
}

impl Cyclotomic {
    fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn build(order: u32) -> Cyclotomic {
        let phi = cyclotomic_poly(order);
        let phi: Vec<Rat> = phi.into_iter().map(Rat::from_int).collect();
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        for e in 0..order as usize {
            let mut p = vec![Rat::zero(); e.max(deg) + 1];
            p[e] = Rat::one();
            reduce_mod(&mut p, &phi);
            p.truncate(deg);
            p.resize(deg, Rat::zero());
            powers.push(p);
        }
        Cyclotomic { phi, powers }
    }
}

fn cyclotomic_poly(order: u32) -> Vec<i64> {
    // Φ_M = (x^M − 1) / Π_{d | M, d < M} Φ_d
    let m = order as usize;
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in 1..order {
        if order.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = exact_int_div(&num, &den);
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn reduce_mod(p: &mut Poly, phi: &[Rat]) {
    let deg = phi.len() - 1;
    if p.len() <= deg {
        return;
    }
    for k in (deg..p.len()).rev() {
        if p[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut p[k]);
        for i in 0..deg {
            if !phi[i].is_zero() {
                let t = &c * &phi[i];
                p[k - deg + i] -= t;
            }
        }
    }
    p.truncate(deg);
}

fn field(order: u32) -> Arc<Cyclotomic> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Cyclotomic>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(f) = cache.read().expect("cyclotomic cache poisoned").get(&order) {
        return f.clone();
    }
    let built = Arc::new(Cyclotomic::build(order));
    cache
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(order)
        .or_insert(built)
        .clone()
}

/// An exact element of Q(ζ_M).
#[derive(Clone, Debug)]
pub struct Scalar {
    order: u32,
    coeffs: Coeffs,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { order: 1, coeffs: smallvec![Rat::zero()] }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar { order: 1, coeffs: smallvec![Rat::from_int(n)] }
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar { order: 1, coeffs: smallvec![Rat::from_big(r)] }
    }

    /// `num/den` as a rational scalar. Panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// ζ_M^k, with k reduced mod M.
    pub fn root(order: u32, k: i64) -> Scalar {
        assert!(order >= 1, "root order must be positive");
        let e = k.rem_euclid(order as i64) as usize;
        let f = field(order);
        Scalar { order, coeffs: f.powers[e].clone().into() }.normalized()
    }

    /// Build from raw coefficients of 1, ζ_M, ζ_M², … (any length; reduced).
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Scalar {
        Scalar::from_poly(order, coeffs.into_iter().map(Rat::from_big).collect())
    }

    fn from_poly(order: u32, coeffs: Poly) -> Scalar {
        let f = field(order);
        let mut p = coeffs;
        if p.is_empty() {
            return Scalar::zero();
        }
        // fold powers ≥ M using ζ^M = 1 before reducing
        let m = order as usize;
        if p.len() > m {
            let mut folded = vec![Rat::zero(); m];
            for (i, c) in p.into_iter().enumerate() {
                folded[i % m] += c;
            }
            p = folded;
        }
        reduce_mod(&mut p, &f.phi);
        p.resize(f.degree(), Rat::zero());
        Scalar { order, coeffs: p.into() }.normalized()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of 1, ζ, …, ζ^{φ(M)−1}.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(Rat::to_big).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (self.order == 1).then(|| self.coeffs[0].to_big())
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    fn normalized(mut self) -> Scalar {
        if self.order != 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            self.coeffs.truncate(1);
            self.order = 1;
            return self;
        }
        self
    }

    /// Re-express in Q(ζ_target); `target` must be a multiple of the current order.
    pub fn promote(&self, target: u32) -> Scalar {
        assert!(target.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{})", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let f = field(target);
        let step = (target / self.order) as usize;
        let mut out = vec![Rat::zero(); f.degree()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pw = &f.powers[(k * step) % target as usize];
            for (o, p) in out.iter_mut().zip(pw) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Scalar { order: target, coeffs: out.into() }
    }

    /// Coefficient vector in Q(ζ_target) without collapsing rationals.
    pub fn coeffs_in(&self, target: u32) -> Vec<BigRational> {
        self.promote(target).coeffs()
    }

    fn common(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = a.order.lcm(&b.order);
        (a.promote(l), b.promote(l))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Scalar { order: 1, coeffs: smallvec![self.coeffs[0].recip()] });
        }
        let f = field(self.order);
        let inv = poly_inverse_mod(&self.coeffs, &f.phi);
        Ok(Scalar::from_poly(self.order, inv))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Canonical text in terms of `e` = ζ_M of this value's own order.
    pub fn to_text(&self) -> String {
        render_coeffs(&self.coeffs)
    }

    /// Canonical text with `e` = ζ_target.
    pub fn to_text_in(&self, target: u32) -> String {
        if self.order == 1 {
            return render_coeffs(&self.coeffs);
        }
        render_coeffs(&self.promote(target).coeffs)
    }

    /// Parse `p(e)/q`-style literals such as `1/2 + 3*e^2`, with `e` = ζ_order.
    pub fn parse(text: &str, order: u32) -> Result<Scalar> {
        ScalarParser { src: text.as_bytes(), pos: 0, order }.parse_all()
    }
}

fn render_coeffs(coeffs: &[Rat]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => None,
            1 => Some("e".to_string()),
            _ => Some(format!("e^{k}")),
        };
        let body = match (&mono, c.is_one(), (-c).is_one()) {
            (None, _, _) => rational_text(c),
            (Some(m), true, _) => m.clone(),
            (Some(m), _, true) => format!("-{m}"),
            (Some(m), _, _) => format!("{}*{m}", rational_text(c)),
        };
        parts.push(body);
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

fn rational_text(r: &Rat) -> String {
    r.to_string()
}

fn poly_trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    poly_trim(&mut r);
    let mut b = b.clone();
    poly_trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() - 1 < db {
        return (vec![Rat::zero()], r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                let t = &c * bi;
                r[k + i] -= t;
            }
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    poly_trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Poly {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `m` via the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Poly {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    poly_trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rat::zero()], vec![Rat::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant gcd
    let c = r0[0].clone();
    s0.into_iter().map(|x| x / &c).collect()
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Scalar::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Scalar {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.order == 1 && rhs.order == 1 {
            return Scalar { order: 1, coeffs: smallvec![&self.coeffs[0] + &rhs.coeffs[0]] };
        }
        let (mut a, b) = Scalar::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a.normalized()
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if self.order == 1 && rhs.order == 1 {
            return Scalar { order: 1, coeffs: smallvec![&self.coeffs[0] - &rhs.coeffs[0]] };
        }
        let (mut a, b) = Scalar::common(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a.normalized()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.order == 1 && rhs.order == 1 {
            return Scalar { order: 1, coeffs: smallvec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        if self.order == 1 {
            if self.coeffs[0].is_zero() {
                return Scalar::zero();
            }
            let c = &self.coeffs[0];
            let coeffs = rhs.coeffs.iter().map(|y| c * y).collect();
            return Scalar { order: rhs.order, coeffs };
        }
        if rhs.order == 1 {
            return rhs * self;
        }
        let (a, b) = Scalar::common(self, rhs);
        let f = field(a.order);
        let mut p = poly_mul(&a.coeffs, &b.coeffs);
        reduce_mod(&mut p, &f.phi);
        p.resize(f.degree(), Rat::zero());
        Scalar { order: a.order, coeffs: p.into() }.normalized()
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::checked_div`] for a reported error.
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.order == 1 && rhs.order == 1 {
            self.coeffs[0] += &rhs.coeffs[0];
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if self.order == 1 && rhs.order == 1 {
            self.coeffs[0] -= &rhs.coeffs[0];
            return;
        }
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        let mut acc = Scalar::zero();
        for s in iter {
            acc += &s;
        }
        acc
    }
}

struct ScalarParser<'a> {
    src: &'a [u8],
    pos: usize,
    order: u32,
}

impl ScalarParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: format!("scalar literal: {msg}") }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Scalar> {
        let v = self.parse_sum()?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(v)
    }

    fn parse_sum(&mut self) -> Result<Scalar> {
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.parse_term()?;
        if sign < 0 {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.parse_term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.parse_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Scalar> {
        let mut acc = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.parse_atom()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.parse_atom()?;
                    acc = acc.checked_div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.parse_sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.parse_atom()?)
            }
            Some(b'e') => {
                self.pos += 1;
                let mut k = 1i64;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    k = self.parse_int()?;
                }
                Ok(Scalar::root(self.order, k))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_int()?;
                Ok(Scalar::from_int(n))
            }
            _ => Err(self.err("expected number, 'e' or '('")),
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err("expected integer"))
    }
}
