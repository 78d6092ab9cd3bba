//! Canonical printing: `-(z^2+w^2)/(2*(z^2-w^2)^2)`, `1/(z+w)`, `-4*z^2*w/(z^4-w^4)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly2;
use super::{RatFunc, Root};
use crate::scalar::Scalar;

pub(super) fn render(f: &RatFunc, order: u32) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let (negative, content, primitive) = split_content(f.numerator());
    let mut factors = Vec::new();
    let (p, q) = (content.numer().clone(), content.denom().clone());
    if !q.is_one() {
        factors.push(q.to_string());
    }
    factors.extend(denominator_factors(f.denominator(), order));

    let monomial = primitive.num_terms() == 1;
    let body = poly_text(&primitive, order);
    let mut num = if monomial {
        if p.is_one() {
            body
        } else if body == "1" {
            p.to_string()
        } else {
            format!("{p}*{body}")
        }
    } else if p.is_one() && !negative && factors.is_empty() {
        body
    } else if p.is_one() {
        format!("({body})")
    } else {
        format!("{p}*({body})")
    };
    if negative {
        num.insert(0, '-');
    }
    match factors.len() {
        0 => num,
        1 => format!("{num}/{}", factors[0]),
        _ => format!("{num}/({})", factors.join("*")),
    }
}

/// Sign, positive rational content, and the primitive numerator.
fn split_content(num: &Poly2) -> (bool, BigRational, Poly2) {
    let all_rational = num.terms().all(|(_, c)| c.is_rational());
    if !all_rational {
        return (false, BigRational::one(), num.clone());
    }
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for (_, c) in num.terms() {
        let r = c.to_rational().unwrap();
        g = g.gcd(r.numer());
        l = l.lcm(r.denom());
    }
    let lead = leading(num).to_rational().unwrap();
    let content = BigRational::new(g, l);
    let negative = lead.is_negative();
    let signed = if negative { -content.clone() } else { content.clone() };
    let primitive = num.scale(&Scalar::from_rational(signed.recip()));
    (negative, content, primitive)
}

fn ordered_terms(p: &Poly2) -> Vec<((i32, i32), &Scalar)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    terms
}

fn leading(p: &Poly2) -> Scalar {
    ordered_terms(p)[0].1.clone()
}

fn power(var: &str, e: i32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(var.to_string()),
        _ => Some(format!("{var}^{e}")),
    }
}

fn poly_text(p: &Poly2, order: u32) -> String {
    let mut out = String::new();
    for (idx, ((i, j), c)) in ordered_terms(p).into_iter().enumerate() {
        let mono: Vec<String> = [power("z", i), power("w", j)].into_iter().flatten().collect();
        let (neg, coeff) = coeff_text(c, order);
        if idx > 0 {
            out.push(if neg { '-' } else { '+' });
        } else if neg {
            out.push('-');
        }
        match (coeff.as_str(), mono.is_empty()) {
            ("1", true) => out.push('1'),
            ("1", false) => out.push_str(&mono.join("*")),
            (_, true) => out.push_str(&coeff),
            (_, false) => {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&mono.join("*"));
            }
        }
    }
    out
}

/// (is_negative, magnitude text); non-rational values keep their sign inside parentheses.
fn coeff_text(c: &Scalar, order: u32) -> (bool, String) {
    if let Some(r) = c.to_rational() {
        return (r.is_negative(), r.abs().to_string());
    }
    (false, format!("({})", c.to_text_in(order)))
}

fn denominator_factors(den: &BTreeMap<Root, u32>, order: u32) -> Vec<String> {
    let mut mult = den.clone();
    let mut out = Vec::new();
    let span = mult.keys().fold(1u32, |acc, r| acc.lcm(&r.den()));
    for d in (2..=span).rev() {
        if span % d != 0 {
            continue;
        }
        let e = (0..d).map(|k| mult.get(&Root::new(k as i64, d)).copied().unwrap_or(0)).min().unwrap_or(0);
        if e == 0 {
            continue;
        }
        for k in 0..d {
            let slot = mult.get_mut(&Root::new(k as i64, d)).unwrap();
            *slot -= e;
        }
        out.push(with_exponent(format!("(z^{d}-w^{d})"), e));
    }
    for (r, e) in mult {
        if e == 0 {
            continue;
        }
        let base = if r.is_one() {
            "(z-w)".to_string()
        } else if r == Root::minus_one() {
            "(z+w)".to_string()
        } else {
            format!("(z-({})*w)", r.value().to_text_in(order))
        };
        out.push(with_exponent(base, e));
    }
    out
}

fn with_exponent(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}
