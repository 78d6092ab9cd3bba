//! The root-of-unity interpolation identity
//! Σ_{k<2n} ε^{kl}/(z+ε^k w) = 2n(−1)^l z^{l−1} w^{2n−l}/(z^{2n}−w^{2n}), ε = ζ_{2n}.

use super::poly::Poly2;
use super::{RatFunc, Root};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationReport {
    pub n: u32,
    pub l: u32,
    pub equal: bool,
    pub lhs: String,
    pub rhs: String,
}

pub fn verify_interpolation_identity(n: u32, l: u32) -> InterpolationReport {
    assert!(n >= 1 && (1..=2 * n).contains(&l), "need n ≥ 1 and 1 ≤ l ≤ 2n");
    let big = 2 * n;
    let mut lhs = RatFunc::zero();
    for k in 0..big {
        // z + ε^k w = z - ε^{k+n} w
        let term = RatFunc::pole(Root::new((k + n) as i64, big), 1).scale(&Scalar::root(big, (k * l) as i64));
        lhs = &lhs + &term;
    }
    let sign = if l.is_multiple_of(2) { 1 } else { -1 };
    let mono = Poly2::monomial(Scalar::from_int(sign * big as i64), l as i32 - 1, (big - l) as i32);
    let rhs = RatFunc::power_difference(big, 1).mul_poly(&mono);
    InterpolationReport { n, l, equal: lhs == rhs, lhs: lhs.to_text(big), rhs: rhs.to_text(big) }
}
