use std::collections::BTreeMap;

use super::poly::{binomial_scalar, Laurent, Poly2};
use super::{RatFunc, Root};

/// Decomposition `f = Σ_ζ Σ_k c_k(w) / (z - ζ w)^{k+1} + remainder(z, w)`.
///
/// Coefficients are Laurent polynomials in w; the remainder is Laurent in
/// both variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFraction {
    poles: BTreeMap<Root, Vec<Laurent>>,
    remainder: Poly2,
}

impl PartialFraction {
    pub fn of(f: &RatFunc) -> PartialFraction {
        let mut poles = BTreeMap::new();
        let mut singular = RatFunc::zero();
        for (root, m) in f.poles() {
            let coeffs = principal_part(f, root, m);
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    singular = &singular + &RatFunc::new(Poly2::from_w(c), [(root, k as u32 + 1)]);
                }
            }
            poles.insert(root, coeffs);
        }
        let rest = f - &singular;
        assert!(rest.is_laurent(), "partial fraction remainder kept a pole: {rest}");
        PartialFraction { poles, remainder: rest.numerator().clone() }
    }

    /// `(ζ, k, c_k)` for every nonzero coefficient of `1/(z - ζ w)^{k+1}`.
    pub fn terms(&self) -> impl Iterator<Item = (Root, u32, &Laurent)> + '_ {
        self.poles.iter().flat_map(|(r, cs)| {
            cs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (*r, k as u32, c))
        })
    }

    pub fn coefficient(&self, root: Root, k: u32) -> Laurent {
        self.poles.get(&root).and_then(|cs| cs.get(k as usize)).cloned().unwrap_or_default()
    }

    pub fn remainder(&self) -> &Poly2 {
        &self.remainder
    }

    pub fn recombine(&self) -> RatFunc {
        let mut out = RatFunc::from_poly(self.remainder.clone());
        for (r, k, c) in self.terms() {
            out = &out + &RatFunc::new(Poly2::from_w(c), [(r, k + 1)]);
        }
        out
    }
}

/// Coefficients c_0..c_{m-1} at the pole `z = ζ w` of order m.
///
/// With t = z - ζ w, f·t^m is regular at t = 0; its t^r Taylor coefficient is
/// c_{m-1-r}(w).
fn principal_part(f: &RatFunc, root: Root, m: u32) -> Vec<Laurent> {
    let c = root.value();
    let order = m as usize;
    // N(c w + t, w) as a series in t
    let mut series = vec![Laurent::zero(); order];
    for ((i, j), a) in f.numerator().terms() {
        for (r, slot) in series.iter_mut().enumerate() {
            let b = binomial_scalar(i as i64, r as u32);
            if b.is_zero() {
                continue;
            }
            let coeff = &(a * &b) * &c.pow(i as i64 - r as i64).expect("root is nonzero");
            slot.add_term(i - r as i32 + j, &coeff);
        }
    }
    for (other, ms) in f.poles() {
        if other == root {
            continue;
        }
        // ((c - c_s) w + t)^{-m_s}
        let gap = &c - &other.value();
        let mut factor = vec![Laurent::zero(); order];
        for (r, slot) in factor.iter_mut().enumerate() {
            let e = -(ms as i64) - r as i64;
            let coeff = &binomial_scalar(-(ms as i64), r as u32) * &gap.pow(e).expect("distinct roots");
            *slot = Laurent::monomial(coeff, e as i32);
        }
        series = truncated_product(&series, &factor);
    }
    series.reverse();
    series
}

fn truncated_product(a: &[Laurent], b: &[Laurent]) -> Vec<Laurent> {
    let n = a.len();
    let mut out = vec![Laurent::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

impl RatFunc {
    pub fn partial_fractions(&self) -> PartialFraction {
        PartialFraction::of(self)
    }

    /// `Σ_k c_k(w) / (z - ζ w)^{k+1}` for one pole point only.
    pub fn principal_part_at(&self, root: Root) -> Vec<Laurent> {
        match self.pole_order(root) {
            0 => Vec::new(),
            m => principal_part(self, root, m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use proptest::prelude::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::frac(n, d)
    }

    #[test]
    fn two_simple_poles() {
        let pf = RatFunc::power_difference(2, 1).partial_fractions();
        assert_eq!(pf.coefficient(Root::one(), 0), Laurent::monomial(s(1, 2), -1));
        assert_eq!(pf.coefficient(Root::minus_one(), 0), Laurent::monomial(s(-1, 2), -1));
        assert!(pf.remainder().is_zero());
        assert_eq!(pf.terms().count(), 2);
    }

    #[test]
    fn double_pole_at_one() {
        // -(z+w)/(2(z-w)^2) = -w/(z-w)^2 - (1/2)/(z-w)
        let mut num = Poly2::monomial(s(-1, 2), 1, 0);
        num.add_term(0, 1, &s(-1, 2));
        let pf = RatFunc::new(num, [(Root::one(), 2)]).partial_fractions();
        assert_eq!(pf.coefficient(Root::one(), 1), Laurent::monomial(s(-1, 1), 1));
        assert_eq!(pf.coefficient(Root::one(), 0), Laurent::constant(s(-1, 2)));
        assert!(pf.remainder().is_zero());
    }

    #[test]
    fn squared_difference() {
        // -(z^2+w^2)/(2(z^2-w^2)^2) = -1/4 (z-w)^-2 - 1/4 (z+w)^-2
        let mut num = Poly2::monomial(s(-1, 2), 2, 0);
        num.add_term(0, 2, &s(-1, 2));
        let f = &RatFunc::from_poly(num) * &RatFunc::power_difference(2, 2);
        let pf = f.partial_fractions();
        assert_eq!(pf.coefficient(Root::one(), 1), Laurent::constant(s(-1, 4)));
        assert_eq!(pf.coefficient(Root::minus_one(), 1), Laurent::constant(s(-1, 4)));
        assert!(pf.coefficient(Root::one(), 0).is_zero());
        assert!(pf.coefficient(Root::minus_one(), 0).is_zero());
        assert!(pf.remainder().is_zero());
    }

    #[test]
    fn laurent_numerator_keeps_remainder() {
        // z^2 w^-1 / (z - w) = z w^-1 + 1 + w/(z - w)
        let f = RatFunc::new(Poly2::monomial(Scalar::one(), 2, -1), [(Root::one(), 1)]);
        let pf = f.partial_fractions();
        assert_eq!(pf.coefficient(Root::one(), 0), Laurent::monomial(Scalar::one(), 1));
        let mut rem = Poly2::monomial(Scalar::one(), 1, -1);
        rem.add_term(0, 0, &Scalar::one());
        assert_eq!(pf.remainder(), &rem);
        // z^-1 / (z - w) has a z = 0 pole that lands in the remainder
        let g = RatFunc::new(Poly2::monomial(Scalar::one(), -1, 0), [(Root::one(), 1)]);
        assert_eq!(g.partial_fractions().recombine(), g);
        assert_eq!(g.partial_fractions().coefficient(Root::one(), 0), Laurent::monomial(Scalar::one(), -1));
    }

    fn admissible() -> impl Strategy<Value = RatFunc> {
        let term = (-3i64..=3, 1i64..=3, -2i32..=3, -2i32..=3);
        let roots = proptest::collection::vec((0u32..6, 1u32..=3), 0..=3);
        (proptest::collection::vec(term, 1..=4), roots, prop::sample::select(vec![1u32, 2, 3, 4, 6])).prop_map(
            |(terms, roots, m)| {
                let mut num = Poly2::zero();
                for (n, d, i, j) in terms {
                    num.add_term(i, j, &Scalar::frac(n, d));
                }
                // sprinkle a root-of-unity coefficient so non-rational arithmetic is covered
                num.add_term(0, 0, &Scalar::root(m, 1));
                RatFunc::new(num, roots.into_iter().map(|(k, e)| (Root::new(k as i64, m), e)))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn recombination_round_trip(f in admissible()) {
            let pf = f.partial_fractions();
            prop_assert_eq!(pf.recombine(), f.clone());
            prop_assert_eq!(PartialFraction::of(&pf.recombine()), pf);
        }
    }
}
