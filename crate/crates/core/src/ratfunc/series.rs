use std::collections::BTreeMap;

use super::poly::{binomial_scalar, Poly2};
use super::{RatFunc, Root};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// |z| ≫ |w|: truncated by w-degree.
    ZDominant,
    /// |w| ≫ |z|: truncated by z-degree.
    WDominant,
}

/// A truncated double series Σ c_{ij} z^i w^j. Every term whose degree in
/// the small variable is at most `order` is exact; larger ones are absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesExpansion {
    direction: Direction,
    order: i32,
    terms: BTreeMap<(i32, i32), Scalar>,
}

impl SeriesExpansion {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), &Scalar)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, zexp: i32, wexp: i32) -> Scalar {
        self.terms.get(&(zexp, wexp)).cloned().unwrap_or_default()
    }

    fn small_degree(direction: Direction, key: (i32, i32)) -> i32 {
        match direction {
            Direction::ZDominant => key.1,
            Direction::WDominant => key.0,
        }
    }

    fn min_degree(&self) -> Option<i32> {
        self.terms.keys().map(|k| Self::small_degree(self.direction, *k)).min()
    }

    pub fn truncate(&self, order: i32) -> SeriesExpansion {
        let order = order.min(self.order);
        let dir = self.direction;
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| Self::small_degree(dir, **k) <= order)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        SeriesExpansion { direction: dir, order, terms }
    }

    /// Product, truncated to the degree up to which both factors are exact.
    pub fn mul(&self, other: &SeriesExpansion) -> SeriesExpansion {
        assert_eq!(self.direction, other.direction, "series in different regions");
        let dir = self.direction;
        let order = match (self.min_degree(), other.min_degree()) {
            (Some(a), Some(b)) => (self.order + b).min(other.order + a),
            _ => self.order.min(other.order),
        };
        let mut acc = Poly2::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let key = (a + c, b + d);
                if Self::small_degree(dir, key) <= order {
                    acc.add_term(key.0, key.1, &(x * y));
                }
            }
        }
        SeriesExpansion { direction: dir, order, terms: acc.terms().map(|(k, c)| (k, c.clone())).collect() }
    }
}

impl RatFunc {
    /// Expansion in the given region, exact up to degree `order` in the small variable.
    pub fn expand(&self, direction: Direction, order: i32) -> SeriesExpansion {
        let num = self.numerator();
        let dir = direction;
        let low = match dir {
            Direction::ZDominant => num.min_w(),
            Direction::WDominant => num.min_z(),
        };
        let Some(low) = low else {
            return SeriesExpansion { direction: dir, order, terms: BTreeMap::new() };
        };
        // every pole factor only raises the small degree, so the budget is fixed
        let budget = order - low;
        let mut acc = num.clone();
        if budget < 0 {
            acc = Poly2::zero();
        }
        for (root, m) in self.poles() {
            if acc.is_zero() {
                break;
            }
            let factor = pole_series(root, m, dir, budget);
            acc = mul_within(&acc, &factor, dir, order);
        }
        let terms = acc
            .terms()
            .filter(|(k, _)| SeriesExpansion::small_degree(dir, *k) <= order)
            .map(|(k, c)| (k, c.clone()))
            .collect();
        SeriesExpansion { direction: dir, order, terms }
    }
}

fn mul_within(a: &Poly2, b: &Poly2, dir: Direction, order: i32) -> Poly2 {
    let mut out = Poly2::zero();
    let lowb = match dir {
        Direction::ZDominant => b.min_w(),
        Direction::WDominant => b.min_z(),
    }
    .unwrap_or(0);
    for ((i, j), x) in a.terms() {
        if SeriesExpansion::small_degree(dir, (i, j)) + lowb > order {
            continue;
        }
        for ((k, l), y) in b.terms() {
            let key = (i + k, j + l);
            if SeriesExpansion::small_degree(dir, key) <= order {
                out.add_term(key.0, key.1, &(x * y));
            }
        }
    }
    out
}

/// `(z - c w)^{-m}` expanded in the given region, keeping `budget + 1` terms.
fn pole_series(root: Root, m: u32, dir: Direction, budget: i32) -> Poly2 {
    let c = root.value();
    let m = m as i64;
    let mut out = Poly2::zero();
    match dir {
        // z^{-m} Σ_r C(m+r-1, r) c^r w^r z^{-r}
        Direction::ZDominant => {
            for r in 0..=budget.max(-1) as i64 {
                let coeff = &binomial_scalar(m + r - 1, r as u32) * &c.pow(r).expect("nonzero");
                out.add_term((-m - r) as i32, r as i32, &coeff);
            }
        }
        // (-c w)^{-m} Σ_r C(m+r-1, r) c^{-r} z^r w^{-r}
        Direction::WDominant => {
            let lead = (-&c).pow(-m).expect("nonzero");
            // z-degree of a term is r, but w-negative powers never count against the budget
            for r in 0..=budget.max(-1) as i64 {
                let coeff = &(&binomial_scalar(m + r - 1, r as u32) * &c.pow(-r).expect("nonzero")) * &lead;
                out.add_term(r as i32, (-m - r) as i32, &coeff);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(dir: Direction, order: i32, terms: &[((i32, i32), i64)]) -> SeriesExpansion {
        SeriesExpansion {
            direction: dir,
            order,
            terms: terms.iter().map(|(k, c)| (*k, Scalar::from_int(*c))).collect(),
        }
    }

    #[test]
    fn geometric_series_z_dominant() {
        let e = RatFunc::pole(Root::minus_one(), 1).expand(Direction::ZDominant, 3);
        let expect = series(Direction::ZDominant, 3, &[((-1, 0), 1), ((-2, 1), -1), ((-3, 2), 1), ((-4, 3), -1)]);
        assert_eq!(e, expect);
    }

    #[test]
    fn geometric_series_w_dominant() {
        let e = RatFunc::pole(Root::one(), 1).expand(Direction::WDominant, 2);
        let expect = series(Direction::WDominant, 2, &[((0, -1), -1), ((1, -2), -1), ((2, -3), -1)]);
        assert_eq!(e, expect);
    }

    #[test]
    fn partial_fractions_expand_alike() {
        let f = RatFunc::power_difference(2, 1);
        let pf = f.partial_fractions();
        for order in 0..=12 {
            for dir in [Direction::ZDominant, Direction::WDominant] {
                let mut sum = RatFunc::from_poly(pf.remainder().clone()).expand(dir, order);
                for (r, k, c) in pf.terms() {
                    let t = RatFunc::new(Poly2::from_w(c), [(r, k + 1)]).expand(dir, order);
                    let mut acc = Poly2::zero();
                    for (key, v) in sum.terms().chain(t.terms()) {
                        acc.add_term(key.0, key.1, v);
                    }
                    sum.terms = acc.terms().map(|(k, c)| (k, c.clone())).collect();
                }
                assert_eq!(sum, f.expand(dir, order), "order {order}");
            }
        }
    }

    #[test]
    fn z_dominant_coefficients_of_double_pole() {
        // 1/(z-w)^2 = Σ (r+1) w^r z^{-r-2}
        let e = RatFunc::pole(Root::one(), 2).expand(Direction::ZDominant, 5);
        for r in 0..=5 {
            assert_eq!(e.coeff(-r - 2, r), Scalar::from_int(r as i64 + 1));
        }
    }

    fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
        let term = (-3i64..=3, -2i32..=2, -1i32..=2);
        (proptest::collection::vec(term, 1..=3), proptest::collection::vec((0u32..4, 1u32..=2), 0..=2)).prop_map(
            |(terms, roots)| {
                let mut num = Poly2::zero();
                for (c, i, j) in terms {
                    num.add_term(i, j, &Scalar::from_int(c));
                }
                RatFunc::new(num, roots.into_iter().map(|(k, m)| (Root::new(k as i64, 4), m)))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn expansion_respects_products(f in small_ratfunc(), g in small_ratfunc(), z_dom in any::<bool>()) {
            let dir = if z_dom { Direction::ZDominant } else { Direction::WDominant };
            let prod = f.expand(dir, 6).mul(&g.expand(dir, 6));
            let direct = (&f * &g).expand(dir, prod.order());
            prop_assert_eq!(prod, direct);
        }
    }
}
