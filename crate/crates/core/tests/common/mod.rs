//! Strategies shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use multiloc::fieldcalc::FieldExpr;
use multiloc::ratfunc::Poly2;
use multiloc::{RatFunc, Root, Scalar};
use proptest::prelude::*;

pub fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Scalar::frac(n, d)),
        (0i64..4).prop_map(|k| Scalar::root(4, k)),
    ]
}

pub fn leaf(names: &'static [&'static str]) -> impl Strategy<Value = FieldExpr> {
    prop_oneof![
        Just(FieldExpr::Identity),
        (prop::sample::select(names), 0u32..2).prop_map(|(n, d)| FieldExpr::gen(n, d)),
    ]
}

pub fn tree(names: &'static [&'static str]) -> impl Strategy<Value = FieldExpr> {
    leaf(names).prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (0u32..3, inner.clone()).prop_map(|(k, e)| FieldExpr::derivative(k, e)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FieldExpr::nprod(a, b)),
            prop::collection::vec((scalar(), -3i32..=3, inner), 1..3).prop_map(FieldExpr::sum),
        ]
    })
}

/// Numerators with rational and root-of-unity coefficients over poles at
/// m-th roots of unity, m ∈ {1, 2, 3, 4, 6}.
pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    let term = (-3i64..=3, 1i64..=3, -2i32..=3, -2i32..=3);
    let roots = prop::collection::vec((0u32..6, 1u32..=3), 0..=3);
    (prop::collection::vec(term, 1..=4), roots, prop::sample::select(vec![1u32, 2, 3, 4, 6])).prop_map(
        |(terms, roots, m)| {
            let mut num = Poly2::zero();
            for (n, d, i, j) in terms {
                num.add_term(i, j, &Scalar::frac(n, d));
            }
            num.add_term(0, 0, &Scalar::root(m, 1));
            RatFunc::new(num, roots.into_iter().map(|(k, e)| (Root::new(k as i64, m), e)))
        },
    )
}
