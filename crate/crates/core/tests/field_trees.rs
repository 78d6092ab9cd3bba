mod common;

use multiloc::catalog::systems::{betagamma, chi2};
use multiloc::fieldcalc::{canonicalize, ope, parse_expr, FieldExpr};
use multiloc::Scalar;
use proptest::prelude::*;

use common::{scalar, tree};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_trees_parse_back(e in tree(&["chi"])) {
        let text = e.to_text(4);
        prop_assert_eq!(parse_expr(&text, 4).unwrap(), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_form_is_a_fixed_point(e in tree(&["chi"])) {
        let sys = chi2();
        let f = canonicalize(&e, &sys).unwrap();
        prop_assert_eq!(canonicalize(&f.to_expr(), &sys).unwrap(), f.clone());
        let reparsed = parse_expr(&f.to_text(), sys.ambient_order()).unwrap();
        prop_assert_eq!(canonicalize(&reparsed, &sys).unwrap(), f);
    }

    #[test]
    fn betagamma_canonical_form_is_a_fixed_point(e in tree(&["beta", "gamma"])) {
        let sys = betagamma();
        let f = canonicalize(&e, &sys).unwrap();
        prop_assert_eq!(canonicalize(&f.to_expr(), &sys).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // the singular part is linear in each argument
    #[test]
    fn ope_is_bilinear(a in tree(&["chi"]), b in tree(&["chi"]), c in scalar()) {
        let sys = chi2();
        let ab = ope(&a, &b, &sys).unwrap();
        let scaled = FieldExpr::scaled(c.clone(), 0, a.clone());
        let lhs = ope(&scaled, &b, &sys).unwrap();
        let rhs = ab.map_coefficients(&sys, |f| Ok(f.scale(&c))).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = FieldExpr::sum([(Scalar::one(), 0, a.clone()), (Scalar::one(), 0, b.clone())]);
        let mut expect = ope(&a, &a, &sys).unwrap();
        for (j, o, f) in ab.terms() {
            expect.add(j, o, f);
        }
        prop_assert_eq!(ope(&a, &sum, &sys).unwrap(), expect);
    }
}
