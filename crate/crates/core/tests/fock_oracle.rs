use multiloc::catalog::checks::{oracle_suite, virasoro_mode_check, HeisenbergCase};
use multiloc::catalog::fields::{derived_canonical, Params};
use multiloc::catalog::modes::ModeIndexing;
use multiloc::catalog::systems::{betagamma, chi2};
use multiloc::fieldcalc::Field;
use multiloc::fock::{bracket_vs_ope, build_space, raw_mode, BasisState, Cutoffs, FockVector, ModeOperator};
use multiloc::Scalar;

/// `[b, c] v`.
fn commutator(b: &ModeOperator, c: &ModeOperator, v: &FockVector) -> FockVector {
    let mut out = b.apply(&c.apply(v));
    out.add_scaled(&c.apply(&b.apply(v)), &Scalar::from_int(-1));
    out
}

/// `[a, [b, c]] v`.
fn nested(a: &ModeOperator, b: &ModeOperator, c: &ModeOperator, v: &FockVector) -> FockVector {
    let mut out = a.apply(&commutator(b, c, v));
    out.add_scaled(&commutator(b, c, &a.apply(v)), &Scalar::from_int(-1));
    out
}

#[test]
fn heisenberg_jacobi_identity() {
    for case in [HeisenbergCase::ChiUntwisted, HeisenbergCase::BetaGammaTwisted] {
        let h = case.field().unwrap();
        let idx = case.indexing();
        let space = build_space(h.system(), Cutoffs::new(6, Some(2))).unwrap();
        let modes: Vec<ModeOperator> =
            idx.labels(4).map(|l| raw_mode(&h, idx.power(l).unwrap(), &space).unwrap()).collect();
        for s in space.states().iter().take(12) {
            let v = FockVector::basis(s.clone());
            for a in &modes {
                for b in &modes {
                    for c in &modes {
                        let mut total = nested(a, b, c, &v);
                        total.add_scaled(&nested(b, c, a, &v), &Scalar::one());
                        total.add_scaled(&nested(c, a, b, &v), &Scalar::one());
                        assert!(total.is_zero(), "{} on {}", case.field_name(), s.to_text(h.system()));
                    }
                }
            }
        }
    }
}

#[test]
fn vacuum_axioms_for_betagamma() {
    let sys = betagamma();
    let space = build_space(&sys, Cutoffs::new(8, Some(3))).unwrap();
    for (g, gen) in sys.generators().iter().enumerate() {
        let f = Field::atom(&sys, g, 0, 0);
        for label2 in (-6..=6).filter(|l| gen.is_label(*l)) {
            // the mode multiplies z^e, which is raw power −e − 1
            let op = raw_mode(&f, -gen.exponent(label2) - 1, &space).unwrap();
            let out = op.apply_state(&BasisState::vacuum());
            if gen.is_annihilator(label2) {
                assert!(out.is_zero(), "{}_{} kills the vacuum", gen.name, label2 / 2);
            } else {
                assert!(!out.is_zero());
                for (t, _) in out.terms() {
                    assert_eq!(t.energy2(), -label2, "{}_{} raises energy by -n", gen.name, label2 / 2);
                }
            }
        }
    }
}

#[test]
fn l3_virasoro_modes_at_c_one() {
    for kappa in [Scalar::zero(), Scalar::frac(1, 2)] {
        let l = derived_canonical("L3", &Params { kappa, ..Params::default() }).unwrap();
        let checks = virasoro_mode_check(&l, &Scalar::one(), 2, Cutoffs::new(12, Some(6))).unwrap();
        assert_eq!(checks.len(), 25);
        for c in checks {
            assert!(c.agree, "[L_{}, L_{}]", c.m, c.n);
        }
    }
}

#[test]
fn l3_raw_modes_match_the_residue_formula() {
    let l = derived_canonical("L3", &Params::default()).unwrap();
    let space = build_space(l.system(), Cutoffs::new(12, Some(6))).unwrap();
    let suite = oracle_suite(&[("L3".to_string(), l)], 5, &space).unwrap();
    assert_eq!(suite[0].result.checks.len(), 121);
    assert!(suite[0].result.all_agree());
}

#[test]
fn bracket_values_are_truncation_stable() {
    let chi = Field::atom(&chi2(), 0, 0, 0);
    let utw = derived_canonical("h_chi_utw", &Params::default()).unwrap();
    let pairs: Vec<(i64, i64)> = (-4..=4).flat_map(|p| (-4..=4).map(move |q| (p, q))).collect();
    let cut = Cutoffs::new(12, Some(6));
    for f in [chi, utw] {
        let small = bracket_vs_ope(&f, &f, &pairs, &build_space(f.system(), cut).unwrap()).unwrap();
        let large = bracket_vs_ope(&f, &f, &pairs, &build_space(f.system(), cut.grown(2, 2)).unwrap()).unwrap();
        assert!(small.all_agree() && large.all_agree());
        for (a, b) in small.checks.iter().zip(&large.checks) {
            assert_eq!(a.oracle, b.oracle, "({}, {})", a.p, a.q);
        }
    }
}

#[test]
fn modes_follow_the_catalog_indexing() {
    // h_χ^Z(z) = Σ h_n z^{−2n−2}: [h_1, h_{−1}] = −1 from raw powers 3 and −1
    let h = derived_canonical("h_chi_utw", &Params::default()).unwrap();
    let space = build_space(h.system(), Cutoffs::new(8, None)).unwrap();
    let idx = ModeIndexing::H_CHI_UTW;
    let up = raw_mode(&h, idx.power(2).unwrap(), &space).unwrap();
    let down = raw_mode(&h, idx.power(-2).unwrap(), &space).unwrap();
    let v = FockVector::basis(BasisState::vacuum());
    let mut expected = FockVector::zero();
    expected.add_term(BasisState::vacuum(), &Scalar::from_int(-1));
    assert_eq!(commutator(&up, &down, &v), expected);
}
