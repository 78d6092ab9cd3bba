//! Truncated Fock-space oracle: raw modes of canonical fields acting on
//! creation monomials, evaluated exactly from the generators' mode brackets.
//!
//! This is the independent referee for bracket claims. It never looks at the
//! OPE engine: generator brackets come straight from the contraction table,
//! and composite modes are expanded oscillator by oscillator.

mod operator;
mod space;

use rayon::prelude::*;

pub use operator::{raw_mode, Bound, ModeCache, ModeOperator};
pub use space::{
    build_space, build_space_bounded, BasisState, Cutoffs, FockVector, ModeBrackets, TruncatedFock,
    DEFAULT_SIZE_BOUND,
};

use crate::error::{Error, Result};
use crate::fieldcalc::{Field, OpeResult};
use crate::ratfunc::binomial_scalar;
use crate::scalar::Scalar;

/// `[A, B]` on each basis state, and its scalar value when it is central.
#[derive(Clone, Debug)]
pub struct BracketValue {
    pub columns: Vec<FockVector>,
    pub scalar: Option<Scalar>,
}

/// `⟨u|AB − BA|s⟩` for all basis states `u`, `s` (the oracle holds bosons
/// only). Intermediate states outside the basis are summed over exactly
/// whenever they can still reach a basis row.
pub fn bracket(a: &ModeOperator, b: &ModeOperator, space: &TruncatedFock) -> Result<BracketValue> {
    let window = a.exactness_window().end.min(b.exactness_window().end).min(space.len());
    if window == 0 {
        return Err(Error::EmptyWindow);
    }
    let states = &space.states()[..window];
    let columns: Vec<FockVector> = states
        .par_iter()
        .map(|s| {
            let top = space.cutoffs().energy2;
            let mut v = FockVector::zero();
            if s.energy2() + a.min_shift2() + b.min_shift2() > top {
                return v;
            }
            v = a.apply_onto(&b.apply_state_below(s, b.feeding(a)), space);
            v.add_scaled(&b.apply_onto(&a.apply_state_below(s, a.feeding(b)), space), &Scalar::from_int(-1));
            v
        })
        .collect();
    let scalar = central_value(states, &columns);
    Ok(BracketValue { columns, scalar })
}

fn central_value(states: &[BasisState], columns: &[FockVector]) -> Option<Scalar> {
    let mut value: Option<Scalar> = None;
    for (s, v) in states.iter().zip(columns) {
        let c = v.as_multiple_of(s)?;
        match &value {
            None => value = Some(c),
            Some(x) if *x != c => return None,
            _ => {}
        }
    }
    value
}

/// `[A_(p), B_(q)] = Σ_{j,k} C(p, k) ε^{j(p−k)} (c_{jk})_(p+q−k)`, applied to `s`
/// and projected onto the basis.
pub fn predicted_bracket_state(
    ope: &OpeResult,
    p: i64,
    q: i64,
    space: &TruncatedFock,
    s: &BasisState,
) -> Result<FockVector> {
    let coefficients = OpeModes::new(ope);
    coefficients.predicted(p, q, space, s)
}

/// Mode caches for each coefficient field of one OPE.
struct OpeModes<'a> {
    ope: &'a OpeResult,
    caches: Vec<ModeCache>,
}

impl<'a> OpeModes<'a> {
    fn new(ope: &'a OpeResult) -> OpeModes<'a> {
        OpeModes { ope, caches: ope.terms().map(|(_, _, c)| ModeCache::new(c)).collect() }
    }

    fn predicted(&self, p: i64, q: i64, space: &TruncatedFock, s: &BasisState) -> Result<FockVector> {
        let sys = self.ope.system();
        let mut out = FockVector::zero();
        for ((j, order, _), cache) in self.ope.terms().zip(&self.caches) {
            let k = order - 1;
            let weight = &binomial_scalar(p, k) * &sys.epsilon_pow(j as i64 * (p - k as i64));
            if weight.is_zero() {
                continue;
            }
            let op = cache.mode_unchecked(p + q - k as i64, space)?;
            out.add_scaled(&op.apply_state_below(s, op.basis_bound()), &weight);
        }
        Ok(space.project(&out))
    }
}

/// One (p, q) comparison.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub p: i64,
    pub q: i64,
    pub agree: bool,
    /// Scalar value of the oracle bracket, when central.
    pub oracle: Option<Scalar>,
    /// First basis state where the two sides differ.
    pub mismatch: Option<BasisState>,
}

#[derive(Clone, Debug)]
pub struct BracketVsOpe {
    pub checks: Vec<PairCheck>,
}

impl BracketVsOpe {
    pub fn all_agree(&self) -> bool {
        self.checks.iter().all(|c| c.agree)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairCheck> {
        self.checks.iter().filter(|c| !c.agree)
    }
}

/// Oracle brackets of raw modes against the residue formula applied to `ope(a, b)`.
pub fn bracket_vs_ope(a: &Field, b: &Field, pairs: &[(i64, i64)], space: &TruncatedFock) -> Result<BracketVsOpe> {
    bracket_vs_ope_cached(&ModeCache::new(a), &ModeCache::new(b), pairs, space)
}

/// [`bracket_vs_ope`] reusing raw modes already built for `a` and `b`.
pub fn bracket_vs_ope_cached(
    a: &ModeCache,
    b: &ModeCache,
    pairs: &[(i64, i64)],
    space: &TruncatedFock,
) -> Result<BracketVsOpe> {
    let ope = a.field().ope(b.field())?;
    let coefficients = OpeModes::new(&ope);
    let mut checks = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let ap = a.mode(p, space)?;
        let bq = b.mode(q, space)?;
        let oracle = bracket(&ap, &bq, space)?;
        let states = &space.states()[..oracle.columns.len()];
        let predicted: Vec<FockVector> =
            states.par_iter().map(|s| coefficients.predicted(p, q, space, s)).collect::<Result<_>>()?;
        let mismatch = states
            .iter()
            .zip(oracle.columns.iter().zip(&predicted))
            .find(|(_, (x, y))| x != y)
            .map(|(s, _)| s.clone());
        checks.push(PairCheck { p, q, agree: mismatch.is_none(), oracle: oracle.scalar, mismatch });
    }
    Ok(BracketVsOpe { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::systems::{betagamma, chi2};

    fn chi_field() -> (std::sync::Arc<crate::fieldcalc::GeneratorSystem>, Field) {
        let sys = chi2();
        let chi = Field::atom(&sys, 0, 0, 0);
        (sys, chi)
    }

    #[test]
    fn chi_raw_modes() {
        let (sys, chi) = chi_field();
        let space = build_space(&sys, Cutoffs::new(6, None)).unwrap();
        let half = raw_mode(&chi, 0, &space).unwrap();
        assert!(half.apply_state(&BasisState::vacuum()).is_zero());
        let one = BasisState::from_modes(vec![(0, -1)]);
        assert_eq!(*half.apply_state(&one), FockVector::basis(BasisState::vacuum()));
        let up = raw_mode(&chi, -2, &space).unwrap();
        let down = raw_mode(&chi, 1, &space).unwrap();
        let b = bracket(&down, &up, &space).unwrap();
        assert_eq!(b.scalar, Some(Scalar::from_int(-1)));
    }

    #[test]
    fn identity_modes() {
        let sys = chi2();
        let id = Field::identity(&sys);
        let space = build_space(&sys, Cutoffs::new(4, None)).unwrap();
        for s in space.states() {
            assert_eq!(*raw_mode(&id, -1, &space).unwrap().apply_state(s), FockVector::basis(s.clone()));
            assert!(raw_mode(&id, 3, &space).unwrap().apply_state(s).is_zero());
        }
    }

    #[test]
    fn creation_raises_energy_by_minus_n() {
        let (sys, chi) = chi_field();
        let space = build_space(&sys, Cutoffs::new(6, None)).unwrap();
        for p in -4..0 {
            let op = raw_mode(&chi, p, &space).unwrap();
            for s in space.states() {
                for (t, _) in op.apply_state(s).terms() {
                    // χ_{p+1/2} raises energy by −(p + 1/2)
                    assert_eq!(t.energy2(), s.energy2() - (2 * p + 1));
                }
            }
        }
    }

    #[test]
    fn power_range_is_reported() {
        let (sys, chi) = chi_field();
        let space = build_space(&sys, Cutoffs::new(2, None)).unwrap();
        match raw_mode(&chi, -40, &space) {
            Err(Error::PowerOutOfRange { power, min, max }) => {
                assert_eq!(power, -40);
                assert!(min <= -1 && max >= 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn betagamma_bracket_and_vs_ope() {
        let sys = betagamma();
        let beta = Field::atom(&sys, 0, 0, 0);
        let gamma = Field::atom(&sys, 1, 0, 0);
        let space = build_space(&sys, Cutoffs::new(4, Some(3))).unwrap();
        // β(z) = Σ β_n z^{−n−1}: raw p = n; γ(z) = Σ γ_n z^{−n}: raw p = n − 1
        for m in 0..=1 {
            let b = bracket(&raw_mode(&beta, m, &space).unwrap(), &raw_mode(&gamma, -m - 1, &space).unwrap(), &space)
                .unwrap();
            assert_eq!(b.scalar, Some(Scalar::one()));
        }
        let pairs: Vec<(i64, i64)> = (-2..=2).flat_map(|p| (-2..=2).map(move |q| (p, q))).collect();
        assert!(bracket_vs_ope(&beta, &gamma, &pairs, &space).unwrap().all_agree());
    }
}
