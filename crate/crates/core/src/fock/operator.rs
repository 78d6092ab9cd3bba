use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use rustc_hash::FxHashMap as HashMap;

use crate::error::{Error, Result};
use crate::fieldcalc::{Atom, Field, GeneratorSystem};
use crate::scalar::Scalar;

use super::space::{BasisState, Cutoffs, FockVector, ModeBrackets, TruncatedFock};

/// One summand `c · N(atoms)` restricted to `Σ (e_i − d_i) = target`.
#[derive(Clone, Debug)]
struct Term {
    coeff: Scalar,
    atoms: Vec<Atom>,
    target: i64,
    /// Doubled energy change.
    shift2: i64,
}

/// The raw mode `F_(p)` of `F(z) = Σ_p F_(p) z^{−p−1}`.
///
/// Application is evaluated in the full Fock space, so every matrix element
/// between basis states is exact: the exactness window is the whole basis.
/// Results are memoised per basis state.
#[derive(Debug)]
pub struct ModeOperator {
    power: i64,
    system: Arc<GeneratorSystem>,
    brackets: Arc<ModeBrackets>,
    terms: Vec<Term>,
    window: usize,
    cutoffs: Cutoffs,
    /// Smallest doubled energy change over the terms.
    min_shift2: i64,
    max_degree: usize,
    /// `ε^k` for k mod N.
    epsilon: Vec<Scalar>,
    cache: Mutex<HashMap<(BasisState, Bound), Arc<FockVector>>>,
}

/// Limits on the states an application may output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bound {
    pub energy2: i64,
    pub zero_modes: usize,
}

impl Bound {
    pub const NONE: Bound = Bound { energy2: i64::MAX, zero_modes: usize::MAX };
}

/// Doubled energy change of a term, when the generators share one scale.
fn energy_shift2(sys: &GeneratorSystem, atoms: &[Atom], target: i64) -> Option<i64> {
    let s = sys.generator(atoms[0].gen).scale as i64;
    if atoms.iter().any(|a| sys.generator(a.gen).scale as i64 != s) {
        return None;
    }
    let sum_e = target + atoms.iter().map(|a| a.deriv as i64).sum::<i64>();
    let offsets: i64 = atoms.iter().map(|a| sys.generator(a.gen).offset2).sum();
    Some(2 * sum_e / s + offsets)
}

/// Valid raw powers: every live term moves energy by at most three cutoffs.
fn safe_range(field: &Field, energy2: i64) -> Option<(i64, i64)> {
    let sys = field.system();
    let bound = 3 * energy2;
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (m, c) in field.terms() {
        if m.is_identity() {
            continue;
        }
        let s = sys.generator(m.atoms()[0].gen).scale as i64;
        let d: i64 = m.atoms().iter().map(|a| a.deriv as i64).sum();
        let o: i64 = m.atoms().iter().map(|a| sys.generator(a.gen).offset2).sum();
        for (l, _) in c.terms() {
            // Δ2(p) = 2(−p − 1 − l + d)/s + o, kept within ±bound
            let base = -1 - l as i64 + d;
            lo = lo.max(base - ((bound - o) * s).div_euclid(2));
            hi = hi.min(base + ((bound + o) * s).div_euclid(2));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Raw modes of one field on one space, built on first use and shared.
#[derive(Debug)]
pub struct ModeCache {
    field: Field,
    ops: Mutex<HashMap<i64, Arc<ModeOperator>>>,
}

impl ModeCache {
    pub fn new(field: &Field) -> ModeCache {
        ModeCache { field: field.clone(), ops: Mutex::new(HashMap::default()) }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `F_(p)`, range-checked like [`raw_mode`].
    pub fn mode(&self, p: i64, space: &TruncatedFock) -> Result<Arc<ModeOperator>> {
        self.get(p, space, true)
    }

    pub(crate) fn mode_unchecked(&self, p: i64, space: &TruncatedFock) -> Result<Arc<ModeOperator>> {
        self.get(p, space, false)
    }

    fn get(&self, p: i64, space: &TruncatedFock, checked: bool) -> Result<Arc<ModeOperator>> {
        if let Some(op) = self.ops.lock().expect("poisoned").get(&p) {
            if op.cutoffs == space.cutoffs() {
                return Ok(op.clone());
            }
        }
        let op = Arc::new(if checked { raw_mode(&self.field, p, space)? } else { raw_mode_unchecked(&self.field, p, space)? });
        self.ops.lock().expect("poisoned").insert(p, op.clone());
        Ok(op)
    }
}

pub fn raw_mode(field: &Field, p: i64, space: &TruncatedFock) -> Result<ModeOperator> {
    match safe_range(field, space.cutoffs().energy2) {
        Some((lo, hi)) if p < lo || p > hi => Err(Error::PowerOutOfRange { power: p, min: lo, max: hi }),
        None => Err(Error::PowerOutOfRange { power: p, min: 0, max: -1 }),
        _ => raw_mode_unchecked(field, p, space),
    }
}

pub(crate) fn raw_mode_unchecked(field: &Field, p: i64, space: &TruncatedFock) -> Result<ModeOperator> {
    if field.system().name() != space.system().name() {
        return Err(Error::SystemMismatch { left: field.system().name().into(), right: space.system().name().into() });
    }
    let sys = space.system().clone();
    let mut terms = Vec::new();
    for (m, c) in field.terms() {
        for (l, coeff) in c.terms() {
            let target = -p - 1 - l as i64;
            if m.is_identity() && target != 0 {
                continue;
            }
            let shift2 = if m.is_identity() {
                0
            } else {
                energy_shift2(&sys, m.atoms(), target)
                    .ok_or_else(|| Error::Invalid("the oracle needs one scale per monomial".into()))?
            };
            terms.push(Term { coeff: coeff.clone(), atoms: m.atoms().to_vec(), target, shift2 });
        }
    }
    Ok(ModeOperator {
        min_shift2: terms.iter().map(|t| t.shift2).min().unwrap_or(i64::MAX / 4),
        max_degree: terms.iter().map(|t| t.atoms.len()).max().unwrap_or(0),
        power: p,
        epsilon: (0..sys.num_points() as i64).map(|k| sys.epsilon_pow(k)).collect(),
        system: sys,
        brackets: space.brackets().clone(),
        terms,
        window: space.len(),
        cutoffs: space.cutoffs(),
        cache: Mutex::new(HashMap::default()),
    })
}

impl ModeOperator {
    pub fn power(&self) -> i64 {
        self.power
    }

    /// Basis indices on which matrix elements are untouched by truncation.
    pub fn exactness_window(&self) -> std::ops::Range<usize> {
        0..self.window
    }

    pub fn apply_state(&self, s: &BasisState) -> Arc<FockVector> {
        self.apply_state_below(s, Bound::NONE)
    }

    /// `A s` restricted to output states within `bound`.
    pub fn apply_state_below(&self, s: &BasisState, bound: Bound) -> Arc<FockVector> {
        let bound = Bound {
            energy2: bound.energy2.min(s.energy2() + self.max_shift2()),
            zero_modes: bound.zero_modes.min(s.zero_modes() + self.max_degree),
        };
        let key = (s.clone(), bound);
        if let Some(v) = self.cache.lock().expect("poisoned").get(&key) {
            return v.clone();
        }
        let mut out = FockVector::zero();
        for t in &self.terms {
            if s.energy2() + t.shift2 <= bound.energy2 {
                self.apply_term(t, s, bound.zero_modes, &mut out);
            }
        }
        let out = Arc::new(out);
        self.cache.lock().expect("poisoned").insert(key, out.clone());
        out
    }

    /// The bound on outputs that can still reach the basis under `next`.
    pub fn feeding(&self, next: &ModeOperator) -> Bound {
        Bound {
            energy2: self.cutoffs.energy2 - next.min_shift2,
            zero_modes: self.cutoffs.zero_modes.map_or(usize::MAX, |p| p + next.max_degree),
        }
    }

    /// The basis cutoffs as a bound.
    pub fn basis_bound(&self) -> Bound {
        Bound { energy2: self.cutoffs.energy2, zero_modes: self.cutoffs.zero_modes.unwrap_or(usize::MAX) }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in v.terms() {
            out.add_scaled(&self.apply_state(s), c);
        }
        out
    }

    /// Smallest doubled energy change of any term.
    pub fn min_shift2(&self) -> i64 {
        self.min_shift2
    }

    fn max_shift2(&self) -> i64 {
        self.terms.iter().map(|t| t.shift2).max().unwrap_or(i64::MIN / 4)
    }

    /// Whether `t` can reach a basis state under this operator: its energy
    /// after the smallest shift is within E, and the operator can remove
    /// enough zero-energy quanta.
    pub fn reaches_basis(&self, t: &BasisState) -> bool {
        t.energy2() + self.min_shift2 <= self.cutoffs.energy2
            && self.cutoffs.zero_modes.is_none_or(|p| t.zero_modes() <= p + self.max_degree)
    }

    /// `⟨u|A|v⟩` for every basis state `u`, with the sum over `v` taken in
    /// the full Fock space but skipping states that cannot reach the basis.
    pub fn apply_onto(&self, v: &FockVector, space: &TruncatedFock) -> FockVector {
        let mut out = FockVector::zero();
        for (s, c) in v.terms() {
            if self.reaches_basis(s) {
                out.add_scaled(&self.apply_state_below(s, self.basis_bound()), c);
            }
        }
        space.project(&out)
    }

    /// Columns on the given basis states, computed in parallel.
    pub fn columns(&self, states: &[BasisState]) -> Vec<Arc<FockVector>> {
        states.par_iter().map(|s| self.apply_state(s)).collect()
    }

    /// Matrix entries `(row, col, value)` inside the truncated space.
    pub fn triples(&self, space: &TruncatedFock) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (col, v) in self.columns(space.states()).into_iter().enumerate() {
            for (s, c) in v.terms() {
                if let Some(row) = space.index_of(s) {
                    out.push((row, col, c.clone()));
                }
            }
        }
        out
    }

    /// `ff(e, d) · ε^{a e}`: the factor of mode `z^e` in `∂^d [g(ε^a z)]`.
    fn atom_factor(&self, a: &Atom, e: i64) -> Option<Scalar> {
        let ff = falling(e, a.deriv as i64);
        if ff == 0 {
            return None;
        }
        let eps = &self.epsilon[(a.dil as i64 * e).rem_euclid(self.epsilon.len() as i64) as usize];
        Some(if ff == 1 { eps.clone() } else { &Scalar::from_int(ff) * eps })
    }

    fn apply_term(&self, t: &Term, s: &BasisState, max_zero: usize, out: &mut FockVector) {
        if t.atoms.is_empty() {
            out.add_term(s.clone(), &t.coeff);
            return;
        }
        let k = t.atoms.len();
        for mask in 0..(1u32 << k) {
            let mut ann = Vec::new();
            let mut cre = Vec::new();
            for (i, a) in t.atoms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ann.push(a);
                } else {
                    cre.push(a);
                }
            }
            // annihilators act first; they commute among themselves
            let mut layer: HashMap<(BasisState, i64), Scalar> = HashMap::default();
            layer.insert((s.clone(), 0), t.coeff.clone());
            for a in &ann {
                let gen = self.system.generator(a.gen);
                let mut next: HashMap<(BasisState, i64), Scalar> = HashMap::default();
                for ((st, used), c) in &layer {
                    for (pos, &(h, m2)) in st.modes().iter().enumerate() {
                        for (n2, val) in self.brackets.partners(a.gen, h, m2).iter() {
                            let e = gen.exponent(*n2);
                            let Some(f) = self.atom_factor(a, e) else { continue };
                            let key = (st.without_at(pos), used + e - a.deriv as i64);
                            let slot = next.entry(key).or_default();
                            *slot += &(&(c * val) * &f);
                        }
                    }
                }
                next.retain(|_, c| !c.is_zero());
                layer = next;
            }
            let mut picks = Vec::with_capacity(cre.len());
            for ((st, used), c) in layer {
                self.create(&cre, t.target - used, &mut picks, &st, &c, max_zero, out);
            }
        }
    }

    /// Choose creation modes for `atoms` whose exponents sum to `remaining`,
    /// multiplying the factors once per complete choice.
    fn create(
        &self,
        atoms: &[&Atom],
        remaining: i64,
        picks: &mut Vec<(usize, i64, i64)>,
        st: &BasisState,
        c: &Scalar,
        max_zero: usize,
        out: &mut FockVector,
    ) {
        let depth = picks.len();
        if depth == atoms.len() {
            let zeros = picks.iter().filter(|p| p.1 == 0).count();
            if remaining != 0 || st.zero_modes() + zeros > max_zero {
                return;
            }
            let mut ff: i128 = 1;
            let mut eps = 0i64;
            let mut state = st.clone();
            for (a, &(g, n2, e)) in atoms.iter().zip(picks.iter()) {
                ff *= falling(e, a.deriv as i64) as i128;
                eps += a.dil as i64 * e;
                state = state.with((g, n2));
            }
            let mut coeff = c * &self.epsilon[eps.rem_euclid(self.epsilon.len() as i64) as usize];
            if ff != 1 {
                coeff = &coeff * &Scalar::from_rational(BigRational::from_integer(BigInt::from(ff)));
            }
            out.add_term(state, &coeff);
            return;
        }
        let a = atoms[depth];
        let gen = self.system.generator(a.gen);
        let d = a.deriv as i64;
        let range = if depth + 1 == atoms.len() {
            remaining + d..=remaining + d
        } else {
            // each later creator contributes at least −d_j
            let slack: i64 = atoms[depth + 1..].iter().map(|b| b.deriv as i64).sum();
            0..=remaining + d + slack
        };
        for e in range {
            let Some(n2) = gen.label_of_exponent(e) else { continue };
            if gen.is_annihilator(n2) || falling(e, d) == 0 {
                continue;
            }
            picks.push((a.gen, n2, e));
            self.create(atoms, remaining - (e - d), picks, st, c, max_zero, out);
            picks.pop();
        }
    }
}

/// `e (e − 1) ⋯ (e − d + 1)`.
fn falling(e: i64, d: i64) -> i64 {
    (0..d).map(|i| e - i).product()
}
