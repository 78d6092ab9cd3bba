use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fieldcalc::GeneratorSystem;
use crate::ratfunc::{binomial_scalar, PartialFraction};
use crate::scalar::Scalar;

/// Default bound on the number of basis states.
pub const DEFAULT_SIZE_BOUND: usize = 200_000;

/// A creation monomial `Π g_n |0⟩`: sorted (generator, doubled label) pairs,
/// repeated by multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState(SmallVec<[(usize, i64); 8]>);

impl BasisState {
    pub fn vacuum() -> BasisState {
        BasisState(SmallVec::new())
    }

    pub fn from_modes(mut modes: Vec<(usize, i64)>) -> BasisState {
        modes.sort_unstable();
        BasisState(modes.into())
    }

    pub fn modes(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    /// Twice the energy Σ(−n).
    pub fn energy2(&self) -> i64 {
        self.0.iter().map(|(_, n2)| -n2).sum()
    }

    pub fn particles(&self) -> usize {
        self.0.len()
    }

    /// Number of zero-energy quanta such as γ_0.
    pub fn zero_modes(&self) -> usize {
        self.0.iter().filter(|(_, n2)| *n2 == 0).count()
    }

    pub(crate) fn with(&self, mode: (usize, i64)) -> BasisState {
        let mut v = self.0.clone();
        let at = v.partition_point(|m| *m < mode);
        v.insert(at, mode);
        BasisState(v)
    }

    pub(crate) fn without_at(&self, index: usize) -> BasisState {
        let mut v = self.0.clone();
        v.remove(index);
        BasisState(v)
    }

    pub fn to_text(&self, sys: &GeneratorSystem) -> String {
        if self.0.is_empty() {
            return "|0>".into();
        }
        let mut out = String::new();
        for (g, n2) in self.0.iter().rev() {
            let label = if n2 % 2 == 0 { (n2 / 2).to_string() } else { format!("{n2}/2") };
            out.push_str(&format!("{}_{{{label}}} ", sys.generator(*g).name));
        }
        out.push_str("|0>");
        out
    }
}

/// Energy cutoff (doubled, so half-integers are exact) and cap on zero-energy quanta.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    pub energy2: i64,
    pub zero_modes: Option<usize>,
}

impl Cutoffs {
    /// `E` given as a doubled integer; `P = None` means unbounded.
    pub fn new(energy2: i64, zero_modes: Option<usize>) -> Cutoffs {
        Cutoffs { energy2, zero_modes }
    }

    pub fn grown(&self, by_energy: i64, by_particles: usize) -> Cutoffs {
        Cutoffs { energy2: self.energy2 + 2 * by_energy, zero_modes: self.zero_modes.map(|p| p + by_particles) }
    }
}

/// Mode brackets `[g_n, h_m]` read off the contraction table: with
/// `C_gh = Σ c_k(w) / (z − ζw)^{k+1} + regular`, the difference of the two
/// expansions is `Σ_N C(N, k) ζ^{N−k} c_k(w) w^{N−k} z^{−N−1}`.
/// Memo for [`ModeBrackets::partners`], keyed by `(g, h, m2)`.
type PartnerTable = FxHashMap<(usize, usize, i64), Arc<Vec<(i64, Scalar)>>>;

#[derive(Debug)]
pub struct ModeBrackets {
    system: Arc<GeneratorSystem>,
    fractions: HashMap<(usize, usize), PartialFraction>,
    partners: Mutex<PartnerTable>,
}

impl ModeBrackets {
    pub fn new(system: &Arc<GeneratorSystem>) -> Result<ModeBrackets> {
        let n = system.generators().len();
        let mut fractions = HashMap::new();
        for g in 0..n {
            for h in 0..n {
                fractions.insert((g, h), system.contraction(g, h)?.partial_fractions());
            }
        }
        Ok(ModeBrackets { system: system.clone(), fractions, partners: Mutex::new(FxHashMap::default()) })
    }

    /// `[g_{n2/2}, h_{m2/2}]`.
    pub fn bracket(&self, g: usize, n2: i64, h: usize, m2: i64) -> Scalar {
        let eg = self.system.generator(g).exponent(n2);
        let eh = self.system.generator(h).exponent(m2);
        let big_n = -eg - 1;
        let mut out = Scalar::zero();
        for (root, k, ck) in self.fractions[&(g, h)].terms() {
            let l = eh - big_n + k as i64;
            let c = ck.coeff(l as i32);
            if c.is_zero() {
                continue;
            }
            let zeta = root.value().pow(big_n - k as i64).expect("roots are nonzero");
            out += &(&(&binomial_scalar(big_n, k) * &zeta) * &c);
        }
        out
    }

    /// Annihilators `g_n` with `[g_n, h_m] ≠ 0`, as (doubled label, bracket).
    pub fn partners(&self, g: usize, h: usize, m2: i64) -> Arc<Vec<(i64, Scalar)>> {
        let key = (g, h, m2);
        if let Some(v) = self.partners.lock().expect("poisoned").get(&key) {
            return v.clone();
        }
        let gen = self.system.generator(g);
        let eh = self.system.generator(h).exponent(m2);
        let mut labels = Vec::new();
        for (_, k, ck) in self.fractions[&(g, h)].terms() {
            for (l, _) in ck.terms() {
                // N = e_h + k − l, e_g = −N − 1
                let eg = -(eh + k as i64 - l as i64) - 1;
                if let Some(n2) = gen.label_of_exponent(eg) {
                    if gen.is_annihilator(n2) && !labels.contains(&n2) {
                        labels.push(n2);
                    }
                }
            }
        }
        labels.sort_unstable();
        let found: Vec<(i64, Scalar)> = labels
            .into_iter()
            .map(|n2| (n2, self.bracket(g, n2, h, m2)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let found = Arc::new(found);
        self.partners.lock().expect("poisoned").insert(key, found.clone());
        found
    }
}

/// All creation monomials within the cutoffs, in graded lexicographic order.
#[derive(Debug)]
pub struct TruncatedFock {
    system: Arc<GeneratorSystem>,
    cutoffs: Cutoffs,
    states: Vec<BasisState>,
    index: FxHashMap<BasisState, usize>,
    brackets: Arc<ModeBrackets>,
}

impl TruncatedFock {
    pub fn system(&self) -> &Arc<GeneratorSystem> {
        &self.system
    }

    pub fn cutoffs(&self) -> Cutoffs {
        self.cutoffs
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &BasisState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &BasisState) -> bool {
        self.index.contains_key(s)
    }

    pub fn brackets(&self) -> &Arc<ModeBrackets> {
        &self.brackets
    }

    /// The components of `v` on basis states.
    pub fn project(&self, v: &FockVector) -> FockVector {
        FockVector(v.0.iter().filter(|(s, _)| self.contains(s)).map(|(s, c)| (s.clone(), c.clone())).collect())
    }
}

impl fmt::Display for TruncatedFock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.states {
            writeln!(f, "{}", s.to_text(&self.system))?;
        }
        Ok(())
    }
}

pub fn build_space(system: &Arc<GeneratorSystem>, cutoffs: Cutoffs) -> Result<TruncatedFock> {
    build_space_bounded(system, cutoffs, DEFAULT_SIZE_BOUND)
}

pub fn build_space_bounded(system: &Arc<GeneratorSystem>, cutoffs: Cutoffs, bound: usize) -> Result<TruncatedFock> {
    if system.generators().iter().any(|g| g.parity.is_odd()) {
        return Err(Error::OddGenerator);
    }
    if cutoffs.energy2 < 0 {
        return Err(Error::Invalid("energy cutoff must be nonnegative".into()));
    }
    // creation modes in a fixed order: by generator, then by rising energy
    let mut modes = Vec::new();
    for (g, gen) in system.generators().iter().enumerate() {
        let mut n2 = gen.threshold2() - 1;
        while -n2 <= cutoffs.energy2 {
            if gen.is_label(n2) && !gen.is_annihilator(n2) {
                modes.push((g, n2));
            }
            n2 -= 1;
        }
    }
    let mut states = Vec::new();
    let mut current = Vec::new();
    enumerate(&modes, 0, cutoffs, 0, 0, &mut current, &mut states, bound)?;
    states.sort_by(|a: &BasisState, b: &BasisState| {
        (a.energy2(), a.particles(), &a.0).cmp(&(b.energy2(), b.particles(), &b.0))
    });
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(TruncatedFock { system: system.clone(), cutoffs, states, index, brackets: Arc::new(ModeBrackets::new(system)?) })
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    modes: &[(usize, i64)],
    at: usize,
    cutoffs: Cutoffs,
    energy2: i64,
    zeros: usize,
    current: &mut Vec<(usize, i64)>,
    out: &mut Vec<BasisState>,
    bound: usize,
) -> Result<()> {
    if at == modes.len() {
        if out.len() >= bound {
            return Err(Error::BasisTooLarge { bound });
        }
        out.push(BasisState::from_modes(current.clone()));
        return Ok(());
    }
    let (g, n2) = modes[at];
    let mut k = 0usize;
    loop {
        let e = energy2 + k as i64 * -n2;
        let z = zeros + if n2 == 0 { k } else { 0 };
        if e > cutoffs.energy2 || cutoffs.zero_modes.is_some_and(|p| z > p) {
            break;
        }
        enumerate(modes, at + 1, cutoffs, e, z, current, out, bound)?;
        if n2 == 0 && cutoffs.zero_modes.is_none() {
            return Err(Error::Invalid("zero-energy creators need a particle cutoff".into()));
        }
        current.push((g, n2));
        k += 1;
    }
    current.truncate(current.len() - k);
    Ok(())
}

/// Sparse vector in the (untruncated) Fock space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector(BTreeMap<BasisState, Scalar>);

impl FockVector {
    pub fn zero() -> FockVector {
        FockVector(BTreeMap::new())
    }

    pub fn basis(s: BasisState) -> FockVector {
        let mut v = FockVector::zero();
        v.add_term(s, &Scalar::one());
        v
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisState, &Scalar)> + '_ {
        self.0.iter()
    }

    pub fn coeff(&self, s: &BasisState) -> Scalar {
        self.0.get(s).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, s: BasisState, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&s) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.0.remove(&s);
                }
            }
            None => {
                self.0.insert(s, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &other.0 {
            self.add_term(s.clone(), &(x * c));
        }
    }

    /// Multiple of a single basis state, if it is one (zero counts).
    pub fn as_multiple_of(&self, s: &BasisState) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => self.0.get(s).cloned(),
            _ => None,
        }
    }
}
