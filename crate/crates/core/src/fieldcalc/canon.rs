//! Canonical form of fields: `Σ p(z) · N(x_1 … x_k)`, with `N` the fully
//! normal ordered product of the free oscillators and each `x_i` an atom
//! `∂^d [g(ε^a z)]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ratfunc::Laurent;
use crate::scalar::Scalar;

use super::expr::FieldExpr;
use super::system::{GeneratorSystem, Parity};

/// `∂_z^deriv [g(ε^dil z)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub gen: usize,
    pub dil: u32,
    pub deriv: u32,
}

impl Atom {
    pub fn new(gen: usize, deriv: u32, dil: u32) -> Atom {
        Atom { gen, dil, deriv }
    }

    pub fn to_expr(&self, sys: &GeneratorSystem) -> FieldExpr {
        let g = FieldExpr::gen(&sys.generator(self.gen).name, self.dil);
        if self.deriv == 0 {
            g
        } else {
            FieldExpr::derivative(self.deriv, g)
        }
    }
}

/// A sorted multiset of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Atom>);

impl Monomial {
    pub fn identity() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Sort `atoms` into a monomial, returning the sign of the odd reordering,
    /// or `None` when an odd atom repeats.
    pub fn from_atoms(mut atoms: Vec<Atom>, sys: &GeneratorSystem) -> Option<(bool, Monomial)> {
        let odd = |a: &Atom| sys.generator(a.gen).parity.is_odd();
        // insertion sort, counting transpositions of odd pairs
        let mut negative = false;
        for i in 1..atoms.len() {
            let mut j = i;
            while j > 0 && atoms[j - 1] > atoms[j] {
                if odd(&atoms[j - 1]) && odd(&atoms[j]) {
                    negative = !negative;
                }
                atoms.swap(j - 1, j);
                j -= 1;
            }
        }
        if atoms.windows(2).any(|w| w[0] == w[1] && odd(&w[0])) {
            return None;
        }
        Some((negative, Monomial(atoms)))
    }

    pub fn parity(&self, sys: &GeneratorSystem) -> Parity {
        self.0.iter().fold(Parity::Even, |p, a| p.plus(sys.generator(a.gen).parity))
    }

    /// The tree `:x_1 :x_2 … x_k::`, or `Id`.
    pub fn to_expr(&self, sys: &GeneratorSystem) -> FieldExpr {
        let mut iter = self.0.iter().rev();
        let Some(last) = iter.next() else { return FieldExpr::Identity };
        let mut e = last.to_expr(sys);
        for a in iter {
            e = FieldExpr::nprod(a.to_expr(sys), e);
        }
        e
    }
}

/// A canonical field `Σ p_m(z) · N(m)` over a generator system.
#[derive(Clone, Debug)]
pub struct Field {
    system: Arc<GeneratorSystem>,
    terms: BTreeMap<Monomial, Laurent>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.system.name() == other.system.name() && self.terms == other.terms
    }
}

impl Field {
    pub fn zero(system: &Arc<GeneratorSystem>) -> Field {
        Field { system: system.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(system: &Arc<GeneratorSystem>) -> Field {
        Field::monomial(system, Monomial::identity(), Laurent::constant(Scalar::one()))
    }

    pub fn monomial(system: &Arc<GeneratorSystem>, m: Monomial, coeff: Laurent) -> Field {
        let mut f = Field::zero(system);
        f.add_term(m, &coeff);
        f
    }

    /// `∂^deriv [g(ε^dil z)]`, with the dilation reduced by the generator's period.
    pub fn atom(system: &Arc<GeneratorSystem>, gen: usize, deriv: u32, dil: i64) -> Field {
        let a = Atom::new(gen, deriv, dil.rem_euclid(system.dilation_period(gen) as i64) as u32);
        Field::monomial(system, Monomial(vec![a]), Laurent::constant(Scalar::one()))
    }

    pub fn system(&self) -> &Arc<GeneratorSystem> {
        &self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Laurent)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Laurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The multiple of `Id`.
    pub fn central(&self) -> Laurent {
        self.coeff(&Monomial::identity())
    }

    pub fn is_central(&self) -> bool {
        self.terms.keys().all(Monomial::is_identity)
    }

    pub fn without_central(&self) -> Field {
        let mut f = self.clone();
        f.terms.remove(&Monomial::identity());
        f
    }

    /// `None` for a mixed-parity field; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(|m| m.parity(&self.system));
        let first = ps.next().unwrap_or(Parity::Even);
        ps.all(|p| p == first).then_some(first)
    }

    pub fn add_term(&mut self, m: Monomial, coeff: &Laurent) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Adds `±coeff · N(atoms)`, sorting the atoms.
    pub(crate) fn add_atoms(&mut self, atoms: Vec<Atom>, coeff: &Laurent) {
        if let Some((negative, m)) = Monomial::from_atoms(atoms, &self.system) {
            if negative {
                self.add_term(m, &-coeff);
            } else {
                self.add_term(m, coeff);
            }
        }
    }

    pub fn same_system(&self, other: &Field) -> Result<()> {
        if Arc::ptr_eq(&self.system, &other.system) || self.system.name() == other.system.name() {
            Ok(())
        } else {
            Err(Error::SystemMismatch { left: self.system.name().into(), right: other.system.name().into() })
        }
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.same_system(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Field {
        self.mul_laurent(&Laurent::constant(c.clone()))
    }

    pub fn mul_laurent(&self, p: &Laurent) -> Field {
        let mut out = Field::zero(&self.system);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * p));
        }
        out
    }

    /// `c z^l · self`.
    pub fn times_monomial(&self, c: &Scalar, l: i32) -> Field {
        self.mul_laurent(&Laurent::monomial(c.clone(), l))
    }

    pub fn derivative(&self) -> Field {
        let mut out = Field::zero(&self.system);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.derivative());
            for i in 0..m.0.len() {
                let mut atoms = m.0.clone();
                atoms[i].deriv += 1;
                out.add_atoms(atoms, c);
            }
        }
        out
    }

    pub fn derivative_n(&self, k: u32) -> Field {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    /// `F(ε^i z)`.
    pub fn dilate(&self, i: i64) -> Field {
        let sys = &self.system;
        let mut out = Field::zero(sys);
        for (m, c) in &self.terms {
            let mut coeff = c.dilate(&sys.epsilon_pow(i));
            let mut atoms = Vec::with_capacity(m.0.len());
            for a in &m.0 {
                // (∂^d g(ε^a ·))(ε^i z) = ε^{-id} ∂_z^d [g(ε^{a+i} z)]
                coeff = coeff.scale(&sys.epsilon_pow(-i * a.deriv as i64));
                let period = sys.dilation_period(a.gen) as i64;
                atoms.push(Atom::new(a.gen, a.deriv, (a.dil as i64 + i).rem_euclid(period) as u32));
            }
            out.add_atoms(atoms, &coeff);
        }
        out
    }

    /// The canonical tree `Σ c z^l * N(…)`.
    pub fn to_expr(&self) -> FieldExpr {
        let mut items = Vec::new();
        for (m, c) in &self.terms {
            let e = m.to_expr(&self.system);
            for (l, s) in c.terms() {
                items.push((s.clone(), l, e.clone()));
            }
        }
        FieldExpr::sum(items)
    }

    pub fn to_text(&self) -> String {
        self.to_expr().to_text(self.system.ambient_order())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldcalc::system::{Generator, Lattice};

    fn system() -> Arc<GeneratorSystem> {
        let mut sys = GeneratorSystem::new("t", 2, 2);
        sys.add_generator(Generator::new("chi", Parity::Even, Lattice::HalfInteger, 1, 1));
        sys.add_generator(Generator::new("psi", Parity::Odd, Lattice::HalfInteger, 1, 1));
        Arc::new(sys)
    }

    #[test]
    fn odd_atoms_anticommute_inside_n() {
        let sys = system();
        let a = Atom::new(1, 0, 0);
        let b = Atom::new(1, 1, 0);
        let (s1, m1) = Monomial::from_atoms(vec![a, b], &sys).unwrap();
        let (s2, m2) = Monomial::from_atoms(vec![b, a], &sys).unwrap();
        assert_eq!(m1, m2);
        assert_ne!(s1, s2);
        assert!(Monomial::from_atoms(vec![a, a], &sys).is_none());
        let (s3, _) = Monomial::from_atoms(vec![Atom::new(0, 0, 0), Atom::new(0, 0, 1)], &sys).unwrap();
        assert!(!s3);
    }

    #[test]
    fn derivative_and_dilation_commute_up_to_epsilon() {
        let sys = system();
        let chi = Field::atom(&sys, 0, 0, 0).times_monomial(&Scalar::one(), 2);
        // d/dz [f(-z)] = -(f')(-z)
        let lhs = chi.dilate(1).derivative();
        let rhs = chi.derivative().dilate(1).scale(&Scalar::from_int(-1));
        assert_eq!(lhs, rhs);
        assert_eq!(chi.dilate(2), chi);
    }

    #[test]
    fn canonical_tree_is_nested_products() {
        let sys = system();
        let mut f = Field::zero(&sys);
        f.add_atoms(vec![Atom::new(0, 0, 1), Atom::new(0, 1, 0)], &Laurent::monomial(Scalar::frac(1, 2), -1));
        assert_eq!(f.to_text(), "1/2 z^-1 * :D^1[chi(e^0 z)] chi(e^1 z):");
    }
}
