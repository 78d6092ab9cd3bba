use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ratfunc::{RatFunc, Root};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn plus(self, other: Parity) -> Parity {
        if self.is_odd() != other.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Mode labels of a generator: integers or integers + 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    Integer,
    HalfInteger,
}

/// A free generator `g(z) = Σ_n g_n z^{-s(n+o)}`.
///
/// Mode labels are stored doubled so half-integers stay integral. A mode is
/// an annihilator exactly when its z-power is negative, which is the
/// power split of the normal ordered product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub lattice: Lattice,
    /// 2·o.
    pub offset2: i64,
    /// s ≥ 1: the field is a function of z^s.
    pub scale: u32,
}

impl Generator {
    pub fn new(name: &str, parity: Parity, lattice: Lattice, offset2: i64, scale: u32) -> Generator {
        Generator { name: name.to_string(), parity, lattice, offset2, scale }
    }

    pub fn is_label(&self, label2: i64) -> bool {
        match self.lattice {
            Lattice::Integer => label2.is_even(),
            Lattice::HalfInteger => label2.is_odd(),
        }
    }

    /// The z-power carried by mode `label2 / 2`.
    pub fn exponent(&self, label2: i64) -> i64 {
        let twice = -(self.scale as i64) * (label2 + self.offset2);
        debug_assert!(twice.is_even());
        twice / 2
    }

    /// Inverse of [`Generator::exponent`], if that power occurs.
    pub fn label_of_exponent(&self, exp: i64) -> Option<i64> {
        let s = self.scale as i64;
        if exp % s != 0 {
            return None;
        }
        let label2 = -2 * exp / s - self.offset2;
        self.is_label(label2).then_some(label2)
    }

    pub fn is_annihilator(&self, label2: i64) -> bool {
        self.exponent(label2) < 0
    }

    /// Smallest annihilating label, doubled: g_n|0⟩ = 0 iff n ≥ threshold.
    pub fn threshold2(&self) -> i64 {
        let mut t = -self.offset2 + 1;
        while !self.is_label(t) {
            t += 1;
        }
        t
    }

    /// Energy −n of a creation mode, doubled.
    pub fn energy2(&self, label2: i64) -> i64 {
        -label2
    }
}

/// Generators, their contractions `⟨a(z) b(w)⟩`, and the locality order N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSystem {
    name: String,
    num_points: u32,
    ambient_order: u32,
    generators: Vec<Generator>,
    contractions: BTreeMap<(usize, usize), RatFunc>,
}

impl GeneratorSystem {
    /// `ambient_order` must be a multiple of `num_points`; scalars print in ζ of that order.
    pub fn new(name: &str, num_points: u32, ambient_order: u32) -> GeneratorSystem {
        assert!(num_points >= 1 && ambient_order.is_multiple_of(num_points));
        GeneratorSystem {
            name: name.to_string(),
            num_points,
            ambient_order,
            generators: Vec::new(),
            contractions: BTreeMap::new(),
        }
    }

    pub fn add_generator(&mut self, generator: Generator) -> usize {
        self.generators.push(generator);
        self.generators.len() - 1
    }

    pub fn set_contraction(&mut self, left: usize, right: usize, value: RatFunc) -> Result<()> {
        for (root, _) in value.poles() {
            if root.index_in(self.num_points).is_none() {
                return Err(Error::DisallowedPole { factor: format!("(z-({})*w)", root.value().to_text()) });
            }
        }
        self.contractions.insert((left, right), value);
        Ok(())
    }

    /// Checks `⟨a(z)b(w)⟩ = (−1)^{p(a)p(b)} ⟨b(w)a(z)⟩` and that every pair is declared.
    pub fn validate(&self) -> Result<()> {
        for a in 0..self.generators.len() {
            for b in 0..self.generators.len() {
                let ab = self.contraction(a, b)?;
                let ba = self.contraction(b, a)?.swap_variables();
                let sign = self.generators[a].parity.is_odd() && self.generators[b].parity.is_odd();
                let expected = if sign { -&ba } else { ba };
                if *ab != expected {
                    return Err(Error::Invalid(format!(
                        "contractions of {} and {} are not symmetric",
                        self.generators[a].name, self.generators[b].name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_points(&self) -> u32 {
        self.num_points
    }

    pub fn ambient_order(&self) -> u32 {
        self.ambient_order
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, index: usize) -> &Generator {
        &self.generators[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn contraction(&self, left: usize, right: usize) -> Result<&RatFunc> {
        self.contractions.get(&(left, right)).ok_or_else(|| Error::MissingContraction {
            left: self.generators[left].name.clone(),
            right: self.generators[right].name.clone(),
        })
    }

    /// ε = ζ_N.
    pub fn epsilon(&self) -> Root {
        Root::new(1, self.num_points)
    }

    pub fn epsilon_pow(&self, k: i64) -> Scalar {
        Scalar::root(self.num_points, k)
    }

    /// Dilations of a generator repeat with this period, since g depends on z^s only.
    pub fn dilation_period(&self, index: usize) -> u32 {
        let n = self.num_points;
        n / n.gcd(&self.generators[index].scale)
    }
}

impl fmt::Display for GeneratorSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (N={})", self.name, self.num_points)
    }
}
