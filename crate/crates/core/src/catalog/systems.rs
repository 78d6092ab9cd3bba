//! The built-in generator systems.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fieldcalc::{Generator, GeneratorSystem, Lattice, Parity};
use crate::ratfunc::{RatFunc, Root};
use crate::scalar::Scalar;

/// Ambient root-of-unity order for N points: i and ε must both exist.
pub fn ambient_order(num_points: u32) -> u32 {
    4u32.lcm(&num_points)
}

/// The twisted boson χ with `χ(z)χ(w) ~ 1/(z+w)`, localised at N points.
pub fn chi(num_points: u32) -> Arc<GeneratorSystem> {
    assert!(num_points.is_multiple_of(2), "χ needs an even number of points");
    let mut sys = GeneratorSystem::new(&format!("chi{num_points}"), num_points, ambient_order(num_points));
    let c = sys.add_generator(Generator::new("chi", Parity::Even, Lattice::HalfInteger, 1, 1));
    sys.set_contraction(c, c, RatFunc::pole(Root::minus_one(), 1)).expect("-1 is an N-th root");
    Arc::new(sys)
}

pub fn chi2() -> Arc<GeneratorSystem> {
    chi(2)
}

fn betagamma_with(name: &str, scale: u32) -> Arc<GeneratorSystem> {
    let mut sys = GeneratorSystem::new(name, scale, ambient_order(scale));
    let b = sys.add_generator(Generator::new("beta", Parity::Even, Lattice::Integer, 2, scale));
    let g = sys.add_generator(Generator::new("gamma", Parity::Even, Lattice::Integer, 0, scale));
    let bg = RatFunc::pole(Root::one(), 1).power_substitute(scale);
    sys.set_contraction(b, g, bg.clone()).expect("admissible");
    sys.set_contraction(g, b, -&bg).expect("admissible");
    sys.set_contraction(b, b, RatFunc::zero()).expect("admissible");
    sys.set_contraction(g, g, RatFunc::zero()).expect("admissible");
    Arc::new(sys)
}

/// β, γ with `β(z)γ(w) ~ 1/(z−w)`, as an ordinary (N = 1) system.
pub fn betagamma() -> Arc<GeneratorSystem> {
    betagamma_with("betagamma", 1)
}

/// The generators `β(z²)`, `γ(z²)`, two-point local.
pub fn betagamma_squared() -> Arc<GeneratorSystem> {
    betagamma_with("betagamma_squared", 2)
}

/// J^{ab} for 1-based a, b: n copies of [[0, 1], [−1, 0]].
pub fn symplectic_form(a: u32, b: u32) -> i64 {
    if a.div_ceil(2) != b.div_ceil(2) {
        0
    } else if a % 2 == 1 && b == a + 1 {
        1
    } else if a.is_multiple_of(2) && a == b + 1 {
        -1
    } else {
        0
    }
}

fn symplectic_with(name: &str, n: u32, scale: u32) -> Arc<GeneratorSystem> {
    assert!(n >= 1);
    let mut sys = GeneratorSystem::new(name, scale, ambient_order(2 * n));
    let gens: Vec<usize> = (1..=2 * n)
        .map(|a| sys.add_generator(Generator::new(&format!("xi{a}"), Parity::Even, Lattice::Integer, 0, scale)))
        .collect();
    let base = RatFunc::pole(Root::one(), 1).power_substitute(scale);
    let i = Scalar::root(4, 1);
    for a in 1..=2 * n {
        for b in 1..=2 * n {
            let j = symplectic_form(a, b);
            let c = base.scale(&(&i * &Scalar::from_int(j)));
            sys.set_contraction(gens[a as usize - 1], gens[b as usize - 1], c).expect("admissible");
        }
    }
    Arc::new(sys)
}

/// 2n symplectic bosons `ξ^a(z)`, N = 1.
pub fn symplectic(n: u32) -> Arc<GeneratorSystem> {
    symplectic_with(&format!("symplectic{n}"), n, 1)
}

/// The generators `ξ^a(z^{2n})`, 2n-point local.
pub fn symplectic_powered(n: u32) -> Arc<GeneratorSystem> {
    symplectic_with(&format!("symplectic_powered{n}"), n, 2 * n)
}

/// Look a system up by its name, e.g. `chi2`, `chi6`, `betagamma`, `symplectic_powered2`.
pub fn system_by_name(name: &str) -> Result<Arc<GeneratorSystem>> {
    let number = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<u32>().ok()).filter(|&k| k >= 1);
    match name {
        "betagamma" => return Ok(betagamma()),
        "betagamma_squared" => return Ok(betagamma_squared()),
        _ => {}
    }
    if let Some(n) = number("symplectic_powered") {
        return Ok(symplectic_powered(n));
    }
    if let Some(n) = number("symplectic") {
        return Ok(symplectic(n));
    }
    if let Some(n) = number("chi").filter(|k| k % 2 == 0) {
        return Ok(chi(n));
    }
    Err(Error::UnknownName(name.to_string()))
}

/// Every built-in family, with the symplectic ones at `n`.
pub fn builtin_systems(n: u32) -> Vec<Arc<GeneratorSystem>> {
    vec![chi2(), chi(2 * n), betagamma(), betagamma_squared(), symplectic(n), symplectic_powered(n)]
}
