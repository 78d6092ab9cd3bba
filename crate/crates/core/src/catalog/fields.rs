//! Derived fields, as expression trees in their home systems.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fieldcalc::{canonicalize, Field, FieldExpr, GeneratorSystem};
use crate::scalar::Scalar;

use super::systems::{betagamma, betagamma_squared, chi, chi2};

/// Parameters of the derived-field families. Unused entries are ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    pub a: Scalar,
    pub b: Scalar,
    pub lambda: Scalar,
    pub mu: Scalar,
    pub kappa: Scalar,
    /// Half the number of points for the symplectic family.
    pub n: u32,
    /// Index `a` of `ξ_χ^a`, 1-based.
    pub index: u32,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            a: Scalar::zero(),
            b: Scalar::zero(),
            lambda: Scalar::zero(),
            mu: Scalar::zero(),
            kappa: Scalar::zero(),
            n: 1,
            index: 1,
        }
    }
}

/// Stable catalog identifiers.
pub const FIELD_NAMES: [&str; 10] =
    ["beta_chi", "gamma_chi", "h_chi_tw", "h_chi_utw", "h_bg_tw", "L1", "L2", "L3", "solitary", "xi_chi_a"];

fn q(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

fn chi_at(i: u32) -> FieldExpr {
    FieldExpr::gen("chi", i)
}

fn beta() -> FieldExpr {
    FieldExpr::gen("beta", 0)
}

fn gamma() -> FieldExpr {
    FieldExpr::gen("gamma", 0)
}

fn d1(e: FieldExpr) -> FieldExpr {
    FieldExpr::derivative(1, e)
}

fn np(a: FieldExpr, b: FieldExpr) -> FieldExpr {
    FieldExpr::nprod(a, b)
}

/// `(χ(z) − χ(−z)) / 2z`.
pub fn beta_chi() -> FieldExpr {
    FieldExpr::sum([(q(1, 2), -1, chi_at(0)), (q(-1, 2), -1, chi_at(1))])
}

/// `(χ(z) + χ(−z)) / 2`.
pub fn gamma_chi() -> FieldExpr {
    FieldExpr::sum([(q(1, 2), 0, chi_at(0)), (q(1, 2), 0, chi_at(1))])
}

/// `½ :χ(z)χ(−z):`.
pub fn h_chi_tw() -> FieldExpr {
    FieldExpr::scaled(q(1, 2), 0, np(chi_at(0), chi_at(1)))
}

/// `(1/4z)(:χ(z)χ(z): − :χ(−z)χ(−z):)`.
pub fn h_chi_utw() -> FieldExpr {
    FieldExpr::sum([(q(1, 4), -1, np(chi_at(0), chi_at(0))), (q(-1, 4), -1, np(chi_at(1), chi_at(1)))])
}

/// `½ :γγ: − (z/2) :ββ:` in the βγ system.
pub fn h_bg_tw() -> FieldExpr {
    FieldExpr::sum([(q(1, 2), 0, np(gamma(), gamma())), (q(-1, 2), 1, np(beta(), beta()))])
}

/// The untwisted current `:βγ:`.
pub fn h_bg_utw() -> FieldExpr {
    np(beta(), gamma())
}

/// `−½ :h h: + a ∂h + (b/z) h + (2ab − b²)/2z²` with `h = :βγ:`.
pub fn l1(a: &Scalar, b: &Scalar) -> FieldExpr {
    let h = h_bg_utw();
    let two = Scalar::from_int(2);
    let constant = &(&(&(&two * a) * b) - &(b * b)) * &q(1, 2);
    FieldExpr::sum([
        (q(-1, 2), 0, np(h.clone(), h.clone())),
        (a.clone(), 0, d1(h.clone())),
        (b.clone(), -1, h),
        (constant, -2, FieldExpr::Identity),
    ])
}

fn l2_constant(lambda: &Scalar, mu: &Scalar) -> Scalar {
    let two_l_1 = &(&Scalar::from_int(2) * lambda) + &Scalar::one();
    &(&(&two_l_1 * mu) - &(mu * mu)) * &q(1, 2)
}

/// `λ (∂β)γ + (λ+1) β(∂γ) + (μ/z) βγ + ((2λ+1)μ − μ²)/2z²`.
pub fn l2(lambda: &Scalar, mu: &Scalar) -> FieldExpr {
    FieldExpr::sum([
        (lambda.clone(), 0, np(d1(beta()), gamma())),
        (lambda + &Scalar::one(), 0, np(beta(), d1(gamma()))),
        (mu.clone(), -1, np(beta(), gamma())),
        (l2_constant(lambda, mu), -2, FieldExpr::Identity),
    ])
}

/// `L2(z²)` written in the generators `β(z²)`, `γ(z²)`; `(∂β)(z²) = ∂_z[β(z²)] / 2z`.
pub fn l2_squared(lambda: &Scalar, mu: &Scalar) -> FieldExpr {
    FieldExpr::sum([
        (lambda * &q(1, 2), -1, np(d1(beta()), gamma())),
        (&(lambda + &Scalar::one()) * &q(1, 2), -1, np(beta(), d1(gamma()))),
        (mu.clone(), -2, np(beta(), gamma())),
        (l2_constant(lambda, mu), -4, FieldExpr::Identity),
    ])
}

/// `−(1/2z) :h h: + 1/16z² + κ h − κ² z/2` with `h = h_bg_tw`.
pub fn l3(kappa: &Scalar) -> FieldExpr {
    let h = h_bg_tw();
    FieldExpr::sum([
        (q(-1, 2), -1, np(h.clone(), h.clone())),
        (q(1, 16), -2, FieldExpr::Identity),
        (kappa.clone(), 0, h),
        (&(kappa * kappa) * &q(-1, 2), 1, FieldExpr::Identity),
    ])
}

/// `L3` plus `ν ∂h`, which brings back a third-order pole when ν ≠ 0.
pub fn l3_with_derivative(kappa: &Scalar, nu: &Scalar) -> FieldExpr {
    FieldExpr::sum([(Scalar::one(), 0, l3(kappa)), (nu.clone(), 0, d1(h_bg_tw()))])
}

/// `−(1/8z²)(:(∂χ)(z) χ(−z): + :(∂χ)(−z) χ(z):) − 1/32z⁴`; `(∂χ)(−z) = −∂_z[χ(−z)]`.
pub fn solitary() -> FieldExpr {
    FieldExpr::sum([
        (q(-1, 8), -2, np(d1(chi_at(0)), chi_at(1))),
        (q(1, 8), -2, np(d1(chi_at(1)), chi_at(0))),
        (q(-1, 32), -4, FieldExpr::Identity),
    ])
}

/// `ξ_χ^a` in the 2n-point χ system.
pub fn xi_chi(n: u32, a: u32) -> FieldExpr {
    assert!(n >= 1 && (1..=2 * n).contains(&a));
    let big_n = 2 * n;
    let a = a as i64;
    let i = Scalar::root(4, 1);
    let norm = q(1, big_n as i64);
    let odd = a % 2 == 1;
    let (pre, zpow) = if odd { (norm, -(a as i32)) } else { (&i * &norm, -((big_n as i64 - a) as i32)) };
    FieldExpr::sum((0..big_n).map(|k| {
        let e = if odd { -(k as i64) * a } else { k as i64 * a };
        (&pre * &Scalar::root(big_n, e), zpow, chi_at(k))
    }))
}

/// Home system and tree of a catalog field. `xi_chi_a` also accepts `xi_chi_<a>`.
pub fn derived_field(name: &str, params: &Params) -> Result<(Arc<GeneratorSystem>, FieldExpr)> {
    Ok(match name {
        "beta_chi" => (chi2(), beta_chi()),
        "gamma_chi" => (chi2(), gamma_chi()),
        "h_chi_tw" => (chi2(), h_chi_tw()),
        "h_chi_utw" => (chi2(), h_chi_utw()),
        "solitary" => (chi2(), solitary()),
        "h_bg_tw" => (betagamma(), h_bg_tw()),
        "L1" => (betagamma(), l1(&params.a, &params.b)),
        "L2" => (betagamma(), l2(&params.lambda, &params.mu)),
        "L3" => (betagamma(), l3(&params.kappa)),
        "L2_squared" => (betagamma_squared(), l2_squared(&params.lambda, &params.mu)),
        "xi_chi_a" => xi_field(params.n, params.index)?,
        other => match other.strip_prefix("xi_chi_").and_then(|s| s.parse::<u32>().ok()) {
            Some(a) => xi_field(params.n, a)?,
            None => return Err(Error::UnknownName(other.to_string())),
        },
    })
}

fn xi_field(n: u32, a: u32) -> Result<(Arc<GeneratorSystem>, FieldExpr)> {
    if n == 0 || a == 0 || a > 2 * n {
        return Err(Error::Invalid(format!("xi_chi index {a} outside 1..={}", 2 * n)));
    }
    Ok((chi(2 * n), xi_chi(n, a)))
}

/// [`derived_field`] in canonical form.
pub fn derived_canonical(name: &str, params: &Params) -> Result<Field> {
    let (sys, e) = derived_field(name, params)?;
    canonicalize(&e, &sys)
}
