use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::ratfunc::{Poly2, RatFunc, Root};

use super::canon::Field;
use super::expr::FieldExpr;
use super::system::GeneratorSystem;
use super::wick::Bilocal;

/// Singular part `Σ_{j,k} c_{jk}(w) / (z − ε^j w)^{k+1}` of a product.
#[derive(Clone, Debug)]
pub struct OpeResult {
    system: Arc<GeneratorSystem>,
    /// (j, pole order k+1) → c_{jk}.
    terms: BTreeMap<(u32, u32), Field>,
}

impl PartialEq for OpeResult {
    fn eq(&self, other: &OpeResult) -> bool {
        self.system.name() == other.system.name() && self.terms == other.terms
    }
}

impl OpeResult {
    pub fn new(system: &Arc<GeneratorSystem>) -> OpeResult {
        OpeResult { system: system.clone(), terms: BTreeMap::new() }
    }

    pub fn system(&self) -> &Arc<GeneratorSystem> {
        &self.system
    }

    pub fn add(&mut self, j: u32, order: u32, coeff: &Field) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((j, order)).or_insert_with(|| Field::zero(&self.system));
        *slot = slot.add(coeff).expect("same system");
        if slot.is_zero() {
            self.terms.remove(&(j, order));
        }
    }

    /// `(j, k+1, c_{jk})` in increasing (j, order).
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Field)> + '_ {
        self.terms.iter().map(|((j, o), f)| (*j, *o, f))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// c_{jk}, the coefficient of `1/(z − ε^j w)^{k+1}`.
    pub fn coefficient(&self, j: u32, k: u32) -> Field {
        self.terms.get(&(j, k + 1)).cloned().unwrap_or_else(|| Field::zero(&self.system))
    }

    pub fn max_order(&self, j: u32) -> u32 {
        self.terms.keys().filter(|(jj, _)| *jj == j).map(|(_, o)| *o).max().unwrap_or(0)
    }

    /// The multiple-of-identity part as a rational function.
    pub fn central(&self) -> RatFunc {
        let n = self.system.num_points();
        let mut out = RatFunc::zero();
        for ((j, o), f) in &self.terms {
            let c = f.central();
            if !c.is_zero() {
                out = &out + &RatFunc::new(Poly2::from_w(&c), [(Root::new(*j as i64, n), *o)]);
            }
        }
        out
    }

    pub fn is_central(&self) -> bool {
        self.terms.values().all(Field::is_central)
    }

    /// Same terms with the central part removed.
    pub fn non_central(&self) -> OpeResult {
        let mut out = OpeResult::new(&self.system);
        for ((j, o), f) in &self.terms {
            out.add(*j, *o, &f.without_central());
        }
        out
    }

    pub fn sub(&self, other: &OpeResult) -> OpeResult {
        let mut out = self.clone();
        for ((j, o), f) in &other.terms {
            out.add(*j, *o, &f.scale(&crate::Scalar::from_int(-1)));
        }
        out
    }

    /// Apply a map to every coefficient field.
    pub fn map_coefficients(
        &self,
        target: &Arc<GeneratorSystem>,
        f: impl Fn(&Field) -> Result<Field>,
    ) -> Result<OpeResult> {
        let mut out = OpeResult::new(target);
        for ((j, o), c) in &self.terms {
            out.add(*j, *o, &f(c)?);
        }
        Ok(out)
    }

    pub fn profile(&self) -> LocalityProfile {
        LocalityProfile((0..self.system.num_points()).map(|j| self.max_order(j)).collect())
    }

    /// `R * Id + 1/(z-w)^2 * (field) + …`.
    pub fn to_text(&self) -> String {
        let order = self.system.ambient_order();
        let n = self.system.num_points();
        let mut parts = Vec::new();
        let central = self.central();
        if !central.is_zero() {
            parts.push(format!("{} * Id", central.to_text(order)));
        }
        for ((j, o), f) in &self.terms {
            let rest = f.without_central();
            if !rest.is_zero() {
                let pole = RatFunc::pole(Root::new(*j as i64, n), *o).to_text(order);
                parts.push(format!("{pole} * ({})", rest.to_text()));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for OpeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `(n_0, …, n_{N−1})`: pole orders at each `z = ε^j w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityProfile(pub Vec<u32>);

impl LocalityProfile {
    pub fn orders(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for LocalityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Field {
    /// Singular part of `self(z) other(w)`.
    pub fn ope(&self, other: &Field) -> Result<OpeResult> {
        Bilocal::product(self, other)?.singular_part()
    }

    /// `:self(z) other(z):`, with the power split taken on `self`.
    pub fn normal_product(&self, other: &Field) -> Result<Field> {
        Bilocal::product(self, other)?.regular_diagonal()
    }
}

/// Evaluate a tree into canonical form.
pub fn canonicalize(expr: &FieldExpr, sys: &Arc<GeneratorSystem>) -> Result<Field> {
    Ok(match expr {
        FieldExpr::Identity => Field::identity(sys),
        FieldExpr::Generator { name, dilation } => Field::atom(sys, sys.index_of(name)?, 0, *dilation as i64),
        FieldExpr::Derivative { order, inner } => canonicalize(inner, sys)?.derivative_n(*order),
        FieldExpr::NormalProd(a, b) => canonicalize(a, sys)?.normal_product(&canonicalize(b, sys)?)?,
        FieldExpr::Linear(terms) => {
            let mut out = Field::zero(sys);
            for t in terms {
                out = out.add(&canonicalize(&t.expr, sys)?.times_monomial(&t.coeff, t.zpow))?;
            }
            out
        }
    })
}

/// The tree `:a(ε^i z) b(z):`, after checking both sides against the system.
pub fn normal_prod(a: &FieldExpr, b: &FieldExpr, i: i64, sys: &GeneratorSystem) -> Result<FieldExpr> {
    a.parity(sys)?;
    b.parity(sys)?;
    Ok(FieldExpr::nprod(a.dilate(i, sys), b.clone()))
}

pub fn ope(a: &FieldExpr, b: &FieldExpr, sys: &Arc<GeneratorSystem>) -> Result<OpeResult> {
    canonicalize(a, sys)?.ope(&canonicalize(b, sys)?)
}

/// c_{jk} of `ope(a, b)`.
pub fn ope_coefficient(a: &FieldExpr, b: &FieldExpr, j: u32, k: u32, sys: &Arc<GeneratorSystem>) -> Result<Field> {
    Ok(ope(a, b, sys)?.coefficient(j, k))
}

pub fn locality_profile(a: &Field, b: &Field) -> Result<LocalityProfile> {
    let ab = a.ope(b)?.profile();
    let ba = b.ope(a)?.profile();
    Ok(LocalityProfile(ab.0.iter().zip(&ba.0).map(|(x, y)| *x.max(y)).collect()))
}
