use crate::error::Result;
use crate::scalar::Scalar;

use super::system::{GeneratorSystem, Parity};

/// One summand `c·z^l·expr` of a linear combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTerm {
    pub coeff: Scalar,
    pub zpow: i32,
    pub expr: FieldExpr,
}

/// A field-expression tree. Nothing is evaluated until canonicalisation,
/// OPE or mode extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldExpr {
    Identity,
    /// `name(ε^dilation z)`.
    Generator { name: String, dilation: u32 },
    /// `∂_z^order inner`.
    Derivative { order: u32, inner: Box<FieldExpr> },
    /// `:left right:` with the annihilation/creation split taken on `left`.
    NormalProd(Box<FieldExpr>, Box<FieldExpr>),
    Linear(Vec<LinearTerm>),
}

impl FieldExpr {
    pub fn zero() -> FieldExpr {
        FieldExpr::Linear(Vec::new())
    }

    pub fn gen(name: &str, dilation: u32) -> FieldExpr {
        FieldExpr::Generator { name: name.to_string(), dilation }
    }

    pub fn derivative(order: u32, inner: FieldExpr) -> FieldExpr {
        FieldExpr::Derivative { order, inner: Box::new(inner) }
    }

    pub fn nprod(left: FieldExpr, right: FieldExpr) -> FieldExpr {
        FieldExpr::NormalProd(Box::new(left), Box::new(right))
    }

    /// `c z^l · expr` as a one-term combination.
    pub fn scaled(coeff: Scalar, zpow: i32, expr: FieldExpr) -> FieldExpr {
        FieldExpr::Linear(vec![LinearTerm { coeff, zpow, expr }])
    }

    pub fn sum(items: impl IntoIterator<Item = (Scalar, i32, FieldExpr)>) -> FieldExpr {
        FieldExpr::Linear(items.into_iter().map(|(coeff, zpow, expr)| LinearTerm { coeff, zpow, expr }).collect())
    }

    /// Parity, or `None` for a non-homogeneous combination.
    pub fn parity(&self, sys: &GeneratorSystem) -> Result<Option<Parity>> {
        Ok(match self {
            FieldExpr::Identity => Some(Parity::Even),
            FieldExpr::Generator { name, .. } => Some(sys.generator(sys.index_of(name)?).parity),
            FieldExpr::Derivative { inner, .. } => inner.parity(sys)?,
            FieldExpr::NormalProd(a, b) => match (a.parity(sys)?, b.parity(sys)?) {
                (Some(p), Some(q)) => Some(p.plus(q)),
                _ => None,
            },
            FieldExpr::Linear(terms) => {
                let mut seen: Option<Parity> = None;
                for t in terms {
                    match (seen, t.expr.parity(sys)?) {
                        (_, None) => return Ok(None),
                        (None, p) => seen = p,
                        (Some(a), Some(b)) if a != b => return Ok(None),
                        _ => {}
                    }
                }
                Some(seen.unwrap_or(Parity::Even))
            }
        })
    }

    /// The tree of `F(ε^i z)`, with the dilation pushed to the generators.
    pub fn dilate(&self, i: i64, sys: &GeneratorSystem) -> FieldExpr {
        let n = sys.num_points() as i64;
        match self {
            FieldExpr::Identity => FieldExpr::Identity,
            FieldExpr::Generator { name, dilation } => {
                FieldExpr::gen(name, (*dilation as i64 + i).rem_euclid(n) as u32)
            }
            // (∂^k F)(ε^i z) = ε^{-ik} ∂_z^k [F(ε^i z)]
            FieldExpr::Derivative { order, inner } => {
                let d = FieldExpr::derivative(*order, inner.dilate(i, sys));
                let factor = sys.epsilon_pow(-i * *order as i64);
                if factor.is_one() {
                    d
                } else {
                    FieldExpr::scaled(factor, 0, d)
                }
            }
            FieldExpr::NormalProd(a, b) => FieldExpr::nprod(a.dilate(i, sys), b.dilate(i, sys)),
            FieldExpr::Linear(terms) => FieldExpr::Linear(
                terms
                    .iter()
                    .map(|t| LinearTerm {
                        coeff: &t.coeff * &sys.epsilon_pow(i * t.zpow as i64),
                        zpow: t.zpow,
                        expr: t.expr.dilate(i, sys),
                    })
                    .collect(),
            ),
        }
    }

    /// Canonical text; non-rational scalars are written in ζ_order as `e`.
    pub fn to_text(&self, order: u32) -> String {
        let mut out = String::new();
        self.write(&mut out, order);
        out
    }

    fn write(&self, out: &mut String, order: u32) {
        match self {
            FieldExpr::Identity => out.push_str("Id"),
            FieldExpr::Generator { name, dilation } => {
                out.push_str(&format!("{name}(e^{dilation} z)"));
            }
            FieldExpr::Derivative { order: k, inner } => {
                out.push_str(&format!("D^{k}["));
                inner.write(out, order);
                out.push(']');
            }
            FieldExpr::NormalProd(a, b) => {
                out.push(':');
                a.write_factor(out, order);
                out.push(' ');
                b.write_factor(out, order);
                out.push(':');
            }
            FieldExpr::Linear(terms) if terms.is_empty() => out.push('0'),
            FieldExpr::Linear(terms) => {
                for (idx, t) in terms.iter().enumerate() {
                    if idx > 0 {
                        out.push_str(" + ");
                    }
                    out.push_str(&coeff_text(&t.coeff, order));
                    if t.zpow != 0 {
                        out.push_str(&format!(" z^{}", t.zpow));
                    }
                    out.push_str(" * ");
                    t.expr.write_factor(out, order);
                }
            }
        }
    }

    fn write_factor(&self, out: &mut String, order: u32) {
        match self {
            FieldExpr::Linear(terms) if !terms.is_empty() => {
                out.push('(');
                self.write(out, order);
                out.push(')');
            }
            _ => self.write(out, order),
        }
    }
}

pub(crate) fn coeff_text(c: &Scalar, order: u32) -> String {
    match c.to_rational() {
        Some(r) => r.to_string(),
        None => format!("({})", c.to_text_in(order.max(c.order()))),
    }
}
