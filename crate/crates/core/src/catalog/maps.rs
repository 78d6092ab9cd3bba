//! Correspondences between generator systems, given on generators and
//! extended to normal ordered products atom by atom.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fieldcalc::{canonicalize, Atom, Field, FieldExpr, GeneratorSystem};
use crate::fock::ModeBrackets;
use crate::scalar::Scalar;

use super::fields::{beta_chi, gamma_chi, xi_chi};
use super::systems::{betagamma_squared, chi, chi2, symplectic_powered};

/// A linear bijection `source → target` fixed by the images of the
/// generators. Every image is a sum `Σ c z^l · x` of target atoms.
#[derive(Clone, Debug)]
pub struct CorrespondenceMap {
    name: String,
    source: Arc<GeneratorSystem>,
    target: Arc<GeneratorSystem>,
    image_exprs: Vec<FieldExpr>,
    images: Vec<Field>,
    inverse_exprs: Vec<FieldExpr>,
    inverse_images: Vec<Field>,
    vacuum_to_vacuum: bool,
}

/// `g_n = Σ c · h_m`, labels doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeImage {
    pub generator: usize,
    pub label2: i64,
    pub terms: Vec<(usize, i64, Scalar)>,
}

fn linear_images(exprs: &[FieldExpr], sys: &Arc<GeneratorSystem>) -> Result<Vec<Field>> {
    exprs
        .iter()
        .map(|e| {
            let f = canonicalize(e, sys)?;
            if f.terms().any(|(m, _)| m.degree() != 1) {
                return Err(Error::Invalid(format!("generator image {} is not linear", f)));
            }
            Ok(f)
        })
        .collect()
}

/// The image of one atom under generator images `images`.
fn atom_image(images: &[Field], a: &Atom) -> Field {
    images[a.gen].dilate(a.dil as i64).derivative_n(a.deriv)
}

fn substitute(f: &Field, images: &[Field], target: &Arc<GeneratorSystem>) -> Field {
    let mut out = Field::zero(target);
    for (m, c) in f.terms() {
        // expand N(x_1 … x_k) ↦ N(Φx_1 … Φx_k) multilinearly
        let mut partial = vec![(Vec::new(), c.clone())];
        for a in m.atoms() {
            let img = atom_image(images, a);
            let mut next = Vec::with_capacity(partial.len() * img.num_terms());
            for (atoms, coeff) in &partial {
                for (im, ic) in img.terms() {
                    let mut atoms: Vec<Atom> = atoms.clone();
                    atoms.extend_from_slice(im.atoms());
                    next.push((atoms, coeff * ic));
                }
            }
            partial = next;
        }
        for (atoms, coeff) in partial {
            out.add_atoms(atoms, &coeff);
        }
    }
    out
}

impl CorrespondenceMap {
    pub fn new(
        name: &str,
        source: &Arc<GeneratorSystem>,
        target: &Arc<GeneratorSystem>,
        image_exprs: Vec<FieldExpr>,
        inverse_exprs: Vec<FieldExpr>,
        vacuum_to_vacuum: bool,
    ) -> Result<CorrespondenceMap> {
        if image_exprs.len() != source.generators().len() || inverse_exprs.len() != target.generators().len() {
            return Err(Error::Invalid(format!("{name}: one image per generator is required")));
        }
        let images = linear_images(&image_exprs, target)?;
        let inverse_images = linear_images(&inverse_exprs, source)?;
        Ok(CorrespondenceMap {
            name: name.to_string(),
            source: source.clone(),
            target: target.clone(),
            image_exprs,
            images,
            inverse_exprs,
            inverse_images,
            vacuum_to_vacuum,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GeneratorSystem> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GeneratorSystem> {
        &self.target
    }

    pub fn image_exprs(&self) -> &[FieldExpr] {
        &self.image_exprs
    }

    pub fn images(&self) -> &[Field] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Field] {
        &self.inverse_images
    }

    pub fn vacuum_to_vacuum(&self) -> bool {
        self.vacuum_to_vacuum
    }

    pub fn inverse(&self) -> CorrespondenceMap {
        CorrespondenceMap {
            name: format!("{}^-1", self.name),
            source: self.target.clone(),
            target: self.source.clone(),
            image_exprs: self.inverse_exprs.clone(),
            images: self.inverse_images.clone(),
            inverse_exprs: self.image_exprs.clone(),
            inverse_images: self.images.clone(),
            vacuum_to_vacuum: self.vacuum_to_vacuum,
        }
    }

    pub fn apply(&self, f: &Field) -> Result<Field> {
        if f.system().name() != self.source.name() {
            return Err(Error::SystemMismatch { left: f.system().name().into(), right: self.source.name().into() });
        }
        Ok(substitute(f, &self.images, &self.target))
    }

    pub fn apply_expr(&self, e: &FieldExpr) -> Result<Field> {
        self.apply(&canonicalize(e, &self.source)?)
    }

    /// Generators whose image under `inverse ∘ self` (or `self ∘ inverse` on the
    /// target side) is not the generator itself. Empty for a true inverse pair.
    pub fn round_trip_failures(&self) -> Vec<String> {
        let inv = self.inverse();
        let mut bad = Vec::new();
        for (map, back, sys) in [(self, &inv, &self.source), (&inv, self, &self.target)] {
            for (g, gen) in sys.generators().iter().enumerate() {
                let x = Field::atom(sys, g, 0, 0);
                let round = back.apply(&map.apply(&x).expect("own source")).expect("own source");
                if round != x {
                    bad.push(format!("{}: {} -> {}", sys.name(), gen.name, round));
                }
            }
        }
        bad
    }

    /// Mode images of `g_n`, read off by matching powers of z in `Φ(g)`.
    pub fn mode_image(&self, g: usize, label2: i64) -> Result<ModeImage> {
        let gen = self.source.generator(g);
        if !gen.is_label(label2) {
            return Err(Error::Invalid(format!("{}_{} is not a mode", gen.name, label2 as f64 / 2.0)));
        }
        let e = gen.exponent(label2);
        let mut terms = Vec::new();
        for (m, c) in self.images[g].terms() {
            let a = m.atoms()[0];
            if a.deriv != 0 || (a.dil != 0 && self.target.dilation_period(a.gen) != 1) {
                return Err(Error::Invalid(format!("{}: image of {} is not a shifted sum", self.name, gen.name)));
            }
            let h = self.target.generator(a.gen);
            for (l, s) in c.terms() {
                if let Some(m2) = h.label_of_exponent(e - l as i64) {
                    terms.push((a.gen, m2, s.clone()));
                }
            }
        }
        Ok(ModeImage { generator: g, label2, terms })
    }

    /// Checks `[g_n, g'_m]` on the source against the bracket of the mode
    /// images, for all labels with |n|, |m| ≤ `max_label2 / 2`. Returns the
    /// offending pairs.
    pub fn mode_dictionary_failures(&self, max_label2: i64) -> Result<Vec<(usize, i64, usize, i64)>> {
        let src = ModeBrackets::new(&self.source)?;
        let tgt = ModeBrackets::new(&self.target)?;
        let gens = self.source.generators();
        let mut modes = Vec::new();
        for (g, gen) in gens.iter().enumerate() {
            for n2 in -max_label2..=max_label2 {
                if gen.is_label(n2) {
                    modes.push(self.mode_image(g, n2)?);
                }
            }
        }
        let mut bad = Vec::new();
        for x in &modes {
            for y in &modes {
                let expect = src.bracket(x.generator, x.label2, y.generator, y.label2);
                let mut got = Scalar::zero();
                for (h, m, c) in &x.terms {
                    for (k, l, d) in &y.terms {
                        got = &got + &(&(c * d) * &tgt.bracket(*h, *m, *k, *l));
                    }
                }
                if got != expect {
                    bad.push((x.generator, x.label2, y.generator, y.label2));
                }
            }
        }
        Ok(bad)
    }

    /// Whether every mode image sends annihilators to annihilators and
    /// creators to creators in the given label range.
    pub fn preserves_vacuum(&self, max_label2: i64) -> Result<bool> {
        for (g, gen) in self.source.generators().iter().enumerate() {
            for n2 in (-max_label2..=max_label2).filter(|n| gen.is_label(*n)) {
                let img = self.mode_image(g, n2)?;
                let ann = gen.is_annihilator(n2);
                if img.terms.iter().any(|(h, m, _)| self.target.generator(*h).is_annihilator(*m) != ann) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn atom_expr(sys: &GeneratorSystem, name: &str) -> FieldExpr {
    debug_assert!(sys.index_of(name).is_ok());
    FieldExpr::gen(name, 0)
}

/// `χ(z) ↦ γ(z²) + z β(z²)`, with inverse `β(z²) ↦ β_χ(z)`, `γ(z²) ↦ γ_χ(z)`.
pub fn phi_betagamma() -> CorrespondenceMap {
    let source = chi2();
    let target = betagamma_squared();
    let image = FieldExpr::sum([
        (Scalar::one(), 0, atom_expr(&target, "gamma")),
        (Scalar::one(), 1, atom_expr(&target, "beta")),
    ]);
    CorrespondenceMap::new("phi_bg", &source, &target, vec![image], vec![beta_chi(), gamma_chi()], true)
        .expect("linear images")
}

/// `χ(z) ↦ Σ_{a odd} z^a ξ^a(z^{2n}) − i Σ_{a even} z^{2n−a} ξ^a(z^{2n})`, with
/// inverse `ξ^a(z^{2n}) ↦ ξ_χ^a(z)`.
pub fn phi_sb(n: u32) -> CorrespondenceMap {
    assert!(n >= 1);
    let big_n = 2 * n;
    let source = chi(big_n);
    let target = symplectic_powered(n);
    let minus_i = Scalar::root(4, 3);
    let image = FieldExpr::sum((1..=big_n).map(|a| {
        let x = atom_expr(&target, &format!("xi{a}"));
        if a % 2 == 1 {
            (Scalar::one(), a as i32, x)
        } else {
            (minus_i.clone(), (big_n - a) as i32, x)
        }
    }));
    let inverse = (1..=big_n).map(|a| xi_chi(n, a)).collect();
    CorrespondenceMap::new(&format!("phi_sb{n}"), &source, &target, vec![image], inverse, true)
        .expect("linear images")
}

/// `ξ¹ ↦ β`, `ξ² ↦ iγ` between the squared systems, which turns `Φ_sb` at
/// n = 1 into `Φ_βγ`.
pub fn relabel_sb1_to_betagamma() -> CorrespondenceMap {
    let source = symplectic_powered(1);
    let target = betagamma_squared();
    let i = Scalar::root(4, 1);
    let images = vec![atom_expr(&target, "beta"), FieldExpr::scaled(i.clone(), 0, atom_expr(&target, "gamma"))];
    let inverse = vec![
        atom_expr(&source, "xi1"),
        FieldExpr::scaled(Scalar::root(4, 3), 0, atom_expr(&source, "xi2")),
    ];
    CorrespondenceMap::new("relabel_sb1", &source, &target, images, inverse, true).expect("linear images")
}
