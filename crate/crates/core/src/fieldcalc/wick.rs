//! Wick's theorem for free fields, and the two things built from it: the
//! singular part of `X(z)Y(w)` and the normal ordered product `:X(z)Y(z):`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ratfunc::{factorial, Laurent, Poly2, RatFunc, Root};
use crate::scalar::Scalar;

use super::canon::{Atom, Field, Monomial};
use super::ope::OpeResult;
use super::system::GeneratorSystem;

/// `Σ R(z, w) · N(x(z) y(w))`: uncontracted atoms `x` sit at z, `y` at w.
#[derive(Clone, Debug)]
pub struct Bilocal {
    system: Arc<GeneratorSystem>,
    terms: BTreeMap<(Monomial, Monomial), RatFunc>,
}

impl PartialEq for Bilocal {
    fn eq(&self, other: &Bilocal) -> bool {
        self.system.name() == other.system.name() && self.terms == other.terms
    }
}

impl Bilocal {
    pub fn new(system: &Arc<GeneratorSystem>) -> Bilocal {
        Bilocal { system: system.clone(), terms: BTreeMap::new() }
    }

    pub fn system(&self) -> &Arc<GeneratorSystem> {
        &self.system
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &RatFunc)> + '_ {
        self.terms.iter().map(|((x, y), r)| (x, y, r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `r · N(x(z) y(w))`, sorting each side with its odd sign.
    pub fn add(&mut self, x: Vec<Atom>, y: Vec<Atom>, r: &RatFunc) {
        let (Some((sx, mx)), Some((sy, my))) =
            (Monomial::from_atoms(x, &self.system), Monomial::from_atoms(y, &self.system))
        else {
            return;
        };
        let r = if sx != sy { -r } else { r.clone() };
        self.add_term(mx, my, &r);
    }

    fn add_term(&mut self, x: Monomial, y: Monomial, r: &RatFunc) {
        if r.is_zero() {
            return;
        }
        let key = (x, y);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot = &*slot + r;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `X(z) Y(w)` by Wick's theorem, each term over every partial matching.
    pub fn product(x: &Field, y: &Field) -> Result<Bilocal> {
        x.same_system(y)?;
        let sys = x.system().clone();
        let mut out = Bilocal::new(&sys);
        let mut cache: HashMap<(Atom, Atom), RatFunc> = HashMap::new();
        for (mx, p) in x.terms() {
            for (my, q) in y.terms() {
                let pq = &RatFunc::from_poly(Poly2::from_z(p)) * &RatFunc::from_poly(Poly2::from_w(q));
                let xs = mx.atoms();
                let ys = my.atoms();
                let mut matchings = Vec::new();
                enumerate_matchings(xs.len(), ys.len(), 0, 0, &mut Vec::new(), &mut matchings);
                for pairs in matchings {
                    let mut r = pq.clone();
                    for &(i, j) in &pairs {
                        let key = (xs[i], ys[j]);
                        let c = match cache.get(&key) {
                            Some(c) => c.clone(),
                            None => {
                                let c = atom_contraction(&sys, xs[i], ys[j])?;
                                cache.insert(key, c.clone());
                                c
                            }
                        };
                        r = &r * &c;
                        if r.is_zero() {
                            break;
                        }
                    }
                    if r.is_zero() {
                        continue;
                    }
                    if wick_sign(&sys, xs, ys, &pairs) {
                        r = -&r;
                    }
                    let rest_x: Vec<Atom> =
                        (0..xs.len()).filter(|i| !pairs.iter().any(|p| p.0 == *i)).map(|i| xs[i]).collect();
                    let rest_y: Vec<Atom> =
                        (0..ys.len()).filter(|j| !pairs.iter().any(|p| p.1 == *j)).map(|j| ys[j]).collect();
                    // the remaining atoms are already sorted, so no sign arises here
                    out.add_term(Monomial::from_atoms(rest_x, &sys).unwrap().1, Monomial::from_atoms(rest_y, &sys).unwrap().1, &r);
                }
            }
        }
        Ok(out)
    }

    /// Poles at `z = ε^j w` with coefficients re-centred at w; z = 0 poles are regular.
    pub fn singular_part(&self) -> Result<OpeResult> {
        let sys = &self.system;
        let mut out = OpeResult::new(sys);
        for ((mx, my), r) in &self.terms {
            let pf = r.partial_fractions();
            for (root, k, ck) in pf.terms() {
                let j = pole_index(sys, root)?;
                for m in 0..=k {
                    let t = recentred(sys, mx, my, j, m);
                    out.add(j, k + 1 - m, &t.mul_laurent(ck));
                }
            }
        }
        Ok(out)
    }

    /// Restriction to w = z after removing the singular part.
    pub fn regular_diagonal(&self) -> Result<Field> {
        let sys = &self.system;
        let mut out = Field::zero(sys);
        for ((mx, my), r) in &self.terms {
            let pf = r.partial_fractions();
            let both: Vec<Atom> = mx.atoms().iter().chain(my.atoms()).copied().collect();
            out.add_atoms(both.clone(), &pf.remainder().diagonal());
            for (root, k, ck) in pf.terms() {
                let j = pole_index(sys, root)?;
                if root.is_one() {
                    out = out.add(&recentred(sys, mx, my, 0, k + 1).mul_laurent(ck))?;
                    continue;
                }
                // c_k(w)/(z-cw)^{k+1}·[N(x(z)y(w)) − Σ_{m≤k} (z-cw)^m T_m(w)] at w = z
                let gap = (&Scalar::one() - &root.value()).inv()?;
                let whole = &Laurent::monomial(gap.pow(k as i64 + 1)?, -(k as i32) - 1) * ck;
                out.add_atoms(both.clone(), &whole);
                for m in 0..=k {
                    let e = (k + 1 - m) as i64;
                    let factor = &Laurent::monomial(-gap.pow(e)?, -(e as i32)) * ck;
                    out = out.add(&recentred(sys, mx, my, j, m).mul_laurent(&factor))?;
                }
            }
        }
        Ok(out)
    }
}

fn pole_index(sys: &GeneratorSystem, root: Root) -> Result<u32> {
    root.index_in(sys.num_points())
        .ok_or_else(|| Error::DisallowedPole { factor: format!("(z-({})*w)", root.value().to_text()) })
}

/// `∂_z^d ∂_w^e [⟨g(ε^a z) h(ε^b w)⟩]`.
fn atom_contraction(sys: &GeneratorSystem, x: Atom, y: Atom) -> Result<RatFunc> {
    let base = sys.contraction(x.gen, y.gen)?;
    if base.is_zero() {
        return Ok(RatFunc::zero());
    }
    let n = sys.num_points();
    let mut c = base.dilate(Root::new(x.dil as i64, n), Root::new(y.dil as i64, n));
    for _ in 0..x.deriv {
        c = c.dz();
    }
    for _ in 0..y.deriv {
        c = c.dw();
    }
    Ok(c)
}

fn enumerate_matchings(
    nx: usize,
    ny: usize,
    i: usize,
    used: u64,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if i == nx {
        out.push(current.clone());
        return;
    }
    enumerate_matchings(nx, ny, i + 1, used, current, out);
    for j in 0..ny {
        if used & (1 << j) == 0 {
            current.push((i, j));
            enumerate_matchings(nx, ny, i + 1, used | (1 << j), current, out);
            current.pop();
        }
    }
}

/// Sign of bringing each contracted pair together as `x_i y_j`, leaving
/// the uncontracted atoms in their original order.
fn wick_sign(sys: &GeneratorSystem, xs: &[Atom], ys: &[Atom], pairs: &[(usize, usize)]) -> bool {
    let odd = |a: &Atom| sys.generator(a.gen).parity.is_odd();
    if !xs.iter().chain(ys).any(odd) {
        return false;
    }
    let a = xs.len();
    let mut order = Vec::new();
    for &(i, j) in pairs {
        order.push(i);
        order.push(a + j);
    }
    order.extend((0..a).filter(|i| !pairs.iter().any(|p| p.0 == *i)));
    order.extend((0..ys.len()).filter(|j| !pairs.iter().any(|p| p.1 == *j)).map(|j| a + j));
    let odd_positions: Vec<usize> = order
        .into_iter()
        .filter(|&p| if p < a { odd(&xs[p]) } else { odd(&ys[p - a]) })
        .collect();
    let mut inversions = 0usize;
    for s in 0..odd_positions.len() {
        for t in s + 1..odd_positions.len() {
            if odd_positions[s] > odd_positions[t] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Taylor coefficient of `N(x(z))` at `z = ε^j w`, order `m`:
/// `Σ_{Σe=m} Π 1/e_i! · N((∂^{e_i} x_i)(ε^j w))`, as (scalar, atoms at w).
pub(crate) fn shifted_atoms(sys: &GeneratorSystem, x: &Monomial, j: u32, m: u32) -> Vec<(Scalar, Vec<Atom>)> {
    let atoms = x.atoms();
    let mut out = Vec::new();
    let mut parts = vec![0u32; atoms.len()];
    compositions(m, 0, &mut parts, &mut |e| {
        let mut coeff = Scalar::one();
        let mut moved = Vec::with_capacity(atoms.len());
        for (a, &ei) in atoms.iter().zip(e) {
            let d = a.deriv + ei;
            // (∂^d g(ε^a ·))(ε^j w) = ε^{-jd} ∂_w^d [g(ε^{a+j} w)]
            coeff = &coeff * &sys.epsilon_pow(-(j as i64) * d as i64);
            coeff = &coeff * &Scalar::from_rational(BigRational::new(BigInt::from(1), factorial(ei)));
            let period = sys.dilation_period(a.gen);
            moved.push(Atom::new(a.gen, d, (a.dil + j) % period));
        }
        out.push((coeff, moved));
    });
    out
}

fn compositions(m: u32, at: usize, parts: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if at == parts.len() {
        if m == 0 {
            f(parts);
        }
        return;
    }
    if at + 1 == parts.len() {
        parts[at] = m;
        f(parts);
        return;
    }
    for e in 0..=m {
        parts[at] = e;
        compositions(m - e, at + 1, parts, f);
    }
    parts[at] = 0;
}

/// `T_m(w)`: the (z − ε^j w)^m coefficient of `N(x(z) y(w))`.
fn recentred(sys: &Arc<GeneratorSystem>, x: &Monomial, y: &Monomial, j: u32, m: u32) -> Field {
    let mut out = Field::zero(sys);
    for (c, atoms) in shifted_atoms(sys, x, j, m) {
        let all: Vec<Atom> = atoms.into_iter().chain(y.atoms().iter().copied()).collect();
        out.add_atoms(all, &Laurent::constant(c));
    }
    out
}

/// Coefficients `T_0 … T_order` of `F(z) = Σ_m (z − ε^j w)^m T_m(w)`.
pub fn taylor_recenter(f: &Field, j: u32, order: u32) -> Vec<Field> {
    let sys = f.system();
    let c = sys.epsilon_pow(j as i64);
    let mut out = vec![Field::zero(sys); order as usize + 1];
    for (mono, p) in f.terms() {
        // p(cw + t) = Σ_a t^a Σ_l p_l C(l, a) c^{l-a} w^{l-a}
        let mut p_shift = vec![Laurent::zero(); order as usize + 1];
        for (l, pl) in p.terms() {
            for (a, slot) in p_shift.iter_mut().enumerate() {
                let coeff = &(pl * &crate::ratfunc::binomial_scalar(l as i64, a as u32))
                    * &c.pow(l as i64 - a as i64).expect("nonzero");
                slot.add_term(l - a as i32, &coeff);
            }
        }
        for b in 0..=order {
            let xb = recentred(sys, mono, &Monomial::identity(), j, b);
            for a in 0..=(order - b) {
                let m = (a + b) as usize;
                out[m] = out[m].add(&xb.mul_laurent(&p_shift[a as usize])).expect("same system");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldcalc::system::{Generator, Lattice, Parity};

    fn chi2() -> Arc<GeneratorSystem> {
        let mut sys = GeneratorSystem::new("chi2", 2, 2);
        let c = sys.add_generator(Generator::new("chi", Parity::Even, Lattice::HalfInteger, 1, 1));
        sys.set_contraction(c, c, RatFunc::pole(Root::minus_one(), 1)).unwrap();
        Arc::new(sys)
    }

    #[test]
    fn laurent_prefactor_changes_the_split() {
        // :z^{-1}χ(z) χ(z): = z^{-1} N(χχ) + z^{-2}
        let sys = chi2();
        let chi = Field::atom(&sys, 0, 0, 0);
        let x = chi.times_monomial(&Scalar::one(), -1);
        let got = Bilocal::product(&x, &chi).unwrap().regular_diagonal().unwrap();
        let mut expect = Field::zero(&sys);
        expect.add_atoms(vec![Atom::new(0, 0, 0), Atom::new(0, 0, 0)], &Laurent::monomial(Scalar::one(), -1));
        expect.add_term(Monomial::identity(), &Laurent::monomial(Scalar::one(), -2));
        assert_eq!(got, expect);
    }

    #[test]
    fn taylor_of_generator() {
        let sys = chi2();
        let chi = Field::atom(&sys, 0, 0, 0);
        let t = taylor_recenter(&chi, 0, 1);
        assert_eq!(t[0], chi);
        assert_eq!(t[1], Field::atom(&sys, 0, 1, 0));
        // χ(z) at z = -w: χ(-w) - (z + w) (∂χ)(-w) ... with (∂χ)(-w) = -∂_w[χ(-w)]
        let t = taylor_recenter(&chi, 1, 1);
        assert_eq!(t[0], Field::atom(&sys, 0, 0, 1));
        assert_eq!(t[1], Field::atom(&sys, 0, 1, 1).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn bilocal_recentring() {
        // :χ(z)χ(-w): at z -> w, order 0, is :χ(w)χ(-w):
        let sys = chi2();
        let x = Monomial::from_atoms(vec![Atom::new(0, 0, 0)], &sys).unwrap().1;
        let y = Monomial::from_atoms(vec![Atom::new(0, 0, 1)], &sys).unwrap().1;
        let t = recentred(&sys, &x, &y, 0, 0);
        let mut expect = Field::zero(&sys);
        expect.add_atoms(vec![Atom::new(0, 0, 0), Atom::new(0, 0, 1)], &Laurent::constant(Scalar::one()));
        assert_eq!(t, expect);
    }

    #[test]
    fn matchings_count() {
        let mut all = Vec::new();
        enumerate_matchings(2, 2, 0, 0, &mut Vec::new(), &mut all);
        assert_eq!(all.len(), 7);
    }
}
