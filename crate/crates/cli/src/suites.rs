//! The verification suites. Each produces a list of reports, one per check.

use std::fmt;
use std::str::FromStr;

use multiloc::catalog::checks::{
    catalog_field_groups, chi_mode_brackets, check_homomorphism, generator_pairs, heisenberg_check,
    interchange_identity, oracle_suite, solitary_identification, symplectic_check, twisted_current_identity,
    virasoro_check, virasoro_mode_check, HeisenbergCase, ModeBracket, VirasoroFamily, SOLITARY_STATED_MU,
};
use multiloc::catalog::fields::{derived_canonical, Params};
use multiloc::catalog::maps::{phi_betagamma, phi_sb, relabel_sb1_to_betagamma};
use multiloc::catalog::systems::{betagamma, chi, chi2};
use multiloc::fieldcalc::{Field, OpeResult};
use multiloc::fock::{build_space, Cutoffs};
use multiloc::ratfunc::verify_interpolation_identity;
use multiloc::{RatFunc, Root, Scalar};

use crate::report::{Check, Finding, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Ope,
    Heisenberg,
    Virasoro,
    Iso,
    Symplectic,
    Appendix,
    Fock,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Ope, Suite::Heisenberg, Suite::Virasoro, Suite::Iso, Suite::Symplectic, Suite::Appendix, Suite::Fock];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ope => "ope",
            Suite::Heisenberg => "heisenberg",
            Suite::Virasoro => "virasoro",
            Suite::Iso => "iso",
            Suite::Symplectic => "symplectic",
            Suite::Appendix => "appendix",
            Suite::Fock => "fock",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected ope, heisenberg, virasoro, iso, symplectic, appendix, fock or all)"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolved command-line settings shared by every suite.
#[derive(Clone, Debug)]
pub struct Settings {
    pub params: Params,
    /// Restricts `virasoro` to one family.
    pub family: Option<VirasoroFamily>,
    /// Restricts `symplectic` and `appendix` to one n.
    pub n: Option<u32>,
    /// Restricts `fock` to one field.
    pub field: Option<String>,
    pub cutoffs: Cutoffs,
    pub series_order: i32,
}

impl Settings {
    pub fn run(&self, suite: Suite) -> Vec<VerificationReport> {
        match suite {
            Suite::Ope => ope_suite(),
            Suite::Heisenberg => heisenberg_suite(self),
            Suite::Virasoro => virasoro_suite(self),
            Suite::Iso => iso_suite(self),
            Suite::Symplectic => symplectic_suite(self),
            Suite::Appendix => appendix_suite(self),
            Suite::Fock => fock_suite(self),
            Suite::All => {
                let mut out: Vec<VerificationReport> = std::thread::scope(|scope| {
                    let handles: Vec<_> = Suite::EACH.iter().map(|&s| scope.spawn(move || self.run(s))).collect();
                    handles.into_iter().flat_map(|h| h.join().expect("suite thread panicked")).collect()
                });
                out.sort_by(|a, b| a.id.cmp(&b.id));
                out
            }
        }
    }
}

/// `R * Id` in the text form of [`OpeResult::to_text`].
fn central_text(r: &RatFunc, order: u32) -> String {
    if r.is_zero() {
        "0".into()
    } else {
        format!("{} * Id", r.to_text(order))
    }
}

fn central_finding(ope: &OpeResult, expected: &RatFunc) -> Finding {
    let order = ope.system().ambient_order();
    let passed = ope.is_central() && ope.central() == *expected;
    Finding::new(passed, central_text(expected, order), ope.to_text())
}

fn ope_suite() -> Vec<VerificationReport> {
    let p = Params::default();
    let z2_w2 = RatFunc::power_difference(2, 1);
    let cases: Vec<(&str, &str, &str, RatFunc)> = vec![
        ("chi.chi", "chi", "chi", RatFunc::pole(Root::minus_one(), 1)),
        ("beta_chi.beta_chi", "beta_chi", "beta_chi", RatFunc::zero()),
        ("beta_chi.gamma_chi", "beta_chi", "gamma_chi", z2_w2.clone()),
        ("gamma_chi.beta_chi", "gamma_chi", "beta_chi", -&z2_w2),
        ("gamma_chi.gamma_chi", "gamma_chi", "gamma_chi", RatFunc::zero()),
        ("h_chi_tw", "h_chi_tw", "h_chi_tw", HeisenbergCase::ChiTwisted.expected_ope()),
        ("h_chi_utw", "h_chi_utw", "h_chi_utw", HeisenbergCase::ChiUntwisted.expected_ope()),
        ("h_bg_tw", "h_bg_tw", "h_bg_tw", HeisenbergCase::BetaGammaTwisted.expected_ope()),
    ];
    cases
        .into_iter()
        .map(|(id, lhs, rhs, expected)| {
            let system = if lhs == "h_bg_tw" { "betagamma" } else { "chi2" };
            Check::new(format!("ope.{id}"), system).run(|| {
                let resolve = |name: &str| -> multiloc::Result<Field> {
                    if name == "chi" {
                        Ok(Field::atom(&chi2(), 0, 0, 0))
                    } else {
                        derived_canonical(name, &p)
                    }
                };
                Ok(central_finding(&resolve(lhs)?.ope(&resolve(rhs)?)?, &expected))
            })
        })
        .collect()
}

fn cutoff_params(c: &Cutoffs) -> Vec<(&'static str, String)> {
    let e = c.energy2;
    let energy = if e % 2 == 0 { (e / 2).to_string() } else { format!("{e}/2") };
    let particles = c.zero_modes.map_or("none".to_string(), |p| p.to_string());
    vec![("cutoff_e", energy), ("cutoff_p", particles)]
}

/// Compares bracket values with `expected` and with the same brackets at
/// larger cutoffs.
fn bracket_finding(
    rule: &str,
    small: &[ModeBracket],
    large: &[ModeBracket],
    expected: impl Fn(i64, i64) -> Scalar,
) -> Finding {
    let mut bad = Vec::new();
    for (s, l) in small.iter().zip(large) {
        let shown = s.value.as_ref().map_or("non-central".to_string(), Scalar::to_text);
        if s.value.as_ref() != Some(&expected(s.m2, s.n2)) {
            bad.push(format!("[{}, {}] = {shown}", half(s.m2), half(s.n2)));
        } else if s.value != l.value {
            bad.push(format!("[{}, {}] changes at larger cutoffs", half(s.m2), half(s.n2)));
        }
    }
    let computed = if bad.is_empty() {
        format!("{rule}: {} brackets exact and truncation-stable", small.len())
    } else {
        bad.join("; ")
    };
    Finding::new(bad.is_empty() && small.len() == large.len(), format!("{rule}: {} brackets exact and truncation-stable", small.len()), computed)
}

fn half(label2: i64) -> String {
    if label2 % 2 == 0 {
        (label2 / 2).to_string()
    } else {
        format!("{label2}/2")
    }
}

fn heisenberg_value(m2: i64, n2: i64) -> Scalar {
    if m2 + n2 == 0 {
        Scalar::frac(-m2, 2)
    } else {
        Scalar::zero()
    }
}

fn chi_value(m2: i64, n2: i64) -> Scalar {
    match (m2 + n2, ((m2 - 1) / 2).rem_euclid(2)) {
        (0, 0) => Scalar::one(),
        (0, _) => Scalar::from_int(-1),
        _ => Scalar::zero(),
    }
}

fn heisenberg_mode_report(case: HeisenbergCase, cutoffs: Cutoffs, prefix: &str) -> VerificationReport {
    let system = if case == HeisenbergCase::BetaGammaTwisted { "betagamma" } else { "chi2" };
    Check::new(format!("{prefix}.{}.modes", case.field_name()), system).params(cutoff_params(&cutoffs)).run(|| {
        let small = heisenberg_check(case, cutoffs, 6)?;
        let large = heisenberg_check(case, cutoffs.grown(2, 2), 6)?;
        Ok(bracket_finding("[h_m, h_n] = -m delta(m+n), |m|, |n| <= 3", &small.brackets, &large.brackets, heisenberg_value))
    })
}

fn chi_mode_report(cutoffs: Cutoffs) -> VerificationReport {
    Check::new("fock.chi.modes", "chi2").params(cutoff_params(&cutoffs)).run(|| {
        let small = chi_mode_brackets(cutoffs, 7)?;
        let large = chi_mode_brackets(cutoffs.grown(2, 2), 7)?;
        Ok(bracket_finding("[chi_m, chi_n] = (-1)^(m-1/2) delta(m+n), |m|, |n| <= 7/2", &small, &large, chi_value))
    })
}

fn heisenberg_suite(s: &Settings) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for case in HeisenbergCase::ALL {
        let system = if case == HeisenbergCase::BetaGammaTwisted { "betagamma" } else { "chi2" };
        out.push(Check::new(format!("heisenberg.{}.ope", case.field_name()), system).run(|| {
            let h = case.field()?;
            Ok(central_finding(&h.ope(&h)?, &case.expected_ope()))
        }));
        out.push(heisenberg_mode_report(case, s.cutoffs, "heisenberg"));
    }
    out
}

fn virasoro_report(family: VirasoroFamily, params: &Params) -> VerificationReport {
    let system = if family == VirasoroFamily::Solitary { "chi2" } else { "betagamma" };
    Check::new(format!("virasoro.{}", family.name()), system).params(family.parameter_text(params)).run(|| {
        let report = virasoro_check(family, params)?;
        let mut expected = format!("c = {}", report.expected_central_charge.to_text());
        let mut computed = match report.central_charge() {
            Some(c) => format!("c = {}", c.to_text()),
            None => format!("not of Virasoro shape; residual {}", report.shape.residual.to_text()),
        };
        if let Some(pole) = &report.third_order_pole {
            expected.push_str("; third-order pole 0");
            computed.push_str(&format!("; third-order pole {}", pole.to_text()));
        }
        Ok(Finding::new(report.passed(), expected, computed))
    })
}

/// The full `ope(L, L)` text, so the golden corpus pins each family's OPE.
fn virasoro_ope_report(family: VirasoroFamily, params: &Params) -> VerificationReport {
    let system = if family == VirasoroFamily::Solitary { "chi2" } else { "betagamma" };
    Check::new(format!("virasoro.{}.ope", family.name()), system).params(family.parameter_text(params)).run(|| {
        let report = virasoro_check(family, params)?;
        let var = if family.variable_power() == 1 { "z" } else { "z^2" };
        let expected = format!(
            "C/2 (u-v)^-4 + 2L(v) (u-v)^-2 + dL(v) (u-v)^-1 in u = {var}, C = {}",
            report.expected_central_charge.to_text()
        );
        Ok(Finding::new(report.passed(), expected, report.shape.ope.to_text()))
    })
}

fn virasoro_suite(s: &Settings) -> Vec<VerificationReport> {
    let families = match s.family {
        Some(f) => vec![f],
        None => VirasoroFamily::ALL.to_vec(),
    };
    families
        .into_iter()
        .flat_map(|f| [virasoro_report(f, &s.params), virasoro_ope_report(f, &s.params)])
        .collect()
}

fn iso_suite(s: &Settings) -> Vec<VerificationReport> {
    let sq = "betagamma_squared";
    let mut out = vec![
        Check::new("iso.phi_bg.homomorphism", sq).run(|| {
            let phi = phi_betagamma();
            let pairs = check_homomorphism(&phi, &generator_pairs(phi.source()))?;
            let bad: Vec<String> = pairs
                .iter()
                .filter(|p| !p.agrees())
                .map(|p| format!("({}, {}): {} vs {}", p.left.to_text(), p.right.to_text(), p.of_images.to_text(), p.image_of_ope.to_text()))
                .collect();
            let expected = format!("{} generator pairs agree", pairs.len());
            Ok(if bad.is_empty() { Finding::texts(expected.clone(), expected) } else { Finding::new(false, expected, bad.join("; ")) })
        }),
        Check::new("iso.phi_bg.reconstruction", sq).run(|| {
            let image = phi_betagamma().images()[0].clone();
            Ok(central_finding(&image.ope(&image)?, &RatFunc::pole(Root::minus_one(), 1)))
        }),
        Check::new("iso.phi_bg.interchange", "chi2").run(|| {
            let (lhs, rhs) = interchange_identity()?;
            Ok(Finding::texts(rhs.to_text(), lhs.to_text()))
        }),
        Check::new("iso.phi_bg.twisted_current", sq).run(|| {
            let (lhs, rhs) = twisted_current_identity()?;
            Ok(Finding::texts(rhs.to_text(), lhs.to_text()))
        }),
        Check::new("iso.phi_bg.mode_dictionary", "chi2").param("max_label", "9/2").run(|| {
            let phi = phi_betagamma();
            let bad = phi.mode_dictionary_failures(9)?;
            let vacuum = phi.preserves_vacuum(9)?;
            let expected = "mode brackets agree; annihilators map to annihilators";
            let computed = if bad.is_empty() && vacuum {
                expected.to_string()
            } else {
                format!("{} disagreeing brackets; vacuum preserved: {vacuum}", bad.len())
            };
            Ok(Finding::texts(expected, computed))
        }),
        Check::new("iso.phi_bg.round_trip", "chi2").run(|| {
            let bad = phi_betagamma().round_trip_failures();
            Ok(Finding::texts("inverse images map back to the generators", if bad.is_empty() {
                "inverse images map back to the generators".to_string()
            } else {
                bad.join("; ")
            }))
        }),
    ];
    let (n, d) = SOLITARY_STATED_MU;
    out.push(
        Check::new("iso.solitary_identification", "chi2")
            .params([("lambda", "-1/2".to_string()), ("mu", format!("{n}/{d}"))])
            .param("series_order", s.series_order)
            .run(|| {
                let r = solitary_identification(&Scalar::frac(n, d), s.series_order)?;
                Ok(Finding::new(r.identical(), r.image.to_text(), r.solitary.to_text()))
            }),
    );
    out
}

/// J^{ab}: 2×2 blocks [[0, 1], [−1, 0]] on the diagonal, 1-based.
fn j_form(a: u32, b: u32) -> i64 {
    let (a, b) = (a - 1, b - 1);
    match (a / 2 == b / 2, a % 2, b % 2) {
        (true, 0, 1) => 1,
        (true, 1, 0) => -1,
        _ => 0,
    }
}

fn symplectic_suite(s: &Settings) -> Vec<VerificationReport> {
    let ns: Vec<u32> = match s.n {
        Some(n) => vec![n],
        None => (1..=3).collect(),
    };
    let mut out = Vec::new();
    for n in ns {
        let system = format!("chi{}", 2 * n);
        out.push(Check::new(format!("symplectic.n{n}.ope"), system.clone()).param("n", n).run(|| {
            let pairs = symplectic_check(n)?;
            let i = Scalar::root(4, 1);
            let base = RatFunc::power_difference(2 * n, 1);
            let bad: Vec<String> = pairs
                .iter()
                .filter(|p| {
                    let expected = base.scale(&(&i * &Scalar::from_int(j_form(p.a, p.b))));
                    !(p.ope.is_central() && p.ope.central() == expected)
                })
                .map(|p| format!("({}, {}): {}", p.a, p.b, p.ope.to_text()))
                .collect();
            let expected = format!("{} pairs equal iJ^ab/(z^{m}-w^{m})", pairs.len(), m = 2 * n);
            Ok(if bad.is_empty() { Finding::texts(expected.clone(), expected) } else { Finding::new(false, expected, bad.join("; ")) })
        }));
        out.push(Check::new(format!("symplectic.n{n}.homomorphism"), system).param("n", n).run(|| {
            let map = phi_sb(n);
            let pairs = check_homomorphism(&map, &generator_pairs(&chi(2 * n)))?;
            let bad = pairs.iter().filter(|p| !p.agrees()).count();
            Ok(Finding::texts("phi_sb is a homomorphism on generators", if bad == 0 {
                "phi_sb is a homomorphism on generators".to_string()
            } else {
                format!("{bad} generator pairs disagree")
            }))
        }));
        if n == 1 {
            out.push(Check::new("symplectic.n1.relabel", "betagamma_squared").run(|| {
                let relabelled = relabel_sb1_to_betagamma().apply(&phi_sb(1).images()[0])?;
                Ok(Finding::texts(phi_betagamma().images()[0].to_text(), relabelled.to_text()))
            }));
        }
    }
    out
}

fn appendix_suite(s: &Settings) -> Vec<VerificationReport> {
    let ns: Vec<u32> = match s.n {
        Some(n) => vec![n],
        None => (1..=8).collect(),
    };
    ns.into_iter()
        .flat_map(|n| (1..=2 * n).map(move |l| (n, l)))
        .map(|(n, l)| {
            Check::new(format!("appendix.n{n}.l{l:02}"), format!("N={}", 2 * n)).param("n", n).param("l", l).run(|| {
                let r = verify_interpolation_identity(n, l);
                Ok(Finding::new(r.equal, r.rhs, r.lhs))
            })
        })
        .collect()
}

/// Resolves a field name for the Fock suite: generators or catalog entries.
fn fock_field(name: &str, params: &Params) -> multiloc::Result<Field> {
    match name {
        "chi" => Ok(Field::atom(&chi2(), 0, 0, 0)),
        "beta" => Ok(Field::atom(&betagamma(), 0, 0, 0)),
        "gamma" => Ok(Field::atom(&betagamma(), 1, 0, 0)),
        _ => derived_canonical(name, params),
    }
}

const ORACLE_MAX_POWER: i64 = 5;

fn virasoro_modes_report(family: VirasoroFamily, s: &Settings) -> VerificationReport {
    Check::new(format!("fock.{}.virasoro_modes", family.name()), "betagamma")
        .params(family.parameter_text(&s.params))
        .params(cutoff_params(&s.cutoffs))
        .run(|| {
            let l = family.field(&s.params)?;
            let c = family.expected_central_charge(&s.params);
            let checks = virasoro_mode_check(&l, &c, 2, s.cutoffs)?;
            let bad: Vec<String> = checks.iter().filter(|x| !x.agree).map(|x| format!("[L_{}, L_{}]", x.m, x.n)).collect();
            let expected = format!("[L_m, L_n] = (m-n)L_(m+n) + (m^3-m)c/12 delta(m+n), c = {}, |m|, |n| <= 2", c.to_text());
            Ok(if bad.is_empty() { Finding::texts(expected.clone(), expected) } else { Finding::new(false, expected, bad.join("; ")) })
        })
}

fn oracle_reports(fields: &[(String, Field)], s: &Settings) -> Vec<VerificationReport> {
    let system = fields[0].1.system().name().to_string();
    let run = || -> multiloc::Result<Vec<VerificationReport>> {
        let space = build_space(fields[0].1.system(), s.cutoffs)?;
        let pairs = oracle_suite(fields, ORACLE_MAX_POWER, &space)?;
        Ok(pairs
            .into_iter()
            .map(|pair| {
                Check::new(format!("fock.oracle.{}.{}", pair.left, pair.right), system.clone())
                    .params(cutoff_params(&s.cutoffs))
                    .run(|| {
                        let checks = &pair.result.checks;
                        let expected = format!("{} raw-mode brackets, |p|, |q| <= {ORACLE_MAX_POWER}, equal the residue formula", checks.len());
                        let bad: Vec<String> = pair.result.failures().map(|c| format!("({}, {})", c.p, c.q)).collect();
                        Ok(if bad.is_empty() {
                            Finding::texts(expected.clone(), expected)
                        } else {
                            Finding::new(false, expected, format!("disagree at {}", bad.join(", ")))
                        })
                    })
            })
            .collect())
    };
    run().unwrap_or_else(|e| vec![Check::new(format!("fock.oracle.{system}"), system.clone()).run(|| Err(e))])
}

fn fock_suite(s: &Settings) -> Vec<VerificationReport> {
    let Some(name) = &s.field else {
        let mut out = vec![chi_mode_report(s.cutoffs)];
        out.extend(HeisenbergCase::ALL.map(|c| heisenberg_mode_report(c, s.cutoffs, "fock")));
        out.push(virasoro_modes_report(VirasoroFamily::L3, s));
        match catalog_field_groups(&s.params) {
            Ok(groups) => out.extend(groups.iter().flat_map(|g| oracle_reports(g, s))),
            Err(e) => out.push(Check::new("fock.oracle", "all").run(|| Err(e))),
        }
        return out;
    };
    let mut out = Vec::new();
    if name == "chi" {
        out.push(chi_mode_report(s.cutoffs));
    } else if let Some(case) = HeisenbergCase::from_field_name(name) {
        out.push(heisenberg_mode_report(case, s.cutoffs, "fock"));
    } else if let Ok(family @ (VirasoroFamily::L1 | VirasoroFamily::L2 | VirasoroFamily::L3)) = VirasoroFamily::parse(name) {
        out.push(virasoro_modes_report(family, s));
    }
    match fock_field(name, &s.params) {
        Ok(f) => out.extend(oracle_reports(&[(name.clone(), f)], s)),
        Err(e) => out.push(Check::new(format!("fock.oracle.{name}"), "unknown").run(|| Err(e))),
    }
    out
}
