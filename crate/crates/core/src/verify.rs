//! Verification suites: each pits a closed form against an independent
//! brute-force count and reports one line per check.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::analytic::{asymptote_check_range, d7, pole_from_factor, xi_pole, PoleReport};
use crate::error::{Error, Result};
use crate::exact::{expand, gaussian_multinomial, Series, Truncation};
use crate::flags::{
    abc_matrix, enumerate_reduced, expected_weighted_tau_sums, tau, tau_table_value, theta_direct,
    theta_gf, weighted_tau_sums, FlagShape, ResidueMatrix,
};
use crate::formulas::{
    application_ii, cotype_o4, identities, xi_n_assembled, zeta_z3_local, zeta_z4_local,
};
use crate::lattice::{
    f_g_correspondence_check, hnf_enumerate, index_counts, liu_recursion, paper_enumerate,
    unital_counts, Cotype, LiuTable, Predicates,
};
use crate::measures::{
    h_via_integral, prelim_integral_check, s_case, s_closed_form, s_grid, s_oracle, SLemmaInput,
};
use crate::tdvr::{DvrSpec, FiniteField};

/// Default work limit for suite enumerations.
pub const DEFAULT_MAX_WORK: u64 = 1 << 36;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Identities,
    Coefficients,
    GFormulas,
    Parametrization,
    SLemma,
    Flags,
    Recursion,
    RingIndependence,
    Poles,
    Measures,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Identities,
        Suite::Coefficients,
        Suite::GFormulas,
        Suite::Parametrization,
        Suite::SLemma,
        Suite::Flags,
        Suite::Recursion,
        Suite::RingIndependence,
        Suite::Poles,
        Suite::Measures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Coefficients => "cotype-coefficients",
            Suite::GFormulas => "g-formulas",
            Suite::Parametrization => "parametrization",
            Suite::SLemma => "s-lemma",
            Suite::Flags => "flags",
            Suite::Recursion => "recursion",
            Suite::RingIndependence => "ring-independence",
            Suite::Poles => "poles",
            Suite::Measures => "measures",
        }
    }

    pub fn run(self, max_work: u64) -> Result<SuiteReport> {
        match self {
            Suite::Identities => identities_suite(),
            Suite::Coefficients => coefficients_suite(max_work),
            Suite::GFormulas => g_formulas_suite(max_work),
            Suite::Parametrization => parametrization_suite(max_work),
            Suite::SLemma => s_lemma_suite(),
            Suite::Flags => flags_suite(max_work),
            Suite::Recursion => recursion_suite(max_work),
            Suite::RingIndependence => ring_independence_suite(max_work),
            Suite::Poles => poles_suite(),
            Suite::Measures => measures_suite(max_work),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            label: label.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records a list of failures as a single check.
    fn push_all(&mut self, label: impl Into<String>, total: usize, failures: Vec<String>) {
        let detail = if failures.is_empty() {
            format!("{total} cases")
        } else {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            format!("{} of {total} failed: {}", failures.len(), shown.join("; "))
        };
        self.push(label, failures.is_empty(), detail);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "pass": self.pass(),
            "checks": self.checks.iter().map(|c| json!({
                "label": c.label,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "[{mark}] {}: {} ({})", self.suite, c.label, c.detail)?;
        }
        Ok(())
    }
}

fn zp(p: u32) -> DvrSpec {
    DvrSpec::zp(p).expect("small prime")
}

fn series_at(s: &Series, m: &[u32], q: u64) -> Result<BigInt> {
    s.coefficient(m).eval_integer(q)
}

const INSIDE_PI: Predicates = Predicates {
    inside_pi: true,
    ..Predicates::CLOSED
};

const UNITAL: Predicates = Predicates {
    contains_identity: true,
    ..Predicates::CLOSED
};

const IRREDUCIBLE: Predicates = Predicates {
    contains_identity: true,
    coords_congruent: true,
    ..Predicates::CLOSED
};

const ALL_SUBMODULES: Predicates = Predicates {
    mult_closed: false,
    contains_identity: false,
    inside_pi: false,
    coords_congruent: false,
};

pub fn identities_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Identities);
    for c in identities()? {
        r.push(c.name, c.holds, "rat_equal");
    }
    Ok(r)
}

/// Series coefficients of the assembled functions against counts of
/// closed lattices, per index for `n = 2, 3` and per cotype for `n = 3`.
pub fn coefficients_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Coefficients);
    let deg = 7;
    for p in [2u32, 3] {
        for n in [2u32, 3] {
            let s = expand(&xi_n_assembled(n)?, &Truncation::total(deg))?;
            let counts = index_counts(&zp(p), n, deg, Predicates::CLOSED, max_work)?;
            let mut fails = Vec::new();
            for (e, &k) in counts.iter().enumerate() {
                let f = series_at(&s, &[e as u32], p as u64)?;
                if f != BigInt::from(k) {
                    fails.push(format!("T^{e}: series {f}, count {k}"));
                }
            }
            r.push_all(
                format!("xi_{n} assembled vs closed counts, p={p}, e<={deg}"),
                counts.len(),
                fails,
            );
        }
        let s = expand(&cotype_o4(), &Truncation::total(deg))?;
        let table = hnf_enumerate(&zp(p), 3, deg, Predicates::CLOSED, max_work)?;
        let monos = Truncation::total(deg).monomials(3)?;
        let mut fails = Vec::new();
        for m in &monos {
            let want = match Cotype::from_exponents(m) {
                Ok(c) => table.get(&c),
                Err(_) => 0,
            };
            let got = series_at(&s, m, p as u64)?;
            if got != BigInt::from(want) {
                fails.push(format!("{m:?}: series {got}, count {want}"));
            }
        }
        r.push_all(
            format!("cotype o4 vs per-cotype counts, p={p}, total degree<={deg}"),
            monos.len(),
            fails,
        );
    }
    Ok(r)
}

/// Closed lattices inside `pi o^n` of index `q^n, q^{n+1}, q^{n+2}`.
pub fn g_formulas_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::GFormulas);
    for n in 2u32..=4 {
        let want = application_ii(n)?;
        for p in [2u32, 3] {
            let counts = index_counts(&zp(p), n, n + 2, INSIDE_PI, max_work)?;
            let mut fails = Vec::new();
            for (k, w) in want.iter().enumerate() {
                let w = w.eval_integer(p as u64)?;
                let got = counts[n as usize + k];
                if w != BigInt::from(got) {
                    fails.push(format!(
                        "index q^{}: formula {w}, count {got}",
                        n as usize + k
                    ));
                }
            }
            r.push_all(format!("n={n}, p={p}"), 3, fails);
        }
    }
    Ok(r)
}

/// Every cotype of index exponent at most `e_max` for `n`.
pub fn cotypes_up_to(n: u32, e_max: u32) -> Vec<Cotype> {
    fn go(left: usize, cap: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Cotype>) {
        if left == 0 {
            out.push(Cotype::from_exponents(cur).expect("descending"));
            return;
        }
        for a in 0..=cap.min(budget) {
            cur.push(a);
            go(left - 1, a, budget - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n as usize, e_max, e_max, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The flag parametrization against the Hermite enumeration, cotype by
/// cotype, for `n = 3`, index exponent at most 6.
pub fn parametrization_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Parametrization);
    let (n, e_max) = (3, 6);
    for p in [2u32, 3] {
        let spec = zp(p);
        let table = hnf_enumerate(&spec, n, e_max, Predicates::CLOSED, max_work)?;
        let cotypes = cotypes_up_to(n, e_max);
        let mut fails = Vec::new();
        let mut mults = std::collections::BTreeSet::new();
        for c in &cotypes {
            let want = table.get(c);
            if c.iset.is_empty() {
                if want != 1 {
                    fails.push(format!("{c}: scalar lattice count {want}"));
                }
                continue;
            }
            let rep = paper_enumerate(&spec, c, max_work)?;
            mults.extend(rep.multiplicities.iter().copied());
            if rep.count != want || !rep.uniform() || !rep.disjoint || rep.cotype_mismatches > 0 {
                fails.push(format!(
                    "{c}: param {} vs hnf {want}, multiplicities {:?}, disjoint {}, mismatches {}",
                    rep.count, rep.multiplicities, rep.disjoint, rep.cotype_mismatches
                ));
            }
        }
        r.push_all(
            format!("p={p}, all cotypes with e<={e_max}"),
            cotypes.len(),
            fails,
        );
        r.push(
            format!("p={p}, dedup multiplicity uniform"),
            mults.len() <= 1,
            format!("observed {mults:?}"),
        );
    }
    Ok(r)
}

fn s_inputs(q: u32, v: [u32; 4]) -> impl Iterator<Item = SLemmaInput> {
    (0..q * q * q).map(move |k| SLemmaInput {
        alpha: k % q,
        beta: (k / q) % q,
        gamma: k / (q * q),
        v,
    })
}

fn s_compare(spec: &DvrSpec, ff: &FiniteField, inp: &SLemmaInput) -> Result<Option<String>> {
    let closed = s_closed_form(ff, inp)?.eval_at_q(spec.q() as u64)?;
    let oracle = s_oracle(spec, inp)?;
    Ok((closed != oracle).then(|| format!("{inp:?}: closed {closed}, oracle {oracle}")))
}

/// The seven-case evaluation of `S` against measure counts: full grid with
/// valuations at most 3 for `p = 2, 3`, and 20 spread cases over `F_4[[t]]`.
pub fn s_lemma_suite() -> Result<SuiteReport> {
    s_lemma_suite_with(&[2, 3], 3)
}

/// As [`s_lemma_suite`] with chosen primes and valuation bound.
pub fn s_lemma_suite_with(primes: &[u32], max_val: u32) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::SLemma);
    let grid = s_grid(max_val);
    for &p in primes {
        let spec = DvrSpec::zp(p)?;
        let ff = spec.residue_field()?;
        let mut fails = Vec::new();
        let mut total = 0;
        for &v in &grid {
            for inp in s_inputs(p, v) {
                total += 1;
                fails.extend(s_compare(&spec, &ff, &inp)?);
            }
        }
        r.push_all(format!("p={p}, v_i<={max_val}, all residues"), total, fails);
    }
    let spec = DvrSpec::fq(2, 2)?;
    let ff = spec.residue_field()?;
    let mut by_case: Vec<Vec<[u32; 4]>> = vec![Vec::new(); 7];
    for &v in &grid {
        by_case[s_case(v) as usize - 1].push(v);
    }
    let mut picks = Vec::new();
    let mut round = 0;
    while picks.len() < 20 {
        for vs in &by_case {
            if picks.len() < 20 && !vs.is_empty() {
                let v = vs[(round * 5) % vs.len()];
                let k = (picks.len() as u32 * 23 + 7) % 64;
                picks.push(SLemmaInput {
                    alpha: k % 4,
                    beta: (k / 4) % 4,
                    gamma: k / 16,
                    v,
                });
            }
        }
        round += 1;
    }
    let mut fails = Vec::new();
    for inp in &picks {
        fails.extend(s_compare(&spec, &ff, inp)?);
    }
    r.push_all("q=4 over F_4[[t]], 20 spot cases", picks.len(), fails);
    Ok(r)
}

fn subsets(n: u32) -> Vec<Vec<u32>> {
    let m = n.saturating_sub(1);
    (0u32..1 << m)
        .map(|mask| (1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect())
        .collect()
}

/// Flag counts, the tau table, the weighted sums and theta.
pub fn flags_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Flags);
    for q in [2u32, 3, 4] {
        let ff = FiniteField::of_order(q)?;
        let mut fails = Vec::new();
        let mut total = 0;
        for n in 1u32..=5 {
            for iset in subsets(n) {
                total += 1;
                let want = gaussian_multinomial(n, &iset)?.eval_integer(q as u64)?;
                let got = enumerate_reduced(n, &iset, &ff, max_work)?;
                if want != BigInt::from(got) {
                    fails.push(format!(
                        "n={n} I={iset:?}: reduced {got}, multinomial {want}"
                    ));
                }
            }
        }
        r.push_all(
            format!("I-reduced counts = q-multinomial, q={q}, n<=5"),
            total,
            fails,
        );
    }
    for q in [2u32, 3, 4, 5] {
        let ff = FiniteField::of_order(q)?;
        let mut fails = Vec::new();
        for a in ff.elements() {
            for b in ff.elements() {
                for c in ff.elements() {
                    let (direct, table) = (tau(&abc_matrix(a, b, c)), tau_table_value(a, b, c));
                    if direct != table {
                        fails.push(format!("({a},{b},{c}): direct {direct}, table {table}"));
                    }
                }
            }
        }
        r.push_all(format!("tau table, q={q}"), (q * q * q) as usize, fails);
        let (got, want) = (weighted_tau_sums(&ff), expected_weighted_tau_sums(q as i64));
        r.push(
            format!("weighted tau sums, q={q}"),
            got == want,
            format!("{got:?} vs {want:?}"),
        );
    }
    for q in [2u32, 3] {
        let ff = FiniteField::of_order(q)?;
        let mut fails = Vec::new();
        let mut total = 0;
        for n in 2u32..=5 {
            for i in 1..n {
                total += 1;
                let (d, g) = (theta_direct(n, i, &ff, max_work)?, theta_gf(n, i)?);
                if BigInt::from(d) != g {
                    fails.push(format!("n={n} iota={i}: direct {d}, gf {g}"));
                }
            }
        }
        r.push_all(
            format!("theta direct = generating function, q={q}"),
            total,
            fails,
        );
    }
    Ok(r)
}

/// Liu's recursion, the dimension-shift correspondences and the local
/// factors for `Z^3`, `Z^4` against unital counts.
pub fn recursion_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Recursion);
    let (n_max, e_max) = (4u32, 6u32);
    for p in [2u32, 3] {
        let spec = zp(p);
        let mut f = LiuTable::new();
        let mut g = LiuTable::new();
        for n in 1..=n_max {
            for (e, k) in unital_counts(&spec, n, e_max, false, max_work)?
                .into_iter()
                .enumerate()
            {
                f.insert((n, e as u32), k.into());
            }
            for (e, k) in unital_counts(&spec, n, e_max, true, max_work)?
                .into_iter()
                .enumerate()
            {
                g.insert((n, e as u32), k.into());
            }
        }
        let mut fails = Vec::new();
        for n in 1..=n_max {
            for e in 0..=e_max {
                let got = liu_recursion(&f, &g, n, e)?;
                if got != f[&(n, e)] {
                    fails.push(format!(
                        "f_{n}(p^{e}): recursion {got}, count {}",
                        f[&(n, e)]
                    ));
                }
            }
        }
        r.push_all(
            format!("Liu recursion, p={p}, n<={n_max}, e<={e_max}"),
            (n_max * (e_max + 1)) as usize,
            fails,
        );
        for n in 2..=n_max {
            let rep = f_g_correspondence_check(&spec, n, e_max, max_work)?;
            r.push(
                format!("correspondence o^{n} -> o^{}, p={p}, e<={e_max}", n - 1),
                rep.ok(),
                match rep.first_mismatch() {
                    None => format!("{} indices", rep.rows.len()),
                    Some(e) => format!("first mismatch at e={e}"),
                },
            );
        }
        for (n, zeta) in [(3u32, zeta_z3_local()), (4, zeta_z4_local())] {
            let s = expand(&zeta, &Truncation::total(e_max))?;
            let mut fails = Vec::new();
            for e in 0..=e_max {
                let c = series_at(&s, &[e], p as u64)?;
                if c != f[&(n, e)] {
                    fails.push(format!("T^{e}: series {c}, count {}", f[&(n, e)]));
                }
            }
            r.push_all(
                format!("Z^{n} local factor vs unital counts, p={p}"),
                (e_max + 1) as usize,
                fails,
            );
        }
    }
    Ok(r)
}

/// Counts over `Z_p` and `F_p[[t]]` agree; `F_4[[t]]` counts match the
/// assembled series at `q = 4`.
pub fn ring_independence_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::RingIndependence);
    let e_max = 6;
    let preds = [
        ("closed", Predicates::CLOSED),
        ("unital", UNITAL),
        ("irreducible", IRREDUCIBLE),
        ("inside pi", INSIDE_PI),
        ("all submodules", ALL_SUBMODULES),
    ];
    for p in [2u32, 3] {
        let (a, b) = (zp(p), DvrSpec::fq(p, 1)?);
        for n in 1u32..=3 {
            let mut fails = Vec::new();
            for (name, pr) in preds {
                let ta = hnf_enumerate(&a, n, e_max, pr, max_work)?;
                let tb = hnf_enumerate(&b, n, e_max, pr, max_work)?;
                if ta.entries != tb.entries {
                    fails.push(format!(
                        "{name}: {:?} vs {:?}",
                        ta.by_index(e_max),
                        tb.by_index(e_max)
                    ));
                }
            }
            r.push_all(format!("{a} vs {b}, n={n}, e<={e_max}"), preds.len(), fails);
        }
    }
    let f4 = DvrSpec::fq(2, 2)?;
    let counts = index_counts(&f4, 3, e_max, Predicates::CLOSED, max_work)?;
    let s = expand(&xi_n_assembled(3)?, &Truncation::total(e_max))?;
    let mut fails = Vec::new();
    for (e, &k) in counts.iter().enumerate() {
        let c = series_at(&s, &[e as u32], 4)?;
        if c != BigInt::from(k) {
            fails.push(format!("T^{e}: series {c}, count {k}"));
        }
    }
    r.push_all(
        format!("F_4[[t]] n=3 closed counts vs xi_3 at q=4, e<={e_max}"),
        counts.len(),
        fails,
    );
    Ok(r)
}

/// Pole locations from the factored denominators, the `d7` shift, and the
/// asymptotic lower bound.
pub fn poles_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Poles);
    let mut fails = Vec::new();
    let mut total = 0;
    for n in 2u32..=12 {
        for i in 1..n {
            total += 1;
            let (a, b) = (pole_from_factor(n, i)?, xi_pole(n, i)?);
            if a != b {
                fails.push(format!("n={n} iota={i}: factor {a}, formula {b}"));
            }
        }
    }
    r.push_all("pole read off the denominator, n<=12", total, fails);
    let mut fails = Vec::new();
    for n in 2u32..=100 {
        let rep = PoleReport::new(n)?;
        if rep.max != d7(n + 1)? {
            fails.push(format!("n={n}: max {}, d7(n+1) {}", rep.max, rep.d7));
        }
    }
    r.push_all("d7(n+1) = max pole, n<=100", 99, fails);
    let a = asymptote_check_range(10_000, 1000)?;
    r.push(
        "max pole >= n/6, n<=1000",
        a.lower_bound_violation.is_none(),
        match a.lower_bound_violation {
            None => "no violation".to_string(),
            Some(n) => format!("violated at n={n}"),
        },
    );
    r.push(
        "n=10^4 ratio within 10^-3 of 3-2sqrt(2)",
        a.within,
        format!(
            "ratio {} in enclosure [{}, {}]",
            a.ratio, a.enclosure.0, a.enclosure.1
        ),
    );
    Ok(r)
}

/// Measure-based counts: `h_n` from the closure integral against the
/// Hermite enumeration, and the `I = {iota}` preliminary integral.
pub fn measures_suite(max_work: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Measures);
    for p in [2u32, 3] {
        let spec = zp(p);
        for n in [2u32, 3] {
            let table = hnf_enumerate(&spec, n, 4, Predicates::CLOSED, max_work)?;
            let mut fails = Vec::new();
            let mut total = 0;
            for c in cotypes_up_to(n, 4) {
                if c.iset.is_empty() || c.exponents()[0] > 3 {
                    continue;
                }
                total += 1;
                let h = h_via_integral(&spec, &c)?;
                if h != BigInt::from(table.get(&c)) {
                    fails.push(format!("{c}: integral {h}, count {}", table.get(&c)));
                }
            }
            r.push_all(
                format!("h_{n} from the closure integral, p={p}"),
                total,
                fails,
            );
        }
    }
    let spec = zp(2);
    let ff = spec.residue_field()?;
    let mut fails = Vec::new();
    let mut total = 0;
    for n in [2u32, 3] {
        for iota in 1..n {
            let shape = FlagShape::new(n, &[iota])?;
            for e in ResidueMatrix::all(&shape, &ff) {
                let block = e.lower_block()?;
                for row in prelim_integral_check(&spec, n, iota, &block, 2)? {
                    total += 1;
                    if row.closed != row.oracle {
                        fails.push(format!("n={n} iota={iota} E'={block:?} k={}", row.k));
                    }
                }
            }
        }
    }
    r.push_all("preliminary integral for I={iota}, p=2", total, fails);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn cotype_listing() {
        let cs = cotypes_up_to(3, 2);
        let shown: Vec<Vec<u32>> = cs.iter().map(|c| c.exponents()).collect();
        assert_eq!(cs.len(), 4);
        assert!(shown.contains(&vec![1, 1, 0]) && shown.contains(&vec![2, 0, 0]));
    }

    #[test]
    fn quick_suites_pass() {
        for s in [Suite::Identities, Suite::Poles, Suite::GFormulas] {
            let rep = s.run(DEFAULT_MAX_WORK).unwrap();
            assert!(rep.pass(), "{rep}");
        }
    }
}
