//! `cotype-zeta`: counting, formula evaluation, series expansion and the
//! verification suites from the command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cotype_zeta::analytic::{asymptote_check_range, PoleReport};
use cotype_zeta::exact::{expand, gaussian_multinomial, Truncation};
use cotype_zeta::flags::{
    abc_matrix, enumerate_reduced, sum_tau, tau, tau_table_value, theta_direct, theta_gf,
    ResidueMatrix,
};
use cotype_zeta::lattice::{hnf_enumerate, liu_recursion, unital_counts, LiuTable};
use cotype_zeta::measures::{s_case, s_closed_form, s_oracle, SLemmaInput};
use cotype_zeta::verify::{s_lemma_suite_with, DEFAULT_MAX_WORK};
use cotype_zeta::{
    DvrSpec, Error, FiniteField, FlagShape, FormulaId, Predicates, Suite, SuiteReport,
};

const SCHEMA: u32 = 1;
const THREADS_ENV: &str = "COTYPE_ZETA_THREADS";

#[derive(Parser)]
#[command(
    name = "cotype-zeta",
    version,
    about = "Subalgebra and cotype zeta functions of o^n, computed and cross-checked exactly"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Work limit for enumerations; exceeding it aborts with exit code 3.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_WORK)]
    max_work: u64,
    /// Worker threads (falls back to COTYPE_ZETA_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count submodules of o^n by cotype or index.
    Count(CountArgs),
    /// Print a catalog formula.
    Formula(FormulaArgs),
    /// Expand a catalog formula as a truncated power series.
    Expand(ExpandArgs),
    /// Permutation counts tau_{I,E} over L_I(F_q).
    Tau(TauArgs),
    /// theta_{n,iota} from its generating function, optionally by brute force.
    Theta(ThetaArgs),
    /// Count I-reduced matrices over F_q against the Gaussian multinomial.
    ReducedCount(ReducedArgs),
    /// Evaluate the seven-case formula for S, optionally against the oracle.
    Slemma(SlemmaArgs),
    /// Pole locations of the diagonal contributions.
    Poles(PolesArgs),
    /// Liu's recursion against brute-force unital subring counts.
    Recursion(RecursionArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum By {
    Cotype,
    Index,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, default_value = "zp:2")]
    ring: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    max_e: u32,
    /// Only multiplicatively closed lattices.
    #[arg(long)]
    closed: bool,
    /// Only lattices containing (1, ..., 1).
    #[arg(long)]
    with_identity: bool,
    /// Only lattices inside pi o^n.
    #[arg(long)]
    inside_pi: bool,
    /// Only lattices whose coordinates agree modulo pi.
    #[arg(long)]
    congruent: bool,
    #[arg(long, value_enum, default_value = "index")]
    by: By,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    id: String,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    id: String,
    /// Keep monomials of total degree at most this.
    #[arg(long)]
    max_total: u32,
    /// Also evaluate every coefficient at this value of q.
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args)]
struct TauArgs {
    #[arg(long)]
    n: u32,
    #[arg(long = "I", value_delimiter = ',')]
    iset: Vec<u32>,
    #[arg(long)]
    q: u32,
    /// Compare against the closed-form table (n = 3, I = {1,2} only).
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    iota: u32,
    /// Also count directly over F_q.
    #[arg(long)]
    direct: bool,
    #[arg(long, default_value_t = 2)]
    q: u32,
}

#[derive(Args)]
struct ReducedArgs {
    #[arg(long)]
    n: u32,
    #[arg(long = "I", value_delimiter = ',')]
    iset: Vec<u32>,
    #[arg(long)]
    q: u32,
}

#[derive(Args)]
struct SlemmaArgs {
    #[arg(long)]
    q: u32,
    /// Residues alpha,beta,gamma as field codes.
    #[arg(long, value_delimiter = ',', required = true)]
    res: Vec<u32>,
    /// Valuations of u1,u2,u3,u4.
    #[arg(long, value_delimiter = ',', required = true)]
    vals: Vec<u32>,
    /// Also compute the value by exhaustive counting.
    #[arg(long)]
    oracle: bool,
    /// Oracle over Z localized at p (must equal q).
    #[arg(long, conflicts_with = "ring")]
    p: Option<u32>,
    /// Oracle ring, e.g. fq:2:2.
    #[arg(long)]
    ring: Option<String>,
}

#[derive(Args)]
struct PolesArgs {
    #[arg(long)]
    n: u32,
    /// Report every n up to this bound and run the asymptotic check.
    #[arg(long)]
    to: Option<u32>,
}

#[derive(Args)]
struct RecursionArgs {
    #[arg(long, default_value = "zp:2")]
    ring: String,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 6)]
    max_e: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Primes for the s-lemma grid.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<u32>>,
    /// Valuation bound for the s-lemma grid.
    #[arg(long)]
    max_val: Option<u32>,
}

/// Why a command did not succeed.
enum Failure {
    Usage(String),
    Guard(String),
    Check,
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow { .. } => Failure::Guard(e.to_string()),
            Error::Domain(_)
            | Error::Parse(_)
            | Error::Precondition(_)
            | Error::NotExpandable(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = init_threads(cli.threads) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let out = Out { json: cli.json };
    let res = match &cli.cmd {
        Cmd::Count(a) => count(&out, a, cli.max_work),
        Cmd::Formula(a) => formula(&out, a),
        Cmd::Expand(a) => expand_cmd(&out, a),
        Cmd::Tau(a) => tau_cmd(&out, a, cli.max_work),
        Cmd::Theta(a) => theta(&out, a, cli.max_work),
        Cmd::ReducedCount(a) => reduced(&out, a, cli.max_work),
        Cmd::Slemma(a) => slemma(&out, a),
        Cmd::Poles(a) => poles(&out, a),
        Cmd::Recursion(a) => recursion(&out, a, cli.max_work),
        Cmd::Verify(a) => verify(&out, a, cli.max_work),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn init_threads(flag: Option<usize>) -> std::result::Result<(), String> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse()
                    .map_err(|_| format!("{THREADS_ENV} must be a thread count, got {s:?}"))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

struct Out {
    json: bool,
}

impl Out {
    /// Prints `value` with the schema tag in JSON mode, else `text`.
    fn emit(&self, mut value: Value, text: impl FnOnce() -> String) {
        if self.json {
            if let Value::Object(m) = &mut value {
                m.insert("schema".into(), json!(SCHEMA));
            }
            say(&format!(
                "{}\n",
                serde_json::to_string_pretty(&value).expect("serializable")
            ));
        } else {
            say(&text());
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn say(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn ring(s: &str) -> std::result::Result<DvrSpec, Failure> {
    Ok(DvrSpec::from_str(s)?)
}

fn field(q: u32) -> std::result::Result<FiniteField, Failure> {
    Ok(FiniteField::of_order(q)?)
}

fn count(out: &Out, a: &CountArgs, max_work: u64) -> Outcome {
    let spec = ring(&a.ring)?;
    let preds = Predicates {
        mult_closed: a.closed,
        contains_identity: a.with_identity,
        inside_pi: a.inside_pi,
        coords_congruent: a.congruent,
    };
    let table = hnf_enumerate(&spec, a.n, a.max_e, preds, max_work)?;
    let by_index = table.by_index(a.max_e);
    let mut v = table.to_json();
    v["by_index"] = json!(by_index.iter().map(u64::to_string).collect::<Vec<_>>());
    out.emit(v, || {
        let preds = preds.names();
        let mut s = format!(
            "ring {} n={} e<={} predicates: {}\n",
            table.ring,
            table.n,
            a.max_e,
            if preds.is_empty() {
                "none".into()
            } else {
                preds.join(",")
            }
        );
        match a.by {
            By::Index => {
                let counts: Vec<String> = by_index.iter().map(u64::to_string).collect();
                s += &format!("counts by index e=0..{}: {}\n", a.max_e, counts.join(","));
            }
            By::Cotype => {
                for (c, k) in &table.entries {
                    s += &format!("{c}\te={}\t{k}\n", c.index_exponent());
                }
            }
        }
        s
    });
    Ok(())
}

fn formula_id(s: &str) -> std::result::Result<FormulaId, Failure> {
    Ok(FormulaId::from_str(s)?)
}

fn formula(out: &Out, a: &FormulaArgs) -> Outcome {
    let id = formula_id(&a.id)?;
    let f = id.resolve()?;
    let mut v = f.to_json();
    v["id"] = json!(id.to_string());
    v["semantics"] = json!(id.semantics());
    out.emit(v, || format!("{id}  [{}]\n{f}\n", id.semantics()));
    Ok(())
}

fn expand_cmd(out: &Out, a: &ExpandArgs) -> Outcome {
    let id = formula_id(&a.id)?;
    let f = id.resolve()?;
    let s = expand(&f, &Truncation::total(a.max_total))?;
    let mut values = BTreeMap::new();
    if let Some(q) = a.q {
        for (m, c) in s.terms() {
            values.insert(m.clone(), c.eval_at_q(q)?);
        }
    }
    let v = json!({
        "id": id.to_string(),
        "vars": f.vars().iter().collect::<Vec<_>>(),
        "max_total": a.max_total,
        "terms": s.to_poly().to_json(),
        "q": a.q,
        "values": values.iter().map(|(m, x)| json!({"m": m, "value": x.to_string()})).collect::<Vec<_>>(),
    });
    out.emit(v, || {
        let mut t = format!("{id} to total degree {}", a.max_total);
        if let Some(q) = a.q {
            t += &format!(", q={q}");
        }
        t += "\n";
        for (m, c) in s.terms() {
            t += &format!("{m:?}\t{c}");
            if let Some(x) = values.get(m) {
                t += &format!("\t= {x}");
            }
            t += "\n";
        }
        t
    });
    Ok(())
}

fn tau_cmd(out: &Out, a: &TauArgs, max_work: u64) -> Outcome {
    let ff = field(a.q)?;
    if a.table {
        if a.n != 3 || a.iset != [1, 2] {
            return Err(usage("--table applies to n = 3, I = 1,2 only"));
        }
        let mut rows = Vec::new();
        let mut ok = true;
        for al in ff.elements() {
            for be in ff.elements() {
                for ga in ff.elements() {
                    let (got, want) = (tau(&abc_matrix(al, be, ga)), tau_table_value(al, be, ga));
                    ok &= got == want;
                    rows.push((al, be, ga, got, want));
                }
            }
        }
        let v = json!({
            "n": 3, "I": [1, 2], "q": a.q, "pass": ok,
            "rows": rows.iter().map(|r| json!({"alpha": r.0, "beta": r.1, "gamma": r.2, "tau": r.3, "table": r.4})).collect::<Vec<_>>(),
        });
        out.emit(v, || {
            let mut s = String::from("alpha beta gamma  tau table\n");
            for r in &rows {
                s += &format!("{:>5} {:>4} {:>5}  {:>3} {:>5}\n", r.0, r.1, r.2, r.3, r.4);
            }
            s += &format!(
                "{}\n",
                if ok {
                    "table matches"
                } else {
                    "table MISMATCH"
                }
            );
            s
        });
        return if ok { Ok(()) } else { Err(Failure::Check) };
    }
    let shape = FlagShape::new(a.n, &a.iset)?;
    let total = sum_tau(a.n, &a.iset, &ff, max_work)?;
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for e in ResidueMatrix::all(&shape, &ff) {
        *hist.entry(tau(&e)).or_default() += 1;
    }
    let want = gaussian_multinomial(a.n, &a.iset)?.eval_integer(a.q as u64)?;
    let ok = want == total.into();
    let v = json!({
        "n": a.n, "I": a.iset, "q": a.q,
        "sum": total.to_string(),
        "multinomial": want.to_string(),
        "pass": ok,
        "histogram": hist.iter().map(|(t, k)| json!({"tau": t, "matrices": k.to_string()})).collect::<Vec<_>>(),
    });
    out.emit(v, || {
        let mut s = format!("n={} I={:?} q={}\n", a.n, a.iset, a.q);
        for (t, k) in &hist {
            s += &format!("tau={t}: {k} matrices\n");
        }
        s += &format!("sum of tau = {total}, Gaussian multinomial = {want}\n");
        s
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn theta(out: &Out, a: &ThetaArgs, max_work: u64) -> Outcome {
    let gf = theta_gf(a.n, a.iota)?;
    let direct = if a.direct {
        Some(theta_direct(a.n, a.iota, &field(a.q)?, max_work)?)
    } else {
        None
    };
    let ok = direct.is_none_or(|d| gf == d.into());
    let v = json!({
        "n": a.n, "iota": a.iota,
        "theta": gf.to_string(),
        "direct": direct.map(|d| json!({"q": a.q, "value": d.to_string()})),
        "pass": ok,
    });
    out.emit(v, || match direct {
        None => format!("{gf}\n"),
        Some(d) => format!("{gf}\ndirect count over F_{}: {d}\n", a.q),
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn reduced(out: &Out, a: &ReducedArgs, max_work: u64) -> Outcome {
    let ff = field(a.q)?;
    let got = enumerate_reduced(a.n, &a.iset, &ff, max_work)?;
    let want = gaussian_multinomial(a.n, &a.iset)?.eval_integer(a.q as u64)?;
    let ok = want == got.into();
    let v = json!({
        "n": a.n, "I": a.iset, "q": a.q,
        "count": got.to_string(),
        "multinomial": want.to_string(),
        "pass": ok,
    });
    out.emit(v, || {
        format!("{got} I-reduced matrices; Gaussian multinomial {want}\n")
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn slemma(out: &Out, a: &SlemmaArgs) -> Outcome {
    let ff = field(a.q)?;
    if a.res.len() != 3 || a.vals.len() != 4 {
        return Err(usage(
            "--res takes three residues and --vals four valuations",
        ));
    }
    let input = SLemmaInput {
        alpha: a.res[0],
        beta: a.res[1],
        gamma: a.res[2],
        v: [a.vals[0], a.vals[1], a.vals[2], a.vals[3]],
    };
    let closed = s_closed_form(&ff, &input)?;
    let value = closed.eval_at_q(a.q as u64)?;
    let case = s_case(input.v);
    let oracle = if a.oracle {
        let spec = match (&a.p, &a.ring) {
            (Some(p), _) => DvrSpec::zp(*p)?,
            (None, Some(r)) => ring(r)?,
            (None, None) if ff.degree() == 1 => DvrSpec::zp(ff.p())?,
            (None, None) => DvrSpec::fq(ff.p(), ff.degree())?,
        };
        if spec.q() != a.q {
            return Err(usage(format!(
                "oracle ring {spec} has residue field of order {}, not {}",
                spec.q(),
                a.q
            )));
        }
        Some(s_oracle(&spec, &input)?)
    } else {
        None
    };
    let ok = oracle.as_ref().is_none_or(|o| *o == value);
    let v = json!({
        "q": a.q, "res": a.res, "vals": a.vals,
        "case": case,
        "closed": closed.to_json(),
        "value": value.to_string(),
        "oracle": oracle.as_ref().map(|o| o.to_string()),
        "pass": ok,
    });
    out.emit(v, || {
        let mut s = format!("case {case}: S = {closed} = {value} at q={}\n", a.q);
        if let Some(o) = &oracle {
            s += &format!(
                "oracle: {o} ({})\n",
                if ok { "agrees" } else { "DISAGREES" }
            );
        }
        s
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn poles(out: &Out, a: &PolesArgs) -> Outcome {
    let to = a.to.unwrap_or(a.n);
    if to < a.n {
        return Err(usage("--to must be at least --n"));
    }
    let reports = (a.n..=to)
        .map(PoleReport::new)
        .collect::<cotype_zeta::Result<Vec<_>>>()?;
    let asym = match a.to {
        Some(t) if t >= 10 => Some(asymptote_check_range(t, t)?),
        _ => None,
    };
    let ok = reports
        .iter()
        .all(|r| r.max == r.d7 && r.meets_lower_bound())
        && asym.as_ref().is_none_or(|x| x.ok());
    let v = json!({
        "reports": reports.iter().map(PoleReport::to_json).collect::<Vec<_>>(),
        "asymptote": asym.as_ref().map(|x| x.to_json()),
        "pass": ok,
    });
    out.emit(v, || {
        let mut s = String::new();
        if reports.len() == 1 {
            for (i, p) in &reports[0].poles {
                s += &format!("iota={i}: pole at s={p}\n");
            }
        }
        for r in &reports {
            s += &format!(
                "n={}: max at iota={} is {}, d7(n+1)={}, >= n/6: {}\n",
                r.n,
                r.argmax,
                r.max,
                r.d7,
                if r.meets_lower_bound() { "yes" } else { "no" }
            );
        }
        if let Some(x) = &asym {
            s += &format!(
                "max/n at n={} is {}; 3-2sqrt(2) lies in [{}, {}]; within {}: {}\n",
                x.n_max,
                x.ratio,
                x.enclosure.0,
                x.enclosure.1,
                x.tolerance,
                if x.within { "yes" } else { "no" }
            );
        }
        s
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn recursion(out: &Out, a: &RecursionArgs, max_work: u64) -> Outcome {
    let spec = ring(&a.ring)?;
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let (mut f, mut g) = (LiuTable::new(), LiuTable::new());
    for n in 1..=a.n {
        for (e, k) in unital_counts(&spec, n, a.max_e, false, max_work)?
            .into_iter()
            .enumerate()
        {
            f.insert((n, e as u32), k.into());
        }
        for (e, k) in unital_counts(&spec, n, a.max_e, true, max_work)?
            .into_iter()
            .enumerate()
        {
            g.insert((n, e as u32), k.into());
        }
    }
    let mut rows = Vec::new();
    for n in 1..=a.n {
        for e in 0..=a.max_e {
            let rec = liu_recursion(&f, &g, n, e)?;
            rows.push((n, e, rec, f[&(n, e)].clone(), g[&(n, e)].clone()));
        }
    }
    let ok = rows.iter().all(|r| r.2 == r.3);
    let v = json!({
        "ring": spec.to_string(),
        "rows": rows.iter().map(|r| json!({
            "n": r.0, "e": r.1,
            "recursion": r.2.to_string(), "f": r.3.to_string(), "g": r.4.to_string(),
        })).collect::<Vec<_>>(),
        "pass": ok,
    });
    out.emit(v, || {
        let mut s = format!("ring {spec}\n n  e  f(count)  f(recursion)  g\n");
        for r in &rows {
            s += &format!("{:>2} {:>2} {:>9} {:>13} {:>3}\n", r.0, r.1, r.3, r.2, r.4);
        }
        s += if ok {
            "recursion reproduces every count\n"
        } else {
            "recursion MISMATCH\n"
        };
        s
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn verify(out: &Out, a: &VerifyArgs, max_work: u64) -> Outcome {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_str(&a.suite)?]
    };
    let custom = a.p.is_some() || a.max_val.is_some();
    if custom && suites != [Suite::SLemma] {
        return Err(usage("--p and --max-val apply to --suite s-lemma only"));
    }
    let mut reports: Vec<SuiteReport> = Vec::new();
    for s in suites {
        let r = if custom {
            s_lemma_suite_with(a.p.as_deref().unwrap_or(&[2, 3]), a.max_val.unwrap_or(3))?
        } else {
            s.run(max_work)?
        };
        if !out.json {
            say(&r.to_string());
        }
        reports.push(r);
    }
    let ok = reports.iter().all(SuiteReport::pass);
    if out.json {
        out.emit(
            json!({
                "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
                "pass": ok,
            }),
            String::new,
        );
    } else if reports.len() > 1 {
        let mut t = String::from("\nsuite                 result\n");
        for r in &reports {
            t += &format!(
                "{:<21} {}\n",
                r.suite.name(),
                if r.pass() { "PASS" } else { "FAIL" }
            );
        }
        say(&t);
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
