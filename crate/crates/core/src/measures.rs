//! Haar measures of sets cut out by divisibility conditions, as normalized
//! counts over `(o/pi^K)^k`, and the closed forms they are checked against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact::LaurentQ;
use crate::flags::{is_very_elemental, tau, FlagShape, ResidueMatrix};
use crate::lattice::Cotype;
use crate::tdvr::{DvrSpec, FiniteField, TruncRing};

/// Largest number of tuples the oracle will visit.
pub const ORACLE_LIMIT: u64 = 1 << 36;

/// A polynomial with integer coefficients in `k` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, 1);
        p
    }

    fn add_term(&mut self, m: Vec<u32>, c: i64) {
        let e = self.terms.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Value at `xs` in `o/pi^K`.
    pub fn eval(&self, ring: &TruncRing, xs: &[u64]) -> u64 {
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = ring.from_int(c);
            for (&x, &e) in xs.iter().zip(m) {
                for _ in 0..e {
                    t = ring.mul(t, x);
                }
            }
            acc = ring.add(acc, t);
        }
        acc
    }

    /// Value at integer arguments.
    pub fn eval_int(&self, xs: &[i64]) -> i64 {
        self.terms
            .iter()
            .map(|(m, &c)| c * xs.iter().zip(m).map(|(&x, &e)| x.pow(e)).product::<i64>())
            .sum()
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .zip(names)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, n)| {
                    if e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            let sign = if c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let abs = c.unsigned_abs();
            let body = match (abs, mono.is_empty()) {
                (_, true) => abs.to_string(),
                (1, false) => mono.join("*"),
                _ => format!("{abs}*{}", mono.join("*")),
            };
            out.push_str(&format!("{sign}{body}"));
        }
        out
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (m, &c) in &o.terms {
            r.add_term(m.clone(), c);
        }
        r
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        self + &(-o)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &IntPoly) -> IntPoly {
        let mut r = IntPoly::zero(self.nvars);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &o.terms {
                r.add_term(m1.iter().zip(m2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        r
    }
}

/// A condition `pi^modulus | poly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub modulus: u32,
    pub poly: IntPoly,
}

/// Divisibility conditions on `k` variables ranging over `o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilitySystem {
    pub names: Vec<String>,
    pub conditions: Vec<Condition>,
}

impl DivisibilitySystem {
    pub fn new(names: &[&str]) -> Self {
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            conditions: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var(&self, i: usize) -> IntPoly {
        IntPoly::var(self.nvars(), i)
    }

    pub fn constant(&self, c: i64) -> IntPoly {
        IntPoly::constant(self.nvars(), c)
    }

    pub fn require(&mut self, modulus: u32, poly: IntPoly) {
        assert_eq!(poly.nvars(), self.nvars(), "variable count mismatch");
        self.conditions.push(Condition { modulus, poly });
    }

    pub fn max_modulus(&self) -> u32 {
        self.conditions.iter().map(|c| c.modulus).max().unwrap_or(0)
    }
}

impl fmt::Display for DivisibilitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conditions.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "pi^{} | {}", c.modulus, c.poly.display(&self.names))?;
        }
        Ok(())
    }
}

/// The measure of `{x in o^k : x_i = residues_i mod pi, all conditions}`,
/// computed by counting residues modulo `pi^K`.
pub fn measure_oracle(
    spec: &DvrSpec,
    sys: &DivisibilitySystem,
    residues: &[Option<u32>],
    k: u32,
) -> Result<BigRational> {
    let nv = sys.nvars();
    if residues.len() != nv {
        return domain(format!(
            "{} residue constraints for {nv} variables",
            residues.len()
        ));
    }
    let need = sys
        .max_modulus()
        .max(residues.iter().any(Option::is_some) as u32);
    if k < need {
        return Err(Error::Precision { need, got: k });
    }
    let q = spec.q() as u64;
    if let Some(&r) = residues.iter().flatten().find(|&&r| r as u64 >= q) {
        return domain(format!("residue {r} outside the residue field"));
    }
    let ring = TruncRing::new(spec, k.max(1))?;
    let choices: Vec<Vec<u64>> = residues
        .iter()
        .map(|r| match r {
            Some(r) => (0..ring.q_pow(k - 1))
                .map(|t| ring.add(*r as u64, ring.shift_up(t, 1)))
                .collect(),
            None => (0..ring.q_pow(k)).collect(),
        })
        .collect();
    let work = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    if work.is_none_or(|w| w > ORACLE_LIMIT) {
        return Err(Error::Overflow {
            guard: "oracle-tuples",
            limit: ORACLE_LIMIT,
        });
    }
    let holds = |xs: &[u64]| {
        sys.conditions
            .iter()
            .all(|c| c.modulus == 0 || ring.valuation(c.poly.eval(&ring, xs)) >= c.modulus)
    };
    let count: u64 = if nv == 0 {
        holds(&[]) as u64
    } else {
        choices[0]
            .par_iter()
            .map(|&x0| {
                let mut xs = vec![0u64; nv];
                xs[0] = x0;
                let mut idx = vec![0usize; nv];
                let mut hits = 0u64;
                loop {
                    for j in 1..nv {
                        xs[j] = choices[j][idx[j]];
                    }
                    hits += holds(&xs) as u64;
                    let mut j = 1;
                    loop {
                        if j == nv {
                            return hits;
                        }
                        idx[j] += 1;
                        if idx[j] < choices[j].len() {
                            break;
                        }
                        idx[j] = 0;
                        j += 1;
                    }
                }
            })
            .sum()
    };
    let denom = BigInt::from(q).pow(k * nv as u32);
    Ok(BigRational::new(BigInt::from(count), denom))
}

/// Input of the seven-case evaluation: residues `alpha, beta, gamma` and
/// the valuations of `u_1, ..., u_4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SLemmaInput {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub v: [u32; 4],
}

impl SLemmaInput {
    /// `pi | u3`, `u2 u4 | u3`, and `u1 u4 | u2` when `pi | u1`.
    pub fn check(&self) -> Result<()> {
        let [v1, v2, v3, v4] = self.v;
        if v3 < 1 {
            return Err(Error::Precondition("pi must divide u3".into()));
        }
        if v2 + v4 > v3 {
            return Err(Error::Precondition("u2*u4 must divide u3".into()));
        }
        if v1 >= 1 && v1 + v4 > v2 {
            return Err(Error::Precondition(
                "u1*u4 must divide u2 when pi divides u1".into(),
            ));
        }
        Ok(())
    }

    /// The divisibility system in `(a, b, c)` defining `S`.
    pub fn system(&self) -> DivisibilitySystem {
        let mut s = DivisibilitySystem::new(&["a", "b", "c"]);
        let (a, b, c) = (s.var(0), s.var(1), s.var(2));
        let sq_minus = |x: &IntPoly| &(x * x) - x;
        let [v1, v2, v3, v4] = self.v;
        s.require(v1, sq_minus(&a));
        s.require(v2, &a * &(&b - &c));
        s.require(v3, &sq_minus(&b) - &(&a * &sq_minus(&c)));
        s.require(v4, sq_minus(&c));
        s
    }

    pub fn residues(&self) -> [Option<u32>; 3] {
        [Some(self.alpha), Some(self.beta), Some(self.gamma)]
    }
}

/// Which of the seven cases applies, numbered in table order.
pub fn s_case(v: [u32; 4]) -> u8 {
    let [v1, v2, _, v4] = v;
    let unit = |x: u32| x == 0;
    let guards = [
        unit(v1) && unit(v2) && unit(v4),
        unit(v1) && unit(v2) && v4 >= 1,
        unit(v1) && v2 >= 1 && v2 <= v4,
        unit(v1) && unit(v4) && v2 >= 1,
        unit(v4) && v1 >= 1 && v1 <= v2,
        unit(v1) && v4 >= 1 && v4 < v2,
        v1 >= 1 && v4 >= 1 && v1 + v4 <= v2,
    ];
    let fired: Vec<usize> = guards
        .iter()
        .enumerate()
        .filter(|(_, &g)| g)
        .map(|(i, _)| i)
        .collect();
    assert!(fired.len() <= 1, "cases {fired:?} overlap for {v:?}");
    fired.first().map_or(0, |&i| i as u8 + 1)
}

/// `S_{alpha,beta,gamma}(u_1, u_2, u_3, u_4)` from the seven-case table.
pub fn s_closed_form(ff: &FiniteField, input: &SLemmaInput) -> Result<LaurentQ> {
    input.check()?;
    let q = ff.order();
    if [input.alpha, input.beta, input.gamma]
        .iter()
        .any(|&x| x >= q)
    {
        return domain("residues must lie in the residue field");
    }
    let (a, b, c) = (input.alpha, input.beta, input.gamma);
    let one = 1;
    let sqm = |x: u32| ff.sub(ff.mul(x, x), x);
    let chi0 = |xs: &[u32]| -> i64 { xs.iter().all(|&x| x == 0) as i64 };
    let chix = |x: u32| -> i64 { (x != 0) as i64 };
    let [v1, v2, v3, v4] = input.v.map(|x| x as i64);
    let qp = |e: i64| LaurentQ::q_pow(e);
    let k = |c: i64, e: i64| qp(e).scale(&BigInt::from(c));
    // integral of 1/|a| over {a : pi^m' a | u} with m = v(u) - m'
    let inner = |m: i64| {
        if m < 0 {
            LaurentQ::zero()
        } else {
            (&LaurentQ::one() - &qp(-1)).scale(&BigInt::from(m + 1))
        }
    };
    let pair = chi0(&[a, b, ff.sub(c, one)]) + chi0(&[a, ff.sub(b, one), c]);
    let idem = chi0(&[sqm(a), ff.sub(b, c), sqm(c)]);
    let s = match s_case(input.v) {
        1 => k(chi0(&[ff.sub(sqm(b), ff.mul(a, sqm(c)))]), -v3 - 2),
        2 => k(chi0(&[sqm(b), sqm(c)]), -v3 - v4 - 1),
        3 => &k(pair, -v2 - v3 - v4) + &k(chi0(&[ff.sub(b, c), sqm(c)]), -1 - v3 - v4),
        4 => {
            let w = chi0(&[a, sqm(b)])
                + chi0(&[ff.sub(a, one), ff.sub(b, c)])
                + chix(sqm(a)) * chi0(&[ff.sub(b, c), sqm(c)]);
            &k(w, -1 - v2 - v3) + &(&k(idem, -v2 - v3) * &inner(v2 - 2))
        }
        5 => {
            let w = chi0(&[a, sqm(b)]) + chi0(&[ff.sub(a, one), ff.sub(b, c)]);
            &k(w, -1 - v2 - v3) + &(&k(idem, -v2 - v3) * &inner(v2 - 1 - v1))
        }
        6 => {
            let mut s = &k(pair, -v2 - v3 - v4) + &k(idem, -v2 - v3);
            s += &k(chix(sqm(a)) * chi0(&[ff.sub(b, c), sqm(c)]), -1 - v2 - v3);
            &s + &(&k(idem, -v2 - v3) * &inner(v2 - 2 - v4))
        }
        7 => {
            let s = &k(pair, -v2 - v3 - v4) + &k(idem, -v2 - v3);
            &s + &(&k(idem, -v2 - v3) * &inner(v2 - 1 - v1 - v4))
        }
        _ => {
            return Err(Error::Internal(format!(
                "no case of the table matches {:?}",
                input.v
            )))
        }
    };
    Ok(s)
}

/// Oracle value of `S` at working precision `max(v)`.
pub fn s_oracle(spec: &DvrSpec, input: &SLemmaInput) -> Result<BigRational> {
    input.check()?;
    let k = *input.v.iter().max().expect("four valuations");
    measure_oracle(spec, &input.system(), &input.residues(), k)
}

/// Every hypothesis-satisfying valuation vector with entries `<= max_val`.
pub fn s_grid(max_val: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for v1 in 0..=max_val {
        for v2 in 0..=max_val {
            for v3 in 0..=max_val {
                for v4 in 0..=max_val {
                    let inp = SLemmaInput {
                        alpha: 0,
                        beta: 0,
                        gamma: 0,
                        v: [v1, v2, v3, v4],
                    };
                    if inp.check().is_ok() {
                        out.push(inp.v);
                    }
                }
            }
        }
    }
    out
}

/// One coefficient comparison of the `I = {iota}` preliminary integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrelimRow {
    pub k: u32,
    pub closed: BigRational,
    pub oracle: BigRational,
}

/// Compares the coefficients of `q^{-ks}`, `k <= k_max`, of
/// `delta (1-q^{-1}) q^{-(n-iota)iota} / (1 - q^{-(s+(n-iota)iota)})` with
/// oracle measures of the shells `v(x) = k`.
pub fn prelim_integral_check(
    spec: &DvrSpec,
    n: u32,
    iota: u32,
    e_prime: &[Vec<u32>],
    k_max: u32,
) -> Result<Vec<PrelimRow>> {
    if iota == 0 || iota >= n {
        return domain("iota must lie in [1, n-1]");
    }
    let (rows, cols) = ((n - iota) as usize, iota as usize);
    if e_prime.len() != rows || e_prime.iter().any(|r| r.len() != cols) {
        return domain(format!("E' must be {rows} x {cols}"));
    }
    let q = spec.q();
    let d = (n - iota) * iota;
    let delta = is_very_elemental(e_prime);
    let mut names = vec!["x".to_string()];
    for i in 0..rows {
        for j in 0..cols {
            names.push(format!("b{}{}", i + 1, j + 1));
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let res: Vec<Option<u32>> = std::iter::once(None)
        .chain(e_prime.iter().flatten().map(|&x| Some(x)))
        .collect();
    let qr = |e: i64| -> BigRational {
        let b = BigRational::from_integer(BigInt::from(q));
        if e >= 0 {
            num_traits::pow(b, e as usize)
        } else {
            num_traits::pow(b, (-e) as usize).recip()
        }
    };
    let mut out = Vec::new();
    for k in 0..=k_max {
        let system = |xmod: u32| {
            let mut s = DivisibilitySystem::new(&name_refs);
            s.require(xmod, s.var(0));
            let nv = s.nvars();
            let entry = |i: usize, j: usize| IntPoly::var(nv, 1 + i * cols + j);
            let one = IntPoly::constant(nv, 1);
            for i in 0..rows {
                for j in 0..cols {
                    let b = entry(i, j);
                    s.require(k + 1, &b * &(&b - &one));
                    for i2 in i + 1..rows {
                        s.require(k + 1, &b * &entry(i2, j));
                    }
                }
            }
            s
        };
        let inner = measure_oracle(spec, &system(k), &res, k + 1)?
            - measure_oracle(spec, &system(k + 1), &res, k + 1)?;
        let oracle = inner * qr(k as i64);
        let closed = if delta {
            (BigRational::one() - qr(-1)) * qr(-((d * (k + 1)) as i64))
        } else {
            BigRational::zero()
        };
        out.push(PrelimRow { k, closed, oracle });
    }
    Ok(out)
}

/// Named families of polynomials in the below-diagonal entries of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSystems {
    pub names: Vec<String>,
    pub families: Vec<(String, Vec<IntPoly>)>,
}

fn entry_names(shape: &FlagShape) -> (Vec<String>, BTreeMap<(usize, usize), usize>) {
    let pos = shape.below_positions();
    let names = pos
        .iter()
        .map(|(i, j)| format!("B{}{}", i + 1, j + 1))
        .collect();
    let index = pos.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    (names, index)
}

/// The polynomial families whose divisibility defines closure: one family
/// for `#I = 1`, the four families `R_1..R_4` for `#I = 2`.
pub fn r_systems(n: u32, iset: &[u32]) -> Result<RSystems> {
    let shape = FlagShape::new(n, iset)?;
    let (names, index) = entry_names(&shape);
    let nv = names.len();
    let x = |i: usize, j: usize| IntPoly::var(nv, index[&(i - 1, j - 1)]);
    let sqm = |p: &IntPoly| &(p * p) - p;
    let n = n as usize;
    let families = match *iset {
        [iota] => {
            let iota = iota as usize;
            let mut fam = Vec::new();
            for i in iota + 1..=n {
                for j in 1..=iota {
                    fam.push(sqm(&x(i, j)));
                }
            }
            for i in iota + 1..=n {
                for i2 in i + 1..=n {
                    for j in 1..=iota {
                        fam.push(&x(i, j) * &x(i2, j));
                    }
                }
            }
            vec![("R".to_string(), fam)]
        }
        [i1, i2] => {
            let (i1, i2) = (i1 as usize, i2 as usize);
            let mut r = vec![Vec::new(); 4];
            for j in 1..=i1 {
                for i in i1 + 1..=i2 {
                    for ip in i + 1..=i2 {
                        r[0].push(&x(i, j) * &x(ip, j));
                    }
                    r[0].push(sqm(&x(i, j)));
                }
            }
            for j in 1..=i1 {
                for i in i1 + 1..=i2 {
                    for ip in i2 + 1..=n {
                        r[1].push(&x(i, j) * &(&x(ip, j) - &x(ip, i)));
                    }
                }
            }
            for j in 1..=i1 {
                for i in i2 + 1..=n {
                    for ip in i + 1..=n {
                        let mut p = &x(i, j) * &x(ip, j);
                        for k in i1 + 1..=i2 {
                            p = &p - &(&x(k, j) * &(&x(i, k) * &x(ip, k)));
                        }
                        r[2].push(p);
                    }
                    let mut p = sqm(&x(i, j));
                    for k in i1 + 1..=i2 {
                        p = &p - &(&x(k, j) * &sqm(&x(i, k)));
                    }
                    r[2].push(p);
                }
            }
            for j in i1 + 1..=i2 {
                for i in i2 + 1..=n {
                    for ip in i + 1..=n {
                        r[3].push(&x(i, j) * &x(ip, j));
                    }
                    r[3].push(sqm(&x(i, j)));
                }
            }
            r.into_iter()
                .enumerate()
                .map(|(k, f)| (format!("R{}", k + 1), f))
                .collect()
        }
        _ => return domain("only #I in {1, 2} is supported"),
    };
    Ok(RSystems { names, families })
}

/// Polynomials keyed by the 1-based index triple `(i, i', j)`.
pub type RPolys = BTreeMap<(usize, usize, usize), IntPoly>;

/// Distinct polynomials of one family, each as its sorted term list.
pub type PolySet = BTreeSet<Vec<(Vec<u32>, i64)>>;

/// `R_{i,i',j}(B) = sum_{k <= i} B_{ik} B_{i'k} (B^{-1})_{kj}` for a generic
/// block unitriangular `B`, indexed 1-based.
pub fn r_polys(shape: &FlagShape) -> (Vec<String>, RPolys) {
    let (names, index) = entry_names(shape);
    let nv = names.len();
    let n = shape.n();
    let b: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match index.get(&(i, j)) {
                    Some(&k) => IntPoly::var(nv, k),
                    None => IntPoly::constant(nv, (i == j) as i64),
                })
                .collect()
        })
        .collect();
    // (I + N)^{-1} = sum_k (-N)^k for nilpotent N
    let neg_n: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { IntPoly::zero(nv) } else { -&b[i][j] })
                .collect()
        })
        .collect();
    let matmul = |x: &[Vec<IntPoly>], y: &[Vec<IntPoly>]| -> Vec<Vec<IntPoly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(IntPoly::zero(nv), |acc, k| &acc + &(&x[i][k] * &y[k][j])))
                    .collect()
            })
            .collect()
    };
    let ident: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| IntPoly::constant(nv, (i == j) as i64))
                .collect()
        })
        .collect();
    let mut inv = ident.clone();
    let mut power = ident;
    for _ in 1..n {
        power = matmul(&power, &neg_n);
        for i in 0..n {
            for j in 0..n {
                inv[i][j] = &inv[i][j] + &power[i][j];
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for ip in i..=n {
            for j in 1..i {
                let mut p = IntPoly::zero(nv);
                for k in 1..=i {
                    p = &p + &(&(&b[i - 1][k - 1] * &b[ip - 1][k - 1]) * &inv[k - 1][j - 1]);
                }
                out.insert((i, ip, j), p);
            }
        }
    }
    (names, out)
}

/// `h_n(I, r0, r)` as `q^{sum r_iota iota (n - iota)} sum_E tau_E mu(E)`,
/// with `mu(E)` the oracle measure of the closure conditions on `B` over the
/// residue class `E`.
pub fn h_via_integral(spec: &DvrSpec, c: &Cotype) -> Result<BigInt> {
    if c.iset.is_empty() {
        return domain("I must be non-empty");
    }
    let shape = FlagShape::new(c.n, &c.iset)?;
    let (names, polys) = r_polys(&shape);
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let r_of = |pred: &dyn Fn(u32) -> bool| -> i64 {
        c.iset
            .iter()
            .zip(&c.r)
            .filter(|(&i, _)| pred(i))
            .map(|(_, &r)| r as i64)
            .sum()
    };
    let mut sys = DivisibilitySystem::new(&name_refs);
    for (&(i, ip, j), p) in &polys {
        let (i, ip, j) = (i as u32, ip as u32, j as u32);
        let m = r_of(&|t| j <= t && t < i) - c.r0 as i64 - r_of(&|t| t >= ip);
        if m > 0 && !p.is_zero() {
            sys.require(m as u32, p.clone());
        }
    }
    let k = sys.max_modulus().max(1);
    let ff = spec.residue_field()?;
    let mut total = BigRational::zero();
    for e in ResidueMatrix::all(&shape, &ff) {
        let t = tau(&e);
        if t == 0 {
            continue;
        }
        let res: Vec<Option<u32>> = shape
            .below_positions()
            .iter()
            .map(|&(i, j)| Some(e.get(i, j)))
            .collect();
        total += measure_oracle(spec, &sys, &res, k)? * BigRational::from_integer(BigInt::from(t));
    }
    let scale: u32 = c
        .iset
        .iter()
        .zip(&c.r)
        .map(|(&i, &r)| r * i * (c.n - i))
        .sum();
    total *= BigRational::from_integer(BigInt::from(spec.q()).pow(scale));
    if !total.is_integer() {
        return Err(Error::Internal(format!("non-integral count {total}")));
    }
    Ok(total.to_integer())
}

/// The distinct nonzero values of `R_{i,i',j}` over the index range of each
/// family, for comparison with [`r_systems`].
pub fn r_families_from_definition(n: u32, iset: &[u32]) -> Result<Vec<PolySet>> {
    let shape = FlagShape::new(n, iset)?;
    let (_, polys) = r_polys(&shape);
    let key = |p: &IntPoly| p.terms().map(|(m, c)| (m.clone(), c)).collect::<Vec<_>>();
    let n = n as usize;
    type InRange = Box<dyn Fn(usize, usize, usize) -> bool>;
    let ranges: Vec<InRange> = match *iset {
        [iota] => {
            let t = iota as usize;
            vec![Box::new(move |i, _ip, j| j <= t && t < i)]
        }
        [i1, i2] => {
            let (a, b) = (i1 as usize, i2 as usize);
            vec![
                Box::new(move |i, ip, j| j <= a && a < i && ip <= b),
                Box::new(move |i, ip, j| j <= a && a < i && i <= b && b < ip),
                Box::new(move |i, _ip, j| j <= a && b < i),
                Box::new(move |i, _ip, j| a < j && j <= b && b < i),
            ]
        }
        _ => return domain("only #I in {1, 2} is supported"),
    };
    Ok(ranges
        .iter()
        .map(|inr| {
            polys
                .iter()
                .filter(|(&(i, ip, j), p)| i <= n && inr(i, ip, j) && !p.is_zero())
                .map(|(_, p)| key(p))
                .collect()
        })
        .collect())
}
