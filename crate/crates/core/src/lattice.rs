//! Finite-index submodules of `o^n` in canonical lower-triangular Hermite
//! form, their closure predicates and cotypes, and two counting engines.
//!
//! Internally a lattice `L` with `pi^K o^n <= L` is handled through its image
//! in `(o/pi^K)^n`; every question asked here (membership, closure, elementary
//! divisors) is decided exactly there. `K` is always at least the largest
//! elementary divisor exponent, which is bounded by the index exponent.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::flags::{tau_set, FlagShape, ResidueMatrix};
use crate::tdvr::{DvrElem, DvrSpec, TruncRing};

/// Cotype `(I, r0, r)`: elementary divisor exponents
/// `alpha_k = r0 + sum_{iota in I, iota >= k} r_iota`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cotype {
    pub n: u32,
    pub iset: Vec<u32>,
    pub r0: u32,
    pub r: Vec<u32>,
}

impl Cotype {
    pub fn new(n: u32, iset: Vec<u32>, r0: u32, r: Vec<u32>) -> Result<Self> {
        crate::exact::check_flag_set(n, &iset)?;
        if r.len() != iset.len() || r.contains(&0) {
            return domain("r must assign a positive integer to each element of I");
        }
        Ok(Self { n, iset, r0, r })
    }

    /// From exponents sorted descending.
    pub fn from_exponents(alpha: &[u32]) -> Result<Self> {
        if alpha.is_empty() || alpha.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("{alpha:?} is not a non-empty descending sequence"));
        }
        let n = alpha.len();
        let mut iset = Vec::new();
        let mut r = Vec::new();
        for i in 0..n - 1 {
            if alpha[i] > alpha[i + 1] {
                iset.push(i as u32 + 1);
                r.push(alpha[i] - alpha[i + 1]);
            }
        }
        Ok(Self {
            n: n as u32,
            iset,
            r0: alpha[n - 1],
            r,
        })
    }

    /// `(alpha_1 >= ... >= alpha_n)`.
    pub fn exponents(&self) -> Vec<u32> {
        (1..=self.n)
            .map(|k| {
                self.r0
                    + self
                        .iset
                        .iter()
                        .zip(&self.r)
                        .filter(|(&i, _)| i >= k)
                        .map(|(_, &r)| r)
                        .sum::<u32>()
            })
            .collect()
    }

    /// `n r0 + sum r_iota iota`.
    pub fn index_exponent(&self) -> u32 {
        self.n * self.r0
            + self
                .iset
                .iter()
                .zip(&self.r)
                .map(|(i, r)| i * r)
                .sum::<u32>()
    }

    pub fn to_json(&self) -> Value {
        json!({"I": self.iset, "r0": self.r0, "r": self.r})
    }

    pub fn from_json(n: u32, v: &Value) -> Result<Self> {
        let list = |k: &str| -> Result<Vec<u32>> {
            v.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("cotype needs array {k:?}")))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Parse("cotype entries must be integers".into()))
                })
                .collect()
        };
        let r0 = v
            .get("r0")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("cotype needs integer \"r0\"".into()))?
            as u32;
        Self::new(n, list("I")?, r0, list("r")?)
    }
}

impl Ord for Cotype {
    /// By index exponent, then by exponent vector.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.index_exponent(), self.exponents()).cmp(&(
            other.n,
            other.index_exponent(),
            other.exponents(),
        ))
    }
}

impl PartialOrd for Cotype {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(I={:?}, r0={}, r={:?})", self.iset, self.r0, self.r)
    }
}

type Row = Vec<u64>;

/// `v in span(rows[..top])`, assuming `v` vanishes from column `top` on.
/// Destroys `v`.
fn member(ring: &TruncRing, a: &[u32], rows: &[Row], v: &mut [u64], top: usize) -> bool {
    for i in (0..top).rev() {
        let x = v[i];
        if x == 0 {
            continue;
        }
        if ring.valuation(x) < a[i] {
            return false;
        }
        let c = ring.shift_down(x, a[i]);
        for j in 0..=i {
            v[j] = ring.sub(v[j], ring.mul(c, rows[i][j]));
        }
    }
    true
}

/// Products of row `i` with rows `0..=i` lie in the span of rows `0..=i`.
fn closed_at(ring: &TruncRing, a: &[u32], rows: &[Row], i: usize) -> bool {
    (0..=i).all(|k| {
        let mut v: Row = rows[k]
            .iter()
            .zip(&rows[i])
            .map(|(&x, &y)| ring.mul(x, y))
            .collect();
        member(ring, a, rows, &mut v, k + 1)
    })
}

/// Reduces `v` against rows `0..below` so entry `j` lies below `pi^{a_j}`.
fn reduce_row(ring: &TruncRing, a: &[u32], rows: &[Row], v: &mut [u64], below: usize) {
    for j in (0..below).rev() {
        let c = ring.shift_down(v[j], a[j]);
        if c != 0 {
            for m in 0..=j {
                v[m] = ring.sub(v[m], ring.mul(c, rows[j][m]));
            }
        }
    }
}

/// Canonical form of the lattice spanned by `gens` and `pi^K o^n`.
fn hnf_codes(ring: &TruncRing, n: usize, mut pool: Vec<Row>) -> (Vec<u32>, Vec<Row>) {
    let k = ring.precision();
    let mut a = vec![k; n];
    let mut rows = vec![vec![0u64; n]; n];
    for j in (0..n).rev() {
        let best = pool
            .iter()
            .enumerate()
            .map(|(idx, r)| (ring.valuation(r[j]), idx))
            .min();
        match best {
            Some((v, idx)) if v < k => {
                let mut p = pool.swap_remove(idx);
                let inv = ring.inv_unit(ring.shift_down(p[j], v));
                for x in p.iter_mut() {
                    *x = ring.mul(*x, inv);
                }
                for r in pool.iter_mut() {
                    let c = ring.shift_down(r[j], v);
                    if c != 0 {
                        for m in 0..=j {
                            r[m] = ring.sub(r[m], ring.mul(c, p[m]));
                        }
                    }
                }
                // pi^{K-v} p - pi^K e_j lies in the lattice and vanishes at j
                let tail: Row = p
                    .iter()
                    .take(j)
                    .map(|&x| ring.shift_up(x, k - v))
                    .chain(std::iter::repeat_n(0, n - j))
                    .collect();
                if tail.iter().any(|&x| x != 0) {
                    pool.push(tail);
                }
                a[j] = v;
                rows[j] = p;
            }
            _ => {
                a[j] = k;
                rows[j] = vec![0; n];
            }
        }
    }
    for i in 0..n {
        let (done, rest) = rows.split_at_mut(i);
        reduce_row(ring, &a, done, &mut rest[0], i);
    }
    (a, rows)
}

/// Elementary divisor exponents, descending.
fn snf_exponents(ring: &TruncRing, mut m: Vec<Row>) -> Vec<u32> {
    let k = ring.precision();
    let n = m.len();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..m.first().map_or(0, Vec::len)).collect();
    let mut out = Vec::with_capacity(n);
    while !rows.is_empty() && !cols.is_empty() {
        let mut best = (k, 0, 0);
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                let v = ring.valuation(m[r][c]);
                if v < best.0 {
                    best = (v, ri, ci);
                }
            }
        }
        let (v, ri, ci) = best;
        if v == k {
            break;
        }
        let (r, c) = (rows[ri], cols[ci]);
        let inv = ring.inv_unit(ring.shift_down(m[r][c], v));
        let pivot: Row = m[r].iter().map(|&x| ring.mul(x, inv)).collect();
        for &r2 in &rows {
            if r2 != r {
                let cf = ring.shift_down(m[r2][c], v);
                if cf != 0 {
                    for &cc in &cols {
                        m[r2][cc] = ring.sub(m[r2][cc], ring.mul(cf, pivot[cc]));
                    }
                }
            }
        }
        out.push(v);
        rows.swap_remove(ri);
        cols.swap_remove(ci);
    }
    out.resize(n, k);
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// A finite-index submodule of `o^n` in canonical Hermite form: row `i` is
/// `(x_{i,1}, ..., x_{i,i-1}, pi^{a_i}, 0, ..., 0)` with each `x_{i,j}`
/// reduced modulo `pi^{a_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    spec: DvrSpec,
    a: Vec<u32>,
    rows: Vec<Vec<DvrElem>>,
}

impl LatticeBasis {
    /// Validates that `rows` is already in canonical form.
    pub fn new(spec: &DvrSpec, rows: Vec<Vec<DvrElem>>) -> Result<Self> {
        let n = rows.len();
        let mut a = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return domain("basis must be square");
            }
            if row[i + 1..].iter().any(|x| !x.is_zero()) {
                return domain("basis must be lower triangular");
            }
            let Some(v) = spec.valuation(&row[i]) else {
                return domain("basis must have full rank");
            };
            if row[i] != spec.pi_pow(v) {
                return domain(format!("diagonal entry {} is not a power of pi", row[i]));
            }
            a.push(v);
        }
        for (i, row) in rows.iter().enumerate() {
            for j in 0..i {
                if spec.reduce_mod(&row[j], a[j]) != row[j] {
                    return domain(format!("entry ({}, {}) is not reduced", i + 1, j + 1));
                }
            }
        }
        Ok(Self {
            spec: spec.clone(),
            a,
            rows,
        })
    }

    /// The lattice generated by `gens` together with `pi^pad o^n`.
    pub fn from_generators(
        spec: &DvrSpec,
        n: usize,
        gens: &[Vec<DvrElem>],
        pad: u32,
    ) -> Result<Self> {
        if gens.iter().any(|g| g.len() != n) {
            return domain(format!("generators must have length {n}"));
        }
        if pad == 0 {
            return Ok(Self::from_codes(
                spec,
                &vec![0; n],
                &vec![vec![0; n]; n],
                None,
            ));
        }
        let ring = TruncRing::new(spec, pad)?;
        let pool = gens
            .iter()
            .map(|g| g.iter().map(|x| ring.encode(x)).collect())
            .collect();
        let (a, rows) = hnf_codes(&ring, n, pool);
        Ok(Self::from_codes(spec, &a, &rows, Some(&ring)))
    }

    /// The diagonal lattice `pi^{r0} D(I, r) o^n`.
    pub fn from_cotype(spec: &DvrSpec, c: &Cotype) -> Self {
        let alpha = c.exponents();
        let n = alpha.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            spec.pi_pow(alpha[i])
                        } else {
                            spec.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            spec: spec.clone(),
            a: alpha,
            rows,
        }
    }

    fn from_codes(spec: &DvrSpec, a: &[u32], rows: &[Row], ring: Option<&TruncRing>) -> Self {
        let n = a.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match j.cmp(&i) {
                        Ordering::Less => {
                            ring.map_or_else(|| spec.zero(), |r| r.decode(rows[i][j]))
                        }
                        Ordering::Equal => spec.pi_pow(a[i]),
                        Ordering::Greater => spec.zero(),
                    })
                    .collect()
            })
            .collect();
        Self {
            spec: spec.clone(),
            a: a.to_vec(),
            rows,
        }
    }

    pub fn spec(&self) -> &DvrSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Diagonal exponents.
    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn rows(&self) -> &[Vec<DvrElem>] {
        &self.rows
    }

    /// The index is `q^{index_exponent}`.
    pub fn index_exponent(&self) -> u32 {
        self.a.iter().sum()
    }

    fn ring(&self) -> TruncRing {
        TruncRing::new(&self.spec, self.index_exponent().max(1)).expect("index is small")
    }

    fn codes(&self, ring: &TruncRing) -> Vec<Row> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| ring.encode(x)).collect())
            .collect()
    }

    pub fn contains(&self, v: &[DvrElem]) -> bool {
        assert_eq!(v.len(), self.n(), "vector length mismatch");
        let ring = self.ring();
        let rows = self.codes(&ring);
        let mut v: Row = v.iter().map(|x| ring.encode(x)).collect();
        member(&ring, &self.a, &rows, &mut v, self.n())
    }

    pub fn is_mult_closed(&self) -> bool {
        let ring = self.ring();
        let rows = self.codes(&ring);
        (0..self.n()).all(|i| closed_at(&ring, &self.a, &rows, i))
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&vec![self.spec.one(); self.n()])
    }

    /// Every basis entry has positive valuation.
    pub fn inside_pi(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|x| self.spec.valuation(x).is_none_or(|v| v >= 1))
    }

    /// Every element has pairwise congruent coordinates modulo `pi`.
    pub fn coords_congruent(&self) -> bool {
        self.rows.iter().all(|row| {
            let r0 = self.spec.residue(&row[0]);
            row.iter().all(|x| self.spec.residue(x) == r0)
        })
    }

    pub fn cotype(&self) -> Cotype {
        let ring = self.ring();
        let e = snf_exponents(&ring, self.codes(&ring));
        Cotype::from_exponents(&e).expect("descending")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.spec.to_string(),
            "a": self.a,
            "rows": self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Membership of `v` in the row span of `l`.
pub fn membership(v: &[DvrElem], l: &LatticeBasis) -> bool {
    l.contains(v)
}

pub fn is_mult_closed(l: &LatticeBasis) -> bool {
    l.is_mult_closed()
}

pub fn cotype_of(l: &LatticeBasis) -> Cotype {
    l.cotype()
}

/// Filters applied during enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Predicates {
    pub mult_closed: bool,
    pub contains_identity: bool,
    /// Every basis entry divisible by `pi`.
    pub inside_pi: bool,
    /// All coordinates of every element congruent modulo `pi`.
    pub coords_congruent: bool,
}

impl Predicates {
    pub const CLOSED: Self = Self {
        mult_closed: true,
        contains_identity: false,
        inside_pi: false,
        coords_congruent: false,
    };

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.mult_closed {
            v.push("mult_closed");
        }
        if self.contains_identity {
            v.push("contains_identity");
        }
        if self.inside_pi {
            v.push("inside_pi");
        }
        if self.coords_congruent {
            v.push("coords_congruent");
        }
        v
    }
}

/// Counts of lattices by cotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub ring: String,
    pub n: u32,
    pub predicates: Predicates,
    pub entries: BTreeMap<Cotype, u64>,
}

impl CountTable {
    pub fn get(&self, c: &Cotype) -> u64 {
        self.entries.get(c).copied().unwrap_or(0)
    }

    /// Counts per index exponent `0..=e_max`.
    pub fn by_index(&self, e_max: u32) -> Vec<u64> {
        let mut out = vec![0; e_max as usize + 1];
        for (c, k) in &self.entries {
            if let Some(slot) = out.get_mut(c.index_exponent() as usize) {
                *slot += k;
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring,
            "n": self.n,
            "predicates": self.predicates.names(),
            "entries": self.entries.iter().map(|(c, k)| json!({
                "cotype": c.to_json(),
                "e": c.index_exponent(),
                "count": k.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("count table: {m}"));
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing n"))? as u32;
        let ring = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing ring"))?
            .to_string();
        let names: Vec<&str> = v
            .get("predicates")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_str).collect())
            .unwrap_or_default();
        let predicates = Predicates {
            mult_closed: names.contains(&"mult_closed"),
            contains_identity: names.contains(&"contains_identity"),
            inside_pi: names.contains(&"inside_pi"),
            coords_congruent: names.contains(&"coords_congruent"),
        };
        let mut entries = BTreeMap::new();
        for e in v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing entries"))?
        {
            let c = Cotype::from_json(n, e.get("cotype").ok_or_else(|| bad("missing cotype"))?)?;
            let k: u64 = e
                .get("count")
                .and_then(Value::as_str)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad("count must be a decimal string"))?;
            entries.insert(c, k);
        }
        Ok(Self {
            ring,
            n,
            predicates,
            entries,
        })
    }
}

struct WorkGuard<'a> {
    shared: &'a AtomicU64,
    local: u64,
    limit: u64,
}

impl WorkGuard<'_> {
    const BATCH: u64 = 1 << 12;

    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        if self.local == Self::BATCH {
            self.flush()?;
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<()> {
        let total = self.shared.fetch_add(self.local, AtomicOrdering::Relaxed) + self.local;
        self.local = 0;
        if total > self.limit {
            return Err(Error::Overflow {
                guard: "max-work",
                limit: self.limit,
            });
        }
        Ok(())
    }
}

struct Search<'a> {
    ring: &'a TruncRing,
    n: usize,
    a: &'a [u32],
    preds: Predicates,
    rows: Vec<Row>,
    tally: BTreeMap<Cotype, u64>,
    guard: WorkGuard<'a>,
}

impl Search<'_> {
    /// Residue every coordinate of row `i` must have when coordinates are
    /// congruent: the residue of the diagonal, and `0` if the row has
    /// trailing zeros.
    fn row_residue(&self, i: usize) -> Option<u32> {
        let diag = (self.a[i] == 0) as u32;
        if i + 1 < self.n && diag != 0 {
            None
        } else {
            Some(diag)
        }
    }

    fn candidates(&self, j: usize, residue: Option<u32>) -> Vec<u64> {
        let hi = self.ring.q_pow(self.a[j]);
        (0..hi)
            .filter(|&x| !self.preds.inside_pi || self.ring.residue(x) == 0)
            .filter(|&x| residue.is_none_or(|r| self.ring.residue(x) == r))
            .collect()
    }

    fn run(&mut self) -> Result<()> {
        self.rec(0)?;
        self.guard.flush()
    }

    fn rec(&mut self, i: usize) -> Result<()> {
        let last_free = if self.preds.contains_identity {
            self.n - 1
        } else {
            self.n
        };
        if i == last_free {
            return self.finish();
        }
        let residue = if self.preds.coords_congruent {
            match self.row_residue(i) {
                Some(r) => Some(r),
                None => return Ok(()),
            }
        } else {
            None
        };
        let lists: Vec<Vec<u64>> = (0..i).map(|j| self.candidates(j, residue)).collect();
        if lists.iter().any(Vec::is_empty) {
            return Ok(());
        }
        let mut idx = vec![0usize; i];
        let mut row = vec![0u64; self.n];
        row[i] = self.ring.shift_up(1, self.a[i]);
        loop {
            for j in 0..i {
                row[j] = lists[j][idx[j]];
            }
            self.guard.tick()?;
            self.rows.push(row.clone());
            if !self.preds.mult_closed || closed_at(self.ring, self.a, &self.rows, i) {
                self.rec(i + 1)?;
            }
            self.rows.pop();
            // odometer
            let mut j = 0;
            loop {
                if j == i {
                    return Ok(());
                }
                idx[j] += 1;
                if idx[j] < lists[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        let mut pushed = false;
        if self.preds.contains_identity {
            let n = self.n;
            let mut v = vec![self.ring.from_int(1); n];
            reduce_row(self.ring, self.a, &self.rows, &mut v, n - 1);
            if self.preds.coords_congruent && v.iter().any(|&x| self.ring.residue(x) != 1) {
                return Ok(());
            }
            self.rows.push(v);
            pushed = true;
            if self.preds.mult_closed && !closed_at(self.ring, self.a, &self.rows, n - 1) {
                self.rows.pop();
                return Ok(());
            }
        }
        let e = snf_exponents(self.ring, self.rows.clone());
        let c = Cotype::from_exponents(&e).expect("descending");
        debug_assert_eq!(c.index_exponent(), self.a.iter().sum::<u32>());
        *self.tally.entry(c).or_insert(0) += 1;
        if pushed {
            self.rows.pop();
        }
        Ok(())
    }
}

fn diagonals(n: usize, e_max: u32, preds: Predicates) -> Vec<Vec<u32>> {
    fn go(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, preds: Predicates) {
        let i = cur.len();
        if i == n {
            out.push(cur.clone());
            return;
        }
        let lo = if preds.inside_pi { 1 } else { 0 };
        let hi = if preds.contains_identity && i == n - 1 {
            0
        } else {
            left
        };
        for a in lo..=hi {
            if a > left {
                break;
            }
            cur.push(a);
            go(n, left - a, cur, out, preds);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, e_max, &mut Vec::new(), &mut out, preds);
    out
}

/// Exhaustive enumeration of canonical forms with index exponent at most
/// `e_max`, tallied by cotype. Parallel over diagonal exponent vectors.
pub fn hnf_enumerate(
    spec: &DvrSpec,
    n: u32,
    e_max: u32,
    preds: Predicates,
    max_work: u64,
) -> Result<CountTable> {
    if n == 0 {
        return domain("n must be positive");
    }
    let n = n as usize;
    let ring = TruncRing::new(spec, e_max.max(1))?;
    let shared = AtomicU64::new(0);
    let diags = diagonals(n, e_max, preds);
    let parts: Vec<BTreeMap<Cotype, u64>> = diags
        .par_iter()
        .map(|a| {
            let mut s = Search {
                ring: &ring,
                n,
                a,
                preds,
                rows: Vec::with_capacity(n),
                tally: BTreeMap::new(),
                guard: WorkGuard {
                    shared: &shared,
                    local: 0,
                    limit: max_work,
                },
            };
            s.run()?;
            Ok(s.tally)
        })
        .collect::<Result<_>>()?;
    let mut entries = BTreeMap::new();
    for part in parts {
        for (c, k) in part {
            *entries.entry(c).or_insert(0) += k;
        }
    }
    Ok(CountTable {
        ring: spec.to_string(),
        n: n as u32,
        predicates: preds,
        entries,
    })
}

/// Outcome of enumerating one cotype through the flag parametrization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamReport {
    /// Distinct multiplicatively closed lattices.
    pub count: u64,
    /// Distinct lattices of any kind.
    pub distinct: u64,
    /// Generator matrices formed.
    pub generated: u64,
    /// Observed hit counts of a lattice within one `(E, sigma)` cell.
    pub multiplicities: BTreeSet<u64>,
    /// No lattice arose from two different cells.
    pub disjoint: bool,
    /// Lattices whose cotype differs from the requested one.
    pub cotype_mismatches: u64,
}

impl ParamReport {
    pub fn uniform(&self) -> bool {
        self.multiplicities.len() <= 1
    }
}

/// Canonical form `(a, rows)` of a lattice.
type Key = (Vec<u32>, Vec<Row>);

/// Counts closed lattices of cotype `c` by forming `pi^{r0} D(I,r) B sigma`
/// over all `E in L_I(F_q)`, `sigma in T_{I,E}` and block lifts `B` of `E`,
/// deduplicating canonical forms.
pub fn paper_enumerate(spec: &DvrSpec, c: &Cotype, max_work: u64) -> Result<ParamReport> {
    if c.iset.is_empty() {
        return domain("the parametrization needs a non-empty I");
    }
    let n = c.n as usize;
    let alpha = c.exponents();
    let ring = TruncRing::new(spec, alpha[0].max(1))?;
    let ff = spec.residue_field()?;
    let shape = FlagShape::new(c.n, &c.iset)?;
    let l = c.iset.len();
    // row scaling exponent of each block
    let d: Vec<u32> = (0..=l)
        .map(|kb| c.r0 + c.r[kb.min(l)..].iter().sum::<u32>())
        .collect();
    let pos = shape.below_positions();
    let rho: Vec<u32> = pos
        .iter()
        .map(|&(r, col)| {
            let (kb, jb) = (shape.block_of(r), shape.block_of(col));
            c.r[jb..kb].iter().sum()
        })
        .collect();
    let lifts_per: u64 = rho.iter().map(|&p| ring.q_pow(p - 1)).product();
    let es: Vec<ResidueMatrix> = ResidueMatrix::all(&shape, &ff).collect();
    let cells: u64 = es.iter().map(|e| tau_set(e).len() as u64).sum();
    if cells.saturating_mul(lifts_per) > max_work {
        return Err(Error::Overflow {
            guard: "max-work",
            limit: max_work,
        });
    }
    let per_e: Vec<Vec<HashMap<Key, u64>>> = es
        .par_iter()
        .map(|e| {
            tau_set(e)
                .into_iter()
                .map(|sigma| {
                    let mut hits = HashMap::new();
                    for mut idx in 0..lifts_per {
                        let mut b = vec![vec![0u64; n]; n];
                        for (i, row) in b.iter_mut().enumerate() {
                            row[i] = 1;
                        }
                        for (&(r, col), &p) in pos.iter().zip(&rho) {
                            let m = ring.q_pow(p - 1);
                            let t = idx % m;
                            idx /= m;
                            b[r][col] = ring.add(e.get(r, col) as u64, ring.shift_up(t, 1));
                        }
                        let gens: Vec<Row> = (0..n)
                            .map(|i| {
                                let s = ring.shift_up(1, d[shape.block_of(i)]);
                                sigma.iter().map(|&sj| ring.mul(s, b[i][sj])).collect()
                            })
                            .collect();
                        let key = hnf_codes(&ring, n, gens);
                        *hits.entry(key).or_insert(0) += 1;
                    }
                    hits
                })
                .collect()
        })
        .collect();
    let mut owner: HashMap<(Vec<u32>, Vec<Row>), usize> = HashMap::new();
    let mut report = ParamReport {
        count: 0,
        distinct: 0,
        generated: 0,
        multiplicities: BTreeSet::new(),
        disjoint: true,
        cotype_mismatches: 0,
    };
    for (cell, hits) in per_e.into_iter().flatten().enumerate() {
        for (key, k) in hits {
            report.generated += k;
            report.multiplicities.insert(k);
            if let Some(&prev) = owner.get(&key) {
                if prev != cell {
                    report.disjoint = false;
                }
                continue;
            }
            let (a, rows) = &key;
            report.distinct += 1;
            let e = snf_exponents(&ring, rows.clone());
            if Cotype::from_exponents(&e).ok().as_ref() != Some(c) {
                report.cotype_mismatches += 1;
            }
            if (0..n).all(|i| closed_at(&ring, a, rows, i)) {
                report.count += 1;
            }
            owner.insert(key, cell);
        }
    }
    Ok(report)
}

/// Per-index comparison of the dimension-shift correspondences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    /// `(e, unital in o^n, closed in o^{n-1}, irreducible in o^n, closed inside pi o^{n-1})`.
    pub rows: Vec<(u32, u64, u64, u64, u64)>,
}

impl CorrespondenceReport {
    pub fn ok(&self) -> bool {
        self.first_mismatch().is_none()
    }

    pub fn first_mismatch(&self) -> Option<u32> {
        self.rows
            .iter()
            .find(|r| r.1 != r.2 || r.3 != r.4)
            .map(|r| r.0)
    }
}

/// Per-index counts for the given predicates.
pub fn index_counts(
    spec: &DvrSpec,
    n: u32,
    e_max: u32,
    preds: Predicates,
    max_work: u64,
) -> Result<Vec<u64>> {
    Ok(hnf_enumerate(spec, n, e_max, preds, max_work)?.by_index(e_max))
}

/// Subrings of `o^n` containing the identity, per index exponent.
pub fn unital_counts(
    spec: &DvrSpec,
    n: u32,
    e_max: u32,
    irreducible: bool,
    max_work: u64,
) -> Result<Vec<u64>> {
    let preds = Predicates {
        mult_closed: true,
        contains_identity: true,
        inside_pi: false,
        coords_congruent: irreducible,
    };
    index_counts(spec, n, e_max, preds, max_work)
}

/// Checks, per index up to `e_max`, that unital subrings of `o^n` match
/// subrings of `o^{n-1}`, and irreducible unital subrings of `o^n` match
/// subrings of `o^{n-1}` inside `pi o^{n-1}`.
pub fn f_g_correspondence_check(
    spec: &DvrSpec,
    n: u32,
    e_max: u32,
    max_work: u64,
) -> Result<CorrespondenceReport> {
    if n < 2 {
        return domain("the correspondence needs n >= 2");
    }
    let f = unital_counts(spec, n, e_max, false, max_work)?;
    let g = unital_counts(spec, n, e_max, true, max_work)?;
    let closed = index_counts(spec, n - 1, e_max, Predicates::CLOSED, max_work)?;
    let inside = index_counts(
        spec,
        n - 1,
        e_max,
        Predicates {
            inside_pi: true,
            ..Predicates::CLOSED
        },
        max_work,
    )?;
    let rows = (0..=e_max as usize)
        .map(|e| (e as u32, f[e], closed[e], g[e], inside[e]))
        .collect();
    Ok(CorrespondenceReport { rows })
}

/// Values `t_n(p^e)` keyed by `(n, e)`.
pub type LiuTable = BTreeMap<(u32, u32), BigInt>;

/// `sum_{i=0}^e sum_{j=1}^n C(n-1, j-1) f_{n-j}(p^{e-i}) g_j(p^i)`, with
/// `f_0(p^e) = [e = 0]` built in.
pub fn liu_recursion(f: &LiuTable, g: &LiuTable, n: u32, e: u32) -> Result<BigInt> {
    let look = |t: &LiuTable, name: &str, k: u32, x: u32| -> Result<BigInt> {
        if name == "f" && k == 0 {
            return Ok(BigInt::from((x == 0) as u32));
        }
        t.get(&(k, x))
            .cloned()
            .ok_or_else(|| Error::Domain(format!("missing table entry {name}_{k}(p^{x})")))
    };
    let mut acc = BigInt::from(0);
    for i in 0..=e {
        for j in 1..=n {
            let c = num_integer::binomial(BigInt::from(n - 1), BigInt::from(j - 1));
            acc += c * look(f, "f", n - j, e - i)? * look(g, "g", j, i)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32) -> DvrSpec {
        DvrSpec::zp(p).unwrap()
    }

    fn el(s: &DvrSpec, v: &[i64]) -> Vec<DvrElem> {
        v.iter().map(|&x| s.from_int(x)).collect()
    }

    #[test]
    fn cotype_round_trip() {
        let c = Cotype::from_exponents(&[2, 1, 0]).unwrap();
        assert_eq!(
            (c.iset.clone(), c.r0, c.r.clone()),
            (vec![1, 2], 0, vec![1, 1])
        );
        assert_eq!(c.exponents(), vec![2, 1, 0]);
        assert_eq!(c.index_exponent(), 3);
        let c = Cotype::from_exponents(&[1, 1, 1]).unwrap();
        assert!(c.iset.is_empty() && c.r0 == 1);
        assert!(Cotype::from_exponents(&[0, 1]).is_err());
        let s = z(3);
        for alpha in [[3, 3, 1], [4, 2, 0], [0, 0, 0], [2, 2, 2]] {
            let c = Cotype::from_exponents(&alpha).unwrap();
            assert_eq!(LatticeBasis::from_cotype(&s, &c).cotype(), c);
            assert_eq!(Cotype::from_json(3, &c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn generated_lattice_independent_of_padding() {
        // 2(2,4,0) - (0,8,0) = (4,0,0) only appears once pi^K e_1 is accounted for
        let s = z(2);
        let gens = vec![
            el(&s, &[0, 8, 0]),
            el(&s, &[2, 4, 0]),
            el(&s, &[0, 0, 2]),
            el(&s, &[8, 0, 0]),
            el(&s, &[0, 0, 8]),
        ];
        let lo = LatticeBasis::from_generators(&s, 3, &gens, 3).unwrap();
        let hi = LatticeBasis::from_generators(&s, 3, &gens, 6).unwrap();
        assert_eq!(lo.a(), &[2, 2, 1]);
        assert_eq!(lo, hi);
    }

    #[test]
    fn membership_examples() {
        let s = z(2);
        let l = LatticeBasis::from_cotype(&s, &Cotype::from_exponents(&[1, 1, 1]).unwrap());
        assert!(!l.contains(&el(&s, &[1, 0, 0])));
        assert!(l.contains(&el(&s, &[2, 2, 2])));
        assert!(l.contains(&l.rows()[1].clone()));
        assert!(l.is_mult_closed());
        let id = LatticeBasis::from_cotype(&s, &Cotype::from_exponents(&[0, 0]).unwrap());
        assert!(id.is_mult_closed());
    }

    #[test]
    fn small_hand_checked_lattice() {
        let s = z(2);
        let l = LatticeBasis::new(&s, vec![el(&s, &[2, 0]), el(&s, &[1, 1])]).unwrap();
        assert!(l.is_mult_closed());
        assert!(l.contains_identity());
        assert_eq!(l.cotype(), Cotype::new(2, vec![1], 0, vec![1]).unwrap());
        assert!(LatticeBasis::new(&s, vec![el(&s, &[2, 0]), el(&s, &[3, 1])]).is_err());
    }

    #[test]
    fn generators_are_canonicalized() {
        let s = z(3);
        // <(3,0), (4,1)> + 9 o^2 has canonical form rows (3,0), (1,1)
        let l =
            LatticeBasis::from_generators(&s, 2, &[el(&s, &[3, 0]), el(&s, &[4, 1])], 2).unwrap();
        assert_eq!(l.rows()[1], el(&s, &[1, 1]));
        assert_eq!(l.a(), &[1, 0]);
        // unit multiples and sign changes do not matter
        let m = LatticeBasis::from_generators(&s, 2, &[el(&s, &[-6, 0]), el(&s, &[-4, -1])], 2)
            .unwrap();
        assert_eq!(l, m);
        let f4: DvrSpec = "fq:2:2".parse().unwrap();
        let t = f4.pi_pow(1);
        let g = vec![
            vec![f4.mul(&t, &f4.lift(3)), f4.zero()],
            vec![f4.lift(2), f4.lift(2)],
        ];
        let l = LatticeBasis::from_generators(&f4, 2, &g, 3).unwrap();
        assert_eq!(l.a(), &[1, 0]);
        assert_eq!(l.rows()[1], vec![f4.one(), f4.one()]);
    }

    #[test]
    fn closed_counts_n2() {
        let t = hnf_enumerate(&z(2), 2, 3, Predicates::CLOSED, u64::MAX).unwrap();
        assert_eq!(t.by_index(3), vec![1, 3, 4, 6]);
        let back = CountTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn one_lattice_per_index_in_rank_one() {
        for p in [2, 3] {
            let t = hnf_enumerate(&z(p), 1, 6, Predicates::CLOSED, u64::MAX).unwrap();
            assert_eq!(t.by_index(6), vec![1; 7]);
        }
    }

    #[test]
    fn subgroup_counts_match_product_formula() {
        // coefficients of 1/((1-T)(1-2T)(1-4T)) at p = 2
        let t = hnf_enumerate(&z(2), 3, 3, Predicates::default(), u64::MAX).unwrap();
        assert_eq!(t.by_index(3), vec![1, 7, 35, 155]);
    }

    #[test]
    fn parametrization_small_cases() {
        let s = z(2);
        let c = Cotype::new(3, vec![1], 0, vec![1]).unwrap();
        let rep = paper_enumerate(&s, &c, u64::MAX).unwrap();
        assert_eq!(rep.count, 6);
        assert!(rep.uniform() && rep.disjoint && rep.cotype_mismatches == 0);
        let c = Cotype::new(3, vec![1], 1, vec![1]).unwrap();
        assert_eq!(paper_enumerate(&s, &c, u64::MAX).unwrap().count, 7);
        for p in [2, 3, 5] {
            let c = Cotype::new(2, vec![1], 0, vec![1]).unwrap();
            assert_eq!(paper_enumerate(&z(p), &c, u64::MAX).unwrap().count, 3);
        }
    }

    #[test]
    fn guard_is_an_error() {
        let r = hnf_enumerate(&z(3), 3, 5, Predicates::default(), 10);
        assert!(matches!(r, Err(Error::Overflow { .. })));
    }

    #[test]
    fn correspondence_small() {
        let rep = f_g_correspondence_check(&z(3), 2, 6, u64::MAX).unwrap();
        assert!(rep.ok());
        assert!(rep.rows.iter().all(|r| r.1 == 1));
    }

    #[test]
    fn liu_needs_entries() {
        let mut f = LiuTable::new();
        let g = LiuTable::new();
        assert!(liu_recursion(&f, &g, 1, 0).is_err());
        f.insert((1, 0), BigInt::from(1));
    }
}
