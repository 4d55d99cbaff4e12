//! Concrete compact DVR models: `Z` localized at `p`, and `F_{p^f}[[t]]`.
//!
//! Finite field elements are indices in `0..q`; the base-`p` digits of an
//! index are its coefficients in the power basis `1, x, ..., x^{f-1}`. The
//! defining modulus is the least monic irreducible polynomial of degree `f`
//! when its lower coefficients are read as a base-`p` integer: `x^2+x+1` for
//! `F_4`, `x^3+x+1` for `F_8`, `x^2+1` for `F_9`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Table-driven arithmetic in `F_{p^f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

const MAX_FIELD: u32 = 1 << 12;

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

impl FiniteField {
    pub fn new(p: u32, f: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return domain(format!("{p} is not prime"));
        }
        if f == 0 {
            return domain("extension degree must be positive");
        }
        let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_FIELD as u64);
        let Some(q) = q else {
            return domain(format!("field of order {p}^{f} is too large"));
        };
        let q = q as u32;
        for code in 0..q {
            let mut modulus = digits(code, p, f as usize);
            modulus.push(1);
            if let Some(ff) = Self::try_build(p, f, q, modulus) {
                return Ok(ff);
            }
        }
        Err(Error::Internal(format!(
            "no irreducible polynomial of degree {f} over F_{p}"
        )))
    }

    /// The field with `q` elements.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, f) = prime_power(q as u64)
            .ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
        Self::new(p as u32, f)
    }

    fn try_build(p: u32, f: u32, q: u32, modulus: Vec<u32>) -> Option<Self> {
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let mut neg = vec![0; n];
        for a in 0..q {
            let da = digits(a, p, f as usize);
            neg[a as usize] = undigits(&da.iter().map(|&x| (p - x) % p).collect::<Vec<_>>(), p);
            for b in 0..q {
                let db = digits(b, p, f as usize);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = undigits(&s, p);
                mul[a as usize * n + b as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p);
            }
        }
        let mut inv = vec![0; n];
        for a in 1..n {
            let b = (1..n).find(|&b| mul[a * n + b] == 1)?;
            inv[a] = b as u32;
        }
        Some(Self {
            p,
            f,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}

fn digits(mut x: u32, b: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % b);
        x /= b;
    }
    out
}

fn undigits(d: &[u32], b: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * b + x)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let f = m.len() - 1;
    let mut r = vec![0u32; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    for d in (f..r.len()).rev() {
        let c = r[d];
        if c != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = d - f + k;
                r[idx] = (r[idx] + (p - c) * mk) % p;
            }
        }
    }
    r.truncate(f);
    r
}

pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut f = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        f += 1;
    }
    (x == 1).then_some((p, f))
}

/// The ring model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DvrSpec {
    /// `Z` localized at the prime `p`; uniformizer `p`.
    IntegerAtPrime(u32),
    /// `F_{p^f}[[t]]`; uniformizer `t`.
    PowerSeries(Arc<FiniteField>),
}

impl DvrSpec {
    pub fn zp(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return domain(format!("{p} is not prime"));
        }
        Ok(Self::IntegerAtPrime(p))
    }

    pub fn fq(p: u32, f: u32) -> Result<Self> {
        Ok(Self::PowerSeries(Arc::new(FiniteField::new(p, f)?)))
    }

    /// Residue field cardinality.
    pub fn q(&self) -> u32 {
        match self {
            Self::IntegerAtPrime(p) => *p,
            Self::PowerSeries(ff) => ff.order(),
        }
    }

    pub fn p(&self) -> u32 {
        match self {
            Self::IntegerAtPrime(p) => *p,
            Self::PowerSeries(ff) => ff.p(),
        }
    }

    /// The residue field as a table-driven field.
    pub fn residue_field(&self) -> Result<FiniteField> {
        match self {
            Self::IntegerAtPrime(p) => FiniteField::new(*p, 1),
            Self::PowerSeries(ff) => Ok((**ff).clone()),
        }
    }

    pub fn zero(&self) -> DvrElem {
        match self {
            Self::IntegerAtPrime(_) => DvrElem::Int(BigInt::zero()),
            Self::PowerSeries(_) => DvrElem::Poly(vec![]),
        }
    }

    pub fn one(&self) -> DvrElem {
        self.from_int(1)
    }

    /// The image of an integer.
    pub fn from_int(&self, c: i64) -> DvrElem {
        match self {
            Self::IntegerAtPrime(_) => DvrElem::Int(BigInt::from(c)),
            Self::PowerSeries(ff) => DvrElem::poly(vec![ff.from_int(c)]),
        }
    }

    /// `pi^a`.
    pub fn pi_pow(&self, a: u32) -> DvrElem {
        match self {
            Self::IntegerAtPrime(p) => DvrElem::Int(BigInt::from(*p).pow(a)),
            Self::PowerSeries(_) => {
                let mut v = vec![0; a as usize];
                v.push(1);
                DvrElem::Poly(v)
            }
        }
    }

    fn check(&self, x: &DvrElem) {
        let ok = matches!(
            (self, x),
            (Self::IntegerAtPrime(_), DvrElem::Int(_)) | (Self::PowerSeries(_), DvrElem::Poly(_))
        );
        assert!(ok, "element does not belong to {self}");
    }

    pub fn add(&self, x: &DvrElem, y: &DvrElem) -> DvrElem {
        self.check(x);
        self.check(y);
        match (self, x, y) {
            (Self::IntegerAtPrime(_), DvrElem::Int(a), DvrElem::Int(b)) => DvrElem::Int(a + b),
            (Self::PowerSeries(ff), DvrElem::Poly(a), DvrElem::Poly(b)) => {
                let n = a.len().max(b.len());
                let c = (0..n)
                    .map(|i| ff.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
                    .collect();
                DvrElem::poly(c)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, x: &DvrElem) -> DvrElem {
        self.check(x);
        match (self, x) {
            (Self::IntegerAtPrime(_), DvrElem::Int(a)) => DvrElem::Int(-a),
            (Self::PowerSeries(ff), DvrElem::Poly(a)) => {
                DvrElem::poly(a.iter().map(|&c| ff.neg(c)).collect())
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, x: &DvrElem, y: &DvrElem) -> DvrElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &DvrElem, y: &DvrElem) -> DvrElem {
        self.check(x);
        self.check(y);
        match (self, x, y) {
            (Self::IntegerAtPrime(_), DvrElem::Int(a), DvrElem::Int(b)) => DvrElem::Int(a * b),
            (Self::PowerSeries(ff), DvrElem::Poly(a), DvrElem::Poly(b)) => {
                if a.is_empty() || b.is_empty() {
                    return DvrElem::Poly(vec![]);
                }
                let mut c = vec![0; a.len() + b.len() - 1];
                for (i, &x) in a.iter().enumerate() {
                    for (j, &y) in b.iter().enumerate() {
                        c[i + j] = ff.add(c[i + j], ff.mul(x, y));
                    }
                }
                DvrElem::poly(c)
            }
            _ => unreachable!(),
        }
    }

    /// `None` stands for `+infinity` (the zero element).
    pub fn valuation(&self, x: &DvrElem) -> Option<u32> {
        self.check(x);
        match (self, x) {
            (Self::IntegerAtPrime(p), DvrElem::Int(a)) => {
                if a.is_zero() {
                    return None;
                }
                let p = BigInt::from(*p);
                let mut a = a.clone();
                let mut v = 0;
                while (&a % &p).is_zero() {
                    a /= &p;
                    v += 1;
                }
                Some(v)
            }
            (Self::PowerSeries(_), DvrElem::Poly(a)) => {
                a.iter().position(|&c| c != 0).map(|v| v as u32)
            }
            _ => unreachable!(),
        }
    }

    /// Canonical representative modulo `pi^a`.
    pub fn reduce_mod(&self, x: &DvrElem, a: u32) -> DvrElem {
        self.check(x);
        match (self, x) {
            (Self::IntegerAtPrime(p), DvrElem::Int(v)) => {
                DvrElem::Int(v.mod_floor(&BigInt::from(*p).pow(a)))
            }
            (Self::PowerSeries(_), DvrElem::Poly(v)) => {
                DvrElem::poly(v.iter().take(a as usize).copied().collect())
            }
            _ => unreachable!(),
        }
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self, x: &DvrElem) -> u32 {
        match self.reduce_mod(x, 1) {
            DvrElem::Int(v) => v.to_u32().expect("residue below p"),
            DvrElem::Poly(v) => v.first().copied().unwrap_or(0),
        }
    }

    /// The canonical lift of a residue: an integer in `[0, p)` or a constant.
    pub fn lift(&self, r: u32) -> DvrElem {
        match self {
            Self::IntegerAtPrime(_) => DvrElem::Int(BigInt::from(r)),
            Self::PowerSeries(_) => DvrElem::poly(vec![r]),
        }
    }

    /// `x / pi^a`; errors unless `pi^a` divides `x`.
    pub fn div_pi_pow(&self, x: &DvrElem, a: u32) -> Result<DvrElem> {
        if self.valuation(x).is_some_and(|v| v < a) {
            return domain(format!("pi^{a} does not divide {x}"));
        }
        Ok(match (self, x) {
            (Self::IntegerAtPrime(p), DvrElem::Int(v)) => DvrElem::Int(v / BigInt::from(*p).pow(a)),
            (Self::PowerSeries(_), DvrElem::Poly(v)) => {
                DvrElem::poly(v.iter().skip(a as usize).copied().collect())
            }
            _ => unreachable!(),
        })
    }

    /// `(c, r)` with `x = c * pi^a + r` and `r = reduce_mod(x, a)`.
    pub fn divrem_pi_pow(&self, x: &DvrElem, a: u32) -> (DvrElem, DvrElem) {
        let r = self.reduce_mod(x, a);
        let c = self
            .div_pi_pow(&self.sub(x, &r), a)
            .expect("difference is divisible");
        (c, r)
    }

    /// The `i`-th canonical representative modulo `pi^a`, for `i < q^a`:
    /// the integer `i`, or the polynomial whose base-`q` digits are those of `i`.
    pub fn rep_from_index(&self, i: u64, a: u32) -> DvrElem {
        match self {
            Self::IntegerAtPrime(_) => DvrElem::Int(BigInt::from(i)),
            Self::PowerSeries(ff) => {
                let q = ff.order() as u64;
                let mut i = i;
                let mut c = Vec::with_capacity(a as usize);
                for _ in 0..a {
                    c.push((i % q) as u32);
                    i /= q;
                }
                DvrElem::poly(c)
            }
        }
    }

    /// Whether `x` is a unit.
    pub fn is_unit(&self, x: &DvrElem) -> bool {
        self.valuation(x) == Some(0)
    }
}

impl fmt::Display for DvrSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IntegerAtPrime(p) => write!(f, "zp:{p}"),
            Self::PowerSeries(ff) => write!(f, "fq:{}:{}", ff.p(), ff.degree()),
        }
    }
}

impl FromStr for DvrSpec {
    type Err = Error;

    /// `zp:P`, or `fq:P:F` for `F_{P^F}[[t]]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<u32> {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in ring {s:?}")))
        };
        match parts.as_slice() {
            ["zp", p] => Self::zp(num(p)?),
            ["fq", p, f] => Self::fq(num(p)?, num(f)?),
            _ => Err(Error::Parse(format!(
                "unknown ring {s:?}; expected zp:P or fq:P:F"
            ))),
        }
    }
}

/// An exact global representative of a DVR element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DvrElem {
    Int(BigInt),
    /// Coefficients in the residue field, constant term first, no trailing zeros.
    Poly(Vec<u32>),
}

impl DvrElem {
    fn poly(mut c: Vec<u32>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self::Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Int(v) => v.is_zero(),
            Self::Poly(c) => c.is_empty(),
        }
    }
}

impl fmt::Display for DvrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Int(v) => write!(f, "{v}"),
            Self::Poly(c) => {
                if c.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, &x) in c.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (i, x) {
                        (0, x) => write!(f, "{x}")?,
                        (1, 1) => write!(f, "t")?,
                        (1, x) => write!(f, "{x}*t")?,
                        (i, 1) => write!(f, "t^{i}")?,
                        (i, x) => write!(f, "{x}*t^{i}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// The finite quotient `o / pi^K` with elements packed into `u64` codes.
///
/// A code is read in base `b` (`b = p` for `Z_p`, `b = q` for `F_q[[t]]`);
/// its digits are the `pi`-adic digits, so valuation, reduction mod `pi^a`
/// and division by `pi^a` are digit operations in both models.
#[derive(Clone, Debug)]
pub struct TruncRing {
    kind: TruncKind,
    k: u32,
    b: u64,
    size: u64,
    pows: Vec<u64>,
}

#[derive(Clone, Debug)]
enum TruncKind {
    Int,
    Series(Arc<FiniteField>),
}

impl TruncRing {
    pub fn new(spec: &DvrSpec, k: u32) -> Result<Self> {
        let (kind, b) = match spec {
            DvrSpec::IntegerAtPrime(p) => (TruncKind::Int, *p as u64),
            DvrSpec::PowerSeries(ff) => (TruncKind::Series(ff.clone()), ff.order() as u64),
        };
        let size = b
            .checked_pow(k)
            .filter(|s| *s < (1u64 << 62))
            .ok_or(Error::Overflow {
                guard: "truncation precision",
                limit: 62,
            })?;
        let pows = (0..=k).map(|i| b.pow(i)).collect();
        Ok(Self {
            kind,
            k,
            b,
            size,
            pows,
        })
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    /// Residue field cardinality.
    pub fn base(&self) -> u64 {
        self.b
    }

    /// `q^K`, the number of elements.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `q^a` for `a <= K`.
    pub fn q_pow(&self, a: u32) -> u64 {
        self.pows[a as usize]
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        match &self.kind {
            TruncKind::Int => (x + y) % self.size,
            TruncKind::Series(ff) => self.digitwise(x, y, |a, b| ff.add(a, b)),
        }
    }

    pub fn neg(&self, x: u64) -> u64 {
        match &self.kind {
            TruncKind::Int => (self.size - x) % self.size,
            TruncKind::Series(ff) => self.digitwise(x, 0, |a, _| ff.neg(a)),
        }
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    fn digitwise(&self, mut x: u64, mut y: u64, op: impl Fn(u32, u32) -> u32) -> u64 {
        let mut out = 0;
        for i in 0..self.k as usize {
            let d = op((x % self.b) as u32, (y % self.b) as u32);
            out += d as u64 * self.pows[i];
            x /= self.b;
            y /= self.b;
        }
        out
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match &self.kind {
            TruncKind::Int => ((x as u128 * y as u128) % self.size as u128) as u64,
            TruncKind::Series(ff) => {
                let k = self.k as usize;
                let dx = self.digits(x);
                let dy = self.digits(y);
                let mut out = vec![0u32; k];
                for i in 0..k {
                    if dx[i] == 0 {
                        continue;
                    }
                    for j in 0..k - i {
                        out[i + j] = ff.add(out[i + j], ff.mul(dx[i], dy[j]));
                    }
                }
                self.pack_digits(&out)
            }
        }
    }

    fn digits(&self, mut x: u64) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = (x % self.b) as u32;
                x /= self.b;
                d
            })
            .collect()
    }

    fn pack_digits(&self, d: &[u32]) -> u64 {
        d.iter().zip(&self.pows).map(|(&x, &p)| x as u64 * p).sum()
    }

    /// Valuation, with `K` standing for zero.
    pub fn valuation(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.k;
        }
        let mut v = 0;
        while x.is_multiple_of(self.b) {
            x /= self.b;
            v += 1;
        }
        v
    }

    /// Representative modulo `pi^a`.
    pub fn reduce(&self, x: u64, a: u32) -> u64 {
        if a >= self.k {
            x
        } else {
            x % self.pows[a as usize]
        }
    }

    /// `floor(x / pi^a)` in digits; exact division when `pi^a | x`.
    pub fn shift_down(&self, x: u64, a: u32) -> u64 {
        if a >= self.k {
            0
        } else {
            x / self.pows[a as usize]
        }
    }

    /// `pi^a * x`.
    pub fn shift_up(&self, x: u64, a: u32) -> u64 {
        if a >= self.k {
            0
        } else {
            (x % self.pows[(self.k - a) as usize]) * self.pows[a as usize]
        }
    }

    pub fn residue(&self, x: u64) -> u32 {
        (x % self.b) as u32
    }

    /// Inverse of a unit.
    pub fn inv_unit(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.b), "not a unit");
        match &self.kind {
            TruncKind::Int => {
                let g = (x as i128).extended_gcd(&(self.size as i128));
                debug_assert!(g.gcd == 1);
                g.x.rem_euclid(self.size as i128) as u64
            }
            TruncKind::Series(ff) => {
                // power series inversion, digit by digit
                let d = self.digits(x);
                let c0 = ff.inv(d[0]).expect("unit");
                let k = self.k as usize;
                let mut out = vec![0u32; k];
                out[0] = c0;
                for n in 1..k {
                    let mut s = 0;
                    for i in 1..=n {
                        s = ff.add(s, ff.mul(d[i], out[n - i]));
                    }
                    out[n] = ff.mul(ff.neg(s), c0);
                }
                self.pack_digits(&out)
            }
        }
    }

    /// Image of an integer.
    pub fn from_int(&self, c: i64) -> u64 {
        match &self.kind {
            TruncKind::Int => c.rem_euclid(self.size as i64) as u64,
            TruncKind::Series(ff) => {
                if self.k == 0 {
                    0
                } else {
                    ff.from_int(c) as u64
                }
            }
        }
    }

    /// Code of a global representative, reduced mod `pi^K`.
    pub fn encode(&self, x: &DvrElem) -> u64 {
        match (&self.kind, x) {
            (TruncKind::Int, DvrElem::Int(v)) => v
                .mod_floor(&BigInt::from(self.size))
                .to_u64()
                .expect("fits after reduction"),
            (TruncKind::Series(_), DvrElem::Poly(c)) => {
                let d: Vec<u32> = c.iter().take(self.k as usize).copied().collect();
                self.pack_digits(&d)
            }
            _ => panic!("element does not match the ring model"),
        }
    }

    /// The canonical global representative of a code.
    pub fn decode(&self, x: u64) -> DvrElem {
        match &self.kind {
            TruncKind::Int => DvrElem::Int(BigInt::from(x)),
            TruncKind::Series(_) => DvrElem::poly(self.digits(x)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_are_least_irreducible() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_f4_and_frobenius() {
        let ff = FiniteField::new(2, 2).unwrap();
        for a in ff.elements() {
            for b in ff.elements() {
                let s = ff.add(a, b);
                assert_eq!(ff.mul(s, s), ff.add(ff.mul(a, a), ff.mul(b, b)));
                for c in ff.elements() {
                    assert_eq!(ff.mul(a, ff.add(b, c)), ff.add(ff.mul(a, b), ff.mul(a, c)));
                }
            }
            if a != 0 {
                assert_eq!(ff.mul(a, ff.inv(a).unwrap()), 1);
            }
        }
        let g = (1..4).find(|&g| ff.mul(g, g) != 1 && ff.mul(ff.mul(g, g), g) == 1);
        assert!(g.is_some(), "multiplicative group is cyclic of order 3");
    }

    #[test]
    fn valuation_examples() {
        let z2 = DvrSpec::zp(2).unwrap();
        assert_eq!(z2.valuation(&z2.from_int(12)), Some(2));
        assert_eq!(z2.valuation(&z2.zero()), None);
        let z5 = DvrSpec::zp(5).unwrap();
        assert_eq!(z5.valuation(&z5.from_int(25)), Some(2));
    }

    #[test]
    fn reduce_and_residue() {
        let z2 = DvrSpec::zp(2).unwrap();
        assert_eq!(z2.reduce_mod(&z2.from_int(7), 2), z2.from_int(3));
        assert_eq!(z2.reduce_mod(&z2.from_int(7), 0), z2.zero());
        assert_eq!(z2.reduce_mod(&z2.from_int(-1), 3), z2.from_int(7));
        let f2: DvrSpec = "fq:2:1".parse().unwrap();
        let x = DvrElem::Poly(vec![0, 1, 0, 1]);
        assert_eq!(f2.reduce_mod(&x, 2), DvrElem::Poly(vec![0, 1]));
        let z3 = DvrSpec::zp(3).unwrap();
        assert_eq!(z3.residue(&z3.from_int(5)), 2);
        assert_eq!(z3.lift(0), z3.zero());
        let f4: DvrSpec = "fq:2:2".parse().unwrap();
        assert_eq!(f4.residue(&f4.pi_pow(1)), 0);
        assert_eq!(f4.q(), 4);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("zp:4".parse::<DvrSpec>().is_err());
        assert!("qq:2".parse::<DvrSpec>().is_err());
        assert_eq!("zp:3".parse::<DvrSpec>().unwrap().to_string(), "zp:3");
    }

    #[test]
    fn divisibility_matches_valuation() {
        for spec in ["zp:2", "zp:3", "fq:2:1", "fq:2:2"] {
            let s: DvrSpec = spec.parse().unwrap();
            let q = s.q() as u64;
            for a in 0..3 {
                for i in 0..q.pow(3) {
                    let x = s.rep_from_index(i, 3);
                    let divisible = s.reduce_mod(&x, a).is_zero();
                    assert_eq!(
                        divisible,
                        s.valuation(&x).is_none_or(|v| v >= a),
                        "{spec} {x} {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn trunc_ring_agrees_with_global_arithmetic() {
        for spec in ["zp:3", "fq:2:2", "fq:3:1"] {
            let s: DvrSpec = spec.parse().unwrap();
            let r = TruncRing::new(&s, 2).unwrap();
            for x in 0..r.size() {
                let ex = r.decode(x);
                assert_eq!(r.encode(&ex), x);
                for y in 0..r.size() {
                    let ey = r.decode(y);
                    assert_eq!(r.mul(x, y), r.encode(&s.mul(&ex, &ey)));
                    assert_eq!(r.add(x, y), r.encode(&s.add(&ex, &ey)));
                    assert_eq!(r.sub(x, y), r.encode(&s.sub(&ex, &ey)));
                }
                if r.residue(x) != 0 {
                    assert_eq!(r.mul(x, r.inv_unit(x)), 1);
                }
                let v = s.valuation(&ex).unwrap_or(2).min(2);
                assert_eq!(r.valuation(x), v);
            }
        }
    }
}
