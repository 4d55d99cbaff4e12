use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};

/// A Laurent polynomial in the formal symbol `q` with integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentQ {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(0, c)
    }

    /// `c * q^e`.
    pub fn term(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::term(e, 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k + e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes an arbitrary rational value for `q`.
    pub fn eval_rational(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = pow_rational(q, *e);
            acc += p * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Substitutes a concrete residue cardinality `q = qval`.
    pub fn eval_at_q(&self, qval: u64) -> Result<BigRational> {
        if qval < 2 {
            return domain(format!("q must be at least 2, got {qval}"));
        }
        Ok(self.eval_rational(&BigRational::from_integer(BigInt::from(qval))))
    }

    /// Value at `q = qval` when the result is an integer.
    pub fn eval_integer(&self, qval: u64) -> Result<BigInt> {
        let v = self.eval_at_q(qval)?;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            domain(format!("value {v} at q={qval} is not an integer"))
        }
    }

    /// `[{"e": int, "c": "decimal"}]` in ascending exponent order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(e, c)| json!({"e": e, "c": c.to_string()}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("LaurentQ must be a JSON array".into()))?;
        let mut out = Self::zero();
        for t in arr {
            let e = t
                .get("e")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("LaurentQ term needs integer \"e\"".into()))?;
            let c: BigInt = t
                .get("c")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("LaurentQ term needs string \"c\"".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad decimal coefficient".into()))?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn pow_rational(q: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl From<i64> for LaurentQ {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentQ {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentQ> for LaurentQ {
    fn add_assign(&mut self, rhs: &LaurentQ) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentQ> for LaurentQ {
    fn sub_assign(&mut self, rhs: &LaurentQ) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LaurentQ> for &'a LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        LaurentQ {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentQ> for LaurentQ {
            type Output = LaurentQ;
            fn $m(self, rhs: LaurentQ) -> LaurentQ {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentQ> for LaurentQ {
            type Output = LaurentQ;
            fn $m(self, rhs: &LaurentQ) -> LaurentQ {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        -&self
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}q")?,
                (e, true) => write!(f, "q^{e}")?,
                (e, false) => write!(f, "{abs}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = LaurentQ::from_terms([(0, 1), (1, 1)]);
        let b = LaurentQ::from_terms([(1, -1)]);
        let s = &a + &b;
        assert_eq!(s, LaurentQ::one());
        assert_eq!(s.terms().count(), 1);
    }

    #[test]
    fn evaluation() {
        let p = LaurentQ::from_terms([(0, 1), (1, 1)]);
        assert_eq!(p.eval_at_q(3).unwrap(), BigRational::from_integer(4.into()));
        let r = LaurentQ::q_pow(-3);
        assert_eq!(
            r.eval_at_q(2).unwrap(),
            BigRational::new(1.into(), 8.into())
        );
        assert!(matches!(p.eval_at_q(1), Err(Error::Domain(_))));
    }

    #[test]
    fn display_is_readable() {
        let p = LaurentQ::from_terms([(-1, -2), (0, 1), (2, 3)]);
        assert_eq!(p.to_string(), "-2q^-1 + 1 + 3q^2");
    }

    #[test]
    fn json_round_trip() {
        let p = LaurentQ::from_terms([(-4, 7), (3, -1)]);
        assert_eq!(LaurentQ::from_json(&p.to_json()).unwrap(), p);
    }
}
