use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::LaurentQ;
use crate::error::{Error, Result};

/// An ordered list of formal variable names shared by polynomials.
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .into()
}

/// A polynomial in named variables with [`LaurentQ`] coefficients.
///
/// Arithmetic between polynomials over different variable sets panics;
/// the variable set is part of the type's meaning, not data to reconcile.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, LaurentQ>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, LaurentQ::one())
    }

    pub fn constant(vars: &Vars, c: LaurentQ) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    /// `c * prod vars[i]^exps[i]`.
    pub fn monomial(vars: &Vars, exps: Vec<u32>, c: LaurentQ) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable with the given name.
    pub fn var(vars: &Vars, name: &str) -> Self {
        let i = vars
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown variable {name}"));
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, LaurentQ::one())
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, LaurentQ)>) -> Self {
        let mut out = Self::zero(vars);
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Vec<u32>, c: &LaurentQ) {
        assert_eq!(m.len(), self.vars.len(), "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &LaurentQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u32]) -> LaurentQ {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Multiplies by `q^qexp * mono`.
    pub fn mul_monomial(&self, qexp: i64, mono: &[u32]) -> Self {
        assert_eq!(mono.len(), self.vars.len());
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.iter().zip(mono).map(|(a, b)| a + b).collect(),
                        c.shift(qexp),
                    )
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &LaurentQ) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &(v * c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Specializes `q` to a concrete value, leaving rational coefficients.
    pub fn eval_q(&self, qval: u64) -> Result<BTreeMap<Vec<u32>, BigRational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.eval_at_q(qval)?;
            if v != BigRational::from_integer(BigInt::from(0)) {
                out.insert(m.clone(), v);
            }
        }
        Ok(out)
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "variable sets differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    /// `[{"m": [..], "c": LaurentQ}]` in lexicographic order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"m": m, "c": c.to_json()}))
                .collect(),
        )
    }

    pub fn from_json(vars: &Vars, v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("MPoly must be a JSON array".into()))?;
        let mut out = Self::zero(vars);
        for t in arr {
            let m = parse_exps(t.get("m"), vars.len())?;
            let c = LaurentQ::from_json(
                t.get("c")
                    .ok_or_else(|| Error::Parse("MPoly term needs \"c\"".into()))?,
            )?;
            out.add_term(m, &c);
        }
        Ok(out)
    }
}

pub(crate) fn parse_exps(v: Option<&Value>, len: usize) -> Result<Vec<u32>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("exponent vector must be an array".into()))?;
    if arr.len() != len {
        return Err(Error::Parse(format!(
            "exponent vector has length {}, expected {len}",
            arr.len()
        )));
    }
    arr.iter()
        .map(|x| {
            x.as_u64()
                .and_then(|u| u32::try_from(u).ok())
                .ok_or_else(|| Error::Parse("exponents must be non-negative integers".into()))
        })
        .collect()
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    // exponent vectors add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_vars(rhs);
        let mut out = MPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, e) in self.vars.iter().zip(m) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    e => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_binomials() {
        let v = vars(&["x", "y"]);
        let x = MPoly::var(&v, "x");
        let y = MPoly::var(&v, "y");
        let one = MPoly::one(&v);
        let p = &(&one + &x) * &(&one - &y);
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coeff(&[1, 1]), LaurentQ::constant(-1));
    }

    #[test]
    #[should_panic(expected = "variable sets differ")]
    fn mismatched_vars_panic() {
        let a = MPoly::one(&vars(&["x"]));
        let b = MPoly::one(&vars(&["y"]));
        let _ = &a + &b;
    }

    #[test]
    fn json_round_trip() {
        let v = vars(&["X", "Y", "Z"]);
        let p = MPoly::from_terms(
            &v,
            [
                (vec![1, 0, 2], LaurentQ::from_terms([(-1, 3), (2, -5)])),
                (vec![0, 0, 0], LaurentQ::one()),
            ],
        );
        assert_eq!(MPoly::from_json(&v, &p.to_json()).unwrap(), p);
    }
}
