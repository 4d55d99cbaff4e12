use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use super::mpoly::parse_exps;
use super::{LaurentQ, MPoly, Vars};
use crate::error::{Error, Result};

/// The binomial `1 - q^qexp * mono`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinomFactor {
    pub qexp: i64,
    pub mono: Vec<u32>,
}

impl BinomFactor {
    pub fn new(qexp: i64, mono: Vec<u32>) -> Result<Self> {
        let f = Self { qexp, mono };
        if f.is_identically_zero() {
            return Err(Error::Domain(
                "the factor 1 - q^0 is identically zero".into(),
            ));
        }
        Ok(f)
    }

    pub fn is_constant(&self) -> bool {
        self.mono.iter().all(|&e| e == 0)
    }

    fn is_identically_zero(&self) -> bool {
        self.qexp == 0 && self.is_constant()
    }

    pub fn degree(&self) -> u32 {
        self.mono.iter().sum()
    }

    pub fn to_poly(&self, vars: &Vars) -> MPoly {
        let one = MPoly::one(vars);
        let t = MPoly::monomial(vars, self.mono.clone(), LaurentQ::q_pow(self.qexp));
        &one - &t
    }
}

/// A rational function `num / prod(den)` whose denominator is a multiset of
/// binomial factors, kept sorted so the representation is canonical up to
/// the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    num: MPoly,
    den: Vec<BinomFactor>,
}

impl RatFun {
    pub fn new(num: MPoly, mut den: Vec<BinomFactor>) -> Result<Self> {
        let n = num.vars().len();
        for f in &den {
            if f.mono.len() != n {
                return Err(Error::Domain(format!(
                    "denominator factor has {} exponents, expected {n}",
                    f.mono.len()
                )));
            }
            if f.is_identically_zero() {
                return Err(Error::Domain("zero denominator factor".into()));
            }
        }
        den.sort();
        Ok(Self { num, den })
    }

    /// Convenience constructor from `(qexp, mono)` pairs.
    pub fn from_parts(num: MPoly, den: &[(i64, Vec<u32>)]) -> Result<Self> {
        let den = den
            .iter()
            .map(|(e, m)| BinomFactor::new(*e, m.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num, den)
    }

    pub fn from_poly(num: MPoly) -> Self {
        Self { num, den: vec![] }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MPoly::one(vars))
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[BinomFactor] {
        &self.den
    }

    /// The product of all denominator factors as a polynomial.
    pub fn denominator_poly(&self) -> MPoly {
        product(self.vars(), &self.den)
    }

    pub fn mul_monomial(&self, qexp: i64, mono: &[u32]) -> Self {
        Self {
            num: self.num.mul_monomial(qexp, mono),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &LaurentQ) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Rewrites `self` over the denominator multiset `target`, which must
    /// contain `self.den` as a sub-multiset.
    fn numerator_over(&self, target: &[BinomFactor]) -> MPoly {
        let extra = multiset_difference(target, &self.den);
        &self.num * &product(self.vars(), &extra)
    }

    /// Homomorphic substitution of each variable by `q^qexp * monomial` in
    /// `target` variables. `images[i]` is the image of the i-th variable.
    pub fn substitute(&self, target: &Vars, images: &[(i64, Vec<u32>)]) -> Result<Self> {
        if images.len() != self.vars().len() {
            return Err(Error::Domain(format!(
                "substitution has {} images for {} variables",
                images.len(),
                self.vars().len()
            )));
        }
        for (_, m) in images {
            if m.len() != target.len() {
                return Err(Error::Domain("image monomial has wrong length".into()));
            }
        }
        let map = |mono: &[u32]| -> (i64, Vec<u32>) {
            let mut qe = 0i64;
            let mut out = vec![0u32; target.len()];
            for (k, &e) in mono.iter().enumerate() {
                qe += images[k].0 * e as i64;
                for (o, &b) in out.iter_mut().zip(&images[k].1) {
                    *o += b * e;
                }
            }
            (qe, out)
        };
        let mut num = MPoly::zero(target);
        for (m, c) in self.num.terms() {
            let (qe, mm) = map(m);
            num.add_term(mm, &c.shift(qe));
        }
        let mut den = Vec::with_capacity(self.den.len());
        for f in &self.den {
            let (qe, mm) = map(&f.mono);
            let g = BinomFactor {
                qexp: f.qexp + qe,
                mono: mm,
            };
            if g.is_identically_zero() {
                return Err(Error::DegenerateSubstitution(format!(
                    "factor {} vanishes identically",
                    f.display(self.vars())
                )));
            }
            den.push(g);
        }
        Self::new(num, den)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.vars().iter().collect::<Vec<_>>(),
            "num": self.num.to_json(),
            "den": self.den.iter().map(|f| json!({"qexp": f.qexp, "m": f.mono})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let names: Vec<String> = v
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("RatFun needs \"vars\"".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse("variable names must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let vars: Vars = names.into();
        let num = MPoly::from_json(
            &vars,
            v.get("num")
                .ok_or_else(|| Error::Parse("RatFun needs \"num\"".into()))?,
        )?;
        let den = v
            .get("den")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("RatFun needs \"den\"".into()))?
            .iter()
            .map(|f| {
                let qexp = f
                    .get("qexp")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| Error::Parse("factor needs integer \"qexp\"".into()))?;
                let m = parse_exps(f.get("m"), vars.len())?;
                BinomFactor::new(qexp, m)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(num, den)
    }
}

impl BinomFactor {
    pub fn display(&self, vars: &Vars) -> String {
        let mut s = String::from("(1 - ");
        if self.qexp != 0 {
            s += &format!("q^{}", self.qexp);
        }
        let mut first = self.qexp == 0;
        for (v, e) in vars.iter().zip(&self.mono) {
            if *e == 0 {
                continue;
            }
            if !first {
                s.push('*');
            }
            first = false;
            s += v;
            if *e > 1 {
                s += &format!("^{e}");
            }
        }
        if first {
            s.push('1');
        }
        s.push(')');
        s
    }
}

fn product(vars: &Vars, factors: &[BinomFactor]) -> MPoly {
    let mut acc = MPoly::one(vars);
    for f in factors {
        acc = &acc * &f.to_poly(vars);
    }
    acc
}

/// Both inputs sorted; returns `a - b` as multisets (b must be contained in a
/// for the result to be meaningful; extra elements of b are ignored).
fn multiset_difference(a: &[BinomFactor], b: &[BinomFactor]) -> Vec<BinomFactor> {
    let mut out = Vec::new();
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j < b.len() && b[j] == *x {
            j += 1;
        } else {
            out.push(x.clone());
        }
    }
    out
}

fn multiset_union_max(a: &[BinomFactor], b: &[BinomFactor]) -> Vec<BinomFactor> {
    let mut out = a.to_vec();
    out.extend(multiset_difference(b, a));
    out.sort();
    out
}

fn multiset_intersection(a: &[BinomFactor], b: &[BinomFactor]) -> Vec<BinomFactor> {
    let d = multiset_difference(a, b);
    multiset_difference(a, &d)
}

/// Decides whether two rational functions are equal by cancelling common
/// denominator factors and cross-multiplying.
pub fn rat_equal(f: &RatFun, g: &RatFun) -> bool {
    if f.vars() != g.vars() {
        return false;
    }
    let common = multiset_intersection(&f.den, &g.den);
    let fd = multiset_difference(&f.den, &common);
    let gd = multiset_difference(&g.den, &common);
    let lhs = &f.num * &product(f.vars(), &gd);
    let rhs = &g.num * &product(g.vars(), &fd);
    lhs == rhs
}

/// Homomorphic monomial substitution; see [`RatFun::substitute`].
pub fn substitute_monomials(
    f: &RatFun,
    target: &Vars,
    images: &[(i64, Vec<u32>)],
) -> Result<RatFun> {
    f.substitute(target, images)
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        let den = multiset_union_max(&self.den, &rhs.den);
        let num = &self.numerator_over(&den) + &rhs.numerator_over(&den);
        RatFun { num, den }
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        den.sort();
        RatFun {
            num: &self.num * &rhs.num,
            den,
        }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / ")?;
            for d in &self.den {
                write!(f, "{}", d.display(self.vars()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vars;

    fn t_vars() -> Vars {
        vars(&["T"])
    }

    #[test]
    fn permuted_denominators_are_equal() {
        let v = t_vars();
        let n = MPoly::var(&v, "T");
        let f = RatFun::from_parts(n.clone(), &[(0, vec![1]), (1, vec![3])]).unwrap();
        let g = RatFun::from_parts(n, &[(1, vec![3]), (0, vec![1])]).unwrap();
        assert!(rat_equal(&f, &g));
    }

    #[test]
    fn distinct_functions_differ() {
        let v = t_vars();
        let one = MPoly::one(&v);
        let t = MPoly::var(&v, "T");
        // (1+T)/(1-T) vs (1-T)/(1+T), the latter written as (1-T)^2/(1-T^2).
        let f = RatFun::from_parts(&one + &t, &[(0, vec![1])]).unwrap();
        let g = RatFun::from_parts((&one - &t).pow(2), &[(0, vec![2])]).unwrap();
        assert!(!rat_equal(&f, &g));
    }

    #[test]
    fn cancellation_against_expanded_form() {
        let v = t_vars();
        let one = MPoly::one(&v);
        let t = MPoly::var(&v, "T");
        // 1/(1-T) == (1+T)/(1-T^2)
        let f = RatFun::from_parts(one.clone(), &[(0, vec![1])]).unwrap();
        let g = RatFun::from_parts(&one + &t, &[(0, vec![2])]).unwrap();
        assert!(rat_equal(&f, &g));
    }

    #[test]
    fn substitution_composes_q_powers() {
        let v = t_vars();
        let u = vars(&["U"]);
        let f = RatFun::from_parts(MPoly::one(&v), &[(1, vec![1])]).unwrap();
        let g = f.substitute(&u, &[(1, vec![1])]).unwrap();
        let expect = RatFun::from_parts(MPoly::one(&u), &[(2, vec![1])]).unwrap();
        assert!(rat_equal(&g, &expect));
    }

    #[test]
    fn degenerate_substitution_is_rejected() {
        let v = t_vars();
        let f = RatFun::from_parts(MPoly::one(&v), &[(1, vec![1])]).unwrap();
        let err = f.substitute(&t_vars(), &[(-1, vec![0])]).unwrap_err();
        assert!(matches!(err, Error::DegenerateSubstitution(_)));
    }

    #[test]
    fn zero_factor_rejected() {
        assert!(BinomFactor::new(0, vec![0, 0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = vars(&["x", "y"]);
        let f = RatFun::from_parts(
            MPoly::var(&v, "x").scale(&LaurentQ::from_terms([(-2, 3)])),
            &[(2, vec![2, 1]), (0, vec![1, 0])],
        )
        .unwrap();
        let back = RatFun::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }
}
