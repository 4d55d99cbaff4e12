use std::collections::BTreeMap;

use super::{LaurentQ, MPoly, RatFun, Vars};
use crate::error::{Error, Result};

/// Truncation region for multivariate power series: an exponent vector is
/// kept when it satisfies every bound that is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub per_var: Option<Vec<u32>>,
    pub total: Option<u32>,
}

impl Truncation {
    pub fn total(d: u32) -> Self {
        Self {
            per_var: None,
            total: Some(d),
        }
    }

    pub fn per_var(bounds: Vec<u32>) -> Self {
        Self {
            per_var: Some(bounds),
            total: None,
        }
    }

    pub fn both(bounds: Vec<u32>, total: u32) -> Self {
        Self {
            per_var: Some(bounds),
            total: Some(total),
        }
    }

    pub fn admits(&self, m: &[u32]) -> bool {
        if let Some(b) = &self.per_var {
            if m.iter().zip(b).any(|(e, b)| e > b) {
                return false;
            }
        }
        match self.total {
            Some(t) => m.iter().sum::<u32>() <= t,
            None => true,
        }
    }

    /// Every admitted exponent vector, in lexicographic order.
    pub fn monomials(&self, nvars: usize) -> Result<Vec<Vec<u32>>> {
        if let Some(b) = &self.per_var {
            if b.len() != nvars {
                return Err(Error::Domain(format!(
                    "truncation has {} bounds for {nvars} variables",
                    b.len()
                )));
            }
        }
        let caps: Vec<u32> = match (&self.per_var, self.total) {
            (Some(b), Some(t)) => b.iter().map(|&x| x.min(t)).collect(),
            (Some(b), None) => b.clone(),
            (None, Some(t)) => vec![t; nvars],
            (None, None) => return Err(Error::Domain("truncation must be finite".into())),
        };
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill(&caps, self.total, 0, 0, &mut cur, &mut out);
        Ok(out)
    }
}

fn fill(
    caps: &[u32],
    total: Option<u32>,
    i: usize,
    used: u32,
    cur: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if i == caps.len() {
        out.push(cur.clone());
        return;
    }
    let mut hi = caps[i];
    if let Some(t) = total {
        hi = hi.min(t - used);
    }
    for e in 0..=hi {
        cur[i] = e;
        fill(caps, total, i + 1, used + e, cur, out);
    }
    cur[i] = 0;
}

/// A truncated multivariate power series with [`LaurentQ`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    vars: Vars,
    trunc: Truncation,
    coeffs: BTreeMap<Vec<u32>, LaurentQ>,
}

impl Series {
    pub fn from_poly(p: &MPoly, trunc: Truncation) -> Self {
        let coeffs = p
            .terms()
            .filter(|(m, _)| trunc.admits(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Self {
            vars: p.vars().clone(),
            trunc,
            coeffs,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn coefficient(&self, m: &[u32]) -> LaurentQ {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Nonzero coefficients in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &LaurentQ)> {
        self.coeffs.iter()
    }

    /// Product with a polynomial, truncated to the same region.
    pub fn mul_poly(&self, p: &MPoly) -> Self {
        assert!(self.vars == *p.vars(), "variable sets differ");
        let mut out = MPoly::zero(&self.vars);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in p.terms() {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                if self.trunc.admits(&m) {
                    out.add_term(m, &(c1 * c2));
                }
            }
        }
        Self::from_poly(&out, self.trunc.clone())
    }

    /// The kept part as a polynomial.
    pub fn to_poly(&self) -> MPoly {
        MPoly::from_terms(
            &self.vars,
            self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

/// Expands a rational function as a formal power series.
///
/// Each denominator factor `1 - q^e*mu` with `mu != 1` is inverted by the
/// geometric recurrence `g[m] = s[m] + q^e * g[m - mu]`, run over the
/// truncation region in lexicographic order. Factors without a variable part
/// are rejected, since their inverse is not a Laurent polynomial in `q`.
pub fn expand(f: &RatFun, trunc: &Truncation) -> Result<Series> {
    let nv = f.vars().len();
    let region = trunc.monomials(nv)?;
    for d in f.denominator() {
        if d.is_constant() {
            return Err(Error::NotExpandable(format!(
                "constant factor {} must be cleared by the caller",
                d.display(f.vars())
            )));
        }
    }
    let mut cur: BTreeMap<Vec<u32>, LaurentQ> = f
        .numerator()
        .terms()
        .filter(|(m, _)| trunc.admits(m))
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    for d in f.denominator() {
        let mut next: BTreeMap<Vec<u32>, LaurentQ> = BTreeMap::new();
        for m in &region {
            let mut v = cur.get(m).cloned().unwrap_or_default();
            if m.iter().zip(&d.mono).all(|(a, b)| a >= b) {
                let prev: Vec<u32> = m.iter().zip(&d.mono).map(|(a, b)| a - b).collect();
                if let Some(p) = next.get(&prev) {
                    v += &p.shift(d.qexp);
                }
            }
            if !v.is_zero() {
                next.insert(m.clone(), v);
            }
        }
        cur = next;
    }
    Ok(Series {
        vars: f.vars().clone(),
        trunc: trunc.clone(),
        coeffs: cur,
    })
}

/// The coefficient of a single multi-index, expanding with per-variable
/// bounds equal to that index.
pub fn coefficient(f: &RatFun, index: &[u32]) -> Result<LaurentQ> {
    let s = expand(f, &Truncation::per_var(index.to_vec()))?;
    Ok(s.coefficient(index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vars;

    #[test]
    fn geometric_series_in_q() {
        let v = vars(&["T"]);
        let f = RatFun::from_parts(MPoly::one(&v), &[(1, vec![1])]).unwrap();
        let s = expand(&f, &Truncation::total(2)).unwrap();
        for k in 0..=2u32 {
            assert_eq!(s.coefficient(&[k]), LaurentQ::q_pow(k as i64));
        }
        assert_eq!(s.coefficient(&[3]), LaurentQ::zero());
    }

    #[test]
    fn constant_factor_not_expandable() {
        let v = vars(&["T"]);
        let f = RatFun::from_parts(MPoly::one(&v), &[(-1, vec![0])]).unwrap();
        assert!(matches!(
            expand(&f, &Truncation::total(2)),
            Err(Error::NotExpandable(_))
        ));
    }

    #[test]
    fn region_ordering_and_bounds() {
        let t = Truncation::both(vec![2, 1], 2);
        let ms = t.monomials(2).unwrap();
        assert_eq!(
            ms,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![2, 0]]
        );
        assert!(Truncation {
            per_var: None,
            total: None
        }
        .monomials(1)
        .is_err());
    }
}
