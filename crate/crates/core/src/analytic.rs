//! Pole locations and abscissa lower bounds, in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Result};
use crate::formulas::{t_var, xi_single};

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `iota(n - iota)/(n + iota)`, where the diagonal `I = {iota}` contribution
/// has its pole.
pub fn xi_pole(n: u32, iota: u32) -> Result<BigRational> {
    if iota == 0 || iota >= n {
        return domain(format!(
            "iota must lie in [1, {}], got {iota}",
            n.saturating_sub(1)
        ));
    }
    let (n, i) = (n as u64, iota as u64);
    Ok(ratio(i * (n - i), n + i))
}

/// Argmax over `d` in `lo..=hi` of `d(m - d)/(m + d)`, compared by cross
/// multiplication; ties go to the smallest `d`.
fn argmax(m: u64, lo: u64, hi: u64) -> (u64, u64, u64) {
    let mut best = (lo, lo * (m - lo), m + lo);
    for d in lo + 1..=hi {
        let (num, den) = (d * (m - d), m + d);
        if (num as u128) * (best.2 as u128) > (best.1 as u128) * (den as u128) {
            best = (d, num, den);
        }
    }
    best
}

/// `max_{0 <= d <= n-1} d(n-1-d)/(n-1+d)`.
pub fn d7(n: u32) -> Result<BigRational> {
    if n < 2 {
        return domain("d7 needs n >= 2");
    }
    let m = n as u64 - 1;
    let (_, num, den) = argmax(m, 0, m);
    Ok(ratio(num, den))
}

/// Pole of `xi_single(n, iota)` after `A -> T^n`, `B -> T^iota`, read off
/// the denominator: a factor `1 - q^e T^k` vanishes at `s = e/k`, and the
/// rightmost such `s` is returned.
pub fn pole_from_factor(n: u32, iota: u32) -> Result<BigRational> {
    let f = xi_single(n, iota)?.substitute(&t_var(), &[(0, vec![n]), (0, vec![iota])])?;
    let best = f
        .denominator()
        .iter()
        .map(|d| BigRational::new(BigInt::from(d.qexp), BigInt::from(d.mono[0])))
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok(best)
}

/// Poles of the `I = {iota}` contributions for one `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleReport {
    pub n: u32,
    pub poles: Vec<(u32, BigRational)>,
    pub argmax: u32,
    pub max: BigRational,
    /// `d7(n + 1)`, which should equal `max`.
    pub d7: BigRational,
}

impl PoleReport {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return domain("poles need n >= 2");
        }
        let poles = (1..n)
            .map(|i| Ok((i, xi_pole(n, i)?)))
            .collect::<Result<Vec<_>>>()?;
        let (argmax, _, _) = argmax(n as u64, 1, n as u64 - 1);
        let max = poles[argmax as usize - 1].1.clone();
        Ok(Self {
            n,
            poles,
            argmax: argmax as u32,
            max,
            d7: d7(n + 1)?,
        })
    }

    /// The maximum is at least `n/6`.
    pub fn meets_lower_bound(&self) -> bool {
        self.max >= ratio(self.n as u64, 6)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "poles": self.poles.iter().map(|(i, v)| json!({"iota": i, "pole": v.to_string()})).collect::<Vec<_>>(),
            "argmax": self.argmax,
            "max": self.max.to_string(),
            "d7": self.d7.to_string(),
        })
    }
}

/// A rational interval containing `3 - 2 sqrt(2)` of width below `width`,
/// from consecutive convergents of the continued fraction of `sqrt(2)`.
pub fn enclosure_3_minus_2sqrt2(width: &BigRational) -> (BigRational, BigRational) {
    // convergents p/q with p' = p + 2q, q' = p + q alternate around sqrt(2)
    let (mut p, mut q): (BigInt, BigInt) = (1.into(), 1.into());
    loop {
        let (p2, q2) = (&p + BigInt::from(2) * &q, &p + &q);
        let a = BigRational::new(p.clone(), q.clone());
        let b = BigRational::new(p2.clone(), q2.clone());
        let three = BigRational::from_integer(3.into());
        let two = BigRational::from_integer(2.into());
        let (x, y) = (&three - &two * &a, &three - &two * &b);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        if &hi - &lo < *width {
            return (lo, hi);
        }
        (p, q) = (p2, q2);
    }
}

/// Outcome of [`asymptote_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoteReport {
    pub n_max: u32,
    /// First `n` with `max < n/6`, if any.
    pub lower_bound_violation: Option<u32>,
    /// `max_iota xi_pole(n_max, iota) / n_max`.
    pub ratio: BigRational,
    pub enclosure: (BigRational, BigRational),
    pub tolerance: BigRational,
    /// Every point of the enclosure lies within `tolerance` of `ratio`.
    pub within: bool,
}

impl AsymptoteReport {
    pub fn ok(&self) -> bool {
        self.lower_bound_violation.is_none() && self.within
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_max": self.n_max,
            "lower_bound_violation": self.lower_bound_violation,
            "ratio": self.ratio.to_string(),
            "enclosure": [self.enclosure.0.to_string(), self.enclosure.1.to_string()],
            "tolerance": self.tolerance.to_string(),
            "within": self.within,
            "ok": self.ok(),
        })
    }
}

/// Checks `max_iota >= n/6` for `2 <= n <= n_max` and that the ratio at
/// `n_max` is within `10/n_max` of `3 - 2 sqrt(2)`.
pub fn asymptote_check(n_max: u32) -> Result<AsymptoteReport> {
    asymptote_check_range(n_max, n_max)
}

/// As [`asymptote_check`], with the lower bound checked only up to `bound_to`.
pub fn asymptote_check_range(n_max: u32, bound_to: u32) -> Result<AsymptoteReport> {
    if n_max < 10 {
        return domain("asymptote check needs n_max >= 10");
    }
    let lower_bound_violation = (2..=bound_to.min(n_max)).find(|&n| {
        let (_, num, den) = argmax(n as u64, 1, n as u64 - 1);
        // num/den >= n/6
        6 * (num as u128) < (n as u128) * (den as u128)
    });
    let (_, num, den) = argmax(n_max as u64, 1, n_max as u64 - 1);
    let ratio = BigRational::new(BigInt::from(num), BigInt::from(den) * BigInt::from(n_max));
    let tolerance = BigRational::new(10.into(), n_max.into());
    let width = &tolerance / BigRational::from_integer(1000.into());
    let enclosure = enclosure_3_minus_2sqrt2(&width);
    let within =
        (&ratio - &enclosure.0).abs() < tolerance && (&ratio - &enclosure.1).abs() < tolerance;
    Ok(AsymptoteReport {
        n_max,
        lower_bound_violation,
        ratio,
        enclosure,
        tolerance,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(xi_pole(2, 1).unwrap(), ratio(1, 3));
        assert_eq!(xi_pole(3, 1).unwrap(), ratio(1, 2));
        assert_eq!(xi_pole(3, 2).unwrap(), ratio(2, 5));
        assert!(xi_pole(3, 3).is_err());
        let r = PoleReport::new(7).unwrap();
        assert_eq!((r.argmax, r.max.clone()), (3, ratio(6, 5)));
        assert_eq!(r.d7, r.max);
        // the bound d7(n) < alpha is strict, so d7(7) = 1 already forces alpha > 1
        assert_eq!(d7(7).unwrap(), ratio(1, 1));
        assert!(d7(8).unwrap() > ratio(1, 1));
        assert!(d7(2).unwrap().is_zero());
        assert_eq!(PoleReport::new(3).unwrap().max, ratio(1, 2));
    }

    #[test]
    fn poles_from_denominators() {
        for n in 2..=12 {
            for i in 1..n {
                assert_eq!(
                    pole_from_factor(n, i).unwrap(),
                    xi_pole(n, i).unwrap(),
                    "n={n} iota={i}"
                );
            }
        }
    }

    #[test]
    fn enclosure_contains_known_bounds() {
        let (lo, hi) = enclosure_3_minus_2sqrt2(&ratio(1, 10_000_000));
        assert!(lo >= ratio(408, 2378) && hi <= ratio(169, 985));
        assert!(lo < ratio(171573, 1_000_000) && hi > ratio(171572, 1_000_000));
    }

    #[test]
    fn even_n_witness() {
        for n in (2..40u32).step_by(2) {
            assert_eq!(xi_pole(n, n / 2).unwrap(), ratio(n as u64, 6));
        }
        assert!(asymptote_check(200).unwrap().ok());
    }
}
