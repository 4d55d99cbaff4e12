use super::LaurentQ;
use crate::error::{domain, Result};

/// The Gaussian binomial `[n choose r]_q`, built by the q-Pascal rule
/// `[n,r] = [n-1,r-1] + q^r [n-1,r]`.
pub fn gaussian_binomial(n: u32, r: u32) -> Result<LaurentQ> {
    if r > n {
        return domain(format!("gaussian_binomial needs r <= n, got ({n},{r})"));
    }
    let r = r.min(n - r) as usize;
    // row[k] = [m choose k]_q for the current m
    let mut row = vec![LaurentQ::zero(); r + 1];
    row[0] = LaurentQ::one();
    for _m in 1..=n {
        for k in (1..=r).rev() {
            let t = &row[k].shift(k as i64) + &row[k - 1];
            row[k] = t;
        }
    }
    Ok(row[r].clone())
}

/// The number of I-flags in `F_q^n` as a polynomial in `q`:
/// `prod_j [i_{j+1} choose i_j]_q` with `i_{l+1} = n`.
pub fn gaussian_multinomial(n: u32, iset: &[u32]) -> Result<LaurentQ> {
    check_flag_set(n, iset)?;
    let mut acc = LaurentQ::one();
    let mut upper = n;
    for &i in iset.iter().rev() {
        acc = &acc * &gaussian_binomial(upper, i)?;
        upper = i;
    }
    Ok(acc)
}

pub(crate) fn check_flag_set(n: u32, iset: &[u32]) -> Result<()> {
    let mut prev = 0;
    for &i in iset {
        if i <= prev || i >= n {
            return domain(format!(
                "{iset:?} is not strictly increasing inside [1, {}]",
                n.saturating_sub(1)
            ));
        }
        prev = i;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn small_values() {
        assert_eq!(
            gaussian_binomial(2, 1).unwrap(),
            LaurentQ::from_terms([(0, 1), (1, 1)])
        );
        assert_eq!(gaussian_binomial(7, 0).unwrap(), LaurentQ::one());
        assert_eq!(
            gaussian_binomial(4, 2).unwrap(),
            LaurentQ::from_terms([(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)])
        );
        assert!(gaussian_binomial(2, 3).is_err());
    }

    #[test]
    fn multinomial() {
        let w = gaussian_multinomial(3, &[1, 2]).unwrap();
        let want = &LaurentQ::from_terms([(0, 1), (1, 1), (2, 1)])
            * &LaurentQ::from_terms([(0, 1), (1, 1)]);
        assert_eq!(w, want);
        assert_eq!(gaussian_multinomial(4, &[]).unwrap(), LaurentQ::one());
        assert_eq!(
            gaussian_multinomial(5, &[2]).unwrap(),
            gaussian_binomial(5, 2).unwrap()
        );
        assert!(gaussian_multinomial(3, &[2, 1]).is_err());
        assert!(gaussian_multinomial(3, &[3]).is_err());
    }

    #[test]
    fn symmetric_and_classical_at_one() {
        for n in 0..9u32 {
            for r in 0..=n {
                let g = gaussian_binomial(n, r).unwrap();
                assert_eq!(g, gaussian_binomial(n, n - r).unwrap());
                let at_one: BigInt = g.terms().map(|(_, c)| c.clone()).sum();
                let classical = num_integer::binomial(BigInt::from(n), BigInt::from(r));
                assert_eq!(at_one, classical);
            }
        }
    }
}
