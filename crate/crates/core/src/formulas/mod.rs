//! The catalog of closed-form zeta functions and the identities linking them.
//!
//! Variable semantics, fixed per formula:
//!
//! | formula | variables | meaning |
//! |---|---|---|
//! | `xi_single(n, iota)` | `A, B` | `A = q^{-n s0}`, `B = q^{-iota s_iota}` |
//! | `w_forms`, `xi_12_*` | `X, Y, Z` | `X = q^{-3 s0}`, `Y = q^{-s1+2}`, `Z = q^{-2 s2+2}` |
//! | `cotype_*` | `x, y, z` | `x = q^{-s1}`, `y = q^{-s2}`, `z = q^{-s3}` |
//! | `xi_n_assembled`, references | `T` | `T = q^{-s}` |

pub mod constants;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{domain, Error, Result};
use crate::exact::{gaussian_binomial, rat_equal, vars, LaurentQ, MPoly, RatFun, Vars};
use crate::flags::theta_gf;
use constants::{Coef, FracTerm, Term};

fn coef(c: Coef) -> LaurentQ {
    LaurentQ::from_terms(c.iter().copied())
}

fn poly<const N: usize>(v: &Vars, terms: &[Term<N>]) -> MPoly {
    MPoly::from_terms(v, terms.iter().map(|(m, c)| (m.to_vec(), coef(c))))
}

fn den<const N: usize>(d: &[(i64, [u32; N])]) -> Vec<(i64, Vec<u32>)> {
    d.iter().map(|(e, m)| (*e, m.to_vec())).collect()
}

fn frac(v: &Vars, t: &FracTerm) -> RatFun {
    let num = MPoly::monomial(v, t.mono.to_vec(), coef(t.coef));
    RatFun::from_parts(num, &den(t.den)).expect("displayed factors are non-degenerate")
}

fn sum(v: &Vars, fs: impl IntoIterator<Item = RatFun>) -> RatFun {
    fs.into_iter().fold(RatFun::zero(v), |acc, f| &acc + &f)
}

pub fn xyz_upper() -> Vars {
    vars(&["X", "Y", "Z"])
}

pub fn xyz() -> Vars {
    vars(&["x", "y", "z"])
}

pub fn t_var() -> Vars {
    vars(&["T"])
}

pub fn ab() -> Vars {
    vars(&["A", "B"])
}

/// `1/(1 - T^n)`, the contribution of `I = {}`.
fn empty_flag(n: u32) -> RatFun {
    let v = t_var();
    RatFun::from_parts(MPoly::one(&v), &[(0, vec![n])]).expect("n >= 1")
}

/// `B/(1 - q^{iota(n-iota)} AB) * (binom(n, iota)_q A/(1-A) + theta/(1-B))`.
pub fn xi_single(n: u32, iota: u32) -> Result<RatFun> {
    let theta = theta_gf(n, iota)?;
    let binom = gaussian_binomial(n, iota)?;
    let v = ab();
    let a = MPoly::var(&v, "A");
    let b = MPoly::var(&v, "B");
    let one = MPoly::one(&v);
    let inner = &(&a * &(&one - &b)).scale(&binom) + &(&one - &a).scale(&LaurentQ::from(theta));
    let d = (iota * (n - iota)) as i64;
    RatFun::from_parts(
        &b * &inner,
        &[(d, vec![1, 1]), (0, vec![1, 0]), (0, vec![0, 1])],
    )
}

/// `W_1, ..., W_8`.
pub fn w_forms() -> Vec<RatFun> {
    let v = xyz_upper();
    constants::W_TERMS
        .iter()
        .map(|terms| sum(&v, terms.iter().map(|t| frac(&v, t))))
        .collect()
}

/// `X^2 W1 + X W2 + XZ W3 + XY W4 + XY^2 W5 + W6 + XY^2Z W7 + Y W8`.
///
/// This is `q^{t1+t2}` times the `I = {1, 2}` function with
/// `t1 = s1 - 2`, `t2 = 2 s2 - 2`, and `q^{-(t1+t2)} = YZ`; so the function
/// itself is `YZ` times this sum.
pub fn xi_12_from_w() -> RatFun {
    let v = xyz_upper();
    sum(
        &v,
        w_forms()
            .iter()
            .zip(constants::W_WEIGHTS)
            .map(|(w, m)| w.mul_monomial(0, &m)),
    )
}

/// `YZ P / (q^11 (1-X)(1-XY)(1-XZ)(1-q^-2 Y)(1-q^-2 Z)(1-q^-3 YZ)(1-q^-1 XYZ))`.
pub fn xi_12_p_formula() -> RatFun {
    let v = xyz_upper();
    let p = poly(&v, constants::P_TERMS).mul_monomial(constants::P_QPOW, &[0, 1, 1]);
    RatFun::from_parts(p, &den(constants::P_DEN)).expect("displayed factors are non-degenerate")
}

/// The `I = {1, 2}` function obtained from the W-sum, `YZ * xi_12_from_w()`.
pub fn xi_12_from_w_scaled() -> RatFun {
    xi_12_from_w().mul_monomial(0, &[0, 1, 1])
}

/// `F = N / den` over `(x, y, z)`.
pub fn cotype_o4() -> RatFun {
    let v = xyz();
    RatFun::from_parts(poly(&v, constants::N_TERMS), &den(constants::N_DEN))
        .expect("displayed factors are non-degenerate")
}

/// The decomposition of the cotype function into its flag contributions.
pub fn cotype_assembled() -> Result<RatFun> {
    let v = xyz();
    let empty = RatFun::from_parts(MPoly::one(&v), &[(0, vec![1, 1, 1])])?;
    let x1 = xi_single(3, 1)?.substitute(&v, &[(0, vec![1, 1, 1]), (0, vec![1, 0, 0])])?;
    let x2 = xi_single(3, 2)?.substitute(&v, &[(0, vec![1, 1, 1]), (0, vec![1, 1, 0])])?;
    let x12 = xi_12_p_formula().substitute(
        &v,
        &[(0, vec![1, 1, 1]), (2, vec![1, 0, 0]), (2, vec![1, 1, 0])],
    )?;
    Ok(sum(&v, [empty, x1, x2, x12]))
}

/// `cotype_o4` with `x, y, z` all set to `T`.
pub fn cotype_diagonal() -> Result<RatFun> {
    cotype_o4().substitute(&t_var(), &[(0, vec![1]), (0, vec![1]), (0, vec![1])])
}

/// `1/(1 - T^n) + sum over non-empty I` of the flag contributions, with all
/// `s`-variables equal.
pub fn xi_n_assembled(n: u32) -> Result<RatFun> {
    let v = t_var();
    let mut parts = vec![empty_flag(n)];
    match n {
        1 => {}
        2 => parts.push(xi_single(2, 1)?.substitute(&v, &[(0, vec![2]), (0, vec![1])])?),
        3 => {
            parts.push(xi_single(3, 1)?.substitute(&v, &[(0, vec![3]), (0, vec![1])])?);
            parts.push(xi_single(3, 2)?.substitute(&v, &[(0, vec![3]), (0, vec![2])])?);
            parts.push(
                xi_12_p_formula().substitute(&v, &[(0, vec![3]), (2, vec![1]), (2, vec![2])])?,
            );
        }
        _ => return domain(format!("assembly is available for n <= 3, got {n}")),
    }
    Ok(sum(&v, parts))
}

/// `(1+T)^2 / ((1-T)(1-qT^3))`, the local factor for `Z^3`.
pub fn zeta_z3_local() -> RatFun {
    let v = t_var();
    let one = MPoly::one(&v);
    let t = MPoly::var(&v, "T");
    let s = &one + &t;
    RatFun::from_parts(&s * &s, &[(0, vec![1]), (1, vec![3])]).expect("valid factors")
}

/// The local factor for `Z^4`.
pub fn zeta_z4_local() -> RatFun {
    let v = t_var();
    RatFun::from_parts(poly(&v, constants::Z4_NUM), &den(constants::Z4_DEN)).expect("valid factors")
}

/// `prod_{i<n} 1/(1 - q^i T)`, counting all finite-index submodules.
pub fn subgroup_zeta(n: u32) -> RatFun {
    let v = t_var();
    let d: Vec<(i64, Vec<u32>)> = (0..n).map(|i| (i as i64, vec![1])).collect();
    RatFun::from_parts(MPoly::one(&v), &d).expect("valid factors")
}

/// The reference local factors, keyed by [`FormulaId`] name.
pub fn reference_local_factors(n: u32) -> Vec<(FormulaId, RatFun)> {
    vec![
        (FormulaId::ZetaZ3Local, zeta_z3_local()),
        (FormulaId::ZetaZ4Local, zeta_z4_local()),
        (FormulaId::SubgroupZeta(n), subgroup_zeta(n)),
    ]
}

/// Counts of mult-closed submodules inside `pi o^n` of index `q^n`,
/// `q^{n+1}`, `q^{n+2}`: `1`, `binom(n,1)_q`, `C(n+1,2) q^{n-1} + binom(n,2)_q`.
pub fn application_ii(n: u32) -> Result<[LaurentQ; 3]> {
    if n < 2 {
        return domain("n must be at least 2");
    }
    let c = BigInt::from(n * (n + 1) / 2);
    let third = &LaurentQ::q_pow(n as i64 - 1).scale(&c) + &gaussian_binomial(n, 2)?;
    Ok([LaurentQ::one(), gaussian_binomial(n, 1)?, third])
}

/// Names of catalog entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaId {
    Xi1,
    Xi2,
    XiSingle(u32, u32),
    W(u8),
    Xi12P,
    Xi12FromW,
    CotypeO4,
    CotypeAssembled,
    XiNAssembled(u32),
    ZetaZ3Local,
    ZetaZ4Local,
    SubgroupZeta(u32),
}

impl FormulaId {
    pub fn resolve(self) -> Result<RatFun> {
        Ok(match self {
            FormulaId::Xi1 => empty_flag(1),
            FormulaId::Xi2 => zeta_z3_local(),
            FormulaId::XiSingle(n, i) => xi_single(n, i)?,
            FormulaId::W(i) => match i {
                1..=8 => w_forms().swap_remove(i as usize - 1),
                _ => return domain(format!("W index {i} outside 1..8")),
            },
            FormulaId::Xi12P => xi_12_p_formula(),
            FormulaId::Xi12FromW => xi_12_from_w(),
            FormulaId::CotypeO4 => cotype_o4(),
            FormulaId::CotypeAssembled => cotype_assembled()?,
            FormulaId::XiNAssembled(n) => xi_n_assembled(n)?,
            FormulaId::ZetaZ3Local => zeta_z3_local(),
            FormulaId::ZetaZ4Local => zeta_z4_local(),
            FormulaId::SubgroupZeta(n) => {
                if n == 0 {
                    return domain("subgroup zeta needs n >= 1");
                }
                subgroup_zeta(n)
            }
        })
    }

    /// Meaning of the variables, for display.
    pub fn semantics(self) -> &'static str {
        match self {
            FormulaId::XiSingle(..) => "A = q^{-n s0}, B = q^{-iota s_iota}",
            FormulaId::W(_) | FormulaId::Xi12P | FormulaId::Xi12FromW => {
                "X = q^{-3 s0}, Y = q^{-s1+2}, Z = q^{-2 s2+2}"
            }
            FormulaId::CotypeO4 | FormulaId::CotypeAssembled => {
                "x = q^{-s1}, y = q^{-s2}, z = q^{-s3}"
            }
            _ => "T = q^{-s}",
        }
    }

    pub fn all_fixed() -> Vec<FormulaId> {
        let mut v = vec![FormulaId::Xi1, FormulaId::Xi2];
        v.extend((1..=8).map(FormulaId::W));
        v.extend([
            FormulaId::Xi12P,
            FormulaId::Xi12FromW,
            FormulaId::CotypeO4,
            FormulaId::CotypeAssembled,
            FormulaId::ZetaZ3Local,
            FormulaId::ZetaZ4Local,
        ]);
        v
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaId::Xi1 => write!(f, "xi1"),
            FormulaId::Xi2 => write!(f, "xi2"),
            FormulaId::XiSingle(n, i) => write!(f, "xiSingle:{n}:{i}"),
            FormulaId::W(i) => write!(f, "w{i}"),
            FormulaId::Xi12P => write!(f, "xi12P"),
            FormulaId::Xi12FromW => write!(f, "xi12FromW"),
            FormulaId::CotypeO4 => write!(f, "cotypeO4"),
            FormulaId::CotypeAssembled => write!(f, "cotypeAssembled"),
            FormulaId::XiNAssembled(n) => write!(f, "xiN:{n}"),
            FormulaId::ZetaZ3Local => write!(f, "zetaZ3"),
            FormulaId::ZetaZ4Local => write!(f, "zetaZ4"),
            FormulaId::SubgroupZeta(n) => write!(f, "subgroup:{n}"),
        }
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u32> {
            parts
                .get(i)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("formula id {s:?} needs a numeric argument")))
        };
        let id = match parts[0] {
            "xi1" => FormulaId::Xi1,
            "xi2" => FormulaId::Xi2,
            "xiSingle" => FormulaId::XiSingle(num(1)?, num(2)?),
            "xi12P" => FormulaId::Xi12P,
            "xi12FromW" => FormulaId::Xi12FromW,
            "cotypeO4" => FormulaId::CotypeO4,
            "cotypeAssembled" => FormulaId::CotypeAssembled,
            "xiN" => FormulaId::XiNAssembled(num(1)?),
            "zetaZ3" => FormulaId::ZetaZ3Local,
            "zetaZ4" => FormulaId::ZetaZ4Local,
            "subgroup" => FormulaId::SubgroupZeta(num(1)?),
            w if w.len() == 2 && w.starts_with('w') => {
                let i: u8 = w[1..]
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown formula id {s:?}")))?;
                FormulaId::W(i)
            }
            _ => return Err(Error::Parse(format!("unknown formula id {s:?}"))),
        };
        let arity = match id {
            FormulaId::XiSingle(..) => 3,
            FormulaId::XiNAssembled(_) | FormulaId::SubgroupZeta(_) => 2,
            _ => 1,
        };
        if parts.len() != arity {
            return Err(Error::Parse(format!(
                "formula id {s:?} has the wrong number of arguments"
            )));
        }
        Ok(id)
    }
}

/// Result of one symbolic identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// The symbolic identities between the assembled and displayed forms.
pub fn identities() -> Result<Vec<IdentityCheck>> {
    let check = |name, f: &RatFun, g: &RatFun| IdentityCheck {
        name,
        holds: rat_equal(f, g),
    };
    Ok(vec![
        check(
            "xi12 W-sum = P formula",
            &xi_12_from_w_scaled(),
            &xi_12_p_formula(),
        ),
        check(
            "cotype assembled = cotype o4",
            &cotype_assembled()?,
            &cotype_o4(),
        ),
        check(
            "xi2 assembled = Z^3 local factor",
            &xi_n_assembled(2)?,
            &zeta_z3_local(),
        ),
        check(
            "xi3 assembled = Z^4 local factor",
            &xi_n_assembled(3)?,
            &zeta_z4_local(),
        ),
        check(
            "cotype o4 diagonal = xi3 assembled",
            &cotype_diagonal()?,
            &xi_n_assembled(3)?,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{coefficient, expand, gaussian_multinomial, Truncation};

    fn at(c: &LaurentQ, q: u64) -> BigInt {
        c.eval_integer(q).unwrap()
    }

    #[test]
    fn identities_hold() {
        for c in identities().unwrap() {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn xi_single_examples() {
        let f = xi_single(3, 1).unwrap();
        assert_eq!(
            coefficient(&f, &[0, 1]).unwrap(),
            LaurentQ::from(theta_gf(3, 1).unwrap())
        );
        assert_eq!(at(&coefficient(&f, &[1, 1]).unwrap(), 2), BigInt::from(7));
        assert!(xi_single(3, 3).is_err());
    }

    #[test]
    fn xi2_series() {
        let s = expand(&zeta_z3_local(), &Truncation::total(3)).unwrap();
        let want = [
            LaurentQ::one(),
            3.into(),
            4.into(),
            &LaurentQ::from(4) + &LaurentQ::q_pow(1),
        ];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(&s.coefficient(&[k as u32]), w);
        }
    }

    #[test]
    fn displayed_constants() {
        let w = w_forms();
        let w1_num = gaussian_multinomial(3, &[1, 2]).unwrap().shift(-3);
        assert_eq!(w[0].numerator().coeff(&[0, 0, 0]), w1_num);
        assert_eq!(
            w[4].denominator()
                .iter()
                .filter(|f| f.qexp == -3 && f.mono == [1, 2, 1])
                .count(),
            2
        );
        let p = xi_12_p_formula();
        assert_eq!(
            p.numerator().coeff(&[3, 4, 4]),
            LaurentQ::from_terms([(-8, 1), (-9, 2), (-10, 2), (-11, 1)])
        );
        let f = cotype_o4();
        assert_eq!(f.numerator().coeff(&[1, 0, 0]), LaurentQ::from(5));
        assert_eq!(coefficient(&f, &[0, 0, 0]).unwrap(), LaurentQ::one());
        assert_eq!(coefficient(&f, &[1, 0, 0]).unwrap(), LaurentQ::from(6));
        let z4 = zeta_z4_local();
        assert_eq!(
            z4.numerator().coeff(&[3]),
            LaurentQ::from_terms([(1, 4), (0, -3)])
        );
        assert_eq!(z4.numerator().coeff(&[9]), LaurentQ::term(2, -1));
    }

    #[test]
    fn w_sum_without_y_and_z() {
        // every summand but W6 carries a monomial factor
        let s = expand(&xi_12_from_w(), &Truncation::per_var(vec![0, 0, 0])).unwrap();
        let w6 = expand(&w_forms()[5], &Truncation::per_var(vec![0, 0, 0])).unwrap();
        assert_eq!(s.coefficient(&[0, 0, 0]), w6.coefficient(&[0, 0, 0]));
    }

    #[test]
    fn subgroup_and_application_ii() {
        let s = expand(&subgroup_zeta(2), &Truncation::total(3)).unwrap();
        assert_eq!(at(&s.coefficient(&[2]), 2), BigInt::from(7));
        let [a, b, c] = application_ii(2).unwrap();
        assert!(a.is_one());
        assert_eq!(at(&b, 3), BigInt::from(4));
        assert_eq!(at(&c, 2), BigInt::from(3 * 2 + 1));
    }

    #[test]
    fn ids_round_trip() {
        let mut ids = FormulaId::all_fixed();
        ids.extend([
            FormulaId::XiSingle(3, 2),
            FormulaId::XiNAssembled(3),
            FormulaId::SubgroupZeta(4),
        ]);
        for id in ids {
            assert_eq!(id.to_string().parse::<FormulaId>().unwrap(), id);
            id.resolve().unwrap();
        }
        assert!("w9".parse::<FormulaId>().unwrap().resolve().is_err());
        assert!("nope".parse::<FormulaId>().is_err());
    }
}
