//! Flag combinatorics over the residue field: I-reduced matrices, the
//! permutation counts `tau_{I,E}`, very elemental matrices and `theta_{n,iota}`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::exact::check_flag_set;
use crate::tdvr::{DvrElem, DvrSpec, FiniteField};

/// Block structure of `L_I`: blocks of sizes `i_1, i_2 - i_1, ..., n - i_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagShape {
    n: usize,
    iset: Vec<u32>,
    block: Vec<usize>,
}

impl FlagShape {
    pub fn new(n: u32, iset: &[u32]) -> Result<Self> {
        if n == 0 {
            return domain("n must be positive");
        }
        check_flag_set(n, iset)?;
        let block = (0..n)
            .map(|r| iset.iter().filter(|&&i| i <= r).count())
            .collect();
        Ok(Self {
            n: n as usize,
            iset: iset.to_vec(),
            block,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iset(&self) -> &[u32] {
        &self.iset
    }

    /// Block index of a 0-based row or column.
    pub fn block_of(&self, r: usize) -> usize {
        self.block[r]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut b = vec![0];
        b.extend(self.iset.iter().map(|&i| i as usize));
        b.push(self.n);
        b.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// 0-based positions strictly below the block diagonal, row-major.
    pub fn below_positions(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|r| (0..self.n).map(move |c| (r, c)))
            .filter(|&(r, c)| self.block[c] < self.block[r])
            .collect()
    }

    /// `N = sum_j i_j (i_{j+1} - i_j)`.
    pub fn big_n(&self) -> u32 {
        let mut bounds = self.iset.clone();
        bounds.push(self.n as u32);
        bounds.windows(2).map(|w| w[0] * (w[1] - w[0])).sum()
    }
}

/// An element of `L_I(F_q)`: block lower unitriangular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    shape: FlagShape,
    m: Vec<Vec<u32>>,
}

impl ResidueMatrix {
    /// Fills the below-diagonal blocks from `vals` in row-major order.
    pub fn from_below(shape: &FlagShape, vals: &[u32]) -> Result<Self> {
        let pos = shape.below_positions();
        if pos.len() != vals.len() {
            return domain(format!(
                "expected {} entries, got {}",
                pos.len(),
                vals.len()
            ));
        }
        let n = shape.n;
        let mut m = vec![vec![0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (&(r, c), &v) in pos.iter().zip(vals) {
            m[r][c] = v;
        }
        Ok(Self {
            shape: shape.clone(),
            m,
        })
    }

    pub fn shape(&self) -> &FlagShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.m
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.m[r][c]
    }

    /// Every element of `L_I(F_q)`, `q^N` of them.
    pub fn all(shape: &FlagShape, ff: &FiniteField) -> impl Iterator<Item = ResidueMatrix> {
        let npos = shape.below_positions().len();
        let shape = shape.clone();
        let q = ff.order();
        (0..(q as u64).pow(npos as u32)).map(move |mut idx| {
            let vals: Vec<u32> = (0..npos)
                .map(|_| {
                    let d = (idx % q as u64) as u32;
                    idx /= q as u64;
                    d
                })
                .collect();
            ResidueMatrix::from_below(&shape, &vals).expect("sizes agree")
        })
    }

    /// The block of rows `i..n`, columns `0..i`, for `I = {i}`.
    pub fn lower_block(&self) -> Result<Vec<Vec<u32>>> {
        let [i] = self.shape.iset[..] else {
            return domain("lower_block needs a single-element I");
        };
        let i = i as usize;
        Ok(self.m[i..].iter().map(|row| row[..i].to_vec()).collect())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Entry {
    Zero,
    One,
    Unit,
    NonUnit,
}

fn reduced_by(n: usize, iset: &[u32], entry: impl Fn(usize, usize) -> Entry) -> bool {
    let mut pivots = Vec::with_capacity(n);
    for r in 0..n {
        let Some(c) = (0..n).find(|&c| matches!(entry(r, c), Entry::One | Entry::Unit)) else {
            return false;
        };
        if entry(r, c) != Entry::One {
            return false;
        }
        pivots.push(c);
    }
    for (r, &c) in pivots.iter().enumerate() {
        if (0..r).any(|above| entry(above, c) != Entry::Zero) {
            return false;
        }
    }
    let shape_block = |r: usize| iset.iter().filter(|&&i| i as usize <= r).count();
    (1..n).all(|r| shape_block(r) != shape_block(r - 1) || pivots[r] > pivots[r - 1])
}

fn field_rank(ff: &FiniteField, a: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = a.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = ff.inv(m[rank][c]).expect("nonzero");
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = ff.mul(m[r][c], inv);
                let pivot = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot) {
                    *x = ff.sub(*x, ff.mul(f, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

fn check_square(n: usize, rows: usize, cols: impl Iterator<Item = usize>) -> Result<()> {
    if rows != n || cols.into_iter().any(|c| c != n) {
        return domain("matrix must be square");
    }
    Ok(())
}

/// Definition check of I-reducedness over `F_q`. Errors on singular input.
pub fn is_i_reduced_field(ff: &FiniteField, a: &[Vec<u32>], iset: &[u32]) -> Result<bool> {
    let n = a.len();
    check_square(n, a.len(), a.iter().map(Vec::len))?;
    check_flag_set(n as u32, iset)?;
    if field_rank(ff, a) < n {
        return domain("matrix is singular");
    }
    Ok(reduced_by(n, iset, |r, c| match a[r][c] {
        0 => Entry::Zero,
        1 => Entry::One,
        _ => Entry::Unit,
    }))
}

/// Definition check of I-reducedness over a DVR, using the valuation-0 test
/// for invertible entries. Errors on input not in `GL_n(o)`.
pub fn is_i_reduced_dvr(spec: &DvrSpec, a: &[Vec<DvrElem>], iset: &[u32]) -> Result<bool> {
    let n = a.len();
    check_square(n, a.len(), a.iter().map(Vec::len))?;
    check_flag_set(n as u32, iset)?;
    let ff = spec.residue_field()?;
    let res: Vec<Vec<u32>> = a
        .iter()
        .map(|row| row.iter().map(|x| spec.residue(x)).collect())
        .collect();
    if field_rank(&ff, &res) < n {
        return domain("matrix is not invertible over the ring");
    }
    let one = spec.one();
    Ok(reduced_by(n, iset, |r, c| {
        let x = &a[r][c];
        if x.is_zero() {
            Entry::Zero
        } else if *x == one {
            Entry::One
        } else if spec.is_unit(x) {
            Entry::Unit
        } else {
            Entry::NonUnit
        }
    }))
}

/// Exhaustive count of I-reduced matrices over `F_q`.
///
/// Rows are generated as "leading 1 then arbitrary tail" (the only shape a
/// row of an invertible reduced matrix can have over a field) and the
/// remaining conditions are checked as each row is placed.
pub fn enumerate_reduced(n: u32, iset: &[u32], ff: &FiniteField, max_work: u64) -> Result<u64> {
    let shape = FlagShape::new(n, iset)?;
    let n = n as usize;
    let q = ff.order() as u64;
    // rows as (pivot, entries)
    let mut cands: Vec<(usize, Vec<u32>)> = Vec::new();
    for c in 0..n {
        let tail = n - c - 1;
        let total = q.checked_pow(tail as u32).ok_or(Error::Overflow {
            guard: "reduced-matrix rows",
            limit: max_work,
        })?;
        if total > max_work {
            return Err(Error::Overflow {
                guard: "reduced-matrix rows",
                limit: max_work,
            });
        }
        for mut idx in 0..total {
            let mut row = vec![0u32; n];
            row[c] = 1;
            for x in row.iter_mut().skip(c + 1) {
                *x = (idx % q) as u32;
                idx /= q;
            }
            cands.push((c, row));
        }
    }
    let mut work = 0u64;
    let mut rows: Vec<&(usize, Vec<u32>)> = Vec::with_capacity(n);
    let count = dfs_reduced(&shape, &cands, &mut rows, &mut work, max_work)?;
    Ok(count)
}

fn dfs_reduced<'a>(
    shape: &FlagShape,
    cands: &'a [(usize, Vec<u32>)],
    rows: &mut Vec<&'a (usize, Vec<u32>)>,
    work: &mut u64,
    max_work: u64,
) -> Result<u64> {
    let r = rows.len();
    if r == shape.n {
        return Ok(1);
    }
    let mut total = 0;
    for cand in cands {
        *work += 1;
        if *work > max_work {
            return Err(Error::Overflow {
                guard: "reduced-matrix search",
                limit: max_work,
            });
        }
        let c = cand.0;
        // zeros above the new leading 1; this also keeps pivots distinct
        if rows.iter().any(|(_, above)| above[c] != 0) {
            continue;
        }
        if r > 0 && shape.block_of(r) == shape.block_of(r - 1) && c <= rows[r - 1].0 {
            continue;
        }
        rows.push(cand);
        total += dfs_reduced(shape, cands, rows, work, max_work)?;
        rows.pop();
    }
    Ok(total)
}

/// `(E sigma)[i][j] = E[i][sigma[j]]`.
fn permute_cols(m: &[Vec<u32>], sigma: &[usize]) -> Vec<Vec<u32>> {
    m.iter()
        .map(|row| sigma.iter().map(|&s| row[s]).collect())
        .collect()
}

/// The permutations `sigma` with `E sigma` I-reduced.
pub fn tau_set(e: &ResidueMatrix) -> Vec<Vec<usize>> {
    let n = e.shape.n;
    let iset = &e.shape.iset;
    (0..n)
        .permutations(n)
        .filter(|sigma| {
            let m = permute_cols(&e.m, sigma);
            reduced_by(n, iset, |r, c| match m[r][c] {
                0 => Entry::Zero,
                1 => Entry::One,
                _ => Entry::Unit,
            })
        })
        .collect()
}

/// `tau_{I,E}` by brute force over `S_n`.
pub fn tau(e: &ResidueMatrix) -> u64 {
    tau_set(e).len() as u64
}

/// The closed-form table for `n = 3`, `I = {1,2}`, stated in terms of the
/// zero pattern of `(alpha, beta, gamma)`.
pub fn tau_table_value(alpha: u32, beta: u32, gamma: u32) -> u64 {
    let (a, b, g) = (alpha != 0, beta != 0, gamma != 0);
    let nonzero = [a, b, g].iter().filter(|&&x| x).count();
    if a && g {
        1
    } else if (a ^ g) && b {
        2
    } else if nonzero == 1 {
        3
    } else if nonzero == 0 {
        6
    } else {
        unreachable!("patterns are exhaustive")
    }
}

/// `E = [[1,0,0],[alpha,1,0],[beta,gamma,1]]`.
pub fn abc_matrix(alpha: u32, beta: u32, gamma: u32) -> ResidueMatrix {
    let shape = FlagShape::new(3, &[1, 2]).expect("valid shape");
    ResidueMatrix::from_below(&shape, &[alpha, beta, gamma]).expect("three entries")
}

/// Entries in `{0,1}` and at most one `1` per column.
pub fn is_very_elemental(m: &[Vec<u32>]) -> bool {
    if m.iter().flatten().any(|&x| x > 1) {
        return false;
    }
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).all(|c| m.iter().filter(|row| row[c] == 1).count() <= 1)
}

/// Coefficient of `z^iota` in `prod_{i=1}^{n-iota+1} 1/(1 - i z)`.
pub fn theta_gf(n: u32, iota: u32) -> Result<BigInt> {
    if iota == 0 || iota >= n {
        return domain(format!(
            "theta needs 1 <= iota <= n-1, got n={n}, iota={iota}"
        ));
    }
    let d = iota as usize;
    let mut s = vec![BigInt::zero(); d + 1];
    s[0] = BigInt::from(1);
    for i in 1..=(n - iota + 1) {
        let i = BigInt::from(i);
        for k in 1..=d {
            let prev = s[k - 1].clone();
            s[k] += &i * prev;
        }
    }
    Ok(s[d].clone())
}

/// `sum_E delta_E tau_{{iota},E}` over `L_{{iota}}(F_q)`.
pub fn theta_direct(n: u32, iota: u32, ff: &FiniteField, max_work: u64) -> Result<u64> {
    if iota == 0 || iota >= n {
        return domain(format!(
            "theta needs 1 <= iota <= n-1, got n={n}, iota={iota}"
        ));
    }
    let shape = FlagShape::new(n, &[iota])?;
    guard_sum(&shape, ff, max_work)?;
    let mut total = 0;
    for e in ResidueMatrix::all(&shape, ff) {
        if is_very_elemental(&e.lower_block()?) {
            total += tau(&e);
        }
    }
    Ok(total)
}

fn guard_sum(shape: &FlagShape, ff: &FiniteField, max_work: u64) -> Result<()> {
    let nfact: u64 = (1..=shape.n as u64).product();
    let cost = (ff.order() as u64)
        .checked_pow(shape.big_n())
        .and_then(|x| x.checked_mul(nfact));
    match cost {
        Some(c) if c <= max_work => Ok(()),
        _ => Err(Error::Overflow {
            guard: "flag sum",
            limit: max_work,
        }),
    }
}

/// `sum_{E in L_I(F_q)} tau_{I,E}`.
pub fn sum_tau(n: u32, iset: &[u32], ff: &FiniteField, max_work: u64) -> Result<u64> {
    let shape = FlagShape::new(n, iset)?;
    guard_sum(&shape, ff, max_work)?;
    Ok(ResidueMatrix::all(&shape, ff).map(|e| tau(&e)).sum())
}

/// The seven weighted sums `sum tau_{a,b,c} * (indicator)` over `F_q^3`,
/// in the order listed by [`expected_weighted_tau_sums`].
pub fn weighted_tau_sums(ff: &FiniteField) -> [i64; 7] {
    let z = |x: u32| x == 0;
    let sq_minus = |x: u32| ff.sub(ff.mul(x, x), x);
    let one = 1;
    let mut out = [0i64; 7];
    for a in ff.elements() {
        for b in ff.elements() {
            for c in ff.elements() {
                let t = tau(&abc_matrix(a, b, c)) as i64;
                let r3 = ff.sub(sq_minus(b), ff.mul(a, sq_minus(c)));
                let ind = [
                    z(r3) as i64,
                    (z(sq_minus(b)) && z(sq_minus(c))) as i64,
                    (z(a) && z(sq_minus(b))) as i64 + (z(ff.sub(a, one)) && z(ff.sub(b, c))) as i64,
                    (!z(sq_minus(a)) && z(ff.sub(b, c)) && z(sq_minus(c))) as i64,
                    (z(sq_minus(a)) && z(ff.sub(b, c)) && z(sq_minus(c))) as i64,
                    (z(a) && z(b) && z(ff.sub(c, one))) as i64
                        + (z(a) && z(ff.sub(b, one)) && z(c)) as i64,
                    (z(ff.sub(b, c)) && z(sq_minus(c))) as i64,
                ];
                for (o, i) in out.iter_mut().zip(ind) {
                    *o += t * i;
                }
            }
        }
    }
    out
}

/// `q^2+8q+1, 7(q+1), 6(q+1), 4(q-2), 12, 6, 4(q+1)`.
pub fn expected_weighted_tau_sums(q: i64) -> [i64; 7] {
    [
        q * q + 8 * q + 1,
        7 * (q + 1),
        6 * (q + 1),
        4 * (q - 2),
        12,
        6,
        4 * (q + 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gaussian_multinomial;

    fn ex_a(p: u32) -> Vec<Vec<u32>> {
        let m = |x: i64| x.rem_euclid(p as i64) as u32;
        [
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [1, 0, 0, 1, -1, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 1, 0, 3, 1, 1],
            [0, 0, 1, 1, 1, 0],
        ]
        .iter()
        .map(|r| r.iter().map(|&x| m(x)).collect())
        .collect()
    }

    #[test]
    fn worked_examples_are_reduced() {
        for p in [2, 3, 5, 7] {
            let ff = FiniteField::new(p, 1).unwrap();
            assert!(is_i_reduced_field(&ff, &ex_a(p), &[2, 4]).unwrap());
        }
        let spec = DvrSpec::zp(5).unwrap();
        let p = 5i64;
        let b: Vec<Vec<DvrElem>> = [
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [1, 0, 0, 1, p, 0],
            [0, 0, 0, -p, p, 1],
            [p, 1, 0, 3, 1, 1],
            [p * p, 0, 1, 1, 1, p],
        ]
        .iter()
        .map(|r| r.iter().map(|&x| spec.from_int(x)).collect())
        .collect();
        assert!(is_i_reduced_dvr(&spec, &b, &[2, 4]).unwrap());
        let id: Vec<Vec<u32>> = (0..4)
            .map(|i| (0..4).map(|j| (i == j) as u32).collect())
            .collect();
        let ff = FiniteField::new(3, 1).unwrap();
        for iset in [&[][..], &[1], &[1, 3], &[1, 2, 3]] {
            assert!(is_i_reduced_field(&ff, &id, iset).unwrap());
        }
        assert!(is_i_reduced_field(&ff, &[vec![1, 1], vec![1, 1]], &[1]).is_err());
    }

    #[test]
    fn reduced_counts() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(enumerate_reduced(3, &[1, 2], &f2, u64::MAX).unwrap(), 21);
        assert_eq!(enumerate_reduced(2, &[1], &f3, u64::MAX).unwrap(), 4);
        assert_eq!(enumerate_reduced(4, &[], &f3, u64::MAX).unwrap(), 1);
        let want = gaussian_multinomial(4, &[1, 3])
            .unwrap()
            .eval_integer(3)
            .unwrap();
        assert_eq!(
            BigInt::from(enumerate_reduced(4, &[1, 3], &f3, u64::MAX).unwrap()),
            want
        );
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&abc_matrix(0, 0, 0)), 6);
        assert_eq!(tau(&abc_matrix(1, 0, 1)), 1);
        assert_eq!(tau(&abc_matrix(0, 1, 1)), 2);
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(sum_tau(2, &[1], &f2, u64::MAX).unwrap(), 3);
        assert_eq!(sum_tau(3, &[1, 2], &f2, u64::MAX).unwrap(), 21);
    }

    #[test]
    fn very_elemental() {
        assert!(is_very_elemental(&[vec![0, 0], vec![0, 0]]));
        assert!(is_very_elemental(&[vec![0, 1], vec![0, 0]]));
        assert!(!is_very_elemental(&[vec![1, 0], vec![1, 0]]));
        assert!(!is_very_elemental(&[vec![2]]));
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta_gf(2, 1).unwrap(), BigInt::from(3));
        assert_eq!(theta_gf(3, 1).unwrap(), BigInt::from(6));
        assert_eq!(theta_gf(3, 2).unwrap(), BigInt::from(7));
        // h_2(1,2,3) = 1+2+3+4+6+9
        assert_eq!(theta_gf(4, 2).unwrap(), BigInt::from(25));
        let f2 = FiniteField::new(2, 1).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(theta_direct(2, 1, &f2, u64::MAX).unwrap(), 3);
        assert_eq!(theta_direct(3, 1, &f3, u64::MAX).unwrap(), 6);
        assert_eq!(theta_direct(4, 2, &f2, u64::MAX).unwrap(), 25);
    }

    #[test]
    fn guard_fires() {
        let f3 = FiniteField::new(3, 1).unwrap();
        assert!(matches!(
            sum_tau(4, &[1, 2, 3], &f3, 10),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn tau_table_and_weighted_sums() {
        for q in [2, 3, 4, 5] {
            let ff = FiniteField::of_order(q).unwrap();
            for a in ff.elements() {
                for b in ff.elements() {
                    for c in ff.elements() {
                        assert_eq!(
                            tau(&abc_matrix(a, b, c)),
                            tau_table_value(a, b, c),
                            "q={q} ({a},{b},{c})"
                        );
                    }
                }
            }
            assert_eq!(
                weighted_tau_sums(&ff),
                expected_weighted_tau_sums(q as i64),
                "q={q}"
            );
        }
    }
}
