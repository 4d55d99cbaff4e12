use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use cotype_zeta::exact::{expand, gaussian_binomial, rat_equal, vars, BinomFactor, Vars};
use cotype_zeta::flags::{is_i_reduced_dvr, is_i_reduced_field};
use cotype_zeta::lattice::{hnf_enumerate, paper_enumerate};
use cotype_zeta::measures::{measure_oracle, s_grid, SLemmaInput};
use cotype_zeta::{
    Cotype, CountTable, DvrSpec, LatticeBasis, LaurentQ, MPoly, Predicates, RatFun, TruncRing,
    Truncation,
};

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn laurent() -> impl Strategy<Value = LaurentQ> {
    prop::collection::vec((-4i64..5, -9i64..10), 0..5).prop_map(LaurentQ::from_terms)
}

fn mpoly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((0u32..3, 0u32..3), laurent()), 0..4)
        .prop_map(|ts| MPoly::from_terms(&xy(), ts.into_iter().map(|((a, b), c)| (vec![a, b], c))))
}

fn factor() -> impl Strategy<Value = BinomFactor> {
    (-3i64..4, 0u32..3, 0u32..3)
        .prop_filter("needs a variable part", |(_, a, b)| a + b > 0)
        .prop_map(|(e, a, b)| BinomFactor::new(e, vec![a, b]).unwrap())
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (mpoly(), prop::collection::vec(factor(), 0..4))
        .prop_map(|(num, den)| RatFun::new(num, den).unwrap())
}

fn at(q: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(q))
}

fn binomial(n: u32, r: u32) -> BigInt {
    (0..r).fold(BigInt::from(1), |acc, k| acc * (n - k) / (k + 1))
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentQ::one(), a.clone());
    }

    #[test]
    fn laurent_evaluation_is_a_homomorphism(a in laurent(), b in laurent(), q in 2i64..7) {
        let q = at(q);
        prop_assert_eq!((&a * &b).eval_rational(&q), a.eval_rational(&q) * b.eval_rational(&q));
        prop_assert_eq!((&a + &b).eval_rational(&q), a.eval_rational(&q) + b.eval_rational(&q));
    }

    #[test]
    fn mpoly_ring_axioms(a in mpoly(), b in mpoly(), c in mpoly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn expansion_inverts_the_denominator(f in ratfun(), d in 0u32..7) {
        let trunc = Truncation::total(d);
        let s = expand(&f, &trunc).unwrap();
        let back = s.mul_poly(&f.denominator_poly());
        for m in trunc.monomials(2).unwrap() {
            prop_assert_eq!(back.coefficient(&m), f.numerator().coeff(&m), "at {:?}", m);
        }
    }

    #[test]
    fn rat_equal_sees_through_common_factors(f in ratfun(), g in factor()) {
        let extra = RatFun::new(g.to_poly(&xy()), vec![g]).unwrap();
        prop_assert!(rat_equal(&(&f * &extra), &f));
    }

    #[test]
    fn substitution_is_a_homomorphism(
        f in ratfun(),
        g in ratfun(),
        imgs in prop::collection::vec((-2i64..3, 1u32..3, 0u32..3), 2),
    ) {
        let t = vars(&["t", "u"]);
        let images: Vec<(i64, Vec<u32>)> = imgs.iter().map(|&(e, a, b)| (e, vec![a, b])).collect();
        let sub = |h: &RatFun| h.substitute(&t, &images).unwrap();
        prop_assert!(rat_equal(&sub(&(&f * &g)), &(&sub(&f) * &sub(&g))));
        prop_assert!(rat_equal(&sub(&(&f + &g)), &(&sub(&f) + &sub(&g))));
    }

    #[test]
    fn json_round_trips(f in ratfun()) {
        let v = f.to_json();
        let g = RatFun::from_json(&serde_json::from_str(&v.to_string()).unwrap()).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(MPoly::from_json(&xy(), &f.numerator().to_json()).unwrap(), f.numerator().clone());
        for (_, c) in f.numerator().terms() {
            prop_assert_eq!(&LaurentQ::from_json(&c.to_json()).unwrap(), c);
        }
    }

    #[test]
    fn gaussian_binomials(n in 0u32..12, r in 0u32..12) {
        prop_assume!(r <= n);
        let g = gaussian_binomial(n, r).unwrap();
        prop_assert_eq!(&g, &gaussian_binomial(n, n - r).unwrap());
        prop_assert_eq!(g.eval_rational(&at(1)), BigRational::from_integer(binomial(n, r)));
        if r >= 1 {
            // the second q-Pascal rule
            let alt = &gaussian_binomial(n - 1, r - 1).unwrap().shift((n - r) as i64)
                + &gaussian_binomial(n - 1, r).unwrap_or_else(|_| LaurentQ::zero());
            prop_assert_eq!(g, alt);
        }
    }

    #[test]
    fn truncated_ring_matches_exact_arithmetic(
        x in 0u64..4096,
        y in 0u64..4096,
        ring_id in 0usize..3,
        k in 1u32..5,
    ) {
        let spec = [DvrSpec::zp(3), DvrSpec::fq(2, 1), DvrSpec::fq(2, 2)][ring_id].clone().unwrap();
        let r = TruncRing::new(&spec, k).unwrap();
        let (x, y) = (x % r.size(), y % r.size());
        let (ex, ey) = (r.decode(x), r.decode(y));
        prop_assert_eq!(r.mul(x, y), r.encode(&spec.mul(&ex, &ey)));
        prop_assert_eq!(r.add(x, y), r.encode(&spec.add(&ex, &ey)));
        let v = spec.valuation(&ex).map_or(k, |v| v.min(k));
        prop_assert_eq!(r.valuation(x), v);
    }

    #[test]
    fn measure_oracle_is_stable_in_precision(idx in 0usize..1000, res in 0u32..27, p in 2u32..4) {
        let grid = s_grid(3);
        let spec = DvrSpec::zp(p).unwrap();
        let res = res % (p * p * p);
        let inp = SLemmaInput { alpha: res % p, beta: (res / p) % p, gamma: res / (p * p), v: grid[idx % grid.len()] };
        let k = *inp.v.iter().max().unwrap();
        let sys = inp.system();
        let base = measure_oracle(&spec, &sys, &inp.residues(), k).unwrap();
        prop_assert_eq!(measure_oracle(&spec, &sys, &inp.residues(), k + 1).unwrap(), base);
    }

    #[test]
    fn canonical_form_ignores_generator_order_and_padding(
        entries in prop::collection::vec(0u64..64, 9),
        ring_id in 0usize..2,
        rot in 0usize..3,
    ) {
        let spec = [DvrSpec::zp(2), DvrSpec::fq(2, 1)][ring_id].clone().unwrap();
        let mut gens: Vec<Vec<_>> = entries
            .chunks(3)
            .map(|c| c.iter().map(|&i| spec.rep_from_index(i, 6)).collect())
            .collect();
        // pi^4 o^3 is inside the span, so padding 4 and 7 describe the same module
        for i in 0..3 {
            gens.push((0..3).map(|j| if i == j { spec.pi_pow(4) } else { spec.zero() }).collect());
        }
        let a = LatticeBasis::from_generators(&spec, 3, &gens, 4).unwrap();
        let b = LatticeBasis::from_generators(&spec, 3, &gens, 7).unwrap();
        gens.rotate_left(rot);
        let c = LatticeBasis::from_generators(&spec, 3, &gens, 4).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
        for g in &gens {
            prop_assert!(a.contains(g));
        }
        prop_assert_eq!(LatticeBasis::new(&spec, a.rows().to_vec()).unwrap(), a.clone());
    }
}

#[test]
fn count_table_json_round_trip() {
    let spec = DvrSpec::zp(3).unwrap();
    let t = hnf_enumerate(&spec, 3, 3, Predicates::CLOSED, u64::MAX).unwrap();
    let text = t.to_json().to_string();
    assert_eq!(
        CountTable::from_json(&serde_json::from_str(&text).unwrap()).unwrap(),
        t
    );
    for c in t.entries.keys() {
        assert_eq!(Cotype::from_json(3, &c.to_json()).unwrap(), *c);
    }
}

#[test]
fn parametrization_agrees_over_power_series() {
    let c = Cotype::from_exponents(&[3, 1, 1]).unwrap();
    for spec in [DvrSpec::zp(2).unwrap(), DvrSpec::fq(2, 1).unwrap()] {
        let t = hnf_enumerate(&spec, 3, 5, Predicates::CLOSED, u64::MAX).unwrap();
        let rep = paper_enumerate(&spec, &c, u64::MAX).unwrap();
        assert_eq!(rep.count, t.get(&c), "{spec}");
        assert!(rep.uniform() && rep.disjoint && rep.cotype_mismatches == 0);
    }
}

#[test]
fn reduction_mod_maximal_ideal_preserves_reducedness() {
    // entries 0, 1, pi, 1 + pi: every zero/one/unit/non-unit pattern, lifted
    let spec = DvrSpec::zp(3).unwrap();
    let ff = spec.residue_field().unwrap();
    let vals = [0i64, 1, 3, 4];
    let mut hits = 0;
    for code in 0..4u32.pow(9) {
        let m: Vec<Vec<_>> = (0..3)
            .map(|r| {
                (0..3)
                    .map(|c| spec.from_int(vals[(code / 4u32.pow(3 * r + c) % 4) as usize]))
                    .collect()
            })
            .collect();
        let res: Vec<Vec<u32>> = m
            .iter()
            .map(|row| row.iter().map(|x| spec.residue(x)).collect())
            .collect();
        for iset in [&[][..], &[1], &[2], &[1, 2]] {
            if let Ok(true) = is_i_reduced_dvr(&spec, &m, iset) {
                hits += 1;
                assert!(
                    is_i_reduced_field(&ff, &res, iset).unwrap(),
                    "{m:?} {iset:?}"
                );
            }
        }
    }
    assert!(hits > 100, "only {hits} reduced lifts");
}
