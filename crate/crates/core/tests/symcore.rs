use hyperjacobi::rat;
use hyperjacobi::series::pp_series;
use hyperjacobi::symcore::{eq_oracle, factor_rational, pp_derive, pp_mul, ParamExpr, ParamRat, PowerProduct, PowerSum, RatPoly};
use hyperjacobi::{Error, Rational};
use proptest::prelude::*;

fn bases() -> Vec<RatPoly> {
    [&[1, -1][..], &[1, 1], &[1, 2], &[1, 0, -1], &[1, 1, 1], &[1, -20, -8], &[1, 8]]
        .iter()
        .map(|c| RatPoly::from_ints(c))
        .collect()
}

fn exponent() -> impl Strategy<Value = ParamExpr> {
    (-2i64..=2, -2i64..=2, -2i64..=2, -4i64..=4, 1i64..=3)
        .prop_map(|(ka, kb, kc, n, d)| ParamExpr::new([rat(ka, 2), rat(kb, 1), rat(kc, 1)], rat(n, d)))
}

fn product() -> impl Strategy<Value = PowerProduct> {
    (
        prop_oneof![-3i64..=-1, 1i64..=3],
        prop::collection::vec((0..7usize, exponent()), 0..3),
        proptest::option::of(exponent()),
    )
        .prop_map(|(k, fs, xe)| {
            let bs = bases();
            let mut factors: Vec<(RatPoly, ParamExpr)> = fs.into_iter().map(|(i, e)| (bs[i].clone(), e)).collect();
            if let Some(e) = xe {
                factors.push((RatPoly::x(), e));
            }
            PowerProduct::from_factors(ParamRat::from_int(k), &factors).unwrap()
        })
}

fn sum() -> impl Strategy<Value = PowerSum> {
    prop::collection::vec(product(), 1..4).prop_map(PowerSum::from_terms)
}

/// Power sums whose `x` exponents all lie in `c + ℤ`, so their series exist.
fn single_class_sum() -> impl Strategy<Value = PowerSum> {
    prop::collection::vec((1i64..=3, 0i64..=2, prop::collection::vec((0..7usize, exponent()), 0..3)), 1..4).prop_map(|ts| {
        let bs = bases();
        let terms = ts
            .into_iter()
            .map(|(k, xk, fs)| {
                let mut factors: Vec<(RatPoly, ParamExpr)> = fs.into_iter().map(|(i, e)| (bs[i].clone(), e)).collect();
                factors.push((RatPoly::x(), ParamExpr::c() + ParamExpr::int(xk)));
                PowerProduct::from_factors(ParamRat::from_int(k), &factors).unwrap()
            })
            .collect();
        PowerSum::from_terms(terms)
    })
}

fn point() -> impl Strategy<Value = [Rational; 3]> {
    prop::array::uniform3((-9i64..=9, 1i64..=5)).prop_map(|ps| ps.map(|(p, q)| rat(p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(u in sum(), v in sum(), w in sum()) {
        prop_assert_eq!(pp_mul(&pp_mul(&u, &v), &w), pp_mul(&u, &pp_mul(&v, &w)));
    }

    #[test]
    fn product_is_commutative(u in sum(), v in sum()) {
        prop_assert_eq!(pp_mul(&u, &v), pp_mul(&v, &u));
    }

    #[test]
    fn one_is_a_unit(u in sum()) {
        prop_assert_eq!(pp_mul(&u, &PowerSum::one()), u);
    }

    #[test]
    fn leibniz_rule(u in sum(), v in sum(), seed in 0u64..1000) {
        let lhs = pp_derive(&pp_mul(&u, &v));
        let rhs = pp_mul(&pp_derive(&u), &v).add(&pp_mul(&u, &pp_derive(&v)));
        prop_assert!(eq_oracle(&lhs, &rhs, seed, 5).unwrap());
    }

    #[test]
    fn derivative_matches_series(u in single_class_sum(), p in point()) {
        let n = 12;
        let direct = pp_series(&pp_derive(&u), &p, n);
        let via = pp_series(&u, &p, n + 1).map(|s| s.derive());
        prop_assume!(direct.is_ok() && via.is_ok());
        prop_assert_eq!(direct.unwrap().first_mismatch(&via.unwrap()).unwrap(), None);
    }

    #[test]
    fn factorization_multiplies_back(
        picks in prop::collection::vec(0..7usize, 0..4),
        extra in prop::collection::vec(-100i64..=100, 1..4),
        unit in prop_oneof![-5i64..=-1, 1i64..=5],
    ) {
        let bs = bases();
        let mut p = RatPoly::constant(rat(unit, 1)).mul(&RatPoly::from_ints(&extra));
        for i in picks {
            if p.degree().unwrap_or(0) + bs[i].degree().unwrap() <= 8 {
                p = p.mul(&bs[i]);
            }
        }
        prop_assume!(!p.is_zero());
        let f = factor_rational(&p).unwrap();
        prop_assert_eq!(f.expand(), p);
        for (g, _) in &f.factors {
            prop_assert!(g.is_primitive_normalized());
        }
    }
}

#[test]
fn oracle_never_rejects_true_identities() {
    let a = ParamExpr::a();
    let h = PowerProduct::base_pow(&RatPoly::from_ints(&[1, 2]), a.clone()).unwrap();
    let f = PowerProduct::from_factors(
        ParamRat::one(),
        &[(RatPoly::x(), "(a+1)/2".parse().unwrap()), (RatPoly::from_ints(&[1, 0, 0, -1]), "(a+1)/2".parse().unwrap())],
    )
    .unwrap();
    let (hs, fs) = (PowerSum::from(h), PowerSum::from(f));
    let pairs = [
        (pp_derive(&pp_mul(&hs, &fs)), pp_mul(&pp_derive(&hs), &fs).add(&pp_mul(&hs, &pp_derive(&fs)))),
        (pp_derive(&pp_mul(&hs, &hs)), pp_mul(&hs, &pp_derive(&hs)).scale(&ParamRat::from_int(2))),
        (PowerSum::from(PowerProduct::base_pow(&RatPoly::from_ints(&[1, 0, -1]), a.clone()).unwrap()), {
            let p = PowerProduct::base_pow(&RatPoly::from_ints(&[1, -1]), a.clone()).unwrap();
            let q = PowerProduct::base_pow(&RatPoly::from_ints(&[1, 1]), a).unwrap();
            PowerSum::from(p.mul(&q))
        }),
    ];
    for seed in 0..1000 {
        for (u, v) in &pairs {
            assert!(eq_oracle(u, v, seed, 5).unwrap(), "seed {}", seed);
        }
    }
}

#[test]
fn oracle_rejects_perturbed_identity() {
    let h = PowerSum::from(PowerProduct::base_pow(&RatPoly::from_ints(&[1, 2]), ParamExpr::a()).unwrap());
    let d = pp_derive(&pp_mul(&h, &h));
    let wrong = pp_mul(&h, &pp_derive(&h)).scale(&ParamRat::from_int(3));
    for seed in 0..50 {
        assert!(!eq_oracle(&d, &wrong, seed, 5).unwrap());
    }
}

#[test]
fn factor_examples() {
    let f = factor_rational(&RatPoly::from_ints(&[1, 0, 0, -1])).unwrap();
    assert_eq!(f.to_strings(), ["(1+x+x^2)", "(1-x)"]);
    let f = factor_rational(&RatPoly::from_ints(&[1, -20, -8]).pow(2)).unwrap();
    assert_eq!(f.factors, vec![(RatPoly::from_ints(&[1, -20, -8]), 2)]);
    let f = factor_rational(&RatPoly::from_ints(&[0, 0, 4, 4])).unwrap();
    assert_eq!(f.unit, rat(4, 1));
    assert_eq!(f.expand(), RatPoly::from_ints(&[0, 0, 4, 4]));
}

#[test]
fn factor_degree_limit() {
    let p = RatPoly::from_ints(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert_eq!(factor_rational(&p), Err(Error::FactorDegreeExceeded(9)));
}

#[test]
fn parameter_in_base_is_rejected() {
    let p = hyperjacobi::symcore::Poly::new(vec![ParamRat::one(), ParamExpr::a().to_param_rat()]);
    assert_eq!(hyperjacobi::symcore::factor_small(&p), Err(Error::ParameterInBase));
}

#[test]
fn parameter_parser_forms() {
    let e: ParamExpr = "(a-b+1)/2".parse().unwrap();
    assert_eq!(e, ParamExpr::new([rat(1, 2), rat(-1, 2), rat(0, 1)], rat(1, 2)));
    let e: ParamExpr = "4a/3".parse().unwrap();
    assert_eq!(e, ParamExpr::a().scale(&rat(4, 3)));
    assert!("a*b".parse::<ParamExpr>().is_err());
}
