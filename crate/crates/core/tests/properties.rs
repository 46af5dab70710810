use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qlie_core::cg::{sigma_cg, sigma_cg_family};
use qlie_core::laurent::{op_r, op_rhat, permute, reg, LaurentFn, Slots, SpaceConfig};
use qlie_core::linalg::{outside_span, SparseRow};
use qlie_core::scalar::Monomial;
use qlie_core::{Operator, Pair, Scalar, Specialization};

fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=30, 1i64..=9, any::<bool>())
        .prop_map(|(n, d, neg)| BigRational::new(BigInt::from(if neg { -n } else { n }), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((0u32..4, 0u32..4, -3i32..=3, rational()), 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(b, c, p, k)| Scalar::term(Monomial::new(b, c, p), k))
            .fold(Scalar::zero(), |acc, t| acc + t)
    })
}

fn small_scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((0u32..2, 0u32..2, -1i32..=1, -3i64..=3), 0..3).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(b, c, p, k)| Scalar::term(Monomial::new(b, c, p), BigRational::from_integer(k.into())))
            .fold(Scalar::zero(), |acc, t| acc + t)
    })
}

fn laurent(n: usize, arity: usize) -> impl Strategy<Value = LaurentFn> {
    let hi = n as i32 - 1;
    prop::collection::vec((prop::collection::vec(-1i32..=hi, arity), small_scalar()), 0..6).prop_map(
        move |terms| {
            let cfg = SpaceConfig::new(n).unwrap();
            terms.into_iter().fold(LaurentFn::zero(cfg, arity).unwrap(), |acc, (e, c)| {
                acc.add(&LaurentFn::monomial(cfg, &e, c).unwrap()).unwrap()
            })
        },
    )
}

fn operator(n: usize) -> impl Strategy<Value = Operator> {
    let d = n + 1;
    prop::collection::vec((0..d, 0..d, 0..d, 0..d, small_scalar()), 0..10).prop_map(move |entries| {
        let mut op = Operator::zero(n, 2).unwrap();
        for (i, j, k, l, v) in entries {
            op.set(&[i, j], &[k, l], v).unwrap();
        }
        op
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_display_parse_round_trip(s in scalar()) {
        let text = s.to_string();
        let back: Scalar = text.parse().unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        a in scalar(), b in scalar(),
        beta in rational(), c in rational(), p in nonzero_rational(),
    ) {
        let ev = |s: &Scalar| s.eval(&beta, &c, &p).unwrap();
        prop_assert_eq!(ev(&(&a + &b)), ev(&a) + ev(&b));
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(-&a)), -ev(&a));
    }

    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn exact_division_inverts_multiplication(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b), Some(a));
    }

    #[test]
    fn specialization_agrees_with_evaluation(
        a in scalar(), beta in rational(), c in rational(), p in nonzero_rational(),
    ) {
        let spec = Specialization { beta: Some(beta.clone()), c: Some(c.clone()), p: Some(p.clone()) };
        let s = a.specialize(&spec).unwrap();
        prop_assert_eq!(s, Scalar::from_rational(a.eval(&beta, &c, &p).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reg_is_idempotent_and_linear(f in laurent(3, 2), g in laurent(3, 2)) {
        prop_assert_eq!(reg(&reg(&f)), reg(&f));
        prop_assert_eq!(reg(&f.add(&g).unwrap()), reg(&f).add(&reg(&g)).unwrap());
    }

    #[test]
    fn permutation_is_an_involution(f in laurent(3, 3), pair in 0usize..3) {
        let slots = [(0, 1), (0, 2), (1, 2)].map(|(a, b)| Slots::new(a, b).unwrap())[pair];
        prop_assert_eq!(permute(&permute(&f, slots).unwrap(), slots).unwrap(), f.clone());
        prop_assert_eq!(reg(&permute(&f, slots).unwrap()), permute(&reg(&f), slots).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rhat_is_flip_after_one_plus_r(f in (1usize..=5).prop_flat_map(|n| laurent(n, 2))) {
        let lhs = op_rhat(&f, Slots::XY).unwrap();
        let rhs = permute(&f.add(&op_r(&f, Slots::XY).unwrap()).unwrap(), Slots::XY).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn r_is_linear(f in laurent(3, 2), g in laurent(3, 2), a in small_scalar(), b in small_scalar()) {
        let combo = f.scale(&a).add(&g.scale(&b)).unwrap();
        let lhs = op_r(&combo, Slots::XY).unwrap();
        let rhs = op_r(&f, Slots::XY).unwrap().scale(&a).add(&op_r(&g, Slots::XY).unwrap().scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative(a in operator(2), b in operator(2), c in operator(2)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in operator(2), b in operator(2), pair in 0usize..3) {
        let pair = Pair::ALL[pair];
        let lhs = a.compose(&b).unwrap().embed(pair).unwrap();
        let rhs = a.embed(pair).unwrap().compose(&b.embed(pair).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(
            a.add(&b).unwrap().embed(pair).unwrap(),
            a.embed(pair).unwrap().add(&b.embed(pair).unwrap()).unwrap()
        );
    }

    #[test]
    fn json_round_trip(a in operator(3)) {
        prop_assert_eq!(Operator::from_json(&a.to_json().unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn span_contains_combinations_of_its_rows(
        rows in prop::collection::vec(prop::collection::vec(small_scalar(), 4), 1..4),
        weights in prop::collection::vec(small_scalar(), 4),
    ) {
        let base: Vec<SparseRow> = rows
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        let mut combo = SparseRow::new();
        for (row, w) in rows.iter().zip(&weights) {
            for (c, v) in row.iter().enumerate() {
                let e = combo.entry(c).or_default();
                *e += v * w;
            }
        }
        combo.retain(|_, v| !v.is_zero());
        let mut fresh = combo.clone();
        fresh.insert(4, Scalar::one());
        let res = outside_span(&base, &[combo, fresh]).unwrap();
        prop_assert_eq!(res.outside, vec![1]);
    }
}

#[test]
fn family_at_p_one_is_sigma() {
    let spec = Specialization {
        p: Some(BigRational::from_integer(1.into())),
        ..Specialization::default()
    };
    for n in 1..=6 {
        assert_eq!(sigma_cg_family(n).unwrap().specialize(&spec).unwrap(), sigma_cg(n).unwrap());
    }
}

#[test]
fn rhat_keeps_the_truncated_space() {
    // every basis image stays inside exponents -1..=n-1 (construction errors otherwise)
    for n in 1..=5 {
        let cfg = SpaceConfig::new(n).unwrap();
        for k in -1..n as i32 {
            for l in -1..n as i32 {
                let f = LaurentFn::monomial(cfg, &[k, l], Scalar::one()).unwrap();
                let img = op_rhat(&f, Slots::XY).unwrap();
                assert!(img.terms().all(|(e, _)| e.iter().all(|&x| (-1..n as i32).contains(&x))));
            }
        }
    }
}
