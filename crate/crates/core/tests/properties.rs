use num_bigint::BigUint;
use proptest::prelude::*;
use thinbasis::sigma::MembershipTable;
use thinbasis::{BasisContext, GrowthSpec};

fn big_decimal() -> impl Strategy<Value = BigUint> {
    "[1-9][0-9]{0,300}".prop_map(|s| s.parse().unwrap())
}

fn growth() -> impl Strategy<Value = GrowthSpec> {
    prop_oneof![
        Just(GrowthSpec::Linear),
        Just(GrowthSpec::exponential_default()),
        Just(GrowthSpec::Exponential("1/3".parse().unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn represent_is_certified(n in big_decimal(), g in growth()) {
        let ctx = BasisContext::for_value(g, &n).unwrap();
        let rep = ctx.represent(&n).unwrap();
        prop_assert_eq!(&rep.a + &rep.a_prime, n.clone());
        prop_assert!(ctx.contains(&rep.a).unwrap());
        prop_assert!(ctx.contains(&rep.a_prime).unwrap());
        prop_assert!(rep.certify(&ctx, &n).unwrap());
    }

    #[test]
    fn digits_round_trip(n in big_decimal()) {
        let ctx = BasisContext::for_value(GrowthSpec::Linear, &n).unwrap();
        let d = ctx.digits(&n).unwrap();
        prop_assert_eq!(ctx.radix().from_digits(&d).unwrap(), n);
    }

    #[test]
    fn exact_count_within_bound(n in big_decimal()) {
        let ctx = BasisContext::for_value(GrowthSpec::Linear, &n).unwrap();
        let sigma = ctx.sigma_exact(&n).unwrap();
        prop_assert!(sigma >= BigUint::from(1u32));
        prop_assert!(sigma <= ctx.sigma_bound(&n).unwrap());
    }

    #[test]
    fn context_growth_does_not_change_answers(n in 0u64..5_000_000) {
        let small = BasisContext::for_value(GrowthSpec::Linear, &BigUint::from(n)).unwrap();
        let mut large = BasisContext::new(GrowthSpec::Linear, 1).unwrap();
        large.extend_to(small.capacity() + 4).unwrap();
        let n = BigUint::from(n);
        prop_assert_eq!(small.contains(&n).unwrap(), large.contains(&n).unwrap());
        prop_assert_eq!(small.represent(&n).unwrap(), large.represent(&n).unwrap());
        prop_assert_eq!(small.sigma_exact(&n).unwrap(), large.sigma_exact(&n).unwrap());
    }
}

#[test]
fn exact_count_matches_scan_on_a_window() {
    let limit = 200_000;
    for g in [GrowthSpec::Linear, GrowthSpec::exponential_default()] {
        let ctx = BasisContext::for_value(g, &BigUint::from(limit)).unwrap();
        let table = MembershipTable::build(&ctx, limit).unwrap();
        for n in (limit - 500..=limit).chain((0..limit).step_by(997)) {
            assert_eq!(ctx.sigma_exact_u64(n).unwrap(), table.sigma(n).unwrap() as u128, "n = {n}");
        }
    }
}

#[test]
fn membership_table_agrees_with_contains() {
    let ctx = BasisContext::for_value(GrowthSpec::Linear, &BigUint::from(100_000u32)).unwrap();
    let table = MembershipTable::build(&ctx, 100_000).unwrap();
    for n in 0..=100_000 {
        assert_eq!(table.contains(n), ctx.contains_u64(n).unwrap(), "n = {n}");
    }
}

#[test]
fn represent_reaches_large_levels() {
    let n: BigUint = "7".repeat(400).parse().unwrap();
    let ctx = BasisContext::for_value(GrowthSpec::exponential_default(), &n).unwrap();
    assert!(*ctx.primes().last().unwrap() > 100_000_000);
    let rep = ctx.represent(&n).unwrap();
    assert!(rep.certify(&ctx, &n).unwrap());
}

#[test]
fn exact_count_refuses_levels_beyond_the_prefix_count_limit() {
    let n: BigUint = "7".repeat(300).parse().unwrap();
    let ctx = BasisContext::for_value(GrowthSpec::exponential_default(), &n).unwrap();
    assert!(matches!(ctx.sigma_exact(&n), Err(thinbasis::Error::Capacity(_))));
}
