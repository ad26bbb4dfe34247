use finkrn::functor::{cond_expectation, lipschitz_check};
use finkrn::sample::{random_kernel, random_partition, random_rv, random_space, rng};
use finkrn::topology::{one_sided_distance, two_sided_distance};
use finkrn::{cond_exp_kernel, Exponent, ProbSpace, Rational};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::ONE), Just(Exponent::TWO), Just(Exponent::Finite(3)), Just(Exponent::Infinity)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bayes_inverse_is_measure_preserving(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
        let mut r = rng(seed, 0);
        let p: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let k = random_kernel(&mut r, &p, m);
        let inv = k.bayes_inverse().unwrap();
        prop_assert!(inv.is_measure_preserving());
        prop_assert!(inv.bayes_inverse().unwrap().as_equal(&k).unwrap());
    }

    #[test]
    fn pullback_contracts(seed in any::<u64>(), n in 1usize..8, m in 1usize..8, e in exponent()) {
        let mut r = rng(seed, 1);
        let p: ProbSpace<f64> = random_space(&mut r, n, 0.2);
        let k = random_kernel(&mut r, &p, m);
        let g = random_rv(&mut r, k.codomain());
        prop_assert!(lipschitz_check(&k, &g, e).unwrap());
    }

    #[test]
    fn cond_exp_is_idempotent_projection(seed in any::<u64>(), n in 1usize..9, blocks in 1usize..5) {
        let mut r = rng(seed, 2);
        let p: ProbSpace<Rational> = random_space(&mut r, n, 0.25);
        let part = random_partition(&mut r, n, blocks);
        let f = random_rv(&mut r, &p);
        let once = cond_expectation(&f, &part).unwrap();
        let twice = cond_expectation(&once, &part).unwrap();
        prop_assert!(once.as_equal(&twice).unwrap());
        let e = cond_exp_kernel(&p, &part).unwrap();
        prop_assert!(e.kernel().pullback(&f).unwrap().as_equal(&once).unwrap());
    }

    #[test]
    fn metric_axioms(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
        let mut r = rng(seed, 3);
        let p: ProbSpace<f64> = random_space(&mut r, n, 0.2);
        let a = random_kernel(&mut r, &p, m);
        let b = finkrn::sample::random_kernel_between(&mut r, &p, a.codomain());
        let c = finkrn::sample::random_kernel_between(&mut r, &p, a.codomain());
        let d = |x, y| one_sided_distance(x, y).unwrap();
        prop_assert!(d(&a, &a) == 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() < 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(two_sided_distance(&a, &b).unwrap() >= d(&a, &b) - 1e-12);
    }
}
