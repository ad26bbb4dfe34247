mod common;

use common::{block_average_oracle, ln_norm_oracle, one_sided_oracle, operator_distance_oracle, rows};
use finkrn::functor::{adjointness_defect, cond_expectation, lipschitz_check, vector_cond_expectation};
use finkrn::sample::{random_coarsening_chain, random_kernel, random_kernel_between, random_partition, random_rv, random_space, random_vec_rv, rng};
use finkrn::topology::{one_sided_distance, operator_distance, perturb_towards_independent, two_sided_distance};
use finkrn::{Exponent, ProbSpace, RandomVar, Rational, Scalar};
use num_traits::Zero;
use rand::Rng;

#[test]
fn cond_expectation_matches_block_averages() {
    let mut r = rng(300, 0);
    for _ in 0..50 {
        let n = r.random_range(1..=10);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let p = random_partition(&mut r, n, 4);
        let f = random_rv(&mut r, &space);
        let got = cond_expectation(&f, &p).unwrap();
        for (x, want) in block_average_oracle(space.weights(), f.values(), p.labels()).iter().enumerate() {
            if let Some(w) = want {
                assert_eq!(got.value(x), w);
            }
        }
        assert_eq!(got.expectation(), f.expectation());
    }
}

#[test]
fn tower_property() {
    let mut r = rng(301, 0);
    for _ in 0..40 {
        let n = r.random_range(2..=12);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let chain = random_coarsening_chain(&mut r, n, 4);
        let f = random_rv(&mut r, &space);
        for i in 0..chain.len() {
            for j in i..chain.len() {
                // chain[j] is coarser than chain[i]
                let fine = cond_expectation(&f, &chain[i]).unwrap();
                let lhs = cond_expectation(&fine, &chain[j]).unwrap();
                let rhs = cond_expectation(&f, &chain[j]).unwrap();
                assert!(lhs.as_equal(&rhs).unwrap());
            }
        }
        let g = random_vec_rv(&mut r, &space, 3);
        let eg = vector_cond_expectation(&g, &chain[1]).unwrap();
        for c in 0..3 {
            let scalar = cond_expectation(&g.coordinate(c), &chain[1]).unwrap();
            assert!(eg.coordinate(c).as_equal(&scalar).unwrap());
        }
    }
}

/// Pullbacks on indicators separate kernels exactly when the kernels differ
/// on the support.
#[test]
fn faithfulness_on_indicators() {
    let mut r = rng(302, 0);
    for trial in 0..40 {
        let n = r.random_range(1..=8);
        let m = r.random_range(1..=8);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let k = random_kernel(&mut r, &space, m);
        let h = if trial % 2 == 0 {
            k.clone()
        } else {
            random_kernel_between(&mut r, &space, k.codomain())
        };
        let same_pullbacks = (0..(1u64 << m)).all(|b| {
            let ind = RandomVar::indicator_mask(k.codomain(), b);
            k.pullback(&ind).unwrap().as_equal(&h.pullback(&ind).unwrap()).unwrap()
        });
        assert_eq!(same_pullbacks, k.as_equal(&h).unwrap());
    }
}

#[test]
fn exact_adjointness_and_contraction() {
    let mut r = rng(303, 0);
    for _ in 0..60 {
        let space: ProbSpace<Rational> = random_space(&mut r, 6, 0.2);
        let k = random_kernel(&mut r, &space, 5);
        let f = random_rv(&mut r, &space);
        let g = random_rv(&mut r, k.codomain());
        assert!(adjointness_defect(&k, &f, &g).unwrap().is_zero());
        for n in [Exponent::ONE, Exponent::TWO, Exponent::Finite(4), Exponent::Infinity] {
            assert!(lipschitz_check(&k, &g, n).unwrap());
        }
    }
}

#[test]
fn norms_match_oracle() {
    let mut r = rng(304, 0);
    for _ in 0..30 {
        let space: ProbSpace<f64> = random_space(&mut r, 7, 0.2);
        let f = random_rv(&mut r, &space);
        for n in Exponent::STANDARD {
            let want = ln_norm_oracle(space.weights(), f.values(), n);
            assert!((f.ln_norm(n) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn distances_match_oracles() {
    let mut r = rng(305, 0);
    for _ in 0..30 {
        let n = r.random_range(1..=6);
        let m = r.random_range(1..=7);
        let space: ProbSpace<f64> = random_space(&mut r, n, 0.2);
        let k = random_kernel(&mut r, &space, m);
        let h = random_kernel_between(&mut r, &space, k.codomain());
        let d1 = one_sided_distance(&k, &h).unwrap();
        assert!((d1 - one_sided_oracle(space.weights(), &rows(&k), &rows(&h))).abs() < 1e-12);
        let (ki, hi) = (k.bayes_inverse().unwrap(), h.bayes_inverse().unwrap());
        let back = one_sided_oracle(k.codomain().weights(), &rows(&ki), &rows(&hi));
        assert!((two_sided_distance(&k, &h).unwrap() - d1 - back).abs() < 1e-12);
        for e in Exponent::STANDARD {
            let want = operator_distance_oracle(space.weights(), &rows(&k), &rows(&h), e);
            assert!((operator_distance(&k, &h, e).unwrap() - want).abs() < 1e-12, "L{e}");
        }
    }
}

/// `‖k*1_B − h*1_B‖_1 ≤ d(k, h)` for every `B`.
#[test]
fn per_set_bound_by_one_sided_distance() {
    let mut r = rng(306, 0);
    for _ in 0..30 {
        let m = r.random_range(1..=10);
        let space: ProbSpace<Rational> = random_space(&mut r, 5, 0.2);
        let k = random_kernel(&mut r, &space, m);
        let h = random_kernel_between(&mut r, &space, k.codomain());
        let d = one_sided_distance(&k, &h).unwrap();
        for b in 0..(1u64 << m) {
            let ind = RandomVar::indicator_mask(k.codomain(), b);
            let diff = k.pullback(&ind).unwrap().sub(&h.pullback(&ind).unwrap()).unwrap();
            assert!(diff.ln_norm(Exponent::ONE) <= d);
        }
    }
}

#[test]
fn perturbation_distance_is_linear() {
    let mut r = rng(307, 0);
    let space: ProbSpace<Rational> = random_space(&mut r, 5, 0.0);
    let k = random_kernel(&mut r, &space, 4);
    let base = one_sided_distance(&k, &perturb_towards_independent(&k, &Rational::from_ratio(1, 1)).unwrap()).unwrap();
    for t in 1..8 {
        let tq = Rational::from_ratio(t, 8);
        let kt = perturb_towards_independent(&k, &tq).unwrap();
        assert!(kt.is_measure_preserving());
        assert_eq!(one_sided_distance(&k, &kt).unwrap(), base.clone() * tq);
    }
}
