mod common;

use common::{as_equal_rows, bell, blocks_sorted, cond_exp_rows, invariant_atoms_oracle, matmul, q, rows};
use finkrn::idempotent::order_conditions;
use finkrn::sample::{random_coarsening_chain, random_partition, random_space, rng};
use finkrn::topology::one_sided_distance;
use finkrn::{
    cond_exp_kernel, eqcondorder_witnesses, idem_leq, inf_idempotents, is_idempotent, split,
    sup_idempotents, Partition, ProbSpace, RandomVar, Rational,
};
use num_traits::Zero;
use rand::Rng;

fn mask_partition(p: &Partition, a: u64) -> bool {
    // a is a union of blocks
    p.blocks().iter().all(|b| {
        let inside = b.iter().filter(|&&x| a >> x & 1 == 1).count();
        inside == 0 || inside == b.len()
    })
}

#[test]
fn invariant_partition_matches_subset_oracle() {
    let mut r = rng(200, 0);
    for _ in 0..40 {
        let n = r.random_range(2..=12);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let p = random_partition(&mut r, n, 4);
        let e = cond_exp_kernel(&space, &p).unwrap();
        let oracle = invariant_atoms_oracle(space.weights(), &rows(e.kernel()), 0.0);
        assert_eq!(blocks_sorted(e.invariant_partition().blocks()), oracle);
        assert_eq!(
            blocks_sorted(p.complete(&space).unwrap().blocks()),
            oracle,
            "invariant sets are the completion"
        );
    }
}

#[test]
fn cond_exp_kernel_matches_formula() {
    let mut r = rng(201, 0);
    for _ in 0..30 {
        let space: ProbSpace<Rational> = random_space(&mut r, 7, 0.2);
        let p = random_partition(&mut r, 7, 3);
        let e = cond_exp_kernel(&space, &p).unwrap();
        let oracle = cond_exp_rows(space.weights(), p.labels());
        assert!(as_equal_rows(space.weights(), &rows(e.kernel()), &oracle));
        let sq = matmul(&oracle, &oracle);
        assert!(as_equal_rows(space.weights(), &sq, &oracle));
    }
}

#[test]
fn enumeration_counts_are_bell_numbers() {
    for n in 0..=8 {
        assert_eq!(Partition::enumerate(n).count() as u64, bell(n), "n = {n}");
    }
    assert_eq!(bell(5), 52);
}

/// Exhaustive at sizes ≤ 4: the library order, the invariant sets and the
/// adjunction all agree with matrix-product and subset oracles.
#[test]
fn galois_connection_exhaustive_small() {
    let spaces: Vec<Vec<Rational>> = vec![
        vec![q(1, 3), q(2, 3)],
        vec![q(1, 2), q(0, 1), q(1, 2)],
        vec![q(1, 4), q(1, 4), q(1, 4), q(1, 4)],
        vec![q(0, 1), q(1, 5), q(0, 1), q(4, 5)],
        vec![q(1, 10), q(2, 10), q(3, 10), q(4, 10)],
    ];
    for w in spaces {
        let space = ProbSpace::new(w.clone()).unwrap();
        let n = w.len();
        let parts: Vec<Partition> = Partition::enumerate(n).collect();
        let es: Vec<_> = parts.iter().map(|p| cond_exp_kernel(&space, p).unwrap()).collect();
        let raw: Vec<_> = parts.iter().map(|p| cond_exp_rows(&w, p.labels())).collect();
        for i in 0..parts.len() {
            // fixpoint: e of the invariant partition is e again
            let inv = es[i].invariant_partition();
            let back = cond_exp_kernel(&space, &inv).unwrap();
            assert!(back.as_equal(&es[i]).unwrap());
            for j in 0..parts.len() {
                let ab = matmul(&raw[i], &raw[j]);
                let ba = matmul(&raw[j], &raw[i]);
                let oracle_leq = as_equal_rows(&w, &ab, &raw[i]) && as_equal_rows(&w, &ba, &raw[i]);
                assert_eq!(idem_leq(&es[i], &es[j]).unwrap(), oracle_leq);
                // adjunction: P ⊆ I_e iff e_P ≤ e, with I_e from the subset oracle
                let atoms = invariant_atoms_oracle(&w, &raw[j], 0.0);
                let p_inside = parts[i].blocks().iter().all(|b| {
                    let mask: u64 = b.iter().map(|x| 1u64 << x).sum();
                    // the block is a union of invariant atoms
                    atoms.iter().all(|a| {
                        let am: u64 = a.iter().map(|x| 1u64 << x).sum();
                        am & mask == 0 || am & mask == am
                    })
                });
                assert_eq!(p_inside, oracle_leq, "adjunction at {} vs {}", parts[i], parts[j]);
            }
        }
    }
}

#[test]
fn harmonic_indicators_are_invariant_sets() {
    let mut r = rng(202, 0);
    for _ in 0..20 {
        let n = r.random_range(2..=7);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.25);
        let e = cond_exp_kernel(&space, &random_partition(&mut r, n, 3)).unwrap();
        let inv = e.invariant_partition();
        for a in 0..(1u64 << n) {
            let f = RandomVar::indicator_mask(&space, a);
            let harmonic = e.kernel().pullback(&f).unwrap().as_equal(&f).unwrap();
            assert_eq!(harmonic, f.is_measurable_wrt(&inv).unwrap(), "set {a:b}");
        }
    }
}

#[test]
fn relative_positivity() {
    let mut r = rng(203, 0);
    for _ in 0..20 {
        let n = r.random_range(2..=7);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.25);
        let e = cond_exp_kernel(&space, &random_partition(&mut r, n, 3)).unwrap();
        let inv = e.invariant_partition();
        let k = e.kernel();
        let mass = |x: usize, s: u64| k.prob_of_set(x, (0..n).filter(|y| s >> y & 1 == 1));
        for a in (0..(1u64 << n)).filter(|&a| mask_partition(&inv, a)) {
            for b in 0..(1u64 << n) {
                for x in space.support() {
                    assert_eq!(mass(x, a) * mass(x, b), mass(x, a & b));
                }
            }
        }
    }
}

#[test]
fn order_formulations_agree_on_random_pairs() {
    let mut r = rng(204, 0);
    let mut comparable = 0;
    for _ in 0..200 {
        let n = r.random_range(2..=6);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let (p1, p2) = if r.random_bool(0.5) {
            let c = random_coarsening_chain(&mut r, n, 3);
            (c[2].clone(), c[r.random_range(0..2)].clone())
        } else {
            (random_partition(&mut r, n, 3), random_partition(&mut r, n, 3))
        };
        let e1 = cond_exp_kernel(&space, &p1).unwrap();
        let e2 = cond_exp_kernel(&space, &p2).unwrap();
        let c = order_conditions(&e1, &e2).unwrap();
        assert_eq!(c.composites, c.fixes_splitting);
        assert_eq!(c.composites, c.factorization);
        if c.composites {
            comparable += 1;
            assert!(eqcondorder_witnesses(&e1, &e2).unwrap().all_hold());
        } else {
            assert!(eqcondorder_witnesses(&e1, &e2).is_err());
        }
    }
    assert!(comparable > 50, "only {comparable} comparable pairs");
}

#[test]
fn splitting_is_exact_in_rational_mode() {
    let mut r = rng(205, 0);
    for _ in 0..30 {
        let n = r.random_range(1..=10);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let e = cond_exp_kernel(&space, &random_partition(&mut r, n, 4)).unwrap();
        let s = split(&e).unwrap();
        assert_eq!(s.defects(&e).unwrap(), (0.0, 0.0));
        assert_eq!(s.quotient.size(), s.invariant_partition.num_blocks());
    }
}

/// Closed order and closedness of idempotents along monotone chains: the
/// partial suprema dominate each element and converge to the supremum,
/// which is idempotent and dominates every element.
#[test]
fn chain_limits_are_idempotent_and_respect_order() {
    let mut r = rng(206, 0);
    for _ in 0..20 {
        let n = r.random_range(3..=10);
        let space: ProbSpace<Rational> = random_space(&mut r, n, 0.2);
        let mut parts = random_coarsening_chain(&mut r, n, 6);
        parts.reverse();
        let chain: Vec<_> = parts.iter().map(|p| cond_exp_kernel(&space, p).unwrap()).collect();
        let sup = sup_idempotents(&chain).unwrap();
        assert!(is_idempotent(sup.kernel()).unwrap());
        let d: Vec<Rational> = chain
            .iter()
            .map(|e| one_sided_distance(e.kernel(), sup.kernel()).unwrap())
            .collect();
        assert!(d.last().unwrap().is_zero());
        for (i, e) in chain.iter().enumerate() {
            assert!(idem_leq(e, &sup).unwrap());
            for f in &chain[i..] {
                assert!(idem_leq(e, f).unwrap());
            }
        }
        let mut rev = chain.clone();
        rev.reverse();
        let inf = inf_idempotents(&rev).unwrap();
        assert!(inf.as_equal(&chain[0]).unwrap());
    }
}
