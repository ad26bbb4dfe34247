//! Seeded random spaces, partitions, kernels and random variables.
//!
//! All draws are small integers divided by their sum, so the same seed gives
//! exactly representable values in both numeric backends.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::idempotent::{cond_exp_kernel, IdempotentKernel};
use crate::kernel::Kernel;
use crate::prob::{Partition, ProbSpace, RandomVar, VecRandomVar};
use crate::scalar::Scalar;

/// Independent generator for stream `stream` of `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Integer weights in `0..=9` (zero with probability `null_prob`), never all
/// zero.
fn integer_weights<R: Rng>(rng: &mut R, n: usize, null_prob: f64) -> Vec<i64> {
    loop {
        let w: Vec<i64> = (0..n)
            .map(|_| {
                if rng.random_bool(null_prob) {
                    0
                } else {
                    rng.random_range(1..=9)
                }
            })
            .collect();
        if w.iter().any(|&x| x > 0) {
            return w;
        }
    }
}

fn normalize<S: Scalar>(w: &[i64]) -> Vec<S> {
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| S::from_ratio(x, total)).collect()
}

/// A probability space on `n` points; each point is null with probability
/// `null_prob`.
pub fn random_space<S: Scalar, R: Rng>(rng: &mut R, n: usize, null_prob: f64) -> ProbSpace<S> {
    let w = integer_weights(rng, n, null_prob);
    ProbSpace::new(normalize(&w)).expect("normalized integer weights")
}

/// A partition of `n` points into at most `max_blocks` labels.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize, max_blocks: usize) -> Partition {
    let k = max_blocks.clamp(1, n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    Partition::from_labels(&labels)
}

/// A kernel from `domain` onto the pushforward measure on `m` points, so it is
/// measure-preserving. Rows have integer weights with some zeros.
pub fn random_kernel<S: Scalar, R: Rng>(rng: &mut R, domain: &ProbSpace<S>, m: usize) -> Kernel<S> {
    let rows = (0..domain.size())
        .map(|_| normalize(&integer_weights(rng, m, 0.3)))
        .collect();
    Kernel::with_pushforward(rows, domain).expect("stochastic rows")
}

/// A measure-preserving kernel between given spaces, built from a random
/// coupling with the given marginals (via a randomized north-west corner
/// rule on shuffled index orders).
pub fn random_kernel_between<S: Scalar, R: Rng>(
    rng: &mut R,
    domain: &ProbSpace<S>,
    codomain: &ProbSpace<S>,
) -> Kernel<S> {
    let n = domain.size();
    let m = codomain.size();
    let mut xs: Vec<usize> = (0..n).collect();
    let mut ys: Vec<usize> = (0..m).collect();
    xs.shuffle(rng);
    ys.shuffle(rng);
    let mut a: Vec<S> = domain.weights().to_vec();
    let mut b: Vec<S> = codomain.weights().to_vec();
    let mut table = vec![S::zero(); n * m];
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let (x, y) = (xs[i], ys[j]);
        let t = if a[x] < b[y] { a[x].clone() } else { b[y].clone() };
        table[x * m + y] = t.clone();
        a[x] = a[x].clone() - t.clone();
        b[y] = b[y].clone() - t;
        if a[x].is_zero() {
            i += 1;
        } else {
            j += 1;
        }
    }
    let rows = (0..n)
        .map(|x| {
            let px = domain.weight(x);
            if px.is_zero() {
                codomain.weights().to_vec()
            } else {
                table[x * m..(x + 1) * m]
                    .iter()
                    .map(|v| v.clone() / px.clone())
                    .collect()
            }
        })
        .collect();
    Kernel::new(rows, domain, codomain).expect("coupling rows are stochastic")
}

/// Values `v/4` with integer `v` in `-20..=20`.
pub fn random_rv<S: Scalar, R: Rng>(rng: &mut R, space: &ProbSpace<S>) -> RandomVar<S> {
    let values = (0..space.size())
        .map(|_| S::from_ratio(rng.random_range(-20..=20), 4))
        .collect();
    RandomVar::new(space, values).expect("sized to the space")
}

pub fn random_vec_rv<S: Scalar, R: Rng>(rng: &mut R, space: &ProbSpace<S>, dim: usize) -> VecRandomVar<S> {
    let coords: Vec<RandomVar<S>> = (0..dim).map(|_| random_rv(rng, space)).collect();
    VecRandomVar::from_coordinates(&coords).expect("same space")
}

/// `len` partitions of `n` points, each coarser than the previous one: start
/// from the discrete partition and merge two random blocks at most steps.
pub fn random_coarsening_chain<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<Partition> {
    let mut labels: Vec<usize> = (0..n).collect();
    let mut chain = vec![Partition::from_labels(&labels)];
    while chain.len() < len {
        let current = chain.last().unwrap().clone();
        let k = current.num_blocks();
        if k > 1 && rng.random_bool(0.85) {
            let merges = rng.random_range(1..=k.div_ceil(3));
            for _ in 0..merges {
                let a = labels[rng.random_range(0..n)];
                let b = labels[rng.random_range(0..n)];
                for l in labels.iter_mut() {
                    if *l == b {
                        *l = a;
                    }
                }
            }
        }
        chain.push(Partition::from_labels(&labels));
    }
    chain
}

/// A refining chain: [`random_coarsening_chain`] reversed.
pub fn random_refining_chain<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<Partition> {
    let mut c = random_coarsening_chain(rng, n, len);
    c.reverse();
    c
}

/// The conditional-expectation kernels of a chain of partitions.
pub fn idempotent_chain<S: Scalar>(space: &ProbSpace<S>, parts: &[Partition]) -> Result<Vec<IdempotentKernel<S>>> {
    parts.iter().map(|p| cond_exp_kernel(space, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn seeded_draws_repeat() {
        let a: ProbSpace<Rational> = random_space(&mut rng(5, 0), 6, 0.2);
        let b: ProbSpace<Rational> = random_space(&mut rng(5, 0), 6, 0.2);
        assert_eq!(a.weights(), b.weights());
        let c: ProbSpace<Rational> = random_space(&mut rng(5, 1), 6, 0.2);
        assert_ne!(a.weights(), c.weights());
        let f: ProbSpace<f64> = random_space(&mut rng(5, 0), 6, 0.2);
        for (x, y) in a.weights().iter().zip(f.weights()) {
            assert_eq!(x.to_f64(), *y);
        }
    }

    #[test]
    fn kernels_preserve_measure() {
        let mut r = rng(9, 0);
        for _ in 0..20 {
            let p: ProbSpace<Rational> = random_space(&mut r, 5, 0.2);
            let k = random_kernel(&mut r, &p, 4);
            assert!(k.is_measure_preserving());
            let q: ProbSpace<Rational> = random_space(&mut r, 3, 0.2);
            let l = random_kernel_between(&mut r, &p, &q);
            assert!(l.is_measure_preserving());
        }
    }

    #[test]
    fn chains_are_monotone() {
        let mut r = rng(3, 0);
        for _ in 0..20 {
            let c = random_coarsening_chain(&mut r, 12, 8);
            assert_eq!(c.len(), 8);
            assert!(c[0].is_discrete());
            for w in c.windows(2) {
                assert!(w[0].refines(&w[1]));
            }
        }
    }
}
