//! Brute-force oracles. Everything here works on plain row vectors and never
//! calls into the algorithms it is used to check.
#![allow(dead_code)]

use finkrn::{Exponent, Kernel, Rational, Scalar};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn rows<S: Scalar>(k: &Kernel<S>) -> Vec<Vec<S>> {
    k.to_rows()
}

/// `p(x) k(y|x)`.
pub fn joint<S: Scalar>(p: &[S], k: &[Vec<S>]) -> Vec<Vec<S>> {
    p.iter()
        .zip(k)
        .map(|(px, row)| row.iter().map(|v| px.clone() * v.clone()).collect())
        .collect()
}

/// Bayes' rule entry by entry. Null codomain points get the prior.
pub fn bayes_oracle(p: &[Rational], k: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = k[0].len();
    let j = joint(p, k);
    (0..m)
        .map(|y| {
            let qy: Rational = j.iter().map(|r| r[y].clone()).sum();
            if qy.is_zero() {
                p.to_vec()
            } else {
                j.iter().map(|r| r[y].clone() / qy.clone()).collect()
            }
        })
        .collect()
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    a / x * b
}

/// `∑_{x∈A} k(B|x) p(x) = ∑_{y∈B} k⁺(A|y) q(y)` for every pair of subsets,
/// evaluated exactly on integers after clearing denominators.
pub fn disintegration_all_pairs(p: &[Rational], k: &[Vec<Rational>], inv: &[Vec<Rational>]) -> bool {
    let n = p.len();
    let m = k[0].len();
    let qv: Vec<Rational> = (0..m).map(|y| (0..n).map(|x| p[x].clone() * k[x][y].clone()).sum()).collect();
    let diff: Vec<Vec<Rational>> = (0..n)
        .map(|x| {
            (0..m)
                .map(|y| p[x].clone() * k[x][y].clone() - inv[y][x].clone() * qv[y].clone())
                .collect()
        })
        .collect();
    let den = diff
        .iter()
        .flatten()
        .fold(BigInt::from(1), |acc, v| lcm(&acc, v.denom()));
    let ints: Vec<Vec<i128>> = diff
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| (v.numer() * (&den / v.denom())).to_i128().expect("fits in i128"))
                .collect()
        })
        .collect();
    // Gray code over A, inner Gray code over B
    let mut col = vec![0i128; m];
    for a in 0..(1u64 << n) {
        if a > 0 {
            let bit = a.trailing_zeros() as usize;
            let gray = a ^ (a >> 1);
            let sign = if gray >> bit & 1 == 1 { 1 } else { -1 };
            for y in 0..m {
                col[y] += sign * ints[bit][y];
            }
        }
        let mut s = 0i128;
        for b in 1..(1u64 << m) {
            let bit = b.trailing_zeros() as usize;
            let gray = b ^ (b >> 1);
            if gray >> bit & 1 == 1 {
                s += col[bit];
            } else {
                s -= col[bit];
            }
            if s != 0 {
                return false;
            }
        }
    }
    true
}

/// Supported points get their block average; null points are left as `None`.
pub fn block_average_oracle(p: &[Rational], f: &[Rational], labels: &[usize]) -> Vec<Option<Rational>> {
    (0..p.len())
        .map(|x| {
            if p[x].is_zero() {
                return None;
            }
            let (mut mass, mut tot) = (Rational::zero(), Rational::zero());
            for z in 0..p.len() {
                if labels[z] == labels[x] {
                    mass += p[z].clone();
                    tot += p[z].clone() * f[z].clone();
                }
            }
            Some(tot / mass)
        })
        .collect()
}

/// Atoms of the sigma-algebra of sets `A` with `e(A|x) = 1_A(x)` at every
/// supported `x`, by enumerating all subsets.
pub fn invariant_atoms_oracle<S: Scalar>(p: &[S], e: &[Vec<S>], tol: f64) -> Vec<Vec<usize>> {
    let n = p.len();
    let invariant: Vec<u64> = (0..(1u64 << n))
        .filter(|&a| {
            (0..n).all(|x| {
                if p[x].is_zero() {
                    return true;
                }
                let mass = (0..n)
                    .filter(|y| a >> y & 1 == 1)
                    .fold(S::zero(), |acc, y| acc + e[x][y].clone());
                let want = if a >> x & 1 == 1 { S::one() } else { S::zero() };
                mass.near(&want, tol)
            })
        })
        .collect();
    // atom of x: intersection of invariant sets containing x
    let mut atoms: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let atom = invariant
            .iter()
            .filter(|&&a| a >> x & 1 == 1)
            .fold(u64::MAX >> (64 - n), |acc, &a| acc & a);
        let members: Vec<usize> = (0..n).filter(|y| atom >> y & 1 == 1).collect();
        if !atoms.contains(&members) {
            atoms.push(members);
        }
    }
    atoms.sort();
    atoms
}

pub fn blocks_sorted(b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = b
        .iter()
        .map(|blk| {
            let mut s = blk.clone();
            s.sort();
            s
        })
        .collect();
    v.sort();
    v
}

/// Bell numbers by the triangle recurrence.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

/// `e_P` by its defining formula: rows are `p(·|block)`, null rows are `p`.
pub fn cond_exp_rows(p: &[Rational], labels: &[usize]) -> Vec<Vec<Rational>> {
    let n = p.len();
    (0..n)
        .map(|x| {
            let mass: Rational = (0..n).filter(|&z| labels[z] == labels[x]).map(|z| p[z].clone()).sum();
            if p[x].is_zero() {
                return p.to_vec();
            }
            (0..n)
                .map(|z| {
                    if labels[z] == labels[x] {
                        p[z].clone() / mass.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = b[0].len();
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(u, r)| u.clone() * r[j].clone()).sum())
                .collect()
        })
        .collect()
}

/// Rows agree at every supported point.
pub fn as_equal_rows(p: &[Rational], a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    (0..p.len()).all(|x| p[x].is_zero() || a[x] == b[x])
}

/// `∑_x p(x) ∑_y |k(y|x) − h(y|x)|`.
pub fn one_sided_oracle(p: &[f64], k: &[Vec<f64>], h: &[Vec<f64>]) -> f64 {
    p.iter()
        .zip(k.iter().zip(h))
        .map(|(px, (a, b))| px * a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum::<f64>())
        .sum()
}

pub fn ln_norm_oracle(p: &[f64], f: &[f64], n: Exponent) -> f64 {
    match n {
        Exponent::Infinity => p
            .iter()
            .zip(f)
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max),
        Exponent::Finite(k) => p
            .iter()
            .zip(f)
            .map(|(w, v)| w * v.abs().powi(k as i32))
            .sum::<f64>()
            .powf(1.0 / k as f64),
    }
}

/// Largest `‖k*1_B − h*1_B‖_n` over all subsets `B`, with no Gray code.
pub fn operator_distance_oracle(p: &[f64], k: &[Vec<f64>], h: &[Vec<f64>], n: Exponent) -> f64 {
    let m = k[0].len();
    (0..(1u64 << m))
        .map(|b| {
            let diff: Vec<f64> = k
                .iter()
                .zip(h)
                .map(|(a, c)| (0..m).filter(|y| b >> y & 1 == 1).map(|y| a[y] - c[y]).sum())
                .collect();
            ln_norm_oracle(p, &diff, n)
        })
        .fold(0.0, f64::max)
}

/// `A (AᵀA)⁻¹ Aᵀ` for a full-column-rank `A`.
pub fn projector_oracle(a: &DMatrix<f64>) -> DMatrix<f64> {
    let gram = a.transpose() * a;
    a * gram.try_inverse().expect("full column rank") * a.transpose()
}

/// Conditional expectation on level `level` of a dyadic filtration with
/// `levels` levels: uniform averages over runs of `2^(levels−level)`.
pub fn dyadic_average(f: &[Rational], levels: u32, level: u32) -> Vec<Rational> {
    let width = 1usize << (levels - level);
    f.chunks(width)
        .flat_map(|c| {
            let avg: Rational = c.iter().cloned().sum::<Rational>() / Rational::from_ratio(width as i64, 1);
            std::iter::repeat_n(avg, width)
        })
        .collect()
}
