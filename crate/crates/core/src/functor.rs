//! Kernels acting on random variables.
//!
//! A kernel `k: X → Y` pulls a random variable `g` on `Y` back to
//! `(k*g)(x) = Σ_y k(y|x) g(y)` on `X`. The matrix of `k*` is the kernel
//! matrix itself. Pullback is linear, 1-Lipschitz for every `L^n` norm, and
//! for `L²` the pullback along the Bayesian inverse is the adjoint.

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::{Exponent, Partition, RandomVar, VNorm, VecRandomVar};
use crate::scalar::Scalar;

/// The linear map `g ↦ k*g`.
#[derive(Clone, Debug)]
pub struct PullbackOperator<S: Scalar> {
    kernel: Kernel<S>,
}

impl<S: Scalar> PullbackOperator<S> {
    pub fn new(kernel: &Kernel<S>) -> Self {
        PullbackOperator {
            kernel: kernel.clone(),
        }
    }

    pub fn source_kernel(&self) -> &Kernel<S> {
        &self.kernel
    }

    /// Row-major `domain.size × codomain.size` matrix.
    pub fn matrix(&self) -> Vec<Vec<S>> {
        self.kernel.to_rows()
    }

    pub fn apply(&self, g: &RandomVar<S>) -> Result<RandomVar<S>> {
        self.kernel.pullback(g)
    }

    pub fn apply_vec(&self, g: &VecRandomVar<S>) -> Result<VecRandomVar<S>> {
        vector_pullback(&self.kernel, g)
    }
}

pub fn apply_pullback<S: Scalar>(k: &Kernel<S>, g: &RandomVar<S>) -> Result<RandomVar<S>> {
    k.pullback(g)
}

/// Block averages of `f` over `p`. Null outcomes get the global mean, which
/// is what the conditional-expectation kernel's canonical rows produce.
pub fn cond_expectation<S: Scalar>(f: &RandomVar<S>, p: &Partition) -> Result<RandomVar<S>> {
    let space = f.space();
    if p.parent_size() != space.size() {
        return Err(Error::SizeMismatch {
            expected: space.size(),
            found: p.parent_size(),
        });
    }
    // null atoms get the global mean; skip computing it when there are none
    let fill = if space.is_fully_supported() { S::zero() } else { f.expectation() };
    let mut values = vec![fill; space.size()];
    for block in p.blocks() {
        let mass = space.measure(block.iter().copied());
        if mass.is_zero() {
            continue;
        }
        let total = S::dot(block.iter().map(|&x| (space.weight(x), f.value(x))));
        let avg = total / mass;
        for &x in block {
            if space.is_supported(x) {
                values[x] = avg.clone();
            }
        }
    }
    RandomVar::new(space, values)
}

/// Coordinatewise block averages of a vector-valued random variable.
pub fn vector_cond_expectation<S: Scalar>(g: &VecRandomVar<S>, p: &Partition) -> Result<VecRandomVar<S>> {
    let coords = (0..g.dim())
        .map(|i| cond_expectation(&g.coordinate(i), p))
        .collect::<Result<Vec<_>>>()?;
    VecRandomVar::from_coordinates(&coords)
}

/// `⟨f, g⟩ = Σ_x p(x) f(x) g(x)`.
pub fn inner_product<S: Scalar>(f: &RandomVar<S>, g: &RandomVar<S>) -> Result<S> {
    f.space().ensure_same(g.space())?;
    Ok(f
        .space()
        .weights()
        .iter()
        .zip(f.values().iter().zip(g.values()))
        .fold(S::zero(), |acc, (w, (a, b))| {
            acc + w.clone() * a.clone() * b.clone()
        }))
}

/// `|⟨f, k*g⟩_p − ⟨(k⁺)*f, g⟩_q|`.
pub fn adjointness_defect<S: Scalar>(
    k: &Kernel<S>,
    f: &RandomVar<S>,
    g: &RandomVar<S>,
) -> Result<S> {
    let lhs = inner_product(f, &k.pullback(g)?)?;
    let rhs = inner_product(&k.bayes_inverse()?.pullback(f)?, g)?;
    Ok((lhs - rhs).abs())
}

/// `‖k*g‖_n ≤ ‖g‖_n` up to the space tolerance.
pub fn lipschitz_check<S: Scalar>(k: &Kernel<S>, g: &RandomVar<S>, n: Exponent) -> Result<bool> {
    let lhs = k.pullback(g)?.ln_norm(n);
    let rhs = g.ln_norm(n);
    Ok(lhs <= rhs.clone() || lhs.near(&rhs, k.tolerance()))
}

/// Componentwise pullback of a vector-valued random variable.
pub fn vector_pullback<S: Scalar>(k: &Kernel<S>, g: &VecRandomVar<S>) -> Result<VecRandomVar<S>> {
    k.codomain().ensure_same(g.space())?;
    let d = g.dim();
    let values = (0..k.n_rows())
        .map(|x| {
            let mut acc = vec![S::zero(); d];
            for (w, v) in k.row(x).iter().zip(g.values()) {
                if w.is_zero() {
                    continue;
                }
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = a.clone() + w.clone() * b.clone();
                }
            }
            acc
        })
        .collect();
    VecRandomVar::new(k.domain(), values)
}

pub fn bochner_norm<S: Scalar>(g: &VecRandomVar<S>, n: Exponent, vnorm: VNorm) -> S {
    g.bochner_norm(n, vnorm)
}

/// `‖k*G‖ ≤ ‖G‖` in the Bochner norm, up to tolerance.
pub fn vector_lipschitz_check<S: Scalar>(
    k: &Kernel<S>,
    g: &VecRandomVar<S>,
    n: Exponent,
    vnorm: VNorm,
) -> Result<bool> {
    let lhs = vector_pullback(k, g)?.bochner_norm(n, vnorm);
    let rhs = g.bochner_norm(n, vnorm);
    Ok(lhs <= rhs.clone() || lhs.near(&rhs, k.tolerance()))
}
