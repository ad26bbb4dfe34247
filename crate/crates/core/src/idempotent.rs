//! Idempotent kernels and their correspondence with null-set-complete
//! partitions.
//!
//! On a finite space every almost-surely idempotent measure-preserving kernel
//! is a conditional-expectation kernel `e_B`. The sets it leaves invariant
//! form a partition `I_e` (null outcomes are singletons), and
//! `B ↦ e_B`, `e ↦ I_e` are monotone inverse maps between complete partitions
//! and idempotents ordered by `e1 ≤ e2 ⟺ e1 e2 = e2 e1 = e1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{coarsening_kernel, Kernel};
use crate::prob::{Partition, ProbSpace, UnionFind};
use crate::scalar::Scalar;

/// Largest space on which exhaustive partition audits run.
pub const EXHAUSTIVE_MAX_SIZE: usize = 8;

/// A measure-preserving endo-kernel `e` with `e e = e` almost surely.
#[derive(Clone, Debug)]
pub struct IdempotentKernel<S: Scalar> {
    kernel: Kernel<S>,
}

impl<S: Scalar> IdempotentKernel<S> {
    /// Validates idempotence and self-adjointness.
    pub fn new(kernel: Kernel<S>) -> Result<Self> {
        if !is_idempotent(&kernel)? {
            return Err(Error::NotIdempotent);
        }
        let dagger = kernel.bayes_inverse()?;
        if !dagger.as_equal_unchecked(&kernel) {
            return Err(Error::NotSelfAdjoint);
        }
        Ok(IdempotentKernel { kernel })
    }

    pub fn kernel(&self) -> &Kernel<S> {
        &self.kernel
    }

    pub fn space(&self) -> &ProbSpace<S> {
        self.kernel.domain()
    }

    pub fn into_kernel(self) -> Kernel<S> {
        self.kernel
    }

    pub fn identity(space: &ProbSpace<S>) -> Self {
        IdempotentKernel {
            kernel: Kernel::identity(space),
        }
    }

    /// Almost-sure equality of the underlying kernels.
    pub fn as_equal(&self, other: &Self) -> Result<bool> {
        self.kernel.as_equal(&other.kernel)
    }

    /// The partition of a.s.-invariant sets: connected components of the
    /// support under `e(y|x) > 0`, with null outcomes as singletons.
    pub fn invariant_partition(&self) -> Partition {
        let space = self.space();
        let n = space.size();
        let tol = space.tolerance();
        let mut uf = UnionFind::new(n);
        for x in space.support() {
            for (y, v) in self.kernel.row(x).iter().enumerate() {
                if space.is_supported(y) && !v.is_near_zero(tol) {
                    uf.union(x, y);
                }
            }
        }
        let labels: Vec<usize> = (0..n)
            .map(|x| if space.is_supported(x) { uf.find(x) } else { n + x })
            .collect();
        Partition::from_labels(&labels)
    }

    /// `e1 ≤ e2` iff both composites are a.s. equal to `e1`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        idem_leq(self, other)
    }
}

/// Checks whether `a` then `b` equals `target` on the support, row by row.
fn composite_matches<S: Scalar>(a: &Kernel<S>, b: &Kernel<S>, target: &Kernel<S>) -> bool {
    let space = a.domain();
    let tol = space.tolerance();
    let m = b.n_cols();
    for x in space.support() {
        let row = a.row(x);
        for (z, t) in target.row(x).iter().enumerate().take(m) {
            let v = S::dot(row.iter().enumerate().map(|(y, w)| (w, &b.row(y)[z])));
            if !v.near(t, tol) {
                return false;
            }
        }
    }
    true
}

/// `k k` a.s.-equals `k`.
pub fn is_idempotent<S: Scalar>(k: &Kernel<S>) -> Result<bool> {
    k.domain().ensure_same(k.codomain())?;
    Ok(composite_matches(k, k, k))
}

/// The conditional-expectation kernel `e_P`: the row at a supported `x` is
/// `p(·|block(x))`; rows at null outcomes are `p`.
pub fn cond_exp_kernel<S: Scalar>(space: &ProbSpace<S>, p: &Partition) -> Result<IdempotentKernel<S>> {
    if p.parent_size() != space.size() {
        return Err(Error::SizeMismatch {
            expected: space.size(),
            found: p.parent_size(),
        });
    }
    let n = space.size();
    let masses: Vec<S> = p
        .blocks()
        .iter()
        .map(|b| space.measure(b.iter().copied()))
        .collect();
    let mut rows = vec![S::zero(); n * n];
    for x in 0..n {
        let row = &mut rows[x * n..(x + 1) * n];
        if !space.is_supported(x) {
            row.clone_from_slice(space.weights());
            continue;
        }
        let b = p.block_of(x);
        for &y in &p.blocks()[b] {
            row[y] = space.weight(y).clone() / masses[b].clone();
        }
    }
    Ok(IdempotentKernel {
        kernel: Kernel::from_flat(rows, space, space)?,
    })
}

pub fn invariant_partition<S: Scalar>(e: &IdempotentKernel<S>) -> Partition {
    e.invariant_partition()
}

/// A splitting `(A, π, π⁺)` of an idempotent: `π⁺` after `π` is `e`, and `π`
/// after `π⁺` is the identity on the quotient `A`.
#[derive(Clone, Debug)]
pub struct Splitting<S: Scalar> {
    pub quotient: ProbSpace<S>,
    pub pi: Kernel<S>,
    pub pi_dag: Kernel<S>,
    pub invariant_partition: Partition,
}

impl<S: Scalar> Splitting<S> {
    /// `π⁺` then `π` (should be the identity on the quotient).
    pub fn section_retraction(&self) -> Kernel<S> {
        self.pi_dag.then(&self.pi).expect("splitting spaces agree")
    }

    /// `π` then `π⁺` (should reproduce the idempotent).
    pub fn retraction_section(&self) -> Kernel<S> {
        self.pi.then(&self.pi_dag).expect("splitting spaces agree")
    }

    /// Largest entrywise defects of the two splitting identities.
    pub fn defects(&self, e: &IdempotentKernel<S>) -> Result<(f64, f64)> {
        let id = Kernel::identity(&self.quotient);
        Ok((
            self.section_retraction().max_defect(&id)?,
            self.retraction_section().max_defect(e.kernel())?,
        ))
    }
}

/// Splits `e` through its invariant partition.
pub fn split<S: Scalar>(e: &IdempotentKernel<S>) -> Result<Splitting<S>> {
    let part = e.invariant_partition();
    let c = coarsening_kernel(e.space(), &part)?;
    Ok(Splitting {
        quotient: c.quotient,
        pi: c.pi,
        pi_dag: c.pi_dag,
        invariant_partition: part,
    })
}

pub fn idem_leq<S: Scalar>(e1: &IdempotentKernel<S>, e2: &IdempotentKernel<S>) -> Result<bool> {
    e1.space().ensure_same(e2.space())?;
    let (a, b) = (&e1.kernel, &e2.kernel);
    Ok(composite_matches(a, b, a) && composite_matches(b, a, a))
}

/// The comparison maps between the splittings of `e1 ≤ e2`, with the
/// identities they satisfy.
#[derive(Clone, Debug)]
pub struct OrderWitnesses<S: Scalar> {
    /// `A1 → A2`: include into `X`, then project onto `A2`.
    pub f: Kernel<S>,
    /// `A2 → A1`: include into `X`, then project onto `A1`.
    pub g: Kernel<S>,
    /// `f` followed by `ι2` equals `ι1`.
    pub section_commutes: bool,
    /// `π2` followed by `g` equals `π1`.
    pub retraction_commutes: bool,
    /// `f` followed by `g` is the identity of `A1`.
    pub retract: bool,
    /// `f` is the Bayesian inverse of `g`.
    pub f_is_dagger_of_g: bool,
}

impl<S: Scalar> OrderWitnesses<S> {
    pub fn all_hold(&self) -> bool {
        self.section_commutes && self.retraction_commutes && self.retract && self.f_is_dagger_of_g
    }
}

pub fn eqcondorder_witnesses<S: Scalar>(
    e1: &IdempotentKernel<S>,
    e2: &IdempotentKernel<S>,
) -> Result<OrderWitnesses<S>> {
    if !idem_leq(e1, e2)? {
        return Err(Error::NotComparable);
    }
    let s1 = split(e1)?;
    let s2 = split(e2)?;
    Ok(witnesses_from_splittings(&s1, &s2)?)
}

fn witnesses_from_splittings<S: Scalar>(
    s1: &Splitting<S>,
    s2: &Splitting<S>,
) -> Result<OrderWitnesses<S>> {
    let f = s1.pi_dag.then(&s2.pi)?;
    let g = s2.pi_dag.then(&s1.pi)?;
    let section_commutes = f.then(&s2.pi_dag)?.as_equal(&s1.pi_dag)?;
    let retraction_commutes = s2.pi.then(&g)?.as_equal(&s1.pi)?;
    let retract = f.then(&g)?.as_equal(&Kernel::identity(&s1.quotient))?;
    let f_is_dagger_of_g = g.bayes_inverse()?.as_equal(&f)?;
    Ok(OrderWitnesses {
        f,
        g,
        section_commutes,
        retraction_commutes,
        retract,
        f_is_dagger_of_g,
    })
}

/// The three equivalent formulations of `e1 ≤ e2`, evaluated independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderConditions {
    /// `e1 e2 = e2 e1 = e1`.
    pub composites: bool,
    /// `ι1` then `e2` is `ι1`, and `e2` then `π1` is `π1`.
    pub fixes_splitting: bool,
    /// The comparison maps through the splittings commute with them.
    pub factorization: bool,
}

pub fn order_conditions<S: Scalar>(
    e1: &IdempotentKernel<S>,
    e2: &IdempotentKernel<S>,
) -> Result<OrderConditions> {
    let composites = idem_leq(e1, e2)?;
    let s1 = split(e1)?;
    let s2 = split(e2)?;
    let fixes_splitting = s1.pi_dag.then(e2.kernel())?.as_equal(&s1.pi_dag)?
        && e2.kernel().then(&s1.pi)?.as_equal(&s1.pi)?;
    let w = witnesses_from_splittings(&s1, &s2)?;
    Ok(OrderConditions {
        composites,
        fixes_splitting,
        factorization: w.section_commutes && w.retraction_commutes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Up,
    Down,
}

fn check_chain<S: Scalar>(chain: &[IdempotentKernel<S>], dir: Direction) -> Result<()> {
    let first = chain.first().ok_or(Error::Empty("idempotent chain"))?;
    for (i, w) in chain.windows(2).enumerate() {
        first.space().ensure_same(w[1].space())?;
        let ok = match dir {
            Direction::Up => idem_leq(&w[0], &w[1])?,
            Direction::Down => idem_leq(&w[1], &w[0])?,
        };
        if !ok {
            return Err(Error::NotAChain(format!(
                "elements {i} and {} are out of order",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Supremum of an increasing chain: `e` of the join of the invariant
/// partitions.
pub fn sup_idempotents<S: Scalar>(chain: &[IdempotentKernel<S>]) -> Result<IdempotentKernel<S>> {
    check_chain(chain, Direction::Up)?;
    let mut acc = chain[0].invariant_partition();
    for e in &chain[1..] {
        acc = acc.join(&e.invariant_partition())?;
    }
    cond_exp_kernel(chain[0].space(), &acc)
}

/// Infimum of a decreasing chain: `e` of the meet of the completed invariant
/// partitions. Meeting raw partitions first would be wrong whenever null
/// outcomes glue blocks together.
pub fn inf_idempotents<S: Scalar>(chain: &[IdempotentKernel<S>]) -> Result<IdempotentKernel<S>> {
    check_chain(chain, Direction::Down)?;
    let space = chain[0].space();
    let mut acc = chain[0].invariant_partition().complete(space)?;
    for e in &chain[1..] {
        acc = acc.meet(&e.invariant_partition().complete(space)?)?;
    }
    cond_exp_kernel(space, &acc)
}

/// Outcome of the exhaustive audit of the partition/idempotent correspondence
/// on one space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GaloisReport {
    pub partitions: usize,
    /// Distinct idempotents (one per null-set-complete partition).
    pub idempotents: usize,
    /// `(B, e)` pairs where `B ⊆ I_e` and `e_B ≤ e` disagree.
    pub adjunction_failures: usize,
    /// Idempotents with `e_{I_e} ≠ e`.
    pub fixpoint_failures: usize,
    /// Partitions with `I_{e_B} ≠ completion(B)`.
    pub completion_failures: usize,
    /// Violations of monotonicity of either map.
    pub monotonicity_failures: usize,
    pub pairs_checked: usize,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.adjunction_failures == 0
            && self.fixpoint_failures == 0
            && self.completion_failures == 0
            && self.monotonicity_failures == 0
    }
}

/// Exhaustively audits `B ↦ e_B` and `e ↦ I_e` over every partition of the
/// space.
pub fn galois_roundtrips<S: Scalar>(space: &ProbSpace<S>) -> Result<GaloisReport> {
    let n = space.size();
    if n > EXHAUSTIVE_MAX_SIZE {
        return Err(Error::TooLarge {
            size: n,
            max: EXHAUSTIVE_MAX_SIZE,
        });
    }
    let parts: Vec<Partition> = Partition::enumerate(n).collect();
    let e_of: Vec<IdempotentKernel<S>> = parts
        .par_iter()
        .map(|b| cond_exp_kernel(space, b))
        .collect::<Result<_>>()?;
    let inv_of: Vec<Partition> = e_of.iter().map(|e| e.invariant_partition()).collect();

    let mut report = GaloisReport {
        partitions: parts.len(),
        ..Default::default()
    };

    // I_{e_B} = completion(B)
    for (b, inv) in parts.iter().zip(&inv_of) {
        if *inv != b.complete(space)? {
            report.completion_failures += 1;
        }
    }

    // One idempotent per complete partition, in enumeration order.
    let complete_idx: Vec<usize> = (0..parts.len())
        .filter(|&i| parts[i].complete(space).map(|c| c == parts[i]).unwrap_or(false))
        .collect();
    report.idempotents = complete_idx.len();

    // e_{I_e} = e
    for &j in &complete_idx {
        let back = cond_exp_kernel(space, &inv_of[j])?;
        if !back.as_equal(&e_of[j])? {
            report.fixpoint_failures += 1;
        }
    }

    // Adjunction over every (B, e): B ⊆ I_e  ⟺  e_B ≤ e.
    // leq[i][c] records e_{B_i} ≤ e_{C_c}.
    let leq: Vec<Vec<bool>> = parts
        .par_iter()
        .enumerate()
        .map(|(i, _)| {
            complete_idx
                .iter()
                .map(|&j| idem_leq(&e_of[i], &e_of[j]).unwrap_or(false))
                .collect()
        })
        .collect();
    for (i, b) in parts.iter().enumerate() {
        for (c, &j) in complete_idx.iter().enumerate() {
            report.pairs_checked += 1;
            let included = inv_of[j].refines(b);
            if included != leq[i][c] {
                report.adjunction_failures += 1;
            }
        }
    }

    // Monotonicity of B ↦ e_B along refinement.
    let mono_parts: usize = (0..parts.len())
        .into_par_iter()
        .map(|i| {
            (0..parts.len())
                .filter(|&k| parts[k].refines(&parts[i]))
                .filter(|&k| !idem_leq(&e_of[i], &e_of[k]).unwrap_or(false))
                .count()
        })
        .sum();
    report.monotonicity_failures += mono_parts;

    // Monotonicity of e ↦ I_e along the idempotent order.
    for (a, &ja) in complete_idx.iter().enumerate() {
        for &jb in &complete_idx {
            let _ = a;
            let b_pos = complete_idx.iter().position(|&j| j == jb).unwrap();
            if leq[ja][b_pos] && !inv_of[jb].refines(&inv_of[ja]) {
                report.monotonicity_failures += 1;
            }
        }
    }
    Ok(report)
}
