//! Filtrations, martingales and their convergence on finite spaces.
//!
//! A finite monotone filtration always stabilizes, so Lévy's upward and
//! downward theorems become exact statements: from the stabilization index on,
//! the martingale equals the conditional expectation on the limit partition
//! almost surely. Filtrations are compared after null-set completion.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::functor::{cond_expectation, vector_cond_expectation};
use crate::idempotent::{
    cond_exp_kernel, idem_leq, inf_idempotents, sup_idempotents, IdempotentKernel,
    EXHAUSTIVE_MAX_SIZE,
};
use crate::prob::{Exponent, Partition, ProbSpace, RandomVar, VNorm, VecRandomVar};
use crate::scalar::Scalar;
use crate::topology::{one_sided_distance, ConvergenceReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A monotone sequence of partitions of one space.
#[derive(Clone, Debug)]
pub struct Filtration<S: Scalar> {
    partitions: Vec<Partition>,
    direction: Direction,
    space: ProbSpace<S>,
}

impl<S: Scalar> Filtration<S> {
    /// Checks monotonicity up to null sets: each completed partition must
    /// refine (increasing) or be refined by (decreasing) the previous one.
    pub fn new(space: &ProbSpace<S>, partitions: Vec<Partition>, direction: Direction) -> Result<Self> {
        if partitions.is_empty() {
            return Err(Error::InvalidFiltration("no partitions".into()));
        }
        let completed = partitions
            .iter()
            .map(|p| p.complete(space))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidFiltration(e.to_string()))?;
        for (i, w) in completed.windows(2).enumerate() {
            let ok = match direction {
                Direction::Increasing => w[1].refines(&w[0]),
                Direction::Decreasing => w[0].refines(&w[1]),
            };
            if !ok {
                return Err(Error::InvalidFiltration(format!(
                    "levels {i} and {} are not nested",
                    i + 1
                )));
            }
        }
        Ok(Filtration {
            partitions,
            direction,
            space: space.clone(),
        })
    }

    pub fn increasing(space: &ProbSpace<S>, partitions: Vec<Partition>) -> Result<Self> {
        Self::new(space, partitions, Direction::Increasing)
    }

    pub fn decreasing(space: &ProbSpace<S>, partitions: Vec<Partition>) -> Result<Self> {
        Self::new(space, partitions, Direction::Decreasing)
    }

    /// Levels `0..=levels` of the dyadic filtration on `2^levels` equal atoms.
    pub fn dyadic(levels: u32) -> Self {
        let space = ProbSpace::uniform(1 << levels);
        let partitions = (0..=levels).map(|l| Partition::dyadic(levels, l)).collect();
        Filtration {
            partitions,
            direction: Direction::Increasing,
            space,
        }
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn space(&self) -> &ProbSpace<S> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Join (increasing) or meet of completions (decreasing).
    pub fn limit(&self) -> Partition {
        let space = &self.space;
        match self.direction {
            Direction::Increasing => self.partitions[1..]
                .iter()
                .fold(self.partitions[0].clone(), |acc, p| {
                    acc.join(p).expect("validated sizes")
                }),
            Direction::Decreasing => {
                let mut acc = self.partitions[0].complete(space).expect("validated sizes");
                for p in &self.partitions[1..] {
                    acc = acc
                        .meet(&p.complete(space).expect("validated sizes"))
                        .expect("validated sizes");
                }
                acc
            }
        }
    }

    /// First level whose completion equals the completed limit.
    pub fn stabilization_index(&self) -> usize {
        let lim = self.limit().complete(&self.space).expect("validated sizes");
        self.partitions
            .iter()
            .position(|p| p.complete(&self.space).expect("validated sizes") == lim)
            .expect("a finite monotone filtration reaches its limit")
    }
}

pub fn filtration_limit<S: Scalar>(f: &Filtration<S>) -> Partition {
    f.limit()
}

/// A filtration with one random variable per level.
#[derive(Clone, Debug)]
pub struct Martingale<S: Scalar> {
    filtration: Filtration<S>,
    rvs: Vec<RandomVar<S>>,
}

impl<S: Scalar> Martingale<S> {
    /// Pairs levels with random variables; see [`is_martingale`] for the
    /// martingale identities themselves.
    pub fn new(filtration: &Filtration<S>, rvs: Vec<RandomVar<S>>) -> Result<Self> {
        if rvs.len() != filtration.len() {
            return Err(Error::SizeMismatch {
                expected: filtration.len(),
                found: rvs.len(),
            });
        }
        for f in &rvs {
            filtration.space.ensure_same(f.space())?;
        }
        Ok(Martingale {
            filtration: filtration.clone(),
            rvs,
        })
    }

    pub fn filtration(&self) -> &Filtration<S> {
        &self.filtration
    }

    pub fn rvs(&self) -> &[RandomVar<S>] {
        &self.rvs
    }

    pub fn len(&self) -> usize {
        self.rvs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rvs.is_empty()
    }

    /// `‖f_i‖_n` per level.
    pub fn norms(&self, n: Exponent) -> Vec<S> {
        self.rvs.iter().map(|f| f.ln_norm(n)).collect()
    }

    /// First step at which a martingale identity fails, if any.
    pub fn first_violation(&self) -> Option<usize> {
        let parts = &self.filtration.partitions;
        for i in 0..self.rvs.len() {
            let measurable = cond_expectation(&self.rvs[i], &parts[i])
                .and_then(|c| c.as_equal(&self.rvs[i]))
                .unwrap_or(false);
            if !measurable {
                return Some(i);
            }
            // adjacent levels suffice: the tower property chains them
            for j in i + 1..(i + 2).min(self.rvs.len()) {
                let ok = match self.filtration.direction {
                    Direction::Increasing => cond_expectation(&self.rvs[j], &parts[i])
                        .and_then(|c| c.as_equal(&self.rvs[i])),
                    Direction::Decreasing => cond_expectation(&self.rvs[i], &parts[j])
                        .and_then(|c| c.as_equal(&self.rvs[j])),
                };
                if !ok.unwrap_or(false) {
                    return Some(j);
                }
            }
        }
        None
    }
}

/// `f_i = E[f | P_i]` for every level.
pub fn martingale_from_terminal<S: Scalar>(f: &RandomVar<S>, filt: &Filtration<S>) -> Result<Martingale<S>> {
    filt.space.ensure_same(f.space())?;
    let rvs = filt
        .partitions
        .iter()
        .map(|p| cond_expectation(f, p))
        .collect::<Result<_>>()?;
    Martingale::new(filt, rvs)
}

/// Adjacent tower identities and levelwise measurability, almost surely.
pub fn is_martingale<S: Scalar>(m: &Martingale<S>) -> bool {
    m.first_violation().is_none()
}

fn exact_tol<S: Scalar>(space: &ProbSpace<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        space.tolerance()
    }
}

/// The limit variable: the conditional expectation of the last level
/// (increasing) or the first level (decreasing) on the limit partition.
pub fn martingale_limit<S: Scalar>(m: &Martingale<S>) -> Result<RandomVar<S>> {
    let lim = m.filtration.limit();
    let source = match m.filtration.direction {
        Direction::Increasing => m.rvs.last(),
        Direction::Decreasing => m.rvs.first(),
    }
    .ok_or(Error::Empty("martingale"))?;
    cond_expectation(source, &lim)
}

/// `‖f_i − f_∞‖_n` per step. Convergence requires exact almost-sure
/// equality with the limit from the filtration's stabilization index on.
pub fn levy_report<S: Scalar>(m: &Martingale<S>, n: Exponent) -> Result<ConvergenceReport> {
    if let Some(step) = m.first_violation() {
        return Err(Error::NotAMartingale { step });
    }
    let limit = martingale_limit(m)?;
    let mut distances = Vec::with_capacity(m.len());
    for f in &m.rvs {
        distances.push(f.sub(&limit)?.ln_norm(n).to_f64());
    }
    let mut report = ConvergenceReport::from_distances(
        distances,
        exact_tol(m.filtration.space()),
        format!("L{n}"),
    );
    let stab = m.filtration.stabilization_index();
    let exact_tail = m.rvs[stab..]
        .iter()
        .map(|f| f.as_equal(&limit))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    report.converged &= exact_tail && report.stabilization_index.is_some_and(|i| i <= stab);
    Ok(report)
}

/// CSV with columns `step,ln_distance,n,stabilized`; `stabilized` marks the
/// steps at or after the report's stabilization index.
pub fn levy_csv(report: &ConvergenceReport, n: Exponent) -> String {
    let mut out = String::from("step,ln_distance,n,stabilized\n");
    for (i, d) in report.step_distances.iter().enumerate() {
        let stab = report.stabilization_index.is_some_and(|s| i >= s);
        writeln!(out, "{i},{d:?},{n},{stab}").unwrap();
    }
    out
}

/// The martingale `f_n = 2^n · 1[first 2^(K−n) atoms]` on the dyadic
/// filtration with `2^K` atoms, with its norm diagnostics.
#[derive(Clone, Debug)]
pub struct NonIntegrableExample<S: Scalar> {
    pub martingale: Martingale<S>,
    /// `‖f_n‖_1` for `n = 0..=K`.
    pub l1_norms: Vec<S>,
    /// `‖f_{n+1} − f_n‖_1` for `n = 0..K`.
    pub increment_norms: Vec<S>,
}

impl<S: Scalar> NonIntegrableExample<S> {
    /// Every norm and every increment norm equals one.
    pub fn diagnostics_hold(&self) -> bool {
        let tol = self.martingale.filtration.space.tolerance();
        self.l1_norms
            .iter()
            .chain(&self.increment_norms)
            .all(|v| v.near(&S::one(), tol))
    }
}

pub fn nonintegrable_example<S: Scalar>(levels: u32) -> Result<NonIntegrableExample<S>> {
    if levels < 2 {
        return Err(Error::TooSmall {
            size: levels as usize,
            min: 2,
        });
    }
    if levels > 24 {
        return Err(Error::TooLarge {
            size: levels as usize,
            max: 24,
        });
    }
    let filt = Filtration::<S>::dyadic(levels);
    let atoms = 1usize << levels;
    let rvs: Vec<RandomVar<S>> = (0..=levels)
        .map(|n| {
            let height = S::from_usize(1 << n);
            let width = 1usize << (levels - n);
            let values = (0..atoms)
                .map(|x| if x < width { height.clone() } else { S::zero() })
                .collect();
            RandomVar::new(&filt.space, values)
        })
        .collect::<Result<_>>()?;
    let l1_norms = rvs.iter().map(|f| f.ln_norm(Exponent::ONE)).collect();
    let increment_norms = rvs
        .windows(2)
        .map(|w| w[1].sub(&w[0]).map(|d| d.ln_norm(Exponent::ONE)))
        .collect::<Result<_>>()?;
    Ok(NonIntegrableExample {
        martingale: Martingale::new(&filt, rvs)?,
        l1_norms,
        increment_norms,
    })
}

/// `P ≤ Q` for the pullback operators of two idempotents, tested on the
/// point-indicator basis in `L^n`: both `P∘Q` and `Q∘P` must send each basis
/// vector to its image under `P`.
pub fn operator_leq<S: Scalar>(
    e1: &IdempotentKernel<S>,
    e2: &IdempotentKernel<S>,
    n: Exponent,
) -> Result<bool> {
    let space = e1.space();
    space.ensure_same(e2.space())?;
    let tol = exact_tol(space);
    let (k1, k2) = (e1.kernel(), e2.kernel());
    for y in 0..space.size() {
        let basis = RandomVar::indicator(space, [y]);
        let p = k1.pullback(&basis)?;
        let pq = k1.pullback(&k2.pullback(&basis)?)?;
        let qp = k2.pullback(&p)?;
        for v in [pq, qp] {
            // in exact arithmetic a zero norm is a.s. equality, for every n
            let same = if S::EXACT {
                v.as_equal(&p)?
            } else {
                v.sub(&p)?.ln_norm(n).to_f64() <= tol
            };
            if !same {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that the operator of `candidate` is the supremum (increasing) or
/// infimum (decreasing) of the levels' operators among all
/// partition-induced idempotents.
pub fn preserves_optima_check_with<S: Scalar>(
    filt: &Filtration<S>,
    candidate: &Partition,
    n: Exponent,
) -> Result<bool> {
    let space = filt.space();
    if space.size() > EXHAUSTIVE_MAX_SIZE {
        return Err(Error::TooLarge {
            size: space.size(),
            max: EXHAUSTIVE_MAX_SIZE,
        });
    }
    let levels = filt
        .partitions
        .iter()
        .map(|p| cond_exp_kernel(space, p))
        .collect::<Result<Vec<_>>>()?;
    let cand = cond_exp_kernel(space, candidate)?;
    let up = filt.direction == Direction::Increasing;
    // A bound of the chain: above every level (sup) or below every level (inf).
    // The last level is the most restrictive either way, so non-bounds
    // exit early.
    let ordered: Vec<&IdempotentKernel<S>> = levels.iter().rev().collect();
    let is_bound = |e: &IdempotentKernel<S>| -> Result<bool> {
        for &l in &ordered {
            let ok = if up { operator_leq(l, e, n)? } else { operator_leq(e, l, n)? };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if !is_bound(&cand)? {
        return Ok(false);
    }
    for p in Partition::enumerate(space.size()) {
        let e = cond_exp_kernel(space, &p)?;
        if is_bound(&e)? {
            let ok = if up { operator_leq(&cand, &e, n)? } else { operator_leq(&e, &cand, n)? };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`preserves_optima_check_with`] for the filtration's own limit.
pub fn preserves_optima_check<S: Scalar>(filt: &Filtration<S>, n: Exponent) -> Result<bool> {
    preserves_optima_check_with(filt, &filt.limit(), n)
}

/// Distances from the elements of a monotone chain of idempotents to its
/// supremum or infimum, in the one-sided metric (which equals half the
/// two-sided one on idempotents).
pub fn levi_property_check<S: Scalar>(chain: &[IdempotentKernel<S>]) -> Result<ConvergenceReport> {
    let first = chain.first().ok_or(Error::Empty("idempotent chain"))?;
    let mut up = true;
    let mut down = true;
    for w in chain.windows(2) {
        up &= idem_leq(&w[0], &w[1])?;
        down &= idem_leq(&w[1], &w[0])?;
    }
    let limit = if up {
        sup_idempotents(chain)?
    } else if down {
        inf_idempotents(chain)?
    } else {
        return Err(Error::NotMonotone);
    };
    let distances = chain
        .iter()
        .map(|e| one_sided_distance(e.kernel(), limit.kernel()).map(|d| d.to_f64()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_distances(
        distances,
        exact_tol(first.space()),
        "one-sided",
    ))
}

/// Lévy convergence for a vector-valued variable, with the scalar report of
/// every coordinate.
#[derive(Clone, Debug)]
pub struct BochnerLevyReport {
    pub report: ConvergenceReport,
    pub coordinates: Vec<ConvergenceReport>,
}

pub fn bochner_levy_report<S: Scalar>(
    g: &VecRandomVar<S>,
    filt: &Filtration<S>,
    n: Exponent,
    vnorm: VNorm,
) -> Result<BochnerLevyReport> {
    filt.space.ensure_same(g.space())?;
    let lim = filt.limit();
    let limit = vector_cond_expectation(g, &lim)?;
    let levels = filt
        .partitions
        .iter()
        .map(|p| vector_cond_expectation(g, p))
        .collect::<Result<Vec<_>>>()?;
    let distances = levels
        .iter()
        .map(|l| l.sub(&limit).map(|d| d.bochner_norm(n, vnorm).to_f64()))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ConvergenceReport::from_distances(
        distances,
        exact_tol(filt.space()),
        format!("L{n}({vnorm})"),
    );
    let stab = filt.stabilization_index();
    let exact_tail = levels[stab..]
        .iter()
        .map(|l| l.as_equal(&limit))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    report.converged &= exact_tail;
    let coordinates = (0..g.dim())
        .map(|i| levy_report(&martingale_from_terminal(&g.coordinate(i), filt)?, n))
        .collect::<Result<_>>()?;
    Ok(BochnerLevyReport {
        report,
        coordinates,
    })
}
