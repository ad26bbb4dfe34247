//! Distances between kernels and horizon-bounded convergence checks.
//!
//! The one-sided distance is `Σ_x Σ_y p(x) |k(y|x) − h(y|x)|`. For every
//! event `B` it bounds `∫ |k(B|x) − h(B|x)| dp`, and is itself at most `|Y|`
//! times the worst singleton, so on a finite space its null sequences are
//! the setwise-convergent ones. The two-sided distance adds the same
//! quantity for the Bayesian inverses.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::Exponent;
use crate::scalar::Scalar;

/// Subsets of the codomain are enumerated exhaustively up to this size;
/// above it only singletons are probed.
pub const SUBSET_PROBE_MAX: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Metric {
    #[default]
    OneSided,
    TwoSided,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::OneSided => "one-sided",
            Metric::TwoSided => "two-sided",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "one-sided" | "one_sided" | "one" => Ok(Metric::OneSided),
            "two-sided" | "two_sided" | "two" => Ok(Metric::TwoSided),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

pub fn one_sided_distance<S: Scalar>(k: &Kernel<S>, h: &Kernel<S>) -> Result<S> {
    k.domain().ensure_same(h.domain())?;
    k.codomain().ensure_same(h.codomain())?;
    let mut total = S::zero();
    for x in k.domain().support() {
        let row = k
            .row(x)
            .iter()
            .zip(h.row(x))
            .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
        total = total + k.domain().weight(x).clone() * row;
    }
    Ok(total)
}

pub fn two_sided_distance<S: Scalar>(k: &Kernel<S>, h: &Kernel<S>) -> Result<S> {
    k.domain().ensure_same(h.domain())?;
    k.codomain().ensure_same(h.codomain())?;
    k.ensure_measure_preserving()?;
    h.ensure_measure_preserving()?;
    let fwd = one_sided_distance(k, h)?;
    let back = one_sided_distance(&k.bayes_inverse()?, &h.bayes_inverse()?)?;
    Ok(fwd + back)
}

pub fn distance<S: Scalar>(k: &Kernel<S>, h: &Kernel<S>, metric: Metric) -> Result<S> {
    match metric {
        Metric::OneSided => one_sided_distance(k, h),
        Metric::TwoSided => two_sided_distance(k, h),
    }
}

/// The kernel whose every row is the codomain measure.
pub fn independent_kernel<S: Scalar>(k: &Kernel<S>) -> Kernel<S> {
    let rows = vec![k.codomain().weights().to_vec(); k.n_rows()];
    Kernel::new(rows, k.domain(), k.codomain()).expect("codomain measure is a valid row")
}

/// `(1 − t) k + t q`, where `q` is the independent kernel. Stays
/// measure-preserving when `k` is.
pub fn perturb_towards_independent<S: Scalar>(k: &Kernel<S>, t: &S) -> Result<Kernel<S>> {
    k.interpolate(&independent_kernel(k), t)
}

/// Per-step distances to a limit and the verdict drawn from them.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub step_distances: Vec<f64>,
    pub converged: bool,
    /// First step from which every evaluated distance is within tolerance.
    pub stabilization_index: Option<usize>,
    pub tolerance: f64,
    /// Number of evaluated steps.
    pub horizon: usize,
    /// Name of the distance, written to the CSV `metric` column.
    pub metric: String,
}

impl ConvergenceReport {
    pub fn from_distances(step_distances: Vec<f64>, tolerance: f64, metric: impl Into<String>) -> Self {
        let horizon = step_distances.len();
        let mut idx = horizon;
        while idx > 0 && step_distances[idx - 1] <= tolerance {
            idx -= 1;
        }
        let stabilization_index = (idx < horizon).then_some(idx);
        ConvergenceReport {
            converged: stabilization_index.is_some(),
            stabilization_index,
            tolerance,
            horizon,
            metric: metric.into(),
            step_distances,
        }
    }

    pub fn last_distance(&self) -> Option<f64> {
        self.step_distances.last().copied()
    }

    /// Each distance at most the previous one (up to `slack`).
    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.step_distances.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    /// Strictly decreasing until it first reaches zero, then zero.
    pub fn decreases_to_zero(&self) -> bool {
        let first_zero = self.step_distances.iter().position(|&d| d == 0.0);
        match first_zero {
            None => false,
            Some(z) => {
                self.step_distances[..=z].windows(2).all(|w| w[1] < w[0])
                    && self.step_distances[z..].iter().all(|&d| d == 0.0)
            }
        }
    }

    /// CSV with columns `step,distance,metric,tol,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,distance,metric,tol,converged\n");
        for (i, d) in self.step_distances.iter().enumerate() {
            writeln!(out, "{i},{d:?},{},{:?},{}", self.metric, self.tolerance, self.converged).unwrap();
        }
        out
    }
}

/// Distances from the first `horizon` terms of `seq` to `limit`.
pub fn check_convergence<S, I>(
    seq: I,
    limit: &Kernel<S>,
    metric: Metric,
    tol: f64,
    horizon: usize,
) -> Result<ConvergenceReport>
where
    S: Scalar,
    I: IntoIterator<Item = Kernel<S>>,
{
    let limit_dag = match metric {
        Metric::TwoSided => {
            limit.ensure_measure_preserving()?;
            Some(limit.bayes_inverse()?)
        }
        Metric::OneSided => None,
    };
    let mut distances = Vec::new();
    for k in seq.into_iter().take(horizon) {
        let mut d = one_sided_distance(&k, limit)?;
        if let Some(ld) = &limit_dag {
            k.ensure_measure_preserving()?;
            d = d + one_sided_distance(&k.bayes_inverse()?, ld)?;
        }
        distances.push(d.to_f64());
    }
    Ok(ConvergenceReport::from_distances(distances, tol, metric.to_string()))
}

/// `max_B ‖k*1_B − h*1_B‖_n` over codomain events `B` (all of them when the
/// codomain has at most [`SUBSET_PROBE_MAX`] points, singletons otherwise).
pub fn operator_distance<S: Scalar>(k: &Kernel<S>, h: &Kernel<S>, n: Exponent) -> Result<f64> {
    k.domain().ensure_same(h.domain())?;
    k.codomain().ensure_same(h.codomain())?;
    let rows = k.n_rows();
    let cols = k.n_cols();
    let weights: Vec<f64> = k.domain().weights().iter().map(Scalar::to_f64).collect();
    let diff: Vec<f64> = k
        .entries()
        .iter()
        .zip(h.entries())
        .map(|(a, b)| (a.clone() - b.clone()).to_f64())
        .collect();
    let norm = |v: &[f64]| -> f64 {
        let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        crate::prob::weighted_norm(&weights, &abs, n)
    };
    let mut best = 0f64;
    if cols <= SUBSET_PROBE_MAX {
        // Gray-code walk: each step toggles one codomain point in B.
        let mut acc = vec![0f64; rows];
        for i in 1u64..(1u64 << cols) {
            let bit = i.trailing_zeros() as usize;
            let adding = (i ^ (i >> 1)) & (1 << bit) != 0;
            for (x, a) in acc.iter_mut().enumerate() {
                let d = diff[x * cols + bit];
                *a += if adding { d } else { -d };
            }
            best = best.max(norm(&acc));
        }
    } else {
        let mut col = vec![0f64; rows];
        for y in 0..cols {
            for (x, c) in col.iter_mut().enumerate() {
                *c = diff[x * cols + y];
            }
            best = best.max(norm(&col));
        }
    }
    Ok(best)
}

/// Both sides of the comparison between kernel-metric convergence and
/// pointwise convergence of the pullback operators.
#[derive(Clone, Debug)]
pub struct HomeomorphismReport {
    pub kernel: ConvergenceReport,
    pub operator: ConvergenceReport,
}

impl HomeomorphismReport {
    pub fn agree(&self) -> bool {
        self.kernel.converged == self.operator.converged
    }
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let max = v.iter().copied().fold(0f64, f64::max);
    if max == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|d| d / max).collect()
    }
}

/// Default relative tolerance for [`homeomorphism_check`]: each distance
/// sequence is divided by its own maximum before the tail is tested.
pub const HOMEOMORPHISM_TOLERANCE: f64 = 1e-2;

pub fn homeomorphism_report<S: Scalar>(
    seq: &[Kernel<S>],
    limit: &Kernel<S>,
    n: Exponent,
    tol: f64,
) -> Result<HomeomorphismReport> {
    let mut kd = Vec::with_capacity(seq.len());
    let mut od = Vec::with_capacity(seq.len());
    for k in seq {
        kd.push(one_sided_distance(k, limit)?.to_f64());
        od.push(operator_distance(k, limit, n)?);
    }
    Ok(HomeomorphismReport {
        kernel: ConvergenceReport::from_distances(normalized(&kd), tol, "one-sided"),
        operator: ConvergenceReport::from_distances(normalized(&od), tol, format!("operator-L{n}")),
    })
}

/// True when the kernel sequence converges in the one-sided metric exactly
/// when its pullbacks converge on every indicator in `L^n`.
pub fn homeomorphism_check<S: Scalar>(seq: &[Kernel<S>], limit: &Kernel<S>, n: Exponent) -> Result<bool> {
    Ok(homeomorphism_report(seq, limit, n, HOMEOMORPHISM_TOLERANCE)?.agree())
}

/// Per-step distance between the composite of the limits and the composite
/// of the sequences, next to the bound `d(k_n, k) + d(h_n, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionProbe {
    pub defects: Vec<f64>,
    pub bounds: Vec<f64>,
}

impl CompositionProbe {
    pub fn final_defect(&self) -> f64 {
        self.defects.last().copied().unwrap_or(0.0)
    }

    pub fn within_bounds(&self, slack: f64) -> bool {
        self.defects
            .iter()
            .zip(&self.bounds)
            .all(|(d, b)| *d <= b + slack)
    }
}

pub fn composition_continuity_probe<S: Scalar>(
    seq_k: &[Kernel<S>],
    lim_k: &Kernel<S>,
    seq_h: &[Kernel<S>],
    lim_h: &Kernel<S>,
) -> Result<CompositionProbe> {
    if seq_k.len() != seq_h.len() {
        return Err(Error::SizeMismatch {
            expected: seq_k.len(),
            found: seq_h.len(),
        });
    }
    let target = lim_k.then(lim_h)?;
    let mut defects = Vec::with_capacity(seq_k.len());
    let mut bounds = Vec::with_capacity(seq_k.len());
    for (k, h) in seq_k.iter().zip(seq_h) {
        defects.push(one_sided_distance(&k.then(h)?, &target)?.to_f64());
        let b = one_sided_distance(k, lim_k)? + one_sided_distance(h, lim_h)?;
        bounds.push(b.to_f64());
    }
    Ok(CompositionProbe { defects, bounds })
}

/// `t_i = 1/(i+1)` interpolation from `h` towards `k`: step `i` is
/// `(1 − t_i) k + t_i h`.
pub fn interpolating_sequence<S: Scalar>(k: &Kernel<S>, h: &Kernel<S>, len: usize) -> Result<Vec<Kernel<S>>> {
    (0..len)
        .map(|i| h.interpolate(k, &(S::one() - S::from_ratio(1, i as i64 + 1))))
        .collect()
}
