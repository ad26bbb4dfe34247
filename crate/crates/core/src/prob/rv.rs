use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::prob::{Partition, ProbSpace};
use crate::scalar::Scalar;

/// Index of an `L^n` space: a finite exponent `n >= 1` or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1);
    pub const TWO: Exponent = Exponent::Finite(2);

    /// The exponents exercised by the property suites.
    pub const STANDARD: [Exponent; 4] = [
        Exponent::Finite(1),
        Exponent::Finite(2),
        Exponent::Finite(3),
        Exponent::Infinity,
    ];
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Exponent::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => std::cmp::Ordering::Less,
            (Infinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => match other.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(Exponent::Finite(n)),
                _ => Err(format!("expected a positive integer or `inf`, got `{other}`")),
            },
        }
    }
}

/// `(Σ w_i |v_i|^n)^(1/n)` or, for `∞`, the maximum of `|v_i|` over the
/// outcomes with positive weight.
pub(crate) fn weighted_norm<S: Scalar>(weights: &[S], abs_values: &[S], n: Exponent) -> S {
    match n {
        Exponent::Infinity => weights
            .iter()
            .zip(abs_values)
            .filter(|(w, _)| **w > S::zero())
            .fold(S::zero(), |acc, (_, v)| S::max_of(acc, v.clone())),
        Exponent::Finite(k) => {
            let powers: Vec<S> = abs_values.iter().map(|v| num_traits::pow(v.clone(), k as usize)).collect();
            let total = S::dot(weights.iter().zip(&powers));
            total.nth_root(k)
        }
    }
}

/// A real random variable on a finite space, compared up to almost-sure
/// equality.
#[derive(Clone, Debug)]
pub struct RandomVar<S: Scalar> {
    values: Vec<S>,
    space: ProbSpace<S>,
}

impl<S: Scalar> RandomVar<S> {
    pub fn new(space: &ProbSpace<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::SizeMismatch {
                expected: space.size(),
                found: values.len(),
            });
        }
        Ok(RandomVar {
            values,
            space: space.clone(),
        })
    }

    pub fn constant(space: &ProbSpace<S>, c: S) -> Self {
        RandomVar {
            values: vec![c; space.size()],
            space: space.clone(),
        }
    }

    /// Indicator of a set of outcomes.
    pub fn indicator<I: IntoIterator<Item = usize>>(space: &ProbSpace<S>, set: I) -> Self {
        let mut values = vec![S::zero(); space.size()];
        for x in set {
            values[x] = S::one();
        }
        RandomVar {
            values,
            space: space.clone(),
        }
    }

    /// Indicator of the set encoded by the bits of `mask`.
    pub fn indicator_mask(space: &ProbSpace<S>, mask: u64) -> Self {
        Self::indicator(space, (0..space.size()).filter(|&x| mask >> x & 1 == 1))
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &S {
        &self.values[x]
    }

    pub fn space(&self) -> &ProbSpace<S> {
        &self.space
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub(crate) fn ensure_same_space(&self, other: &Self) -> Result<()> {
        self.space.ensure_same(&other.space)
    }

    /// Agreement on every outcome of positive weight.
    pub fn as_equal(&self, other: &Self) -> Result<bool> {
        self.ensure_same_space(other)?;
        let tol = self.space.tolerance();
        Ok((0..self.space.size())
            .filter(|&x| self.space.is_supported(x))
            .all(|x| self.values[x].near(&other.values[x], tol)))
    }

    pub fn ln_norm(&self, n: Exponent) -> S {
        let abs: Vec<S> = self.values.iter().map(|v| v.abs()).collect();
        weighted_norm(self.space.weights(), &abs, n)
    }

    /// Expectation under the space's measure.
    pub fn expectation(&self) -> S {
        S::dot(self.space.weights().iter().zip(&self.values))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map<F: Fn(&S) -> S>(&self, f: F) -> Self {
        RandomVar {
            values: self.values.iter().map(f).collect(),
            space: self.space.clone(),
        }
    }

    fn zip_with<F: Fn(&S, &S) -> S>(&self, other: &Self, f: F) -> Result<Self> {
        self.ensure_same_space(other)?;
        Ok(RandomVar {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
            space: self.space.clone(),
        })
    }

    /// Constant on every block of `p`.
    pub fn is_measurable_wrt(&self, p: &Partition) -> Result<bool> {
        if p.parent_size() != self.values.len() {
            return Err(Error::SizeMismatch {
                expected: self.values.len(),
                found: p.parent_size(),
            });
        }
        let tol = self.space.tolerance();
        Ok(p.blocks().iter().all(|b| {
            let first = &self.values[b[0]];
            b.iter().all(|&x| self.values[x].near(first, tol))
        }))
    }
}

pub fn as_equal_rv<S: Scalar>(f: &RandomVar<S>, g: &RandomVar<S>) -> Result<bool> {
    f.as_equal(g)
}

pub fn ln_norm<S: Scalar>(f: &RandomVar<S>, n: Exponent) -> S {
    f.ln_norm(n)
}

pub fn measurable_wrt<S: Scalar>(f: &RandomVar<S>, p: &Partition) -> Result<bool> {
    f.is_measurable_wrt(p)
}

/// Norm on the value space `R^d` of a vector-valued random variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VNorm {
    #[default]
    Euclidean,
    Max,
    One,
}

impl VNorm {
    /// Norm of a vector.
    ///
    /// The Euclidean norm of an exact vector goes through [`Scalar::nth_root`],
    /// so it is exact whenever the squared length is a perfect square.
    pub fn apply<S: Scalar>(&self, v: &[S]) -> S {
        match self {
            VNorm::Max => v.iter().fold(S::zero(), |acc, x| S::max_of(acc, x.abs())),
            VNorm::One => v.iter().fold(S::zero(), |acc, x| acc + x.abs()),
            VNorm::Euclidean => v
                .iter()
                .fold(S::zero(), |acc, x| acc + x.clone() * x.clone())
                .nth_root(2),
        }
    }

    pub fn apply_f64(&self, v: &[f64]) -> f64 {
        self.apply(v)
    }
}

impl fmt::Display for VNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VNorm::Euclidean => "euclidean",
            VNorm::Max => "max",
            VNorm::One => "one",
        })
    }
}

impl FromStr for VNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "euclidean" | "l2" => Ok(VNorm::Euclidean),
            "max" | "sup" | "linf" => Ok(VNorm::Max),
            "one" | "l1" => Ok(VNorm::One),
            other => Err(format!("unknown vector norm `{other}`")),
        }
    }
}

/// A random variable with values in `R^dim`.
#[derive(Clone, Debug)]
pub struct VecRandomVar<S: Scalar> {
    values: Vec<Vec<S>>,
    dim: usize,
    space: ProbSpace<S>,
}

impl<S: Scalar> VecRandomVar<S> {
    pub fn new(space: &ProbSpace<S>, values: Vec<Vec<S>>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::SizeMismatch {
                expected: space.size(),
                found: values.len(),
            });
        }
        let dim = values.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::DimMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(bad) = values.iter().find(|v| v.len() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(VecRandomVar {
            values,
            dim,
            space: space.clone(),
        })
    }

    /// Stacks scalar random variables as coordinates.
    pub fn from_coordinates(coords: &[RandomVar<S>]) -> Result<Self> {
        let first = coords.first().ok_or(Error::Empty("coordinates"))?;
        for c in coords {
            first.ensure_same_space(c)?;
        }
        let values = (0..first.space.size())
            .map(|x| coords.iter().map(|c| c.values[x].clone()).collect())
            .collect();
        Self::new(&first.space, values)
    }

    pub fn constant(space: &ProbSpace<S>, v: Vec<S>) -> Result<Self> {
        Self::new(space, vec![v; space.size()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> &ProbSpace<S> {
        &self.space
    }

    pub fn values(&self) -> &[Vec<S>] {
        &self.values
    }

    /// The `i`-th coordinate as a scalar random variable.
    pub fn coordinate(&self, i: usize) -> RandomVar<S> {
        RandomVar {
            values: self.values.iter().map(|v| v[i].clone()).collect(),
            space: self.space.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect())
            .collect();
        Ok(VecRandomVar {
            values,
            dim: self.dim,
            space: self.space.clone(),
        })
    }

    pub fn as_equal(&self, other: &Self) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let tol = self.space.tolerance();
        Ok(self.space.support().into_iter().all(|x| {
            self.values[x]
                .iter()
                .zip(&other.values[x])
                .all(|(a, b)| a.near(b, tol))
        }))
    }

    /// `(∫ ‖G(x)‖^n dp)^(1/n)`; sup over the support for `n = ∞`.
    pub fn bochner_norm(&self, n: Exponent, vnorm: VNorm) -> S {
        let pointwise: Vec<S> = self.values.iter().map(|v| vnorm.apply(v)).collect();
        weighted_norm(self.space.weights(), &pointwise, n)
    }
}
