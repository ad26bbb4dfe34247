use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::prob::ProbSpace;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// A joint distribution on `X × Y`. Its marginals are the domain and codomain
/// measures of the kernel it conditions to.
#[derive(Clone, Debug)]
pub struct Coupling<S: Scalar> {
    table: Vec<S>,
    n_rows: usize,
    n_cols: usize,
}

impl<S: Scalar> Coupling<S> {
    pub fn new(table: Vec<Vec<S>>) -> Result<Self> {
        Self::with_tolerance(table, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(table: Vec<Vec<S>>, tol: f64) -> Result<Self> {
        let n_rows = table.len();
        let n_cols = table.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidCoupling("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidCoupling("ragged table".into()));
        }
        let flat: Vec<S> = table.into_iter().flatten().collect();
        if flat.iter().any(|v| *v < S::zero()) {
            return Err(Error::InvalidCoupling("negative entry".into()));
        }
        let total = crate::scalar::sum(&flat);
        if !total.near(&S::one(), tol) {
            return Err(Error::InvalidCoupling(format!("total mass {total}")));
        }
        Ok(Self::from_parts(flat, n_rows, n_cols))
    }

    pub(crate) fn from_parts(table: Vec<S>, n_rows: usize, n_cols: usize) -> Self {
        Coupling {
            table,
            n_rows,
            n_cols,
        }
    }

    pub fn entry(&self, x: usize, y: usize) -> &S {
        &self.table[x * self.n_cols + y]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.table.chunks(self.n_cols).map(<[S]>::to_vec).collect()
    }

    /// The `X`-marginal `p`.
    pub fn row_marginal(&self) -> Vec<S> {
        self.table
            .chunks(self.n_cols)
            .map(crate::scalar::sum)
            .collect()
    }

    /// The `Y`-marginal `q`.
    pub fn col_marginal(&self) -> Vec<S> {
        (0..self.n_cols)
            .map(|y| {
                (0..self.n_rows).fold(S::zero(), |acc, x| acc + self.entry(x, y).clone())
            })
            .collect()
    }

    /// Conditions on the first coordinate: `k(y|x) = c(x, y) / p(x)`.
    /// Rows at null `x` are set to `q`.
    pub fn to_kernel(&self, tol: f64) -> Result<Kernel<S>> {
        let p = ProbSpace::with_tolerance(self.row_marginal(), tol)?;
        let q = ProbSpace::with_tolerance(self.col_marginal(), tol)?;
        let mut rows = Vec::with_capacity(self.table.len());
        for x in 0..self.n_rows {
            let px = p.weight(x);
            if px.is_zero() {
                rows.extend_from_slice(q.weights());
            } else {
                rows.extend(
                    self.table[x * self.n_cols..(x + 1) * self.n_cols]
                        .iter()
                        .map(|v| v.clone() / px.clone()),
                );
            }
        }
        Kernel::from_flat(rows, &p, &q)
    }
}
