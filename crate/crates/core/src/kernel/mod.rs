//! Markov kernels between finite probability spaces, identified up to
//! almost-sure equality.
//!
//! A kernel `k : (X, p) → (Y, q)` is a row-stochastic matrix with
//! `rows[x][y] = k({y}|x)`. It is measure-preserving when `pᵀ k = q`. Rows at
//! outcomes of zero weight are invisible to every comparison in this module.
//!
//! Composition is written in diagrammatic order: `k.then(&l)` (or
//! `compose(&k, &l)`) is "first `k`, then `l`", whose matrix is `k · l`.

mod coupling;
pub mod format;

pub use coupling::Coupling;

use crate::error::{Error, Result};
use crate::prob::{Partition, ProbSpace, RandomVar};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Kernel<S: Scalar> {
    rows: Vec<S>,
    domain: ProbSpace<S>,
    codomain: ProbSpace<S>,
}

impl<S: Scalar> Kernel<S> {
    /// Validates nonnegativity and row sums. Measure preservation is not
    /// required here; see [`Kernel::measure_preserving`].
    pub fn new(rows: Vec<Vec<S>>, domain: &ProbSpace<S>, codomain: &ProbSpace<S>) -> Result<Self> {
        if rows.len() != domain.size() {
            return Err(Error::SizeMismatch {
                expected: domain.size(),
                found: rows.len(),
            });
        }
        let m = codomain.size();
        let mut flat = Vec::with_capacity(rows.len() * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::from_flat(flat, domain, codomain)
    }

    pub(crate) fn from_flat(
        rows: Vec<S>,
        domain: &ProbSpace<S>,
        codomain: &ProbSpace<S>,
    ) -> Result<Self> {
        let m = codomain.size();
        debug_assert_eq!(rows.len(), domain.size() * m);
        let tol = domain.tolerance();
        for (x, row) in rows.chunks(m).enumerate() {
            if let Some(y) = row.iter().position(|v| *v < S::zero()) {
                return Err(Error::NegativeEntry { row: x, col: y });
            }
            let s = crate::scalar::sum(row);
            if !s.near(&S::one(), tol) {
                return Err(Error::NotStochastic {
                    row: x,
                    sum: s.to_f64(),
                });
            }
        }
        Ok(Kernel {
            rows,
            domain: domain.clone(),
            codomain: codomain.clone(),
        })
    }

    /// Like [`Kernel::new`], additionally requiring `pᵀ k = q`.
    pub fn measure_preserving(
        rows: Vec<Vec<S>>,
        domain: &ProbSpace<S>,
        codomain: &ProbSpace<S>,
    ) -> Result<Self> {
        let k = Self::new(rows, domain, codomain)?;
        k.ensure_measure_preserving()?;
        Ok(k)
    }

    /// Kernel whose codomain is the pushforward `pᵀ k`, hence measure-preserving
    /// by construction.
    pub fn with_pushforward(rows: Vec<Vec<S>>, domain: &ProbSpace<S>) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::Empty("kernel rows"));
        }
        let mut q = vec![S::zero(); m];
        for (x, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            let px = domain.weight(x);
            if px.is_zero() {
                continue;
            }
            for (qy, v) in q.iter_mut().zip(row) {
                *qy = qy.clone() + px.clone() * v.clone();
            }
        }
        let codomain = ProbSpace::with_tolerance(q, domain.tolerance())?;
        Self::new(rows, domain, &codomain)
    }

    pub fn identity(space: &ProbSpace<S>) -> Self {
        let n = space.size();
        let mut rows = vec![S::zero(); n * n];
        for i in 0..n {
            rows[i * n + i] = S::one();
        }
        Kernel {
            rows,
            domain: space.clone(),
            codomain: space.clone(),
        }
    }

    /// The kernel `1 → X` picking the measure of `space`.
    pub fn from_measure(space: &ProbSpace<S>) -> Self {
        Kernel {
            rows: space.weights().to_vec(),
            domain: ProbSpace::point(),
            codomain: space.clone(),
        }
    }

    /// `δ_f`: row `x` is the point mass at `f[x]`. Requires `f` to push `p`
    /// forward to `q`.
    pub fn deterministic(
        f: &[usize],
        domain: &ProbSpace<S>,
        codomain: &ProbSpace<S>,
    ) -> Result<Self> {
        if f.len() != domain.size() {
            return Err(Error::SizeMismatch {
                expected: domain.size(),
                found: f.len(),
            });
        }
        let m = codomain.size();
        if let Some(&bad) = f.iter().find(|&&y| y >= m) {
            return Err(Error::SizeMismatch {
                expected: m,
                found: bad + 1,
            });
        }
        let mut rows = vec![S::zero(); f.len() * m];
        for (x, &y) in f.iter().enumerate() {
            rows[x * m + y] = S::one();
        }
        let k = Kernel {
            rows,
            domain: domain.clone(),
            codomain: codomain.clone(),
        };
        k.ensure_measure_preserving()?;
        Ok(k)
    }

    /// The same kernel in double precision.
    pub fn map_to_f64(&self) -> Kernel<f64> {
        Kernel {
            rows: self.rows.iter().map(Scalar::to_f64).collect(),
            domain: self.domain.map_to_f64(),
            codomain: self.codomain.map_to_f64(),
        }
    }

    pub fn domain(&self) -> &ProbSpace<S> {
        &self.domain
    }

    pub fn codomain(&self) -> &ProbSpace<S> {
        &self.codomain
    }

    pub fn n_rows(&self) -> usize {
        self.domain.size()
    }

    pub fn n_cols(&self) -> usize {
        self.codomain.size()
    }

    pub fn row(&self, x: usize) -> &[S] {
        let m = self.n_cols();
        &self.rows[x * m..(x + 1) * m]
    }

    pub fn entry(&self, x: usize, y: usize) -> &S {
        &self.rows[x * self.n_cols() + y]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[S] {
        &self.rows
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        self.rows.chunks(self.n_cols()).map(<[S]>::to_vec).collect()
    }

    pub fn tolerance(&self) -> f64 {
        self.domain.tolerance()
    }

    /// `k(B|x)` for a set `B` of codomain outcomes.
    pub fn prob_of_set<I: IntoIterator<Item = usize>>(&self, x: usize, set: I) -> S {
        let row = self.row(x);
        set.into_iter()
            .fold(S::zero(), |acc, y| acc + row[y].clone())
    }

    /// `pᵀ k`.
    pub fn pushforward(&self) -> Vec<S> {
        let m = self.n_cols();
        let mut q = vec![S::zero(); m];
        for x in 0..self.n_rows() {
            let px = self.domain.weight(x);
            if px.is_zero() {
                continue;
            }
            for (qy, v) in q.iter_mut().zip(self.row(x)) {
                if !v.is_zero() {
                    *qy = qy.clone() + px.clone() * v.clone();
                }
            }
        }
        q
    }

    fn measure_deviation(&self) -> (bool, f64) {
        let tol = self.tolerance();
        let q = self.pushforward();
        let mut ok = true;
        let mut dev = 0f64;
        for (a, b) in q.iter().zip(self.codomain.weights()) {
            if !a.near(b, tol) {
                ok = false;
            }
            dev = dev.max((a.clone() - b.clone()).abs().to_f64());
        }
        (ok, dev)
    }

    pub fn is_measure_preserving(&self) -> bool {
        self.measure_deviation().0
    }

    pub(crate) fn ensure_measure_preserving(&self) -> Result<()> {
        match self.measure_deviation() {
            (true, _) => Ok(()),
            (false, deviation) => Err(Error::NotMeasurePreserving { deviation }),
        }
    }

    pub(crate) fn ensure_same_spaces(&self, other: &Self) -> Result<()> {
        self.domain.ensure_same(&other.domain)?;
        self.codomain.ensure_same(&other.codomain)
    }

    /// `self` followed by `next`; the matrix product `self · next`.
    pub fn then(&self, next: &Kernel<S>) -> Result<Kernel<S>> {
        self.codomain.ensure_same(&next.domain)?;
        let (n, mid, m) = (self.n_rows(), self.n_cols(), next.n_cols());
        let mut out = Vec::with_capacity(n * m);
        for x in 0..n {
            let row = &self.row(x)[..mid];
            for z in 0..m {
                out.push(S::dot(row.iter().enumerate().map(|(y, a)| (a, &next.row(y)[z]))));
            }
        }
        Ok(Kernel {
            rows: out,
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
        })
    }

    /// Rows agree at every outcome of positive domain weight.
    pub fn as_equal(&self, other: &Kernel<S>) -> Result<bool> {
        self.ensure_same_spaces(other)?;
        Ok(self.as_equal_unchecked(other))
    }

    pub(crate) fn as_equal_unchecked(&self, other: &Kernel<S>) -> bool {
        let tol = self.tolerance();
        (0..self.n_rows())
            .filter(|&x| self.domain.is_supported(x))
            .all(|x| {
                self.row(x)
                    .iter()
                    .zip(other.row(x))
                    .all(|(a, b)| a.near(b, tol))
            })
    }

    /// Largest entrywise difference over supported rows.
    pub fn max_defect(&self, other: &Kernel<S>) -> Result<f64> {
        self.ensure_same_spaces(other)?;
        let mut worst = 0f64;
        for x in self.domain.support() {
            for (a, b) in self.row(x).iter().zip(other.row(x)) {
                worst = worst.max((a.clone() - b.clone()).abs().to_f64());
            }
        }
        Ok(worst)
    }

    /// Replaces every row at a null domain outcome by the codomain measure.
    pub fn canonicalize(&self) -> Result<Kernel<S>> {
        self.ensure_measure_preserving()?;
        Ok(self.canonicalize_unchecked())
    }

    pub(crate) fn canonicalize_unchecked(&self) -> Kernel<S> {
        let mut out = self.clone();
        let m = self.n_cols();
        for x in 0..self.n_rows() {
            if !self.domain.is_supported(x) {
                out.rows[x * m..(x + 1) * m].clone_from_slice(self.codomain.weights());
            }
        }
        out
    }

    /// The Bayesian inverse `k⁺ : (Y, q) → (X, p)`:
    /// `k⁺(x|y) = k(y|x) p(x) / q(y)` for `q(y) > 0`; rows at null `y` are `p`.
    pub fn bayes_inverse(&self) -> Result<Kernel<S>> {
        self.ensure_measure_preserving()?;
        let (n, m) = (self.n_rows(), self.n_cols());
        let mass = self.pushforward();
        let mut rows = vec![S::zero(); m * n];
        for y in 0..m {
            let out = &mut rows[y * n..(y + 1) * n];
            if !self.codomain.is_supported(y) || mass[y].is_zero() {
                out.clone_from_slice(self.domain.weights());
                continue;
            }
            for (x, o) in out.iter_mut().enumerate() {
                let v = self.entry(x, y);
                let px = self.domain.weight(x);
                if !v.is_zero() && !px.is_zero() {
                    *o = v.clone() * px.clone() / mass[y].clone();
                }
            }
        }
        Ok(Kernel {
            rows,
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
        })
    }

    /// Almost-sure determinism via the dagger-epi test `k⁺` then `k` = id.
    pub fn is_as_deterministic(&self) -> Result<bool> {
        let back = self.bayes_inverse()?.then(self)?;
        Ok(back.as_equal_unchecked(&Kernel::identity(&self.codomain)))
    }

    /// Every supported row is a point mass.
    pub fn has_deterministic_rows(&self) -> bool {
        let tol = self.tolerance();
        self.domain.support().into_iter().all(|x| {
            let row = self.row(x);
            row.iter().all(|v| v.is_near_zero(tol) || v.near(&S::one(), tol))
        })
    }

    /// `k*g`: `(k*g)(x) = Σ_y k(y|x) g(y)`.
    pub fn pullback(&self, g: &RandomVar<S>) -> Result<RandomVar<S>> {
        self.codomain.ensure_same(g.space())?;
        let values = (0..self.n_rows())
            .map(|x| {
                self.row(x)
                    .iter()
                    .zip(g.values())
                    .filter(|(a, _)| !a.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect();
        RandomVar::new(&self.domain, values)
    }

    /// Entrywise convex combination `(1 - t) self + t other`.
    pub fn interpolate(&self, other: &Kernel<S>, t: &S) -> Result<Kernel<S>> {
        self.domain.ensure_same(&other.domain)?;
        if self.n_cols() != other.n_cols() {
            return Err(Error::SizeMismatch {
                expected: self.n_cols(),
                found: other.n_cols(),
            });
        }
        let s = S::one() - t.clone();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| s.clone() * a.clone() + t.clone() * b.clone())
            .collect();
        Ok(Kernel {
            rows,
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    /// Joint distribution `c(x, y) = p(x) k(y|x)`.
    pub fn to_coupling(&self) -> Result<Coupling<S>> {
        self.ensure_measure_preserving()?;
        let m = self.n_cols();
        let table = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, v)| self.domain.weight(i / m).clone() * v.clone())
            .collect();
        Ok(Coupling::from_parts(table, self.n_rows(), m))
    }
}

/// `k` followed by `l`.
pub fn compose<S: Scalar>(k: &Kernel<S>, l: &Kernel<S>) -> Result<Kernel<S>> {
    k.then(l)
}

/// The quotient of a space by a partition, with the collapse map and its
/// disintegration.
#[derive(Clone, Debug)]
pub struct Coarsening<S: Scalar> {
    pub quotient: ProbSpace<S>,
    /// Deterministic collapse `X → X/P`.
    pub pi: Kernel<S>,
    /// Bayesian inverse of `pi`; row `b` is `p(·|b)`.
    pub pi_dag: Kernel<S>,
}

pub fn coarsening_kernel<S: Scalar>(space: &ProbSpace<S>, p: &Partition) -> Result<Coarsening<S>> {
    if p.parent_size() != space.size() {
        return Err(Error::SizeMismatch {
            expected: space.size(),
            found: p.parent_size(),
        });
    }
    let weights: Vec<S> = p
        .blocks()
        .iter()
        .map(|b| space.measure(b.iter().copied()))
        .collect();
    let quotient = ProbSpace::with_tolerance(weights, space.tolerance())?;
    let pi = Kernel::deterministic(p.labels(), space, &quotient)?;
    let pi_dag = pi.bayes_inverse()?;
    Ok(Coarsening {
        quotient,
        pi,
        pi_dag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(a: i64, b: i64) -> Rational {
        Rational::from_ratio(a, b)
    }

    fn rows(v: &[&[(i64, i64)]]) -> Vec<Vec<Rational>> {
        v.iter()
            .map(|row| row.iter().map(|&(a, b)| r(a, b)).collect())
            .collect()
    }

    fn half_space() -> ProbSpace<Rational> {
        ProbSpace::uniform(2)
    }

    /// k = [[1,0],[1/2,1/2]] on p = (1/2,1/2), q = (3/4,1/4).
    fn running_example() -> Kernel<Rational> {
        let q = ProbSpace::new(vec![r(3, 4), r(1, 4)]).unwrap();
        Kernel::measure_preserving(rows(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]), &half_space(), &q)
            .unwrap()
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        let p = half_space();
        assert!(matches!(
            Kernel::new(rows(&[&[(1, 2), (1, 4)], &[(1, 1), (0, 1)]]), &p, &p),
            Err(Error::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            Kernel::new(rows(&[&[(3, 2), (-1, 2)], &[(1, 1), (0, 1)]]), &p, &p),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn unit_laws() {
        let k = running_example();
        let id_x = Kernel::identity(k.domain());
        let id_y = Kernel::identity(k.codomain());
        assert!(k.then(&id_y).unwrap().as_equal(&k).unwrap());
        assert!(id_x.then(&k).unwrap().as_equal(&k).unwrap());
        assert!(matches!(k.then(&k), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn measure_preservation() {
        let k = running_example();
        assert!(k.is_measure_preserving());
        let wrong = Kernel::new(k.to_rows(), &half_space(), &half_space()).unwrap();
        assert!(!wrong.is_measure_preserving());
        assert!(Kernel::identity(&half_space()).is_measure_preserving());
    }

    #[test]
    fn bayes_inverse_of_running_example() {
        let k = running_example();
        let kp = k.bayes_inverse().unwrap();
        assert_eq!(kp.to_rows(), rows(&[&[(2, 3), (1, 3)], &[(0, 1), (1, 1)]]));
        assert!(kp.bayes_inverse().unwrap().as_equal(&k).unwrap());
        let id = Kernel::identity(&half_space());
        assert_eq!(id.bayes_inverse().unwrap().to_rows(), id.to_rows());
    }

    #[test]
    fn canonicalize_replaces_null_rows() {
        let p = ProbSpace::new(vec![r(1, 2), r(0, 1), r(1, 2)]).unwrap();
        let k = Kernel::with_pushforward(
            rows(&[&[(1, 1), (0, 1)], &[(1, 3), (2, 3)], &[(1, 2), (1, 2)]]),
            &p,
        )
        .unwrap();
        let c = k.canonicalize().unwrap();
        assert_eq!(c.row(1), k.codomain().weights());
        assert_eq!(c.row(0), k.row(0));
        assert!(k.as_equal(&c).unwrap());
        assert_eq!(c.canonicalize().unwrap().to_rows(), c.to_rows());
        let full = running_example();
        assert_eq!(full.canonicalize().unwrap().to_rows(), full.to_rows());
    }

    #[test]
    fn null_rows_are_invisible() {
        let p = ProbSpace::new(vec![r(1, 2), r(0, 1), r(1, 2)]).unwrap();
        let a = Kernel::new(rows(&[&[(1, 1), (0, 1)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]), &p, &half_space()).unwrap();
        let b = Kernel::new(rows(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(0, 1), (1, 1)]]), &p, &half_space()).unwrap();
        let c = Kernel::new(rows(&[&[(1, 2), (1, 2)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)]]), &p, &half_space()).unwrap();
        assert!(a.as_equal(&b).unwrap());
        assert!(!a.as_equal(&c).unwrap());
    }

    #[test]
    fn deterministic_kernels() {
        let u4 = ProbSpace::<Rational>::uniform(4);
        let id = Kernel::deterministic(&[0, 1, 2, 3], &u4, &u4).unwrap();
        assert_eq!(id.to_rows(), Kernel::identity(&u4).to_rows());
        let collapse = Kernel::deterministic(&[0, 0, 1, 1], &u4, &half_space()).unwrap();
        assert_eq!(
            collapse.to_rows(),
            rows(&[&[(1, 1), (0, 1)], &[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(0, 1), (1, 1)]])
        );
        assert!(matches!(
            Kernel::deterministic(&[0, 0, 0, 1], &u4, &half_space()),
            Err(Error::NotMeasurePreserving { .. })
        ));
    }

    #[test]
    fn coarsening_by_blocks() {
        let u4 = ProbSpace::<Rational>::uniform(4);
        let p = Partition::from_blocks(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let c = coarsening_kernel(&u4, &p).unwrap();
        assert_eq!(c.quotient.weights(), &[r(1, 2), r(1, 2)]);
        assert_eq!(
            c.pi_dag.to_rows(),
            rows(&[&[(1, 2), (1, 2), (0, 1), (0, 1)], &[(0, 1), (0, 1), (1, 2), (1, 2)]])
        );

        let d = coarsening_kernel(&u4, &Partition::discrete(4)).unwrap();
        assert_eq!(d.pi.to_rows(), Kernel::identity(&u4).to_rows());

        let t = coarsening_kernel(&u4, &Partition::trivial(4)).unwrap();
        assert_eq!(t.quotient.size(), 1);
        assert_eq!(t.pi_dag.row(0), u4.weights());
    }

    #[test]
    fn determinism_checks() {
        let k = running_example();
        assert!(!k.is_as_deterministic().unwrap());
        assert!(!k.has_deterministic_rows());
        let u4 = ProbSpace::<Rational>::uniform(4);
        let collapse = Kernel::deterministic(&[0, 0, 1, 1], &u4, &half_space()).unwrap();
        assert!(collapse.is_as_deterministic().unwrap());
        assert!(Kernel::identity(&u4).is_as_deterministic().unwrap());
    }

    #[test]
    fn coupling_of_running_example() {
        let k = running_example();
        let c = k.to_coupling().unwrap();
        assert_eq!(c.to_rows(), rows(&[&[(1, 2), (0, 1)], &[(1, 4), (1, 4)]]));
        let back = c.to_kernel(k.tolerance()).unwrap();
        assert!(back.as_equal(&k).unwrap());
        let id = Kernel::identity(&half_space()).to_coupling().unwrap();
        assert_eq!(id.to_rows(), rows(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 2)]]));
    }

    #[test]
    fn pullback_along_measure_is_expectation() {
        let u4 = ProbSpace::<Rational>::uniform(4);
        let g = RandomVar::new(&u4, vec![r(1, 1), r(2, 1), r(3, 1), r(4, 1)]).unwrap();
        let e = Kernel::from_measure(&u4).pullback(&g).unwrap();
        assert_eq!(e.values(), &[r(5, 2)]);
    }
}
