//! Finite-dimensional inner-product spaces: subspaces, orthogonal
//! projectors, chain limits and the normed-space contrast.
//!
//! Subspaces carry an orthonormal basis produced by Gram–Schmidt with column
//! pivoting and a second orthogonalization pass. Rank decisions compare
//! residual norms against [`RANK_TOL`].

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::prob::VNorm;
use crate::topology::ConvergenceReport;

/// Residual norm below which a vector counts as dependent.
pub const RANK_TOL: f64 = 1e-8;

/// Tolerance for projector identities and convergence verdicts.
pub const HILBERT_TOL: f64 = 1e-9;

/// Number of seeded random probes used by [`default_probes`].
pub const DEFAULT_RANDOM_PROBES: usize = 64;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

/// A linear subspace of `R^d` with an orthonormal basis (the columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Validates that the columns are orthonormal.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let gram = basis.transpose() * &basis;
        let defect = max_abs(&(gram - DMatrix::identity(basis.ncols(), basis.ncols())));
        if defect > RANK_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Subspace { basis })
    }

    /// Orthonormal basis of the span of `vectors`.
    pub fn span(ambient_dim: usize, vectors: &[DVector<f64>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimMismatch {
                expected: ambient_dim,
                found: v.len(),
            });
        }
        let scale = vectors.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let mut rest: Vec<DVector<f64>> = vectors.to_vec();
        let mut cols: Vec<DVector<f64>> = Vec::new();
        loop {
            // Pivot: the remaining vector with the largest residual.
            let best = rest
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            let Some((i, norm)) = best else { break };
            if norm <= RANK_TOL * scale {
                break;
            }
            let mut v = rest.swap_remove(i);
            for _ in 0..2 {
                for c in &cols {
                    let dot = c.dot(&v);
                    v -= c * dot;
                }
            }
            let n = v.norm();
            if n <= RANK_TOL * scale {
                continue;
            }
            let u = v / n;
            for r in rest.iter_mut() {
                let dot = u.dot(r);
                *r -= &u * dot;
            }
            cols.push(u);
        }
        Ok(Subspace {
            basis: DMatrix::from_fn(ambient_dim, cols.len(), |r, c| cols[c][r]),
        })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut basis = DMatrix::zeros(ambient_dim, axes.len());
        for (c, &a) in axes.iter().enumerate() {
            basis[(a, c)] = 1.0;
        }
        Subspace { basis }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        let r = x - &self.basis * (self.basis.transpose() * x);
        r.norm() <= RANK_TOL * x.norm().max(1.0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.basis.column_iter().all(|c| other.contains(&c.into_owned()))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let d = self.ambient_dim();
        let p = self.projector_matrix();
        let comp = DMatrix::identity(d, d) - p;
        let cols: Vec<DVector<f64>> = comp.column_iter().map(|c| c.into_owned()).collect();
        Subspace::span(d, &cols).expect("columns have the ambient dimension")
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        let d = self.ambient_dim();
        if other.ambient_dim() != d {
            return Err(Error::DimMismatch {
                expected: d,
                found: other.ambient_dim(),
            });
        }
        let a = self.orthogonal_complement();
        let b = other.orthogonal_complement();
        let cols: Vec<DVector<f64>> = a
            .basis
            .column_iter()
            .chain(b.basis.column_iter())
            .map(|c| c.into_owned())
            .collect();
        Ok(Subspace::span(d, &cols)?.orthogonal_complement())
    }

    fn projector_matrix(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }
}

/// A self-adjoint idempotent matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: DMatrix<f64>,
}

impl Projector {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let idem = max_abs(&(&matrix * &matrix - &matrix));
        let sym = max_abs(&(&matrix - matrix.transpose()));
        if idem > HILBERT_TOL.max(RANK_TOL) || sym > HILBERT_TOL {
            return Err(Error::NotProjector);
        }
        Ok(Projector { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Projector {
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x
    }

    pub fn image(&self) -> Subspace {
        let cols: Vec<DVector<f64>> = self.matrix.column_iter().map(|c| c.into_owned()).collect();
        Subspace::span(self.dim(), &cols).expect("square matrix")
    }

    /// `(A, ι, π)` with `ι` the basis inclusion and `π = ιᵀ`.
    pub fn split(&self) -> ProjectorSplitting {
        let iota = self.image().basis;
        ProjectorSplitting {
            pi: iota.transpose(),
            iota,
        }
    }
}

/// Dagger splitting of a projector: `π ι = id_A`, `ι π = P`, `π = ιᵀ`.
#[derive(Clone, Debug)]
pub struct ProjectorSplitting {
    pub iota: DMatrix<f64>,
    pub pi: DMatrix<f64>,
}

pub fn orthogonal_projector(s: &Subspace) -> Result<Projector> {
    let s = Subspace::new(s.basis.clone())?;
    Ok(Projector {
        matrix: s.projector_matrix(),
    })
}

/// `P1 P2 = P2 P1 = P1`.
pub fn projector_leq(p1: &Projector, p2: &Projector) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    let a = max_abs(&(&p1.matrix * &p2.matrix - &p1.matrix));
    let b = max_abs(&(&p2.matrix * &p1.matrix - &p1.matrix));
    Ok(a <= RANK_TOL && b <= RANK_TOL)
}

/// Comparison maps between the splittings of `P1 ≤ P2`.
#[derive(Clone, Debug)]
pub struct ProjectorWitnesses {
    /// `A1 → A2`.
    pub f: DMatrix<f64>,
    /// `A2 → A1`.
    pub g: DMatrix<f64>,
    /// `ι2 f = ι1` and `g π2 = π1`.
    pub factorization: bool,
    /// `g f = id`.
    pub retract: bool,
    /// `f = gᵀ`.
    pub f_is_dagger_of_g: bool,
}

pub fn projector_witnesses(p1: &Projector, p2: &Projector) -> Result<ProjectorWitnesses> {
    if !projector_leq(p1, p2)? {
        return Err(Error::NotComparable);
    }
    let s1 = p1.split();
    let s2 = p2.split();
    let f = &s2.pi * &s1.iota;
    let g = &s1.pi * &s2.iota;
    let factorization = max_abs(&(&s2.iota * &f - &s1.iota)) <= RANK_TOL
        && max_abs(&(&g * &s2.pi - &s1.pi)) <= RANK_TOL;
    let r = f.ncols();
    let retract = max_abs(&(&g * &f - DMatrix::identity(r, r))) <= RANK_TOL;
    let f_is_dagger_of_g = max_abs(&(&f - g.transpose())) <= RANK_TOL;
    Ok(ProjectorWitnesses {
        f,
        g,
        factorization,
        retract,
        f_is_dagger_of_g,
    })
}

/// `|‖x − Px‖ − dist(x, S)|`, the distance taken from the orthogonal
/// decomposition `‖x‖² = ‖Uᵀx‖² + dist²`.
pub fn closest_point_defect(s: &Subspace, x: &DVector<f64>) -> Result<f64> {
    if x.len() != s.ambient_dim() {
        return Err(Error::DimMismatch {
            expected: s.ambient_dim(),
            found: x.len(),
        });
    }
    let coords = s.basis.transpose() * x;
    let px = &s.basis * &coords;
    let residual = (x - px).norm();
    let analytic = (x.norm_squared() - coords.norm_squared()).max(0.0).sqrt();
    Ok((residual - analytic).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Order {
    Up,
    Down,
}

fn check_chain(chain: &[Subspace], order: Order) -> Result<()> {
    let first = chain.first().ok_or(Error::Empty("subspace chain"))?;
    for (i, w) in chain.windows(2).enumerate() {
        if w[1].ambient_dim() != first.ambient_dim() {
            return Err(Error::DimMismatch {
                expected: first.ambient_dim(),
                found: w[1].ambient_dim(),
            });
        }
        let ok = match order {
            Order::Up => w[0].is_subspace_of(&w[1]),
            Order::Down => w[1].is_subspace_of(&w[0]),
        };
        if !ok {
            return Err(Error::NotAChain(format!(
                "subspaces {i} and {} are not nested",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Span of the union of an increasing chain.
pub fn chain_sup(chain: &[Subspace]) -> Result<Subspace> {
    check_chain(chain, Order::Up)?;
    let cols: Vec<DVector<f64>> = chain
        .iter()
        .flat_map(|s| s.basis.column_iter().map(|c| c.into_owned()))
        .collect();
    Subspace::span(chain[0].ambient_dim(), &cols)
}

/// Intersection of a decreasing chain.
pub fn chain_inf(chain: &[Subspace]) -> Result<Subspace> {
    check_chain(chain, Order::Down)?;
    chain[1..]
        .iter()
        .try_fold(chain[0].clone(), |acc, s| acc.intersection(s))
}

/// The standard basis followed by `random` seeded vectors with entries in
/// `[-1, 1)`.
pub fn default_probes(d: usize, random: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<DVector<f64>> = (0..d)
        .map(|i| {
            let mut v = DVector::zeros(d);
            v[i] = 1.0;
            v
        })
        .collect();
    for _ in 0..random {
        probes.push(DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)));
    }
    probes
}

/// Residuals `‖P_λ x − P x‖` for each chain element and probe.
#[derive(Clone, Debug)]
pub struct LeviDemoReport {
    pub per_probe: Vec<ConvergenceReport>,
    /// Worst probe at each step.
    pub worst: ConvergenceReport,
}

impl LeviDemoReport {
    pub fn converged(&self) -> bool {
        self.worst.converged && self.per_probe.iter().all(|r| r.converged)
    }

    /// CSV with columns `step,probe_id,residual_norm,norm_kind`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,probe_id,residual_norm,norm_kind\n");
        for (p, rep) in self.per_probe.iter().enumerate() {
            for (i, d) in rep.step_distances.iter().enumerate() {
                writeln!(out, "{i},{p},{d:?},{}", rep.metric).unwrap();
            }
        }
        out
    }
}

fn levi_demo(chain: &[Subspace], limit: &Subspace, probes: &[DVector<f64>]) -> Result<LeviDemoReport> {
    let d = limit.ambient_dim();
    if let Some(p) = probes.iter().find(|p| p.len() != d) {
        return Err(Error::DimMismatch {
            expected: d,
            found: p.len(),
        });
    }
    let lim = limit.projector_matrix();
    let mats: Vec<DMatrix<f64>> = chain.iter().map(Subspace::projector_matrix).collect();
    let per_probe: Vec<ConvergenceReport> = probes
        .iter()
        .map(|x| {
            let target = &lim * x;
            let dists = mats.iter().map(|m| (m * x - &target).norm()).collect();
            ConvergenceReport::from_distances(dists, HILBERT_TOL, "euclidean")
        })
        .collect();
    let worst_d = (0..chain.len())
        .map(|i| {
            per_probe
                .iter()
                .map(|r| r.step_distances[i])
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(LeviDemoReport {
        per_probe,
        worst: ConvergenceReport::from_distances(worst_d, HILBERT_TOL, "euclidean"),
    })
}

pub fn levi_up_demo(chain: &[Subspace], probes: &[DVector<f64>]) -> Result<LeviDemoReport> {
    let sup = chain_sup(chain)?;
    levi_demo(chain, &sup, probes)
}

pub fn levi_down_demo(chain: &[Subspace], probes: &[DVector<f64>]) -> Result<LeviDemoReport> {
    let inf = chain_inf(chain)?;
    levi_demo(chain, &inf, probes)
}

/// Norms of `e_i(probe)` for the coordinate-truncation projectors `e_i`
/// (zeroing the first `i` coordinates), `i = 0..=N`. Step `N` is the
/// projector onto the intersection `{0}`.
#[derive(Clone, Debug)]
pub struct BanachReport {
    pub dimension: usize,
    /// `‖e_i(1)‖_∞`.
    pub sup_norms: Vec<f64>,
    /// `‖e_i(u)‖_2` for the unit vector `u = 1/√N` on the same chain.
    pub euclidean_norms: Vec<f64>,
    /// `‖e_i(δ_0)‖_∞` for the head probe `(1, 0, …, 0)`.
    pub head_probe_norms: Vec<f64>,
    /// Colimit seminorm of the all-ones vector along the sup-norm truncation
    /// chain.
    pub colimit_value: f64,
}

impl BanachReport {
    /// `‖e_i(1)‖_∞ = 1` for every `i < N` although the intersection is `{0}`.
    pub fn sup_plateau(&self) -> bool {
        let n = self.dimension;
        self.sup_norms[..n].iter().all(|&v| v == 1.0) && self.sup_norms[n] == 0.0
    }

    /// The Euclidean norms decrease strictly to zero.
    pub fn euclidean_decreasing(&self) -> bool {
        self.euclidean_norms.windows(2).all(|w| w[1] < w[0])
            && *self.euclidean_norms.last().unwrap() == 0.0
    }

    /// CSV with columns `step,probe_id,residual_norm,norm_kind`; probe 0 is
    /// the all-ones vector (sup and euclidean rows), probe 1 the head probe.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,probe_id,residual_norm,norm_kind\n");
        for (i, v) in self.sup_norms.iter().enumerate() {
            writeln!(out, "{i},0,{v:?},sup").unwrap();
        }
        for (i, v) in self.euclidean_norms.iter().enumerate() {
            writeln!(out, "{i},0,{v:?},euclidean").unwrap();
        }
        for (i, v) in self.head_probe_norms.iter().enumerate() {
            writeln!(out, "{i},1,{v:?},sup").unwrap();
        }
        out
    }
}

/// `e_i` as a diagonal matrix on `R^n`.
pub fn truncation_projector(n: usize, i: usize) -> Projector {
    Projector {
        matrix: DMatrix::from_fn(n, n, |r, c| if r == c && r >= i { 1.0 } else { 0.0 }),
    }
}

/// Maps `R^{n-j} → R^{n-j-1}` dropping the first coordinate, `j = 0..n-1`.
pub fn truncation_chain(n: usize) -> Vec<DMatrix<f64>> {
    (0..n.saturating_sub(1))
        .map(|j| {
            let d = n - j;
            DMatrix::from_fn(d - 1, d, |r, c| if c == r + 1 { 1.0 } else { 0.0 })
        })
        .collect()
}

pub fn banach_counterexample(n: usize) -> Result<BanachReport> {
    if n < 2 {
        return Err(Error::TooSmall { size: n, min: 2 });
    }
    let ones = DVector::from_element(n, 1.0);
    let unit = &ones / (n as f64).sqrt();
    let mut head = DVector::zeros(n);
    head[0] = 1.0;
    let sup = VNorm::Max;
    let mut sup_norms = Vec::with_capacity(n + 1);
    let mut euclidean_norms = Vec::with_capacity(n + 1);
    let mut head_probe_norms = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let e = truncation_projector(n, i);
        sup_norms.push(sup.apply_f64(e.apply(&ones).as_slice()));
        euclidean_norms.push(e.apply(&unit).norm());
        head_probe_norms.push(sup.apply_f64(e.apply(&head).as_slice()));
    }
    let colimit_value = colimit_seminorm(&truncation_chain(n), &ones, 0, VNorm::Max)?;
    Ok(BanachReport {
        dimension: n,
        sup_norms,
        euclidean_norms,
        head_probe_norms,
        colimit_value,
    })
}

fn operator_norm(m: &DMatrix<f64>, norm: VNorm) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    match norm {
        VNorm::Max => m
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        VNorm::One => m
            .column_iter()
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        VNorm::Euclidean => m.singular_values().max(),
    }
}

fn rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    m.singular_values().iter().filter(|s| **s > RANK_TOL).count()
}

/// The values `‖π_{start,μ}(a)‖` for `μ = start, start+1, …` along a chain of
/// maps `A_j → A_{j+1}`, after checking every map is 1-Lipschitz and
/// surjective.
pub fn colimit_sequence(
    maps: &[DMatrix<f64>],
    a: &DVector<f64>,
    start: usize,
    norm: VNorm,
) -> Result<Vec<f64>> {
    for (j, m) in maps.iter().enumerate() {
        let on = operator_norm(m, norm);
        if on > 1.0 + 1e-12 {
            return Err(Error::NotLipschitz { index: j, norm: on });
        }
        if rank(m) != m.nrows() {
            return Err(Error::NotSurjective { index: j });
        }
        if j > 0 && maps[j - 1].nrows() != m.ncols() {
            return Err(Error::DimMismatch {
                expected: maps[j - 1].nrows(),
                found: m.ncols(),
            });
        }
    }
    if start > maps.len() {
        return Err(Error::SizeMismatch {
            expected: maps.len(),
            found: start,
        });
    }
    let dim_start = maps.get(start).map_or_else(
        || maps.last().map_or(a.len(), |m| m.nrows()),
        |m| m.ncols(),
    );
    if a.len() != dim_start {
        return Err(Error::DimMismatch {
            expected: dim_start,
            found: a.len(),
        });
    }
    let mut v = a.clone();
    let mut out = vec![norm.apply_f64(v.as_slice())];
    for m in &maps[start..] {
        v = m * v;
        out.push(norm.apply_f64(v.as_slice()));
    }
    Ok(out)
}

/// Final value of [`colimit_sequence`]: the seminorm of `a` in the colimit.
pub fn colimit_seminorm(maps: &[DMatrix<f64>], a: &DVector<f64>, start: usize, norm: VNorm) -> Result<f64> {
    Ok(*colimit_sequence(maps, a, start, norm)?.last().expect("nonempty"))
}

/// Maps `A_j → A_{j+1}` in orthonormal coordinates for a decreasing chain:
/// `U_{j+1}ᵀ U_j`.
pub fn projection_chain_maps(chain: &[Subspace]) -> Result<Vec<DMatrix<f64>>> {
    check_chain(chain, Order::Down)?;
    Ok(chain
        .windows(2)
        .map(|w| w[1].basis.transpose() * &w[0].basis)
        .collect())
}
