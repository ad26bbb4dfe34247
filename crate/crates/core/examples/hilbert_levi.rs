//! Projectors onto an increasing chain of subspaces converge pointwise.
use finkrn::hilbert::{chain_sup, default_probes, levi_up_demo, orthogonal_projector, Subspace};
use nalgebra::DVector;

fn main() -> finkrn::Result<()> {
    let d = 6;
    let vs: Vec<DVector<f64>> = (0..d)
        .map(|i| DVector::from_fn(d, |j, _| if j <= i { 1.0 } else { 0.0 }))
        .collect();
    let chain = (1..=d).map(|j| Subspace::span(d, &vs[..j])).collect::<finkrn::Result<Vec<_>>>()?;
    let top = orthogonal_projector(&chain_sup(&chain)?)?;
    println!("limit projector has rank {}", top.image().dim());
    let rep = levi_up_demo(&chain, &default_probes(d, 4, 1))?;
    println!("worst residuals {:?}", rep.worst.step_distances);
    println!("converged: {}", rep.converged());
    Ok(())
}
