//! Sup-norm truncations keep norm one while their ranges shrink to zero.
use finkrn::hilbert::banach_counterexample;

fn main() -> finkrn::Result<()> {
    let rep = banach_counterexample(8)?;
    println!("i  sup  euclidean");
    for i in 0..rep.dimension {
        println!("{i}  {}  {:.4}", rep.sup_norms[i], rep.euclidean_norms[i]);
    }
    println!("colimit seminorm of the all-ones vector: {}", rep.colimit_value);
    Ok(())
}
