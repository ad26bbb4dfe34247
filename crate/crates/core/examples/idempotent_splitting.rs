//! Split an idempotent through the quotient by its invariant partition.
use finkrn::{cond_exp_kernel, split, Partition, ProbSpace, Rational, Scalar};

fn main() -> finkrn::Result<()> {
    let w = [3, 1, 0, 2, 2, 2].map(|x| Rational::from_ratio(x, 10)).to_vec();
    let space = ProbSpace::new(w)?;
    let e = cond_exp_kernel(&space, &Partition::from_labels(&[0, 0, 1, 1, 2, 2]))?;
    println!("invariant partition: {}", e.invariant_partition());

    let s = split(&e)?;
    println!("quotient weights: {:?}", s.quotient.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());
    let (retraction_defect, section_defect) = s.defects(&e)?;
    println!("defects: pi.pi_dag vs id {retraction_defect}, pi_dag.pi vs e {section_defect}");
    Ok(())
}
