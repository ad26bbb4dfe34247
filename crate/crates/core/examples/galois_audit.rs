//! Every partition of a small space against its idempotent kernel.
use finkrn::{galois_roundtrips, ProbSpace, Rational, Scalar};

fn main() -> finkrn::Result<()> {
    let w = [2, 0, 3, 1, 4].map(|x| Rational::from_ratio(x, 10)).to_vec();
    let space = ProbSpace::new(w)?;
    let rep = galois_roundtrips(&space)?;
    println!(
        "{} partitions, {} distinct idempotents, {} ordered pairs checked",
        rep.partitions, rep.idempotents, rep.pairs_checked
    );
    println!(
        "failures: adjunction {} fixpoint {} completion {} monotonicity {}",
        rep.adjunction_failures, rep.fixpoint_failures, rep.completion_failures, rep.monotonicity_failures
    );
    assert!(rep.passed());
    Ok(())
}
