//! Kernel distances and pointwise convergence of pullback operators.
use finkrn::sample::{random_kernel, random_space, rng};
use finkrn::topology::{
    homeomorphism_report, independent_kernel, interpolating_sequence, one_sided_distance,
    operator_distance, two_sided_distance, HOMEOMORPHISM_TOLERANCE,
};
use finkrn::{Exponent, Scalar};

fn main() -> finkrn::Result<()> {
    let mut r = rng(11, 0);
    let space = random_space::<f64, _>(&mut r, 5, 0.0);
    let k = random_kernel(&mut r, &space, 4);
    let h = independent_kernel(&k);
    println!("one-sided {:.6}", one_sided_distance(&k, &h)?.to_f64());
    println!("two-sided {:.6}", two_sided_distance(&k, &h)?.to_f64());
    for n in Exponent::STANDARD {
        println!("operator L{n} {:.6}", operator_distance(&k, &h, n)?);
    }

    let seq = interpolating_sequence(&k, &h, 300)?;
    let rep = homeomorphism_report(&seq, &k, Exponent::TWO, HOMEOMORPHISM_TOLERANCE)?;
    println!(
        "kernel converged {} operator converged {} agree {}",
        rep.kernel.converged,
        rep.operator.converged,
        rep.agree()
    );
    Ok(())
}
