//! Conditional expectation as pullback along an idempotent kernel.
use finkrn::functor::{apply_pullback, cond_expectation, inner_product};
use finkrn::{cond_exp_kernel, Partition, ProbSpace, RandomVar, Rational, Scalar};

fn main() -> finkrn::Result<()> {
    let w = [1, 2, 3, 0, 4].map(|x| Rational::from_ratio(x, 10)).to_vec();
    let space = ProbSpace::new(w)?;
    let p = Partition::from_labels(&[0, 0, 1, 1, 2]);
    let f = RandomVar::new(&space, [4, -2, 6, 7, 1].map(|x| Rational::from_ratio(x, 1)).to_vec())?;

    let ef = cond_expectation(&f, &p)?;
    println!("E[f | P] = {:?}", ef.values().iter().map(|v| v.to_string()).collect::<Vec<_>>());

    let e = cond_exp_kernel(&space, &p)?;
    let via_kernel = apply_pullback(e.kernel(), &f)?;
    assert!(via_kernel.as_equal(&ef)?);

    // the residual is orthogonal to everything P-measurable
    let residual = f.sub(&ef)?;
    let g = RandomVar::indicator(&space, [2, 3]);
    println!("<f - E[f|P], 1_B> = {}", inner_product(&residual, &g)?);
    Ok(())
}
