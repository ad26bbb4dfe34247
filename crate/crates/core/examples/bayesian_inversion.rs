//! Bayesian inversion of a noisy channel, in exact arithmetic.
use finkrn::{Kernel, ProbSpace, Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn main() -> finkrn::Result<()> {
    // prior on {healthy, sick}
    let prior = ProbSpace::new(vec![q(9, 10), q(1, 10)])?;
    // test outcome {negative, positive}
    let test = Kernel::with_pushforward(vec![vec![q(19, 20), q(1, 20)], vec![q(1, 10), q(9, 10)]], &prior)?;
    println!("P(test) = {:?}", test.codomain().weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());

    let posterior = test.bayes_inverse()?;
    for (y, label) in ["negative", "positive"].iter().enumerate() {
        println!("P(sick | {label}) = {}", posterior.entry(y, 1));
    }

    // inversion is an involution and reverses composition
    assert!(posterior.bayes_inverse()?.as_equal(&test)?);
    let twice = test.then(&Kernel::identity(test.codomain()))?;
    assert!(twice.bayes_inverse()?.as_equal(&posterior)?);
    println!("involution and contravariance hold");
    Ok(())
}
