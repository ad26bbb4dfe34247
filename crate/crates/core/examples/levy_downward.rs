//! Backward martingale along a random coarsening chain.
use finkrn::martingale::{levy_report, martingale_from_terminal, Filtration};
use finkrn::sample::{random_coarsening_chain, random_rv, random_space, rng};
use finkrn::{Exponent, Rational};

fn main() -> finkrn::Result<()> {
    let mut r = rng(8, 0);
    let space = random_space::<Rational, _>(&mut r, 20, 0.1);
    let chain = random_coarsening_chain(&mut r, 20, 8);
    for p in &chain {
        println!("{} blocks", p.num_blocks());
    }
    let filt = Filtration::decreasing(&space, chain)?;
    let f = random_rv(&mut r, &space);
    let rep = levy_report(&martingale_from_terminal(&f, &filt)?, Exponent::ONE)?;
    println!("L1 distances {:?}", rep.step_distances);
    println!("stabilizes at {:?}", rep.stabilization_index);
    Ok(())
}
