//! Monotone chains of conditional-expectation kernels reach their limit.
use finkrn::martingale::levi_property_check;
use finkrn::sample::{idempotent_chain, random_refining_chain, random_space, rng};
use finkrn::{sup_idempotents, Rational};

fn main() -> finkrn::Result<()> {
    let mut r = rng(4, 0);
    let space = random_space::<Rational, _>(&mut r, 12, 0.2);
    let parts = random_refining_chain(&mut r, 12, 6);
    let chain = idempotent_chain(&space, &parts)?;
    let sup = sup_idempotents(&chain)?;
    println!("supremum fixes {}", sup.invariant_partition());
    let rep = levi_property_check(&chain)?;
    print!("{}", rep.to_csv());
    Ok(())
}
