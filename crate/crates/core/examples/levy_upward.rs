//! Upward martingale convergence on a dyadic filtration, exactly.
use finkrn::martingale::{levy_csv, levy_report, martingale_from_terminal, Filtration};
use finkrn::sample::{random_rv, rng};
use finkrn::{Exponent, Rational};

fn main() -> finkrn::Result<()> {
    let filt = Filtration::<Rational>::dyadic(6);
    let f = random_rv(&mut rng(3, 0), filt.space());
    let m = martingale_from_terminal(&f, &filt)?;
    let rep = levy_report(&m, Exponent::TWO)?;
    print!("{}", levy_csv(&rep, Exponent::TWO));
    println!("converged: {}", rep.converged);
    Ok(())
}
