//! Vector-valued martingale convergence, with per-coordinate reports.
use finkrn::martingale::{bochner_levy_report, Filtration};
use finkrn::sample::{random_vec_rv, rng};
use finkrn::{Exponent, Rational, VNorm};

fn main() -> finkrn::Result<()> {
    let filt = Filtration::<Rational>::dyadic(5);
    let g = random_vec_rv(&mut rng(2, 0), filt.space(), 3);
    let rep = bochner_levy_report(&g, &filt, Exponent::ONE, VNorm::Max)?;
    println!("vector distances {:?}", rep.report.step_distances);
    for (i, c) in rep.coordinates.iter().enumerate() {
        println!("coordinate {i} converged {}", c.converged);
    }
    println!("converged: {}", rep.report.converged);
    Ok(())
}
