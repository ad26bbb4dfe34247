//! A martingale with constant L1 norm that never becomes Cauchy.
use finkrn::martingale::nonintegrable_example;
use finkrn::Rational;

fn main() -> finkrn::Result<()> {
    let ex = nonintegrable_example::<Rational>(6)?;
    for (i, f) in ex.martingale.rvs().iter().enumerate() {
        let row: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
        println!("f_{i} = [{}]", row.join(" "));
    }
    println!("L1 norms {:?}", ex.l1_norms.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    println!("increments {:?}", ex.increment_norms.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    assert!(ex.diagnostics_hold());
    Ok(())
}
