//! Parse a TOML experiment config and run it without writing a file.
use finkrn::experiment::{execute, ExperimentConfig};

const CONFIG: &str = r#"
experiment = "levy-down"
seed = 42
mode = "rational"

[params]
n = 24
length = 6
exponent = "inf"
"#;

fn main() {
    let cfg = match ExperimentConfig::parse(CONFIG, None) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("{}", cfg.summary());
    match execute(&cfg) {
        Ok(out) => print!("{}", out.csv),
        Err(e) => eprintln!("{e}"),
    }
}
