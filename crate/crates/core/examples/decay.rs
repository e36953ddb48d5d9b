//! Decaying randomness in d = 3: median |X_L| over seeds as the cube grows.
//!
//! Dense eigensolves up to N = 2197; expect a few minutes in release mode.
//! `cargo run --release --example decay -- [master_seed]`

use anderson_levels::asymptotics::{decay_experiment, SeedRange, Setup};
use anderson_levels::measure::{MeasureMethod, TestFunction};
use anderson_levels::model::{DisorderLaw, PotentialProfile};

fn main() -> anderson_levels::Result<()> {
    env_logger::init();
    let master = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let setup = Setup {
        dim: 3,
        energy: 5.0,
        law: DisorderLaw::UniformSym { half_width: 1.0 },
        f: TestFunction::bump(0.0, 4.0)?,
        seeds: SeedRange { master, count: 20 },
        method: MeasureMethod::Dense,
        timing: false,
    };
    let profile = PotentialProfile::Decaying {
        amplitude: 1.0,
        epsilon: 0.5,
    };
    let record = decay_experiment(&setup, &[3, 4, 5, 6], &profile)?;
    eprintln!("{} failed rows", record.failures());
    for (l, m) in record.medians() {
        eprintln!("L = {l}: median |X| = {m:.10e}");
    }
    print!("{}", record.to_csv());
    Ok(())
}
