//! Constant coupling η on cubes of half-width ε(η) = ⌊η^{-1/3}⌋ in d = 2.

use anderson_levels::asymptotics::{weak_coupling_experiment, ScaleFunction, SeedRange, Setup};
use anderson_levels::measure::{MeasureMethod, TestFunction};
use anderson_levels::model::DisorderLaw;

fn main() -> anderson_levels::Result<()> {
    env_logger::init();
    let setup = Setup {
        dim: 2,
        energy: 0.5,
        law: DisorderLaw::UniformSym { half_width: 1.0 },
        f: TestFunction::bump(0.0, 2.0)?,
        seeds: SeedRange { master: 1, count: 20 },
        method: MeasureMethod::Dense,
        timing: false,
    };
    let scale = ScaleFunction::new(1.0 / 3.0)?;
    let record = weak_coupling_experiment(&setup, &[0.1, 0.03, 0.01], &scale)?;
    for (eta, m) in record.medians() {
        eprintln!("eta = {eta}: L = {}, median |X| = {m:.10e}", scale.eval(eta));
    }
    print!("{}", record.to_csv());
    Ok(())
}
