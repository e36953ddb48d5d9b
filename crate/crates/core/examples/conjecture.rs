//! The conjectured limit of the free local measures in d = 4 at E = 0,
//! against the finite-cube values at growing L.

use std::time::Instant;

use anderson_levels::dos::{conjecture_comparison, ConjectureSpec};
use anderson_levels::measure::TestFunction;

fn main() -> anderson_levels::Result<()> {
    env_logger::init();
    let spec = ConjectureSpec::new(4, 0.0);
    let f = TestFunction::bump(0.0, 1.0)?;
    let start = Instant::now();
    let table = conjecture_comparison(&spec, &f, &[24, 48, 96])?;
    print!("{}", table.to_csv());
    eprintln!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
