//! Closed-form rescaled free measure around E, printed as CSV.
//!
//! `cargo run --release --example free_measure -- [d] [L] [E] [K]`

use std::env;

use anderson_levels::measure::free_measure;

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> anderson_levels::Result<()> {
    let (d, l, e, k) = (arg(1, 1usize), arg(2, 1000usize), arg(3, 0.0f64), arg(4, 10.0f64));
    let m = free_measure(d, l, e, k)?;
    print!("{}", m.to_csv());
    eprintln!(
        "d={d} L={l} E={e}: {} atoms, mass {:.6} on [-{k}, {k}]",
        m.atoms().len(),
        m.total_mass()
    );
    Ok(())
}
