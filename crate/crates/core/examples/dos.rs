//! Lattice densities of states n_1..n_4 on a grid, a few integrated values,
//! and the decay of the characteristic function.

use anderson_levels::dos::{dos_grid, fourier_decay_check, ids, log_grid};

fn main() -> anderson_levels::Result<()> {
    env_logger::init();
    for r in 1..=4 {
        let g = dos_grid(r, 400)?;
        let peak = g.values.iter().cloned().fold(0.0, f64::max);
        println!(
            "r={r}: normalization {:.10}, grid sum {:.6}, max on grid {peak:.4}, asymmetry {:.1e}",
            g.normalization, g.grid_integral, g.symmetry_error
        );
    }
    for (r, a, b) in [(1, -1.0, 1.0), (2, 0.0, 4.0), (3, -2.0, 2.0)] {
        println!("N_{r}(({a}, {b})) = {:.10}", ids(r, a, b)?);
    }
    let t = log_grid(10.0, 1000.0, 50);
    for r in 1..=4 {
        let table = fourier_decay_check(r, &t)?;
        println!("r={r}: sup t^(r/2) |n̂_r(t)| on [10, 1000] = {:.4}", table.sup_scaled);
    }
    Ok(())
}
