//! Density of states of the free lattice Laplacian and the conjectured limit
//! of the rescaled free measures.
//!
//! n_r is the law of 2cos θ_1 + … + 2cos θ_r for independent uniform angles.
//! Densities are built by convolving in the angle variable, which removes the
//! square-root edges of the 1-d law; the characteristic function enters only
//! the decay diagnostic.

mod conjecture;
mod decay;
mod density;

pub use conjecture::{
    conjecture_comparison, conjecture_integral, zero_term_reference, ComparisonRow, ConjectureComparison,
    ConjectureSpec, ConjectureValue,
};
pub use decay::{characteristic_1d, fourier_decay_check, log_grid, DecayRow, DecayTable};
pub use density::{dos_1d, dos_grid, ids, van_hove_points, Density, DensityGrid, DEFAULT_TABLE_NODES};
