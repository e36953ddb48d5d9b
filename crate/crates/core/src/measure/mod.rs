//! Rescaled local eigenvalue measures around an energy E, smooth test
//! functions, the comparison statistic X_L and its trace-norm bound.
//!
//! Positions are in rescaled units x = (L+1)(λ − E); every eigenvalue
//! carries weight (2L+1)^{−(d−1)}.

mod atomic;
mod fourier;
mod random;
mod test_fn;

pub use atomic::{free_measure, free_measure_capped, integrate, Atom, AtomicMeasure, MeasureMeta, MeasureSource};
pub use fourier::{fourier_weighted_l1, fourier_weighted_norm, FourierOptions, WeightedFourierNorm};
pub use random::{
    bound_rhs, counting_measure, dense_measure, integrate_counting, random_measure, x_statistic, CountingFunction,
    CountingGrid, CountingIntegral, MeasureMethod, RandomMeasure, XStatistic, DEFAULT_COUNTING_CELLS, DENSE_CAP,
};
pub use test_fn::{Shape, TestFunction};
