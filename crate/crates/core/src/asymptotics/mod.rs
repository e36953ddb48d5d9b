//! Desk-scale drivers for the limit statements: decay of the comparison
//! statistic, weak-coupling scales, the martingale behind the decaying case,
//! and band-edge diagnostics of the free measure.

mod edge;
mod experiment;
mod martingale;

pub use edge::{default_gamma_grid, edge_sum, lemma2_diagnostic, positivity_check, Lemma2Table, Positivity};
pub use experiment::{
    compare_experiment, decay_experiment, median, weak_coupling_experiment, ExperimentRecord, ExperimentRow,
    ScaleFunction, SeedRange, Setup, EXPERIMENT_CSV_HEADER,
};
pub use martingale::{gamma_of, martingale_trace, martingale_variance, MartingaleTrace};
