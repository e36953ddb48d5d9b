//! Symmetric eigenvalue machinery: tridiagonal reduction, full QL solve,
//! Sturm-sequence counting with bisection, and banded LDLᵀ inertia.
//!
//! Every count in this crate follows one convention: the number of
//! eigenvalues **≤ μ**.

mod banded;
mod ql;
mod sturm;
mod tridiag;

pub use banded::banded_inertia;
pub use ql::full_spectrum;
pub use sturm::{count_le, eigs_in_window, sturm_count, WindowEigenvalues};
pub use tridiag::{tridiagonalize, Tridiagonal};

use serde::{Deserialize, Serialize};

/// Which factorization produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InertiaMethod {
    Sturm,
    BandedLdl,
}

/// Number of eigenvalues ≤ `shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaCount {
    pub shift: f64,
    pub count: usize,
    pub method: InertiaMethod,
    /// The shift was moved up after a pivot breakdown.
    pub nudged: bool,
}
