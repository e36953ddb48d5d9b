//! Finite-volume Anderson Hamiltonians with decaying or weakly coupled
//! randomness, and the rescaled local eigenvalue measures around a fixed
//! energy.
//!
//! The crate is organized bottom-up:
//!
//! - [`model`]: cube geometry, disorder sampling, potential envelopes and
//!   banded Hamiltonian assembly.
//! - [`free`]: closed-form spectrum of the free Laplacian on a cube,
//!   windowed enumeration and multiplicity audits.
//! - [`eigen`]: Householder tridiagonalization, implicit QL, Sturm counts,
//!   bisection and banded LDLᵀ inertia.
//! - [`measure`]: atomic and counting measures, smooth test functions, the
//!   comparison statistic and its trace-norm bound.
//! - [`asymptotics`]: experiment drivers (decay, weak coupling, martingale,
//!   band-edge diagnostics).
//! - [`dos`]: lattice density of states and the conjectured limit measure.
//! - [`io`]: configuration, run orchestration and CSV emission.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --release --example
//! <name>`.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod dos;
pub mod eigen;
pub mod error;
pub mod free;
pub mod io;
pub mod measure;
pub mod model;
pub mod quad;

pub use error::{Error, Result};
