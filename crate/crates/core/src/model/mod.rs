//! Lattice geometry, disorder, potential envelopes and Hamiltonian assembly.

mod cube;
mod disorder;
mod field;
mod hamiltonian;
mod profile;

pub use cube::Cube;
pub use disorder::{sample_disorder, site_key, DisorderLaw};
pub use field::SiteField;
pub use hamiltonian::{assemble_hamiltonian, BandedSymmetricMatrix, Rescale};
pub use profile::PotentialProfile;
