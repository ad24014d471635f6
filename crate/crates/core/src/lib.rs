//! Controllability analysis for coupled harmonic oscillators driven by
//! quadratic Hamiltonians.
//!
//! The crate works in the finite-dimensional symplectic representation: a
//! Hamiltonian `H = 1/2 R^T A R` acts through the generator `G = -A Omega`
//! of `sp(2n, R)` and the propagator `S(t) = exp(G t)`.

pub mod chain;
pub mod closure;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod recurrence;
pub mod symplectic;
pub mod williamson;

pub use chain::{
    build_chain, controllability_report, positive_triple, positivity_condition, verify_supplemental_identities, ChainSpec,
    ControlSet, ControllabilityReport, IdentityReport, TripleParams, Verdict,
};
pub use closure::{closure, contains, passivity_check, rank_criterion, LieSubspace, RankReport};
pub use error::{Error, Result};
pub use evolution::{audit_symplecticity, evolve_covariance, propagate, ControlModel, ControlSchedule, CovarianceState, Segment};
pub use hamiltonian::{bracket_hamiltonians, from_terms, generator, HamiltonianTerm, QuadraticHamiltonian, SymplecticGenerator};
pub use recurrence::{conditioning_bound, find_recurrence, mode_distance, RecurrenceQuery, RecurrenceResult};
pub use symplectic::{commutator, expm, identity_distance, is_symplectic, symplectic_form, ModeCount, RealMatrix};
pub use williamson::{spectrum_certificate, symplectic_eigenvalues, williamson_decompose, SpectrumCertificate, WilliamsonDecomposition};
