//! Multiplier spectra of periodic orbits for polynomial endomorphisms of
//! `C^n` near the power map `F0(z_1,...,z_n) = (z_1^d,...,z_n^d)`.
//!
//! The crate combines three layers:
//!
//! * exact arithmetic on the periodic points of the power map (tuples of
//!   roots of unity, stored as residues) and closed-form partial derivatives
//!   of the diagonal-entry maps `rho_{k,w0}` at `F0`, together with their
//!   `Q`-polynomial factorizations ([`powerlattice`], [`derivatives`]);
//! * witness selection certifying that the derivative Jacobian blocks of
//!   selected periodic orbits are nonsingular, with the associated counting
//!   inequalities ([`witness`], [`combinatorics`]);
//! * a numeric engine for dense polynomial maps: Newton solving of cycles,
//!   predictor-corrector path tracking, finite-difference rank certificates
//!   for eigenvalue functions, and monodromy loops permuting marked periodic
//!   points and eigendirections ([`continuation`], [`monodromy`]).
//!
//! The [`cli`] module wires everything into the `multispec` command-line
//! tool producing deterministic JSON reports.

pub mod cli;
pub mod combinatorics;
pub mod config;
pub mod continuation;
pub mod derivatives;
pub mod linalg;
pub mod monodromy;
pub mod powerlattice;
pub mod report;
pub mod witness;

use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// individual subsystems so callers can match on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("zero coordinate: {0}")]
    ZeroCoordinate(String),

    #[error("Newton iteration did not converge after {iters} steps (residual {residual:.3e})")]
    NewtonDivergence { iters: u32, residual: f64 },

    #[error("cycle Jacobian has an eigenvalue within {tol:.1e} of 1 (gap {gap:.3e})")]
    ParabolicCycle { gap: f64, tol: f64 },

    #[error("eigenvalue branches too close to separate (min gap {gap:.3e})")]
    EigenvalueCollision { gap: f64 },

    #[error("witness cycle lost under perturbation: {0}")]
    WitnessCycleLost(String),

    #[error("witness search exhausted at block k={k}, row j={j}: no candidate exceeds the determinant threshold")]
    WitnessExhausted { k: usize, j: usize },

    #[error("base map is outside the locus of simple non-unit eigenvalues: {0}")]
    DegenerateBase(String),

    #[error("degree cap exceeded: {0}")]
    DegreeCapExceeded(String),

    #[error("endpoint matching ambiguous: {0}")]
    AmbiguousMatch(String),

    #[error("loop specification invalid: {0}")]
    BadLoopSpec(String),

    #[error("hyperbolicity certificate inconclusive: {0}")]
    Inconclusive(String),

    #[error("eps too large: {0}")]
    EpsTooLarge(String),

    #[error("duplicate orbit: {0}")]
    DuplicateOrbit(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
