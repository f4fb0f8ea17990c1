//! Invariant straight lines of real planar quadratic differential systems.
//!
//! The pipeline: [`system`] holds the coefficients, [`comitants`] computes the
//! affine comitants, [`invlines`] extracts lines with multiplicities,
//! [`classify`] assigns a configuration label and [`verify`] cross-checks
//! everything against a brute-force oracle.

pub mod polyring;
pub mod system;
pub mod comitants;
pub mod invlines;
pub mod classify;
pub mod verify;
