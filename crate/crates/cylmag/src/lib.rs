//! Verification toolkit for quadratically integrable cylindrical-type
//! magnetic systems.
//!
//! The library encodes a small catalog of three-dimensional magnetic fields
//! (with electrostatic-type potentials) that admit two commuting quadratic
//! integrals of motion built on the cylindrical pair (p_φ, p_Z), and provides
//! the machinery to verify the defining properties numerically:
//!
//! * chart handling between Cartesian and cylindrical components
//!   ([`geometry`]),
//! * auxiliary-function parametrizations of the field, gauge construction,
//!   and the closed-form catalog systems ([`fields`]),
//! * the nonlinear radial-profile equation for the second catalog family and
//!   its first integrals ([`beta`]),
//! * the reduced determining equations with their ħ²-dependent right-hand
//!   side ([`detequations`]),
//! * classical trajectory integration, conservation drift, and Poisson
//!   brackets ([`classical`]),
//! * quantum operators as differential-operator jets, commutators, and the
//!   ħ-scaling analysis that isolates the quantum correction ([`quantum`]).
//!
//! Everything numerical is built on fourth-order Taylor jets ([`jet`]) so
//! that all derivatives entering the checks are analytic, not finite
//! differences, except where a finite-difference cross-check is the point.

pub mod beta;
pub mod classical;
pub mod detequations;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod jet;
pub mod ode;
pub mod quantum;
pub mod sampling;

pub use error::{Error, Result};
