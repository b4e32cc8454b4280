//! Quantum operator layer: H, X₁, X₂ as differential operators with exact
//! coefficient jets, Leibniz-rule composition, commutator residuals on probe
//! batteries, and the ħ-scaling diagnostic for the potential correction.

pub mod operator;
pub mod probe;
pub mod verify;

pub use operator::{
    build_hamiltonian, build_integral, commutator, compose, derivative_operator,
    momentum_operator, scalar_operator, DiffOperator, OpCoeffs,
};
pub use probe::TestFunction;
pub use verify::{
    commutator_residual, hbar_scaling_fit, operator_pair, scaling_exponent, CommutatorReport,
    OperatorPair, RESIDUAL_FLOOR,
};
