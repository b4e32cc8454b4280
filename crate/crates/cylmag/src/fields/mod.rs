//! Magnetic fields and potentials: the auxiliary-function parametrization,
//! gauge construction, 1-D profile oracles, and the closed-form catalog of
//! integrable systems.

pub mod aux;
pub mod catalog;
pub mod gauge;
pub mod scalar1d;

pub use aux::AuxFunctions;
pub use scalar1d::Scalar1D;
