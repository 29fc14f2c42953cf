//! Entropy stable finite difference schemes of order one to four for the
//! shear shallow water equations in one and two space dimensions.

pub mod cases;
pub mod diagnostics;
pub mod dissipation;
pub mod ec_flux;
pub mod grid;
pub mod linalg;
pub mod physics;
pub mod reconstruct;
pub mod scalar;
pub mod scheme;
pub mod solver;
pub mod state;
pub mod verify;

pub use scalar::Real;
pub use scheme::SchemeOrder;
pub use dissipation::WaveSpeeds;

/// `f64` instantiations of the generic types.
pub type Primitive = state::PrimitiveState<f64>;
pub type Conserved = state::ConservedState<f64>;
pub type EntropyVariables = state::EntropyVars<f64>;
pub type Params = state::ModelParams<f64>;
pub type Field = grid::GridField<f64>;
pub type Record = solver::SolutionRecord<f64>;
