//! Generating (wave-maker) boundary conditions for one dimensional wave models.
//!
//! Two solvers share the same grid, state and forcing types:
//!
//! * [`swe`]: the dimensional nonlinear shallow water equations, where the
//!   missing boundary discharge is recovered from the outgoing Riemann
//!   invariant.
//! * [`boussinesq`]: the dimensionless Boussinesq-Abbott system written as a
//!   pair of conservation laws with a nonlocal flux plus an exponentially
//!   decaying boundary-layer source. The boundary discharge obeys its own ODE.
//!
//! [`soliton`] builds solitary-wave reference solutions and [`validation`]
//! runs the grid convergence studies.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod boussinesq;
pub mod dispersive;
pub mod error;
pub mod forcing;
pub mod grid;
pub mod io;
pub mod soliton;
pub mod state;
pub mod swe;
pub mod validation;

pub use boussinesq::{BoussinesqRun, Closure, SourceProfile, StepReport};
pub use dispersive::{DirichletInverse, NeumannInverse, PeriodicInverse, Tridiagonal};
pub use error::{Error, Result};
pub use forcing::{BoundaryForcing, ForcingSample};
pub use grid::Grid1D;
pub use soliton::{SolitonProfile, SolitonSpec};
pub use state::{DimensionlessParams, PhysicalScales, WaveState};
pub use validation::{ConvergenceTable, ErrorReport, Scenario, ScenarioKind};
