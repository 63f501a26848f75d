//! Two-dimensional sine-Gordon solver.
//!
//! Space is discretised with differential quadrature whose weights come from
//! a modified cubic B-spline basis; time is advanced with the optimal
//! five-stage, fourth-order SSP Runge-Kutta scheme. Neumann boundary values
//! are recovered algebraically before every stage.
//!
//! ```no_run
//! use sinegordon::prelude::*;
//!
//! let spec = builtin_scenario("line-soliton-exact")?;
//! let grid = spec.grid()?;
//! let sys = spec.system(&grid)?;
//! let state0 = spec.initial_state(&sys)?;
//! let (state, _) = integrate(&sys, &state0, spec.dt, 1.0, &[])?;
//! let exact = spec.exact_field(&grid, 1.0).unwrap()?;
//! println!("L_inf = {}", error_norms(&state.u, &exact)?.l_inf);
//! # Ok::<(), sinegordon::Error>(())
//! ```

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod io;
pub mod rhs;
pub mod scenarios;
pub mod spline;
pub mod ssprk;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::diagnostics::{
        discrete_energy, eccentricity_proxy, error_norms, ring_radius, ErrorReport,
    };
    pub use crate::grid::{Field, UniformGrid};
    pub use crate::rhs::{BoundaryData, PdeParams, SineGordonSystem};
    pub use crate::scenarios::{builtin_scenario, ScenarioSpec, Transform, SCENARIO_NAMES};
    pub use crate::spline::WeightSet;
    pub use crate::ssprk::{integrate, step, SolverState};
}
