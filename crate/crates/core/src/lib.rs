//! Staggered Lax-Friedrichs solver for scalar conservation laws with a
//! discontinuous flux coefficient, `u_t + f(k(x,t), u)_x = 0`, together with
//! discrete diagnostics: entropy production, dissipation sums, interaction
//! identities and translation moduli.
//!
//! ```
//! use lxf_core::{builtin_problem, build_lattice, run};
//!
//! let problem = builtin_problem("burgers-riemann").unwrap();
//! let lattice = build_lattice(&problem, 100, 0.1).unwrap();
//! let traj = run(&problem, &lattice).unwrap();
//! let (lo, hi) = traj.state_range();
//! assert!(lo >= 0.0 && hi <= 1.0);
//! ```

pub mod compactness;
pub mod entropy;
pub mod error;
pub mod io;
pub mod lattice;
pub mod problem;
pub mod quadrature;
pub mod scheme;
pub mod sum;
pub mod weight;

pub use error::{Error, Result};
pub use lattice::{build_lattice, build_lattice_with, LatticeOptions, LatticeSpec, StaggeredField};
pub use problem::{builtin_problem, validate_problem, ProblemSpec};
pub use scheme::{run, StaggeredTrajectory};
pub use weight::WeightFunction;
