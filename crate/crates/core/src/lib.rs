//! Linear onset of convection in a horizontal fluid layer heated by a
//! uniform internal source and bounded by rigid, perfectly conducting walls.
//!
//! The primary solver expands the temperature-like unknown in particular
//! solutions of a sixth-order equation driven by sine modes and reduces the
//! marginal-stability condition to a truncated secular determinant
//! ([`secular`]). Three independent estimators referee it: a closed-form
//! one-mode approximation, a beam/sine Galerkin estimate ([`variational`]),
//! and Chebyshev collocation of the coupled two-point problem ([`oracle`]).
//! [`sweep`] builds neutral curves and surfaces on top of any of them.

// `!(x > 0.0)` is used so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod cli;
mod eigen;
mod error;
pub mod method;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod secular;
pub mod sweep;
pub mod variational;

pub use error::{Error, Result};
pub use method::Method;
pub use model::{basic_state_temperature, wavenumbers_from_box, BasicState, BoxSpec, FlowParams};
pub use oracle::{oracle_eigenfunction, oracle_rayleigh, OracleProfile, OracleResult};
pub use secular::{
    assemble_secular_matrix, first_approximation_ra, reconstruct_eigenfunctions, smallest_rayleigh,
    solve_particular_coeffs, solve_secular, theta_k_eval, ModeSolution, ParticularCoeffs, SecularAssembly,
};
pub use sweep::{critical_point, neutral_curve, neutral_surface, table1_report, CriticalPoint, NeutralPoint};
pub use variational::{variational_ra, VariationalBasis};
