//! Numerical engine for the Moyal star-product calculus on two-dimensional
//! phase space.
//!
//! The crate has two representations of phase-space functions:
//!
//! * [`CoefficientMatrix`]: exact finite sums `Σ c_mn f_mn` in the twisted
//!   Hermite basis, where the star product is matrix multiplication;
//! * [`GridFunction2`]: samples on a uniform grid, where the star product is
//!   realized through the Wigner transformation as `W⁻¹(Wf ∘ Wg)`.
//!
//! On top sit the Weyl correspondence ([`weyl`]), decision procedures for
//! the weighted filtration `G_{s,t}`, `I_{s,t}`, `B_{s,t}` and the Moyal
//! algebra ([`filtration`]), file formats ([`io`]) and the verification
//! suite ([`verify`]).

pub mod basis;
pub mod cli;
pub mod coeff;
mod dense;
pub mod error;
pub mod filtration;
pub mod grid;
pub mod io;
pub mod special;
pub mod transforms;
pub mod verify;
pub mod weyl;

pub use basis::{analyze, f_grid, h_grid, inner1, inner2, synthesize};
pub use coeff::{
    coordinate_models, hamiltonian_model, identity_model, involute, norm, star_coeff, weight_apply,
    CoefficientMatrix, NormKind, WeightPair,
};
pub use error::{Error, Result};
pub use grid::{GridFunction1, GridFunction2, GridSpec1, GridSpec2};
pub use special::{f_mn_eval, hermite_fn, laguerre_gen, oddzeta};
pub use transforms::{grid_star, wigner_forward, wigner_inverse, ResampleMethod};
