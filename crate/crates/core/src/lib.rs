//! Spectral-radius analysis of linear systems under periodic impulsive
//! control, `x' = A x` between pulses and `x(nτ⁺) = D x(nτ⁻)` at pulses.
//!
//! The stability of the controlled system is governed by the spectral
//! radius `r(τ) = ρ(D e^{τA})`. When `A` is diagonally symmetrizable the map
//! `τ ↦ r(τ)` is convex, which makes the stability threshold and the
//! optimal pulse period well defined and cheap to locate.

pub mod analysis;
pub mod error;
pub mod impulse_sim;
pub mod linalg;
pub mod presets;
pub mod spectral_map;
pub mod symmetrize;
pub mod system;

pub use error::{Error, Result};
pub use linalg::SquareMatrix;
pub use system::{ControlSystem, DiagonalControl};
