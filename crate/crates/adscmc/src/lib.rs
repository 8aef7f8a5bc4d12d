//! Timelike constant mean curvature surfaces in anti-de Sitter 3-space.
//!
//! Surfaces with H = ±1 are built from pairs of null curves in SL(2, R)
//! ([`bryant`]) or from integrable Lax systems ([`lax`]); their minimal
//! cousins in Minkowski 3-space come from the Weierstrass formula
//! ([`minimal`]). [`geometry`] and [`gauss`] verify them numerically, and
//! [`gallery`] collects closed-form examples.

pub mod algebra;
pub mod bryant;
pub mod cli;
pub mod error;
pub mod export;
pub mod expr;
pub mod fields;
pub mod gallery;
pub mod gauss;
pub mod geometry;
pub mod lax;
pub mod minimal;
pub mod quadrature;
pub mod surface;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
