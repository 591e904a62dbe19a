//! Piecewise fractional-linear (Möbius) maps of the unit interval.
//!
//! The crate builds three-branch maps from parameter families, computes their
//! dual maps and fixed points, classifies them by the configuration of the
//! dual, constructs jump-transformation extensions of two-branch maps, and
//! certifies candidate invariant densities either exactly (in `Q(√d)`) or
//! numerically through transfer-operator residuals and orbit histograms.
//!
//! Matrices follow the layout
//!
//! ```text
//! ( a  b )
//! ( c  d )   acting as   x ↦ (c + d·x) / (a + b·x)
//! ```
//!
//! so the first row is the denominator. This is the transpose of the usual
//! convention; the adjoint (dual) branch swaps `b` and `c`.

pub mod cases;
pub mod density;
pub mod error;
pub mod extensions;
pub mod interval_map;
pub mod moebius;
pub mod scalar;

pub use error::{Error, Result};
