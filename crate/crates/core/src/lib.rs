//! Analysis of nilpotent singular points of planar analytic systems.
//!
//! The crate has two halves that check each other:
//!
//! * an exact half built on truncated power series over arbitrary-precision
//!   rationals ([`series`], [`bivar`], [`system`], [`focal`]), which decides
//!   monodromy, computes the generalized focal coefficients `B_j` of a
//!   Liénard-form system and classifies the origin as a center candidate or
//!   a focus of definite stability and order;
//! * a numerical half ([`gentrig`], [`polar`], [`fit`], [`cycles`]) that
//!   integrates the same systems in generalized polar coordinates, samples
//!   the Poincaré return map, fits focal values from displacement data and
//!   counts small limit cycles by bracketing fixed points.

pub mod bivar;
pub mod cycles;
pub mod fit;
pub mod focal;
pub mod gentrig;
pub mod ode;
pub mod polar;
pub mod rational;
pub mod series;
pub mod system;

pub use rational::{parse_rational, rat, rat_int, Rational};
pub use series::{ScaleTag, ScaledSeries, Series, SeriesError};
