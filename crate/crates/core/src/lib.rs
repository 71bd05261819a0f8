//! Reflective properties of conic sections, checked numerically.
//!
//! The crate builds the two-equal-steps isosceles construction on
//! ellipses, parabolas and hyperbolas, traces rays analytically off conic
//! mirrors, and measures how the construction converges to the analytic
//! tangent as the step shrinks.

pub mod conics;
pub mod construction;
pub mod convergence;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod optics;

pub use conics::{Branch, Conic, Ellipse, Hyperbola, Parabola, Placement, Shape, ON_CURVE_TOL};
pub use construction::{
    apex_reflector, exact_return, focal_change_error, reflect_through_apex, two_step, ExactReturn, FocalChange,
    Orientation, StepTriangle,
};
pub use error::{Error, Result};
pub use geometry::{angle_between, reflect_direction, scalar_projection, Direction, Line, Point, Vec2};
