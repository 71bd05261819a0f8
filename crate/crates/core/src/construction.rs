//! The two-equal-steps walk along a conic.
//!
//! From an on-curve anchor `A` the walk takes a step of length `delta` to an
//! apex `D`, then a second step of the same length to `B`. The step
//! directions are chosen from the curve's focal definition so that the
//! locus quantity is unchanged to first order:
//!
//! | curve     | first step           | second step         |
//! |-----------|----------------------|---------------------|
//! | ellipse   | away from F1         | towards F2          |
//! | parabola  | towards the directrix| towards the focus   |
//! | hyperbola | away from F1         | away from F2        |
//!
//! `A`, `D`, `B` form an isosceles triangle with apex `D`. A beam arriving
//! along the first leg and bouncing off the line through `D` parallel to the
//! base `AB` leaves exactly along the second leg; that identity is what
//! [`reflect_through_apex`] checks.

use serde::{Deserialize, Serialize};

use crate::conics::{Conic, Shape, ON_CURVE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, reflect_direction, scalar_projection, Direction, Line, Point, Vec2};

/// Endpoints closer than `DEGENERATE_TOL * (1 + delta)` collapse the triangle.
pub const DEGENERATE_TOL: f64 = 1e-12;
/// Componentwise tolerance of the apex reflection identity.
pub const REFLECTION_IDENTITY_TOL: f64 = 1e-12;
/// Relative bracket width at which the exact-return bisection stops.
pub const EXACT_RETURN_RTOL: f64 = 1e-14;
pub const EXACT_RETURN_MAX_ITER: usize = 200;

/// Direction of travel along the curve.
///
/// `Backward` swaps the roles of the two foci (or of focus and directrix),
/// which walks the other way from the same anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Forward,
    Backward,
}

/// Output of [`two_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepTriangle {
    pub a: Point,
    pub d: Point,
    pub b: Point,
    pub delta: f64,
    /// Signed residual of the conic at `b`. Recorded, never forced to zero.
    pub residual_b: f64,
    pub leg1: Direction,
    pub leg2: Direction,
    pub orientation: Orientation,
    /// Set when `b` coincides with `a` (collinear steps at an axis vertex).
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactReturn {
    /// Triangle whose second leg has length `t_star`, so `b` is on the curve.
    pub triangle: StepTriangle,
    pub t_star: f64,
}

/// Measurements behind the projection argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalChange {
    /// `|proj(D - A onto leg2)| - |proj(B - D onto leg1)|`; zero up to
    /// rounding since both equal `delta * cos(ADB)`.
    pub proj_gap: f64,
    /// Angle between the lines from `A` and from `B` to the second focus.
    pub parallelism_error: f64,
}

impl StepTriangle {
    /// `B - A`, summed from the two legs rather than differenced from the
    /// endpoints so it stays accurate for tiny steps.
    pub fn chord(&self) -> Vec2 {
        self.delta * self.leg1 + self.delta * self.leg2
    }

    pub fn separation(&self) -> f64 {
        self.b.distance(self.a)
    }
}

struct Legs {
    first: Direction,
    second_target: SecondStep,
}

enum SecondStep {
    Towards(Point),
    AwayFrom(Point),
    Along(Direction),
}

fn leg_directions(conic: &Conic, a: Point, orientation: Orientation) -> Result<Legs> {
    let away = |from: Point| Direction::from_vec(a - from).map_err(|_| Error::AnchorAtFocus);
    match conic.shape() {
        Shape::Ellipse(_) | Shape::Hyperbola(_) => {
            let [f1, f2] = conic.focus_pair("two_step")?;
            let (first, second) = match orientation {
                Orientation::Forward => (f1, f2),
                Orientation::Backward => (f2, f1),
            };
            let second_target = if matches!(conic.shape(), Shape::Ellipse(_)) {
                SecondStep::Towards(second)
            } else {
                SecondStep::AwayFrom(second)
            };
            Ok(Legs {
                first: away(first)?,
                second_target,
            })
        }
        Shape::Parabola(_) => {
            let focus = conic.foci()[0];
            // Canonical -y is the perpendicular towards the directrix.
            let to_directrix = -conic.placement().dir_to_world(Direction::Y);
            match orientation {
                Orientation::Forward => Ok(Legs {
                    first: to_directrix,
                    second_target: SecondStep::Towards(focus),
                }),
                Orientation::Backward => Ok(Legs {
                    first: away(focus)?,
                    second_target: SecondStep::Along(-to_directrix),
                }),
            }
        }
    }
}

impl SecondStep {
    fn direction(&self, d: Point) -> Result<Direction> {
        let dir = match *self {
            SecondStep::Towards(f) => Direction::from_vec(f - d),
            SecondStep::AwayFrom(f) => Direction::from_vec(d - f),
            SecondStep::Along(u) => return Ok(u),
        };
        dir.map_err(|_| Error::ApexAtFocus)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::NonPositiveDelta(delta));
    }
    Ok(())
}

fn first_step(conic: &Conic, a: Point, delta: f64, orientation: Orientation, tol: f64) -> Result<(Legs, Point)> {
    check_delta(delta)?;
    conic.check_on_curve(a, tol)?;
    let legs = leg_directions(conic, a, orientation)?;
    let d = a + delta * legs.first;
    Ok((legs, d))
}

/// Two equal steps of length `delta` from the on-curve anchor `a`, using the
/// default on-curve tolerance.
pub fn two_step(conic: &Conic, a: Point, delta: f64, orientation: Orientation) -> Result<StepTriangle> {
    two_step_with_tol(conic, a, delta, orientation, ON_CURVE_TOL)
}

pub fn two_step_with_tol(
    conic: &Conic,
    a: Point,
    delta: f64,
    orientation: Orientation,
    tol: f64,
) -> Result<StepTriangle> {
    let (legs, d) = first_step(conic, a, delta, orientation, tol)?;
    let leg2 = legs.second_target.direction(d)?;
    let b = d + delta * leg2;
    build_triangle(conic, a, d, b, delta, legs.first, leg2, orientation)
}

#[allow(clippy::too_many_arguments)]
fn build_triangle(
    conic: &Conic,
    a: Point,
    d: Point,
    b: Point,
    delta: f64,
    leg1: Direction,
    leg2: Direction,
    orientation: Orientation,
) -> Result<StepTriangle> {
    let separation = b.distance(a);
    Ok(StepTriangle {
        a,
        d,
        b,
        delta,
        residual_b: conic.residual(b)?,
        leg1,
        leg2,
        orientation,
        degenerate: separation <= DEGENERATE_TOL * (1.0 + delta),
    })
}

/// Line through the apex `D` parallel to the base `AB`.
pub fn apex_reflector(tri: &StepTriangle) -> Result<Line> {
    if tri.degenerate {
        return Err(Error::DegenerateTriangle {
            separation: tri.separation(),
        });
    }
    let dir = Direction::from_vec(tri.chord()).map_err(|_| Error::DegenerateTriangle {
        separation: tri.separation(),
    })?;
    Ok(Line::new(tri.d, dir))
}

/// Reflects the first leg's direction off the apex reflector.
///
/// The result must coincide with the second leg; a deviation above
/// [`REFLECTION_IDENTITY_TOL`] in either component is reported as
/// [`Error::IdentityViolation`].
pub fn reflect_through_apex(tri: &StepTriangle) -> Result<Direction> {
    let mirror = apex_reflector(tri)?;
    let out = reflect_direction(tri.leg1, &mirror);
    let deviation = (out.dx() - tri.leg2.dx()).abs().max((out.dy() - tri.leg2.dy()).abs());
    if deviation > REFLECTION_IDENTITY_TOL {
        return Err(Error::IdentityViolation { deviation });
    }
    Ok(out)
}

/// Focus the second leg aims at (or away from).
fn second_focus(conic: &Conic, orientation: Orientation) -> Result<Point> {
    let [f1, f2] = conic.focus_pair("focal_change_error")?;
    Ok(match orientation {
        Orientation::Forward => f2,
        Orientation::Backward => f1,
    })
}

/// Projection-gap and parallelism measurements for the two-focus conics.
pub fn focal_change_error(tri: &StepTriangle, conic: &Conic) -> Result<FocalChange> {
    let focus = second_focus(conic, tri.orientation)?;
    if tri.degenerate {
        return Err(Error::DegenerateTriangle {
            separation: tri.separation(),
        });
    }
    let proj_gap = scalar_projection(tri.d - tri.a, tri.leg2).abs() - scalar_projection(tri.b - tri.d, tri.leg1).abs();
    let from_a = Direction::from_vec(focus - tri.a).map_err(|_| Error::AnchorAtFocus)?;
    let from_b = Direction::from_vec(focus - tri.b)?;
    Ok(FocalChange {
        proj_gap,
        parallelism_error: angle_between(from_a, from_b),
    })
}

/// Same first step as [`two_step`], but the second step's length is solved
/// by bisection on `[delta/2, 2 delta]` so that `B` lands on the curve.
pub fn exact_return(conic: &Conic, a: Point, delta: f64, orientation: Orientation) -> Result<ExactReturn> {
    exact_return_with_tol(conic, a, delta, orientation, ON_CURVE_TOL)
}

pub fn exact_return_with_tol(
    conic: &Conic,
    a: Point,
    delta: f64,
    orientation: Orientation,
    tol: f64,
) -> Result<ExactReturn> {
    let (legs, d) = first_step(conic, a, delta, orientation, tol)?;
    let leg2 = legs.second_target.direction(d)?;
    let r = |t: f64| conic.residual(d + t * leg2);

    let t_star = if r(delta)? == 0.0 {
        delta
    } else {
        let (mut lo, mut hi) = (0.5 * delta, 2.0 * delta);
        let mut r_lo = r(lo)?;
        let r_hi = r(hi)?;
        if r_lo * r_hi > 0.0 {
            return Err(Error::Bracketing { lo, hi });
        }
        let mut converged = false;
        for _ in 0..EXACT_RETURN_MAX_ITER {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                converged = true;
                break;
            }
            let r_mid = r(mid)?;
            if r_mid == 0.0 {
                lo = mid;
                hi = mid;
            } else if (r_mid < 0.0) == (r_lo < 0.0) {
                lo = mid;
                r_lo = r_mid;
            } else {
                hi = mid;
            }
            if hi - lo <= EXACT_RETURN_RTOL * lo {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "exact-return bisection",
                iterations: EXACT_RETURN_MAX_ITER,
            });
        }
        // Pick whichever end has the smaller residual.
        if r(lo)?.abs() <= r(hi)?.abs() {
            lo
        } else {
            hi
        }
    };

    let b = d + t_star * leg2;
    let triangle = build_triangle(conic, a, d, b, delta, legs.first, leg2, orientation)?;
    Ok(ExactReturn { triangle, t_star })
}
