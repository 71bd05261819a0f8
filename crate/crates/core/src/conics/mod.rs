//! Ellipses, parabolas and hyperbolas in canonical pose plus a rigid
//! placement.
//!
//! Every formula is written once, in the canonical frame:
//!
//! * ellipse: centre at the origin, major axis along x, foci `(-c, 0)` and
//!   `(c, 0)` with `c = sqrt(a^2 - b^2)`;
//! * parabola: vertex at the origin, opening towards +y, focus `(0, p)` and
//!   directrix `y = -p`;
//! * hyperbola: centre at the origin, transverse axis along x, foci
//!   `(-c, 0)` and `(c, 0)` with `c = sqrt(a^2 + b^2)`.
//!
//! A [`Conic`] maps world points into that frame with its [`Placement`]
//! before evaluating anything.

mod projection;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Line, Point, Vec2};

/// Default distance below which a point counts as lying on a curve.
pub const ON_CURVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    a: f64,
    b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperbola {
    a: f64,
    b: f64,
}

/// One of the two hyperbola branches, named by the sign of the canonical x
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Ellipse(Ellipse),
    Parabola(Parabola),
    Hyperbola(Hyperbola),
}

/// Rigid, orientation-preserving map from the canonical frame to the world:
/// `world = R(rotation) * canonical + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub translation: Point,
    pub rotation: f64,
}

/// A posed conic section.
///
/// `branch` only matters for hyperbolas: when set, ray intersections and
/// projections are restricted to that branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    shape: Shape,
    placement: Placement,
    branch: Option<Branch>,
}

fn check_len(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidConic(format!("{name} must be finite")));
    }
    if v <= 0.0 {
        return Err(Error::InvalidConic(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

impl Ellipse {
    /// Requires `a >= b > 0`. `a == b` is a circle with coincident foci.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_len("a", a)?;
        check_len("b", b)?;
        if a < b {
            return Err(Error::InvalidConic(format!(
                "ellipse needs a >= b, got a = {a}, b = {b}"
            )));
        }
        Ok(Ellipse { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Focal half-distance.
    pub fn c(&self) -> f64 {
        // (a-b)(a+b) avoids cancellation for near-circles.
        ((self.a - self.b) * (self.a + self.b)).sqrt()
    }

    pub fn foci(&self) -> [Point; 2] {
        let c = self.c();
        [Point::xy(-c, 0.0), Point::xy(c, 0.0)]
    }
}

impl Parabola {
    pub fn new(p: f64) -> Result<Self> {
        check_len("p", p)?;
        Ok(Parabola { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn focus(&self) -> Point {
        Point::xy(0.0, self.p)
    }

    /// The line `y = -p`.
    pub fn directrix(&self) -> Line {
        Line::new(Point::xy(0.0, -self.p), Direction::X)
    }
}

impl Hyperbola {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_len("a", a)?;
        check_len("b", b)?;
        Ok(Hyperbola { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn foci(&self) -> [Point; 2] {
        let c = self.c();
        [Point::xy(-c, 0.0), Point::xy(c, 0.0)]
    }

    /// Branch a canonical point belongs to, by the sign of its x coordinate.
    pub fn branch_of(&self, q: Point) -> Result<Branch> {
        if q.x > 0.0 {
            Ok(Branch::Positive)
        } else if q.x < 0.0 {
            Ok(Branch::Negative)
        } else {
            Err(Error::NoBranch)
        }
    }

    /// `(near, far)` foci for the given branch.
    pub fn near_far(&self, branch: Branch) -> (Point, Point) {
        let [f1, f2] = self.foci();
        match branch {
            Branch::Positive => (f2, f1),
            Branch::Negative => (f1, f2),
        }
    }
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

impl Shape {
    pub fn kind(&self) -> &'static str {
        match self {
            Shape::Ellipse(_) => "ellipse",
            Shape::Parabola(_) => "parabola",
            Shape::Hyperbola(_) => "hyperbola",
        }
    }

    /// Characteristic length used to scale tolerances: `a + b` or `p`.
    pub fn scale(&self) -> f64 {
        match self {
            Shape::Ellipse(e) => e.a + e.b,
            Shape::Parabola(p) => p.p,
            Shape::Hyperbola(h) => h.a + h.b,
        }
    }

    /// Signed locus residual of a canonical point, positive on the side the
    /// outward normal points to.
    pub fn residual(&self, q: Point) -> Result<f64> {
        match self {
            Shape::Ellipse(e) => {
                let [f1, f2] = e.foci();
                Ok(q.distance(f1) + q.distance(f2) - 2.0 * e.a)
            }
            Shape::Parabola(p) => Ok(q.distance(p.focus()) - (q.y + p.p)),
            Shape::Hyperbola(h) => {
                let (near, far) = h.near_far(h.branch_of(q)?);
                Ok(q.distance(far) - q.distance(near) - 2.0 * h.a)
            }
        }
    }

    /// Implicit quadratic whose zero set is the curve:
    /// `x^2/a^2 + y^2/b^2 - 1`, `x^2/(4p) - y`, `x^2/a^2 - y^2/b^2 - 1`.
    /// Its gradient points along the outward normal.
    pub fn implicit(&self, q: Point) -> f64 {
        match self {
            Shape::Ellipse(e) => (q.x / e.a).powi(2) + (q.y / e.b).powi(2) - 1.0,
            Shape::Parabola(p) => q.x * q.x / (4.0 * p.p) - q.y,
            Shape::Hyperbola(h) => (q.x / h.a).powi(2) - (q.y / h.b).powi(2) - 1.0,
        }
    }

    pub fn implicit_gradient(&self, q: Point) -> Vec2 {
        match self {
            Shape::Ellipse(e) => Vec2::new(2.0 * q.x / (e.a * e.a), 2.0 * q.y / (e.b * e.b)),
            Shape::Parabola(p) => Vec2::new(q.x / (2.0 * p.p), -1.0),
            Shape::Hyperbola(h) => Vec2::new(2.0 * q.x / (h.a * h.a), -2.0 * q.y / (h.b * h.b)),
        }
    }

    /// Curve point for parameter `t`. The branch is ignored except for
    /// hyperbolas.
    pub fn point_at(&self, t: f64, branch: Branch) -> Point {
        match self {
            Shape::Ellipse(e) => Point::xy(e.a * t.cos(), e.b * t.sin()),
            Shape::Parabola(p) => Point::xy(t, t * t / (4.0 * p.p)),
            Shape::Hyperbola(h) => Point::xy(branch.sign() * h.a * t.cosh(), h.b * t.sinh()),
        }
    }

    /// First and second parameter derivatives at `t`.
    pub(crate) fn derivatives(&self, t: f64, branch: Branch) -> (Vec2, Vec2) {
        match self {
            Shape::Ellipse(e) => {
                let (s, c) = t.sin_cos();
                (Vec2::new(-e.a * s, e.b * c), Vec2::new(-e.a * c, -e.b * s))
            }
            Shape::Parabola(p) => (Vec2::new(1.0, t / (2.0 * p.p)), Vec2::new(0.0, 1.0 / (2.0 * p.p))),
            Shape::Hyperbola(h) => {
                let sg = branch.sign();
                (
                    Vec2::new(sg * h.a * t.sinh(), h.b * t.cosh()),
                    Vec2::new(sg * h.a * t.cosh(), h.b * t.sinh()),
                )
            }
        }
    }
}

impl Default for Placement {
    fn default() -> Self {
        Placement::IDENTITY
    }
}

impl Placement {
    pub const IDENTITY: Placement = Placement {
        translation: Point::ORIGIN,
        rotation: 0.0,
    };

    pub fn new(translation: Point, rotation: f64) -> Result<Self> {
        if !(translation.is_finite() && rotation.is_finite()) {
            return Err(Error::NonFinite("placement"));
        }
        Ok(Placement {
            translation,
            rotation,
        })
    }

    pub fn to_world(&self, q: Point) -> Point {
        self.translation + q.to_vec().rotate(self.rotation)
    }

    pub fn to_canonical(&self, q: Point) -> Point {
        let v = (q - self.translation).rotate(-self.rotation);
        Point::xy(v.x, v.y)
    }

    pub fn dir_to_world(&self, d: Direction) -> Direction {
        d.rotate(self.rotation)
    }

    pub fn dir_to_canonical(&self, d: Direction) -> Direction {
        d.rotate(-self.rotation)
    }
}

impl Conic {
    pub fn new(shape: Shape, placement: Placement) -> Self {
        Conic {
            shape,
            placement,
            branch: None,
        }
    }

    /// Canonical ellipse. Shorthand for tests and examples.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Ok(Self::new(Shape::Ellipse(Ellipse::new(a, b)?), Placement::IDENTITY))
    }

    pub fn parabola(p: f64) -> Result<Self> {
        Ok(Self::new(Shape::Parabola(Parabola::new(p)?), Placement::IDENTITY))
    }

    pub fn hyperbola(a: f64, b: f64) -> Result<Self> {
        Ok(Self::new(Shape::Hyperbola(Hyperbola::new(a, b)?), Placement::IDENTITY))
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    /// Restricts a hyperbola to one branch. Ignored for other shapes.
    pub fn with_branch(mut self, branch: Branch) -> Self {
        if matches!(self.shape, Shape::Hyperbola(_)) {
            self.branch = Some(branch);
        }
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn branch(&self) -> Option<Branch> {
        self.branch
    }

    pub fn kind(&self) -> &'static str {
        self.shape.kind()
    }

    pub fn scale(&self) -> f64 {
        self.shape.scale()
    }

    /// World-frame foci. Ellipses and hyperbolas return `[F1, F2]` with F1
    /// on the canonical -x side; a parabola returns its single focus.
    pub fn foci(&self) -> Vec<Point> {
        let canon = match &self.shape {
            Shape::Ellipse(e) => e.foci().to_vec(),
            Shape::Parabola(p) => vec![p.focus()],
            Shape::Hyperbola(h) => h.foci().to_vec(),
        };
        canon.into_iter().map(|f| self.placement.to_world(f)).collect()
    }

    /// `[F1, F2]` for the two-focus conics.
    pub fn focus_pair(&self, operation: &'static str) -> Result<[Point; 2]> {
        let [f1, f2] = match &self.shape {
            Shape::Ellipse(e) => e.foci(),
            Shape::Hyperbola(h) => h.foci(),
            Shape::Parabola(_) => {
                return Err(Error::UnsupportedVariant {
                    operation,
                    kind: "parabola",
                })
            }
        };
        Ok([self.placement.to_world(f1), self.placement.to_world(f2)])
    }

    /// World-frame directrix of a parabola.
    pub fn directrix(&self) -> Option<Line> {
        match &self.shape {
            Shape::Parabola(p) => {
                let d = p.directrix();
                Some(Line::new(
                    self.placement.to_world(d.point),
                    self.placement.dir_to_world(d.dir),
                ))
            }
            _ => None,
        }
    }

    /// Signed locus residual: zero on the curve, positive outside.
    ///
    /// * ellipse: `|q - F1| + |q - F2| - 2a`
    /// * parabola: `|q - focus| - dist(q, directrix)`
    /// * hyperbola: `|q - F_far| - |q - F_near| - 2a` on the branch whose
    ///   side of the conjugate axis contains `q`
    pub fn residual(&self, q: Point) -> Result<f64> {
        if !q.is_finite() {
            return Err(Error::NonFinite("point"));
        }
        self.shape.residual(self.placement.to_canonical(q))
    }

    /// Fails with [`Error::OffCurve`] unless `|residual(q)| <= tol`.
    pub fn check_on_curve(&self, q: Point, tol: f64) -> Result<f64> {
        let r = self.residual(q)?;
        if r.abs() > tol {
            return Err(Error::OffCurve { residual: r, tol });
        }
        Ok(r)
    }

    /// Unit tangent and outward unit normal at an on-curve point. The
    /// normal is the normalized gradient of the implicit quadratic; the
    /// tangent is the normal turned by -pi/2.
    pub fn tangent_normal(&self, q: Point, tol: f64) -> Result<(Direction, Direction)> {
        self.check_on_curve(q, tol)?;
        let local = self.placement.to_canonical(q);
        let n = Direction::from_vec(self.shape.implicit_gradient(local))?;
        let n = self.placement.dir_to_world(n);
        Ok((n.rotate_cw(), n))
    }

    /// Tangent line at an on-curve point.
    pub fn tangent_line(&self, q: Point, tol: f64) -> Result<Line> {
        let (t, _) = self.tangent_normal(q, tol)?;
        Ok(Line::new(q, t))
    }

    /// Curve point for parameter `t`: `(a cos t, b sin t)`, `(t, t^2/4p)`
    /// or `(+-a cosh t, b sinh t)`. Hyperbolas use the restricted branch,
    /// or the positive one when unrestricted.
    pub fn point_at(&self, t: f64) -> Point {
        self.point_at_branch(t, self.branch.unwrap_or(Branch::Positive))
    }

    pub fn point_at_branch(&self, t: f64, branch: Branch) -> Point {
        self.placement.to_world(self.shape.point_at(t, branch))
    }

    /// Hyperbola branch a world point sits on. `None` for other shapes.
    pub fn branch_of(&self, q: Point) -> Option<Result<Branch>> {
        match &self.shape {
            Shape::Hyperbola(h) => Some(h.branch_of(self.placement.to_canonical(q))),
            _ => None,
        }
    }

    /// Branches that projection and intersection consider.
    pub(crate) fn active_branches(&self) -> &'static [Branch] {
        match (self.shape, self.branch) {
            (Shape::Hyperbola(_), None) => &[Branch::Positive, Branch::Negative],
            (_, Some(Branch::Negative)) => &[Branch::Negative],
            _ => &[Branch::Positive],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(p: Point, x: f64, y: f64, tol: f64) -> bool {
        (p.x - x).abs() <= tol && (p.y - y).abs() <= tol
    }

    #[test]
    fn residual_examples() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        assert_eq!(e.residual(Point::xy(0.0, 3.0)).unwrap(), 0.0);
        assert_eq!(e.residual(Point::xy(0.0, 0.0)).unwrap(), -2.0);
        let p = Conic::parabola(1.0).unwrap();
        assert_eq!(p.residual(Point::ORIGIN).unwrap(), 0.0);
        assert!(p.residual(Point::xy(0.0, -0.5)).unwrap() > 0.0);
        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        assert_eq!(h.residual(Point::xy(3.0, 0.0)).unwrap(), 0.0);
        assert_eq!(h.residual(Point::xy(-3.0, 0.0)).unwrap(), 0.0);
        assert_eq!(h.residual(Point::xy(0.0, 1.0)), Err(Error::NoBranch));
    }

    #[test]
    fn invalid_parameters() {
        assert!(Conic::ellipse(3.0, 5.0).is_err());
        assert!(Conic::ellipse(5.0, 0.0).is_err());
        assert!(Conic::parabola(-1.0).is_err());
        assert!(Conic::hyperbola(1.0, f64::NAN).is_err());
        // circle is allowed
        let c = Conic::ellipse(2.0, 2.0).unwrap();
        assert!(c.foci().iter().all(|f| f.x == 0.0 && f.y == 0.0));
    }

    #[test]
    fn tangent_normal_examples() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let (t, n) = e.tangent_normal(Point::xy(0.0, 3.0), ON_CURVE_TOL).unwrap();
        assert!((t.dx().abs() - 1.0).abs() < 1e-15 && t.dy().abs() < 1e-15);
        assert!(n.dx().abs() < 1e-15 && (n.dy() - 1.0).abs() < 1e-15);

        let p = Conic::parabola(1.0).unwrap();
        let (t, n) = p.tangent_normal(Point::ORIGIN, ON_CURVE_TOL).unwrap();
        assert!((t.dx().abs() - 1.0).abs() < 1e-15);
        assert!(n.dx().abs() < 1e-15 && (n.dy() + 1.0).abs() < 1e-15);

        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        let (t, n) = h.tangent_normal(Point::xy(3.0, 0.0), ON_CURVE_TOL).unwrap();
        assert!((t.dy().abs() - 1.0).abs() < 1e-15);
        assert!((n.dx() - 1.0).abs() < 1e-15 && n.dy().abs() < 1e-15);
        assert_eq!(t.dot(n), 0.0);
    }

    #[test]
    fn tangent_normal_rejects_off_curve() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        assert!(matches!(
            e.tangent_normal(Point::xy(0.0, 3.1), ON_CURVE_TOL),
            Err(Error::OffCurve { .. })
        ));
    }

    #[test]
    fn point_at_examples() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        assert!(close(e.point_at(FRAC_PI_2), 0.0, 3.0, 1e-15));
        let p = Conic::parabola(1.0).unwrap();
        assert_eq!(p.point_at(2.0), Point::xy(2.0, 1.0));
        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        assert_eq!(h.point_at(0.0), Point::xy(3.0, 0.0));
        assert_eq!(h.point_at_branch(0.0, Branch::Negative), Point::xy(-3.0, 0.0));
    }

    #[test]
    fn placement_moves_foci() {
        let pl = Placement::new(Point::xy(1.0, 2.0), FRAC_PI_2).unwrap();
        let e = Conic::ellipse(5.0, 3.0).unwrap().with_placement(pl);
        let f = e.foci();
        assert!(close(f[0], 1.0, -2.0, 1e-14));
        assert!(close(f[1], 1.0, 6.0, 1e-14));
        let q = e.point_at(0.3);
        assert!(e.residual(q).unwrap().abs() < 1e-14);
        let pl = Placement::new(Point::xy(0.0, 0.0), PI).unwrap();
        let p = Conic::parabola(1.0).unwrap().with_placement(pl);
        let d = p.directrix().unwrap();
        assert!((d.point.y - 1.0).abs() < 1e-15);
    }
}
