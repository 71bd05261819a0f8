//! Plane vector algebra and the mirror reflection law.
//!
//! Mirrors are described by their direction rather than their normal, so a
//! reflector "parallel to a base segment" is just a [`Line`] carrying the
//! segment's direction.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vectors shorter than this cannot be normalized.
pub const MIN_NORM: f64 = 1e-300;

/// A position in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A displacement between two points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// A unit-length vector.
///
/// Only constructible through normalization, so the norm is always within
/// a few ulps of one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    dx: f64,
    dy: f64,
}

/// An infinite line through `point` running along `dir`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point,
    pub dir: Direction,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    /// Builds a point, rejecting non-finite coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::NonFinite("point"));
        }
        Ok(Point { x, y })
    }

    pub const fn xy(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Unit direction from `self` towards `other`.
    pub fn direction_to(self, other: Point) -> Result<Direction> {
        Direction::from_vec(other - self)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Direction {
    pub const X: Direction = Direction { dx: 1.0, dy: 0.0 };
    pub const Y: Direction = Direction { dx: 0.0, dy: 1.0 };

    /// Normalizes `(dx, dy)`. Fails on non-finite or near-zero input.
    pub fn new(dx: f64, dy: f64) -> Result<Self> {
        Self::from_vec(Vec2::new(dx, dy))
    }

    pub fn from_vec(v: Vec2) -> Result<Self> {
        if !(v.x.is_finite() && v.y.is_finite()) {
            return Err(Error::NonFinite("direction"));
        }
        let n = v.norm();
        if n < MIN_NORM {
            return Err(Error::DegenerateDirection { norm: n });
        }
        Ok(Direction {
            dx: v.x / n,
            dy: v.y / n,
        })
    }

    /// Direction at `angle` radians from the +x axis.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Direction { dx: c, dy: s }
    }

    pub fn dx(self) -> f64 {
        self.dx
    }

    pub fn dy(self) -> f64 {
        self.dy
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::new(self.dx, self.dy)
    }

    pub fn dot(self, other: Direction) -> f64 {
        self.to_vec().dot(other.to_vec())
    }

    /// Rotation by -pi/2.
    pub fn rotate_cw(self) -> Direction {
        Direction {
            dx: self.dy,
            dy: -self.dx,
        }
    }

    /// Rotation by +pi/2.
    pub fn rotate_ccw(self) -> Direction {
        Direction {
            dx: -self.dy,
            dy: self.dx,
        }
    }

    /// Rotation by an arbitrary angle. Exact rotations preserve the norm up
    /// to rounding, so no renormalization is performed.
    pub fn rotate(self, angle: f64) -> Direction {
        let v = self.to_vec().rotate(angle);
        Direction { dx: v.x, dy: v.y }
    }
}

impl Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        Direction {
            dx: -self.dx,
            dy: -self.dy,
        }
    }
}

impl Line {
    pub fn new(point: Point, dir: Direction) -> Self {
        Line { point, dir }
    }

    /// Perpendicular distance from `q` to the line.
    pub fn distance_to(&self, q: Point) -> f64 {
        (q - self.point).cross(self.dir.to_vec()).abs()
    }
}

impl Sub for Point {
    type Output = Vec2;

    fn sub(self, rhs: Point) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vec2> for Point {
    type Output = Point;

    fn add(self, rhs: Vec2) -> Point {
        Point::xy(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub<Vec2> for Point {
    type Output = Point;

    fn sub(self, rhs: Vec2) -> Point {
        Point::xy(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;

    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;

    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;

    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;

    fn mul(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self * rhs.x, self * rhs.y)
    }
}

impl Mul<Direction> for f64 {
    type Output = Vec2;

    fn mul(self, rhs: Direction) -> Vec2 {
        Vec2::new(self * rhs.dx, self * rhs.dy)
    }
}

/// Reflects `incoming` off a mirror line: the component along the mirror is
/// kept and the perpendicular component is negated, `r = 2(d.m)m - d`.
///
/// The returned vector is the outgoing beam direction, so a beam travelling
/// along `(0.8, 0.6)` towards a horizontal mirror leaves along `(0.8, -0.6)`.
pub fn reflect_direction(incoming: Direction, mirror: &Line) -> Direction {
    let m = mirror.dir;
    let along = incoming.dot(m);
    // Written as along*m - perp(d) to keep the parallel component bit-exact.
    let perp = Vec2::new(incoming.dx - along * m.dx, incoming.dy - along * m.dy);
    Direction {
        dx: along * m.dx - perp.x,
        dy: along * m.dy - perp.y,
    }
}

/// Unsigned angle between two directions in `[0, pi]`.
///
/// Uses `atan2(|cross|, dot)`, which stays accurate near 0 and pi where
/// `acos(dot)` loses half its digits.
pub fn angle_between(u: Direction, v: Direction) -> f64 {
    let (a, b) = (u.to_vec(), v.to_vec());
    a.cross(b).abs().atan2(a.dot(b))
}

/// Signed length of the orthogonal projection of `step` onto `onto`.
pub fn scalar_projection(step: Vec2, onto: Direction) -> f64 {
    step.dot(onto.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn dir(x: f64, y: f64) -> Direction {
        Direction::new(x, y).unwrap()
    }

    fn horizontal() -> Line {
        Line::new(Point::ORIGIN, Direction::X)
    }

    #[test]
    fn horizontal_mirror_negates_y() {
        let r = reflect_direction(dir(0.8, 0.6), &horizontal());
        assert!((r.dx() - 0.8).abs() < 1e-15);
        assert!((r.dy() + 0.6).abs() < 1e-15);
    }

    #[test]
    fn grazing_incidence_is_unchanged() {
        let m = Line::new(Point::ORIGIN, dir(3.0, -1.0));
        let r = reflect_direction(m.dir, &m);
        assert!((r.dx() - m.dir.dx()).abs() < 1e-15);
        assert!((r.dy() - m.dir.dy()).abs() < 1e-15);
    }

    #[test]
    fn normal_incidence_retroreflects() {
        let m = Line::new(Point::ORIGIN, dir(1.0, 2.0));
        let d = m.dir.rotate_ccw();
        let r = reflect_direction(d, &m);
        assert!((r.dx() + d.dx()).abs() < 1e-15);
        assert!((r.dy() + d.dy()).abs() < 1e-15);
    }

    #[test]
    fn angles() {
        assert!((angle_between(Direction::X, Direction::Y) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angle_between(Direction::X, Direction::X), 0.0);
        assert!((angle_between(Direction::X, -Direction::X) - PI).abs() < 1e-15);
        // acos(dot) would return 0 here.
        let tiny = dir(1.0, 1e-10);
        assert!((angle_between(Direction::X, tiny) - 1e-10).abs() < 1e-24);
    }

    #[test]
    fn projections() {
        assert_eq!(scalar_projection(Vec2::new(3.0, 4.0), Direction::X), 3.0);
        let v = Vec2::new(3.0, 4.0);
        assert!((scalar_projection(v, Direction::from_vec(v).unwrap()) - 5.0).abs() < 1e-15);
        assert_eq!(scalar_projection(Vec2::new(0.0, 0.1), Direction::X), 0.0);
    }

    #[test]
    fn degenerate_direction_rejected() {
        assert!(matches!(
            Direction::new(0.0, 0.0),
            Err(Error::DegenerateDirection { .. })
        ));
        assert!(Direction::new(1e-301, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 1.0).is_err());
        assert!(Point::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn line_distance() {
        let l = Line::new(Point::xy(0.0, 1.0), Direction::X);
        assert!((l.distance_to(Point::xy(5.0, 4.0)) - 3.0).abs() < 1e-15);
    }
}
