//! Analytic ray tracing on conic mirrors.
//!
//! Intersections come from substituting the ray into the canonical implicit
//! quadratic; reflections use the analytic tangent. Mirrors are two-sided.

mod scene;

pub use scene::{Aperture, CassegrainParams, Hit, Mirror, Role, Scene, SpotReport, TracePath};

use crate::conics::{Conic, Shape, ON_CURVE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, reflect_direction, Direction, Point};

/// Hits closer than this along the ray are ignored, so a reflected ray does
/// not re-hit the mirror it just left.
pub const SELF_HIT_EPS: f64 = 1e-9;
/// Roots closer than this in `t` are reported once (tangency).
pub const ROOT_MERGE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point,
    pub dir: Direction,
}

impl Ray {
    pub fn new(origin: Point, dir: Direction) -> Self {
        Ray { origin, dir }
    }

    pub fn at(&self, t: f64) -> Point {
        self.origin + t * self.dir
    }

    /// Distance from `q` to the ray's supporting line.
    pub fn line_distance(&self, q: Point) -> f64 {
        (q - self.origin).cross(self.dir.to_vec()).abs()
    }
}

/// Real roots of `a t^2 + b t + c`, ascending.
///
/// The larger-magnitude root comes from `q = -(b + sign(b) sqrt(disc)) / 2`
/// and the other from the product of roots, which avoids cancellation.
/// A discriminant that is negative only by rounding is treated as zero.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let mut disc = b * b - 4.0 * a * c;
    let scale = b * b + (4.0 * a * c).abs();
    if disc < 0.0 {
        if disc >= -8.0 * f64::EPSILON * scale {
            disc = 0.0;
        } else {
            return Vec::new();
        }
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        // b == 0 and disc == 0, so c == 0: double root at the origin.
        return vec![0.0, 0.0];
    }
    let (r1, r2) = (q / a, c / q);
    let mut roots: Vec<f64> = [r1, r2].into_iter().filter(|r| r.is_finite()).collect();
    roots.sort_by(f64::total_cmp);
    roots
}

/// All intersections of `ray` with `conic` at `t > SELF_HIT_EPS`, nearest
/// first. A hyperbola restricted to one branch only reports hits on it.
pub fn intersect_ray(conic: &Conic, ray: &Ray) -> Vec<(f64, Point)> {
    let pl = conic.placement();
    let o = pl.to_canonical(ray.origin);
    let d = pl.dir_to_canonical(ray.dir);
    let (dx, dy) = (d.dx(), d.dy());
    let (qa, qb, qc) = match conic.shape() {
        Shape::Ellipse(e) => {
            let (ia, ib) = (1.0 / (e.a() * e.a()), 1.0 / (e.b() * e.b()));
            (
                dx * dx * ia + dy * dy * ib,
                2.0 * (o.x * dx * ia + o.y * dy * ib),
                o.x * o.x * ia + o.y * o.y * ib - 1.0,
            )
        }
        Shape::Parabola(p) => {
            let k = 1.0 / (4.0 * p.p());
            (dx * dx * k, 2.0 * o.x * dx * k - dy, o.x * o.x * k - o.y)
        }
        Shape::Hyperbola(h) => {
            let (ia, ib) = (1.0 / (h.a() * h.a()), 1.0 / (h.b() * h.b()));
            (
                dx * dx * ia - dy * dy * ib,
                2.0 * (o.x * dx * ia - o.y * dy * ib),
                o.x * o.x * ia - o.y * o.y * ib - 1.0,
            )
        }
    };

    let mut roots = solve_quadratic(qa, qb, qc);
    if roots.len() == 2 && roots[1] - roots[0] < ROOT_MERGE_TOL {
        roots = vec![0.5 * (roots[0] + roots[1])];
    } else {
        // One Newton step on the quadratic tightens each simple root.
        for t in roots.iter_mut() {
            let f = (qa * *t + qb) * *t + qc;
            let df = 2.0 * qa * *t + qb;
            if df != 0.0 {
                let nt = *t - f / df;
                if nt.is_finite() {
                    *t = nt;
                }
            }
        }
    }

    let branch = conic.branch();
    roots
        .into_iter()
        .filter(|&t| t > SELF_HIT_EPS)
        .filter(|&t| match (conic.shape(), branch) {
            (Shape::Hyperbola(_), Some(br)) => (o.x + t * dx) * br.sign() > 0.0,
            _ => true,
        })
        .map(|t| (t, ray.at(t)))
        .collect()
}

/// Reflects `incoming` off the tangent line at the on-curve point `q`.
pub fn reflect_at(conic: &Conic, q: Point, incoming: Direction) -> Result<Direction> {
    reflect_at_with_tol(conic, q, incoming, ON_CURVE_TOL)
}

pub fn reflect_at_with_tol(conic: &Conic, q: Point, incoming: Direction, tol: f64) -> Result<Direction> {
    let tangent = conic.tangent_line(q, tol)?;
    Ok(reflect_direction(incoming, &tangent))
}

/// Angular miss of the textbook focal property at `q`, in radians.
///
/// * ellipse: a beam from F1 must leave towards F2;
/// * parabola: a beam parallel to the axis, travelling towards the vertex,
///   must leave towards the focus;
/// * hyperbola: a beam from F1 must leave directly away from F2.
pub fn focal_property_error(conic: &Conic, q: Point) -> Result<f64> {
    let unit = |v| Direction::from_vec(v).map_err(|_| Error::AnchorAtFocus);
    let (incoming, expected) = match conic.shape() {
        Shape::Ellipse(_) => {
            let [f1, f2] = conic.focus_pair("focal_property_error")?;
            (unit(q - f1)?, unit(f2 - q)?)
        }
        Shape::Parabola(_) => {
            let focus = conic.foci()[0];
            let down = -conic.placement().dir_to_world(Direction::Y);
            (down, unit(focus - q)?)
        }
        Shape::Hyperbola(_) => {
            let [f1, f2] = conic.focus_pair("focal_property_error")?;
            (unit(q - f1)?, unit(q - f2)?)
        }
    };
    let out = reflect_at(conic, q, incoming)?;
    Ok(angle_between(out, expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conics::Branch;

    fn ray(ox: f64, oy: f64, dx: f64, dy: f64) -> Ray {
        Ray::new(Point::xy(ox, oy), Direction::new(dx, dy).unwrap())
    }

    #[test]
    fn quadratic_is_stable() {
        // x^2 - 1e8 x + 1 has roots ~1e8 and ~1e-8; the naive formula loses
        // the small one entirely.
        let r = solve_quadratic(1.0, -1e8, 1.0);
        assert!((r[0] - 1e-8).abs() < 1e-22);
        assert!((r[1] - 1e8).abs() < 1e-6);
        assert_eq!(solve_quadratic(1.0, 0.0, 1.0), Vec::<f64>::new());
        assert_eq!(solve_quadratic(0.0, 2.0, -4.0), vec![2.0]);
        assert_eq!(solve_quadratic(1.0, 0.0, 0.0), vec![0.0, 0.0]);
    }

    #[test]
    fn ellipse_focus_ray_hits_top() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let hits = intersect_ray(&e, &ray(-4.0, 0.0, 4.0, 3.0));
        assert_eq!(hits.len(), 1);
        let (t, p) = hits[0];
        assert!((t - 5.0).abs() < 1e-12);
        assert!(p.x.abs() < 1e-12 && (p.y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn parabola_vertical_ray() {
        let p = Conic::parabola(1.0).unwrap();
        let hits = intersect_ray(&p, &ray(2.0, 5.0, 0.0, -1.0));
        assert_eq!(hits.len(), 1);
        assert!((hits[0].1.y - 1.0).abs() < 1e-15 && hits[0].1.x == 2.0);
    }

    #[test]
    fn tangent_ray_is_merged() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let hits = intersect_ray(&e, &ray(-9.0, 3.0, 1.0, 0.0));
        assert_eq!(hits.len(), 1);
        assert!(hits[0].1.x.abs() < 1e-7 && (hits[0].1.y - 3.0).abs() == 0.0);
        assert_eq!(intersect_ray(&e, &ray(-9.0, 3.0 + 1e-6, 1.0, 0.0)).len(), 0);
        assert_eq!(intersect_ray(&e, &ray(-9.0, 3.0 - 1e-6, 1.0, 0.0)).len(), 2);
    }

    #[test]
    fn branch_filter() {
        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        let r = ray(-10.0, 0.0, 1.0, 0.0);
        assert_eq!(intersect_ray(&h, &r).len(), 2);
        let pos = intersect_ray(&h.with_branch(Branch::Positive), &r);
        assert_eq!(pos.len(), 1);
        assert!((pos[0].1.x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn reflect_at_examples() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let out = reflect_at(&e, Point::xy(0.0, 3.0), Direction::new(0.8, 0.6).unwrap()).unwrap();
        assert!((out.dx() - 0.8).abs() < 1e-15 && (out.dy() + 0.6).abs() < 1e-15);

        // Gradient (2x, -4p) = (4, -4) at (2, 1): tangent is (1, 1)/sqrt 2.
        let p = Conic::parabola(1.0).unwrap();
        let out = reflect_at(&p, Point::xy(2.0, 1.0), -Direction::Y).unwrap();
        assert!((out.dx() + 1.0).abs() < 1e-15 && out.dy().abs() < 1e-15);

        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        let out = reflect_at(&h, Point::xy(3.0, 0.0), Direction::X).unwrap();
        assert!((out.dx() + 1.0).abs() < 1e-15 && out.dy().abs() < 1e-15);
    }

    #[test]
    fn focal_properties() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        assert!(focal_property_error(&e, Point::xy(0.0, 3.0)).unwrap() < 1e-12);
        let c = Conic::ellipse(2.0, 2.0).unwrap();
        assert!(focal_property_error(&c, c.point_at(0.7)).unwrap() < 1e-15);
        let p = Conic::parabola(0.5).unwrap();
        assert!(focal_property_error(&p, p.point_at(-1.3)).unwrap() < 1e-12);
        let h = Conic::hyperbola(1.0, 2.0).unwrap();
        assert!(focal_property_error(&h, h.point_at_branch(0.4, Branch::Negative)).unwrap() < 1e-12);
        assert!(matches!(focal_property_error(&e, Point::xy(0.0, 3.5)), Err(Error::OffCurve { .. })));
    }
}
