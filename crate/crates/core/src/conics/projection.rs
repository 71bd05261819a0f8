//! Nearest-point projection onto a conic.
//!
//! A coarse parameter grid locates every basin of the squared distance,
//! then a Newton iteration on the foot-of-normal condition
//! `g(t) = (P(t) - q) . P'(t) = 0` refines each one. Newton steps that leave
//! the current sign-change bracket fall back to bisection, so the iteration
//! cannot wander off near high-curvature vertices.

use std::f64::consts::TAU;

use super::{Branch, Conic, Shape};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Grid samples per parameter window.
pub const PROJECTION_GRID: usize = 257;
/// Newton iteration cap per basin.
pub const PROJECTION_MAX_ITER: usize = 64;

struct Window {
    lo: f64,
    hi: f64,
    periodic: bool,
}

impl Conic {
    /// Nearest point on the curve to `q`.
    ///
    /// Unrestricted hyperbolas search both branches. Fails with
    /// [`Error::NoConvergence`] rather than return an unrefined point.
    pub fn project_to_curve(&self, q: Point) -> Result<Point> {
        if !q.is_finite() {
            return Err(Error::NonFinite("point"));
        }
        let local = self.placement.to_canonical(q);
        let mut best: Option<(f64, Point)> = None;
        for &branch in self.active_branches() {
            let window = self.shape.window(local, branch);
            let (dist, foot) = project_window(&self.shape, local, branch, &window)?;
            if best.is_none_or(|(d, _)| dist < d) {
                best = Some((dist, foot));
            }
        }
        let (_, foot) = best.expect("at least one branch is always active");
        Ok(self.placement.to_world(foot))
    }

    /// Distance from `q` to the curve.
    pub fn distance_to_curve(&self, q: Point) -> Result<f64> {
        Ok(q.distance(self.project_to_curve(q)?))
    }
}

impl Shape {
    /// A parameter range guaranteed to contain the nearest point.
    ///
    /// For the open curves the distance `d0` to one explicit curve point
    /// bounds the search: the foot lies within `d0` of `q`, which bounds the
    /// parameter through the x (parabola) or y (hyperbola) coordinate.
    fn window(&self, q: Point, branch: Branch) -> Window {
        match self {
            Shape::Ellipse(_) => Window {
                lo: 0.0,
                hi: TAU,
                periodic: true,
            },
            Shape::Parabola(_) => {
                let d0 = min_reach(q, q.distance(self.point_at(q.x, branch)));
                Window {
                    lo: q.x - d0,
                    hi: q.x + d0,
                    periodic: false,
                }
            }
            Shape::Hyperbola(h) => {
                let d0 = min_reach(q, q.distance(self.point_at((q.y / h.b).asinh(), branch)));
                Window {
                    lo: ((q.y - d0) / h.b).asinh(),
                    hi: ((q.y + d0) / h.b).asinh(),
                    periodic: false,
                }
            }
        }
    }

    /// `g(t)` and `g'(t)` for the half squared distance `|P(t) - q|^2 / 2`.
    fn foot_condition(&self, q: Point, t: f64, branch: Branch) -> (f64, f64) {
        let r = self.point_at(t, branch) - q;
        let (d1, d2) = self.derivatives(t, branch);
        (r.dot(d1), d1.dot(d1) + r.dot(d2))
    }
}

/// Keeps the window wide enough to bracket the foot when `q` is on or
/// within rounding of the curve.
fn min_reach(q: Point, d0: f64) -> f64 {
    d0.max(1e-6 * (1.0 + q.to_vec().norm()))
}

fn project_window(shape: &Shape, q: Point, branch: Branch, w: &Window) -> Result<(f64, Point)> {
    let n = PROJECTION_GRID;
    let step = if w.periodic {
        (w.hi - w.lo) / n as f64
    } else {
        (w.hi - w.lo) / (n - 1) as f64
    };
    if step == 0.0 {
        // q is on the curve exactly at the window centre.
        let t = w.lo;
        let p = shape.point_at(t, branch);
        return Ok((q.distance(p), p));
    }
    let ts: Vec<f64> = (0..n).map(|i| w.lo + step * i as f64).collect();
    let ds: Vec<f64> = ts
        .iter()
        .map(|&t| q.distance(shape.point_at(t, branch)))
        .collect();

    let mut best: Option<(f64, Point)> = None;
    for i in 0..n {
        let (prev, next) = if w.periodic {
            ((i + n - 1) % n, (i + 1) % n)
        } else {
            (i.saturating_sub(1), (i + 1).min(n - 1))
        };
        if ds[i] > ds[prev] || ds[i] > ds[next] {
            continue;
        }
        let edge = !w.periodic && (i == 0 || i == n - 1);
        let t = match refine(shape, q, branch, ts[i] - step, ts[i], ts[i] + step) {
            Ok(t) => t,
            // The distance can keep falling past the window edge, towards
            // points farther than the known bound; not a foot.
            Err(_) if edge => continue,
            Err(e) => return Err(e),
        };
        let p = shape.point_at(t, branch);
        let d = q.distance(p);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, p));
        }
    }
    best.ok_or(Error::NoConvergence {
        what: "projection grid search",
        iterations: 0,
    })
}

/// Safeguarded Newton on `g(t) = 0` inside `[lo, hi]`, starting at `t0`.
fn refine(shape: &Shape, q: Point, branch: Branch, lo: f64, t0: f64, hi: f64) -> Result<f64> {
    let g = |t| shape.foot_condition(q, t, branch);
    let (mut lo, mut hi) = (lo, hi);
    let (glo, ghi) = (g(lo).0, g(hi).0);
    if glo == 0.0 {
        return Ok(lo);
    }
    if ghi == 0.0 {
        return Ok(hi);
    }
    if glo > 0.0 || ghi < 0.0 {
        // The grid point is a plateau or an endpoint minimum; settle for
        // the best of the three samples only if g vanishes there.
        let (g0, _) = g(t0);
        if g0 == 0.0 {
            return Ok(t0);
        }
        return Err(Error::NoConvergence {
            what: "projection bracket",
            iterations: 0,
        });
    }

    let mut t = t0;
    for _ in 0..PROJECTION_MAX_ITER {
        let (gt, dg) = g(t);
        if gt == 0.0 {
            return Ok(t);
        }
        if gt < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let newton = t - gt / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * (1.0 + t.abs()) || hi - lo <= f64::EPSILON * (1.0 + t.abs()) {
            return Ok(next);
        }
        t = next;
    }
    Err(Error::NoConvergence {
        what: "projection Newton iteration",
        iterations: PROJECTION_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{angle_between, Direction};

    #[test]
    fn ellipse_minor_axis() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let p = e.project_to_curve(Point::xy(0.0, 4.0)).unwrap();
        assert!(p.x.abs() < 1e-12 && (p.y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn parabola_below_vertex() {
        let c = Conic::parabola(1.0).unwrap();
        let p = c.project_to_curve(Point::xy(0.0, -0.5)).unwrap();
        assert!(p.x.abs() < 1e-12 && p.y.abs() < 1e-12);
    }

    #[test]
    fn ellipse_apex_distance_matches_brute_force() {
        // 10^6-sample grid plus 50-digit Newton refinement.
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let d = e.distance_to_curve(Point::xy(0.08, 3.06)).unwrap();
        assert!((d - 0.060_381_261_588_501_14).abs() < 1e-14, "{d}");
    }

    #[test]
    fn foot_is_along_normal() {
        let h = Conic::hyperbola(3.0, 4.0).unwrap();
        for q in [Point::xy(5.0, 2.0), Point::xy(-7.0, -1.0), Point::xy(1.0, 9.0)] {
            let p = h.project_to_curve(q).unwrap();
            let (_, n) = h.tangent_normal(p, 1e-9).unwrap();
            let to_q = Direction::from_vec(q - p).unwrap();
            let ang = angle_between(to_q, n).min(angle_between(to_q, -n));
            assert!(ang < 1e-9, "{q:?} -> {p:?}: {ang}");
        }
    }

    #[test]
    fn ellipse_centre_goes_to_minor_vertex() {
        let e = Conic::ellipse(5.0, 3.0).unwrap();
        let p = e.project_to_curve(Point::ORIGIN).unwrap();
        assert!((p.y.abs() - 3.0).abs() < 1e-12 && p.x.abs() < 1e-12);
    }

    #[test]
    fn on_curve_points_are_fixed() {
        let p = Conic::parabola(0.7).unwrap();
        for t in [-3.0, -0.2, 0.0, 1.5] {
            let q = p.point_at(t);
            assert!(q.distance(p.project_to_curve(q).unwrap()) < 1e-9);
        }
    }
}
