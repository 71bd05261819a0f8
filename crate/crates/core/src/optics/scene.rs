use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{intersect_ray, reflect_at_with_tol, Ray};
use crate::conics::{Branch, Conic, Hyperbola, Parabola, Placement, Shape, ON_CURVE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{Direction, Point};

/// Maximum allowed gap between the parabola focus and the hyperbola's F1 in
/// a confocal Cassegrain scene.
pub const CONFOCAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Primary,
    Secondary,
    #[default]
    Mirror,
}

/// Annulus of the mirror's lateral coordinate that reflects.
///
/// The lateral coordinate is the canonical coordinate across the axis of
/// symmetry: `|x|` for a parabola, `|y|` for an ellipse or hyperbola.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirror {
    pub conic: Conic,
    pub role: Role,
    pub aperture: Option<Aperture>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub mirrors: Vec<Mirror>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub point: Point,
    pub t: f64,
    pub outgoing: Direction,
    /// Index of the mirror in the scene.
    pub mirror: usize,
}

/// Hits in order, and the ray that finally leaves the scene. For a miss the
/// hit list is empty and `final_ray` is the input ray.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePath {
    pub hits: Vec<Hit>,
    pub final_ray: Ray,
}

/// Cassegrain layout: paraboloid-section primary with vertex at the origin
/// opening towards +y, and a hyperbolic secondary whose F1 sits on the
/// primary focus and whose F2 lies `focal_separation` further down the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CassegrainParams {
    pub focal_length: f64,
    pub focal_separation: f64,
    pub secondary_a: f64,
    pub primary_hole: f64,
    pub primary_radius: f64,
    pub secondary_radius: f64,
}

impl Default for CassegrainParams {
    fn default() -> Self {
        CassegrainParams {
            focal_length: 1.0,
            focal_separation: 1.5,
            secondary_a: 0.6,
            primary_hole: 0.1,
            primary_radius: 1.0,
            secondary_radius: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpotReport {
    pub n_rays: usize,
    /// Rays that reflected off the primary and then the secondary.
    pub focused: usize,
    /// Rays whose first hit was the secondary.
    pub obstructed: usize,
    /// Rays that never hit a mirror.
    pub missed: usize,
    /// Rays with any other hit sequence.
    pub stray: usize,
    /// Closest approach of each reflected ray's final line to the target.
    pub distances: Vec<f64>,
    pub max: f64,
    pub rms: f64,
    pub target: Point,
    /// `|primary focus - secondary F1|`.
    pub confocal_gap: f64,
}

impl Aperture {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite()) || inner < 0.0 || outer <= inner {
            return Err(Error::InvalidConfig(format!(
                "aperture needs 0 <= inner < outer, got [{inner}, {outer}]"
            )));
        }
        Ok(Aperture { inner, outer })
    }

    fn contains(&self, lateral: f64) -> bool {
        lateral >= self.inner && lateral <= self.outer
    }
}

impl Mirror {
    pub fn new(conic: Conic, role: Role) -> Self {
        Mirror {
            conic,
            role,
            aperture: None,
        }
    }

    pub fn with_aperture(mut self, aperture: Aperture) -> Self {
        self.aperture = Some(aperture);
        self
    }

    fn accepts(&self, q: Point) -> bool {
        let Some(ap) = self.aperture else {
            return true;
        };
        let local = self.conic.placement().to_canonical(q);
        let lateral = match self.conic.shape() {
            Shape::Parabola(_) => local.x.abs(),
            Shape::Ellipse(_) | Shape::Hyperbola(_) => local.y.abs(),
        };
        ap.contains(lateral)
    }
}

impl Scene {
    pub fn new(mirrors: Vec<Mirror>) -> Self {
        Scene { mirrors }
    }

    /// Confocal Cassegrain pair. Fails if the parameters do not describe a
    /// hyperbola (`focal_separation > 2 * secondary_a`) or if rounding
    /// breaks confocality beyond [`CONFOCAL_TOL`].
    pub fn cassegrain(params: &CassegrainParams) -> Result<Self> {
        let scene = Self::cassegrain_with_offset(params, 0.0)?;
        let gap = scene.confocal_gap().unwrap_or(f64::INFINITY);
        if gap > CONFOCAL_TOL {
            return Err(Error::InvalidConfig(format!("secondary is not confocal: gap {gap:e}")));
        }
        Ok(scene)
    }

    /// Cassegrain pair with the secondary shifted by `axial_offset` along
    /// the optical axis. Confocality is not enforced.
    pub fn cassegrain_with_offset(params: &CassegrainParams, axial_offset: f64) -> Result<Self> {
        let p = params.focal_length;
        let c = 0.5 * params.focal_separation;
        let a = params.secondary_a;
        if c.partial_cmp(&a) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidConfig(format!(
                "focal separation {} must exceed twice the secondary semi-axis {a}",
                params.focal_separation
            )));
        }
        let b = ((c - a) * (c + a)).sqrt();
        let primary = Conic::new(Shape::Parabola(Parabola::new(p)?), Placement::IDENTITY);
        // Rotating by -pi/2 sends canonical F1 = (-c, 0) to (0, c) above the
        // centre, so F1 lands on the primary focus.
        let centre = Point::new(0.0, p - c + axial_offset)?;
        let secondary = Conic::new(
            Shape::Hyperbola(Hyperbola::new(a, b)?),
            Placement::new(centre, -FRAC_PI_2)?,
        )
        .with_branch(Branch::Negative);
        Ok(Scene::new(vec![
            Mirror::new(primary, Role::Primary).with_aperture(Aperture::new(params.primary_hole, params.primary_radius)?),
            Mirror::new(secondary, Role::Secondary).with_aperture(Aperture::new(0.0, params.secondary_radius)?),
        ]))
    }

    pub fn find(&self, role: Role) -> Option<(usize, &Mirror)> {
        self.mirrors.iter().enumerate().find(|(_, m)| m.role == role)
    }

    /// `|primary focus - secondary F1|`, when both roles are present.
    pub fn confocal_gap(&self) -> Option<f64> {
        let (_, primary) = self.find(Role::Primary)?;
        let (_, secondary) = self.find(Role::Secondary)?;
        let focus = primary.conic.foci()[0];
        let f1 = *secondary.conic.foci().first()?;
        Some(focus.distance(f1))
    }

    /// Nearest accepted hit over all mirrors.
    fn nearest_hit(&self, ray: &Ray) -> Option<(usize, f64, Point)> {
        self.mirrors
            .iter()
            .enumerate()
            .flat_map(|(i, m)| {
                intersect_ray(&m.conic, ray)
                    .into_iter()
                    .filter(|(_, q)| m.accepts(*q))
                    .map(move |(t, q)| (i, t, q))
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    /// Bounces `ray` through the scene, nearest hit first, until it escapes
    /// or `max_bounces` reflections have happened.
    pub fn trace(&self, ray: Ray, max_bounces: usize) -> Result<TracePath> {
        self.trace_with_tol(ray, max_bounces, ON_CURVE_TOL)
    }

    /// As [`Scene::trace`], with `tol` as the on-curve tolerance for hit
    /// points (scaled by the mirror size and hit distance from the origin).
    pub fn trace_with_tol(&self, ray: Ray, max_bounces: usize, tol: f64) -> Result<TracePath> {
        if max_bounces == 0 {
            return Err(Error::InvalidConfig("max_bounces must be at least 1".into()));
        }
        let mut hits = Vec::new();
        let mut current = ray;
        while hits.len() < max_bounces {
            let Some((i, t, q)) = self.nearest_hit(&current) else {
                break;
            };
            let conic = &self.mirrors[i].conic;
            let tol = tol * (1.0 + conic.scale() + q.to_vec().norm());
            let outgoing = reflect_at_with_tol(conic, q, current.dir, tol)?;
            hits.push(Hit {
                point: q,
                t,
                outgoing,
                mirror: i,
            });
            current = Ray::new(q, outgoing);
        }
        Ok(TracePath {
            hits,
            final_ray: current,
        })
    }

    /// Traces `n_rays` beams travelling down the primary's axis and reports
    /// how closely each final segment passes the secondary's F2.
    ///
    /// A single ray is the on-axis chief ray. Larger bundles are spread
    /// evenly over the unobstructed annulus between the secondary's radius
    /// and `aperture`, alternating sides of the axis.
    pub fn cassegrain_spot(&self, n_rays: usize, aperture: f64) -> Result<SpotReport> {
        if n_rays == 0 {
            return Err(Error::InvalidConfig("n_rays must be at least 1".into()));
        }
        let (pi, primary) = self
            .find(Role::Primary)
            .ok_or_else(|| Error::InvalidConfig("scene has no primary mirror".into()))?;
        let (si, secondary) = self
            .find(Role::Secondary)
            .ok_or_else(|| Error::InvalidConfig("scene has no secondary mirror".into()))?;
        let target = secondary.conic.foci()[1];
        let obstruction = secondary.aperture.map_or(0.0, |a| a.outer);
        if aperture.is_nan() || aperture <= obstruction {
            return Err(Error::InvalidConfig(format!(
                "aperture {aperture} does not clear the secondary obstruction {obstruction}"
            )));
        }

        let pl = primary.conic.placement();
        let axis_down = -pl.dir_to_world(Direction::Y);
        let across = pl.dir_to_world(Direction::X);
        let height = 10.0 * (1.0 + primary.conic.scale() + aperture);
        let offsets: Vec<f64> = if n_rays == 1 {
            vec![0.0]
        } else {
            let width = aperture - obstruction;
            (0..n_rays)
                .map(|k| {
                    let side = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let slot = (k / 2) as f64;
                    let per_side = n_rays.div_ceil(2) as f64;
                    side * (obstruction + width * (slot + 0.5) / per_side)
                })
                .collect()
        };

        let mut report = SpotReport {
            n_rays,
            focused: 0,
            obstructed: 0,
            missed: 0,
            stray: 0,
            distances: Vec::with_capacity(n_rays),
            max: 0.0,
            rms: 0.0,
            target,
            confocal_gap: self.confocal_gap().unwrap_or(f64::NAN),
        };
        for s in offsets {
            let origin = pl.to_world(Point::xy(0.0, height)) + s * across;
            let path = self.trace(Ray::new(origin, axis_down), 2)?;
            let seq: Vec<usize> = path.hits.iter().map(|h| h.mirror).collect();
            match seq.as_slice() {
                [] => {
                    report.missed += 1;
                    continue;
                }
                [p, s] if *p == pi && *s == si => report.focused += 1,
                [s, ..] if *s == si => report.obstructed += 1,
                _ => report.stray += 1,
            }
            report.distances.push(path.final_ray.line_distance(target));
        }
        if !report.distances.is_empty() {
            report.max = report.distances.iter().cloned().fold(0.0, f64::max);
            let ss: f64 = report.distances.iter().map(|d| d * d).sum();
            report.rms = (ss / report.distances.len() as f64).sqrt();
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> Scene {
        Scene::cassegrain(&CassegrainParams::default()).unwrap()
    }

    #[test]
    fn confocal_by_construction() {
        let s = scene();
        assert!(s.confocal_gap().unwrap() <= CONFOCAL_TOL);
        let sec = s.find(Role::Secondary).unwrap().1;
        let f2 = sec.conic.foci()[1];
        assert!(f2.x.abs() < 1e-15 && (f2.y + 0.5).abs() < 1e-15);
    }

    #[test]
    fn on_axis_path_focuses() {
        let s = scene();
        let ray = Ray::new(Point::xy(0.5, 10.0), -Direction::Y);
        let path = s.trace(ray, 8).unwrap();
        assert_eq!(path.hits.len(), 2);
        let f2 = s.mirrors[1].conic.foci()[1];
        assert!(path.final_ray.line_distance(f2) < 1e-9);
    }

    #[test]
    fn bounce_cap_and_miss() {
        let s = scene();
        let ray = Ray::new(Point::xy(0.5, 10.0), -Direction::Y);
        assert_eq!(s.trace(ray, 1).unwrap().hits.len(), 1);
        let miss = Ray::new(Point::xy(3.0, 10.0), -Direction::Y);
        let path = s.trace(miss, 4).unwrap();
        assert!(path.hits.is_empty());
        assert_eq!(path.final_ray, miss);
        assert!(s.trace(ray, 0).is_err());
    }

    #[test]
    fn spot_report() {
        let s = scene();
        let r = s.cassegrain_spot(100, 1.0).unwrap();
        assert_eq!(r.focused, 100);
        assert!(r.max <= 1e-9, "{}", r.max);
        let one = s.cassegrain_spot(1, 1.0).unwrap();
        assert!(one.max <= 1e-12);
    }

    #[test]
    fn rejects_non_hyperbolic_parameters() {
        let p = CassegrainParams {
            focal_separation: 1.0,
            ..CassegrainParams::default()
        };
        assert!(Scene::cassegrain(&p).is_err());
    }
}
