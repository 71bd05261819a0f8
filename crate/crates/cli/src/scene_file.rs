//! JSON scene description.
//!
//! ```json
//! {
//!   "conics": [
//!     { "kind": "parabola", "parameters": { "p": 1.0 },
//!       "placement": { "translate": [0.0, 0.0], "rotate": 0.0 },
//!       "role": "primary", "aperture": [0.1, 1.0] }
//!   ],
//!   "rays": [ { "origin": [0.5, 10.0], "dir": [0.0, -1.0] } ],
//!   "options": { "tol": 1e-9, "max_bounces": 8,
//!                "spot": { "n_rays": 100, "aperture": 1.0 } }
//! }
//! ```
//!
//! Unknown keys are rejected at every level.

use conicray::optics::{Aperture, Mirror, Ray, Role, Scene};
use conicray::{Branch, Conic, Direction, Ellipse, Hyperbola, Parabola, Placement, Point, Shape, ON_CURVE_TOL};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_MAX_BOUNCES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub conics: Vec<ConicEntry>,
    #[serde(default)]
    pub rays: Vec<RayEntry>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ellipse,
    Parabola,
    Hyperbola,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicEntry {
    pub kind: Kind,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<PlacementEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    /// `[inner, outer]` bounds of the lateral coordinate that reflects.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aperture: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlacementEntry {
    #[serde(default)]
    pub translate: [f64; 2],
    #[serde(default)]
    pub rotate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayEntry {
    pub origin: [f64; 2],
    pub dir: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_bounces")]
    pub max_bounces: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spot: Option<SpotOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpotOptions {
    pub n_rays: usize,
    pub aperture: f64,
}

fn default_tol() -> f64 {
    ON_CURVE_TOL
}

fn default_bounces() -> usize {
    DEFAULT_MAX_BOUNCES
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: default_tol(),
            max_bounces: default_bounces(),
            spot: None,
        }
    }
}

/// A validated scene ready to trace.
#[derive(Debug, Clone)]
pub struct LoadedScene {
    pub scene: Scene,
    pub rays: Vec<Ray>,
    pub options: Options,
}

fn finite(label: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Scene(format!("{label} must be finite")))
    }
}

fn point(label: &str, v: [f64; 2]) -> Result<Point, CliError> {
    Ok(Point::xy(finite(label, v[0])?, finite(label, v[1])?))
}

impl Parameters {
    fn require(&self, kind: Kind, index: usize) -> Result<Shape, CliError> {
        let ctx = |msg: String| CliError::Scene(format!("conics[{index}]: {msg}"));
        let get = |v: Option<f64>, name: &str| {
            let v = v.ok_or_else(|| ctx(format!("{kind:?} needs parameter `{name}`").to_lowercase()))?;
            finite(name, v).map_err(|e| ctx(e.to_string()))
        };
        let forbid = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(ctx(format!("parameter `{name}` does not apply to a {}", kind.name()))),
            None => Ok(()),
        };
        let shape = match kind {
            Kind::Ellipse => {
                forbid(self.p, "p")?;
                Shape::Ellipse(Ellipse::new(get(self.a, "a")?, get(self.b, "b")?).map_err(|e| ctx(e.to_string()))?)
            }
            Kind::Parabola => {
                forbid(self.a, "a")?;
                forbid(self.b, "b")?;
                Shape::Parabola(Parabola::new(get(self.p, "p")?).map_err(|e| ctx(e.to_string()))?)
            }
            Kind::Hyperbola => {
                forbid(self.p, "p")?;
                Shape::Hyperbola(Hyperbola::new(get(self.a, "a")?, get(self.b, "b")?).map_err(|e| ctx(e.to_string()))?)
            }
        };
        Ok(shape)
    }
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Ellipse => "ellipse",
            Kind::Parabola => "parabola",
            Kind::Hyperbola => "hyperbola",
        }
    }
}

impl ConicEntry {
    pub fn to_mirror(&self, index: usize) -> Result<Mirror, CliError> {
        let shape = self.parameters.require(self.kind, index)?;
        let placement = match &self.placement {
            Some(pl) => Placement::new(point("translate", pl.translate)?, finite("rotate", pl.rotate)?)
                .map_err(|e| CliError::Scene(e.to_string()))?,
            None => Placement::IDENTITY,
        };
        let mut conic = Conic::new(shape, placement);
        if let Some(br) = self.branch {
            if self.kind != Kind::Hyperbola {
                return Err(CliError::Scene(format!("conics[{index}]: `branch` only applies to a hyperbola")));
            }
            conic = conic.with_branch(br);
        }
        let mut mirror = Mirror::new(conic, self.role.unwrap_or_default());
        if let Some([inner, outer]) = self.aperture {
            let ap = Aperture::new(inner, outer).map_err(|e| CliError::Scene(format!("conics[{index}]: {e}")))?;
            mirror = mirror.with_aperture(ap);
        }
        Ok(mirror)
    }
}

impl SceneFile {
    /// Parses a scene document. Syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let (line, column) = (e.line(), e.column());
            let full = e.to_string();
            let message = full
                .strip_suffix(&format!(" at line {line} column {column}"))
                .unwrap_or(&full)
                .to_string();
            CliError::Parse { line, column, message }
        })
    }

    /// Shortest round-trip float formatting, so re-parsing is exact.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene documents always serialize")
    }

    pub fn load(&self) -> Result<LoadedScene, CliError> {
        let mirrors = self
            .conics
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_mirror(i))
            .collect::<Result<Vec<_>, _>>()?;
        let rays = self
            .rays
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let origin = point("ray origin", r.origin)?;
                let dir = Direction::new(r.dir[0], r.dir[1])
                    .map_err(|e| CliError::Scene(format!("rays[{i}]: {e}")))?;
                Ok(Ray::new(origin, dir))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let o = &self.options;
        if !(o.tol.is_finite() && o.tol > 0.0) {
            return Err(CliError::Scene("options.tol must be positive".into()));
        }
        if o.max_bounces == 0 {
            return Err(CliError::Scene("options.max_bounces must be at least 1".into()));
        }
        if let Some(spot) = &o.spot {
            if spot.n_rays == 0 || !(spot.aperture.is_finite() && spot.aperture > 0.0) {
                return Err(CliError::Scene("options.spot needs n_rays >= 1 and a positive aperture".into()));
            }
        }
        Ok(LoadedScene {
            scene: Scene::new(mirrors),
            rays,
            options: o.clone(),
        })
    }
}
