//! Standard sweep anchors: eight non-vertex curve parameters per conic
//! family, read from `fixtures/anchors.json`.

use serde::Deserialize;

use crate::conics::{Branch, Conic};
use crate::error::{Error, Result};
use crate::geometry::Point;

const ANCHORS_JSON: &str = include_str!("../fixtures/anchors.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    delta0: f64,
    halvings: usize,
    families: Vec<FamilyEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyEntry {
    kind: String,
    a: Option<f64>,
    b: Option<f64>,
    p: Option<f64>,
    anchors: Vec<AnchorEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnchorEntry {
    t: f64,
    branch: Option<Branch>,
}

#[derive(Debug, Clone)]
pub struct Anchor {
    pub t: f64,
    pub branch: Branch,
    pub point: Point,
}

#[derive(Debug, Clone)]
pub struct Family {
    pub conic: Conic,
    pub anchors: Vec<Anchor>,
}

#[derive(Debug, Clone)]
pub struct StandardAnchors {
    pub delta0: f64,
    pub halvings: usize,
    pub families: Vec<Family>,
}

fn need(v: Option<f64>, name: &str, kind: &str) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidConfig(format!("{kind} fixture needs `{name}`")))
}

/// Parses the bundled fixture file.
pub fn standard_anchors() -> Result<StandardAnchors> {
    let file: FixtureFile =
        serde_json::from_str(ANCHORS_JSON).map_err(|e| Error::InvalidConfig(format!("anchor fixture: {e}")))?;
    let families = file
        .families
        .into_iter()
        .map(|f| {
            let conic = match f.kind.as_str() {
                "ellipse" => Conic::ellipse(need(f.a, "a", "ellipse")?, need(f.b, "b", "ellipse")?)?,
                "parabola" => Conic::parabola(need(f.p, "p", "parabola")?)?,
                "hyperbola" => Conic::hyperbola(need(f.a, "a", "hyperbola")?, need(f.b, "b", "hyperbola")?)?,
                other => return Err(Error::InvalidConfig(format!("unknown fixture kind `{other}`"))),
            };
            let anchors = f
                .anchors
                .into_iter()
                .map(|a| {
                    let branch = a.branch.unwrap_or(Branch::Positive);
                    Anchor {
                        t: a.t,
                        branch,
                        point: conic.point_at_branch(a.t, branch),
                    }
                })
                .collect();
            Ok(Family { conic, anchors })
        })
        .collect::<Result<_>>()?;
    Ok(StandardAnchors {
        delta0: file.delta0,
        halvings: file.halvings,
        families,
    })
}
