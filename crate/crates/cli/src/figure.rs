//! SVG renderings of the construction on each conic.

use std::fmt;
use std::str::FromStr;

use conicray::optics::{CassegrainParams, Ray, Role, Scene};
use conicray::{
    apex_reflector, two_step, Branch, Conic, Direction, Orientation, Placement, Point, Shape, StepTriangle,
};

use crate::error::CliError;
use crate::svg::{Bounds, Svg, CURVE_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Isosceles,
    EllipseTwoStep,
    Projection,
    Parabola,
    Hyperbola,
    Cassegrain,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Isosceles,
        FigureId::EllipseTwoStep,
        FigureId::Projection,
        FigureId::Parabola,
        FigureId::Hyperbola,
        FigureId::Cassegrain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Isosceles => "isosceles",
            FigureId::EllipseTwoStep => "ellipse-two-step",
            FigureId::Projection => "projection",
            FigureId::Parabola => "parabola",
            FigureId::Hyperbola => "hyperbola",
            FigureId::Cassegrain => "cassegrain",
        }
    }

    pub fn default_delta(self) -> f64 {
        match self {
            FigureId::Isosceles => 1.0,
            FigureId::EllipseTwoStep => 0.5,
            FigureId::Projection => 0.8,
            FigureId::Parabola => 0.5,
            FigureId::Hyperbola => 1.5,
            FigureId::Cassegrain => 0.15,
        }
    }

    fn default_anchor(self) -> f64 {
        match self {
            FigureId::Isosceles => 0.0,
            FigureId::EllipseTwoStep => 2.0,
            FigureId::Projection => 2.2,
            FigureId::Parabola => 1.5,
            FigureId::Hyperbola => 0.6,
            FigureId::Cassegrain => 0.6,
        }
    }

    /// Class attributes every rendering of this figure contains.
    pub fn required_classes(self) -> &'static [&'static str] {
        match self {
            FigureId::Isosceles => &["curve", "triangle", "reflector", "beam", "label"],
            FigureId::EllipseTwoStep | FigureId::Hyperbola | FigureId::Cassegrain => {
                &["curve", "focus", "triangle", "reflector", "beam", "label"]
            }
            FigureId::Projection => &["curve", "focus", "triangle", "reflector", "beam", "projection", "label"],
            FigureId::Parabola => &["curve", "focus", "directrix", "triangle", "reflector", "beam", "label"],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        FigureId::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let ids: Vec<_> = FigureId::ALL.iter().map(|f| f.name()).collect();
            CliError::Usage(format!("unknown figure `{s}`; valid ids: {}", ids.join(", ")))
        })
    }
}

#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub id: FigureId,
    /// Overrides the figure's default curve; must be of the figure's kind.
    pub conic: Option<Conic>,
    pub anchor_param: Option<f64>,
    pub delta: Option<f64>,
    pub width: u32,
    pub height: u32,
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        FigureSpec {
            id,
            conic: None,
            anchor_param: None,
            delta: None,
            width: 800,
            height: 600,
        }
    }
}

fn default_conic(id: FigureId) -> Option<Conic> {
    let c = match id {
        FigureId::EllipseTwoStep | FigureId::Projection => Conic::ellipse(5.0, 3.0),
        FigureId::Parabola => Conic::parabola(1.0),
        FigureId::Hyperbola => Conic::hyperbola(3.0, 4.0),
        FigureId::Isosceles | FigureId::Cassegrain => return None,
    };
    Some(c.expect("default figure conics are valid"))
}

fn expected_kind(id: FigureId) -> Option<&'static str> {
    default_conic(id).map(|c| c.kind())
}

pub fn render(spec: &FigureSpec) -> Result<String, CliError> {
    let delta = spec.delta.unwrap_or(spec.id.default_delta());
    if !(delta.is_finite() && delta > 0.0) {
        return Err(CliError::Usage(format!("--delta must be positive, got {delta}")));
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(CliError::Usage("--width and --height must be positive".into()));
    }
    let t = spec.anchor_param.unwrap_or(spec.id.default_anchor());
    let conic = match (spec.conic, expected_kind(spec.id)) {
        (None, _) => default_conic(spec.id),
        (Some(c), Some(kind)) if c.kind() == kind => Some(c),
        (Some(c), expected) => {
            return Err(CliError::Usage(format!(
                "figure `{}` cannot use a {}{}",
                spec.id,
                c.kind(),
                expected.map_or(String::new(), |k| format!("; it draws a {k}"))
            )))
        }
    };
    match spec.id {
        FigureId::Isosceles => isosceles(spec, delta),
        FigureId::Cassegrain => cassegrain(spec, delta, t),
        _ => on_conic(spec, &conic.expect("figure has a conic"), delta, t),
    }
}

fn draw_construction(svg: &mut Svg, tri: &StepTriangle) -> Result<(), CliError> {
    svg.polygon("triangle", &[tri.a, tri.d, tri.b]);
    let refl = apex_reflector(tri)?;
    let half = tri.delta * refl.dir.to_vec();
    svg.line("reflector", tri.d - half, tri.d + half);
    for (p, name) in [(tri.a, "A"), (tri.d, "D"), (tri.b, "B")] {
        svg.dot("vertex", p);
        svg.label(p, name);
    }
    Ok(())
}

fn isosceles(spec: &FigureSpec, delta: f64) -> Result<String, CliError> {
    // Apex at the origin, base below it; the circle of radius delta about
    // the apex passes through both base points.
    let d = Point::xy(0.0, 0.0);
    let half_angle = 0.95_f64;
    let (s, c) = half_angle.sin_cos();
    let a = Point::xy(-delta * s, -delta * c);
    let b = Point::xy(delta * s, -delta * c);
    let tri = StepTriangle {
        a,
        d,
        b,
        delta,
        residual_b: 0.0,
        leg1: Direction::new(s, c)?,
        leg2: Direction::new(s, -c)?,
        orientation: Orientation::Forward,
        degenerate: false,
    };
    let circle = Conic::ellipse(delta, delta)?.with_placement(Placement::new(d, 0.0)?);
    let view = Bounds::around(&[
        Point::xy(-1.6 * delta, -1.3 * delta),
        Point::xy(1.6 * delta, 1.3 * delta),
    ])
    .with_margin();
    let mut svg = Svg::new(view, spec.width, spec.height);
    svg.conic(&circle);
    draw_construction(&mut svg, &tri)?;
    // Incoming beam along leg 1 and its reflection along leg 2.
    let back = tri.a - 0.5 * delta * tri.leg1.to_vec();
    svg.polyline("beam", &[back, tri.d, tri.b]);
    Ok(svg.finish())
}

fn beam_points(conic: &Conic, tri: &StepTriangle, view: &Bounds) -> Vec<Vec<Point>> {
    let span = (view.xmax - view.xmin).max(view.ymax - view.ymin);
    match conic.shape() {
        Shape::Ellipse(_) => {
            let [f1, f2] = conic.focus_pair("figure").expect("ellipse has two foci");
            vec![vec![f1, tri.a, tri.d], vec![tri.d, tri.b, f2]]
        }
        Shape::Parabola(_) => {
            let focus = conic.foci()[0];
            let up = conic.placement().dir_to_world(Direction::Y).to_vec();
            vec![vec![tri.a + span * up, tri.a, tri.d], vec![tri.d, tri.b, focus]]
        }
        Shape::Hyperbola(_) => {
            let [f1, f2] = conic.focus_pair("figure").expect("hyperbola has two foci");
            let out = tri.b + 0.3 * span * tri.leg2.to_vec();
            vec![vec![f1, tri.a, tri.d], vec![f2, tri.d, tri.b, out]]
        }
    }
}

fn on_conic(spec: &FigureSpec, conic: &Conic, delta: f64, t: f64) -> Result<String, CliError> {
    let a = conic.point_at_branch(t, Branch::Positive);
    let tri = two_step(conic, a, delta, Orientation::Forward)?;
    let mut key = vec![tri.a, tri.d, tri.b];
    key.extend(conic.foci());
    let view = match conic.shape() {
        Shape::Ellipse(e) => {
            let r = e.a();
            key.extend([Point::xy(-r, -r), Point::xy(r, r)].map(|p| conic.placement().to_world(p)));
            Bounds::around(&key)
        }
        Shape::Parabola(p) => {
            let pl = conic.placement();
            key.extend([Point::xy(-3.0 * p.p(), -p.p()), Point::xy(3.0 * p.p(), 3.0 * p.p())].map(|q| pl.to_world(q)));
            Bounds::around(&key)
        }
        Shape::Hyperbola(h) => {
            let pl = conic.placement();
            let r = 1.6 * h.c();
            key.extend([Point::xy(-r, -r), Point::xy(r, r)].map(|q| pl.to_world(q)));
            Bounds::around(&key)
        }
    }
    .with_margin();
    let mut svg = Svg::new(view, spec.width, spec.height);
    svg.conic(conic);
    for f in conic.foci() {
        svg.dot("focus", f);
    }
    if let Some(dx) = conic.directrix() {
        svg.infinite_line("directrix", dx.point, dx.dir);
    }
    for beam in beam_points(conic, &tri, &view) {
        svg.polyline("beam", &beam);
    }
    if spec.id == FigureId::Projection {
        // Feet of D - A on leg 2 and of B - D on leg 1, both at distance
        // delta * cos(ADB) from D.
        let foot2 = tri.d + (tri.a - tri.d).dot(tri.leg2.to_vec()) * tri.leg2.to_vec();
        let foot1 = tri.d + (tri.b - tri.d).dot(-tri.leg1.to_vec()) * (-tri.leg1.to_vec());
        svg.line("projection", tri.a, foot2);
        svg.line("projection", tri.b, foot1);
    }
    draw_construction(&mut svg, &tri)?;
    Ok(svg.finish())
}

fn cassegrain(spec: &FigureSpec, delta: f64, anchor_x: f64) -> Result<String, CliError> {
    let params = CassegrainParams::default();
    let scene = Scene::cassegrain(&params)?;
    let (_, primary) = scene.find(Role::Primary).expect("cassegrain has a primary");
    let (_, secondary) = scene.find(Role::Secondary).expect("cassegrain has a secondary");
    let target = secondary.conic.foci()[1];
    let focus = primary.conic.foci()[0];
    let r = params.primary_radius;
    let top = focus.y + 0.4 * r;
    let view = Bounds::around(&[Point::xy(-r, target.y), Point::xy(r, top)]).with_margin();
    let mut svg = Svg::new(view, spec.width, spec.height);

    // Only the apertured parts of each mirror are drawn.
    let ap = primary.aperture.expect("primary aperture");
    for side in [-1.0, 1.0] {
        let pts: Vec<Point> = (0..CURVE_SAMPLES)
            .map(|i| {
                let x = ap.inner + (ap.outer - ap.inner) * i as f64 / (CURVE_SAMPLES - 1) as f64;
                primary.conic.point_at(side * x)
            })
            .collect();
        svg.polyline("curve", &pts);
    }
    if let Shape::Hyperbola(h) = secondary.conic.shape() {
        let tmax = (secondary.aperture.expect("secondary aperture").outer / h.b()).asinh();
        let pts: Vec<Point> = (0..CURVE_SAMPLES)
            .map(|i| {
                let t = -tmax + 2.0 * tmax * i as f64 / (CURVE_SAMPLES - 1) as f64;
                secondary.conic.point_at_branch(t, Branch::Negative)
            })
            .collect();
        svg.polyline("curve", &pts);
    }
    for f in secondary.conic.foci() {
        svg.dot("focus", f);
    }
    svg.label(focus, "F1");
    svg.label(target, "F2");

    let down = -Direction::Y;
    for k in 0..8 {
        let side = if k % 2 == 0 { 1.0 } else { -1.0 };
        let x = side * (ap.inner + 0.25 + 0.2 * (k / 2) as f64).min(ap.outer);
        let path = scene.trace(Ray::new(Point::xy(x, top), down), 4)?;
        let mut pts = vec![Point::xy(x, top)];
        pts.extend(path.hits.iter().map(|h| h.point));
        if let Some(last) = path.hits.last() {
            let reach = (target - last.point).dot(last.outgoing.to_vec()).max(0.0) * 1.05;
            pts.push(last.point + reach * last.outgoing.to_vec());
        }
        svg.polyline("beam", &pts);
    }

    let a = primary.conic.point_at(anchor_x);
    let tri = two_step(&primary.conic, a, delta, Orientation::Forward)?;
    draw_construction(&mut svg, &tri)?;
    Ok(svg.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_its_elements() {
        for id in FigureId::ALL {
            let svg = render(&FigureSpec::new(id)).unwrap();
            assert!(svg.contains("viewBox="), "{id}");
            for class in id.required_classes() {
                assert!(svg.contains(&format!("class=\"{class}\"")), "{id} lacks {class}");
            }
        }
    }

    #[test]
    fn unknown_id_lists_valid_ids() {
        let e = "spiral".parse::<FigureId>().unwrap_err().to_string();
        assert!(e.starts_with("error[usage]"));
        assert!(e.contains("isosceles") && e.contains("cassegrain"));
    }

    #[test]
    fn kind_mismatch_is_usage_error() {
        let mut spec = FigureSpec::new(FigureId::Parabola);
        spec.conic = Some(Conic::ellipse(2.0, 1.0).unwrap());
        assert!(matches!(render(&spec), Err(CliError::Usage(_))));
    }
}
