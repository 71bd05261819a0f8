use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conicray::construction::{exact_return_with_tol, two_step_with_tol};
use conicray::convergence::{run_sweep, Metric, SweepConfig};
use conicray::optics::{focal_property_error, reflect_at_with_tol, Ray, TracePath};
use conicray::{Branch, Conic, Direction, Orientation, Placement, Point, Shape, ON_CURVE_TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::figure::{render, FigureId, FigureSpec};
use crate::fmt::{point, sig15};
use crate::scene_file::{LoadedScene, SceneFile};
use crate::svg::{Bounds, Svg};
use crate::{csv, read_file, write_file, Output};

#[derive(Debug, Parser)]
#[command(name = "conicray", version, about = "Two-step reflection construction on conic sections")]
pub struct Cli {
    /// On-curve tolerance for input points (scaled by 1 + conic size).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized self-checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write CSV output to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Write SVG output to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signed locus residual of a point.
    Residual {
        #[command(flatten)]
        conic: ConicArgs,
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        point: String,
    },
    /// Analytic tangent and normal at an on-curve point.
    Tangent {
        #[command(flatten)]
        conic: ConicArgs,
        #[command(flatten)]
        at: PointArgs,
    },
    /// Two equal steps from an anchor.
    Walk {
        #[command(flatten)]
        conic: ConicArgs,
        #[arg(long, allow_negative_numbers = true)]
        anchor_param: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = OrientationArg::Forward)]
        orientation: OrientationArg,
        /// Also solve for the second step length that lands on the curve.
        #[arg(long)]
        exact_return: bool,
    },
    /// Halving sweep of the construction's convergence metrics, as CSV.
    Converge {
        #[command(flatten)]
        conic: ConicArgs,
        #[arg(long, allow_negative_numbers = true)]
        anchor_param: f64,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        delta0: f64,
        #[arg(long, default_value_t = 6)]
        halvings: usize,
        /// Comma-separated subset of the metrics; all applicable by default.
        #[arg(long, value_delimiter = ',')]
        metrics: Option<Vec<Metric>>,
        #[arg(long, value_enum, default_value_t = OrientationArg::Forward)]
        orientation: OrientationArg,
    },
    /// Reflect a direction at an on-curve point, or run a seeded self-check.
    Reflect {
        #[command(flatten)]
        conic: ConicArgs,
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, value_name = "DX,DY", allow_hyphen_values = true)]
        dir: Option<String>,
        /// Check N random reflections instead (uses --seed).
        #[arg(long, value_name = "N", conflicts_with = "dir")]
        samples: Option<usize>,
    },
    /// Trace the rays of a scene file.
    Trace {
        scene: PathBuf,
    },
    /// Render one of the construction figures as SVG.
    Figure {
        id: String,
        #[command(flatten)]
        conic: ConicArgs,
        #[arg(long, allow_negative_numbers = true)]
        anchor_param: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
    },
}

#[derive(Debug, Args)]
pub struct ConicArgs {
    /// Ellipse semi-axes.
    #[arg(long, value_name = "A,B")]
    pub ellipse: Option<String>,
    /// Parabola focal distance.
    #[arg(long, value_name = "P")]
    pub parabola: Option<f64>,
    /// Hyperbola semi-axes.
    #[arg(long, value_name = "A,B")]
    pub hyperbola: Option<String>,
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    pub translate: Option<String>,
    /// Rotation in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub rotate: Option<f64>,
    /// Hyperbola branch.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true, conflicts_with = "param")]
    pub point: Option<String>,
    /// Curve parameter instead of coordinates.
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Positive,
    Negative,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Forward => Orientation::Forward,
            OrientationArg::Backward => Orientation::Backward,
        }
    }
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Positive => Branch::Positive,
            BranchArg::Negative => Branch::Negative,
        }
    }
}

fn parse_pair(flag: &str, s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--{flag} expects two comma-separated numbers, got `{s}`"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(bad());
    }
    Ok((x, y))
}

fn parse_point(flag: &str, s: &str) -> Result<Point, CliError> {
    let (x, y) = parse_pair(flag, s)?;
    Ok(Point::xy(x, y))
}

impl ConicArgs {
    /// `None` when no conic flag was given.
    fn build_optional(&self) -> Result<Option<Conic>, CliError> {
        let given = [self.ellipse.is_some(), self.parabola.is_some(), self.hyperbola.is_some()];
        match given.iter().filter(|&&g| g).count() {
            0 => {
                if self.translate.is_some() || self.rotate.is_some() || self.branch.is_some() {
                    return Err(CliError::Usage("placement flags need a conic flag".into()));
                }
                return Ok(None);
            }
            1 => {}
            _ => return Err(CliError::Usage("give exactly one of --ellipse, --parabola, --hyperbola".into())),
        }
        let mut conic = if let Some(s) = &self.ellipse {
            let (a, b) = parse_pair("ellipse", s)?;
            Conic::ellipse(a, b)?
        } else if let Some(p) = self.parabola {
            Conic::parabola(p)?
        } else {
            let (a, b) = parse_pair("hyperbola", self.hyperbola.as_deref().unwrap_or_default())?;
            Conic::hyperbola(a, b)?
        };
        if self.translate.is_some() || self.rotate.is_some() {
            let t = match &self.translate {
                Some(s) => parse_point("translate", s)?,
                None => Point::xy(0.0, 0.0),
            };
            conic = conic.with_placement(Placement::new(t, self.rotate.unwrap_or(0.0))?);
        }
        if let Some(b) = self.branch {
            if !matches!(conic.shape(), Shape::Hyperbola(_)) {
                return Err(CliError::Usage("--branch only applies to --hyperbola".into()));
            }
            conic = conic.with_branch(b.into());
        }
        Ok(Some(conic))
    }

    fn build(&self) -> Result<Conic, CliError> {
        self.build_optional()?
            .ok_or_else(|| CliError::Usage("give one of --ellipse, --parabola, --hyperbola".into()))
    }
}

fn anchor(conic: &Conic, t: f64) -> Result<Point, CliError> {
    if !t.is_finite() {
        return Err(CliError::Usage("curve parameter must be finite".into()));
    }
    Ok(conic.point_at_branch(t, conic.branch().unwrap_or(Branch::Positive)))
}

impl PointArgs {
    fn resolve(&self, conic: &Conic) -> Result<Point, CliError> {
        match (&self.point, self.param) {
            (Some(s), _) => parse_point("point", s),
            (None, Some(t)) => anchor(conic, t),
            (None, None) => Err(CliError::Usage("give --point X,Y or --param T".into())),
        }
    }
}

fn tol_for(cli: &Cli, conic: &Conic) -> Result<f64, CliError> {
    let tol = cli.tol.unwrap_or(ON_CURVE_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
    }
    Ok(tol * (1.0 + conic.scale()))
}

fn check_delta(flag: &str, delta: f64) -> Result<(), CliError> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{flag} must be positive, got {delta}")))
    }
}

fn dir_str(d: Direction) -> String {
    point(d.dx(), d.dy())
}

fn reject_flag(flag: &str, present: bool, users: &str) -> Result<(), CliError> {
    if present {
        Err(CliError::Usage(format!("--{flag} is only used by {users}")))
    } else {
        Ok(())
    }
}

pub(crate) fn execute(cli: &Cli) -> Result<Output, CliError> {
    let uses_csv = matches!(cli.command, Command::Converge { .. });
    let uses_svg = matches!(cli.command, Command::Trace { .. } | Command::Figure { .. });
    reject_flag("csv", cli.csv.is_some() && !uses_csv, "converge")?;
    reject_flag("svg", cli.svg.is_some() && !uses_svg, "trace and figure")?;
    let mut out = Output::default();
    match &cli.command {
        Command::Residual { conic, point: p } => {
            let conic = conic.build()?;
            let q = parse_point("point", p)?;
            out.line(sig15(conic.residual(q)?));
        }
        Command::Tangent { conic, at } => {
            let conic = conic.build()?;
            let q = at.resolve(&conic)?;
            let (tangent, normal) = conic.tangent_normal(q, tol_for(cli, &conic)?)?;
            out.line(format!("point {}", point(q.x, q.y)));
            out.line(format!("tangent {}", dir_str(tangent)));
            out.line(format!("normal {}", dir_str(normal)));
        }
        Command::Walk {
            conic,
            anchor_param,
            delta,
            orientation,
            exact_return,
        } => {
            check_delta("delta", *delta)?;
            let conic = conic.build()?;
            let a = anchor(&conic, *anchor_param)?;
            let tol = tol_for(cli, &conic)?;
            let tri = two_step_with_tol(&conic, a, *delta, (*orientation).into(), tol)?;
            out.line(format!("A {}", point(tri.a.x, tri.a.y)));
            out.line(format!("D {}", point(tri.d.x, tri.d.y)));
            out.line(format!("B {}", point(tri.b.x, tri.b.y)));
            out.line(format!("residual_B {}", sig15(tri.residual_b)));
            if tri.degenerate {
                out.line("notice degenerate triangle: the steps are collinear at an axis vertex, B == A");
            }
            if *exact_return {
                let er = exact_return_with_tol(&conic, a, *delta, (*orientation).into(), tol)?;
                let b = er.triangle.b;
                out.line(format!("t_star {}", sig15(er.t_star)));
                out.line(format!("B_exact {}", point(b.x, b.y)));
                out.line(format!("residual_B_exact {}", sig15(er.triangle.residual_b)));
            }
        }
        Command::Converge {
            conic,
            anchor_param,
            delta0,
            halvings,
            metrics,
            orientation,
        } => {
            check_delta("delta0", *delta0)?;
            if *halvings < 2 {
                return Err(CliError::Usage(format!("need >= 2 levels of halving, got --halvings {halvings}")));
            }
            let conic = conic.build()?;
            let a = anchor(&conic, *anchor_param)?;
            let mut cfg = SweepConfig::new(conic, a, *delta0, *halvings);
            cfg.orientation = (*orientation).into();
            if let Some(m) = metrics {
                if m.is_empty() {
                    return Err(CliError::Usage("--metrics needs at least one metric".into()));
                }
                if let Some(bad) = m.iter().find(|m| !m.applies_to(&conic)) {
                    return Err(CliError::Usage(format!("metric `{bad}` does not apply to a {}", conic.kind())));
                }
                cfg = cfg.with_metrics(m.clone());
            }
            let report = run_sweep(&cfg)?;
            if let Some((level, err)) = &report.failure {
                out.warnings.push(format!("sweep stopped at level {level}: {err}"));
            }
            let text = csv::report_csv(&report);
            match &cli.csv {
                Some(path) => {
                    write_file(path, &text)?;
                    for f in &report.fits {
                        let order = f.estimate.order().map_or("undefined".to_string(), sig15);
                        out.line(format!(
                            "empirical_order {} {} ({} ratios)",
                            f.metric,
                            order,
                            f.estimate.ratios_used()
                        ));
                    }
                }
                None => out.stdout.push_str(&text),
            }
        }
        Command::Reflect { conic, at, dir, samples } => {
            let conic = conic.build()?;
            let tol = tol_for(cli, &conic)?;
            match (dir, samples) {
                (Some(d), None) => {
                    let q = at.resolve(&conic)?;
                    let (dx, dy) = parse_pair("dir", d)?;
                    let incoming = Direction::new(dx, dy)?;
                    let outgoing = reflect_at_with_tol(&conic, q, incoming, tol)?;
                    out.line(format!("outgoing {}", dir_str(outgoing)));
                }
                (None, Some(n)) => self_check(&conic, *n, cli.seed, tol, &mut out)?,
                _ => return Err(CliError::Usage("give --dir DX,DY or --samples N".into())),
            }
        }
        Command::Trace { scene } => {
            let text = read_file(scene)?;
            let loaded = SceneFile::parse(&text)?.load()?;
            trace(cli, &loaded, &mut out)?;
        }
        Command::Figure {
            id,
            conic,
            anchor_param,
            delta,
            width,
            height,
        } => {
            let mut spec = FigureSpec::new(id.parse::<FigureId>()?);
            spec.conic = conic.build_optional()?;
            spec.anchor_param = *anchor_param;
            spec.delta = *delta;
            spec.width = *width;
            spec.height = *height;
            let svg = render(&spec)?;
            match &cli.svg {
                Some(path) => {
                    write_file(path, &svg)?;
                    out.line(format!("figure {} written to {}", spec.id, path.display()));
                }
                None => out.stdout.push_str(&svg),
            }
        }
    }
    Ok(out)
}

/// Random on-curve points and incoming directions: reflecting twice must
/// return the incoming direction, and the focal property must hold.
fn self_check(conic: &Conic, n: usize, seed: u64, tol: f64, out: &mut Output) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_involution = 0.0_f64;
    let mut max_focal = 0.0_f64;
    for _ in 0..n {
        let (t, branch) = match conic.shape() {
            Shape::Ellipse(_) => (rng.random_range(0.0..std::f64::consts::TAU), Branch::Positive),
            Shape::Parabola(p) => (rng.random_range(-4.0..4.0) * p.p(), Branch::Positive),
            Shape::Hyperbola(_) => {
                let br = match conic.branch() {
                    Some(b) => b,
                    None if rng.random_bool(0.5) => Branch::Positive,
                    None => Branch::Negative,
                };
                (rng.random_range(-2.0..2.0), br)
            }
        };
        let q = conic.point_at_branch(t, branch);
        let incoming = Direction::from_angle(rng.random_range(0.0..std::f64::consts::TAU));
        let once = reflect_at_with_tol(conic, q, incoming, tol)?;
        let twice = reflect_at_with_tol(conic, q, once, tol)?;
        let dev = (twice.dx() - incoming.dx()).abs().max((twice.dy() - incoming.dy()).abs());
        max_involution = max_involution.max(dev);
        match focal_property_error(conic, q) {
            Ok(e) => max_focal = max_focal.max(e),
            // Circles have no distinct focus pair.
            Err(conicray::Error::AnchorAtFocus) => {}
            Err(e) => return Err(e.into()),
        }
    }
    out.line(format!("samples {n}"));
    out.line(format!("seed {seed}"));
    out.line(format!("max_involution_error {}", sig15(max_involution)));
    out.line(format!("max_focal_error {}", sig15(max_focal)));
    Ok(())
}

fn path_points(ray: &Ray, path: &TracePath, reach: f64) -> Vec<Point> {
    let mut pts = vec![ray.origin];
    pts.extend(path.hits.iter().map(|h| h.point));
    pts.push(path.final_ray.at(reach));
    pts
}

fn trace(cli: &Cli, loaded: &LoadedScene, out: &mut Output) -> Result<(), CliError> {
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(CliError::Usage(format!("--tol must be positive, got {t}"))),
        Some(t) => t,
        None => loaded.options.tol,
    };
    let scene = &loaded.scene;
    let mut paths = Vec::with_capacity(loaded.rays.len());
    out.line(format!("rays {}", loaded.rays.len()));
    for (i, ray) in loaded.rays.iter().enumerate() {
        let path = scene.trace_with_tol(*ray, loaded.options.max_bounces, tol)?;
        out.line(format!("ray {i} hits {}", path.hits.len()));
        for (k, h) in path.hits.iter().enumerate() {
            out.line(format!(
                "  hit {k} mirror {} point {} dir {}",
                h.mirror,
                point(h.point.x, h.point.y),
                dir_str(h.outgoing)
            ));
        }
        let f = path.final_ray;
        out.line(format!("  final {} dir {}", point(f.origin.x, f.origin.y), dir_str(f.dir)));
        paths.push(path);
    }
    if let Some(spot) = &loaded.options.spot {
        let r = scene.cassegrain_spot(spot.n_rays, spot.aperture)?;
        out.line(format!("spot n_rays {}", r.n_rays));
        out.line(format!("spot focused {}", r.focused));
        out.line(format!("spot obstructed {}", r.obstructed));
        out.line(format!("spot missed {}", r.missed));
        out.line(format!("spot stray {}", r.stray));
        out.line(format!("spot target {}", point(r.target.x, r.target.y)));
        out.line(format!("spot max {}", sig15(r.max)));
        out.line(format!("spot rms {}", sig15(r.rms)));
        out.line(format!("spot confocal_gap {}", sig15(r.confocal_gap)));
    }
    if let Some(path) = &cli.svg {
        write_file(path, &scene_svg(loaded, &paths))?;
    }
    Ok(())
}

fn scene_svg(loaded: &LoadedScene, paths: &[TracePath]) -> String {
    let mut key: Vec<Point> = Vec::new();
    for m in &loaded.scene.mirrors {
        key.extend(m.conic.foci());
        let pl = m.conic.placement();
        let r = match m.aperture {
            Some(ap) => ap.outer,
            None => match m.conic.shape() {
                Shape::Ellipse(e) => e.a(),
                Shape::Parabola(p) => 2.0 * p.p(),
                Shape::Hyperbola(h) => h.c(),
            },
        };
        key.extend([Point::xy(-r, -r), Point::xy(r, r)].map(|q| pl.to_world(q)));
    }
    for (ray, path) in loaded.rays.iter().zip(paths) {
        key.push(ray.origin);
        key.extend(path.hits.iter().map(|h| h.point));
    }
    if key.is_empty() {
        key = vec![Point::xy(-1.0, -1.0), Point::xy(1.0, 1.0)];
    }
    let view = Bounds::around(&key).with_margin();
    let reach = 2.0 * (view.xmax - view.xmin).max(view.ymax - view.ymin);
    let mut svg = Svg::new(view, 800, 600);
    for m in &loaded.scene.mirrors {
        svg.conic(&m.conic);
        for f in m.conic.foci() {
            svg.dot("focus", f);
        }
    }
    for (ray, path) in loaded.rays.iter().zip(paths) {
        svg.polyline("beam", &path_points(ray, path, reach));
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("point", "1,-2.5").unwrap(), (1.0, -2.5));
        assert!(parse_pair("point", "1").is_err());
        assert!(parse_pair("point", "1,x").is_err());
        assert!(parse_pair("point", "inf,0").is_err());
    }
}
