//! Minimal SVG 1.1 writer with a y-up world frame.
//!
//! World `(x, y)` is written as `(x, -y)` and the viewBox is the world
//! bounds (plus a 10% margin) in that flipped frame. Coordinates use six
//! decimals so output is byte-stable.

use std::fmt::Write;

use conicray::{Branch, Conic, Point, Shape};

pub const CURVE_SAMPLES: usize = 512;
const MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn around(points: &[Point]) -> Self {
        let mut b = Bounds {
            xmin: f64::INFINITY,
            xmax: f64::NEG_INFINITY,
            ymin: f64::INFINITY,
            ymax: f64::NEG_INFINITY,
        };
        for p in points {
            b.xmin = b.xmin.min(p.x);
            b.xmax = b.xmax.max(p.x);
            b.ymin = b.ymin.min(p.y);
            b.ymax = b.ymax.max(p.y);
        }
        b
    }

    /// Grows the box by `MARGIN` of its larger side on every edge.
    pub fn with_margin(self) -> Self {
        let m = MARGIN * (self.xmax - self.xmin).max(self.ymax - self.ymin).max(1e-9);
        Bounds {
            xmin: self.xmin - m,
            xmax: self.xmax + m,
            ymin: self.ymin - m,
            ymax: self.ymax + m,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    fn radius_from(&self, c: Point) -> f64 {
        [
            Point::xy(self.xmin, self.ymin),
            Point::xy(self.xmin, self.ymax),
            Point::xy(self.xmax, self.ymin),
            Point::xy(self.xmax, self.ymax),
        ]
        .iter()
        .map(|q| q.distance(c))
        .fold(0.0, f64::max)
    }
}

pub struct Svg {
    view: Bounds,
    width: u32,
    height: u32,
    body: String,
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

impl Svg {
    /// `view` is used as given; call [`Bounds::with_margin`] first if needed.
    pub fn new(view: Bounds, width: u32, height: u32) -> Self {
        Svg {
            view,
            width,
            height,
            body: String::new(),
        }
    }

    pub fn view(&self) -> Bounds {
        self.view
    }

    fn stroke(&self) -> f64 {
        0.004 * (self.view.xmax - self.view.xmin).max(self.view.ymax - self.view.ymin)
    }

    fn xy(p: Point) -> String {
        format!("{},{}", num(p.x), num(-p.y))
    }

    pub fn polyline(&mut self, class: &str, points: &[Point]) {
        if points.len() < 2 {
            return;
        }
        let pts: Vec<String> = points.iter().map(|&p| Self::xy(p)).collect();
        writeln!(self.body, r#"  <polyline class="{class}" fill="none" points="{}"/>"#, pts.join(" ")).unwrap();
    }

    pub fn polygon(&mut self, class: &str, points: &[Point]) {
        let pts: Vec<String> = points.iter().map(|&p| Self::xy(p)).collect();
        writeln!(self.body, r#"  <polygon class="{class}" points="{}"/>"#, pts.join(" ")).unwrap();
    }

    pub fn line(&mut self, class: &str, a: Point, b: Point) {
        writeln!(
            self.body,
            r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            num(a.x),
            num(-a.y),
            num(b.x),
            num(-b.y)
        )
        .unwrap();
    }

    pub fn dot(&mut self, class: &str, p: Point) {
        let r = 2.0 * self.stroke();
        writeln!(self.body, r#"  <circle class="{class}" cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(-p.y), num(r))
            .unwrap();
    }

    pub fn label(&mut self, p: Point, text: &str) {
        let size = 12.0 * self.stroke();
        writeln!(
            self.body,
            r#"  <text class="label" x="{}" y="{}" font-size="{}">{}</text>"#,
            num(p.x + self.stroke() * 3.0),
            num(-p.y - self.stroke() * 3.0),
            num(size),
            esc(text)
        )
        .unwrap();
    }

    /// Line through `p` along `dir`, clipped to the view.
    pub fn infinite_line(&mut self, class: &str, p: Point, dir: conicray::Direction) {
        let r = self.view.radius_from(p);
        let d = dir.to_vec();
        let seg: Vec<Point> = (0..=CURVE_SAMPLES)
            .map(|i| p + (-r + 2.0 * r * i as f64 / CURVE_SAMPLES as f64) * d)
            .collect();
        for run in clip_runs(&seg, &self.view) {
            self.line(class, run[0], run[run.len() - 1]);
        }
    }

    /// Samples every active branch of `conic` with [`CURVE_SAMPLES`] points
    /// over the part visible in the view, one polyline per visible run.
    pub fn conic(&mut self, conic: &Conic) {
        for branch in branches(conic) {
            for run in sample_branch(conic, branch, &self.view) {
                self.polyline("curve", &run);
            }
        }
    }

    pub fn finish(&self) -> String {
        let v = self.view;
        let sw = self.stroke();
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
            self.width,
            self.height,
            num(v.xmin),
            num(-v.ymax),
            num(v.xmax - v.xmin),
            num(v.ymax - v.ymin)
        )
        .unwrap();
        writeln!(
            out,
            "  <style>.curve{{stroke:#1f4e9a;stroke-width:{w}}} .focus{{fill:#c0392b}} \
             .directrix{{stroke:#7f8c8d;stroke-width:{w};stroke-dasharray:{d}}} \
             .triangle{{fill:none;stroke:#27ae60;stroke-width:{w}}} .reflector{{stroke:#8e44ad;stroke-width:{w}}} \
             .beam{{stroke:#e67e22;stroke-width:{w};fill:none}} .projection{{stroke:#16a085;stroke-width:{w};stroke-dasharray:{d}}} \
             .vertex{{fill:#27ae60}} .label{{font-family:sans-serif;fill:#222}}</style>",
            w = num(sw),
            d = num(4.0 * sw)
        )
        .unwrap();
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn branches(conic: &Conic) -> Vec<Branch> {
    match (conic.shape(), conic.branch()) {
        (Shape::Hyperbola(_), Some(b)) => vec![b],
        (Shape::Hyperbola(_), None) => vec![Branch::Positive, Branch::Negative],
        _ => vec![Branch::Positive],
    }
}

/// Maximal runs of consecutive points inside `view`.
fn clip_runs(points: &[Point], view: &Bounds) -> Vec<Vec<Point>> {
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for &p in points {
        if view.contains(p) {
            cur.push(p);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs.retain(|r| r.len() >= 2);
    runs
}

fn sample_branch(conic: &Conic, branch: Branch, view: &Bounds) -> Vec<Vec<Point>> {
    let at = |t: f64| conic.point_at_branch(t, branch);
    let (t0, t1) = match conic.shape() {
        Shape::Ellipse(_) => (0.0, std::f64::consts::TAU),
        _ => {
            // Widen the window until both ends leave the view.
            let reach = view.radius_from(conic.placement().translation);
            let mut t = 1.0;
            while t < 1e6 {
                let far = |s: f64| at(s).distance(conic.placement().translation) > reach;
                if far(t) && far(-t) {
                    break;
                }
                t *= 2.0;
            }
            // Tighten to the visible span found on a fine probe grid.
            let probe = 8 * CURVE_SAMPLES;
            let ts: Vec<f64> = (0..=probe).map(|i| -t + 2.0 * t * i as f64 / probe as f64).collect();
            let vis: Vec<usize> = (0..=probe).filter(|&i| view.contains(at(ts[i]))).collect();
            match (vis.first(), vis.last()) {
                (Some(&lo), Some(&hi)) => (ts[lo], ts[hi]),
                _ => return Vec::new(),
            }
        }
    };
    let pts: Vec<Point> = (0..CURVE_SAMPLES)
        .map(|i| {
            let closed = matches!(conic.shape(), Shape::Ellipse(_));
            let n = if closed { CURVE_SAMPLES } else { CURVE_SAMPLES - 1 };
            at(t0 + (t1 - t0) * i as f64 / n as f64)
        })
        .collect();
    let mut runs = clip_runs(&pts, view);
    if matches!(conic.shape(), Shape::Ellipse(_)) && runs.len() == 1 && runs[0].len() == CURVE_SAMPLES {
        let first = runs[0][0];
        runs[0].push(first);
    }
    runs
}
