use std::path::PathBuf;
use std::process::{Command, Output};

use conicray_cli::scene_file::SceneFile;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conicray"))
}

fn scene(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_error(o: &Output, class: &str) {
    assert!(!o.status.success());
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{class}]: ")), "{err}");
}

#[test]
fn residual_examples() {
    assert_eq!(stdout(&run(&["residual", "--ellipse", "5,3", "--point", "0,3"])), "0\n");
    assert_eq!(stdout(&run(&["residual", "--ellipse", "5,3", "--point", "0,0"])), "-2\n");
    assert_eq!(stdout(&run(&["residual", "--parabola", "1", "--point", "2,1"])), "0\n");
}

#[test]
fn tangent_rows() {
    let o = run(&["tangent", "--ellipse", "5,3", "--point", "0,3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("tangent 1,0") || s.contains("tangent -1,0"), "{s}");
    assert_error(&run(&["tangent", "--ellipse", "5,3", "--point", "0,3.1"]), "domain");
}

#[test]
fn walk_rows() {
    let o = run(&["walk", "--ellipse", "5,3", "--anchor-param", "1.5707963267948966", "--delta", "0.1", "--exact-return"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let row = |label: &str| {
        s.lines()
            .find_map(|l| l.strip_prefix(&format!("{label} ")))
            .unwrap_or_else(|| panic!("no {label} row in {s}"))
            .to_string()
    };
    assert!(row("A").ends_with(",3"), "{}", row("A"));
    assert!(row("B").starts_with("0.15882682037346"), "{}", row("B"));
    assert!(row("residual_B").starts_with("-2.30932242"), "{}", row("residual_B"));
    assert!(row("t_star").starts_with("0.0999679466554"), "{}", row("t_star"));
}

#[test]
fn walk_degenerate_vertex() {
    let o = run(&["walk", "--parabola", "1", "--anchor-param", "0", "--delta", "0.1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("A 0,0\n") && s.contains("B 0,0\n"), "{s}");
    assert!(s.contains("degenerate"));
}

#[test]
fn walk_rejects_negative_delta() {
    assert_error(&run(&["walk", "--ellipse", "5,3", "--anchor-param", "1", "--delta", "-1"]), "usage");
}

#[test]
fn converge_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = run(&[
        "converge", "--ellipse", "5,3", "--anchor-param", "1.5707963267948966", "--csv", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "delta,residual_B,chord_tangent_angle,apex_curve_distance,parallelism_error,exact_return_gap"
    );
    assert_eq!(lines.len(), 1 + 7 + 3);
    assert!(lines[8].starts_with("empirical_order,"));
    assert!(lines[9].starts_with("ratios_used,"));
    assert!(lines[10].starts_with("constant,"));
    for l in &lines {
        assert!(!l.ends_with(','));
        assert_eq!(l.split(',').count(), 6);
    }
    assert!(stdout(&o).contains("empirical_order residual_B"));
}

#[test]
fn converge_metric_subset_and_errors() {
    let o = run(&["converge", "--ellipse", "5,3", "--anchor-param", "1", "--metrics", "residual_B,exact_return_gap"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("delta,residual_B,exact_return_gap\n"));

    let o = run(&["converge", "--ellipse", "5,3", "--anchor-param", "1", "--halvings", "1"]);
    assert_error(&o, "usage");
    assert!(stderr(&o).contains("need >= 2 levels"));

    assert_error(&run(&["converge", "--ellipse", "5,3", "--anchor-param", "1", "--metrics", "speed"]), "usage");
    assert_error(
        &run(&["converge", "--parabola", "1", "--anchor-param", "1", "--metrics", "parallelism_error"]),
        "usage",
    );
}

#[test]
fn converge_vertex_orders_undefined() {
    let o = run(&["converge", "--parabola", "1", "--anchor-param", "0", "--metrics", "residual_B,exact_return_gap"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("empirical_order,undefined,undefined\n"), "{s}");
}

#[test]
fn reflect_single_and_samples() {
    let o = run(&["reflect", "--hyperbola", "3,4", "--point", "3,0", "--dir", "1,0"]);
    assert_eq!(stdout(&o), "outgoing -1,0\n");
    let a = run(&["reflect", "--ellipse", "2,1", "--samples", "200", "--seed", "11"]);
    let b = run(&["reflect", "--ellipse", "2,1", "--samples", "200", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed 11"));
}

#[test]
fn trace_cassegrain_spot() {
    let o = run(&["trace", scene("cassegrain.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("spot focused 100\n"), "{s}");
    let max: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("spot max "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max <= 1e-9, "{max}");
}

#[test]
fn trace_svg_and_empty_rays() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("trace.svg");
    let o = run(&["trace", scene("ellipse.json").to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("class=\"beam\""));

    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"conics": [{"kind": "parabola", "parameters": {"p": 2}}], "rays": []}"#).unwrap();
    let o = run(&["trace", empty.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "rays 0\n");
}

#[test]
fn trace_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"conics\": [\n    {\"kind\": \"circle\"}\n  ]\n}\n").unwrap();
    let o = run(&["trace", bad.to_str().unwrap()]);
    assert_error(&o, "parse");
    assert!(stderr(&o).contains("line 3, column"), "{}", stderr(&o));

    let bad = dir.path().join("unknown.json");
    std::fs::write(&bad, r#"{"conics": [], "lights": []}"#).unwrap();
    assert_error(&run(&["trace", bad.to_str().unwrap()]), "parse");

    assert_error(&run(&["trace", dir.path().join("missing.json").to_str().unwrap()]), "io");
}

#[test]
fn figure_output() {
    let o = run(&["figure", "ellipse-two-step", "--delta", "0.5"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("version=\"1.1\"") && s.contains("viewBox=\""));
    assert!(!s.contains("<script"));
    let o = run(&["figure", "spiral"]);
    assert_error(&o, "usage");
    assert!(stderr(&o).contains("ellipse-two-step"));
}

#[test]
fn usage_errors_are_one_line() {
    assert_error(&run(&[]), "usage");
    assert_error(&run(&["bogus"]), "usage");
    assert_error(&run(&["residual", "--point", "0,0"]), "usage");
    assert_error(&run(&["residual", "--ellipse", "5,3", "--parabola", "1", "--point", "0,0"]), "usage");
    assert_error(&run(&["residual", "--ellipse", "5", "--point", "0,0"]), "usage");
    assert_error(&run(&["residual", "--ellipse", "3,5", "--point", "0,0"]), "domain");
    assert_error(&run(&["residual", "--ellipse", "5,3", "--point", "0,0", "--csv", "x.csv"]), "usage");
}

#[test]
fn bundled_scenes_round_trip() {
    for name in ["ellipse.json", "cassegrain.json"] {
        let text = std::fs::read_to_string(scene(name)).unwrap();
        let parsed = SceneFile::parse(&text).unwrap();
        let again = SceneFile::parse(&parsed.to_json()).unwrap();
        assert_eq!(parsed, again, "{name}");
        assert_eq!(parsed.to_json(), again.to_json());
        parsed.load().unwrap();
    }
}
