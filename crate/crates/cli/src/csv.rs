//! Convergence report as CSV.
//!
//! Header `delta,<metric>...`, one row per level, then footer rows
//! `empirical_order`, `ratios_used` and `constant`. LF line endings.

use std::fmt::Write;

use conicray::convergence::ConvergenceReport;

pub fn report_csv(report: &ConvergenceReport) -> String {
    let mut out = String::new();
    out.push_str("delta");
    for m in &report.metrics {
        out.push(',');
        out.push_str(m.name());
    }
    out.push('\n');
    for row in &report.rows {
        write!(out, "{:e}", row.delta).unwrap();
        for v in &row.values {
            write!(out, ",{v:e}").unwrap();
        }
        out.push('\n');
    }
    let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |v| format!("{v:e}"));
    out.push_str("empirical_order");
    for f in &report.fits {
        write!(out, ",{}", opt(f.estimate.order())).unwrap();
    }
    out.push('\n');
    out.push_str("ratios_used");
    for f in &report.fits {
        write!(out, ",{}", f.estimate.ratios_used()).unwrap();
    }
    out.push('\n');
    out.push_str("constant");
    for f in &report.fits {
        write!(out, ",{}", opt(f.constant)).unwrap();
    }
    out.push('\n');
    out
}
