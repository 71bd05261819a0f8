#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use conicray::{Branch, Conic, Placement, Point};
use proptest::prelude::*;

pub fn placement() -> impl Strategy<Value = Placement> {
    (-5.0..5.0f64, -5.0..5.0f64, -PI..PI).prop_map(|(x, y, r)| Placement::new(Point::xy(x, y), r).unwrap())
}

pub fn branch() -> impl Strategy<Value = Branch> {
    prop_oneof![Just(Branch::Positive), Just(Branch::Negative)]
}

/// Posed conic of any family, axes in `[lo, hi]`. Ellipses are kept off the
/// circle so both foci are distinct.
pub fn conic_in(lo: f64, hi: f64) -> impl Strategy<Value = Conic> {
    let ellipse = (lo..hi, 0.0..0.95f64).prop_map(move |(a, k)| Conic::ellipse(a, (a * k).max(lo.min(a * 0.95))).unwrap());
    let parabola = (lo..hi).prop_map(|p| Conic::parabola(p).unwrap());
    let hyperbola = (lo..hi, lo..hi).prop_map(|(a, b)| Conic::hyperbola(a, b).unwrap());
    (prop_oneof![ellipse, parabola, hyperbola], placement()).prop_map(|(c, pl)| c.with_placement(pl))
}

pub fn conic() -> impl Strategy<Value = Conic> {
    conic_in(0.5, 5.0)
}

/// A posed conic with a curve parameter and branch for an on-curve point.
pub fn conic_with_param() -> impl Strategy<Value = (Conic, f64, Branch)> {
    (conic(), 0.0..1.0f64, branch()).prop_map(|(c, u, br)| {
        let t = match c.kind() {
            "ellipse" => u * TAU,
            "parabola" => (u - 0.5) * 8.0,
            _ => (u - 0.5) * 4.0,
        };
        (c, t, br)
    })
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
