//! Shared inputs for the benchmarks.

use conicray::optics::{CassegrainParams, Ray, Scene};
use conicray::{Conic, Direction, Point};

pub fn ellipse() -> Conic {
    Conic::ellipse(5.0, 3.0).expect("valid ellipse")
}

pub fn hyperbola() -> Conic {
    Conic::hyperbola(3.0, 4.0).expect("valid hyperbola")
}

pub fn parabola() -> Conic {
    Conic::parabola(1.0).expect("valid parabola")
}

/// Rays fanning out from the ellipse's left focus.
pub fn focal_fan(n: usize) -> Vec<Ray> {
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            Ray::new(Point::xy(-4.0, 0.0), Direction::from_angle(angle))
        })
        .collect()
}

/// Points scattered over a 20 x 20 box, deterministic.
pub fn query_points(n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let u = (k as f64 * 0.618_033_988_749_895).fract();
            let v = (k as f64 * 0.754_877_666_246_693).fract();
            Point::xy(20.0 * u - 10.0, 20.0 * v - 10.0)
        })
        .collect()
}

pub fn cassegrain() -> Scene {
    Scene::cassegrain(&CassegrainParams::default()).expect("default layout is confocal")
}
