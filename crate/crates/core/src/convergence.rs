//! Step-halving sweeps over the two-step construction.
//!
//! Each sweep level shrinks `delta` by two and records a set of metrics.
//! The convergence order of a metric is the mean of `log2(v_k / v_{k+1})`
//! over successive levels, ignoring values at or below the rounding noise
//! floor. Orders are empirical measurements of this code, not inputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conics::{Conic, Shape, ON_CURVE_TOL};
use crate::construction::{exact_return, focal_change_error, two_step, Orientation};
use crate::error::{Error, Result};
use crate::geometry::{angle_between, Direction, Point};

/// Noise floor multiplier: values at or below `NOISE_FLOOR_ULPS * eps * scale`
/// are treated as rounding noise.
pub const NOISE_FLOOR_ULPS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    /// `|residual(B)|`
    #[serde(rename = "residual_B")]
    ResidualB,
    /// Angle between the chord `A -> B` and the analytic tangent at `A`.
    #[serde(rename = "chord_tangent_angle")]
    ChordTangentAngle,
    /// Distance from the apex `D` to the curve.
    #[serde(rename = "apex_curve_distance")]
    ApexCurveDistance,
    /// Angle between the lines from `A` and `B` to the second focus.
    #[serde(rename = "parallelism_error")]
    ParallelismError,
    /// `|t* - delta|` from the exact-return variant.
    #[serde(rename = "exact_return_gap")]
    ExactReturnGap,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::ResidualB,
        Metric::ChordTangentAngle,
        Metric::ApexCurveDistance,
        Metric::ParallelismError,
        Metric::ExactReturnGap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::ResidualB => "residual_B",
            Metric::ChordTangentAngle => "chord_tangent_angle",
            Metric::ApexCurveDistance => "apex_curve_distance",
            Metric::ParallelismError => "parallelism_error",
            Metric::ExactReturnGap => "exact_return_gap",
        }
    }

    /// Whether the metric is defined for this conic.
    pub fn applies_to(self, conic: &Conic) -> bool {
        !(self == Metric::ParallelismError && matches!(conic.shape(), Shape::Parabola(_)))
    }

    /// Every metric defined for `conic`, in column order.
    pub fn all_for(conic: &Conic) -> Vec<Metric> {
        Metric::ALL.into_iter().filter(|m| m.applies_to(conic)).collect()
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidConfig(format!("unknown metric `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub conic: Conic,
    pub anchor: Point,
    pub delta0: f64,
    /// Number of halvings; the sweep has `halvings + 1` levels.
    pub halvings: usize,
    pub metrics: Vec<Metric>,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderEstimate {
    Defined { order: f64, ratios_used: usize },
    /// Fewer than two values above the noise floor.
    Undefined,
}

impl OrderEstimate {
    pub fn order(&self) -> Option<f64> {
        match *self {
            OrderEstimate::Defined { order, .. } => Some(order),
            OrderEstimate::Undefined => None,
        }
    }

    pub fn ratios_used(&self) -> usize {
        match *self {
            OrderEstimate::Defined { ratios_used, .. } => ratios_used,
            OrderEstimate::Undefined => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    /// One value per configured metric, in the same order.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricFit {
    pub metric: Metric,
    pub estimate: OrderEstimate,
    /// `v / delta^order` at the smallest retained level.
    pub constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub metrics: Vec<Metric>,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<MetricFit>,
    pub noise_floor: f64,
    /// Level at which construction failed, with the reason. Rows stop there.
    pub failure: Option<(usize, Error)>,
}

impl SweepConfig {
    /// Sweep over every metric defined for the conic.
    pub fn new(conic: Conic, anchor: Point, delta0: f64, halvings: usize) -> Self {
        let metrics = Metric::all_for(&conic);
        SweepConfig {
            conic,
            anchor,
            delta0,
            halvings,
            metrics,
            orientation: Orientation::Forward,
        }
    }

    pub fn with_metrics(mut self, metrics: Vec<Metric>) -> Self {
        self.metrics = metrics;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(Error::NonPositiveDelta(self.delta0));
        }
        if self.halvings < 2 {
            return Err(Error::InvalidConfig(format!(
                "need >= 2 halvings, got {}",
                self.halvings
            )));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig("no metrics selected".into()));
        }
        if let Some(m) = self.metrics.iter().find(|m| !m.applies_to(&self.conic)) {
            return Err(Error::UnsupportedVariant {
                operation: m.name(),
                kind: self.conic.kind(),
            });
        }
        self.conic.check_on_curve(self.anchor, ON_CURVE_TOL)?;
        Ok(())
    }

    pub fn noise_floor(&self) -> f64 {
        NOISE_FLOOR_ULPS * f64::EPSILON * self.conic.scale()
    }
}

/// `p = mean(log2(v_k / v_{k+1}))` over consecutive pairs whose values are
/// both above `noise_floor`.
pub fn estimate_order(values: &[f64], noise_floor: f64) -> OrderEstimate {
    let logs: Vec<f64> = values
        .windows(2)
        .filter(|w| w[0] > noise_floor && w[1] > noise_floor)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    if logs.is_empty() {
        return OrderEstimate::Undefined;
    }
    OrderEstimate::Defined {
        order: logs.iter().sum::<f64>() / logs.len() as f64,
        ratios_used: logs.len(),
    }
}

fn measure(cfg: &SweepConfig, delta: f64) -> Result<Vec<f64>> {
    let conic = &cfg.conic;
    let tri = two_step(conic, cfg.anchor, delta, cfg.orientation)?;
    cfg.metrics
        .iter()
        .map(|m| match m {
            Metric::ResidualB => Ok(tri.residual_b.abs()),
            Metric::ChordTangentAngle => {
                if tri.degenerate {
                    return Ok(0.0);
                }
                let (tangent, _) = conic.tangent_normal(cfg.anchor, ON_CURVE_TOL)?;
                let chord = Direction::from_vec(tri.chord())?;
                // The tangent is a line; either orientation counts.
                let ang = angle_between(chord, tangent);
                Ok(ang.min(std::f64::consts::PI - ang))
            }
            Metric::ApexCurveDistance => conic.distance_to_curve(tri.d),
            Metric::ParallelismError => {
                if tri.degenerate {
                    return Ok(0.0);
                }
                Ok(focal_change_error(&tri, conic)?.parallelism_error)
            }
            Metric::ExactReturnGap => {
                let er = exact_return(conic, cfg.anchor, delta, cfg.orientation)?;
                Ok((er.t_star - delta).abs())
            }
        })
        .collect()
}

/// Runs every level of the sweep and fits an order per metric.
///
/// A construction failure at some level truncates the report there; the
/// failing level and error are kept in [`ConvergenceReport::failure`].
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let noise_floor = cfg.noise_floor();
    let mut rows = Vec::with_capacity(cfg.halvings + 1);
    let mut failure = None;
    for k in 0..=cfg.halvings {
        let delta = cfg.delta0 / f64::powi(2.0, k as i32);
        match measure(cfg, delta) {
            Ok(values) => rows.push(SweepRow { delta, values }),
            Err(e) => {
                failure = Some((k, e));
                break;
            }
        }
    }

    let fits = cfg
        .metrics
        .iter()
        .enumerate()
        .map(|(j, &metric)| {
            let column: Vec<f64> = rows.iter().map(|r| r.values[j]).collect();
            let estimate = estimate_order(&column, noise_floor);
            let constant = estimate.order().and_then(|p| {
                rows.iter()
                    .rev()
                    .find(|r| r.values[j] > noise_floor)
                    .map(|r| r.values[j] / r.delta.powf(p))
            });
            MetricFit {
                metric,
                estimate,
                constant,
            }
        })
        .collect();

    Ok(ConvergenceReport {
        metrics: cfg.metrics.clone(),
        rows,
        fits,
        noise_floor,
        failure,
    })
}

impl ConvergenceReport {
    pub fn column(&self, metric: Metric) -> Option<Vec<f64>> {
        let j = self.metrics.iter().position(|&m| m == metric)?;
        Some(self.rows.iter().map(|r| r.values[j]).collect())
    }

    pub fn fit(&self, metric: Metric) -> Option<&MetricFit> {
        self.fits.iter().find(|f| f.metric == metric)
    }

    pub fn order(&self, metric: Metric) -> Option<f64> {
        self.fit(metric)?.estimate.order()
    }

    /// Non-increasing across levels, ignoring values at the noise floor.
    pub fn is_monotone(&self, metric: Metric) -> bool {
        let Some(col) = self.column(metric) else {
            return false;
        };
        col.windows(2)
            .filter(|w| w[0] > self.noise_floor && w[1] > self.noise_floor)
            .all(|w| w[1] <= w[0])
    }
}
