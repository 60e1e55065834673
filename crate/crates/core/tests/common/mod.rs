//! Acceptance scenarios shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use prflow::flow::lift_u;
use prflow::{stationary_solution, BoundaryData, EndpointData, FlowConfig, WarpedProductMetric};

pub struct Scenario {
    pub name: &'static str,
    pub phi0: WarpedProductMetric,
    pub bd: BoundaryData,
    pub cfg: FlowConfig,
}

/// Heat equation with one exact decaying mode.
pub fn exact_mode(m: usize, dt: f64) -> Scenario {
    Scenario {
        name: "exact mode",
        phi0: WarpedProductMetric::from_fn(1.0, 1, m, |x| (PI * x).sin()).unwrap(),
        bd: BoundaryData::zero(),
        cfg: FlowConfig::new(0.0, 1.0, dt, m).with_stride((0.01 / dt).round().max(1.0) as usize),
    }
}

/// `Phi = pi^2 / 2` with exponentially relaxing boundary values 1.5 -> 1
/// and 2.5 -> 2, started at `phi_stat + U(0, .) + 0.3 x (1 - x)`.
pub fn subcritical(m: usize, dt: f64, t_end: f64) -> Scenario {
    let phi = 0.5 * PI * PI;
    let bd = BoundaryData::new(EndpointData::exponential(1.0, 0.5, 1.0), EndpointData::exponential(2.0, 0.5, 1.0));
    let st = stationary_solution(phi, 1.0, 1.0, 2.0, None).unwrap();
    let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| {
        st.eval(x).unwrap() + lift_u(&bd, 0.0, x, 1.0) + 0.3 * x * (1.0 - x)
    })
    .unwrap();
    Scenario { name: "subcritical", phi0, bd, cfg: FlowConfig::new(phi, t_end, dt, m).with_stride(stride(dt)) }
}

/// Resonance `Phi = pi^2` with `delta_j = 0.2 e^{-t}` and vanishing limits,
/// started at `0.2 x (1 - x) + U(0, .)`.
pub fn resonance(m: usize, dt: f64, t_end: f64) -> Scenario {
    let bd = BoundaryData::new(EndpointData::exponential(0.0, 0.2, 1.0), EndpointData::exponential(0.0, 0.2, 1.0));
    let phi0 =
        WarpedProductMetric::from_fn(1.0, 1, m, |x| 0.2 * x * (1.0 - x) + lift_u(&bd, 0.0, x, 1.0)).unwrap();
    Scenario { name: "resonance", phi0, bd, cfg: FlowConfig::new(PI * PI, t_end, dt, m).with_stride(stride(dt)) }
}

/// `Phi = 2 pi^2`, zero boundaries, one growing mode.
pub fn supercritical(m: usize, dt: f64, t_end: f64) -> Scenario {
    Scenario {
        name: "supercritical",
        phi0: WarpedProductMetric::from_fn(1.0, 1, m, |x| (PI * x).sin()).unwrap(),
        bd: BoundaryData::zero(),
        cfg: FlowConfig::new(2.0 * PI * PI, t_end, dt, m).with_stride(stride(dt)),
    }
}

/// `Phi = pi^2` with boundary values frozen at 1: no stationary solution,
/// the first mode grows linearly.
pub fn frozen_resonance(m: usize, dt: f64, t_end: f64) -> Scenario {
    Scenario {
        name: "frozen resonance",
        phi0: WarpedProductMetric::from_fn(1.0, 1, m, |_| 1.0).unwrap(),
        bd: BoundaryData::constant(1.0, 1.0),
        cfg: FlowConfig::new(PI * PI, t_end, dt, m).with_stride(stride(dt)),
    }
}

/// Stride giving snapshots every 0.05 time units.
fn stride(dt: f64) -> usize {
    (0.05 / dt).round().max(1.0) as usize
}
