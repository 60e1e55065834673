//! The two ways the flow fails to settle: exponential growth above the
//! first eigenvalue, and linear growth at resonance when the boundary
//! values are frozen away from an admissible pair.
//!
//! ```sh
//! cargo run --release --example divergence
//! ```

use std::f64::consts::PI;

use prflow::bounds::{divergence_rate, frozen_resonance_slope};
use prflow::{evolve_fd, BoundaryData, FlowConfig, WarpedProductMetric};

fn main() -> prflow::Result<()> {
    let m = 200;
    let sine = WarpedProductMetric::from_fn(1.0, 1, m, |x| (PI * x).sin())?;
    let supercritical = evolve_fd(&sine, &BoundaryData::zero(), &FlowConfig::new(2.0 * PI * PI, 3.0, 1e-3, m).with_stride(50))?;
    let fit = divergence_rate(&supercritical)?;
    println!("Phi = 2 pi^2: {:?}, rate {:.4} (first mode grows at pi^2 = {:.4})", fit.kind, fit.rate, PI * PI);

    let ones = WarpedProductMetric::from_fn(1.0, 1, m, |_| 1.0)?;
    let frozen = evolve_fd(&ones, &BoundaryData::constant(1.0, 1.0), &FlowConfig::new(PI * PI, 5.0, 1e-3, m).with_stride(50))?;
    let fit = divergence_rate(&frozen)?;
    println!(
        "Phi = pi^2, mu = 1 frozen: {:?}, slope {:.4} (forcing coefficient {:.4})",
        fit.kind,
        fit.slope,
        frozen_resonance_slope(1.0, [1.0, 1.0], 2000)
    );
    Ok(())
}
