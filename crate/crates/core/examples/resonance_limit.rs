//! At `Phi = (pi / l)^2` with boundary deviations decaying to zero the flow
//! settles on a multiple of the first mode. The limit amplitude is fixed by
//! the initial first sine coefficient plus the integrated forcing.
//!
//! ```sh
//! cargo run --release --example resonance_limit
//! ```

use std::f64::consts::PI;

use prflow::bounds::{first_sine_coefficient, limit_profile_resonance, resonance_report};
use prflow::flow::lift_u;
use prflow::{evolve_fd, BoundaryData, EndpointData, FlowConfig, WarpedProductMetric};

fn main() -> prflow::Result<()> {
    let m = 1600;
    let bd = BoundaryData::new(EndpointData::exponential(0.0, 0.2, 1.0), EndpointData::exponential(0.0, 0.2, 1.0));
    let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| 0.2 * x * (1.0 - x) + lift_u(&bd, 0.0, x, 1.0))?;
    let limit = limit_profile_resonance(&phi0, &bd)?;
    println!("predicted limit amplitude {:.6}", limit.coeff(1));

    let traj = evolve_fd(&phi0, &bd, &FlowConfig::new(PI * PI, 10.0, 1e-3, m).with_stride(1000))?;
    for (t, s) in traj.times.iter().zip(&traj.snapshots) {
        println!("t = {t:>4.1}  first sine coefficient {:.6}", first_sine_coefficient(s)?);
    }
    let report = resonance_report(&traj, 0.5, 1.0)?;
    println!("estimate holds with min margin {:.3e}", report.min_margin());
    Ok(())
}
