//! Convergence to the stationary profile for `Phi = pi^2 / 2` with boundary
//! values relaxing exponentially, together with the a-priori estimate for
//! several split parameters `theta`.
//!
//! ```sh
//! cargo run --release --example subcritical_convergence
//! ```

use std::f64::consts::PI;

use prflow::bounds::subcritical_report;
use prflow::flow::lift_u;
use prflow::{evolve_fd, stationary_solution, BoundaryData, EndpointData, FlowConfig, WarpedProductMetric};

fn main() -> prflow::Result<()> {
    let phi = 0.5 * PI * PI;
    let m = 200;
    let bd = BoundaryData::new(EndpointData::exponential(1.0, 0.5, 1.0), EndpointData::exponential(2.0, 0.5, 1.0));
    let st = stationary_solution(phi, 1.0, 1.0, 2.0, None)?;
    let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| {
        st.eval(x).unwrap() + lift_u(&bd, 0.0, x, 1.0) + 0.3 * x * (1.0 - x)
    })?;
    let traj = evolve_fd(&phi0, &bd, &FlowConfig::new(phi, 10.0, 1e-3, m).with_stride(1000))?;

    for theta in [0.25, 0.5, 0.75] {
        let report = subcritical_report(&traj, theta, 1.0)?;
        println!("theta = {theta}");
        println!("  {:>5} {:>12} {:>12}", "t", "observed", "bound");
        for k in 0..report.times.len() {
            println!("  {:>5.1} {:>12.4e} {:>12.4e}", report.times[k], report.observed_deviation[k], report.bound_value[k]);
        }
        println!("  min margin {:.3e}", report.min_margin());
    }
    Ok(())
}
