//! Discrete residuals of the reduced evolution identities along a
//! subcritical run, at three resolutions. Residuals fall like `h^2`.
//!
//! ```sh
//! cargo run --release --example identity_checks
//! ```

use std::f64::consts::PI;

use prflow::flow::lift_u;
use prflow::geometry::{identity_suite, observed_orders, IdentityOptions};
use prflow::{evolve_fd, stationary_solution, BoundaryData, EndpointData, FlowConfig, WarpedProductMetric};

fn main() -> prflow::Result<()> {
    let phi = 0.5 * PI * PI;
    let bd = BoundaryData::new(EndpointData::exponential(1.0, 0.5, 1.0), EndpointData::exponential(2.0, 0.5, 1.0));
    let st = stationary_solution(phi, 1.0, 1.0, 2.0, None)?;
    let opts = IdentityOptions { t_min: 0.1, ..IdentityOptions::default() };
    let mut suites = Vec::new();
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "m", "riccati", "A", "tau1", "R_N");
    for m in [40, 80, 160] {
        let phi0 = WarpedProductMetric::from_fn(1.0, 3, m, |x| {
            st.eval(x).unwrap() + lift_u(&bd, 0.0, x, 1.0) + 0.3 * x * (1.0 - x)
        })?;
        let traj = evolve_fd(&phi0, &bd, &FlowConfig::new(phi, 0.3, 0.25 / m as f64, m))?;
        let suite = identity_suite(&traj, &opts)?;
        let r = suite.maxima();
        println!("{m:>5} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}", r[0], r[1], r[2], r[3]);
        suites.push(suite);
    }
    println!("observed orders {:.2?}", observed_orders(&suites));
    Ok(())
}
