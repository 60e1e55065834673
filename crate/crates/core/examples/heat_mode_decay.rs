//! Unnormalized flow (`Phi = 0`) of `phi0 = sin(pi x)`: the exact solution
//! is `e^{-pi^2 t} sin(pi x)`. Both backends are compared against it.
//!
//! ```sh
//! cargo run --example heat_mode_decay
//! ```

use std::f64::consts::PI;

use prflow::{evolve, Backend, BoundaryData, FlowConfig, WarpedProductMetric};

fn main() -> prflow::Result<()> {
    let m = 200;
    let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| (PI * x).sin())?;
    let cfg = FlowConfig::new(0.0, 1.0, 1e-4, m).with_backend(Backend::Both).with_stride(1000);
    let out = evolve(&phi0, &BoundaryData::zero(), &cfg)?;

    println!("{:>6} {:>14} {:>14}", "t", "fd error", "spectral error");
    let (fd, sp) = (out.fd.unwrap(), out.spectral.unwrap());
    for (k, t) in fd.times.iter().enumerate() {
        let err = |s: &WarpedProductMetric| {
            (0..=m)
                .map(|i| (s.phi()[i] - (-PI * PI * t).exp() * (PI * s.x(i)).sin()).abs())
                .fold(0.0, f64::max)
        };
        println!("{t:>6.2} {:>14.3e} {:>14.3e}", err(&fd.snapshots[k]), err(&sp.snapshots[k]));
    }
    Ok(())
}
