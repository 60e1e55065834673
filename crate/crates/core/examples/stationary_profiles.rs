//! Stationary warping functions in every regime of `Phi` relative to the
//! first Dirichlet eigenvalue `(pi / l)^2`.
//!
//! ```sh
//! cargo run --example stationary_profiles
//! ```

use std::f64::consts::PI;

use prflow::stationary::{stationary_residual, stationary_solution};

fn main() -> prflow::Result<()> {
    let crit = PI * PI;
    let cases = [
        ("negative", -4.0, 1.0, 2.0, None),
        ("zero", 0.0, 1.0, 2.0, None),
        ("subcritical", crit / 4.0, 0.0, 1.0, None),
        ("resonance family", crit, 0.0, 0.0, Some(1.0)),
        ("resonance, no solution", crit, 1.0, 1.0, None),
        ("supercritical", 1.5 * crit, 1.0, 1.0, None),
    ];
    println!("{:<24} {:<20} {:>8} {:>10} {:>10}", "case", "regime", "stable", "phi(1/2)", "residual");
    for (name, phi, mu0, mu1, c) in cases {
        let st = stationary_solution(phi, 1.0, mu0, mu1, c)?;
        let mid = st.eval(0.5).map_or("-".to_string(), |v| format!("{v:.6}"));
        let res = stationary_residual(&st, 400).map_or("-".to_string(), |r| format!("{:.1e}", r.interior_max));
        println!("{name:<24} {:<20} {:>8} {mid:>10} {res:>10}", format!("{:?}", st.regime), st.stable_under_flow);
    }
    Ok(())
}
