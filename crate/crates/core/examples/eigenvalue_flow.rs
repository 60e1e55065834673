//! Eigenvalues of `R_N` on a geodesic foliation under
//! `mu' = 4 mu (mu - Phi)`: below `Phi` they decay to zero, at `Phi` they
//! stay put, above `Phi` they blow up in finite time.
//!
//! ```sh
//! cargo run --example eigenvalue_flow
//! ```

use prflow::eigenflow::{blow_up_time, eigen_closed_form, eigen_rk4, ric_n_inequality_margin, EigenFlowState};

fn main() -> prflow::Result<()> {
    let phi = 1.0;
    let state = EigenFlowState::new(vec![0.5, 1.0, 1.5, 0.0], phi)?;
    let t_star = blow_up_time(1.5, phi).unwrap();
    println!("blow-up of mu0 = 1.5 at t* = ln 3 / 4 = {t_star:.6}");
    println!("{:>6} {:>30} {:>12}", "t", "mu", "ric margin");
    for k in 0..=5 {
        let t = 0.05 * k as f64;
        let mus = state.at(t)?;
        println!("{t:>6.2} {:>30} {:>12.4}", format!("{mus:.4?}"), ric_n_inequality_margin(&state, t)?);
    }

    let rk = eigen_rk4(0.5, phi, 1e-3, 1000);
    println!("rk4 vs closed form at t = 1: {:.2e}", (rk.values[1000] - eigen_closed_form(0.5, phi, 1.0)?).abs());
    Ok(())
}
