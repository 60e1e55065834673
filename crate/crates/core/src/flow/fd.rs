use crate::error::Result;
use crate::geometry::WarpedProductMetric;
use crate::numerics::Tridiagonal;

use super::{check_inputs, Backend, BoundaryData, FlowConfig, Trajectory, OVERFLOW_THRESHOLD};

/// Full steps replaced by two backward-Euler half steps each at the start
/// of a run (Rannacher start-up). They damp the high-frequency content of
/// initial data that is incompatible with the boundary data, which plain
/// Crank–Nicolson only flips in sign.
pub const STARTUP_STEPS: usize = 2;

/// Crank–Nicolson on the interior nodes, one tridiagonal solve per step,
/// after [`STARTUP_STEPS`] implicit-Euler start-up steps.
///
/// Dirichlet values enter the Crank–Nicolson right-hand side at the half
/// step, `mu_j((t_k + t_{k+1}) / 2)`.
pub fn evolve_fd(phi0: &WarpedProductMetric, bd: &BoundaryData, cfg: &FlowConfig) -> Result<Trajectory> {
    check_inputs(phi0, bd, cfg)?;
    let m = phi0.m();
    let h = phi0.dx();
    let (steps, dt) = cfg.steps();
    let r = dt / (h * h);
    let phi_param = cfg.phi_param;
    let interior = m - 1;

    let off = -0.5 * r;
    let diag = 1.0 + r - 0.5 * dt * phi_param;
    let lhs = Tridiagonal::factor(&vec![off; interior], &vec![diag; interior], &vec![off; interior]);
    let keep = 1.0 - r + 0.5 * dt * phi_param;

    let half = 0.5 * dt;
    let r_half = half / (h * h);
    let euler = Tridiagonal::factor(
        &vec![-r_half; interior],
        &vec![1.0 + 2.0 * r_half - half * phi_param; interior],
        &vec![-r_half; interior],
    );

    let record = cfg.snapshot_steps();
    let mut next_record = 1;
    let mut times = vec![0.0];
    let mut snapshots = vec![phi0.clone()];
    let mut diverged_at = None;

    let mut phi = phi0.phi().to_vec();
    let mut rhs = vec![0.0; interior];
    for step in 1..=steps {
        let t_old = (step - 1) as f64 * dt;
        let t_new = step as f64 * dt;
        if step <= STARTUP_STEPS {
            for t_sub in [t_old + half, t_new] {
                let [b0, b1] = bd.mu(t_sub);
                rhs.copy_from_slice(&phi[1..m]);
                rhs[0] += r_half * b0;
                rhs[interior - 1] += r_half * b1;
                euler.solve_in_place(&mut rhs);
                phi[1..m].copy_from_slice(&rhs);
            }
        } else {
            let [b0, b1] = bd.mu(0.5 * (t_old + t_new));
            for i in 1..m {
                let west = if i == 1 { 0.0 } else { phi[i - 1] };
                let east = if i == m - 1 { 0.0 } else { phi[i + 1] };
                rhs[i - 1] = keep * phi[i] + 0.5 * r * (west + east);
            }
            // Both the explicit and the implicit half see the half-step value.
            rhs[0] += r * b0;
            rhs[interior - 1] += r * b1;
            lhs.solve_in_place(&mut rhs);
        }
        let [mu0, mu1] = bd.mu(t_new);
        phi[0] = mu0;
        phi[m] = mu1;
        phi[1..m].copy_from_slice(&rhs);

        if phi.iter().any(|v| !(v.abs() <= OVERFLOW_THRESHOLD)) {
            diverged_at = Some(t_new);
            break;
        }
        if next_record < record.len() && record[next_record] == step {
            next_record += 1;
            times.push(t_new);
            snapshots.push(WarpedProductMetric::from_solution(phi0.l(), phi0.n(), phi.clone())?);
        }
    }

    Ok(Trajectory {
        times,
        snapshots,
        backend: Backend::FiniteDifference,
        boundary: bd.clone(),
        phi_param,
        diverged_at,
        spectral_tail: None,
    })
}
