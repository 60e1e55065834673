//! Sine-series exponential integrator.
//!
//! With a stationary reference `psi` (`psi'' + Phi psi = 0`) and the linear
//! boundary lift `U`, `v = phi - psi - U` solves
//!
//! ```text
//! v_t = v_xx + Phi v + f,   v(t, 0) = v(t, l) = 0,   f = Phi U - U_t,
//! ```
//!
//! so each sine coefficient obeys `v_j' = lambda_j v_j + f_j(t)` with
//! `lambda_j = Phi - (pi j / l)^2`. Expanding `1` and `x / l` in sine series
//! gives `f_j = 2 / (pi j) * (g_0 - (-1)^j g_1)` with `g_e = Phi delta_e -
//! delta_e'`. For exponential boundary families the variation-of-constants
//! integral is done in closed form; tabulated data uses four-point
//! Gauss–Legendre quadrature on every step.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::WarpedProductMetric;
use crate::numerics::{phi1, GAUSS4};
use crate::stationary::stationary_solution;

use super::{
    check_inputs, sine_coefficients, Backend, BoundaryData, ExpTerm, FlowConfig, Trajectory, OVERFLOW_THRESHOLD,
};

/// Stationary solution the series is expanded around.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProfile {
    /// Endpoint values of the reference; the lift carries `mu_j - these`.
    pub ends: [f64; 2],
    /// Samples on the run grid.
    pub samples: Vec<f64>,
}

impl ReferenceProfile {
    /// `mu_j(t) - ends[j]` at both endpoints.
    pub fn delta(&self, bd: &BoundaryData, t: f64) -> [f64; 2] {
        let [m0, m1] = bd.mu(t);
        [m0 - self.ends[0], m1 - self.ends[1]]
    }

    /// Lift `U(t, x)` relative to this reference.
    pub fn lift(&self, bd: &BoundaryData, t: f64, x: f64, l: f64) -> f64 {
        let [d0, d1] = self.delta(bd, t);
        d0 * (l - x) / l + d1 * x / l
    }
}

/// The stationary profile for `(Phi, mu_tilde)` when one exists, otherwise
/// `psi = 0` with the lift carrying the full boundary data (resonance
/// without a stationary solution, higher resonances).
pub fn reference_profile(phi_param: f64, l: f64, m: usize, bd: &BoundaryData) -> ReferenceProfile {
    let [t0, t1] = bd.mu_tilde();
    match stationary_solution(phi_param, l, t0, t1, Some(0.0)) {
        Ok(st) if st.has_profile() => {
            ReferenceProfile { ends: [t0, t1], samples: st.sample(m).expect("profile exists") }
        }
        _ => ReferenceProfile { ends: [0.0, 0.0], samples: vec![0.0; m + 1] },
    }
}

/// `int_0^t e^{lambda (t - s)} e^{-rate s} ds`, stable for either sign of
/// `lambda + rate`.
fn exp_convolution(lambda: f64, rate: f64, t: f64) -> f64 {
    let z = (lambda + rate) * t;
    if z <= 0.0 {
        t * (-rate * t).exp() * phi1(z)
    } else {
        t * (lambda * t).exp() * phi1(-z)
    }
}

/// Forcing weights: `f_j(t) = 2 / (pi j) * (g_0(t) - (-1)^j g_1(t))`.
fn forcing_weight(j: usize) -> (f64, f64) {
    let w = 2.0 / (PI * j as f64);
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    (w, -sign * w)
}

pub fn evolve_spectral(phi0: &WarpedProductMetric, bd: &BoundaryData, cfg: &FlowConfig) -> Result<Trajectory> {
    check_inputs(phi0, bd, cfg)?;
    let m = phi0.m();
    let l = phi0.l();
    let phi_param = cfg.phi_param;
    let modes = cfg.modes;
    let reference = reference_profile(phi_param, l, m, bd);

    let v0: Vec<f64> = (0..=m)
        .map(|i| {
            let x = phi0.x(i);
            phi0.phi()[i] - reference.samples[i] - reference.lift(bd, 0.0, x, l)
        })
        .collect();
    let mut v0 = v0;
    // Endpoint residue is pure round-off once the lift is subtracted.
    v0[0] = 0.0;
    v0[m] = 0.0;
    let initial = sine_coefficients(&v0, l, modes)?;

    let lambdas: Vec<f64> = (1..=modes).map(|j| phi_param - (PI * j as f64 / l).powi(2)).collect();
    let sines: Vec<Vec<f64>> = (1..=modes)
        .map(|j| {
            (0..=m)
                .map(|i| if i == 0 || i == m { 0.0 } else { (PI * j as f64 * i as f64 / m as f64).sin() })
                .collect()
        })
        .collect();

    let (_, dt) = cfg.steps();
    let record = cfg.snapshot_steps();

    let terms: Option<[Vec<ExpTerm>; 2]> = match (
        bd.left.exp_terms(reference.ends[0]),
        bd.right.exp_terms(reference.ends[1]),
    ) {
        (Some(a), Some(b)) => Some([a, b]),
        _ => None,
    };

    let reconstruct = |t: f64, coeffs: &[f64]| -> Vec<f64> {
        let mut phi: Vec<f64> = (0..=m)
            .map(|i| reference.samples[i] + reference.lift(bd, t, phi0.x(i), l))
            .collect();
        for (c, row) in coeffs.iter().zip(&sines) {
            for (p, s) in phi.iter_mut().zip(row) {
                *p += c * s;
            }
        }
        let [mu0, mu1] = bd.mu(t);
        phi[0] = mu0;
        phi[m] = mu1;
        phi
    };

    let mut times = Vec::with_capacity(record.len());
    let mut snapshots = Vec::with_capacity(record.len());
    let mut diverged_at = None;

    match &terms {
        Some(terms) => {
            // Closed form at every recorded time.
            let mut coeffs = vec![0.0; modes];
            for &step in &record {
                let t = step as f64 * dt;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    let j = k + 1;
                    let lambda = lambdas[k];
                    let (w0, w1) = forcing_weight(j);
                    let mut v = initial.coeffs[k] * (lambda * t).exp();
                    for (w, endpoint) in [(w0, &terms[0]), (w1, &terms[1])] {
                        for term in endpoint {
                            // g = Phi delta - delta' = (Phi + rate) coef e^{-rate t}
                            let g = (phi_param + term.rate) * term.coef;
                            v += w * g * exp_convolution(lambda, term.rate, t);
                        }
                    }
                    *c = v;
                }
                let phi = reconstruct(t, &coeffs);
                if phi.iter().any(|v| !(v.abs() <= OVERFLOW_THRESHOLD)) {
                    diverged_at = Some(t);
                    break;
                }
                times.push(t);
                snapshots.push(WarpedProductMetric::from_solution(l, phi0.n(), phi)?);
            }
        }
        None => {
            let g = |t: f64| -> [f64; 2] {
                let d = reference.delta(bd, t);
                let p = bd.delta_prime(t);
                [phi_param * d[0] - p[0], phi_param * d[1] - p[1]]
            };
            let decay: Vec<f64> = lambdas.iter().map(|lam| (lam * dt).exp()).collect();
            let mut coeffs = initial.coeffs.clone();
            let mut next_record = 0;
            let last_step = *record.last().unwrap();
            for step in 0..=last_step {
                if step > 0 {
                    let t0 = (step - 1) as f64 * dt;
                    let nodes: Vec<(f64, [f64; 2])> = GAUSS4
                        .iter()
                        .map(|(x, w)| {
                            let s = 0.5 * dt * (x + 1.0);
                            (s, g(t0 + s).map(|gv| gv * 0.5 * dt * w))
                        })
                        .collect();
                    for (k, c) in coeffs.iter_mut().enumerate() {
                        let (w0, w1) = forcing_weight(k + 1);
                        let lambda = lambdas[k];
                        let integral: f64 = nodes
                            .iter()
                            .map(|(s, gv)| (lambda * (dt - s)).exp() * (w0 * gv[0] + w1 * gv[1]))
                            .sum();
                        *c = decay[k] * *c + integral;
                    }
                }
                if record[next_record] == step {
                    next_record += 1;
                    let t = step as f64 * dt;
                    let phi = reconstruct(t, &coeffs);
                    if phi.iter().any(|v| !(v.abs() <= OVERFLOW_THRESHOLD)) {
                        diverged_at = Some(t);
                        break;
                    }
                    times.push(t);
                    snapshots.push(WarpedProductMetric::from_solution(l, phi0.n(), phi)?);
                }
            }
        }
    }

    Ok(Trajectory {
        times,
        snapshots,
        backend: Backend::Spectral,
        boundary: bd.clone(),
        phi_param,
        diverged_at,
        spectral_tail: Some(tail_estimate(&initial.coeffs)),
    })
}

/// Estimate `sum_{j > J} |c_j|` by fitting `|c_j| ~ C j^{-p}` to the last
/// quarter of the coefficients.
fn tail_estimate(coeffs: &[f64]) -> f64 {
    let n = coeffs.len();
    let start = (3 * n / 4).max(1);
    let pts: Vec<(f64, f64)> = (start..=n)
        .filter_map(|j| {
            let c = coeffs[j - 1].abs();
            (c > 1e-300).then(|| ((j as f64).ln(), c.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let fit = crate::numerics::fit_line(&xs, &ys);
    let p = -fit.slope;
    let c = fit.intercept.exp();
    if p <= 1.0 {
        return f64::INFINITY;
    }
    // sum_{j > J} C j^{-p} <= C J^{1-p} / (p - 1)
    c * (n as f64).powf(1.0 - p) / (p - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_convolution_matches_quadrature() {
        for (lambda, rate, t) in [(-3.0, 1.0, 2.0), (2.0, 0.5, 1.0), (-1.0, 1.0, 0.7), (-400.0, 0.0, 10.0)] {
            // Midpoint rule oracle with one Richardson step.
            let midpoint = |n: usize| -> f64 {
                let h = t / n as f64;
                (0..n)
                    .map(|k| {
                        let s = (k as f64 + 0.5) * h;
                        (lambda * (t - s)).exp() * (-rate * s).exp() * h
                    })
                    .sum()
            };
            let q = (4.0 * midpoint(400_000) - midpoint(200_000)) / 3.0;
            let e = exp_convolution(lambda, rate, t);
            assert!((e - q).abs() <= 1e-8 * q.abs().max(1e-3), "{lambda} {rate}: {e} vs {q}");
        }
    }

    #[test]
    fn forcing_weights_match_sine_series_of_one_and_x() {
        // 1 = sum 2 (1 - (-1)^j) / (pi j) sin, x/l = sum -2 (-1)^j / (pi j) sin.
        // f = g0 (1 - x/l) + g1 x/l, so the weights are w(1) - w(x/l) and w(x/l).
        for j in 1..6 {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            let one = 2.0 * (1.0 - s) / (PI * j as f64);
            let x = -2.0 * s / (PI * j as f64);
            let (w0, w1) = forcing_weight(j);
            assert!((w0 - (one - x)).abs() < 1e-15);
            assert!((w1 - x).abs() < 1e-15);
        }
    }

    #[test]
    fn tail_estimate_for_power_law() {
        let coeffs: Vec<f64> = (1..=100).map(|j| (j as f64).powi(-3)).collect();
        let tail = tail_estimate(&coeffs);
        let exact: f64 = (101..200_000).map(|j| (j as f64).powi(-3)).sum();
        assert!(tail >= exact && tail < 1.1 * exact, "{tail} vs {exact}");
    }
}
