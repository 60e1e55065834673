//! Normalized flow on a geodesic Riemannian foliation (`A = 0`, `T != 0`).
//!
//! `R_N = -(T#)^2` is parallel along `N`, so the flow becomes an ODE in
//! `t` alone. The eigenvectors of `R_N` keep their directions and each
//! eigenvalue obeys
//!
//! ```text
//! mu' = 4 mu (mu - Phi),
//! ```
//!
//! with closed form `mu(t) = Phi mu0 / (mu0 + (Phi - mu0) e^{4 Phi t})`
//! (`mu0 / (1 - 4 mu0 t)` when `Phi = 0`). Starting above `Phi` the
//! solution blows up in finite time.

use crate::error::{Error, Result};

/// Eigenvalues of `R_N` together with the normalization constant.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenFlowState {
    pub mus: Vec<f64>,
    pub phi_param: f64,
    /// Codimension of the leaves.
    pub n: usize,
}

impl EigenFlowState {
    /// Eigenvalues must be nonnegative; zero eigenvalues are frozen modes
    /// (forced when `n` is odd). With all eigenvalues positive `n` must be
    /// even.
    pub fn new(mus: Vec<f64>, phi_param: f64) -> Result<Self> {
        let n = mus.len();
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one eigenvalue".into()));
        }
        if mus.iter().any(|m| !(*m >= 0.0 && m.is_finite())) {
            return Err(Error::InvalidArgument("eigenvalues must be finite and >= 0".into()));
        }
        if n % 2 == 1 && mus.iter().all(|m| *m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "odd codimension {n} forces a zero eigenvalue of R_N"
            )));
        }
        Ok(Self { mus, phi_param, n })
    }

    /// `mu_i(t)` for every eigenvalue.
    pub fn at(&self, t: f64) -> Result<Vec<f64>> {
        self.mus
            .iter()
            .map(|&mu| if mu == 0.0 { Ok(0.0) } else { eigen_closed_form(mu, self.phi_param, t) })
            .collect()
    }
}

/// First time at which the closed form blows up, if it does for `t > 0`.
pub fn blow_up_time(mu0: f64, phi_param: f64) -> Option<f64> {
    if mu0 <= phi_param {
        return None;
    }
    if phi_param == 0.0 {
        return Some(1.0 / (4.0 * mu0));
    }
    // Zero of mu0 + (Phi - mu0) e^{4 Phi t}.
    Some((mu0 / (mu0 - phi_param)).ln() / (4.0 * phi_param))
}

pub fn eigen_closed_form(mu0: f64, phi_param: f64, t: f64) -> Result<f64> {
    if !(mu0 > 0.0) {
        return Err(Error::InvalidArgument(format!("mu0 = {mu0} must be positive")));
    }
    if let Some(t_star) = blow_up_time(mu0, phi_param) {
        if t >= t_star {
            return Err(Error::BlowUp { t_star });
        }
    }
    if mu0 == phi_param {
        return Ok(mu0);
    }
    if phi_param == 0.0 {
        return Ok(mu0 / (1.0 - 4.0 * mu0 * t));
    }
    // Divide through by e^{4 Phi t} when it is large so the expression
    // tends to 0 instead of overflowing.
    let z = 4.0 * phi_param * t;
    if z > 0.0 {
        let e = (-z).exp();
        Ok(phi_param * mu0 * e / (mu0 * e + (phi_param - mu0)))
    } else {
        Ok(phi_param * mu0 / (mu0 + (phi_param - mu0) * z.exp()))
    }
}

/// Classical RK4 trajectory of `mu' = 4 mu (mu - Phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rk4Trajectory {
    /// `values[k]` approximates `mu(k dt)`; `dt` may be negative.
    pub values: Vec<f64>,
    /// Set when `|mu|` exceeded `1e15`; the trajectory stops there.
    pub blow_up_suspected_at: Option<f64>,
}

pub const RK4_BLOWUP_LIMIT: f64 = 1e15;

pub fn eigen_rk4(mu0: f64, phi_param: f64, dt: f64, steps: usize) -> Rk4Trajectory {
    let f = |mu: f64| 4.0 * mu * (mu - phi_param);
    rk4_scalar(f, mu0, dt, steps)
}

fn rk4_scalar(f: impl Fn(f64) -> f64, y0: f64, dt: f64, steps: usize) -> Rk4Trajectory {
    let mut values = Vec::with_capacity(steps + 1);
    values.push(y0);
    let mut y = y0;
    for k in 0..steps {
        let k1 = f(y);
        let k2 = f(y + 0.5 * dt * k1);
        let k3 = f(y + 0.5 * dt * k2);
        let k4 = f(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(y.abs() <= RK4_BLOWUP_LIMIT) {
            return Rk4Trajectory { values, blow_up_suspected_at: Some((k + 1) as f64 * dt) };
        }
        values.push(y);
    }
    Rk4Trajectory { values, blow_up_suspected_at: None }
}

/// Eigenvalue `theta` of the skew pair `+-i theta` of `T#` under
/// `T#' = -2 T# ((T#)^2 + Phi)`, i.e. `theta' = 2 theta (theta^2 - Phi)`.
/// Uses `mu = theta^2`.
pub fn tsharp_eigen_flow(theta0: f64, phi_param: f64, t: f64) -> Result<f64> {
    if !(theta0 > 0.0) {
        return Err(Error::InvalidArgument(format!("theta0 = {theta0} must be positive")));
    }
    Ok(eigen_closed_form(theta0 * theta0, phi_param, t)?.sqrt())
}

/// RK4 directly on the `theta` equation.
pub fn tsharp_rk4(theta0: f64, phi_param: f64, dt: f64, steps: usize) -> Rk4Trajectory {
    rk4_scalar(|th| 2.0 * th * (th * th - phi_param), theta0, dt, steps)
}

/// `Ric_N(t) = sum_i mu_i(t)`.
pub fn ric_n_flow(state: &EigenFlowState, t: f64) -> Result<f64> {
    Ok(state.at(t)?.iter().sum())
}

/// Margin of `d/dt Ric_N >= (4/n) Ric_N^2 - 4 Phi Ric_N` at time `t`,
/// using the exact derivative `4 tr(R_N^2) - 4 Phi Ric_N`.
pub fn ric_n_inequality_margin(state: &EigenFlowState, t: f64) -> Result<f64> {
    let mus = state.at(t)?;
    let ric: f64 = mus.iter().sum();
    let tr_sq: f64 = mus.iter().map(|m| m * m).sum();
    let lhs = 4.0 * tr_sq - 4.0 * state.phi_param * ric;
    let rhs = 4.0 / state.n as f64 * ric * ric - 4.0 * state.phi_param * ric;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point() {
        for t in [-3.0, 0.0, 0.5, 40.0] {
            assert!((eigen_closed_form(2.0, 2.0, t).unwrap() - 2.0).abs() < 1e-15);
        }
        let rk = eigen_rk4(1.5, 1.5, 1e-3, 1000);
        assert!(rk.values.iter().all(|v| (v - 1.5).abs() < 1e-15));
    }

    #[test]
    fn limits_in_both_directions() {
        assert!((eigen_closed_form(0.5, 1.0, -10.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(eigen_closed_form(0.5, 1.0, 10.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn blow_up_above_phi() {
        let t_star = blow_up_time(2.0, 1.0).unwrap();
        assert!((t_star - 2f64.ln() / 4.0).abs() < 1e-15);
        assert_eq!(eigen_closed_form(2.0, 1.0, t_star + 1e-9), Err(Error::BlowUp { t_star }));
        assert!(eigen_closed_form(2.0, 1.0, t_star - 1e-3).unwrap() > 100.0);
        assert_eq!(blow_up_time(1.0, 0.0), Some(0.25));
        // Negative Phi also blows up.
        assert!(blow_up_time(0.5, -1.0).unwrap() > 0.0);
    }

    #[test]
    fn rk4_matches_closed_form() {
        let rk = eigen_rk4(0.5, 1.0, 1e-3, 5000);
        let exact = eigen_closed_form(0.5, 1.0, 5.0).unwrap();
        assert!((rk.values[5000] - exact).abs() < 1e-8);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let err = |dt: f64| {
            let steps = (1.0 / dt).round() as usize;
            (eigen_rk4(0.5, 1.0, dt, steps).values[steps] - eigen_closed_form(0.5, 1.0, 1.0).unwrap()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn tsharp_consistency() {
        // theta0^2 == Phi exactly; mu0 > Phi by one ulp would drift off the
        // unstable fixed point.
        assert_eq!(tsharp_eigen_flow(1.5, 2.25, 3.0).unwrap(), 1.5);
        assert!(tsharp_eigen_flow(1.0, 2.0, 50.0).unwrap() < 1e-12);
        let rk = tsharp_rk4(0.8, 1.0, 1e-3, 2000);
        assert!((rk.values[2000] - tsharp_eigen_flow(0.8, 1.0, 2.0).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn ric_n_examples() {
        let s = EigenFlowState::new(vec![1.5, 1.5, 1.5, 1.5], 1.5).unwrap();
        assert!((ric_n_flow(&s, 2.0).unwrap() - 6.0).abs() < 1e-14);
        let s = EigenFlowState::new(vec![0.5, 0.5], 1.0).unwrap();
        let expect = 2.0 * eigen_closed_form(0.5, 1.0, 0.7).unwrap();
        assert!((ric_n_flow(&s, 0.7).unwrap() - expect).abs() < 1e-15);
        assert!(ric_n_inequality_margin(&s, 0.7).unwrap().abs() < 1e-14);
    }

    #[test]
    fn state_validation() {
        assert!(EigenFlowState::new(vec![1.0, 1.0, 1.0], 1.0).is_err());
        let odd = EigenFlowState::new(vec![1.0, 0.0, 0.5], 1.0).unwrap();
        assert_eq!(odd.at(3.0).unwrap()[1], 0.0);
        assert!(EigenFlowState::new(vec![-1.0, 1.0], 1.0).is_err());
    }
}
