//! Evolution of the warping function under the normalized partial Ricci
//! flow of a warped product,
//!
//! ```text
//! phi_t = phi_xx + Phi phi,   phi(0, x) = phi0(x),
//! phi(t, 0) = mu0(t),         phi(t, l) = mu1(t),
//! ```
//!
//! with two independent backends: Crank–Nicolson finite differences
//! ([`evolve_fd`]) and a sine-series exponential integrator built on the
//! splitting `phi = phi_stat + U + v` ([`evolve_spectral`]).

mod boundary;
mod fd;
mod series;
mod spectral;

use serde::{Deserialize, Serialize};

pub use boundary::{BoundaryData, EndpointData, ExpTerm};
pub use fd::evolve_fd;
pub use series::{sine_coefficients, SineSeries};
pub use spectral::{evolve_spectral, reference_profile, ReferenceProfile};

use crate::error::{Error, Result};
use crate::geometry::WarpedProductMetric;
use crate::numerics::sup_norm;

/// Values beyond this magnitude mark a run as divergent.
pub const OVERFLOW_THRESHOLD: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    FiniteDifference,
    Spectral,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    /// Normalization constant `Phi`.
    pub phi_param: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Grid intervals.
    pub m: usize,
    pub backend: Backend,
    /// Spectral truncation `J`.
    pub modes: usize,
    /// Record every `snapshot_stride`-th step (the final step is always
    /// recorded).
    pub snapshot_stride: usize,
}

impl FlowConfig {
    /// Finite-difference backend, `J = m / 2`, every step recorded.
    pub fn new(phi_param: f64, t_end: f64, dt: f64, m: usize) -> Self {
        Self {
            phi_param,
            t_end,
            dt,
            m,
            backend: Backend::FiniteDifference,
            modes: (m / 2).max(4),
            snapshot_stride: 1,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_modes(mut self, modes: usize) -> Self {
        self.modes = modes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be >= dt", self.t_end));
        }
        if self.m < 8 {
            return bad(format!("m = {} must be >= 8", self.m));
        }
        if self.modes < 4 {
            return bad(format!("spectral modes J = {} must be >= 4", self.modes));
        }
        if self.snapshot_stride == 0 {
            return bad("snapshot_stride must be >= 1".into());
        }
        if !self.phi_param.is_finite() {
            return bad("Phi must be finite".into());
        }
        Ok(())
    }

    /// Number of time steps and the step actually used (`t_end / steps`).
    pub fn steps(&self) -> (usize, f64) {
        let steps = ((self.t_end / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (steps, self.t_end / steps as f64)
    }

    /// Step indices at which snapshots are recorded.
    pub(crate) fn snapshot_steps(&self) -> Vec<usize> {
        let (steps, _) = self.steps();
        let mut out: Vec<usize> = (0..=steps).step_by(self.snapshot_stride).collect();
        if *out.last().unwrap() != steps {
            out.push(steps);
        }
        out
    }
}

/// Time-ordered warping-function snapshots produced by one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<WarpedProductMetric>,
    pub backend: Backend,
    pub boundary: BoundaryData,
    pub phi_param: f64,
    /// Time at which the overflow threshold was crossed; the trajectory
    /// stops at the last finite snapshot before it.
    pub diverged_at: Option<f64>,
    /// Spectral backend only: estimated `sum_{j > J} |v_j^0|` from the
    /// decay of the computed coefficients.
    pub spectral_tail: Option<f64>,
}

impl Trajectory {
    pub fn l(&self) -> f64 {
        self.snapshots[0].l()
    }

    pub fn m(&self) -> usize {
        self.snapshots[0].m()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &WarpedProductMetric {
        self.snapshots.last().expect("trajectory has at least the initial snapshot")
    }

    /// `sup_x |phi(t_k, x) - reference(x)|` for every snapshot.
    pub fn deviation_from(&self, reference: &[f64]) -> Vec<f64> {
        self.snapshots
            .iter()
            .map(|s| s.phi().iter().zip(reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .collect()
    }

    /// Per-snapshot sup-norm distance to another trajectory on the same
    /// grid and snapshot schedule, together with the sup-norm of `self`.
    pub fn distance_to(&self, other: &Trajectory) -> Result<Vec<(f64, f64, f64)>> {
        if self.m() != other.m() {
            return Err(Error::InvalidArgument("trajectories use different grids".into()));
        }
        let mut out = Vec::new();
        for (k, (t, s)) in self.times.iter().zip(&self.snapshots).enumerate() {
            let Some(o) = other.snapshots.get(k) else { break };
            if (other.times[k] - t).abs() > 1e-9 * t.abs().max(1.0) {
                return Err(Error::InvalidArgument("snapshot schedules differ".into()));
            }
            let d = s.phi().iter().zip(o.phi()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            out.push((*t, d, sup_norm(s.phi())));
        }
        Ok(out)
    }
}

/// Output of [`evolve`]: one trajectory per requested backend.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowOutput {
    pub fd: Option<Trajectory>,
    pub spectral: Option<Trajectory>,
}

impl FlowOutput {
    /// The finite-difference trajectory if present, else the spectral one.
    pub fn primary(&self) -> &Trajectory {
        self.fd.as_ref().or(self.spectral.as_ref()).expect("at least one backend ran")
    }
}

/// Run the backend(s) selected by `cfg.backend`.
pub fn evolve(phi0: &WarpedProductMetric, bd: &BoundaryData, cfg: &FlowConfig) -> Result<FlowOutput> {
    let (fd, spectral) = match cfg.backend {
        Backend::FiniteDifference => (Some(evolve_fd(phi0, bd, cfg)?), None),
        Backend::Spectral => (None, Some(evolve_spectral(phi0, bd, cfg)?)),
        Backend::Both => (Some(evolve_fd(phi0, bd, cfg)?), Some(evolve_spectral(phi0, bd, cfg)?)),
    };
    Ok(FlowOutput { fd, spectral })
}

/// Shared preconditions of both backends.
pub(crate) fn check_inputs(phi0: &WarpedProductMetric, bd: &BoundaryData, cfg: &FlowConfig) -> Result<()> {
    cfg.validate()?;
    if phi0.m() != cfg.m {
        return Err(Error::InvalidConfig(format!(
            "initial data has m = {} intervals, config says {}",
            phi0.m(),
            cfg.m
        )));
    }
    bd.validate(cfg.t_end)?;
    let [mu0, mu1] = bd.mu(0.0);
    let phi = phi0.phi();
    let gap = (phi[0] - mu0).abs().max((phi[phi0.m()] - mu1).abs());
    if gap > 1e-8 {
        return Err(Error::BoundaryMismatch { gap });
    }
    Ok(())
}

/// Boundary lift `U(t, x) = delta0(t) (l - x) / l + delta1(t) x / l`.
pub fn lift_u(bd: &BoundaryData, t: f64, x: f64, l: f64) -> f64 {
    let [d0, d1] = bd.delta(t);
    d0 * (l - x) / l + d1 * x / l
}

/// Forcing `f = Phi U - U_t` of the equation for `v = phi - phi_stat - U`.
pub fn forcing_term(bd: &BoundaryData, phi_param: f64, t: f64, x: f64, l: f64) -> f64 {
    let [d0, d1] = bd.delta(t);
    let [p0, p1] = bd.delta_prime(t);
    (phi_param * d0 - p0) + (x / l) * (phi_param * (d1 - d0) + p0 - p1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_examples() {
        let frozen = BoundaryData::constant(1.0, 3.0);
        assert_eq!(lift_u(&frozen, 2.0, 0.3, 1.0), 0.0);

        let decaying = BoundaryData::new(EndpointData::exponential(0.0, 1.0, 1.0), EndpointData::constant(0.0));
        assert!((lift_u(&decaying, 0.7, 0.0, 2.0) - (-0.7f64).exp()).abs() < 1e-16);

        // Frozen deviations delta0 = 1, delta1 = 3 at l = 2, x = 1:
        // 1 * (2 - 1)/2 + 3 * 1/2 = 2.
        let frozen_dev = BoundaryData::new(
            EndpointData::exponential(0.0, 1.0, 1e-300),
            EndpointData::exponential(0.0, 3.0, 1e-300),
        );
        assert!((lift_u(&frozen_dev, 0.0, 1.0, 2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn forcing_examples() {
        assert_eq!(forcing_term(&BoundaryData::constant(2.0, 5.0), 3.0, 1.0, 0.4, 1.0), 0.0);

        // Phi = 0, delta0 = e^{-t}: f(t, 0) = -delta0' = e^{-t}.
        let bd = BoundaryData::new(EndpointData::exponential(0.0, 1.0, 1.0), EndpointData::constant(0.0));
        let t = 0.8;
        assert!((forcing_term(&bd, 0.0, t, 0.0, 1.0) - (-t).exp()).abs() < 1e-16);

        // Phi = 1 with both deviations frozen at c: f = Phi c = c at any x.
        let c = 0.37;
        let frozen = BoundaryData::new(
            EndpointData::exponential(0.0, c, 1e-300),
            EndpointData::exponential(0.0, c, 1e-300),
        );
        for x in [0.0, 0.25, 1.0] {
            assert!((forcing_term(&frozen, 1.0, 0.0, x, 1.0) - c).abs() < 1e-15);
        }
    }

    #[test]
    fn snapshot_schedule_includes_final_step() {
        let cfg = FlowConfig::new(0.0, 1.0, 0.3, 8).with_stride(2);
        let (steps, dt) = cfg.steps();
        assert_eq!(steps, 4);
        assert_eq!(dt, 0.25);
        assert_eq!(cfg.snapshot_steps(), vec![0, 2, 4]);
        let cfg = FlowConfig::new(0.0, 1.0, 0.1, 8).with_stride(3);
        assert_eq!(cfg.snapshot_steps(), vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::new(0.0, 1.0, 0.0, 8).validate().is_err());
        assert!(FlowConfig::new(0.0, 0.01, 0.1, 8).validate().is_err());
        assert!(FlowConfig::new(0.0, 1.0, 0.1, 7).validate().is_err());
        assert!(FlowConfig::new(0.0, 1.0, 0.1, 8).with_stride(0).validate().is_err());
        assert!(FlowConfig::new(0.0, 1.0, 0.1, 8).with_modes(3).validate().is_err());
        assert!(FlowConfig::new(0.0, 1.0, 0.1, 8).validate().is_ok());
    }

    fn sine(m: usize, l: f64, amplitude: f64) -> WarpedProductMetric {
        WarpedProductMetric::from_fn(l, 1, m, |x| amplitude * (std::f64::consts::PI * x / l).sin()).unwrap()
    }

    fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn both_backends_follow_the_decaying_mode() {
        use std::f64::consts::PI;
        let phi0 = sine(100, 1.0, 1.0);
        let cfg = FlowConfig::new(2.0, 0.5, 1e-3, 100).with_backend(Backend::Both).with_stride(100);
        let out = evolve(&phi0, &BoundaryData::zero(), &cfg).unwrap();
        let decay = ((2.0 - PI * PI) * 0.5).exp();
        let exact: Vec<f64> = phi0.phi().iter().map(|v| decay * v).collect();
        // CN error in the decay factor: h^2 pi^4 / 12 (space) plus dt^2 lambda^3 / 12 (time), times t.
        assert!(sup_gap(out.fd.unwrap().last().phi(), &exact) < 1e-4);
        assert!(sup_gap(out.spectral.unwrap().last().phi(), &exact) < 1e-12);
    }

    #[test]
    fn resonant_mode_is_neutral() {
        use std::f64::consts::PI;
        let l = 2.0;
        let phi0 = sine(64, l, 0.7);
        let cfg = FlowConfig::new((PI / l).powi(2), 3.0, 1e-2, 64).with_backend(Backend::Spectral);
        let traj = evolve_spectral(&phi0, &BoundaryData::zero(), &cfg).unwrap();
        assert!(sup_gap(traj.last().phi(), phi0.phi()) < 1e-12);
    }

    #[test]
    fn stationary_profile_is_a_fixed_point() {
        use std::f64::consts::PI;
        let phi = 0.5 * PI * PI;
        let st = crate::stationary::stationary_solution(phi, 1.0, 1.0, 2.0, None).unwrap();
        let m = 100;
        let phi0 = WarpedProductMetric::new(1.0, 1, st.sample(m).unwrap()).unwrap();
        let bd = BoundaryData::constant(1.0, 2.0);
        let cfg = FlowConfig::new(phi, 2.0, 1e-3, m).with_backend(Backend::Both);
        let out = evolve(&phi0, &bd, &cfg).unwrap();
        assert!(sup_gap(out.spectral.unwrap().last().phi(), phi0.phi()) < 1e-12);
        // The discrete steady state differs by the stencil error
        // h^2 Phi^2 sup|phi| / 12 divided by the spectral gap pi^2 - Phi,
        // doubled for the discrete gap.
        let h = 1.0 / m as f64;
        let tol = 2.0 * h * h * phi * phi * sup_norm(phi0.phi()) / 12.0 / (PI * PI - phi);
        assert!(sup_gap(out.fd.unwrap().last().phi(), phi0.phi()) < tol);
    }

    #[test]
    fn flow_is_linear_in_the_data() {
        let m = 40;
        let base = WarpedProductMetric::from_fn(1.0, 1, m, |x| x * (1.0 - x) + (3.0 * x).sin().abs()).unwrap();
        let cfg = FlowConfig::new(1.5, 0.3, 1e-2, m);
        for backend in [Backend::FiniteDifference, Backend::Spectral] {
            let cfg = cfg.clone().with_backend(backend);
            let bd = BoundaryData::constant(base.phi()[0], base.phi()[m]);
            let bd3 = BoundaryData::constant(3.0 * base.phi()[0], 3.0 * base.phi()[m]);
            let one = evolve(&base, &bd, &cfg).unwrap();
            let three = evolve(&base.scaled(3.0).unwrap(), &bd3, &cfg).unwrap();
            let scaled: Vec<f64> = one.primary().last().phi().iter().map(|v| 3.0 * v).collect();
            assert!(sup_gap(three.primary().last().phi(), &scaled) < 1e-12 * sup_norm(&scaled).max(1.0));
        }
    }

    #[test]
    fn nonnegative_data_stays_nonnegative() {
        // Crank-Nicolson is positivity preserving for dt / h^2 <= 1.
        let m = 50;
        let phi0 = WarpedProductMetric::from_fn(1.0, 1, m, |x| if (0.4..0.6).contains(&x) { 1.0 } else { 0.0 }).unwrap();
        let h = 1.0 / m as f64;
        let cfg = FlowConfig::new(0.5, 0.2, 0.9 * h * h, m);
        let traj = evolve_fd(&phi0, &BoundaryData::zero(), &cfg).unwrap();
        for s in &traj.snapshots {
            assert!(s.phi().iter().all(|v| *v >= 0.0));
        }
    }
}
