//! Convergence estimates for the warped-product flow and the evidence
//! that they hold along computed trajectories.
//!
//! With `k = (pi/l)^2`, `delta_j = mu_j - mu_tilde_j` and
//! `nu(t) = |Phi| (|delta_0| + |delta_1|) + |delta_0'| + |delta_1'|`:
//!
//! * subcritical (`Phi < k`), for any `theta in (0, 1)`:
//!   `|phi - phi_stat| <= max|delta_j| + M0 e^{(Phi-k)t} |v0|
//!      + M1 (k-Phi)^-1 e^{(1-theta)(Phi-k)t} sup_[0,theta t] nu
//!      + M2 sup_[theta t, t] nu`;
//! * resonance (`Phi = k`, `mu_tilde = 0`, integrable deviations):
//!   `|phi - phi_inf| <= (6/pi) int_t^inf nu + max|delta_j|
//!      + M0~ e^{-3kt} |v0| + M1~ (2 l^2/pi^3) e^{-3(1-theta)kt} sup_[0,theta t] nu
//!      + (3 l^2 / (2 pi^3)) sup_[theta t, t] nu`.
//!
//! Series constants are summed to relative precision `1e-15` and carry a
//! certified bound on the dropped tail.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{lift_u, sine_coefficients, BoundaryData, SineSeries, Trajectory};
use crate::geometry::WarpedProductMetric;
use crate::numerics::{fit_line, simpson, sup_norm};
use crate::stationary::{critical_phi, is_resonant, stationary_solution, Regime};

/// Samples used for the supremum of `nu` over an interval when no closed
/// form is available.
const NU_SUP_SAMPLES: usize = 1000;

/// `nu(t) = |Phi| (|delta_0| + |delta_1|) + |delta_0'| + |delta_1'|`.
pub fn nu(bd: &BoundaryData, phi_param: f64, t: f64) -> f64 {
    let [d0, d1] = bd.delta(t);
    let [p0, p1] = bd.delta_prime(t);
    phi_param.abs() * (d0.abs() + d1.abs()) + p0.abs() + p1.abs()
}

/// `sup nu` over `[t0, t1]`. Closed-form families decay monotonically so
/// the supremum sits at `t0`; tabulated data is sampled densely.
pub fn nu_sup(bd: &BoundaryData, phi_param: f64, t0: f64, t1: f64) -> f64 {
    if bd.is_closed_form() || t1 <= t0 {
        return nu(bd, phi_param, t0);
    }
    (0..=NU_SUP_SAMPLES)
        .map(|k| nu(bd, phi_param, t0 + (t1 - t0) * k as f64 / NU_SUP_SAMPLES as f64))
        .fold(0.0, f64::max)
}

/// `int_t^inf nu`, closed form for exponential families.
pub fn nu_tail_integral(bd: &BoundaryData, phi_param: f64, t: f64) -> Result<f64> {
    let mut total = 0.0;
    for e in bd.endpoints() {
        let (dev, dev_prime) = e.integrated_deviation(t).ok_or(Error::NonIntegrableBoundary)?;
        total += phi_param.abs() * dev + dev_prime;
    }
    Ok(total)
}

/// Partial sum of a positive series plus a certified bound on its tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail: f64,
    pub terms: usize,
}

/// `sum_{j >= first} e^{s (base - j^2)}`, `s > 0`, truncated after `max_terms`
/// terms or once the next term drops below `1e-15` of the partial sum.
///
/// Tail: `sum_{j > J} e^{s(base - j^2)} <= e^{s(base - J^2)} / (2 s J)`.
fn gaussian_series(s: f64, first: usize, base: f64, max_terms: Option<usize>) -> SeriesValue {
    let mut sum = 0.0;
    let mut j = first;
    let mut terms = 0;
    loop {
        let term = (s * (base - (j * j) as f64)).exp();
        if terms > 0 && (term < 1e-15 * sum || max_terms.is_some_and(|m| terms >= m)) {
            break;
        }
        sum += term;
        terms += 1;
        j += 1;
    }
    let last = (j - 1) as f64;
    let tail = (s * (base - last * last)).exp() / (2.0 * s * last);
    SeriesValue { value: sum, tail, terms }
}

fn sqrt_series(v: SeriesValue) -> SeriesValue {
    let value = v.value.sqrt();
    SeriesValue { value, tail: (v.value + v.tail).sqrt() - value, terms: v.terms }
}

fn require_positive_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::DivergentAtZero { t })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta = {theta} must lie in (0, 1)")))
    }
}

/// `M0(t) = (sum_{j>=1} e^{2k(1-j^2)t})^{1/2}`.
pub fn m0(l: f64, t: f64) -> Result<SeriesValue> {
    m0_truncated(l, t, None)
}

pub fn m0_truncated(l: f64, t: f64, max_terms: Option<usize>) -> Result<SeriesValue> {
    require_positive_time(t)?;
    Ok(sqrt_series(gaussian_series(2.0 * critical_phi(l) * t, 1, 1.0, max_terms)))
}

/// `M1(t) = (6/pi) sum_{j>=1} e^{(1-theta)k(1-j^2)t}`.
pub fn m1(l: f64, t: f64, theta: f64) -> Result<SeriesValue> {
    m1_truncated(l, t, theta, None)
}

pub fn m1_truncated(l: f64, t: f64, theta: f64, max_terms: Option<usize>) -> Result<SeriesValue> {
    require_positive_time(t)?;
    check_theta(theta)?;
    let s = gaussian_series((1.0 - theta) * critical_phi(l) * t, 1, 1.0, max_terms);
    Ok(SeriesValue { value: 6.0 / PI * s.value, tail: 6.0 / PI * s.tail, terms: s.terms })
}

/// `M2 = (6/pi) sum_{j>=1} 1 / (j ((pi j/l)^2 - Phi))`, for `Phi < k`.
///
/// Summed until the certified tail is below `1e-13` of the partial sum.
pub fn m2(phi_param: f64, l: f64) -> Result<SeriesValue> {
    m2_truncated(phi_param, l, None)
}

pub fn m2_truncated(phi_param: f64, l: f64, max_terms: Option<usize>) -> Result<SeriesValue> {
    let k = critical_phi(l);
    if phi_param >= k || is_resonant(phi_param, l) {
        return Err(Error::SupercriticalM2 { phi_param, critical: k });
    }
    let pos = phi_param.max(0.0);
    // sum_{j>J} 1/(j (k j^2 - Phi)) <= 1 / (2 J^2 (k - Phi+/(J+1)^2))
    let tail_bound = |big_j: usize| {
        let jf = big_j as f64;
        1.0 / (2.0 * jf * jf * (k - pos / ((jf + 1.0) * (jf + 1.0))))
    };
    let mut sum = 0.0;
    let mut j = 0usize;
    loop {
        j += 1;
        let jf = j as f64;
        sum += 1.0 / (jf * (k * jf * jf - phi_param));
        if max_terms.is_some_and(|m| j >= m) || tail_bound(j) <= 1e-13 * sum.abs() {
            break;
        }
    }
    Ok(SeriesValue { value: 6.0 / PI * sum, tail: 6.0 / PI * tail_bound(j), terms: j })
}

/// `M0~(t) = (sum_{j>=2} e^{2k(4-j^2)t})^{1/2}`.
pub fn m0_resonance(l: f64, t: f64) -> Result<SeriesValue> {
    require_positive_time(t)?;
    Ok(sqrt_series(gaussian_series(2.0 * critical_phi(l) * t, 2, 4.0, None)))
}

/// `M1~(t) = sum_{j>=2} e^{(1-theta)k(4-j^2)t}`.
pub fn m1_resonance(l: f64, t: f64, theta: f64) -> Result<SeriesValue> {
    require_positive_time(t)?;
    check_theta(theta)?;
    Ok(gaussian_series((1.0 - theta) * critical_phi(l) * t, 2, 4.0, None))
}

/// All subcritical constants at one `(t, theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesConstants {
    pub m0: SeriesValue,
    pub m1: SeriesValue,
    pub m2: SeriesValue,
}

pub fn series_constants(phi_param: f64, l: f64, t: f64, theta: f64) -> Result<SeriesConstants> {
    Ok(SeriesConstants { m0: m0(l, t)?, m1: m1(l, t, theta)?, m2: m2(phi_param, l)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceConstants {
    pub m0: SeriesValue,
    pub m1: SeriesValue,
}

pub fn resonance_constants(l: f64, t: f64, theta: f64) -> Result<ResonanceConstants> {
    Ok(ResonanceConstants { m0: m0_resonance(l, t)?, m1: m1_resonance(l, t, theta)? })
}

/// Observed deviations against bound values at the snapshot times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub times: Vec<f64>,
    /// `sup_x |phi(t, x) - reference(x)|`.
    pub observed_deviation: Vec<f64>,
    pub bound_value: Vec<f64>,
    pub theta: f64,
    /// `bound - observed`.
    pub margin: Vec<f64>,
    /// Largest certified bound on the dropped series tails.
    pub truncation_tail: f64,
}

impl BoundReport {
    pub fn min_margin(&self) -> f64 {
        self.margin.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether every margin is above `-slack`.
    pub fn holds(&self, slack: f64) -> bool {
        self.margin.iter().all(|m| *m >= -slack)
    }
}

/// Bound value with its truncation tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub tail: f64,
}

/// `v0 = phi0 - reference - U(0, .)` relative to the lift of `bd`.
fn initial_remainder(phi0: &WarpedProductMetric, bd: &BoundaryData, reference: &[f64]) -> Vec<f64> {
    let l = phi0.l();
    (0..=phi0.m())
        .map(|i| phi0.phi()[i] - reference[i] - lift_u(bd, 0.0, phi0.x(i), l))
        .collect()
}

fn l2_norm(v: &[f64], dx: f64) -> f64 {
    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    simpson(&sq, dx).max(0.0).sqrt()
}

/// Data the subcritical estimate needs from a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SubcriticalSetup {
    pub phi_param: f64,
    pub l: f64,
    pub boundary: BoundaryData,
    /// `||phi0 - phi_stat - U(0, .)||_{L2}`.
    pub v0_l2: f64,
    /// Stationary profile on the run grid.
    pub reference: Vec<f64>,
    /// `M2`, independent of `t` and `theta`.
    pub m2: SeriesValue,
}

impl SubcriticalSetup {
    pub fn new(phi0: &WarpedProductMetric, bd: &BoundaryData, phi_param: f64) -> Result<Self> {
        let l = phi0.l();
        let [t0, t1] = bd.mu_tilde();
        let st = stationary_solution(phi_param, l, t0, t1, None)?;
        if !matches!(st.regime, Regime::SubcriticalTrig | Regime::Zero | Regime::Negative) {
            return Err(Error::SupercriticalM2 { phi_param, critical: critical_phi(l) });
        }
        let reference = st.sample(phi0.m()).expect("solvable regime");
        let v0 = initial_remainder(phi0, bd, &reference);
        Ok(Self {
            phi_param,
            l,
            boundary: bd.clone(),
            v0_l2: l2_norm(&v0, phi0.dx()),
            reference,
            m2: m2(phi_param, l)?,
        })
    }

    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        Self::new(&traj.snapshots[0], &traj.boundary, traj.phi_param)
    }
}

/// Right side of the subcritical estimate at time `t > 0`.
pub fn subcritical_bound(setup: &SubcriticalSetup, theta: f64, t: f64) -> Result<BoundValue> {
    let (phi, l, bd) = (setup.phi_param, setup.l, &setup.boundary);
    let c = SeriesConstants { m0: m0(l, t)?, m1: m1(l, t, theta)?, m2: setup.m2 };
    let gap = critical_phi(l) - phi;
    let [d0, d1] = bd.delta(t);
    let early = nu_sup(bd, phi, 0.0, theta * t);
    let late = nu_sup(bd, phi, theta * t, t);
    let w0 = (-gap * t).exp() * setup.v0_l2;
    let w1 = (-(1.0 - theta) * gap * t).exp() / gap * early;
    let value = d0.abs().max(d1.abs()) + c.m0.value * w0 + c.m1.value * w1 + c.m2.value * late;
    let tail = c.m0.tail * w0 + c.m1.tail * w1 + c.m2.tail * late;
    Ok(BoundValue { value, tail })
}

/// Subcritical estimate against the observed deviation from the
/// stationary profile at every snapshot with `t >= t_min`.
pub fn subcritical_report(traj: &Trajectory, theta: f64, t_min: f64) -> Result<BoundReport> {
    let setup = SubcriticalSetup::from_trajectory(traj)?;
    let observed = traj.deviation_from(&setup.reference);
    let mut report = empty_report(theta);
    for (k, &t) in traj.times.iter().enumerate() {
        if t < t_min {
            continue;
        }
        let b = subcritical_bound(&setup, theta, t)?;
        push_entry(&mut report, t, observed[k], b);
    }
    Ok(report)
}

fn empty_report(theta: f64) -> BoundReport {
    BoundReport {
        times: vec![],
        observed_deviation: vec![],
        bound_value: vec![],
        theta,
        margin: vec![],
        truncation_tail: 0.0,
    }
}

fn push_entry(report: &mut BoundReport, t: f64, observed: f64, b: BoundValue) {
    report.times.push(t);
    report.observed_deviation.push(observed);
    report.bound_value.push(b.value);
    report.margin.push(b.value - observed);
    report.truncation_tail = report.truncation_tail.max(b.tail);
}

fn check_resonance_inputs(bd: &BoundaryData, phi_param: f64, l: f64) -> Result<()> {
    if !is_resonant(phi_param, l) {
        return Err(Error::NotResonant { phi_param, critical: critical_phi(l) });
    }
    if !bd.is_closed_form() {
        return Err(Error::NonIntegrableBoundary);
    }
    let [t0, t1] = bd.mu_tilde();
    if t0 != 0.0 || t1 != 0.0 {
        return Err(Error::InvalidBoundary(format!(
            "resonance estimate needs vanishing limits, got {t0}, {t1}"
        )));
    }
    Ok(())
}

/// Limit `phi_inf = (v_1^0 + int_0^inf f_1) sin(pi x / l)` of a resonance
/// run. `v_1^0` comes from Simpson quadrature, the forcing integral is
/// closed form: `f_1 = (2/pi)(g_0 + g_1)`, `g_j = Phi delta_j - delta_j'`.
pub fn limit_profile_resonance(phi0: &WarpedProductMetric, bd: &BoundaryData) -> Result<SineSeries> {
    let l = phi0.l();
    let phi_param = critical_phi(l);
    check_resonance_inputs(bd, phi_param, l)?;
    let mut v0 = initial_remainder(phi0, bd, &vec![0.0; phi0.m() + 1]);
    let m = phi0.m();
    v0[0] = 0.0;
    v0[m] = 0.0;
    let v10 = sine_coefficients(&v0, l, 1)?.coeffs[0];
    let mut forcing = 0.0;
    for e in bd.endpoints() {
        let d0 = e.delta(0.0);
        let (dev, _) = e.integrated_deviation(0.0).ok_or(Error::NonIntegrableBoundary)?;
        // int_0^inf delta = d0 / rate (dev carries |d0| / rate), int delta' = -d0.
        forcing += phi_param * dev.copysign(d0) + d0;
    }
    Ok(SineSeries::new(l, vec![v10 + 2.0 / PI * forcing]))
}

/// Right side of the resonance estimate at time `t > 0`.
pub fn resonance_bound(phi0: &WarpedProductMetric, bd: &BoundaryData, theta: f64, t: f64) -> Result<BoundValue> {
    let l = phi0.l();
    let k = critical_phi(l);
    check_resonance_inputs(bd, k, l)?;
    let c = resonance_constants(l, t, theta)?;
    let v0 = initial_remainder(phi0, bd, &vec![0.0; phi0.m() + 1]);
    let v0_l2 = l2_norm(&v0, phi0.dx());
    let [d0, d1] = bd.delta(t);
    let early = nu_sup(bd, k, 0.0, theta * t);
    let late = nu_sup(bd, k, theta * t, t);
    let pi3 = PI.powi(3);
    let w0 = (-3.0 * k * t).exp() * v0_l2;
    let w1 = 2.0 * l * l / pi3 * (-3.0 * (1.0 - theta) * k * t).exp() * early;
    let value = 6.0 / PI * nu_tail_integral(bd, k, t)?
        + d0.abs().max(d1.abs())
        + c.m0.value * w0
        + c.m1.value * w1
        + 3.0 * l * l / (2.0 * pi3) * late;
    Ok(BoundValue { value, tail: c.m0.tail * w0 + c.m1.tail * w1 })
}

/// Resonance estimate against the deviation from the limit profile.
pub fn resonance_report(traj: &Trajectory, theta: f64, t_min: f64) -> Result<BoundReport> {
    let phi0 = &traj.snapshots[0];
    check_resonance_inputs(&traj.boundary, traj.phi_param, phi0.l())?;
    let limit = limit_profile_resonance(phi0, &traj.boundary)?.sample(phi0.m());
    let observed = traj.deviation_from(&limit);
    let mut report = empty_report(theta);
    for (k, &t) in traj.times.iter().enumerate() {
        if t < t_min {
            continue;
        }
        let b = resonance_bound(phi0, &traj.boundary, theta, t)?;
        push_entry(&mut report, t, observed[k], b);
    }
    Ok(report)
}

/// Envelope for `y' = alpha(t) y + nu(t)` with `alpha <= a < 0`:
/// `|y(t)| <= |y0| e^{at} + |a|^-1 e^{(1-theta)at} sup_[0,theta t]|nu|
///  + |a|^-1 sup_[theta t, t]|nu|`.
pub fn ode_envelope(a: f64, y0: f64, nu_sup_left: f64, nu_sup_right: f64, t: f64, theta: f64) -> Result<f64> {
    if !(a < 0.0) {
        return Err(Error::NonNegativeRate { rate: a });
    }
    check_theta(theta)?;
    if t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be >= 0")));
    }
    let inv = 1.0 / a.abs();
    Ok(y0.abs() * (a * t).exp() + inv * ((1.0 - theta) * a * t).exp() * nu_sup_left + inv * nu_sup_right)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    Exponential,
    Linear,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceFit {
    pub kind: GrowthKind,
    /// Fitted exponential rate of the sup-norm (`Exponential`).
    pub rate: f64,
    /// Fitted slope of the first sine coefficient (`Linear`).
    pub slope: f64,
}

/// Snapshots needed after discarding the first half as transient.
pub const MIN_FIT_SNAPSHOTS: usize = 20;

/// First sine coefficient of `phi - (linear interpolant of its endpoint
/// values)`.
pub fn first_sine_coefficient(metric: &WarpedProductMetric) -> Result<f64> {
    let m = metric.m();
    let phi = metric.phi();
    let l = metric.l();
    let mut v: Vec<f64> = (0..=m)
        .map(|i| {
            let x = metric.x(i);
            phi[i] - (phi[0] * (l - x) / l + phi[m] * x / l)
        })
        .collect();
    v[0] = 0.0;
    v[m] = 0.0;
    Ok(sine_coefficients(&v, l, 1)?.coeffs[0])
}

/// Classify long-time behaviour from the second half of a trajectory:
/// bounded, linear growth of the first sine mode, or exponential growth of
/// the sup-norm.
pub fn divergence_rate(traj: &Trajectory) -> Result<DivergenceFit> {
    let n = traj.len();
    let start = n / 2;
    if n - start < MIN_FIT_SNAPSHOTS {
        return Err(Error::TooShort { found: n - start, needed: MIN_FIT_SNAPSHOTS });
    }
    let times = &traj.times[start..];
    let sups: Vec<f64> = traj.snapshots[start..].iter().map(|s| sup_norm(s.phi())).collect();
    let s_first = sups[0];
    let s_last = *sups.last().unwrap();
    if traj.diverged_at.is_none() && s_last <= 1.05 * s_first.max(1e-300) {
        return Ok(DivergenceFit { kind: GrowthKind::None, rate: 0.0, slope: 0.0 });
    }
    let c1: Vec<f64> = traj.snapshots[start..]
        .iter()
        .map(first_sine_coefficient)
        .collect::<Result<_>>()?;
    let lin = fit_line(times, &c1);
    let logs: Vec<f64> = sups.iter().map(|s| s.max(1e-300).ln()).collect();
    let exp = fit_line(times, &logs);
    if traj.diverged_at.is_none() && lin.r_squared >= 0.9999 {
        Ok(DivergenceFit { kind: GrowthKind::Linear, rate: exp.slope, slope: lin.slope })
    } else {
        Ok(DivergenceFit { kind: GrowthKind::Exponential, rate: exp.slope, slope: lin.slope })
    }
}

/// First sine coefficient of the constant forcing `(pi/l)^2 U0` of a
/// resonance run with frozen boundary values, by Simpson quadrature of
/// `(2/l) int_0^l (pi/l)^2 U0(s) sin(pi s / l) ds`. The first sine
/// coefficient of the solution grows with this slope.
pub fn frozen_resonance_slope(l: f64, mu_tilde: [f64; 2], m: usize) -> f64 {
    let k = critical_phi(l);
    let dx = l / m as f64;
    let f: Vec<f64> = (0..=m)
        .map(|i| {
            let s = i as f64 * dx;
            let u0 = mu_tilde[0] * (l - s) / l + mu_tilde[1] * s / l;
            k * u0 * (PI * s / l).sin()
        })
        .collect();
    2.0 / l * simpson(&f, dx)
}

/// `(2 n pi^2 / l^3)(mu0 + mu1) int_0^l s sin(pi s / l) ds`, the same slope
/// written with a fiber-dimension factor `n`. It agrees with
/// [`frozen_resonance_slope`] only for `n = 1` and `l = 1`; kept to report
/// the discrepancy.
pub fn fiber_scaled_slope(n: usize, l: f64, mu_tilde: [f64; 2], m: usize) -> f64 {
    let dx = l / m as f64;
    let f: Vec<f64> = (0..=m)
        .map(|i| {
            let s = i as f64 * dx;
            s * (PI * s / l).sin()
        })
        .collect();
    2.0 * n as f64 * PI * PI / l.powi(3) * (mu_tilde[0] + mu_tilde[1]) * simpson(&f, dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::EndpointData;

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&BoundaryData::constant(1.0, 2.0), 3.0, 0.5), 0.0);
        let bd = BoundaryData::new(EndpointData::exponential(0.0, 1.0, 1.0), EndpointData::constant(0.0));
        assert!((nu(&bd, 0.0, 0.3) - (-0.3f64).exp()).abs() < 1e-16);
        let bd = BoundaryData::new(EndpointData::exponential(0.0, 1.0, 1.0), EndpointData::exponential(0.0, 1.0, 1.0));
        assert!((nu(&bd, 2.0, 0.3) - 6.0 * (-0.3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn series_limits_at_large_t() {
        let v = m0(1.0, 50.0).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
        let v = m1(1.0, 50.0, 0.5).unwrap();
        assert!((v.value - 6.0 / PI).abs() < 1e-14);
        let v = m0_resonance(1.0, 50.0).unwrap();
        assert!((v.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn m2_is_six_over_pi_zeta3() {
        // Apery's constant and an independent direct summation.
        const ZETA3: f64 = 1.202_056_903_159_594_3;
        let direct: f64 = (1..2_000_000u64).rev().map(|j| 1.0 / (j as f64).powi(3)).sum();
        assert!((direct - ZETA3).abs() < 1e-12);
        let v = m2(0.0, PI).unwrap();
        assert!((v.value - 6.0 / PI * ZETA3).abs() < 1e-10, "{}", v.value);
        assert!((v.value - 2.2958).abs() < 1e-4);
        assert!(v.tail < 1e-12);
    }

    #[test]
    fn series_errors() {
        assert_eq!(m0(1.0, 0.0), Err(Error::DivergentAtZero { t: 0.0 }));
        assert!(matches!(m1(1.0, -1.0, 0.5), Err(Error::DivergentAtZero { .. })));
        assert!(matches!(m2(PI * PI, 1.0), Err(Error::SupercriticalM2 { .. })));
        assert!(matches!(m2(20.0, 1.0), Err(Error::SupercriticalM2 { .. })));
        assert!(matches!(m1(1.0, 1.0, 1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn tails_certify_truncation() {
        // Truncating early never loses more than the reported tail.
        for t in [0.01, 0.1, 1.0] {
            let full = m0(1.0, t).unwrap();
            for terms in [1, 2, 3, 5] {
                let cut = m0_truncated(1.0, t, Some(terms)).unwrap();
                assert!(full.value - cut.value <= cut.tail + 1e-15, "t = {t}, J = {terms}");
            }
            let full = m1(1.0, t, 0.3).unwrap();
            for terms in [1, 2, 4] {
                let cut = m1_truncated(1.0, t, 0.3, Some(terms)).unwrap();
                assert!(full.value - cut.value <= cut.tail + 1e-14);
            }
        }
        let full = m2(3.0, 1.0).unwrap();
        for terms in [1, 5, 50] {
            let cut = m2_truncated(3.0, 1.0, Some(terms)).unwrap();
            assert!(full.value - cut.value <= cut.tail + 1e-12);
        }
    }

    #[test]
    fn ode_envelope_cases() {
        assert_eq!(ode_envelope(-2.0, 3.0, 0.0, 0.0, 1.0, 0.5).unwrap(), 3.0 * (-2.0f64).exp());
        assert!(matches!(ode_envelope(0.0, 1.0, 0.0, 0.0, 1.0, 0.5), Err(Error::NonNegativeRate { .. })));
        // Constant forcing c with y0 = 0: y = c (e^{at} - 1) / a, |y| <= c/|a|.
        for a in [-0.5f64, -2.0, -7.0] {
            for c in [0.1, 1.0, 4.0] {
                for t in [0.0, 0.3, 2.0, 10.0] {
                    for theta in [0.1, 0.5, 0.9] {
                        let y = c * ((a * t).exp() - 1.0) / a;
                        let env = ode_envelope(a, 0.0, c, c, t, theta).unwrap();
                        assert!(y.abs() <= c / a.abs() + 1e-15);
                        assert!(c / a.abs() <= env + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn frozen_slope_closed_form() {
        // (2/l)(pi/l)^2 int U0 sin = 2 pi (mu0 + mu1) / l^2.
        for (l, mu) in [(1.0, [1.0, 1.0]), (2.0, [0.5, 3.0])] {
            let s = frozen_resonance_slope(l, mu, 2000);
            let exact = 2.0 * PI * (mu[0] + mu[1]) / (l * l);
            assert!((s - exact).abs() < 1e-9 * exact, "{s} vs {exact}");
        }
        let ratio = fiber_scaled_slope(3, 1.0, [1.0, 1.0], 2000) / frozen_resonance_slope(1.0, [1.0, 1.0], 2000);
        assert!((ratio - 3.0).abs() < 1e-9);
    }

    #[test]
    fn resonance_inputs_are_checked() {
        let g = WarpedProductMetric::from_fn(1.0, 1, 64, |x| (PI * x).sin()).unwrap();
        let tab = BoundaryData::new(
            EndpointData::Tabulated { times: vec![0.0, 1.0, 2.0], values: vec![0.0, 0.0, 0.0] },
            EndpointData::constant(0.0),
        );
        assert_eq!(resonance_bound(&g, &tab, 0.5, 1.0), Err(Error::NonIntegrableBoundary));
        assert_eq!(nu_tail_integral(&tab, 1.0, 0.0), Err(Error::NonIntegrableBoundary));
        let s = limit_profile_resonance(&g, &BoundaryData::zero()).unwrap();
        assert!((s.coeff(1) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn limit_profile_of_pure_modes() {
        let g = WarpedProductMetric::from_fn(2.0, 1, 200, |x| 2.0 * (PI * x / 2.0).sin()).unwrap();
        assert!((limit_profile_resonance(&g, &BoundaryData::zero()).unwrap().coeff(1) - 2.0).abs() < 1e-9);
        let h = WarpedProductMetric::from_solution(2.0, 1, (0..=200).map(|i| (PI * i as f64 / 100.0).sin()).collect()).unwrap();
        assert!(limit_profile_resonance(&h, &BoundaryData::zero()).unwrap().coeff(1).abs() < 1e-9);
    }
}
