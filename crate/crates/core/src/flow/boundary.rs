//! Time-dependent Dirichlet data `phi(t, 0) = mu0(t)`, `phi(t, l) = mu1(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One exponential mode `coef * exp(-rate * t)` of a boundary deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coef: f64,
    pub rate: f64,
}

/// Boundary value family at one endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndpointData {
    /// `mu(t) = mu_tilde`.
    Constant { mu_tilde: f64 },
    /// `mu(t) = mu_tilde + delta0 * exp(-rate * t)` with `rate > 0`.
    ExponentialApproach { mu_tilde: f64, delta0: f64, rate: f64 },
    /// Samples interpolated by cubic Hermite splines whose node slopes come
    /// from second-order differences. Held constant after the last sample,
    /// whose value is taken as the limit `mu_tilde`.
    Tabulated { times: Vec<f64>, values: Vec<f64> },
}

impl EndpointData {
    pub fn constant(mu_tilde: f64) -> Self {
        Self::Constant { mu_tilde }
    }

    pub fn exponential(mu_tilde: f64, delta0: f64, rate: f64) -> Self {
        Self::ExponentialApproach { mu_tilde, delta0, rate }
    }

    pub fn mu(&self, t: f64) -> f64 {
        match self {
            Self::Constant { mu_tilde } => *mu_tilde,
            Self::ExponentialApproach { mu_tilde, delta0, rate } => mu_tilde + delta0 * (-rate * t).exp(),
            Self::Tabulated { times, values } => hermite(times, values, t).0,
        }
    }

    pub fn mu_prime(&self, t: f64) -> f64 {
        match self {
            Self::Constant { .. } => 0.0,
            Self::ExponentialApproach { delta0, rate, .. } => -rate * delta0 * (-rate * t).exp(),
            Self::Tabulated { times, values } => hermite(times, values, t).1,
        }
    }

    /// Limit value as `t -> infinity`.
    pub fn mu_tilde(&self) -> f64 {
        match self {
            Self::Constant { mu_tilde } | Self::ExponentialApproach { mu_tilde, .. } => *mu_tilde,
            Self::Tabulated { values, .. } => *values.last().unwrap_or(&0.0),
        }
    }

    /// `delta(t) = mu(t) - mu_tilde`.
    pub fn delta(&self, t: f64) -> f64 {
        self.mu(t) - self.mu_tilde()
    }

    pub fn delta_prime(&self, t: f64) -> f64 {
        self.mu_prime(t)
    }

    /// `mu(t) - reference` as a finite sum of exponentials, when the family
    /// admits one.
    pub fn exp_terms(&self, reference: f64) -> Option<Vec<ExpTerm>> {
        let mut terms = Vec::new();
        let (mu_tilde, tail) = match self {
            Self::Constant { mu_tilde } => (*mu_tilde, None),
            Self::ExponentialApproach { mu_tilde, delta0, rate } => {
                (*mu_tilde, Some(ExpTerm { coef: *delta0, rate: *rate }))
            }
            Self::Tabulated { .. } => return None,
        };
        if mu_tilde != reference {
            terms.push(ExpTerm { coef: mu_tilde - reference, rate: 0.0 });
        }
        terms.extend(tail.filter(|t| t.coef != 0.0));
        Some(terms)
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, Self::Tabulated { .. })
    }

    /// `int_t^inf |delta| + |delta'|`, closed form only.
    pub(crate) fn integrated_deviation(&self, t: f64) -> Option<(f64, f64)> {
        match self {
            Self::Constant { .. } => Some((0.0, 0.0)),
            Self::ExponentialApproach { delta0, rate, .. } => {
                let e = delta0.abs() * (-rate * t).exp();
                Some((e / rate, e))
            }
            Self::Tabulated { .. } => None,
        }
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        match self {
            Self::Constant { mu_tilde } => {
                if !(*mu_tilde >= 0.0 && mu_tilde.is_finite()) {
                    return Err(Error::InvalidBoundary(format!("mu_tilde = {mu_tilde} must be >= 0")));
                }
            }
            Self::ExponentialApproach { mu_tilde, delta0, rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(Error::InvalidBoundary(format!("rate {rate} must be positive")));
                }
                if !(delta0.is_finite() && mu_tilde.is_finite()) {
                    return Err(Error::InvalidBoundary("non-finite boundary parameter".into()));
                }
                // mu is monotone between mu_tilde + delta0 and mu_tilde.
                if *mu_tilde < 0.0 || mu_tilde + delta0 < 0.0 {
                    return Err(Error::InvalidBoundary(format!(
                        "mu(t) = {mu_tilde} + {delta0} exp(-{rate} t) becomes negative"
                    )));
                }
            }
            Self::Tabulated { times, values } => {
                if times.len() != values.len() || times.len() < 3 {
                    return Err(Error::InvalidBoundary(
                        "tabulated data needs matching times/values with >= 3 samples".into(),
                    ));
                }
                if times[0] != 0.0 {
                    return Err(Error::InvalidBoundary("tabulated data must start at t = 0".into()));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::InvalidBoundary("tabulated times must increase strictly".into()));
                }
                if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
                    return Err(Error::InvalidBoundary("tabulated values must be finite and >= 0".into()));
                }
                const SAMPLES: usize = 1000;
                for k in 0..=SAMPLES {
                    let t = horizon * k as f64 / SAMPLES as f64;
                    if self.mu(t) < 0.0 {
                        return Err(Error::InvalidBoundary(format!("interpolated mu({t}) < 0")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Node slopes by second-order differences (non-uniform three-point
/// formulas, one-sided at the ends).
fn node_slopes(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut s = vec![0.0; n];
    for i in 0..n {
        let (a, b, c) = if i == 0 {
            (0, 1, 2)
        } else if i == n - 1 {
            (n - 3, n - 2, n - 1)
        } else {
            (i - 1, i, i + 1)
        };
        // Derivative of the quadratic through (a, b, c), evaluated at t[i].
        let (ta, tb, tc) = (t[a], t[b], t[c]);
        let x = t[i];
        let la = ((x - tb) + (x - tc)) / ((ta - tb) * (ta - tc));
        let lb = ((x - ta) + (x - tc)) / ((tb - ta) * (tb - tc));
        let lc = ((x - ta) + (x - tb)) / ((tc - ta) * (tc - tb));
        s[i] = la * y[a] + lb * y[b] + lc * y[c];
    }
    s
}

/// Value and derivative of the cubic Hermite interpolant. Constant
/// continuation after the last sample.
fn hermite(times: &[f64], values: &[f64], t: f64) -> (f64, f64) {
    let n = times.len();
    if t >= times[n - 1] {
        return (values[n - 1], 0.0);
    }
    let k = match times.binary_search_by(|probe| probe.total_cmp(&t)) {
        Ok(k) => k,
        Err(0) => 0,
        Err(k) => k - 1,
    };
    let slopes = node_slopes(times, values);
    let h = times[k + 1] - times[k];
    let s = (t - times[k]) / h;
    let (y0, y1) = (values[k], values[k + 1]);
    let (m0, m1) = (slopes[k], slopes[k + 1]);
    let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    let h10 = s * (1.0 - s) * (1.0 - s);
    let h01 = s * s * (3.0 - 2.0 * s);
    let h11 = s * s * (s - 1.0);
    let value = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
    let dh00 = 6.0 * s * s - 6.0 * s;
    let dh10 = 3.0 * s * s - 4.0 * s + 1.0;
    let dh01 = -6.0 * s * s + 6.0 * s;
    let dh11 = 3.0 * s * s - 2.0 * s;
    let deriv = (dh00 * y0 + dh01 * y1) / h + dh10 * m0 + dh11 * m1;
    (value, deriv)
}

/// Dirichlet data for both endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData {
    pub left: EndpointData,
    pub right: EndpointData,
}

impl BoundaryData {
    pub fn new(left: EndpointData, right: EndpointData) -> Self {
        Self { left, right }
    }

    pub fn constant(mu0: f64, mu1: f64) -> Self {
        Self::new(EndpointData::constant(mu0), EndpointData::constant(mu1))
    }

    pub fn zero() -> Self {
        Self::constant(0.0, 0.0)
    }

    pub fn endpoints(&self) -> [&EndpointData; 2] {
        [&self.left, &self.right]
    }

    pub fn mu(&self, t: f64) -> [f64; 2] {
        [self.left.mu(t), self.right.mu(t)]
    }

    pub fn mu_tilde(&self) -> [f64; 2] {
        [self.left.mu_tilde(), self.right.mu_tilde()]
    }

    pub fn delta(&self, t: f64) -> [f64; 2] {
        [self.left.delta(t), self.right.delta(t)]
    }

    pub fn delta_prime(&self, t: f64) -> [f64; 2] {
        [self.left.delta_prime(t), self.right.delta_prime(t)]
    }

    pub fn is_closed_form(&self) -> bool {
        self.left.is_closed_form() && self.right.is_closed_form()
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        self.left.validate(horizon)?;
        self.right.validate(horizon)
    }
}
