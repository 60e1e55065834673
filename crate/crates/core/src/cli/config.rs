//! TOML run configuration.
//!
//! ```toml
//! run_id = "subcritical"
//!
//! [flow]
//! phi_param = 4.934802200544679
//! t_end = 10.0
//! dt = 1e-3
//! m = 200
//! theta = [0.25, 0.5, 0.75]
//!
//! [flow.boundary.left]
//! kind = "exponential_approach"
//! mu_tilde = 1.0
//! delta0 = 0.5
//! rate = 1.0
//!
//! [flow.initial]
//! shape = "parabola"
//! amplitude = 0.3
//! base = "stationary"
//! ```

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::flow::{lift_u, Backend, BoundaryData, EndpointData, FlowConfig};
use crate::geometry::WarpedProductMetric;
use crate::stationary::stationary_solution;

use super::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub run_id: Option<String>,
    /// Seed for the randomized checks of `verify`.
    #[serde(default)]
    pub seed: u64,
    pub stationary: Option<StationaryConfig>,
    pub flow: Option<FlowSection>,
    pub eigenflow: Option<EigenflowConfig>,
    pub sweep: Option<SweepConfig>,
    pub verify: Option<VerifyConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryConfig {
    pub phi_param: f64,
    #[serde(default = "one")]
    pub l: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub family_c: Option<f64>,
    #[serde(default = "default_m")]
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSection {
    pub phi_param: f64,
    #[serde(default = "one")]
    pub l: f64,
    /// Fiber dimension.
    #[serde(default = "one_usize")]
    pub n: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_backend")]
    pub backend: Backend,
    pub modes: Option<usize>,
    #[serde(default = "one_usize")]
    pub snapshot_stride: usize,
    /// Split parameters for the convergence estimates.
    #[serde(default)]
    pub theta: Vec<f64>,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub initial: InitialData,
}

impl FlowSection {
    pub fn flow_config(&self) -> FlowConfig {
        let cfg = FlowConfig::new(self.phi_param, self.t_end, self.dt, self.m)
            .with_backend(self.backend)
            .with_stride(self.snapshot_stride);
        match self.modes {
            Some(j) => cfg.with_modes(j),
            None => cfg,
        }
    }

    pub fn boundary_data(&self) -> BoundaryData {
        self.boundary.to_data()
    }

    pub fn initial_metric(&self) -> Result<WarpedProductMetric, CliError> {
        self.initial.build(self.phi_param, self.l, self.n, self.m, &self.boundary_data())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    pub left: EndpointData,
    pub right: EndpointData,
}

impl Default for BoundarySection {
    fn default() -> Self {
        Self { left: EndpointData::constant(0.0), right: EndpointData::constant(0.0) }
    }
}

impl BoundarySection {
    pub fn to_data(&self) -> BoundaryData {
        BoundaryData::new(self.left.clone(), self.right.clone())
    }

    /// Short label for summaries, e.g. `const(1)/exp(2,0.5,1)`.
    pub fn label(&self) -> String {
        fn one(e: &EndpointData) -> String {
            match e {
                EndpointData::Constant { mu_tilde } => format!("const({mu_tilde})"),
                EndpointData::ExponentialApproach { mu_tilde, delta0, rate } => {
                    format!("exp({mu_tilde};{delta0};{rate})")
                }
                EndpointData::Tabulated { times, .. } => format!("table({})", times.len()),
            }
        }
        format!("{}/{}", one(&self.left), one(&self.right))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `amplitude * sin(mode pi x / l)`.
    Sine,
    /// `amplitude * x (l - x)`.
    Parabola,
    Zero,
    /// Explicit samples on the `m + 1` grid points.
    Samples,
}

/// What the shape is added to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// Linear interpolation of `mu_0(0)` and `mu_1(0)`.
    Lift,
    /// Stationary profile for the limits plus the lift of the deviations.
    Stationary,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    #[serde(default = "default_shape")]
    pub shape: Shape,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "one_usize")]
    pub mode: usize,
    pub values: Option<Vec<f64>>,
    #[serde(default = "default_base")]
    pub base: Base,
}

impl Default for InitialData {
    fn default() -> Self {
        Self { shape: Shape::Sine, amplitude: 1.0, mode: 1, values: None, base: Base::Lift }
    }
}

impl InitialData {
    pub fn build(
        &self,
        phi_param: f64,
        l: f64,
        n: usize,
        m: usize,
        bd: &BoundaryData,
    ) -> Result<WarpedProductMetric, CliError> {
        let explicit = match (self.shape, &self.values) {
            (Shape::Samples, Some(v)) if v.len() == m + 1 => Some(v.clone()),
            (Shape::Samples, Some(v)) => {
                return Err(CliError::Config(format!("initial.values has {} entries, need m + 1 = {}", v.len(), m + 1)))
            }
            (Shape::Samples, None) => return Err(CliError::Config("shape = \"samples\" needs initial.values".into())),
            _ => None,
        };
        let stationary = match self.base {
            Base::Stationary => {
                let [t0, t1] = bd.mu_tilde();
                let st = stationary_solution(phi_param, l, t0, t1, None).map_err(CliError::config)?;
                if !st.has_profile() {
                    return Err(CliError::Config(format!("base = \"stationary\" but regime {:?} has no profile", st.regime)));
                }
                Some(st)
            }
            _ => None,
        };
        let shape = |i: usize, x: f64| -> f64 {
            match self.shape {
                Shape::Sine => self.amplitude * (self.mode as f64 * PI * x / l).sin(),
                Shape::Parabola => self.amplitude * x * (l - x),
                Shape::Zero => 0.0,
                Shape::Samples => explicit.as_ref().map_or(0.0, |v| v[i]),
            }
        };
        let [mu0, mu1] = bd.mu(0.0);
        let samples: Vec<f64> = (0..=m)
            .map(|i| {
                // Exact grid endpoints keep the boundary match exact.
                let x = if i == m { l } else { l * i as f64 / m as f64 };
                let base = match (&self.base, &stationary) {
                    (Base::Lift, _) => mu0 * (l - x) / l + mu1 * x / l,
                    (Base::Stationary, Some(st)) => st.eval(x).unwrap_or(0.0) + lift_u(bd, 0.0, x, l),
                    _ => 0.0,
                };
                base + shape(i, x)
            })
            .collect();
        WarpedProductMetric::new(l, n, samples).map_err(CliError::config)
    }

    /// Amplitude, mode number and `Phi` of an exact single-mode solution
    /// when the run is one: sine data on zero boundary values.
    pub fn exact_mode(&self, bd: &BoundaryData) -> Option<(f64, usize)> {
        let zero = |e: &EndpointData| matches!(e, EndpointData::Constant { mu_tilde } if *mu_tilde == 0.0);
        (self.shape == Shape::Sine && self.base != Base::Stationary && zero(&bd.left) && zero(&bd.right))
            .then_some((self.amplitude, self.mode))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenflowConfig {
    pub mus: Vec<f64>,
    pub phi_param: f64,
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Step of the RK4 cross-check.
    #[serde(default = "default_rk4_dt")]
    pub rk4_dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_lengths")]
    pub lengths: Vec<f64>,
    /// `Phi` values as multiples of `(pi / l)^2`.
    pub phi_factors: Vec<f64>,
    #[serde(default = "default_boundaries")]
    pub boundaries: Vec<BoundarySection>,
    #[serde(default = "default_sweep_m")]
    pub m: usize,
    #[serde(default = "default_sweep_dt")]
    pub dt: f64,
    #[serde(default = "default_sweep_t_end")]
    pub t_end: f64,
    #[serde(default)]
    pub initial: InitialData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Grid sizes of the refinement study, each the double of the last.
    #[serde(default = "default_resolutions")]
    pub resolutions: Vec<usize>,
    #[serde(default = "default_random_cases")]
    pub random_cases: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { resolutions: default_resolutions(), random_cases: default_random_cases() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Emit a gnuplot script next to the CSV files.
    #[serde(default)]
    pub plot_script: bool,
}

fn one() -> f64 {
    1.0
}
fn one_usize() -> usize {
    1
}
fn default_m() -> usize {
    200
}
fn default_backend() -> Backend {
    Backend::FiniteDifference
}
fn default_shape() -> Shape {
    Shape::Sine
}
fn default_base() -> Base {
    Base::Lift
}
fn default_samples() -> usize {
    101
}
fn default_rk4_dt() -> f64 {
    1e-4
}
fn default_lengths() -> Vec<f64> {
    vec![1.0]
}
fn default_boundaries() -> Vec<BoundarySection> {
    vec![BoundarySection::default()]
}
fn default_sweep_m() -> usize {
    100
}
fn default_sweep_dt() -> f64 {
    1e-3
}
fn default_sweep_t_end() -> f64 {
    5.0
}
fn default_resolutions() -> Vec<usize> {
    vec![40, 80, 160]
}
fn default_random_cases() -> usize {
    50
}
