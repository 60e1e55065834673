//! Stationary warping functions: `phi'' + Phi phi = 0` on `[0, l]` with
//! `phi(0) = mu0`, `phi(l) = mu1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::d2;

/// Relative tolerance for recognising `Phi = (pi/l)^2`.
const RESONANCE_TOL: f64 = 1e-12;
/// Below this `|sin(sqrt(Phi) l)|` the trigonometric formula is singular.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Regime {
    /// `0 < Phi < (pi/l)^2`.
    SubcriticalTrig,
    /// `Phi = 0`: linear profile.
    Zero,
    /// `Phi < 0`: hyperbolic profile.
    Negative,
    /// `Phi = (pi/l)^2` with compatible data: one-parameter family.
    ResonanceFamily,
    /// `Phi = (pi/l)^2` with `mu1 != -mu0`: no stationary solution.
    ResonanceUnsolvable,
    /// `Phi > (pi/l)^2` away from higher resonances. The profile exists
    /// but the flow moves away from it.
    Supercritical,
}

/// Closed-form stationary profile.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    Linear,
    Hyperbolic { k: f64, denom: f64 },
    Trigonometric { k: f64, denom: f64 },
    Resonant { c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    pub regime: Regime,
    pub phi_param: f64,
    pub l: f64,
    pub mu0: f64,
    pub mu1: f64,
    /// Free constant of the resonance family.
    pub family_param: Option<f64>,
    /// Whether the flow converges to this profile (`Phi < (pi/l)^2`).
    pub stable_under_flow: bool,
    profile: Option<Profile>,
}

/// `(pi / l)^2`, the first Dirichlet eigenvalue of `-d^2/dx^2` on `[0, l]`.
pub fn critical_phi(l: f64) -> f64 {
    (PI / l).powi(2)
}

/// Whether `phi_param` is the first resonance for length `l`.
pub fn is_resonant(phi_param: f64, l: f64) -> bool {
    let crit = critical_phi(l);
    (phi_param - crit).abs() <= RESONANCE_TOL * crit
}

pub fn stationary_solution(
    phi_param: f64,
    l: f64,
    mu0: f64,
    mu1: f64,
    family_c: Option<f64>,
) -> Result<StationaryResult> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidArgument(format!("interval length {l} must be positive")));
    }
    if !(mu0 >= 0.0 && mu1 >= 0.0) {
        return Err(Error::InvalidBoundary(format!(
            "boundary values must be nonnegative, got {mu0}, {mu1}"
        )));
    }
    let crit = critical_phi(l);
    let mut family_param = None;
    let (regime, profile) = if is_resonant(phi_param, l) {
        if (mu1 + mu0).abs() <= RESONANCE_TOL * mu0.max(1.0) {
            let c = family_c.unwrap_or(0.0);
            family_param = Some(c);
            (Regime::ResonanceFamily, Some(Profile::Resonant { c }))
        } else {
            (Regime::ResonanceUnsolvable, None)
        }
    } else if phi_param == 0.0 {
        (Regime::Zero, Some(Profile::Linear))
    } else if phi_param < 0.0 {
        let k = (-phi_param).sqrt();
        (Regime::Negative, Some(Profile::Hyperbolic { k, denom: (k * l).sinh() }))
    } else {
        let k = phi_param.sqrt();
        let denom = (k * l).sin();
        if denom.abs() < SINGULAR_TOL {
            return Err(Error::SingularDenominator { phi_param });
        }
        let regime = if phi_param < crit { Regime::SubcriticalTrig } else { Regime::Supercritical };
        (regime, Some(Profile::Trigonometric { k, denom }))
    };
    Ok(StationaryResult {
        regime,
        phi_param,
        l,
        mu0,
        mu1,
        family_param,
        stable_under_flow: phi_param < crit && !is_resonant(phi_param, l),
        profile,
    })
}

impl StationaryResult {
    pub fn has_profile(&self) -> bool {
        self.profile.is_some()
    }

    /// Evaluate the profile; `None` when no stationary solution exists.
    /// Endpoints return the boundary values exactly.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let profile = self.profile?;
        if x == 0.0 {
            return Some(self.mu0);
        }
        if x == self.l {
            return Some(self.mu1);
        }
        let (l, mu0, mu1) = (self.l, self.mu0, self.mu1);
        Some(match profile {
            Profile::Linear => mu0 + (mu1 - mu0) * (x / l),
            Profile::Hyperbolic { k, denom } => (mu1 * (k * x).sinh() + mu0 * (k * (l - x)).sinh()) / denom,
            Profile::Trigonometric { k, denom } => (mu1 * (k * x).sin() + mu0 * (k * (l - x)).sin()) / denom,
            Profile::Resonant { c } => c * (PI * x / l).sin() + mu0 * (PI * x / l).cos(),
        })
    }

    /// Samples on the uniform `m`-interval grid.
    pub fn sample(&self, m: usize) -> Option<Vec<f64>> {
        self.profile?;
        let dx = self.l / m as f64;
        Some(
            (0..=m)
                .map(|i| if i == m { self.l } else { i as f64 * dx })
                .map(|x| self.eval(x).unwrap())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryResidual {
    /// Sup over interior points of `|phi_xx + Phi phi|` with the
    /// three-point stencil.
    pub interior_max: f64,
    /// `phi(0) = mu0` and `phi(l) = mu1` hold exactly.
    pub endpoints_exact: bool,
}

pub fn stationary_residual(result: &StationaryResult, m: usize) -> Result<StationaryResidual> {
    let samples = result.sample(m).ok_or(Error::MissingSolution)?;
    if m < 4 {
        return Err(Error::InvalidArgument(format!("need m >= 4, got {m}")));
    }
    let dx = result.l / m as f64;
    let phi_xx = d2(&samples, dx);
    let interior_max = (1..m)
        .map(|i| (phi_xx[i] + result.phi_param * samples[i]).abs())
        .fold(0.0, f64::max);
    let endpoints_exact = result.eval(0.0) == Some(result.mu0) && result.eval(result.l) == Some(result.mu1);
    Ok(StationaryResidual { interior_max, endpoints_exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linear_branch_midpoint() {
        let r = stationary_solution(0.0, 2.0, 1.0, 3.0, None).unwrap();
        assert_eq!(r.regime, Regime::Zero);
        assert_eq!(r.eval(1.0), Some(2.0));
        assert!(r.stable_under_flow);
        let res = stationary_residual(&r, 100).unwrap();
        assert!(res.interior_max < 1e-9);
        assert!(res.endpoints_exact);
    }

    #[test]
    fn resonance_family_with_zero_data() {
        let l = 1.5;
        let r = stationary_solution(critical_phi(l), l, 0.0, 0.0, Some(1.0)).unwrap();
        assert_eq!(r.regime, Regime::ResonanceFamily);
        assert_eq!(r.family_param, Some(1.0));
        assert!(!r.stable_under_flow);
        for x in [0.1, 0.5, 1.2] {
            assert!((r.eval(x).unwrap() - (PI * x / l).sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn resonance_unsolvable() {
        let r = stationary_solution(PI * PI, 1.0, 1.0, 1.0, None).unwrap();
        assert_eq!(r.regime, Regime::ResonanceUnsolvable);
        assert!(r.eval(0.5).is_none());
        assert_eq!(stationary_residual(&r, 10), Err(Error::MissingSolution));
    }

    #[test]
    fn quarter_wave_subcritical() {
        let phi = (PI / 2.0).powi(2);
        let r = stationary_solution(phi, 1.0, 0.0, 1.0, None).unwrap();
        assert_eq!(r.regime, Regime::SubcriticalTrig);
        assert_eq!(r.eval(1.0), Some(1.0));
        for x in [0.2, 0.5, 0.9] {
            assert!((r.eval(x).unwrap() - (PI * x / 2.0).sin()).abs() < 1e-14);
        }
        // Stencil error bound h^2 |phi''''| / 12 with |phi''''| <= (pi/2)^4.
        let bound = 1e-6 * (PI / 2.0).powi(4) / 12.0;
        let res = stationary_residual(&r, 1000).unwrap();
        // Round-off of the stencil is about 4 eps / h^2.
        assert!(res.interior_max <= bound + 1e-9, "{}", res.interior_max);
        assert!(res.interior_max <= 1e-5);
    }

    #[test]
    fn negative_branch_residual() {
        let r = stationary_solution(-1.0, 1.0, 1.0, 2.0, None).unwrap();
        assert_eq!(r.regime, Regime::Negative);
        // |phi''''| = |phi| <= 2 on [0, 1].
        let res = stationary_residual(&r, 1000).unwrap();
        assert!(res.interior_max <= 2.0 * 1e-6 / 12.0 * 1.0001 + 1e-9);
        assert!(res.interior_max <= 1e-4);
        assert!(res.endpoints_exact);
    }

    #[test]
    fn supercritical_and_singular() {
        let l = 1.0;
        let r = stationary_solution(2.0 * critical_phi(l), l, 1.0, 1.0, None).unwrap();
        assert_eq!(r.regime, Regime::Supercritical);
        assert!(!r.stable_under_flow);
        assert!(stationary_residual(&r, 200).unwrap().interior_max < 1e-2);
        assert!(matches!(
            stationary_solution(4.0 * critical_phi(l), l, 1.0, 1.0, None),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn rejects_negative_boundary() {
        assert!(matches!(stationary_solution(0.0, 1.0, -1.0, 0.0, None), Err(Error::InvalidBoundary(_))));
    }

    #[test]
    fn regime_continuity_at_zero() {
        let lin = stationary_solution(0.0, 1.3, 0.7, 2.1, None).unwrap();
        for phi in [-1e-6, 1e-6] {
            let r = stationary_solution(phi, 1.3, 0.7, 2.1, None).unwrap();
            for i in 0..=20 {
                let x = 1.3 * i as f64 / 20.0;
                assert!((r.eval(x).unwrap() - lin.eval(x).unwrap()).abs() <= 1e-4);
            }
        }
    }

    proptest! {
        #[test]
        fn endpoints_are_interpolated(phi in -20.0f64..9.0, mu0 in 0.0f64..5.0, mu1 in 0.0f64..5.0, l in 0.3f64..1.0) {
            prop_assume!(!is_resonant(phi, l));
            if let Ok(r) = stationary_solution(phi, l, mu0, mu1, None) {
                prop_assert_eq!(r.eval(0.0), Some(mu0));
                prop_assert_eq!(r.eval(l), Some(mu1));
            }
        }

        #[test]
        fn linear_in_boundary_data(phi in -10.0f64..9.0, a0 in 0.0f64..3.0, a1 in 0.0f64..3.0,
                                   b0 in 0.0f64..3.0, b1 in 0.0f64..3.0, x in 0.0f64..1.0) {
            let l = 1.0;
            let s = |m0, m1| stationary_solution(phi, l, m0, m1, None).unwrap().eval(x).unwrap();
            let lhs = s(a0 + b0, a1 + b1);
            let rhs = s(a0, a1) + s(b0, b1);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
