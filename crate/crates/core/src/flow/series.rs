use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::simpson;

/// Truncated Fourier sine series `sum_j c_j sin(pi j x / l)`, `j = 1..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    pub l: f64,
    /// `coeffs[j - 1]` multiplies `sin(pi j x / l)`.
    pub coeffs: Vec<f64>,
}

impl SineSeries {
    pub fn new(l: f64, coeffs: Vec<f64>) -> Self {
        Self { l, coeffs }
    }

    /// Coefficient of mode `j >= 1`.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs[j - 1]
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluate the series; exactly zero at both endpoints.
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 || x == self.l {
            return 0.0;
        }
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (PI * (k + 1) as f64 * x / self.l).sin())
            .sum()
    }

    /// Samples on the uniform `m`-interval grid.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        let dx = self.l / m as f64;
        (0..=m)
            .map(|i| if i == m { 0.0 } else { self.eval(i as f64 * dx) })
            .collect()
    }
}

/// Sine coefficients `c_j = (2/l) int_0^l f(s) sin(pi j s / l) ds` of
/// uniformly sampled data, by composite Simpson quadrature.
///
/// The samples must vanish at both ends: a sine series cannot represent
/// anything else, and nonzero endpoints usually mean the stationary
/// profile or the boundary lift was not subtracted.
pub fn sine_coefficients(samples: &[f64], l: f64, modes: usize) -> Result<SineSeries> {
    let m = samples.len().saturating_sub(1);
    if m < 2 {
        return Err(Error::InvalidArgument("need at least 3 samples".into()));
    }
    let scale = samples.iter().fold(1.0_f64, |s, v| s.max(v.abs()));
    let (left, right) = (samples[0], samples[m]);
    if left.abs() > 1e-8 * scale || right.abs() > 1e-8 * scale {
        return Err(Error::NonVanishingEndpoints { left, right });
    }
    let dx = l / m as f64;
    let mut integrand = vec![0.0; m + 1];
    let coeffs = (1..=modes)
        .map(|j| {
            for (i, f) in integrand.iter_mut().enumerate() {
                *f = samples[i] * (PI * j as f64 * i as f64 / m as f64).sin();
            }
            2.0 / l * simpson(&integrand, dx)
        })
        .collect();
    Ok(SineSeries { l, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(l: f64, m: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..=m).map(|i| f(l * i as f64 / m as f64)).collect()
    }

    #[test]
    fn single_mode() {
        let l = 2.5;
        let s = sine_coefficients(&samples(l, 200, |x| (PI * x / l).sin()), l, 10).unwrap();
        assert!((s.coeff(1) - 1.0).abs() < 1e-8);
        for j in 2..=10 {
            assert!(s.coeff(j).abs() < 1e-8, "j = {j}");
        }
        assert_eq!(s.eval(0.0), 0.0);
        assert_eq!(s.eval(l), 0.0);
    }

    #[test]
    fn two_modes() {
        let l = 1.0;
        let f = |x: f64| (2.0 * PI * x).sin() + 0.5 * (3.0 * PI * x).sin();
        let s = sine_coefficients(&samples(l, 400, f), l, 6).unwrap();
        assert!((s.coeff(2) - 1.0).abs() < 1e-6);
        assert!((s.coeff(3) - 0.5).abs() < 1e-6);
        for j in [1, 4, 5, 6] {
            assert!(s.coeff(j).abs() < 1e-6);
        }
    }

    #[test]
    fn parabola_coefficients() {
        // Oracle: 2 int_0^1 x(1-x) sin(pi j x) dx = 4 (1 - (-1)^j) / (pi j)^3,
        // i.e. 8 / (pi j)^3 for odd j and 0 for even j.
        let s = sine_coefficients(&samples(1.0, 400, |x| x * (1.0 - x)), 1.0, 5).unwrap();
        for j in 1..=5 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let exact = 4.0 * (1.0 - sign) / (PI * j as f64).powi(3);
            assert!((s.coeff(j) - exact).abs() < 1e-6, "j = {j}");
        }
    }

    #[test]
    fn rejects_nonvanishing_endpoints() {
        let err = sine_coefficients(&samples(1.0, 20, |x| 1.0 + x), 1.0, 3).unwrap_err();
        assert!(matches!(err, Error::NonVanishingEndpoints { .. }));
    }

    #[test]
    fn reconstruction_on_grid() {
        let f = |x: f64| x * (1.0 - x) * (1.0 + x);
        let data = samples(1.0, 200, f);
        let s = sine_coefficients(&data, 1.0, 100).unwrap();
        let back = s.sample(200);
        let err = data.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }
}
