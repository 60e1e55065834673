//! Small numerical kernels shared by the solvers: finite-difference
//! stencils, composite quadrature, a tridiagonal factorization and a
//! least-squares line fit.

/// First derivative on a uniform grid.
///
/// Second-order central differences inside, second-order one-sided
/// stencils at both ends. Requires at least 3 samples.
pub fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "d1 needs at least 3 samples");
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    out
}

/// Second derivative on a uniform grid.
///
/// Three-point stencil inside, four-point second-order one-sided stencil
/// at the ends. Requires at least 4 samples.
pub fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "d2 needs at least 4 samples");
    let h2 = h * h;
    let mut out = vec![0.0; n];
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    out
}

/// Composite Simpson rule over uniformly spaced samples.
///
/// An odd number of intervals closes with Simpson's 3/8 rule on the last
/// three intervals. A single interval falls back to the trapezoid rule.
pub fn simpson(f: &[f64], h: f64) -> f64 {
    let intervals = f.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => 0.5 * h * (f[0] + f[1]),
        _ => {
            let even = if intervals % 2 == 0 { intervals } else { intervals - 3 };
            let mut s = 0.0;
            let mut i = 0;
            while i < even {
                s += f[i] + 4.0 * f[i + 1] + f[i + 2];
                i += 2;
            }
            let mut total = s * h / 3.0;
            if even < intervals {
                let k = even;
                total += 3.0 * h / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
            }
            total
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] (four points, exact for
/// polynomials up to degree 7).
pub const GAUSS4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_85),
];

/// Pre-factored constant tridiagonal matrix (Thomas algorithm).
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    lower: Vec<f64>,
    c_prime: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl Tridiagonal {
    /// Factor the matrix with sub-diagonal `lower`, diagonal `diag` and
    /// super-diagonal `upper`. `lower[0]` and `upper[n-1]` are ignored.
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Self {
        let n = diag.len();
        assert!(n > 0 && lower.len() == n && upper.len() == n);
        let mut c_prime = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        inv_pivot[0] = 1.0 / diag[0];
        c_prime[0] = upper[0] * inv_pivot[0];
        for i in 1..n {
            let den = diag[i] - lower[i] * c_prime[i - 1];
            inv_pivot[i] = 1.0 / den;
            if i + 1 < n {
                c_prime[i] = upper[i] * inv_pivot[i];
            }
        }
        Self { lower: lower.to_vec(), c_prime, inv_pivot }
    }

    /// Solve in place: `rhs` is overwritten by the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        assert_eq!(n, self.inv_pivot.len());
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.c_prime[i] * rhs[i + 1];
        }
    }
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    LineFit { slope, intercept: my - slope * mx, r_squared }
}

/// `(e^z - 1) / z`, accurate near zero.
pub fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 + 0.5 * z
    } else {
        z.exp_m1() / z
    }
}

/// Largest absolute value, ignoring NaN entries.
pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().filter(|x| !x.is_nan()).fold(0.0_f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(m: usize, l: f64) -> Vec<f64> {
        (0..=m).map(|i| i as f64 * l / m as f64).collect()
    }

    #[test]
    fn stencils_exact_on_quadratics_and_cubics() {
        let xs = grid(10, 2.0);
        let h = 0.2;
        let f: Vec<f64> = xs.iter().map(|x| x * x - 3.0 * x + 1.0).collect();
        for (x, d) in xs.iter().zip(d1(&f, h)) {
            assert!((d - (2.0 * x - 3.0)).abs() < 1e-12);
        }
        let g: Vec<f64> = xs.iter().map(|x| x * x * x).collect();
        for (x, d) in xs.iter().zip(d2(&g, h)) {
            assert!((d - 6.0 * x).abs() < 1e-10, "{x} {d}");
        }
    }

    #[test]
    fn stencil_order_is_two() {
        let err = |m: usize| {
            let h = 1.0 / m as f64;
            let f: Vec<f64> = grid(m, 1.0).iter().map(|x| x.sin()).collect();
            let d = d2(&f, h);
            grid(m, 1.0)
                .iter()
                .zip(d)
                .map(|(x, v)| (v + x.sin()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(40) / err(80);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }

    #[test]
    fn simpson_even_and_odd_intervals() {
        for m in [2usize, 3, 8, 9, 64, 65] {
            let h = std::f64::consts::PI / m as f64;
            let f: Vec<f64> = grid(m, std::f64::consts::PI).iter().map(|x| x.sin()).collect();
            let tol = if m < 4 { 0.5 } else { 1e-3 };
            assert!((simpson(&f, h) - 2.0).abs() < tol, "m = {m}");
        }
        let f: Vec<f64> = grid(9, 1.0).iter().map(|x| x * x * x).collect();
        assert!((simpson(&f, 1.0 / 9.0) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_laplacian() {
        let n = 6;
        let lower = vec![-1.0; n];
        let upper = vec![-1.0; n];
        let diag = vec![2.0; n];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = 2.0 * x_true[i];
            if i > 0 {
                rhs[i] -= x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] -= x_true[i + 1];
            }
        }
        let t = Tridiagonal::factor(&lower, &diag, &upper);
        t.solve_in_place(&mut rhs);
        for (a, b) in rhs.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss4_integrates_degree_seven() {
        let s: f64 = GAUSS4.iter().map(|(x, w)| w * x.powi(6)).sum();
        assert!((s - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn line_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 0.5 * x).collect();
        let fit = fit_line(&xs, &ys);
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 2.0).abs() < 1e-14);
        assert!((fit.r_squared - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi1_near_zero() {
        assert!((phi1(1e-12) - 1.0).abs() < 1e-11);
        assert!((phi1(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }
}
