//! Local log-quartic fits `θ(x) ≈ θ(x_j)·exp(c1 y + c2 y² + c3 y³ + c4 y⁴)`,
//! `y = x − x_j`.

use crate::linalg::{solve_dense, DenseMatrix};
use crate::problem::{CoefficientField, DOMAIN_LENGTH};
use crate::Result;

/// Fitted coefficients around one node.
///
/// `r_minus = θ(x_j)/θ(x_j − h)` and `r_plus = θ(x_j)/θ(x_j + h)`. For
/// boundary fits the neighbour outside the domain does not exist and the
/// corresponding ratio is taken from the fitted model instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFit {
    pub c: [f64; 4],
    pub theta_center: f64,
    pub r_minus: f64,
    pub r_plus: f64,
}

impl ExpFit {
    /// Fit of a constant coefficient.
    pub fn constant(theta: f64) -> Self {
        Self {
            c: [0.0; 4],
            theta_center: theta,
            r_minus: 1.0,
            r_plus: 1.0,
        }
    }

    /// `c1 y + c2 y² + c3 y³ + c4 y⁴`.
    pub fn log_poly(&self, y: f64) -> f64 {
        let [c1, c2, c3, c4] = self.c;
        y * (c1 + y * (c2 + y * (c3 + y * c4)))
    }

    /// Derivative of [`log_poly`](Self::log_poly).
    pub fn log_poly_dy(&self, y: f64) -> f64 {
        let [c1, c2, c3, c4] = self.c;
        c1 + y * (2.0 * c2 + y * (3.0 * c3 + y * 4.0 * c4))
    }

    /// The fitted model `θ_j exp(ρ(y))`.
    pub fn model(&self, y: f64) -> f64 {
        self.theta_center * self.log_poly(y).exp()
    }

    /// Coefficients of the fit to `θ(−x)`, i.e. the mirror image.
    pub fn mirrored(&self) -> Self {
        let [c1, c2, c3, c4] = self.c;
        Self {
            c: [-c1, c2, -c3, c4],
            theta_center: self.theta_center,
            r_minus: self.r_plus,
            r_plus: self.r_minus,
        }
    }
}

/// Centered fit at an interior node from the closed-form solution of the
/// interpolation conditions at `y = −h, −h/2, h/2, h`.
pub fn fit_interior(theta: &CoefficientField, x_j: f64, h: f64) -> Result<ExpFit> {
    let t0 = theta.sample(x_j)?;
    let tm1 = theta.sample(x_j - h)?;
    let tmh = theta.sample(x_j - 0.5 * h)?;
    let tph = theta.sample(x_j + 0.5 * h)?;
    let tp1 = theta.sample(x_j + h)?;
    let lm1 = (tm1 / t0).ln();
    let lmh = (tmh / t0).ln();
    let lph = (tph / t0).ln();
    let lp1 = (tp1 / t0).ln();
    let c1 = -(8.0 * lmh - 8.0 * lph - lm1 + lp1) / (6.0 * h);
    let c2 = (16.0 * lmh + 16.0 * lph - lm1 - lp1) / (6.0 * h * h);
    let c3 = 2.0 * (2.0 * lmh - 2.0 * lph - lm1 + lp1) / (3.0 * h.powi(3));
    let c4 = -2.0 * (4.0 * lmh + 4.0 * lph - lm1 - lp1) / (3.0 * h.powi(4));
    Ok(ExpFit {
        c: [c1, c2, c3, c4],
        theta_center: t0,
        r_minus: t0 / tm1,
        r_plus: t0 / tp1,
    })
}

/// One-sided fit at `x = 0` through `y = h/2, h, 3h/2, 2h`.
///
/// With `σ = 2y/h` the samples sit at `σ = 1..4` and `g(0) = 0`, so the
/// Newton forward-difference polynomial gives the coefficients directly.
pub fn fit_boundary_left(theta: &CoefficientField, h: f64) -> Result<ExpFit> {
    one_sided_fit(|y| theta.sample(y), h)
}

/// Mirror image of [`fit_boundary_left`] at `x = 2π`, in `y = x − 2π` with
/// abscissas `y = −h/2, −h, −3h/2, −2h`.
pub fn fit_boundary_right(theta: &CoefficientField, h: f64) -> Result<ExpFit> {
    Ok(one_sided_fit(|s| theta.sample(DOMAIN_LENGTH - s), h)?.mirrored())
}

fn one_sided_fit(theta: impl Fn(f64) -> Result<f64>, h: f64) -> Result<ExpFit> {
    let t0 = theta(0.0)?;
    let mut g = [0.0; 5];
    for (k, gk) in g.iter_mut().enumerate().skip(1) {
        *gk = (theta(0.5 * h * k as f64)? / t0).ln();
    }
    let d1_ = g[1] - g[0];
    let d2_ = g[2] - 2.0 * g[1] + g[0];
    let d3_ = g[3] - 3.0 * g[2] + 3.0 * g[1] - g[0];
    let d4_ = g[4] - 4.0 * g[3] + 6.0 * g[2] - 4.0 * g[1] + g[0];
    let d = [
        d1_ - d2_ / 2.0 + d3_ / 3.0 - d4_ / 4.0,
        d2_ / 2.0 - d3_ / 2.0 + 11.0 * d4_ / 24.0,
        d3_ / 6.0 - d4_ / 4.0,
        d4_ / 24.0,
    ];
    let s = 2.0 / h;
    let c = [d[0] * s, d[1] * s * s, d[2] * s.powi(3), d[3] * s.powi(4)];
    let mut fit = ExpFit {
        c,
        theta_center: t0,
        r_minus: 1.0,
        r_plus: t0 / theta(h)?,
    };
    fit.r_minus = (-fit.log_poly(-h)).exp();
    Ok(fit)
}

/// Reference fit by solving the 4×4 interpolation system
/// `Σ c_m y_k^m = ln(θ(x_j + y_k)/θ(x_j))` with a dense solver.
pub fn fit_by_interpolation(theta: &CoefficientField, x_j: f64, offsets: [f64; 4]) -> Result<[f64; 4]> {
    let t0 = theta.sample(x_j)?;
    let a = DenseMatrix::from_fn(4, 4, |i, m| offsets[i].powi(m as i32 + 1));
    let rhs = offsets
        .iter()
        .map(|&y| Ok((theta.sample(x_j + y)? / t0).ln()))
        .collect::<Result<Vec<f64>>>()?;
    let c = solve_dense(&a, &rhs)?;
    Ok([c[0], c[1], c[2], c[3]])
}
