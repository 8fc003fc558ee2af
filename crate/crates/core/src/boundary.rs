//! Neumann boundary rows
//!
//! ```text
//! Σ_j α¹_j u^{n+1}_j + Σ_j α⁰_j u^n_j = Σ_j β¹_j f^{n+1}_j + Σ_j β⁰_j f^n_j,   j = 0, 1, 2
//! ```
//!
//! with `j` counting nodes inward from the boundary. The `β` here multiply
//! `f` directly (they already contain `τ`).

use crate::fit::ExpFit;
use crate::interior::NuLocal;
use crate::linalg::{equilibrate_columns, null_space_1d_with_tol, DenseMatrix, DEFAULT_RANK_TOL};
use crate::{Error, Result, Scalar};
use std::fmt;
use std::str::FromStr;

/// Test monomials `x^k1 t^k2` for the three-point boundary row.
pub const FULL_BASIS: [(u32, u32); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (2, 0),
    (2, 1),
    (2, 2),
    (3, 0),
    (3, 1),
    (3, 2),
    (4, 0),
];

/// Test monomials for the reduced two-point row.
pub const REDUCED_BASIS: [(u32, u32); 7] = [(0, 0), (0, 1), (0, 2), (2, 0), (2, 1), (2, 2), (3, 0)];

/// Coefficients of one boundary row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRow<S> {
    pub alpha_new: [S; 3],
    pub alpha_old: [S; 3],
    pub beta_new: [S; 3],
    pub beta_old: [S; 3],
}

impl<S: Scalar> BoundaryRow<S> {
    /// `Σ α¹ + Σ α⁰`, zero when constants are reproduced.
    pub fn alpha_sum(&self) -> S {
        self.alpha_new
            .iter()
            .chain(&self.alpha_old)
            .fold(S::zero(), |a, &b| a + b)
    }

    pub fn max_abs(&self) -> f64 {
        self.alpha_new
            .iter()
            .chain(&self.alpha_old)
            .chain(&self.beta_new)
            .chain(&self.beta_old)
            .map(|v| v.modulus())
            .fold(0.0, f64::max)
    }

    fn scaled(&self, k: S) -> Self {
        Self {
            alpha_new: self.alpha_new.map(|v| v * k),
            alpha_old: self.alpha_old.map(|v| v * k),
            beta_new: self.beta_new.map(|v| v * k),
            beta_old: self.beta_old.map(|v| v * k),
        }
    }
}

/// How the Neumann condition is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NeumannVariant {
    /// Fourth-order three-point row.
    #[default]
    CompactThreePoint,
    /// Two-point row from the reduced test basis.
    ReducedTwoPoint,
    /// Limits of the three-point coefficients as `h → 0`.
    CompactLeading,
    /// `ε(u₁ − u₀)^{n+1} + (1 − ε)(u₁ − u₀)^n = 0`.
    Classic { epsilon: f64 },
}

impl NeumannVariant {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NeumannVariant::Classic { epsilon } if !(epsilon > 0.0 && epsilon <= 1.0) => Err(
                Error::InvalidArgument(format!("classic Neumann weight must be in (0, 1], got {epsilon}")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for NeumannVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeumannVariant::CompactThreePoint => f.write_str("compact"),
            NeumannVariant::ReducedTwoPoint => f.write_str("reduced"),
            NeumannVariant::CompactLeading => f.write_str("leading"),
            NeumannVariant::Classic { epsilon } => write!(f, "classic:{epsilon}"),
        }
    }
}

impl FromStr for NeumannVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let v = match s.as_str() {
            "compact" | "three-point" => NeumannVariant::CompactThreePoint,
            "reduced" | "two-point" => NeumannVariant::ReducedTwoPoint,
            "leading" | "cut" => NeumannVariant::CompactLeading,
            "classic" => NeumannVariant::Classic { epsilon: 0.5 },
            other => match other.strip_prefix("classic:") {
                Some(e) => NeumannVariant::Classic {
                    epsilon: e
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad epsilon `{e}`")))?,
                },
                None => return Err(Error::InvalidArgument(format!("unknown Neumann variant `{other}`"))),
            },
        };
        v.validate()?;
        Ok(v)
    }
}

/// Nodes of the boundary stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryStencil {
    ThreePoint,
    TwoPoint,
}

/// Which end of the domain a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn classic_row<S: Scalar>(epsilon: f64) -> BoundaryRow<S> {
    let z = S::zero();
    BoundaryRow {
        alpha_new: [S::from_re(-epsilon), S::from_re(epsilon), z],
        alpha_old: [S::from_re(epsilon - 1.0), S::from_re(1.0 - epsilon), z],
        beta_new: [z; 3],
        beta_old: [z; 3],
    }
}

/// `a h + 2 b h² + 3 c h³ + 4 d h⁴`.
fn slope_sum(c: [f64; 4], h: f64) -> f64 {
    let [a, b, cc, d] = c;
    h * (a + h * (2.0 * b + h * (3.0 * cc + h * 4.0 * d)))
}

/// Closed-form three-point row at the left end for the fit `(a, b, c, d)`.
pub fn compact_left_closed_form<S: Scalar>(fit: &ExpFit, nu0: NuLocal<S>, h: f64, tau: f64) -> BoundaryRow<S> {
    let nu = nu0.nu;
    let e = (-fit.log_poly(h)).exp();
    let g = slope_sum(fit.c, h);
    let s = S::from_re;
    let alpha_2 = -nu * s(g + 6.0);
    let beta = [s(2.0 * tau * (g + 2.0)), s(8.0 * tau * e), S::zero()];
    BoundaryRow {
        alpha_new: [
            nu.scale(6.0 + 17.0 * g) + s(4.0 * g + 8.0),
            s(16.0 * e) - nu.scale(16.0 * g),
            alpha_2,
        ],
        alpha_old: [
            nu.scale(6.0 + 17.0 * g) - s(4.0 * g + 8.0),
            -nu.scale(16.0 * g) - s(16.0 * e),
            alpha_2,
        ],
        beta_new: beta,
        beta_old: beta,
    }
}

fn leading_row<S: Scalar>(nu0: NuLocal<S>, tau: f64) -> BoundaryRow<S> {
    let nu = nu0.nu;
    let s = S::from_re;
    let beta = [s(4.0 * tau), s(8.0 * tau), S::zero()];
    BoundaryRow {
        alpha_new: [nu.scale(6.0) + s(8.0), s(16.0), -nu.scale(6.0)],
        alpha_old: [nu.scale(6.0) - s(8.0), s(-16.0), -nu.scale(6.0)],
        beta_new: beta,
        beta_old: beta,
    }
}

/// Left boundary row. `fit` comes from [`crate::fit::fit_boundary_left`].
pub fn build_left_row<S: Scalar>(
    fit: &ExpFit,
    nu0: NuLocal<S>,
    h: f64,
    tau: f64,
    variant: NeumannVariant,
) -> Result<BoundaryRow<S>> {
    variant.validate()?;
    match variant {
        NeumannVariant::CompactThreePoint => Ok(compact_left_closed_form(fit, nu0, h, tau)),
        NeumannVariant::ReducedTwoPoint => {
            boundary_oracle(fit, nu0, h, tau, &REDUCED_BASIS, BoundaryStencil::TwoPoint, Side::Left)
        }
        NeumannVariant::CompactLeading => Ok(leading_row(nu0, tau)),
        NeumannVariant::Classic { epsilon } => Ok(classic_row(epsilon)),
    }
}

/// Right boundary row, index 0 being `x_N`. `fit` comes from
/// [`crate::fit::fit_boundary_right`]; the compact rows are derived from the
/// test-function system on the mirrored stencil.
pub fn build_right_row<S: Scalar>(
    fit: &ExpFit,
    nu_n: NuLocal<S>,
    h: f64,
    tau: f64,
    variant: NeumannVariant,
) -> Result<BoundaryRow<S>> {
    variant.validate()?;
    match variant {
        NeumannVariant::CompactThreePoint => {
            boundary_oracle(fit, nu_n, h, tau, &FULL_BASIS, BoundaryStencil::ThreePoint, Side::Right)
        }
        NeumannVariant::ReducedTwoPoint => {
            boundary_oracle(fit, nu_n, h, tau, &REDUCED_BASIS, BoundaryStencil::TwoPoint, Side::Right)
        }
        NeumannVariant::CompactLeading => Ok(leading_row(nu_n, tau)),
        NeumannVariant::Classic { epsilon } => Ok(classic_row(epsilon)),
    }
}

/// Boundary row from the test-function method: the one-dimensional null
/// space of the system obtained by substituting each basis monomial (and its
/// forcing under the fitted coefficient model) into the row, with `β_2 = 0`
/// (and `α_2 = 0` on the two-point stencil). The scale is fixed so that the
/// `β` entries sum to `4τ(g + 2) + 16τ e^{−ρ(±h)}`, the sum of the three-point
/// closed form, with `g = a h + 2 b h² + 3 c h³ + 4 d h⁴` for the fit seen from
/// inside the domain.
pub fn boundary_oracle<S: Scalar>(
    fit: &ExpFit,
    nu: NuLocal<S>,
    h: f64,
    tau: f64,
    basis: &[(u32, u32)],
    stencil: BoundaryStencil,
    side: Side,
) -> Result<BoundaryRow<S>> {
    let npts = match stencil {
        BoundaryStencil::ThreePoint => 3,
        BoundaryStencil::TwoPoint => 2,
    };
    let nbeta = 2;
    let ncols = 2 * npts + 2 * nbeta;
    let dir = match side {
        Side::Left => 1.0,
        Side::Right => -1.0,
    };
    let kappa_theta = nu.nu.scale(h * h / tau);
    let mut a = DenseMatrix::zeros(basis.len(), ncols);
    for (r, &(k1, k2)) in basis.iter().enumerate() {
        let (k1, k2) = (k1 as i32, k2 as i32);
        let row_scale = 1.0 / (h.powi(k1) * tau.powi(k2));
        for j in 0..npts {
            let y = dir * h * j as f64;
            let u_new = y.powi(k1) * tau.powi(k2);
            let u_old = y.powi(k1) * 0f64.powi(k2);
            a.set(r, j, S::from_re(u_new * row_scale));
            a.set(r, npts + j, S::from_re(u_old * row_scale));
        }
        for j in 0..nbeta {
            let y = dir * h * j as f64;
            for (layer, s) in [(0usize, tau), (1, 0.0)] {
                let u_s = if k2 > 0 { k2 as f64 * y.powi(k1) * s.powi(k2 - 1) } else { 0.0 };
                let u_y = if k1 > 0 { k1 as f64 * y.powi(k1 - 1) * s.powi(k2) } else { 0.0 };
                let u_yy = if k1 > 1 {
                    (k1 * (k1 - 1)) as f64 * y.powi(k1 - 2) * s.powi(k2)
                } else {
                    0.0
                };
                let flux = fit.log_poly(y).exp() * (fit.log_poly_dy(y) * u_y + u_yy);
                let f = S::from_re(u_s) - kappa_theta.scale(flux);
                a.set(r, 2 * npts + layer * nbeta + j, -f.scale(row_scale));
            }
        }
    }
    let scales = equilibrate_columns(&mut a);
    let v = null_space_1d_with_tol(&a, ncols - 1, DEFAULT_RANK_TOL)?;
    let x: Vec<S> = v.iter().zip(&scales).map(|(&v, &s)| v.scale(s)).collect();
    let z = S::zero();
    let pick = |off: usize, n: usize| -> [S; 3] {
        let mut out = [z; 3];
        out[..n].copy_from_slice(&x[off..off + n]);
        out
    };
    let row = BoundaryRow {
        alpha_new: pick(0, npts),
        alpha_old: pick(npts, npts),
        beta_new: pick(2 * npts, nbeta),
        beta_old: pick(2 * npts + nbeta, nbeta),
    };
    let inward = match side {
        Side::Left => *fit,
        Side::Right => fit.mirrored(),
    };
    let target = 4.0 * tau * (slope_sum(inward.c, h) + 2.0) + 16.0 * tau * (-inward.log_poly(h)).exp();
    let total = row
        .beta_new
        .iter()
        .chain(&row.beta_old)
        .fold(S::zero(), |a, &b| a + b);
    if total.modulus() <= f64::EPSILON * row.max_abs() {
        return Err(Error::Rank {
            expected: ncols - 1,
            found: ncols - 1,
        });
    }
    Ok(row.scaled(S::from_re(target) / total))
}

/// Scaled residuals of the row on the given test monomials.
pub fn boundary_residuals<S: Scalar>(
    row: &BoundaryRow<S>,
    fit: &ExpFit,
    nu: NuLocal<S>,
    h: f64,
    tau: f64,
    basis: &[(u32, u32)],
    side: Side,
) -> Vec<S> {
    let dir = match side {
        Side::Left => 1.0,
        Side::Right => -1.0,
    };
    let kappa_theta = nu.nu.scale(h * h / tau);
    basis
        .iter()
        .map(|&(k1, k2)| {
            let (k1, k2) = (k1 as i32, k2 as i32);
            let scale = 1.0 / (h.powi(k1) * tau.powi(k2));
            let mut acc = S::zero();
            for j in 0..3 {
                let y = dir * h * j as f64;
                for (s, alpha, beta) in [(tau, row.alpha_new[j], row.beta_new[j]), (0.0, row.alpha_old[j], row.beta_old[j])] {
                    let u = y.powi(k1) * s.powi(k2);
                    let u_s = if k2 > 0 { k2 as f64 * y.powi(k1) * s.powi(k2 - 1) } else { 0.0 };
                    let u_y = if k1 > 0 { k1 as f64 * y.powi(k1 - 1) * s.powi(k2) } else { 0.0 };
                    let u_yy = if k1 > 1 {
                        (k1 * (k1 - 1)) as f64 * y.powi(k1 - 2) * s.powi(k2)
                    } else {
                        0.0
                    };
                    let flux = fit.log_poly(y).exp() * (fit.log_poly_dy(y) * u_y + u_yy);
                    let f = S::from_re(u_s) - kappa_theta.scale(flux);
                    acc += alpha.scale(u) - beta * f;
                }
            }
            acc.scale(scale)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{fit_boundary_left, fit_boundary_right};
    use crate::problem::CoefficientField;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn max_dev<S: Scalar>(a: &BoundaryRow<S>, b: &BoundaryRow<S>) -> f64 {
        let flat = |r: &BoundaryRow<S>| -> Vec<S> {
            r.alpha_new
                .iter()
                .chain(&r.alpha_old)
                .chain(&r.beta_new)
                .chain(&r.beta_old)
                .cloned()
                .collect()
        };
        let scale = b.max_abs();
        flat(a)
            .iter()
            .zip(flat(b))
            .map(|(x, y)| (*x - y).modulus() / scale)
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_theta_closed_form() {
        let nu0 = 0.7;
        let tau = 0.01;
        let row = build_left_row(&ExpFit::constant(1.0), NuLocal { nu: nu0 }, 0.2, tau, NeumannVariant::CompactThreePoint)
            .unwrap();
        assert_eq!(row.alpha_new, [6.0 * nu0 + 8.0, 16.0, -6.0 * nu0]);
        assert_eq!(row.alpha_old, [6.0 * nu0 - 8.0, -16.0, -6.0 * nu0]);
        assert_eq!(row.beta_new, [4.0 * tau, 8.0 * tau, 0.0]);
        assert_eq!(row.beta_old, row.beta_new);
        assert!(row.alpha_sum().abs() < 1e-14);
    }

    #[test]
    fn closed_form_annihilates_test_basis() {
        let theta = CoefficientField::cos_squared_plus_one();
        let h = 2.0 * PI / 40.0;
        let tau = h * h * 0.5;
        let fit = fit_boundary_left(&theta, h).unwrap();
        for unit in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let nu = NuLocal::new(fit.theta_center, tau, h, unit);
            let row = compact_left_closed_form(&fit, nu, h, tau);
            let res = boundary_residuals(&row, &fit, nu, h, tau, &FULL_BASIS, Side::Left);
            let worst = res.iter().map(|r| r.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-9 * row.max_abs(), "{worst}");
        }
    }

    #[test]
    fn closed_form_matches_oracle() {
        let theta = CoefficientField::new("t", |x: f64| 1.3 + 0.5 * (1.7 * x + 0.3).sin());
        let h = 2.0 * PI / 25.0;
        let tau = h * h * 2.0;
        let fit = fit_boundary_left(&theta, h).unwrap();
        let nu = NuLocal::new(fit.theta_center, tau, h, 1.0);
        let closed = compact_left_closed_form(&fit, nu, h, tau);
        let oracle = boundary_oracle(&fit, nu, h, tau, &FULL_BASIS, BoundaryStencil::ThreePoint, Side::Left).unwrap();
        assert!(max_dev(&oracle, &closed) < 1e-8, "{closed:?}\n{oracle:?}");
    }

    #[test]
    fn constant_theta_right_row_mirrors_left() {
        let h = 0.3;
        let tau = 0.02;
        let nu = NuLocal::new(1.0, tau, h, 1.0);
        let left = build_left_row(&ExpFit::constant(1.0), nu, h, tau, NeumannVariant::CompactThreePoint).unwrap();
        let right = build_right_row(&ExpFit::constant(1.0), nu, h, tau, NeumannVariant::CompactThreePoint).unwrap();
        assert!(max_dev(&right, &left) < 1e-9);
    }

    #[test]
    fn right_row_of_reflected_theta() {
        let h = 2.0 * PI / 30.0;
        let tau = h * h;
        let theta = CoefficientField::exponential(1.0);
        let reflected = CoefficientField::new("refl", |x: f64| (2.0 * PI - x).exp());
        let fr = fit_boundary_right(&theta, h).unwrap();
        let fl = fit_boundary_left(&reflected, h).unwrap();
        let nu = NuLocal::new(fr.theta_center, tau, h, 1.0);
        let right = build_right_row(&fr, nu, h, tau, NeumannVariant::CompactThreePoint).unwrap();
        let left = build_left_row(&fl, nu, h, tau, NeumannVariant::CompactThreePoint).unwrap();
        assert!(max_dev(&right, &left) < 1e-8);
        let res = boundary_residuals(&right, &fr, nu, h, tau, &FULL_BASIS, Side::Right);
        assert!(res.iter().map(|r| r.abs()).fold(0.0, f64::max) < 1e-9 * right.max_abs());
    }

    #[test]
    fn basis_with_linear_term_is_rejected() {
        let mut basis = FULL_BASIS.to_vec();
        basis.push((1, 0));
        let fit = ExpFit::constant(1.0);
        let nu = NuLocal { nu: 1.0 };
        let err = boundary_oracle(&fit, nu, 0.2, 0.04, &basis, BoundaryStencil::ThreePoint, Side::Left).unwrap_err();
        assert!(matches!(err, Error::Rank { .. }), "{err:?}");
    }

    #[test]
    fn reduced_row_is_two_point() {
        let theta = CoefficientField::cos_squared_plus_one();
        let h = 0.2;
        let tau = 0.01;
        let fit = fit_boundary_left(&theta, h).unwrap();
        let nu = NuLocal::new(fit.theta_center, tau, h, 1.0);
        let row = build_left_row(&fit, nu, h, tau, NeumannVariant::ReducedTwoPoint).unwrap();
        assert_eq!(row.alpha_new[2], 0.0);
        assert_eq!(row.beta_old[2], 0.0);
        assert!(row.alpha_sum().abs() < 1e-10 * row.max_abs());
        let res = boundary_residuals(&row, &fit, nu, h, tau, &REDUCED_BASIS, Side::Left);
        assert!(res.iter().map(|r| r.abs()).fold(0.0, f64::max) < 1e-9 * row.max_abs());
    }

    #[test]
    fn classic_row_and_validation() {
        let row = build_left_row::<f64>(&ExpFit::constant(1.0), NuLocal { nu: 1.0 }, 0.1, 0.1, NeumannVariant::Classic { epsilon: 0.5 })
            .unwrap();
        assert_eq!(row.alpha_new, [-0.5, 0.5, 0.0]);
        assert_eq!(row.alpha_sum(), 0.0);
        assert!(NeumannVariant::Classic { epsilon: 0.0 }.validate().is_err());
        assert!("classic:1.5".parse::<NeumannVariant>().is_err());
        assert_eq!("classic:0.25".parse::<NeumannVariant>().unwrap(), NeumannVariant::Classic { epsilon: 0.25 });
    }

    #[test]
    fn leading_row_is_h_to_zero_limit() {
        let fit = ExpFit {
            c: [0.3, 0.2, -0.1, 0.05],
            ..ExpFit::constant(1.0)
        };
        let nu = NuLocal { nu: 2.0 };
        let tau = 1e-3;
        let lead = build_left_row(&fit, nu, 1e-9, tau, NeumannVariant::CompactLeading).unwrap();
        let full = compact_left_closed_form(&fit, nu, 1e-9, tau);
        assert!(max_dev(&full, &lead) < 1e-7);
    }
}
