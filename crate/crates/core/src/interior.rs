//! Interior rows of the compact scheme
//!
//! ```text
//! b_L0 u^n_{j-1} + a_0 u^n_j + b_R0 u^n_{j+1} + b_L1 u^{n+1}_{j-1} + a_1 u^{n+1}_j + b_R1 u^{n+1}_{j+1}
//!     = τ (q_L0 f^n_{j-1} + p_0 f^n_j + q_R0 f^n_{j+1} + q_L1 f^{n+1}_{j-1} + p_1 f^{n+1}_j + q_R1 f^{n+1}_{j+1})
//! ```
//!
//! Every coefficient is a polynomial in `h` (degree ≤ 9) whose terms depend
//! on the local fit and on `ν_j = κ θ_j τ / h²`. The forcing coefficients
//! multiply `τ f`; with that scaling the `h⁰` terms are `p = 60`,
//! `q_L = 6 r_−`, `q_R = 6 r_+`.

use crate::fit::ExpFit;
use crate::linalg::{equilibrate_columns, null_space_1d_with_tol, numerical_rank, DenseMatrix, DEFAULT_RANK_TOL};
use crate::{Error, Result, Scalar};
use std::fmt;

/// Highest power of `h` in the coefficient polynomials.
pub const MAX_POWER: usize = 9;

/// Local Courant number `ν_j = κ θ(x_j) τ / h²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuLocal<S> {
    pub nu: S,
}

impl<S: Scalar> NuLocal<S> {
    pub fn new(theta_j: f64, tau: f64, h: f64, unit: S) -> Self {
        Self {
            nu: unit.scale(theta_j * tau / (h * h)),
        }
    }
}

/// Which powers of `h` to keep in the coefficient polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CutLevel {
    /// All terms up to `h⁹`.
    #[default]
    Exact,
    /// Drop `h^p` and higher.
    DropFrom(u32),
}

impl CutLevel {
    pub fn keeps(&self, power: usize) -> bool {
        match *self {
            CutLevel::Exact => true,
            CutLevel::DropFrom(p) => (power as u32) < p,
        }
    }
}

impl fmt::Display for CutLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutLevel::Exact => f.write_str("exact"),
            CutLevel::DropFrom(p) => write!(f, "h{p}"),
        }
    }
}

/// The twelve coefficients of one interior row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactRow<S> {
    pub b_l0: S,
    pub a0: S,
    pub b_r0: S,
    pub b_l1: S,
    pub a1: S,
    pub b_r1: S,
    pub q_l0: S,
    pub p0: S,
    pub q_r0: S,
    pub q_l1: S,
    pub p1: S,
    pub q_r1: S,
}

pub const ROW_COLUMNS: [&str; 12] = [
    "b_l0", "a_0", "b_r0", "b_l1", "a_1", "b_r1", "q_l0", "p_0", "q_r0", "q_l1", "p_1", "q_r1",
];

impl<S: Scalar> CompactRow<S> {
    /// Coefficients in the order of [`ROW_COLUMNS`].
    pub fn to_array(&self) -> [S; 12] {
        [
            self.b_l0, self.a0, self.b_r0, self.b_l1, self.a1, self.b_r1, self.q_l0, self.p0, self.q_r0,
            self.q_l1, self.p1, self.q_r1,
        ]
    }

    pub fn from_array(v: [S; 12]) -> Self {
        Self {
            b_l0: v[0],
            a0: v[1],
            b_r0: v[2],
            b_l1: v[3],
            a1: v[4],
            b_r1: v[5],
            q_l0: v[6],
            p0: v[7],
            q_r0: v[8],
            q_l1: v[9],
            p1: v[10],
            q_r1: v[11],
        }
    }

    pub fn old_layer(&self) -> [S; 3] {
        [self.b_l0, self.a0, self.b_r0]
    }

    pub fn new_layer(&self) -> [S; 3] {
        [self.b_l1, self.a1, self.b_r1]
    }

    pub fn forcing_old(&self) -> [S; 3] {
        [self.q_l0, self.p0, self.q_r0]
    }

    pub fn forcing_new(&self) -> [S; 3] {
        [self.q_l1, self.p1, self.q_r1]
    }

    /// Sum of the solution-side coefficients (zero for exactness on `u = 1`).
    pub fn solution_sum(&self) -> S {
        self.old_layer()
            .into_iter()
            .chain(self.new_layer())
            .fold(S::zero(), |a, b| a + b)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn csv_header() -> String {
        ROW_COLUMNS
            .iter()
            .flat_map(|c| if S::IS_COMPLEX { vec![format!("{c}_re"), format!("{c}_im")] } else { vec![c.to_string()] })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_csv_record(&self) -> String {
        self.to_array()
            .iter()
            .flat_map(|v| {
                if S::IS_COMPLEX {
                    vec![format!("{:.16e}", v.re()), format!("{:.16e}", v.im())]
                } else {
                    vec![format!("{:.16e}", v.re())]
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// One coefficient as `Σ_k h^k (A_k + ν B_k)`.
type Poly = [(f64, f64); MAX_POWER + 1];

/// The left-neighbour column (`b_L0`) and `q_L`, for the given fit and ratio.
/// The right neighbour is the same expression for the mirrored fit.
fn left_neighbour(c: [f64; 4], r: f64) -> (Poly, [f64; MAX_POWER + 1]) {
    let [c1, c2, c3, c4] = c;
    let b = [
        (-12.0 * r, -72.0),
        (6.0 * c1 * r, 36.0 * c1),
        (2.0 * r * c1 * c1 - 8.0 * c2 * r, -96.0 * c2),
        (-12.0 * c3 * r + 4.0 * c1 * c2 * r, 18.0 * c3 - 3.0 * c1.powi(3) + 42.0 * c1 * c2),
        (-16.0 * c4 * r + 6.0 * c1 * c3 * r, -32.0 * c2 * c2 - 192.0 * c4 + 24.0 * c1 * c3),
        (8.0 * c1 * c4 * r, 84.0 * c1 * c4 + 12.0 * c1 * c2 * c2 - 18.0 * c1 * c1 * c3),
        (0.0, 72.0 * c3 * c3 - 128.0 * c2 * c4),
        (0.0, -27.0 * c1 * c3 * c3 + 48.0 * c1 * c2 * c4),
        (0.0, -128.0 * c4 * c4),
        (0.0, 48.0 * c1 * c4 * c4),
    ];
    let q = [
        6.0 * r,
        -3.0 * c1 * r,
        r * (4.0 * c2 - c1 * c1),
        r * (6.0 * c3 - 2.0 * c1 * c2),
        r * (8.0 * c4 - 3.0 * c1 * c3),
        -4.0 * c1 * c4 * r,
        0.0,
        0.0,
        0.0,
        0.0,
    ];
    (b, q)
}

/// Centre column of the old layer (`a_0`) and `p`.
fn centre(c: [f64; 4]) -> (Poly, [f64; MAX_POWER + 1]) {
    let [c1, c2, c3, c4] = c;
    let a = [
        (-120.0, 144.0),
        (0.0, 0.0),
        (8.0 * c1 * c1 - 128.0 * c2, 192.0 * c2),
        (0.0, 0.0),
        (
            48.0 * c1 * c3 - 256.0 * c4 - 32.0 * c2 * c2,
            384.0 * c4 + 64.0 * c2 * c2 - 48.0 * c1 * c3,
        ),
        (0.0, 0.0),
        (72.0 * c3 * c3 - 128.0 * c2 * c4, -144.0 * c3 * c3 + 256.0 * c2 * c4),
        (0.0, 0.0),
        (-128.0 * c4 * c4, 256.0 * c4 * c4),
        (0.0, 0.0),
    ];
    let p = [
        60.0,
        0.0,
        4.0 * (16.0 * c2 - c1 * c1),
        0.0,
        4.0 * (4.0 * c2 * c2 + 32.0 * c4 - 6.0 * c1 * c3),
        0.0,
        4.0 * (16.0 * c2 * c4 - 9.0 * c3 * c3),
        0.0,
        64.0 * c4 * c4,
        0.0,
    ];
    (a, p)
}

/// Evaluates `Σ h^k (±A_k + ν B_k)` over the kept powers. The `ν`-free part
/// changes sign between the old (`sign = 1`) and new (`sign = −1`) layers.
fn eval_poly<S: Scalar>(poly: &Poly, sign: f64, nu: S, h: f64, cut: CutLevel) -> S {
    let mut acc = S::zero();
    let mut hk = 1.0;
    for (k, &(a, b)) in poly.iter().enumerate() {
        if cut.keeps(k) {
            acc += S::from_re(sign * a * hk) + nu.scale(b * hk);
        }
        hk *= h;
    }
    acc
}

fn eval_real(poly: &[f64; MAX_POWER + 1], h: f64, cut: CutLevel) -> f64 {
    let mut acc = 0.0;
    let mut hk = 1.0;
    for (k, &a) in poly.iter().enumerate() {
        if cut.keeps(k) {
            acc += a * hk;
        }
        hk *= h;
    }
    acc
}

/// Coefficients of an interior row from the closed-form expansions in `h`.
pub fn assemble_row<S: Scalar>(fit: &ExpFit, nu: NuLocal<S>, h: f64, cut: CutLevel) -> CompactRow<S> {
    let (bl, ql) = left_neighbour(fit.c, fit.r_minus);
    let (br, qr) = left_neighbour(fit.mirrored().c, fit.r_plus);
    let (a, p) = centre(fit.c);
    let nu = nu.nu;
    let q_l = S::from_re(eval_real(&ql, h, cut));
    let q_r = S::from_re(eval_real(&qr, h, cut));
    let p = S::from_re(eval_real(&p, h, cut));
    CompactRow {
        b_l0: eval_poly(&bl, 1.0, nu, h, cut),
        a0: eval_poly(&a, 1.0, nu, h, cut),
        b_r0: eval_poly(&br, 1.0, nu, h, cut),
        b_l1: eval_poly(&bl, -1.0, nu, h, cut),
        a1: eval_poly(&a, -1.0, nu, h, cut),
        b_r1: eval_poly(&br, -1.0, nu, h, cut),
        q_l0: q_l,
        p0: p,
        q_r0: q_r,
        q_l1: q_l,
        p1: p,
        q_r1: q_r,
    }
}

/// Stencil abscissas `y` and time offsets `s` of the six nodes, in the
/// coefficient order of [`CompactRow`].
fn stencil(h: f64, tau: f64) -> [(f64, f64); 6] {
    [(-h, 0.0), (0.0, 0.0), (h, 0.0), (-h, tau), (0.0, tau), (h, tau)]
}

/// Monomial test pair `u = y^k1 s^k2`, `f = u_s − κ θ̂ (ρ' u_y + u_yy)` where
/// `κθ_j` is recovered from `ν`.
fn monomial<S: Scalar>(fit: &ExpFit, kappa_theta: S, k1: i32, k2: i32, y: f64, s: f64) -> (S, S) {
    let u = y.powi(k1) * s.powi(k2);
    let u_s = if k2 > 0 { k2 as f64 * y.powi(k1) * s.powi(k2 - 1) } else { 0.0 };
    let u_y = if k1 > 0 { k1 as f64 * y.powi(k1 - 1) * s.powi(k2) } else { 0.0 };
    let u_yy = if k1 > 1 {
        (k1 * (k1 - 1)) as f64 * y.powi(k1 - 2) * s.powi(k2)
    } else {
        0.0
    };
    let flux = fit.log_poly(y).exp() * (fit.log_poly_dy(y) * u_y + u_yy);
    (S::from_re(u), S::from_re(u_s) - kappa_theta.scale(flux))
}

/// The 15 × 12 homogeneous system obtained from the test pairs
/// `k1 = 0..4`, `k2 = 0..2`. Unknowns are the six solution-side coefficients
/// followed by the six forcing multipliers `τ q`, `τ p`. Row `(k1, k2)` is
/// divided by `h^k1 τ^k2`.
pub fn test_function_matrix<S: Scalar>(fit: &ExpFit, nu: NuLocal<S>, h: f64, tau: f64) -> DenseMatrix<S> {
    let kappa_theta = nu.nu.scale(h * h / tau);
    let pts = stencil(h, tau);
    let mut a = DenseMatrix::zeros(15, 12);
    for k1 in 0..5 {
        for k2 in 0..3 {
            let row = (k1 * 3 + k2) as usize;
            let scale = 1.0 / (h.powi(k1) * tau.powi(k2));
            for (c, &(y, s)) in pts.iter().enumerate() {
                let (u, f) = monomial(fit, kappa_theta, k1, k2, y, s);
                a.set(row, c, u.scale(scale));
                a.set(row, 6 + c, -f.scale(scale));
            }
        }
    }
    a
}

/// Scaled residuals of the 15 test-function equations for a row.
pub fn monomial_residuals<S: Scalar>(row: &CompactRow<S>, fit: &ExpFit, nu: NuLocal<S>, h: f64, tau: f64) -> Vec<S> {
    let a = test_function_matrix(fit, nu, h, tau);
    let mut x = row.to_array();
    for v in &mut x[6..] {
        *v = v.scale(tau);
    }
    a.mul_vec(&x)
}

/// Numerical rank of the column-equilibrated test-function system.
pub fn test_function_rank<S: Scalar>(fit: &ExpFit, nu: NuLocal<S>, h: f64, tau: f64) -> usize {
    let mut a = test_function_matrix(fit, nu, h, tau);
    equilibrate_columns(&mut a);
    numerical_rank(&a, DEFAULT_RANK_TOL)
}

/// Independent derivation of an interior row: the one-dimensional null space
/// of the 15 × 12 test-function system, which must have rank 11, scaled so
/// that `p_0 = 60`.
pub fn derive_row_oracle<S: Scalar>(fit: &ExpFit, nu: NuLocal<S>, h: f64, tau: f64) -> Result<CompactRow<S>> {
    derive_row_oracle_with_tol(fit, nu, h, tau, DEFAULT_RANK_TOL)
}

pub fn derive_row_oracle_with_tol<S: Scalar>(
    fit: &ExpFit,
    nu: NuLocal<S>,
    h: f64,
    tau: f64,
    rank_tol: f64,
) -> Result<CompactRow<S>> {
    let mut a = test_function_matrix(fit, nu, h, tau);
    let scales = equilibrate_columns(&mut a);
    let v = null_space_1d_with_tol(&a, 11, rank_tol)?;
    let mut x = [S::zero(); 12];
    for j in 0..12 {
        x[j] = v[j].scale(scales[j]);
    }
    for xj in &mut x[6..] {
        *xj = xj.scale(1.0 / tau);
    }
    let p0 = x[7];
    if p0.modulus() == 0.0 {
        return Err(Error::Rank {
            expected: 11,
            found: 11,
        });
    }
    let norm = S::from_re(60.0) / p0;
    Ok(CompactRow::from_array(x.map(|v| v * norm)))
}

/// Row of the steady problem obtained by summing the two layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryRow<S> {
    pub b_l: S,
    pub a: S,
    pub b_r: S,
    pub q_l: S,
    pub p: S,
    pub q_r: S,
}

/// `a = a_0 + a_1`, `b = b_0 + b_1`, `q = q_0 + q_1`: the scheme applied to a
/// time-independent solution.
pub fn stationary_reduction<S: Scalar>(row: &CompactRow<S>) -> StationaryRow<S> {
    StationaryRow {
        b_l: row.b_l0 + row.b_l1,
        a: row.a0 + row.a1,
        b_r: row.b_r0 + row.b_r1,
        q_l: row.q_l0 + row.q_l1,
        p: row.p0 + row.p1,
        q_r: row.q_r0 + row.q_r1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::fit_interior;
    use crate::linalg::{solve_tridiag, Tridiag};
    use crate::problem::CoefficientField;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// Largest entrywise deviation after rescaling `a` onto `b` by `p_0`.
    fn proportional<S: Scalar>(a: &CompactRow<S>, b: &CompactRow<S>) -> f64 {
        let k = b.p0 / a.p0;
        let scale = b.max_abs();
        a.to_array()
            .iter()
            .zip(b.to_array().iter())
            .map(|(x, y)| (*x * k - *y).modulus() / scale)
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_coefficient_row() {
        let fit = ExpFit::constant(1.0);
        let row = assemble_row(&fit, NuLocal { nu: 1.0 }, 0.3, CutLevel::Exact);
        assert_eq!(
            [row.a0, row.b_l0, row.b_r0, row.a1, row.b_l1, row.b_r1],
            [24.0, -84.0, -84.0, 264.0, -60.0, -60.0]
        );
        assert_eq!([row.p0, row.q_l0, row.q_r0], [60.0, 6.0, 6.0]);
        assert_eq!(row.solution_sum(), 0.0);
    }

    #[test]
    fn stationary_reduction_of_constant_row() {
        let row = assemble_row(&ExpFit::constant(1.0), NuLocal { nu: 1.0 }, 0.3, CutLevel::Exact);
        let st = stationary_reduction(&row);
        assert_eq!((st.b_l, st.a, st.b_r), (-144.0, 288.0, -144.0));
        assert_eq!((st.q_l, st.p, st.q_r), (12.0, 120.0, 12.0));
    }

    #[test]
    fn oracle_matches_table_for_variable_theta() {
        let theta = CoefficientField::cos_squared_plus_one();
        let n = 20;
        let h = 2.0 * PI / n as f64;
        let tau = h * h / 2.0;
        let fit = fit_interior(&theta, 1.0, h).unwrap();
        let nu = NuLocal::new(fit.theta_center, tau, h, 1.0);
        let a = assemble_row(&fit, nu, h, CutLevel::Exact);
        let b = derive_row_oracle(&fit, nu, h, tau).unwrap();
        assert!(proportional(&a, &b) < 1e-8, "{a:?}\n{b:?}");
    }

    #[test]
    fn oracle_matches_table_complex() {
        let theta = CoefficientField::cos_squared_plus_one();
        let h = 2.0 * PI / 30.0;
        let tau = h * h;
        let fit = fit_interior(&theta, 4.0, h).unwrap();
        let nu = NuLocal::new(fit.theta_center, tau, h, Complex64::i());
        let a = assemble_row(&fit, nu, h, CutLevel::Exact);
        let b = derive_row_oracle(&fit, nu, h, tau).unwrap();
        assert!(proportional(&a, &b) < 1e-8);
    }

    #[test]
    fn table_rows_annihilate_monomials() {
        let fit = ExpFit {
            c: [0.4, -0.3, 0.2, 0.1],
            theta_center: 1.3,
            r_minus: 0.0,
            r_plus: 0.0,
        };
        let h = 0.2;
        let fit = ExpFit {
            r_minus: (-fit.log_poly(-h)).exp(),
            r_plus: (-fit.log_poly(h)).exp(),
            ..fit
        };
        let tau = 0.01;
        let nu = NuLocal::new(fit.theta_center, tau, h, 1.0);
        let row = assemble_row(&fit, nu, h, CutLevel::Exact);
        let res = monomial_residuals(&row, &fit, nu, h, tau);
        let worst = res.iter().map(|r| r.abs()).fold(0.0, f64::max);
        assert!(worst < 1e-10 * row.max_abs(), "{worst}");
    }

    #[test]
    fn cut_drops_high_powers_only() {
        let theta = CoefficientField::cos_squared_plus_one();
        let h = 0.3;
        let fit = fit_interior(&theta, 1.0, h).unwrap();
        let nu = NuLocal::new(fit.theta_center, h * h, h, 1.0);
        let full = assemble_row(&fit, nu, h, CutLevel::Exact);
        let cut9 = assemble_row(&fit, nu, h, CutLevel::DropFrom(10));
        assert_eq!(full, cut9);
        let cut1 = assemble_row(&fit, nu, h, CutLevel::DropFrom(1));
        assert_eq!(cut1.a0, 144.0 * nu.nu - 120.0);
        for p in 1..=9 {
            let r = assemble_row(&fit, nu, h, CutLevel::DropFrom(p));
            assert!(r.solution_sum().abs() < 1e-12 * r.max_abs());
        }
    }

    #[test]
    fn steady_problem_converges_at_fourth_order() {
        // −(θ u')' = f with u = sin x, θ = cos²x + 1 on [0, 2π]
        let theta = CoefficientField::cos_squared_plus_one();
        let f = |x: f64| {
            let th = x.cos().powi(2) + 1.0;
            let dth = -(2.0 * x).sin();
            -(dth * x.cos() - th * x.sin())
        };
        let mut errs = Vec::new();
        for n in [20usize, 40] {
            let h = 2.0 * PI / n as f64;
            let m = n - 1;
            let (mut lo, mut di, mut up, mut rhs) = (vec![], vec![], vec![], vec![]);
            for j in 1..n {
                let x = j as f64 * h;
                let fit = fit_interior(&theta, x, h).unwrap();
                let tau = h * h;
                let nu = NuLocal::new(fit.theta_center, tau, h, 1.0);
                let st = stationary_reduction(&assemble_row(&fit, nu, h, CutLevel::Exact));
                if j > 1 {
                    lo.push(st.b_l / nu.nu);
                }
                di.push(st.a / nu.nu);
                if j < n - 1 {
                    up.push(st.b_r / nu.nu);
                }
                rhs.push(tau / nu.nu * (st.q_l * f(x - h) + st.p * f(x) + st.q_r * f(x + h)));
            }
            let sol = solve_tridiag(&Tridiag::new(lo, di, up).unwrap(), &rhs).unwrap().x;
            assert_eq!(sol.len(), m);
            let err = (1..n)
                .map(|j| (sol[j - 1] - (j as f64 * h).sin()).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.7, "order {order}, errors {errs:?}");
    }

    #[test]
    fn csv_dump_has_twelve_columns() {
        let row = assemble_row(&ExpFit::constant(1.0), NuLocal { nu: 1.0 }, 0.3, CutLevel::Exact);
        assert_eq!(CompactRow::<f64>::csv_header().split(',').count(), 12);
        assert_eq!(row.to_csv_record().split(',').count(), 12);
        assert_eq!(CompactRow::<Complex64>::csv_header().split(',').count(), 24);
    }
}
