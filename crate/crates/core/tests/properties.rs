//! Property tests across module boundaries.

use cpde_core::fit::fit_interior;
use cpde_core::interior::{assemble_row, derive_row_oracle, test_function_rank, CutLevel, NuLocal};
use cpde_core::linalg::{eigenvalues, solve_dense, solve_tridiag, DenseMatrix, Tridiag};
use cpde_core::problem::{Boundary, CoefficientField, ProblemSpec, ScalarKind};
use cpde_core::stepper::{ClassicRhsVariant, Scheme, SchemeMatrices};
use cpde_core::{Complex64, Scalar};
use proptest::prelude::*;
use std::f64::consts::PI;

fn wavy(amp: f64, k: f64, phase: f64) -> CoefficientField {
    CoefficientField::new("wavy", move |x: f64| 1.0 + amp * (k * x + phase).sin().powi(2))
}

fn proportional<S: Scalar>(a: &[S; 12], b: &[S; 12]) -> f64 {
    let k = b[9] / a[9];
    let scale = b.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (*x * k - *y).modulus() / scale).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sweep_agrees_with_dense_lu(
        n in 2usize..40,
        seed in proptest::collection::vec(-1.0f64..1.0, 120),
    ) {
        let lower: Vec<f64> = seed[..n - 1].to_vec();
        let upper: Vec<f64> = seed[40..40 + n - 1].to_vec();
        let diag: Vec<f64> = (0..n).map(|i| 2.5 + seed[80 + i % 40].abs()).collect();
        let rhs: Vec<f64> = (0..n).map(|i| seed[(7 * i) % 120]).collect();
        let t = Tridiag::new(lower, diag, upper).unwrap();
        let x = solve_tridiag(&t, &rhs).unwrap().x;
        let y = solve_dense(&t.to_dense(), &rhs).unwrap();
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_is_invariant_under_transpose(
        n in 2usize..9,
        data in proptest::collection::vec(-2.0f64..2.0, 64),
    ) {
        let a = DenseMatrix::from_fn(n, n, |i, j| data[i * 8 + j]);
        let mut l = eigenvalues(&a).unwrap();
        let mut r = eigenvalues(&a.transpose()).unwrap();
        prop_assert_eq!(l.len(), n);
        let scale = 1.0 + a.max_abs();
        // greedy matching; both lists are small
        for z in l.drain(..) {
            let (k, d) = r
                .iter()
                .enumerate()
                .map(|(k, w)| (k, (z - w).norm()))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            prop_assert!(d < 1e-6 * scale, "unmatched eigenvalue {z} ({d})");
            r.swap_remove(k);
        }
    }

    #[test]
    fn closed_form_row_is_proportional_to_oracle(
        amp in 0.0f64..1.5, k in 0.3f64..2.0, phase in 0.0f64..6.3,
        n in 16usize..80, x_frac in 0.05f64..0.95, nu in 0.2f64..4.0, complex in any::<bool>(),
    ) {
        let theta = wavy(amp, k, phase);
        let h = 2.0 * PI / n as f64;
        let x = 2.0 * PI * x_frac;
        let fit = fit_interior(&theta, x, h).unwrap();
        let tau = nu * h * h / fit.theta_center;
        if complex {
            let nl = NuLocal::new(fit.theta_center, tau, h, Complex64::i());
            let a = assemble_row(&fit, nl, h, CutLevel::Exact).to_array();
            let b = derive_row_oracle(&fit, nl, h, tau).unwrap().to_array();
            prop_assert!(proportional(&a, &b) < 1e-7);
            prop_assert_eq!(test_function_rank(&fit, nl, h, tau), 11);
        } else {
            let nl = NuLocal::new(fit.theta_center, tau, h, 1.0);
            let a = assemble_row(&fit, nl, h, CutLevel::Exact).to_array();
            let b = derive_row_oracle(&fit, nl, h, tau).unwrap().to_array();
            prop_assert!(proportional(&a, &b) < 1e-7);
            prop_assert_eq!(test_function_rank(&fit, nl, h, tau), 11);
        }
    }

    #[test]
    fn fit_reproduces_theta_at_its_nodes(
        amp in 0.0f64..1.5, k in 0.3f64..2.0, phase in 0.0f64..6.3,
        x in 0.5f64..5.7, h in 0.02f64..0.4,
    ) {
        let theta = wavy(amp, k, phase);
        let fit = fit_interior(&theta, x, h).unwrap();
        for y in [-h, -0.5 * h, 0.0, 0.5 * h, h] {
            let want = theta.sample(x + y).unwrap();
            prop_assert!((fit.model(y) - want).abs() < 1e-11 * want);
        }
        let m = fit.mirrored().mirrored();
        prop_assert_eq!(m, fit);
    }

    #[test]
    fn step_is_linear_in_state_and_forcing(
        n in 6usize..30,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        seed in proptest::collection::vec(-1.0f64..1.0, 93),
        which in 0usize..3,
    ) {
        let scheme = match which {
            0 => Scheme::compact(),
            1 => Scheme::classic(ClassicRhsVariant::Pointwise),
            _ => Scheme::classic(ClassicRhsVariant::ThreePoint),
        };
        let p = ProblemSpec::<f64>::homogeneous(
            CoefficientField::cos_squared_plus_one(),
            ScalarKind::Real,
            |_| 0.0,
            Boundary::Neumann,
        ).unwrap();
        let grid = p.grid(n, 1.0, 0.1).unwrap();
        let m = SchemeMatrices::assemble(&p, &grid, scheme).unwrap();
        let k = n + 1;
        let u: Vec<f64> = seed[..k].to_vec();
        let v: Vec<f64> = seed[31..31 + k].to_vec();
        let f: Vec<f64> = seed[62..62 + k].to_vec();
        let z = vec![0.0; k];
        let (su, _) = m.step(&u, &z, &z, (0.0, 0.0)).unwrap();
        let (sv, _) = m.step(&v, &f, &f, (0.0, 0.0)).unwrap();
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let bf: Vec<f64> = f.iter().map(|x| b * x).collect();
        let (sw, _) = m.step(&w, &bf, &bf, (0.0, 0.0)).unwrap();
        for i in 0..k {
            prop_assert!((sw[i] - (a * su[i] + b * sv[i])).abs() < 1e-10);
        }
    }
}
