//! Sample registry checked against independently expanded flux formulas.

use cpde_core::problem::ScalarKind;
use cpde_core::samples::{SampleId, SampleSolution};
use cpde_core::Complex64;
use std::f64::consts::PI;

fn grid() -> impl Iterator<Item = (f64, f64)> {
    (0..=12).flat_map(|i| (0..=7).map(move |k| (0.37 * k as f64, 2.0 * PI * i as f64 / 12.0)))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

#[test]
fn sn_flux_matches_expanded_form() {
    let s = SampleSolution::new(SampleId::Sn).unwrap();
    for (t, x) in grid() {
        let sx = x.sin();
        let want = 2.0 * (-4.0 * sx.powi(4) + 7.0 * sx * sx - 2.0) * t.sin();
        assert!(rel(s.flux_x(t, x), want) < 1e-13, "t={t} x={x}");
    }
}

#[test]
fn s1_flux_matches_expanded_form() {
    let s = SampleSolution::new(SampleId::S1).unwrap();
    for (t, x) in grid() {
        let (sx, cx) = x.sin_cos();
        let (st, ct) = t.sin_cos();
        let want = (15.0 * st * sx.powi(4) - 30.0 * st * sx * sx + 12.0 * st + 16.0 * sx * sx * ct * cx
            - 20.0 * ct * cx)
            * sx;
        assert!(rel(s.flux_x(t, x), want) < 1e-13, "t={t} x={x}");
    }
}

#[test]
fn s2_flux_matches_expanded_form() {
    // k = 2: θ u_x = (cos²x + 1) eˣ sin t (2 sin x cos x + sin²x)
    let s = SampleSolution::new(SampleId::S2 { k: 2 }).unwrap();
    let h = 1e-5;
    let q = |t: f64, x: f64| {
        let (sx, cx) = x.sin_cos();
        (cx * cx + 1.0) * x.exp() * t.sin() * (2.0 * sx * cx + sx * sx)
    };
    for (t, x) in grid() {
        let want = (q(t, x + h) - q(t, x - h)) / (2.0 * h);
        assert!(rel(s.flux_x(t, x), want) < 1e-7, "t={t} x={x}");
    }
}

#[test]
fn s3_flux_is_theta_times_laplacian_plus_drift() {
    let (a, b, omega) = (1.0, 2.0, 10.0);
    let s = SampleSolution::new(SampleId::S3 { a, b, omega }).unwrap();
    for (t, x) in grid() {
        let j = s.jet(t, x);
        let e = (a * x).exp();
        let want = e * (j.u_xx + a * j.u_x);
        assert!(rel(s.flux_x(t, x), want) < 1e-12);
    }
}

#[test]
fn forcing_is_residual_of_the_equation() {
    for id in ["s1", "s2:k=3", "s3:a=1,b=0.1,omega=1", "sn"] {
        let id: SampleId = id.parse().unwrap();
        let real = SampleSolution::new(id).unwrap();
        let ll = real.with_kind(ScalarKind::Complex);
        for (t, x) in grid() {
            let j = real.jet(t, x);
            let fr: f64 = real.forcing(t, x).unwrap();
            assert!(rel(fr, j.u_t - real.flux_x(t, x)) < 1e-14);
            let fc: Complex64 = ll.forcing(t, x).unwrap();
            assert_eq!(fc.re, j.u_t);
            assert!(rel(fc.im, -real.flux_x(t, x)) < 1e-14);
        }
    }
}

#[test]
fn dirichlet_data_and_initial_state_come_from_the_solution() {
    let s = SampleSolution::new(SampleId::S1).unwrap();
    let p = s.problem::<f64>().unwrap();
    assert!(!p.boundary.is_neumann());
    for i in 0..=10 {
        let x = 2.0 * PI * i as f64 / 10.0;
        assert_eq!((p.initial)(x), s.exact(0.0, x));
    }
    let sn = SampleSolution::new(SampleId::Snll).unwrap();
    assert_eq!(sn.kind, ScalarKind::Complex);
    assert!(sn.problem::<Complex64>().unwrap().boundary.is_neumann());
}
