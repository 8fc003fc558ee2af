//! Convergence studies, extrapolation and operator diagnostics.

use crate::linalg::{eigenvalues, frobenius, DenseMatrix, Lu};
use crate::problem::{Boundary, CoefficientField, Grid1D, ProblemSpec, ScalarKind, DOMAIN_LENGTH};
use crate::samples::SampleSolution;
use crate::stepper::{c_norm_error, run, run_with_observer, Scheme, SchemeMatrices};
use crate::{Complex64, Error, Result, Scalar};
use std::fmt;
use std::str::FromStr;

/// Final state of one sample run, widened to complex.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub grid: Grid1D,
    pub state: Vec<Complex64>,
    pub exact: Vec<Complex64>,
    pub muls_per_step: usize,
}

impl SampleRun {
    pub fn error(&self) -> f64 {
        c_norm_error(&self.state, &self.exact)
    }
}

fn widen<S: Scalar>(v: Vec<S>) -> Vec<Complex64> {
    v.into_iter().map(Scalar::to_complex).collect()
}

fn run_typed<S: Scalar>(sample: &SampleSolution, scheme: Scheme, grid: Grid1D) -> Result<SampleRun> {
    let problem = sample.problem::<S>()?;
    let rep = run(&problem, &grid, scheme)?;
    let exact = sample.exact_on::<Complex64>(grid.t_final(), &grid.nodes());
    Ok(SampleRun {
        grid,
        state: widen(rep.final_state),
        exact,
        muls_per_step: rep.muls_per_step,
    })
}

/// Runs `sample` on `N = n` with `|ν*| = courant_abs`.
pub fn run_sample(sample: &SampleSolution, scheme: Scheme, n: usize, courant_abs: f64, t_final: f64) -> Result<SampleRun> {
    let theta_max = sample.theta_field().max_on_nodes(n.max(1))?;
    let grid = crate::problem::make_grid(n, courant_abs, t_final, theta_max)?;
    match sample.kind {
        ScalarKind::Real => run_typed::<f64>(sample, scheme, grid),
        ScalarKind::Complex => run_typed::<Complex64>(sample, scheme, grid),
    }
}

/// `log(e_first / e_last) / log(N_last / N_first)`.
pub fn estimated_order(ns: &[usize], errors: &[f64]) -> f64 {
    assert!(ns.len() >= 2 && ns.len() == errors.len(), "need at least two matching points");
    let (n0, n1) = (ns[0] as f64, ns[ns.len() - 1] as f64);
    (errors[0] / errors[errors.len() - 1]).ln() / (n1 / n0).ln()
}

/// Least-squares slope of `−log e` against `log N`.
pub fn least_squares_order(ns: &[usize], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| -e.ln()).collect();
    slope(&xs, &ys)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEntry {
    pub n: usize,
    pub h: f64,
    pub tau: f64,
    pub steps: usize,
    pub error: f64,
    pub muls_per_step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub entries: Vec<ConvergenceEntry>,
    pub estimated_order: f64,
    pub least_squares_order: f64,
}

impl ConvergenceReport {
    pub fn from_entries(entries: Vec<ConvergenceEntry>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidArgument("need at least two grids".into()));
        }
        if entries.windows(2).any(|w| w[0].n >= w[1].n) {
            return Err(Error::InvalidArgument("grid sizes must increase".into()));
        }
        if let Some(e) = entries.iter().find(|e| !(e.error > 0.0 && e.error.is_finite())) {
            return Err(Error::InvalidArgument(format!("non-positive error {} at N = {}", e.error, e.n)));
        }
        let ns: Vec<usize> = entries.iter().map(|e| e.n).collect();
        let errs: Vec<f64> = entries.iter().map(|e| e.error).collect();
        Ok(Self {
            estimated_order: estimated_order(&ns, &errs),
            least_squares_order: least_squares_order(&ns, &errs),
            entries,
        })
    }

    pub fn errors(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.error).collect()
    }
}

fn entry(run: &SampleRun, error: f64) -> ConvergenceEntry {
    ConvergenceEntry {
        n: run.grid.n_intervals(),
        h: run.grid.h(),
        tau: run.grid.tau(),
        steps: run.grid.n_steps(),
        error,
        muls_per_step: run.muls_per_step,
    }
}

/// One convergence entry (for callers that schedule the grids themselves).
pub fn convergence_entry(
    sample: &SampleSolution,
    scheme: Scheme,
    n: usize,
    courant_abs: f64,
    t_final: f64,
) -> Result<ConvergenceEntry> {
    let r = run_sample(sample, scheme, n, courant_abs, t_final)?;
    Ok(entry(&r, r.error()))
}

pub fn convergence_study(
    sample: &SampleSolution,
    scheme: Scheme,
    ns: &[usize],
    courant_abs: f64,
    t_final: f64,
) -> Result<ConvergenceReport> {
    let entries = ns
        .iter()
        .map(|&n| convergence_entry(sample, scheme, n, courant_abs, t_final))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_entries(entries)
}

/// `(2^p u_{h/2} − u_h) / (2^p − 1)` on the coarse nodes.
pub fn richardson<S: Scalar>(u_h: &[S], u_h2: &[S], p: u32) -> Result<Vec<S>> {
    if u_h.len() < 2 || u_h2.len() != 2 * (u_h.len() - 1) + 1 {
        return Err(Error::Dimension(format!(
            "fine grid has {} nodes, coarse grid {}; expected 2N + 1 and N + 1",
            u_h2.len(),
            u_h.len()
        )));
    }
    let w = 2f64.powi(p as i32);
    Ok(u_h
        .iter()
        .enumerate()
        .map(|(j, &c)| (u_h2[2 * j].scale(w) - c).scale(1.0 / (w - 1.0)))
        .collect())
}

/// Power of `h` cancelled by extrapolation: the formal order of the scheme.
pub fn richardson_power(scheme: Scheme) -> u32 {
    if scheme.is_compact() {
        4
    } else {
        2
    }
}

/// One extrapolated entry: grids `N` and `2N`, error on the `N` nodes.
pub fn richardson_entry(
    sample: &SampleSolution,
    scheme: Scheme,
    n: usize,
    courant_abs: f64,
    t_final: f64,
) -> Result<ConvergenceEntry> {
    let coarse = run_sample(sample, scheme, n, courant_abs, t_final)?;
    let fine = run_sample(sample, scheme, 2 * n, courant_abs, t_final)?;
    let ex = richardson(&coarse.state, &fine.state, richardson_power(scheme))?;
    let mut e = entry(&coarse, c_norm_error(&ex, &coarse.exact));
    e.muls_per_step += fine.muls_per_step;
    Ok(e)
}

pub fn richardson_study(
    sample: &SampleSolution,
    scheme: Scheme,
    ns: &[usize],
    courant_abs: f64,
    t_final: f64,
) -> Result<ConvergenceReport> {
    let entries = ns
        .iter()
        .map(|&n| richardson_entry(sample, scheme, n, courant_abs, t_final))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceReport::from_entries(entries)
}

/// Restriction used for operator diagnostics: the interior block for
/// Dirichlet problems, everything for Neumann ones.
fn restrict<S: Scalar>(m: &DenseMatrix<S>, dirichlet: bool) -> DenseMatrix<S> {
    let n = m.rows();
    if dirichlet {
        m.block(1..n - 1, 1..m.cols() - 1)
    } else {
        m.clone()
    }
}

/// `A_new⁻¹ X` restricted per the boundary type.
fn solve_restricted<S: Scalar>(mats: &SchemeMatrices<S>, x: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    let d = mats.is_dirichlet();
    let lu = Lu::factor(&restrict(&mats.a_new(), d))?;
    lu.solve_matrix(&restrict(x, d))
}

/// `M = −A_new⁻¹ A_old`.
pub fn transition_matrix<S: Scalar>(mats: &SchemeMatrices<S>) -> Result<DenseMatrix<S>> {
    if mats.n_nodes() > 513 {
        return Err(Error::InvalidArgument(format!(
            "dense transition matrix limited to 512 intervals, got {}",
            mats.n_nodes() - 1
        )));
    }
    Ok(solve_restricted(mats, &mats.a_old())?.map(|v| -v))
}

/// `A_new⁻¹ A_old` and `A_new⁻¹ B_old` (the forcing operator including `τ`).
pub fn operator_products<S: Scalar>(mats: &SchemeMatrices<S>) -> Result<(DenseMatrix<S>, DenseMatrix<S>)> {
    let a = solve_restricted(mats, &mats.a_old())?;
    let b = solve_restricted(mats, &mats.b_old())?;
    Ok((a, b))
}

/// `‖C − C*‖_F / rows`.
pub fn asymmetry<S: Scalar>(c: &DenseMatrix<S>) -> Result<f64> {
    if !c.is_square() {
        return Err(Error::Dimension(format!("{}×{} matrix is not square", c.rows(), c.cols())));
    }
    Ok(frobenius(&c.sub(&c.adjoint())?) / c.rows() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryEntry {
    pub n: usize,
    pub s_old: f64,
    pub s_forcing: f64,
}

/// Asymmetry of `A_new⁻¹A_old` and `A_new⁻¹B_old` for the compact scheme on
/// a homogeneous Dirichlet problem.
pub fn asymmetry_study(theta: &CoefficientField, courant_abs: f64, ns: &[usize]) -> Result<Vec<AsymmetryEntry>> {
    ns.iter()
        .map(|&n| {
            let p = ProblemSpec::<f64>::homogeneous(theta.clone(), ScalarKind::Real, |_| 0.0, Boundary::homogeneous_dirichlet())?;
            let grid = p.grid(n, courant_abs, 1.0)?;
            let mats = SchemeMatrices::assemble(&p, &grid, Scheme::compact())?;
            let (a, b) = operator_products(&mats)?;
            Ok(AsymmetryEntry {
                n,
                s_old: asymmetry(&a)?,
                s_forcing: asymmetry(&b)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_modulus: f64,
    pub max_imag_abs: f64,
    /// Every real part is `≤ 0`.
    pub all_negative: bool,
    /// Every real part is `> 0`.
    pub all_positive: bool,
}

pub fn spectrum<S: Scalar>(m: &DenseMatrix<S>) -> Result<SpectrumReport> {
    let mut ev = eigenvalues(m)?;
    ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    Ok(SpectrumReport {
        max_modulus: ev.iter().map(|z| z.norm()).fold(0.0, f64::max),
        max_imag_abs: ev.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        all_negative: ev.iter().all(|z| z.re <= 0.0),
        all_positive: ev.iter().all(|z| z.re > 0.0),
        eigenvalues: ev,
    })
}

/// Homogeneous problem with coefficient `theta`, used for operator studies.
pub fn operator_problem<S: Scalar>(theta: &CoefficientField, kind: ScalarKind, neumann: bool) -> Result<ProblemSpec<S>> {
    let boundary = if neumann {
        Boundary::Neumann
    } else {
        Boundary::homogeneous_dirichlet()
    };
    ProblemSpec::homogeneous(theta.clone(), kind, |_| S::zero(), boundary)
}

/// Transition matrix on `N = n` with `|ν*| = courant_abs`.
pub fn transition_for<S: Scalar>(problem: &ProblemSpec<S>, scheme: Scheme, n: usize, courant_abs: f64) -> Result<DenseMatrix<S>> {
    let theta_max = problem.theta.max_on_nodes(n)?;
    let tau = crate::problem::courant_step(n, courant_abs, theta_max);
    let grid = Grid1D::new(n, tau, 1)?;
    transition_matrix(&SchemeMatrices::assemble(problem, &grid, scheme)?)
}

/// Bracket `[ν_lo, ν_hi]` around the Courant value at which `M` first gets
/// an eigenvalue with non-positive real part: `ν_lo` is the last scanned
/// value with the whole spectrum in the right half-plane, `ν_hi` the first
/// one without. `None` when the scan never changes state.
pub fn negativity_threshold(
    theta: &CoefficientField,
    neumann: bool,
    n: usize,
    nu_grid: &[f64],
    scheme: Scheme,
) -> Result<Option<(f64, f64)>> {
    if nu_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("Courant scan must be increasing".into()));
    }
    let p = operator_problem::<f64>(theta, ScalarKind::Real, neumann)?;
    let mut last_positive = None;
    for &nu in nu_grid {
        let s = spectrum(&transition_for(&p, scheme, n, nu)?)?;
        if s.all_positive {
            last_positive = Some(nu);
        } else {
            return Ok(last_positive.map(|lo| (lo, nu)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Trapezoid,
    /// Composite Simpson; an odd panel count ends with one 3/8 panel.
    Simpson,
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::Simpson => "simpson",
        })
    }
}

impl FromStr for Quadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trapezoid" | "trapezoidal" => Ok(Quadrature::Trapezoid),
            "simpson" | "parabolic" => Ok(Quadrature::Simpson),
            other => Err(Error::InvalidArgument(format!("unknown quadrature `{other}`"))),
        }
    }
}

/// Quadrature of equally spaced samples.
pub fn integrate(values: &[f64], h: f64, rule: Quadrature) -> Result<f64> {
    let panels = values.len().saturating_sub(1);
    if panels == 0 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    match rule {
        Quadrature::Trapezoid => {
            let inner: f64 = values[1..panels].iter().sum();
            Ok(h * (0.5 * (values[0] + values[panels]) + inner))
        }
        Quadrature::Simpson => {
            if panels < 2 {
                return Err(Error::InvalidArgument("Simpson needs at least two panels".into()));
            }
            let even = if panels.is_multiple_of(2) { panels } else { panels - 3 };
            let mut acc = 0.0;
            for k in (0..even).step_by(2) {
                acc += values[k] + 4.0 * values[k + 1] + values[k + 2];
            }
            acc *= h / 3.0;
            if even < panels {
                let v = &values[even..];
                acc += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            Ok(acc)
        }
    }
}

/// `∫ |Ψ|² dx` over the domain.
pub fn first_integral<S: Scalar>(state: &[S], h: f64, rule: Quadrature) -> Result<f64> {
    let v: Vec<f64> = state.iter().map(|z| z.modulus_sqr()).collect();
    integrate(&v, h, rule)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstIntegralTrace {
    pub n: usize,
    pub times: Vec<f64>,
    pub trapezoid: Vec<f64>,
    pub simpson: Vec<f64>,
}

impl FirstIntegralTrace {
    /// Largest deviation from the initial value.
    pub fn amplitude(&self, rule: Quadrature) -> f64 {
        let v = match rule {
            Quadrature::Trapezoid => &self.trapezoid,
            Quadrature::Simpson => &self.simpson,
        };
        v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max)
    }
}

/// Homogeneous complex problem `Ψ_t = i(θΨ_x)_x`, `Ψ(0, x) = sin x`, zero
/// Dirichlet data, recording `I(t)` after every step.
pub fn first_integral_trace(
    theta: &CoefficientField,
    scheme: Scheme,
    n: usize,
    courant_abs: f64,
    t_final: f64,
) -> Result<FirstIntegralTrace> {
    let p = ProblemSpec::<Complex64>::homogeneous(
        theta.clone(),
        ScalarKind::Complex,
        |x| Complex64::new(x.sin(), 0.0),
        Boundary::homogeneous_dirichlet(),
    )?;
    let grid = p.grid(n, courant_abs, t_final)?;
    let h = grid.h();
    let mut trace = FirstIntegralTrace {
        n,
        times: Vec::with_capacity(grid.n_steps() + 1),
        trapezoid: Vec::with_capacity(grid.n_steps() + 1),
        simpson: Vec::with_capacity(grid.n_steps() + 1),
    };
    let mut failure = None;
    run_with_observer(&p, &grid, scheme, |_, t, u| {
        match (first_integral(u, h, Quadrature::Trapezoid), first_integral(u, h, Quadrature::Simpson)) {
            (Ok(a), Ok(b)) => {
                trace.times.push(t);
                trace.trapezoid.push(a);
                trace.simpson.push(b);
            }
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(trace),
    }
}

/// Slope of `log(amplitude)` against `log h`.
pub fn amplitude_order(traces: &[FirstIntegralTrace], rule: Quadrature) -> f64 {
    let xs: Vec<f64> = traces.iter().map(|t| (DOMAIN_LENGTH / t.n as f64).ln()).collect();
    let ys: Vec<f64> = traces.iter().map(|t| t.amplitude(rule).ln()).collect();
    slope(&xs, &ys)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint {
    pub n: usize,
    pub muls_per_step: usize,
    pub error: f64,
}

/// Error against per-step cost for each scheme.
pub fn efficiency_curve(
    sample: &SampleSolution,
    schemes: &[Scheme],
    ns: &[usize],
    courant_abs: f64,
    t_final: f64,
) -> Result<Vec<Vec<EfficiencyPoint>>> {
    schemes
        .iter()
        .map(|&s| {
            let rep = convergence_study(sample, s, ns, courant_abs, t_final)?;
            Ok(rep
                .entries
                .iter()
                .map(|e| EfficiencyPoint {
                    n: e.n,
                    muls_per_step: e.muls_per_step,
                    error: e.error,
                })
                .collect())
        })
        .collect()
}

/// Piecewise log-log interpolation of error at a given cost.
pub fn error_at_cost(curve: &[EfficiencyPoint], cost: f64) -> Option<f64> {
    curve.windows(2).find_map(|w| {
        let (c0, c1) = (w[0].muls_per_step as f64, w[1].muls_per_step as f64);
        if cost < c0 || cost > c1 {
            return None;
        }
        let s = (cost.ln() - c0.ln()) / (c1.ln() - c0.ln());
        Some((w[0].error.ln() * (1.0 - s) + w[1].error.ln() * s).exp())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::SampleId;
    use crate::stepper::ClassicRhsVariant;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn order_of_published_columns() {
        let ns = [10, 20, 50, 100];
        assert!((estimated_order(&ns, &[1.58e-2, 1.36e-3, 3.73e-5, 2.36e-6]) - 3.83).abs() < 0.01);
        assert!((estimated_order(&ns, &[1.59e-1, 3.38e-2, 5.14e-3, 1.29e-3]) - 2.09).abs() < 0.01);
    }

    proptest! {
        #[test]
        fn order_is_scale_invariant(k in 1e-6f64..1e6, e in proptest::collection::vec(1e-9f64..1.0, 4)) {
            let ns = [10, 20, 50, 100];
            let scaled: Vec<f64> = e.iter().map(|v| v * k).collect();
            prop_assert!((estimated_order(&ns, &e) - estimated_order(&ns, &scaled)).abs() < 1e-9);
            prop_assert!((least_squares_order(&ns, &e) - least_squares_order(&ns, &scaled)).abs() < 1e-9);
        }

        #[test]
        fn richardson_cancels_pollution(n in 2usize..40, h in 0.01f64..1.0, p in 1u32..6) {
            let u: Vec<f64> = (0..=n).map(|j| (j as f64).sin()).collect();
            let w: Vec<f64> = (0..=n).map(|j| 1.0 + (j as f64).cos()).collect();
            let coarse: Vec<f64> = u.iter().zip(&w).map(|(u, w)| u + h.powi(p as i32) * w).collect();
            let fine: Vec<f64> = (0..=2 * n)
                .map(|k| if k % 2 == 0 { u[k / 2] + (h / 2.0).powi(p as i32) * w[k / 2] } else { 7.0 })
                .collect();
            let ex = richardson(&coarse, &fine, p).unwrap();
            for (a, b) in ex.iter().zip(&u) {
                prop_assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn richardson_rejects_mismatched_grids() {
        assert!(richardson(&[0.0; 5], &[0.0; 8], 4).is_err());
    }

    #[test]
    fn asymmetry_by_hand() {
        let c = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!((asymmetry(&c).unwrap() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let s = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(asymmetry(&s).unwrap(), 0.0);
    }

    #[test]
    fn classic_transition_is_symmetric_with_cn_spectrum() {
        let n = 10;
        let theta = CoefficientField::constant(1.0);
        let p = operator_problem::<f64>(&theta, ScalarKind::Real, false).unwrap();
        let nu = 0.8;
        let m = transition_for(&p, Scheme::classic(ClassicRhsVariant::Pointwise), n, nu).unwrap();
        assert!(frobenius(&m.sub(&m.transpose()).unwrap()) < 1e-12 * frobenius(&m));
        let s = spectrum(&m).unwrap();
        let h = 2.0 * PI / n as f64;
        let mut expected: Vec<f64> = (1..n)
            .map(|k| {
                let s = (k as f64 * h / 4.0).sin().powi(2);
                (1.0 - 2.0 * nu * s) / (1.0 + 2.0 * nu * s)
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        let mut got: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(s.max_modulus < 1.0);
    }

    #[test]
    fn classic_negativity_matches_analytic_crossing() {
        let n = 12;
        let theta = CoefficientField::constant(1.0);
        let h = 2.0 * PI / n as f64;
        // Largest sin²(kh/4) over the sine modes k = 1..N−1.
        let s_max = ((n - 1) as f64 * h / 4.0).sin().powi(2);
        let crossing = 1.0 / (2.0 * s_max);
        let grid: Vec<f64> = (1..40).map(|k| 0.05 * k as f64).collect();
        let (lo, hi) = negativity_threshold(&theta, false, n, &grid, Scheme::classic(ClassicRhsVariant::Pointwise))
            .unwrap()
            .unwrap();
        assert!(lo < crossing && crossing <= hi, "{lo} {crossing} {hi}");
    }

    #[test]
    fn quadrature_basics() {
        let n = 24;
        let h = 2.0 * PI / n as f64;
        let sin: Vec<f64> = (0..=n).map(|j| (j as f64 * h).sin()).collect();
        assert!((first_integral(&sin, h, Quadrature::Trapezoid).unwrap() - PI).abs() < 1e-14);
        assert!((first_integral(&sin, h, Quadrature::Simpson).unwrap() - PI).abs() < 1e-12);
        assert_eq!(first_integral(&[0.0; 11], 0.1, Quadrature::Simpson).unwrap(), 0.0);
        let cubic: Vec<f64> = (0..=5).map(|j| (j as f64 * 0.2).powi(3)).collect();
        assert!((integrate(&cubic, 0.2, Quadrature::Simpson).unwrap() - 0.25).abs() < 1e-14);
        assert!(integrate(&[1.0, 2.0], 1.0, Quadrature::Simpson).is_err());
    }

    #[test]
    fn convergence_report_validation() {
        let e = |n, error| ConvergenceEntry {
            n,
            h: 0.1,
            tau: 0.1,
            steps: 1,
            error,
            muls_per_step: 0,
        };
        assert!(ConvergenceReport::from_entries(vec![e(20, 1.0), e(10, 0.1)]).is_err());
        assert!(ConvergenceReport::from_entries(vec![e(10, 1.0), e(20, 0.0)]).is_err());
        let r = ConvergenceReport::from_entries(vec![e(10, 1.0), e(20, 1.0 / 16.0)]).unwrap();
        assert!((r.estimated_order - 4.0).abs() < 1e-12);
    }

    #[test]
    fn compact_convergence_s1() {
        let s = SampleSolution::new(SampleId::S1).unwrap();
        let r = convergence_study(&s, Scheme::compact(), &[10, 20, 40], 1.0, 1.0).unwrap();
        assert!(r.estimated_order > 3.7, "{}", r.estimated_order);
    }
}
