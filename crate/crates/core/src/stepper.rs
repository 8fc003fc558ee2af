//! Global operators and time stepping
//!
//! Both schemes are written as
//!
//! ```text
//! A_new u^{n+1} + A_old u^n = B_old f^n + B_new f^{n+1}
//! ```
//!
//! and advanced with one double sweep per step. Rows are stored divided by
//! the factor common to the forcing side (`τ` for the compact scheme, `τ/2`
//! for the classic one), so applying the forcing costs only the stencil
//! weights.

use crate::boundary::{build_left_row, build_right_row, BoundaryRow, NeumannVariant};
use crate::fit::{fit_boundary_left, fit_boundary_right, fit_interior};
use crate::interior::{assemble_row, CutLevel, NuLocal};
use crate::linalg::{solve_tridiag, DenseMatrix, Tridiag};
use crate::problem::{Boundary, Grid1D, ProblemSpec};
use crate::{Error, Result, Scalar};
use std::fmt;
use std::str::FromStr;

/// Right-hand side of the classic scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassicRhsVariant {
    /// `(f^{n+1}_j + f^n_j) / 2`.
    #[default]
    Pointwise,
    /// `F_j = (f_{j-1} + 2 f_j + f_{j+1}) / 4`.
    ThreePoint,
    /// `F_j = (f_{j-1} + 2 f_{j-1/2} + 2 f_j + 2 f_{j+1/2} + f_{j+1}) / 8`.
    FivePoint,
}

impl fmt::Display for ClassicRhsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassicRhsVariant::Pointwise => "pointwise",
            ClassicRhsVariant::ThreePoint => "three-point",
            ClassicRhsVariant::FivePoint => "five-point",
        })
    }
}

impl FromStr for ClassicRhsVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pointwise" | "1" => Ok(ClassicRhsVariant::Pointwise),
            "three-point" | "3" => Ok(ClassicRhsVariant::ThreePoint),
            "five-point" | "5" => Ok(ClassicRhsVariant::FivePoint),
            other => Err(Error::InvalidArgument(format!("unknown classic rhs `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Compact { cut: CutLevel, neumann: NeumannVariant },
    Classic { rhs: ClassicRhsVariant, neumann: NeumannVariant },
}

impl Scheme {
    pub fn compact() -> Self {
        Scheme::Compact {
            cut: CutLevel::Exact,
            neumann: NeumannVariant::CompactThreePoint,
        }
    }

    pub fn classic(rhs: ClassicRhsVariant) -> Self {
        Scheme::Classic {
            rhs,
            neumann: NeumannVariant::Classic { epsilon: 0.5 },
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Scheme::Compact { .. })
    }

    pub fn neumann(&self) -> NeumannVariant {
        match *self {
            Scheme::Compact { neumann, .. } | Scheme::Classic { neumann, .. } => neumann,
        }
    }

    pub fn with_neumann(self, v: NeumannVariant) -> Self {
        match self {
            Scheme::Compact { cut, .. } => Scheme::Compact { cut, neumann: v },
            Scheme::Classic { rhs, .. } => Scheme::Classic { rhs, neumann: v },
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Compact { cut, .. } if *cut == CutLevel::Exact => f.write_str("compact"),
            Scheme::Compact { cut, .. } => write!(f, "compact[{cut}]"),
            Scheme::Classic { rhs, .. } => write!(f, "classic[{rhs}]"),
        }
    }
}

/// Accepts the [`Display`](fmt::Display) form as well as `compact:h5` and
/// `classic:three-point`. The Neumann variant is the default for the family.
impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (family, option) = match s.split_once([':', '[']) {
            Some((f, o)) => (f, Some(o.trim_end_matches(']'))),
            None => (s.as_str(), None),
        };
        match (family, option) {
            ("compact", None | Some("exact")) => Ok(Scheme::compact()),
            ("compact", Some(cut)) => {
                let p: u32 = cut
                    .strip_prefix('h')
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("bad cut level `{cut}`")))?;
                if !(5..=9).contains(&p) {
                    return Err(Error::InvalidArgument(format!("cut level must be h5..h9, got h{p}")));
                }
                Ok(Scheme::Compact {
                    cut: CutLevel::DropFrom(p),
                    neumann: NeumannVariant::CompactThreePoint,
                })
            }
            ("classic", None) => Ok(Scheme::classic(ClassicRhsVariant::Pointwise)),
            ("classic", Some(rhs)) => Ok(Scheme::classic(rhs.parse()?)),
            _ => Err(Error::InvalidArgument(format!("unknown scheme `{s}`"))),
        }
    }
}

/// Three consecutive entries of a matrix row starting at column `first`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilRow<S> {
    pub first: usize,
    pub w: [S; 3],
}

impl<S: Scalar> StencilRow<S> {
    fn zero(first: usize) -> Self {
        Self { first, w: [S::zero(); 3] }
    }

    fn sub_scaled(&mut self, other: &Self, k: S) {
        debug_assert_eq!(self.first, other.first);
        for (a, b) in self.w.iter_mut().zip(other.w) {
            *a -= k * b;
        }
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            first: self.first,
            w: self.w.map(|v| v.scale(k)),
        }
    }
}

/// Where the forcing is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ForcingSampling {
    Nodes,
    FivePoint,
}

/// Assembled operators of one scheme on one grid.
#[derive(Debug, Clone)]
pub struct SchemeMatrices<S> {
    n_nodes: usize,
    /// Factor each stored row was divided by.
    row_scale: Vec<f64>,
    a_new: Vec<StencilRow<S>>,
    a_old: Vec<StencilRow<S>>,
    b_new: Vec<StencilRow<S>>,
    b_old: Vec<StencilRow<S>>,
    lhs: Tridiag<S>,
    dirichlet: bool,
    sampling: ForcingSampling,
    /// Boundary rows as derived (before elimination), for inspection.
    pub left_row: Option<BoundaryRow<S>>,
    pub right_row: Option<BoundaryRow<S>>,
}

/// Multiplications and divisions performed by one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepOps {
    pub sweep: usize,
    pub forcing: usize,
    /// `A_old u^n`; reported apart since both schemes pay it.
    pub explicit: usize,
}

impl StepOps {
    /// Sweep plus forcing application.
    pub fn counted(&self) -> usize {
        self.sweep + self.forcing
    }
}

#[derive(Debug, Clone)]
pub struct StepReport<S> {
    pub final_state: Vec<S>,
    pub muls_per_step: usize,
    pub explicit_muls_per_step: usize,
    pub steps: usize,
}

fn boundary_stencil<S: Scalar>(row: &BoundaryRow<S>, right: bool, n: usize) -> [StencilRow<S>; 4] {
    let mk = |w: [S; 3]| {
        if right {
            StencilRow {
                first: n - 2,
                w: [w[2], w[1], w[0]],
            }
        } else {
            StencilRow { first: 0, w }
        }
    };
    [mk(row.alpha_new), mk(row.alpha_old), mk(row.beta_new), mk(row.beta_old)]
}

impl<S: Scalar> SchemeMatrices<S> {
    pub fn assemble(problem: &ProblemSpec<S>, grid: &Grid1D, scheme: Scheme) -> Result<Self> {
        let n_int = grid.n_intervals();
        let n = grid.n_nodes();
        let h = grid.h();
        let tau = grid.tau();
        let unit = problem.unit();
        let scale = match scheme {
            Scheme::Compact { .. } => tau,
            Scheme::Classic { .. } => 0.5 * tau,
        };
        let inv = 1.0 / scale;
        let mut a_new = Vec::with_capacity(n);
        let mut a_old = Vec::with_capacity(n);
        let mut b_new = Vec::with_capacity(n);
        let mut b_old = Vec::with_capacity(n);

        for j in 0..n {
            if j == 0 || j == n_int {
                let first = if j == 0 { 0 } else { n_int - 2 };
                for v in [&mut a_new, &mut a_old, &mut b_new, &mut b_old] {
                    v.push(StencilRow::zero(first));
                }
                continue;
            }
            let x = grid.x(j);
            match scheme {
                Scheme::Compact { cut, .. } => {
                    let fit = fit_interior(&problem.theta, x, h).map_err(|e| at_row(e, j))?;
                    let nu = NuLocal::new(fit.theta_center, tau, h, unit);
                    let row = assemble_row(&fit, nu, h, cut);
                    let mk = |w: [S; 3]| StencilRow { first: j - 1, w };
                    a_new.push(mk(row.new_layer()).scaled(inv));
                    a_old.push(mk(row.old_layer()).scaled(inv));
                    b_new.push(mk(row.forcing_new()));
                    b_old.push(mk(row.forcing_old()));
                }
                Scheme::Classic { rhs, .. } => {
                    let th_m = problem.theta.sample(x - 0.5 * h).map_err(|e| at_row(e, j))?;
                    let th_p = problem.theta.sample(x + 0.5 * h).map_err(|e| at_row(e, j))?;
                    let c = tau / (h * h);
                    let mu_m = unit.scale(c * th_m);
                    let mu_p = unit.scale(c * th_p);
                    let half = S::from_re(0.5);
                    let off_m = -(mu_m * half);
                    let off_p = -(mu_p * half);
                    let mid = (mu_m + mu_p) * half;
                    let one = S::one();
                    a_new.push(StencilRow { first: j - 1, w: [off_m, one + mid, off_p] }.scaled(inv));
                    a_old.push(StencilRow { first: j - 1, w: [off_m, mid - one, off_p] }.scaled(inv));
                    let w = match rhs {
                        ClassicRhsVariant::ThreePoint => [0.25, 0.5, 0.25],
                        _ => [0.0, 1.0, 0.0],
                    }
                    .map(S::from_re);
                    b_new.push(StencilRow { first: j - 1, w });
                    b_old.push(StencilRow { first: j - 1, w });
                }
            }
        }

        let mut row_scale = vec![scale; n];
        let (mut left_row, mut right_row) = (None, None);
        match &problem.boundary {
            Boundary::Dirichlet { .. } => {
                row_scale[0] = 1.0;
                row_scale[n_int] = 1.0;
                a_new[0].w[0] = S::one();
                a_new[n_int].w[2] = S::one();
            }
            Boundary::Neumann => {
                let variant = match scheme {
                    Scheme::Compact { neumann, .. } | Scheme::Classic { neumann, .. } => neumann,
                };
                let fl = fit_boundary_left(&problem.theta, h).map_err(|e| at_row(e, 0))?;
                let fr = fit_boundary_right(&problem.theta, h).map_err(|e| at_row(e, n_int))?;
                let nl = NuLocal::new(fl.theta_center, tau, h, unit);
                let nr = NuLocal::new(fr.theta_center, tau, h, unit);
                let lr = build_left_row(&fl, nl, h, tau, variant).map_err(|e| at_row(e, 0))?;
                let rr = build_right_row(&fr, nr, h, tau, variant).map_err(|e| at_row(e, n_int))?;
                for (row, idx, nb, right) in [(&lr, 0, 1, false), (&rr, n_int, n_int - 1, true)] {
                    let [mut an, mut ao, mut bn, mut bo] = boundary_stencil(row, right, n_int).map(|r| r.scaled(inv));
                    // Clear the entry two nodes in using the neighbouring row.
                    let far = if right { 0 } else { 2 };
                    let pivot = a_new[nb].w[far];
                    if an.w[far] != S::zero() {
                        if pivot.modulus() == 0.0 {
                            return Err(Error::Singular { row: nb });
                        }
                        let k = an.w[far] / pivot;
                        an.sub_scaled(&a_new[nb], k);
                        an.w[far] = S::zero();
                        ao.sub_scaled(&a_old[nb], k);
                        bn.sub_scaled(&b_new[nb], k);
                        bo.sub_scaled(&b_old[nb], k);
                    }
                    a_new[idx] = an;
                    a_old[idx] = ao;
                    b_new[idx] = bn;
                    b_old[idx] = bo;
                }
                left_row = Some(lr);
                right_row = Some(rr);
            }
        }

        let lhs = tridiag_of(&a_new)?;
        let sampling = match scheme {
            Scheme::Classic {
                rhs: ClassicRhsVariant::FivePoint,
                ..
            } => ForcingSampling::FivePoint,
            _ => ForcingSampling::Nodes,
        };
        Ok(Self {
            n_nodes: n,
            row_scale,
            a_new,
            a_old,
            b_new,
            b_old,
            lhs,
            dirichlet: !problem.boundary.is_neumann(),
            sampling,
            left_row,
            right_row,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn is_dirichlet(&self) -> bool {
        self.dirichlet
    }

    fn dense(&self, rows: &[StencilRow<S>]) -> DenseMatrix<S> {
        let n = self.n_nodes;
        let mut m = DenseMatrix::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            for (k, w) in r.w.iter().enumerate() {
                let c = r.first + k;
                if c < n {
                    m.set(i, c, m.get(i, c) + w.scale(self.row_scale[i]));
                }
            }
        }
        m
    }

    pub fn a_new(&self) -> DenseMatrix<S> {
        self.dense(&self.a_new)
    }

    pub fn a_old(&self) -> DenseMatrix<S> {
        self.dense(&self.a_old)
    }

    pub fn b_new(&self) -> DenseMatrix<S> {
        self.dense(&self.b_new)
    }

    pub fn b_old(&self) -> DenseMatrix<S> {
        self.dense(&self.b_old)
    }

    /// Forcing vector for this scheme at time `t`, with the multiplications
    /// spent forming it.
    pub fn forcing(&self, problem: &ProblemSpec<S>, grid: &Grid1D, t: f64) -> (Vec<S>, usize) {
        let f = &problem.forcing;
        let nodes: Vec<S> = (0..self.n_nodes).map(|j| f(t, grid.x(j))).collect();
        match self.sampling {
            ForcingSampling::Nodes => (nodes, 0),
            ForcingSampling::FivePoint => {
                let h = grid.h();
                let last = self.n_nodes - 1;
                let mut out = nodes.clone();
                for j in 1..last {
                    let x = grid.x(j);
                    let halves = f(t, x - 0.5 * h) + nodes[j] + f(t, x + 0.5 * h);
                    out[j] = (nodes[j - 1] + nodes[j + 1] + halves.scale(2.0)).scale(0.125);
                }
                (out, 2 * (last - 1))
            }
        }
    }

    /// One step. `boundary` gives the Dirichlet values at `t_{n+1}` and is
    /// ignored for Neumann problems.
    pub fn step(&self, u_n: &[S], f_n: &[S], f_np1: &[S], boundary: (S, S)) -> Result<(Vec<S>, StepOps)> {
        let n = self.n_nodes;
        for (name, v) in [("u_n", u_n), ("f_n", f_n), ("f_np1", f_np1)] {
            if v.len() != n {
                return Err(Error::Dimension(format!("{name} has length {}, expected {n}", v.len())));
            }
        }
        let mut ops = StepOps::default();
        let mut rhs = vec![S::zero(); n];
        for i in 0..n {
            if self.dirichlet && (i == 0 || i == n - 1) {
                rhs[i] = if i == 0 { boundary.0 } else { boundary.1 };
                continue;
            }
            let (bn, bo, ao) = (&self.b_new[i], &self.b_old[i], &self.a_old[i]);
            let mut acc = S::zero();
            if bn == bo {
                for k in 0..3 {
                    let c = bn.first + k;
                    acc += weighted(bn.w[k], f_n[c] + f_np1[c], &mut ops.forcing);
                }
            } else {
                for k in 0..3 {
                    acc += weighted(bo.w[k], f_n[bo.first + k], &mut ops.forcing);
                    acc += weighted(bn.w[k], f_np1[bn.first + k], &mut ops.forcing);
                }
            }
            for k in 0..3 {
                if ao.w[k] != S::zero() {
                    acc -= ao.w[k] * u_n[ao.first + k];
                    ops.explicit += 1;
                }
            }
            rhs[i] = acc;
        }
        let sol = solve_tridiag(&self.lhs, &rhs)?;
        ops.sweep = sol.ops;
        Ok((sol.x, ops))
    }
}

fn weighted<S: Scalar>(w: S, v: S, ops: &mut usize) -> S {
    if w == S::zero() {
        S::zero()
    } else if w == S::one() {
        v
    } else {
        *ops += 1;
        w * v
    }
}

fn at_row(e: Error, row: usize) -> Error {
    match e {
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("row {row}: {m}")),
        other => other,
    }
}

fn tridiag_of<S: Scalar>(rows: &[StencilRow<S>]) -> Result<Tridiag<S>> {
    let n = rows.len();
    let mut lower = vec![S::zero(); n - 1];
    let mut diag = vec![S::zero(); n];
    let mut upper = vec![S::zero(); n - 1];
    for (i, r) in rows.iter().enumerate() {
        for (k, w) in r.w.iter().enumerate() {
            let c = r.first + k;
            if *w == S::zero() {
                continue;
            }
            if c == i {
                diag[i] = *w;
            } else if c + 1 == i {
                lower[c] = *w;
            } else if c == i + 1 {
                upper[i] = *w;
            } else {
                return Err(Error::Dimension(format!("row {i} of A_new reaches column {c}")));
            }
        }
    }
    Tridiag::new(lower, diag, upper)
}

fn boundary_values<S: Scalar>(problem: &ProblemSpec<S>, t: f64) -> (S, S) {
    match &problem.boundary {
        Boundary::Dirichlet { left, right } => (left(t), right(t)),
        Boundary::Neumann => (S::zero(), S::zero()),
    }
}

/// Advance the initial state to `t_final`.
pub fn run<S: Scalar>(problem: &ProblemSpec<S>, grid: &Grid1D, scheme: Scheme) -> Result<StepReport<S>> {
    run_with_observer(problem, grid, scheme, |_, _, _| {})
}

/// Like [`run`], calling `observe(n, t_n, u^n)` for `n = 0..=n_steps`.
pub fn run_with_observer<S: Scalar>(
    problem: &ProblemSpec<S>,
    grid: &Grid1D,
    scheme: Scheme,
    mut observe: impl FnMut(usize, f64, &[S]),
) -> Result<StepReport<S>> {
    let mats = SchemeMatrices::assemble(problem, grid, scheme)?;
    let mut u: Vec<S> = grid.nodes().iter().map(|&x| (problem.initial)(x)).collect();
    observe(0, 0.0, &u);
    let (mut f_n, _) = mats.forcing(problem, grid, 0.0);
    let mut counted = None;
    let mut explicit = 0;
    for n in 0..grid.n_steps() {
        let t1 = grid.t(n + 1);
        let (f_np1, f_ops) = mats.forcing(problem, grid, t1);
        let (next, mut ops) = mats.step(&u, &f_n, &f_np1, boundary_values(problem, t1))?;
        ops.forcing += f_ops;
        match counted {
            None => counted = Some(ops.counted()),
            Some(c) => debug_assert_eq!(c, ops.counted()),
        }
        explicit = ops.explicit;
        u = next;
        f_n = f_np1;
        observe(n + 1, t1, &u);
    }
    Ok(StepReport {
        final_state: u,
        muls_per_step: counted.unwrap_or(0),
        explicit_muls_per_step: explicit,
        steps: grid.n_steps(),
    })
}

/// `max_j |u_j − v_j|`.
pub fn c_norm_error<S: Scalar>(state: &[S], exact: &[S]) -> f64 {
    assert_eq!(state.len(), exact.len(), "states must share the grid");
    state
        .iter()
        .zip(exact)
        .map(|(a, b)| (*a - *b).modulus())
        .fold(0.0, f64::max)
}
