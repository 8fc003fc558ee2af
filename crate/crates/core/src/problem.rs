//! Grids, coefficient fields and problem descriptions.

use crate::{Error, Result, Scalar};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Length of the spatial domain `[0, 2π]`.
pub const DOMAIN_LENGTH: f64 = 2.0 * PI;

/// Equidistant grid on `[0, 2π]` with a uniform time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_intervals: usize,
    h: f64,
    tau: f64,
    n_steps: usize,
}

impl Grid1D {
    pub const MIN_INTERVALS: usize = 4;

    /// Grid with an explicit time step.
    pub fn new(n_intervals: usize, tau: f64, n_steps: usize) -> Result<Self> {
        if n_intervals < Self::MIN_INTERVALS {
            return Err(Error::InvalidArgument(format!(
                "need at least {} intervals, got {}",
                Self::MIN_INTERVALS,
                n_intervals
            )));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {tau}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidArgument("need at least one time step".into()));
        }
        Ok(Self {
            n_intervals,
            h: DOMAIN_LENGTH / n_intervals as f64,
            tau,
            n_steps,
        })
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    /// Number of nodes, `N + 1`.
    pub fn n_nodes(&self) -> usize {
        self.n_intervals + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn t_final(&self) -> f64 {
        self.tau * self.n_steps as f64
    }

    /// Node abscissa `x_j`; the last node is pinned to exactly `2π`.
    pub fn x(&self, j: usize) -> f64 {
        if j == self.n_intervals {
            DOMAIN_LENGTH
        } else {
            j as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_intervals).map(|j| self.x(j)).collect()
    }

    /// Time of layer `n`; the last layer is pinned to `t_final`.
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }
}

/// Step size for a fixed Courant parameter: `τ = h²|ν*| / max_j θ_j`.
pub fn courant_step(n_intervals: usize, courant_abs: f64, theta_max: f64) -> f64 {
    let h = DOMAIN_LENGTH / n_intervals as f64;
    h * h * courant_abs / theta_max
}

/// Builds a grid for a fixed Courant parameter, rounding the step count up so
/// that the last step lands exactly on `t_final`.
pub fn make_grid(n_intervals: usize, courant_abs: f64, t_final: f64, theta_max: f64) -> Result<Grid1D> {
    if n_intervals < Grid1D::MIN_INTERVALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {} intervals, got {}",
            Grid1D::MIN_INTERVALS,
            n_intervals
        )));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("final time must be positive, got {t_final}")));
    }
    if !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("θ_max must be positive, got {theta_max}")));
    }
    if !(courant_abs > 0.0 && courant_abs.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Courant parameter must be nonzero, got {courant_abs}"
        )));
    }
    let raw = courant_step(n_intervals, courant_abs, theta_max);
    let ratio = t_final / raw;
    // absorb rounding noise so an exact multiple does not gain a step
    let n_steps = ((ratio * (1.0 - 4.0 * f64::EPSILON)).ceil() as usize).max(1);
    Grid1D::new(n_intervals, t_final / n_steps as f64, n_steps)
}

/// Real (diffusion) or complex (Schrödinger-type) equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Real,
    Complex,
}

impl ScalarKind {
    /// Factor multiplying `θ` in the equation: `1` or `i`.
    pub fn unit<S: Scalar>(self) -> Result<S> {
        match self {
            ScalarKind::Real => Ok(S::one()),
            ScalarKind::Complex => S::imaginary_unit().ok_or_else(|| {
                Error::InvalidArgument("complex problems need a complex scalar type".into())
            }),
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Real => f.write_str("real"),
            ScalarKind::Complex => f.write_str("complex"),
        }
    }
}

/// Strictly positive diffusion coefficient `θ(x)`, evaluable anywhere on the
/// domain including half-grid points.
#[derive(Clone)]
pub struct CoefficientField {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientField").field("name", &self.name).finish()
    }
}

impl CoefficientField {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("{value}"), move |_| value)
    }

    /// `cos²x + 1`, the coefficient of most sample solutions.
    pub fn cos_squared_plus_one() -> Self {
        Self::new("cos^2(x)+1", |x: f64| x.cos().powi(2) + 1.0)
    }

    pub fn exponential(a: f64) -> Self {
        Self::new(format!("exp({a}x)"), move |x: f64| (a * x).exp())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `θ(x)`, rejecting nonpositive or non-finite values.
    pub fn sample(&self, x: f64) -> Result<f64> {
        let v = (self.f)(x);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonPositiveCoefficient { x, value: v })
        }
    }

    /// `max_j θ(x_j)` over the nodes of an `n`-interval grid.
    pub fn max_on_nodes(&self, n_intervals: usize) -> Result<f64> {
        let h = DOMAIN_LENGTH / n_intervals as f64;
        (0..=n_intervals).try_fold(0.0f64, |m, j| {
            let x = if j == n_intervals { DOMAIN_LENGTH } else { j as f64 * h };
            Ok(m.max(self.sample(x)?))
        })
    }
}

pub type ForcingFn<S> = Arc<dyn Fn(f64, f64) -> S + Send + Sync>;
pub type InitialFn<S> = Arc<dyn Fn(f64) -> S + Send + Sync>;
pub type BoundaryFn<S> = Arc<dyn Fn(f64) -> S + Send + Sync>;

/// Boundary conditions at `x = 0` and `x = 2π`.
#[derive(Clone)]
pub enum Boundary<S> {
    /// `u(t, 0) = left(t)`, `u(t, 2π) = right(t)`.
    Dirichlet { left: BoundaryFn<S>, right: BoundaryFn<S> },
    /// Homogeneous Neumann: `u_x = 0` at both ends.
    Neumann,
}

impl<S: Scalar> Boundary<S> {
    pub fn homogeneous_dirichlet() -> Self {
        Boundary::Dirichlet {
            left: Arc::new(|_| S::zero()),
            right: Arc::new(|_| S::zero()),
        }
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, Boundary::Neumann)
    }
}

/// `u_t = (κθ u_x)_x + f` with `κ = 1` (real) or `κ = i` (complex).
#[derive(Clone)]
pub struct ProblemSpec<S> {
    pub theta: CoefficientField,
    pub kind: ScalarKind,
    pub forcing: ForcingFn<S>,
    pub initial: InitialFn<S>,
    pub boundary: Boundary<S>,
}

impl<S: Scalar> ProblemSpec<S> {
    pub fn new(
        theta: CoefficientField,
        kind: ScalarKind,
        forcing: ForcingFn<S>,
        initial: InitialFn<S>,
        boundary: Boundary<S>,
    ) -> Result<Self> {
        kind.unit::<S>()?;
        Ok(Self {
            theta,
            kind,
            forcing,
            initial,
            boundary,
        })
    }

    /// Homogeneous problem (`f ≡ 0`).
    pub fn homogeneous(
        theta: CoefficientField,
        kind: ScalarKind,
        initial: impl Fn(f64) -> S + Send + Sync + 'static,
        boundary: Boundary<S>,
    ) -> Result<Self> {
        Self::new(theta, kind, Arc::new(|_, _| S::zero()), Arc::new(initial), boundary)
    }

    /// The factor `κ` multiplying `θ`.
    pub fn unit(&self) -> S {
        self.kind
            .unit()
            .expect("kind was validated against the scalar type at construction")
    }

    /// Local Courant number `κ θ(x) τ / h²`.
    pub fn nu_at(&self, x: f64, grid: &Grid1D) -> Result<S> {
        let theta = self.theta.sample(x)?;
        Ok(self.unit().scale(theta * grid.tau() / (grid.h() * grid.h())))
    }

    /// Grid for a Courant parameter of modulus `courant_abs`, with `θ_max`
    /// taken over the nodes.
    pub fn grid(&self, n_intervals: usize, courant_abs: f64, t_final: f64) -> Result<Grid1D> {
        let theta_max = self.theta.max_on_nodes(n_intervals.max(1))?;
        make_grid(n_intervals, courant_abs, t_final, theta_max)
    }
}
