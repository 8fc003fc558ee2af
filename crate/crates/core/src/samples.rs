//! Manufactured solutions with analytic derivatives.
//!
//! Each sample pairs an exact solution `u*` with a coefficient `θ*`; the
//! forcing is `f* = u*_t − κ (θ* u*_x)_x` evaluated from closed-form
//! derivatives, so `u*` solves the problem exactly.

use crate::problem::{Boundary, CoefficientField, ProblemSpec, ScalarKind, DOMAIN_LENGTH};
use crate::{Error, Result, Scalar};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Registered sample families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleId {
    /// `sin³x sin t + sin 2x cos t`, `θ = cos²x + 1`.
    S1,
    /// `sin t sinᵏx eˣ`, `θ = cos²x + 1`, `k ≥ 2`.
    S2 { k: u32 },
    /// `sin(x/2)(e^{b(2π−x)} cos ωt + e^{bx} sin ωt)`, `θ = e^{ax}`.
    S3 { a: f64, b: f64, omega: f64 },
    /// `cos²x sin t`, `θ = cos²x + 1`, homogeneous Neumann.
    Sn,
    /// As [`SampleId::Sn`] for the complex equation.
    Snll,
}

impl SampleId {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SampleId::S2 { k } if k < 2 => Err(Error::InvalidArgument(format!(
                "S2 needs k >= 2, got {k}"
            ))),
            SampleId::S3 { a, b, omega } if !(a.is_finite() && b.is_finite() && omega.is_finite()) => {
                Err(Error::InvalidArgument("S3 parameters must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    /// Kind used when none is requested explicitly.
    pub fn default_kind(&self) -> ScalarKind {
        match self {
            SampleId::Snll => ScalarKind::Complex,
            _ => ScalarKind::Real,
        }
    }

    pub fn is_neumann(&self) -> bool {
        matches!(self, SampleId::Sn | SampleId::Snll)
    }
}

impl fmt::Display for SampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleId::S1 => write!(f, "s1"),
            SampleId::S2 { k } => write!(f, "s2:k={k}"),
            SampleId::S3 { a, b, omega } => write!(f, "s3:a={a},b={b},omega={omega}"),
            SampleId::Sn => write!(f, "sn"),
            SampleId::Snll => write!(f, "snll"),
        }
    }
}

impl FromStr for SampleId {
    type Err = Error;

    /// Accepts `s1`, `s2:k=3`, `s3:a=1,b=0.1,omega=1`, `sn`, `snll`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, params) = match s.split_once(':') {
            Some((n, p)) => (n.trim().to_string(), p.trim().to_string()),
            None => (s.clone(), String::new()),
        };
        let mut kv = Vec::new();
        for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{part}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad number `{}` for `{}`", v.trim(), k.trim())))?;
            kv.push((k.trim().to_string(), v));
        }
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            kv.iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .or(default)
                .ok_or_else(|| Error::InvalidArgument(format!("`{name}` needs parameter `{key}`")))
        };
        let id = match name.as_str() {
            "s1" => SampleId::S1,
            "s2" => {
                let k = get("k", None)?;
                if k.fract() != 0.0 || k < 0.0 {
                    return Err(Error::InvalidArgument(format!("k must be an integer, got {k}")));
                }
                SampleId::S2 { k: k as u32 }
            }
            "s3" => SampleId::S3 {
                a: get("a", None)?,
                b: get("b", None)?,
                omega: get("omega", None)?,
            },
            "sn" => SampleId::Sn,
            "snll" => SampleId::Snll,
            other => return Err(Error::InvalidArgument(format!("unknown sample solution `{other}`"))),
        };
        id.validate()?;
        Ok(id)
    }
}

/// A sample solution: real-valued `u*` and `θ*` with their derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSolution {
    pub id: SampleId,
    pub kind: ScalarKind,
}

/// Values of `u*` and its partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

impl SampleSolution {
    pub fn new(id: SampleId) -> Result<Self> {
        id.validate()?;
        Ok(Self {
            id,
            kind: id.default_kind(),
        })
    }

    /// Same solution for the given equation type.
    pub fn with_kind(mut self, kind: ScalarKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn theta_field(&self) -> CoefficientField {
        match self.id {
            SampleId::S3 { a, .. } => CoefficientField::exponential(a),
            _ => CoefficientField::cos_squared_plus_one(),
        }
    }

    /// `(θ, θ')` at `x`.
    pub fn theta(&self, x: f64) -> (f64, f64) {
        match self.id {
            SampleId::S3 { a, .. } => {
                let e = (a * x).exp();
                (e, a * e)
            }
            _ => {
                let c = x.cos();
                (c * c + 1.0, -(2.0 * x).sin())
            }
        }
    }

    pub fn jet(&self, t: f64, x: f64) -> Jet {
        let (s, c) = x.sin_cos();
        let (st, ct) = t.sin_cos();
        match self.id {
            SampleId::S1 => {
                let s2 = (2.0 * x).sin();
                let c2 = (2.0 * x).cos();
                Jet {
                    u: s.powi(3) * st + s2 * ct,
                    u_t: s.powi(3) * ct - s2 * st,
                    u_x: 3.0 * s * s * c * st + 2.0 * c2 * ct,
                    u_xx: (6.0 * s * c * c - 3.0 * s.powi(3)) * st - 4.0 * s2 * ct,
                }
            }
            SampleId::S2 { k } => {
                let k = k as i32;
                let kf = k as f64;
                let e = x.exp();
                let v = s.powi(k);
                let v1 = kf * s.powi(k - 1) * c;
                let v2 = kf * (kf - 1.0) * s.powi(k - 2) * c * c - kf * v;
                Jet {
                    u: st * v * e,
                    u_t: ct * v * e,
                    u_x: st * e * (v1 + v),
                    u_xx: st * e * (v2 + 2.0 * v1 + v),
                }
            }
            SampleId::S3 { b, omega, .. } => {
                let (sw, cw) = (omega * t).sin_cos();
                let left = (b * (DOMAIN_LENGTH - x)).exp();
                let right = (b * x).exp();
                let g = left * cw + right * sw;
                let g_x = -b * left * cw + b * right * sw;
                let g_xx = b * b * g;
                let g_t = omega * (-left * sw + right * cw);
                let (sh, ch) = (0.5 * x).sin_cos();
                Jet {
                    u: sh * g,
                    u_t: sh * g_t,
                    u_x: 0.5 * ch * g + sh * g_x,
                    u_xx: -0.25 * sh * g + ch * g_x + sh * g_xx,
                }
            }
            SampleId::Sn | SampleId::Snll => Jet {
                u: c * c * st,
                u_t: c * c * ct,
                u_x: -(2.0 * x).sin() * st,
                u_xx: -2.0 * (2.0 * x).cos() * st,
            },
        }
    }

    pub fn exact(&self, t: f64, x: f64) -> f64 {
        self.jet(t, x).u
    }

    /// `∂_x(θ u_x) = θ' u_x + θ u_xx`.
    pub fn flux_x(&self, t: f64, x: f64) -> f64 {
        let j = self.jet(t, x);
        let (th, dth) = self.theta(x);
        dth * j.u_x + th * j.u_xx
    }

    /// `f* = u_t − κ ∂_x(θ u_x)`.
    pub fn forcing<S: Scalar>(&self, t: f64, x: f64) -> Result<S> {
        let unit: S = self.kind.unit()?;
        Ok(S::from_re(self.jet(t, x).u_t) - unit.scale(self.flux_x(t, x)))
    }

    /// Problem description whose exact solution is this sample.
    pub fn problem<S: Scalar>(&self) -> Result<ProblemSpec<S>> {
        let unit: S = self.kind.unit()?;
        let me = *self;
        let forcing = Arc::new(move |t: f64, x: f64| S::from_re(me.jet(t, x).u_t) - unit.scale(me.flux_x(t, x)));
        let initial = Arc::new(move |x: f64| S::from_re(me.exact(0.0, x)));
        let boundary = if self.id.is_neumann() {
            Boundary::Neumann
        } else {
            Boundary::Dirichlet {
                left: Arc::new(move |t: f64| S::from_re(me.exact(t, 0.0))),
                right: Arc::new(move |t: f64| S::from_re(me.exact(t, DOMAIN_LENGTH))),
            }
        };
        ProblemSpec::new(self.theta_field(), self.kind, forcing, initial, boundary)
    }

    /// Exact nodal values at time `t`.
    pub fn exact_on<S: Scalar>(&self, t: f64, nodes: &[f64]) -> Vec<S> {
        nodes.iter().map(|&x| S::from_re(self.exact(t, x))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn all_samples() -> Vec<SampleSolution> {
        [
            SampleId::S1,
            SampleId::S2 { k: 2 },
            SampleId::S2 { k: 3 },
            SampleId::S2 { k: 4 },
            SampleId::S3 { a: 1.0, b: 1.0, omega: 1.0 },
            SampleId::S3 { a: 2.0, b: 0.1, omega: 10.0 },
            SampleId::Sn,
            SampleId::Snll,
        ]
        .into_iter()
        .map(|id| SampleSolution::new(id).unwrap())
        .collect()
    }

    #[test]
    fn direct_substitution() {
        let s1 = SampleSolution::new(SampleId::S1).unwrap();
        assert!(s1.exact(0.0, PI / 2.0).abs() < 1e-15);
        let s2 = SampleSolution::new(SampleId::S2 { k: 2 }).unwrap();
        assert!((s2.exact(PI / 2.0, PI / 2.0) - (PI / 2.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn s3_theta_is_exponential() {
        let s = SampleSolution::new(SampleId::S3 { a: 1.0, b: 0.1, omega: 1.0 }).unwrap();
        let fit = crate::fit::fit_interior(&s.theta_field(), 2.0, 0.1).unwrap();
        assert!((fit.c[0] - 1.0).abs() < 1e-12);
        assert!(fit.c[1..].iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SampleSolution::new(SampleId::S2 { k: 1 }).is_err());
        assert!("s2:k=1".parse::<SampleId>().is_err());
        assert!("s9".parse::<SampleId>().is_err());
        assert!("s3:a=1".parse::<SampleId>().is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in all_samples() {
            let text = s.id.to_string();
            assert_eq!(text.parse::<SampleId>().unwrap(), s.id);
        }
    }

    #[test]
    fn neumann_samples_have_flat_ends() {
        for id in [SampleId::Sn, SampleId::Snll] {
            let s = SampleSolution::new(id).unwrap();
            for t in [0.1, 0.7, 1.0] {
                assert!(s.jet(t, 0.0).u_x.abs() < 1e-15);
                assert!(s.jet(t, 2.0 * PI).u_x.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = 1e-4;
        for s in all_samples() {
            for _ in 0..20 {
                let t = rng.gen_range(0.0..1.0);
                let x = rng.gen_range(0.2..6.0);
                let j = s.jet(t, x);
                let ut = (s.exact(t + d, x) - s.exact(t - d, x)) / (2.0 * d);
                let ux = (s.exact(t, x + d) - s.exact(t, x - d)) / (2.0 * d);
                let uxx = (s.exact(t, x + d) - 2.0 * j.u + s.exact(t, x - d)) / (d * d);
                let scale = 1.0 + j.u.abs() + j.u_t.abs() + j.u_x.abs() + j.u_xx.abs();
                assert!((ut - j.u_t).abs() < 1e-5 * scale, "{} u_t", s.id);
                assert!((ux - j.u_x).abs() < 1e-5 * scale, "{} u_x", s.id);
                assert!((uxx - j.u_xx).abs() < 1e-4 * scale, "{} u_xx", s.id);
            }
        }
    }

    #[test]
    fn complex_forcing_rotates_flux() {
        let s = SampleSolution::new(SampleId::Snll).unwrap();
        let f: Complex64 = s.forcing(0.3, 1.1).unwrap();
        assert!((f.re - s.jet(0.3, 1.1).u_t).abs() < 1e-15);
        assert!((f.im + s.flux_x(0.3, 1.1)).abs() < 1e-15);
        assert!(s.forcing::<f64>(0.3, 1.1).is_err());
    }
}
