//! Browser bindings: convergence curves, transition-matrix spectra and the
//! first-integral trace. The `*_impl` functions hold the logic and are
//! usable (and tested) natively; the exported wrappers only convert errors.

use cpde_core::analysis::{
    convergence_study, first_integral_trace, operator_problem, spectrum, transition_for, SpectrumReport,
};
use cpde_core::problem::{CoefficientField, ScalarKind};
use cpde_core::samples::SampleSolution;
use cpde_core::stepper::Scheme;
use cpde_core::Complex64;
use wasm_bindgen::prelude::*;

/// `"5"` or `"100i"`: modulus and whether the equation is Schrödinger-type.
fn parse_courant(s: &str) -> Result<(f64, bool), String> {
    let t = s.trim();
    let (num, imaginary) = match t.strip_suffix('i') {
        Some("") => ("1", true),
        Some(n) => (n, true),
        None => (t, false),
    };
    match num.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok((v, imaginary)),
        _ => Err(format!("bad Courant parameter `{s}`")),
    }
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: cpde_core::Error| e.to_string())
}

#[wasm_bindgen]
pub struct Curve {
    ns: Vec<f64>,
    errors: Vec<f64>,
    muls: Vec<f64>,
    order: f64,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn ns(&self) -> Vec<f64> {
        self.ns.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn errors(&self) -> Vec<f64> {
        self.errors.clone()
    }

    /// Multiplications per step.
    #[wasm_bindgen(getter)]
    pub fn muls(&self) -> Vec<f64> {
        self.muls.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn order(&self) -> f64 {
        self.order
    }
}

pub fn convergence_impl(solution: &str, scheme: &str, courant: &str, ns: &[u32]) -> Result<Curve, String> {
    let id = solution.parse().map_err(|e: cpde_core::Error| e.to_string())?;
    let (c, imaginary) = parse_courant(courant)?;
    let mut s = SampleSolution::new(id).map_err(|e| e.to_string())?;
    if imaginary {
        s = s.with_kind(ScalarKind::Complex);
    }
    let ns: Vec<usize> = ns.iter().map(|&n| n as usize).collect();
    if ns.len() < 2 || ns.iter().any(|&n| n > 400) {
        return Err("need at least two grid sizes, each at most 400".into());
    }
    let r = convergence_study(&s, parse_scheme(scheme)?, &ns, c, 1.0).map_err(|e| e.to_string())?;
    Ok(Curve {
        ns: r.entries.iter().map(|e| e.n as f64).collect(),
        errors: r.errors(),
        muls: r.entries.iter().map(|e| e.muls_per_step as f64).collect(),
        order: r.estimated_order,
    })
}

/// C-norm errors at `t = 1` for a sample solution over the grids `ns`.
#[wasm_bindgen]
pub fn convergence(solution: &str, scheme: &str, courant: &str, ns: &[u32]) -> Result<Curve, JsError> {
    convergence_impl(solution, scheme, courant, ns).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Spectrum {
    re: Vec<f64>,
    im: Vec<f64>,
    max_modulus: f64,
}

#[wasm_bindgen]
impl Spectrum {
    #[wasm_bindgen(getter)]
    pub fn re(&self) -> Vec<f64> {
        self.re.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn im(&self) -> Vec<f64> {
        self.im.clone()
    }

    #[wasm_bindgen(getter, js_name = maxModulus)]
    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }
}

pub fn spectrum_impl(neumann: bool, scheme: &str, courant: &str, n: u32) -> Result<Spectrum, String> {
    let (c, imaginary) = parse_courant(courant)?;
    if !(4..=160).contains(&n) {
        return Err("N must be between 4 and 160".into());
    }
    let theta = CoefficientField::cos_squared_plus_one();
    let scheme = parse_scheme(scheme)?;
    let n = n as usize;
    let report: cpde_core::Result<SpectrumReport> = if imaginary {
        operator_problem::<Complex64>(&theta, ScalarKind::Complex, neumann)
            .and_then(|p| transition_for(&p, scheme, n, c))
            .and_then(|m| spectrum(&m))
    } else {
        operator_problem::<f64>(&theta, ScalarKind::Real, neumann)
            .and_then(|p| transition_for(&p, scheme, n, c))
            .and_then(|m| spectrum(&m))
    };
    let r = report.map_err(|e| e.to_string())?;
    Ok(Spectrum {
        re: r.eigenvalues.iter().map(|z| z.re).collect(),
        im: r.eigenvalues.iter().map(|z| z.im).collect(),
        max_modulus: r.max_modulus,
    })
}

/// Eigenvalues of the one-step operator for `θ = cos²x + 1`.
#[wasm_bindgen]
pub fn transition_spectrum(neumann: bool, scheme: &str, courant: &str, n: u32) -> Result<Spectrum, JsError> {
    spectrum_impl(neumann, scheme, courant, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Trace {
    times: Vec<f64>,
    trapezoid: Vec<f64>,
    simpson: Vec<f64>,
}

#[wasm_bindgen]
impl Trace {
    #[wasm_bindgen(getter)]
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn trapezoid(&self) -> Vec<f64> {
        self.trapezoid.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn simpson(&self) -> Vec<f64> {
        self.simpson.clone()
    }
}

pub fn first_integral_impl(scheme: &str, n: u32, courant: f64, t_final: f64) -> Result<Trace, String> {
    if !(4..=800).contains(&n) {
        return Err("N must be between 4 and 800".into());
    }
    if !(courant > 0.0 && t_final > 0.0 && t_final <= 20.0) {
        return Err("need ν* > 0 and 0 < t ≤ 20".into());
    }
    let theta = CoefficientField::cos_squared_plus_one();
    let tr = first_integral_trace(&theta, parse_scheme(scheme)?, n as usize, courant, t_final).map_err(|e| e.to_string())?;
    Ok(Trace {
        times: tr.times,
        trapezoid: tr.trapezoid,
        simpson: tr.simpson,
    })
}

/// `∫|Ψ|²` after every step of `Ψ_t = i(θΨ_x)_x`, `Ψ⁰ = sin x`.
#[wasm_bindgen]
pub fn first_integral(scheme: &str, n: u32, courant: f64, t_final: f64) -> Result<Trace, JsError> {
    first_integral_impl(scheme, n, courant, t_final).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn courant_literals() {
        assert_eq!(parse_courant("100i"), Ok((100.0, true)));
        assert_eq!(parse_courant("i"), Ok((1.0, true)));
        assert_eq!(parse_courant("0.5"), Ok((0.5, false)));
        assert!(parse_courant("-2").is_err());
    }

    #[test]
    fn compact_curve_is_fourth_order() {
        let c = convergence_impl("s1", "compact", "1", &[10, 20, 50, 100]).unwrap();
        assert_eq!(c.ns(), vec![10.0, 20.0, 50.0, 100.0]);
        assert!((c.order() - 3.9).abs() < 0.2);
        assert!(c.muls().windows(2).all(|w| w[0] < w[1]));
        assert!(convergence_impl("s9", "compact", "1", &[10, 20]).is_err());
        assert!(convergence_impl("s1", "compact", "1", &[10]).is_err());
    }

    #[test]
    fn spectra() {
        let d = spectrum_impl(false, "compact", "5", 12).unwrap();
        assert_eq!(d.re().len(), 11);
        assert!(d.im().iter().all(|v| v.abs() < 1e-8) && d.max_modulus() < 1.0);
        let ll = spectrum_impl(true, "compact", "5i", 12).unwrap();
        assert!(ll.re().iter().zip(ll.im()).all(|(a, b)| (a.hypot(b) - 1.0).abs() < 1e-8));
    }

    #[test]
    fn trace_starts_at_pi() {
        let t = first_integral_impl("compact", 40, 1.0, 0.5).unwrap();
        assert_eq!(t.times().len(), t.simpson().len());
        assert!((t.trapezoid()[0] - std::f64::consts::PI).abs() < 1e-12);
        assert!(first_integral_impl("compact", 2, 1.0, 1.0).is_err());
    }
}
