//! Published reference values used by `--check`.

use cpde_core::boundary::NeumannVariant;
use cpde_core::interior::CutLevel;
use cpde_core::problem::ScalarKind;
use cpde_core::samples::SampleId;
use cpde_core::stepper::{ClassicRhsVariant, Scheme};

/// Grid sizes of the published tables.
pub const TABLE_NS: [usize; 4] = [10, 20, 50, 100];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Near(f64, f64),
    Range(f64, f64),
    AtLeast(f64),
}

impl Bound {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::Near(want, tol) => (v - want).abs() <= tol,
            Bound::Range(lo, hi) => (lo..=hi).contains(&v),
            Bound::AtLeast(lo) => v >= lo,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Bound::Near(want, tol) => format!("{want}±{tol}"),
            Bound::Range(lo, hi) => format!("in [{lo}, {hi}]"),
            Bound::AtLeast(lo) => format!("≥ {lo}"),
        }
    }
}

/// Expected errors on [`TABLE_NS`] and the allowed factor for each entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub values: [f64; 4],
    pub factor: [f64; 4],
}

impl ErrorRow {
    const fn uniform(values: [f64; 4], f: f64) -> Self {
        Self { values, factor: [f; 4] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub order: Bound,
    pub errors: Option<ErrorRow>,
    /// Documented reason why the order check is expected to miss.
    pub known: Option<&'static str>,
}

impl Target {
    const fn order(order: Bound) -> Self {
        Self {
            order,
            errors: None,
            known: None,
        }
    }
}

const S3_ROWS: [(f64, f64, f64, f64, [f64; 4]); 5] = [
    (1.0, 1.0, 1.0, 3.96, [6.59e-1, 4.60e-2, 1.20e-3, 7.55e-5]),
    (1.0, 2.0, 2.0, 3.98, [3.73e3, 2.47e2, 6.41e0, 4.02e-1]),
    (2.0, 1.0, 1.0, 3.99, [9.74e-1, 6.18e-2, 1.59e-3, 9.92e-5]),
    (1.0, 0.1, 1.0, 4.06, [7.47e-5, 3.99e-6, 9.90e-8, 6.17e-9]),
    (1.0, 2.0, 10.0, 4.09, [2.60e3, 1.10e2, 2.71e0, 1.78e-1]),
];

const S3_LL_ROWS: [(f64, f64, f64, f64); 4] = [
    (1.0, 1.0, 1.0, 3.94),
    (1.0, 2.0, 2.0, 3.93),
    (1.0, 0.1, 1.0, 3.96),
    (1.0, 2.0, 10.0, 3.96),
];

pub const KNOWN_CUT_H5: &str = "published h5 errors give 3.64 end to end; its printed 3.95 is the N=50→100 slope";
pub const KNOWN_LL_S1_CLASSIC: &str = "published S1 classic columns themselves give order 2.23";
pub const KNOWN_RICHARDSON_S2K4: &str = "the published columns of this row themselves give order 5.37";
pub const KNOWN_NEUMANN_SN_NU1: &str = "coarse grids super-converge; local slopes fall to 4.02 by N=640";
pub const KNOWN_DIRICHLET_THRESHOLD: &str = "the Dirichlet sign change sits at ν* ≈ 0.405 on this grid";
pub const KNOWN_FIRST_INTEGRAL: &str = "observed amplitude decays as h⁴ for every amplitude definition and run length tried";

fn is_exact_compact(s: Scheme) -> bool {
    matches!(s, Scheme::Compact { cut: CutLevel::Exact, .. })
}

/// Target for a plain convergence run, if the configuration matches a published one.
pub fn convergence(id: SampleId, scheme: Scheme, kind: ScalarKind, courant: f64) -> Option<Target> {
    if let Scheme::Compact { cut: CutLevel::DropFrom(p), .. } = scheme {
        return (id == SampleId::S1 && kind == ScalarKind::Real).then(|| cut(p));
    }
    let compact = is_exact_compact(scheme);
    if id.is_neumann() {
        if !compact {
            return None;
        }
        let (order, known) = match scheme.neumann() {
            NeumannVariant::CompactThreePoint => {
                let known = (id == SampleId::Sn && courant == 1.0).then_some(KNOWN_NEUMANN_SN_NU1);
                (Bound::Near(4.0, 0.3), known)
            }
            NeumannVariant::ReducedTwoPoint => (Bound::Near(3.0, 0.4), None),
            NeumannVariant::Classic { epsilon } if epsilon == 0.5 => (Bound::Near(1.0, 0.3), None),
            _ => return None,
        };
        return Some(Target {
            order,
            errors: None,
            known,
        });
    }
    match (kind, courant, id) {
        (ScalarKind::Real, c, SampleId::S1) if c == 1.0 => match scheme {
            _ if compact => Some(Target {
                order: Bound::Near(3.83, 0.15),
                errors: Some(ErrorRow::uniform([1.58e-2, 1.36e-3, 3.73e-5, 2.36e-6], 2.0)),
                known: None,
            }),
            Scheme::Classic { rhs: ClassicRhsVariant::Pointwise, .. } => Some(Target::order(Bound::Near(2.09, 0.2))),
            _ => None,
        },
        (ScalarKind::Real, c, SampleId::S2 { k }) if c == 1.0 => {
            if compact {
                let want = [3.93, 3.98, 3.83][k as usize - 2];
                Some(Target::order(Bound::Near(want, 0.2)))
            } else {
                Some(Target::order(Bound::Range(1.8, 2.2)))
            }
        }
        (ScalarKind::Real, c, SampleId::S3 { a, b, omega }) if c == 100.0 && compact => S3_ROWS
            .iter()
            .find(|r| (r.0, r.1, r.2) == (a, b, omega))
            .map(|r| Target {
                order: Bound::Near(r.3, 0.3),
                errors: Some(ErrorRow::uniform(r.4, 3.0)),
                known: None,
            }),
        (ScalarKind::Complex, c, SampleId::S1 | SampleId::S2 { .. }) if c == 1.0 => {
            if compact {
                let want = match id {
                    SampleId::S1 => 3.99,
                    SampleId::S2 { k: 2 } => 3.99,
                    _ => 4.00,
                };
                Some(Target::order(Bound::Near(want, 0.15)))
            } else {
                Some(Target {
                    order: Bound::Range(1.8, 2.2),
                    errors: None,
                    known: (id == SampleId::S1).then_some(KNOWN_LL_S1_CLASSIC),
                })
            }
        }
        (ScalarKind::Complex, c, SampleId::S3 { a, b, omega }) if c == 100.0 && compact => S3_LL_ROWS
            .iter()
            .find(|r| (r.0, r.1, r.2) == (a, b, omega))
            .map(|r| Target::order(Bound::Near(r.3, 0.3))),
        _ => None,
    }
}

/// Target for one truncation level on S1.
pub fn cut(p: u32) -> Target {
    Target {
        order: Bound::AtLeast(3.9),
        errors: None,
        known: (p == 5).then_some(KNOWN_CUT_H5),
    }
}

/// Band for the N = 100 error of any truncation level.
pub const CUT_N100_BAND: (f64, f64) = (2.36e-6 / 2.0, 3.59e-6 * 2.0);

pub fn richardson(id: SampleId, scheme: Scheme, kind: ScalarKind, courant: f64) -> Option<Target> {
    if kind != ScalarKind::Real || courant != 1.0 {
        return None;
    }
    let compact = is_exact_compact(scheme);
    let classic = matches!(scheme, Scheme::Classic { rhs: ClassicRhsVariant::Pointwise, .. });
    if !compact && !classic {
        return None;
    }
    let values = match (id, compact) {
        (SampleId::S1, false) => [5.76e-3, 3.13e-4, 8.60e-6, 5.36e-7],
        (SampleId::S1, true) => [1.31e-4, 2.35e-6, 9.30e-9, 1.44e-10],
        (SampleId::S2 { k: 2 }, false) => [4.77e-1, 3.72e-2, 9.91e-4, 6.29e-5],
        (SampleId::S2 { k: 2 }, true) => [8.10e-3, 2.26e-4, 9.27e-7, 1.46e-8],
        (SampleId::S2 { k: 3 }, false) => [2.10e0, 9.40e-2, 2.47e-3, 1.54e-4],
        (SampleId::S2 { k: 3 }, true) => [1.34e-1, 1.60e-3, 6.15e-6, 9.55e-8],
        (SampleId::S2 { k: 4 }, false) => [1.94e0, 1.52e-1, 3.80e-3, 2.37e-4],
        (SampleId::S2 { k: 4 }, true) => [3.74e-2, 2.68e-3, 1.02e-5, 1.59e-7],
        _ => return None,
    };
    let (order, factor) = if compact {
        (Bound::Near(6.0, 0.3), [5.0, 5.0, 5.0, 10.0])
    } else {
        (Bound::Near(4.0, 0.2), [5.0; 4])
    };
    Some(Target {
        order,
        errors: Some(ErrorRow { values, factor }),
        known: (compact && id == SampleId::S2 { k: 4 }).then_some(KNOWN_RICHARDSON_S2K4),
    })
}

pub const ASYMMETRY_OLD: (Bound, [f64; 4]) = (Bound::Near(3.62, 0.4), [3.32e-3, 2.44e-4, 9.05e-6, 7.93e-7]);
pub const ASYMMETRY_FORCING: Bound = Bound::Near(5.62, 0.5);
pub const FIRST_INTEGRAL_SLOPE: Bound = Bound::Near(3.0, 0.5);

/// Expected sign-change Courant value of the diffusion transition matrix.
pub fn negativity_target(neumann: bool) -> (f64, Option<&'static str>) {
    if neumann {
        (0.25, None)
    } else {
        (1.0 / 3.0, Some(KNOWN_DIRICHLET_THRESHOLD))
    }
}
