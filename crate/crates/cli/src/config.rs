//! Experiment configuration: `key = value` files and their command-line overrides.

use crate::error::CliError;
use cpde_core::boundary::NeumannVariant;
use cpde_core::problem::ScalarKind;
use cpde_core::samples::SampleId;
use cpde_core::stepper::{ClassicRhsVariant, Scheme};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Convergence,
    Richardson,
    Cut,
    Asymmetry,
    Spectrum,
    FirstIntegral,
    Efficiency,
    DeriveRow,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Convergence,
        Experiment::Richardson,
        Experiment::Cut,
        Experiment::Asymmetry,
        Experiment::Spectrum,
        Experiment::FirstIntegral,
        Experiment::Efficiency,
        Experiment::DeriveRow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Convergence => "convergence",
            Experiment::Richardson => "richardson",
            Experiment::Cut => "cut",
            Experiment::Asymmetry => "asymmetry",
            Experiment::Spectrum => "spectrum",
            Experiment::FirstIntegral => "first-integral",
            Experiment::Efficiency => "efficiency",
            Experiment::DeriveRow => "derive-row",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| CliError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Courant parameter `ν*`; an `i` suffix selects the Schrödinger-type equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Courant {
    pub modulus: f64,
    pub imaginary: bool,
}

impl Courant {
    pub fn real(modulus: f64) -> Self {
        Self { modulus, imaginary: false }
    }

    pub fn imaginary(modulus: f64) -> Self {
        Self { modulus, imaginary: true }
    }
}

impl fmt::Display for Courant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.modulus, if self.imaginary { "i" } else { "" })
    }
}

impl FromStr for Courant {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let t = s.trim();
        let (num, imaginary) = match t.strip_suffix('i') {
            Some("") => ("1", true),
            Some(n) => (n, true),
            None => (t, false),
        };
        let modulus: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad Courant literal `{s}`")))?;
        if !(modulus > 0.0 && modulus.is_finite()) {
            return Err(CliError::Config(format!("Courant parameter must be positive, got `{s}`")));
        }
        Ok(Self { modulus, imaginary })
    }
}

/// What is being solved: a manufactured sample, or the homogeneous operator
/// with `θ = cos²x + 1` used for spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Solution {
    Sample(SampleId),
    Operator { neumann: bool },
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solution::Sample(id) => write!(f, "{id}"),
            Solution::Operator { neumann: false } => f.write_str("dirichlet-demo"),
            Solution::Operator { neumann: true } => f.write_str("neumann-demo"),
        }
    }
}

impl FromStr for Solution {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "dirichlet-demo" => Ok(Solution::Operator { neumann: false }),
            "neumann-demo" => Ok(Solution::Operator { neumann: true }),
            other => Ok(Solution::Sample(other.parse()?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub solution: Solution,
    pub scheme: Scheme,
    /// Overrides the scheme's default Neumann row.
    pub neumann: Option<NeumannVariant>,
    /// Second scheme for `efficiency`.
    pub baseline: Scheme,
    pub ns: Vec<usize>,
    pub courant: Courant,
    pub t_final: f64,
    /// Courant values scanned for the sign change of the spectrum.
    pub nu_grid: Vec<f64>,
    /// Node index for `derive-row`.
    pub node: usize,
    pub output: Option<PathBuf>,
}

const NS_TABLE: [usize; 4] = [10, 20, 50, 100];

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let mut c = Self {
            experiment,
            solution: Solution::Sample(SampleId::S1),
            scheme: Scheme::compact(),
            neumann: None,
            baseline: Scheme::classic(ClassicRhsVariant::Pointwise),
            ns: NS_TABLE.to_vec(),
            courant: Courant::real(1.0),
            t_final: 1.0,
            nu_grid: Vec::new(),
            node: 1,
            output: None,
        };
        match experiment {
            Experiment::Spectrum => {
                c.solution = Solution::Operator { neumann: false };
                c.ns = vec![12];
                c.courant = Courant::real(5.0);
            }
            Experiment::FirstIntegral => {
                c.ns = vec![25, 50, 100, 200];
                c.courant = Courant::imaginary(1.0);
            }
            Experiment::Efficiency => c.ns = vec![10, 20, 40, 80, 160],
            Experiment::DeriveRow => c.ns = vec![20],
            _ => {}
        }
        c
    }

    /// The equation type implied by the solution and the Courant literal.
    pub fn kind(&self) -> ScalarKind {
        let sample_complex = matches!(self.solution, Solution::Sample(id) if id.default_kind() == ScalarKind::Complex);
        if self.courant.imaginary || sample_complex {
            ScalarKind::Complex
        } else {
            ScalarKind::Real
        }
    }

    pub fn effective_scheme(&self) -> Scheme {
        match self.neumann {
            Some(v) => self.scheme.with_neumann(v),
            None => self.scheme,
        }
    }

    pub fn sample_id(&self) -> Result<SampleId, CliError> {
        match self.solution {
            Solution::Sample(id) => Ok(id),
            other => Err(CliError::Config(format!(
                "experiment `{}` needs a sample solution, got `{other}`",
                self.experiment
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.ns.is_empty() {
            return Err(CliError::Config("`ns` is empty".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 4) {
            return Err(CliError::Config(format!("grid sizes must be at least 4, got {n}")));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config("`ns` must be strictly increasing".into()));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(CliError::Config(format!("t_final must be positive, got {}", self.t_final)));
        }
        if self.nu_grid.windows(2).any(|w| w[0] >= w[1]) || self.nu_grid.iter().any(|&v| v <= 0.0) {
            return Err(CliError::Config("`nu_grid` must be positive and strictly increasing".into()));
        }
        let needs_two = matches!(
            self.experiment,
            Experiment::Convergence | Experiment::Richardson | Experiment::Cut | Experiment::Asymmetry | Experiment::FirstIntegral
        );
        if needs_two && self.ns.len() < 2 {
            return Err(CliError::Config(format!("`{}` needs at least two grid sizes", self.experiment)));
        }
        if self.experiment == Experiment::DeriveRow && (self.node == 0 || self.node >= self.ns[0]) {
            return Err(CliError::Config(format!("node must be an interior index in 1..{}", self.ns[0])));
        }
        match self.experiment {
            Experiment::Spectrum | Experiment::Asymmetry | Experiment::FirstIntegral | Experiment::DeriveRow => {}
            _ => {
                self.sample_id()?;
            }
        }
        if let Some(v) = self.neumann {
            v.validate()?;
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`, got `{line}`", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key.replace('-', "_").as_str() {
            "experiment" => self.experiment = value.parse()?,
            "solution" => self.solution = value.parse()?,
            "scheme" => self.scheme = value.parse()?,
            "neumann" => self.neumann = Some(value.parse()?),
            "baseline" => self.baseline = value.parse()?,
            "ns" => self.ns = parse_list(value)?,
            "courant" => self.courant = value.parse()?,
            "t_final" => self.t_final = parse_num(value)?,
            "nu_grid" => self.nu_grid = parse_list(value)?,
            "node" => self.node = parse_num(value)?,
            "output" => self.output = Some(PathBuf::from(value)),
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let experiment = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find_map(|l| l.split_once('=').filter(|(k, _)| k.trim() == "experiment"))
            .map(|(_, v)| v.parse())
            .transpose()?
            .ok_or_else(|| CliError::Config("missing `experiment`".into()))?;
        let mut c = Self::defaults(experiment);
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        kv("experiment", self.experiment.to_string());
        kv("solution", self.solution.to_string());
        kv("scheme", self.scheme.to_string());
        if let Some(v) = self.neumann {
            kv("neumann", v.to_string());
        }
        kv("baseline", self.baseline.to_string());
        kv("ns", join(&self.ns));
        kv("courant", self.courant.to_string());
        kv("t_final", self.t_final.to_string());
        if !self.nu_grid.is_empty() {
            kv("nu_grid", join(&self.nu_grid));
        }
        kv("node", self.node.to_string());
        if let Some(p) = &self.output {
            kv("output", p.display().to_string());
        }
        out
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_num<T: FromStr>(s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| CliError::Config(format!("bad number `{s}`")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn courant_literals() {
        assert_eq!("100i".parse::<Courant>().unwrap(), Courant::imaginary(100.0));
        assert_eq!("i".parse::<Courant>().unwrap(), Courant::imaginary(1.0));
        assert_eq!(" 0.5 ".parse::<Courant>().unwrap(), Courant::real(0.5));
        for bad in ["", "-1", "0", "1j", "abc", "inf"] {
            assert!(bad.parse::<Courant>().is_err(), "{bad}");
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = ExperimentConfig::parse(
            "# s3 sweep\nexperiment = convergence\n\nsolution = s3:a=1,b=2,omega=10  # last row\ncourant = 100\n",
        )
        .unwrap();
        assert_eq!(c.solution, Solution::Sample(SampleId::S3 { a: 1.0, b: 2.0, omega: 10.0 }));
        assert_eq!(c.courant, Courant::real(100.0));
        assert_eq!(c.ns, vec![10, 20, 50, 100]);
    }

    #[test]
    fn round_trip_for_every_experiment() {
        for e in Experiment::ALL {
            let mut c = ExperimentConfig::defaults(e);
            c.neumann = Some(NeumannVariant::Classic { epsilon: 0.25 });
            c.nu_grid = vec![0.2, 0.25, 0.3];
            c.output = Some("out/x.csv".into());
            c.t_final = 0.1 + 0.2;
            let back = ExperimentConfig::parse(&c.serialize()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn kind_follows_literal_and_sample() {
        let mut c = ExperimentConfig::defaults(Experiment::Convergence);
        assert_eq!(c.kind(), ScalarKind::Real);
        c.courant = "1i".parse().unwrap();
        assert_eq!(c.kind(), ScalarKind::Complex);
        c.courant = Courant::real(5.0);
        c.solution = "snll".parse().unwrap();
        assert_eq!(c.kind(), ScalarKind::Complex);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("solution = s1\n").is_err());
        assert!(ExperimentConfig::parse("experiment = convergence\nns 10\n").is_err());
        assert!(ExperimentConfig::parse("experiment = convergence\nbogus = 1\n").is_err());
        let mut c = ExperimentConfig::defaults(Experiment::Convergence);
        c.ns = vec![20, 10];
        assert!(c.validate().is_err());
        c.ns = vec![10, 20];
        c.solution = Solution::Operator { neumann: true };
        assert!(c.validate().is_err());
    }
}
