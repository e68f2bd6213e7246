//! Experiment configuration: a TOML file, overridden by command-line flags,
//! resolved into concrete parameters with every hypothesis checked up front.

use std::fmt;
use std::path::{Path, PathBuf};

use ffvar_core::algebra::{FieldParams, Poly};
use ffvar_core::apstats::MAX_RESIDUES;
use ffvar_core::curve::{CurveFamily, TraceMode};
use serde::{Deserialize, Serialize};

use crate::pattern::t_times_irreducible;
use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Euler,
    Lfun,
    Variance,
    Sweep,
    Rmt,
    Selftest,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Euler => "euler",
            Kind::Lfun => "lfun",
            Kind::Variance => "variance",
            Kind::Sweep => "sweep",
            Kind::Rmt => "rmt",
            Kind::Selftest => "selftest",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Legendre,
    Genus2,
    Custom,
    Classical,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub family: Option<Family>,
    /// Coefficients of `f`, constant term first; for `family = "custom"`.
    pub f: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSection {
    /// Coefficients of `Q`, constant term first.
    pub coeffs: Option<Vec<i64>>,
    /// Only `"t_times_irreducible"` is known.
    pub pattern: Option<String>,
    /// Degree of the irreducible factor in the pattern.
    pub degree: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RmtSection {
    pub dims: Option<Vec<usize>>,
    pub max_n: Option<usize>,
    pub samples: Option<usize>,
}

/// The file format. Every field is optional; see [`Resolved`] for defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Option<Kind>,
    /// Field order(s). A list is a q-ladder for `sweep`.
    pub q: Option<Vec<u64>>,
    pub curve: Option<CurveSection>,
    pub modulus: Option<ModulusSection>,
    /// Degrees `n` to evaluate.
    pub n: Option<Vec<usize>>,
    /// Require `gcd(Q, s) = t`.
    pub theorem_mode: Option<bool>,
    /// `"naive"`, `"dft"` or `"auto"`.
    pub trace_mode: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub rmt: Option<RmtSection>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        toml::from_str(text).map_err(|e| RunError::Config(format!("malformed config: {e}")))
    }
}

/// Command-line overrides, applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub kind: Option<Kind>,
    pub q: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn apply(mut self, o: &Overrides) -> Self {
        if o.kind.is_some() {
            self.kind = o.kind;
        }
        if o.q.is_some() {
            self.q = o.q.clone();
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.threads.is_some() {
            self.threads = o.threads;
        }
        self
    }
}

#[derive(Clone, Debug)]
pub enum Arithmetic {
    Curve(CurveFamily),
    Classical,
}

/// One field of a run with its arithmetic function and modulus.
#[derive(Clone, Debug)]
pub struct Setup {
    pub field: FieldParams,
    pub arithmetic: Arithmetic,
    pub modulus: Poly,
}

impl Setup {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn curve(&self) -> Option<&CurveFamily> {
        match &self.arithmetic {
            Arithmetic::Curve(c) => Some(c),
            Arithmetic::Classical => None,
        }
    }

    /// `s`, the conductor; `t` for the classical function so that the
    /// pattern keeps `Q` square-free with a single factor `t`.
    pub fn conductor(&self) -> Poly {
        match &self.arithmetic {
            Arithmetic::Curve(c) => c.conductor().clone(),
            Arithmetic::Classical => Poly::var(),
        }
    }

    /// Degree of every twisted partial L-function: `2g deg Q - deg gcd(Q, s)`
    /// for the curve family, `deg Q - 1` for the classical function.
    pub fn r_c(&self) -> Result<usize, RunError> {
        match &self.arithmetic {
            Arithmetic::Curve(c) => Ok(c.reduction_profile(&self.modulus)?.r_c),
            Arithmetic::Classical => Ok(self.modulus.degree().unwrap() - 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolved {
    pub kind: Kind,
    pub setups: Vec<Setup>,
    /// `None` means `1..=r_C` per setup.
    pub n: Option<Vec<usize>>,
    pub theorem_mode: bool,
    pub trace_mode: TraceMode,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub rmt_dims: Vec<usize>,
    pub rmt_max_n: usize,
    pub rmt_samples: usize,
    /// The effective configuration, echoed into reports.
    pub echo: ExperimentConfig,
}

pub const DEFAULT_LADDER: [u64; 6] = [3, 5, 7, 9, 11, 13];

impl Resolved {
    pub fn new(cfg: ExperimentConfig) -> Result<Self, RunError> {
        let kind = cfg.kind.ok_or_else(|| RunError::Config("no experiment kind given".into()))?;
        let seed = cfg.seed.unwrap_or(0);
        let qs = match &cfg.q {
            Some(v) if v.is_empty() => return Err(RunError::Config("q list is empty".into())),
            Some(v) => v.clone(),
            None if kind == Kind::Sweep => DEFAULT_LADDER.to_vec(),
            None => vec![3],
        };
        if kind != Kind::Sweep && qs.len() > 1 {
            return Err(RunError::Config(format!("a list of field orders is only meaningful for sweep, not {kind}")));
        }
        let curve = cfg.curve.clone().unwrap_or_default();
        let family = curve.family.unwrap_or(if curve.f.is_some() { Family::Custom } else { Family::Legendre });
        if curve.f.is_some() && family != Family::Custom {
            return Err(RunError::Config("curve.f is only used with family = \"custom\"".into()));
        }
        let theorem_mode = cfg.theorem_mode.unwrap_or(kind == Kind::Sweep && family != Family::Classical);
        if theorem_mode && family == Family::Classical {
            return Err(RunError::Config("theorem_mode needs a curve family, not the classical function".into()));
        }
        let trace_mode = match cfg.trace_mode.as_deref().unwrap_or("auto") {
            "naive" => TraceMode::Naive,
            "dft" => TraceMode::Dft,
            "auto" => TraceMode::Auto,
            other => return Err(RunError::Config(format!("unknown trace_mode {other:?} (naive, dft, auto)"))),
        };
        let modulus = cfg.modulus.clone().unwrap_or_default();
        let setups = qs
            .iter()
            .map(|&q| {
                let field = FieldParams::with_order(q).map_err(|e| RunError::Config(format!("field order {q}: {e}")))?;
                let arithmetic = match family {
                    Family::Legendre => Arithmetic::Curve(CurveFamily::legendre(&field)),
                    Family::Genus2 => Arithmetic::Curve(CurveFamily::genus_two_example(&field)),
                    Family::Classical => Arithmetic::Classical,
                    Family::Custom => {
                        let coeffs = curve.f.as_ref().ok_or_else(|| RunError::Config("family = \"custom\" needs curve.f".into()))?;
                        let c = CurveFamily::new(&field, Poly::from_ints(&field, coeffs))
                            .map_err(|e| RunError::Config(format!("curve over F_{q}: {e}")))?;
                        Arithmetic::Curve(c)
                    }
                };
                let mut setup = Setup { field, arithmetic, modulus: Poly::one() };
                setup.modulus = resolve_modulus(&modulus, &setup, seed)?;
                check_modulus(&setup, theorem_mode)?;
                Ok(setup)
            })
            .collect::<Result<Vec<_>, RunError>>()?;
        if let Some(ns) = &cfg.n {
            if ns.is_empty() || ns.contains(&0) {
                return Err(RunError::Config("n must be a nonempty list of positive degrees".into()));
            }
        }
        let rmt = cfg.rmt.clone().unwrap_or_default();
        let rmt_dims = rmt.dims.unwrap_or_else(|| (1..=8).collect());
        let rmt_max_n = rmt.max_n.unwrap_or(12);
        let rmt_samples = rmt.samples.unwrap_or(100_000);
        if rmt_dims.is_empty() || rmt_dims.contains(&0) || rmt_max_n == 0 || rmt_samples == 0 {
            return Err(RunError::Config("rmt dims, max_n and samples must be positive".into()));
        }
        let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(format!("{kind}.csv")));
        Ok(Resolved {
            kind,
            setups,
            n: cfg.n.clone(),
            theorem_mode,
            trace_mode,
            out,
            seed,
            threads: cfg.threads.unwrap_or(0),
            rmt_dims,
            rmt_max_n,
            rmt_samples,
            echo: cfg,
        })
    }

    /// Degrees to evaluate for a setup with the given `r_C`.
    pub fn degrees(&self, r_c: usize) -> Vec<usize> {
        self.n.clone().unwrap_or_else(|| (1..=r_c.max(1)).collect())
    }
}

fn resolve_modulus(section: &ModulusSection, setup: &Setup, seed: u64) -> Result<Poly, RunError> {
    let f = &setup.field;
    match (&section.coeffs, &section.pattern) {
        (Some(_), Some(_)) => Err(RunError::Config("give modulus.coeffs or modulus.pattern, not both".into())),
        (Some(c), None) => {
            if section.degree.is_some() || section.seed.is_some() {
                return Err(RunError::Config("modulus.degree and modulus.seed belong to a pattern".into()));
            }
            Ok(Poly::from_ints(f, c))
        }
        (None, pattern) => {
            let name = pattern.as_deref().unwrap_or("t_times_irreducible");
            if name != "t_times_irreducible" {
                return Err(RunError::Config(format!("unknown modulus pattern {name:?}")));
            }
            let degree = section.degree.unwrap_or(2);
            if degree == 0 {
                return Err(RunError::Config("pattern degree must be at least 1".into()));
            }
            let residues = (f.q() as u64).checked_pow(degree as u32 + 1).filter(|&r| r <= MAX_RESIDUES);
            if residues.is_none() {
                return Err(RunError::Resource(format!("Q = t * pi with deg pi = {degree} over F_{} has more than {MAX_RESIDUES} residues", f.q())));
            }
            t_times_irreducible(f, degree, section.seed.unwrap_or(seed), &setup.conductor())
                .ok_or_else(|| RunError::Config(format!("no irreducible of degree {degree} over F_{} is coprime to s", f.q())))
        }
    }
}

fn check_modulus(setup: &Setup, theorem_mode: bool) -> Result<(), RunError> {
    let f = &setup.field;
    let m = &setup.modulus;
    if m.degree().unwrap_or(0) == 0 || !m.is_monic() {
        return Err(RunError::Config(format!("Q = {m} must be monic of degree >= 1")));
    }
    if !m.is_square_free(f) {
        return Err(RunError::Config(format!("Q = {m} is not square-free")));
    }
    if theorem_mode {
        let g = m.gcd(&setup.conductor(), f);
        if g != Poly::var() {
            return Err(RunError::Config(format!(
                "theorem mode requires gcd(Q, s) = t, but gcd({m}, {}) = {g} over F_{}",
                setup.conductor(),
                f.q()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::from_toml("kind = \"variance\"\nq = [5]\n").unwrap();
        let r = Resolved::new(cfg.clone().apply(&Overrides { seed: Some(9), ..Default::default() })).unwrap();
        assert_eq!(r.kind, Kind::Variance);
        assert_eq!(r.seed, 9);
        assert_eq!(r.setups.len(), 1);
        assert_eq!(r.setups[0].modulus.degree(), Some(3));
        assert!(!r.theorem_mode);
        let r = Resolved::new(cfg.apply(&Overrides { kind: Some(Kind::Sweep), q: Some(vec![5, 7]), ..Default::default() })).unwrap();
        assert!(r.theorem_mode);
        assert_eq!(r.setups.len(), 2);
    }

    #[test]
    fn config_errors() {
        for bad in [
            "q = [3]\n",
            "kind = \"lfun\"\nq = [4]\n",
            "kind = \"lfun\"\nq = [3, 5]\n",
            "kind = \"lfun\"\nbogus = 1\n",
            "kind = \"lfun\"\n[modulus]\ncoeffs = [0, 0, 1]\n",
            "kind = \"lfun\"\n[curve]\nfamily = \"custom\"\nf = [1, 0, 1]\n",
            "kind = \"lfun\"\ntrace_mode = \"fast\"\n",
            "kind = \"sweep\"\nq = [3]\n[modulus]\ncoeffs = [0, -1, 1]\n",
        ] {
            let r = ExperimentConfig::from_toml(bad).and_then(Resolved::new);
            assert!(matches!(r, Err(RunError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn theorem_mode_names_the_hypothesis() {
        let cfg = ExperimentConfig::from_toml("kind = \"variance\"\ntheorem_mode = true\n[modulus]\ncoeffs = [0, 1, 0, 1]\n").unwrap();
        assert!(Resolved::new(cfg).is_ok());
        let cfg = ExperimentConfig::from_toml("kind = \"variance\"\ntheorem_mode = true\n[modulus]\ncoeffs = [1, 0, 1]\n").unwrap();
        match Resolved::new(cfg) {
            Err(RunError::Config(msg)) => assert!(msg.contains("gcd(Q, s) = t")),
            other => panic!("{other:?}"),
        }
    }
}
