//! Seeded experiments with CSV output.
//!
//! # Config format
//!
//! A config is a TOML file with top-level keys and one optional `[params]`
//! table:
//!
//! ```toml
//! experiment = "levy-up"   # levy-up | levy-down | levi-kernel | levi-hilbert |
//!                          # noncauchy-l1 | banach-counterexample |
//!                          # galois-audit | homeo-audit
//! seed = 1                 # u64, default 1
//! mode = "rational"        # rational | float, default rational
//! tolerance = 1e-9         # float comparisons, default 1e-9, must be > 0
//! horizon = 400            # homeo-audit sequence length, default 400
//! output = "levy-up.csv"   # default "<experiment>.csv"
//!
//! [params]
//! k = 10                   # dyadic levels (levy-up, noncauchy-l1)
//! n = 16                   # points or dimension
//! d = 3                    # vector dimension / codomain size
//! length = 8               # chain length
//! count = 20               # number of random instances
//! exponent = "2"           # 1 | 2 | 3 | inf
//! input_rv = "f.txt"       # levy-up: terminal variable in the rv text format
//! input_kernel = "k.txt"   # homeo-audit: kernel in the kernel text format
//! ```
//!
//! Unknown keys are rejected. When the `FINKRN_OUT_DIR` environment variable
//! is set, the CSV is written into that directory under the file name of
//! `output`.
//!
//! The experiments `levi-hilbert` and `banach-counterexample` compute in
//! double precision whatever the mode.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::DVector;
use rand::Rng;
use serde::Deserialize;

use crate::error::Error;
use crate::hilbert::{banach_counterexample, default_probes, levi_up_demo, Subspace, DEFAULT_RANDOM_PROBES};
use crate::idempotent::galois_roundtrips;
use crate::kernel::format::{read_kernel, read_rv};
use crate::martingale::{
    is_martingale, levi_property_check, levy_csv, levy_report, martingale_from_terminal,
    nonintegrable_example, Filtration,
};
use crate::prob::{Exponent, ProbSpace};
use crate::sample::{
    idempotent_chain, random_coarsening_chain, random_kernel, random_kernel_between,
    random_refining_chain, random_rv, random_space, rng,
};
use crate::scalar::{NumericMode, Rational, Scalar, DEFAULT_TOLERANCE};
use crate::topology::{homeomorphism_report, interpolating_sequence, independent_kernel, HOMEOMORPHISM_TOLERANCE};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "FINKRN_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    LevyUp,
    LevyDown,
    LeviKernel,
    LeviHilbert,
    NoncauchyL1,
    BanachCounterexample,
    GaloisAudit,
    HomeoAudit,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::LevyUp,
        ExperimentKind::LevyDown,
        ExperimentKind::LeviKernel,
        ExperimentKind::LeviHilbert,
        ExperimentKind::NoncauchyL1,
        ExperimentKind::BanachCounterexample,
        ExperimentKind::GaloisAudit,
        ExperimentKind::HomeoAudit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::LevyUp => "levy-up",
            ExperimentKind::LevyDown => "levy-down",
            ExperimentKind::LeviKernel => "levi-kernel",
            ExperimentKind::LeviHilbert => "levi-hilbert",
            ExperimentKind::NoncauchyL1 => "noncauchy-l1",
            ExperimentKind::BanachCounterexample => "banach-counterexample",
            ExperimentKind::GaloisAudit => "galois-audit",
            ExperimentKind::HomeoAudit => "homeo-audit",
        }
    }

    /// Closest known names, best first.
    pub fn suggestions(name: &str) -> Vec<&'static str> {
        let mut scored: Vec<(f64, &'static str)> = Self::ALL
            .iter()
            .map(|k| (strsim::jaro_winkler(name, k.name()), k.name()))
            .filter(|(s, _)| *s > 0.7)
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        scored.into_iter().map(|(_, n)| n).take(3).collect()
    }

    fn footer(self) -> &'static str {
        match self {
            ExperimentKind::LevyUp => {
                "Levy upward theorem: conditional expectations along an increasing filtration converge in L^n to the conditional expectation on the join"
            }
            ExperimentKind::LevyDown => {
                "backward martingale convergence: conditional expectations along a decreasing filtration converge in L^n to the conditional expectation on the meet of completions"
            }
            ExperimentKind::LeviKernel => {
                "idempotent Levi property of measure-preserving kernels: monotone chains of conditional-expectation kernels converge to their supremum or infimum"
            }
            ExperimentKind::LeviHilbert => {
                "Levi property of Hilbert spaces: projectors onto an increasing chain of subspaces converge pointwise to the projector onto the closed union"
            }
            ExperimentKind::NoncauchyL1 => {
                "a martingale bounded in L^1 that is not uniformly integrable: every norm and every increment norm equals one"
            }
            ExperimentKind::BanachCounterexample => {
                "normed spaces lack the Levi property: truncation projectors keep sup-norm one on the all-ones vector although their ranges intersect in zero"
            }
            ExperimentKind::GaloisAudit => {
                "order isomorphism between null-set-complete sub-sigma-algebras and idempotent kernels, checked over every partition"
            }
            ExperimentKind::HomeoAudit => {
                "convergence of kernels in the one-sided topology is equivalent to pointwise convergence of the pullback operators on L^n"
            }
        }
    }

    fn default_mode(self) -> NumericMode {
        match self {
            ExperimentKind::LeviHilbert | ExperimentKind::BanachCounterexample => NumericMode::float(),
            _ => NumericMode::Rational,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::UnknownExperiment {
                name: s.to_string(),
                line: 0,
                suggestions: Self::suggestions(s).into_iter().map(String::from).collect(),
            })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    #[error("{}unknown experiment `{name}`{}", line_prefix(*.line), suggestion_text(.suggestions))]
    UnknownExperiment {
        name: String,
        line: usize,
        suggestions: Vec<String>,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Run(#[from] Error),
}

fn line_prefix(line: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!("line {line}: ")
    }
}

fn suggestion_text(s: &[String]) -> String {
    if s.is_empty() {
        format!(
            " (expected one of: {})",
            ExperimentKind::ALL.map(|k| k.name()).join(", ")
        )
    } else {
        format!(" (did you mean {}?)", s.iter().map(|x| format!("`{x}`")).collect::<Vec<_>>().join(", "))
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    k: Option<i64>,
    n: Option<i64>,
    d: Option<i64>,
    length: Option<i64>,
    count: Option<i64>,
    exponent: Option<String>,
    input_rv: Option<String>,
    input_kernel: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    seed: Option<u64>,
    mode: Option<String>,
    tolerance: Option<f64>,
    horizon: Option<i64>,
    output: Option<String>,
    #[serde(default)]
    params: RawParams,
}

/// A validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub mode: NumericMode,
    pub horizon: usize,
    /// Dyadic levels.
    pub k: u32,
    /// Points or ambient dimension.
    pub n: usize,
    /// Vector dimension or codomain size.
    pub d: usize,
    pub length: usize,
    pub count: usize,
    pub exponent: Exponent,
    pub output: PathBuf,
    pub input_rv: Option<PathBuf>,
    pub input_kernel: Option<PathBuf>,
}

impl ExperimentConfig {
    /// The built-in canonical configuration of an experiment.
    pub fn demo(kind: ExperimentKind) -> Self {
        let (k, n, d, length, count) = match kind {
            ExperimentKind::LevyUp => (10, 0, 0, 0, 1),
            ExperimentKind::LevyDown => (0, 32, 0, 8, 1),
            ExperimentKind::LeviKernel => (0, 16, 0, 8, 1),
            ExperimentKind::LeviHilbert => (0, 8, 0, 6, 1),
            ExperimentKind::NoncauchyL1 => (8, 0, 0, 0, 1),
            ExperimentKind::BanachCounterexample => (0, 16, 0, 0, 1),
            ExperimentKind::GaloisAudit => (0, 5, 0, 0, 1),
            ExperimentKind::HomeoAudit => (0, 4, 3, 0, 20),
        };
        ExperimentConfig {
            experiment: kind,
            seed: 1,
            mode: kind.default_mode(),
            horizon: 400,
            k,
            n,
            d,
            length,
            count,
            exponent: Exponent::TWO,
            output: PathBuf::from(format!("{}.csv", kind.name())),
            input_rv: None,
            input_kernel: None,
        }
    }

    pub fn demo_by_name(name: &str) -> Result<Self, ConfigError> {
        Ok(Self::demo(name.parse()?))
    }

    /// Parses and validates config text. Relative input paths are resolved
    /// against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| line_at(text, s.start));
            ConfigError::Syntax {
                line,
                message: e.message().to_string(),
            }
        })?;
        let field_err = |field: &str, message: String| ConfigError::Field {
            line: line_of_key(text, field),
            field: field.to_string(),
            message,
        };
        let kind: ExperimentKind = raw.experiment.parse().map_err(|e| match e {
            ConfigError::UnknownExperiment { name, suggestions, .. } => ConfigError::UnknownExperiment {
                name,
                line: line_of_key(text, "experiment"),
                suggestions,
            },
            other => other,
        })?;
        let mut cfg = Self::demo(kind);
        if let Some(seed) = raw.seed {
            cfg.seed = seed;
        }
        let tol = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(field_err("tolerance", format!("must be a positive number, got {tol}")));
        }
        cfg.mode = match raw.mode.as_deref() {
            None => match kind.default_mode() {
                NumericMode::Float { .. } => NumericMode::Float { tolerance: tol },
                m => m,
            },
            Some("rational") => NumericMode::Rational,
            Some("float") => NumericMode::Float { tolerance: tol },
            Some(other) => {
                return Err(field_err("mode", format!("expected `rational` or `float`, got `{other}`")))
            }
        };
        let positive = |field: &str, v: Option<i64>, default: usize, max: usize| -> Result<usize, ConfigError> {
            match v {
                None => Ok(default),
                Some(x) if x >= 1 && (x as u64) <= max as u64 => Ok(x as usize),
                Some(x) => Err(field_err(field, format!("must be between 1 and {max}, got {x}"))),
            }
        };
        cfg.horizon = positive("horizon", raw.horizon, cfg.horizon, 100_000)?;
        let p = raw.params;
        let (k_min, k_max) = match kind {
            ExperimentKind::NoncauchyL1 => (2, 20),
            _ => (1, 14),
        };
        let k = positive("k", p.k, cfg.k as usize, k_max)?;
        if matches!(kind, ExperimentKind::LevyUp | ExperimentKind::NoncauchyL1) && k < k_min {
            return Err(field_err("k", format!("must be at least {k_min}, got {k}")));
        }
        cfg.k = k as u32;
        let n_max = match kind {
            ExperimentKind::GaloisAudit => 8,
            ExperimentKind::HomeoAudit => 64,
            ExperimentKind::LeviHilbert => 256,
            _ => 1 << 12,
        };
        cfg.n = positive("n", p.n, cfg.n, n_max)?;
        let n_min = match kind {
            ExperimentKind::BanachCounterexample | ExperimentKind::LeviHilbert => 2,
            _ => 1,
        };
        if matches!(
            kind,
            ExperimentKind::LevyDown
                | ExperimentKind::LeviKernel
                | ExperimentKind::LeviHilbert
                | ExperimentKind::BanachCounterexample
                | ExperimentKind::GaloisAudit
                | ExperimentKind::HomeoAudit
        ) && cfg.n < n_min
        {
            return Err(field_err("n", format!("must be at least {n_min}, got {}", cfg.n)));
        }
        cfg.d = positive("d", p.d, cfg.d, 12)?;
        cfg.length = positive("length", p.length, cfg.length, 64)?;
        cfg.count = positive("count", p.count, cfg.count, 10_000)?;
        if let Some(e) = p.exponent {
            cfg.exponent = e
                .parse()
                .map_err(|_| field_err("exponent", format!("expected 1, 2, 3, ... or inf, got `{e}`")))?;
        }
        if let Some(o) = raw.output {
            if o.trim().is_empty() {
                return Err(field_err("output", "must not be empty".into()));
            }
            cfg.output = PathBuf::from(o);
        }
        let resolve = |s: String| match base {
            Some(b) if Path::new(&s).is_relative() => b.join(s),
            _ => PathBuf::from(s),
        };
        if let Some(f) = p.input_rv {
            if kind != ExperimentKind::LevyUp {
                return Err(field_err("input_rv", "only levy-up reads an input random variable".into()));
            }
            cfg.input_rv = Some(resolve(f));
        }
        if let Some(f) = p.input_kernel {
            if kind != ExperimentKind::HomeoAudit {
                return Err(field_err("input_kernel", "only homeo-audit reads an input kernel".into()));
            }
            cfg.input_kernel = Some(resolve(f));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::parse(&text, path.parent())
    }

    /// Where [`run`] writes the CSV.
    pub fn output_path(&self) -> PathBuf {
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) => {
                let name = self
                    .output
                    .file_name()
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.experiment)));
                PathBuf::from(dir).join(name)
            }
            None => self.output.clone(),
        }
    }

    fn tolerance(&self) -> f64 {
        match self.mode {
            NumericMode::Float { tolerance } => tolerance,
            NumericMode::Rational => DEFAULT_TOLERANCE,
        }
    }

    /// One-line summary used by `validate`.
    pub fn summary(&self) -> String {
        format!(
            "{} seed={} mode={} k={} n={} d={} length={} count={} exponent={} horizon={} output={}",
            self.experiment,
            self.seed,
            self.mode,
            self.k,
            self.n,
            self.d,
            self.length,
            self.count,
            self.exponent,
            self.horizon,
            self.output.display()
        )
    }
}

fn io_err(path: &Path, e: std::io::Error) -> ConfigError {
    ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn line_of_key(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim_start();
            t.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(0, |i| i + 1)
}

/// One-line outcome of an experiment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    Stabilized,
    StabilizedNonCauchy,
    Pass,
    Violation { step: usize },
}

impl Verdict {
    pub fn is_success(&self) -> bool {
        !matches!(self, Verdict::Violation { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converged => f.write_str("CONVERGED"),
            Verdict::Stabilized => f.write_str("STABILIZED"),
            Verdict::StabilizedNonCauchy => f.write_str("STABILIZED-NONCAUCHY"),
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Violation { step } => write!(f, "VIOLATION(step {step})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub csv: String,
}

fn num<S: Scalar>(v: &S) -> String {
    if S::EXACT {
        v.to_string()
    } else {
        format!("{:?}", v.to_f64())
    }
}

fn wrap(cfg: &ExperimentConfig, body: &str, verdict: &Verdict) -> String {
    let mut out = String::new();
    writeln!(out, "# experiment: {}", cfg.experiment).unwrap();
    writeln!(out, "# mode: {}", cfg.mode).unwrap();
    writeln!(out, "# seed: {}", cfg.seed).unwrap();
    out.push_str(body);
    writeln!(out, "# verdict: {verdict}").unwrap();
    writeln!(out, "# {}", cfg.experiment.footer()).unwrap();
    out
}

/// Runs an experiment without touching the output file.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, ConfigError> {
    let (verdict, body) = match cfg.experiment {
        ExperimentKind::LeviHilbert => levi_hilbert(cfg)?,
        ExperimentKind::BanachCounterexample => banach(cfg)?,
        _ => match cfg.mode {
            NumericMode::Rational => dispatch::<Rational>(cfg)?,
            NumericMode::Float { .. } => dispatch::<f64>(cfg)?,
        },
    };
    Ok(Outcome {
        csv: wrap(cfg, &body, &verdict),
        verdict,
    })
}

/// Runs an experiment and writes its CSV to [`ExperimentConfig::output_path`].
pub fn run(cfg: &ExperimentConfig) -> Result<(Outcome, PathBuf), ConfigError> {
    let outcome = execute(cfg)?;
    let path = cfg.output_path();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(&path, &outcome.csv).map_err(|e| io_err(&path, e))?;
    Ok((outcome, path))
}

/// Reads and validates a config file, returning its summary line.
pub fn validate(path: &Path) -> Result<String, ConfigError> {
    let cfg = ExperimentConfig::from_file(path)?;
    for f in cfg.input_rv.iter().chain(&cfg.input_kernel) {
        if !f.is_file() {
            return Err(ConfigError::Io {
                path: f.display().to_string(),
                message: "input file not found".into(),
            });
        }
    }
    Ok(cfg.summary())
}

type Body = (Verdict, String);

fn dispatch<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    match cfg.experiment {
        ExperimentKind::LevyUp => levy_up::<S>(cfg),
        ExperimentKind::LevyDown => levy_down::<S>(cfg),
        ExperimentKind::LeviKernel => levi_kernel::<S>(cfg),
        ExperimentKind::NoncauchyL1 => noncauchy::<S>(cfg),
        ExperimentKind::GaloisAudit => galois::<S>(cfg),
        ExperimentKind::HomeoAudit => homeo::<S>(cfg),
        ExperimentKind::LeviHilbert | ExperimentKind::BanachCounterexample => {
            unreachable!("float-only experiments are dispatched directly")
        }
    }
}

fn first_increase(d: &[f64]) -> Option<usize> {
    d.windows(2).position(|w| w[1] > w[0]).map(|i| i + 1)
}

fn convergence_verdict(rep: &crate::topology::ConvergenceReport) -> Verdict {
    if let Some(step) = first_increase(&rep.step_distances) {
        return Verdict::Violation { step };
    }
    if rep.converged {
        Verdict::Converged
    } else {
        Verdict::Violation {
            step: rep.horizon.saturating_sub(1),
        }
    }
}

fn levy_up<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let filt = Filtration::<S>::dyadic(cfg.k);
    let space = filt.space().retolerance(cfg.tolerance());
    let filt = Filtration::increasing(&space, filt.partitions().to_vec())?;
    let f = match &cfg.input_rv {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let f = read_rv::<S>(&text, cfg.tolerance())?;
            if !f.space().same_as(&space) {
                return Err(ConfigError::Run(Error::SpaceMismatch));
            }
            crate::prob::RandomVar::new(&space, f.into_values())?
        }
        None => random_rv(&mut rng(cfg.seed, 0), &space),
    };
    let m = martingale_from_terminal(&f, &filt)?;
    let rep = levy_report(&m, cfg.exponent)?;
    Ok((convergence_verdict(&rep), levy_csv(&rep, cfg.exponent)))
}

fn levy_down<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let mut r = rng(cfg.seed, 0);
    let space: ProbSpace<S> = random_space::<S, _>(&mut r, cfg.n, 0.1).retolerance(cfg.tolerance());
    let chain = random_coarsening_chain(&mut r, cfg.n, cfg.length);
    let filt = Filtration::decreasing(&space, chain)?;
    let f = random_rv(&mut r, &space);
    let m = martingale_from_terminal(&f, &filt)?;
    let rep = levy_report(&m, cfg.exponent)?;
    Ok((convergence_verdict(&rep), levy_csv(&rep, cfg.exponent)))
}

fn levi_kernel<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let mut r = rng(cfg.seed, 0);
    let space: ProbSpace<S> = random_space::<S, _>(&mut r, cfg.n, 0.1).retolerance(cfg.tolerance());
    let parts = if r.random_bool(0.5) {
        random_refining_chain(&mut r, cfg.n, cfg.length)
    } else {
        random_coarsening_chain(&mut r, cfg.n, cfg.length)
    };
    let chain = idempotent_chain(&space, &parts)?;
    let rep = levi_property_check(&chain)?;
    Ok((convergence_verdict(&rep), rep.to_csv()))
}

fn levi_hilbert(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let d = cfg.n;
    let mut r = rng(cfg.seed, 0);
    let vectors: Vec<DVector<f64>> = (0..d)
        .map(|_| DVector::from_fn(d, |_, _| r.random_range(-1.0..1.0)))
        .collect();
    let len = cfg.length.min(d).max(1);
    let chain = (1..=len)
        .map(|j| Subspace::span(d, &vectors[..j * d / len]))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let probes = default_probes(d, DEFAULT_RANDOM_PROBES, cfg.seed);
    let rep = levi_up_demo(&chain, &probes)?;
    let verdict = if rep.converged() && rep.worst.is_nonincreasing(1e-12) {
        Verdict::Converged
    } else {
        Verdict::Violation {
            step: first_increase(&rep.worst.step_distances).unwrap_or(len - 1),
        }
    };
    Ok((verdict, rep.to_csv()))
}

fn noncauchy<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let ex = nonintegrable_example::<S>(cfg.k)?;
    let mut body = String::from("step,l1_norm,increment_l1_norm\n");
    for (i, inc) in ex.increment_norms.iter().enumerate() {
        writeln!(body, "{i},{:?},{:?}", ex.l1_norms[i].to_f64(), inc.to_f64()).unwrap();
    }
    let tol = cfg.tolerance();
    let bad = ex
        .l1_norms
        .iter()
        .zip(ex.increment_norms.iter().map(Some).chain([None]))
        .position(|(a, b)| !a.near(&S::one(), tol) || b.is_some_and(|b| !b.near(&S::one(), tol)));
    let verdict = match (bad, is_martingale(&ex.martingale)) {
        (None, true) => Verdict::StabilizedNonCauchy,
        (Some(step), _) => Verdict::Violation { step },
        (None, false) => Verdict::Violation {
            step: ex.martingale.first_violation().unwrap_or(0),
        },
    };
    Ok((verdict, body))
}

fn banach(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let rep = banach_counterexample(cfg.n)?;
    let mut body = rep.to_csv();
    writeln!(body, "# colimit seminorm of the all-ones vector: {:?}", rep.colimit_value).unwrap();
    let verdict = if rep.sup_plateau() && rep.euclidean_decreasing() && rep.colimit_value == 1.0 {
        Verdict::Pass
    } else {
        Verdict::Violation { step: cfg.n }
    };
    Ok((verdict, body))
}

fn galois<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let mut body = String::from(
        "space,weights,partitions,idempotents,pairs_checked,adjunction_failures,fixpoint_failures,completion_failures,monotonicity_failures\n",
    );
    let mut verdict = Verdict::Pass;
    for i in 0..cfg.count {
        let space: ProbSpace<S> =
            random_space::<S, _>(&mut rng(cfg.seed, i as u64), cfg.n, 0.25).retolerance(cfg.tolerance());
        let rep = galois_roundtrips(&space)?;
        let w: Vec<String> = space.weights().iter().map(num).collect();
        writeln!(
            body,
            "{i},{},{},{},{},{},{},{},{}",
            w.join(" "),
            rep.partitions,
            rep.idempotents,
            rep.pairs_checked,
            rep.adjunction_failures,
            rep.fixpoint_failures,
            rep.completion_failures,
            rep.monotonicity_failures
        )
        .unwrap();
        if !rep.passed() && verdict == Verdict::Pass {
            verdict = Verdict::Violation { step: i };
        }
    }
    Ok((verdict, body))
}

fn homeo<S: Scalar>(cfg: &ExperimentConfig) -> Result<Body, ConfigError> {
    let given = match &cfg.input_kernel {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            Some(read_kernel::<S>(&text, cfg.tolerance())?)
        }
        None => None,
    };
    let mut body = String::from("sequence,exponent,kernel_converged,operator_converged,agree\n");
    let mut verdict = Verdict::Pass;
    for i in 0..cfg.count {
        let mut r = rng(cfg.seed, i as u64);
        let (k, h) = match &given {
            Some(k) => (k.clone(), independent_kernel(k)),
            None => {
                let space: ProbSpace<S> =
                    random_space::<S, _>(&mut r, cfg.n, 0.1).retolerance(cfg.tolerance());
                let k = random_kernel(&mut r, &space, cfg.d);
                let h = random_kernel_between(&mut r, &space, k.codomain());
                (k, h)
            }
        };
        let seq = interpolating_sequence(&k, &h, cfg.horizon)?;
        for n in Exponent::STANDARD {
            let rep = homeomorphism_report(&seq, &k, n, HOMEOMORPHISM_TOLERANCE)?;
            writeln!(
                body,
                "{i},{n},{},{},{}",
                rep.kernel.converged,
                rep.operator.converged,
                rep.agree()
            )
            .unwrap();
            if !rep.agree() && verdict == Verdict::Pass {
                verdict = Verdict::Violation { step: i };
            }
        }
    }
    Ok((verdict, body))
}
