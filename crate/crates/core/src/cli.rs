//! Command-line front end: `state`, `fig1`, `fig2` and `verify`.
//!
//! Settings are layered: built-in defaults, then a JSON config file
//! (`--config`), then flags. Every command renders into a byte buffer first,
//! so output for a fixed spec is byte-identical across runs.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{mandel_sweep, variance_sweep, AlphaGrid, MandelRow, VarianceRow};
use crate::states::{FamilyKind, Route, StateFamily};
use crate::truncation::{tail_mass, TruncationPolicy};
use crate::verify::{self, VerifyGrid, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: FamilyKind,
    pub m_values: Vec<u32>,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_step: f64,
    /// Radians; `π/2` sweeps purely imaginary amplitudes.
    pub alpha_phase: f64,
    pub policy: TruncationPolicy,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepSpec {
    /// Real α in `[0, 4]`, step 0.05, negative family, m ∈ {1, 5, 10}.
    pub fn fig1_default() -> Self {
        Self {
            family: FamilyKind::NegativeM,
            m_values: vec![1, 5, 10],
            alpha_min: 0.0,
            alpha_max: 4.0,
            alpha_step: 0.05,
            alpha_phase: 0.0,
            policy: TruncationPolicy::default(),
            output_path: None,
            format: OutputFormat::Csv,
        }
    }

    /// As [`SweepSpec::fig1_default`] with `|α|` up to 5.
    pub fn fig2_default() -> Self {
        Self { alpha_max: 5.0, ..Self::fig1_default() }
    }

    pub fn grid(&self) -> Result<AlphaGrid> {
        AlphaGrid::new(self.alpha_min, self.alpha_max, self.alpha_step, self.alpha_phase)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.policy.validate()?;
        if self.m_values.is_empty() {
            return Err(Error::InvalidParameter("m_values must not be empty".into()));
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &SweepOverrides) {
        if let Some(v) = o.family {
            self.family = v;
        }
        if let Some(v) = &o.m_values {
            self.m_values = v.clone();
        }
        if let Some(v) = o.alpha_min {
            self.alpha_min = v;
        }
        if let Some(v) = o.alpha_max {
            self.alpha_max = v;
        }
        if let Some(v) = o.alpha_step {
            self.alpha_step = v;
        }
        if let Some(v) = o.alpha_phase {
            self.alpha_phase = v;
        }
        if let Some(p) = &o.policy {
            self.policy.tail_tol = p.tail_tol.unwrap_or(self.policy.tail_tol);
            self.policy.max_dim = p.max_dim.unwrap_or(self.policy.max_dim);
        }
        if let Some(v) = &o.output_path {
            self.output_path = Some(v.clone());
        }
        if let Some(v) = o.format {
            self.format = v;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyOverrides {
    pub tail_tol: Option<f64>,
    pub max_dim: Option<usize>,
}

/// A partial [`SweepSpec`]: the shape of the JSON config file and of the flag set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOverrides {
    pub family: Option<FamilyKind>,
    pub m_values: Option<Vec<u32>>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_step: Option<f64>,
    pub alpha_phase: Option<f64>,
    pub policy: Option<PolicyOverrides>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl SweepOverrides {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve_spec(defaults: SweepSpec, config: Option<&Path>, flags: &SweepOverrides) -> Result<SweepSpec> {
    let mut spec = defaults;
    if let Some(path) = config {
        spec.apply(&SweepOverrides::from_json_file(path)?);
    }
    spec.apply(flags);
    spec.validate()?;
    Ok(spec)
}

/// Fixed-precision scientific with 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn render_variance(rows: &[VarianceRow], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => json_bytes(rows),
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["m", "alpha", "var_x", "var_p", "dim_used"])?;
            for r in rows {
                w.write_record([r.m.to_string(), fmt_num(r.alpha), fmt_num(r.var_x), fmt_num(r.var_p), r.dim_used.to_string()])?;
            }
            finish_csv(w)
        }
    }
}

pub fn render_mandel(rows: &[MandelRow], format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => json_bytes(rows),
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["m", "abs_alpha", "mandel_q", "dim_used"])?;
            for r in rows {
                let q = r.mandel_q.map_or_else(|| "nan".to_string(), fmt_num);
                w.write_record([r.m.to_string(), fmt_num(r.abs_alpha), q, r.dim_used.to_string()])?;
            }
            finish_csv(w)
        }
    }
}

pub fn run_fig1(spec: &SweepSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    let rows = variance_sweep(spec.family, &spec.m_values, &spec.grid()?, &spec.policy)?;
    render_variance(&rows, spec.format)
}

pub fn run_fig2(spec: &SweepSpec) -> Result<Vec<u8>> {
    spec.validate()?;
    let rows = mandel_sweep(spec.family, &spec.m_values, &spec.grid()?, &spec.policy)?;
    render_mandel(&rows, spec.format)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRequest {
    pub family: FamilyKind,
    pub alpha: Complex64,
    pub m: u32,
    /// Overrides the dimension picked from the tail tolerance.
    pub dim: Option<usize>,
    pub policy: TruncationPolicy,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub n: usize,
    pub re: f64,
    pub im: f64,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub rows: Vec<StateRow>,
    pub norm: f64,
    pub dim: usize,
    /// Analytic probability mass above the last retained level.
    pub truncation_loss: f64,
}

pub fn state_dump(req: &StateRequest) -> Result<StateDump> {
    let family = StateFamily::new(req.family, req.alpha, req.m)?;
    let dim = match req.dim {
        Some(d) => d,
        None => family.choose_dim(&req.policy)?,
    };
    let state = family.build(Route::Series, dim, &req.policy)?;
    let rows = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| StateRow { n, re: c.re, im: c.im, prob: c.norm_sqr() })
        .collect();
    Ok(StateDump { rows, norm: state.norm(), dim, truncation_loss: tail_mass(req.alpha, family.signed_order(), dim) })
}

pub fn run_state(req: &StateRequest) -> Result<Vec<u8>> {
    let dump = state_dump(req)?;
    match req.format {
        OutputFormat::Json => json_bytes(&dump),
        OutputFormat::Csv => {
            let mut w = csv_writer();
            w.write_record(["n", "re", "im", "prob"])?;
            for r in &dump.rows {
                w.write_record([r.n.to_string(), fmt_num(r.re), fmt_num(r.im), fmt_num(r.prob)])?;
            }
            let mut out = finish_csv(w)?;
            writeln!(out, "# norm={},dim={},truncation_loss={}", fmt_num(dump.norm), dump.dim, fmt_num(dump.truncation_loss))?;
            Ok(out)
        }
    }
}

pub fn render_verify(report: &VerifyReport, format: Option<OutputFormat>) -> Result<Vec<u8>> {
    match format {
        None => Ok(report.render().into_bytes()),
        Some(OutputFormat::Json) => json_bytes(report),
        Some(OutputFormat::Csv) => {
            let mut w = csv_writer();
            w.write_record(["name", "pass", "residual", "tolerance"])?;
            for c in &report.checks {
                w.write_record([c.name.clone(), c.pass.to_string(), fmt_num(c.residual), fmt_num(c.tolerance)])?;
            }
            finish_csv(w)
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nlcs", version, about = "Photon-added and negative-order nonlinear coherent states in a truncated Fock space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the number-state amplitudes of one state.
    State(StateArgs),
    /// Quadrature variances over an amplitude grid.
    Fig1(SharedArgs),
    /// Mandel q over an amplitude grid.
    Fig2(SharedArgs),
    /// Run the invariant suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
}

fn parse_family(s: &str) -> std::result::Result<FamilyKind, String> {
    s.parse::<FamilyKind>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    #[arg(long)]
    pub alpha_min: Option<f64>,
    #[arg(long)]
    pub alpha_max: Option<f64>,
    #[arg(long)]
    pub alpha_step: Option<f64>,
    /// Phase of α in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_phase: Option<f64>,
    /// Order m; repeat for several.
    #[arg(long = "m")]
    pub m: Vec<u32>,
    /// coherent, added or negative.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<FamilyKind>,
    #[arg(long)]
    pub tail_tol: Option<f64>,
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// JSON file with any subset of the spec fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl SharedArgs {
    pub fn overrides(&self) -> SweepOverrides {
        let policy = (self.tail_tol.is_some() || self.max_dim.is_some())
            .then_some(PolicyOverrides { tail_tol: self.tail_tol, max_dim: self.max_dim });
        SweepOverrides {
            family: self.family,
            m_values: (!self.m.is_empty()).then(|| self.m.clone()),
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            alpha_step: self.alpha_step,
            alpha_phase: self.alpha_phase,
            policy,
            output_path: self.out.clone(),
            format: self.format,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Modulus of α (the phase comes from --alpha-phase).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Fixed dimension instead of the one picked from --tail-tol.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Grid amplitude; repeat for several.
    #[arg(long = "alpha")]
    pub alphas: Vec<f64>,
    /// Added to every deformation weight; a nonzero value must make the eigenvalue checks fail.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub corrupt_weight: f64,
    #[command(flatten)]
    pub shared: SharedArgs,
}

/// Build the state request for `state`: defaults, config, then flags.
pub fn resolve_state(args: &StateArgs) -> Result<(StateRequest, Option<PathBuf>)> {
    let defaults = SweepSpec { family: FamilyKind::Coherent, m_values: vec![0], ..SweepSpec::fig1_default() };
    let mut spec = defaults;
    if let Some(path) = &args.shared.config {
        spec.apply(&SweepOverrides::from_json_file(path)?);
    }
    let flags = args.shared.overrides();
    if flags.alpha_min.is_some() || flags.alpha_max.is_some() || flags.alpha_step.is_some() {
        return Err(Error::InvalidParameter("state takes --alpha, not an alpha range".into()));
    }
    spec.apply(&flags);
    spec.policy.validate()?;
    let m = match spec.m_values.as_slice() {
        [m] => *m,
        [] if spec.family == FamilyKind::Coherent => 0,
        other => return Err(Error::InvalidParameter(format!("state takes a single m, got {other:?}"))),
    };
    let alpha = if spec.alpha_phase == 0.0 { Complex64::new(args.alpha, 0.0) } else { Complex64::from_polar(args.alpha, spec.alpha_phase) };
    let req = StateRequest { family: spec.family, alpha, m, dim: args.dim, policy: spec.policy, format: spec.format };
    Ok((req, spec.output_path))
}

/// Build the verify grid: defaults, config (a JSON `VerifyGrid`), then flags.
pub fn resolve_verify(args: &VerifyArgs) -> Result<VerifyGrid> {
    let mut grid = match &args.shared.config {
        Some(path) => serde_json::from_slice(&fs::read(path)?)?,
        None => VerifyGrid::default(),
    };
    let s = &args.shared;
    if !args.alphas.is_empty() {
        grid.alphas = args.alphas.clone();
    } else if s.alpha_min.is_some() || s.alpha_max.is_some() || s.alpha_step.is_some() {
        let range = AlphaGrid::new(s.alpha_min.unwrap_or(0.0), s.alpha_max.unwrap_or(4.0), s.alpha_step.unwrap_or(1.0), 0.0)?;
        grid.alphas = range.radii();
    }
    if !s.m.is_empty() {
        grid.m_values = s.m.clone();
    }
    if let Some(p) = s.alpha_phase {
        grid.phase = p;
    }
    grid.policy.tail_tol = s.tail_tol.unwrap_or(grid.policy.tail_tol);
    grid.policy.max_dim = s.max_dim.unwrap_or(grid.policy.max_dim);
    if args.corrupt_weight != 0.0 {
        grid.weight_perturbation = args.corrupt_weight;
    }
    grid.policy.validate()?;
    Ok(grid)
}

fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Exit status 0 on success, 1 when verification checks fail, 2 on errors.
pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::State(args) => {
            let (req, out) = resolve_state(&args)?;
            emit(&run_state(&req)?, out.as_deref())?;
        }
        Command::Fig1(args) => {
            let spec = resolve_spec(SweepSpec::fig1_default(), args.config.as_deref(), &args.overrides())?;
            emit(&run_fig1(&spec)?, spec.output_path.as_deref())?;
        }
        Command::Fig2(args) => {
            let spec = resolve_spec(SweepSpec::fig2_default(), args.config.as_deref(), &args.overrides())?;
            emit(&run_fig2(&spec)?, spec.output_path.as_deref())?;
        }
        Command::Verify(args) => {
            let report = verify::run(&resolve_verify(&args)?)?;
            emit(&render_verify(&report, args.shared.format)?, args.shared.out.as_deref())?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            ExitCode::from(2)
        }
    }
}
