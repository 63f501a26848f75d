//! Run configuration, snapshot files and the batch driver behind the CLI.
//!
//! Config files are flat `key=value` lines; `#` starts a comment. Numeric
//! lists are comma separated. Recognised keys:
//!
//! ```text
//! scenario  dt  dx  dy  t_end  snapshots  beta  phi  out_dir  transform  diagnostics  overwrite
//! ```
//!
//! A snapshot file is a header line followed by `ny` rows of `nx` values:
//!
//! ```text
//! # t=<time> transform=<name> M=<nx> N=<ny> a=<a> b=<b> c=<c> d=<d>
//! u(x_0,y_0) u(x_1,y_0) ... u(x_{M-1},y_0)
//! ...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::diagnostics::{discrete_energy, error_norms, ring_radius, ErrorReport};
use crate::error::{Error, Result};
use crate::grid::{Field, UniformGrid};
use crate::scenarios::{builtin_scenario, ScenarioSpec, Transform};
use crate::ssprk::{integrate_with, SolverState, SSPRK54};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportTransform {
    /// Whatever the scenario displays by default.
    #[default]
    Scenario,
    Raw,
    HalfSine,
    Both,
}

impl ExportTransform {
    pub fn resolve(self, scenario: Transform) -> Vec<Transform> {
        match self {
            ExportTransform::Scenario => vec![scenario],
            ExportTransform::Raw => vec![Transform::Raw],
            ExportTransform::HalfSine => vec![Transform::HalfSine],
            ExportTransform::Both => vec![Transform::Raw, Transform::HalfSine],
        }
    }
}

impl FromStr for ExportTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Self::Raw),
            "half-sine" => Ok(Self::HalfSine),
            "both" => Ok(Self::Both),
            other => Err(Error::param(
                "transform",
                format!("expected raw, half-sine or both, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub dt: Option<f64>,
    pub dx: Option<f64>,
    pub dy: Option<f64>,
    pub t_end: Option<f64>,
    pub snapshots: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub phi: Option<f64>,
    pub out_dir: PathBuf,
    pub transform: ExportTransform,
    pub diagnostics: bool,
    pub overwrite: bool,
    /// Write the wall-clock line to `run_meta.txt`.
    pub timestamp: bool,
}

impl RunConfig {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            dt: None,
            dx: None,
            dy: None,
            t_end: None,
            snapshots: None,
            beta: None,
            phi: None,
            out_dir: PathBuf::from("out"),
            transform: ExportTransform::Scenario,
            diagnostics: false,
            overwrite: false,
            timestamp: true,
        }
    }

    /// The built-in scenario with every override applied and checked.
    pub fn resolve(&self) -> Result<ScenarioSpec> {
        let mut spec = builtin_scenario(&self.scenario)?;
        if let Some(v) = self.dt {
            spec.dt = v;
        }
        if let Some(v) = self.dx {
            spec.dx = v;
        }
        if let Some(v) = self.dy {
            spec.dy = v;
        }
        if let Some(v) = self.beta {
            spec.beta = v;
        }
        if let Some(v) = self.phi {
            spec.phi = v;
        }
        match (self.t_end, &self.snapshots) {
            (Some(t), Some(s)) => {
                spec.t_end = t;
                spec.snapshot_times = s.clone();
            }
            (Some(t), None) => {
                spec.t_end = t;
                spec.snapshot_times.retain(|&s| s <= t);
            }
            (None, Some(s)) => {
                spec.snapshot_times = s.clone();
                if let Some(&last) = s.last() {
                    spec.t_end = spec.t_end.max(last);
                }
            }
            (None, None) => {}
        }
        spec.validate()?;
        spec.grid()?;
        Ok(spec)
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::param(key, format!("`{value}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::param(key, "must be finite"));
    }
    Ok(v)
}

fn parse_positive(key: &str, value: &str) -> Result<f64> {
    let v = parse_f64(key, value)?;
    if v <= 0.0 {
        return Err(Error::param(key, format!("must be positive, got {v}")));
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::param(key, format!("`{other}` is not a boolean"))),
    }
}

/// Parses a comma-separated list of times.
pub fn parse_times(value: &str) -> Result<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|s| parse_f64("snapshots", s))
        .collect()
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::new("");
    let mut scenario = None;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigSyntax {
            line: line_no,
            msg: format!("expected key=value, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "scenario" => scenario = Some(value.to_string()),
            "dt" => cfg.dt = Some(parse_positive(key, value)?),
            "dx" => cfg.dx = Some(parse_positive(key, value)?),
            "dy" => cfg.dy = Some(parse_positive(key, value)?),
            "t_end" => {
                let v = parse_f64(key, value)?;
                if v < 0.0 {
                    return Err(Error::param(key, format!("must be >= 0, got {v}")));
                }
                cfg.t_end = Some(v);
            }
            "snapshots" => cfg.snapshots = Some(parse_times(value)?),
            "beta" => {
                let v = parse_f64(key, value)?;
                if v < 0.0 {
                    return Err(Error::param(key, format!("must be >= 0, got {v}")));
                }
                cfg.beta = Some(v);
            }
            "phi" => cfg.phi = Some(parse_f64(key, value)?),
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "transform" => cfg.transform = value.parse()?,
            "diagnostics" => cfg.diagnostics = parse_bool(key, value)?,
            "overwrite" => cfg.overwrite = parse_bool(key, value)?,
            other => {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    msg: format!("unknown key `{other}`"),
                })
            }
        }
    }
    cfg.scenario = scenario.ok_or_else(|| Error::param("scenario", "scenario required"))?;
    if cfg.scenario.is_empty() {
        return Err(Error::param("scenario", "scenario required"));
    }
    Ok(cfg)
}

/// A self-describing dump of one (possibly transformed) `u` field.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub transform: Transform,
    pub field: Field,
}

impl Snapshot {
    pub fn from_state(state: &SolverState, transform: Transform) -> Result<Self> {
        Ok(Self {
            time: state.t,
            transform,
            field: state.u.map(|u| transform.apply(u))?,
        })
    }
}

pub fn write_snapshot_to(snapshot: &Snapshot, out: &mut impl Write) -> std::io::Result<()> {
    let g = snapshot.field.grid();
    writeln!(
        out,
        "# t={} transform={} M={} N={} a={} b={} c={} d={}",
        snapshot.time, snapshot.transform, g.nx, g.ny, g.a, g.b, g.c, g.d
    )?;
    let mut line = String::new();
    for j in 0..g.ny {
        line.clear();
        for i in 0..g.nx {
            if i > 0 {
                line.push(' ');
            }
            // 17 significant digits round-trip any f64
            write!(line, "{:.16e}", snapshot.field.get(i, j)).expect("write to String");
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_snapshot(snapshot: &Snapshot, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    write_snapshot_to(snapshot, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let bad = |m: &str| Error::MalformedSnapshot(m.to_string());
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    let header = header
        .strip_prefix("# ")
        .ok_or_else(|| bad("missing header"))?;
    let mut fields = std::collections::HashMap::new();
    for item in header.split_whitespace() {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| bad("header item without `=`"))?;
        fields.insert(k, v);
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| bad(&format!("header lacks `{k}`")))
    };
    let num = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| bad(&format!("bad `{k}`"))) };
    let count =
        |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(&format!("bad `{k}`"))) };
    let transform = Transform::parse(get("transform")?).ok_or_else(|| bad("unknown transform"))?;
    let grid = UniformGrid::new(
        num("a")?,
        num("b")?,
        num("c")?,
        num("d")?,
        count("M")?,
        count("N")?,
    )?;
    let mut values = ndarray::Array2::zeros((grid.nx, grid.ny));
    let mut rows = 0;
    for (j, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        if j >= grid.ny {
            return Err(bad("too many rows"));
        }
        let mut cols = 0;
        for (i, tok) in line.split_whitespace().enumerate() {
            if i >= grid.nx {
                return Err(bad(&format!("row {j} has too many values")));
            }
            values[[i, j]] = tok
                .parse()
                .map_err(|_| bad(&format!("bad value `{tok}`")))?;
            cols += 1;
        }
        if cols != grid.nx {
            return Err(bad(&format!(
                "row {j} has {cols} values, expected {}",
                grid.nx
            )));
        }
        rows += 1;
    }
    if rows != grid.ny {
        return Err(bad(&format!("{rows} rows, expected {}", grid.ny)));
    }
    Ok(Snapshot {
        time: num("t")?,
        transform,
        field: Field::from_values(&grid, values)?,
    })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    parse_snapshot(&fs::read_to_string(path)?)
}

pub fn snapshot_file_name(time: f64, transform: Transform) -> String {
    format!("snapshot_{}_t{:09.4}.dat", transform.name(), time)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub energy: f64,
    pub ring_radius: f64,
}

/// Everything a run produced, also written to disk by [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshot_files: Vec<PathBuf>,
    pub errors: Vec<ErrorReport>,
    pub diagnostics: Vec<DiagnosticsRow>,
    pub final_state: SolverState,
}

/// Solves the configured scenario and writes snapshots, `errors.csv`,
/// `diagnostics.csv` and `run_meta.txt` into the output directory.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let spec = config.resolve()?;
    let grid = spec.grid()?;
    let transforms = config.transform.resolve(spec.display);

    // t = 0 is always captured
    let mut times = spec.snapshot_times.clone();
    if times.first() != Some(&0.0) {
        times.insert(0, 0.0);
    }

    let dir = &config.out_dir;
    let mut targets: Vec<PathBuf> = Vec::new();
    for &t in &times {
        for &tr in &transforms {
            targets.push(dir.join(snapshot_file_name(t, tr)));
        }
    }
    let errors_path = dir.join("errors.csv");
    let diag_path = dir.join("diagnostics.csv");
    let meta_path = dir.join("run_meta.txt");
    if spec.exact.is_some() {
        targets.push(errors_path.clone());
    }
    if config.diagnostics {
        targets.push(diag_path.clone());
    }
    targets.push(meta_path.clone());
    if !config.overwrite {
        if let Some(p) = targets.iter().find(|p| p.exists()) {
            return Err(Error::WouldOverwrite(p.clone()));
        }
    }
    fs::create_dir_all(dir)?;

    let sys = spec.system(&grid)?;
    let state0 = spec.initial_state(&sys)?;
    let phi = spec.phi;

    let mut files = Vec::new();
    let mut errors = Vec::new();
    let mut diags = Vec::new();
    let mut failure: Option<Error> = None;
    let observe = |s: &SolverState| {
        if failure.is_some() {
            return;
        }
        let res = (|| -> Result<()> {
            for &tr in &transforms {
                let path = dir.join(snapshot_file_name(s.t, tr));
                write_snapshot(&Snapshot::from_state(s, tr)?, &path)?;
                files.push(path);
            }
            if let Some(exact) = spec.exact_field(&grid, s.t) {
                errors.push(error_norms(&s.u, &exact?)?.at(s.t, spec.dt));
            }
            if config.diagnostics {
                let e = discrete_energy(s, sys.weights(), |_, _| phi)?;
                diags.push(DiagnosticsRow {
                    t: s.t,
                    energy: e.energy,
                    ring_radius: ring_radius(&s.u).radius,
                });
            }
            Ok(())
        })();
        if let Err(e) = res {
            failure = Some(e);
        }
    };
    let (final_state, _) = integrate_with(&sys, &state0, spec.dt, spec.t_end, &times, observe)?;
    if let Some(e) = failure {
        return Err(e);
    }

    if spec.exact.is_some() {
        let mut s = String::from("t,l_inf,rms\n");
        for r in &errors {
            writeln!(s, "{},{:.17e},{:.17e}", r.time, r.l_inf, r.rms).expect("write to String");
        }
        fs::write(&errors_path, s)?;
    }
    if config.diagnostics {
        let mut s = String::from("t,energy,ring_radius\n");
        for r in &diags {
            writeln!(s, "{},{:.17e},{:.17e}", r.t, r.energy, r.ring_radius)
                .expect("write to String");
        }
        fs::write(&diag_path, s)?;
    }
    fs::write(&meta_path, run_meta(config, &spec, &grid, &transforms))?;

    Ok(RunOutput {
        snapshot_files: files,
        errors,
        diagnostics: diags,
        final_state,
    })
}

fn run_meta(
    config: &RunConfig,
    spec: &ScenarioSpec,
    grid: &UniformGrid,
    transforms: &[Transform],
) -> String {
    let mut s = String::new();
    let times: Vec<String> = spec.snapshot_times.iter().map(|t| t.to_string()).collect();
    let names: Vec<&str> = transforms.iter().map(|t| t.name()).collect();
    let _ = writeln!(s, "scenario={}", spec.name);
    let _ = writeln!(s, "tableau={}", SSPRK54.name);
    let _ = writeln!(s, "beta={}", spec.beta);
    let _ = writeln!(s, "phi={}", spec.phi);
    let _ = writeln!(s, "phi_sign={}", if spec.phi < 0.0 { "-" } else { "+" });
    let _ = writeln!(s, "a={}\nb={}\nc={}\nd={}", grid.a, grid.b, grid.c, grid.d);
    let _ = writeln!(s, "M={}\nN={}", grid.nx, grid.ny);
    let _ = writeln!(s, "dx={}\ndy={}", grid.dx, grid.dy);
    let _ = writeln!(s, "dt={}", spec.dt);
    let _ = writeln!(s, "t_end={}", spec.t_end);
    let _ = writeln!(s, "snapshots={}", times.join(","));
    let _ = writeln!(s, "transform={}", names.join(","));
    let _ = writeln!(s, "diagnostics={}", config.diagnostics);
    if config.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let _ = writeln!(s, "unix_time={secs}");
    }
    s
}
