//! Flat key=value run configuration.
//!
//! The format is deliberately trivial: one `key=value` per line, `#` comments,
//! later keys win. Unknown keys are errors so typos fail loudly, with one
//! exception: keys under `meta.` are ignored, which lets a written manifest be
//! loaded back as a config file verbatim.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cosserat_core::{BoundaryMode, Branch, MaterialParams};

/// Which initial condition `simulate` builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    /// Closed-form traveling wave sampled onto the grid.
    Soliton,
    /// Small-amplitude eigenmode of the coupling matrix, traveling right.
    Plane,
}

/// Fully resolved run configuration: every field has a value once parsing
/// finishes, so a run is a pure function of this struct.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub grid_n: usize,
    pub grid_z_min: f64,
    pub grid_z_max: f64,
    /// `None` means "auto": the integrator picks the CFL-limited step.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub bc: BoundaryMode,
    pub initial: InitialKind,
    pub soliton_v: f64,
    pub soliton_delta: f64,
    pub soliton_branch: Branch,
    pub plane_mode: usize,
    pub plane_eigen: usize,
    pub plane_amplitude: f64,
    pub output_path: PathBuf,
    pub output_stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            material: MaterialParams::reference(),
            grid_n: 512,
            grid_z_min: -60.0,
            grid_z_max: 60.0,
            dt: None,
            t_end: 10.0,
            bc: BoundaryMode::DirichletAsymptotic,
            initial: InitialKind::Soliton,
            soliton_v: 0.3,
            soliton_delta: 0.0,
            soliton_branch: Branch::Kink,
            plane_mode: 1,
            plane_eigen: 1,
            plane_amplitude: 0.05,
            output_path: PathBuf::from("out"),
            output_stride: 10,
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .with_context(|| format!("key '{key}': '{value}' is not a number"))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .with_context(|| format!("key '{key}': '{value}' is not a non-negative integer"))
}

pub fn parse_branch(value: &str) -> Result<Branch> {
    match value {
        "kink" => Ok(Branch::Kink),
        "antikink" => Ok(Branch::Antikink),
        other => bail!("branch must be 'kink' or 'antikink', got '{other}'"),
    }
}

pub fn parse_bc(value: &str) -> Result<BoundaryMode> {
    match value {
        "dirichlet" => Ok(BoundaryMode::DirichletAsymptotic),
        "periodic" => Ok(BoundaryMode::Periodic),
        other => bail!("bc must be 'dirichlet' or 'periodic', got '{other}'"),
    }
}

pub fn parse_initial(value: &str) -> Result<InitialKind> {
    match value {
        "soliton" => Ok(InitialKind::Soliton),
        "plane" => Ok(InitialKind::Plane),
        other => bail!("initial must be 'soliton' or 'plane', got '{other}'"),
    }
}

fn branch_name(branch: Branch) -> &'static str {
    match branch {
        Branch::Kink => "kink",
        Branch::Antikink => "antikink",
    }
}

fn bc_name(bc: BoundaryMode) -> &'static str {
    match bc {
        BoundaryMode::DirichletAsymptotic => "dirichlet",
        BoundaryMode::Periodic => "periodic",
    }
}

fn initial_name(kind: InitialKind) -> &'static str {
    match kind {
        InitialKind::Soliton => "soliton",
        InitialKind::Plane => "plane",
    }
}

impl RunConfig {
    /// Applies one key=value pair. Unknown keys are errors unless they live
    /// under `meta.`.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "mu" => self.material.mu = parse_f64(key, value)?,
            "lambda" => self.material.lambda = parse_f64(key, value)?,
            "mu_c" => self.material.mu_c = parse_f64(key, value)?,
            "kappa1" => self.material.kappa1 = parse_f64(key, value)?,
            "kappa2" => self.material.kappa2 = parse_f64(key, value)?,
            "kappa3" => self.material.kappa3 = parse_f64(key, value)?,
            "chi1" => self.material.chi1 = parse_f64(key, value)?,
            "chi3" => self.material.chi3 = parse_f64(key, value)?,
            "rho" => self.material.rho = parse_f64(key, value)?,
            "rho_rot" => self.material.rho_rot = parse_f64(key, value)?,
            "grid.n" => self.grid_n = parse_usize(key, value)?,
            "grid.z_min" => self.grid_z_min = parse_f64(key, value)?,
            "grid.z_max" => self.grid_z_max = parse_f64(key, value)?,
            "dt" => {
                self.dt = if value == "auto" {
                    None
                } else {
                    Some(parse_f64(key, value)?)
                }
            }
            "t_end" => self.t_end = parse_f64(key, value)?,
            "bc" => self.bc = parse_bc(value)?,
            "initial" => self.initial = parse_initial(value)?,
            "soliton.v" => self.soliton_v = parse_f64(key, value)?,
            "soliton.delta" => self.soliton_delta = parse_f64(key, value)?,
            "soliton.branch" => self.soliton_branch = parse_branch(value)?,
            "plane.mode" => self.plane_mode = parse_usize(key, value)?,
            "plane.eigen" => self.plane_eigen = parse_usize(key, value)?,
            "plane.amplitude" => self.plane_amplitude = parse_f64(key, value)?,
            "output.path" => self.output_path = PathBuf::from(value),
            "output.stride" => self.output_stride = parse_usize(key, value)?,
            _ if key.starts_with("meta.") => {}
            other => bail!("unknown config key '{other}'"),
        }
        Ok(())
    }

    /// Parses config text on top of the defaults.
    pub fn from_str(text: &str) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value, got '{line}'", lineno + 1))?;
            config
                .apply(key.trim(), value.trim())
                .with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        RunConfig::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Serializes the fully resolved configuration back to the key=value
    /// format, at full round-trip precision. The output parses back to an
    /// identical `RunConfig`.
    pub fn to_key_values(&self) -> String {
        let m = &self.material;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("mu", m.mu.to_string());
        kv("lambda", m.lambda.to_string());
        kv("mu_c", m.mu_c.to_string());
        kv("kappa1", m.kappa1.to_string());
        kv("kappa2", m.kappa2.to_string());
        kv("kappa3", m.kappa3.to_string());
        kv("chi1", m.chi1.to_string());
        kv("chi3", m.chi3.to_string());
        kv("rho", m.rho.to_string());
        kv("rho_rot", m.rho_rot.to_string());
        kv("grid.n", self.grid_n.to_string());
        kv("grid.z_min", self.grid_z_min.to_string());
        kv("grid.z_max", self.grid_z_max.to_string());
        kv(
            "dt",
            match self.dt {
                None => "auto".to_string(),
                Some(v) => v.to_string(),
            },
        );
        kv("t_end", self.t_end.to_string());
        kv("bc", bc_name(self.bc).to_string());
        kv("initial", initial_name(self.initial).to_string());
        kv("soliton.v", self.soliton_v.to_string());
        kv("soliton.delta", self.soliton_delta.to_string());
        kv("soliton.branch", branch_name(self.soliton_branch).to_string());
        kv("plane.mode", self.plane_mode.to_string());
        kv("plane.eigen", self.plane_eigen.to_string());
        kv("plane.amplitude", self.plane_amplitude.to_string());
        kv("output.path", self.output_path.display().to_string());
        kv("output.stride", self.output_stride.to_string());
        out
    }
}
