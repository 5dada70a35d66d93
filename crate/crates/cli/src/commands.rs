//! The five subcommands: traveling-wave evaluation, reduced-system runs,
//! dispersion tables, self-verification, and snapshot re-export.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use cosserat_core::{
    admissible_windows, hyperbolicity_check, integrate, run_all, wave_number, BoundaryMode,
    Branch, InitialCondition, ReducedParams, ReducedState, SimConfig, SolitonSolution,
};

use crate::config::{parse_bc, parse_branch, parse_initial, InitialKind, RunConfig};
use crate::output;

#[derive(Args)]
pub struct CommonArgs {
    /// Flat key=value config file; command-line flags override its values
    #[arg(short, long)]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::from_file(path),
            None => Ok(RunConfig::default()),
        }
    }
}

#[derive(Args)]
pub struct SolitonArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Traveling speed
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Phase offset of the wave
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Wave-number branch: kink or antikink
    #[arg(long)]
    pub branch: Option<String>,
    /// Number of lattice points in z
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_max: Option<f64>,
    /// Comma-separated times at which to evaluate (one block each)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub times: String,
    /// Append analytic derivative columns phi_z, phi_t, psi_z, psi_t
    #[arg(long)]
    pub derivatives: bool,
}

/// Evaluates the closed-form traveling wave on a (z, t) lattice, prefixed by
/// the wave numbers of both branches, the admissible speed windows, and the
/// rotation-to-displacement amplitude ratio.
pub fn cmd_soliton(args: &SolitonArgs) -> Result<()> {
    let mut config = args.common.load()?;
    if let Some(v) = args.v {
        config.soliton_v = v;
    }
    if let Some(delta) = args.delta {
        config.soliton_delta = delta;
    }
    if let Some(branch) = &args.branch {
        config.soliton_branch = parse_branch(branch)?;
    }
    if let Some(n) = args.n {
        config.grid_n = n;
    }
    if let Some(z) = args.z_min {
        config.grid_z_min = z;
    }
    if let Some(z) = args.z_max {
        config.grid_z_max = z;
    }
    if config.grid_n < 2 {
        bail!("need at least 2 lattice points, got {}", config.grid_n);
    }
    if !(config.grid_z_max > config.grid_z_min) {
        bail!(
            "empty z range [{}, {}]",
            config.grid_z_min,
            config.grid_z_max
        );
    }
    let times: Vec<f64> = args
        .times
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad time '{t}'"))
        })
        .collect::<Result<_>>()?;

    let rp = ReducedParams::new(config.material)?;
    let v = config.soliton_v;
    let sol = SolitonSolution::new(&rp, v, config.soliton_delta, config.soliton_branch)?;
    let windows = admissible_windows(&rp);
    println!("# speed={v}");
    println!("# k_kink={}", wave_number(&rp, v, Branch::Kink)?);
    println!("# k_antikink={}", wave_number(&rp, v, Branch::Antikink)?);
    let window_list: Vec<String> = windows
        .iter()
        .map(|(lo, hi)| format!("[{lo},{hi})"))
        .collect();
    println!("# admissible_windows={}", window_list.join(" "));
    println!("# amplitude_ratio={}", sol.amplitude_psi / 4.0);
    if args.derivatives {
        println!("t,z,phi,psi,phi_z,phi_t,psi_z,psi_t");
    } else {
        println!("t,z,phi,psi");
    }
    let dz = (config.grid_z_max - config.grid_z_min) / (config.grid_n - 1) as f64;
    for (block, &t) in times.iter().enumerate() {
        if block > 0 {
            println!();
        }
        for i in 0..config.grid_n {
            let z = config.grid_z_min + i as f64 * dz;
            if args.derivatives {
                println!(
                    "{t},{z},{},{},{},{},{},{}",
                    sol.phi(z, t),
                    sol.psi(z, t),
                    sol.phi_z(z, t),
                    sol.phi_t(z, t),
                    sol.psi_z(z, t),
                    sol.psi_t(z, t)
                );
            } else {
                println!("{t},{z},{},{}", sol.phi(z, t), sol.psi(z, t));
            }
        }
    }
    Ok(())
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z_max: Option<f64>,
    /// Time step, or 'auto' for the CFL-limited step
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Boundary handling: dirichlet or periodic
    #[arg(long)]
    pub bc: Option<String>,
    /// Initial condition: soliton or plane
    #[arg(long)]
    pub initial: Option<String>,
    /// Traveling speed of the soliton initial condition
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub branch: Option<String>,
    /// Integer mode count across the domain for the plane-wave start
    #[arg(long)]
    pub mode: Option<usize>,
    /// Which characteristic branch the plane wave rides (1 = slow, 2 = fast)
    #[arg(long)]
    pub eigen: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub amplitude: Option<f64>,
    /// Record every this many steps
    #[arg(long)]
    pub stride: Option<usize>,
    /// Output directory (also overridable via COSSERAT_OUTPUT_DIR)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Small-amplitude eigenmode of the coupling matrix, moving right at its
/// characteristic speed. With the coupling modulus zeroed this propagates
/// dispersion-free, which is what the plane-wave speed test measures.
fn plane_state(config: &RunConfig) -> Result<ReducedState> {
    let rp = ReducedParams::new(config.material)?;
    let (lam_slow, lam_fast) = hyperbolicity_check(&rp.matrix)?;
    let lam = match config.plane_eigen {
        1 => lam_slow,
        2 => lam_fast,
        other => bail!("plane.eigen must be 1 or 2, got {other}"),
    };
    let n = config.grid_n;
    let length = config.grid_z_max - config.grid_z_min;
    if !(length > 0.0) {
        bail!(
            "empty z range [{}, {}]",
            config.grid_z_min,
            config.grid_z_max
        );
    }
    let dz = match config.bc {
        BoundaryMode::Periodic => length / n as f64,
        BoundaryMode::DirichletAsymptotic => length / (n - 1) as f64,
    };
    let q = 2.0 * PI * config.plane_mode as f64 / length;
    let c = lam.sqrt();
    let m = rp.matrix;
    let (mut w_phi, mut w_psi): (f64, f64) = if m.m12 != 0.0 {
        (1.0, (lam - m.m11) / m.m12)
    } else if (lam - m.m11).abs() <= (lam - m.m22).abs() {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let scale = config.plane_amplitude / w_phi.abs().max(w_psi.abs());
    w_phi *= scale;
    w_psi *= scale;
    let mut phi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    let mut phi_t = Vec::with_capacity(n);
    let mut psi_t = Vec::with_capacity(n);
    for i in 0..n {
        let z = config.grid_z_min + i as f64 * dz;
        let (s, co) = (q * z).sin_cos();
        phi.push(w_phi * co);
        psi.push(w_psi * co);
        phi_t.push(w_phi * q * c * s);
        psi_t.push(w_psi * q * c * s);
    }
    Ok(ReducedState::new(config.grid_z_min, dz, phi, psi, phi_t, psi_t)?)
}

fn build_sim_config(config: &RunConfig) -> Result<SimConfig> {
    let initial = match config.initial {
        InitialKind::Soliton => InitialCondition::Soliton {
            speed: config.soliton_v,
            delta: config.soliton_delta,
            branch: config.soliton_branch,
        },
        InitialKind::Plane => InitialCondition::State(plane_state(config)?),
    };
    Ok(SimConfig {
        material: config.material,
        n: config.grid_n,
        z_min: config.grid_z_min,
        z_max: config.grid_z_max,
        dt: config.dt,
        t_end: config.t_end,
        bc: config.bc,
        initial,
        output_stride: config.output_stride,
    })
}

/// Integrates the reduced system and writes the manifest, the snapshot blocks,
/// and the diagnostics series into the output directory.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let mut config = args.common.load()?;
    if let Some(n) = args.n {
        config.grid_n = n;
    }
    if let Some(z) = args.z_min {
        config.grid_z_min = z;
    }
    if let Some(z) = args.z_max {
        config.grid_z_max = z;
    }
    if let Some(dt) = &args.dt {
        config.apply("dt", dt)?;
    }
    if let Some(t_end) = args.t_end {
        config.t_end = t_end;
    }
    if let Some(bc) = &args.bc {
        config.bc = parse_bc(bc)?;
    }
    if let Some(kind) = &args.initial {
        config.initial = parse_initial(kind)?;
    }
    if let Some(v) = args.v {
        config.soliton_v = v;
    }
    if let Some(delta) = args.delta {
        config.soliton_delta = delta;
    }
    if let Some(branch) = &args.branch {
        config.soliton_branch = parse_branch(branch)?;
    }
    if let Some(mode) = args.mode {
        config.plane_mode = mode;
    }
    if let Some(eigen) = args.eigen {
        config.plane_eigen = eigen;
    }
    if let Some(amplitude) = args.amplitude {
        config.plane_amplitude = amplitude;
    }
    if let Some(stride) = args.stride {
        config.output_stride = stride;
    }
    if let Some(output) = &args.output {
        config.output_path = output.clone();
    }

    let out_dir = output::resolve_output_dir(&config);
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let digest = match &args.common.config {
        Some(path) => output::file_digest(path)?,
        None => "none".to_string(),
    };
    let manifest = output::write_manifest(&out_dir, &config, &digest)?;

    let sim_config = build_sim_config(&config)?;
    let run = integrate(&sim_config)?;
    let snapshots = output::write_snapshots(&out_dir, &run.snapshots)?;
    let diagnostics = output::write_diagnostics(&out_dir, &run.diagnostics)?;

    println!("wrote {}", manifest.display());
    println!(
        "wrote {} ({} snapshots)",
        snapshots.display(),
        run.snapshots.len()
    );
    println!(
        "wrote {} ({} rows)",
        diagnostics.display(),
        run.diagnostics.len()
    );
    let last = run
        .diagnostics
        .last()
        .ok_or_else(|| anyhow!("run recorded no diagnostics"))?;
    match (last.l2_phi, last.l2_psi) {
        (Some(l2_phi), Some(l2_psi)) => println!(
            "final t={} energy={} l2_phi={l2_phi} l2_psi={l2_psi}",
            last.t, last.energy
        ),
        _ => println!("final t={} energy={}", last.t, last.energy),
    }
    Ok(())
}

#[derive(Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lower end of the speed sweep
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v_min: f64,
    /// Upper end of the speed sweep (default: 5% past the fast speed)
    #[arg(long, allow_negative_numbers = true)]
    pub v_max: Option<f64>,
    /// Number of sweep points
    #[arg(long, default_value_t = 200)]
    pub count: usize,
}

/// Tabulates both wave-number branches over a speed sweep, with an
/// admissibility flag and the relative residual of the dispersion identity.
pub fn cmd_dispersion(args: &DispersionArgs) -> Result<()> {
    if args.count < 2 {
        bail!("need at least 2 sweep points, got {}", args.count);
    }
    let config = args.common.load()?;
    let rp = ReducedParams::new(config.material)?;
    let (_, lam_fast) = hyperbolicity_check(&rp.matrix)?;
    let windows = admissible_windows(&rp);
    let v_max = args.v_max.unwrap_or(1.05 * lam_fast.sqrt());
    if !(v_max > args.v_min) {
        bail!("empty sweep range [{}, {v_max}]", args.v_min);
    }
    let window_list: Vec<String> = windows
        .iter()
        .map(|(lo, hi)| format!("[{lo},{hi})"))
        .collect();
    println!("# admissible_windows={}", window_list.join(" "));
    println!("v,k_kink,k_antikink,admissible,residual");
    let m = rp.matrix;
    for i in 0..args.count {
        let v = args.v_min + (v_max - args.v_min) * i as f64 / (args.count - 1) as f64;
        let admissible = windows.iter().any(|&(lo, hi)| v >= lo && v < hi);
        match wave_number(&rp, v, Branch::Kink) {
            Ok(k) => {
                let anti = wave_number(&rp, v, Branch::Antikink)?;
                let v2 = v * v;
                let quartic = v2 * v2 - m.trace() * v2 + m.det();
                let scale = (k * k * quartic)
                    .abs()
                    .max((rp.m_sq * (m.m22 - v2)).abs())
                    .max(1e-300);
                let residual =
                    cosserat_core::dispersion_residual(k, v, &rp).abs() / scale;
                println!("{v},{k},{anti},{admissible},{residual}");
            }
            Err(_) => println!("{v},NaN,NaN,{admissible},NaN"),
        }
    }
    Ok(())
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Seed for the randomized checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs the verification suite, printing one JSON report per line to stdout
/// and a human summary to stderr. Exits nonzero if any check fails.
pub fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let reports = run_all(args.seed);
    let mut failures = 0usize;
    for report in &reports {
        println!("{}", report.to_json_line()?);
        eprintln!(
            "{:<28} {}",
            report.name,
            if report.pass { "pass" } else { "FAIL" }
        );
        if !report.pass {
            failures += 1;
        }
    }
    if failures > 0 {
        bail!("{failures} of {} checks failed", reports.len());
    }
    eprintln!("all {} checks passed", reports.len());
    Ok(())
}

#[derive(Args)]
pub struct ExportTorusArgs {
    /// Snapshot CSV written by `simulate`
    #[arg(long)]
    pub input: PathBuf,
    /// Zero-based snapshot block index (default: the last block)
    #[arg(long)]
    pub snapshot: Option<usize>,
    /// Emit every this many material points
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

/// Re-emits one snapshot as `(z, phi, psi)` rows: the material coordinate, the
/// ring's rotation angle about the axis, and its axial displacement — enough
/// to draw the rod as a stack of displaced, rotated rings.
pub fn cmd_export_torus(args: &ExportTorusArgs) -> Result<()> {
    if args.stride == 0 {
        bail!("stride must be at least 1");
    }
    let blocks = output::read_snapshot_blocks(&args.input)?;
    let index = args.snapshot.unwrap_or(blocks.len() - 1);
    let block = blocks.get(index).ok_or_else(|| {
        anyhow!(
            "snapshot index {index} out of range ({} blocks present)",
            blocks.len()
        )
    })?;
    println!("# t={}", block.t);
    println!("z,phi,psi");
    for i in (0..block.z.len()).step_by(args.stride) {
        println!("{},{},{}", block.z[i], block.phi[i], block.psi[i]);
    }
    Ok(())
}
