//! The `vortexem` command line: argument parsing, run manifests and exit codes.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::fields::{gauss_field, h_field_infinite, potential_grid, GridSpec, Weighting, DEFAULT_QUAD_TOL};
use crate::gp_radial::{relax_profile, solve_profile, CondensateProfile, RadialGrid, DEFAULT_POINTS, DEFAULT_TOL, DEFAULT_XI_MIN};
use crate::io::{self, FieldMeta, ProfileMeta};
use crate::monopole::{areal_density, check_consistency, neutrality_report, NeutralityReport};
use crate::quantities::{derive_geometry, DerivedScenario, Scenario, Source};

pub const WORKERS_ENV: &str = "VORTEXEM_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_NEUTRALITY: i32 = 3;
pub const EXIT_QUADRATURE: i32 = 4;
pub const EXIT_INPUT: i32 = 5;

const EXIT_HELP: &str = "\
Exit codes:
  0  success
  1  file system or JSON error
  2  profile solver did not converge, or the solution has interior nodes
  3  charge neutrality check failed
  4  potential quadrature failed at more than 0.1% of grid points
  5  invalid arguments, scenario or input file

The VORTEXEM_WORKERS environment variable overrides --workers.";

#[derive(Debug, Parser)]
#[command(name = "vortexem", version, about = "Vortex-state monopole charges and fields in dipolar condensates", after_help = EXIT_HELP, args_override_self = true)]
struct Cli {
    /// Worker threads for the potential grid (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the radial vortex profile for one or more interaction strengths
    Solve(SolveArgs),
    /// Areal monopole density, enclosed charge and neutrality report
    Charge(CaseArgs),
    /// Radial field of the infinitely long cylinder
    Field(CaseArgs),
    /// Potential of the finite cylinder on a (xi, z) grid
    Potential(PotentialArgs),
    /// Scaling potential and charge coefficients of a scenario, as JSON
    Estimate(EstimateArgs),
    /// Profiles, charge, field, potential and all preset estimates in one go
    All(AllArgs),
    /// Re-run the command recorded in a run manifest
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Shooting,
    Relaxation,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    /// Radial grid points
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub grid: usize,
    /// Innermost grid point
    #[arg(long, default_value_t = DEFAULT_XI_MIN)]
    pub xi_min: f64,
    /// Solver tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = SolverChoice::Shooting)]
    pub solver: SolverChoice,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    /// Vortex winding number
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Interaction strength n1d*a (repeatable)
    #[arg(long = "n1da", default_values_t = [0.1, 10.0, 100.0])]
    pub n1da: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CaseArgs {
    /// Preset name (rb87, hydrogen, helium) or scenario file
    #[arg(long, default_value = "rb87")]
    pub scenario: String,
    /// Override the scenario's winding number
    #[arg(long)]
    pub n: Option<u32>,
    /// Override the scenario's n1d*a
    #[arg(long = "n1da")]
    pub n1da: Option<f64>,
    /// Use a profile CSV written by `solve` instead of solving inline
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub case: CaseArgs,
    /// Aspect ratio R0/z0; replaces the scenario's half-height
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 2.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 101)]
    pub nxi: usize,
    #[arg(long, default_value_t = 101)]
    pub nz: usize,
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    pub quad_tol: f64,
    /// Drop the |psi|^2 weight from the kernel (comparison only)
    #[arg(long)]
    pub unweighted: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// Preset name or scenario file
    pub scenario: String,
    /// Applied field in V/m (susceptibility scenarios only)
    #[arg(long)]
    pub applied_field: Option<f64>,
    /// Also write the report and a manifest into this directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct AllArgs {
    /// Scenario for the charge, field and potential stages
    #[arg(long, default_value = "rb87")]
    pub scenario: String,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
struct ReplayArgs {
    manifest: PathBuf,
    /// Write into this directory instead of the recorded one
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Record of one run, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments as given, program name first.
    pub argv: Vec<String>,
    pub workers: usize,
    pub scenario: Option<DerivedScenario>,
    pub settings: Value,
    pub outputs: Vec<PathBuf>,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub diagnostics: Value,
    pub assumptions: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, argv: &[String], workers: usize, settings: Value) -> Self {
        let now = Utc::now();
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv: argv.to_vec(),
            workers,
            scenario: None,
            settings,
            outputs: Vec::new(),
            started: now,
            finished: now,
            diagnostics: Value::Null,
            assumptions: Vec::new(),
        }
    }

    fn set_scenario(&mut self, ds: &DerivedScenario) {
        for a in &ds.underlying.assumptions {
            if !self.assumptions.contains(a) {
                self.assumptions.push(a.clone());
            }
        }
        self.scenario = Some(ds.clone());
    }

    fn finish(&mut self, dir: &Path) -> Result<PathBuf, CliError> {
        self.finished = Utc::now();
        let path = dir.join(format!("manifest_{}.json", self.command));
        io::write_json_file(&path, self)?;
        Ok(path)
    }
}

#[derive(Debug)]
pub enum CliError {
    Library(Error),
    Neutrality(NeutralityReport),
    Quadrature { failed: usize, total: usize },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) => match e {
                Error::NonConvergence { .. } | Error::NodeDetected { .. } => EXIT_NON_CONVERGENCE,
                Error::Io(_) | Error::Json(_) => EXIT_IO,
                _ => EXIT_INPUT,
            },
            CliError::Neutrality(_) => EXIT_NEUTRALITY,
            CliError::Quadrature { .. } => EXIT_QUADRATURE,
            CliError::Usage(_) => EXIT_INPUT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Neutrality(r) => write!(
                f,
                "neutrality check failed: delta weight {:.3e}, Q(1)/max|Q| {:.3e}, shell imbalance {:.3e}",
                r.delta_weight, r.total_residual, r.shell_imbalance
            ),
            CliError::Quadrature { failed, total } => {
                write!(f, "potential quadrature missed the tolerance at {failed} of {total} points")
            }
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Library(Error::Json(e))
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match run_args(&args) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_args(args: &[OsString]) -> Result<(), CliError> {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Usage(e.to_string().trim_end().to_string()));
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();

    if let Command::Replay(r) = &cli.command {
        return replay(r, cli.workers);
    }

    let workers = resolve_workers(cli.workers)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let workers = pool.current_num_threads();
    pool.install(|| match &cli.command {
        Command::Solve(a) => cmd_solve(a, &argv, workers),
        Command::Charge(a) => cmd_charge(a, &argv, workers),
        Command::Field(a) => cmd_field(a, &argv, workers),
        Command::Potential(a) => cmd_potential(a, &argv, workers),
        Command::Estimate(a) => cmd_estimate(a, &argv, workers),
        Command::All(a) => cmd_all(a, &argv, workers),
        Command::Replay(_) => unreachable!(),
    })
}

fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let chosen = match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?,
        ),
        _ => flag,
    };
    if chosen == Some(0) {
        return Err(CliError::Usage("worker count must be at least 1".into()));
    }
    Ok(chosen)
}

fn replay(r: &ReplayArgs, workers: Option<usize>) -> Result<(), CliError> {
    let m: RunManifest = io::read_json_file(&r.manifest)?;
    if m.argv.len() < 2 {
        return Err(CliError::Usage(format!(
            "{}: manifest has no recorded command",
            r.manifest.display()
        )));
    }
    let mut args: Vec<OsString> = vec![m.argv[0].clone().into()];
    let w = workers.unwrap_or(m.workers);
    args.extend(["--workers".into(), w.to_string().into()]);
    args.extend(m.argv[1..].iter().map(OsString::from));
    if let Some(out) = &r.out {
        args.push("--out".into());
        args.push(out.clone().into());
    }
    eprintln!("replaying {} from {}", m.command, r.manifest.display());
    run_args(&args)
}

/// Resolves a preset name or a scenario file path.
pub fn load_scenario(spec: &str) -> crate::Result<Scenario> {
    if let Some(s) = Scenario::preset(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if path.is_file() {
        return Scenario::load(path);
    }
    Err(Error::Scenario(format!(
        "unknown scenario {spec:?}: not a preset ({}) or a readable file",
        Scenario::PRESETS.join(", ")
    )))
}

fn solve_with(n: u32, n1da: f64, s: &SolverArgs) -> crate::Result<CondensateProfile> {
    let grid = RadialGrid::uniform(s.grid, s.xi_min)?;
    match s.solver {
        SolverChoice::Shooting => solve_profile(n, n1da, &grid, s.tol),
        SolverChoice::Relaxation => relax_profile(n, n1da, &grid, s.tol),
    }
}

fn profile_name(n: u32, n1da: f64) -> String {
    format!("profile_n{n}_a{n1da}.csv")
}

fn cmd_solve(a: &SolveArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let mut m = RunManifest::new("solve", argv, workers, serde_json::to_value(a)?);
    let mut diag = Vec::new();
    for &n1da in &a.n1da {
        let p = solve_with(a.n, n1da, &a.solver)?;
        let path = a.out.join(profile_name(a.n, n1da));
        io::write_profile(&path, &p)?;
        eprintln!(
            "n = {}, n1d*a = {n1da}: eps = {:.10}, residual {:.2e}",
            a.n, p.eigenvalue, p.residual
        );
        diag.push(json!({ "file": path, "profile": ProfileMeta::of(&p) }));
        m.outputs.push(path);
    }
    m.diagnostics = Value::Array(diag);
    m.finish(&a.out)?;
    Ok(())
}

/// Scenario with overrides applied, and the matching profile.
fn resolve_case(a: &CaseArgs, aspect: Option<f64>) -> Result<(DerivedScenario, CondensateProfile), CliError> {
    let mut sc = load_scenario(&a.scenario)?;
    let imported = a.profile.as_deref().map(io::read_profile).transpose()?;
    if let Some(n) = a.n.or(imported.as_ref().map(|p| p.vortex_order)) {
        sc.vortex_order = n;
    }
    if let Some(g) = a.n1da.or(imported.as_ref().map(|p| p.n1d_a)) {
        sc.n1d_a = g;
    }
    if let Some(f) = aspect {
        if !(f > 0.0 && f.is_finite()) {
            return Err(CliError::Usage(format!("--f must be positive, got {f}")));
        }
        sc.half_height = sc.radius / f;
    }
    let ds = derive_geometry(&sc)?;
    let p = match imported {
        Some(p) => p,
        None => solve_with(sc.vortex_order, sc.n1d_a, &a.solver)?,
    };
    check_consistency(&p, &ds)?;
    Ok((ds, p))
}

fn charge_stage(ds: &DerivedScenario, p: &CondensateProfile, out: &Path, m: &mut RunManifest) -> Result<Option<CliError>, CliError> {
    let cp = areal_density(p, ds)?;
    let report = if p.vortex_order == 0 {
        None
    } else {
        Some(neutrality_report(p, ds)?)
    };
    let path = out.join(format!("charge_{}.csv", ds.underlying.name));
    io::write_charge(&path, &cp, report)?;
    let half = p.density_at_half();
    eprintln!(
        "{}: Q(1/2) = {:.4e} {unit}, Q(1) = {:.3e} {unit}",
        ds.underlying.name,
        cp.coefficient * half,
        cp.total,
        unit = cp.kind.charge_unit()
    );
    m.outputs.push(path.clone());
    m.diagnostics = json!({
        "charge_file": path,
        "profile": ProfileMeta::of(p),
        "charge_coefficient": cp.coefficient,
        "charge_at_half": cp.coefficient * half,
        "total": cp.total,
        "neutrality": report,
    });
    Ok(report.filter(|r| !r.passed()).map(CliError::Neutrality))
}

fn cmd_charge(a: &CaseArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let mut m = RunManifest::new("charge", argv, workers, serde_json::to_value(a)?);
    let (ds, p) = resolve_case(a, None)?;
    m.set_scenario(&ds);
    let failure = charge_stage(&ds, &p, &a.out, &mut m)?;
    m.finish(&a.out)?;
    failure.map_or(Ok(()), Err)
}

fn field_stage(ds: &DerivedScenario, p: &CondensateProfile, out: &Path) -> Result<(PathBuf, Value), CliError> {
    let xs = p.xi();
    let field = xs.iter().map(|&x| h_field_infinite(p, ds, x)).collect::<crate::Result<Vec<_>>>()?;
    let cp = areal_density(p, ds)?;
    let mut gauss_dev = 0.0f64;
    let mut scale = 0.0f64;
    for (&x, &h) in xs.iter().zip(&field) {
        if x < 1.0 {
            gauss_dev = gauss_dev.max((gauss_field(&cp, ds, x)? - h).abs());
            scale = scale.max(h.abs());
        }
    }
    let kind = ds.kind();
    let meta = FieldMeta {
        kind,
        prefactor: ds.field_prefactor(),
        unit: kind.field_unit().into(),
    };
    let path = out.join(format!("field_{}.csv", ds.underlying.name));
    io::write_field(&path, xs, &field, &meta)?;
    let rel = if scale > 0.0 { gauss_dev / scale } else { 0.0 };
    eprintln!(
        "{}: field prefactor {:.4e} {}, Gauss cross-check {:.1e}",
        ds.underlying.name, meta.prefactor, meta.unit, rel
    );
    Ok((
        path.clone(),
        json!({ "field_file": path, "prefactor": meta.prefactor, "unit": meta.unit, "gauss_relative_deviation": rel }),
    ))
}

fn cmd_field(a: &CaseArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let mut m = RunManifest::new("field", argv, workers, serde_json::to_value(a)?);
    let (ds, p) = resolve_case(a, None)?;
    m.set_scenario(&ds);
    let (path, diag) = field_stage(&ds, &p, &a.out)?;
    m.outputs.push(path);
    m.diagnostics = diag;
    m.finish(&a.out)?;
    Ok(())
}

fn potential_stage(
    ds: &DerivedScenario,
    p: &CondensateProfile,
    spec: &GridSpec,
    out: &Path,
) -> Result<(PathBuf, Value, Option<CliError>), CliError> {
    let pg = potential_grid(p, ds, spec)?;
    let path = out.join(format!("potential_{}.csv", ds.underlying.name));
    io::write_potential(&path, &pg)?;
    let total = pg.phi_over_phi0.len();
    eprintln!(
        "{}: {} x {} potential grid, f = {}, max |phi/phi0| = {:.4e}, {} failed point(s)",
        ds.underlying.name,
        pg.nxi(),
        pg.nz(),
        pg.f_aspect,
        pg.max_abs(),
        pg.failed_points
    );
    let diag = json!({
        "potential_file": path,
        "max_abs": pg.max_abs(),
        "max_error": pg.max_error,
        "failed_points": pg.failed_points,
        "rim_points": pg.rim_points,
    });
    let failure = (pg.failed_points * 1000 > total).then_some(CliError::Quadrature {
        failed: pg.failed_points,
        total,
    });
    Ok((path, diag, failure))
}

fn cmd_potential(a: &PotentialArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let mut m = RunManifest::new("potential", argv, workers, serde_json::to_value(a)?);
    let (ds, p) = resolve_case(&a.case, a.f)?;
    m.set_scenario(&ds);
    if ds.phi0 == 0.0 {
        m.assumptions.push("scenario has no source: phi/phi0 is reported as zero".into());
    }
    let spec = GridSpec {
        xi_max: a.xi_max,
        z_max: a.z_max,
        nxi: a.nxi,
        nz: a.nz,
        quad_tol: a.quad_tol,
        weighting: if a.unweighted { Weighting::Unweighted } else { Weighting::Density },
    };
    let (path, diag, failure) = potential_stage(&ds, &p, &spec, &a.case.out)?;
    m.outputs.push(path);
    m.diagnostics = diag;
    m.finish(&a.case.out)?;
    failure.map_or(Ok(()), Err)
}

/// Scaling constants of one scenario, as printed by `estimate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub scenario: String,
    pub kind: String,
    pub phi0: f64,
    pub phi0_unit: String,
    /// Q(ξ) = charge_coefficient · |ψ(ξ)|².
    pub charge_coefficient: f64,
    pub charge_unit: String,
    /// Charge coefficient per unit applied field (susceptibility only).
    pub charge_coefficient_per_field: Option<f64>,
    /// |ψ(1/2)|² of the scenario's solved profile.
    pub density_at_half: f64,
    pub charge_at_half: f64,
    /// Φ₀/R₀ as B (T) or E (V/m).
    pub characteristic_field: f64,
    pub characteristic_field_unit: String,
    pub n1d: f64,
    pub atom_count: f64,
    pub aspect: f64,
    pub assumptions: Vec<String>,
}

/// Resolves the scenario and computes its [`EstimateReport`] with the default solver settings.
pub fn estimate(scenario: &str, applied_field: Option<f64>) -> Result<(DerivedScenario, EstimateReport), CliError> {
    let mut sc = load_scenario(scenario)?;
    if let Some(e) = applied_field {
        match &mut sc.source {
            Source::Susceptibility { applied_field, .. } => *applied_field = e,
            _ => {
                return Err(Error::Scenario(format!(
                    "--applied-field only applies to susceptibility scenarios; {} is {}",
                    sc.name,
                    sc.kind()
                ))
                .into())
            }
        }
    }
    let ds = derive_geometry(&sc)?;
    let p = solve_profile(sc.vortex_order, sc.n1d_a, &RadialGrid::default(), DEFAULT_TOL)?;
    let half = p.density_at_half();
    let kind = ds.kind();
    let per_field = match sc.source {
        Source::Susceptibility { applied_field, .. } if applied_field != 0.0 => Some(ds.charge_coefficient / applied_field),
        _ => None,
    };
    let report = EstimateReport {
        scenario: sc.name.clone(),
        kind: kind.to_string(),
        phi0: ds.phi0,
        phi0_unit: kind.potential_unit().into(),
        charge_coefficient: ds.charge_coefficient,
        charge_unit: kind.charge_unit().into(),
        charge_coefficient_per_field: per_field,
        density_at_half: half,
        charge_at_half: ds.charge_coefficient * half,
        characteristic_field: ds.characteristic_field(),
        characteristic_field_unit: if kind.produces_magnetic_charge() { "T" } else { "V/m" }.into(),
        n1d: ds.n1d,
        atom_count: ds.atom_count,
        aspect: ds.aspect,
        assumptions: sc.assumptions.clone(),
    };
    Ok((ds, report))
}

fn cmd_estimate(a: &EstimateArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let (ds, report) = estimate(&a.scenario, a.applied_field)?;
    let text = serde_json::to_string_pretty(&report)?;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{text}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(Error::Io(e).into());
        }
    }
    if let Some(out) = &a.out {
        let mut m = RunManifest::new("estimate", argv, workers, serde_json::to_value(a)?);
        m.set_scenario(&ds);
        let path = out.join(format!("estimate_{}.json", report.scenario));
        io::write_json_file(&path, &report)?;
        m.outputs.push(path);
        m.finish(out)?;
    }
    Ok(())
}

fn cmd_all(a: &AllArgs, argv: &[String], workers: usize) -> Result<(), CliError> {
    let mut m = RunManifest::new("all", argv, workers, serde_json::to_value(a)?);
    let solver = SolverArgs {
        grid: DEFAULT_POINTS,
        xi_min: DEFAULT_XI_MIN,
        tol: DEFAULT_TOL,
        solver: SolverChoice::Shooting,
    };
    let mut profiles = Vec::new();
    for n1da in [0.1, 10.0, 100.0] {
        let p = solve_with(1, n1da, &solver)?;
        let path = a.out.join(profile_name(1, n1da));
        io::write_profile(&path, &p)?;
        eprintln!("n = 1, n1d*a = {n1da}: eps = {:.10}", p.eigenvalue);
        profiles.push(json!({ "file": path, "profile": ProfileMeta::of(&p) }));
        m.outputs.push(path);
    }

    let case = CaseArgs {
        scenario: a.scenario.clone(),
        n: None,
        n1da: None,
        profile: None,
        solver,
        out: a.out.clone(),
    };
    let (ds, p) = resolve_case(&case, None)?;
    m.set_scenario(&ds);
    let failure = charge_stage(&ds, &p, &a.out, &mut m)?;
    let charge = std::mem::take(&mut m.diagnostics);
    let (field_path, field) = field_stage(&ds, &p, &a.out)?;
    m.outputs.push(field_path);
    let (pot_path, potential, quad_failure) = potential_stage(&ds, &p, &GridSpec::default(), &a.out)?;
    m.outputs.push(pot_path);

    let mut estimates = Vec::new();
    for name in Scenario::PRESETS {
        let (eds, report) = estimate(name, None)?;
        let path = a.out.join(format!("estimate_{name}.json"));
        io::write_json_file(&path, &report)?;
        for s in &eds.underlying.assumptions {
            if !m.assumptions.contains(s) {
                m.assumptions.push(s.clone());
            }
        }
        eprintln!(
            "{name}: phi0 = {:.3e} {}, Q coefficient = {:.3e} {}",
            report.phi0, report.phi0_unit, report.charge_coefficient, report.charge_unit
        );
        estimates.push(report);
        m.outputs.push(path);
    }
    m.diagnostics = json!({
        "profiles": profiles,
        "charge": charge,
        "field": field,
        "potential": potential,
        "estimates": estimates,
    });
    m.finish(&a.out)?;
    match failure.or(quad_failure) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let nc = Error::NonConvergence {
            solver: "x",
            iterations: 1,
            boundary_residual: 1.0,
            norm_residual: 1.0,
        };
        assert_eq!(CliError::from(nc).exit_code(), 2);
        assert_eq!(CliError::from(Error::NodeDetected { nodes: 1 }).exit_code(), 2);
        assert_eq!(CliError::from(Error::Scenario("x".into())).exit_code(), 5);
        assert_eq!(CliError::Quadrature { failed: 2, total: 3 }.exit_code(), 4);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 5);
    }

    #[test]
    fn help_and_bad_flags() {
        assert_eq!(run(["vortexem", "--help"]), 0);
        assert_eq!(run(["vortexem", "solve", "--bogus"]), 5);
        assert_eq!(run(["vortexem", "estimate", "nowhere-scenario"]), 5);
    }

    #[test]
    fn applied_field_rejected_for_dipoles() {
        let e = estimate("rb87", Some(1.0)).unwrap_err();
        assert_eq!(e.exit_code(), 5);
    }

    #[test]
    fn susceptibility_charge_is_linear_in_field() {
        let (_, one) = estimate("helium", Some(1.0)).unwrap();
        let (_, ten) = estimate("helium", Some(10.0)).unwrap();
        assert!((ten.charge_coefficient / one.charge_coefficient - 10.0).abs() < 1e-12);
        let (a, b) = (one.charge_coefficient_per_field.unwrap(), ten.charge_coefficient_per_field.unwrap());
        assert!((a / b - 1.0).abs() < 1e-14);
    }
}
