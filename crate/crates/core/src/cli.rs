//! Command-line front end: `gen`, `spectrum`, `verify`, `batch`.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{solve_dirichlet, solve_neumann, EigenMethod, MassKind, SolverSettings};
use crate::fixtures::{cap_map, fixture_suite, verify_suite, RandomFactor};
use crate::mesh::{
    generate_annulus, generate_branched_double_disc, generate_conformal_disc, generate_disc, generate_spherical_cap,
    subdivide_with_map, topology, unit_square, MeshFile, SurfaceMesh,
};
use crate::transplant::{compute_degree, MapSample};
use crate::verify::{verify_inequality, with_budget, write_csv, VerificationReport};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MEMBRANE_SPECTRA_THREADS";

#[derive(Debug, Clone, Parser)]
#[command(name = "membrane-spectra", version, about = "Dirichlet/Neumann spectra of bordered surfaces and eigenvalue inequality checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Generate a mesh (with its map to the disc where one is known).
    Gen(GenArgs),
    /// Compute Dirichlet or Neumann eigenpairs of a mesh file.
    Spectrum(SpectrumArgs),
    /// Verify the eigenvalue inequalities on a mesh file.
    Verify(VerifyArgs),
    /// Run the built-in fixture suite across refinement levels.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Disc,
    Cap,
    Hemisphere,
    Annulus,
    Branched,
    Conformal,
    Square,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub shape: Shape,
    /// Rings (disc-like shapes), layers per unit width (annulus), or cells per side (square).
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub resolution: u32,
    /// Cap colatitude in radians.
    #[arg(long, default_value_t = PI / 3.0)]
    pub colatitude: f64,
    /// Annulus inner radius.
    #[arg(long, default_value_t = 0.5)]
    pub inner_radius: f64,
    /// Seed of the random conformal factor.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Dense,
    ShiftInvert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MassArg {
    Consistent,
    Lumped,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "consistent")]
    pub mass: MassArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 400)]
    pub dense_max_dofs: usize,
}

impl SolverArgs {
    pub fn settings(&self) -> SolverSettings {
        SolverSettings {
            method: match self.method {
                MethodArg::Auto => EigenMethod::Auto,
                MethodArg::Dense => EigenMethod::Dense,
                MethodArg::ShiftInvert => EigenMethod::ShiftInvert,
            },
            mass: match self.mass {
                MassArg::Consistent => MassKind::Consistent,
                MassArg::Lumped => MassKind::Lumped,
            },
            tolerance: self.tolerance,
            dense_max_dofs: self.dense_max_dofs,
            ..SolverSettings::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub bc: BcArg,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    /// Include eigenfunction samples in the output.
    #[arg(long)]
    pub eigenfunctions: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapArg {
    /// `x + i y` of a planar mesh.
    Id,
    /// Stereographic projection of a spherical cap, rescaled so the boundary is the unit circle.
    Stereographic,
    /// The `map` stored in the mesh file.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeArg {
    Auto,
    Fixed(u32),
}

fn parse_degree(s: &str) -> std::result::Result<DegreeArg, String> {
    if s == "auto" {
        return Ok(DegreeArg::Auto);
    }
    match s.parse::<u32>() {
        Ok(d) if d >= 1 => Ok(DegreeArg::Fixed(d)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "file")]
    pub map: MapArg,
    #[arg(long, default_value = "auto", value_parser = parse_degree)]
    pub degree: DegreeArg,
    /// Levels of midpoint subdivision; the last two give the discretization budget.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub refine_levels: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write one CSV row per level.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub refine_levels: u32,
    /// Rings at the coarsest level.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..))]
    pub resolution: u32,
    /// Slack table; written to stdout when neither `--csv` nor `--out` is given.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Every report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: &'a str,
    message: String,
}

/// Parses `args`, runs the command, and returns the process exit code:
/// 0 on success, 1 on a module failure (JSON error object on stderr), 2 on
/// a configuration error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        report_error(&e);
        return 2;
    }
    let stdout = io::stdout();
    match run(&config, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            report_error(&e);
            1
        }
    }
}

fn report_error(e: &Error) {
    let obj = ErrorObject { error: e.kind(), message: e.to_string() };
    let text = crate::json::to_string(&obj).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", e.kind()));
    eprintln!("{text}");
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::param("MEMBRANE_SPECTRA_THREADS", format!("expected a positive integer, got `{value}`")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs one command. Documents without `--out` go to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match &config.command {
        Command::Gen(args) => gen(args, stdout),
        Command::Spectrum(args) => spectrum(args, stdout),
        Command::Verify(args) => verify(args, stdout),
        Command::Batch(args) => batch(args, stdout),
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => crate::json::write_file(path, value),
        None => {
            crate::json::to_writer(&mut *stdout, value)?;
            writeln!(stdout)?;
            Ok(())
        }
    }
}

pub fn generate(args: &GenArgs) -> Result<(SurfaceMesh, Option<MapSample>)> {
    let res = args.resolution as usize;
    Ok(match args.shape {
        Shape::Disc => (generate_disc(res)?, None),
        Shape::Square => (unit_square(res)?, None),
        Shape::Annulus => (generate_annulus(args.inner_radius, res)?, None),
        Shape::Cap | Shape::Hemisphere => {
            let colatitude = if args.shape == Shape::Hemisphere { PI / 2.0 } else { args.colatitude };
            let mesh = generate_spherical_cap(colatitude, res)?;
            let f = cap_map(&mesh, colatitude)?;
            (mesh, Some(f))
        }
        Shape::Branched => {
            let (mesh, f) = generate_branched_double_disc(res)?;
            (mesh, Some(f))
        }
        Shape::Conformal => {
            let phi = RandomFactor::new(args.seed);
            let (mesh, f) = generate_conformal_disc(res, |z| phi.eval(z))?;
            (mesh, Some(f))
        }
    })
}

fn gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<()> {
    let (mesh, map) = generate(args)?;
    topology(&mesh)?;
    emit(&MeshFile::from_mesh(&mesh, map.as_ref()), args.out.as_deref(), stdout)
}

fn spectrum(args: &SpectrumArgs, stdout: &mut dyn Write) -> Result<()> {
    let mesh = MeshFile::read(&args.input)?.to_mesh()?;
    let settings = args.solver.settings();
    let k = args.k as usize;
    let result = match args.bc {
        BcArg::Dirichlet => solve_dirichlet(&mesh, k, &settings)?,
        BcArg::Neumann => solve_neumann(&mesh, k, &settings)?,
    };
    emit(&result.to_file(args.eigenfunctions), args.out.as_deref(), stdout)
}

fn map_values(file: &MeshFile, mesh: &SurfaceMesh, kind: MapArg) -> Result<Vec<Complex64>> {
    match kind {
        MapArg::Id => Ok(MapSample::identity(mesh)?.values().to_vec()),
        MapArg::File => file.map_values().ok_or_else(|| Error::param("map", "the mesh file has no `map` field")),
        MapArg::Stereographic => {
            let pos = mesh.positions().ok_or_else(|| Error::param("map", "stereographic map needs vertex positions"))?;
            let z: Vec<Complex64> = pos.iter().map(|p| Complex64::new(p[0], p[1]) / (1.0 + p[2])).collect();
            let boundary = mesh.boundary_vertices();
            let radii: Vec<f64> = (0..z.len()).filter(|&v| boundary[v]).map(|v| z[v].norm()).collect();
            let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
            if !(lo > 0.0) || hi - lo > 1e-9 * hi {
                return Err(Error::param("map", "stereographic image of the boundary is not a circle about the origin"));
            }
            Ok(z.iter().map(|w| w / hi).collect())
        }
    }
}

/// Mesh and map from a verify invocation, at the input resolution.
pub fn load_instance(args: &VerifyArgs) -> Result<(SurfaceMesh, MapSample)> {
    let file = MeshFile::read(&args.input)?;
    let mesh = file.to_mesh()?;
    let values = map_values(&file, &mesh, args.map)?;
    if values.len() != mesh.vertex_count() {
        return Err(Error::MapSizeMismatch { expected: mesh.vertex_count(), got: values.len() });
    }
    let degree = match args.degree {
        DegreeArg::Auto => compute_degree(&mesh, &values)?,
        DegreeArg::Fixed(d) => d,
    };
    Ok((mesh, MapSample::new(values, degree)?))
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<()> {
    let (mut mesh, mut f) = load_instance(args)?;
    let settings = args.solver.settings();
    let mut reports: Vec<VerificationReport> = Vec::new();
    for level in 0..args.refine_levels {
        if level > 0 {
            (mesh, f) = subdivide_with_map(&mesh, &f)?;
        }
        let report = verify_inequality(&mesh, &f, &settings)?;
        reports.push(match reports.last() {
            Some(prev) => with_budget(prev, report),
            None => report,
        });
    }
    if let Some(path) = &args.csv {
        let name = args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let rows: Vec<_> = reports.iter().enumerate().map(|(l, r)| (name.clone(), l, r.clone())).collect();
        write_csv(std::fs::File::create(path)?, &rows)?;
    }
    emit(reports.last().expect("at least one level"), args.out.as_deref(), stdout)
}

#[derive(Serialize)]
struct BatchEntry<'a> {
    fixture: &'a str,
    level: usize,
    report: &'a VerificationReport,
}

fn batch(args: &BatchArgs, stdout: &mut dyn Write) -> Result<()> {
    let settings = args.solver.settings();
    let suite = fixture_suite();
    let results = verify_suite(&suite, args.resolution as usize, args.refine_levels as usize, &settings);
    let mut rows = Vec::new();
    for (fixture, reports) in results {
        for (level, report) in reports?.into_iter().enumerate() {
            rows.push((fixture.name.clone(), level, report));
        }
    }
    if let Some(path) = &args.out {
        let entries: Vec<BatchEntry> = rows.iter().map(|(f, l, r)| BatchEntry { fixture: f, level: *l, report: r }).collect();
        crate::json::write_file(path, &entries)?;
    }
    match &args.csv {
        Some(path) => write_csv(std::fs::File::create(path)?, &rows),
        None if args.out.is_none() => write_csv(stdout, &rows),
        None => Ok(()),
    }
}
