//! `isoperim`: slice meshes, symmetrize them and certify the isoperimetric
//! inequality chain from the command line.
//!
//! Exit codes: 0 success, 1 a verdict failed, 2 bad input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoperim::geometry::Point3;
use isoperim::scalar::fmt17;
use isoperim::{
    analytic_reference, build_profile, chain_loops, generate, load_mesh, orient_axis, revolve_mesh, save_mesh,
    segment_trace, slice_at, verify_chain_with, Error, Mesh, MeshFormat, ShapeKind, ShapeSpec, Tilt, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "isoperim", version, about = "Certify S ≥ ∫√(4πQ+Q'²)dx ≥ ∛(36πV²) on triangle meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full inequality chain and write the JSON report.
    Verify(Common),
    /// Write the solid of revolution with the same section areas.
    Symmetrize(Common),
    /// Write the loops of one cross-section as CSV.
    Slice(Common),
    /// Write the circular-segment trace of one cross-section as CSV.
    Segment2d(Common),
    /// Write a generated test shape and print its closed-form measures.
    Shape(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// Input mesh file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Mesh file format; defaults to the file extension.
    #[arg(long, value_parser = ["obj", "stl", "stl-ascii"])]
    format: Option<String>,
    /// Generated shape instead of an input file.
    #[arg(long)]
    kind: Option<ShapeKind>,
    /// Comma-separated shape parameters.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Shape resolution: subdivision level for spheres and ellipsoids,
    /// segments otherwise.
    #[arg(long)]
    resolution: Option<usize>,
    /// Slicing direction `a,b,c`.
    #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
    axis: String,
    /// `none`, `auto` or an angle in radians.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    tilt: Tilt,
    /// Number of slicing cells.
    #[arg(long, default_value_t = 256)]
    slices: usize,
    /// Ring segments of the symmetrized mesh.
    #[arg(long, default_value_t = 128)]
    segments: usize,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Where to write CSV data; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Where to write an output mesh.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Abscissa of the cross-section in the slicing frame.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<f64>,
    /// Print errors as JSON on standard error.
    #[arg(long)]
    error_json: bool,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Success,
    VerdictFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (Command::Verify(common)
    | Command::Symmetrize(common)
    | Command::Slice(common)
    | Command::Segment2d(common)
    | Command::Shape(common)) = &cli.command;
    let error_json = common.error_json;

    if let Err(e) = configure_threads() {
        return report_error(&e, error_json);
    }
    let result = match &cli.command {
        Command::Verify(c) => cmd_verify(c),
        Command::Symmetrize(c) => cmd_symmetrize(c),
        Command::Slice(c) => cmd_slice(c),
        Command::Segment2d(c) => cmd_segment2d(c),
        Command::Shape(c) => cmd_shape(c),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::VerdictFailed) => ExitCode::from(1),
        Err(e) => report_error(&e, error_json),
    }
}

/// `ISOPERIM_THREADS` caps the worker pool; 0 or unset means one per core.
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("ISOPERIM_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("ISOPERIM_THREADS must be a nonnegative integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("cannot configure thread pool: {e}")))
}

fn report_error(e: &Error, as_json: bool) -> ExitCode {
    if as_json {
        let mut obj = serde_json::json!({ "error": error_kind(e), "message": e.to_string() });
        match e {
            Error::InvalidMesh(report) => {
                obj["violations"] = serde_json::to_value(&report.violations).unwrap_or_default();
            }
            Error::DegenerateIncidence { suggested, .. } => obj["suggested_x"] = serde_json::json!(suggested),
            Error::ParallelFacets { faces } => obj["faces"] = serde_json::json!(faces),
            _ => {}
        }
        eprintln!("{obj}");
    } else {
        eprintln!("error: {e}");
    }
    ExitCode::from(2)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Io { .. } => "io",
        Error::Parse { .. } => "parse",
        Error::InvalidMesh(_) => "invalid_mesh",
        Error::FlatMesh(_) => "flat_mesh",
        Error::ParallelFacets { .. } => "parallel_facets",
        Error::DegenerateIncidence { .. } => "degenerate_incidence",
        Error::OpenChain { .. } => "open_chain",
        Error::NonPositiveArea { .. } => "non_positive_area",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn parse_list(raw: &str, what: &str) -> Result<Vec<f64>, Error> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidArgument(format!("{what}: cannot parse {s:?} as a number")))
        })
        .collect()
}

fn parse_axis(raw: &str) -> Result<[f64; 3], Error> {
    let v = parse_list(raw, "--axis")?;
    let axis: [f64; 3] =
        v.try_into().map_err(|_| Error::InvalidArgument("--axis takes three comma-separated numbers".into()))?;
    if axis.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidArgument("--axis must be nonzero".into()));
    }
    Ok(axis)
}

fn format_for(path: &Path, declared: Option<&str>) -> Result<MeshFormat, Error> {
    match declared {
        Some(f) => f.parse(),
        None => MeshFormat::from_path(path).ok_or_else(|| {
            Error::InvalidArgument(format!("cannot infer a mesh format for {}; pass --format", path.display()))
        }),
    }
}

impl Common {
    fn check_paths(&self) -> Result<(), Error> {
        let paths: Vec<&PathBuf> =
            [&self.input, &self.report, &self.csv, &self.output].into_iter().flatten().collect();
        for (i, a) in paths.iter().enumerate() {
            if paths[i + 1..].contains(a) {
                return Err(Error::InvalidArgument(format!("path {} is used twice", a.display())));
            }
        }
        if self.slices < isoperim::profile::MIN_SLICES {
            return Err(Error::InvalidArgument(format!(
                "--slices must be at least {}, got {}",
                isoperim::profile::MIN_SLICES,
                self.slices
            )));
        }
        Ok(())
    }

    fn shape_spec(&self) -> Result<ShapeSpec, Error> {
        let kind = self.kind.ok_or_else(|| Error::InvalidArgument("--kind is required".into()))?;
        let params = match &self.params {
            Some(p) => parse_list(p, "--params")?,
            None => return Err(Error::InvalidArgument(format!("--params is required for {kind}"))),
        };
        ShapeSpec::new(kind, params, self.resolution.unwrap_or_else(|| kind.default_resolution()))
    }

    /// The mesh named by `--input`, or the generated `--kind` shape.
    fn source_mesh(&self) -> Result<Mesh, Error> {
        self.check_paths()?;
        match (&self.input, &self.kind) {
            (Some(path), None) => load_mesh(path, format_for(path, self.format.as_deref())?),
            (None, Some(_)) => generate(&self.shape_spec()?),
            (Some(_), Some(_)) => Err(Error::InvalidArgument("pass either --input or --kind, not both".into())),
            (None, None) => Err(Error::InvalidArgument("pass --input PATH or --kind NAME".into())),
        }
    }

    fn options(&self) -> Result<VerifyOptions, Error> {
        Ok(VerifyOptions { axis: parse_axis(&self.axis)?, tilt: self.tilt, slices: self.slices })
    }

    /// The source mesh rotated into the slicing frame.
    fn oriented_mesh(&self) -> Result<Mesh, Error> {
        let mesh = self.source_mesh()?;
        let validation = mesh.validate();
        if !validation.is_valid() {
            return Err(Error::InvalidMesh(validation));
        }
        let (oriented, _) = orient_axis(&mesh, Point3::from_f64(parse_axis(&self.axis)?), self.tilt)?;
        Ok(oriented)
    }

    /// The requested section abscissa, or the middle of the x-extent.
    fn section_x(&self, mesh: &Mesh) -> Result<f64, Error> {
        match self.at {
            Some(x) => Ok(x),
            None => {
                let (x0, x1) = mesh.bounds_x()?;
                Ok(0.5 * (x0 + x1))
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Writes `csv` to `--csv` and the summary to stdout, or the CSV to stdout
/// and the summary to stderr.
fn emit_csv(common: &Common, csv: &str, summary: &str) -> Result<(), Error> {
    match &common.csv {
        Some(path) => {
            write_file(path, csv)?;
            println!("{summary}");
        }
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn cmd_verify(c: &Common) -> Result<Outcome, Error> {
    let mesh = c.source_mesh()?;
    let verification = verify_chain_with(&mesh, &c.options()?)?;
    let report = &verification.report;
    if let Some(path) = &c.report {
        write_file(path, &report.to_json())?;
    }
    if let Some(path) = &c.csv {
        write_file(path, &verification.profile.to_csv())?;
    }
    println!("{}", report.summary());
    for (name, v) in report.verdicts.all() {
        if !v.passed() {
            eprintln!("verdict {name} failed with margin {}", fmt17(v.margin));
        }
    }
    Ok(if report.verdicts.all_pass() { Outcome::Success } else { Outcome::VerdictFailed })
}

fn cmd_symmetrize(c: &Common) -> Result<Outcome, Error> {
    let output = c.output.as_ref().ok_or_else(|| Error::InvalidArgument("--output is required".into()))?;
    let format = format_for(output, c.format.as_deref())?;
    let oriented = c.oriented_mesh()?;
    let profile = build_profile(&oriented, c.slices)?;
    let revolved = revolve_mesh(&profile, c.segments)?;
    save_mesh(&revolved, output, format)?;
    let (v_in, v_out) = (oriented.volume()?, revolved.volume()?);
    let (s_in, s_out) = (oriented.surface_area(), revolved.surface_area());
    println!(
        "volume_in={} volume_out={} volume_delta={} area_in={} area_out={} area_delta={}",
        fmt17(v_in),
        fmt17(v_out),
        fmt17(v_out - v_in),
        fmt17(s_in),
        fmt17(s_out),
        fmt17(s_out - s_in)
    );
    Ok(Outcome::Success)
}

fn cmd_slice(c: &Common) -> Result<Outcome, Error> {
    let mesh = c.oriented_mesh()?;
    let x = c.section_x(&mesh)?;
    let section = slice_at(&mesh, x)?;
    let summary =
        format!("x={} loops={} Q={} U={}", fmt17(x), section.loops().len(), fmt17(section.area()), fmt17(section.perimeter()));
    emit_csv(c, &section.to_csv(), &summary)?;
    Ok(Outcome::Success)
}

fn cmd_segment2d(c: &Common) -> Result<Outcome, Error> {
    let mesh = c.oriented_mesh()?;
    let x = c.section_x(&mesh)?;
    let section = slice_at(&mesh, x)?;
    let trace = segment_trace(&chain_loops(&section))?;
    let mut summary = format!(
        "x={} U={} Q={} final_defect={} restarts={}",
        fmt17(x),
        fmt17(trace.total_length),
        fmt17(trace.enclosed_area),
        fmt17(trace.final_defect()),
        trace.restart_points.len()
    );
    if trace.worst_decrease() > 1e-9 * trace.total_length {
        let _ = write!(summary, " worst_decrease={}", fmt17(trace.worst_decrease()));
    }
    emit_csv(c, &trace.to_csv(), &summary)?;
    Ok(Outcome::Success)
}

fn cmd_shape(c: &Common) -> Result<Outcome, Error> {
    c.check_paths()?;
    let spec = c.shape_spec()?;
    let mesh: Mesh = generate(&spec)?;
    if let Some(path) = &c.output {
        save_mesh(&mesh, path, format_for(path, c.format.as_deref())?)?;
    }
    let reference = analytic_reference(&spec)?;
    println!(
        "shape={} faces={} S={} V={} S_exact={} V_exact={} quotient_exact={}{}",
        spec.label(),
        mesh.faces().len(),
        fmt17(mesh.surface_area()),
        fmt17(mesh.volume()?),
        fmt17(reference.s_exact),
        fmt17(reference.v_exact),
        fmt17(reference.quotient_exact),
        if reference.approximate { " (approximate S_exact)" } else { "" }
    );
    Ok(Outcome::Success)
}
