mod files;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affparam::bench::{roundtrip_error_stats, timing_run, write_csv, AffineSampler, Kernel, RNG_NAME};
use affparam::blend::{blend_params, Curve, PoseTrack};
use affparam::meshblend::{CompatibleSet, ShapeBlender};
use affparam::obj::{read_obj, write_obj};
use affparam::{phi, psi, psi_consistent, AffineParam12, Error as CoreError, HomAffine3};
use clap::{Parser, Subcommand, ValueEnum};

use files::TransformFile;

/// Why a command stopped. Each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable / malformed input files.
    Input(String),
    /// The numbers are outside a contract (det ≤ 0, degenerate faces, ...).
    Domain(CoreError),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        fn is_solver(e: &CoreError) -> bool {
            match e {
                CoreError::SolverNotConverged { .. } => true,
                CoreError::AtIndex { source, .. } => is_solver(source),
                _ => false,
            }
        }
        match self {
            Failure::Input(_) => 1,
            Failure::Domain(e) if is_solver(e) => 3,
            Failure::Domain(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Input(m) => f.write_str(m),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "affparam", version, about = "Blend and interpolate 3D affine transforms in a 12-parameter space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Rotation angles in [0, π].
    Principal,
    /// Rotation logarithms closest to a reference, so angles can grow past π.
    Consistent,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Linear,
    Hermite,
    Bspline,
}

impl From<CurveArg> for Curve {
    fn from(c: CurveArg) -> Self {
        match c {
            CurveArg::Linear => Curve::Linear,
            CurveArg::Hermite => Curve::CatmullRom,
            CurveArg::Bspline => Curve::BSpline,
        }
    }
}

#[derive(clap::Args)]
struct BranchArgs {
    /// Branch of the rotation logarithm. In consistent mode without a
    /// reference file each transform is taken relative to the previous one.
    #[arg(long, value_enum, default_value = "principal")]
    mode: Mode,
    /// Reference parameters, one per transform or a single one for all.
    /// Implies consistent mode.
    #[arg(long, value_name = "FILE")]
    consistent_with: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Matrices to parameters.
    Param {
        /// Transform file, or `-` for stdin.
        input: PathBuf,
        #[command(flatten)]
        branch: BranchArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parameters to matrices.
    Unparam {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weighted sum of the transforms in parameter space.
    Blend {
        input: PathBuf,
        /// One weight per transform, comma separated. Not normalised.
        #[arg(short, long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<f64>,
        #[command(flatten)]
        branch: BranchArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample a curve through the transforms of a track file.
    Interp {
        /// Transform file; its optional `times` give the knot times
        /// (default 0, 1, 2, ...).
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, value_enum, default_value = "hermite")]
        curve: CurveArg,
        #[arg(long, value_enum, default_value = "principal")]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Blend compatible triangle meshes through their per-face transforms.
    Meshblend {
        /// Rest mesh (OBJ).
        rest: PathBuf,
        /// Target meshes (OBJ) with the rest mesh's connectivity.
        #[arg(required = true)]
        targets: Vec<PathBuf>,
        /// One weight per target, comma separated.
        #[arg(short, long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Round-trip error and kernel timings as CSV.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Lower bound on det of the sampled linear parts.
        #[arg(long, default_value_t = 1e-3)]
        det_floor: f64,
        /// Timing repetitions per kernel; the fastest is kept.
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Input(format!("write failed: {e}"))
}

fn emit(doc: &TransformFile, output: Option<&Path>) -> Result<(), Failure> {
    let mut out = open_output(output)?;
    doc.write(&mut out).and_then(|_| out.flush()).map_err(io_failure)
}

/// Parameters of `transforms` on the requested branch.
fn params(transforms: &[HomAffine3], branch: &BranchArgs) -> Result<Vec<AffineParam12>, Failure> {
    if let Some(path) = &branch.consistent_with {
        return consistent_with(transforms, &read_params(path)?);
    }
    let mut out: Vec<AffineParam12> = Vec::with_capacity(transforms.len());
    for (i, a) in transforms.iter().enumerate() {
        let p = match (branch.mode, out.last()) {
            (Mode::Consistent, Some(prev)) => psi_consistent(a, prev),
            _ => psi(a),
        };
        out.push(p.map_err(|e| e.at(i))?);
    }
    Ok(out)
}

/// Parameters read from a reference file. Entries in matrix form go
/// through the principal logarithm.
fn read_params(path: &Path) -> Result<Vec<AffineParam12>, Failure> {
    let file = TransformFile::read(path)?;
    file.load()?
        .iter()
        .enumerate()
        .map(|(i, l)| match l {
            files::Loaded::Param(p) => Ok(*p),
            files::Loaded::Matrix(a) => psi(a).map_err(|e| e.at(i).into()),
        })
        .collect()
}

fn read_mesh(path: &Path) -> Result<affparam::meshblend::TriMesh, Failure> {
    let f = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    read_obj(BufReader::new(f)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Param {
            input,
            branch,
            output,
        } => {
            let transforms = TransformFile::read(&input)?.transforms()?;
            emit(&TransformFile::of_params(params(&transforms, &branch)?), output.as_deref())
        }
        Command::Unparam { input, output } => {
            let transforms = TransformFile::read(&input)?.transforms()?;
            emit(&TransformFile::of_matrices(transforms), output.as_deref())
        }
        Command::Blend {
            input,
            weights,
            branch,
            output,
        } => {
            let transforms = TransformFile::read(&input)?.transforms()?;
            if weights.len() != transforms.len() {
                return Err(CoreError::LengthMismatch {
                    what: "weights",
                    got: weights.len(),
                    expected: transforms.len(),
                }
                .into());
            }
            let b = phi(&blend_params(&params(&transforms, &branch)?, &weights))?;
            emit(&TransformFile::of_matrices([b]), output.as_deref())
        }
        Command::Interp {
            input,
            samples,
            curve,
            mode,
            output,
        } => {
            let file = TransformFile::read(&input)?;
            let transforms = file.transforms()?;
            let times = file
                .times
                .clone()
                .unwrap_or_else(|| (0..transforms.len()).map(|i| i as f64).collect());
            let track = PoseTrack::from_transforms(&transforms, times, mode == Mode::Consistent)?;
            if samples == 0 {
                return Err(Failure::Input("--samples must be at least 1".into()));
            }
            let (t0, t1) = (track.start(), track.end());
            let ts: Vec<f64> = (0..samples)
                .map(|k| match samples {
                    1 => t0,
                    _ if k == samples - 1 => t1,
                    _ => t0 + (t1 - t0) * k as f64 / (samples - 1) as f64,
                })
                .collect();
            let sampled = ts
                .iter()
                .map(|&t| track.sample(t, curve.into()).and_then(|p| phi(&p)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut doc = TransformFile::of_matrices(sampled);
            doc.times = Some(ts);
            emit(&doc, output.as_deref())
        }
        Command::Meshblend {
            rest,
            targets,
            weights,
            output,
        } => {
            let rest = read_mesh(&rest)?;
            let targets = targets.iter().map(|p| read_mesh(p)).collect::<Result<Vec<_>, _>>()?;
            let blender = ShapeBlender::new(CompatibleSet::new(rest, targets)?)?;
            let mesh = blender.blend(&weights)?.mesh;
            let mut out = open_output(output.as_deref())?;
            write_obj(&mut out, &mesh).and_then(|_| out.flush()).map_err(io_failure)
        }
        Command::Bench {
            n,
            seed,
            det_floor,
            repeats,
            output,
        } => {
            if n == 0 || repeats == 0 {
                return Err(Failure::Input("--n and --repeats must be positive".into()));
            }
            if !(det_floor >= 0.0) {
                return Err(Failure::Input("--det-floor must be non-negative".into()));
            }
            let mut sampler = AffineSampler::new(det_floor, seed);
            sampler.by_ref().take(n).for_each(drop);
            let mut reports = vec![roundtrip_error_stats(n, det_floor, seed)];
            reports.extend(timing_run(n, &Kernel::ALL, repeats, seed));
            let metadata = [
                ("rng", RNG_NAME.to_string()),
                ("seed", seed.to_string()),
                ("det_floor", det_floor.to_string()),
                ("acceptance_rate", sampler.acceptance_rate().to_string()),
            ];
            let mut out = open_output(output.as_deref())?;
            write_csv(&mut out, &reports, &metadata)
                .and_then(|_| out.flush())
                .map_err(io_failure)
        }
    }
}

/// `psi_consistent` against one reference per transform, or one for all.
fn consistent_with(transforms: &[HomAffine3], refs: &[AffineParam12]) -> Result<Vec<AffineParam12>, Failure> {
    if refs.len() != 1 && refs.len() != transforms.len() {
        return Err(CoreError::LengthMismatch {
            what: "reference file",
            got: refs.len(),
            expected: transforms.len(),
        }
        .into());
    }
    transforms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let r = if refs.len() == 1 { &refs[0] } else { &refs[i] };
            psi_consistent(a, r).map_err(|e| e.at(i).into())
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
