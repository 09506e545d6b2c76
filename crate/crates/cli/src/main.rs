use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pimage::datasets::{self, LtmParams, ShapeClass, GENERATOR};
use pimage::filtration::{cubical_sublevel, persistence, rips_persistence};
use pimage::image::render;
use pimage::io;
use pimage::metrics::{bottleneck, build_distance_matrix, vector_distance, wasserstein, Norm, Provenance};
use pimage::ml::{clustering_accuracy, kmedoids, parameter_sweep, Clustering, PipelineConfig};
use pimage::stability::{verify_stability, StabilityRun};
use pimage::{ImageSpec, PersistenceDiagram};

#[derive(Parser)]
#[command(name = "pimage", version, about = "Persistent homology, persistence images and diagram metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persistence diagrams of a point cloud (Rips) or grid (cubical sublevel).
    Persist(PersistArgs),
    /// Persistence images of diagram files on one shared grid.
    Image(ImageArgs),
    /// Pairwise distance matrix over a directory of diagrams or images.
    Distmat(DistmatArgs),
    /// Randomized check of the stability bounds; exits 1 on any violation.
    VerifyStability(VerifyArgs),
    /// Synthetic point clouds with a manifest.
    Generate(GenerateArgs),
    /// K-medoids on a distance matrix.
    Cluster(ClusterArgs),
    /// Classification accuracy over resolutions and kernel widths.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Rips,
    Cubical,
}

#[derive(Parser)]
struct PersistArgs {
    /// Point-cloud CSV (rips) or grid CSV (cubical).
    input: PathBuf,
    #[arg(long, value_enum, default_value = "rips")]
    mode: Mode,
    /// Highest homological dimension, 0 or 1.
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// Largest Rips scale; defaults to the cloud diameter.
    #[arg(long)]
    max_scale: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Output file stem; defaults to the input stem.
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Parser)]
struct ImageArgs {
    /// Diagram CSV files; all share one grid.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Pixels per side (or pixel count for one-dimensional images).
    #[arg(long, default_value_t = 20)]
    resolution: usize,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    /// Ramp weighting parameter; defaults to the largest persistence.
    #[arg(long)]
    b: Option<f64>,
    /// Images over persistence only, for diagrams with a common birth.
    #[arg(long)]
    one_dimensional: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Representation {
    Pd,
    Pi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    L1,
    L2,
    Linf,
    W1,
    W2,
    Bottleneck,
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::L1 => "l1",
            Metric::L2 => "l2",
            Metric::Linf => "linf",
            Metric::W1 => "w1",
            Metric::W2 => "w2",
            Metric::Bottleneck => "bottleneck",
        }
    }
}

#[derive(Parser)]
struct DistmatArgs {
    /// Directory of diagram CSVs (pd) or image CSVs with JSON sidecars (pi).
    input_dir: PathBuf,
    #[arg(long, value_enum)]
    representation: Representation,
    #[arg(long, value_enum)]
    metric: Metric,
    /// Only use diagrams or images of this homological dimension.
    #[arg(long)]
    hom_dim: Option<usize>,
    /// Output matrix CSV; provenance goes next to it as JSON.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Parser)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    resolution: usize,
    #[arg(long, default_value_t = 10)]
    max_points: usize,
    /// Fraction of pairs that are small perturbations of one diagram.
    #[arg(long, default_value_t = 0.0)]
    perturbed: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dataset {
    Shapes,
    Ltm,
}

#[derive(Parser)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    dataset: Dataset,
    /// Clouds per shape class, or orbits per twist parameter.
    #[arg(long, default_value_t = 25)]
    per_class: usize,
    /// Points per cloud; orbits are subsampled to this size.
    #[arg(long, default_value_t = 500)]
    points: usize,
    /// Standard deviation of the Gaussian noise on each coordinate (shapes).
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Twist parameters (ltm).
    #[arg(long, value_delimiter = ',', default_values_t = datasets::LTM_RS)]
    r: Vec<f64>,
    /// Map iterations per orbit (ltm).
    #[arg(long, default_value_t = datasets::LTM_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Parser)]
struct ClusterArgs {
    /// Distance-matrix CSV as written by `distmat`.
    matrix: PathBuf,
    /// One label per line, overriding the labels in the matrix.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the clustering JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Parser)]
struct SweepArgs {
    /// Directory of diagram CSVs.
    input_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    hom_dim: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![10, 20, 40])]
    resolutions: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.05, 0.1, 0.2])]
    sigmas: Vec<f64>,
    #[arg(long, default_value = "l2")]
    norm: Norm,
    #[arg(long, default_value_t = 6)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn file_stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .with_context(|| format!("{} has no usable file name", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// CSV files in `dir`, sorted by name, excluding JSON sidecars.
fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "csv"));
    files.sort();
    Ok(files)
}

/// Diagram files in `dir` of the given dimension, with their class labels.
fn load_diagrams(dir: &Path, hom_dim: Option<usize>) -> Result<(Vec<PersistenceDiagram>, Vec<String>)> {
    let mut diagrams = Vec::new();
    let mut labels = Vec::new();
    for p in csv_files(dir)? {
        let Some(k) = io::hom_dim_from_path(&p) else { continue };
        if hom_dim.is_some_and(|h| h != k) {
            continue;
        }
        diagrams.push(io::read_diagram(&p).with_context(|| format!("reading {}", p.display()))?);
        labels.push(io::class_label(&file_stem(&p)?).to_string());
    }
    if diagrams.is_empty() {
        bail!("no diagram files found in {}", dir.display());
    }
    Ok((diagrams, labels))
}

fn persist(args: PersistArgs) -> Result<()> {
    if args.max_dim > 1 {
        bail!("--max-dim must be 0 or 1");
    }
    let diagrams = match args.mode {
        Mode::Rips => {
            let cloud = io::read_cloud(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
            rips_persistence(&cloud, args.max_dim, args.max_scale)?
        }
        Mode::Cubical => {
            if args.max_scale.is_some() {
                bail!("--max-scale applies to rips mode only");
            }
            let grid = io::read_grid(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
            persistence(&cubical_sublevel(&grid)?, args.max_dim)?
        }
    };
    let stem = match args.stem {
        Some(s) => s,
        None => file_stem(&args.input)?,
    };
    fs::create_dir_all(&args.out_dir)?;
    for d in &diagrams {
        let path = io::diagram_path(&args.out_dir, &stem, d.hom_dim());
        io::write_diagram(&path, d)?;
        println!(
            "{}: {} points, {} infinite dropped",
            path.display(),
            d.len(),
            d.dropped_infinite()
        );
    }
    Ok(())
}

fn image(args: ImageArgs) -> Result<()> {
    let diagrams = args
        .inputs
        .iter()
        .map(|p| io::read_diagram(p).with_context(|| format!("reading {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let (bounds, max_pers) = datasets::shared_image_bounds(&diagrams, args.sigma)?;
    let b = args.b.unwrap_or(max_pers);
    let spec = if args.one_dimensional {
        ImageSpec::one_dimensional(args.resolution, args.sigma, b, bounds.pers_min, bounds.pers_max)?
    } else {
        ImageSpec::new((args.resolution, args.resolution), args.sigma, b, bounds)?
    };
    fs::create_dir_all(&args.out_dir)?;
    for (p, d) in args.inputs.iter().zip(&diagrams) {
        let img = render(d, &spec).with_context(|| format!("imaging {}", p.display()))?;
        let out = args.out_dir.join(format!("{}.csv", file_stem(p)?));
        if fs::canonicalize(&out).ok() == Some(fs::canonicalize(p)?) {
            bail!("image output {} would overwrite its input; pass a different --out-dir", out.display());
        }
        io::write_image(&out, &img)?;
        println!("{}", out.display());
    }
    Ok(())
}

fn distmat(args: DistmatArgs) -> Result<()> {
    let metric = args.metric;
    let matrix = match args.representation {
        Representation::Pd => {
            let p = match metric {
                Metric::W1 => 1.0,
                Metric::W2 => 2.0,
                Metric::Bottleneck => f64::INFINITY,
                _ => bail!("diagrams take --metric w1, w2 or bottleneck"),
            };
            let (diagrams, labels) = load_diagrams(&args.input_dir, args.hom_dim)?;
            let mut prov = Provenance::new("pd", metric.name());
            if let Some(k) = args.hom_dim {
                prov = prov.with("hom_dim", k);
            }
            build_distance_matrix(&diagrams, labels, |a, b| {
                Ok(if p.is_infinite() { bottleneck(a, b)?.0 } else { wasserstein(a, b, p)?.0 })
            }, prov)?
        }
        Representation::Pi => {
            let norm = match metric {
                Metric::L1 => Norm::L1,
                Metric::L2 => Norm::L2,
                Metric::Linf => Norm::Linf,
                _ => bail!("images take --metric l1, l2 or linf"),
            };
            let mut images = Vec::new();
            let mut labels = Vec::new();
            for p in csv_files(&args.input_dir)? {
                if !io::sidecar_path(&p).exists() {
                    continue;
                }
                let img = io::read_image(&p).with_context(|| format!("reading {}", p.display()))?;
                if args.hom_dim.is_some_and(|k| k != img.hom_dim()) {
                    continue;
                }
                labels.push(io::class_label(&file_stem(&p)?).to_string());
                images.push(img);
            }
            let Some(first) = images.first() else {
                bail!("no image files found in {}", args.input_dir.display());
            };
            if let Some(other) = images.iter().find(|i| i.spec() != first.spec()) {
                bail!(
                    "images were made with different specs ({:?} vs {:?}); distances need a shared grid",
                    first.spec().resolution,
                    other.spec().resolution
                );
            }
            let spec = first.spec().clone();
            let mut prov = Provenance::new("pi", norm.to_string())
                .with("sigma", spec.sigma())
                .with("resolution", vec![spec.resolution.0, spec.resolution.1]);
            if let Some(b) = spec.weight_ceiling_b() {
                prov = prov.with("b", b);
            }
            build_distance_matrix(&images, labels, |a, b| Ok(vector_distance(a.pixels(), b.pixels(), norm)?), prov)?
        }
    };
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    io::write_distance_matrix(&args.out, &matrix)?;
    println!("{}: {} x {} ({})", args.out.display(), matrix.len(), matrix.len(), metric.name());
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let report = verify_stability(&StabilityRun {
        pairs: args.pairs,
        sigma: args.sigma,
        b: args.b,
        seed: args.seed,
        resolution: args.resolution,
        max_points: args.max_points,
        perturbed_fraction: args.perturbed,
    })?;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    if report.violations() > 0 {
        eprintln!("{} bound violations", report.violations());
    }
    Ok(report.violations() == 0)
}

fn generate(args: GenerateArgs) -> Result<()> {
    let (clouds, parameters) = match args.dataset {
        Dataset::Shapes => (
            datasets::shape_dataset(args.per_class, args.points, args.noise, args.seed)?,
            serde_json::json!({
                "per_class": args.per_class,
                "points": args.points,
                "noise": args.noise,
                "classes": ShapeClass::ALL.iter().map(|c| c.name()).collect::<Vec<_>>(),
            }),
        ),
        Dataset::Ltm => {
            for &r in &args.r {
                LtmParams::new(r, args.iterations, 0)?;
            }
            (
                datasets::ltm_dataset(&args.r, args.per_class, args.iterations, args.points, args.seed)?,
                serde_json::json!({
                    "per_class": args.per_class,
                    "points": args.points,
                    "iterations": args.iterations,
                    "r": args.r,
                }),
            )
        }
    };
    fs::create_dir_all(&args.out_dir)?;
    let mut entries = Vec::with_capacity(clouds.len());
    let mut counters = std::collections::HashMap::<String, usize>::new();
    for (i, cloud) in clouds.iter().enumerate() {
        let label = cloud.label().unwrap_or("cloud").to_string();
        let n = counters.entry(label.clone()).or_default();
        let file = format!("{label}_{n:03}.csv");
        *n += 1;
        io::write_cloud(&args.out_dir.join(&file), cloud)?;
        entries.push(io::ManifestEntry {
            file,
            label,
            points: cloud.len(),
            seed: instance_seed(args.seed, i, args.per_class),
        });
    }
    let serde_json::Value::Object(parameters) = parameters else { unreachable!() };
    let manifest = io::Manifest {
        dataset: match args.dataset {
            Dataset::Shapes => "shapes",
            Dataset::Ltm => "ltm",
        }
        .to_string(),
        generator: GENERATOR.to_string(),
        seed: args.seed,
        parameters,
        entries,
    };
    let path = args.out_dir.join("manifest.json");
    io::write_manifest(&path, &manifest)?;
    println!("{} clouds, manifest {}", clouds.len(), path.display());
    Ok(())
}

/// Seed used for instance `i` by the batch generators.
fn instance_seed(seed: u64, i: usize, per_class: usize) -> u64 {
    let (class, k) = (i / per_class, i % per_class);
    datasets::mix_seed(datasets::mix_seed(seed, class as u64), k as u64)
}

#[derive(Serialize)]
struct ClusterOutput<'a> {
    k: usize,
    restarts: usize,
    seed: u64,
    accuracy: f64,
    labels: &'a [String],
    clustering: &'a Clustering,
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let matrix = io::read_distance_matrix(&args.matrix).with_context(|| format!("reading {}", args.matrix.display()))?;
    let labels: Vec<String> = match &args.labels {
        Some(p) => fs::read_to_string(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
        None => matrix.labels().to_vec(),
    };
    let c = kmedoids(&matrix, args.k, args.restarts, args.seed)?;
    let accuracy = clustering_accuracy(&c, &labels)?;
    let out = ClusterOutput {
        k: args.k,
        restarts: args.restarts,
        seed: args.seed,
        accuracy,
        labels: &labels,
        clustering: &c,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    eprintln!("accuracy {accuracy:.4}, score {:.6}", c.score);
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let (diagrams, labels) = load_diagrams(&args.input_dir, Some(args.hom_dim))?;
    let cfg = PipelineConfig {
        norm: args.norm,
        k: args.k,
        restarts: args.restarts,
        seed: args.seed,
    };
    let cells = parameter_sweep(&diagrams, &labels, &args.resolutions, &args.sigmas, &cfg)?;
    let mut text = String::from("resolution,sigma,accuracy,score\n");
    for c in cells {
        text.push_str(&format!("{},{},{},{}\n", c.resolution, c.sigma, c.accuracy, c.score));
    }
    emit(&text, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Persist(a) => persist(a).map(|_| true),
        Command::Image(a) => image(a).map(|_| true),
        Command::Distmat(a) => distmat(a).map(|_| true),
        Command::VerifyStability(a) => verify(a),
        Command::Generate(a) => generate(a).map(|_| true),
        Command::Cluster(a) => cluster(a).map(|_| true),
        Command::Sweep(a) => sweep(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
