//! `sphere-planks` command line. Exit codes: 0 success / pass, 1 verification failure,
//! 2 invalid input.

mod output;

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use sphere_planks::body::{circumradius, inradius, make_lune_in_frame, octant, polar, ConvexBody};
use sphere_planks::covering::{check_covering, verify_antipodal_argument, verify_thm1, CoveringInstance, LuneFan};
use sphere_planks::error::GeometryError;
use sphere_planks::generate;
use sphere_planks::gnomonic::{check_projection_consistency, uf, UfMode};
use sphere_planks::io::{parse_angle, BodyFile, BodyTags, CoveringFile, FanFile, PolytopeFile};
use sphere_planks::linhart::{check_7_1, min_uf_search};
use sphere_planks::measure::{check_identity_2_1, default_samples, mean_width_mc, verify_thm2, volume_mc};
use sphere_planks::rng::StreamSeed;
use sphere_planks::sphere::UnitVector;
use sphere_planks::weight::WeightFunction;

use output::{Format, Output, ValueCell};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn io(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "sphere-planks", version, about = "Convex bodies on the unit sphere: radii, measures and covering bounds")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct RunConfig {
    /// Base seed for all sampling.
    #[arg(long, global = true, env = "SPHERE_PLANKS_SEED", default_value_t = 0)]
    seed: u64,
    /// Monte Carlo sample count (default: 10^6, 4·10^6 for n = 4).
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Expected dimension n of the input; checked against the file.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print the wall-clock time to stderr.
    #[arg(long, global = true)]
    timing: bool,
}

impl RunConfig {
    fn samples(&self, n: usize) -> u64 {
        self.samples.unwrap_or_else(|| default_samples(n))
    }

    fn seed(&self) -> StreamSeed {
        StreamSeed::new(self.seed)
    }

    fn check_dim(&self, found: usize) -> Result<(), Failure> {
        match self.dim {
            Some(n) if n != found => Err(Failure::Input(format!("--dim {n} but the input has dimension {found}"))),
            _ => Ok(()),
        }
    }

    fn need_dim(&self) -> Result<usize, Failure> {
        self.dim.ok_or_else(|| Failure::Input("--dim is required".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BodyKind {
    /// Mixed random family (hulls, intersections, lunes).
    Random,
    /// Random polytope in an open hemisphere.
    Polytope,
    /// Hull of random points in a cap.
    Hull,
    /// Intersection of random halfspaces.
    Halfspaces,
    Lune,
    Octant,
    /// Polytope inscribed in a cap about the last axis.
    Cap,
    /// Hemisphere about the last axis.
    Hemisphere,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    /// `f = (1 + t²)^{-(n+1)/2}`.
    Spherical,
    Constant,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, value_enum, default_value_t = WeightKind::Spherical)]
    weight: WeightKind,
    /// Value of the constant weight.
    #[arg(long, default_value_t = 1.0)]
    weight_value: f64,
}

impl WeightArgs {
    fn build(&self, n: usize) -> Result<WeightFunction, Failure> {
        Ok(match self.weight {
            WeightKind::Spherical => WeightFunction::spherical(n)?,
            WeightKind::Constant => WeightFunction::constant(self.weight_value)?,
        })
    }
}

fn angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Verb {
    /// Generate a body file.
    GenBody {
        #[arg(long, value_enum, default_value_t = BodyKind::Random)]
        kind: BodyKind,
        /// Cap radius for hull and cap bodies.
        #[arg(long, value_parser = angle_arg, default_value = "0.7")]
        rho: f64,
        /// Dihedral angle for lunes.
        #[arg(long, value_parser = angle_arg, default_value = "pi/2")]
        angle: f64,
        /// Number of vertices or halfspaces.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Generate a lune fan (a cover of the sphere).
    GenFan {
        /// Gaps between boundary angles, e.g. `pi,pi/2,pi/2`.
        #[arg(long, value_delimiter = ',', value_parser = angle_arg, conflicts_with = "equal")]
        gaps: Vec<f64>,
        /// Number of equal gaps.
        #[arg(long)]
        equal: Option<usize>,
        #[arg(long, value_parser = angle_arg, default_value = "0")]
        start: f64,
        /// Widen each lune by this angle on both sides.
        #[arg(long, value_parser = angle_arg, default_value = "0")]
        widen: f64,
    },
    /// Inradius and incenter.
    Inradius { file: PathBuf },
    /// Circumradius and circumcenter.
    Circumradius { file: PathBuf },
    /// Polar body.
    Polar { file: PathBuf },
    /// Monte Carlo volume.
    Volume { file: PathBuf },
    /// Monte Carlo spherical mean width.
    Meanwidth { file: PathBuf },
    /// Weighted hyperplane measure of a Euclidean polytope.
    Uf {
        file: PathBuf,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Covering bound for a cover file.
    VerifyThm1 {
        file: PathBuf,
        /// Also run the antipodal-cap route.
        #[arg(long)]
        antipodal: bool,
    },
    /// Volume-inradius inequality.
    VerifyThm2 { file: PathBuf },
    /// Polarity identity between volume of the polar and mean width.
    #[command(name = "verify-2-1")]
    Verify21 { file: PathBuf },
    /// Segment minimality search over random sets with a prescribed circumball.
    VerifyProp {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Normal-cone averages at the vertices of an inscribed simplex.
    VerifyLinhart {
        file: PathBuf,
        /// Single vertex (default: all).
        #[arg(long)]
        vertex: Option<usize>,
        #[command(flatten)]
        weight: WeightArgs,
    },
    /// Agreement of the sphere-side and projected-side mean width.
    VerifyProjection { file: PathBuf },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T, GeometryError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_body(path: &Path, run: &RunConfig) -> Result<(ConvexBody, Option<f64>), Failure> {
    let file: BodyFile = read_json(path)?;
    run.check_dim(file.dim)?;
    let body = with_path(path, file.to_body())?;
    let angle = with_path(path, file.lune_angle())?;
    Ok((body, angle))
}

fn load_real_body(path: &Path, run: &RunConfig) -> Result<ConvexBody, Failure> {
    let (body, _) = load_body(path, run)?;
    if !body.is_body() {
        return Err(Failure::Input(format!("{}: set has no interior points", path.display())));
    }
    Ok(body)
}

fn load_cover(path: &Path, run: &RunConfig) -> Result<CoveringInstance, Failure> {
    let file: CoveringFile = read_json(path)?;
    run.check_dim(file.dim)?;
    with_path(path, file.to_instance())
}

fn load_polytope(path: &Path, run: &RunConfig) -> Result<PolytopeFile, Failure> {
    let file: PolytopeFile = read_json(path)?;
    run.check_dim(file.dim)?;
    Ok(file)
}

fn document<T: serde::Serialize>(v: &T) -> Result<Output, Failure> {
    serde_json::to_value(v)
        .map(Output::Document)
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn gen_body(run: &RunConfig, kind: BodyKind, rho: f64, angle: f64, count: Option<usize>) -> Result<Output, Failure> {
    let n = run.need_dim()?;
    let mut rng = run.seed().rng();
    let top = UnitVector::axis(n + 1, n);
    let mut tags = BodyTags {
        seed: Some(run.seed),
        construction: Some(format!("{kind:?}").to_lowercase()),
        ..BodyTags::default()
    };
    let body = match kind {
        BodyKind::Random => generate::random_body(n, &mut rng)?,
        BodyKind::Polytope => generate::random_polytope(n, &mut rng)?,
        BodyKind::Hull => generate::random_v_body(&top, rho, count.unwrap_or(n + 4), &mut rng)?,
        BodyKind::Halfspaces => generate::random_h_body(&top, rho, count.unwrap_or(n + 4), &mut rng)?,
        BodyKind::Lune => {
            let (ridge, (p, q)) = sphere_planks::covering::standard_frame(n)?;
            tags.lune_angle = Some(angle.into());
            make_lune_in_frame(&ridge, (&p, &q), 0.0, angle)?.1
        }
        BodyKind::Octant => octant(n)?,
        BodyKind::Cap => generate::polytopal_cap(&top, rho, count.unwrap_or(64))?,
        BodyKind::Hemisphere => sphere_planks::body::hemisphere(top.antipode())?,
    };
    document(&BodyFile::from_body(&body).with_tags(tags))
}

fn gen_fan(run: &RunConfig, gaps: &[f64], equal: Option<usize>, start: f64, widen: f64) -> Result<Output, Failure> {
    let n = run.need_dim()?;
    let fan = match (gaps.is_empty(), equal) {
        (false, None) => LuneFan::from_gaps(n, start, gaps)?,
        (true, Some(m)) => {
            let angles: Vec<f64> = (0..=m).map(|i| start + 2.0 * PI * i as f64 / m as f64).collect();
            let (ridge, plane) = sphere_planks::covering::standard_frame(n)?;
            if m < 2 {
                return Err(Failure::Input("--equal needs at least 2 lunes".into()));
            }
            LuneFan::new(ridge, plane, angles)?
        }
        _ => return Err(Failure::Input("give exactly one of --gaps and --equal".into())),
    };
    let fan = fan.widened(widen)?;
    document(&CoveringFile {
        dim: n,
        ball: None,
        fan: Some(FanFile::from_fan(&fan)),
        bodies: Vec::new(),
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let run = &cli.run;
    let seed = run.seed();
    Ok(match &cli.verb {
        Verb::GenBody { kind, rho, angle, count } => gen_body(run, *kind, *rho, *angle, *count)?,
        Verb::GenFan { gaps, equal, start, widen } => gen_fan(run, gaps, *equal, *start, *widen)?,
        Verb::Inradius { file } => {
            let body = load_real_body(file, run)?;
            let ib = inradius(&body)?;
            Output::Values(vec![
                ("inradius", ValueCell::Real(ib.radius)),
                ("incenter", ValueCell::Vector(ib.center.as_slice().to_vec())),
            ])
        }
        Verb::Circumradius { file } => {
            let (body, _) = load_body(file, run)?;
            let cb = circumradius(&body);
            Output::Values(vec![
                ("circumradius", ValueCell::Real(cb.radius)),
                (
                    "circumcenter",
                    match cb.center {
                        Some(c) => ValueCell::Vector(c.as_slice().to_vec()),
                        None => ValueCell::Missing(None),
                    },
                ),
                ("hemisphere", ValueCell::Flag(cb.hemisphere)),
            ])
        }
        Verb::Polar { file } => {
            let (body, _) = load_body(file, run)?;
            let p = polar(&body);
            let tags = BodyTags {
                construction: Some(if p.is_body() { "polar" } else { "polar-degenerate" }.into()),
                ..BodyTags::default()
            };
            document(&BodyFile::from_body(&p).with_tags(tags))?
        }
        Verb::Volume { file } => {
            let (body, _) = load_body(file, run)?;
            Output::Estimate(volume_mc(&body, run.samples(body.dim()), seed)?)
        }
        Verb::Meanwidth { file } => {
            let (body, _) = load_body(file, run)?;
            Output::Estimate(mean_width_mc(&body, run.samples(body.dim()), seed)?)
        }
        Verb::Uf { file, weight } => {
            let poly = load_polytope(file, run)?;
            let set = with_path(file, poly.to_polytope())?;
            let w = weight.build(poly.dim)?;
            let mode = UfMode::Auto {
                samples: run.samples(poly.dim),
                seed,
            };
            Output::Estimate(uf(&set, &w, mode)?)
        }
        Verb::VerifyThm1 { file, antipodal } => {
            let inst = load_cover(file, run)?;
            let samples = run.samples(inst.dim());
            let mut reports = match verify_thm1(&inst, samples, seed) {
                Ok(r) => vec![r],
                // refuse the bound and show the failing cover check
                Err(GeometryError::NotACover(_)) => vec![check_covering(&inst, samples, seed.substream(0))],
                Err(e) => return Err(e.into()),
            };
            if *antipodal && reports[0].pass {
                reports.push(verify_antipodal_argument(&inst, samples, seed)?);
            }
            Output::Reports(reports)
        }
        Verb::VerifyThm2 { file } => {
            let body = load_real_body(file, run)?;
            Output::Reports(vec![verify_thm2(&body, run.samples(body.dim()), seed)?])
        }
        Verb::Verify21 { file } => {
            let body = load_real_body(file, run)?;
            Output::Reports(vec![check_identity_2_1(&body, run.samples(body.dim()), seed)?])
        }
        Verb::VerifyProp { radius, trials, weight } => {
            let n = run.need_dim()?;
            let w = weight.build(n)?;
            Output::Reports(vec![min_uf_search(n, *radius, &w, *trials, run.samples(n), seed)?])
        }
        Verb::VerifyLinhart { file, vertex, weight } => {
            let poly = load_polytope(file, run)?;
            let s = with_path(file, poly.to_simplex())?;
            let w = weight.build(poly.dim)?;
            let samples = run.samples(poly.dim);
            let vertices: Vec<usize> = match vertex {
                Some(j) => vec![*j],
                None => (0..s.vertices().len()).collect(),
            };
            let reports = vertices
                .into_iter()
                .map(|j| check_7_1(&s, j, &w, samples, seed.substream(j as u64)))
                .collect::<Result<Vec<_>, _>>()?;
            Output::Reports(reports)
        }
        Verb::VerifyProjection { file } => {
            let body = load_real_body(file, run)?;
            Output::Reports(vec![check_projection_consistency(&body, run.samples(body.dim()), seed)?])
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.run.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let result = run(&cli).and_then(|out| {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        out.write(cli.run.format, &mut lock)?;
        lock.flush().map_err(Failure::io)?;
        Ok(out.passed())
    });
    if cli.run.timing {
        eprintln!("wall-clock: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
