//! `spdbound`: JSON front end to the boundary-geometry library.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spdbound::boundary::{self, BoundaryKind};
use spdbound::growth::parse_growth;
use spdbound::json::{self, *};
use spdbound::polytope::{self, StratumKind, WeylKind};
use spdbound::satake;
use spdbound::spd::{self, geodesic_eval, SpdMatrix};
use spdbound::urchin;
use spdbound::{pencil, xi, Error, Result};

#[derive(Parser)]
#[command(name = "spdbound", version, about = "Boundary geometry of positive definite matrices")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Stabilization tolerance for sequence limits.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Number of geodesic samples t = 0.5, 1, … fed to sequence algorithms.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Seed for randomized pivoting.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit Graphviz DOT instead of JSON (faces only).
    #[arg(long, global = true)]
    dot: bool,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitMethod {
    Inductive,
    Packets,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrataKind {
    Pass,
    Karp,
    Ass,
}

#[derive(Clone, Copy, ValueEnum)]
enum XiKind {
    Pass,
    Karp,
}

#[derive(Clone, Copy, ValueEnum)]
enum BKind {
    Ass,
    Karp,
    Martin,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complex distance between two points.
    Dist {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Directed geodesic from x through y.
    Geodesic {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Satake limit of a geodesic, or of a sequence of matrices.
    SatakeLimit {
        #[arg(long, conflicts_with = "seq")]
        geodesic: Option<String>,
        /// JSON array of matrices.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, value_enum, default_value = "inductive")]
        method: LimitMethod,
    },
    /// Classifies two geodesics into finite, solvable and null pencils.
    Pencil {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Strata of Pass_n, Karp_n, or faces of the associahedron.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: StrataKind,
        #[arg(long)]
        segmental: bool,
    },
    /// Face lattice of the closed Weyl chamber.
    Faces {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: StrataKind,
    },
    /// Exact limit of a polynomial growth vector.
    XiLimit {
        #[arg(long, value_enum)]
        kind: XiKind,
        /// Comma-separated polynomials in n.
        #[arg(long)]
        seq: String,
    },
    /// Boundary point of a geodesic, or of eigenvalue growth plus a frame limit.
    BoundaryPoint {
        #[arg(long, value_enum)]
        kind: BKind,
        #[arg(long, conflicts_with_all = ["eigen", "frame"])]
        geodesic: Option<String>,
        #[arg(long, requires = "frame")]
        eigen: Option<String>,
        /// Satake point of the frames.
        #[arg(long, requires = "eigen")]
        frame: Option<String>,
    },
    /// Factorization and sea-urchin limit of a meromorphic curve.
    Urchin {
        #[arg(long)]
        curve: String,
    },
}

/// Inline JSON when the argument starts with `{` or `[`, a file path otherwise.
fn load(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg))
        .map_err(|e| Error::Incompatible(format!("cannot read {arg}: {e}")))
}

fn matrix(arg: &str) -> Result<SpdMatrix> {
    json::from_str::<MatrixJson>(&load(arg)?)?.to_spd()
}

fn geodesic(arg: &str) -> Result<spd::Geodesic> {
    json::from_str::<GeodesicJson>(&load(arg)?)?.to_geodesic()
}

fn split_seq(s: &str) -> Vec<&str> {
    s.split(',').collect()
}

fn run(cli: &Cli) -> Result<String> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Dist { x, y } => {
            let d = spd::complex_distance(&matrix(x)?, &matrix(y)?)?;
            Ok(doc(c, &DistanceJson::from_distance(&d)))
        }
        Cmd::Geodesic { x, y } => {
            let g = spd::geodesic_through(&matrix(x)?, &matrix(y)?)?;
            Ok(doc(c, &GeodesicJson::from_geodesic(&g)))
        }
        Cmd::SatakeLimit { geodesic: g, seq, method } => {
            let point = match (g, seq) {
                (Some(g), _) if c.samples.is_none() => satake::geodesic_satake_limit(&geodesic(g)?),
                (g, seq) => {
                    let samples: Vec<SpdMatrix> = match (g, seq) {
                        (Some(g), _) => {
                            let g = geodesic(g)?;
                            (1..=c.samples.unwrap_or(128)).map(|k| geodesic_eval(&g, 0.5 * k as f64)).collect()
                        }
                        (None, Some(s)) => json::from_str::<Vec<MatrixJson>>(&load(s)?)?
                            .iter()
                            .map(MatrixJson::to_spd)
                            .collect::<Result<_>>()?,
                        (None, None) => return Err(Error::Incompatible("need --geodesic or --seq".into())),
                    };
                    match method {
                        LimitMethod::Inductive => satake::sequence_limit_inductive(&samples, c.tol)?,
                        LimitMethod::Packets => satake::sequence_limit_packets(&samples, c.tol)?,
                    }
                }
            };
            Ok(doc(c, &SatakeJson::from_point(&point)))
        }
        Cmd::Pencil { a, b } => {
            let (ga, gb) = (geodesic(a)?, geodesic(b)?);
            let finite = pencil::same_finite_pencil(&ga, &gb)?;
            let report = PencilReport {
                finite,
                solvable: pencil::same_solvable_pencil(&ga, &gb)?,
                null: pencil::same_null_pencil(&ga, &gb)?,
                distance_at_infinity: pencil::distance_at_infinity(&ga, &gb).ok().map(json::r12),
                null_data: [
                    PencilJson::from_null(&pencil::null_pencil_data(&ga, 0.0)),
                    PencilJson::from_null(&pencil::null_pencil_data(&gb, 0.0)),
                ],
            };
            Ok(doc(c, &report))
        }
        Cmd::Strata { n, kind, segmental } => {
            let strata: Vec<polytope::Stratum> = match kind {
                StrataKind::Pass => polytope::enumerate_tree_partitions(*n, *segmental, false)?
                    .iter()
                    .map(polytope::stratum_pass)
                    .collect(),
                StrataKind::Karp => {
                    polytope::enumerate_leveled(*n, *segmental)?.iter().map(polytope::stratum_karp).collect()
                }
                StrataKind::Ass => polytope::enumerate_tree_partitions(*n, true, true)?
                    .iter()
                    .map(|t| polytope::Stratum { kind: StratumKind::AssFace, components: 1, ..polytope::stratum_pass(t) })
                    .collect(),
            };
            Ok(doc(c, &strata.iter().map(StratumJson::from_stratum).collect::<Vec<_>>()))
        }
        Cmd::Faces { n, kind } => {
            let k = match kind {
                StrataKind::Pass => WeylKind::Pass,
                StrataKind::Karp => WeylKind::Karp,
                StrataKind::Ass => WeylKind::Ass,
            };
            let l = polytope::weyl_face_lattice(*n, k)?;
            if c.dot {
                Ok(l.to_dot().trim_end().to_string())
            } else {
                Ok(doc(c, &FaceLatticeJson::from_lattice(*n, &l)))
            }
        }
        Cmd::XiLimit { kind, seq } => {
            let v = parse_growth(&split_seq(seq))?;
            match kind {
                XiKind::Pass => Ok(doc(c, &PassLimitJson::from_limit(&xi::pass_limit(&v)))),
                XiKind::Karp => Ok(doc(c, &KarpLimitJson::from_limit(&xi::karp_limit(&v)))),
            }
        }
        Cmd::BoundaryPoint { kind, geodesic: g, eigen, frame } => {
            let kind = match kind {
                BKind::Ass => BoundaryKind::Ass,
                BKind::Karp => BoundaryKind::Karp,
                BKind::Martin => BoundaryKind::Martin,
            };
            let p = match (g, eigen, frame) {
                (Some(g), _, _) => boundary::geodesic_boundary_point(&geodesic(g)?, kind),
                (None, Some(e), Some(f)) => {
                    let v = parse_growth(&split_seq(e))?;
                    let sp = json::from_str::<SatakeJson>(&load(f)?)?.to_point()?;
                    boundary::sequence_boundary_point(&v, &sp, kind)?
                }
                _ => return Err(Error::Incompatible("need --geodesic, or --eigen with --frame".into())),
            };
            Ok(doc(c, &BoundaryPointJson::from_point(&p)))
        }
        Cmd::Urchin { curve } => {
            let input: CurveJson = json::from_str(&load(curve)?)?;
            let first = input.to_curve()?;
            let factor = |x: &urchin::MeromorphicCurve| match c.seed {
                Some(s) => urchin::factor_curve_seeded(x, s),
                None => urchin::factor_curve(x),
            };
            // listed coefficients are complete, so a short window may be widened
            let mut t = input.t;
            let mut res = factor(&first);
            while matches!(res, Err(Error::WindowExhausted(_))) && t < urchin::MAX_T {
                t = (2 * t).min(urchin::MAX_T);
                res = factor(&input.to_curve_with(t)?);
            }
            let f = res?;
            let limit = urchin::exact_limit(&f);
            let null = urchin::null_data_of(&f).ok();
            Ok(doc(c, &UrchinJson::new(&f, t, &limit, null.as_ref())))
        }
    }
}

#[derive(serde::Serialize)]
#[serde(rename_all = "camelCase")]
struct PencilReport {
    finite: bool,
    solvable: bool,
    null: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_at_infinity: Option<f64>,
    null_data: [PencilJson; 2],
}

fn doc<T: serde::Serialize>(c: &Common, v: &T) -> String {
    json::to_string(v, c.pretty)
}

fn emit(s: &str) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(s) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("spdbound: {e}");
            emit(&json::to_string(&ErrorJson::from_error(&e), cli.common.pretty));
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
