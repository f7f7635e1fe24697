//! `slitherkit`: command-line front end.
//!
//! Every subcommand prints a JSON report on stdout. Exit codes: 0 pass,
//! 1 violation, 2 inconclusive, 64 usage error, 65 bad input.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use slitherkit::circle_homeo::literal::{read_map, read_rep, rep_to_json};
use slitherkit::circle_homeo::random::random_pairs;
use slitherkit::currents::{
    eigenmeasure, growth_factor, intersection_number, linking_series, GeodesicCurrent, MonodromyAction,
    DEFAULT_DEPTH,
};
use slitherkit::hyperbolic::{genus2_fuchsian, FuchsianGroup};
use slitherkit::render::{render, write_svg, Figure, SceneConfig};
use slitherkit::report::upper_bound_status;
use slitherkit::rotation::enclosure::{DEFAULT_ITERS, DEFAULT_MAX_Q};
use slitherkit::rotation::harness::{milnor_wood_batch, verify_commutator_bound, verify_milnor_wood};
use slitherkit::rotation::probes::spacelike_probe;
use slitherkit::slither::{
    tangent_bundle_slithering, torus_closed_leaves, torus_slithering, torus_z_diameter, uniformity_probe,
    verify_bundle_automorphism, z_value, UniformityModel,
};
use slitherkit::suite;
use slitherkit::triples::{act_on_triple, geodesic_flow_triple, proper_discontinuity_probe, Triple, TripleBox};
use slitherkit::{classify, rotation_number, Error, Result, RotationOptions, Status, Word};

const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;

#[derive(Parser)]
#[command(name = "slitherkit", version, about = "Slitherings, rotation numbers and geodesic currents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation-number enclosure of a map literal.
    Rot {
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: u64,
        /// Largest denominator tried for exact certification.
        #[arg(long, default_value_t = DEFAULT_MAX_Q)]
        max_q: u64,
        #[arg(long)]
        no_certify: bool,
    },
    /// Space-like or time-like classification of a map literal.
    Classify { map: PathBuf },
    /// Inequality harnesses.
    #[command(subcommand)]
    Verify(Verify),
    /// Exploratory probes over words and models.
    #[command(subcommand)]
    Probe(Probe),
    /// Built-in Fuchsian groups.
    #[command(subcommand)]
    Fuchsian(Fuchsian),
    /// Built-in slithering models.
    #[command(subcommand)]
    Model(Model),
    /// z-value between the leaves with fiber coordinates r and t.
    #[command(allow_negative_numbers = true)]
    Z { r: f64, t: f64 },
    /// Ordered triples of circle points.
    #[command(subcommand)]
    Triple(TripleCmd),
    /// Geodesic currents: intersection, growth, eigenmeasures, linking.
    #[command(subcommand)]
    Current(Current),
    /// Write one of the figures as SVG.
    Render {
        #[arg(value_parser = parse_figure)]
        figure: Figure,
        #[arg(long)]
        leaves: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the acceptance suite, or the criteria listed in a manifest.
    VerifyAll {
        /// JSON file `{"criteria": [1, 2, ...]}`; all nine when omitted.
        manifest: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// c⁻²(x) < [a,b](x) < c²(x) on sample points.
    CommutatorBound {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Milnor-Wood bounds for products of commutators.
    MilnorWood {
        /// Representation file supplying the generators named by `--pairs`.
        rep: Option<PathBuf>,
        /// Generator pairs `a,b`; repeat for a product of commutators.
        #[arg(long, num_args = 1..)]
        pairs: Vec<String>,
        /// Check this many seeded random PL pairs instead.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = suite::SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: u64,
        /// Re-check the enclosures stored in an earlier report.
        #[arg(long, conflicts_with_all = ["rep", "random"])]
        from_report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Probe {
    /// Classify every reduced word up to a length.
    Spacelike {
        rep: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Count words moving a triple box onto itself.
    Convergence {
        rep: PathBuf,
        /// `u,s,p,r`; the default box is centered at (0, 1/3, 2/3) with radius 0.05.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long)]
        period_2pi: bool,
    },
    /// Holonomy images of a transverse arc.
    Uniformity {
        #[arg(long, value_enum)]
        model: ModelName,
        #[arg(long, default_value_t = 50.0)]
        budget: f64,
        #[arg(long, default_value_t = 0.1)]
        arc: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Torus,
    Anosov,
}

#[derive(Subcommand)]
enum Fuchsian {
    /// The genus-2 octagon group.
    Genus2 {
        /// Write the lifted generators as a representation file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Model {
    /// The torus slithering.
    Torus {
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 24)]
        samples: usize,
    },
    /// The tangent-bundle slithering of a hyperbolic surface.
    TangentBundle {
        #[arg(long, default_value = "genus2")]
        group: String,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum TripleCmd {
    /// Apply a word of a representation to a triple.
    Act {
        rep: PathBuf,
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
        #[arg(long)]
        period_2pi: bool,
    },
    /// Strip coordinates of a unit tangent vector in the disk.
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Direction in radians.
        #[arg(long, allow_hyphen_values = true)]
        dir: f64,
        #[arg(long)]
        period_2pi: bool,
    },
}

#[derive(Subcommand)]
enum Current {
    /// Intersection number of weighted classes, e.g. `--mu "a1*2,a1 b1"`.
    Intersect {
        /// Representation file of winding-zero Möbius lifts, or `genus2`.
        rep: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Growth factor of a torus current under a matrix.
    Growth {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1,1")]
        seed: String,
        #[arg(long, default_value_t = 40)]
        k: usize,
    },
    /// Weighted-average eigenmeasure.
    Eigen {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "1,0")]
        seed: String,
    },
    /// Linking series over a window of powers.
    Linking {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-4,4")]
        window: String,
    },
}

fn parse_figure(s: &str) -> std::result::Result<Figure, String> {
    s.parse::<Figure>().map_err(|e| e.to_string())
}

fn numbers<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>> {
    let v: Vec<T> = s
        .split(',')
        .map(|x| x.trim().parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("{what}: cannot read `{s}`")))?;
    if v.len() != n {
        return Err(Error::Parse(format!("{what}: expected {n} comma-separated values, got {}", v.len())));
    }
    Ok(v)
}

fn matrix(s: &str) -> Result<MonodromyAction> {
    let m: Vec<i64> = numbers(s, 4, "--matrix")?;
    MonodromyAction::linear([[m[0], m[1]], [m[2], m[3]]])
}

fn slope(s: &str, what: &str) -> Result<GeodesicCurrent> {
    let v: Vec<i64> = numbers(s, 2, what)?;
    Ok(GeodesicCurrent::torus_int(v[0], v[1]))
}

fn unit(period_2pi: bool) -> f64 {
    if period_2pi {
        TAU
    } else {
        1.0
    }
}

fn triple_json(t: &Triple, scale: f64) -> Value {
    json!({"u": t.u * scale, "s": t.s * scale, "p": t.p * scale})
}

fn group_from(source: &str) -> Result<FuchsianGroup> {
    if source == "genus2" {
        Ok(genus2_fuchsian())
    } else {
        FuchsianGroup::from_representation(&read_rep(Path::new(source))?)
    }
}

/// `"a1*2, a1 b1"` as weighted classes.
fn weighted_classes(group: &Arc<FuchsianGroup>, s: &str) -> Result<GeodesicCurrent> {
    let mut classes = Vec::new();
    for term in s.split(',') {
        let (w, x) = match term.split_once('*') {
            Some((w, x)) => {
                (w, x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("weight in `{term}`")))?)
            }
            None => (term, 1.0),
        };
        classes.push((Word::parse(w.trim())?, x));
    }
    GeodesicCurrent::surface(group.clone(), classes)
}

fn with_status(status: Status, mut body: Value) -> (Status, Value) {
    body["status"] = json!(status);
    (status, body)
}

fn recheck_report(path: &Path) -> Result<(Status, Value)> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    let bounds = |e: &Value, what: &str| -> Result<(f64, f64)> {
        match (e["lo"].as_f64(), e["hi"].as_f64()) {
            (Some(lo), Some(hi)) if lo <= hi => Ok((lo, hi)),
            _ => Err(Error::Parse(format!("{what}: enclosure needs lo <= hi"))),
        }
    };
    let two_sided = |(lo, hi): (f64, f64), b: f64, strict: bool| {
        upper_bound_status(lo, hi, b, strict).combine(upper_bound_status(-hi, -lo, b, strict))
    };
    let mut statuses = Vec::new();
    let mut findings = Vec::new();
    if let Some(n) = v["n"].as_u64() {
        let st = two_sided(bounds(&v["product"], "product")?, (n + 1) as f64, true);
        findings.push(json!({"check": format!("|r(product of {n})| < {}", n + 1), "status": st}));
        statuses.push(st);
    }
    for (i, c) in v["pairs"].as_array().into_iter().flatten().enumerate() {
        let d = two_sided(bounds(&c["delta_r"], "delta_r")?, 1.0, false);
        let comm = bounds(&c["commutator"], "commutator")?;
        let s = two_sided(comm, 1.0, false);
        findings.push(json!({"pair": i, "delta_r": d, "commutator": s}));
        statuses.extend([d, s]);
        if c.get("half_status").is_some() {
            let h = upper_bound_status(comm.0, comm.1, 0.5 + (comm.1 - comm.0), false);
            findings.push(json!({"pair": i, "half": h}));
            statuses.push(h);
        }
    }
    let recorded = v["violations"].as_array().map_or(0, Vec::len);
    if recorded > 0 {
        statuses.push(Status::Violation);
    }
    if statuses.is_empty() {
        return Err(Error::Parse("report holds no enclosures to check".into()));
    }
    let status: Status = statuses.into_iter().collect();
    let consistent = v.get("status").map_or(true, |s| s == &json!(status));
    Ok(with_status(
        status,
        json!({"command": "verify milnor-wood --from-report", "recorded_violations": recorded,
               "consistent_with_recorded_status": consistent, "findings": findings}),
    ))
}

fn milnor_wood(
    rep: Option<PathBuf>,
    pairs: Vec<String>,
    random: Option<usize>,
    seed: u64,
    iters: u64,
    from_report: Option<PathBuf>,
) -> Result<(Status, Value)> {
    if let Some(p) = from_report {
        return recheck_report(&p);
    }
    let opts = RotationOptions::iters(iters);
    if let Some(count) = random {
        let (report, checks) = milnor_wood_batch(&random_pairs(seed, count), opts);
        let status = report.status();
        let mut body = serde_json::to_value(&report)?;
        body["command"] = json!("verify milnor-wood --random");
        body["seed"] = json!(seed);
        body["pairs"] = serde_json::to_value(&checks)?;
        return Ok(with_status(status, body));
    }
    let rep = read_rep(&rep.ok_or_else(|| Error::Config("give a representation file, --random or --from-report".into()))?)?;
    if pairs.is_empty() {
        return Err(Error::Config("--pairs a,b is required with a representation file".into()));
    }
    let mut maps = Vec::new();
    for p in &pairs {
        let (a, b) = p.split_once(',').ok_or_else(|| Error::Parse(format!("pair `{p}` is not `a,b`")))?;
        maps.push((rep.evaluate(&Word::parse(a.trim())?)?, rep.evaluate(&Word::parse(b.trim())?)?));
    }
    let report = verify_milnor_wood(&maps, opts);
    let status = report.report.status();
    let mut body = serde_json::to_value(&report)?;
    body["command"] = json!("verify milnor-wood");
    Ok(with_status(status, body))
}

fn run(cmd: Command) -> Result<(Status, Value)> {
    match cmd {
        Command::Rot { map, iters, max_q, no_certify } => {
            let f = read_map(&map)?;
            let opts = RotationOptions { n_iter: iters, max_q, certify: !no_certify };
            let e = slitherkit::rotation::rotation_number_chain(std::slice::from_ref(&f), opts);
            Ok(with_status(Status::Pass, json!({"command": "rot", "enclosure": e, "width": e.width()})))
        }
        Command::Classify { map } => {
            let f = read_map(&map)?;
            let r = rotation_number(&f, DEFAULT_ITERS);
            Ok(with_status(Status::Pass, json!({"command": "classify", "class": classify(&f), "rotation": r})))
        }
        Command::Verify(Verify::CommutatorBound { a, b, c, samples }) => {
            let r = verify_commutator_bound(&read_map(&a)?, &read_map(&b)?, &read_map(&c)?, samples)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("verify commutator-bound");
            Ok(with_status(r.report.status(), body))
        }
        Command::Verify(Verify::MilnorWood { rep, pairs, random, seed, iters, from_report }) => {
            milnor_wood(rep, pairs, random, seed, iters, from_report)
        }
        Command::Probe(Probe::Spacelike { rep, max_len }) => {
            let r = spacelike_probe(&read_rep(&rep)?, max_len)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("probe spacelike");
            Ok(with_status(Status::Pass, body))
        }
        Command::Probe(Probe::Convergence { rep, bx, max_len, period_2pi }) => {
            let s = unit(period_2pi);
            let bx = match bx {
                None => TripleBox::default_box(),
                Some(b) => {
                    let v: Vec<f64> = numbers(&b, 4, "--box")?;
                    TripleBox::new(Triple::new(v[0] / s, v[1] / s, v[2] / s)?, v[3] / s)?
                }
            };
            let r = proper_discontinuity_probe(&read_rep(&rep)?, &bx, max_len);
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("probe convergence");
            body["box"] = json!({"center": triple_json(&bx.center, s), "radius": bx.radius * s});
            Ok(with_status(if r.stabilized { Status::Pass } else { Status::Inconclusive }, body))
        }
        Command::Probe(Probe::Uniformity { model, budget, arc }) => {
            let m = match model {
                ModelName::Torus => UniformityModel::TorusSlither,
                ModelName::Anosov => UniformityModel::LinearAnosovStable,
            };
            let r = uniformity_probe(m, arc, budget)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("probe uniformity");
            Ok(with_status(Status::Pass, body))
        }
        Command::Fuchsian(Fuchsian::Genus2 { emit }) => {
            let g = genus2_fuchsian();
            let rep = rep_to_json(&g.to_representation()?)?;
            if let Some(path) = &emit {
                std::fs::write(path, serde_json::to_string_pretty(&rep)?)?;
            }
            let winding = slitherkit::hyperbolic::relator_winding(&g)?;
            Ok(with_status(
                Status::Pass,
                json!({"command": "fuchsian genus2", "genus": g.genus, "relator": g.relator.to_string(),
                       "relator_winding": winding, "emitted": emit, "representation": rep}),
            ))
        }
        Command::Model(Model::Torus { verify, samples }) => {
            let m = torus_slithering();
            let mut body = json!({"command": "model torus", "model": m.name, "fiber_period": m.fiber_period,
                                  "closed_leaves": torus_closed_leaves(), "z_diameter": torus_z_diameter(16, 8)});
            let mut status = Status::Pass;
            if verify {
                let r = verify_bundle_automorphism(&m, samples);
                status = r.status;
                body["bundle"] = serde_json::to_value(&r)?;
            }
            Ok(with_status(status, body))
        }
        Command::Model(Model::TangentBundle { group, verify, samples }) => {
            let g = group_from(&group)?;
            let m = tangent_bundle_slithering(&g);
            let mut body = json!({"command": "model tangent-bundle", "model": m.name, "dim": m.dim});
            let mut status = Status::Pass;
            if verify {
                let r = verify_bundle_automorphism(&m, samples);
                status = r.status;
                body["bundle"] = serde_json::to_value(&r)?;
            }
            Ok(with_status(status, body))
        }
        Command::Z { r, t } => Ok(with_status(Status::Pass, json!({"command": "z", "r": r, "t": t, "z": z_value(r, t)}))),
        Command::Triple(TripleCmd::Act { rep, word, triple, period_2pi }) => {
            let s = unit(period_2pi);
            let v: Vec<f64> = numbers(&triple, 3, "--triple")?;
            let t = Triple::new(v[0] / s, v[1] / s, v[2] / s)?;
            let f = read_rep(&rep)?.evaluate(&Word::parse(&word)?)?;
            let image = act_on_triple(&f, &t);
            Ok(with_status(
                Status::Pass,
                json!({"command": "triple act", "word": word, "triple": triple_json(&t, s),
                       "image": triple_json(&image, s), "canonical": triple_json(&image.canonical(), s)}),
            ))
        }
        Command::Triple(TripleCmd::Flow { point, dir, period_2pi }) => {
            let p: Vec<f64> = numbers(&point, 2, "--point")?;
            let t = geodesic_flow_triple((p[0], p[1]), dir)?;
            Ok(with_status(
                Status::Pass,
                json!({"command": "triple flow", "point": p, "direction": dir,
                       "triple": triple_json(&t, unit(period_2pi))}),
            ))
        }
        Command::Current(Current::Intersect { rep, mu, nu, depth }) => {
            let g = Arc::new(group_from(&rep)?);
            let r = intersection_number(&weighted_classes(&g, &mu)?, &weighted_classes(&g, &nu)?, depth)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("current intersect");
            Ok(with_status(if r.converged { Status::Pass } else { Status::Inconclusive }, body))
        }
        Command::Current(Current::Growth { matrix: m, seed, k }) => {
            let r = growth_factor(&matrix(&m)?, &slope(&seed, "--seed")?, k)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("current growth");
            Ok(with_status(if r.converged { Status::Pass } else { Status::Inconclusive }, body))
        }
        Command::Current(Current::Eigen { matrix: m, n, seed }) => {
            let r = eigenmeasure(&matrix(&m)?, &slope(&seed, "--seed")?, n)?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("current eigen");
            Ok(with_status(Status::Pass, body))
        }
        Command::Current(Current::Linking { matrix: m, mu, nu, window }) => {
            let w: Vec<i64> = numbers(&window, 2, "--window")?;
            let r = linking_series(&slope(&mu, "--mu")?, &slope(&nu, "--nu")?, &matrix(&m)?, (w[0], w[1]))?;
            let mut body = serde_json::to_value(&r)?;
            body["command"] = json!("current linking");
            Ok(with_status(Status::Pass, body))
        }
        Command::Render { figure, leaves, seed, size, output } => {
            let leaves = leaves.unwrap_or(SceneConfig::default_for(figure).leaf_count);
            let cfg = SceneConfig::new(figure, leaves, seed, size)?;
            let svg = render(&cfg)?;
            write_svg(&output, &svg)?;
            Ok(with_status(
                Status::Pass,
                json!({"command": "render", "figure": figure.name(), "leaves": leaves, "seed": seed,
                       "size": size, "output": output, "bytes": svg.len()}),
            ))
        }
        Command::VerifyAll { manifest } => {
            let ids: Vec<u8> = match manifest {
                None => (1..=9).collect(),
                Some(p) => {
                    let v: Value = serde_json::from_str(&std::fs::read_to_string(p)?)?;
                    let ids = v["criteria"]
                        .as_array()
                        .ok_or_else(|| Error::Parse("manifest needs a `criteria` array".into()))?
                        .iter()
                        .map(|x| x.as_u64().filter(|i| (1..=9).contains(i)).map(|i| i as u8))
                        .collect::<Option<Vec<u8>>>()
                        .ok_or_else(|| Error::Parse("criteria are integers 1 to 9".into()))?;
                    ids
                }
            };
            // independent criteria run side by side; the report keeps manifest order
            let results: Vec<suite::Criterion> = std::thread::scope(|s| {
                let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || suite::run(id))).collect();
                handles.into_iter().map(|h| h.join().expect("criterion runner panicked")).collect()
            });
            for c in &results {
                eprintln!("{c}");
                for m in &c.measurements {
                    eprintln!("    {m}");
                }
            }
            let status: Status = results.iter().map(|c| c.status).collect();
            Ok(with_status(status, json!({"command": "verify-all", "criteria": results})))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok((status, body)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&body).expect("reports serialize"));
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
