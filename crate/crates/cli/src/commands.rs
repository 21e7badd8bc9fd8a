//! One function per subcommand. Each returns the bytes destined for stdout.

use std::path::{Path, PathBuf};

use cone_quantile_core::galois::{closure_report, inf_extension, set_rank};
use cone_quantile_core::random_set::{block_draws, block_sizes, capacity_block, estimate_from_hits, test_set_values};
use cone_quantile_core::{
    CompactTestSet, ConeCdf, DistributionModel, GenSet, PhiComparison, ProbeGrid, QuantileFn, Rect, SetFamily,
    Vector,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_bbox, parse_levels, Cli, DataArgs, ModelArgs, RunConfig};
use crate::error::{CliError, CliResult, Field};
use crate::input::{load_model, parse_cone, read_genset, read_points};
use crate::output::{emit, svg, to_json, write_file, Envelope, RegionJson};

struct Loaded {
    cdf: ConeCdf,
    config: RunConfig,
}

fn load(command: &'static str, cli: &Cli, args: &ModelArgs) -> CliResult<Loaded> {
    let mut config = RunConfig::new(command, cli)?;
    let (model, echo) = load_model(&args.data)?;
    let cone = parse_cone(&args.cone, model.dim(), cli.tol)?;
    config.model = Some(echo);
    config.cone = Some(args.cone.clone());
    let cdf = ConeCdf::new(model, cone, cli.resolution).field("cone")?;
    Ok(Loaded { cdf, config })
}

#[derive(Serialize)]
struct CdfRecord {
    point: Vec<f64>,
    value: f64,
    argmin_direction: Vec<f64>,
}

fn evaluate(cdf: &ConeCdf, points: &[Vector]) -> CliResult<Vec<CdfRecord>> {
    points
        .par_iter()
        .map(|z| {
            let v = cdf.lower_cdf_at(z).field("points")?;
            Ok(CdfRecord {
                point: z.to_vec(),
                value: v.value,
                argmin_direction: v.direction.to_vec(),
            })
        })
        .collect()
}

pub fn cdf(cli: &Cli, model: &ModelArgs, points: &Path, out: Option<&PathBuf>) -> CliResult<Vec<u8>> {
    let Loaded { cdf, mut config } = load("cdf", cli, model)?;
    config.input("points", points);
    config.output("out", out);
    let pts = read_points(points, "points", cdf.dim())?;
    let results = evaluate(&cdf, &pts)?;
    emit(to_json(&Envelope { config: &config, results })?, out)
}

pub fn depth(cli: &Cli, data: &DataArgs, points: &Path, out: Option<&PathBuf>) -> CliResult<Vec<u8>> {
    let mut config = RunConfig::new("depth", cli)?;
    let (model, echo) = load_model(data)?;
    config.model = Some(echo);
    config.cone = Some("zero".into());
    config.input("points", points);
    config.output("out", out);
    let cdf = ConeCdf::tukey(model, cli.resolution).field("data")?;
    let pts = read_points(points, "points", cdf.dim())?;
    let results = evaluate(&cdf, &pts)?;
    emit(to_json(&Envelope { config: &config, results })?, out)
}

/// Planar clip box: explicit, or the probe box around the model.
fn planar_box(model: &DistributionModel, extra: &[Vector], bbox: Option<[f64; 4]>) -> CliResult<Option<Rect>> {
    if model.dim() != 2 {
        return match bbox {
            Some(_) => Err(CliError::input("bbox", "only planar data can be clipped")),
            None => Ok(None),
        };
    }
    match bbox {
        Some([a, b, c, d]) => Ok(Some(Rect::new(a, b, c, d).field("bbox")?)),
        None => Ok(ProbeGrid::around(model, extra, 2).field("bbox")?.rect()),
    }
}

pub struct QuantileArgs<'a> {
    pub model: &'a ModelArgs,
    pub levels: &'a [f64],
    pub bbox: Option<&'a str>,
    pub svg: Option<&'a PathBuf>,
    pub json: Option<&'a PathBuf>,
}

pub fn quantile(cli: &Cli, a: QuantileArgs<'_>) -> CliResult<Vec<u8>> {
    let Loaded { cdf, mut config } = load("quantile", cli, a.model)?;
    config.p = parse_levels(a.levels)?;
    let bbox = a.bbox.map(parse_bbox).transpose()?;
    config.bbox = bbox;
    config.output("svg", a.svg);
    config.output("json", a.json);
    if a.svg.is_some() && cdf.dim() != 2 {
        return Err(CliError::input("svg", "only planar data can be drawn"));
    }
    let rect = planar_box(cdf.model(), &[], bbox)?;
    let q = QuantileFn::new(cdf);
    let regions: Vec<RegionJson> = config
        .p
        .par_iter()
        .map(|&p| RegionJson::new(&q.lower_quantile(p).field("p")?, Some(p), rect.as_ref()))
        .collect::<CliResult<_>>()?;
    if let (Some(path), Some(r)) = (a.svg, rect.as_ref()) {
        let points: Vec<[f64; 2]> = q
            .cdf()
            .model()
            .as_empirical()
            .map(|s| s.points().iter().map(|v| [v[0], v[1]]).collect())
            .unwrap_or_default();
        let polys: Vec<(f64, Vec<[f64; 2]>)> = regions
            .iter()
            .map(|g| (g.p.unwrap_or(0.0), g.polygon.clone().unwrap_or_default()))
            .collect();
        write_file(path, svg(&points, &polys, r).as_bytes())?;
    }
    emit(to_json(&Envelope { config: &config, results: regions })?, a.json)
}

#[derive(Serialize)]
struct GenSetJson {
    #[serde(rename = "G")]
    g: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    rays: Vec<Vec<f64>>,
}

impl From<&GenSet> for GenSetJson {
    fn from(s: &GenSet) -> Self {
        GenSetJson {
            g: s.points().iter().map(|v| v.to_vec()).collect(),
            rays: s.rays().iter().map(|v| v.to_vec()).collect(),
        }
    }
}

#[derive(Serialize)]
struct ProbeJson {
    lo: Vec<f64>,
    hi: Vec<f64>,
    per_axis: usize,
}

#[derive(Serialize)]
struct ClosureJson {
    input: GenSetJson,
    value: f64,
    psi_closure: RegionJson,
    phi_closure: RegionJson,
    is_psi_fixed: bool,
    is_phi_fixed: bool,
    probe: ProbeJson,
}

pub fn closure(cli: &Cli, model: &ModelArgs, generators: &Path, out: Option<&PathBuf>) -> CliResult<Vec<u8>> {
    let Loaded { cdf, mut config } = load("closure", cli, model)?;
    config.input("G", generators);
    config.output("out", out);
    let set = read_genset(generators, "G", cdf.dim())?;
    let probe = ProbeGrid::around(cdf.model(), set.points(), cli.grid).field("grid")?;
    let rect = planar_box(cdf.model(), set.points(), None)?;
    let q = QuantileFn::new(cdf);
    let report = closure_report(&q, &set, &probe).field("G")?;
    let results = ClosureJson {
        input: (&set).into(),
        value: report.value,
        psi_closure: RegionJson::new(&report.psi_closure, None, rect.as_ref())?,
        phi_closure: RegionJson::new(&report.phi_closure, None, rect.as_ref())?,
        is_psi_fixed: report.is_psi_fixed,
        is_phi_fixed: report.is_phi_fixed,
        probe: ProbeJson {
            lo: probe.lo().to_vec(),
            hi: probe.hi().to_vec(),
            per_axis: probe.per_axis(),
        },
    };
    emit(to_json(&Envelope { config: &config, results })?, out)
}

pub fn comparison_name(c: PhiComparison) -> &'static str {
    match c {
        PhiComparison::LessOrEqual => "less-or-equal",
        PhiComparison::GreaterOrEqual => "greater-or-equal",
        PhiComparison::Equal => "equal",
        PhiComparison::Incomparable => "incomparable",
    }
}

#[derive(Serialize)]
struct RankJson {
    d1: GenSetJson,
    d2: GenSetJson,
    inf_extension: [f64; 2],
    psi: &'static str,
    phi: &'static str,
}

pub fn rank(cli: &Cli, model: &ModelArgs, d1: &Path, d2: &Path, out: Option<&PathBuf>) -> CliResult<Vec<u8>> {
    let Loaded { cdf, mut config } = load("rank", cli, model)?;
    config.input("d1", d1);
    config.input("d2", d2);
    config.output("out", out);
    let a = read_genset(d1, "d1", cdf.dim())?;
    let b = read_genset(d2, "d2", cdf.dim())?;
    let results = RankJson {
        d1: (&a).into(),
        d2: (&b).into(),
        inf_extension: [inf_extension(&cdf, &a).field("d1")?, inf_extension(&cdf, &b).field("d2")?],
        psi: comparison_name(set_rank(&cdf, &a, &b, SetFamily::Psi).field("d1")?),
        phi: comparison_name(set_rank(&cdf, &a, &b, SetFamily::Phi).field("d1")?),
    };
    emit(to_json(&Envelope { config: &config, results })?, out)
}

#[derive(Serialize)]
struct EstimateJson {
    exact: f64,
    mc_estimate: f64,
    n_draws: usize,
    hits: usize,
    std_error: f64,
    seed: u64,
}

pub struct SimulateArgs<'a> {
    pub model: &'a ModelArgs,
    pub test_set: &'a PathBuf,
    pub n: usize,
    pub seed: u64,
    pub trace: Option<&'a PathBuf>,
    pub out: Option<&'a PathBuf>,
}

pub fn simulate(cli: &Cli, a: SimulateArgs<'_>) -> CliResult<Vec<u8>> {
    if a.n < 100 {
        return Err(CliError::input("n", "at least 100 draws required"));
    }
    let Loaded { cdf, mut config } = load("simulate", cli, a.model)?;
    config.seed = Some(a.seed);
    config.n_draws = Some(a.n);
    config.input("K", a.test_set);
    config.output("trace", a.trace);
    config.output("out", a.out);
    let k = CompactTestSet::new(read_points(a.test_set, "K", cdf.dim())?).field("K")?;
    let values = test_set_values(&cdf, &k).field("K")?;
    let exact = values.iter().fold(0.0f64, |m, &v| m.max(v));
    let blocks: Vec<(u64, usize)> = block_sizes(a.n).collect();
    let hits = blocks
        .par_iter()
        .map(|&(b, count)| capacity_block(&values, a.seed, b, count))
        .sum();
    let e = estimate_from_hits(exact, hits, a.n, a.seed);
    if let Some(path) = a.trace {
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| CliError::input("trace", e.to_string());
        w.write_record(["u", "hit"]).map_err(to_err)?;
        for &(b, count) in &blocks {
            for (u, hit) in block_draws(&values, a.seed, b, count) {
                w.write_record([u.to_string(), u8::from(hit).to_string()]).map_err(to_err)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::input("trace", e.to_string()))?;
        write_file(path, &bytes)?;
    }
    let results = EstimateJson {
        exact: e.exact,
        mc_estimate: e.mc_estimate,
        n_draws: e.n_draws,
        hits: e.hits,
        std_error: e.std_error,
        seed: e.seed,
    };
    emit(to_json(&Envelope { config: &config, results })?, a.out)
}
