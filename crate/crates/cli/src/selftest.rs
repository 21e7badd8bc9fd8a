//! Invariant battery on three fixtures: the four corners of the unit square,
//! the sample {1, 2, 3, 4} on the line, and the standard planar Gaussian.

use cone_quantile_core::galois::{
    adjunction_check, cl_phi_member, cl_psi_member, inf_extension, phi_identity_check,
};
use cone_quantile_core::random_set::{capacity_exact, hits};
use cone_quantile_core::{
    ConeCdf, ConvexCone, DistributionModel, EmpiricalSample, GaussianModel, GenSet, ProbeGrid, QuantileFn,
    SeededRng, Vector,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliResult, Field};

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Check {
    pub fixture: &'static str,
    pub property: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub pass: bool,
}

struct Fixture {
    name: &'static str,
    q: QuantileFn,
    probes: Vec<Vector>,
    probe: ProbeGrid,
}

/// Tally of one property.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: usize,
}

impl Tally {
    fn check(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
        }
    }
}

fn fixtures(resolution: usize, grid: usize) -> CliResult<Vec<Fixture>> {
    let square = EmpiricalSample::new(vec![
        Vector::from([0.0, 0.0]),
        Vector::from([1.0, 0.0]),
        Vector::from([0.0, 1.0]),
        Vector::from([1.0, 1.0]),
    ])
    .field("selftest")?;
    let line = EmpiricalSample::new((1..=4).map(|k| Vector::from([k as f64])).collect()).field("selftest")?;
    let models: [(&'static str, DistributionModel); 3] = [
        ("s4", square.into()),
        ("univariate", line.into()),
        ("gaussian", GaussianModel::standard(2).into()),
    ];
    models
        .into_iter()
        .map(|(name, model)| {
            let dim = model.dim();
            let probe = ProbeGrid::around(&model, &[], grid).field("grid")?;
            let cdf = ConeCdf::new(model, ConvexCone::orthant(dim), resolution).field("selftest")?;
            Ok(Fixture {
                name,
                q: QuantileFn::new(cdf),
                probes: probe.points().collect(),
                probe,
            })
        })
        .collect()
}

fn levels(steps: usize) -> impl Iterator<Item = f64> + Clone {
    (0..=steps).map(move |k| k as f64 / steps as f64)
}

fn shifted(z: &Vector, g: &Vector, s: f64) -> Vector {
    Vector::new(z.iter().zip(g.iter()).map(|(a, b)| a + s * b).collect())
}

fn random_sets(f: &Fixture, rng: &mut SeededRng, count: usize) -> CliResult<Vec<GenSet>> {
    let dim = f.probe.dim();
    (0..count)
        .map(|_| {
            let k = 1 + (rng.next_uniform() * 3.0) as usize;
            let points = (0..k.min(3))
                .map(|_| {
                    Vector::new(
                        (0..dim)
                            .map(|a| f.probe.lo()[a] + rng.next_uniform() * (f.probe.hi()[a] - f.probe.lo()[a]))
                            .collect(),
                    )
                })
                .collect();
            GenSet::new(dim, points).field("selftest")
        })
        .collect()
}

type Property = fn(&Fixture, &mut SeededRng) -> CliResult<Tally>;

fn range(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    let cdf = f.q.cdf();
    for z in &f.probes {
        let v = cdf.lower_cdf(z).field("selftest")?;
        let mut ok = (0.0..=1.0).contains(&v);
        for w in cdf.dirs().dirs() {
            ok &= v <= cdf.w_cdf(w, z).field("selftest")?;
        }
        t.check(ok);
    }
    Ok(t)
}

fn monotone(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    let cdf = f.q.cdf();
    for z in &f.probes {
        let v = cdf.lower_cdf(z).field("selftest")?;
        for g in cdf.cone().generators() {
            t.check(v <= cdf.lower_cdf(&shifted(z, g, 0.1)).field("selftest")?);
        }
    }
    Ok(t)
}

fn nested(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for z in &f.probes {
        let members: Vec<bool> = levels(20).map(|p| f.q.member(p, z)).collect::<Result<_, _>>().field("selftest")?;
        t.check(members.windows(2).all(|w| w[0] || !w[1]));
    }
    Ok(t)
}

fn cone_stable(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for z in &f.probes {
        for p in levels(10) {
            if f.q.member(p, z).field("selftest")? {
                for g in f.q.cdf().cone().generators() {
                    t.check(f.q.member(p, &shifted(z, g, 0.5)).field("selftest")?);
                }
            }
        }
    }
    Ok(t)
}

fn outer_approximation(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for p in levels(10).skip(1) {
        let region = f.q.lower_quantile(p).field("selftest")?;
        for z in &f.probes {
            if f.q.member(p, z).field("selftest")? {
                t.check(region.member_tol(z, 1e-7).field("selftest")?);
            }
        }
    }
    Ok(t)
}

fn dual_representation(f: &Fixture, _: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for p in levels(10).skip(1) {
        let lower = f.q.lower_quantile(p).field("selftest")?;
        let dual = f.q.dual_quantile(p).field("selftest")?;
        for z in &f.probes {
            let near = lower.halfspaces().iter().chain(dual.halfspaces()).any(|h| h.slack(z).abs() <= 1e-7);
            if !near {
                t.check(lower.member(z).field("selftest")? == dual.member(z).field("selftest")?);
            }
        }
    }
    Ok(t)
}

fn adjunction(f: &Fixture, rng: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for set in random_sets(f, rng, 20)? {
        for p in levels(20) {
            let (lhs, rhs) = adjunction_check(&f.q, p, &set).field("selftest")?;
            t.check(lhs == rhs);
        }
    }
    Ok(t)
}

fn inf_stability(f: &Fixture, rng: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    let sets = random_sets(f, rng, 20)?;
    for pair in sets.chunks(2) {
        let merged = pair[0].union(&pair[1]).field("selftest")?;
        let a = inf_extension(f.q.cdf(), &pair[0]).field("selftest")?;
        let b = inf_extension(f.q.cdf(), &pair[1]).field("selftest")?;
        t.check(inf_extension(f.q.cdf(), &merged).field("selftest")? == a.min(b));
    }
    Ok(t)
}

fn sandwich(f: &Fixture, rng: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for set in random_sets(f, rng, 4)? {
        let region = set.region(f.q.cdf()).field("selftest")?;
        for z in &f.probes {
            let inside = region.member(z).field("selftest")?;
            let phi = cl_phi_member(f.q.cdf(), &set, z).field("selftest")?;
            let psi = cl_psi_member(&f.q, &set, z).field("selftest")?;
            t.check((!inside || phi) && (!phi || psi));
        }
    }
    Ok(t)
}

fn hit_equivalence(f: &Fixture, rng: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    for set in random_sets(f, rng, 5)? {
        let k = cone_quantile_core::CompactTestSet::new(set.points().to_vec()).field("selftest")?;
        let cap = capacity_exact(f.q.cdf(), &k).field("selftest")?;
        for _ in 0..50 {
            let u = rng.next_uniform();
            t.check(hits(&f.q, u, &k).field("selftest")? == (u <= cap + cone_quantile_core::MASS_TOL));
        }
    }
    Ok(t)
}

/// Fixture-specific anchors with known values.
fn known_values(f: &Fixture, rng: &mut SeededRng) -> CliResult<Tally> {
    let mut t = Tally::default();
    let cdf = f.q.cdf();
    match f.name {
        "s4" => {
            t.check(cdf.lower_cdf(&[0.0, 0.0]).field("selftest")? == 0.25);
            t.check(cdf.lower_cdf(&[1.0, 1.0]).field("selftest")? == 1.0);
            let tukey = ConeCdf::tukey(cdf.model().clone(), cdf.dirs().resolution()).field("selftest")?;
            t.check(tukey.tukey_depth(&[0.5, 0.5]).field("selftest")? == 0.5);
        }
        "univariate" => {
            for (p, expected) in [(0.25, 1.0), (0.5, 2.0), (0.75, 3.0), (1.0, 4.0)] {
                let region = f.q.lower_quantile(p).field("selftest")?;
                t.check(region.halfspaces().len() == 1 && region.halfspaces()[0].offset() == expected);
            }
            t.check(f.q.lower_quantile(0.0).field("selftest")?.is_whole());
        }
        _ => {
            t.check((cdf.lower_cdf(&[0.0, 0.0]).field("selftest")? - 0.5).abs() < 1e-12);
            let report = phi_identity_check(cdf, 3, &f.probe, rng).field("selftest")?;
            t.check(report.violations == 0);
        }
    }
    Ok(t)
}

const PROPERTIES: [(&str, Property); 11] = [
    ("range", range),
    ("monotone", monotone),
    ("nested", nested),
    ("cone-stable", cone_stable),
    ("outer-approximation", outer_approximation),
    ("dual-representation", dual_representation),
    ("adjunction", adjunction),
    ("inf-stability", inf_stability),
    ("closure-sandwich", sandwich),
    ("hit-equivalence", hit_equivalence),
    ("known-values", known_values),
];

/// Every property on every fixture; each pair gets its own RNG stream.
pub fn run(resolution: usize, grid: usize, seed: u64) -> CliResult<Vec<Check>> {
    let fixtures = fixtures(resolution, grid)?;
    let jobs: Vec<(usize, usize)> = (0..fixtures.len())
        .flat_map(|i| (0..PROPERTIES.len()).map(move |j| (i, j)))
        .collect();
    jobs.par_iter()
        .map(|&(i, j)| {
            let f = &fixtures[i];
            let (property, test) = PROPERTIES[j];
            let mut rng = SeededRng::substream(seed, (i * PROPERTIES.len() + j) as u64);
            let t = test(f, &mut rng)?;
            Ok(Check {
                fixture: f.name,
                property,
                checked: t.checked,
                failures: t.failures,
                pass: t.failures == 0,
            })
        })
        .collect()
}
