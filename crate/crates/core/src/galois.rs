//! The inf-extension `F^(D) = inf_{z in D} F_C(z)`, its Galois connection
//! with the quantile map, and the closures it induces.
//!
//! Sets are given in generator form `D = cl co(G + cone(R) + C)` by a
//! [`GenSet`]. Because `F_C` is monotone and quasiconcave, `F^` of such a set
//! is the minimum of `F_C` over `G` (or 0 when some extra ray leaves `C`), so
//! every value here is computed exactly from finitely many points.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cdf::{compare_mass, ConeCdf, PhiComparison};
use crate::cone::DirectionSet;
use crate::distribution::{reaches, EmpiricalSample};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::probe::ProbeGrid;
use crate::quantile::{check_level, QuantileFn};
use crate::random_set::SeededRng;
use crate::region::{self, CRegion};
use crate::sweep::{self, ArcField};

/// Generators of `D = cl co(points + cone(rays) + C)`.
///
/// `rays` are optional extra recession directions; without them `D` is the
/// canonical `cl co(G + C)`. A set without points is the empty set, whose
/// inf-extension is `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSet {
    dim: usize,
    points: Vec<Vector>,
    rays: Vec<Vector>,
}

impl GenSet {
    pub fn new(dim: usize, points: Vec<Vector>) -> Result<Self> {
        Self::with_rays(dim, points, Vec::new())
    }

    pub fn with_rays(dim: usize, points: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("G: dimension must be >= 1"));
        }
        for v in points.iter().chain(&rays) {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput("G: non-finite coordinate"));
            }
        }
        Ok(GenSet { dim, points, rays })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lattice infimum `cl co(D1 ∪ D2)`: the union of the generators.
    pub fn union(&self, other: &GenSet) -> Result<GenSet> {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        Self::with_rays(self.dim, points, rays)
    }

    pub fn region(&self, cdf: &ConeCdf) -> Result<CRegion> {
        CRegion::genrep(cdf.cone().clone(), self.points.clone(), self.rays.clone())
    }

    fn rays_in_cone(&self, cdf: &ConeCdf) -> bool {
        self.rays.iter().all(|r| cdf.cone().contains(r).unwrap_or(false))
    }

    fn check(&self, cdf: &ConeCdf) -> Result<()> {
        if self.dim != cdf.dim() {
            return Err(Error::DimensionMismatch {
                expected: cdf.dim(),
                found: self.dim,
            });
        }
        Ok(())
    }
}

/// `F^(D)`; `+inf` for the empty set.
pub fn inf_extension(cdf: &ConeCdf, set: &GenSet) -> Result<f64> {
    set.check(cdf)?;
    if set.is_empty() {
        return Ok(f64::INFINITY);
    }
    if !set.rays_in_cone(cdf) {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    for g in &set.points {
        best = best.min(cdf.lower_cdf(g)?);
    }
    Ok(best)
}

/// `F^_w(D) = inf_{y in D} F_w(y) = Pr{w.X <= inf_{y in D} w.y}`, with the
/// convention `Pr{w.X <= -inf} = 0`; `+inf` for the empty set.
pub fn inf_extension_w(cdf: &ConeCdf, w: &[f64], set: &GenSet) -> Result<f64> {
    cdf.check_direction(w)?;
    set.check(cdf)?;
    Ok(inf_extension_w_unchecked(cdf, w, set))
}

fn inf_extension_w_unchecked(cdf: &ConeCdf, w: &[f64], set: &GenSet) -> f64 {
    if set.is_empty() {
        return f64::INFINITY;
    }
    let m = region::support_min(w, &set.points, &set.rays, cdf.cone().tol());
    let value = cdf.model().cdf_unchecked(w, m, false);
    debug_assert!(
        m == f64::NEG_INFINITY
            || set
                .points
                .iter()
                .map(|g| cdf.w_cdf_unchecked(w, g))
                .fold(f64::INFINITY, f64::min)
                == value
    );
    value
}

/// Both sides of the adjunction `Q(p) ⊇ D  <=>  p <= F^(D)`.
///
/// The left side is checked on the generators: `Q(p)` is closed, convex and
/// stable under `+C`, so it contains `D` iff it contains every generator and
/// every extra ray lies in `C` (for `p > 0`, the recession cone of `Q(p)` is
/// `C`).
pub fn adjunction_check(q: &QuantileFn, p: f64, set: &GenSet) -> Result<(bool, bool)> {
    check_level(p)?;
    let cdf = q.cdf();
    set.check(cdf)?;
    let mut lhs = p <= 0.0 || set.is_empty() || set.rays_in_cone(cdf);
    if lhs {
        for g in &set.points {
            if !q.member(p, g)? {
                lhs = false;
                break;
            }
        }
    }
    let value = inf_extension(cdf, set)?;
    let rhs = p <= 0.0 || reaches(value, p);
    Ok((lhs, rhs))
}

/// `cl_Psi(D) = Q(F^(D))` as an outer hrep; the empty set stays empty.
pub fn cl_psi(q: &QuantileFn, set: &GenSet) -> Result<CRegion> {
    let value = inf_extension(q.cdf(), set)?;
    if value == f64::INFINITY {
        return Ok(CRegion::empty(q.cdf().cone().clone()));
    }
    q.lower_quantile(value)
}

/// Exact membership in `cl_Psi(D)`.
pub fn cl_psi_member(q: &QuantileFn, set: &GenSet, z: &[f64]) -> Result<bool> {
    let value = inf_extension(q.cdf(), set)?;
    if value == f64::INFINITY {
        q.cdf().check_point(z)?;
        return Ok(false);
    }
    q.member(value, z)
}

/// Outward normals of the faces of `D` that can lie in `C+`: perpendiculars
/// of generator differences, cone generators and rays (planar), or cross
/// products of pairs of them (spatial). Elsewhere none are known.
fn face_normals(cdf: &ConeCdf, sets: &[&GenSet]) -> Vec<Vector> {
    let d = cdf.dim();
    let mut edges: Vec<Vec<f64>> = Vec::new();
    for set in sets {
        for (i, a) in set.points.iter().enumerate() {
            for b in &set.points[i + 1..] {
                edges.push(linalg::sub(a, b));
            }
        }
        edges.extend(set.rays.iter().map(|r| r.to_vec()));
    }
    edges.extend(cdf.cone().generators().iter().map(|g| g.to_vec()));
    let mut out = Vec::new();
    match d {
        2 => {
            for e in &edges {
                let n = linalg::rot90(e);
                out.push(Vector::from(n));
                out.push(Vector::from([-n[0], -n[1]]));
            }
        }
        3 => {
            for (i, a) in edges.iter().enumerate() {
                for b in &edges[i + 1..] {
                    let n = linalg::cross(a, b);
                    out.push(Vector::from(n));
                    out.push(Vector::from([-n[0], -n[1], -n[2]]));
                }
            }
        }
        _ => {}
    }
    out
}

fn closure_dirs(cdf: &ConeCdf, sets: &[&GenSet]) -> DirectionSet {
    cdf.dirs().augmented(cdf.cone(), face_normals(cdf, sets))
}

/// `cl_Phi(D) = ∩_w {z : F_w(z) >= F^_w(D)}` as the hrep
/// `∩_w {z : w.z >= q_w(F^_w(D))}` over the direction set and the face
/// normals of `D`.
pub fn cl_phi(cdf: &ConeCdf, set: &GenSet) -> Result<CRegion> {
    set.check(cdf)?;
    let cone = cdf.cone().clone();
    if set.is_empty() {
        return Ok(CRegion::empty(cone));
    }
    let dirs = closure_dirs(cdf, &[set]);
    let mut hs = Vec::with_capacity(dirs.len());
    for w in dirs.dirs() {
        let level = inf_extension_w_unchecked(cdf, w, set);
        let b = cdf.model().quantile_unchecked(w, level);
        hs.push(if b == f64::NEG_INFINITY {
            crate::cone::Halfspace::whole(w.clone())
        } else {
            crate::cone::Halfspace::new(w.clone(), b)?
        });
    }
    CRegion::hrep(cone, hs)
}

/// Fields for the sweep: one per generator, then one per ray.
struct SetFields {
    first: usize,
    points: usize,
    rays: usize,
}

impl SetFields {
    fn push(fields: &mut Vec<ArcField>, sample: &EmpiricalSample, set: &GenSet) -> SetFields {
        let first = fields.len();
        for g in &set.points {
            fields.push(ConeCdf::count_field(sample, g));
        }
        for r in &set.rays {
            let mut f = ArcField::new();
            f.add_nonneg(r, 1.0);
            fields.push(f);
        }
        SetFields {
            first,
            points: set.points.len(),
            rays: set.rays.len(),
        }
    }

    /// `F^_w(D)` from the field values at one direction.
    fn value(&self, v: &[f64], sample: &EmpiricalSample) -> f64 {
        if self.points == 0 {
            return f64::INFINITY;
        }
        let rays = &v[self.first + self.points..self.first + self.points + self.rays];
        if rays.iter().any(|&r| r < 0.5) {
            return 0.0;
        }
        let units = v[self.first..self.first + self.points]
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        sample.units_to_mass(units)
    }
}

/// Membership oracle for `cl_Phi(D)`.
///
/// Planar empirical models are decided exactly by sweeping all directions of
/// `C+`; otherwise the hrep of [`cl_phi`] is used.
pub struct PhiClosure<'a> {
    cdf: &'a ConeCdf,
    set: &'a GenSet,
    hrep: Option<CRegion>,
}

impl<'a> PhiClosure<'a> {
    pub fn new(cdf: &'a ConeCdf, set: &'a GenSet) -> Result<Self> {
        set.check(cdf)?;
        let hrep = if cdf.exact_domain().is_some() {
            None
        } else {
            Some(cl_phi(cdf, set)?)
        };
        Ok(PhiClosure { cdf, set, hrep })
    }

    pub fn contains(&self, z: &[f64]) -> Result<bool> {
        self.cdf.check_point(z)?;
        if self.set.is_empty() {
            return Ok(false);
        }
        if let Some(r) = &self.hrep {
            return r.member(z);
        }
        let Some((domain, sample)) = self.cdf.exact_domain() else {
            return Err(Error::UnsupportedRegion("no exact domain"));
        };
        let mut fields = alloc::vec![ConeCdf::count_field(sample, z)];
        let sf = SetFields::push(&mut fields, sample, self.set);
        let mut inside = true;
        sweep::sweep(&fields, domain, |_, v| {
            if inside && compare_mass(sample.units_to_mass(v[0]), sf.value(v, sample)) == Ordering::Less {
                inside = false;
            }
        });
        Ok(inside)
    }
}

/// Membership in `cl_Phi(D)`; see [`PhiClosure`].
pub fn cl_phi_member(cdf: &ConeCdf, set: &GenSet, z: &[f64]) -> Result<bool> {
    PhiClosure::new(cdf, set)?.contains(z)
}

/// Which preorder [`set_rank`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetFamily {
    /// Compare `F^(D1)` with `F^(D2)`; always comparable.
    Psi,
    /// Compare `F^_w(D1)` with `F^_w(D2)` for every direction.
    Phi,
}

/// Ranks two sets. `LessOrEqual` means `D1 ≼ D2`; the `Psi` family never
/// answers `Incomparable`.
pub fn set_rank(cdf: &ConeCdf, d1: &GenSet, d2: &GenSet, family: SetFamily) -> Result<PhiComparison> {
    d1.check(cdf)?;
    d2.check(cdf)?;
    let mut le = true;
    let mut ge = true;
    let mut record = |a: f64, b: f64| {
        let ord = if a == b { Ordering::Equal } else { compare_mass(a, b) };
        match ord {
            Ordering::Less => ge = false,
            Ordering::Greater => le = false,
            Ordering::Equal => {}
        }
    };
    match family {
        SetFamily::Psi => record(inf_extension(cdf, d1)?, inf_extension(cdf, d2)?),
        SetFamily::Phi => {
            if let Some((domain, sample)) = cdf.exact_domain() {
                let mut fields = Vec::new();
                let f1 = SetFields::push(&mut fields, sample, d1);
                let f2 = SetFields::push(&mut fields, sample, d2);
                sweep::sweep(&fields, domain, |_, v| record(f1.value(v, sample), f2.value(v, sample)));
            } else {
                for w in closure_dirs(cdf, &[d1, d2]).dirs() {
                    record(inf_extension_w_unchecked(cdf, w, d1), inf_extension_w_unchecked(cdf, w, d2));
                }
            }
        }
    }
    Ok(match (le, ge) {
        (true, true) => PhiComparison::Equal,
        (true, false) => PhiComparison::LessOrEqual,
        (false, true) => PhiComparison::GreaterOrEqual,
        (false, false) => PhiComparison::Incomparable,
    })
}

/// `D` and `cl_Psi(D)` agree on every probe, i.e. `D` is a fixed point.
pub fn fixed_point_check(q: &QuantileFn, set: &GenSet, probe: &ProbeGrid) -> Result<bool> {
    let region = set.region(q.cdf())?;
    let value = inf_extension(q.cdf(), set)?;
    for z in probe.points() {
        let in_closure = value != f64::INFINITY && q.member(value, &z)?;
        if region.member(&z)? != in_closure {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both closures of one set, with probe-level fixed-point flags.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub input: GenSet,
    pub value: f64,
    pub psi_closure: CRegion,
    pub phi_closure: CRegion,
    pub is_psi_fixed: bool,
    pub is_phi_fixed: bool,
}

pub fn closure_report(q: &QuantileFn, set: &GenSet, probe: &ProbeGrid) -> Result<ClosureReport> {
    let cdf = q.cdf();
    let value = inf_extension(cdf, set)?;
    let psi_closure = cl_psi(q, set)?;
    let phi_closure = cl_phi(cdf, set)?;
    let is_psi_fixed = fixed_point_check(q, set, probe)?;
    let region = set.region(cdf)?;
    let phi = PhiClosure::new(cdf, set)?;
    let mut is_phi_fixed = true;
    for z in probe.points() {
        if region.member(&z)? != phi.contains(&z)? {
            is_phi_fixed = false;
            break;
        }
    }
    Ok(ClosureReport {
        input: set.clone(),
        value,
        psi_closure,
        phi_closure,
        is_psi_fixed,
        is_phi_fixed,
    })
}

/// Outcome of [`phi_identity_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhiIdentityReport {
    pub trials: usize,
    pub probes_checked: usize,
    /// Probes inside `cl_Phi(D)` but farther than `boundary_tol` from `D`.
    pub violations: usize,
    /// Largest L1 distance to `D` among those probes (0 if none).
    pub max_violation: f64,
    pub boundary_tol: f64,
}

/// Default boundary slack for [`phi_identity_check`]: the Gaussian quantile
/// of a tail probability loses about `eps / density` in accuracy, which is
/// well below this at the probe-box scales used here.
pub const PHI_BOUNDARY_TOL: f64 = 1e-6;

/// Compares `D` with `cl_Phi(D)` on the probe grid for `trials` random sets
/// of one to three generators drawn uniformly in the grid box.
pub fn phi_identity_check(
    cdf: &ConeCdf,
    trials: usize,
    probe: &ProbeGrid,
    rng: &mut SeededRng,
) -> Result<PhiIdentityReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be >= 1"));
    }
    if probe.dim() != cdf.dim() {
        return Err(Error::DimensionMismatch {
            expected: cdf.dim(),
            found: probe.dim(),
        });
    }
    let mut report = PhiIdentityReport {
        trials,
        probes_checked: 0,
        violations: 0,
        max_violation: 0.0,
        boundary_tol: PHI_BOUNDARY_TOL,
    };
    for _ in 0..trials {
        let k = 1 + (rng.next_uniform() * 3.0) as usize;
        let points = (0..k.min(3))
            .map(|_| {
                Vector::new(
                    (0..cdf.dim())
                        .map(|a| probe.lo()[a] + rng.next_uniform() * (probe.hi()[a] - probe.lo()[a]))
                        .collect(),
                )
            })
            .collect();
        let set = GenSet::new(cdf.dim(), points)?;
        let violations = phi_violations(cdf, &set, probe)?;
        report.probes_checked += probe.len();
        report.violations += violations.0;
        report.max_violation = report.max_violation.max(violations.1);
    }
    Ok(report)
}

/// Number of probes in `cl_Phi(D) \ D` (beyond [`PHI_BOUNDARY_TOL`]) and the
/// largest distance to `D` among them.
pub fn phi_violations(cdf: &ConeCdf, set: &GenSet, probe: &ProbeGrid) -> Result<(usize, f64)> {
    let region = set.region(cdf)?;
    let phi = PhiClosure::new(cdf, set)?;
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for z in probe.points() {
        if phi.contains(&z)? {
            let dist = region.distance(&z)?;
            if dist > PHI_BOUNDARY_TOL {
                count += 1;
                worst = worst.max(dist);
            }
        }
    }
    Ok((count, worst))
}

/// Supremum of the levels `p` on a regular grid of `steps + 1` levels with
/// `D ⊆ Q(p)`; approximates `F^(D)` from below within `1 / steps`.
pub fn level_from_quantiles(q: &QuantileFn, set: &GenSet, steps: usize) -> Result<f64> {
    let mut best = 0.0;
    for k in 0..=steps {
        let p = k as f64 / steps as f64;
        if adjunction_check(q, p, set)?.0 {
            best = p;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConvexCone;
    use crate::distribution::GaussianModel;
    use alloc::vec;

    fn s4() -> EmpiricalSample {
        EmpiricalSample::new(vec![
            Vector::from([0.0, 0.0]),
            Vector::from([1.0, 0.0]),
            Vector::from([0.0, 1.0]),
            Vector::from([1.0, 1.0]),
        ])
        .unwrap()
    }

    fn s4q() -> QuantileFn {
        QuantileFn::new(ConeCdf::new(s4(), ConvexCone::orthant(2), 17).unwrap())
    }

    fn set(points: &[[f64; 2]]) -> GenSet {
        GenSet::new(2, points.iter().map(|p| Vector::from(*p)).collect()).unwrap()
    }

    #[test]
    fn inf_extension_examples() {
        let q = s4q();
        assert_eq!(inf_extension(q.cdf(), &set(&[[1.0, 1.0]])).unwrap(), 1.0);
        assert_eq!(inf_extension(q.cdf(), &set(&[[0.0, 0.0], [1.0, 1.0]])).unwrap(), 0.25);
        assert_eq!(inf_extension(q.cdf(), &set(&[])).unwrap(), f64::INFINITY);
        let leaving = GenSet::with_rays(2, vec![Vector::from([1.0, 1.0])], vec![Vector::from([-1.0, 0.0])]).unwrap();
        assert_eq!(inf_extension(q.cdf(), &leaving).unwrap(), 0.0);
    }

    #[test]
    fn directional_examples() {
        let line = EmpiricalSample::new((1..=4).map(|k| Vector::from([k as f64])).collect()).unwrap();
        let c = ConeCdf::new(line, ConvexCone::orthant(1), 1).unwrap();
        let g = GenSet::new(1, vec![Vector::from([2.0]), Vector::from([3.0])]).unwrap();
        assert_eq!(inf_extension_w(&c, &[1.0], &g).unwrap(), 0.5);

        let q = s4q();
        let single = set(&[[0.3, 0.8]]);
        assert_eq!(
            inf_extension_w(q.cdf(), &[1.0, 2.0], &single).unwrap(),
            q.cdf().w_cdf(&[1.0, 2.0], &[0.3, 0.8]).unwrap()
        );
        let leaving = GenSet::with_rays(2, vec![Vector::from([0.0, 0.0])], vec![Vector::from([-1.0, 0.0])]).unwrap();
        assert_eq!(inf_extension_w(q.cdf(), &[1.0, 0.0], &leaving).unwrap(), 0.0);
        assert_eq!(inf_extension_w(q.cdf(), &[0.0, 1.0], &leaving).unwrap(), 0.5);
    }

    #[test]
    fn adjunction_examples() {
        let q = s4q();
        assert_eq!(adjunction_check(&q, 0.3, &set(&[[1.0, 1.0]])).unwrap(), (true, true));
        assert_eq!(adjunction_check(&q, 0.3, &set(&[[0.0, 0.0]])).unwrap(), (false, false));
        assert_eq!(adjunction_check(&q, 0.0, &set(&[[-9.0, -9.0]])).unwrap(), (true, true));
    }

    #[test]
    fn psi_closure_examples() {
        let q = s4q();
        let top = set(&[[1.0, 1.0]]);
        assert_eq!(cl_psi(&q, &top).unwrap(), q.lower_quantile(1.0).unwrap());
        assert!(cl_psi(&q, &set(&[[-5.0, -5.0]])).unwrap().is_whole());
        let probe = ProbeGrid::new(vec![-1.0, -1.0], vec![2.0, 2.0], 21).unwrap();
        assert!(fixed_point_check(&q, &top, &probe).unwrap());
        assert!(!fixed_point_check(&q, &set(&[[0.5, 0.5]]), &probe).unwrap());
        let everything =
            GenSet::with_rays(2, vec![Vector::from([0.0, 0.0])], vec![Vector::from([-1.0, 0.0]), Vector::from([0.0, -1.0])])
                .unwrap();
        assert!(fixed_point_check(&q, &everything, &probe).unwrap());
        assert!(cl_phi(q.cdf(), &everything).unwrap().is_whole());
    }

    #[test]
    fn flat_cdf_breaks_phi_identity() {
        // X uniform on {0, 10}: F is flat at 1/2 on [0, 10)
        let x = EmpiricalSample::new(vec![Vector::from([0.0]), Vector::from([10.0])]).unwrap();
        let c = ConeCdf::new(x, ConvexCone::orthant(1), 1).unwrap();
        let d = GenSet::new(1, vec![Vector::from([9.0])]).unwrap();
        assert!(cl_phi_member(&c, &d, &[5.0]).unwrap());
        assert!(!d.region(&c).unwrap().member(&[5.0]).unwrap());
        assert_eq!(cl_phi(&c, &d).unwrap().halfspaces()[0].offset(), 0.0);
        // a generator at the right end of the flat piece is already closed
        let d = GenSet::new(1, vec![Vector::from([10.0])]).unwrap();
        assert!(!cl_phi_member(&c, &d, &[5.0]).unwrap());
    }

    #[test]
    fn gaussian_phi_closure_is_identity() {
        let c = ConeCdf::new(GaussianModel::standard(2), ConvexCone::orthant(2), 33).unwrap();
        let d = set(&[[0.0, 0.0]]);
        let probe = ProbeGrid::around(c.model(), &[], 41).unwrap();
        assert_eq!(phi_violations(&c, &d, &probe).unwrap().0, 0);
        assert!(cl_phi_member(&c, &d, &[0.5, 0.0]).unwrap());
        assert!(!cl_phi_member(&c, &d, &[-0.01, 3.0]).unwrap());
    }

    #[test]
    fn atom_sample() {
        let atom = EmpiricalSample::new(vec![Vector::from([0.5, 0.5])]).unwrap();
        let c = ConeCdf::new(atom, ConvexCone::orthant(2), 17).unwrap();
        let probe = ProbeGrid::new(vec![-1.0, -1.0], vec![2.0, 2.0], 21).unwrap();
        assert_eq!(phi_violations(&c, &set(&[[0.5, 0.5]]), &probe).unwrap().0, 0);
        let report = phi_identity_check(&c, 5, &probe, &mut SeededRng::new(1)).unwrap();
        assert!(report.violations > 0);
    }

    #[test]
    fn set_rank_examples() {
        let q = s4q();
        let (d1, d2) = (set(&[[0.0, 0.0]]), set(&[[1.0, 1.0]]));
        assert_eq!(set_rank(q.cdf(), &d1, &d2, SetFamily::Psi).unwrap(), PhiComparison::LessOrEqual);
        assert_eq!(set_rank(q.cdf(), &d1, &d2, SetFamily::Phi).unwrap(), PhiComparison::LessOrEqual);
        assert_eq!(set_rank(q.cdf(), &d1, &d1, SetFamily::Psi).unwrap(), PhiComparison::Equal);
        assert_eq!(set_rank(q.cdf(), &d1, &d1, SetFamily::Phi).unwrap(), PhiComparison::Equal);
        let two = EmpiricalSample::new(vec![Vector::from([0.0, 0.0]), Vector::from([1.0, 0.0])]).unwrap();
        let t = ConeCdf::tukey(two, 16).unwrap();
        let (a, b) = (set(&[[1.0, 0.0]]), set(&[[0.0, 1.0]]));
        assert_eq!(set_rank(&t, &a, &b, SetFamily::Phi).unwrap(), PhiComparison::Incomparable);
        assert_eq!(set_rank(&t.clone().grid_only(), &a, &b, SetFamily::Phi).unwrap(), PhiComparison::Incomparable);
        assert_ne!(set_rank(&t, &a, &b, SetFamily::Psi).unwrap(), PhiComparison::Incomparable);
    }

    #[test]
    fn closure_report_sandwich() {
        let q = s4q();
        let d = set(&[[0.5, 0.5]]);
        let probe = ProbeGrid::new(vec![-1.0, -1.0], vec![2.0, 2.0], 21).unwrap();
        let r = closure_report(&q, &d, &probe).unwrap();
        assert_eq!(r.value, 0.5);
        assert!(!r.is_psi_fixed);
        let phi = PhiClosure::new(q.cdf(), &d).unwrap();
        let region = d.region(q.cdf()).unwrap();
        for z in probe.points() {
            let (in_d, in_phi, in_psi) = (
                region.member(&z).unwrap(),
                phi.contains(&z).unwrap(),
                cl_psi_member(&q, &d, &z).unwrap(),
            );
            assert!(!in_d || in_phi, "{z:?}");
            assert!(!in_phi || in_psi, "{z:?}");
        }
        assert!((level_from_quantiles(&q, &d, 100).unwrap() - 0.5).abs() <= 0.01);
    }
}
