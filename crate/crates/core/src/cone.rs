//! Polyhedral cones, their duals, halfspaces and direction bases.
//!
//! A [`ConvexCone`] is stored by generators together with generators of its
//! positive dual `C+ = {w : w.z >= 0 for all z in C}`. Membership in `C` is
//! decided through the dual generators and membership in `C+` through the
//! generators, so both sides stay cheap.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, Vector};
use crate::normal;

/// Default tolerance for every geometric sign test.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Closed halfspace `{z : normal.z >= offset}`.
///
/// `offset = -inf` is the whole space, `offset = +inf` the empty set.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    normal: Vector,
    offset: f64,
}

impl Halfspace {
    /// Builds `{z : w.z >= b}` and rescales it so the normal has unit length.
    pub fn new(w: Vector, b: f64) -> Result<Self> {
        if b.is_nan() || !w.is_finite() {
            return Err(Error::InvalidInput("halfspace coefficients"));
        }
        let n = linalg::norm(&w);
        if n == 0.0 {
            return Err(Error::InvalidDirection);
        }
        Ok(Halfspace {
            normal: Vector::new(linalg::scale(&w, 1.0 / n)),
            offset: b / n,
        })
    }

    pub fn whole(normal: Vector) -> Self {
        Halfspace {
            normal,
            offset: f64::NEG_INFINITY,
        }
    }

    pub fn empty(normal: Vector) -> Self {
        Halfspace {
            normal,
            offset: f64::INFINITY,
        }
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_whole(&self) -> bool {
        self.offset == f64::NEG_INFINITY
    }

    pub fn is_empty(&self) -> bool {
        self.offset == f64::INFINITY
    }

    /// Signed distance `normal.z - offset` (positive inside).
    pub fn slack(&self, z: &[f64]) -> f64 {
        dot(&self.normal, z) - self.offset
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        if self.is_whole() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        self.slack(z) >= -tol
    }
}

/// Finitely generated convex cone with cached dual generators.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCone {
    dim: usize,
    generators: Vec<Vector>,
    dual_generators: Vec<Vector>,
    tol: f64,
}

impl ConvexCone {
    /// Cone generated by `generators`; the dual is computed for `dim <= 3`.
    pub fn from_generators(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        let generators = clean_generators(dim, generators)?;
        if dim > 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        let dual_generators = compute_dual_generators(dim, &generators, DEFAULT_TOL);
        Ok(ConvexCone {
            dim,
            generators,
            dual_generators,
            tol: DEFAULT_TOL,
        })
    }

    /// Cone with user-supplied dual generators (required for `dim > 3`).
    ///
    /// Only the pairing `w.v >= -tol` is verified; that the duals generate
    /// all of `C+` is the caller's responsibility.
    pub fn with_dual_generators(
        dim: usize,
        generators: Vec<Vector>,
        dual_generators: Vec<Vector>,
    ) -> Result<Self> {
        let generators = clean_generators(dim, generators)?;
        let dual_generators = clean_generators(dim, dual_generators)?;
        for w in &dual_generators {
            for v in &generators {
                if dot(w, v) < -DEFAULT_TOL {
                    return Err(Error::InvalidInput("dual_generators: pairing w.v >= 0 violated"));
                }
            }
        }
        Ok(ConvexCone {
            dim,
            generators,
            dual_generators,
            tol: DEFAULT_TOL,
        })
    }

    /// Nonnegative orthant; self-dual.
    pub fn orthant(dim: usize) -> Self {
        let units: Vec<Vector> = (0..dim).map(|i| Vector::unit(dim, i)).collect();
        ConvexCone {
            dim,
            generators: units.clone(),
            dual_generators: units,
            tol: DEFAULT_TOL,
        }
    }

    /// The trivial cone `{0}`, whose dual is all of R^d. The induced
    /// preorder is equality and the lower C-distribution function is the
    /// Tukey depth.
    pub fn zero(dim: usize) -> Self {
        let mut duals = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            duals.push(Vector::unit(dim, i));
            let mut m = Vector::unit(dim, i);
            m[i] = -1.0;
            duals.push(m);
        }
        ConvexCone {
            dim,
            generators: Vec::new(),
            dual_generators: duals,
            tol: DEFAULT_TOL,
        }
    }

    /// Homogeneous halfspace `H+(w) = {z : w.z >= 0}`; its dual is the ray
    /// spanned by `w`.
    pub fn halfspace(w: Vector) -> Result<Self> {
        let dim = w.dim();
        let u = w.normalized().ok_or(Error::InvalidDirection)?;
        let comp = linalg::complement_basis(&[u.to_vec()], dim, DEFAULT_TOL);
        let mut gens = alloc::vec![u.clone()];
        for c in comp {
            gens.push(Vector::new(linalg::scale(&c, -1.0)));
            gens.push(Vector::new(c));
        }
        Ok(ConvexCone {
            dim,
            generators: gens,
            dual_generators: alloc::vec![u],
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn dual_generators(&self) -> &[Vector] {
        &self.dual_generators
    }

    /// `C+` as a generator cone. Recomputed from the dual generators when
    /// `dim <= 3`; otherwise the roles of the two stored sets are swapped,
    /// which is exact by the bipolar identity.
    pub fn dual_cone(&self) -> ConvexCone {
        let dual_generators = if self.dim <= 3 {
            compute_dual_generators(self.dim, &self.dual_generators, self.tol)
        } else {
            self.generators.clone()
        };
        ConvexCone {
            dim: self.dim,
            generators: self.dual_generators.clone(),
            dual_generators,
            tol: self.tol,
        }
    }

    fn check_dim(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// `z in C`, decided by `w.z >= -tol` for every dual generator `w`.
    pub fn contains(&self, z: &[f64]) -> Result<bool> {
        self.check_dim(z)?;
        Ok(self.dual_generators.iter().all(|w| dot(w, z) >= -self.tol))
    }

    /// `y <=_C z`, i.e. `z - y in C`.
    pub fn leq(&self, y: &[f64], z: &[f64]) -> Result<bool> {
        self.check_dim(y)?;
        self.contains(&linalg::sub(z, y))
    }

    /// `w in C+`: `w.v >= -tol |w|` for every generator `v`.
    pub fn dual_contains(&self, w: &[f64]) -> bool {
        let n = linalg::norm(w);
        self.generators.iter().all(|v| dot(w, v) >= -self.tol * n)
    }

    /// `C+ = {0}`, i.e. `C` is the whole space.
    pub fn dual_is_trivial(&self) -> bool {
        self.dual_generators.is_empty()
    }

    /// `C` contains no line, equivalently `C+` has nonempty interior.
    pub fn is_pointed(&self) -> bool {
        let refs: Vec<&[f64]> = self.dual_generators.iter().map(|v| v.as_slice()).collect();
        linalg::orthonormal_basis(&refs, self.tol).len() == self.dim
    }

    /// Rank of the linear span of the generators.
    pub fn rank(&self) -> usize {
        let refs: Vec<&[f64]> = self.generators.iter().map(|v| v.as_slice()).collect();
        linalg::orthonormal_basis(&refs, self.tol).len()
    }

    /// Shape of `C+ \ {0}` on the unit circle (planar cones only).
    pub fn dual_arc(&self) -> Result<DualArc> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.dual_is_trivial() {
            return Err(Error::DegenerateCone);
        }
        if self.rank() == 0 {
            return Ok(DualArc::Full);
        }
        let dirs = dedup_dirs(self.dual_generators.iter().filter_map(|w| w.normalized()));
        let opposite = |a: &Vector, b: &Vector| linalg::max_abs_diff(a, &linalg::scale(b, -1.0)) < 1e-9;
        for (i, a) in dirs.iter().enumerate() {
            for b in dirs.iter().skip(i + 1) {
                if opposite(a, b) {
                    let others: Vec<&Vector> = dirs
                        .iter()
                        .filter(|d| linalg::max_abs_diff(d, a) >= 1e-9 && linalg::max_abs_diff(d, b) >= 1e-9)
                        .collect();
                    return Ok(match others.first() {
                        None => DualArc::Rays(alloc::vec![angle(a), angle(b)]),
                        Some(p) => {
                            let start = if a[0] * p[1] - a[1] * p[0] > 0.0 { a } else { b };
                            DualArc::Sector {
                                start: angle(start),
                                width: PI,
                            }
                        }
                    });
                }
            }
        }
        if dirs.len() == 1 {
            return Ok(DualArc::Rays(alloc::vec![angle(&dirs[0])]));
        }
        // pointed dual: its extreme rays are the pair spanning the widest angle
        let mut best = (0usize, 1usize, -1.0f64);
        for i in 0..dirs.len() {
            for j in (i + 1)..dirs.len() {
                let c = dot(&dirs[i], &dirs[j]);
                let a = libm::acos(c.clamp(-1.0, 1.0));
                if a > best.2 {
                    best = (i, j, a);
                }
            }
        }
        let (a, b) = (&dirs[best.0], &dirs[best.1]);
        let start = if a[0] * b[1] - a[1] * b[0] >= 0.0 { a } else { b };
        Ok(DualArc::Sector {
            start: angle(start),
            width: best.2,
        })
    }
}

/// `C+ \ {0}` in the plane, parametrized by angle.
#[derive(Clone, Debug, PartialEq)]
pub enum DualArc {
    /// Finitely many isolated rays (a ray or a line).
    Rays(Vec<f64>),
    /// The closed arc `[start, start + width]`, `0 < width <= pi`.
    Sector { start: f64, width: f64 },
    /// The whole circle (`C = {0}`).
    Full,
}

impl DualArc {
    pub fn contains_angle(&self, theta: f64, eps: f64) -> bool {
        match self {
            DualArc::Full => true,
            DualArc::Rays(rays) => rays.iter().any(|&r| angle_dist(r, theta) <= eps),
            DualArc::Sector { start, width } => {
                let rel = wrap(theta - start);
                rel <= width + eps || rel >= 2.0 * PI - eps
            }
        }
    }
}

/// How a [`DirectionSet`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionKind {
    /// Grid augmented with critical directions of a planar configuration.
    Exact2dCritical,
    /// Angular (d=2) or spherical (d>=3) grid plus dual generators.
    Grid,
    /// Only the dual generators (finite `C+ ∩ S^{d-1}`).
    DualGenerators,
}

/// Finite subset of `C+ ∩ S^{d-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet {
    dirs: Vec<Vector>,
    resolution: usize,
    kind: DirectionKind,
}

impl DirectionSet {
    pub fn dirs(&self) -> &[Vector] {
        &self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn kind(&self) -> DirectionKind {
        self.kind
    }

    /// Adds unit directions of `extra` that lie in `C+`.
    pub fn augmented(&self, cone: &ConvexCone, extra: impl IntoIterator<Item = Vector>) -> DirectionSet {
        let mut dirs = self.dirs.clone();
        for e in extra {
            if let Some(u) = e.normalized() {
                if cone.dual_contains(&u) && !dirs.iter().any(|d| linalg::max_abs_diff(d, &u) < 1e-9) {
                    dirs.push(u);
                }
            }
        }
        DirectionSet {
            dirs,
            resolution: self.resolution,
            kind: DirectionKind::Exact2dCritical,
        }
    }
}

/// Discretization of the base `C+ ∩ S^{d-1}`.
///
/// * d = 1: the dual generators.
/// * d = 2: `resolution` equally spaced angles across the arc of `C+`
///   (endpoints included), or around the full circle when `C = {0}`.
/// * d = 3: Fibonacci sphere of `resolution` points filtered to `C+`.
/// * d >= 4: a Kronecker (golden-ratio) sequence pushed to the sphere.
///
/// Dual generators are always included; the output is deterministic.
pub fn direction_base(cone: &ConvexCone, resolution: usize) -> Result<DirectionSet> {
    if resolution == 0 {
        return Err(Error::Config("resolution must be >= 1"));
    }
    if cone.dual_is_trivial() {
        return Err(Error::DegenerateCone);
    }
    let duals: Vec<Vector> = dedup_dirs(cone.dual_generators().iter().filter_map(|w| w.normalized()));
    let dim = cone.dim();
    let (dirs, kind) = match dim {
        1 => (duals, DirectionKind::DualGenerators),
        2 => match cone.dual_arc()? {
            DualArc::Rays(_) => (duals, DirectionKind::DualGenerators),
            DualArc::Sector { start, width } => {
                let angles: Vec<f64> = if resolution == 1 {
                    alloc::vec![start + 0.5 * width]
                } else {
                    (0..resolution)
                        .map(|k| start + width * k as f64 / (resolution - 1) as f64)
                        .collect()
                };
                (merge_planar(&angles, &duals, start), DirectionKind::Grid)
            }
            DualArc::Full => {
                let angles: Vec<f64> = (0..resolution)
                    .map(|k| 2.0 * PI * k as f64 / resolution as f64)
                    .collect();
                (merge_planar(&angles, &duals, 0.0), DirectionKind::Grid)
            }
        },
        3 => {
            let mut dirs = duals.clone();
            for i in 0..duals.len() {
                for j in (i + 1)..duals.len() {
                    if let Some(m) = Vector::new(linalg::add(&duals[i], &duals[j])).normalized() {
                        dirs.push(m);
                    }
                }
            }
            dirs.extend(fibonacci_sphere(resolution));
            let dirs = dedup_dirs(dirs.into_iter().filter(|u| cone.dual_contains(u)));
            (dirs, DirectionKind::Grid)
        }
        _ => {
            let mut dirs = duals.clone();
            dirs.extend(kronecker_sphere(dim, resolution));
            let dirs = dedup_dirs(dirs.into_iter().filter(|u| cone.dual_contains(u)));
            (dirs, DirectionKind::Grid)
        }
    };
    Ok(DirectionSet {
        dirs,
        resolution,
        kind,
    })
}

/// Angle of a planar vector in `[0, 2pi)`.
pub fn angle(v: &[f64]) -> f64 {
    wrap(libm::atan2(v[1], v[0]))
}

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap(theta: f64) -> f64 {
    let t = theta % (2.0 * PI);
    let t = if t < 0.0 { t + 2.0 * PI } else { t };
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(2.0 * PI - d)
}

pub fn unit_at(theta: f64) -> Vector {
    Vector::new(alloc::vec![libm::cos(theta), libm::sin(theta)])
}

/// Grid angles with dual generators substituted for near-coincident grid
/// points, sorted by angle from `start`.
fn merge_planar(angles: &[f64], duals: &[Vector], start: f64) -> Vec<Vector> {
    let mut out: Vec<(f64, Vector)> = duals.iter().map(|d| (wrap(angle(d) - start), d.clone())).collect();
    for &a in angles {
        if duals.iter().any(|d| angle_dist(angle(d), a) < 1e-9) {
            continue;
        }
        let rel = wrap(a - start);
        if out.iter().any(|(r, _)| angle_dist(*r, rel) < 1e-9) {
            continue;
        }
        out.push((rel, unit_at(a)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.into_iter().map(|(_, v)| v).collect()
}

fn fibonacci_sphere(n: usize) -> Vec<Vector> {
    let golden = PI * (3.0 - libm::sqrt(5.0));
    (0..n)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = libm::sqrt((1.0 - y * y).max(0.0));
            let phi = golden * i as f64;
            Vector::new(alloc::vec![r * libm::cos(phi), r * libm::sin(phi), y])
        })
        .collect()
}

/// Low-discrepancy points on `S^{d-1}`: the additive recurrence with the
/// generalized golden ratio, mapped through the normal quantile and
/// normalized.
fn kronecker_sphere(dim: usize, n: usize) -> Vec<Vector> {
    // phi_d is the positive root of x^(d+1) = x + 1
    let mut g = 2.0f64;
    for _ in 0..64 {
        g = libm::pow(1.0 + g, 1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|k| libm::pow(1.0 / g, k as f64) % 1.0).collect();
    (1..=n)
        .filter_map(|i| {
            let x: Vec<f64> = alpha
                .iter()
                .map(|a| normal::quantile((0.5 + a * i as f64) % 1.0))
                .collect();
            Vector::new(x).normalized()
        })
        .collect()
}

fn dedup_dirs(it: impl IntoIterator<Item = Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in it {
        if !out.iter().any(|u| linalg::max_abs_diff(u, &v) < 1e-9) {
            out.push(v);
        }
    }
    out
}

fn clean_generators(dim: usize, gens: Vec<Vector>) -> Result<Vec<Vector>> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim must be >= 1"));
    }
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        if !g.is_finite() {
            return Err(Error::InvalidInput("generators: non-finite coordinate"));
        }
        // zero generators contribute nothing
        if let Some(u) = g.normalized() {
            out.push(u);
        }
    }
    Ok(dedup_dirs(out))
}

/// Generators of `C+` for `dim <= 3`.
///
/// `C+` splits into its lineality space `span(C)^⊥` and the pointed cone
/// `{u in span(C) : u.g >= 0}`. Extreme rays of the pointed part lie on the
/// intersection of `r - 1` constraint hyperplanes (`r = rank C`), so they are
/// found among rotated generators (r = 2) or pairwise cross products (r = 3).
fn compute_dual_generators(dim: usize, gens: &[Vector], tol: f64) -> Vec<Vector> {
    let refs: Vec<&[f64]> = gens.iter().map(|v| v.as_slice()).collect();
    let basis = linalg::orthonormal_basis(&refs, tol);
    let r = basis.len();
    let mut out: Vec<Vector> = Vec::new();
    for n in linalg::complement_basis(&basis, dim, tol) {
        out.push(Vector::new(linalg::scale(&n, -1.0)));
        out.push(Vector::new(n));
    }
    let coords: Vec<Vec<f64>> = gens
        .iter()
        .map(|g| basis.iter().map(|b| dot(g, b)).collect())
        .collect();
    let feasible = |u: &[f64]| coords.iter().all(|g| dot(g, u) >= -tol);
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    match r {
        0 => {}
        1 => {
            candidates.push(alloc::vec![1.0]);
            candidates.push(alloc::vec![-1.0]);
        }
        2 => {
            for g in &coords {
                let t = linalg::rot90(g);
                candidates.push(t.to_vec());
                candidates.push(alloc::vec![-t[0], -t[1]]);
            }
        }
        _ => {
            for i in 0..coords.len() {
                for j in (i + 1)..coords.len() {
                    let c = linalg::cross(&coords[i], &coords[j]);
                    if let Some(u) = linalg::normalize(&c) {
                        candidates.push(linalg::scale(&u, -1.0));
                        candidates.push(u);
                    }
                }
            }
        }
    }
    for u in candidates {
        let Some(u) = linalg::normalize(&u) else { continue };
        if !feasible(&u) {
            continue;
        }
        let mut w = alloc::vec![0.0; dim];
        for (ui, b) in u.iter().zip(&basis) {
            for (wk, bk) in w.iter_mut().zip(b) {
                *wk += ui * bk;
            }
        }
        if let Some(w) = linalg::normalize(&w) {
            out.push(Vector::new(w));
        }
    }
    dedup_dirs(out)
}
