//! The w-distribution function `F_w(z) = Pr{w.X <= w.z}`, the lower cone
//! distribution function `F_C(z) = inf_{w in C+ \ {0}} F_w(z)` and the point
//! rankings built from them.

use core::cmp::Ordering;

use crate::cone::{direction_base, unit_at, wrap, ConvexCone, DirectionSet, DualArc};
use crate::distribution::{DistributionModel, EmpiricalSample, MASS_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, Vector};
use crate::sweep::{self, ArcField, Domain};

/// Value of `F_C(z)` together with a direction attaining (or approaching) it.
#[derive(Clone, Debug, PartialEq)]
pub struct CdfValue {
    pub value: f64,
    pub direction: Vector,
}

/// Outcome of comparing two points under the family `{F_w : w in C+}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiComparison {
    LessOrEqual,
    GreaterOrEqual,
    Equal,
    Incomparable,
}

impl PhiComparison {
    fn from_flags(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => PhiComparison::Equal,
            (true, false) => PhiComparison::LessOrEqual,
            (false, true) => PhiComparison::GreaterOrEqual,
            (false, false) => PhiComparison::Incomparable,
        }
    }

    /// `z1 <=_Phi z2` (includes `Equal`).
    pub fn is_le(self) -> bool {
        matches!(self, PhiComparison::LessOrEqual | PhiComparison::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, PhiComparison::GreaterOrEqual | PhiComparison::Equal)
    }
}

/// Lower cone distribution function of a model under a cone order.
///
/// For an empirical sample in the plane (`exact2d`), infima over `C+` are
/// exact: an angular sweep visits every distinct value of `w -> F_w(z)`.
/// Otherwise they are minima over the direction set, which bound the true
/// infimum from above; Gaussian planar models additionally refine the grid
/// minimum by golden-section search.
#[derive(Clone, Debug)]
pub struct ConeCdf {
    model: DistributionModel,
    cone: ConvexCone,
    dirs: DirectionSet,
    exact2d: bool,
}

impl ConeCdf {
    /// Uses [`direction_base`] at `resolution`; the exact planar path is
    /// switched on whenever it applies.
    pub fn new(model: impl Into<DistributionModel>, cone: ConvexCone, resolution: usize) -> Result<Self> {
        let dirs = direction_base(&cone, resolution)?;
        let model = model.into();
        let exact2d = model.as_empirical().is_some() && model.dim() == 2;
        Self::with_directions(model, cone, dirs, exact2d)
    }

    /// Tukey depth: the zero cone, whose dual is the whole space.
    pub fn tukey(model: impl Into<DistributionModel>, resolution: usize) -> Result<Self> {
        let model = model.into();
        let d = model.dim();
        Self::new(model, ConvexCone::zero(d), resolution)
    }

    pub fn with_directions(
        model: impl Into<DistributionModel>,
        cone: ConvexCone,
        dirs: DirectionSet,
        exact2d: bool,
    ) -> Result<Self> {
        let model = model.into();
        if model.dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                found: model.dim(),
            });
        }
        if cone.dual_is_trivial() {
            return Err(Error::DegenerateCone);
        }
        if exact2d && (model.as_empirical().is_none() || model.dim() != 2) {
            return Err(Error::InvalidInput("exact2d: needs an empirical model in dimension 2"));
        }
        if dirs.is_empty() || dirs.dirs().iter().any(|w| w.dim() != cone.dim() || !cone.dual_contains(w)) {
            return Err(Error::InvalidInput("directions: must be nonempty and lie in the dual cone"));
        }
        Ok(ConeCdf {
            model,
            cone,
            dirs,
            exact2d,
        })
    }

    /// Same function, evaluated only over the direction grid.
    pub fn grid_only(mut self) -> Self {
        self.exact2d = false;
        self
    }

    pub fn model(&self) -> &DistributionModel {
        &self.model
    }

    pub fn cone(&self) -> &ConvexCone {
        &self.cone
    }

    pub fn dirs(&self) -> &DirectionSet {
        &self.dirs
    }

    pub fn is_exact2d(&self) -> bool {
        self.exact2d
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub(crate) fn check_point(&self, z: &[f64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: z.len(),
            });
        }
        if !z.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInput("point: non-finite coordinate"));
        }
        Ok(())
    }

    pub(crate) fn check_direction(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: w.len(),
            });
        }
        if linalg::norm(w) == 0.0 || !w.iter().all(|x| x.is_finite()) || !self.cone.dual_contains(w) {
            return Err(Error::InvalidDirection);
        }
        Ok(())
    }

    /// The sweep domain and sample, when infima can be taken exactly.
    pub(crate) fn exact_domain(&self) -> Option<(Domain, &EmpiricalSample)> {
        if !self.exact2d {
            return None;
        }
        let arc = self.cone.dual_arc().ok()?;
        Some((Domain::from_arc(&arc)?, self.model.as_empirical()?))
    }

    /// Field counting `#{i : w.(x_i - z) <= 0}` in accumulation units.
    pub(crate) fn count_field(sample: &EmpiricalSample, z: &[f64]) -> ArcField {
        let mut f = ArcField::new();
        for (i, x) in sample.points().iter().enumerate() {
            f.add_nonpos(&[x[0] - z[0], x[1] - z[1]], sample.unit(i));
        }
        f
    }

    /// `F_w(z) = Pr{w.X <= w.z}` for `w in C+ \ {0}`.
    pub fn w_cdf(&self, w: &[f64], z: &[f64]) -> Result<f64> {
        self.check_direction(w)?;
        self.check_point(z)?;
        Ok(self.model.cdf_unchecked(w, dot(w, z), false))
    }

    #[inline]
    pub(crate) fn w_cdf_unchecked(&self, w: &[f64], z: &[f64]) -> f64 {
        self.model.cdf_unchecked(w, dot(w, z), false)
    }

    /// `F_C(z)`.
    pub fn lower_cdf(&self, z: &[f64]) -> Result<f64> {
        Ok(self.lower_cdf_at(z)?.value)
    }

    /// `F_C(z)` with a minimizing direction.
    pub fn lower_cdf_at(&self, z: &[f64]) -> Result<CdfValue> {
        self.check_point(z)?;
        if let Some((domain, sample)) = self.exact_domain() {
            let (units, theta) = sweep::min_single(&Self::count_field(sample, z), domain);
            return Ok(CdfValue {
                value: sample.units_to_mass(units),
                direction: unit_at(theta),
            });
        }
        let (k, value) = self.grid_min(z);
        let mut best = CdfValue {
            value,
            direction: self.dirs.dirs()[k].clone(),
        };
        if matches!(self.model, DistributionModel::Gaussian(_)) && self.dim() == 2 {
            self.refine_planar(z, k, &mut best);
        }
        Ok(best)
    }

    fn grid_min(&self, z: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (k, w) in self.dirs.dirs().iter().enumerate() {
            let v = self.w_cdf_unchecked(w, z);
            if v < best.1 {
                best = (k, v);
            }
        }
        best
    }

    /// Golden-section search on the arc between the grid neighbours of the
    /// grid minimizer.
    fn refine_planar(&self, z: &[f64], k: usize, best: &mut CdfValue) {
        let Ok(arc) = self.cone.dual_arc() else { return };
        if matches!(arc, DualArc::Rays(_)) || self.dirs.len() < 2 {
            return;
        }
        let dirs = self.dirs.dirs();
        let n = dirs.len();
        let full = matches!(arc, DualArc::Full);
        let theta = crate::cone::angle(&dirs[k]);
        let left = if k > 0 {
            Some(k - 1)
        } else if full {
            Some(n - 1)
        } else {
            None
        };
        let right = if k + 1 < n {
            Some(k + 1)
        } else if full {
            Some(0)
        } else {
            None
        };
        let lo = left.map_or(theta, |j| theta - wrap(theta - crate::cone::angle(&dirs[j])));
        let hi = right.map_or(theta, |j| theta + wrap(crate::cone::angle(&dirs[j]) - theta));
        if hi - lo <= 0.0 {
            return;
        }
        let f = |t: f64| self.w_cdf_unchecked(&unit_at(t), z);
        let (t, v) = golden_min(f, lo, hi);
        if v < best.value && arc.contains_angle(t, 1e-12) {
            *best = CdfValue {
                value: v,
                direction: unit_at(t),
            };
        }
    }

    /// Tukey halfspace depth; requires the zero cone.
    pub fn tukey_depth(&self, z: &[f64]) -> Result<f64> {
        if self.cone.rank() != 0 {
            return Err(Error::InvalidInput("cone: depth requires the zero cone"));
        }
        self.lower_cdf(z)
    }

    /// Total preorder `<=_Psi`: compares `F_C(z1)` with `F_C(z2)`.
    pub fn rank_psi(&self, z1: &[f64], z2: &[f64]) -> Result<Ordering> {
        let a = self.lower_cdf(z1)?;
        let b = self.lower_cdf(z2)?;
        Ok(compare_mass(a, b))
    }

    /// Partial preorder `<=_Phi`: `F_w(z1) <= F_w(z2)` for every direction.
    pub fn rank_phi(&self, z1: &[f64], z2: &[f64]) -> Result<PhiComparison> {
        self.check_point(z1)?;
        self.check_point(z2)?;
        let mut le = true;
        let mut ge = true;
        if let Some((domain, sample)) = self.exact_domain() {
            let fields = [Self::count_field(sample, z1), Self::count_field(sample, z2)];
            sweep::sweep(&fields, domain, |_, v| {
                let (a, b) = (sample.units_to_mass(v[0]), sample.units_to_mass(v[1]));
                match compare_mass(a, b) {
                    Ordering::Less => ge = false,
                    Ordering::Greater => le = false,
                    Ordering::Equal => {}
                }
            });
        } else {
            for w in self.dirs.dirs() {
                match compare_mass(self.w_cdf_unchecked(w, z1), self.w_cdf_unchecked(w, z2)) {
                    Ordering::Less => ge = false,
                    Ordering::Greater => le = false,
                    Ordering::Equal => {}
                }
            }
        }
        Ok(PhiComparison::from_flags(le, ge))
    }
}

/// Orders two probabilities, treating differences within [`MASS_TOL`] as ties.
pub fn compare_mass(a: f64, b: f64) -> Ordering {
    if a < b - MASS_TOL {
        Ordering::Less
    } else if a > b + MASS_TOL {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..100 {
        if b - a < 1e-13 {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for t in [a, b] {
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}
