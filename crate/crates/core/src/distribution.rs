//! Probability models for `X`: weighted empirical samples and Gaussians.
//!
//! Every model answers univariate questions about a projection `w.X`:
//! the cdf `Pr{w.X <= t}`, its left limit `Pr{w.X < t}`, the lower quantile
//! `inf{s : Pr{w.X <= s} >= p}` and the dual threshold
//! `sup{r : Pr{w.X < r} < p}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, dot, Vector};
use crate::normal;

/// Slack used whenever a probability mass is compared against a level `p`.
///
/// Uniform samples produce masses `k/n` exactly, so the slack only matters for
/// explicitly weighted samples, whose partial sums carry rounding error.
pub const MASS_TOL: f64 = 1e-12;

/// `mass >= p`, up to [`MASS_TOL`].
#[inline]
pub fn reaches(mass: f64, p: f64) -> bool {
    mass >= p - MASS_TOL
}

#[derive(Clone, Debug, PartialEq)]
enum Weights {
    Uniform,
    Explicit(Vec<f64>),
}

/// `n` points in R^d with nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSample {
    dim: usize,
    points: Vec<Vector>,
    weights: Weights,
}

impl EmpiricalSample {
    /// Uniformly weighted sample.
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let dim = check_points(&points)?;
        Ok(EmpiricalSample {
            dim,
            points,
            weights: Weights::Uniform,
        })
    }

    /// Sample with explicit weights; they must be nonnegative and sum to one
    /// within 1e-12 (they are renormalized to remove that residue).
    pub fn with_weights(points: Vec<Vector>, weights: Vec<f64>) -> Result<Self> {
        let dim = check_points(&points)?;
        if weights.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput("weight: must be finite and nonnegative"));
        }
        let total: f64 = weights.iter().sum();
        if libm::fabs(total - 1.0) > 1e-12 {
            return Err(Error::InvalidInput("weight: weights must sum to 1"));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(EmpiricalSample {
            dim,
            points,
            weights: Weights::Explicit(weights),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.weights, Weights::Uniform)
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Weights::Uniform => 1.0 / self.points.len() as f64,
            Weights::Explicit(w) => w[i],
        }
    }

    /// Weight of point `i` in accumulation units: 1 for uniform samples (so
    /// sums are exact integer counts), the actual weight otherwise.
    #[inline]
    pub(crate) fn unit(&self, i: usize) -> f64 {
        match &self.weights {
            Weights::Uniform => 1.0,
            Weights::Explicit(w) => w[i],
        }
    }

    /// Converts a sum of [`unit`](Self::unit)s into a probability.
    #[inline]
    pub(crate) fn units_to_mass(&self, units: f64) -> f64 {
        match self.weights {
            Weights::Uniform => units / self.points.len() as f64,
            Weights::Explicit(_) => units.clamp(0.0, 1.0),
        }
    }

    /// Same weights, every point translated by `c`.
    pub fn shifted(&self, c: &[f64]) -> Result<Self> {
        if c.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: c.len(),
            });
        }
        Ok(EmpiricalSample {
            dim: self.dim,
            points: self.points.iter().map(|x| Vector::new(linalg::add(x, c))).collect(),
            weights: self.weights.clone(),
        })
    }

    /// Sorted `(value, units)` groups of the projection `w.X`, ties merged.
    fn projected_groups(&self, w: &[f64]) -> Vec<(f64, f64)> {
        let mut proj: Vec<(f64, f64)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, x)| (dot(w, x), self.unit(i)))
            .collect();
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut groups: Vec<(f64, f64)> = Vec::with_capacity(proj.len());
        for (v, u) in proj {
            match groups.last_mut() {
                Some(g) if g.0 == v => g.1 += u,
                _ => groups.push((v, u)),
            }
        }
        groups
    }
}

fn check_points(points: &[Vector]) -> Result<usize> {
    let first = points.first().ok_or(Error::InvalidInput("sample: at least one point required"))?;
    let dim = first.dim();
    if dim == 0 {
        return Err(Error::InvalidInput("sample: points must have dimension >= 1"));
    }
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(Error::InvalidInput("sample: non-finite coordinate"));
        }
    }
    Ok(dim)
}

/// Normal law `N(mu, sigma)` with symmetric positive-semidefinite `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianModel {
    mu: Vector,
    sigma: Vec<Vec<f64>>,
}

impl GaussianModel {
    pub fn new(mu: Vector, sigma: Vec<Vec<f64>>) -> Result<Self> {
        let d = mu.dim();
        if d == 0 || !mu.is_finite() {
            return Err(Error::InvalidInput("mu: must be a finite vector"));
        }
        if sigma.len() != d || sigma.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("sigma: must be a d x d matrix"));
        }
        for i in 0..d {
            for j in 0..d {
                if !sigma[i][j].is_finite() {
                    return Err(Error::InvalidInput("sigma: non-finite entry"));
                }
                if libm::fabs(sigma[i][j] - sigma[j][i]) > 1e-12 {
                    return Err(Error::InvalidInput("sigma: not symmetric"));
                }
            }
        }
        if linalg::symmetric_eigenvalues(&sigma).iter().any(|&e| e < -1e-10) {
            return Err(Error::InvalidInput("sigma: not positive semidefinite"));
        }
        Ok(GaussianModel { mu, sigma })
    }

    pub fn standard(dim: usize) -> Self {
        let sigma = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        GaussianModel {
            mu: Vector::zeros(dim),
            sigma,
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn mu(&self) -> &Vector {
        &self.mu
    }

    pub fn sigma(&self) -> &[Vec<f64>] {
        &self.sigma
    }

    /// Mean and standard deviation of `w.X`; the deviation is reported as 0
    /// when the variance is at rounding level.
    pub fn projection(&self, w: &[f64]) -> (f64, f64) {
        let mean = dot(w, &self.mu);
        let mut var = 0.0;
        let mut scale: f64 = 0.0;
        for (i, row) in self.sigma.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                var += w[i] * s * w[j];
                scale = scale.max(libm::fabs(*s));
            }
        }
        let w2 = dot(w, w);
        if var <= 1e-14 * w2 * scale.max(f64::MIN_POSITIVE) {
            (mean, 0.0)
        } else {
            (mean, libm::sqrt(var))
        }
    }
}

/// The law of `X`.
#[derive(Clone, Debug, PartialEq)]
pub enum DistributionModel {
    Empirical(EmpiricalSample),
    Gaussian(GaussianModel),
}

impl From<EmpiricalSample> for DistributionModel {
    fn from(s: EmpiricalSample) -> Self {
        DistributionModel::Empirical(s)
    }
}

impl From<GaussianModel> for DistributionModel {
    fn from(g: GaussianModel) -> Self {
        DistributionModel::Gaussian(g)
    }
}

impl DistributionModel {
    pub fn dim(&self) -> usize {
        match self {
            DistributionModel::Empirical(s) => s.dim(),
            DistributionModel::Gaussian(g) => g.dim(),
        }
    }

    pub fn as_empirical(&self) -> Option<&EmpiricalSample> {
        match self {
            DistributionModel::Empirical(s) => Some(s),
            DistributionModel::Gaussian(_) => None,
        }
    }

    /// Coordinate-wise box holding the sample, or `mu ± 3 sd` for a Gaussian.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            DistributionModel::Empirical(s) => {
                let mut lo = s.points()[0].to_vec();
                let mut hi = lo.clone();
                for p in s.points() {
                    for k in 0..s.dim() {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                (lo, hi)
            }
            DistributionModel::Gaussian(g) => {
                let d = g.dim();
                let sd: Vec<f64> = (0..d).map(|k| libm::sqrt(g.sigma[k][k].max(0.0))).collect();
                (
                    (0..d).map(|k| g.mu[k] - 3.0 * sd[k]).collect(),
                    (0..d).map(|k| g.mu[k] + 3.0 * sd[k]).collect(),
                )
            }
        }
    }

    fn check_direction(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: w.len(),
            });
        }
        if !w.iter().all(|x| x.is_finite()) || w.iter().all(|&x| x == 0.0) {
            return Err(Error::InvalidDirection);
        }
        Ok(())
    }

    /// `Pr{w.X <= t}`.
    pub fn project_cdf(&self, w: &[f64], t: f64) -> Result<f64> {
        self.check_direction(w)?;
        Ok(self.cdf_unchecked(w, t, false))
    }

    /// `Pr{w.X < t}`.
    pub fn project_strict_cdf(&self, w: &[f64], t: f64) -> Result<f64> {
        self.check_direction(w)?;
        Ok(self.cdf_unchecked(w, t, true))
    }

    pub(crate) fn cdf_unchecked(&self, w: &[f64], t: f64, strict: bool) -> f64 {
        if t == f64::NEG_INFINITY {
            return 0.0;
        }
        if t == f64::INFINITY {
            return 1.0;
        }
        match self {
            DistributionModel::Empirical(s) => {
                let units: f64 = s
                    .points()
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| {
                        let v = dot(w, x);
                        if strict {
                            v < t
                        } else {
                            v <= t
                        }
                    })
                    .map(|(i, _)| s.unit(i))
                    .sum();
                s.units_to_mass(units)
            }
            DistributionModel::Gaussian(g) => {
                let (m, sd) = g.projection(w);
                if sd == 0.0 {
                    let hit = if strict { m < t } else { m <= t };
                    if hit {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    normal::cdf((t - m) / sd)
                }
            }
        }
    }

    /// Lower quantile `inf{s : Pr{w.X <= s} >= p}`; `-inf` at `p = 0`.
    pub fn project_quantile(&self, w: &[f64], p: f64) -> Result<f64> {
        self.check_direction(w)?;
        check_level(p)?;
        Ok(self.quantile_unchecked(w, p))
    }

    pub(crate) fn quantile_unchecked(&self, w: &[f64], p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match self {
            DistributionModel::Empirical(s) => {
                let groups = s.projected_groups(w);
                let mut cum = 0.0;
                for &(v, u) in &groups {
                    cum += u;
                    if reaches(s.units_to_mass(cum), p) {
                        return v;
                    }
                }
                groups.last().map(|g| g.0).unwrap_or(f64::INFINITY)
            }
            DistributionModel::Gaussian(g) => {
                let (m, sd) = g.projection(w);
                if sd == 0.0 {
                    m
                } else {
                    m + sd * normal::quantile(p)
                }
            }
        }
    }

    /// Dual threshold `sup{r : Pr{w.X < r} < p}`, computed from the strict
    /// cdf; `-inf` at `p = 0`.
    pub fn project_strict_sup(&self, w: &[f64], p: f64) -> Result<f64> {
        self.check_direction(w)?;
        check_level(p)?;
        Ok(self.strict_sup_unchecked(w, p))
    }

    pub(crate) fn strict_sup_unchecked(&self, w: &[f64], p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match self {
            DistributionModel::Empirical(s) => {
                // Pr{w.X < r} is constant on (y_j, y_{j+1}] and equals the mass
                // strictly below y_{j+1} there, so the supremum is the largest
                // data value whose strict mass stays below p.
                let groups = s.projected_groups(w);
                let mut below = 0.0;
                let mut best = f64::NEG_INFINITY;
                for &(v, u) in &groups {
                    if !reaches(s.units_to_mass(below), p) {
                        best = v;
                    } else {
                        break;
                    }
                    below += u;
                }
                best
            }
            DistributionModel::Gaussian(g) => {
                let (m, sd) = g.projection(w);
                if sd == 0.0 {
                    m
                } else {
                    m + sd * normal::quantile(p)
                }
            }
        }
    }
}

fn check_level(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput("p: level must lie in [0, 1]"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn uni(xs: &[f64]) -> DistributionModel {
        EmpiricalSample::new(xs.iter().map(|&x| Vector::from([x])).collect())
            .unwrap()
            .into()
    }

    #[test]
    fn empirical_examples() {
        let m = uni(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.project_cdf(&[1.0], 2.5).unwrap(), 0.5);
        assert_eq!(m.project_cdf(&[1.0], 2.0).unwrap(), 0.5);
        assert_eq!(m.project_strict_cdf(&[1.0], 2.0).unwrap(), 0.25);
        assert_eq!(m.project_cdf(&[1.0], f64::NEG_INFINITY).unwrap(), 0.0);
        assert_eq!(m.project_strict_cdf(&[1.0], f64::INFINITY).unwrap(), 1.0);
        assert_eq!(m.project_quantile(&[1.0], 0.5).unwrap(), 2.0);
        assert_eq!(m.project_quantile(&[1.0], 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(m.project_strict_sup(&[1.0], 0.5).unwrap(), 2.0);
        assert_eq!(m.project_strict_sup(&[1.0], 0.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(m.project_quantile(&[1.0], 1.0).unwrap(), 4.0);
        assert_eq!(m.project_strict_sup(&[1.0], 1.0).unwrap(), 4.0);
        assert_eq!(m.project_cdf(&[0.0], 1.0), Err(Error::InvalidDirection));
        assert!(m.project_quantile(&[1.0], 1.5).is_err());
    }

    #[test]
    fn gaussian_examples() {
        let g: DistributionModel = GaussianModel::standard(2).into();
        assert_eq!(g.project_cdf(&[1.0, 0.0], 0.0).unwrap(), 0.5);
        assert_eq!(g.project_quantile(&[1.0, 0.0], 0.5).unwrap(), 0.0);
        assert_eq!(g.project_quantile(&[1.0, 0.0], 1.0).unwrap(), f64::INFINITY);
        let t = 0.3;
        assert_eq!(g.project_cdf(&[1.0, 1.0], t).unwrap(), g.project_strict_cdf(&[1.0, 1.0], t).unwrap());
        // degenerate direction: sigma_w = 0 gives a step at w.mu
        let d: DistributionModel = GaussianModel::new(Vector::from([1.0, 0.0]), vec![vec![1.0, 0.0], vec![0.0, 0.0]])
            .unwrap()
            .into();
        assert_eq!(d.project_cdf(&[0.0, 1.0], 0.0).unwrap(), 1.0);
        assert_eq!(d.project_strict_cdf(&[0.0, 1.0], 0.0).unwrap(), 0.0);
        assert_eq!(d.project_quantile(&[0.0, 1.0], 0.3).unwrap(), 0.0);
        assert_eq!(d.project_strict_sup(&[0.0, 1.0], 0.3).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_models() {
        assert!(EmpiricalSample::new(vec![]).is_err());
        assert!(EmpiricalSample::with_weights(vec![Vector::from([1.0])], vec![0.5]).is_err());
        assert!(GaussianModel::new(Vector::from([0.0, 0.0]), vec![vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(GaussianModel::new(Vector::from([0.0, 0.0]), vec![vec![1.0, 0.1], vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn weighted_quantile() {
        let pts = vec![Vector::from([3.0]), Vector::from([1.0]), Vector::from([2.0])];
        let m: DistributionModel = EmpiricalSample::with_weights(pts, vec![0.5, 0.2, 0.3]).unwrap().into();
        assert!((m.project_cdf(&[1.0], 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.project_quantile(&[1.0], 0.5).unwrap(), 2.0);
        assert_eq!(m.project_quantile(&[1.0], 0.51).unwrap(), 3.0);
        assert_eq!(m.project_strict_sup(&[1.0], 0.51).unwrap(), 3.0);
        assert_eq!(m.project_strict_sup(&[1.0], 0.2).unwrap(), 1.0);
        assert_eq!(m.project_strict_sup(&[1.0], 0.21).unwrap(), 2.0);
    }
}
