//! Set-valued lower cone quantiles `Q(p) = {z : F_C(z) >= p}`.
//!
//! Two pictures of the same set are available. [`QuantileFn::member`] decides
//! membership through `F_C` and is as exact as the underlying cdf.
//! [`QuantileFn::lower_quantile`] intersects the halfspaces
//! `{z : w.z >= q_w(p)}` over the direction set; with finitely many
//! directions that intersection contains the true region.

use alloc::vec::Vec;

use crate::cdf::ConeCdf;
use crate::cone::Halfspace;
use crate::distribution::reaches;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::region::CRegion;

/// The map `p -> Q(p)` attached to a lower cone distribution function.
#[derive(Clone, Debug)]
pub struct QuantileFn {
    cdf: ConeCdf,
}

impl From<ConeCdf> for QuantileFn {
    fn from(cdf: ConeCdf) -> Self {
        QuantileFn { cdf }
    }
}

pub(crate) fn check_level(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput("p: level must lie in [0, 1]"));
    }
    Ok(())
}

impl QuantileFn {
    pub fn new(cdf: ConeCdf) -> Self {
        QuantileFn { cdf }
    }

    pub fn cdf(&self) -> &ConeCdf {
        &self.cdf
    }

    /// `{z : w.z >= q_w(p)}` with `q_w` the lower quantile of `w.X`.
    pub fn w_quantile_halfspace(&self, w: &[f64], p: f64) -> Result<Halfspace> {
        self.cdf.check_direction(w)?;
        check_level(p)?;
        Ok(halfspace_at(w, self.cdf.model().quantile_unchecked(w, p)))
    }

    /// Outer approximation of `Q(p)` over the direction set.
    pub fn lower_quantile(&self, p: f64) -> Result<CRegion> {
        check_level(p)?;
        self.intersect(p, |w| self.cdf.model().quantile_unchecked(w, p))
    }

    /// The same region through the thresholds `sup{r : Pr{w.X < r} < p}`.
    pub fn dual_quantile(&self, p: f64) -> Result<CRegion> {
        check_level(p)?;
        self.intersect(p, |w| self.cdf.model().strict_sup_unchecked(w, p))
    }

    fn intersect(&self, p: f64, threshold: impl Fn(&[f64]) -> f64) -> Result<CRegion> {
        let cone = self.cdf.cone().clone();
        if p <= 0.0 {
            return Ok(CRegion::whole(cone));
        }
        let hs: Vec<Halfspace> = self
            .cdf
            .dirs()
            .dirs()
            .iter()
            .map(|w| halfspace_at(w, threshold(w)))
            .collect();
        CRegion::hrep(cone, hs)
    }

    /// `z in Q(p)`, i.e. `F_C(z) >= p`.
    pub fn member(&self, p: f64, z: &[f64]) -> Result<bool> {
        check_level(p)?;
        self.cdf.check_point(z)?;
        Ok(p <= 0.0 || reaches(self.cdf.lower_cdf(z)?, p))
    }
}

fn halfspace_at(w: &[f64], b: f64) -> Halfspace {
    let normal = Vector::from(w);
    if b == f64::NEG_INFINITY {
        let n = normal.normalized().unwrap_or(normal);
        Halfspace::whole(n)
    } else if b == f64::INFINITY {
        let n = normal.normalized().unwrap_or(normal);
        Halfspace::empty(n)
    } else {
        Halfspace::new(normal, b).unwrap_or_else(|_| Halfspace::whole(Vector::from(w)))
    }
}
