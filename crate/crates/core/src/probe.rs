//! Regular probe grids used to compare sets pointwise.

use alloc::vec::Vec;

use crate::distribution::DistributionModel;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::region::Rect;

/// `per_axis^d` points spaced evenly over a box, corners included.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeGrid {
    lo: Vec<f64>,
    hi: Vec<f64>,
    per_axis: usize,
}

impl ProbeGrid {
    pub const DEFAULT_PER_AXIS: usize = 41;

    pub fn new(lo: Vec<f64>, hi: Vec<f64>, per_axis: usize) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidInput("grid: bounds must share a positive dimension"));
        }
        if per_axis < 2 {
            return Err(Error::Config("grid: need at least 2 points per axis"));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
            return Err(Error::InvalidInput("grid: need finite lo < hi on every axis"));
        }
        Ok(ProbeGrid { lo, hi, per_axis })
    }

    /// Box around the model's bounding box and `extra` points, widened so
    /// that each side grows by 12.5% of its span (25% in total). Flat axes
    /// get half-width 1.
    pub fn around(model: &DistributionModel, extra: &[Vector], per_axis: usize) -> Result<Self> {
        let (mut lo, mut hi) = model.bounding_box();
        for p in extra {
            if p.dim() != lo.len() {
                return Err(Error::DimensionMismatch {
                    expected: lo.len(),
                    found: p.dim(),
                });
            }
            for k in 0..lo.len() {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        for k in 0..lo.len() {
            let span = hi[k] - lo[k];
            if span > 0.0 {
                lo[k] -= 0.125 * span;
                hi[k] += 0.125 * span;
            } else {
                lo[k] -= 1.0;
                hi[k] += 1.0;
            }
        }
        Self::new(lo, hi, per_axis)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    pub fn len(&self) -> usize {
        self.per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Planar box, if the grid is planar.
    pub fn rect(&self) -> Option<Rect> {
        (self.dim() == 2).then(|| Rect {
            xmin: self.lo[0],
            xmax: self.hi[0],
            ymin: self.lo[1],
            ymax: self.hi[1],
        })
    }

    /// The `i`-th grid point, first axis varying fastest.
    pub fn point(&self, mut i: usize) -> Vector {
        let m = self.per_axis;
        let mut z = Vec::with_capacity(self.dim());
        for k in 0..self.dim() {
            let j = i % m;
            i /= m;
            let t = j as f64 / (m - 1) as f64;
            z.push(if j == m - 1 { self.hi[k] } else { self.lo[k] + t * (self.hi[k] - self.lo[k]) });
        }
        Vector::new(z)
    }

    pub fn points(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}
