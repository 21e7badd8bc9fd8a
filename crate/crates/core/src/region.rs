//! Elements of the lattice of closed convex sets `D` with `D = cl co(D + C)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::cone::{ConvexCone, Halfspace};
use crate::error::{Error, Result};
use crate::linalg::{dot, Vector};
use crate::simplex;

/// How a region is represented.
#[derive(Clone, Debug, PartialEq)]
pub enum RegionShape {
    Whole,
    Empty,
    /// Intersection of halfspaces whose normals lie in `C+`.
    HRep(Vec<Halfspace>),
    /// `cl co(points + cone(rays) + C)`.
    GenRep { points: Vec<Vector>, rays: Vec<Vector> },
}

/// A region stable under addition of the cone.
#[derive(Clone, Debug, PartialEq)]
pub struct CRegion {
    cone: ConvexCone,
    shape: RegionShape,
}

/// Axis-aligned rectangle `[xmin, xmax] x [ymin, ymax]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        if !(xmin < xmax && ymin < ymax) || ![xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("bbox: need finite xmin < xmax and ymin < ymax"));
        }
        Ok(Rect { xmin, xmax, ymin, ymax })
    }

    fn corners(&self) -> Vec<[f64; 2]> {
        vec![
            [self.xmin, self.ymin],
            [self.xmax, self.ymin],
            [self.xmax, self.ymax],
            [self.xmin, self.ymax],
        ]
    }
}

impl CRegion {
    pub fn whole(cone: ConvexCone) -> Self {
        CRegion {
            cone,
            shape: RegionShape::Whole,
        }
    }

    pub fn empty(cone: ConvexCone) -> Self {
        CRegion {
            cone,
            shape: RegionShape::Empty,
        }
    }

    /// Intersection of `halfspaces`. Whole-space halfspaces are dropped, an
    /// empty one makes the region empty, and no constraint at all gives the
    /// whole space.
    pub fn hrep(cone: ConvexCone, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let mut kept = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            if h.normal().dim() != cone.dim() {
                return Err(Error::DimensionMismatch {
                    expected: cone.dim(),
                    found: h.normal().dim(),
                });
            }
            if h.is_empty() {
                return Ok(Self::empty(cone));
            }
            if h.is_whole() {
                continue;
            }
            if !cone.dual_contains(h.normal()) {
                return Err(Error::InvalidInput("halfspaces: normal outside the dual cone"));
            }
            kept.push(h);
        }
        let shape = if kept.is_empty() {
            RegionShape::Whole
        } else {
            RegionShape::HRep(kept)
        };
        Ok(CRegion { cone, shape })
    }

    /// `cl co(points + cone(rays) + C)`; no points means the empty set.
    pub fn genrep(cone: ConvexCone, points: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        for v in points.iter().chain(&rays) {
            if v.dim() != cone.dim() {
                return Err(Error::DimensionMismatch {
                    expected: cone.dim(),
                    found: v.dim(),
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput("generators: non-finite coordinate"));
            }
        }
        if points.is_empty() {
            return Ok(Self::empty(cone));
        }
        Ok(CRegion {
            cone,
            shape: RegionShape::GenRep { points, rays },
        })
    }

    pub fn cone(&self) -> &ConvexCone {
        &self.cone
    }

    pub fn shape(&self) -> &RegionShape {
        &self.shape
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.shape, RegionShape::Whole)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.shape, RegionShape::Empty)
    }

    /// Halfspaces of an hrep region (none for the whole space).
    pub fn halfspaces(&self) -> &[Halfspace] {
        match &self.shape {
            RegionShape::HRep(h) => h,
            _ => &[],
        }
    }

    /// Membership with the cone's tolerance.
    pub fn member(&self, z: &[f64]) -> Result<bool> {
        self.member_tol(z, self.cone.tol())
    }

    pub fn member_tol(&self, z: &[f64], tol: f64) -> Result<bool> {
        if z.len() != self.cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cone.dim(),
                found: z.len(),
            });
        }
        Ok(match &self.shape {
            RegionShape::Whole => true,
            RegionShape::Empty => false,
            RegionShape::HRep(hs) => hs.iter().all(|h| h.contains(z, tol)),
            RegionShape::GenRep { .. } => {
                let scale = z.iter().fold(1.0f64, |a, v| a.max(libm::fabs(*v)));
                self.distance(z)? <= tol * scale
            }
        })
    }

    /// Smallest halfspace slack at `z` (`+inf` for the whole space, `-inf`
    /// for the empty set). Only defined for hrep-like shapes.
    pub fn min_slack(&self, z: &[f64]) -> Result<f64> {
        match &self.shape {
            RegionShape::Whole => Ok(f64::INFINITY),
            RegionShape::Empty => Ok(f64::NEG_INFINITY),
            RegionShape::HRep(hs) => Ok(hs.iter().map(|h| h.slack(z)).fold(f64::INFINITY, f64::min)),
            RegionShape::GenRep { .. } => Err(Error::UnsupportedRegion("min_slack needs halfspaces")),
        }
    }

    /// L1 distance from `z` to the region (generator form: a small LP).
    pub fn distance(&self, z: &[f64]) -> Result<f64> {
        match &self.shape {
            RegionShape::Whole => Ok(0.0),
            RegionShape::Empty => Ok(f64::INFINITY),
            RegionShape::HRep(_) => Err(Error::UnsupportedRegion("distance needs generators")),
            RegionShape::GenRep { points, rays } => {
                let dirs: Vec<&Vector> = rays.iter().chain(self.cone.generators()).collect();
                Ok(l1_distance(z, points, &dirs))
            }
        }
    }

    /// Polygon of `self ∩ bbox`, counter-clockwise, starting at the lowest
    /// (then leftmost) vertex. Planar hrep, whole or empty regions only.
    pub fn vertices_2d(&self, bbox: &Rect) -> Result<Vec<[f64; 2]>> {
        if self.cone.dim() != 2 {
            return Err(Error::UnsupportedDimension(self.cone.dim()));
        }
        let hs = match &self.shape {
            RegionShape::Empty => return Ok(Vec::new()),
            RegionShape::Whole => return Ok(bbox.corners()),
            RegionShape::HRep(hs) => hs,
            RegionShape::GenRep { .. } => return Err(Error::UnsupportedRegion("vertices_2d needs halfspaces")),
        };
        let mut poly = bbox.corners();
        for h in hs {
            poly = clip(&poly, h);
            if poly.is_empty() {
                break;
            }
        }
        let span = (bbox.xmax - bbox.xmin).max(bbox.ymax - bbox.ymin);
        poly.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-12 * span && (a[1] - b[1]).abs() <= 1e-12 * span);
        if poly.len() > 1 {
            let (f, l) = (poly[0], poly[poly.len() - 1]);
            if (f[0] - l[0]).abs() <= 1e-12 * span && (f[1] - l[1]).abs() <= 1e-12 * span {
                poly.pop();
            }
        }
        if poly.len() < 3 {
            return Ok(Vec::new());
        }
        let start = (0..poly.len())
            .min_by(|&i, &j| poly[i][1].total_cmp(&poly[j][1]).then(poly[i][0].total_cmp(&poly[j][0])))
            .unwrap_or(0);
        poly.rotate_left(start);
        Ok(poly)
    }
}

/// Sutherland-Hodgman step against `{normal.z >= offset}`.
fn clip(poly: &[[f64; 2]], h: &Halfspace) -> Vec<[f64; 2]> {
    let n = h.normal();
    let s = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - h.offset();
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (sa, sb) = (s(&a), s(&b));
        if sa >= 0.0 {
            out.push(a);
        }
        if (sa >= 0.0) != (sb >= 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// L1 distance from `z` to `co(points) + cone(dirs)`.
pub(crate) fn l1_distance(z: &[f64], points: &[Vector], dirs: &[&Vector]) -> f64 {
    let d = z.len();
    let (np, nd) = (points.len(), dirs.len());
    let n = np + nd + 2 * d;
    let mut a = vec![vec![0.0; n]; d + 1];
    for k in 0..d {
        for (j, p) in points.iter().enumerate() {
            a[k][j] = p[k];
        }
        for (j, r) in dirs.iter().enumerate() {
            a[k][np + j] = r[k];
        }
        a[k][np + nd + k] = 1.0;
        a[k][np + nd + d + k] = -1.0;
    }
    for j in 0..np {
        a[d][j] = 1.0;
    }
    let mut b = z.to_vec();
    b.push(1.0);
    let mut c = vec![0.0; n];
    for v in c.iter_mut().skip(np + nd) {
        *v = 1.0;
    }
    match simplex::minimize(&a, &b, &c) {
        Some((v, _)) => v.max(0.0),
        None => f64::INFINITY,
    }
}

/// `min_g w.g` over generator points, or `-inf` when some ray has `w.r < 0`.
pub(crate) fn support_min(w: &[f64], points: &[Vector], rays: &[Vector], tol: f64) -> f64 {
    if rays.iter().any(|r| dot(w, r) < -tol * crate::linalg::norm(r)) {
        return f64::NEG_INFINITY;
    }
    points.iter().map(|g| dot(w, g)).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bbox() -> Rect {
        Rect::new(-1.0, 2.0, -1.0, 2.0).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = ConvexCone::orthant(2);
        assert!(CRegion::whole(c.clone()).member(&[1e9, -1e9]).unwrap());
        let g = CRegion::genrep(c.clone(), vec![Vector::from([1.0, 1.0])], vec![]).unwrap();
        assert!(g.member(&[2.0, 1.0]).unwrap());
        assert!(!g.member(&[0.0, 1.0]).unwrap());
        assert!((g.distance(&[0.0, 0.5]).unwrap() - 1.5).abs() < 1e-12);
        let h = CRegion::hrep(
            c.clone(),
            vec![
                Halfspace::new(Vector::from([1.0, 0.0]), 0.0).unwrap(),
                Halfspace::new(Vector::from([0.0, 1.0]), 0.0).unwrap(),
            ],
        )
        .unwrap();
        assert!(!h.member(&[1.0, -0.1]).unwrap());
        assert!(h.member(&[1.0, 0.0]).unwrap());
    }

    #[test]
    fn genrep_with_segment_and_rays() {
        let c = ConvexCone::zero(2);
        let g = CRegion::genrep(
            c,
            vec![Vector::from([0.0, 0.0]), Vector::from([2.0, 0.0])],
            vec![Vector::from([0.0, 1.0])],
        )
        .unwrap();
        assert!(g.member(&[1.0, 0.0]).unwrap());
        assert!(g.member(&[1.5, 30.0]).unwrap());
        assert!(!g.member(&[1.0, -0.1]).unwrap());
        assert!(!g.member(&[2.1, 3.0]).unwrap());
    }

    #[test]
    fn polygon_examples() {
        let c = ConvexCone::orthant(2);
        let h = CRegion::hrep(
            c.clone(),
            vec![
                Halfspace::new(Vector::from([1.0, 0.0]), 0.0).unwrap(),
                Halfspace::new(Vector::from([0.0, 1.0]), 0.0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(h.vertices_2d(&bbox()).unwrap(), vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]);
        assert_eq!(CRegion::whole(c.clone()).vertices_2d(&bbox()).unwrap().len(), 4);
        let far = CRegion::hrep(c, vec![Halfspace::new(Vector::from([1.0, 0.0]), 3.0).unwrap()]).unwrap();
        assert!(far.vertices_2d(&bbox()).unwrap().is_empty());
    }

    #[test]
    fn hrep_normalizes_trivial_halfspaces() {
        let c = ConvexCone::orthant(2);
        let w = Vector::from([1.0, 0.0]);
        assert!(CRegion::hrep(c.clone(), vec![Halfspace::whole(w.clone())]).unwrap().is_whole());
        assert!(CRegion::hrep(c.clone(), vec![Halfspace::empty(w)]).unwrap().is_empty());
        assert!(CRegion::hrep(c, vec![Halfspace::new(Vector::from([-1.0, 0.0]), 0.0).unwrap()]).is_err());
    }
}
