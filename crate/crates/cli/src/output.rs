//! JSON records, file writing and SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cone_quantile_core::linalg::dot;
use cone_quantile_core::{CRegion, Rect, RegionShape};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult, Field};

/// Top-level output: the configuration echo next to the results.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub config: &'a RunConfig,
    pub results: T,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct HalfspaceJson {
    pub w: Vec<f64>,
    pub b: f64,
}

/// A region as `{w.z >= b}` constraints. No constraints means the whole
/// space unless `empty` is set.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RegionJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    pub halfspaces: Vec<HalfspaceJson>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub empty: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub polygon: Option<Vec<[f64; 2]>>,
}

impl RegionJson {
    pub fn new(region: &CRegion, p: Option<f64>, bbox: Option<&Rect>) -> CliResult<Self> {
        let halfspaces = region
            .halfspaces()
            .iter()
            .map(|h| HalfspaceJson {
                w: h.normal().to_vec(),
                b: h.offset(),
            })
            .collect();
        let polygon = match bbox {
            Some(r) if region.cone().dim() == 2 => Some(region.vertices_2d(r).field("region")?),
            _ => None,
        };
        Ok(RegionJson {
            p,
            halfspaces,
            empty: matches!(region.shape(), RegionShape::Empty),
            polygon,
        })
    }

    /// Membership by the library's rule `w.z - b >= -tol`.
    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        !self.empty && self.halfspaces.iter().all(|h| dot(&h.w, z) - h.b >= -tol)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::input("output", e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `bytes` to `path` if given; otherwise returns them for stdout.
pub fn emit(bytes: Vec<u8>, path: Option<&PathBuf>) -> CliResult<Vec<u8>> {
    match path {
        Some(p) => {
            write_file(p, &bytes)?;
            Ok(Vec::new())
        }
        None => Ok(bytes),
    }
}

const PALETTE: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

/// Sample points and one closed path per region (empty for an empty
/// region), drawn inside `bbox`.
pub fn svg(points: &[[f64; 2]], regions: &[(f64, Vec<[f64; 2]>)], bbox: &Rect) -> String {
    const SIZE: f64 = 600.0;
    const PAD: f64 = 20.0;
    let inner = SIZE - 2.0 * PAD;
    let sx = |x: f64| PAD + (x - bbox.xmin) / (bbox.xmax - bbox.xmin) * inner;
    let sy = |y: f64| PAD + (bbox.ymax - y) / (bbox.ymax - bbox.ymin) * inner;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="{PAD}" y="{PAD}" width="{inner}" height="{inner}" fill="white" stroke="#999"/>"##
    );
    for (i, (p, poly)) in regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (k, v) in poly.iter().enumerate() {
            let _ = write!(d, "{}{:.3},{:.3} ", if k == 0 { "M" } else { "L" }, sx(v[0]), sy(v[1]));
        }
        if !poly.is_empty() {
            d.push('Z');
        }
        let _ = writeln!(
            s,
            r#"<path d="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"><title>p = {p}</title></path>"#,
            d.trim_end()
        );
    }
    for pt in points {
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="2.5" fill="black"/>"#, sx(pt[0]), sy(pt[1]));
    }
    s.push_str("</svg>\n");
    s
}
