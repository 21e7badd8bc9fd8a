//! Readers for sample CSVs, Gaussian and cone specs, and generator sets.

use std::fs;
use std::path::Path;

use cone_quantile_core::{ConvexCone, DistributionModel, EmpiricalSample, GaussianModel, GenSet, Vector};
use serde::Deserialize;

use crate::config::{path_string, DataArgs, ModelEcho};
use crate::error::{CliError, CliResult, Field};

/// Numeric rows of a CSV file, with the weight column split off.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub rows: Vec<Vec<f64>>,
    pub weights: Option<Vec<f64>>,
}

/// Reads a numeric CSV. A first row that does not parse as numbers is a
/// header; a header whose last name is `weight` marks a weight column.
/// Blank lines and lines starting with `#` are skipped.
pub fn read_table(path: &Path, field: &str) -> CliResult<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::input(field, format!("{}: {e}", path_string(path))))?;
    let mut rows = Vec::new();
    let mut weighted = false;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(field, format!("{}: {e}", path_string(path))))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => {
                if let Some(c) = values.iter().position(|v| !v.is_finite()) {
                    return Err(CliError::input(field, format!("line {line}, column {}: non-finite value", c + 1)));
                }
                rows.push(values);
            }
            Err(_) if i == 0 => {
                weighted = record.iter().next_back().is_some_and(|h| h.eq_ignore_ascii_case("weight"));
            }
            Err(e) => return Err(CliError::input(field, format!("line {line}: {e}"))),
        }
    }
    if rows.is_empty() {
        return Err(CliError::input(field, format!("{}: no data rows", path_string(path))));
    }
    let weights = if weighted {
        let w = rows.iter_mut().map(|r| r.pop().unwrap_or(f64::NAN)).collect();
        if rows[0].is_empty() {
            return Err(CliError::input(field, "weight column without coordinates"));
        }
        Some(w)
    } else {
        None
    };
    Ok(Table { rows, weights })
}

pub fn load_model(args: &DataArgs) -> CliResult<(DistributionModel, ModelEcho)> {
    if let Some(path) = &args.data {
        let table = read_table(path, "data")?;
        let points: Vec<Vector> = table.rows.into_iter().map(Vector::new).collect();
        let n = points.len();
        let weighted = table.weights.is_some();
        let sample = match table.weights {
            Some(w) => EmpiricalSample::with_weights(points, w),
            None => EmpiricalSample::new(points),
        }
        .field("data")?;
        let echo = ModelEcho {
            source: "csv",
            path: path_string(path),
            dim: sample.dim(),
            n: Some(n),
            weighted,
        };
        return Ok((sample.into(), echo));
    }
    let path = args
        .gaussian
        .as_ref()
        .ok_or_else(|| CliError::input("data", "either --data or --gaussian is required"))?;
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct GaussianSpec {
        mu: Vec<f64>,
        sigma: Vec<Vec<f64>>,
    }
    let spec: GaussianSpec = read_json(path, "gaussian")?;
    let model = GaussianModel::new(Vector::new(spec.mu), spec.sigma).field("gaussian")?;
    let echo = ModelEcho {
        source: "gaussian",
        path: path_string(path),
        dim: model.dim(),
        n: None,
        weighted: false,
    };
    Ok((model.into(), echo))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, field: &str) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::input(field, format!("{}: {e}", path_string(path))))
}

fn numbers(s: &str, field: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::input(field, format!("bad number {t:?}")))
        })
        .collect()
}

/// Preset name, `halfspace:<w>`, or a JSON file
/// `{"dim": d, "generators": [...], "dual_generators": [...]}`.
pub fn parse_cone(spec: &str, dim: usize, tol: f64) -> CliResult<ConvexCone> {
    let cone = match spec {
        "orthant" => ConvexCone::orthant(dim),
        "zero" => ConvexCone::zero(dim),
        _ if spec.starts_with("halfspace:") => {
            let w = numbers(&spec["halfspace:".len()..], "cone")?;
            if w.len() != dim {
                return Err(CliError::input("cone", format!("halfspace normal has {} entries, data has dimension {dim}", w.len())));
            }
            ConvexCone::halfspace(Vector::new(w)).field("cone")?
        }
        _ => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct ConeSpec {
                dim: usize,
                generators: Vec<Vec<f64>>,
                dual_generators: Option<Vec<Vec<f64>>>,
            }
            let path = Path::new(spec);
            if !path.exists() {
                return Err(CliError::input(
                    "cone",
                    format!("{spec:?} is neither a preset (orthant, zero, halfspace:<w>) nor a file"),
                ));
            }
            let c: ConeSpec = read_json(path, "cone")?;
            if c.dim != dim {
                return Err(CliError::input("cone", format!("cone dimension {} but data dimension {dim}", c.dim)));
            }
            let gens = c.generators.into_iter().map(Vector::new).collect();
            match c.dual_generators {
                Some(d) => ConvexCone::with_dual_generators(dim, gens, d.into_iter().map(Vector::new).collect()),
                None => ConvexCone::from_generators(dim, gens),
            }
            .field("cone")?
        }
    };
    Ok(cone.with_tol(tol))
}

/// Points of a CSV file, all of dimension `dim`.
pub fn read_points(path: &Path, field: &str, dim: usize) -> CliResult<Vec<Vector>> {
    let table = read_table(path, field)?;
    if table.weights.is_some() {
        return Err(CliError::input(field, "weight column not allowed here"));
    }
    if table.rows[0].len() != dim {
        return Err(CliError::input(field, format!("points have dimension {}, model has {dim}", table.rows[0].len())));
    }
    Ok(table.rows.into_iter().map(Vector::new).collect())
}

/// `{"G": [[...], ...], "rays": [[...], ...]}`; `G` must be nonempty.
pub fn read_genset(path: &Path, field: &str, dim: usize) -> CliResult<GenSet> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct GenSpec {
        #[serde(rename = "G")]
        g: Vec<Vec<f64>>,
        #[serde(default)]
        rays: Vec<Vec<f64>>,
    }
    let spec: GenSpec = read_json(path, field)?;
    if spec.g.is_empty() {
        return Err(CliError::input(field, "G: at least one point required"));
    }
    GenSet::with_rays(
        dim,
        spec.g.into_iter().map(Vector::new).collect(),
        spec.rays.into_iter().map(Vector::new).collect(),
    )
    .field(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_headers_and_weights() {
        let plain = read_table(file("0,0\n1,0.5\n").path(), "data").unwrap();
        assert_eq!(plain.rows, vec![vec![0.0, 0.0], vec![1.0, 0.5]]);
        assert!(plain.weights.is_none());
        let w = read_table(file("x, y, weight\n0,0,0.25\n# note\n1,1,0.75\n").path(), "data").unwrap();
        assert_eq!(w.rows, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(w.weights, Some(vec![0.25, 0.75]));
        let named = read_table(file("a,b\n2,3\n").path(), "data").unwrap();
        assert!(named.weights.is_none());
    }

    #[test]
    fn csv_errors_name_the_line() {
        let e = read_table(file("1,2\n3,x\n").path(), "data").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(read_table(file("1,2\n3\n").path(), "data").is_err());
        assert!(read_table(file("a,b\n").path(), "data").is_err());
        assert!(read_table(file("1,inf\n").path(), "data").is_err());
    }

    #[test]
    fn cone_specs() {
        assert_eq!(parse_cone("orthant", 2, 1e-9).unwrap(), ConvexCone::orthant(2));
        assert!(parse_cone("zero", 3, 1e-9).unwrap().dual_contains(&[-1.0, 2.0, 0.5]));
        let h = parse_cone("halfspace:0,1", 2, 1e-9).unwrap();
        assert!(h.contains(&[5.0, 0.1]).unwrap());
        assert!(parse_cone("halfspace:0,1,2", 2, 1e-9).is_err());
        assert!(parse_cone("nonsense", 2, 1e-9).is_err());
        let f = file(r#"{"dim": 2, "generators": [[1, 0], [1, 1]]}"#);
        let c = parse_cone(f.path().to_str().unwrap(), 2, 1e-9).unwrap();
        assert!(c.contains(&[2.0, 1.0]).unwrap() && !c.contains(&[0.0, 1.0]).unwrap());
    }

    #[test]
    fn generator_sets() {
        let f = file(r#"{"G": [[0, 0], [1, 2]]}"#);
        assert_eq!(read_genset(f.path(), "G", 2).unwrap().points().len(), 2);
        assert!(read_genset(file(r#"{"G": []}"#).path(), "G", 2).is_err());
        assert!(read_genset(file(r#"{"G": [[0, 0, 1]]}"#).path(), "G", 2).is_err());
    }
}
