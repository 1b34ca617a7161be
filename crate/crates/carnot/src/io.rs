//! File formats: group spec documents (JSON), point/measure tables (CSV in
//! the block coordinate layout, optional weight column), and transport-plan
//! documents (JSON).
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces every coordinate bit-exactly and identical
//! inputs produce byte-identical files.

use std::fmt::Write as _;

use thiserror::Error;

use crate::group::{GroupSpec, Point};
use crate::transport::{DiscreteMeasure, TransportError, TransportPlan};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("expected {expected} columns, got {got} on line {line}")]
    ColumnCount { line: usize, expected: usize, got: usize },
    #[error("empty table")]
    Empty,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Measure(#[from] TransportError),
}

/// Column header for the block layout, e.g. `x0_1,b1_1,b1_2,z`.
pub fn csv_header(spec: &GroupSpec, with_weight: bool) -> String {
    let mut cols = Vec::with_capacity(spec.dim() + 1);
    for i in 0..spec.kernel_dim() {
        cols.push(format!("x0_{}", i + 1));
    }
    for b in 0..spec.num_blocks() {
        cols.push(format!("b{}_1", b + 1));
        cols.push(format!("b{}_2", b + 1));
    }
    cols.push("z".to_string());
    if with_weight {
        cols.push("w".to_string());
    }
    cols.join(",")
}

/// Renders points (and optionally weights) as CSV.
pub fn points_to_csv(spec: &GroupSpec, points: &[Point], weights: Option<&[f64]>) -> String {
    let mut out = String::new();
    out.push_str(&csv_header(spec, weights.is_some()));
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        let coords = p.coords();
        for (k, c) in coords.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{c}");
        }
        if let Some(w) = weights {
            let _ = write!(out, ",{}", w[i]);
        }
        out.push('\n');
    }
    out
}

/// Renders a measure as CSV with its weight column.
pub fn measure_to_csv(spec: &GroupSpec, mu: &DiscreteMeasure) -> String {
    points_to_csv(spec, &mu.points, Some(&mu.weights))
}

fn parse_rows(spec: &GroupSpec, text: &str) -> Result<(Vec<Point>, Option<Vec<f64>>), IoError> {
    let dim = spec.dim();
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(IoError::Empty)?;
    let ncols = header.split(',').count();
    let with_weight = match ncols {
        n if n == dim => false,
        n if n == dim + 1 => true,
        got => return Err(IoError::ColumnCount { line: 1, expected: dim, got }),
    };
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != ncols {
            return Err(IoError::ColumnCount { line: idx + 1, expected: ncols, got: fields.len() });
        }
        let mut vals = Vec::with_capacity(ncols);
        for f in &fields {
            vals.push(f.trim().parse::<f64>().map_err(|e| IoError::Parse {
                line: idx + 1,
                msg: format!("bad number {f:?}: {e}"),
            })?);
        }
        if with_weight {
            weights.push(vals.pop().expect("weight column"));
        }
        points.push(Point::from_coords(spec, &vals));
    }
    if points.is_empty() {
        return Err(IoError::Empty);
    }
    Ok((points, with_weight.then_some(weights)))
}

/// Parses a CSV table of points; ignores a weight column if present.
pub fn points_from_csv(spec: &GroupSpec, text: &str) -> Result<Vec<Point>, IoError> {
    Ok(parse_rows(spec, text)?.0)
}

/// Parses a measure from CSV. Without a weight column the measure is
/// uniform.
pub fn measure_from_csv(spec: &GroupSpec, text: &str) -> Result<DiscreteMeasure, IoError> {
    let (points, weights) = parse_rows(spec, text)?;
    match weights {
        Some(w) => Ok(DiscreteMeasure::new(spec, points, w)?),
        None => Ok(DiscreteMeasure::uniform(spec, points)),
    }
}

/// Parses a spec document: `{"kernel_dim": …, "alphas": […]}`.
pub fn spec_from_json(text: &str) -> Result<GroupSpec, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn spec_to_json(spec: &GroupSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// Serializes a transport plan (pairs with their geodesic parameters and
/// classes, total cost, duals).
pub fn plan_to_json(plan: &TransportPlan) -> String {
    serde_json::to_string_pretty(plan).expect("plan serializes")
}

pub fn plan_from_json(text: &str) -> Result<TransportPlan, IoError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::transport::solve_ot;

    #[test]
    fn csv_round_trip_is_lossless() {
        let spec = GroupSpec::new(1, vec![1.0, 4.0]).unwrap();
        let mut rng = sample::rng_for(61, 0);
        let points: Vec<Point> = (0..40)
            .map(|_| sample::random_point(&mut rng, &spec, -2.0, 2.0))
            .collect();
        let mu = DiscreteMeasure::uniform(&spec, points);
        let text = measure_to_csv(&spec, &mu);
        let back = measure_from_csv(&spec, &text).unwrap();
        assert_eq!(back.points, mu.points);
        assert_eq!(back.weights, mu.weights);
        // byte-identical re-render
        assert_eq!(measure_to_csv(&spec, &back), text);
    }

    #[test]
    fn header_layout() {
        let spec = GroupSpec::new(2, vec![4.0]).unwrap();
        assert_eq!(csv_header(&spec, true), "x0_1,x0_2,b1_1,b1_2,z,w");
        let h1 = GroupSpec::new(0, vec![4.0]).unwrap();
        assert_eq!(csv_header(&h1, false), "b1_1,b1_2,z");
    }

    #[test]
    fn weightless_csv_reads_uniform() {
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        let text = "b1_1,b1_2,z\n1,0,0\n0,1,0\n";
        let mu = measure_from_csv(&spec, text).unwrap();
        assert_eq!(mu.weights, vec![0.5, 0.5]);
    }

    #[test]
    fn csv_errors_are_specific() {
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        assert!(matches!(measure_from_csv(&spec, ""), Err(IoError::Empty)));
        assert!(matches!(
            measure_from_csv(&spec, "a,b\n1,2\n"),
            Err(IoError::ColumnCount { .. })
        ));
        assert!(matches!(
            measure_from_csv(&spec, "b1_1,b1_2,z\n1,oops,3\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = GroupSpec::new(1, vec![2.0, 4.0]).unwrap();
        let text = spec_to_json(&spec);
        assert_eq!(spec_from_json(&text).unwrap(), spec);
        assert!(spec_from_json(r#"{"kernel_dim":0,"alphas":[]}"#).is_err());
    }

    #[test]
    fn plan_json_round_trip() {
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        let mut rng = sample::rng_for(62, 0);
        let pts0: Vec<Point> =
            (0..5).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let pts1: Vec<Point> =
            (0..5).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let mu0 = DiscreteMeasure::uniform(&spec, pts0);
        let mu1 = DiscreteMeasure::uniform(&spec, pts1);
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        let text = plan_to_json(&plan);
        let back = plan_from_json(&text).unwrap();
        assert_eq!(back.pairs.len(), plan.pairs.len());
        assert_eq!(back.cost, plan.cost);
        assert_eq!(plan_to_json(&back), text);
    }
}
