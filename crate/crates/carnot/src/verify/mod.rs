//! Numerical certification of the calculus identities and comparison
//! inequalities satisfied by the group geometry: Monte Carlo measure
//! estimation on voxel grids, histogram densities, entropy functionals,
//! and machine-readable pass/fail reports.
//!
//! Every verifier computes both sides of its inequality independently and
//! applies one-sided slack in the direction that makes the check harder to
//! pass. Reports are deterministic for a fixed seed (modulo the recorded
//! wall-clock runtime); parallel sampling uses per-chunk RNG streams and
//! order-independent reductions.

mod checks;

pub use checks::*;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Point;
use crate::transport::TransportError;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("point {0:?} lies outside the voxel bounding box")]
    OutsideBox(Vec<f64>),
    #[error("voxel grid too fine: {0} addressable cells exceed the budget")]
    GridTooLarge(u128),
    #[error("entropy functional fails admissibility: {0}")]
    InadmissibleEntropy(String),
    #[error("histogram mass defect {0} exceeds 1e-6")]
    MassDefect(f64),
    #[error("exponent {p} below the admissible bound {bound}")]
    InadmissibleExponent { p: f64, bound: f64 },
    #[error("step-function grid of {0} cells exceeds the budget of 10000")]
    StepGridTooLarge(usize),
    #[error(transparent)]
    Transport(#[from] TransportError),
}

/// Axis-aligned box in flat coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "bounds must have equal dimension");
        assert!(
            lo.iter().zip(&hi).all(|(a, b)| a.is_finite() && b.is_finite() && a < b),
            "box must have positive finite extent on every axis"
        );
        BoundingBox { lo, hi }
    }

    /// Cube `[center − side/2, center + side/2]^dim`.
    pub fn cube(center: &[f64], side: f64) -> Self {
        BoundingBox::new(
            center.iter().map(|c| c - 0.5 * side).collect(),
            center.iter().map(|c| c + 0.5 * side).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && coords
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (lo, hi))| *c >= *lo && *c <= *hi)
    }

    /// Uniform sample in flat coordinates.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(lo, hi)| rng.random_range(*lo..*hi))
            .collect()
    }

    /// Smallest box containing all given coordinate tuples.
    pub fn hull<'a>(mut points: impl Iterator<Item = &'a [f64]>) -> Option<Self> {
        let first = points.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in points {
            for (k, &c) in p.iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        Some(BoundingBox {
            lo: lo.iter().map(|v| v - 1e-9).collect(),
            hi: hi.iter().map(|v| v + 1e-9).collect(),
        })
    }

    pub fn padded(&self, pad: f64) -> Self {
        BoundingBox::new(
            self.lo.iter().map(|v| v - pad).collect(),
            self.hi.iter().map(|v| v + pad).collect(),
        )
    }
}

/// Occupancy grid over a bounding box with cubic cells of edge `h`;
/// the outer-measure estimator `|occupied| · h^dim`.
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    bounds: BoundingBox,
    h: f64,
    strides: Vec<u64>,
    dims: Vec<u64>,
    occupied: std::collections::BTreeSet<u64>,
}

impl VoxelGrid {
    pub fn new(bounds: BoundingBox, h: f64) -> Result<Self, VerifyError> {
        assert!(h > 0.0 && h.is_finite(), "cell edge must be positive");
        let dims: Vec<u64> = bounds
            .lo
            .iter()
            .zip(&bounds.hi)
            .map(|(lo, hi)| (((hi - lo) / h).ceil() as u64).max(1))
            .collect();
        let mut total: u128 = 1;
        for &d in &dims {
            total = total.saturating_mul(d as u128);
        }
        if total > 1 << 50 {
            return Err(VerifyError::GridTooLarge(total));
        }
        let mut strides = vec![1u64; dims.len()];
        for k in 1..dims.len() {
            strides[k] = strides[k - 1] * dims[k - 1];
        }
        Ok(VoxelGrid { bounds, h, strides, dims, occupied: Default::default() })
    }

    /// Flat key of the cell containing the coordinates; errors outside the
    /// box. Points exactly on the upper face land in the last cell.
    pub fn cell_key(&self, coords: &[f64]) -> Result<u64, VerifyError> {
        if !self.bounds.contains(coords) {
            return Err(VerifyError::OutsideBox(coords.to_vec()));
        }
        let mut key = 0u64;
        for (k, &c) in coords.iter().enumerate() {
            let idx = (((c - self.bounds.lo[k]) / self.h) as u64).min(self.dims[k] - 1);
            key += idx * self.strides[k];
        }
        Ok(key)
    }

    pub fn insert(&mut self, coords: &[f64]) -> Result<(), VerifyError> {
        let key = self.cell_key(coords)?;
        self.occupied.insert(key);
        Ok(())
    }

    /// Merges another grid's occupancy (must share geometry).
    pub fn absorb(&mut self, other: &VoxelGrid) {
        debug_assert_eq!(self.dims, other.dims);
        self.occupied.extend(other.occupied.iter().copied());
    }

    pub fn occupied_cells(&self) -> usize {
        self.occupied.len()
    }

    /// `|occupied cells| · h^dim`.
    pub fn measure(&self) -> f64 {
        self.occupied.len() as f64 * self.h.powi(self.bounds.dim() as i32)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn bounds(&self) -> &BoundingBox {
        &self.bounds
    }
}

/// Voxel outer-measure estimate of a point cloud: `|occupied cells|·h^dim`.
pub fn voxel_measure(points: &[Point], h: f64, bounds: &BoundingBox) -> Result<f64, VerifyError> {
    let mut grid = VoxelGrid::new(bounds.clone(), h)?;
    for p in points {
        grid.insert(&p.coords())?;
    }
    Ok(grid.measure())
}

/// Histogram density estimate of a weighted point cloud on a voxel grid.
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    grid: VoxelGrid,
    mass: BTreeMap<u64, f64>,
}

impl DensityEstimate {
    pub fn from_weighted_points<'a>(
        bounds: BoundingBox,
        h: f64,
        points: impl Iterator<Item = &'a Point>,
        weights: impl Iterator<Item = f64>,
    ) -> Result<Self, VerifyError> {
        let grid = VoxelGrid::new(bounds, h)?;
        let mut mass: BTreeMap<u64, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (p, w) in points.zip(weights) {
            let key = grid.cell_key(&p.coords())?;
            *mass.entry(key).or_insert(0.0) += w;
            total += w;
        }
        if (total - 1.0).abs() > 1e-6 {
            return Err(VerifyError::MassDefect((total - 1.0).abs()));
        }
        Ok(DensityEstimate { grid, mass })
    }

    pub fn cell_volume(&self) -> f64 {
        self.grid.h.powi(self.grid.bounds.dim() as i32)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.values().sum()
    }

    /// Per-cell densities mass/h^dim (occupied cells only).
    pub fn densities(&self) -> impl Iterator<Item = f64> + '_ {
        let vol = self.cell_volume();
        self.mass.values().map(move |m| m / vol)
    }

    /// `Σ_cells U(density) · cellvol`, the U-entropy of the histogram
    /// density (empty cells contribute `U(0) = 0`).
    pub fn entropy(&self, u: &EntropyFunctional) -> f64 {
        let vol = self.cell_volume();
        self.densities().map(|rho| u.eval(rho)).sum::<f64>() * vol
    }
}

/// An entropy integrand `U : [0,∞) → ℝ` with `U(0) = 0`.
///
/// Admissibility for the entropy comparison requires
/// `t ↦ t^dim · U(t^{−dim})` to be non-increasing and convex; this is
/// checked numerically on a uniform grid by first and second differences.
#[derive(Clone)]
pub struct EntropyFunctional {
    pub tag: String,
    u: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for EntropyFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntropyFunctional").field("tag", &self.tag).finish()
    }
}

impl EntropyFunctional {
    pub fn new(tag: impl Into<String>, u: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        EntropyFunctional { tag: tag.into(), u: Arc::new(u) }
    }

    /// Rényi-type integrand `U(r) = −r^{1−1/dim}`; its admissibility
    /// profile `t^dim U(t^{−dim}) = −t` is linear.
    pub fn renyi(dim: usize) -> Self {
        let e = 1.0 - 1.0 / dim as f64;
        EntropyFunctional::new(format!("renyi_{dim}"), move |r: f64| -r.powf(e))
    }

    /// Shannon integrand `U(r) = r·ln r` (0 at 0).
    pub fn shannon() -> Self {
        EntropyFunctional::new("shannon", |r: f64| if r == 0.0 { 0.0 } else { r * r.ln() })
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.u)(r)
    }

    /// Grid check of the admissibility hypotheses.
    pub fn check_admissible(&self, dim: usize) -> Result<(), VerifyError> {
        if self.eval(0.0) != 0.0 {
            return Err(VerifyError::InadmissibleEntropy(format!(
                "U(0) = {}, expected 0",
                self.eval(0.0)
            )));
        }
        let n = 400;
        let (t0, t1) = (0.05, 20.05);
        let step = (t1 - t0) / n as f64;
        let v: Vec<f64> = (0..=n)
            .map(|i| {
                let t: f64 = t0 + i as f64 * step;
                t.powi(dim as i32) * self.eval(t.powi(-(dim as i32)))
            })
            .collect();
        for w in v.windows(2) {
            if w[1] - w[0] > 1e-9 {
                return Err(VerifyError::InadmissibleEntropy(format!(
                    "profile increases by {:.3e} on [{t0}, {t1}]",
                    w[1] - w[0]
                )));
            }
        }
        for w in v.windows(3) {
            if w[2] - 2.0 * w[1] + w[0] < -1e-9 {
                return Err(VerifyError::InadmissibleEntropy(format!(
                    "profile second difference {:.3e} < -1e-9",
                    w[2] - 2.0 * w[1] + w[0]
                )));
            }
        }
        Ok(())
    }
}

/// Direction of a verified inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// Pass iff `lhs ≥ rhs − tolerance`.
    #[serde(rename = "ge")]
    Ge,
    /// Pass iff `lhs ≤ rhs + tolerance`.
    #[serde(rename = "le")]
    Le,
}

/// One verified inequality inside a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckLine {
    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckLine { name: name.into(), lhs, rhs, relation: Relation::Ge, tolerance, pass: lhs >= rhs - tolerance }
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckLine { name: name.into(), lhs, rhs, relation: Relation::Le, tolerance, pass: lhs <= rhs + tolerance }
    }

    /// Signed distance to the threshold; negative iff the line fails.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Ge => self.lhs - (self.rhs - self.tolerance),
            Relation::Le => (self.rhs + self.tolerance) - self.lhs,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::Ge => ">=",
            Relation::Le => "<=",
        };
        write!(
            f,
            "[{}] {}: {:.6e} {} {:.6e} (tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.lhs,
            rel,
            self.rhs,
            self.tolerance
        )
    }
}

/// Parameters a verification ran with.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReportParams {
    /// Interpolation parameters used (empty when not applicable).
    pub s: Vec<f64>,
    /// Sample or triple count.
    pub n: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voxel_h: Option<f64>,
}

/// Machine-readable outcome of one verification.
///
/// The top-level `lhs`/`rhs`/`tolerance` mirror the binding line (the
/// first failing one, else the one with the smallest margin); `pass` is the
/// conjunction of all lines. `runtime_secs` is wall clock and is the one
/// field excluded from determinism comparisons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check: String,
    pub group: String,
    pub params: ReportParams,
    pub lines: Vec<CheckLine>,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_secs: f64,
}

impl VerifyReport {
    pub fn from_lines(
        check: impl Into<String>,
        group: impl Into<String>,
        params: ReportParams,
        lines: Vec<CheckLine>,
        runtime_secs: f64,
    ) -> Self {
        assert!(!lines.is_empty(), "a report needs at least one line");
        let binding = lines
            .iter()
            .find(|l| !l.pass)
            .or_else(|| {
                lines.iter().min_by(|a, b| {
                    a.margin().partial_cmp(&b.margin()).expect("finite margins")
                })
            })
            .expect("nonempty lines");
        let (lhs, rhs, tolerance) = (binding.lhs, binding.rhs, binding.tolerance);
        let pass = lines.iter().all(|l| l.pass);
        VerifyReport {
            check: check.into(),
            group: group.into(),
            params,
            lines,
            lhs,
            rhs,
            tolerance,
            pass,
            runtime_secs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the runtime zeroed, for byte-level determinism
    /// comparisons.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.runtime_secs = 0.0;
        serde_json::to_string_pretty(&clone).expect("report serializes")
    }

    pub fn line(&self, name: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "== {} on {} (n={}, seed={}) : {} [{:.2}s]",
            self.check,
            self.group,
            self.params.n,
            self.params.seed,
            if self.pass { "PASS" } else { "FAIL" },
            self.runtime_secs
        )?;
        for line in &self.lines {
            writeln!(f, "   {line}")?;
        }
        Ok(())
    }
}
