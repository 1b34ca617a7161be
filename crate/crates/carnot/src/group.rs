//! Group structure of a corank-1 Carnot group: the diagonalized spec, group
//! elements and covectors in block layout, the group law, inverses, and the
//! left-invariant horizontal frame.
//!
//! Coordinates are always ordered kernel block first, then the 2-blocks in
//! ascending-frequency order, then the vertical coordinate `z`; every file
//! format and flat-coordinate conversion in the crate uses this layout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance below which a 2-block of a covector counts as zero, i.e. the
/// covector direction is treated as annihilated by the skew matrix.
pub const BLOCK_ZERO_TOL: f64 = 1e-14;

/// Errors from building a [`GroupSpec`].
#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    /// At least one block frequency is required.
    #[error("alphas must be nonempty: at least one 2-block is required")]
    EmptyAlphas,
    /// Block frequencies must be positive, finite reals.
    #[error("block frequency must be positive and finite, got {0}")]
    BadAlpha(f64),
}

/// A corank-1 Carnot group in diagonalized exponential coordinates.
///
/// Determined by the kernel dimension `m = k − 2d` of the skew matrix and
/// the block frequencies `0 < α₁ ≤ … ≤ α_d`. The group lives on ℝ^k × ℝ
/// with `k = m + 2d`; its topological dimension is `k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct GroupSpec {
    kernel_dim: usize,
    alphas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kernel_dim: usize,
    alphas: Vec<f64>,
}

impl TryFrom<RawSpec> for GroupSpec {
    type Error = GroupError;
    fn try_from(raw: RawSpec) -> Result<Self, GroupError> {
        GroupSpec::new(raw.kernel_dim, raw.alphas)
    }
}

impl From<GroupSpec> for RawSpec {
    fn from(spec: GroupSpec) -> Self {
        RawSpec {
            kernel_dim: spec.kernel_dim,
            alphas: spec.alphas,
        }
    }
}

impl GroupSpec {
    /// Builds a spec from the kernel dimension and the block frequencies.
    ///
    /// The frequencies are sorted ascending on construction; nonpositive or
    /// non-finite entries and an empty list are rejected.
    pub fn new(kernel_dim: usize, alphas: impl Into<Vec<f64>>) -> Result<Self, GroupError> {
        let mut alphas = alphas.into();
        if alphas.is_empty() {
            return Err(GroupError::EmptyAlphas);
        }
        for &a in &alphas {
            if !a.is_finite() || a <= 0.0 {
                return Err(GroupError::BadAlpha(a));
            }
        }
        alphas.sort_by(|a, b| a.partial_cmp(b).expect("finite alphas"));
        Ok(GroupSpec { kernel_dim, alphas })
    }

    /// Kernel dimension `m = k − 2d`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// Block frequencies `α₁ ≤ … ≤ α_d`.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Number of 2-blocks `d`.
    pub fn num_blocks(&self) -> usize {
        self.alphas.len()
    }

    /// Horizontal dimension `k = m + 2d`.
    pub fn horizontal_dim(&self) -> usize {
        self.kernel_dim + 2 * self.alphas.len()
    }

    /// Topological dimension `k + 1`.
    pub fn dim(&self) -> usize {
        self.horizontal_dim() + 1
    }

    /// Largest frequency `α_d`.
    pub fn top_alpha(&self) -> f64 {
        *self.alphas.last().expect("alphas nonempty")
    }

    /// Multiplicity `q` of the largest frequency.
    pub fn top_multiplicity(&self) -> usize {
        let top = self.top_alpha();
        self.alphas.iter().filter(|&&a| a == top).count()
    }

    /// Index of the first block carrying the largest frequency.
    pub fn first_top_block(&self) -> usize {
        self.num_blocks() - self.top_multiplicity()
    }

    /// The vertical covector bound `2π/α_d` delimiting the injectivity
    /// domain.
    pub fn pz_limit(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.top_alpha()
    }

    /// The neutral element.
    pub fn identity(&self) -> Point {
        Point {
            x0: vec![0.0; self.kernel_dim],
            blocks: vec![[0.0, 0.0]; self.num_blocks()],
            z: 0.0,
        }
    }

    /// Zero covector.
    pub fn zero_covector(&self) -> Covector {
        Covector {
            px0: vec![0.0; self.kernel_dim],
            blocks: vec![[0.0, 0.0]; self.num_blocks()],
            pz: 0.0,
        }
    }

    /// Panics unless `x` matches this spec's block layout.
    #[track_caller]
    pub fn assert_point(&self, x: &Point) {
        assert!(
            x.x0.len() == self.kernel_dim && x.blocks.len() == self.num_blocks(),
            "point layout ({} kernel, {} blocks) does not match spec ({} kernel, {} blocks)",
            x.x0.len(),
            x.blocks.len(),
            self.kernel_dim,
            self.num_blocks()
        );
    }

    /// Panics unless `p` matches this spec's block layout.
    #[track_caller]
    pub fn assert_covector(&self, p: &Covector) {
        assert!(
            p.px0.len() == self.kernel_dim && p.blocks.len() == self.num_blocks(),
            "covector layout ({} kernel, {} blocks) does not match spec ({} kernel, {} blocks)",
            p.px0.len(),
            p.blocks.len(),
            self.kernel_dim,
            self.num_blocks()
        );
    }

    /// Group product `x ∘ y`.
    ///
    /// Horizontal parts add componentwise; the vertical part picks up the
    /// skew bilinear correction `½ Σᵢ αᵢ (xⁱ × yⁱ)` from the 2-blocks.
    pub fn op(&self, x: &Point, y: &Point) -> Point {
        self.assert_point(x);
        self.assert_point(y);
        let x0 = x.x0.iter().zip(&y.x0).map(|(a, b)| a + b).collect();
        let mut z = x.z + y.z;
        let mut blocks = Vec::with_capacity(self.num_blocks());
        for (i, (&xb, &yb)) in x.blocks.iter().zip(&y.blocks).enumerate() {
            blocks.push([xb[0] + yb[0], xb[1] + yb[1]]);
            z += 0.5 * self.alphas[i] * (xb[0] * yb[1] - xb[1] * yb[0]);
        }
        Point { x0, blocks, z }
    }

    /// Group inverse; in exponential coordinates this is coordinatewise
    /// negation because the skew correction is antisymmetric.
    pub fn inverse(&self, x: &Point) -> Point {
        self.assert_point(x);
        Point {
            x0: x.x0.iter().map(|a| -a).collect(),
            blocks: x.blocks.iter().map(|b| [-b[0], -b[1]]).collect(),
            z: -x.z,
        }
    }

    /// The left-invariant frame `X₁, …, X_k, Z` evaluated at `x`, as `k+1`
    /// coordinate vectors of length `k+1`.
    ///
    /// `Xᵢ = ∂_{xᵢ} − ½ Σⱼ 𝒜ᵢⱼ xⱼ ∂_z`; the kernel fields are plain partial
    /// derivatives and `Z = ∂_z`. These are the directions used for
    /// finite-difference Carnot gradients and Hessians.
    pub fn frame_at(&self, x: &Point) -> Vec<Vec<f64>> {
        self.assert_point(x);
        let n = self.dim();
        let m = self.kernel_dim;
        let mut frame = Vec::with_capacity(n);
        for i in 0..m {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            frame.push(v);
        }
        for (i, &alpha) in self.alphas.iter().enumerate() {
            // In block i the skew matrix is α J, so the two fields pick up
            // z-corrections ∓ ½ α (second resp. first block coordinate).
            let mut u = vec![0.0; n];
            u[m + 2 * i] = 1.0;
            u[n - 1] = -0.5 * alpha * x.blocks[i][1];
            frame.push(u);
            let mut v = vec![0.0; n];
            v[m + 2 * i + 1] = 1.0;
            v[n - 1] = 0.5 * alpha * x.blocks[i][0];
            frame.push(v);
        }
        let mut z = vec![0.0; n];
        z[n - 1] = 1.0;
        frame.push(z);
        frame
    }

    /// Short display used in reports, e.g. `m=1, alphas=[4]`.
    pub fn describe(&self) -> String {
        let alphas: Vec<String> = self.alphas.iter().map(|a| a.to_string()).collect();
        format!("m={}, alphas=[{}]", self.kernel_dim, alphas.join(","))
    }
}

/// A group element in block layout: kernel block, 2-blocks, vertical
/// coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    /// Kernel block in ℝ^m.
    pub x0: Vec<f64>,
    /// The d two-dimensional blocks.
    pub blocks: Vec<[f64; 2]>,
    /// Vertical coordinate.
    pub z: f64,
}

impl Point {
    /// Builds a point from flat coordinates in block layout.
    #[track_caller]
    pub fn from_coords(spec: &GroupSpec, coords: &[f64]) -> Point {
        assert_eq!(
            coords.len(),
            spec.dim(),
            "expected {} coordinates, got {}",
            spec.dim(),
            coords.len()
        );
        let m = spec.kernel_dim();
        let d = spec.num_blocks();
        Point {
            x0: coords[..m].to_vec(),
            blocks: (0..d)
                .map(|i| [coords[m + 2 * i], coords[m + 2 * i + 1]])
                .collect(),
            z: coords[m + 2 * d],
        }
    }

    /// Flat coordinates in block layout.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = self.x0.clone();
        for b in &self.blocks {
            c.push(b[0]);
            c.push(b[1]);
        }
        c.push(self.z);
        c
    }

    /// True when every coordinate is finite.
    pub fn is_finite(&self) -> bool {
        self.x0.iter().all(|v| v.is_finite())
            && self.blocks.iter().all(|b| b[0].is_finite() && b[1].is_finite())
            && self.z.is_finite()
    }
}

/// A covector (exponential-map parameter) in the same block layout as
/// [`Point`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    /// Kernel block p_x⁰ in ℝ^m.
    pub px0: Vec<f64>,
    /// The d two-dimensional blocks p_x¹ … p_x^d.
    pub blocks: Vec<[f64; 2]>,
    /// Vertical parameter p_z.
    pub pz: f64,
}

impl Covector {
    /// Builds a covector from flat coordinates in block layout.
    #[track_caller]
    pub fn from_coords(spec: &GroupSpec, coords: &[f64]) -> Covector {
        let p = Point::from_coords(spec, coords);
        Covector {
            px0: p.x0,
            blocks: p.blocks,
            pz: p.z,
        }
    }

    /// Flat coordinates in block layout.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = self.px0.clone();
        for b in &self.blocks {
            c.push(b[0]);
            c.push(b[1]);
        }
        c.push(self.pz);
        c
    }

    /// Squared norm of block `i`.
    pub fn block_norm_sq(&self, i: usize) -> f64 {
        self.blocks[i][0] * self.blocks[i][0] + self.blocks[i][1] * self.blocks[i][1]
    }

    /// Squared horizontal norm ‖p_x⁰‖² + Σᵢ ‖p_xⁱ‖²; its square root is the
    /// length of the geodesic shot with this parameter over s ∈ [0,1].
    pub fn horizontal_norm_sq(&self) -> f64 {
        self.px0.iter().map(|v| v * v).sum::<f64>()
            + (0..self.blocks.len()).map(|i| self.block_norm_sq(i)).sum::<f64>()
    }

    /// True when the skew matrix annihilates the horizontal part, i.e.
    /// every 2-block is (numerically) zero: the direction of an abnormal
    /// geodesic.
    pub fn is_abnormal_dir(&self, spec: &GroupSpec) -> bool {
        spec.assert_covector(self);
        (0..self.blocks.len()).all(|i| self.block_norm_sq(i).sqrt() < BLOCK_ZERO_TOL)
    }

    /// True when the covector lies in the injectivity domain:
    /// |p_z| < 2π/α_d and some 2-block is nonzero.
    pub fn is_in_d(&self, spec: &GroupSpec) -> bool {
        spec.assert_covector(self);
        self.pz.abs() < spec.pz_limit() && !self.is_abnormal_dir(spec)
    }

    /// True when every coordinate is finite.
    pub fn is_finite(&self) -> bool {
        self.px0.iter().all(|v| v.is_finite())
            && self.blocks.iter().all(|b| b[0].is_finite() && b[1].is_finite())
            && self.pz.is_finite()
    }
}
