//! Exact discrete optimal transport for the cost `d²_CC/2`: weighted point
//! clouds, the Kantorovich solver with dual potentials, displacement
//! interpolation along the matched geodesics, and a constructible instance
//! that transports half its mass along abnormal geodesics and half along
//! strictly normal ones.

pub mod assignment;
pub mod simplex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distance::{log_from_identity, CutClass};
use crate::expmap::exp_from;
use crate::group::{Covector, GroupSpec, Point};
use crate::sample;

/// Largest support size accepted by the solver.
pub const MAX_SUPPORT: usize = 5000;

/// Pairs closer than this are classified static (not moving).
pub const STATIC_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("weights must be positive, got {0}")]
    NonpositiveWeight(f64),
    #[error("{points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },
    #[error("weights sum to {0}, expected 1 within 1e-9")]
    NotNormalized(f64),
    #[error("support of size {0} exceeds the limit {MAX_SUPPORT}")]
    Oversize(usize),
    #[error("instance parameter {name} is degenerate: {reason}")]
    DegenerateParameter { name: &'static str, reason: &'static str },
    #[error(transparent)]
    Simplex(#[from] simplex::SimplexError),
}

/// A weighted point cloud representing a probability measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Validates layout, positivity and normalization (1e-9 tolerance).
    /// Weights are stored as given, not renormalized.
    pub fn new(
        spec: &GroupSpec,
        points: Vec<Point>,
        weights: Vec<f64>,
    ) -> Result<Self, TransportError> {
        if points.len() != weights.len() {
            return Err(TransportError::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        for p in &points {
            spec.assert_point(p);
        }
        for &w in &weights {
            if !(w > 0.0) || !w.is_finite() {
                return Err(TransportError::NonpositiveWeight(w));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(TransportError::NotNormalized(sum));
        }
        Ok(DiscreteMeasure { points, weights })
    }

    /// Uniform measure on the given points.
    pub fn uniform(spec: &GroupSpec, points: Vec<Point>) -> Self {
        assert!(!points.is_empty(), "uniform measure needs at least one point");
        for p in &points {
            spec.assert_point(p);
        }
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        DiscreteMeasure { points, weights }
    }

    /// Point mass.
    pub fn dirac(spec: &GroupSpec, point: Point) -> Self {
        spec.assert_point(&point);
        DiscreteMeasure { points: vec![point], weights: vec![1.0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when all weights are equal (within 1e-12 relative).
    pub fn is_uniform(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|&w| (w - w0).abs() <= 1e-12 * w0)
    }
}

/// One matched pair of an optimal plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanPair {
    /// Index into the source measure.
    pub source: usize,
    /// Index into the target measure.
    pub target: usize,
    /// Transported mass.
    pub mass: f64,
    /// Geodesic parameter θ with `exp_e(θ) = x⁻¹ ∘ y`.
    pub theta: Covector,
    /// Cut classification of the pair.
    pub cls: CutClass,
    /// True when source and target are distinct (distance above
    /// [`STATIC_TOL`]).
    pub moving: bool,
}

/// An optimal transport plan with its Kantorovich dual certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransportPlan {
    pub pairs: Vec<PlanPair>,
    /// Total cost Σ mass · d²_CC/2.
    pub cost: f64,
    /// Potential on the source points (φ).
    pub source_potential: Vec<f64>,
    /// Potential on the target points (φ^c).
    pub target_potential: Vec<f64>,
}

/// Cost matrix `C[i][j] = d²_CC(x_i, y_j)/2`, assembled in parallel.
pub fn cost_matrix(spec: &GroupSpec, mu0: &DiscreteMeasure, mu1: &DiscreteMeasure) -> Vec<f64> {
    let m = mu1.len();
    let mut cost = vec![0.0; mu0.len() * m];
    cost.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
        let xi = spec.inverse(&mu0.points[i]);
        for (j, slot) in row.iter_mut().enumerate() {
            let d = log_from_identity(spec, &spec.op(&xi, &mu1.points[j])).dist;
            *slot = 0.5 * d * d;
        }
    });
    cost
}

/// Solves the Kantorovich problem between two discrete measures exactly.
///
/// Uniform measures of equal support size go through the assignment solver;
/// everything else through the transportation simplex. Dual potentials come
/// from the optimal basis in either case. Every pair is annotated with its
/// geodesic parameter and cut class.
pub fn solve_ot(
    spec: &GroupSpec,
    mu0: &DiscreteMeasure,
    mu1: &DiscreteMeasure,
) -> Result<TransportPlan, TransportError> {
    if mu0.len() > MAX_SUPPORT {
        return Err(TransportError::Oversize(mu0.len()));
    }
    if mu1.len() > MAX_SUPPORT {
        return Err(TransportError::Oversize(mu1.len()));
    }
    let cost = cost_matrix(spec, mu0, mu1);
    let n = mu0.len();
    let m = mu1.len();

    let (raw_pairs, source_potential, target_potential) =
        if n == m && mu0.is_uniform() && mu1.is_uniform() {
            let a = assignment::solve_assignment(n, &cost);
            let w = 1.0 / n as f64;
            let pairs: Vec<(usize, usize, f64)> = a
                .row_to_col
                .iter()
                .enumerate()
                .map(|(i, &j)| (i, j, w))
                .collect();
            (pairs, a.u, a.v)
        } else {
            let t = simplex::solve_transportation(&mu0.weights, &mu1.weights, &cost)?;
            (t.flows, t.u, t.v)
        };

    let pairs: Vec<PlanPair> = raw_pairs
        .par_iter()
        .map(|&(i, j, mass)| {
            let rel = spec.op(&spec.inverse(&mu0.points[i]), &mu1.points[j]);
            let lr = log_from_identity(spec, &rel);
            PlanPair {
                source: i,
                target: j,
                mass,
                moving: lr.dist > STATIC_TOL,
                theta: lr.param,
                cls: lr.cls,
            }
        })
        .collect();
    let total_cost = pairs
        .iter()
        .map(|p| p.mass * cost[p.source * m + p.target])
        .sum();
    Ok(TransportPlan { pairs, cost: total_cost, source_potential, target_potential })
}

/// Displacement interpolation of a solved plan: each pair contributes the
/// s-intermediate point of its matched geodesic (evaluated directly from
/// the stored parameter θ), static pairs stay put. Masses are carried over
/// unchanged; coincident points are not merged.
pub fn interpolate(
    spec: &GroupSpec,
    plan: &TransportPlan,
    mu0: &DiscreteMeasure,
    mu1: &DiscreteMeasure,
    s: f64,
) -> DiscreteMeasure {
    assert!((0.0..=1.0).contains(&s), "s must lie in [0,1], got {s}");
    let points: Vec<Point> = plan
        .pairs
        .par_iter()
        .map(|pair| {
            if !pair.moving || s == 0.0 {
                mu0.points[pair.source].clone()
            } else if s == 1.0 {
                mu1.points[pair.target].clone()
            } else {
                exp_from(spec, &mu0.points[pair.source], &pair.theta, s)
            }
        })
        .collect();
    let weights = plan.pairs.iter().map(|p| p.mass).collect();
    DiscreteMeasure { points, weights }
}

/// Which halfspace a sample of the mixed instance falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfSpace {
    /// `⟨(a,b),(x₁,ζ)⟩ < 0`: transported by the kernel translation
    /// (abnormal geodesics).
    Lower,
    /// `⟨(a,b),(x₁,ζ)⟩ > 0`: transported by the Heisenberg right
    /// translation (strictly normal geodesics).
    Upper,
}

/// The mixed abnormal/normal transport instance on `ℝ^m × H^d`: a uniform
/// cloud in a centered unit-volume box, pushed forward by the optimal map
/// of the potential `min(⟨a,x₁⟩, −⟨b,ζ⟩)`, which translates the lower
/// halfspace by `−a` in the kernel and right-translates the upper halfspace
/// by `(b, 0)` in the Heisenberg factor.
#[derive(Debug, Clone)]
pub struct Example36 {
    pub spec: GroupSpec,
    /// Uniform source measure.
    pub mu0: DiscreteMeasure,
    /// ψ(xᵢ), aligned with `mu0.points`.
    pub targets: Vec<Point>,
    /// Halfspace of each sample.
    pub sides: Vec<HalfSpace>,
    /// Kernel translation parameter.
    pub a: Vec<f64>,
    /// Heisenberg translation parameter (flattened 2-blocks).
    pub b: Vec<f64>,
}

impl Example36 {
    /// The pushforward measure ψ#μ₀ (uniform on the mapped points).
    pub fn mu1(&self) -> DiscreteMeasure {
        DiscreteMeasure::uniform(&self.spec, self.targets.clone())
    }

    /// The analytic optimal map at an arbitrary point (points on the
    /// separating hyperplane are sent with the lower branch).
    pub fn map_point(&self, x: &Point) -> Point {
        if self.side_of(x) == HalfSpace::Upper {
            self.upper_branch(x)
        } else {
            self.lower_branch(x)
        }
    }

    fn split_value(&self, x: &Point) -> f64 {
        let mut sigma: f64 = self.a.iter().zip(&x.x0).map(|(a, v)| a * v).sum();
        for (i, blk) in x.blocks.iter().enumerate() {
            sigma += self.b[2 * i] * blk[0] + self.b[2 * i + 1] * blk[1];
        }
        sigma
    }

    fn side_of(&self, x: &Point) -> HalfSpace {
        if self.split_value(x) > 0.0 {
            HalfSpace::Upper
        } else {
            HalfSpace::Lower
        }
    }

    /// Kernel translation by −a (abnormal transport).
    fn lower_branch(&self, x: &Point) -> Point {
        let mut y = x.clone();
        for (v, a) in y.x0.iter_mut().zip(&self.a) {
            *v -= a;
        }
        y
    }

    /// Heisenberg right translation by (b, 0) (strictly normal transport).
    fn upper_branch(&self, x: &Point) -> Point {
        let mut t = self.spec.identity();
        for i in 0..self.spec.num_blocks() {
            t.blocks[i] = [self.b[2 * i], self.b[2 * i + 1]];
        }
        let mut xh = x.clone();
        xh.x0 = vec![0.0; self.spec.kernel_dim()];
        let mut y = self.spec.op(&xh, &t);
        y.x0 = x.x0.clone();
        y
    }
}

/// Builds the mixed-transport instance: `m ≥ 1` kernel dimensions, `d ≥ 1`
/// Heisenberg blocks (frequency 4), kernel direction `a ≠ 0`, horizontal
/// direction `b ≠ 0` of length `2d`, `n ≤ 5000` uniform samples from the
/// centered unit-volume box. Samples within 1e-9 of the separating
/// hyperplane are nudged off it along the kernel direction.
pub fn example36_instance(
    m: usize,
    d: usize,
    a: &[f64],
    b: &[f64],
    n: usize,
    seed: u64,
) -> Result<Example36, TransportError> {
    if m == 0 || a.len() != m {
        return Err(TransportError::DegenerateParameter {
            name: "a",
            reason: "kernel direction must have length m ≥ 1",
        });
    }
    if d == 0 || b.len() != 2 * d {
        return Err(TransportError::DegenerateParameter {
            name: "b",
            reason: "horizontal direction must have length 2d ≥ 2",
        });
    }
    let a_norm_sq: f64 = a.iter().map(|v| v * v).sum();
    if a_norm_sq == 0.0 {
        return Err(TransportError::DegenerateParameter { name: "a", reason: "must be nonzero" });
    }
    if b.iter().map(|v| v * v).sum::<f64>() == 0.0 {
        return Err(TransportError::DegenerateParameter { name: "b", reason: "must be nonzero" });
    }
    if n == 0 || n > MAX_SUPPORT {
        return Err(TransportError::Oversize(n));
    }
    let spec = GroupSpec::new(m, vec![4.0; d]).expect("valid spec");

    let mut rng = sample::rng_for(seed, 0);
    let mut instance = Example36 {
        spec: spec.clone(),
        mu0: DiscreteMeasure { points: Vec::new(), weights: Vec::new() },
        targets: Vec::new(),
        sides: Vec::new(),
        a: a.to_vec(),
        b: b.to_vec(),
    };
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let mut x = sample::random_point(&mut rng, &spec, -0.5, 0.5);
        let sigma = instance.split_value(&x);
        if sigma.abs() < 1e-9 {
            // nudge along the kernel direction to a fixed offset
            let sign = if sigma >= 0.0 { 1.0 } else { -1.0 };
            let delta = (sign * 2e-9 - sigma) / a_norm_sq;
            for (v, av) in x.x0.iter_mut().zip(a) {
                *v += delta * av;
            }
        }
        points.push(x);
    }
    instance.sides = points.iter().map(|x| instance.side_of(x)).collect();
    instance.targets = points.iter().map(|x| instance.map_point(x)).collect();
    instance.mu0 = DiscreteMeasure::uniform(&spec, points);
    Ok(instance)
}

/// Quadratic Wasserstein distance of a solved plan, `W₂ = √(2·cost)`.
pub fn wasserstein2(plan: &TransportPlan) -> f64 {
    (2.0 * plan.cost).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{d_cc, intermediate_point};
    use rand::Rng;

    fn spec_h1() -> GroupSpec {
        GroupSpec::new(0, vec![4.0]).unwrap()
    }

    #[test]
    fn measure_validation() {
        let spec = spec_h1();
        let p = spec.identity();
        assert!(DiscreteMeasure::new(&spec, vec![p.clone()], vec![1.0]).is_ok());
        assert!(matches!(
            DiscreteMeasure::new(&spec, vec![p.clone()], vec![0.5]),
            Err(TransportError::NotNormalized(_))
        ));
        assert!(matches!(
            DiscreteMeasure::new(&spec, vec![p.clone()], vec![-1.0]),
            Err(TransportError::NonpositiveWeight(_))
        ));
        assert!(matches!(
            DiscreteMeasure::new(&spec, vec![p], vec![0.5, 0.5]),
            Err(TransportError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn dirac_to_dirac() {
        let spec = spec_h1();
        let e = spec.identity();
        let y = Point { x0: vec![], blocks: vec![[1.0, 0.0]], z: 0.2 };
        let mu0 = DiscreteMeasure::dirac(&spec, e.clone());
        let mu1 = DiscreteMeasure::dirac(&spec, y.clone());
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        assert_eq!(plan.pairs.len(), 1);
        assert_eq!((plan.pairs[0].source, plan.pairs[0].target), (0, 0));
        assert!((plan.pairs[0].mass - 1.0).abs() < 1e-15);
        let d = d_cc(&spec, &e, &y);
        assert!((plan.cost - 0.5 * d * d).abs() < 1e-12);
        assert!(plan.pairs[0].moving);
    }

    #[test]
    fn two_by_two_picks_cheaper_assignment() {
        let spec = spec_h1();
        let x0 = spec.identity();
        let x1 = Point { x0: vec![], blocks: vec![[1.0, 0.0]], z: 0.0 };
        let y0 = Point { x0: vec![], blocks: vec![[0.1, 0.0]], z: 0.0 };
        let y1 = Point { x0: vec![], blocks: vec![[1.1, 0.0]], z: 0.0 };
        let mu0 = DiscreteMeasure::uniform(&spec, vec![x0.clone(), x1.clone()]);
        let mu1 = DiscreteMeasure::uniform(&spec, vec![y0.clone(), y1.clone()]);
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        // brute force over the two assignments
        let c = |a: &Point, b: &Point| 0.5 * d_cc(&spec, a, b).powi(2);
        let id_cost = 0.5 * (c(&x0, &y0) + c(&x1, &y1));
        let swap_cost = 0.5 * (c(&x0, &y1) + c(&x1, &y0));
        assert!((plan.cost - id_cost.min(swap_cost)).abs() < 1e-12);
        let got: Vec<(usize, usize)> =
            plan.pairs.iter().map(|p| (p.source, p.target)).collect();
        assert_eq!(got, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn duals_certify_optimality() {
        let spec = GroupSpec::new(1, vec![4.0]).unwrap();
        let mut rng = sample::rng_for(51, 0);
        // non-uniform weights exercise the simplex path
        let n = 14;
        let points0: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let points1: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let mut w: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let t: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= t);
        let mu0 = DiscreteMeasure::new(&spec, points0, w).unwrap();
        let mu1 = DiscreteMeasure::uniform(&spec, points1);
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();

        // marginals
        let mut row = vec![0.0; n];
        let mut col = vec![0.0; n];
        for p in &plan.pairs {
            row[p.source] += p.mass;
            col[p.target] += p.mass;
        }
        for i in 0..n {
            assert!((row[i] - mu0.weights[i]).abs() < 1e-9);
            assert!((col[i] - mu1.weights[i]).abs() < 1e-9);
        }
        // dual feasibility everywhere, tightness on support
        let cost = cost_matrix(&spec, &mu0, &mu1);
        for i in 0..n {
            for j in 0..n {
                assert!(
                    plan.source_potential[i] + plan.target_potential[j] <= cost[i * n + j] + 1e-7
                );
            }
        }
        for p in &plan.pairs {
            let c = cost[p.source * n + p.target];
            assert!((plan.source_potential[p.source] + plan.target_potential[p.target] - c).abs() < 1e-7);
        }
        // primal cost equals dual value
        let dual: f64 = plan
            .source_potential
            .iter()
            .zip(&mu0.weights)
            .map(|(p, w)| p * w)
            .sum::<f64>()
            + plan.target_potential.iter().zip(&mu1.weights).map(|(p, w)| p * w).sum::<f64>();
        assert!((plan.cost - dual).abs() < 1e-7);
        // cyclical monotonicity on support pairs
        for a in &plan.pairs {
            for b in &plan.pairs {
                let direct = cost[a.source * n + a.target] + cost[b.source * n + b.target];
                let swapped = cost[a.source * n + b.target] + cost[b.source * n + a.target];
                assert!(direct <= swapped + 1e-7);
            }
        }
    }

    #[test]
    fn interpolation_endpoints_and_mass() {
        let spec = spec_h1();
        let e = spec.identity();
        let y = Point { x0: vec![], blocks: vec![[2.0, 0.0]], z: 0.0 };
        let mu0 = DiscreteMeasure::dirac(&spec, e.clone());
        let mu1 = DiscreteMeasure::dirac(&spec, y.clone());
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        let mid = interpolate(&spec, &plan, &mu0, &mu1, 0.5);
        assert!((mid.points[0].blocks[0][0] - 1.0).abs() < 1e-12);
        let at0 = interpolate(&spec, &plan, &mu0, &mu1, 0.0);
        assert_eq!(at0.points[0], e);
        let at1 = interpolate(&spec, &plan, &mu0, &mu1, 1.0);
        assert_eq!(at1.points[0], y);
        let total: f64 = mid.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_is_wasserstein_geodesic() {
        let spec = spec_h1();
        let mut rng = sample::rng_for(52, 0);
        let n = 24;
        let pts0: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let pts1: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, 1.5, 3.0)).collect();
        let mu0 = DiscreteMeasure::uniform(&spec, pts0);
        let mu1 = DiscreteMeasure::uniform(&spec, pts1);
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        let w_full = wasserstein2(&plan);
        for s in [0.3, 0.7] {
            let mus = interpolate(&spec, &plan, &mu0, &mu1, s);
            let sub = solve_ot(&spec, &mu0, &mus).unwrap();
            assert!(
                (wasserstein2(&sub) - s * w_full).abs() < 1e-6,
                "W2 at s={s}: {} vs {}",
                wasserstein2(&sub),
                s * w_full
            );
        }
    }

    #[test]
    fn interpolant_matches_intermediate_points() {
        let spec = GroupSpec::new(1, vec![4.0]).unwrap();
        let mut rng = sample::rng_for(53, 0);
        let n = 10;
        let pts0: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let pts1: Vec<Point> =
            (0..n).map(|_| sample::random_point(&mut rng, &spec, -1.0, 1.0)).collect();
        let mu0 = DiscreteMeasure::uniform(&spec, pts0);
        let mu1 = DiscreteMeasure::uniform(&spec, pts1);
        let plan = solve_ot(&spec, &mu0, &mu1).unwrap();
        let mus = interpolate(&spec, &plan, &mu0, &mu1, 0.4);
        for (pair, z) in plan.pairs.iter().zip(&mus.points) {
            let direct = intermediate_point(
                &spec,
                &mu0.points[pair.source],
                &mu1.points[pair.target],
                0.4,
            );
            for (a, b) in z.coords().iter().zip(direct.coords()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn example36_hand_values() {
        let inst = example36_instance(1, 1, &[1.0], &[1.0, 0.0], 50, 7).unwrap();
        // lower halfspace: kernel translation by −a
        let x = Point { x0: vec![-1.0], blocks: vec![[0.0, 0.0]], z: 0.0 };
        let y = inst.map_point(&x);
        assert_eq!(y.x0, vec![-2.0]);
        assert_eq!(y.blocks[0], [0.0, 0.0]);
        assert_eq!(y.z, 0.0);
        // upper halfspace: Heisenberg right translation by (b, 0)
        let x = Point { x0: vec![1.0], blocks: vec![[0.0, 0.0]], z: 0.0 };
        let y = inst.map_point(&x);
        assert_eq!(y.x0, vec![1.0]);
        assert_eq!(y.blocks[0], [1.0, 0.0]);
        assert_eq!(y.z, 0.0);
        // nontrivial block picks up the vertical correction z + 2(x×b)
        let x = Point { x0: vec![1.0], blocks: vec![[0.0, 0.5]], z: 0.1 };
        let y = inst.map_point(&x);
        assert_eq!(y.blocks[0], [1.0, 0.5]);
        assert!((y.z - (0.1 + 2.0 * (0.0 * 0.0 - 0.5 * 1.0))).abs() < 1e-15);
    }

    #[test]
    fn example36_theta_structure() {
        let inst = example36_instance(1, 1, &[1.0], &[1.0, 0.0], 200, 11).unwrap();
        let spec = &inst.spec;
        for (i, x) in inst.mu0.points.iter().enumerate() {
            let rel = spec.op(&spec.inverse(x), &inst.targets[i]);
            let lr = log_from_identity(spec, &rel);
            match inst.sides[i] {
                HalfSpace::Lower => {
                    assert_eq!(lr.cls, CutClass::AbnormalAxis);
                    assert!((lr.param.px0[0] + 1.0).abs() < 1e-12);
                    assert_eq!(lr.param.pz, 0.0);
                }
                HalfSpace::Upper => {
                    assert_eq!(lr.cls, CutClass::Interior);
                    assert!((lr.param.blocks[0][0] - 1.0).abs() < 1e-9);
                    assert!(lr.param.blocks[0][1].abs() < 1e-9);
                    assert!(lr.param.pz.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn example36_plan_recovers_analytic_map() {
        let inst = example36_instance(1, 1, &[1.0], &[1.0, 0.0], 120, 3).unwrap();
        let mu1 = inst.mu1();
        let plan = solve_ot(&inst.spec, &inst.mu0, &mu1).unwrap();
        for p in &plan.pairs {
            assert_eq!(p.source, p.target, "plan must match the analytic pairing");
        }
        let analytic_cost: f64 = inst
            .mu0
            .points
            .iter()
            .zip(&inst.targets)
            .map(|(x, y)| 0.5 * d_cc(&inst.spec, x, y).powi(2))
            .sum::<f64>()
            / inst.mu0.len() as f64;
        assert!((plan.cost - analytic_cost).abs() < 1e-9);
    }

    #[test]
    fn example36_rejects_degenerate_parameters() {
        assert!(example36_instance(1, 1, &[0.0], &[1.0, 0.0], 10, 0).is_err());
        assert!(example36_instance(1, 1, &[1.0], &[0.0, 0.0], 10, 0).is_err());
        assert!(example36_instance(0, 1, &[], &[1.0, 0.0], 10, 0).is_err());
        assert!(example36_instance(1, 1, &[1.0], &[1.0, 0.0], 0, 0).is_err());
        assert!(example36_instance(1, 1, &[1.0], &[1.0], 10, 0).is_err());
    }

    #[test]
    fn oversize_rejected() {
        let spec = spec_h1();
        let pts = vec![spec.identity(); MAX_SUPPORT + 1];
        let mu = DiscreteMeasure::uniform(&spec, pts);
        let e = DiscreteMeasure::dirac(&spec, spec.identity());
        assert!(matches!(solve_ot(&spec, &mu, &e), Err(TransportError::Oversize(_))));
    }
}
