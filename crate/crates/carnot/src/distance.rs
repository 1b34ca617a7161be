//! Inverse exponential map with cut-locus classification, the
//! Carnot–Carathéodory distance, analytic derivatives of `d²_CC/2`,
//! geodesic intermediate points, and a numerical probe of the loss of
//! semiconvexity at the cut locus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expmap::exp_from;
use crate::group::{Covector, GroupSpec, Point, BLOCK_ZERO_TOL};
use crate::trig;

/// A distance below this classifies the pair as [`CutClass::Identity`].
pub const IDENTITY_TOL: f64 = 1e-12;

/// |p_z| within this of 2π/α_d classifies as
/// [`CutClass::VerticalBoundary`].
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Guard band keeping the vertical root solve away from the interval end
/// when the top-frequency contribution diverges there.
const ROOT_GUARD: f64 = 1e-12;

/// Errors from derivative and probe queries.
#[derive(Debug, Error)]
pub enum DistanceError {
    /// The target lies in the cut locus of the base point, so `d²_CC/2` is
    /// not differentiable there.
    #[error("target is in the cut locus of the base point (class {0:?})")]
    CutLocus(CutClass),
    /// The probe needs a spec whose top frequency has multiplicity < d.
    #[error("spec has no frequency gap: every 2-block carries the top frequency")]
    NoMultiplicityGap,
    /// The probe direction must annihilate the top blocks but not all
    /// blocks.
    #[error("probe direction violates the hypotheses: {0}")]
    BadProbeDirection(&'static str),
}

/// Position of a target point relative to the cut locus of the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutClass {
    /// Unique minimizer, parameter strictly inside the injectivity domain.
    Interior,
    /// Target on the abnormal axis `ℝ^m × {0}`: straight-line transport in
    /// the kernel block, canonically represented with `p_z = 0`.
    AbnormalAxis,
    /// Parameter on the conjugate boundary `|p_z| = 2π/α_d` with a nonzero
    /// 2-block; minimizers are non-unique, one canonical representative is
    /// returned.
    VerticalBoundary,
    /// Source equals target.
    Identity,
}

/// Result of inverting the exponential map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogResult {
    /// A minimizing parameter with `exp_e(param) = x`; canonical at cut
    /// points.
    pub param: Covector,
    /// Cut-locus classification of the target.
    pub cls: CutClass,
    /// Carnot–Carathéodory distance from the identity,
    /// `dist² = ‖p_x⁰‖² + Σ‖p_xⁱ‖²`.
    pub dist: f64,
}

/// `f(t) = sin²(t/2)/(t/2)²` on (−2π, 2π); the squared-norm contraction
/// factor of a 2-block along a geodesic. `f(0) = 1` by continuity.
pub fn f_aux(t: f64) -> f64 {
    assert!(t.abs() < 2.0 * std::f64::consts::PI, "f is defined on (-2π, 2π), got {t}");
    let s = trig::sinc(0.5 * t);
    s * s
}

/// `g(t) = (t − sin t)/sin²(t/2)` on (−2π, 2π); odd, strictly increasing and
/// diverging at ±2π. `g(0) = 0` by continuity.
pub fn g_aux(t: f64) -> f64 {
    assert!(t.abs() < 2.0 * std::f64::consts::PI, "g is defined on (-2π, 2π), got {t}");
    4.0 * t * trig::u_minus_sin_over_u3(t) / f_aux(t)
}

/// Derivative of [`g_aux`], used by the Newton refinement of the vertical
/// root solve: `g'(t) = 2 − 8·w(t)·sinc(t)/sinc(t/2)⁴` with
/// `w(t) = (t − sin t)/t³`.
fn g_aux_deriv(t: f64) -> f64 {
    let s_half = trig::sinc(0.5 * t);
    2.0 - 8.0 * trig::u_minus_sin_over_u3(t) * trig::sinc(t) / (s_half * s_half * s_half * s_half)
}

/// Vertical balance `h(t) = ⅛ Σ αᵢ ‖xⁱ‖² g(αᵢ t)` restricted to the blocks
/// flagged live; odd and strictly increasing in `t`.
fn vertical_balance(spec: &GroupSpec, x: &Point, live: &[bool], t: f64) -> f64 {
    let mut h = 0.0;
    for (i, &alpha) in spec.alphas().iter().enumerate() {
        if live[i] {
            let nsq = x.blocks[i][0] * x.blocks[i][0] + x.blocks[i][1] * x.blocks[i][1];
            h += 0.125 * alpha * nsq * g_aux(alpha * t);
        }
    }
    h
}

fn vertical_balance_deriv(spec: &GroupSpec, x: &Point, live: &[bool], t: f64) -> f64 {
    let mut h = 0.0;
    for (i, &alpha) in spec.alphas().iter().enumerate() {
        if live[i] {
            let nsq = x.blocks[i][0] * x.blocks[i][0] + x.blocks[i][1] * x.blocks[i][1];
            h += 0.125 * alpha * alpha * nsq * g_aux_deriv(alpha * t);
        }
    }
    h
}

/// Bracketed root solve for `h(t) = target` on `[0, hi]` with `h` increasing
/// and `h(0) = 0 ≤ target`. Newton steps alternate with bisection so the
/// bracket provably collapses; returns `hi` when the target exceeds
/// `h(hi)`.
fn solve_vertical(
    spec: &GroupSpec,
    x: &Point,
    live: &[bool],
    target: f64,
    hi: f64,
) -> f64 {
    if target == 0.0 {
        return 0.0;
    }
    if vertical_balance(spec, x, live, hi) < target {
        return hi;
    }
    let (mut lo, mut hi_b) = (0.0_f64, hi);
    let mut t = 0.5 * hi;
    for it in 0..220 {
        let r = vertical_balance(spec, x, live, t) - target;
        if r == 0.0 {
            return t;
        }
        if r > 0.0 {
            hi_b = t;
        } else {
            lo = t;
        }
        if hi_b - lo <= f64::EPSILON * hi {
            break;
        }
        t = if it % 2 == 0 {
            let d = vertical_balance_deriv(spec, x, live, t);
            let nt = t - r / d;
            if d > 0.0 && nt > lo && nt < hi_b {
                nt
            } else {
                0.5 * (lo + hi_b)
            }
        } else {
            0.5 * (lo + hi_b)
        };
    }
    0.5 * (lo + hi_b)
}

/// Inverts the exponential map at the identity: finds a minimizing
/// parameter reaching `x`, its cut classification, and the distance.
///
/// The vertical parameter is the unique root of the strictly increasing
/// balance `h(p_z) = z` when one exists in `(−2π/α_d, 2π/α_d)`; the
/// 2-blocks are then recovered by inverting the per-block geodesic matrix.
/// When `|z|` exceeds the supremum of `h` (which requires every
/// top-frequency block of `x` to vanish), the leftover vertical excess is
/// carried by a top-frequency block of squared norm `4π·|z_res|/α_d`,
/// placed in the canonical direction `(r, 0)` of the first top block.
pub fn log_from_identity(spec: &GroupSpec, x: &Point) -> LogResult {
    spec.assert_point(x);
    assert!(x.is_finite(), "log_from_identity requires finite coordinates");
    let d = spec.num_blocks();
    let t_max = spec.pz_limit();
    let live: Vec<bool> = (0..d)
        .map(|i| (x.blocks[i][0].powi(2) + x.blocks[i][1].powi(2)).sqrt() >= BLOCK_ZERO_TOL)
        .collect();
    let any_live = live.iter().any(|&b| b);

    if !any_live && x.z.abs() < BLOCK_ZERO_TOL {
        let param = Covector {
            px0: x.x0.clone(),
            blocks: vec![[0.0, 0.0]; d],
            pz: 0.0,
        };
        let dist = param.horizontal_norm_sq().sqrt();
        let cls = if dist < IDENTITY_TOL { CutClass::Identity } else { CutClass::AbnormalAxis };
        return LogResult { param, cls, dist };
    }

    let top = spec.top_alpha();
    let any_top_live =
        (0..d).any(|i| live[i] && spec.alphas()[i] == top);
    let zsign = if x.z >= 0.0 { 1.0 } else { -1.0 };
    let zabs = x.z.abs();

    // When a top-frequency block is live the balance diverges at the
    // interval end and an interior root always exists; otherwise the
    // balance stays finite up to the end and the excess goes to the
    // boundary residual.
    let (pz_abs, residual) = if any_top_live {
        (solve_vertical(spec, x, &live, zabs, t_max - ROOT_GUARD), 0.0)
    } else {
        let h_sup = vertical_balance(spec, x, &live, t_max);
        if zabs >= h_sup {
            (t_max, zabs - h_sup)
        } else {
            (solve_vertical(spec, x, &live, zabs, t_max), 0.0)
        }
    };
    let pz = zsign * pz_abs;

    let mut blocks = vec![[0.0, 0.0]; d];
    for i in 0..d {
        if live[i] {
            let theta = spec.alphas()[i] * pz;
            let a = trig::sinc(theta);
            let b = trig::cos_minus_one_over(theta);
            let f = a * a + b * b; // = f_aux(theta), positive on (-2π, 2π)
            let [x0, x1] = x.blocks[i];
            blocks[i] = [(a * x0 - b * x1) / f, (a * x1 + b * x0) / f];
        }
    }
    if residual > 0.0 || (!any_top_live && pz_abs == t_max) {
        let r = (4.0 * std::f64::consts::PI * residual / top).sqrt();
        blocks[spec.first_top_block()] = [r, 0.0];
    }

    let param = Covector { px0: x.x0.clone(), blocks, pz };
    let dist = param.horizontal_norm_sq().sqrt();
    let cls = if dist < IDENTITY_TOL {
        CutClass::Identity
    } else if pz_abs >= t_max - BOUNDARY_TOL {
        CutClass::VerticalBoundary
    } else {
        CutClass::Interior
    };
    LogResult { param, cls, dist }
}

/// Carnot–Carathéodory distance, `d_CC(x, y) = d_CC(e, x⁻¹∘y)`.
pub fn d_cc(spec: &GroupSpec, x: &Point, y: &Point) -> f64 {
    log_from_identity(spec, &spec.op(&spec.inverse(x), y)).dist
}

/// Carnot gradient of `d²_CC(y,·)/2` at `x`, expressed as coefficients in
/// the frame `(X⁰, X¹…X^d, Z)`.
///
/// With `x = exp_y(p)` the coefficients are `p_x⁰` on the kernel block,
/// `[cos(αᵢp_z) I − sin(αᵢp_z) J] p_xⁱ` on block `i`, and `p_z` vertically;
/// consequently `exp_x(−grad) = y` (checked by the round-trip tests).
/// Fails off the smooth locus: the target must not be in the cut locus of
/// `y`. Returns the zero covector when `x = y`.
pub fn grad_dsq_half(spec: &GroupSpec, y: &Point, x: &Point) -> Result<Covector, DistanceError> {
    let rel = spec.op(&spec.inverse(y), x);
    let lr = log_from_identity(spec, &rel);
    match lr.cls {
        CutClass::Identity => Ok(spec.zero_covector()),
        CutClass::Interior => {
            let p = lr.param;
            let blocks = spec
                .alphas()
                .iter()
                .zip(&p.blocks)
                .map(|(&alpha, &[p0, p1])| {
                    let (sin, cos) = (alpha * p.pz).sin_cos();
                    [cos * p0 - sin * p1, cos * p1 + sin * p0]
                })
                .collect();
            Ok(Covector { px0: p.px0, blocks, pz: p.pz })
        }
        cls => Err(DistanceError::CutLocus(cls)),
    }
}

/// The s-intermediate point on the canonical minimizing geodesic from `x`
/// to `y`: satisfies `d(x,·) = s·d(x,y)` and `d(·,y) = (1−s)·d(x,y)`.
pub fn intermediate_point(spec: &GroupSpec, x: &Point, y: &Point, s: f64) -> Point {
    let p = log_from_identity(spec, &spec.op(&spec.inverse(x), y)).param;
    exp_from(spec, x, &p, s)
}

/// Second-difference quotients of `d²_CC(y,·)` across a conjugate-boundary
/// cut point, probing the blow-up that rules out local semiconvexity.
///
/// Requires a spec whose top frequency has multiplicity `q < d` and a
/// direction whose top `q` blocks vanish while some lower block does not.
/// The base point is `x = exp_y((p_x, 2π/α_d))`; the probe direction is the
/// first coordinate of the top block. Returns `(v, Q(v))` for
/// `v ∈ {1e-1, 1e-2, 1e-3, 1e-4}` where
/// `Q(v) = [d²(y, exp_x(ν)) + d²(y, exp_x(−ν)) − 2d²(y,x)]/v²`.
pub fn probe_cut_nonsemiconvexity(
    spec: &GroupSpec,
    y: &Point,
    px_blocks: &[[f64; 2]],
) -> Result<Vec<(f64, f64)>, DistanceError> {
    let d = spec.num_blocks();
    let q = spec.top_multiplicity();
    if q == d {
        return Err(DistanceError::NoMultiplicityGap);
    }
    assert_eq!(px_blocks.len(), d, "probe direction must have {d} blocks");
    let norm = |b: &[f64; 2]| (b[0] * b[0] + b[1] * b[1]).sqrt();
    if px_blocks[d - q..].iter().any(|b| norm(b) >= BLOCK_ZERO_TOL) {
        return Err(DistanceError::BadProbeDirection(
            "blocks at the top frequency must vanish",
        ));
    }
    if px_blocks.iter().all(|b| norm(b) < BLOCK_ZERO_TOL) {
        return Err(DistanceError::BadProbeDirection(
            "direction must have a nonzero 2-block",
        ));
    }

    let p = Covector {
        px0: vec![0.0; spec.kernel_dim()],
        blocks: px_blocks.to_vec(),
        pz: spec.pz_limit(),
    };
    let x = exp_from(spec, y, &p, 1.0);
    let base = d_cc(spec, y, &x).powi(2);
    let mut out = Vec::with_capacity(4);
    for &v in &[1e-1, 1e-2, 1e-3, 1e-4] {
        let mut nu = spec.zero_covector();
        nu.blocks[d - 1] = [v, 0.0];
        let plus = d_cc(spec, y, &exp_from(spec, &x, &nu, 1.0)).powi(2);
        nu.blocks[d - 1] = [-v, 0.0];
        let minus = d_cc(spec, y, &exp_from(spec, &x, &nu, 1.0)).powi(2);
        out.push((v, (plus + minus - 2.0 * base) / (v * v)));
    }
    Ok(out)
}
