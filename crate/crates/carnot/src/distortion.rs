//! Geodesic distortion coefficients of the group and the power means used
//! by the comparison inequalities.
//!
//! The distortion coefficient τ_s weighs how the exponential map distorts
//! volume along a geodesic with parameter `p`, relative to the same
//! geodesic run to time 1. It degenerates to `s^{(k+3)/(k+1)}` for flat
//! directions (`p_z = 0`), to `s` for abnormal directions, and blows up at
//! the conjugate boundary `|p_z| = 2π/α_d`, which is represented as an
//! explicit `+∞` rather than an error.

use crate::distance::{log_from_identity, BOUNDARY_TOL};
use crate::group::{Covector, GroupSpec, Point};
use crate::trig;
use rayon::prelude::*;

/// `𝕕₁(t, s) = sin(ts/2)/s` for `s ∈ (0, 1]`, evaluated as
/// `(t/2)·sinc(ts/2)` so small arguments lose no precision.
pub fn dd1(t: f64, s: f64) -> f64 {
    assert!(s > 0.0 && s <= 1.0, "s must lie in (0,1], got {s}");
    0.5 * t * trig::sinc(0.5 * t * s)
}

/// `𝕕₂(t, s) = (sin(ts/2) − (ts/2)cos(ts/2))/s`, evaluated as
/// `(t³s²/8)·(sin u − u cos u)/u³` at `u = ts/2`.
pub fn dd2(t: f64, s: f64) -> f64 {
    assert!(s > 0.0 && s <= 1.0, "s must lie in (0,1], got {s}");
    let u = 0.5 * t * s;
    0.125 * t * t * t * s * s * trig::sin_minus_u_cos_over_u3(u)
}

/// Σᵢ ‖p_xⁱ‖² αᵢ² sinc(uᵢσ) K(uᵢσ) Πⱼ≠ᵢ sinc²(uⱼσ) · σ², with
/// uⱼ = αⱼ p_z/2 and K = (sin u − u cos u)/u³.
///
/// This is the 𝕕₁/𝕕₂ product of the distortion ratio after the positive
/// factor Πⱼ (αⱼ p_z/2)² common to numerator and denominator has been
/// cancelled, which keeps the quotient finite down to `p_z = 0`
/// (where it equals σ²·Σ‖p_xⁱ‖²αᵢ²/3).
fn distortion_ratio_term(spec: &GroupSpec, p: &Covector, sigma: f64) -> f64 {
    let d = spec.num_blocks();
    let sincs: Vec<f64> = spec
        .alphas()
        .iter()
        .map(|a| trig::sinc(0.5 * a * p.pz * sigma))
        .collect();
    let mut total = 0.0;
    for i in 0..d {
        let u = 0.5 * spec.alphas()[i] * p.pz * sigma;
        let mut term = p.block_norm_sq(i)
            * spec.alphas()[i]
            * spec.alphas()[i]
            * sincs[i]
            * trig::sin_minus_u_cos_over_u3(u);
        for (j, &sj) in sincs.iter().enumerate() {
            if j != i {
                term *= sj * sj;
            }
        }
        total += term;
    }
    sigma * sigma * total
}

/// Distortion coefficient τ_s(p) for `s ∈ (0,1)` and `p` in the closed
/// parameter domain `|p_z| ≤ 2π/α_d`.
///
/// Branches: abnormal directions give `s`; parameters within
/// [`BOUNDARY_TOL`] of the conjugate boundary give `+∞`; everything else
/// uses the 𝕕₁/𝕕₂ ratio, which continuously takes the value
/// `s^{(k+3)/(k+1)}` at `p_z = 0`.
pub fn tau(spec: &GroupSpec, s: f64, p: &Covector) -> f64 {
    spec.assert_covector(p);
    assert!(s > 0.0 && s < 1.0, "s must lie in (0,1), got {s}");
    let t_max = spec.pz_limit();
    let apz = p.pz.abs();
    assert!(
        apz <= t_max + BOUNDARY_TOL,
        "p_z = {} outside the closed domain |p_z| ≤ {t_max}",
        p.pz
    );
    if p.is_abnormal_dir(spec) {
        return s;
    }
    if apz >= t_max - BOUNDARY_TOL {
        return f64::INFINITY;
    }
    let inv_dim = 1.0 / spec.dim() as f64;
    if p.pz == 0.0 {
        return s.powf((spec.dim() as f64 + 2.0) * inv_dim);
    }
    let ratio = distortion_ratio_term(spec, p, s) / distortion_ratio_term(spec, p, 1.0);
    s * ratio.powf(inv_dim)
}

/// Normalized distortion coefficient τ̃_s = τ_s/s; equals 1 on abnormal
/// directions and `s^{2/(k+1)}` at `p_z = 0`.
pub fn tau_tilde(spec: &GroupSpec, s: f64, p: &Covector) -> f64 {
    tau(spec, s, p) / s
}

/// Set distortion coefficient over two sampled sets: the minimum of τ_s
/// over all sample pairs, after discarding conjugate-boundary pairs
/// (τ = +∞) up to the fraction `drop_frac`, the discrete stand-in for
/// restricting to full-measure subsets. Returns `+∞` when boundary pairs
/// exceed that fraction.
pub fn tau_set(
    spec: &GroupSpec,
    s: f64,
    a_samples: &[Point],
    b_samples: &[Point],
    drop_frac: f64,
) -> f64 {
    assert!(!a_samples.is_empty() && !b_samples.is_empty(), "sample sets must be nonempty");
    assert!((0.0..=0.05).contains(&drop_frac), "drop_frac must lie in [0, 0.05]");
    let (inf_count, min) = a_samples
        .par_iter()
        .map(|x| {
            let xi = spec.inverse(x);
            let mut inf = 0usize;
            let mut min = f64::INFINITY;
            for y in b_samples {
                let lr = log_from_identity(spec, &spec.op(&xi, y));
                let t = tau(spec, s, &lr.param);
                if t.is_infinite() {
                    inf += 1;
                } else if t < min {
                    min = t;
                }
            }
            (inf, min)
        })
        .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));
    let total = a_samples.len() * b_samples.len();
    if inf_count as f64 > drop_frac * total as f64 {
        f64::INFINITY
    } else {
        min
    }
}

/// Power mean `M_s^p(a, b) = ((1−s)a^p + s b^p)^{1/p}` for `a, b ≥ 0`,
/// with the zero-annihilation conventions: the result is 0 whenever
/// `ab = 0` (except `p = −∞`, which is the plain minimum), `p = 0` is the
/// geometric mean, and `p = ±∞` are min/max.
pub fn pmean(s: f64, p: f64, a: f64, b: f64) -> f64 {
    assert!(s > 0.0 && s < 1.0, "s must lie in (0,1), got {s}");
    assert!(a >= 0.0 && b >= 0.0, "p-mean arguments must be nonnegative, got {a}, {b}");
    if p == f64::NEG_INFINITY {
        return a.min(b);
    }
    if p == f64::INFINITY {
        return if a == 0.0 || b == 0.0 { 0.0 } else { a.max(b) };
    }
    if p == 0.0 {
        return a.powf(1.0 - s) * b.powf(s);
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    ((1.0 - s) * a.powf(p) + s * b.powf(p)).powf(1.0 / p)
}

/// Exponent `pq/(p+q)` of the p-mean product inequality
/// `M_s^p(a,b)·M_s^q(c,d) ≥ M_s^{pq/(p+q)}(ac, bd)`, valid for `p+q ≥ 0`,
/// with the limiting conventions: 0 when `p = q = 0`, `−∞` when
/// `p + q = 0` with `p ≠ 0`, and the finite partner when one argument is
/// `+∞`.
pub fn pmean_product_exponent(p: f64, q: f64) -> f64 {
    assert!(
        p + q >= 0.0 || (p.is_infinite() && q.is_infinite()),
        "requires p + q ≥ 0, got {p}, {q}"
    );
    if p == 0.0 && q == 0.0 {
        return 0.0;
    }
    if p.is_infinite() && q.is_infinite() {
        return f64::INFINITY;
    }
    if p.is_infinite() {
        return q;
    }
    if q.is_infinite() {
        return p;
    }
    if p + q == 0.0 {
        return f64::NEG_INFINITY;
    }
    p * q / (p + q)
}
