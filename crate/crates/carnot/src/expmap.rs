//! The sub-Riemannian exponential map in closed form: geodesic evaluation,
//! the Jacobian determinant of the exponential, and the reversed
//! parametrization of a geodesic run backwards.

use serde::{Deserialize, Serialize};

use crate::group::{Covector, GroupSpec, Point};
use crate::trig;

/// Geodesic from the identity with parameter `p`, evaluated at `s ∈ [0,1]`
/// (clamped).
///
/// With θᵢ = αᵢ p_z, the blocks evolve by
///
/// ```text
/// γ⁰(s) = s p_x⁰
/// γⁱ(s) = ( sin(θᵢs)/θᵢ · I + (cos(θᵢs) − 1)/θᵢ · J ) p_xⁱ
/// γ_z(s) = Σᵢ ‖p_xⁱ‖² (θᵢ s − sin(θᵢ s)) / (2 αᵢ p_z²)
/// ```
///
/// evaluated in series-stable form, so the `p_z = 0` straight line and the
/// abnormal straight line (all 2-blocks zero, any `p_z`) emerge from the
/// same code path. Total over all finite inputs.
pub fn exp_from_identity(spec: &GroupSpec, p: &Covector, s: f64) -> Point {
    spec.assert_covector(p);
    let s = s.clamp(0.0, 1.0);
    let x0 = p.px0.iter().map(|v| v * s).collect();
    let mut blocks = Vec::with_capacity(spec.num_blocks());
    let mut z = 0.0;
    for (i, &alpha) in spec.alphas().iter().enumerate() {
        let u = alpha * p.pz * s;
        let a = s * trig::sinc(u);
        let b = s * trig::cos_minus_one_over(u);
        let [p0, p1] = p.blocks[i];
        blocks.push([a * p0 + b * p1, a * p1 - b * p0]);
        z += p.block_norm_sq(i) * 0.5 * alpha * alpha * p.pz * s * s * s
            * trig::u_minus_sin_over_u3(u);
    }
    Point { x0, blocks, z }
}

/// Geodesic from an arbitrary base point: `exp_x(sp) = x ∘ exp_e(sp)` by
/// left invariance.
pub fn exp_from(spec: &GroupSpec, base: &Point, p: &Covector, s: f64) -> Point {
    spec.op(base, &exp_from_identity(spec, p, s))
}

/// Jacobian determinant of the exponential map at `p`.
///
/// Writing uᵢ = αᵢ p_z/2, the closed form reduces to
///
/// ```text
/// ¼ Σᵢ ‖p_xⁱ‖² αᵢ² · K(uᵢ) · Πⱼ≠ᵢ sinc²(uⱼ),   K(u) = sin u (sin u − u cos u)/u⁴
/// ```
///
/// which is total (the `p_z = 0` value (1/12) Σ ‖p_xⁱ‖² αᵢ² is the limit)
/// and vanishes exactly at conjugate parameters. Callers gate by cut
/// classification; no domain restriction is applied here.
pub fn jac_exp(spec: &GroupSpec, p: &Covector) -> f64 {
    spec.assert_covector(p);
    let d = spec.num_blocks();
    let us: Vec<f64> = spec.alphas().iter().map(|a| 0.5 * a * p.pz).collect();
    let sincs: Vec<f64> = us.iter().map(|&u| trig::sinc(u)).collect();
    let mut total = 0.0;
    for i in 0..d {
        let mut term = 0.25 * p.block_norm_sq(i) * spec.alphas()[i] * spec.alphas()[i]
            * trig::jac_block_kernel(us[i]);
        for (j, &sj) in sincs.iter().enumerate() {
            if j != i {
                term *= sj * sj;
            }
        }
        total += term;
    }
    total
}

/// Parameter of the same geodesic traversed backwards: if `y = exp_e(p)`
/// then `exp_y(reverse_param(p)) = e`, and more generally the geodesic from
/// `exp_x(p)` back to `x` has this parameter.
pub fn reverse_param(spec: &GroupSpec, p: &Covector) -> Covector {
    spec.assert_covector(p);
    let px0 = p.px0.iter().map(|v| -v).collect();
    let blocks = spec
        .alphas()
        .iter()
        .zip(&p.blocks)
        .map(|(&alpha, &[p0, p1])| {
            let (sin, cos) = (alpha * p.pz).sin_cos();
            [-cos * p0 + sin * p1, -sin * p0 - cos * p1]
        })
        .collect();
    Covector { px0, blocks, pz: -p.pz }
}

/// A geodesic path: base point plus direction, evaluable on `s ∈ [0,1]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub base: Point,
    pub direction: Covector,
}

impl GeodesicPath {
    pub fn new(spec: &GroupSpec, base: Point, direction: Covector) -> Self {
        spec.assert_point(&base);
        spec.assert_covector(&direction);
        GeodesicPath { base, direction }
    }

    /// The point at parameter `s` (clamped to [0,1]).
    pub fn at(&self, spec: &GroupSpec, s: f64) -> Point {
        exp_from(spec, &self.base, &self.direction, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    fn spec_h1() -> GroupSpec {
        GroupSpec::new(0, vec![4.0]).unwrap()
    }

    #[test]
    fn h1_quarter_turn_hand_value() {
        // p = ((1,0), π/2) at s=1 lands on ((0,0), 1/π).
        let spec = spec_h1();
        let p = Covector { px0: vec![], blocks: vec![[1.0, 0.0]], pz: std::f64::consts::FRAC_PI_2 };
        let x = exp_from_identity(&spec, &p, 1.0);
        assert!(x.blocks[0][0].abs() < 1e-15);
        assert!(x.blocks[0][1].abs() < 1e-15);
        assert!((x.z - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn zero_parameter_stays_at_identity() {
        let spec = GroupSpec::new(2, vec![1.0, 3.0]).unwrap();
        let p = spec.zero_covector();
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(exp_from_identity(&spec, &p, s), spec.identity());
        }
    }

    #[test]
    fn abnormal_direction_ignores_pz() {
        // On ℝ×H¹ the direction (1, 0-blocks, p_z) moves only the kernel.
        let spec = GroupSpec::new(1, vec![4.0]).unwrap();
        let p = Covector { px0: vec![1.0], blocks: vec![[0.0, 0.0]], pz: 7.0 };
        let x = exp_from_identity(&spec, &p, 0.5);
        assert_eq!(x.x0, vec![0.5]);
        assert_eq!(x.blocks[0], [0.0, 0.0]);
        assert_eq!(x.z, 0.0);
    }

    #[test]
    fn exp_from_is_left_translate() {
        let spec = spec_h1();
        let x = Point { x0: vec![], blocks: vec![[1.0, 0.0]], z: 0.0 };
        let p = Covector { px0: vec![], blocks: vec![[1.0, 0.0]], pz: std::f64::consts::FRAC_PI_2 };
        let y = exp_from(&spec, &x, &p, 1.0);
        // composition of the hand values: ((1,0),0) ∘ ((0,0),1/π) = ((1,0),1/π)
        assert!((y.blocks[0][0] - 1.0).abs() < 1e-15);
        assert!(y.blocks[0][1].abs() < 1e-15);
        assert!((y.z - 1.0 / std::f64::consts::PI).abs() < 1e-15);

        assert_eq!(exp_from(&spec, &x, &spec.zero_covector(), 0.7), x);
        let e = spec.identity();
        assert_eq!(exp_from(&spec, &e, &p, 0.6), exp_from_identity(&spec, &p, 0.6));
    }

    #[test]
    fn jacobian_hand_values() {
        let spec = spec_h1();
        let flat = Covector { px0: vec![], blocks: vec![[1.0, 0.0]], pz: 0.0 };
        assert!((jac_exp(&spec, &flat) - 4.0 / 3.0).abs() < 1e-15);

        let conjugate =
            Covector { px0: vec![], blocks: vec![[1.0, 0.0]], pz: std::f64::consts::FRAC_PI_2 };
        assert!(jac_exp(&spec, &conjugate).abs() < 1e-15);

        let spec = GroupSpec::new(1, vec![4.0]).unwrap();
        let abnormal = Covector { px0: vec![1.0], blocks: vec![[0.0, 0.0]], pz: 0.0 };
        assert_eq!(jac_exp(&spec, &abnormal), 0.0);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let specs = [
            spec_h1(),
            GroupSpec::new(1, vec![4.0]).unwrap(),
            GroupSpec::new(0, vec![1.0, 2.0]).unwrap(),
        ];
        for spec in &specs {
            let n = spec.dim();
            let mut rng = sample::rng_for(5, 0);
            for _ in 0..20 {
                let p = sample::random_covector_in_d(&mut rng, spec, 0.9);
                let h = 1e-5;
                let mut jac = nalgebra::DMatrix::zeros(n, n);
                for j in 0..n {
                    let mut c = p.coords();
                    c[j] += h;
                    let fp = exp_from_identity(spec, &Covector::from_coords(spec, &c), 1.0);
                    c[j] -= 2.0 * h;
                    let fm = exp_from_identity(spec, &Covector::from_coords(spec, &c), 1.0);
                    for (i, (a, b)) in fp.coords().iter().zip(fm.coords()).enumerate() {
                        jac[(i, j)] = (a - b) / (2.0 * h);
                    }
                }
                let fd = jac.determinant();
                let closed = jac_exp(spec, &p);
                assert!(
                    (fd - closed).abs() <= 1e-5 * closed.abs().max(1e-3),
                    "fd={fd} closed={closed}"
                );
            }
        }
    }

    #[test]
    fn reverse_param_round_trip() {
        let specs = [
            spec_h1(),
            GroupSpec::new(1, vec![4.0]).unwrap(),
            GroupSpec::new(0, vec![1.0, 2.0]).unwrap(),
        ];
        for spec in &specs {
            let mut rng = sample::rng_for(9, 0);
            for _ in 0..100 {
                let p = sample::random_covector_in_d(&mut rng, spec, 0.95);
                let y = exp_from_identity(spec, &p, 1.0);
                let back = exp_from(spec, &y, &reverse_param(spec, &p), 1.0);
                for c in back.coords() {
                    assert!(c.abs() < 1e-10, "round trip residual {c}");
                }
                // involution
                let pp = reverse_param(spec, &reverse_param(spec, &p));
                for (a, b) in pp.coords().iter().zip(p.coords()) {
                    assert!((a - b).abs() < 1e-12);
                }
                // the Jacobian is even under reversal
                let (ja, jb) = (jac_exp(spec, &p), jac_exp(spec, &reverse_param(spec, &p)));
                assert!((ja - jb).abs() <= 1e-13 * ja.abs().max(1.0));
            }
        }
    }

    #[test]
    fn reverse_param_flat_is_negation() {
        let spec = spec_h1();
        let p = Covector { px0: vec![], blocks: vec![[1.0, 0.0]], pz: 0.0 };
        let r = reverse_param(&spec, &p);
        assert_eq!(r.blocks[0], [-1.0, -0.0]);
        assert_eq!(r.pz, -0.0);
        let zero = spec.zero_covector();
        assert_eq!(reverse_param(&spec, &zero).coords(), zero.coords());
    }

    #[test]
    fn geodesic_path_is_continuous() {
        let spec = GroupSpec::new(0, vec![1.0, 2.0]).unwrap();
        let mut rng = sample::rng_for(13, 0);
        let p = sample::random_covector_in_d(&mut rng, &spec, 0.9);
        let base = sample::random_point(&mut rng, &spec, -1.0, 1.0);
        let path = GeodesicPath::new(&spec, base.clone(), p.clone());
        assert_eq!(path.at(&spec, 0.0), base);
        let speed = p.horizontal_norm_sq().sqrt();
        let mut prev = path.at(&spec, 0.0);
        let steps = 500;
        for i in 1..=steps {
            let s = i as f64 / steps as f64;
            let cur = path.at(&spec, s);
            let jump: f64 = cur
                .coords()
                .iter()
                .zip(prev.coords())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            // crude Lipschitz bound in coordinates: the z-coordinate of a
            // geodesic moves at most O(‖p‖·(1+‖γ‖)) per unit s
            assert!(jump <= 20.0 * speed.max(1.0) / steps as f64);
            prev = cur;
        }
    }
}
