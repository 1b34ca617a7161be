//! The verification suites: exact-calculus checks by round trips and finite
//! differences, the per-pair Jacobian inequality on the mixed transport
//! instance, and Monte Carlo certification of the measure-contraction,
//! Brunn–Minkowski, entropy and Borell–Brascamp–Lieb inequalities.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{
    BoundingBox, CheckLine, DensityEstimate, EntropyFunctional, ReportParams, VerifyError,
    VerifyReport, VoxelGrid,
};
use crate::distance::{
    d_cc, grad_dsq_half, intermediate_point, log_from_identity, probe_cut_nonsemiconvexity,
    CutClass,
};
use crate::distortion::{pmean, tau, tau_set, tau_tilde};
use crate::expmap::{exp_from, exp_from_identity, jac_exp, reverse_param};
use crate::group::{Covector, GroupSpec, Point};
use crate::sample;
use crate::transport::{example36_instance, solve_ot, DiscreteMeasure};

const MC_SLACK: f64 = 0.05;
const BATCH: usize = 2048;

/// The four groups every acceptance suite runs on: the Heisenberg group,
/// its product with a line, the 5-dimensional single-frequency group, and
/// a two-frequency group with a multiplicity gap.
pub fn acceptance_specs() -> Vec<GroupSpec> {
    vec![
        GroupSpec::new(0, vec![4.0]).expect("valid"),
        GroupSpec::new(1, vec![4.0]).expect("valid"),
        GroupSpec::new(0, vec![4.0, 4.0]).expect("valid"),
        GroupSpec::new(0, vec![1.0, 2.0]).expect("valid"),
    ]
}

fn shift_point(spec: &GroupSpec, x: &Point, dir: &[f64], step: f64) -> Point {
    let coords: Vec<f64> =
        x.coords().iter().zip(dir).map(|(a, b)| a + step * b).collect();
    Point::from_coords(spec, &coords)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Finite-difference Jacobian determinant of `p ↦ exp_base(p)` (base = e
/// when `None`), central differences with step `h`.
fn fd_exp_jacobian(spec: &GroupSpec, base: Option<&Point>, p: &Covector, h: f64) -> f64 {
    let n = spec.dim();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut c = p.coords();
        c[j] += h;
        let fp = match base {
            Some(b) => exp_from(spec, b, &Covector::from_coords(spec, &c), 1.0),
            None => exp_from_identity(spec, &Covector::from_coords(spec, &c), 1.0),
        };
        c[j] -= 2.0 * h;
        let fm = match base {
            Some(b) => exp_from(spec, b, &Covector::from_coords(spec, &c), 1.0),
            None => exp_from_identity(spec, &Covector::from_coords(spec, &c), 1.0),
        };
        for (i, (a, b)) in fp.coords().iter().zip(fm.coords()).enumerate() {
            jac[(i, j)] = (a - b) / (2.0 * h);
        }
    }
    jac.determinant()
}

/// Round trips, analytic-vs-finite-difference derivatives, Jacobian
/// agreement and the kernel-splitting rule, each reported as a worst-case
/// error over seeded random samples.
pub fn verify_calculus(spec: &GroupSpec, n_samples: usize, seed: u64) -> VerifyReport {
    assert!(n_samples >= 100, "need at least 100 samples");
    let t0 = Instant::now();
    let mut lines = Vec::new();

    // exp/log round trip on the full sample budget
    {
        let nb = n_samples.div_ceil(BATCH);
        let partials: Vec<(f64, u64)> = (0..nb)
            .into_par_iter()
            .map(|b| {
                let mut rng = sample::rng_for(seed, b as u64);
                let count = BATCH.min(n_samples - b * BATCH);
                let mut max_err = 0.0f64;
                let mut bad_cls = 0u64;
                for _ in 0..count {
                    let p = sample::random_covector_in_d(&mut rng, spec, 0.95);
                    let x = exp_from_identity(spec, &p, 1.0);
                    let lr = log_from_identity(spec, &x);
                    max_err = max_err.max(max_abs_diff(&lr.param.coords(), &p.coords()));
                    if lr.cls != CutClass::Interior {
                        bad_cls += 1;
                    }
                }
                (max_err, bad_cls)
            })
            .collect();
        let max_err = partials.iter().map(|p| p.0).fold(0.0, f64::max);
        let bad: u64 = partials.iter().map(|p| p.1).sum();
        lines.push(CheckLine::le("exp_log_round_trip_max_err", max_err, 0.0, 1e-8));
        lines.push(CheckLine::le("exp_log_non_interior_count", bad as f64, 0.0, 0.0));
    }

    // analytic gradient of d²/2 vs frame finite differences + descent round trip
    {
        let n = n_samples.min(500);
        let partials: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample::rng_for(seed, 1_000_000 + i as u64);
                let y = sample::random_point(&mut rng, spec, -1.0, 1.0);
                let p = sample::random_covector_in_d(&mut rng, spec, 0.9);
                let x = exp_from(spec, &y, &p, 1.0);
                let grad = grad_dsq_half(spec, &y, &x).expect("interior pair");
                let frame = spec.frame_at(&x);
                let h = 1e-5;
                let mut fd_err = 0.0f64;
                for (dir, g) in frame.iter().zip(grad.coords()) {
                    let fp = 0.5 * d_cc(spec, &y, &shift_point(spec, &x, dir, h)).powi(2);
                    let fm = 0.5 * d_cc(spec, &y, &shift_point(spec, &x, dir, -h)).powi(2);
                    fd_err = fd_err.max(((fp - fm) / (2.0 * h) - g).abs());
                }
                let mut minus = grad.clone();
                minus.px0.iter_mut().for_each(|v| *v = -*v);
                minus.blocks.iter_mut().for_each(|b| {
                    b[0] = -b[0];
                    b[1] = -b[1];
                });
                minus.pz = -minus.pz;
                let back = exp_from(spec, &x, &minus, 1.0);
                (fd_err, max_abs_diff(&back.coords(), &y.coords()))
            })
            .collect();
        let fd = partials.iter().map(|p| p.0).fold(0.0, f64::max);
        let rt = partials.iter().map(|p| p.1).fold(0.0, f64::max);
        lines.push(CheckLine::le("gradient_fd_max_err", fd, 0.0, 1e-5));
        lines.push(CheckLine::le("gradient_exp_round_trip_max_err", rt, 0.0, 1e-9));
    }

    // closed-form exponential Jacobian vs finite differences; left
    // invariance; the p_z = 0 closed form
    {
        let n = n_samples.min(200);
        let partials: Vec<(f64, f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample::rng_for(seed, 2_000_000 + i as u64);
                let p = sample::random_covector_in_d(&mut rng, spec, 0.9);
                let closed = jac_exp(spec, &p);
                let fd = fd_exp_jacobian(spec, None, &p, 1e-5);
                let rel = (fd - closed).abs() / closed.abs().max(1e-6);
                let x = sample::random_point(&mut rng, spec, -1.0, 1.0);
                let fd_x = fd_exp_jacobian(spec, Some(&x), &p, 1e-5);
                let invariance = (fd_x - fd).abs() / fd.abs().max(1e-6);
                let mut flat = p.clone();
                flat.pz = 0.0;
                let expected: f64 = (0..spec.num_blocks())
                    .map(|b| flat.block_norm_sq(b) * spec.alphas()[b] * spec.alphas()[b])
                    .sum::<f64>()
                    / 12.0;
                let flat_err = (jac_exp(spec, &flat) - expected).abs();
                (rel, invariance, flat_err)
            })
            .collect();
        let rel = partials.iter().map(|p| p.0).fold(0.0, f64::max);
        let inv = partials.iter().map(|p| p.1).fold(0.0, f64::max);
        let flat = partials.iter().map(|p| p.2).fold(0.0, f64::max);
        lines.push(CheckLine::le("jac_fd_max_rel_err", rel, 0.0, 1e-5));
        lines.push(CheckLine::le("jac_left_invariance_max_rel_err", inv, 0.0, 1e-6));
        lines.push(CheckLine::le("jac_flat_closed_form_max_err", flat, 0.0, 1e-10));
    }

    // reversed parametrization: geodesic round trip and involution
    {
        let nb = n_samples.div_ceil(BATCH);
        let partials: Vec<(f64, f64)> = (0..nb)
            .into_par_iter()
            .map(|b| {
                let mut rng = sample::rng_for(seed, 3_000_000 + b as u64);
                let count = BATCH.min(n_samples - b * BATCH);
                let mut rt = 0.0f64;
                let mut inv = 0.0f64;
                for _ in 0..count {
                    let p = sample::random_covector_in_d(&mut rng, spec, 0.95);
                    let y = exp_from_identity(spec, &p, 1.0);
                    let back = exp_from(spec, &y, &reverse_param(spec, &p), 1.0);
                    rt = rt.max(back.coords().iter().fold(0.0f64, |m, c| m.max(c.abs())));
                    let pp = reverse_param(spec, &reverse_param(spec, &p));
                    inv = inv.max(max_abs_diff(&pp.coords(), &p.coords()));
                }
                (rt, inv)
            })
            .collect();
        let rt = partials.iter().map(|p| p.0).fold(0.0, f64::max);
        let inv = partials.iter().map(|p| p.1).fold(0.0, f64::max);
        lines.push(CheckLine::le("reverse_round_trip_max_err", rt, 0.0, 1e-10));
        lines.push(CheckLine::le("reverse_involution_max_err", inv, 0.0, 1e-12));
    }

    // kernel-splitting (Pythagorean) rule against the reduced group
    if spec.kernel_dim() > 0 {
        let reduced = GroupSpec::new(0, spec.alphas().to_vec()).expect("valid reduced spec");
        let n = n_samples.min(2000);
        let worst = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample::rng_for(seed, 4_000_000 + i as u64);
                let x = sample::random_point(&mut rng, spec, -1.0, 1.0);
                let y = sample::random_point(&mut rng, spec, -1.0, 1.0);
                let full = d_cc(spec, &x, &y).powi(2);
                let kernel: f64 =
                    x.x0.iter().zip(&y.x0).map(|(a, b)| (a - b) * (a - b)).sum();
                let xr = Point { x0: vec![], blocks: x.blocks.clone(), z: x.z };
                let yr = Point { x0: vec![], blocks: y.blocks.clone(), z: y.z };
                let tilde = d_cc(&reduced, &xr, &yr).powi(2);
                (full - kernel - tilde).abs()
            })
            .reduce(|| 0.0, f64::max);
        lines.push(CheckLine::le("pythagorean_residual_max", worst, 0.0, 1e-9));
    }

    VerifyReport::from_lines(
        "calculus",
        spec.describe(),
        ReportParams { s: vec![], n: n_samples as u64, seed, voxel_h: None },
        lines,
        t0.elapsed().as_secs_f64(),
    )
}

/// Positive semidefiniteness and symmetry of the interpolation Hessian
/// `Hess[d²(γ(s),·)/2 − s·d²(y,·)/2]` at the base point, by nested frame
/// finite differences, plus nonnegativity of the underlying metric
/// combination.
pub fn verify_hessian_psd(spec: &GroupSpec, n_triples: usize, seed: u64) -> VerifyReport {
    let t0 = Instant::now();
    let svals = [0.25, 0.5, 0.75];
    let n = spec.dim();
    let (outer_h, inner_h) = (1e-4, 1e-5);

    let partials: Vec<(f64, f64, f64, f64)> = (0..n_triples)
        .into_par_iter()
        .map(|t| {
            let mut rng = sample::rng_for(seed, 5_000_000 + t as u64);
            let x = sample::random_point(&mut rng, spec, -1.0, 1.0);
            let p = sample::random_covector_in_d(&mut rng, spec, 0.8);
            let y = exp_from(spec, &x, &p, 1.0);
            let dxy_sq = d_cc(spec, &x, &y).powi(2);
            let mut m_at_x = 0.0f64;
            let mut asym = 0.0f64;
            let mut min_eig = f64::INFINITY;
            let mut m_near = f64::INFINITY;
            for &s in &svals {
                let gs = exp_from(spec, &x, &p, s);
                let m_fn = |z: &Point| {
                    0.5 * d_cc(spec, &gs, z).powi(2) - 0.5 * s * d_cc(spec, &y, z).powi(2)
                        + 0.5 * s * (1.0 - s) * dxy_sq
                };
                m_at_x = m_at_x.max(m_fn(&x).abs());
                // nested central differences with the frame re-evaluated at
                // every perturbed base point
                let inner = |w: &Point, v: usize| {
                    let fw = spec.frame_at(w);
                    (m_fn(&shift_point(spec, w, &fw[v], inner_h))
                        - m_fn(&shift_point(spec, w, &fw[v], -inner_h)))
                        / (2.0 * inner_h)
                };
                let fx = spec.frame_at(&x);
                let mut hess = DMatrix::zeros(n, n);
                for u in 0..n {
                    let xp = shift_point(spec, &x, &fx[u], outer_h);
                    let xm = shift_point(spec, &x, &fx[u], -outer_h);
                    for v in 0..n {
                        hess[(u, v)] = (inner(&xp, v) - inner(&xm, v)) / (2.0 * outer_h);
                    }
                }
                for u in 0..n {
                    for v in 0..u {
                        asym = asym.max((hess[(u, v)] - hess[(v, u)]).abs());
                    }
                }
                let sym = 0.5 * (&hess + hess.transpose());
                let eigs = sym.symmetric_eigenvalues();
                min_eig = min_eig.min(eigs.iter().copied().fold(f64::INFINITY, f64::min));
                for _ in 0..3 {
                    let dz: Vec<f64> = (0..n)
                        .map(|_| rand::Rng::random_range(&mut rng, -0.05..0.05))
                        .collect();
                    let z = Point::from_coords(
                        spec,
                        &x.coords().iter().zip(&dz).map(|(a, b)| a + b).collect::<Vec<_>>(),
                    );
                    m_near = m_near.min(m_fn(&z));
                }
            }
            (m_at_x, asym, min_eig, m_near)
        })
        .collect();

    let m_at_x = partials.iter().map(|p| p.0).fold(0.0, f64::max);
    let asym = partials.iter().map(|p| p.1).fold(0.0, f64::max);
    let min_eig = partials.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    let m_near = partials.iter().map(|p| p.3).fold(f64::INFINITY, f64::min);

    VerifyReport::from_lines(
        "hessian_psd",
        spec.describe(),
        ReportParams { s: svals.to_vec(), n: n_triples as u64, seed, voxel_h: None },
        vec![
            CheckLine::le("m_vanishes_at_base_max_abs", m_at_x, 0.0, 1e-10),
            CheckLine::le("hessian_asymmetry_max", asym, 0.0, 1e-3),
            CheckLine::ge("hessian_min_eigenvalue", min_eig, 0.0, 1e-4),
            CheckLine::ge("metric_inequality_min_near_base", m_near, 0.0, 1e-8),
        ],
        t0.elapsed().as_secs_f64(),
    )
}

/// End-to-end check of the mixed abnormal/normal instance: the LP plan must
/// reproduce the analytic map, and with unit Jacobians on both branches the
/// per-pair determinant inequality `1 ≥ τ_{1−s}(θ) + τ_s(θ)` must hold with
/// equality exactly on the abnormal pairs.
pub fn verify_jdi_example36(
    m: usize,
    d: usize,
    a: &[f64],
    b: &[f64],
    n: usize,
    s: f64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    assert!(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    let t0 = Instant::now();
    let inst = example36_instance(m, d, a, b, n, seed)?;
    let spec = &inst.spec;
    let mu1 = inst.mu1();
    let plan = solve_ot(spec, &inst.mu0, &mu1)?;

    let mismatches =
        plan.pairs.iter().filter(|p| p.source != p.target).count() as f64;
    let analytic_cost: f64 = inst
        .mu0
        .points
        .iter()
        .zip(&inst.targets)
        .map(|(x, y)| 0.5 * d_cc(spec, x, y).powi(2))
        .sum::<f64>()
        / n as f64;
    let cost_diff = (plan.cost - analytic_cost).abs();

    let mut max_sum = f64::NEG_INFINITY;
    let mut abnormal_residual = 0.0f64;
    let mut normal_margin = f64::INFINITY;
    let mut n_abnormal = 0u64;
    let mut n_normal = 0u64;
    for pair in &plan.pairs {
        let sum = tau(spec, 1.0 - s, &pair.theta) + tau(spec, s, &pair.theta);
        max_sum = max_sum.max(sum);
        if pair.theta.is_abnormal_dir(spec) {
            n_abnormal += 1;
            abnormal_residual = abnormal_residual.max((1.0 - sum).abs());
        } else {
            n_normal += 1;
            normal_margin = normal_margin.min(1.0 - sum);
        }
    }

    Ok(VerifyReport::from_lines(
        "jdi_example36",
        spec.describe(),
        ReportParams { s: vec![s], n: n as u64, seed, voxel_h: None },
        vec![
            CheckLine::le("plan_mismatched_pairs", mismatches, 0.0, 0.0),
            CheckLine::le("plan_cost_vs_analytic", cost_diff, 0.0, 1e-9),
            CheckLine::le("jdi_pair_sum_max", max_sum, 1.0, 1e-10),
            CheckLine::le("abnormal_equality_residual_max", abnormal_residual, 0.0, 1e-12),
            CheckLine::ge("normal_strict_margin_min", normal_margin, 0.0, 0.0),
            CheckLine::ge("abnormal_pair_count", n_abnormal as f64, 1.0, 0.0),
            CheckLine::ge("normal_pair_count", n_normal as f64, 1.0, 0.0),
        ],
        t0.elapsed().as_secs_f64(),
    ))
}

fn sample_points_batched(
    spec: &GroupSpec,
    bbox: &BoundingBox,
    n: usize,
    seed: u64,
    stream_base: u64,
) -> Vec<Point> {
    let nb = n.div_ceil(BATCH);
    (0..nb)
        .into_par_iter()
        .map(|b| {
            let mut rng = sample::rng_for(seed, stream_base + b as u64);
            let count = BATCH.min(n - b * BATCH);
            (0..count)
                .map(|_| Point::from_coords(spec, &bbox.sample(&mut rng)))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

fn voxelize(points: &[Point], h: f64) -> Result<VoxelGrid, VerifyError> {
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.coords()).collect();
    let bounds = BoundingBox::hull(coords.iter().map(|c| c.as_slice()))
        .expect("nonempty point set")
        .padded(h);
    let mut grid = VoxelGrid::new(bounds, h)?;
    for c in &coords {
        grid.insert(c)?;
    }
    Ok(grid)
}

/// Measure-contraction check: contracting a box toward a point by the
/// geodesic s-maps shrinks volume by at most `s^{k+3}`, verified by a voxel
/// estimate of the contracted cloud, with the sharper set-distortion bound
/// reported alongside.
pub fn verify_mcp(
    spec: &GroupSpec,
    x: &Point,
    e_box: &BoundingBox,
    s_list: &[f64],
    n_samples: usize,
    voxel_h: f64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    spec.assert_point(x);
    assert_eq!(e_box.dim(), spec.dim());
    let t0 = Instant::now();
    let dim = spec.dim() as i32; // k+1
    let vol_e = e_box.volume();
    let tau_sub: Vec<Point> = {
        let mut rng = sample::rng_for(seed, 999);
        (0..1000).map(|_| Point::from_coords(spec, &e_box.sample(&mut rng))).collect()
    };

    let mut lines = Vec::new();
    for (si, &s) in s_list.iter().enumerate() {
        assert!(s > 0.0 && s <= 1.0, "s must lie in (0,1]");
        let stream_base = 1_000_000 * (si as u64 + 1);
        let samples = sample_points_batched(spec, e_box, n_samples, seed, stream_base);
        let mapped: Vec<Point> = samples
            .par_iter()
            .map(|e| intermediate_point(spec, x, e, s))
            .collect();
        let est = voxelize(&mapped, voxel_h)?.measure();
        lines.push(CheckLine::ge(
            format!("mcp_voxel_ge_s_power[s={s}]"),
            est,
            (1.0 - MC_SLACK) * s.powi(dim + 2) * vol_e,
            0.0,
        ));
        if s < 1.0 {
            let t = tau_set(spec, s, std::slice::from_ref(x), &tau_sub, 0.01);
            lines.push(CheckLine::ge(
                format!("mcp_voxel_ge_tau_set_power[s={s}]"),
                est,
                (1.0 - MC_SLACK) * t.powi(dim) * vol_e,
                0.0,
            ));
        } else {
            lines.push(CheckLine::le(
                "identity_contraction_rel_err",
                (est - vol_e).abs() / vol_e,
                0.0,
                MC_SLACK,
            ));
        }
    }

    Ok(VerifyReport::from_lines(
        "mcp",
        spec.describe(),
        ReportParams {
            s: s_list.to_vec(),
            n: n_samples as u64,
            seed,
            voxel_h: Some(voxel_h),
        },
        lines,
        t0.elapsed().as_secs_f64(),
    ))
}

/// Geodesic Brunn–Minkowski check between two boxes: voxel estimate of the
/// s-intermediate set against the set-distortion-weighted bound, the
/// universal-exponent bound, and the quarter-weighted bound, plus the
/// algebraic implication between the latter two.
pub fn verify_bm(
    spec: &GroupSpec,
    a_box: &BoundingBox,
    b_box: &BoundingBox,
    s: f64,
    n_pairs: usize,
    voxel_h: f64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    assert!(s > 0.0 && s < 1.0);
    assert_eq!(a_box.dim(), spec.dim());
    assert_eq!(b_box.dim(), spec.dim());
    let t0 = Instant::now();
    let k1 = spec.dim() as f64; // k+1
    let e_pow = (k1 + 2.0) / k1; // (k+3)/(k+1)

    let sub = |stream: u64, bbox: &BoundingBox| -> Vec<Point> {
        let mut rng = sample::rng_for(seed, stream);
        (0..300).map(|_| Point::from_coords(spec, &bbox.sample(&mut rng))).collect()
    };
    let a_sub = sub(7001, a_box);
    let b_sub = sub(7002, b_box);
    let tau_s = tau_set(spec, s, &a_sub, &b_sub, 0.01);
    let tau_1s = tau_set(spec, 1.0 - s, &a_sub, &b_sub, 0.01);

    let nb = n_pairs.div_ceil(BATCH);
    let mapped: Vec<Point> = (0..nb)
        .into_par_iter()
        .map(|bi| {
            let mut rng = sample::rng_for(seed, 8_000_000 + bi as u64);
            let count = BATCH.min(n_pairs - bi * BATCH);
            (0..count)
                .map(|_| {
                    let a = Point::from_coords(spec, &a_box.sample(&mut rng));
                    let b = Point::from_coords(spec, &b_box.sample(&mut rng));
                    intermediate_point(spec, &a, &b, s)
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let est = voxelize(&mapped, voxel_h)?.measure();

    let (va, vb) = (a_box.volume(), b_box.volume());
    let root = est.powf(1.0 / k1);
    let rhs_tau = tau_1s * va.powf(1.0 / k1) + tau_s * vb.powf(1.0 / k1);
    let rhs_pow = (1.0 - s).powf(e_pow) * va.powf(1.0 / k1) + s.powf(e_pow) * vb.powf(1.0 / k1);
    let root3 = est.powf(1.0 / (k1 + 2.0));
    let rhs_quarter = 0.25f64.powf(1.0 / (k1 + 2.0))
        * ((1.0 - s) * va.powf(1.0 / (k1 + 2.0)) + s * vb.powf(1.0 / (k1 + 2.0)));

    Ok(VerifyReport::from_lines(
        "brunn_minkowski",
        spec.describe(),
        ReportParams {
            s: vec![s],
            n: n_pairs as u64,
            seed,
            voxel_h: Some(voxel_h),
        },
        vec![
            CheckLine::ge("bm_root_ge_tau_weighted", root, (1.0 - MC_SLACK) * rhs_tau, 0.0),
            CheckLine::ge("bm_root_ge_power_weighted", root, (1.0 - MC_SLACK) * rhs_pow, 0.0),
            CheckLine::ge(
                "bm_quarter_root_ge_weighted",
                root3,
                (1.0 - MC_SLACK) * rhs_quarter,
                0.0,
            ),
            // the quarter-weighted bound is algebraically implied by the
            // power-weighted one through the p-mean product inequality
            CheckLine::ge(
                "bm_pmean_implication",
                rhs_pow.powf(k1 / (k1 + 2.0)),
                rhs_quarter,
                1e-12,
            ),
        ],
        t0.elapsed().as_secs_f64(),
    ))
}

/// Entropy comparison along displacement interpolation between two uniform
/// box measures: histogram entropy of the interpolant against the
/// distortion-weighted bound and the uniform-weight bound, both computed
/// from the exact box densities and the per-pair geodesic parameters.
#[allow(clippy::too_many_arguments)]
pub fn verify_entropy(
    spec: &GroupSpec,
    mu0_box: &BoundingBox,
    mu1_box: &BoundingBox,
    s: f64,
    u: &EntropyFunctional,
    n_samples: usize,
    voxel_h: f64,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    assert!(s > 0.0 && s < 1.0);
    let t0 = Instant::now();
    let dim = spec.dim() as i32;
    u.check_admissible(spec.dim())?;

    let xa = sample_points_batched(spec, mu0_box, n_samples, seed, 10_000_000);
    let xb = sample_points_batched(spec, mu1_box, n_samples, seed, 11_000_000);
    let mu0 = DiscreteMeasure::uniform(spec, xa);
    let mu1 = DiscreteMeasure::uniform(spec, xb);
    let plan = solve_ot(spec, &mu0, &mu1)?;

    let (va, vb) = (mu0_box.volume(), mu1_box.volume());
    let (rho0, rho1) = (1.0 / va, 1.0 / vb);
    let mut term0 = 0.0;
    let mut term1 = 0.0;
    let mut dropped = 0u64;
    for pair in &plan.pairs {
        let t1 = tau_tilde(spec, 1.0 - s, &pair.theta);
        let ts = tau_tilde(spec, s, &pair.theta);
        if !t1.is_finite() || !ts.is_finite() {
            dropped += 1;
            continue;
        }
        let w1 = t1.powi(dim);
        let ws = ts.powi(dim);
        term0 += w1 * u.eval(rho0 / w1);
        term1 += ws * u.eval(rho1 / ws);
    }
    let n_f = n_samples as f64;
    let rhs_weighted = (1.0 - s) * va * term0 / n_f + s * vb * term1 / n_f;
    let rhs_uniform = (1.0 - s).powi(3) * va * u.eval(rho0 / (1.0 - s).powi(2))
        + s.powi(3) * vb * u.eval(rho1 / s.powi(2));

    let interp: Vec<Point> = plan
        .pairs
        .par_iter()
        .map(|pair| {
            if pair.moving {
                exp_from(spec, &mu0.points[pair.source], &pair.theta, s)
            } else {
                mu0.points[pair.source].clone()
            }
        })
        .collect();
    let coords: Vec<Vec<f64>> = interp.iter().map(|p| p.coords()).collect();
    let bounds = BoundingBox::hull(coords.iter().map(|c| c.as_slice()))
        .expect("nonempty interpolant")
        .padded(voxel_h);
    let de = DensityEstimate::from_weighted_points(
        bounds,
        voxel_h,
        interp.iter(),
        plan.pairs.iter().map(|p| p.mass),
    )?;
    let lhs = de.entropy(u);

    Ok(VerifyReport::from_lines(
        format!("entropy_{}", u.tag),
        spec.describe(),
        ReportParams {
            s: vec![s],
            n: n_samples as u64,
            seed,
            voxel_h: Some(voxel_h),
        },
        vec![
            CheckLine::le("entropy_vs_weighted_bound", lhs, rhs_weighted, MC_SLACK * rhs_weighted.abs()),
            CheckLine::le("entropy_vs_uniform_bound", lhs, rhs_uniform, MC_SLACK * rhs_uniform.abs()),
            CheckLine::le("boundary_pairs_dropped", dropped as f64, 0.01 * n_f, 0.0),
        ],
        t0.elapsed().as_secs_f64(),
    ))
}

/// Geometry of the step-function Borell–Brascamp–Lieb check.
#[derive(Debug, Clone)]
pub struct BblGridSpec {
    /// Support box of the first step function.
    pub box_f: BoundingBox,
    /// Support box of the second step function.
    pub box_g: BoundingBox,
    /// Cells per axis for the step functions.
    pub cells_per_axis: usize,
    /// Edge of the voxel grid carrying the constructed envelope.
    pub voxel_h: f64,
}

/// Exponent `p/(1 + n·p)` of the integrated bound, with the limits
/// `p = +∞ ↦ 1/n`, `p = 0 ↦ 0` and a vanishing denominator ↦ `−∞`.
fn bbl_exponent(p: f64, n: f64) -> f64 {
    if p.is_infinite() && p > 0.0 {
        return 1.0 / n;
    }
    if p == 0.0 {
        return 0.0;
    }
    let den = 1.0 + n * p;
    if den <= 0.0 {
        f64::NEG_INFINITY
    } else {
        p / den
    }
}

struct StepFunction {
    centers: Vec<Point>,
    values: Vec<f64>,
    cell_volume: f64,
}

fn build_step_function(
    spec: &GroupSpec,
    bbox: &BoundingBox,
    cells_per_axis: usize,
    seed: u64,
    stream: u64,
) -> StepFunction {
    let dim = spec.dim();
    let mut rng = sample::rng_for(seed, stream);
    let edges: Vec<f64> = bbox
        .lo
        .iter()
        .zip(&bbox.hi)
        .map(|(lo, hi)| (hi - lo) / cells_per_axis as f64)
        .collect();
    let cell_volume: f64 = edges.iter().product();
    let total = cells_per_axis.pow(dim as u32);
    let mut centers = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut c = Vec::with_capacity(dim);
        for a in 0..dim {
            let idx = rem % cells_per_axis;
            rem /= cells_per_axis;
            c.push(bbox.lo[a] + (idx as f64 + 0.5) * edges[a]);
        }
        centers.push(Point::from_coords(spec, &c));
        values.push(rng.random_range(0.5..2.0));
    }
    StepFunction { centers, values, cell_volume }
}

use rand::Rng as _;

/// Borell–Brascamp–Lieb check: build the pointwise-minimal envelope `h`
/// admissible for random step functions `f, g` on two boxes, for the
/// distortion-weighted, uniform-weight, and (when the exponent allows)
/// quarter-factor variants, and compare its integral against the p-mean
/// bound.
pub fn verify_bbl(
    spec: &GroupSpec,
    s: f64,
    p_exponent: f64,
    grid: &BblGridSpec,
    seed: u64,
) -> Result<VerifyReport, VerifyError> {
    assert!(s > 0.0 && s < 1.0);
    let t0 = Instant::now();
    let k1 = spec.dim() as f64;
    let dim = spec.dim() as i32;
    if p_exponent < -1.0 / k1 {
        return Err(VerifyError::InadmissibleExponent { p: p_exponent, bound: -1.0 / k1 });
    }
    let total = grid.cells_per_axis.pow(spec.dim() as u32);
    if total > 10_000 {
        return Err(VerifyError::StepGridTooLarge(total));
    }
    let run_quarter = p_exponent >= -1.0 / (k1 + 2.0);

    let f = build_step_function(spec, &grid.box_f, grid.cells_per_axis, seed, 0);
    let g = build_step_function(spec, &grid.box_g, grid.cells_per_axis, seed, 1);
    let int_f: f64 = f.values.iter().sum::<f64>() * f.cell_volume;
    let int_g: f64 = g.values.iter().sum::<f64>() * g.cell_volume;

    // pass 1: bounding box of all pair intermediates
    let hull = f
        .centers
        .par_iter()
        .map(|xa| {
            let xai = spec.inverse(xa);
            let mut lo = vec![f64::INFINITY; spec.dim()];
            let mut hi = vec![f64::NEG_INFINITY; spec.dim()];
            for xb in &g.centers {
                let lr = log_from_identity(spec, &spec.op(&xai, xb));
                let z = exp_from(spec, xa, &lr.param, s);
                for (k, c) in z.coords().iter().enumerate() {
                    lo[k] = lo[k].min(*c);
                    hi[k] = hi[k].max(*c);
                }
            }
            (lo, hi)
        })
        .reduce(
            || (vec![f64::INFINITY; spec.dim()], vec![f64::NEG_INFINITY; spec.dim()]),
            |(mut alo, mut ahi), (blo, bhi)| {
                for k in 0..alo.len() {
                    alo[k] = alo[k].min(blo[k]);
                    ahi[k] = ahi[k].max(bhi[k]);
                }
                (alo, ahi)
            },
        );
    let bounds = BoundingBox::new(hull.0, hull.1).padded(grid.voxel_h);
    let h_grid = VoxelGrid::new(bounds, grid.voxel_h)?;

    // pass 2: minimal admissible envelopes per variant
    type HMap = BTreeMap<u64, f64>;
    let merge = |mut a: HMap, b: HMap| {
        for (k, v) in b {
            let e = a.entry(k).or_insert(f64::NEG_INFINITY);
            if v > *e {
                *e = v;
            }
        }
        a
    };
    let maps = f
        .centers
        .par_iter()
        .enumerate()
        .map(|(ia, xa)| {
            let xai = spec.inverse(xa);
            let mut weighted: HMap = BTreeMap::new();
            let mut uniform: HMap = BTreeMap::new();
            let mut plain: HMap = BTreeMap::new();
            for (ib, xb) in g.centers.iter().enumerate() {
                let lr = log_from_identity(spec, &spec.op(&xai, xb));
                let z = exp_from(spec, xa, &lr.param, s);
                let key = h_grid.cell_key(&z.coords()).expect("inside padded hull");
                let (fv, gv) = (f.values[ia], g.values[ib]);
                let t1 = tau_tilde(spec, 1.0 - s, &lr.param);
                let ts = tau_tilde(spec, s, &lr.param);
                // infinite distortion sends the required value to 0 by the
                // zero-annihilation convention
                let rw = pmean(s, p_exponent, fv / t1.powi(dim), gv / ts.powi(dim));
                let ru = pmean(s, p_exponent, fv / (1.0 - s).powi(2), gv / (s * s));
                let rn = pmean(s, p_exponent, fv, gv);
                for (map, val) in
                    [(&mut weighted, rw), (&mut uniform, ru), (&mut plain, rn)]
                {
                    let e = map.entry(key).or_insert(f64::NEG_INFINITY);
                    if val > *e {
                        *e = val;
                    }
                }
            }
            (weighted, uniform, plain)
        })
        .reduce(
            || (BTreeMap::new(), BTreeMap::new(), BTreeMap::new()),
            |a, b| (merge(a.0, b.0), merge(a.1, b.1), merge(a.2, b.2)),
        );
    let cellvol = grid.voxel_h.powi(dim);
    let int_h_weighted: f64 = maps.0.values().sum::<f64>() * cellvol;
    let int_h_uniform: f64 = maps.1.values().sum::<f64>() * cellvol;
    let int_h_plain: f64 = maps.2.values().sum::<f64>() * cellvol;

    let bound_weighted = pmean(s, bbl_exponent(p_exponent, k1), int_f, int_g);
    let bound_quarter = 0.25 * pmean(s, bbl_exponent(p_exponent, k1 + 2.0), int_f, int_g);

    let mut lines = vec![
        CheckLine::ge(
            "bbl_weighted_tau",
            int_h_weighted,
            (1.0 - MC_SLACK) * bound_weighted,
            0.0,
        ),
        CheckLine::ge(
            "bbl_uniform_weights",
            int_h_uniform,
            (1.0 - MC_SLACK) * bound_weighted,
            0.0,
        ),
    ];
    if run_quarter {
        lines.push(CheckLine::ge(
            "bbl_unweighted_quarter",
            int_h_plain,
            (1.0 - MC_SLACK) * bound_quarter,
            0.0,
        ));
    }

    Ok(VerifyReport::from_lines(
        format!("bbl[p={p_exponent}]"),
        spec.describe(),
        ReportParams {
            s: vec![s],
            n: total as u64,
            seed,
            voxel_h: Some(grid.voxel_h),
        },
        lines,
        t0.elapsed().as_secs_f64(),
    ))
}

/// Distortion-coefficient invariants: the universal lower bound, the flat
/// and boundary limits, the Jacobian-ratio identity, evenness under
/// reversal, and the single-frequency closed form where applicable.
pub fn verify_distortion(spec: &GroupSpec, n_samples: usize, seed: u64) -> VerifyReport {
    let t0 = Instant::now();
    let k1 = spec.dim() as f64;
    let e_pow = (k1 + 2.0) / k1;
    let mut lines = Vec::new();

    // lower bound on an (s, p) grid
    {
        let n_s = 10;
        let per_s = (n_samples / n_s).max(10);
        let worst = (0..n_s)
            .into_par_iter()
            .map(|i| {
                let s = (i as f64 + 0.5) / n_s as f64;
                let mut rng = sample::rng_for(seed, 20_000 + i as u64);
                let mut min_margin = f64::INFINITY;
                for _ in 0..per_s {
                    let p = sample::random_covector_in_d(&mut rng, spec, 0.999);
                    min_margin = min_margin.min(tau(spec, s, &p) - s.powf(e_pow));
                }
                min_margin
            })
            .reduce(|| f64::INFINITY, f64::min);
        lines.push(CheckLine::ge("tau_lower_bound_min_margin", worst, 0.0, 1e-12));
    }

    // flat limit and boundary blow-up
    {
        let mut rng = sample::rng_for(seed, 21_000);
        let mut flat_err = 0.0f64;
        let mut boundary_min = f64::INFINITY;
        for _ in 0..200 {
            let s = rng.random_range(0.05..0.95);
            let mut p = sample::random_covector_in_d(&mut rng, spec, 0.5);
            p.pz = rng.random_range(-1e-4..1e-4);
            flat_err = flat_err.max((tau(spec, s, &p) - s.powf(e_pow)).abs());
            let mut q = sample::random_covector_in_d(&mut rng, spec, 0.5);
            // ensure the top block is alive so the blow-up is genuine
            q.blocks[spec.first_top_block()] = [1.0, 0.0];
            q.pz = (spec.pz_limit() - 5e-9) * if q.pz >= 0.0 { 1.0 } else { -1.0 };
            boundary_min = boundary_min.min(tau(spec, s, &q));
        }
        lines.push(CheckLine::le("tau_flat_limit_max_err", flat_err, 0.0, 1e-6));
        lines.push(CheckLine::ge("tau_boundary_blowup_min", boundary_min, 1e6, 0.0));
    }

    // Jacobian-ratio identity and evenness under reversal
    {
        let n = n_samples.min(500);
        let partials: Vec<(f64, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample::rng_for(seed, 22_000 + i as u64);
                let p = sample::random_covector_in_d(&mut rng, spec, 0.95);
                let s = rng.random_range(0.05..0.95);
                let scaled = Covector {
                    px0: p.px0.iter().map(|v| v * s).collect(),
                    blocks: p.blocks.iter().map(|b| [b[0] * s, b[1] * s]).collect(),
                    pz: p.pz * s,
                };
                let direct = tau(spec, s, &p);
                let via_jac =
                    s * (jac_exp(spec, &scaled) / jac_exp(spec, &p)).powf(1.0 / k1);
                let ratio_err = (via_jac - direct).abs() / direct.max(1.0);
                let even_err =
                    (direct - tau(spec, s, &reverse_param(spec, &p))).abs() / direct.max(1.0);
                (ratio_err, even_err)
            })
            .collect();
        let ratio = partials.iter().map(|p| p.0).fold(0.0, f64::max);
        let even = partials.iter().map(|p| p.1).fold(0.0, f64::max);
        lines.push(CheckLine::le("jacobian_ratio_max_rel_err", ratio, 0.0, 1e-10));
        lines.push(CheckLine::le("reversal_evenness_max_rel_err", even, 0.0, 1e-12));
    }

    // single-frequency closed form: for kernel-free groups with equal
    // frequencies the coefficient depends on p_z alone
    let single_freq = spec.kernel_dim() == 0
        && spec.alphas().iter().all(|&a| a == spec.alphas()[0]);
    if single_freq {
        let alpha = spec.alphas()[0];
        let closed = |s: f64, theta: f64| -> f64 {
            if theta == 0.0 {
                s.powf(e_pow)
            } else {
                let half = 0.5 * theta;
                let num1 = (half * s).sin();
                let num2 = (half * s).sin() - half * s * (half * s).cos();
                let den1 = half.sin();
                let den2 = half.sin() - half * half.cos();
                s.powf(1.0 / k1)
                    * (num1 / den1).powf((k1 - 2.0) / k1)
                    * (num2 / den2).powf(1.0 / k1)
            }
        };
        let mut rng = sample::rng_for(seed, 23_000);
        let mut err = 0.0f64;
        for _ in 0..500 {
            let p = sample::random_covector_in_d(&mut rng, spec, 0.98);
            let s = rng.random_range(0.05..0.95);
            let expected = closed(s, alpha * p.pz.abs());
            err = err.max((tau(spec, s, &p) - expected).abs() / expected.max(1.0));
        }
        lines.push(CheckLine::le("single_frequency_reduction_max_rel_err", err, 0.0, 1e-12));
    }

    VerifyReport::from_lines(
        "distortion",
        spec.describe(),
        ReportParams { s: vec![], n: n_samples as u64, seed, voxel_h: None },
        lines,
        t0.elapsed().as_secs_f64(),
    )
}

/// Divergence probe of the distance second difference across a
/// conjugate-boundary cut point on the two-frequency group.
pub fn verify_cut_probe() -> VerifyReport {
    let t0 = Instant::now();
    let spec = GroupSpec::new(0, vec![1.0, 2.0]).expect("valid");
    let q = probe_cut_nonsemiconvexity(&spec, &spec.identity(), &[[1.0, 0.0], [0.0, 0.0]])
        .expect("valid probe direction");
    let violations = q.windows(2).filter(|w| w[1].1 >= w[0].1).count() as f64;
    let last = q.last().expect("probe values").1;
    VerifyReport::from_lines(
        "cut_probe",
        spec.describe(),
        ReportParams { s: vec![], n: q.len() as u64, seed: 0, voxel_h: None },
        vec![
            CheckLine::le("probe_monotone_decreasing_violations", violations, 0.0, 0.0),
            CheckLine::le("probe_final_quotient", last, -1e2, 0.0),
        ],
        t0.elapsed().as_secs_f64(),
    )
}

/// The p-mean product inequality on random admissible tuples.
pub fn verify_gardner(n_samples: usize, seed: u64) -> VerifyReport {
    use crate::distortion::pmean_product_exponent;
    let t0 = Instant::now();
    let nb = n_samples.div_ceil(BATCH);
    let min_margin = (0..nb)
        .into_par_iter()
        .map(|b| {
            let mut rng = sample::rng_for(seed, 30_000 + b as u64);
            let count = BATCH.min(n_samples - b * BATCH);
            let mut min_margin = f64::INFINITY;
            for _ in 0..count {
                let s = rng.random_range(0.05..0.95);
                let a = rng.random_range(0.0..3.0);
                let bb = rng.random_range(0.0..3.0);
                let c = rng.random_range(0.0..3.0);
                let d = rng.random_range(0.0..3.0);
                let draw = |rng: &mut rand_chacha::ChaCha8Rng| match rng.random_range(0..6u8) {
                    0 => 0.0,
                    1 => f64::INFINITY,
                    _ => rng.random_range(-2.0..4.0),
                };
                let p = draw(&mut rng);
                let mut q = draw(&mut rng);
                if p + q < 0.0 {
                    q = -p;
                }
                let eta = pmean_product_exponent(p, q);
                let lhs = pmean(s, p, a, bb) * pmean(s, q, c, d);
                let rhs = pmean(s, eta, a * c, bb * d);
                min_margin = min_margin.min(lhs - rhs);
            }
            min_margin
        })
        .reduce(|| f64::INFINITY, f64::min);
    VerifyReport::from_lines(
        "gardner_pmean",
        "-".to_string(),
        ReportParams { s: vec![], n: n_samples as u64, seed, voxel_h: None },
        vec![CheckLine::ge("pmean_product_min_margin", min_margin, 0.0, 1e-12)],
        t0.elapsed().as_secs_f64(),
    )
}

/// The full verification battery at the acceptance parameters; the exit
/// criterion of the crate. Runs every suite on its designated groups and
/// returns one report per suite instance.
pub fn verify_all(seed: u64) -> Vec<VerifyReport> {
    let mut reports = Vec::new();
    let specs = acceptance_specs();
    for spec in &specs {
        reports.push(verify_calculus(spec, 10_000, seed));
    }
    for spec in &specs {
        reports.push(verify_distortion(spec, 1000, seed));
    }
    for spec in &specs {
        reports.push(verify_hessian_psd(spec, 50, seed));
    }
    reports.push(
        verify_jdi_example36(1, 1, &[1.0], &[1.0, 0.0], 400, 0.5, seed)
            .expect("valid instance"),
    );

    let h1 = &specs[0];
    let e = h1.identity();
    let e_box = BoundingBox::new(vec![0.5, -0.5, -0.5], vec![1.5, 0.5, 0.5]);
    reports.push(
        verify_mcp(h1, &e, &e_box, &[0.25, 0.5, 0.75], 100_000, 0.02, seed)
            .expect("valid mcp instance"),
    );

    let a_box = BoundingBox::new(vec![-1.5, -0.5, -0.5], vec![-0.5, 0.5, 0.5]);
    let b_box = BoundingBox::new(vec![1.5, -0.5, -0.5], vec![2.5, 0.5, 0.5]);
    reports.push(
        verify_bm(h1, &a_box, &b_box, 0.5, 200_000, 0.02, seed).expect("valid bm instance"),
    );

    let mu0_box = BoundingBox::new(vec![-1.5, -0.5, -0.5], vec![-0.5, 0.5, 0.5]);
    let mu1_box = BoundingBox::new(vec![0.5, -0.5, -0.5], vec![1.5, 0.5, 0.5]);
    let renyi = EntropyFunctional::renyi(h1.dim());
    reports.push(
        verify_entropy(h1, &mu0_box, &mu1_box, 0.5, &renyi, 4000, 0.05, seed)
            .expect("valid entropy instance"),
    );

    let grid = BblGridSpec {
        box_f: mu0_box.clone(),
        box_g: mu1_box.clone(),
        cells_per_axis: 12,
        voxel_h: 0.05,
    };
    for p in [0.0, 1.0, f64::INFINITY] {
        reports.push(verify_bbl(h1, 0.5, p, &grid, seed).expect("valid bbl instance"));
    }

    reports.push(verify_cut_probe());
    reports.push(verify_gardner(10_000, seed));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bbl_exponent_limits() {
        assert_eq!(bbl_exponent(f64::INFINITY, 3.0), 1.0 / 3.0);
        assert_eq!(bbl_exponent(0.0, 3.0), 0.0);
        assert_eq!(bbl_exponent(1.0, 3.0), 0.25);
        assert_eq!(bbl_exponent(-1.0 / 3.0, 3.0), f64::NEG_INFINITY);
    }

    #[test]
    fn calculus_report_passes_on_h1() {
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        let report = verify_calculus(&spec, 500, 7);
        assert!(report.pass, "{report}");
    }

    #[test]
    fn calculus_is_deterministic() {
        let spec = GroupSpec::new(0, vec![1.0, 2.0]).unwrap();
        let a = verify_calculus(&spec, 300, 11);
        let b = verify_calculus(&spec, 300, 11);
        assert_eq!(a.canonical_json(), b.canonical_json());
        let c = verify_calculus(&spec, 300, 12);
        assert_ne!(a.canonical_json(), c.canonical_json());
    }

    #[test]
    fn hessian_report_passes_small() {
        let spec = GroupSpec::new(1, vec![4.0]).unwrap();
        let report = verify_hessian_psd(&spec, 8, 3);
        assert!(report.pass, "{report}");
    }

    #[test]
    fn jdi_example36_report_passes_small() {
        let report = verify_jdi_example36(1, 1, &[1.0], &[1.0, 0.0], 60, 0.5, 5).unwrap();
        assert!(report.pass, "{report}");
        assert!(report.line("normal_strict_margin_min").unwrap().lhs > 0.1);
    }

    #[test]
    fn mcp_report_passes_small() {
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        let e_box = BoundingBox::new(vec![0.5, -0.5, -0.5], vec![1.5, 0.5, 0.5]);
        let report =
            verify_mcp(&spec, &spec.identity(), &e_box, &[0.5, 1.0], 20_000, 0.03, 13).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn entropy_static_case_reduces_to_identity() {
        // identical boxes: the plan is essentially static and the
        // inequality reduces to Ent ≤ Ent + slack
        let spec = GroupSpec::new(0, vec![4.0]).unwrap();
        let bx = BoundingBox::cube(&[0.0, 0.0, 0.0], 1.0);
        let u = EntropyFunctional::renyi(spec.dim());
        let report = verify_entropy(&spec, &bx, &bx, 0.5, &u, 800, 0.1, 17).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn gardner_and_probe_reports_pass() {
        assert!(verify_gardner(2000, 3).pass);
        let probe = verify_cut_probe();
        assert!(probe.pass, "{probe}");
    }
}
