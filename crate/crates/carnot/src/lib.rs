//! Sub-Riemannian geometry of corank-1 Carnot groups.
//!
//! A corank-1 Carnot group is a step-2 nilpotent Lie group whose second
//! stratum is one-dimensional. In exponential coordinates it is ℝ^k × ℝ with
//! the product
//!
//! ```text
//! x ∘ y = (x₁+y₁, …, x_k+y_k, x_z + y_z − ½ Σᵢⱼ 𝒜ᵢⱼ xⱼ yᵢ)
//! ```
//!
//! for a skew-symmetric matrix 𝒜. After diagonalization, 𝒜 is determined by
//! a kernel dimension `m` and block frequencies `0 < α₁ ≤ … ≤ α_d`; those two
//! ingredients form a [`GroupSpec`]. The Heisenberg group H¹ is
//! `GroupSpec::new(0, [4.0])`, and ℝ×H¹ is `GroupSpec::new(1, [4.0])`.
//!
//! The crate provides, in closed form wherever one exists:
//!
//! * the group law, inverses and the left-invariant horizontal frame
//!   ([`group`]);
//! * minimizing geodesics through the sub-Riemannian exponential map, its
//!   Jacobian determinant, and the reversed parametrization ([`expmap`]);
//! * the inverse exponential with cut-locus classification, the
//!   Carnot–Carathéodory distance, analytic derivatives of `d²_CC/2`, and
//!   geodesic midpoints ([`distance`]);
//! * geodesic distortion coefficients and power means ([`distortion`]);
//! * exact discrete optimal transport for the cost `d²_CC/2`, with
//!   Kantorovich duals, displacement interpolation and a mixed
//!   abnormal/normal transport instance ([`transport`]);
//! * Monte Carlo / finite-difference verification of the calculus identities
//!   and of the entropy, Brunn–Minkowski, measure-contraction and
//!   Borell–Brascamp–Lieb inequalities satisfied by this geometry
//!   ([`verify`]).
//!
//! All quantities are dense `f64`; the intended regime is desk scale
//! (dimension ≤ ~16, point clouds ≤ 5000). Everything is deterministic for a
//! fixed seed, including the parallel verifiers.

pub mod distance;
pub mod distortion;
pub mod expmap;
pub mod group;
pub mod io;
pub mod sample;
pub mod transport;
pub mod verify;

mod trig;

pub use distance::{d_cc, intermediate_point, log_from_identity, CutClass, LogResult};
pub use expmap::{exp_from, exp_from_identity, jac_exp, reverse_param};
pub use group::{Covector, GroupError, GroupSpec, Point};
