//! Topological indices of the odd-viscous rotating shallow-water model on a
//! half-plane.
//!
//! The crate computes, for any local self-adjoint boundary condition of the
//! model, the index vector `(P, I, E, B)` in closed form and provides
//! independent numerical oracles (contour windings, Jost-function root
//! tracing, Berry-curvature quadrature) to verify every entry:
//!
//! * [`algebra`] — fixed-size complex linear algebra and numerical winding of
//!   planar curves;
//! * [`bulk`] — band structure, eigensections over compactified momentum
//!   space and the bulk Chern number;
//! * [`boundary`] — construction, validation and classification of
//!   self-adjoint boundary conditions and their von Neumann unitaries;
//! * [`scattering`] — evanescent kinematics, Jost function and scattering
//!   amplitude;
//! * [`indices`] — closed-form index vector, bulk-edge-correspondence
//!   verdicts and the parabola-winding calculus;
//! * [`oracles`] — numerical verification of every analytic index.

pub mod algebra;
pub mod boundary;
pub mod bulk;
pub mod indices;
pub mod oracles;
pub mod scattering;

pub use algebra::{HalfInt, C2, C3, M2, M3};
pub use boundary::{BoundaryData, Family, FamilyParams};
pub use bulk::{BandLabel, PhysParams};
pub use oracles::EdgeBranchSet;
pub use indices::{AsymCurve, IndexVector, ParabolaCurve, Verdict};
pub use scattering::ScatteringSolution;
