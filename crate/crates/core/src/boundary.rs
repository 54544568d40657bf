//! Self-adjoint boundary conditions of the half-plane model: construction
//! from family parameters, validation, classification into the DD/ND/DN/NN
//! families, von Neumann unitaries, and detection of fiberwise
//! self-adjointness failures.
//!
//! A boundary condition is stored as the six C^2 vectors of its 2x4 matrix
//! form `(a1, a1' + kx b1, a2' + kx b2, a2)`; the equivalent 2x6 form acting
//! on `(psi(0), psi'(0))` is recovered via [`full_matrix`].

use crate::algebra::{cr, wedge, C2, I, M2, ONE, ZERO};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundaryError {
    #[error("degenerate family parameters: {0}")]
    DegenerateParams(&'static str),
    #[error("boundary condition loses rank at kx = {kx}")]
    FiberSingular { kx: f64 },
    #[error("boundary condition is rank-deficient at every kx")]
    EverywhereSingular,
    #[error("operation requires family {expected:?}, got {got:?}")]
    WrongFamily { expected: Family, got: Family },
    #[error("data does not satisfy the self-adjointness identities")]
    NotSelfAdjoint,
}

/// Family of a boundary condition, determined by the rank and structure of
/// the normal-derivative block: how many independent combinations of the
/// velocity components have their normal derivative constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    DD,
    ND,
    DN,
    NN,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::DD => "DD",
            Family::ND => "ND",
            Family::DN => "DN",
            Family::NN => "NN",
        };
        write!(f, "{s}")
    }
}

/// The six C^2 vectors of a 2x4 boundary condition.
///
/// Constructed instances satisfy the self-adjointness identities exactly (up
/// to rounding); arbitrary field values may not, see [`is_self_adjoint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub a1: C2,
    pub a1p: C2,
    pub a2p: C2,
    pub a2: C2,
    pub b1: C2,
    pub b2: C2,
}

/// Solved parametrizations of the four families. Building from these always
/// yields self-adjoint data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParams {
    Dd {
        a1p: C2,
        a2p: C2,
        b1: C2,
        b2: C2,
    },
    Nd {
        a1: C2,
        alpha: Complex64,
        lambda: f64,
        lambda_p: f64,
        a1p: C2,
        b1: C2,
    },
    Dn {
        a2: C2,
        alpha: Complex64,
        lambda: f64,
        lambda_p: f64,
        a2p: C2,
        b2: C2,
    },
    Nn {
        a1: C2,
        a2: C2,
        mu: Complex64,
        mup: Complex64,
        l1: f64,
        l2: f64,
        l1p: f64,
        l2p: f64,
    },
}

impl FamilyParams {
    pub fn family(&self) -> Family {
        match self {
            FamilyParams::Dd { .. } => Family::DD,
            FamilyParams::Nd { .. } => Family::ND,
            FamilyParams::Dn { .. } => Family::DN,
            FamilyParams::Nn { .. } => Family::NN,
        }
    }

    /// Canonical-gauge Dirichlet condition (`u = v = 0` at the wall).
    pub fn dirichlet() -> Self {
        FamilyParams::Dd {
            a1p: C2::from_re(1.0, 0.0),
            a2p: C2::from_re(0.0, 1.0),
            b1: C2::zero(),
            b2: C2::zero(),
        }
    }

    /// ND parameters in the canonical gauge `a1 = (1,0)`, `a1' = (0,i)`,
    /// `b1 = (0,1)`, which keeps every fiber maximal-rank.
    pub fn nd(alpha: Complex64, lambda: f64, lambda_p: f64) -> Self {
        FamilyParams::Nd {
            a1: C2::from_re(1.0, 0.0),
            alpha,
            lambda,
            lambda_p,
            a1p: C2::new(ZERO, I),
            b1: C2::from_re(0.0, 1.0),
        }
    }

    /// DN parameters in the gauge mirroring [`FamilyParams::nd`].
    pub fn dn(alpha: Complex64, lambda: f64, lambda_p: f64) -> Self {
        FamilyParams::Dn {
            a2: C2::from_re(1.0, 0.0),
            alpha,
            lambda,
            lambda_p,
            a2p: C2::new(ZERO, I),
            b2: C2::from_re(0.0, 1.0),
        }
    }

    /// NN parameters in the canonical gauge `a1 = e1`, `a2 = e2`.
    pub fn nn(mu: Complex64, mup: Complex64, l1: f64, l2: f64, l1p: f64, l2p: f64) -> Self {
        FamilyParams::Nn {
            a1: C2::from_re(1.0, 0.0),
            a2: C2::from_re(0.0, 1.0),
            mu,
            mup,
            l1,
            l2,
            l1p,
            l2p,
        }
    }
}

/// Solve the self-adjointness constraints for the given family parameters.
pub fn build(fp: &FamilyParams) -> Result<BoundaryData, BoundaryError> {
    match *fp {
        FamilyParams::Dd { a1p, a2p, b1, b2 } => Ok(BoundaryData {
            a1: C2::zero(),
            a1p,
            a2p,
            a2: C2::zero(),
            b1,
            b2,
        }),
        FamilyParams::Nd {
            a1,
            alpha,
            lambda,
            lambda_p,
            a1p,
            b1,
        } => {
            if a1.norm() == 0.0 {
                return Err(BoundaryError::DegenerateParams("ND requires a1 != 0"));
            }
            let ac = alpha.conj();
            Ok(BoundaryData {
                a1,
                a1p,
                a2p: I * cr(lambda_p) * a1 - ac * a1p,
                a2: alpha * a1,
                b1,
                b2: I * cr(lambda) * a1 - ac * b1,
            })
        }
        FamilyParams::Dn {
            a2,
            alpha,
            lambda,
            lambda_p,
            a2p,
            b2,
        } => {
            if a2.norm() == 0.0 {
                return Err(BoundaryError::DegenerateParams("DN requires a2 != 0"));
            }
            let ac = alpha.conj();
            Ok(BoundaryData {
                a1: alpha * a2,
                a1p: I * cr(lambda_p) * a2 - ac * a2p,
                a2p,
                a2,
                b1: I * cr(lambda) * a2 - ac * b2,
                b2,
            })
        }
        FamilyParams::Nn {
            a1,
            a2,
            mu,
            mup,
            l1,
            l2,
            l1p,
            l2p,
        } => {
            if wedge(a1, a2).norm() < 1e-14 * (a1.norm() * a2.norm()).max(f64::MIN_POSITIVE) {
                return Err(BoundaryError::DegenerateParams(
                    "NN requires a1, a2 linearly independent",
                ));
            }
            Ok(BoundaryData {
                a1,
                a1p: mup * a1 + I * cr(l1p) * a2,
                a2p: -mup.conj() * a2 + I * cr(l2p) * a1,
                a2,
                b1: mu * a1 + I * cr(l1) * a2,
                b2: -mu.conj() * a2 + I * cr(l2) * a1,
            })
        }
    }
}

impl BoundaryData {
    /// Largest vector norm among the six data vectors.
    pub fn scale(&self) -> f64 {
        [self.a1, self.a1p, self.a2p, self.a2, self.b1, self.b2]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Left square block `A1(kx) = (a1, a1' + kx b1)` of the 2x4 matrix.
    pub fn block_a1(&self, kx: f64) -> M2 {
        M2::from_cols(self.a1, self.a1p + cr(kx) * self.b1)
    }

    /// Right square block `A2(kx) = (a2' + kx b2, a2)`.
    pub fn block_a2(&self, kx: f64) -> M2 {
        M2::from_cols(self.a2p + cr(kx) * self.b2, self.a2)
    }
}

/// Default classification tolerance.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Classify into DD/ND/DN/NN with a scale-free tolerance: rank thresholds
/// are measured relative to the largest data vector. On the measure-zero
/// overlap where `a1` and `a2` are both nonzero and parallel, ND is returned
/// (index computations route DN through the ND substitution anyway).
pub fn classify(bd: &BoundaryData, tol: f64) -> Family {
    let scale = bd.scale().max(f64::MIN_POSITIVE);
    let n1 = bd.a1.norm();
    let n2 = bd.a2.norm();
    if n1 <= tol * scale && n2 <= tol * scale {
        return Family::DD;
    }
    if wedge(bd.a1, bd.a2).norm() > tol * n1.max(tol * scale) * n2.max(tol * scale) {
        return Family::NN;
    }
    if n1 > tol * scale {
        Family::ND
    } else {
        Family::DN
    }
}

/// Deterministic well-spread sample momenta, used wherever a condition has
/// to hold at almost every kx.
pub fn kx_samples(n: usize) -> Vec<f64> {
    let golden = 0.618_033_988_749_894_9_f64;
    (0..n)
        .map(|i| {
            let u = ((i as f64 + 0.5) * golden).fract() - 0.5; // (-0.5, 0.5)
            (std::f64::consts::PI * 0.98 * u).tan() * 2.0
        })
        .collect()
}

/// Check the 2x4 self-adjointness identity
/// `A1(kx) A2*(kx) + A2(kx) A1*(kx) = 0` at deterministic sample points.
pub fn is_self_adjoint(bd: &BoundaryData, samples: usize) -> bool {
    for kx in kx_samples(samples.max(4)) {
        let a1 = bd.block_a1(kx);
        let a2 = bd.block_a2(kx);
        let resid = (a1 * a2.adjoint() + a2 * a1.adjoint()).norm_max();
        let scale = (a1.norm_max() * a2.norm_max()).max(f64::MIN_POSITIVE);
        if resid > 1e-10 * scale {
            return false;
        }
    }
    true
}

/// The 2x4 matrix `(a1, a1' + kx b1, a2' + kx b2, a2)`.
pub fn ul_matrix(bd: &BoundaryData, kx: f64) -> [[Complex64; 4]; 2] {
    let c2 = bd.a1p + cr(kx) * bd.b1;
    let c3 = bd.a2p + cr(kx) * bd.b2;
    [
        [bd.a1.x, c2.x, c3.x, bd.a2.x],
        [bd.a1.y, c2.y, c3.y, bd.a2.y],
    ]
}

/// Embedding matrix relating the 2x4 and 2x6 forms (`A = ulA * M`); carries
/// the odd viscosity.
pub fn embedding_matrix(nu: f64) -> [[f64; 6]; 4] {
    [
        [1.0, 0.0, 0.0, 0.0, -nu, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, nu],
    ]
}

/// The 2x6 matrix acting on the boundary trace `(psi(0), psi'(0))`. Its
/// fourth column vanishes: no admissible condition involves the normal
/// derivative of the height field.
pub fn full_matrix(bd: &BoundaryData, kx: f64, nu: f64) -> [[Complex64; 6]; 2] {
    let ul = ul_matrix(bd, kx);
    let m = embedding_matrix(nu);
    let mut out = [[ZERO; 6]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| ul[i][k] * cr(m[k][j])).sum();
        }
    }
    out
}

/// Check self-adjointness in the full 2x6 formulation: `A(kx) N = 0` and
/// `A(kx) OmegaHat A*(kx) = 0` with the kernel and isotropy matrices of the
/// half-line trace space. Must agree with [`is_self_adjoint`].
pub fn is_self_adjoint_full(bd: &BoundaryData, samples: usize, nu: f64) -> bool {
    let lam = 1.0 / (1.0 + nu * nu);
    let n_mat: [[f64; 2]; 6] = [
        [nu, 0.0],
        [0.0, 0.0],
        [0.0, 0.0],
        [0.0, 1.0],
        [1.0, 0.0],
        [0.0, 0.0],
    ];
    let mut omega_hat = [[0.0_f64; 6]; 6];
    omega_hat[0][2] = -lam;
    omega_hat[2][0] = -lam;
    omega_hat[1][5] = -1.0 / nu;
    omega_hat[5][1] = -1.0 / nu;
    omega_hat[2][4] = lam * nu;
    omega_hat[4][2] = lam * nu;
    for kx in kx_samples(samples.max(4)) {
        let a = full_matrix(bd, kx, nu);
        let a_scale = a
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for row in &a {
            for col in [0, 1] {
                let s: Complex64 = (0..6).map(|k| row[k] * cr(n_mat[k][col])).sum();
                if s.norm() > 1e-10 * a_scale {
                    return false;
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let mut s = ZERO;
                for k in 0..6 {
                    for l in 0..6 {
                        if omega_hat[k][l] != 0.0 {
                            s += a[i][k] * cr(omega_hat[k][l]) * a[j][l].conj();
                        }
                    }
                }
                if s.norm() > 1e-10 * a_scale * a_scale {
                    return false;
                }
            }
        }
    }
    true
}

/// Von Neumann unitary `U(kx) = (A1 + A2)^{-1} (A1 - A2)` of the orbit of
/// `bd` under constant invertible row recombinations.
pub fn von_neumann_u(bd: &BoundaryData, kx: f64) -> Result<M2, BoundaryError> {
    let a1 = bd.block_a1(kx);
    let a2 = bd.block_a2(kx);
    let plus = a1 + a2;
    let det = plus.det();
    let scale = plus.norm_max();
    if det.norm() <= 1e-12 * scale * scale {
        return Err(BoundaryError::FiberSingular { kx });
    }
    Ok((plus.adjugate() * (a1 - a2)).scale(ONE / det))
}

/// `J = diag(-1, 1)`, the unitary of the Dirichlet orbit and the common
/// large-momentum limit of every regular family member.
pub fn j_matrix() -> M2 {
    M2::new(-ONE, ZERO, ZERO, ONE)
}

/// Closed-form von Neumann unitary of a family parametrization. Agrees with
/// [`von_neumann_u`] of the built data at every regular fiber.
pub fn closed_form_u(fp: &FamilyParams, kx: f64) -> Result<M2, BoundaryError> {
    let j = j_matrix();
    match *fp {
        FamilyParams::Dd { .. } => Ok(j),
        FamilyParams::Nd {
            alpha,
            lambda,
            lambda_p,
            ..
        } => {
            let denom = cr(1.0 + alpha.norm_sqr()) + I * cr(kx * lambda + lambda_p);
            let core = M2::new(ONE, -alpha, alpha.conj(), cr(-alpha.norm_sqr()));
            Ok(j + core.scale(cr(2.0) / denom))
        }
        FamilyParams::Nn {
            mu,
            mup,
            l1,
            l2,
            l1p,
            l2p,
            ..
        } => {
            let lam1 = cr(l1p + kx * l1);
            let lam2 = cr(l2p + kx * l2);
            let m = mup + cr(kx) * mu;
            let u_tilde = M2::new(ONE + I * lam1, m, m.conj(), -(ONE + I * lam2));
            let det = u_tilde.det();
            if det.norm() == 0.0 {
                return Err(BoundaryError::FiberSingular { kx });
            }
            Ok(j + u_tilde.scale(cr(-2.0) / det))
        }
        FamilyParams::Dn {
            a2,
            alpha,
            lambda,
            lambda_p,
            a2p,
            b2,
        } => {
            // Mirror of ND: swapping the two constrained combinations
            // conjugates the unitary by the flip and a sign.
            let nd = FamilyParams::Nd {
                a1: a2,
                alpha,
                lambda,
                lambda_p,
                a1p: a2p,
                b1: b2,
            };
            let u = closed_form_u(&nd, kx)?;
            let flip = M2::new(ZERO, ONE, ONE, ZERO);
            Ok((flip * u * flip).scale(-ONE))
        }
    }
}

/// Particle-hole symmetry of the boundary condition: `U(kx)` equals the
/// entrywise conjugate of `U(-kx)` at every sampled momentum.
pub fn is_phs(bd: &BoundaryData, samples: usize) -> bool {
    for kx in kx_samples(samples.max(4)) {
        let (u_plus, u_minus) = match (von_neumann_u(bd, kx), von_neumann_u(bd, -kx)) {
            (Ok(a), Ok(b)) => (a, b),
            // A singular fiber carries no constraint.
            _ => continue,
        };
        if (u_plus - u_minus.conj_entries()).norm_max() > 1e-10 {
            return false;
        }
    }
    true
}

fn real_roots_of_complex_poly(
    coeffs: &[Complex64],
    scale: f64,
) -> Result<Vec<f64>, BoundaryError> {
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let nonzero: Vec<bool> = coeffs.iter().map(|co| co.norm() > tol).collect();
    if nonzero.iter().all(|&b| !b) {
        return Err(BoundaryError::EverywhereSingular);
    }
    let degree = nonzero.iter().rposition(|&b| b).unwrap();
    if degree == 0 {
        return Ok(vec![]);
    }
    let eval = |x: f64| -> Complex64 {
        let mut acc = ZERO;
        for &co in coeffs[..=degree].iter().rev() {
            acc = acc * cr(x) + co;
        }
        acc
    };
    let roots = if degree == 1 {
        vec![-coeffs[0] / coeffs[1]]
    } else {
        let disc = (coeffs[1] * coeffs[1] - cr(4.0) * coeffs[2] * coeffs[0]).sqrt();
        vec![
            (-coeffs[1] + disc) / (cr(2.0) * coeffs[2]),
            (-coeffs[1] - disc) / (cr(2.0) * coeffs[2]),
        ]
    };
    let mut out: Vec<f64> = Vec::new();
    for z in roots {
        let local = coeffs[..=degree]
            .iter()
            .enumerate()
            .map(|(k, co)| co.norm() * z.norm().powi(k as i32))
            .fold(0.0, f64::max);
        if z.im.abs() <= 1e-9 * (1.0 + z.norm()) && eval(z.re).norm() <= 1e-8 * local.max(tol) {
            out.push(z.re);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    Ok(out)
}

/// Real momenta where the boundary condition loses rank (and the half-line
/// fiber fails to be self-adjoint). Computed from the exact wedge
/// polynomials rather than a numerical scan: a quadratic in family DD,
/// linear in ND/DN, and never in NN.
pub fn rank_failures(bd: &BoundaryData) -> Result<Vec<f64>, BoundaryError> {
    let scale = bd.scale().powi(2);
    match classify(bd, CLASSIFY_TOL) {
        Family::NN => Ok(vec![]),
        Family::DD => {
            let d0 = wedge(bd.a1p, bd.a2p);
            let d1 = wedge(bd.a1p, bd.b2) + wedge(bd.b1, bd.a2p);
            let d2 = wedge(bd.b1, bd.b2);
            real_roots_of_complex_poly(&[d0, d1, d2], scale)
        }
        Family::ND => {
            let e0 = wedge(bd.a1, bd.a1p);
            let e1 = wedge(bd.a1, bd.b1);
            real_roots_of_complex_poly(&[e0, e1], scale)
        }
        Family::DN => {
            let e0 = wedge(bd.a2, bd.a2p);
            let e1 = wedge(bd.a2, bd.b2);
            real_roots_of_complex_poly(&[e0, e1], scale)
        }
    }
}

/// Relabel the fibers by `kx -> kx + tau`; the half-plane operator, family,
/// self-adjointness and index vector are all unchanged.
pub fn kx_shift(bd: &BoundaryData, tau: f64) -> BoundaryData {
    BoundaryData {
        a1: bd.a1,
        a1p: bd.a1p + cr(tau) * bd.b1,
        a2p: bd.a2p + cr(tau) * bd.b2,
        a2: bd.a2,
        b1: bd.b1,
        b2: bd.b2,
    }
}

/// Interchange the roles of the two constrained combinations
/// (`a1 <-> a2`, `a1' <-> a2'`, `b1 <-> b2`), mapping family DN onto ND and
/// back. Self-adjointness is preserved.
pub fn dn_swap(bd: &BoundaryData) -> Result<BoundaryData, BoundaryError> {
    let fam = classify(bd, CLASSIFY_TOL);
    if fam != Family::DN && fam != Family::ND {
        return Err(BoundaryError::WrongFamily {
            expected: Family::DN,
            got: fam,
        });
    }
    Ok(swap_unchecked(bd))
}

pub(crate) fn swap_unchecked(bd: &BoundaryData) -> BoundaryData {
    BoundaryData {
        a1: bd.a2,
        a1p: bd.a2p,
        a2p: bd.a1p,
        a2: bd.a1,
        b1: bd.b2,
        b2: bd.b1,
    }
}

/// Act with a constant invertible matrix on the rows of the boundary
/// condition: every data vector is mapped by `g`. The orbit, in particular
/// the von Neumann unitary, is unchanged.
pub fn apply_gauge(bd: &BoundaryData, g: &M2) -> BoundaryData {
    BoundaryData {
        a1: g.apply(bd.a1),
        a1p: g.apply(bd.a1p),
        a2p: g.apply(bd.a2p),
        a2: g.apply(bd.a2),
        b1: g.apply(bd.b1),
        b2: g.apply(bd.b2),
    }
}

/// Two boundary conditions are orbit-equivalent iff their von Neumann
/// unitaries agree at (almost) every fiber.
pub fn orbit_equivalent(bd1: &BoundaryData, bd2: &BoundaryData, samples: usize) -> bool {
    let mut compared = 0;
    for kx in kx_samples(samples.max(4)) {
        let (u1, u2) = match (von_neumann_u(bd1, kx), von_neumann_u(bd2, kx)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(_), Err(_)) => continue,
            _ => return false,
        };
        compared += 1;
        if (u1 - u2).norm_max() > 1e-10 {
            return false;
        }
    }
    compared > 0
}

/// Reconstruct family parameters from self-adjoint data, keeping the data's
/// own gauge vectors (the reconstruction inverts [`build`] exactly on
/// constructor output).
pub fn family_params(bd: &BoundaryData) -> Result<FamilyParams, BoundaryError> {
    match classify(bd, CLASSIFY_TOL) {
        Family::DD => Ok(FamilyParams::Dd {
            a1p: bd.a1p,
            a2p: bd.a2p,
            b1: bd.b1,
            b2: bd.b2,
        }),
        Family::ND => {
            let orbit = nd_orbit(bd)?;
            Ok(FamilyParams::Nd {
                a1: bd.a1,
                alpha: orbit.alpha,
                lambda: orbit.lambda,
                lambda_p: orbit.lambda_p,
                a1p: bd.a1p,
                b1: bd.b1,
            })
        }
        Family::DN => {
            let orbit = nd_orbit(&swap_unchecked(bd))?;
            Ok(FamilyParams::Dn {
                a2: bd.a2,
                alpha: orbit.alpha,
                lambda: orbit.lambda,
                lambda_p: orbit.lambda_p,
                a2p: bd.a2p,
                b2: bd.b2,
            })
        }
        Family::NN => {
            let orbit = nn_orbit(bd)?;
            Ok(FamilyParams::Nn {
                a1: bd.a1,
                a2: bd.a2,
                mu: orbit.mu,
                mup: orbit.mup,
                l1: orbit.l1,
                l2: orbit.l2,
                l1p: orbit.l1p,
                l2p: orbit.l2p,
            })
        }
    }
}

/// Orbit parameters of an ND (or swapped DN) boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdOrbit {
    pub alpha: Complex64,
    pub lambda: f64,
    pub lambda_p: f64,
}

/// Orbit parameters of an NN boundary condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnOrbit {
    pub mu: Complex64,
    pub mup: Complex64,
    pub l1: f64,
    pub l2: f64,
    pub l1p: f64,
    pub l2p: f64,
}

/// Recover the ND orbit parameters from self-adjoint data with `a1 != 0`.
/// Representative-independent: any constant row recombination yields the
/// same values.
pub fn nd_orbit(bd: &BoundaryData) -> Result<NdOrbit, BoundaryError> {
    let n1 = bd.a1.norm();
    if n1 <= CLASSIFY_TOL * bd.scale() {
        return Err(BoundaryError::WrongFamily {
            expected: Family::ND,
            got: classify(bd, CLASSIFY_TOL),
        });
    }
    let pivot_x = bd.a1.x.norm() >= bd.a1.y.norm();
    let comp = |v: &C2| if pivot_x { v.x } else { v.y };
    let alpha = comp(&bd.a2) / comp(&bd.a1);
    let zp = alpha.conj() * bd.a1p + bd.a2p;
    let zl = alpha.conj() * bd.b1 + bd.b2;
    let lambda_p = (comp(&zp) / (I * comp(&bd.a1))).re;
    let lambda = (comp(&zl) / (I * comp(&bd.a1))).re;
    // Residuals certify the reconstruction (and thus self-adjointness).
    let r1 = (zp - I * cr(lambda_p) * bd.a1).norm();
    let r2 = (zl - I * cr(lambda) * bd.a1).norm();
    if r1.max(r2) > 1e-8 * bd.scale() * (1.0 + alpha.norm()) {
        return Err(BoundaryError::NotSelfAdjoint);
    }
    Ok(NdOrbit {
        alpha,
        lambda,
        lambda_p,
    })
}

/// Recover the NN orbit parameters from self-adjoint data with linearly
/// independent `a1, a2`.
pub fn nn_orbit(bd: &BoundaryData) -> Result<NnOrbit, BoundaryError> {
    let w = wedge(bd.a1, bd.a2);
    if w.norm() <= CLASSIFY_TOL * bd.a1.norm() * bd.a2.norm() {
        return Err(BoundaryError::WrongFamily {
            expected: Family::NN,
            got: classify(bd, CLASSIFY_TOL),
        });
    }
    let mup = wedge(bd.a1p, bd.a2) / w;
    let l1p = (wedge(bd.a1, bd.a1p) / w).im;
    let l2p = (wedge(bd.a2p, bd.a2) / w).im;
    let mu = wedge(bd.b1, bd.a2) / w;
    let l1 = (wedge(bd.a1, bd.b1) / w).im;
    let l2 = (wedge(bd.b2, bd.a2) / w).im;
    // Cross-checks from the second halves of the defining relations.
    let mup_bar = -wedge(bd.a1, bd.a2p) / w;
    let mu_bar = -wedge(bd.a1, bd.b2) / w;
    let resid = (mup_bar - mup.conj())
        .norm()
        .max((mu_bar - mu.conj()).norm());
    let re_parts = (wedge(bd.a1, bd.a1p) / w)
        .re
        .abs()
        .max((wedge(bd.a2p, bd.a2) / w).re.abs())
        .max((wedge(bd.a1, bd.b1) / w).re.abs())
        .max((wedge(bd.b2, bd.a2) / w).re.abs());
    let rel = bd.scale().powi(2) / w.norm();
    if resid.max(re_parts) > 1e-8 * (1.0 + rel) {
        return Err(BoundaryError::NotSelfAdjoint);
    }
    Ok(NnOrbit {
        mu,
        mup,
        l1,
        l2,
        l1p,
        l2p,
    })
}
