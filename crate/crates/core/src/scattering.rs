//! Scattering theory at the wall: evanescent kinematics, the Jost function
//! whose zeros on the bound branch are edge eigenvalues, the scattering
//! amplitude, and the leading-order expansions of the Jost function around
//! infinite momentum that feed both the analytic indices and the numerical
//! winding oracles.

use crate::algebra::{cr, wedge, C3, I, ONE, ZERO};
use crate::boundary::{BoundaryData, FamilyParams};
use crate::bulk::{band_rim, section, BulkError, Chart, MomentumC, PhysParams};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("omega = {omega} is not inside the gap at kx = {kx} (rim {rim})")]
    OnBand { kx: f64, omega: f64, rim: f64 },
    #[error("bulk eigensection singular at the requested momentum")]
    SectionSingular,
    #[error("boundary condition loses rank at kx = {kx}")]
    FiberSingular { kx: f64 },
    #[error("scattering requires a propagating incoming wave (kappa > 0)")]
    NotPropagating,
}

impl From<BulkError> for ScatteringError {
    fn from(_: BulkError) -> Self {
        ScatteringError::SectionSingular
    }
}

/// A momentum/frequency pair strictly inside the positive gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub kx: f64,
    pub omega: f64,
}

impl GapPoint {
    pub fn new(kx: f64, omega: f64, p: &PhysParams) -> Result<Self, ScatteringError> {
        let rim = band_rim(kx, p);
        if omega > 0.0 && omega < rim {
            Ok(GapPoint { kx, omega })
        } else {
            Err(ScatteringError::OnBand { kx, omega, rim })
        }
    }
}

/// Scattering and evanescent amplitudes of the unique scattering solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringSolution {
    pub s: Complex64,
    pub t: Complex64,
}

/// Evanescent companion momentum `i sqrt(kappa^2 + 2 kx^2 + (1 - 2 nu f)/nu^2)`
/// sharing the frequency of the wave at `(kx, kappa)`; lies on the upper
/// imaginary axis for real arguments.
pub fn kappa_ev(kx: f64, kappa: Complex64, p: &PhysParams) -> Complex64 {
    let c0 = (1.0 - 2.0 * p.nu() * p.f()) / (p.nu() * p.nu());
    I * (kappa * kappa + cr(2.0 * kx * kx + c0)).sqrt()
}

/// The two solutions `X_+ > X_-` of `omega^2 = X + (f - nu X)^2`, i.e. the
/// values of `k^2` compatible with the frequency. Related by Vieta:
/// `X_+ + X_- = -(1 - 2 nu f)/nu^2`, `X_+ X_- = (f^2 - omega^2)/nu^2`.
pub fn x_pm(omega: f64, p: &PhysParams) -> (f64, f64) {
    let nu = p.nu();
    let disc = 1.0 - 4.0 * nu * p.f() + 4.0 * omega * omega * nu * nu;
    let root = disc.sqrt();
    let base = -(1.0 - 2.0 * nu * p.f());
    (
        (base + root) / (2.0 * nu * nu),
        (base - root) / (2.0 * nu * nu),
    )
}

/// Decaying transverse momenta `ky_{+-} = i sqrt(kx^2 - X_{+-})` of the two
/// evanescent waves at an in-gap frequency; both lie on the upper imaginary
/// axis there, and `ky_-` does for every real frequency.
pub fn ky_pm(
    kx: f64,
    omega: f64,
    p: &PhysParams,
) -> Result<(Complex64, Complex64), ScatteringError> {
    let rim = band_rim(kx, p);
    if omega.abs() >= rim {
        return Err(ScatteringError::OnBand { kx, omega, rim });
    }
    let (x_plus, x_minus) = x_pm(omega, p);
    let ky_plus = I * cr((kx * kx - x_plus).sqrt());
    let ky_minus = I * cr((kx * kx - x_minus).sqrt());
    Ok((ky_plus, ky_minus))
}

/// Boundary-trace column of a wave with amplitude `psi` and transverse
/// momentum `ky`, already contracted with the trace-space embedding; the
/// four rows pair with the columns of the 2x4 boundary matrix.
pub(crate) fn trace_column(psi: &C3, ky: Complex64, nu: f64) -> [Complex64; 4] {
    let (eta, u, v) = (psi.e[0], psi.e[1], psi.e[2]);
    [eta - I * cr(nu) * ky * u, u, v, I * cr(nu) * ky * v]
}

pub(crate) fn det_from_columns(
    bd: &BoundaryData,
    kx: f64,
    col_a: [Complex64; 4],
    col_b: [Complex64; 4],
) -> Complex64 {
    let ul = crate::boundary::ul_matrix(bd, kx);
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        m[i][0] = (0..4).map(|k| ul[i][k] * col_a[k]).sum();
        m[i][1] = (0..4).map(|k| ul[i][k] * col_b[k]).sum();
    }
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Jost function `g(kx, kappa)`: determinant of the boundary matrix applied
/// to the outgoing wave (chart-at-zero section at `(kx, kappa)`) and the
/// evanescent wave (chart-at-infinity section at `(kx, kappa_ev)`). Its
/// zeros with `Im kappa > 0` are edge eigenvalues; the scattering amplitude
/// is `S = -g(kx, -kappa) / g(kx, kappa)`.
pub fn jost_g(
    bd: &BoundaryData,
    kx: f64,
    kappa: Complex64,
    p: &PhysParams,
) -> Result<Complex64, ScatteringError> {
    let out = section(MomentumC::new(kx, kappa), Chart::Zero, p)?;
    let kev = kappa_ev(kx, kappa, p);
    let ev = section(MomentumC::new(kx, kev), Chart::Infinity, p)?;
    Ok(det_from_columns(
        bd,
        kx,
        trace_column(&out, kappa, p.nu()),
        trace_column(&ev, kev, p.nu()),
    ))
}

/// Rescaled bound-branch amplitudes
/// `(X, kx w - i ky (f - nu X), ky w + i kx (f - nu X))` at `X = X_{+-}`:
/// polynomial in the kinematic data, hence stable at arbitrarily large
/// momenta, with the same zero set as the chart sections up to their
/// nonvanishing rescaling factor.
fn rescaled_sections(
    kx: f64,
    omega: f64,
    p: &PhysParams,
) -> Result<[(C3, Complex64); 2], ScatteringError> {
    let (ky_plus, ky_minus) = ky_pm(kx, omega, p)?;
    let (x_plus, x_minus) = x_pm(omega, p);
    let make = |x: f64, ky: Complex64| -> C3 {
        let g = cr(p.f() - p.nu() * x);
        C3::new(
            cr(x),
            cr(kx * omega) - I * ky * g,
            ky * cr(omega) + I * cr(kx) * g,
        )
    };
    Ok([
        (make(x_plus, ky_plus), ky_plus),
        (make(x_minus, ky_minus), ky_minus),
    ])
}

/// Jost function on the bound branch, evaluated from the rescaled sections.
/// Shares its zero set with [`jost_g`] at `kappa = ky_+(omega)` and stays
/// numerically stable for `|kx|` up to 1e4 and beyond.
pub fn jost_g_rescaled(
    bd: &BoundaryData,
    kx: f64,
    omega: f64,
    p: &PhysParams,
) -> Result<Complex64, ScatteringError> {
    let [(psi_p, ky_p), (psi_m, ky_m)] = rescaled_sections(kx, omega, p)?;
    Ok(det_from_columns(
        bd,
        kx,
        trace_column(&psi_p, ky_p, p.nu()),
        trace_column(&psi_m, ky_m, p.nu()),
    ))
}

/// The rescaled sections vanish on the half-lines `omega = +-f`,
/// `-+ kx > 0`, producing fake Jost zeros there; callers discard candidate
/// roots flagged by this mask.
pub fn is_spurious_zero_point(kx: f64, omega: f64, p: &PhysParams) -> bool {
    let sections = match rescaled_sections(kx, omega, p) {
        Ok(s) => s,
        Err(_) => return false,
    };
    for (psi, ky) in sections {
        let g = p.f() - p.nu() * psi.e[0].re;
        let scale = psi.e[0].norm()
            + (kx * omega).abs()
            + ky.norm() * g.abs()
            + ky.norm() * omega.abs()
            + (kx * g).abs();
        if psi.norm() < 1e-8 * scale.max(f64::MIN_POSITIVE) {
            return true;
        }
    }
    false
}

/// Scattering and evanescent amplitudes at a propagating in-band point, by
/// Cramer's rule on the boundary condition applied to the three-wave
/// scattering state. Satisfies `S(kx, kappa) S(kx, -kappa) = 1` identically.
pub fn s_amplitude(
    bd: &BoundaryData,
    kx: f64,
    kappa: f64,
    p: &PhysParams,
) -> Result<ScatteringSolution, ScatteringError> {
    if kappa <= 0.0 {
        return Err(ScatteringError::NotPropagating);
    }
    let nu = p.nu();
    let k_in = cr(-kappa);
    let k_out = cr(kappa);
    let psi_in = section(MomentumC::new(kx, k_in), Chart::Zero, p)?;
    let psi_out = section(MomentumC::new(kx, k_out), Chart::Zero, p)?;
    let kev = kappa_ev(kx, k_out, p);
    let psi_ev = section(MomentumC::new(kx, kev), Chart::Infinity, p)?;
    let col_in = trace_column(&psi_in, k_in, nu);
    let col_out = trace_column(&psi_out, k_out, nu);
    let col_ev = trace_column(&psi_ev, kev, nu);
    let denom = det_from_columns(bd, kx, col_out, col_ev);
    let scale: f64 = col_out.iter().chain(col_ev.iter()).map(|z| z.norm()).sum();
    if denom.norm() <= 1e-14 * scale * scale {
        return Err(ScatteringError::FiberSingular { kx });
    }
    let s = -det_from_columns(bd, kx, col_in, col_ev) / denom;
    let t = -det_from_columns(bd, kx, col_out, col_in) / denom;
    Ok(ScatteringSolution { s, t })
}

/// Leading orders of the Jost function around the point at infinity, in the
/// coordinates `(kx, kappa) = (cos(phi)/eps, -sin(phi)/eps)`.
///
/// The winding of this expansion along a small circle of constant `eps` is
/// the infinite-momentum part of the scattering winding, from which the
/// number of proper mergers follows.
pub fn g_leading(fp: &FamilyParams, eps: f64, phi: f64, p: &PhysParams) -> Complex64 {
    let nu = p.nu();
    let (cphi, sphi) = (phi.cos(), phi.sin());
    let xi = (1.0 + cphi * cphi).sqrt();
    match *fp {
        FamilyParams::Dd { a1p, a2p, b1, b2 } => {
            let left = a1p + cr(cphi / eps) * b1;
            let right = a2p + cr(cphi / eps) * b2;
            cr(2.0) * I * wedge(left, right)
        }
        FamilyParams::Nd {
            a1,
            alpha,
            lambda,
            lambda_p,
            a1p,
            b1,
        } => {
            let nsq_plus = (ONE + I * alpha).norm_sqr();
            let nsq_minus = (ONE - I * alpha).norm_sqr();
            let d = cr(2.0 * lambda * cphi) + I * cr(nu * nsq_plus * sphi)
                - cr(nu * nsq_minus * xi)
                + cr(2.0 * lambda_p * eps);
            let vec = cr(cphi) * b1 + cr(eps) * a1p;
            d * wedge(a1, vec) / cr(eps * eps)
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
            let a_1 = cr(eps) * (mup + cr(l2p)) + I * cr(nu * sphi) + (mu + cr(l2)) * cr(cphi);
            let a_2 = cr(eps) * (mup - cr(l2p)) + cr(nu * xi) + (mu - cr(l2)) * cr(cphi);
            let b_1 = I * cr(eps) * (cr(l1p) + mup.conj()) - cr(nu * sphi)
                + I * (cr(l1) + mu.conj()) * cr(cphi);
            let b_2 = I * cr(eps) * (cr(l1p) - mup.conj()) - I * cr(nu * xi)
                + I * (cr(l1) - mu.conj()) * cr(cphi);
            wedge(a1, a2) * (a_1 * b_2 - a_2 * b_1) / cr(eps * eps)
        }
        FamilyParams::Dn {
            a2,
            alpha,
            lambda,
            lambda_p,
            a2p,
            b2,
        } => {
            // Index computations route DN through the component swap.
            let nd = FamilyParams::Nd {
                a1: a2,
                alpha,
                lambda,
                lambda_p,
                a1p: a2p,
                b1: b2,
            };
            g_leading(&nd, eps, phi, p)
        }
    }
}

/// Reflection amplitude built from sections regular on the whole finite
/// momentum axis (the chart-at-infinity eigensection for the propagating
/// waves).
///
/// The standard amplitude of [`s_amplitude`] uses the chart-at-zero section
/// for the propagating waves, whose phase winds around the chart's singular
/// point at momentum zero; hovering across it near threshold picks up the
/// chart transition's winding (two turns) on top of the merger jumps. This
/// variant has no such contribution and is the right object for threshold
/// phase counting at finite momenta.
pub fn levinson_amplitude(
    bd: &BoundaryData,
    kx: f64,
    kappa: f64,
    p: &PhysParams,
) -> Result<Complex64, ScatteringError> {
    if kappa <= 0.0 {
        return Err(ScatteringError::NotPropagating);
    }
    let nu = p.nu();
    let k_in = cr(-kappa);
    let k_out = cr(kappa);
    let psi_in = section(MomentumC::new(kx, k_in), Chart::Infinity, p)?;
    let psi_out = section(MomentumC::new(kx, k_out), Chart::Infinity, p)?;
    let kev = kappa_ev(kx, k_out, p);
    let psi_ev = section(MomentumC::new(kx, kev), Chart::Infinity, p)?;
    let col_in = trace_column(&psi_in, k_in, nu);
    let col_out = trace_column(&psi_out, k_out, nu);
    let col_ev = trace_column(&psi_ev, kev, nu);
    let denom = det_from_columns(bd, kx, col_out, col_ev);
    let scale: f64 = col_out.iter().chain(col_ev.iter()).map(|z| z.norm()).sum();
    if denom.norm() <= 1e-14 * scale * scale {
        return Err(ScatteringError::FiberSingular { kx });
    }
    Ok(-det_from_columns(bd, kx, col_in, col_ev) / denom)
}

/// Scale-free root objective on the bound branch: the modulus of the sine
/// of the angle between the two boundary-applied trace columns. Vanishes
/// exactly at Jost roots, stays order one on the spurious section-vanishing
/// lines, and is immune to the overall growth of the sections.
pub fn jost_root_objective(
    bd: &BoundaryData,
    kx: f64,
    omega: f64,
    p: &PhysParams,
) -> Result<f64, ScatteringError> {
    let [(psi_p, ky_p), (psi_m, ky_m)] = rescaled_sections(kx, omega, p)?;
    let col_p = trace_column(&psi_p, ky_p, p.nu());
    let col_m = trace_column(&psi_m, ky_m, p.nu());
    let ul = crate::boundary::ul_matrix(bd, kx);
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        m[i][0] = (0..4).map(|k| ul[i][k] * col_p[k]).sum();
        m[i][1] = (0..4).map(|k| ul[i][k] * col_m[k]).sum();
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let n0 = (m[0][0].norm_sqr() + m[1][0].norm_sqr()).sqrt();
    let n1 = (m[0][1].norm_sqr() + m[1][1].norm_sqr()).sqrt();
    let denom = (n0 * n1).max(f64::MIN_POSITIVE);
    Ok(det.norm() / denom)
}
