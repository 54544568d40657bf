//! Bulk band structure of the odd-viscous rotating shallow-water model:
//! eigenprojections, eigensections over compactified momentum space, and the
//! bulk Chern numbers (closed-form constants plus a quadrature oracle).

use crate::algebra::{cr, numeric_winding, WindingError, C3, I, M3, ONE, ZERO};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BulkError {
    #[error("physical parameters must satisfy f > 0, nu > 0 and 4*nu*f < 1 (got f={f}, nu={nu})")]
    InvalidParams { f: f64, nu: f64 },
    #[error("momentum lies at the singular point of the requested chart")]
    ChartSingular,
    #[error("quadrature grid must have at least 64 cells per direction (got {0})")]
    GridTooCoarse(usize),
    #[error("Berry quadrature under-resolved: plaquette phase {phase:.3} exceeds pi/2")]
    UnderResolved { phase: f64 },
    #[error(transparent)]
    Winding(#[from] WindingError),
}

/// Coriolis frequency and odd viscosity; the standing assumption
/// `4 * nu * f < 1` keeps the band gap open at all momenta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    f: f64,
    nu: f64,
}

impl PhysParams {
    pub fn new(f: f64, nu: f64) -> Result<Self, BulkError> {
        if f > 0.0 && nu > 0.0 && 4.0 * nu * f < 1.0 {
            Ok(PhysParams { f, nu })
        } else {
            Err(BulkError::InvalidParams { f, nu })
        }
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Momentum with real longitudinal component and possibly complex transverse
/// component (evanescent branches have `Im ky > 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumC {
    pub kx: f64,
    pub ky: Complex64,
}

impl MomentumC {
    pub fn real(kx: f64, ky: f64) -> Self {
        MomentumC { kx, ky: cr(ky) }
    }

    pub fn new(kx: f64, ky: Complex64) -> Self {
        MomentumC { kx, ky }
    }

    /// `kx^2 + ky^2`, complex for evanescent branches.
    pub fn k_sq(&self) -> Complex64 {
        cr(self.kx * self.kx) + self.ky * self.ky
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandLabel {
    Plus,
    Zero,
    Minus,
}

/// Chart of the band bundle: each eigensection is regular away from one
/// singular point of the compactified momentum plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// Section singular at momentum zero.
    Zero,
    /// Section singular at the point at infinity.
    Infinity,
}

/// Spin-1 matrices entering `H(k) = kx S1 + ky S2 + (f - nu k^2) S3`.
pub fn spin_matrices() -> [M3; 3] {
    let mut s1 = M3::zero();
    s1.e[0][1] = ONE;
    s1.e[1][0] = ONE;
    let mut s2 = M3::zero();
    s2.e[0][2] = ONE;
    s2.e[2][0] = ONE;
    let mut s3 = M3::zero();
    s3.e[1][2] = -I;
    s3.e[2][1] = I;
    [s1, s2, s3]
}

/// Momentum-space fiber of the bulk Hamiltonian.
pub fn hamiltonian(k: MomentumC, p: &PhysParams) -> M3 {
    let g = cr(p.f) - cr(p.nu) * k.k_sq();
    let mut h = M3::zero();
    h.e[0][1] = cr(k.kx);
    h.e[0][2] = k.ky;
    h.e[1][0] = cr(k.kx);
    h.e[1][2] = -I * g;
    h.e[2][0] = k.ky;
    h.e[2][1] = I * g;
    h
}

/// Upper band frequency `omega_+(k) = sqrt(k^2 + (f - nu k^2)^2)`, principal
/// square root. Real and at least `f` on real momenta.
pub fn omega_plus(k: MomentumC, p: &PhysParams) -> Complex64 {
    let k2 = k.k_sq();
    let g = cr(p.f) - cr(p.nu) * k2;
    (k2 + g * g).sqrt()
}

/// Lower rim of the upper band at fixed `kx`: `inf over ky` of `omega_+`,
/// attained at `ky = 0`.
pub fn band_rim(kx: f64, p: &PhysParams) -> f64 {
    let g = p.f - p.nu * kx * kx;
    (kx * kx + g * g).sqrt()
}

fn flattened_direction(k: MomentumC, p: &PhysParams) -> [f64; 3] {
    let k2 = k.kx * k.kx + k.ky.re * k.ky.re;
    let d = [k.kx, k.ky.re, p.f - p.nu * k2];
    let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    [d[0] / n, d[1] / n, d[2] / n]
}

fn projection_from_direction(e: [f64; 3], band: BandLabel) -> M3 {
    let [s1, s2, s3] = spin_matrices();
    let es = s1.scale(cr(e[0])) + s2.scale(cr(e[1])) + s3.scale(cr(e[2]));
    let es2 = es * es;
    match band {
        BandLabel::Plus => (es2 + es).scale(cr(0.5)),
        BandLabel::Minus => (es2 - es).scale(cr(0.5)),
        BandLabel::Zero => M3::identity() - es2,
    }
}

/// Rank-one (rank-one for the outer bands) spectral projection of `H(k)` at
/// real momentum. Hermitian, idempotent, and convergent as `|k| -> infinity`
/// irrespective of direction, which is what compactifies momentum space.
pub fn eigenprojection(k: MomentumC, band: BandLabel, p: &PhysParams) -> M3 {
    projection_from_direction(flattened_direction(k, p), band)
}

/// Projection at the point at infinity: the flattened direction converges to
/// `(0, 0, -1)` there.
pub fn eigenprojection_at_infinity(band: BandLabel) -> M3 {
    projection_from_direction([0.0, 0.0, -1.0], band)
}

/// Upper-band eigensections.
///
/// Both charts carry the same unnormalized eigenvector
/// `(k^2/omega_+, kx - i ky q, ky + i kx q)` with `q = (f - nu k^2)/omega_+`,
/// divided by `kx + i ky` (chart [`Chart::Zero`], regular away from zero) or
/// `kx - i ky` (chart [`Chart::Infinity`], regular away from infinity). The
/// formulas continue analytically to complex `ky`.
pub fn section(k: MomentumC, chart: Chart, p: &PhysParams) -> Result<C3, BulkError> {
    let k2 = k.k_sq();
    let scale2 = 1.0 + k2.norm();
    if k2.norm() < 1e-28 * scale2 {
        // Smooth limits at momentum zero.
        return match chart {
            Chart::Infinity => Ok(C3::new(ZERO, ONE, I)),
            Chart::Zero => Err(BulkError::ChartSingular),
        };
    }
    let denom = match chart {
        Chart::Zero => cr(k.kx) + I * k.ky,
        Chart::Infinity => cr(k.kx) - I * k.ky,
    };
    if denom.norm_sqr() < 1e-28 * scale2 {
        return Err(BulkError::ChartSingular);
    }
    let om = omega_plus(k, p);
    let q = (cr(p.f) - cr(p.nu) * k2) / om;
    // First component: k^2/(omega (kx -+ i ky)) = (kx +- i ky)/omega, exact
    // because k^2 = (kx + i ky)(kx - i ky).
    let first = match chart {
        Chart::Zero => (cr(k.kx) - I * k.ky) / om,
        Chart::Infinity => (cr(k.kx) + I * k.ky) / om,
    };
    let u = (cr(k.kx) - I * k.ky * q) / denom;
    let v = (k.ky + I * cr(k.kx) * q) / denom;
    Ok(C3::new(first, u, v))
}

/// Limit of the chart-at-zero section at infinity, `(0, 1, -i)`.
pub fn section_zero_chart_at_infinity() -> C3 {
    C3::new(ZERO, ONE, -I)
}

fn band_state(k: MomentumC, band: BandLabel, p: &PhysParams) -> C3 {
    normalized_column(&eigenprojection(k, band, p))
}

/// Largest column of a rank-one projection, normalized. Gauge is arbitrary,
/// which the plaquette quadrature does not mind.
fn normalized_column(proj: &M3) -> C3 {
    let mut best = proj.col(0);
    for j in 1..3 {
        let col = proj.col(j);
        if col.norm() > best.norm() {
            best = col;
        }
    }
    best.scale(cr(1.0 / best.norm()))
}

/// Bulk Chern number of the requested band by Berry-curvature quadrature
/// over the compactified momentum plane.
///
/// Uses plaquette phases of normalized state overlaps on a polar grid with
/// the radial substitution `|k| = r/(1-r)`, `r in [0, 1)`; the last radial
/// ring is closed by the direction-independent limit state at infinity. The
/// total is a lattice-gauge invariant and lands exponentially close to an
/// integer on resolved grids.
pub fn chern_numeric(p: &PhysParams, band: BandLabel, grid: usize) -> Result<f64, BulkError> {
    if grid < 64 {
        return Err(BulkError::GridTooCoarse(grid));
    }
    let n_r = grid;
    let n_th = grid;
    // States on the (r, theta) grid. r-index n_r is the point at infinity,
    // r-index 0 is momentum zero (theta-independent).
    let state_inf = normalized_column(&eigenprojection_at_infinity(band));
    let state_zero = band_state(MomentumC::real(0.0, 0.0), band, p);
    let states: Vec<Vec<C3>> = (1..n_r)
        .into_par_iter()
        .map(|ir| {
            let r = ir as f64 / n_r as f64;
            let rho = r / (1.0 - r);
            (0..n_th)
                .map(|it| {
                    let th = 2.0 * PI * it as f64 / n_th as f64;
                    band_state(MomentumC::real(rho * th.cos(), rho * th.sin()), band, p)
                })
                .collect()
        })
        .collect();
    let state = |ir: usize, it: usize| -> &C3 {
        if ir == 0 {
            &state_zero
        } else if ir == n_r {
            &state_inf
        } else {
            &states[ir - 1][it % n_th]
        }
    };
    let mut total = 0.0;
    let mut max_phase = 0.0_f64;
    for ir in 0..n_r {
        for it in 0..n_th {
            let s00 = state(ir, it);
            let s10 = state(ir + 1, it);
            let s11 = state(ir + 1, it + 1);
            let s01 = state(ir, it + 1);
            let loop_product = s00.dot(s10) * s10.dot(s11) * s11.dot(s01) * s01.dot(s00);
            let phase = loop_product.arg();
            max_phase = max_phase.max(phase.abs());
            total += phase;
        }
    }
    if max_phase > PI / 2.0 {
        return Err(BulkError::UnderResolved { phase: max_phase });
    }
    Ok(total / (2.0 * PI))
}

/// Winding of the transition function between the two eigensection charts
/// along a circle `|k| = radius`, computed from the sections themselves.
/// Equals the bulk index of the upper band.
pub fn transition_winding_on_circle(
    p: &PhysParams,
    n: usize,
    radius: f64,
) -> Result<f64, BulkError> {
    let mut samples = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let th = 2.0 * PI * i as f64 / n as f64;
        let k = MomentumC::real(radius * th.cos(), radius * th.sin());
        let inf = section(k, Chart::Infinity, p)?;
        let zero = section(k, Chart::Zero, p)?;
        // Componentwise ratio at the largest component of the denominator.
        let (mut best, mut best_norm) = (ZERO, 0.0);
        for j in 0..3 {
            let nz = zero.e[j].norm();
            if nz > best_norm {
                best_norm = nz;
                best = inf.e[j] / zero.e[j];
            }
        }
        samples.push(best);
    }
    Ok(numeric_winding(&samples)?)
}

/// [`transition_winding_on_circle`] on the unit circle.
pub fn transition_winding(p: &PhysParams, n: usize) -> Result<f64, BulkError> {
    transition_winding_on_circle(p, n, 1.0)
}
