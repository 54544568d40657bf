//! Independent numerical verification of the analytic indices: boundary
//! windings from sampled unitary determinants, scattering windings at
//! infinite momentum, edge-branch tracing through Jost-function roots,
//! merger counting, phase jumps across mergers, and brute-force arc
//! intersection counts.
//!
//! Nothing here reuses the closed-form index formulas; agreement between
//! the two routes is the artifact's main correctness argument.

use crate::algebra::{numeric_winding, open_arg_increment, WindingError};
use crate::boundary::{
    family_params, rank_failures, von_neumann_u, BoundaryData, BoundaryError,
};
use crate::bulk::{band_rim, PhysParams};
use crate::indices::AsymCurve;
use crate::scattering::{jost_root_objective, levinson_amplitude, ScatteringError};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Winding(#[from] WindingError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error("the infinite-momentum expansion kept vanishing on every probed contour radius")]
    ContourExhausted,
    #[error("rank failure inside the sampled window at kx = {kx}")]
    RankFailureInWindow { kx: f64 },
}

/// Winding of the von Neumann unitary determinant along the real momentum
/// axis, closed through the large-momentum limit. Within 0.05 of the
/// boundary winding index wherever the latter is defined.
pub fn numeric_b(bd: &BoundaryData, k_max: f64, n: usize) -> Result<f64, OracleError> {
    for kx in rank_failures(bd)? {
        if kx.abs() <= k_max {
            return Err(OracleError::RankFailureInWindow { kx });
        }
    }
    let det_at = |kx: f64| -> Result<Complex64, OracleError> {
        Ok(von_neumann_u(bd, kx)?.det())
    };
    let mut count = n;
    loop {
        let mut samples = Vec::with_capacity(count + 2 * (count / 8) + 2);
        for i in 0..=count {
            let kx = -k_max + 2.0 * k_max * i as f64 / count as f64;
            samples.push(det_at(kx)?);
        }
        // Close the contour through the one-point compactification of the
        // axis: geometric momenta out to where the unitary has settled.
        let far = (1.0e7_f64).max(1e3 * k_max);
        let m = (count / 8).max(16);
        for i in 1..=m {
            let kx = k_max * (far / k_max).powf(i as f64 / m as f64);
            samples.push(det_at(kx)?);
        }
        for i in (1..=m).rev() {
            let kx = -k_max * (far / k_max).powf(i as f64 / m as f64);
            samples.push(det_at(kx)?);
        }
        samples.push(samples[0]);
        match numeric_winding(&samples) {
            Ok(w) => return Ok(w),
            Err(WindingError::UnderResolved { .. }) if count < (1 << 21) => {
                count *= 4;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Winding of the leading Jost expansion around the point at infinity on a
/// circle of radius `r` in reciprocal momenta. Within 0.05 of an integer on
/// resolved contours; the number of proper mergers is two minus this value.
/// If the expansion vanishes on the contour the radius is shrunk (up to six
/// times) before giving up.
pub fn numeric_w_infty(
    bd: &BoundaryData,
    r: f64,
    n: usize,
    p: &PhysParams,
) -> Result<f64, OracleError> {
    let fp = family_params(bd)?;
    let mut radius = r;
    for _ in 0..6 {
        let samples: Vec<Complex64> = (0..=n)
            .map(|j| {
                let phi = 2.0 * PI * j as f64 / n as f64;
                crate::scattering::g_leading(&fp, radius, phi, p)
            })
            .collect();
        match numeric_winding(&samples) {
            Ok(w) => return Ok(w),
            Err(WindingError::OriginHit { .. }) => {
                radius /= 3.0;
                continue;
            }
            Err(WindingError::UnderResolved { .. }) => {
                // Retry once with a denser contour at the same radius.
                let dense: Vec<Complex64> = (0..=8 * n)
                    .map(|j| {
                        let phi = 2.0 * PI * j as f64 / (8 * n) as f64;
                        crate::scattering::g_leading(&fp, radius, phi, p)
                    })
                    .collect();
                return Ok(numeric_winding(&dense)?);
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(OracleError::ContourExhausted)
}

/// One sampled point of an edge branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub kx: f64,
    pub omega: f64,
}

/// Behavior of a branch endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndBehavior {
    /// The branch meets the lower rim of the upper band at finite momentum.
    MergesWithUpperBand { kx: f64 },
    /// The branch meets the upper rim of the lower band (mirror gap).
    MergesWithLowerBand { kx: f64 },
    /// Parabolic tail `omega ~ coeff kx^2` at the window edge: an improper
    /// merger at infinity.
    Parabolic { coeff: f64 },
    /// Horizontal asymptote at the window edge, extrapolated height.
    Flat { height: f64 },
    /// Reached the scan window without a recognized asymptotic shape.
    Unclassified,
    /// Link lost in the interior (under-resolution or a vertical feature);
    /// fragments are reported, not reconciled.
    Fragmented,
}

/// A traced edge branch, samples ordered by increasing momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub points: Vec<BranchPoint>,
    pub left: EndBehavior,
    pub right: EndBehavior,
}

impl Branch {
    pub fn annotation(&self) -> String {
        fn one(side: &str, e: &EndBehavior) -> String {
            match e {
                EndBehavior::MergesWithUpperBand { kx } => {
                    format!("{side}:merge_upper@{kx:.6}")
                }
                EndBehavior::MergesWithLowerBand { kx } => {
                    format!("{side}:merge_lower@{kx:.6}")
                }
                EndBehavior::Parabolic { coeff } => format!("{side}:parabolic(c={coeff:.6})"),
                EndBehavior::Flat { height } => format!("{side}:flat(h={height:.6})"),
                EndBehavior::Unclassified => format!("{side}:unclassified"),
                EndBehavior::Fragmented => format!("{side}:fragment"),
            }
        }
        format!("{};{}", one("L", &self.left), one("R", &self.right))
    }
}

/// The set of edge branches found in a scan window, together with
/// resolution warnings (branches closer than the grid can separate are
/// traced on a best-effort basis and may fragment).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeBranchSet {
    pub branches: Vec<Branch>,
    pub warnings: Vec<String>,
}

/// Scan-window and acceptance parameters for [`trace_branches`].
#[derive(Debug, Clone, Copy)]
pub struct TraceConfig {
    pub kx_min: f64,
    pub kx_max: f64,
    pub kx_count: usize,
    pub omega_count: usize,
    /// Lower frequency bound of the scan (intersected with the gap); the
    /// full gap `(-rim, rim)` is scanned by default.
    pub omega_min: f64,
    pub omega_max: f64,
    /// Acceptance threshold for the scale-free root objective.
    pub accept: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            kx_min: -40.0,
            kx_max: 40.0,
            kx_count: 481,
            omega_count: 900,
            omega_min: f64::NEG_INFINITY,
            omega_max: f64::INFINITY,
            accept: 1e-8,
        }
    }
}

/// Frequency grid over the scanned part of the gap, concentrated near both
/// rims (where merging branches hide) by a sine profile.
fn omega_grid(rim: f64, cfg: &TraceConfig) -> Vec<f64> {
    let n = cfg.omega_count;
    let clip = 1.0 - 0.25 / n as f64;
    let to_t = |w: f64| (2.0 / PI) * (w / rim).clamp(-1.0, 1.0).asin();
    let t_lo = to_t(cfg.omega_min.max(-rim)).max(-clip);
    let t_hi = to_t(cfg.omega_max.min(rim)).min(clip);
    if t_lo >= t_hi {
        return vec![];
    }
    (0..n)
        .map(|j| {
            let t = t_lo + (t_hi - t_lo) * j as f64 / (n - 1) as f64;
            rim * (PI * t / 2.0).sin()
        })
        .collect()
}

fn golden_refine(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..120 {
        let m1 = a + 0.381_966 * (b - a);
        let m2 = a + 0.618_034 * (b - a);
        if f(m1) < f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    0.5 * (a + b)
}

/// In-gap Jost roots along one momentum slice, located as minima of the
/// scale-free objective (the section-vanishing half-lines produce no
/// spurious minima there).
fn slice_roots(bd: &BoundaryData, kx: f64, cfg: &TraceConfig, p: &PhysParams) -> Vec<f64> {
    let rim = band_rim(kx, p);
    let grid = omega_grid(rim, cfg);
    if grid.len() < 3 {
        return vec![];
    }
    let f = |w: f64| -> f64 {
        jost_root_objective(bd, kx, w, p).unwrap_or(f64::INFINITY)
    };
    let values: Vec<f64> = grid.iter().map(|&w| f(w)).collect();
    let mut roots = Vec::new();
    for j in 1..grid.len() - 1 {
        // Genuine roots can sit in dips so narrow that the nearest sample is
        // far up the slope; refine every local minimum of consequence and
        // let the acceptance threshold reject the shallow ones.
        if values[j] <= values[j - 1] && values[j] <= values[j + 1] && values[j] < 0.5 {
            let w = golden_refine(&f, grid[j - 1], grid[j + 1]);
            if f(w) <= cfg.accept {
                roots.push(w);
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-7 * rim);
    roots
}

fn local_step(rim: f64, n: usize, omega: f64) -> f64 {
    let ratio = (omega / rim).clamp(-1.0, 1.0);
    let floor = rim * 20.0 / (n as f64 * n as f64);
    (PI * rim * (1.0 - ratio * ratio).sqrt() / n as f64).max(floor)
}

struct OpenBranch {
    points: Vec<BranchPoint>,
    left: EndBehavior,
}

/// Trace all edge branches of the boundary condition across the scan window
/// by locating Jost-function roots slice by slice and linking them by
/// nearest continuation (with a slope-aware jump cap; lost links fragment
/// the branch, which is harmless for endpoint counting).
pub fn trace_branches(
    bd: &BoundaryData,
    cfg: &TraceConfig,
    p: &PhysParams,
) -> Result<EdgeBranchSet, OracleError> {
    if cfg.kx_count < 2 || cfg.kx_min >= cfg.kx_max {
        return Ok(EdgeBranchSet::default());
    }
    for kx in rank_failures(bd)? {
        if kx >= cfg.kx_min && kx <= cfg.kx_max {
            return Err(OracleError::RankFailureInWindow { kx });
        }
    }
    let kx_grid: Vec<f64> = (0..cfg.kx_count)
        .map(|i| cfg.kx_min + (cfg.kx_max - cfg.kx_min) * i as f64 / (cfg.kx_count - 1) as f64)
        .collect();
    let d_kx = (cfg.kx_max - cfg.kx_min) / (cfg.kx_count - 1) as f64;
    let slices: Vec<Vec<f64>> = kx_grid
        .par_iter()
        .map(|&kx| slice_roots(bd, kx, cfg, p))
        .collect();
    let mut warnings = Vec::new();
    for (&kx, roots) in kx_grid.iter().zip(slices.iter()) {
        let rim = band_rim(kx, p);
        for pair in roots.windows(2) {
            if pair[1] - pair[0] < 2.0 * local_step(rim, cfg.omega_count, pair[0]) {
                warnings.push(format!(
                    "branches closer than the grid step at kx = {kx}: omega = {} and {}",
                    pair[0], pair[1]
                ));
            }
        }
    }

    let mut open: Vec<OpenBranch> = Vec::new();
    let mut closed: Vec<Branch> = Vec::new();
    for (slice_idx, (&kx, roots)) in kx_grid.iter().zip(slices.iter()).enumerate() {
        let first_slice = slice_idx == 0;
        let rim = band_rim(kx, p);
        let mut taken = vec![false; roots.len()];
        let mut survivors: Vec<OpenBranch> = Vec::new();
        for mut branch in open.drain(..) {
            let last = branch.points[branch.points.len() - 1];
            let (predicted, cap) = if branch.points.len() >= 2 {
                let prev = branch.points[branch.points.len() - 2];
                let slope = (last.omega - prev.omega) / (last.kx - prev.kx);
                (
                    last.omega + slope * (kx - last.kx),
                    5.0 * local_step(rim, cfg.omega_count, last.omega)
                        + 0.75 * slope.abs() * d_kx
                        + 1e-9 * rim,
                )
            } else {
                // A newborn branch has no slope estimate yet; admit any
                // dispersion up to the parabolic regime.
                (
                    last.omega,
                    d_kx * (3.0 + 6.0 * p.nu() * kx.abs()) + 5.0 * local_step(rim, cfg.omega_count, last.omega),
                )
            };
            let mut best: Option<(usize, f64)> = None;
            for (j, &w) in roots.iter().enumerate() {
                if taken[j] {
                    continue;
                }
                let dist = (w - predicted).abs();
                if dist <= cap && best.is_none_or(|(_, d)| dist < d) {
                    best = Some((j, dist));
                }
            }
            match best {
                Some((j, _)) => {
                    taken[j] = true;
                    branch.points.push(BranchPoint {
                        kx,
                        omega: roots[j],
                    });
                    survivors.push(branch);
                }
                None => closed.push(Branch {
                    points: branch.points,
                    left: branch.left,
                    right: EndBehavior::Unclassified,
                }),
            }
        }
        for (j, &w) in roots.iter().enumerate() {
            if !taken[j] {
                let _ = first_slice;
                survivors.push(OpenBranch {
                    points: vec![BranchPoint { kx, omega: w }],
                    left: EndBehavior::Unclassified,
                });
            }
        }
        open = survivors;
    }
    for branch in open.drain(..) {
        closed.push(Branch {
            points: branch.points,
            left: branch.left,
            right: EndBehavior::Unclassified,
        });
    }
    // Endpoint classification: window-edge tails are fitted; interior ends
    // are extrapolated one slice beyond the branch and declared mergers if
    // the cast crosses a rim (steep branches sit several grid steps inside
    // the gap when last seen).
    let nu = p.nu();
    let classify_end = |points: &[BranchPoint], left: bool| -> EndBehavior {
        let (end, neighbor) = if left {
            (points[0], points.get(1).copied())
        } else {
            let n = points.len();
            (points[n - 1], points.get(n.wrapping_sub(2)).copied())
        };
        let slope = neighbor
            .map(|nb| (end.omega - nb.omega) / (end.kx - nb.kx))
            .unwrap_or(0.0);
        let kx_cast = if left { end.kx - d_kx } else { end.kx + d_kx };
        let cast = end.omega + slope * (kx_cast - end.kx);
        let rim_here = band_rim(end.kx, p);
        let rim_cast = band_rim(kx_cast, p);
        let margin =
            (0.25 * slope.abs() * d_kx).max(1e-3 * rim_here) + 40.0 * local_step(rim_here, cfg.omega_count, end.omega);
        if rim_here - end.omega < margin || cast >= rim_cast - 0.25 * slope.abs() * d_kx {
            EndBehavior::MergesWithUpperBand { kx: end.kx }
        } else if end.omega + rim_here < margin || cast <= -rim_cast + 0.25 * slope.abs() * d_kx {
            EndBehavior::MergesWithLowerBand { kx: end.kx }
        } else {
            EndBehavior::Fragmented
        }
    };
    let mut branches = Vec::with_capacity(closed.len());
    for mut b in closed {
        let first = b.points[0];
        let last = b.points[b.points.len() - 1];
        if b.left == EndBehavior::Unclassified {
            b.left = if first.kx <= kx_grid[0] + 0.5 * d_kx {
                classify_tail(&b.points, nu, true)
            } else {
                classify_end(&b.points, true)
            };
        }
        if b.right == EndBehavior::Unclassified {
            b.right = if last.kx >= kx_grid[kx_grid.len() - 1] - 0.5 * d_kx {
                classify_tail(&b.points, nu, false)
            } else {
                classify_end(&b.points, false)
            };
        }
        branches.push(b);
    }
    Ok(EdgeBranchSet { branches, warnings })
}

/// Least squares of branch samples against a basis pair; returns the two
/// coefficients and the goodness of fit.
fn fit_window(window: &[BranchPoint], basis: &dyn Fn(f64) -> (f64, f64)) -> (f64, f64, f64) {
    let (mut s00, mut s01, mut s11, mut sy0, mut sy1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut sy = 0.0;
    let mut syy = 0.0;
    for pt in window {
        let (b0, b1) = basis(pt.kx);
        s00 += b0 * b0;
        s01 += b0 * b1;
        s11 += b1 * b1;
        sy0 += pt.omega * b0;
        sy1 += pt.omega * b1;
        sy += pt.omega;
        syy += pt.omega * pt.omega;
    }
    let det = s00 * s11 - s01 * s01;
    if det.abs() < 1e-14 * (s00 * s11).max(1.0) {
        return (0.0, 0.0, -1.0);
    }
    let c0 = (sy0 * s11 - sy1 * s01) / det;
    let c1 = (s00 * sy1 - s01 * sy0) / det;
    let mean = sy / window.len() as f64;
    let ss_tot = syy - window.len() as f64 * mean * mean;
    let mut ss_res = 0.0;
    for pt in window {
        let (b0, b1) = basis(pt.kx);
        let r = pt.omega - c0 * b0 - c1 * b1;
        ss_res += r * r;
    }
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (c0, c1, r2)
}

/// Classify a window-edge tail as parabolic (improper merger) or flat
/// (escape) from the outer fifth of the branch.
///
/// A converging tail extrapolates to the same asymptote from nested outer
/// windows; a diverging tail keeps drifting as the window shrinks toward
/// the edge, long before the quadratic regime itself is reached.
fn classify_tail(points: &[BranchPoint], nu: f64, left: bool) -> EndBehavior {
    let n = points.len();
    let m = (n / 5).max(8).min(n);
    let window: Vec<BranchPoint> = if left {
        points[..m].to_vec()
    } else {
        points[n - m..].to_vec()
    };
    if window.len() < 8 {
        return EndBehavior::Unclassified;
    }
    let half: Vec<BranchPoint> = if left {
        window[..window.len() / 2].to_vec()
    } else {
        window[window.len() / 2..].to_vec()
    };
    let flat_basis = |kx: f64| (1.0, 1.0 / kx);
    let (h_full, _, r2_full) = fit_window(&window, &flat_basis);
    let (h_half, _, _) = fit_window(&half, &flat_basis);
    let scale = 1.0 + h_full.abs().max(h_half.abs());
    let consistent = (h_full - h_half).abs() <= 0.05 * scale;
    if consistent && r2_full > 0.9 {
        // The nested extrapolation from the outermost samples is the more
        // asymptotic estimate.
        return EndBehavior::Flat { height: h_half };
    }
    let (c_par, _d, r2_par) = fit_window(&window, &|kx| (kx * kx, 1.0));
    if r2_par > 0.99 && c_par >= 0.5 * nu && c_par <= 2.0 * nu {
        return EndBehavior::Parabolic { coeff: c_par };
    }
    // Pre-asymptotic divergence: |omega| grows monotonically toward the
    // window edge while the flat extrapolation keeps drifting.
    let toward_edge: Vec<f64> = if left {
        window.iter().rev().map(|pt| pt.omega).collect()
    } else {
        window.iter().map(|pt| pt.omega).collect()
    };
    let growing = toward_edge
        .windows(2)
        .all(|w| w[1].abs() >= w[0].abs() - 1e-9 * scale);
    let moved = (toward_edge[toward_edge.len() - 1].abs() - toward_edge[0].abs()).abs()
        > 0.02 * scale;
    if !consistent && growing && moved {
        return EndBehavior::Parabolic { coeff: c_par };
    }
    if consistent && r2_full > 0.5 {
        return EndBehavior::Flat { height: h_half };
    }
    EndBehavior::Unclassified
}

/// Signed merger counts of a traced branch set, with the orientation of the
/// compactified spectrum: a branch whose left end sits on the upper rim
/// emerges (+1 to the proper count), one ending there disappears (-1);
/// parabolic tails diverging upward count +1 at the left window edge and -1
/// at the right (downward divergence merges with the mirror band instead);
/// flat tails of positive height likewise for the escape count.
pub fn count_mergers(ebs: &EdgeBranchSet) -> (i32, i32, i32) {
    let (mut p, mut i, mut e) = (0, 0, 0);
    for b in &ebs.branches {
        let left_omega = b.points[0].omega;
        let right_omega = b.points[b.points.len() - 1].omega;
        match b.left {
            EndBehavior::MergesWithUpperBand { .. } => p += 1,
            EndBehavior::Parabolic { .. } if left_omega > 0.0 => i += 1,
            EndBehavior::Flat { height } if height > 0.0 => e += 1,
            _ => {}
        }
        match b.right {
            EndBehavior::MergesWithUpperBand { .. } => p -= 1,
            EndBehavior::Parabolic { .. } if right_omega > 0.0 => i -= 1,
            EndBehavior::Flat { height } if height > 0.0 => e -= 1,
            _ => {}
        }
    }
    (p, i, e)
}

/// Continuous phase increment of the scattering amplitude hovering just
/// above the band rim between two momenta, in turns. Tends to the signed
/// number of mergers in the interval as the hover height goes to zero.
pub fn levinson_jump(
    bd: &BoundaryData,
    kx1: f64,
    kx2: f64,
    eps: f64,
    n: usize,
    p: &PhysParams,
) -> Result<f64, OracleError> {
    let mut count = n.max(64);
    for _ in 0..6 {
        let samples: Result<Vec<Complex64>, OracleError> = (0..=count)
            .map(|i| {
                let kx = kx1 + (kx2 - kx1) * i as f64 / count as f64;
                levinson_amplitude(bd, kx, eps, p).map_err(OracleError::from)
            })
            .collect();
        match open_arg_increment(&samples?) {
            Ok(w) => return Ok(w),
            Err(WindingError::UnderResolved { .. }) => {
                count *= 4;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(OracleError::ContourExhausted)
}

/// [`levinson_jump`] at a shrinking sequence of hover heights, returning the
/// finest value together with the spread across the sequence (a consistency
/// measure for the limit statement).
pub fn levinson_sequence(
    bd: &BoundaryData,
    kx1: f64,
    kx2: f64,
    n: usize,
    p: &PhysParams,
) -> Result<(f64, f64), OracleError> {
    let values = [
        levinson_jump(bd, kx1, kx2, 0.1, n, p)?,
        levinson_jump(bd, kx1, kx2, 0.05, n, p)?,
        levinson_jump(bd, kx1, kx2, 0.025, n, p)?,
    ];
    let spread = values
        .iter()
        .map(|v| (v - values[2]).abs())
        .fold(0.0, f64::max);
    Ok((values[2], spread))
}

/// Numerical winding of a determinant quadratic about the origin: the curve
/// is sampled on a wide momentum window with hyperbolic-sine spacing (dense
/// near the turning region) and closed through its dominant large-momentum
/// arc. Returns the nearest exact half-integer, refusing when the sampled
/// value strays from the lattice by more than 0.05.
pub fn numeric_parabola_winding(
    pc: &crate::indices::ParabolaCurve,
    k_max: f64,
) -> Result<crate::algebra::HalfInt, OracleError> {
    use crate::indices::{curve_kind, CurveKind};
    let mut n = 1 << 12;
    loop {
        let u_max = (k_max.max(10.0)).asinh();
        let samples: Vec<Complex64> = (0..=n)
            .map(|i| {
                let u = -u_max + 2.0 * u_max * i as f64 / n as f64;
                pc.eval(u.sinh())
            })
            .collect();
        let open_kinds = matches!(curve_kind(pc), CurveKind::Point | CurveKind::Line);
        let result = if open_kinds {
            open_arg_increment(&samples)
        } else {
            // Quadratic dominance makes the two far ends nearly coincide;
            // close the polyline directly.
            let mut closed = samples.clone();
            closed.push(closed[0]);
            numeric_winding(&closed)
        };
        match result {
            Ok(w) => {
                let (half, err) = crate::algebra::HalfInt::round_from(w);
                if err > 0.05 {
                    return Err(OracleError::ContourExhausted);
                }
                return Ok(half);
            }
            Err(WindingError::UnderResolved { .. }) if n < (1 << 22) => {
                n *= 4;
                continue;
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Brute-force signed arc intersection counts of an asymptotic decay-slope
/// curve: scans the two admissible quarter arcs for sign changes of the
/// curve's bilinear form. Agrees with the exact solver away from transition
/// surfaces.
pub fn intersect_sample(curve: &AsymCurve, n: usize) -> (u32, u32) {
    let (alpha, beta, gamma, delta) = match *curve {
        AsymCurve::Empty => return (0, 0),
        AsymCurve::Line { m, q } => (-q, -m, 1.0, 0.0),
        AsymCurve::Hyperbola { a, b, c, d } => (-a, -b, c, d),
    };
    let form = |theta: f64| -> f64 {
        let x = std::f64::consts::SQRT_2 * theta.cos();
        let y = std::f64::consts::SQRT_2 * theta.sin();
        alpha + beta * x + gamma * y + delta * x * y
    };
    let count = |lo: f64, hi: f64| -> u32 {
        let mut crossings = 0;
        let mut prev = form(lo);
        for i in 1..=n {
            let th = lo + (hi - lo) * i as f64 / n as f64;
            let val = form(th);
            if prev != 0.0 && val != 0.0 && prev.signum() != val.signum() {
                crossings += 1;
            }
            if val != 0.0 {
                prev = val;
            }
        }
        crossings
    };
    (
        count(PI / 2.0, 3.0 * PI / 4.0),
        count(-PI / 2.0, -PI / 4.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, cr};
    use crate::boundary::{build, FamilyParams};
    use crate::indices::{
        asymptotic_curve, index_b, index_e, index_i, index_p, nd_params_from_reduced,
        nn_params_from_reduced,
    };

    fn pp() -> PhysParams {
        PhysParams::new(1.0, 0.2).unwrap()
    }

    #[test]
    fn numeric_b_dirichlet_vanishes() {
        let bd = build(&FamilyParams::dirichlet()).unwrap();
        let w = numeric_b(&bd, 100.0, 512).unwrap();
        assert!(w.abs() < 1e-9, "w = {w}");
    }

    #[test]
    fn numeric_b_nd_example() {
        // alpha = 0, lambda = -0.1: q = +1, so the boundary winding is +1.
        let bd = build(&FamilyParams::nd(crate::algebra::ZERO, -0.1, 0.0)).unwrap();
        let w = numeric_b(&bd, 1.0e3, 1 << 14).unwrap();
        assert!((w - 1.0).abs() < 0.02, "w = {w}");
        assert_eq!(index_b(&bd).unwrap(), Some(1));
    }

    #[test]
    fn numeric_b_nn_example() {
        let p = pp();
        let bd = build(&nn_params_from_reduced(c(0.0, 0.5), 1.0, 0.0)).unwrap();
        let w = numeric_b(&bd, 1.0e3, 1 << 14).unwrap();
        assert!((w + 2.0).abs() < 0.02, "w = {w}");
        assert_eq!(index_b(&bd).unwrap(), Some(-2));
        let _ = p;
    }

    #[test]
    fn w_infty_per_family() {
        let p = pp();
        // Dirichlet: expansion is constant, no winding, P = 2.
        let dd = build(&FamilyParams::dirichlet()).unwrap();
        let w = numeric_w_infty(&dd, 1e-3, 512, &p).unwrap();
        assert!(w.abs() < 0.05, "DD w = {w}");

        // (m, q) = (-1, 2): P = 3 so the winding is -1.
        let nd = build(&nd_params_from_reduced(-1.0, 2.0, &p)).unwrap();
        let w = numeric_w_infty(&nd, 1e-3, 2048, &p).unwrap();
        assert!((w + 1.0).abs() < 0.05, "ND w = {w}");
        assert_eq!(index_p(&nd, &p).unwrap(), 3);

        // mu = 0.5i, Sigma = 1, Delta = 0: P = 0 so the winding is +2.
        let nn = build(&nn_params_from_reduced(c(0.0, 0.5), 1.0, 0.0)).unwrap();
        let w = numeric_w_infty(&nn, 1e-3, 2048, &p).unwrap();
        assert!((w - 2.0).abs() < 0.05, "NN w = {w}");
        assert_eq!(index_p(&nn, &p).unwrap(), 0);
    }

    #[test]
    fn dirichlet_trace_matches_chart() {
        let p = pp();
        let bd = build(&FamilyParams::dirichlet()).unwrap();
        let cfg = TraceConfig::default();
        let ebs = trace_branches(&bd, &cfg, &p).unwrap();
        let (np, ni, ne) = count_mergers(&ebs);
        assert_eq!((np, ni, ne), (2, 0, -1), "branches: {:#?}", summaries(&ebs));
        // Flat tails at +-1/(2 nu) within one percent.
        let mut heights: Vec<f64> = ebs
            .branches
            .iter()
            .flat_map(|b| [b.left, b.right])
            .filter_map(|e| match e {
                EndBehavior::Flat { height } => Some(height),
                _ => None,
            })
            .collect();
        heights.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(heights.len(), 2, "heights: {heights:?}");
        assert!((heights[0] + 2.5).abs() < 0.025, "h- = {}", heights[0]);
        assert!((heights[1] - 2.5).abs() < 0.025, "h+ = {}", heights[1]);
    }

    fn summaries(ebs: &EdgeBranchSet) -> Vec<String> {
        ebs.branches
            .iter()
            .map(|b| {
                format!(
                    "{} pts [{:.2},{:.2}] {}",
                    b.points.len(),
                    b.points[0].kx,
                    b.points[b.points.len() - 1].kx,
                    b.annotation()
                )
            })
            .collect()
    }

    #[test]
    fn nd_trace_matches_chart() {
        let p = pp();
        let bd = build(&nd_params_from_reduced(-1.0, 1.0, &p)).unwrap();
        let ebs = trace_branches(&bd, &TraceConfig::default(), &p).unwrap();
        let (np, ni, ne) = count_mergers(&ebs);
        assert_eq!(
            (np, ni, ne),
            (
                index_p(&bd, &p).unwrap(),
                index_i(&bd, &p).unwrap(),
                index_e(&bd, &p).unwrap()
            ),
            "branches: {:#?}",
            summaries(&ebs)
        );
    }

    #[test]
    fn branch_free_window_yields_empty_set() {
        let p = pp();
        let bd = build(&FamilyParams::dirichlet()).unwrap();
        // The positive part of the gap at far negative momenta holds no
        // Dirichlet branches.
        let cfg = TraceConfig {
            kx_min: -60.0,
            kx_max: -50.0,
            kx_count: 41,
            omega_count: 400,
            omega_min: 0.1,
            ..TraceConfig::default()
        };
        let ebs = trace_branches(&bd, &cfg, &p).unwrap();
        assert!(ebs.branches.is_empty(), "{:#?}", summaries(&ebs));
        let (np, ni, ne) = count_mergers(&ebs);
        assert_eq!((np, ni, ne), (0, 0, 0));
    }

    #[test]
    fn levinson_counts_dirichlet_mergers() {
        let p = pp();
        let bd = build(&FamilyParams::dirichlet()).unwrap();
        // Both Dirichlet branches emerge at negative momenta; hover over a
        // window containing them and over a merger-free window.
        let (jump, spread) = levinson_sequence(&bd, -8.0, 8.0, 512, &p).unwrap();
        assert!(spread < 0.1, "spread {spread}");
        assert!((jump - 2.0).abs() < 0.1, "jump {jump}");
        let quiet = levinson_jump(&bd, 10.0, 20.0, 0.05, 256, &p).unwrap();
        assert!(quiet.abs() < 0.05, "quiet {quiet}");
    }

    #[test]
    fn parabola_winding_oracle_matches_calculus() {
        use crate::algebra::HalfInt;
        use crate::indices::{winding_n, ParabolaCurve};
        let cases = [
            ParabolaCurve::new(crate::algebra::ZERO, c(0.0, 1.0), crate::algebra::ONE),
            ParabolaCurve::new(crate::algebra::ONE, c(0.0, 1.0), crate::algebra::ONE),
            ParabolaCurve::new(crate::algebra::ONE, c(0.0, 1.0), cr(-1.0)),
            ParabolaCurve::new(c(0.3, -0.7), c(1.1, 0.4), c(-0.2, 0.9)),
        ];
        for pc in cases {
            let analytic = winding_n(&pc).unwrap();
            let numeric = numeric_parabola_winding(&pc, 1.0e4).unwrap();
            assert_eq!(analytic, numeric, "curve {pc:?}");
        }
        let _ = HalfInt::from_int(0);
    }

    #[test]
    fn intersect_sample_matches_exact_solver() {
        use crate::indices::arc_intersections;
        let p = pp();
        let cases = [
            AsymCurve::Line { m: -1.0, q: 1.0 },
            AsymCurve::Line { m: -2.0, q: -2.0 },
            AsymCurve::Empty,
            asymptotic_curve(
                &build(&nn_params_from_reduced(c(0.0, 0.5), 1.0, 1.0)).unwrap(),
                &p,
            )
            .unwrap(),
        ];
        for curve in cases {
            let exact = arc_intersections(&curve).unwrap();
            let sampled = intersect_sample(&curve, 10_000);
            assert_eq!(exact, sampled, "curve {curve:?}");
        }
    }
}
