//! Closed-form computation of the index vector `(P, I, E, B)`, the
//! bulk-edge-correspondence verdict, transition-surface geometry, and the
//! winding calculus for the boundary determinant parabolas.
//!
//! `P` counts proper mergers of edge branches with the upper band, `I`
//! improper (parabolic) mergers at infinite momentum, `E` escapes along
//! positive horizontal asymptotes, and `B` is the winding of the von Neumann
//! unitary determinant. Bulk-edge correspondence holds iff `M = P + I`
//! equals the bulk index `+2`.

use crate::algebra::{cr, poly_roots, wedge, HalfInt, ONE, ZERO};
use crate::boundary::{
    classify, nd_orbit, nn_orbit, rank_failures, swap_unchecked, BoundaryData, BoundaryError,
    Family, FamilyParams, NdOrbit, NnOrbit, CLASSIFY_TOL,
};
use crate::bulk::PhysParams;
use num_complex::Complex64;
use thiserror::Error;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Relative width within which a point counts as sitting on a transition
/// surface; indices are reported with an on-boundary flag there instead of
/// silently picking a side.
pub const SURFACE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum IndexError {
    #[error("parameter point lies on the transition surface {surface}")]
    OnSurface { surface: String },
    #[error("curve passes through the origin; winding undefined")]
    OriginHit,
    #[error("region lookup hit a combination of inequalities that should be empty")]
    EmptyRegion,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

/// Reduced coordinates of an ND orbit: every index depends on the orbit
/// through the slope `m <= 0` and intercept `q` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedND {
    pub m: f64,
    pub q: f64,
}

/// Reduced coordinates and transition thresholds of an NN orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedNN {
    pub sigma: f64,
    pub delta2: f64,
    pub mu_r: f64,
    pub mu_i: f64,
    /// Proper-merger thresholds.
    pub m_plus: f64,
    pub m_minus: f64,
    /// Improper-merger thresholds.
    pub i_plus: f64,
    pub i_minus: f64,
    /// Escape threshold.
    pub e_cal: f64,
    /// Boundary-winding threshold.
    pub b_cal: f64,
    /// Odd viscosity the thresholds were computed with (the regional table
    /// selector compares `mu_R + Sigma` against it).
    pub nu: f64,
}

/// Map ND orbit parameters to the reduced chart coordinates
/// `m = -|1+i a|^2 / |1-i a|^2`, `q = -2 lambda / (nu |1-i a|^2)`.
/// The point is particle-hole symmetric iff `m = -1`.
pub fn reduce_nd(orbit: &NdOrbit, p: &PhysParams) -> ReducedND {
    let plus = (ONE + crate::algebra::I * orbit.alpha).norm_sqr();
    let minus = (ONE - crate::algebra::I * orbit.alpha).norm_sqr();
    ReducedND {
        m: -plus / minus,
        q: -2.0 * orbit.lambda / (p.nu() * minus),
    }
}

/// Map NN orbit parameters to the reduced coordinates and thresholds.
pub fn reduce_nn(orbit: &NnOrbit, p: &PhysParams) -> ReducedNN {
    let nu = p.nu();
    let sigma = 0.5 * (orbit.l1 + orbit.l2);
    let delta = 0.5 * (orbit.l1 - orbit.l2);
    let mu_sq = orbit.mu.norm_sqr();
    let mu_r = orbit.mu.re;
    let base = sigma * sigma - mu_sq;
    ReducedNN {
        sigma,
        delta2: delta * delta,
        mu_r,
        mu_i: orbit.mu.im,
        m_plus: base + nu * SQRT2 * (mu_r + sigma),
        m_minus: base - nu * SQRT2 * (mu_r + sigma),
        i_plus: base + 2.0 * nu * mu_r - nu * nu,
        i_minus: base - 2.0 * nu * mu_r - nu * nu,
        e_cal: (sigma - nu) * (sigma - nu) - mu_sq,
        b_cal: base,
        nu,
    }
}

/// Canonical ND family parameters realizing given reduced coordinates, on
/// the imaginary-mixing slice `alpha = i a`, `a in (-1, 1]` (the slice that
/// spans all of `m in (-inf, 0]`; purely real mixing is pinned to `m = -1`).
pub fn nd_params_from_reduced(m: f64, q: f64, p: &PhysParams) -> FamilyParams {
    let s = (-m).max(0.0).sqrt();
    let a = (1.0 - s) / (1.0 + s);
    let lambda = -q * p.nu() * (1.0 + a) * (1.0 + a) / 2.0;
    FamilyParams::nd(crate::algebra::c(0.0, a), lambda, 0.0)
}

/// Canonical NN family parameters with given `mu`, mean coupling and squared
/// half-difference (`mu' = 0`, primed couplings zero).
pub fn nn_params_from_reduced(mu: Complex64, sigma: f64, delta2: f64) -> FamilyParams {
    let delta = delta2.max(0.0).sqrt();
    FamilyParams::nn(mu, ZERO, sigma + delta, sigma - delta, 0.0, 0.0)
}

fn on_surface(value: f64, threshold: f64, label: &str) -> Result<(), IndexError> {
    let scale = 1.0_f64.max(value.abs()).max(threshold.abs());
    if (value - threshold).abs() <= SURFACE_TOL * scale {
        Err(IndexError::OnSurface {
            surface: label.to_string(),
        })
    } else {
        Ok(())
    }
}

/// Number of proper mergers in reduced ND coordinates.
pub fn nd_index_p(red: &ReducedND) -> Result<i32, IndexError> {
    on_surface(red.q, SQRT2, "q = +sqrt(2)")?;
    on_surface(red.q, -SQRT2, "q = -sqrt(2)")?;
    Ok(if red.q < -SQRT2 {
        1
    } else if red.q < SQRT2 {
        2
    } else {
        3
    })
}

/// Number of improper mergers in reduced ND coordinates.
pub fn nd_index_i(red: &ReducedND) -> Result<i32, IndexError> {
    let (m, q) = (red.m, red.q);
    on_surface(q, SQRT2, "q = +sqrt(2)")?;
    on_surface(q, -SQRT2, "q = -sqrt(2)")?;
    on_surface(q, m + 1.0, "q = m+1")?;
    on_surface(q, -(m + 1.0), "q = -(m+1)")?;
    let abs_m1 = (m + 1.0).abs();
    let value = if (SQRT2 < q && q < -(m + 1.0)) || (-SQRT2 < q && q < -abs_m1) {
        -1
    } else if (m + 1.0 < q && q < -SQRT2) || (abs_m1 < q && q < SQRT2) {
        1
    } else if (q.abs() < abs_m1 && q.abs() < SQRT2) || (q.abs() > abs_m1 && q.abs() > SQRT2) {
        0
    } else {
        return Err(IndexError::EmptyRegion);
    };
    Ok(value)
}

/// Number of escapes in reduced ND coordinates (closed regional form).
pub fn nd_index_e(red: &ReducedND) -> Result<i32, IndexError> {
    let (m, q) = (red.m, red.q);
    on_surface(q, m - 1.0, "q = m-1")?;
    on_surface(q, m + 1.0, "q = m+1")?;
    on_surface(q, -(m + 1.0), "q = -(m+1)")?;
    let abs_m1 = (m + 1.0).abs();
    Ok(if q < m - 1.0 || q > abs_m1 {
        -1
    } else if -abs_m1 < q && q < abs_m1 {
        0
    } else {
        1
    })
}

fn nn_row(red: &ReducedNN) -> Result<usize, IndexError> {
    on_surface(red.delta2, red.i_plus, "Delta^2 = I+")?;
    on_surface(red.delta2, red.i_minus, "Delta^2 = I-")?;
    let (lo, hi) = if red.i_minus <= red.i_plus {
        (red.i_minus, red.i_plus)
    } else {
        (red.i_plus, red.i_minus)
    };
    Ok(if red.delta2 < lo {
        0
    } else if red.delta2 > hi {
        3
    } else if red.i_minus <= red.i_plus {
        1
    } else {
        2
    })
}

fn nn_col(red: &ReducedNN) -> Result<usize, IndexError> {
    on_surface(red.delta2, red.m_plus, "Delta^2 = M+")?;
    on_surface(red.delta2, red.m_minus, "Delta^2 = M-")?;
    let (lo, hi) = if red.m_minus <= red.m_plus {
        (red.m_minus, red.m_plus)
    } else {
        (red.m_plus, red.m_minus)
    };
    Ok(if red.delta2 < lo {
        0
    } else if red.delta2 > hi {
        2
    } else {
        1
    })
}

/// Number of proper mergers in reduced NN coordinates.
pub fn nn_index_p(red: &ReducedNN) -> Result<i32, IndexError> {
    let col = nn_col(red)?;
    let s = red.mu_r + red.sigma;
    Ok(match col {
        2 => 2,
        1 => {
            if s > 0.0 {
                1
            } else {
                3
            }
        }
        _ => {
            // Below both thresholds the two remaining cases are separated by
            // the ordering of the thresholds themselves.
            on_surface(s, 0.0, "M+ = M-")?;
            if s > 0.0 {
                0
            } else {
                4
            }
        }
    })
}

const EMPTY: i32 = i32::MIN;

/// Number of improper mergers in reduced NN coordinates: regional lookup of
/// the signed arc intersections of the asymptotic hyperbola.
pub fn nn_index_i(red: &ReducedNN) -> Result<i32, IndexError> {
    let row = nn_row(red)?;
    let col = nn_col(red)?;
    let s = red.mu_r + red.sigma;
    let table: &[[i32; 3]; 4] = if s < -red.nu {
        &[
            [0, 1, EMPTY],
            [-1, 0, 1],
            [EMPTY, 0, EMPTY],
            [EMPTY, -1, 0],
        ]
    } else if s < 0.0 {
        &[
            [EMPTY, EMPTY, EMPTY],
            [-1, 0, 1],
            [EMPTY, -2, -1],
            [EMPTY, -1, 0],
        ]
    } else if s < red.nu {
        &[
            [EMPTY, EMPTY, EMPTY],
            [EMPTY, 2, 1],
            [1, 0, -1],
            [EMPTY, 1, 0],
        ]
    } else {
        &[
            [0, -1, EMPTY],
            [EMPTY, 0, EMPTY],
            [1, 0, -1],
            [EMPTY, 1, 0],
        ]
    };
    let value = table[row][col];
    if value == EMPTY {
        return Err(IndexError::EmptyRegion);
    }
    Ok(value)
}

/// Asymptotic curve of parabolic edge states in the plane of decay slopes:
/// empty for DD, a line for ND, a (possibly degenerate) hyperbola for NN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymCurve {
    Empty,
    /// `c_minus = m c_plus + q`.
    Line { m: f64, q: f64 },
    /// `(c + d c_plus) c_minus = a + b c_plus`.
    Hyperbola { a: f64, b: f64, c: f64, d: f64 },
}

/// Height of a one-sided horizontal asymptote of the edge spectrum, or the
/// exceptional behaviors replacing it on measure-zero parameter sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Asymptote {
    Finite(f64),
    /// Denominator vanishes: the branch leaves every bounded strip.
    DivergesToInfinity,
    /// Numerator vanishes: the branch collapses onto the flat band.
    CollapsesToZero,
}

impl Asymptote {
    pub fn is_exceptional(&self) -> bool {
        !matches!(self, Asymptote::Finite(_))
    }
}

/// Asymptote at `kx -> +inf` (`plus`) and `kx -> -inf` (`minus`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeAsymptotes {
    pub plus: Asymptote,
    pub minus: Asymptote,
}

enum Reduced {
    Dd,
    Nd(ReducedND, NdOrbit),
    Nn(ReducedNN, NnOrbit),
}

fn reduce(bd: &BoundaryData, p: &PhysParams) -> Result<Reduced, IndexError> {
    match classify(bd, CLASSIFY_TOL) {
        Family::DD => Ok(Reduced::Dd),
        Family::ND => {
            let orbit = nd_orbit(bd)?;
            Ok(Reduced::Nd(reduce_nd(&orbit, p), orbit))
        }
        Family::DN => {
            let swapped = swap_unchecked(bd);
            let orbit = nd_orbit(&swapped)?;
            Ok(Reduced::Nd(reduce_nd(&orbit, p), orbit))
        }
        Family::NN => {
            let orbit = nn_orbit(bd)?;
            Ok(Reduced::Nn(reduce_nn(&orbit, p), orbit))
        }
    }
}

/// Number of proper mergers of the boundary condition.
pub fn index_p(bd: &BoundaryData, p: &PhysParams) -> Result<i32, IndexError> {
    match reduce(bd, p)? {
        Reduced::Dd => Ok(2),
        Reduced::Nd(red, _) => nd_index_p(&red),
        Reduced::Nn(red, _) => nn_index_p(&red),
    }
}

/// Number of improper mergers of the boundary condition.
pub fn index_i(bd: &BoundaryData, p: &PhysParams) -> Result<i32, IndexError> {
    match reduce(bd, p)? {
        Reduced::Dd => Ok(0),
        Reduced::Nd(red, _) => nd_index_i(&red),
        Reduced::Nn(red, _) => nn_index_i(&red),
    }
}

/// Asymptotic decay-slope curve of the boundary condition.
pub fn asymptotic_curve(bd: &BoundaryData, p: &PhysParams) -> Result<AsymCurve, IndexError> {
    match reduce(bd, p)? {
        Reduced::Dd => Ok(AsymCurve::Empty),
        Reduced::Nd(red, _) => Ok(AsymCurve::Line { m: red.m, q: red.q }),
        Reduced::Nn(_, orbit) => {
            let nu = p.nu();
            let mu_sq = orbit.mu.norm_sqr();
            Ok(AsymCurve::Hyperbola {
                a: 2.0 * (mu_sq - orbit.l1 * orbit.l2),
                b: nu * (2.0 * orbit.mu.re - orbit.l1 - orbit.l2),
                c: nu * (2.0 * orbit.mu.re + orbit.l1 + orbit.l2),
                d: 2.0 * nu * nu,
            })
        }
    }
}

/// Signed arc intersections of the asymptotic curve with the two admissible
/// quarter-circle arcs of decay slopes: `n_up` intersections belong to
/// parabolic branches at `kx -> -inf`, `n_down` to `kx -> +inf`.
///
/// Solved exactly: the curve restricted to the circle becomes a quartic in
/// the half-angle tangent. An intersection within tolerance of an arc
/// endpoint signals a transition surface.
pub fn arc_intersections(curve: &AsymCurve) -> Result<(u32, u32), IndexError> {
    // Bilinear form alpha + beta x + gamma y + delta x y vanishing on the
    // curve, with (x, y) the decay-slope coordinates.
    let (alpha, beta, gamma, delta) = match *curve {
        AsymCurve::Empty => return Ok((0, 0)),
        AsymCurve::Line { m, q } => (-q, -m, 1.0, 0.0),
        AsymCurve::Hyperbola { a, b, c, d } => (-a, -b, c, d),
    };
    // Circle points (x, y) = sqrt(2) (cos th, sin th) via t = tan(th/2).
    // F(t) = alpha (1+t^2)^2 + sqrt(2) beta (1-t^2)(1+t^2)
    //      + 2 sqrt(2) gamma t (1+t^2) + 4 delta t (1-t^2).
    let coeffs = [
        cr(alpha + SQRT2 * beta),
        cr(2.0 * SQRT2 * gamma + 4.0 * delta),
        cr(2.0 * alpha),
        cr(2.0 * SQRT2 * gamma - 4.0 * delta),
        cr(alpha - SQRT2 * beta),
    ];
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        // The whole circle solves the equation only for the zero form.
        return Ok((0, 0));
    }
    let top = coeffs
        .iter()
        .rposition(|z| z.norm() > 1e-13 * scale)
        .unwrap();
    let roots = poly_roots(&coeffs[..=top]);
    let t_up = (1.0, 1.0 + SQRT2); // th in [pi/2, 3pi/4]
    let t_down = (-1.0, -(SQRT2 - 1.0)); // th in [-pi/2, -pi/4]
    let mut n_up = 0;
    let mut n_down = 0;
    let mut in_arc: Vec<f64> = Vec::new();
    for z in roots {
        if z.im.abs() > 1e-8 * (1.0 + z.norm()) {
            continue;
        }
        let t = z.re;
        for (lo, hi, counter) in [
            (t_up.0, t_up.1, &mut n_up),
            (t_down.0, t_down.1, &mut n_down),
        ] {
            let tol = SURFACE_TOL * (hi - lo).abs().max(1.0);
            if (t - lo).abs() <= tol || (t - hi).abs() <= tol {
                return Err(IndexError::OnSurface {
                    surface: "arc endpoint".to_string(),
                });
            }
            if t > lo && t < hi {
                *counter += 1;
                in_arc.push(t);
            }
        }
    }
    in_arc.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in in_arc.windows(2) {
        if (w[1] - w[0]).abs() < 1e-6 {
            return Err(IndexError::OnSurface {
                surface: "arc tangency".to_string(),
            });
        }
    }
    Ok((n_up, n_down))
}

/// One-sided escape asymptotes of the boundary condition.
pub fn escape_asymptotes(bd: &BoundaryData, p: &PhysParams) -> Result<EscapeAsymptotes, IndexError> {
    let nu = p.nu();
    match reduce(bd, p)? {
        Reduced::Dd => Ok(EscapeAsymptotes {
            plus: Asymptote::Finite(1.0 / (2.0 * nu)),
            minus: Asymptote::Finite(-1.0 / (2.0 * nu)),
        }),
        Reduced::Nd(_, orbit) => {
            let al_i = orbit.alpha.im;
            let numer = orbit.lambda - nu * (1.0 + orbit.alpha.norm_sqr());
            let n_scale = orbit.lambda.abs() + nu * (1.0 + orbit.alpha.norm_sqr());
            let side = |sign: f64| -> Asymptote {
                let denom = 2.0 * nu * (orbit.lambda - sign * 2.0 * nu * al_i);
                let d_scale = 2.0 * nu * (orbit.lambda.abs() + 2.0 * nu * al_i.abs()).max(1.0);
                if denom.abs() <= SURFACE_TOL * d_scale {
                    Asymptote::DivergesToInfinity
                } else if numer.abs() <= SURFACE_TOL * n_scale.max(1.0) {
                    Asymptote::CollapsesToZero
                } else {
                    Asymptote::Finite(sign * numer / denom)
                }
            };
            Ok(EscapeAsymptotes {
                plus: side(1.0),
                minus: side(-1.0),
            })
        }
        Reduced::Nn(_, orbit) => {
            let mu_sq = orbit.mu.norm_sqr();
            let mu_r = orbit.mu.re;
            let numer = mu_sq - nu * nu + nu * (orbit.l1 + orbit.l2) - orbit.l1 * orbit.l2;
            let n_scale =
                mu_sq + nu * nu + nu * (orbit.l1.abs() + orbit.l2.abs()) + (orbit.l1 * orbit.l2).abs();
            let side = |sign: f64| -> Asymptote {
                let denom = 4.0 * nu * nu * mu_r + sign * 2.0 * nu * (mu_sq + nu * nu - orbit.l1 * orbit.l2);
                let d_scale = 4.0 * nu * nu * mu_r.abs()
                    + 2.0 * nu * (mu_sq + nu * nu + (orbit.l1 * orbit.l2).abs());
                if denom.abs() <= SURFACE_TOL * d_scale.max(1.0) {
                    Asymptote::DivergesToInfinity
                } else if numer.abs() <= SURFACE_TOL * n_scale.max(1.0) {
                    Asymptote::CollapsesToZero
                } else {
                    Asymptote::Finite(numer / denom)
                }
            };
            Ok(EscapeAsymptotes {
                plus: side(1.0),
                minus: side(-1.0),
            })
        }
    }
}

/// Number of escapes: positive flat asymptotes counted with orientation
/// (`+1` at `kx -> -inf`, `-1` at `kx -> +inf`). Exceptional asymptote
/// behavior signals an escape transition surface.
pub fn index_e(bd: &BoundaryData, p: &PhysParams) -> Result<i32, IndexError> {
    let asy = escape_asymptotes(bd, p)?;
    let mut e = 0;
    match asy.minus {
        Asymptote::Finite(h) => {
            if h > 0.0 {
                e += 1;
            }
        }
        other => {
            return Err(IndexError::OnSurface {
                surface: format!("exceptional escape at kx -> -inf ({other:?})"),
            })
        }
    }
    match asy.plus {
        Asymptote::Finite(h) => {
            if h > 0.0 {
                e -= 1;
            }
        }
        other => {
            return Err(IndexError::OnSurface {
                surface: format!("exceptional escape at kx -> +inf ({other:?})"),
            })
        }
    }
    Ok(e)
}

/// Complex quadratic `c0 k^2 + c1 k + c2` traced by a boundary determinant
/// over real momenta, and the derived real invariants of its winding
/// calculus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolaCurve {
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ParabolaCurve {
    pub fn new(c0: Complex64, c1: Complex64, c2: Complex64) -> Self {
        ParabolaCurve { c0, c1, c2 }
    }

    pub fn d10(&self) -> f64 {
        (self.c1 * self.c0.conj()).im
    }

    pub fn d20(&self) -> f64 {
        (self.c2 * self.c0.conj()).im
    }

    pub fn d21(&self) -> f64 {
        (self.c2 * self.c1.conj()).im
    }

    /// Origin-avoidance discriminant `d20^2 - d21 d10` of the generic case.
    pub fn c_p(&self) -> f64 {
        self.d20() * self.d20() - self.d21() * self.d10()
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        (self.c0 * cr(k) + self.c1) * cr(k) + self.c2
    }

    fn scale(&self) -> f64 {
        self.c0.norm().max(self.c1.norm()).max(self.c2.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Point,
    Line,
    HalfLine,
    Parabola,
}

/// Geometric type of the traced curve.
pub fn curve_kind(pc: &ParabolaCurve) -> CurveKind {
    let scale = pc.scale().max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    if pc.c0.norm() <= tol {
        if pc.c1.norm() <= tol {
            CurveKind::Point
        } else {
            CurveKind::Line
        }
    } else if pc.d10().abs() <= 1e-12 * scale * scale {
        CurveKind::HalfLine
    } else {
        CurveKind::Parabola
    }
}

/// Whether the curve misses the origin for every real momentum.
pub fn avoids_origin(pc: &ParabolaCurve) -> bool {
    let scale = pc.scale().max(f64::MIN_POSITIVE);
    match curve_kind(pc) {
        CurveKind::Point => pc.c2.norm() > 1e-12 * scale,
        CurveKind::Line => pc.d21().abs() > 1e-12 * scale * scale,
        CurveKind::HalfLine => {
            if pc.d20().abs() > 1e-12 * scale * scale {
                true
            } else {
                // Both c2 c0* and (c1 c0*)^2 are real here.
                let lhs = 4.0 * (pc.c2 * pc.c0.conj()).re * pc.c0.norm_sqr();
                let rhs = (pc.c1 * pc.c0.conj()).re.powi(2);
                lhs > rhs
            }
        }
        CurveKind::Parabola => pc.c_p().abs() > 1e-12 * scale.powi(4),
    }
}

/// Winding of the curve about the origin: zero for points, half-lines and
/// wide parabolas, an exact half-integer for lines, a signed unit for
/// parabolas enclosing the origin.
pub fn winding_n(pc: &ParabolaCurve) -> Result<HalfInt, IndexError> {
    if !avoids_origin(pc) {
        return Err(IndexError::OriginHit);
    }
    Ok(match curve_kind(pc) {
        CurveKind::Point | CurveKind::HalfLine => HalfInt::from_int(0),
        CurveKind::Line => HalfInt::from_twice(-pc.d21().signum() as i64),
        CurveKind::Parabola => {
            if pc.c_p() > 0.0 {
                HalfInt::from_int(0)
            } else {
                HalfInt::from_int(-pc.d10().signum() as i64)
            }
        }
    })
}

/// Determinant parabolas `P_{+-}(kx) = det(A1(kx) +- A2(kx))` of the
/// boundary condition, as coefficient triples.
pub fn boundary_polynomials(bd: &BoundaryData) -> (ParabolaCurve, ParabolaCurve) {
    let make = |sign: f64| -> ParabolaCurve {
        let s = cr(sign);
        let c0 = s * wedge(bd.b2, bd.b1);
        let c1 = wedge(bd.b2, bd.a2 + s * bd.a1p) + wedge(bd.a1 + s * bd.a2p, bd.b1);
        let c2 = wedge(bd.a1 + s * bd.a2p, bd.a1p + s * bd.a2);
        ParabolaCurve::new(c0, c1, c2)
    };
    (make(1.0), make(-1.0))
}

/// Boundary winding `B = N(P_-) - N(P_+)`, or `None` where it is
/// ill-defined (a determinant curve through the origin, i.e. a fiberwise
/// self-adjointness failure).
pub fn index_b(bd: &BoundaryData) -> Result<Option<i32>, IndexError> {
    match classify(bd, CLASSIFY_TOL) {
        Family::DD => {
            // P_- = -P_+ identically, so the windings cancel whenever they
            // are defined at all.
            let (p_plus, _) = boundary_polynomials(bd);
            Ok(if avoids_origin(&p_plus) { Some(0) } else { None })
        }
        Family::ND => nd_dn_index_b(bd),
        Family::DN => nd_dn_index_b(&swap_unchecked(bd)),
        Family::NN => {
            let orbit = nn_orbit(bd)?;
            Ok(nn_index_b(&orbit))
        }
    }
}

fn nd_dn_index_b(bd: &BoundaryData) -> Result<Option<i32>, IndexError> {
    // The determinant curves factor through the fiber-rank polynomial; a
    // real rank failure puts both on the origin.
    if !rank_failures(bd)?.is_empty() {
        return Ok(None);
    }
    let orbit = nd_orbit(bd)?;
    Ok(Some(if orbit.lambda == 0.0 {
        0
    } else {
        // B = sgn q and q has the opposite sign of the coupling.
        -orbit.lambda.signum() as i32
    }))
}

/// Exceptional-line invariant deciding the boundary winding on the surface
/// where the determinant parabola degenerates.
pub fn nn_d21(orbit: &NnOrbit) -> f64 {
    let re_mu_pair = (orbit.mu.conj() * orbit.mup + orbit.mu * orbit.mup.conj()).re;
    -(orbit.l1 + orbit.l2) * (1.0 - orbit.l1p * orbit.l2p + orbit.mup.norm_sqr())
        + (orbit.l1p + orbit.l2p) * (re_mu_pair - orbit.l2 * orbit.l1p - orbit.l1 * orbit.l2p)
}

fn nn_index_b(orbit: &NnOrbit) -> Option<i32> {
    let mu_sq = orbit.mu.norm_sqr();
    let prod = orbit.l1 * orbit.l2;
    let sum = orbit.l1 + orbit.l2;
    let scale = (mu_sq + prod.abs()).max(1e-300);
    if (mu_sq - prod).abs() > SURFACE_TOL * scale {
        // Generic and half-line cases: the curve is a parabola when the
        // couplings do not balance, a doubly-traced half-line when they
        // cancel; both avoid the origin.
        if sum.abs() > SURFACE_TOL * (orbit.l1.abs() + orbit.l2.abs()).max(1.0) {
            if orbit.delta2_above_b() {
                Some(0)
            } else {
                Some(-2 * sum.signum() as i32)
            }
        } else {
            Some(0)
        }
    } else {
        // Degenerate coupling balance: point or line.
        let re_c1 = (orbit.mu.conj() * orbit.mup + orbit.mu * orbit.mup.conj()).re
            - orbit.l2 * orbit.l1p
            - orbit.l1 * orbit.l2p;
        let c1_scale = 1.0_f64
            .max(orbit.mu.norm() * orbit.mup.norm())
            .max(sum.abs());
        if sum.abs() <= SURFACE_TOL * c1_scale && re_c1.abs() <= SURFACE_TOL * c1_scale {
            Some(0) // single point, never at the origin
        } else {
            let d21 = nn_d21(orbit);
            if d21 != 0.0 {
                Some(d21.signum() as i32)
            } else {
                None
            }
        }
    }
}

impl NnOrbit {
    /// `Delta^2 > B` in threshold form, i.e. `|mu|^2 > l1 l2`.
    fn delta2_above_b(&self) -> bool {
        self.mu.norm_sqr() > self.l1 * self.l2
    }
}

/// Bulk-edge-correspondence verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    OnBoundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::OnBoundary => "on_boundary",
        };
        write!(f, "{s}")
    }
}

/// The assembled index vector with `M = P + I` and the correspondence
/// verdict. On transition surfaces the entries carry the limiting values of
/// the printed case distinctions and the surfaces are listed.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexVector {
    pub p: i32,
    pub i: i32,
    pub e: i32,
    pub b: Option<i32>,
    pub m: i32,
    pub verdict: Verdict,
    pub on_surfaces: Vec<String>,
}

fn absorb<T>(
    result: Result<T, IndexError>,
    fallback: T,
    surfaces: &mut Vec<String>,
) -> Result<T, IndexError> {
    match result {
        Ok(v) => Ok(v),
        Err(IndexError::OnSurface { surface }) => {
            surfaces.push(surface);
            Ok(fallback)
        }
        Err(e) => Err(e),
    }
}

fn nd_tiebreak_p(red: &ReducedND) -> i32 {
    if red.q <= -SQRT2 {
        1
    } else if red.q < SQRT2 {
        2
    } else {
        3
    }
}

fn nudge(red: &ReducedND) -> ReducedND {
    // Step off the surfaces by a relative margin; used only to report a
    // representative value alongside the on-boundary flag.
    let eps = 64.0 * SURFACE_TOL * (1.0 + red.q.abs());
    ReducedND {
        m: red.m,
        q: red.q + eps,
    }
}

fn nudge_nn(red: &ReducedNN) -> ReducedNN {
    let eps = 64.0 * SURFACE_TOL * (1.0 + red.delta2.abs());
    ReducedNN {
        delta2: red.delta2 + eps,
        ..*red
    }
}

/// Assemble the full index vector of a boundary condition.
pub fn index_vector(bd: &BoundaryData, p: &PhysParams) -> Result<IndexVector, IndexError> {
    let mut surfaces = Vec::new();
    let (p_val, i_val, e_val) = match reduce(bd, p)? {
        Reduced::Dd => (2, 0, -1),
        Reduced::Nd(red, _) => {
            let p_val = absorb(nd_index_p(&red), nd_tiebreak_p(&red), &mut surfaces)?;
            let i_val = absorb(nd_index_i(&red), nd_index_i(&nudge(&red)).unwrap_or(0), &mut surfaces)?;
            let e_val = absorb(nd_index_e(&red), nd_index_e(&nudge(&red)).unwrap_or(0), &mut surfaces)?;
            (p_val, i_val, e_val)
        }
        Reduced::Nn(red, _) => {
            let p_val = absorb(
                nn_index_p(&red),
                nn_index_p(&nudge_nn(&red)).unwrap_or(2),
                &mut surfaces,
            )?;
            let i_val = absorb(
                nn_index_i(&red),
                nn_index_i(&nudge_nn(&red)).unwrap_or(0),
                &mut surfaces,
            )?;
            let e_val = {
                let direct = index_e(bd, p);
                absorb(direct, 0, &mut surfaces)?
            };
            (p_val, i_val, e_val)
        }
    };
    let b = index_b(bd)?;
    let m = p_val + i_val;
    let verdict = if surfaces.is_empty() {
        if m == 2 {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    } else {
        Verdict::OnBoundary
    };
    Ok(IndexVector {
        p: p_val,
        i: i_val,
        e: e_val,
        b,
        m,
        verdict,
        on_surfaces: surfaces,
    })
}

/// A transition surface crossed by a straight parameter path, with the
/// index changes observed when straddling it.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionEvent {
    pub surface: String,
    /// Path coordinate of the crossing in [0, 1].
    pub at: f64,
    pub delta_p: i32,
    pub delta_i: i32,
    pub delta_e: i32,
    pub delta_b: Option<i32>,
}

/// A labeled level-set function along a parameter path.
type SurfaceFns<'a> = Vec<(String, Box<dyn Fn(f64) -> f64 + 'a>)>;

fn crossings(surfaces: &SurfaceFns<'_>) -> Vec<(String, f64)> {
    let mut hits = Vec::new();
    let n = 4096;
    for (label, func) in surfaces {
        let mut prev_t = 0.0;
        let mut prev = func(0.0);
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let val = func(t);
            if prev == 0.0 || prev.signum() != val.signum() && val != 0.0 {
                // bisect
                let (mut lo, mut hi) = (prev_t, t);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if func(mid).signum() == prev.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hits.push((label.clone(), 0.5 * (lo + hi)));
            }
            prev_t = t;
            prev = val;
        }
    }
    hits.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    hits
}

fn straddle(
    build_at: &dyn Fn(f64) -> Result<IndexVector, IndexError>,
    label: &str,
    t: f64,
    step: f64,
) -> Result<TransitionEvent, IndexError> {
    let before = build_at((t - step).max(0.0))?;
    let after = build_at((t + step).min(1.0))?;
    Ok(TransitionEvent {
        surface: label.to_string(),
        at: t,
        delta_p: after.p - before.p,
        delta_i: after.i - before.i,
        delta_e: after.e - before.e,
        delta_b: match (before.b, after.b) {
            (Some(x), Some(y)) => Some(y - x),
            _ => None,
        },
    })
}

/// List the transition surfaces crossed by the straight path between two
/// same-family boundary conditions in reduced coordinates, with the index
/// jumps measured by straddling each crossing.
pub fn transition_report(
    bd1: &BoundaryData,
    bd2: &BoundaryData,
    p: &PhysParams,
) -> Result<Vec<TransitionEvent>, IndexError> {
    let step = 1e-3;
    match (reduce(bd1, p)?, reduce(bd2, p)?) {
        (Reduced::Nd(r1, _), Reduced::Nd(r2, _)) => {
            let path = move |t: f64| ReducedND {
                m: r1.m + t * (r2.m - r1.m),
                q: r1.q + t * (r2.q - r1.q),
            };
            let surfaces: SurfaceFns<'_> = vec![
                ("q = +sqrt(2)".into(), Box::new(move |t| path(t).q - SQRT2)),
                ("q = -sqrt(2)".into(), Box::new(move |t| path(t).q + SQRT2)),
                ("q = m+1".into(), Box::new(move |t| {
                    let r = path(t);
                    r.q - (r.m + 1.0)
                })),
                ("q = -(m+1)".into(), Box::new(move |t| {
                    let r = path(t);
                    r.q + (r.m + 1.0)
                })),
                ("q = m-1".into(), Box::new(move |t| {
                    let r = path(t);
                    r.q - (r.m - 1.0)
                })),
                ("q = 0".into(), Box::new(move |t| path(t).q)),
            ];
            let build_at = |t: f64| -> Result<IndexVector, IndexError> {
                let r = path(t);
                let fp = nd_params_from_reduced(r.m, r.q, p);
                let bd = crate::boundary::build(&fp)?;
                index_vector(&bd, p)
            };
            crossings(&surfaces)
                .into_iter()
                .map(|(label, t)| straddle(&build_at, &label, t, step))
                .collect()
        }
        (Reduced::Nn(_, o1), Reduced::Nn(_, o2)) => {
            let p_owned = *p;
            let path = move |t: f64| -> NnOrbit {
                let lerp = |a: f64, b: f64| a + t * (b - a);
                NnOrbit {
                    mu: o1.mu + cr(t) * (o2.mu - o1.mu),
                    mup: o1.mup + cr(t) * (o2.mup - o1.mup),
                    l1: lerp(o1.l1, o2.l1),
                    l2: lerp(o1.l2, o2.l2),
                    l1p: lerp(o1.l1p, o2.l1p),
                    l2p: lerp(o1.l2p, o2.l2p),
                }
            };
            let red_at = move |t: f64| reduce_nn(&path(t), &p_owned);
            let surfaces: SurfaceFns<'_> = vec![
                ("Delta^2 = M+".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.m_plus
                })),
                ("Delta^2 = M-".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.m_minus
                })),
                ("Delta^2 = I+".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.i_plus
                })),
                ("Delta^2 = I-".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.i_minus
                })),
                ("Delta^2 = E".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.e_cal
                })),
                ("Delta^2 = B".into(), Box::new(move |t| {
                    let r = red_at(t);
                    r.delta2 - r.b_cal
                })),
            ];
            let build_at = |t: f64| -> Result<IndexVector, IndexError> {
                let orbit = path(t);
                let fp = FamilyParams::nn(orbit.mu, orbit.mup, orbit.l1, orbit.l2, orbit.l1p, orbit.l2p);
                let bd = crate::boundary::build(&fp)?;
                index_vector(&bd, p)
            };
            crossings(&surfaces)
                .into_iter()
                .map(|(label, t)| straddle(&build_at, &label, t, step))
                .collect()
        }
        (Reduced::Dd, Reduced::Dd) => Ok(vec![]),
        _ => Err(IndexError::Boundary(BoundaryError::WrongFamily {
            expected: classify(bd1, CLASSIFY_TOL),
            got: classify(bd2, CLASSIFY_TOL),
        })),
    }
}
