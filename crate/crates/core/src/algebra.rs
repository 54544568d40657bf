//! Fixed-size complex linear algebra (2- and 3-vectors, 2x2 and 3x3
//! matrices) and generic numerical winding of planar curves.
//!
//! Everything downstream builds on this module; it has no dependencies
//! beyond `num-complex`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Error, PartialEq)]
pub enum WindingError {
    /// A sample of the curve lies within the origin-avoidance tolerance.
    #[error("curve passes through the origin (sample {index})")]
    OriginHit { index: usize },
    /// Adjacent samples differ in argument by more than pi/2; the winding
    /// would silently alias instead of being tracked continuously.
    #[error("curve under-resolved at step {index} (|d arg| = {step:.3} > pi/2)")]
    UnderResolved { index: usize, step: f64 },
    /// The polyline was declared closed but first and last point disagree.
    #[error("polyline not closed (gap {gap:.3e} vs scale {scale:.3e})")]
    NotClosed { gap: f64, scale: f64 },
}

/// A vector in C^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2 {
    pub x: Complex64,
    pub y: Complex64,
}

impl C2 {
    pub const fn new(x: Complex64, y: Complex64) -> Self {
        C2 { x, y }
    }

    pub fn zero() -> Self {
        C2::new(ZERO, ZERO)
    }

    pub fn from_re(x: f64, y: f64) -> Self {
        C2::new(cr(x), cr(y))
    }

    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr()).sqrt()
    }

    pub fn conj(&self) -> Self {
        C2::new(self.x.conj(), self.y.conj())
    }

    /// Hermitian inner product, antilinear in `self`.
    pub fn dot(&self, other: &C2) -> Complex64 {
        self.x.conj() * other.x + self.y.conj() * other.y
    }
}

impl Add for C2 {
    type Output = C2;
    fn add(self, rhs: C2) -> C2 {
        C2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for C2 {
    type Output = C2;
    fn sub(self, rhs: C2) -> C2 {
        C2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for C2 {
    type Output = C2;
    fn neg(self) -> C2 {
        C2::new(-self.x, -self.y)
    }
}

impl Mul<C2> for Complex64 {
    type Output = C2;
    fn mul(self, v: C2) -> C2 {
        C2::new(self * v.x, self * v.y)
    }
}

/// Wedge product on C^2: `u ∧ v = u.x v.y − v.x u.y = det(u, v)`.
pub fn wedge(u: C2, v: C2) -> Complex64 {
    u.x * v.y - v.x * u.y
}

/// A 2x2 complex matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2 {
    pub e: [[Complex64; 2]; 2],
}

impl M2 {
    pub fn new(a: Complex64, b: Complex64, c0: Complex64, d: Complex64) -> Self {
        M2 { e: [[a, b], [c0, d]] }
    }

    pub fn identity() -> Self {
        M2::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn zero() -> Self {
        M2::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// Matrix with the given columns.
    pub fn from_cols(c1: C2, c2: C2) -> Self {
        M2::new(c1.x, c2.x, c1.y, c2.y)
    }

    pub fn col(&self, j: usize) -> C2 {
        C2::new(self.e[0][j], self.e[1][j])
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    /// Adjugate: `adjugate(m) * m = det(m) * Id`, additive in `m`.
    pub fn adjugate(&self) -> M2 {
        M2::new(self.e[1][1], -self.e[0][1], -self.e[1][0], self.e[0][0])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> M2 {
        M2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn conj_entries(&self) -> M2 {
        M2::new(
            self.e[0][0].conj(),
            self.e[0][1].conj(),
            self.e[1][0].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> M2 {
        M2::new(s * self.e[0][0], s * self.e[0][1], s * self.e[1][0], s * self.e[1][1])
    }

    /// Max entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: C2) -> C2 {
        C2::new(
            self.e[0][0] * v.x + self.e[0][1] * v.y,
            self.e[1][0] * v.x + self.e[1][1] * v.y,
        )
    }
}

impl Add for M2 {
    type Output = M2;
    fn add(self, r: M2) -> M2 {
        M2::new(
            self.e[0][0] + r.e[0][0],
            self.e[0][1] + r.e[0][1],
            self.e[1][0] + r.e[1][0],
            self.e[1][1] + r.e[1][1],
        )
    }
}

impl Sub for M2 {
    type Output = M2;
    fn sub(self, r: M2) -> M2 {
        M2::new(
            self.e[0][0] - r.e[0][0],
            self.e[0][1] - r.e[0][1],
            self.e[1][0] - r.e[1][0],
            self.e[1][1] - r.e[1][1],
        )
    }
}

impl Mul for M2 {
    type Output = M2;
    fn mul(self, r: M2) -> M2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.e[i][0] * r.e[0][j] + self.e[i][1] * r.e[1][j];
            }
        }
        M2 { e: out }
    }
}

/// A vector in C^3; components named after the field components they carry
/// in the shallow-water context (height, two velocities).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C3 {
    pub e: [Complex64; 3],
}

impl C3 {
    pub fn new(a: Complex64, b: Complex64, c0: Complex64) -> Self {
        C3 { e: [a, b, c0] }
    }

    pub fn zero() -> Self {
        C3::new(ZERO, ZERO, ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &C3) -> Complex64 {
        self.e
            .iter()
            .zip(other.e.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> C3 {
        C3::new(s * self.e[0], s * self.e[1], s * self.e[2])
    }

    pub fn sub(&self, other: &C3) -> C3 {
        C3::new(
            self.e[0] - other.e[0],
            self.e[1] - other.e[1],
            self.e[2] - other.e[2],
        )
    }
}

/// A 3x3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M3 {
    pub e: [[Complex64; 3]; 3],
}

impl M3 {
    pub fn zero() -> Self {
        M3 { e: [[ZERO; 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut m = M3::zero();
        for i in 0..3 {
            m.e[i][i] = ONE;
        }
        m
    }

    pub fn apply(&self, v: &C3) -> C3 {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.e[i][j] * v.e[j]).sum();
        }
        C3 { e: out }
    }

    pub fn scale(&self, s: Complex64) -> M3 {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2]
    }

    pub fn adjoint(&self) -> M3 {
        let mut m = M3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    pub fn norm_max(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn col(&self, j: usize) -> C3 {
        C3::new(self.e[0][j], self.e[1][j], self.e[2][j])
    }
}

impl Add for M3 {
    type Output = M3;
    fn add(self, r: M3) -> M3 {
        let mut m = M3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j] + r.e[i][j];
            }
        }
        m
    }
}

impl Sub for M3 {
    type Output = M3;
    fn sub(self, r: M3) -> M3 {
        let mut m = M3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = self.e[i][j] - r.e[i][j];
            }
        }
        m
    }
}

impl Mul for M3 {
    type Output = M3;
    fn mul(self, r: M3) -> M3 {
        let mut m = M3::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.e[i][j] = (0..3).map(|k| self.e[i][k] * r.e[k][j]).sum();
            }
        }
        m
    }
}

/// An exact half-integer, stored as twice its value.
///
/// Windings of straight lines about the origin are exactly ±1/2 and must not
/// be represented in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(&self) -> i64 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    /// Nearest half-integer to `x`, together with the rounding error.
    pub fn round_from(x: f64) -> (Self, f64) {
        let twice = (2.0 * x).round();
        (HalfInt { twice: twice as i64 }, (2.0 * x - twice).abs() / 2.0)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, r: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + r.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, r: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - r.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

fn scan_scale(points: &[Complex64]) -> f64 {
    points.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn arg_steps(points: &[Complex64], tol_origin: f64) -> Result<f64, WindingError> {
    let mut total = 0.0;
    for (i, z) in points.iter().enumerate() {
        if z.norm() <= tol_origin {
            return Err(WindingError::OriginHit { index: i });
        }
    }
    for (i, w) in points.windows(2).enumerate() {
        let step = (w[1] / w[0]).arg();
        if step.abs() > PI / 2.0 {
            return Err(WindingError::UnderResolved { index: i, step: step.abs() });
        }
        total += step;
    }
    Ok(total)
}

/// Winding number of a closed polyline of nonzero complex samples, in units
/// of full turns.
///
/// The argument is continued branch-by-branch using the principal difference
/// between adjacent samples; any step exceeding pi/2 aborts rather than
/// aliasing. The first and last sample must agree up to a relative 1e-6.
pub fn numeric_winding(points: &[Complex64]) -> Result<f64, WindingError> {
    let scale = scan_scale(points);
    let gap = (points[points.len() - 1] - points[0]).norm();
    if gap > 1e-6 * scale {
        return Err(WindingError::NotClosed { gap, scale });
    }
    let total = arg_steps(points, 1e-12 * scale)?;
    Ok(total / (2.0 * PI))
}

/// Total continuous argument change of an open polyline, in units of full
/// turns. Same origin-avoidance and resolution guards as [`numeric_winding`].
pub fn open_arg_increment(points: &[Complex64]) -> Result<f64, WindingError> {
    let scale = scan_scale(points);
    let total = arg_steps(points, 1e-12 * scale)?;
    Ok(total / (2.0 * PI))
}

/// All complex roots of the polynomial `sum_j coeffs[j] z^j` via
/// Durand-Kerner iteration. Intended for the low-degree (<= 4) polynomials
/// arising from curve-circle intersections; trailing zero coefficients are
/// stripped by the caller.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![];
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c0| c0 / lead).collect();
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c0| c0.norm())
            .fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = ZERO;
        for &co in monic.iter().rev() {
            acc = acc * z + co;
        }
        acc
    };
    for _ in 0..200 {
        let mut moved = 0.0_f64;
        for i in 0..n {
            let zi = roots[i];
            let mut denom = ONE;
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = eval(zi) / denom;
            roots[i] = zi - delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 * radius {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn wedge_identity_columns() {
        assert_eq!(wedge(C2::from_re(1.0, 0.0), C2::from_re(0.0, 1.0)), ONE);
    }

    #[test]
    fn wedge_self_vanishes() {
        let u = C2::new(c(0.3, -1.1), c(2.0, 0.7));
        assert_eq!(wedge(u, u), ZERO);
    }

    #[test]
    fn wedge_hand_value() {
        // (1, 2i) ∧ (3, 4) = 1*4 - 3*2i = 4 - 6i
        let u = C2::new(cr(1.0), c(0.0, 2.0));
        let v = C2::new(cr(3.0), cr(4.0));
        assert_eq!(wedge(u, v), c(4.0, -6.0));
    }

    #[test]
    fn adjugate_identity() {
        assert_eq!(M2::identity().adjugate(), M2::identity());
    }

    #[test]
    fn adjugate_swaps_diagonal() {
        let m = M2::new(c(1.0, 1.0), cr(2.0), cr(3.0), c(0.0, -4.0));
        let adj = m.adjugate();
        assert_eq!(adj, M2::new(c(0.0, -4.0), cr(-2.0), cr(-3.0), c(1.0, 1.0)));
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let m = M2::new(c(0.4, -0.2), c(1.3, 0.9), c(-2.0, 0.1), c(0.0, 0.55));
        let prod = m.adjugate() * m;
        let want = M2::identity().scale(m.det());
        assert!((prod - want).norm_max() < 1e-14);
    }

    #[test]
    fn adjugate_is_additive() {
        let m = M2::new(c(0.4, -0.2), c(1.3, 0.9), c(-2.0, 0.1), c(0.0, 0.55));
        let n = M2::new(c(-1.0, 2.2), c(0.3, 0.0), c(0.7, -0.7), c(2.0, 1.0));
        assert!(((m + n).adjugate() - (m.adjugate() + n.adjugate())).norm_max() < 1e-15);
    }

    #[test]
    fn det_is_wedge_of_columns() {
        let m = M2::new(c(0.4, -0.2), c(1.3, 0.9), c(-2.0, 0.1), c(0.0, 0.55));
        assert!((m.det() - wedge(m.col(0), m.col(1))).norm() < 1e-15);
    }

    #[test]
    fn winding_unit_circle() {
        let pts: Vec<Complex64> = (0..=256)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / 256.0))
            .collect();
        let w = numeric_winding(&pts).unwrap();
        assert!(close(w, 1.0, 1e-6), "w = {w}");
        let rev: Vec<Complex64> = pts.iter().rev().copied().collect();
        assert!(close(numeric_winding(&rev).unwrap(), -1.0, 1e-6));
    }

    #[test]
    fn winding_double_phase() {
        let pts: Vec<Complex64> = (0..=512)
            .map(|i| Complex64::from_polar(1.0, 4.0 * PI * i as f64 / 512.0))
            .collect();
        assert!(close(numeric_winding(&pts).unwrap(), 2.0, 1e-6));
    }

    #[test]
    fn winding_rejects_origin() {
        let pts = vec![cr(1.0), ZERO, cr(1.0)];
        assert!(matches!(
            numeric_winding(&pts),
            Err(WindingError::OriginHit { .. })
        ));
    }

    #[test]
    fn winding_rejects_coarse_curve() {
        // 4 samples on the unit circle step by pi/2 exactly; 3 steps of 2pi/3
        // trip the guard.
        let pts: Vec<Complex64> = (0..=3)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / 3.0))
            .collect();
        assert!(matches!(
            numeric_winding(&pts),
            Err(WindingError::UnderResolved { .. })
        ));
    }

    #[test]
    fn winding_invariant_under_rotation_and_rescale() {
        let pts: Vec<Complex64> = (0..=256)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / 256.0;
                Complex64::from_polar(1.0, th) + c(0.2, -0.1)
            })
            .collect();
        let w0 = numeric_winding(&pts).unwrap();
        let mut rotated = rotate_closed(&pts, 77);
        let s = c(-3.0, 4.0);
        for z in rotated.iter_mut() {
            *z *= s;
        }
        assert!(close(numeric_winding(&rotated).unwrap(), w0, 1e-9));
    }

    /// Rotate a closed polyline (first == last) by `k` samples.
    fn rotate_closed(pts: &[Complex64], k: usize) -> Vec<Complex64> {
        let n = pts.len() - 1;
        let mut out: Vec<Complex64> = (0..n).map(|i| pts[(i + k) % n]).collect();
        out.push(out[0]);
        out
    }

    #[test]
    fn open_increment_constant_curve() {
        let pts = vec![c(1.0, 1.0); 10];
        assert_eq!(open_arg_increment(&pts).unwrap(), 0.0);
    }

    #[test]
    fn open_increment_half_circle() {
        let pts: Vec<Complex64> = (0..=128)
            .map(|i| Complex64::from_polar(1.0, PI * i as f64 / 128.0))
            .collect();
        assert!(close(open_arg_increment(&pts).unwrap(), 0.5, 1e-6));
    }

    #[test]
    fn open_increment_vertical_line() {
        // 1 + ik for k in [-T, T]: total argument change 2*atan(T), tending
        // to half a turn as T grows.
        let t_max = 1.0e4;
        let pts: Vec<Complex64> = (0..=200_000)
            .map(|i| {
                let k = -t_max + 2.0 * t_max * i as f64 / 200_000.0;
                c(1.0, k)
            })
            .collect();
        let got = open_arg_increment(&pts).unwrap();
        let exact = 2.0 * t_max.atan() / (2.0 * PI);
        assert!(close(got, exact, 1e-9), "got {got}, exact {exact}");
        assert!(close(got, 0.5, 1e-3));
    }

    #[test]
    fn half_int_arithmetic() {
        let a = HalfInt::from_twice(1); // 1/2
        let b = HalfInt::from_int(2);
        assert_eq!((a + b).value(), 2.5);
        assert_eq!((b - a).twice(), 3);
        assert_eq!((-a).value(), -0.5);
        assert!(!a.is_integer());
        let (h, err) = HalfInt::round_from(-0.4999);
        assert_eq!(h, HalfInt::from_twice(-1));
        assert!(err < 1e-3);
    }

    #[test]
    fn poly_roots_quartic() {
        // (z-1)(z+2)(z-3i)(z+0.5) expanded
        let r = [cr(1.0), cr(-2.0), c(0.0, 3.0), cr(-0.5)];
        let mut coeffs = vec![ONE];
        for root in r {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (i, &co) in coeffs.iter().enumerate() {
                next[i + 1] += co;
                next[i] -= co * root;
            }
            coeffs = next;
        }
        let got = poly_roots(&coeffs);
        for root in r {
            assert!(
                got.iter().any(|z| (z - root).norm() < 1e-9),
                "missing root {root}"
            );
        }
    }
}
