//! Seeded verification suites driving the library invariants: every suite
//! generates reproducible random cases, runs an independent cross-check, and
//! returns a machine-readable report.

use crate::report::Report;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swbec::algebra::{c, cr, HalfInt, C2, M2};
use swbec::boundary::{
    apply_gauge, build, is_phs, is_self_adjoint, is_self_adjoint_full, kx_shift, nn_orbit,
    von_neumann_u, FamilyParams,
};
use swbec::bulk::{chern_numeric, BandLabel, PhysParams};
use swbec::indices::{
    arc_intersections, asymptotic_curve, avoids_origin, index_e, index_i, index_p, index_vector,
    nd_index_e, nd_params_from_reduced, nn_params_from_reduced, reduce_nn, winding_n,
    IndexError, ParabolaCurve, ReducedND,
};
use swbec::oracles::{
    count_mergers, intersect_sample, levinson_sequence, numeric_b, numeric_parabola_winding,
    numeric_w_infty, trace_branches, TraceConfig,
};
use swbec::Verdict;

pub const SUITES: &[&str] = &[
    "selfadjoint",
    "unitary",
    "phs",
    "orbit",
    "shift",
    "winding",
    "intersections",
    "escapes",
    "branches",
    "chern",
    "levinson",
    "becregions",
];

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    c(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn rand_c2(rng: &mut ChaCha8Rng, scale: f64) -> C2 {
    C2::new(rand_c(rng, scale), rand_c(rng, scale))
}

pub fn random_family_params(rng: &mut ChaCha8Rng) -> FamilyParams {
    match rng.gen_range(0..4) {
        0 => FamilyParams::Dd {
            a1p: rand_c2(rng, 2.0),
            a2p: rand_c2(rng, 2.0),
            b1: rand_c2(rng, 2.0),
            b2: rand_c2(rng, 2.0),
        },
        1 => FamilyParams::nd(
            rand_c(rng, 2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ),
        2 => FamilyParams::dn(
            rand_c(rng, 2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ),
        _ => random_nn_params(rng),
    }
}

fn random_nn_params(rng: &mut ChaCha8Rng) -> FamilyParams {
    FamilyParams::nn(
        rand_c(rng, 2.0),
        rand_c(rng, 2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-2.0..2.0),
    )
}

/// A random ND or NN point that is off every transition surface.
pub fn random_off_surface(
    rng: &mut ChaCha8Rng,
    p: &PhysParams,
) -> (FamilyParams, swbec::BoundaryData) {
    loop {
        let fp = if rng.gen_bool(0.5) {
            nd_params_from_reduced(
                rng.gen_range(-4.0..-0.02),
                rng.gen_range(-3.0..3.0),
                p,
            )
        } else {
            nn_params_from_reduced(
                rand_c(rng, 1.5),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.0..3.0),
            )
        };
        let bd = build(&fp).unwrap();
        let defined = index_p(&bd, p).is_ok()
            && index_i(&bd, p).is_ok()
            && index_e(&bd, p).is_ok();
        if defined {
            return (fp, bd);
        }
    }
}

pub fn run_suite(
    name: &str,
    seed: u64,
    samples: usize,
    grid: usize,
    p: &PhysParams,
) -> Result<Report, String> {
    match name {
        "selfadjoint" => Ok(suite_selfadjoint(seed, samples, p)),
        "unitary" => Ok(suite_unitary(seed, samples)),
        "phs" => Ok(suite_phs(seed, samples)),
        "orbit" => Ok(suite_orbit(seed, samples, p)),
        "shift" => Ok(suite_shift(seed, samples, p)),
        "winding" => Ok(suite_winding(seed, samples)),
        "intersections" => Ok(suite_intersections(seed, samples, p)),
        "escapes" => Ok(suite_escapes(seed, samples, p)),
        "branches" => Ok(suite_branches(seed, samples.min(6), p)),
        "chern" => Ok(suite_chern(seed, grid, p)),
        "levinson" => Ok(suite_levinson(seed, samples.min(4), p)),
        "becregions" => Ok(suite_becregions(seed, samples, p)),
        other => Err(format!(
            "unknown suite {other:?}; valid suites: {}",
            SUITES.join(", ")
        )),
    }
}

fn suite_selfadjoint(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("selfadjoint", seed);
    let mut rng = rng_for(seed);
    for i in 0..samples {
        let fp = random_family_params(&mut rng);
        let bd = build(&fp).unwrap();
        let quarter = is_self_adjoint(&bd, 12);
        let full = is_self_adjoint_full(&bd, 12, p.nu());
        report.push(format!("case {i} {:?}", fp.family()), quarter && full, 0.0);
    }
    report
}

fn suite_unitary(seed: u64, samples: usize) -> Report {
    let mut report = Report::new("unitary", seed);
    let mut rng = rng_for(seed);
    for i in 0..samples {
        let fp = random_family_params(&mut rng);
        let bd = build(&fp).unwrap();
        let kx = rng.gen_range(-6.0..6.0);
        match von_neumann_u(&bd, kx) {
            Ok(u) => {
                let dev = (u.adjoint() * u - M2::identity()).norm_max();
                report.push(format!("case {i} kx={kx:.3}"), dev < 1e-12, dev);
            }
            Err(_) => report.push(format!("case {i} singular fiber"), true, 0.0),
        }
    }
    report
}

fn suite_phs(seed: u64, samples: usize) -> Report {
    let mut report = Report::new("phs", seed);
    let mut rng = rng_for(seed);
    for i in 0..samples {
        // Half the cases are drawn exactly on the symmetric submanifolds.
        let symmetric = rng.gen_bool(0.5);
        let fp = if symmetric {
            match rng.gen_range(0..3) {
                0 => FamilyParams::dirichlet(),
                1 => FamilyParams::nd(cr(rng.gen_range(-2.0..2.0)), rng.gen_range(-2.0..2.0), 0.0),
                _ => FamilyParams::nn(
                    c(0.0, rng.gen_range(-2.0..2.0)),
                    cr(rng.gen_range(-2.0..2.0)),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                    0.0,
                    0.0,
                ),
            }
        } else {
            random_family_params(&mut rng)
        };
        let expected = match fp {
            FamilyParams::Dd { .. } => true,
            FamilyParams::Nd { alpha, lambda_p, .. } | FamilyParams::Dn { alpha, lambda_p, .. } => {
                alpha.im == 0.0 && lambda_p == 0.0
            }
            FamilyParams::Nn { mu, mup, l1p, l2p, .. } => {
                mu.re == 0.0 && mup.im == 0.0 && l1p == 0.0 && l2p == 0.0
            }
        };
        let got = is_phs(&build(&fp).unwrap(), 12);
        report.push(format!("case {i} expect={expected}"), got == expected, 0.0);
    }
    report
}

fn invariance_suite(
    name: &'static str,
    seed: u64,
    samples: usize,
    p: &PhysParams,
    transform: impl Fn(&mut ChaCha8Rng, &swbec::BoundaryData) -> swbec::BoundaryData,
) -> Report {
    let mut report = Report::new(name, seed);
    let mut rng = rng_for(seed);
    let mut i = 0;
    while report.cases < samples {
        i += 1;
        let (_, bd) = random_off_surface(&mut rng, p);
        let other = transform(&mut rng, &bd);
        let (Ok(a), Ok(b)) = (index_vector(&bd, p), index_vector(&other, p)) else {
            continue;
        };
        if !a.on_surfaces.is_empty() || !b.on_surfaces.is_empty() {
            continue;
        }
        let pass = (a.p, a.i, a.e, a.b) == (b.p, b.i, b.e, b.b) && a.verdict == b.verdict;
        report.push(format!("case {i}"), pass, 0.0);
    }
    report
}

fn suite_orbit(seed: u64, samples: usize, p: &PhysParams) -> Report {
    invariance_suite("orbit", seed, samples, p, |rng, bd| loop {
        let g = M2::new(
            rand_c(rng, 1.5),
            rand_c(rng, 1.5),
            rand_c(rng, 1.5),
            rand_c(rng, 1.5),
        );
        if g.det().norm() > 0.05 * g.norm_max() * g.norm_max() {
            return apply_gauge(bd, &g);
        }
    })
}

fn suite_shift(seed: u64, samples: usize, p: &PhysParams) -> Report {
    invariance_suite("shift", seed, samples, p, |rng, bd| {
        kx_shift(bd, rng.gen_range(-4.0..4.0))
    })
}

pub fn random_parabola_curve(rng: &mut ChaCha8Rng) -> ParabolaCurve {
    let c0 = match rng.gen_range(0..3) {
        0 => swbec::algebra::ZERO,
        _ => rand_c(rng, 2.0),
    };
    let c1 = match rng.gen_range(0..3) {
        0 => swbec::algebra::ZERO,
        _ => rand_c(rng, 2.0),
    };
    ParabolaCurve::new(c0, c1, rand_c(rng, 2.0))
}

/// Rejection-sample curves that avoid the origin with a definite margin
/// over the oracle's whole momentum window (near-degenerate quadratics can
/// turn around, and graze the origin, at arbitrarily large momenta).
pub fn random_clear_curve(rng: &mut ChaCha8Rng) -> ParabolaCurve {
    let u_max = (1.0e4_f64).asinh();
    loop {
        let pc = random_parabola_curve(rng);
        if !avoids_origin(&pc) {
            continue;
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        let mut at = 0.0;
        for i in 0..=4000 {
            let u = -u_max + 2.0 * u_max * i as f64 / 4000.0;
            let v = pc.eval(u.sinh()).norm();
            hi = hi.max(v);
            if v < lo {
                lo = v;
                at = u;
            }
        }
        // Refine the closest approach before judging the margin.
        let (mut a, mut b) = (at - 2.0 * u_max / 4000.0, at + 2.0 * u_max / 4000.0);
        for _ in 0..100 {
            let m1 = a + 0.382 * (b - a);
            let m2 = a + 0.618 * (b - a);
            if pc.eval(m1.sinh()).norm() < pc.eval(m2.sinh()).norm() {
                b = m2;
            } else {
                a = m1;
            }
        }
        let closest = pc.eval((0.5 * (a + b)).sinh()).norm().min(lo);
        if closest > 1e-9 * hi {
            return pc;
        }
    }
}

fn suite_winding(seed: u64, samples: usize) -> Report {
    let mut report = Report::new("winding", seed);
    let mut rng = rng_for(seed);
    for i in 0..samples {
        let pc = random_clear_curve(&mut rng);
        let analytic = winding_n(&pc).unwrap();
        match numeric_parabola_winding(&pc, 1.0e4) {
            Ok(numeric) => {
                let dev = (analytic - numeric).value().abs();
                report.push(format!("case {i}"), analytic == numeric, dev);
            }
            Err(e) => report.push(format!("case {i} oracle failed: {e}"), false, f64::NAN),
        }
    }
    report
}

fn suite_intersections(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("intersections", seed);
    let mut rng = rng_for(seed);
    let mut i = 0;
    while report.cases < samples {
        i += 1;
        let (_, bd) = random_off_surface(&mut rng, p);
        let curve = asymptotic_curve(&bd, p).unwrap();
        let exact = match arc_intersections(&curve) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let sampled = intersect_sample(&curve, 40_000);
        let closed = index_i(&bd, p).unwrap();
        let pass = exact == sampled && closed == exact.0 as i32 - exact.1 as i32;
        report.push(format!("case {i} exact={exact:?}"), pass, 0.0);
    }
    report
}

/// Printed regional escape values for the NN family.
pub fn nn_escape_table(bd: &swbec::BoundaryData, p: &PhysParams) -> Result<i32, IndexError> {
    let red = reduce_nn(&nn_orbit(bd)?, p);
    let (lo, hi) = if red.i_minus <= red.i_plus {
        (red.i_minus, red.i_plus)
    } else {
        (red.i_plus, red.i_minus)
    };
    let row = if red.delta2 < lo {
        0
    } else if red.delta2 > hi {
        3
    } else {
        1 // middle rows share their escape entries
    };
    let above_e = red.delta2 > red.e_cal;
    Ok(match (row, above_e) {
        (0, true) => 1,
        (0, false) => -1,
        (3, true) => -1,
        (3, false) => 1,
        _ => 0,
    })
}

fn suite_escapes(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("escapes", seed);
    let mut rng = rng_for(seed);
    let mut i = 0;
    while report.cases < samples {
        i += 1;
        let (fp, bd) = random_off_surface(&mut rng, p);
        let counted = match index_e(&bd, p) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let regional = match fp {
            FamilyParams::Nd { .. } => {
                let orbit = swbec::boundary::nd_orbit(&bd).unwrap();
                let red = swbec::indices::reduce_nd(&orbit, p);
                match nd_index_e(&ReducedND { m: red.m, q: red.q }) {
                    Ok(v) => v,
                    Err(_) => continue,
                }
            }
            FamilyParams::Nn { .. } => match nn_escape_table(&bd, p) {
                Ok(v) => v,
                Err(_) => continue,
            },
            _ => continue,
        };
        report.push(format!("case {i}"), counted == regional, 0.0);
    }
    report
}

/// Curated off-surface points spanning the distinct regions of the reduced
/// ND chart. One representative per nonempty region.
pub fn curated_nd_points() -> Vec<(f64, f64)> {
    vec![
        (-3.0, -4.5),
        (-3.0, -3.0),
        (-3.0, -1.7),
        (-3.0, -1.0),
        (-3.0, 1.0),
        (-3.0, 1.7),
        (-3.0, 3.0),
        (-1.0, 0.5),
        (-1.0, -0.5),
        (-1.0, 2.0),
        (-0.5, 0.2),
        (-0.5, -0.2),
        (-0.5, 1.0),
        (-0.5, -1.2),
        (-0.5, -2.0),
    ]
}

/// Curated off-surface NN points spanning distinct rows/columns of the
/// improper-merger and escape tables.
pub fn curated_nn_points() -> Vec<(Complex64, f64, f64)> {
    vec![
        (c(0.0, 0.5), 1.0, 0.0),
        (c(0.0, 0.5), 1.0, 1.0),
        (c(0.0, 0.5), 1.0, 1.44),
        (c(0.3, 0.2), -1.5, 1.0),
        (c(0.3, 0.2), -1.5, 2.1),
        (c(0.3, 0.2), -1.5, 2.3),
        (c(0.3, 0.2), -1.5, 2.6),
        (c(0.3, 0.2), -0.4, 0.2),
    ]
}

fn suite_branches(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("branches", seed);
    let nd = curated_nd_points();
    let nn = curated_nn_points();
    let take_nd = samples.min(nd.len());
    let take_nn = samples.min(nn.len());
    let mut cases: Vec<(String, swbec::BoundaryData)> = Vec::new();
    for &(m, q) in nd.iter().take(take_nd) {
        cases.push((
            format!("nd m={m} q={q}"),
            build(&nd_params_from_reduced(m, q, p)).unwrap(),
        ));
    }
    for &(mu, sigma, delta2) in nn.iter().take(take_nn) {
        cases.push((
            format!("nn mu={mu} sigma={sigma} delta2={delta2}"),
            build(&nn_params_from_reduced(mu, sigma, delta2)).unwrap(),
        ));
    }
    for (label, bd) in cases {
        let expected = (
            index_p(&bd, p).unwrap(),
            index_i(&bd, p).unwrap(),
            index_e(&bd, p).unwrap(),
        );
        match trace_branches(&bd, &TraceConfig::default(), p) {
            Ok(ebs) => {
                let got = count_mergers(&ebs);
                report.push(
                    format!("{label}: traced {got:?}, chart {expected:?}"),
                    got == expected,
                    0.0,
                );
            }
            Err(e) => report.push(format!("{label}: trace failed: {e}"), false, f64::NAN),
        }
    }
    let _ = seed;
    report
}

fn suite_chern(seed: u64, grid: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("chern", seed);
    let targets = [
        (BandLabel::Plus, 2.0),
        (BandLabel::Zero, 0.0),
        (BandLabel::Minus, -2.0),
    ];
    for (band, target) in targets {
        match chern_numeric(p, band, grid.max(64)) {
            Ok(value) => {
                let dev = (value - target).abs();
                report.push(format!("band {band:?}"), dev < 1e-3, dev);
            }
            Err(e) => report.push(format!("band {band:?} failed: {e}"), false, f64::NAN),
        }
    }
    report
}

fn suite_levinson(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("levinson", seed);
    let points: Vec<(String, swbec::BoundaryData)> = vec![
        (
            "dd".to_string(),
            build(&FamilyParams::dirichlet()).unwrap(),
        ),
        (
            "nd m=-1 q=1".to_string(),
            build(&nd_params_from_reduced(-1.0, 1.0, p)).unwrap(),
        ),
        (
            "nn mu=0.5i sigma=1 delta2=0".to_string(),
            build(&nn_params_from_reduced(c(0.0, 0.5), 1.0, 0.0)).unwrap(),
        ),
        (
            "nd m=-3 q=-1.7".to_string(),
            build(&nd_params_from_reduced(-3.0, -1.7, p)).unwrap(),
        ),
    ];
    for (label, bd) in points.into_iter().take(samples.max(1)) {
        let total = match levinson_sequence(&bd, -30.0, 30.0, 2048, p) {
            Ok((value, spread)) => {
                let int_dev = (value - value.round()).abs();
                report.push(
                    format!("{label}: finite winding {value:.3} (spread {spread:.3})"),
                    int_dev < 0.1 && spread < 0.1,
                    int_dev,
                );
                value
            }
            Err(e) => {
                report.push(format!("{label}: levinson failed: {e}"), false, f64::NAN);
                continue;
            }
        };
        match numeric_w_infty(&bd, 1e-3, 2048, p) {
            Ok(w_inf) => {
                let dev = (total + w_inf - 2.0).abs();
                report.push(
                    format!("{label}: W0+Winf = {:.3}", total + w_inf),
                    dev < 0.1,
                    dev,
                );
            }
            Err(e) => report.push(format!("{label}: W_inf failed: {e}"), false, f64::NAN),
        }
    }
    let _ = seed;
    report
}

fn suite_becregions(seed: u64, samples: usize, p: &PhysParams) -> Report {
    let mut report = Report::new("becregions", seed);
    let mut rng = rng_for(seed);
    let mut i = 0;
    while report.cases < samples {
        i += 1;
        // Alternate ND points and particle-hole symmetric NN points.
        if i % 2 == 0 {
            let m = rng.gen_range(-4.0..-0.02);
            let q = rng.gen_range(-3.0..3.0);
            let bd = build(&nd_params_from_reduced(m, q, p)).unwrap();
            let Ok(v) = index_vector(&bd, p) else { continue };
            if !v.on_surfaces.is_empty() {
                continue;
            }
            let inside = q.abs() < (m + 1.0).abs();
            report.push(
                format!("nd m={m:.3} q={q:.3}"),
                (v.verdict == Verdict::Holds) == inside,
                0.0,
            );
        } else {
            let mu = c(0.0, rng.gen_range(-1.5..1.5));
            let sigma = rng.gen_range(-2.0..2.0);
            let delta2 = rng.gen_range(0.0..3.0);
            let bd = build(&nn_params_from_reduced(mu, sigma, delta2)).unwrap();
            let Ok(v) = index_vector(&bd, p) else { continue };
            if !v.on_surfaces.is_empty() {
                continue;
            }
            let threshold = sigma * sigma - mu.norm_sqr() - p.nu() * p.nu();
            report.push(
                format!("nn sigma={sigma:.3} delta2={delta2:.3}"),
                (v.verdict == Verdict::Holds) == (delta2 > threshold),
                0.0,
            );
        }
    }
    report
}

/// Oracle-equivalence batch used by the acceptance gate: seeded off-surface
/// points with both windings compared to the closed forms.
pub fn winding_equivalence_batch(
    seed: u64,
    samples: usize,
    p: &PhysParams,
) -> Result<(usize, f64), String> {
    let mut rng = rng_for(seed);
    let mut checked = 0;
    let mut max_dev = 0.0_f64;
    while checked < samples {
        let (_, bd) = random_off_surface(&mut rng, p);
        let Some(b_exact) = swbec::indices::index_b(&bd).map_err(|e| e.to_string())? else {
            continue;
        };
        let p_exact = index_p(&bd, p).map_err(|e| e.to_string())?;
        let b_num = numeric_b(&bd, 1.0e3, 1 << 13).map_err(|e| e.to_string())?;
        let w_inf = numeric_w_infty(&bd, 1e-3, 2048, p).map_err(|e| e.to_string())?;
        let dev_b = (b_num - b_exact as f64).abs();
        let dev_p = (2.0 - w_inf - p_exact as f64).abs();
        if dev_b >= 0.05 || dev_p >= 0.05 {
            return Err(format!(
                "winding mismatch at case {checked}: B {b_num} vs {b_exact}, P {w_inf} vs {p_exact}"
            ));
        }
        max_dev = max_dev.max(dev_b).max(dev_p);
        checked += 1;
    }
    Ok((checked, max_dev))
}

/// Exact half-integer comparison batch for the winding calculus.
pub fn winding_calculus_batch(seed: u64, samples: usize) -> Result<(usize, usize), String> {
    let mut rng = rng_for(seed);
    let mut exact_matches = 0;
    for _ in 0..samples {
        let pc = random_clear_curve(&mut rng);
        let analytic = winding_n(&pc).map_err(|e| e.to_string())?;
        let numeric = numeric_parabola_winding(&pc, 1.0e4).map_err(|e| e.to_string())?;
        if analytic == numeric {
            exact_matches += 1;
        }
    }
    let _ = HalfInt::from_int(0);
    Ok((samples, exact_matches))
}
