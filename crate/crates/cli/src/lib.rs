//! Library backing the `swbec` command-line tool: configuration parsing,
//! chart sweeps, seeded verification suites, and CSV/JSON serialization.

pub mod chart;
pub mod config;
pub mod report;
pub mod suites;

use swbec::bulk::PhysParams;
use swbec::oracles::{EdgeBranchSet, TraceConfig};

/// Render a traced branch set as CSV (`branch_id, kx, omega, annotation`).
pub fn trace_to_csv(ebs: &EdgeBranchSet) -> String {
    let mut out = String::from("branch_id,kx,omega,annotation\n");
    for (id, branch) in ebs.branches.iter().enumerate() {
        let annotation = branch.annotation();
        for pt in &branch.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                id,
                chart::fmt_f64(pt.kx),
                chart::fmt_f64(pt.omega),
                annotation
            ));
        }
    }
    out
}

/// Human-readable classification line: family, symmetry flag and the real
/// momenta where the fibers lose self-adjointness.
pub fn classify_line(bd: &swbec::BoundaryData, tol: f64) -> Result<String, String> {
    let family = swbec::boundary::classify(bd, tol);
    let phs = swbec::boundary::is_phs(bd, 24);
    let failures = swbec::boundary::rank_failures(bd).map_err(|e| e.to_string())?;
    let rendered: Vec<String> = failures.iter().map(|kx| format!("{kx}")).collect();
    Ok(format!(
        "{family}, PHS={}, failures=[{}]",
        if phs { "yes" } else { "no" },
        rendered.join(", ")
    ))
}

/// Human-readable index line matching the documented output shape.
pub fn indices_line(bd: &swbec::BoundaryData, p: &PhysParams) -> Result<String, String> {
    let v = swbec::indices::index_vector(bd, p).map_err(|e| e.to_string())?;
    let b = v
        .b
        .map(|b| b.to_string())
        .unwrap_or_else(|| "undefined".to_string());
    Ok(format!(
        "P={} I={} E={} B={} M={} BEC={}",
        v.p, v.i, v.e, b, v.m, v.verdict
    ))
}

/// Run a branch trace with the given window.
pub fn run_trace(
    bd: &swbec::BoundaryData,
    cfg: &TraceConfig,
    p: &PhysParams,
) -> Result<String, String> {
    let ebs = swbec::oracles::trace_branches(bd, cfg, p).map_err(|e| e.to_string())?;
    Ok(trace_to_csv(&ebs))
}
