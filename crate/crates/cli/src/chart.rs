//! Phase-chart sweeps over reduced boundary-condition parameters, emitted
//! as CSV with one row per grid point.

use rayon::prelude::*;
use swbec::algebra::c;
use swbec::boundary::build;
use swbec::bulk::PhysParams;
use swbec::indices::{index_vector, nd_params_from_reduced, nn_params_from_reduced, IndexVector};
use swbec::Family;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub name: AxisName,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisName {
    M,
    Q,
    Sigma,
    Delta2,
    MuRe,
    MuIm,
}

impl AxisName {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "m" => AxisName::M,
            "q" => AxisName::Q,
            "sigma" => AxisName::Sigma,
            "delta2" => AxisName::Delta2,
            "mu_re" => AxisName::MuRe,
            "mu_im" => AxisName::MuIm,
            _ => return None,
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            AxisName::M => "m",
            AxisName::Q => "q",
            AxisName::Sigma => "sigma",
            AxisName::Delta2 => "delta2",
            AxisName::MuRe => "mu_re",
            AxisName::MuIm => "mu_im",
        }
    }

    pub fn family(&self) -> Family {
        match self {
            AxisName::M | AxisName::Q => Family::ND,
            _ => Family::NN,
        }
    }
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 4 {
            return Err(format!("axis spec {spec:?} is not NAME:MIN:MAX:COUNT"));
        }
        let name = AxisName::parse(parts[0])
            .ok_or_else(|| format!("unknown axis name {:?}", parts[0]))?;
        let min: f64 = parts[1].parse().map_err(|_| format!("bad axis min in {spec:?}"))?;
        let max: f64 = parts[2].parse().map_err(|_| format!("bad axis max in {spec:?}"))?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| format!("bad axis count in {spec:?}"))?;
        if count < 1 {
            return Err("axis count must be at least 1".to_string());
        }
        Ok(Axis { name, min, max, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// A two-axis sweep request over a family's reduced coordinates.
#[derive(Debug, Clone)]
pub struct ChartRequest {
    pub family: Family,
    pub axis1: Axis,
    pub axis2: Axis,
    /// Fixed NN coordinates not covered by the axes.
    pub mu_re: f64,
    pub mu_im: f64,
    pub sigma: f64,
    pub delta2: f64,
    pub phys: PhysParams,
}

impl ChartRequest {
    pub fn validate(&self) -> Result<(), String> {
        for axis in [&self.axis1, &self.axis2] {
            if axis.name.family() != self.family {
                return Err(format!(
                    "axis {:?} does not belong to family {}",
                    axis.name.label(),
                    self.family
                ));
            }
        }
        if self.axis1.name == self.axis2.name {
            return Err("the two swept axes must differ".to_string());
        }
        Ok(())
    }
}

/// Deterministic full-precision float formatting (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn row_for(req: &ChartRequest, v1: f64, v2: f64) -> Result<IndexVector, String> {
    let mut mu_re = req.mu_re;
    let mut mu_im = req.mu_im;
    let mut sigma = req.sigma;
    let mut delta2 = req.delta2;
    let mut m = -1.0;
    let mut q = 0.0;
    for (axis, value) in [(&req.axis1, v1), (&req.axis2, v2)] {
        match axis.name {
            AxisName::M => m = value,
            AxisName::Q => q = value,
            AxisName::Sigma => sigma = value,
            AxisName::Delta2 => delta2 = value,
            AxisName::MuRe => mu_re = value,
            AxisName::MuIm => mu_im = value,
        }
    }
    let fp = match req.family {
        Family::ND => nd_params_from_reduced(m, q, &req.phys),
        Family::NN => nn_params_from_reduced(c(mu_re, mu_im), sigma, delta2),
        other => return Err(format!("family {other} has no chart axes")),
    };
    let bd = build(&fp).map_err(|e| e.to_string())?;
    index_vector(&bd, &req.phys).map_err(|e| e.to_string())
}

/// Run the sweep and render the CSV (header row mandatory, row-major over
/// axis1 then axis2, byte-stable for fixed inputs).
pub fn run_chart(req: &ChartRequest) -> Result<String, String> {
    req.validate()?;
    let v1 = req.axis1.values();
    let v2 = req.axis2.values();
    let rows: Vec<Result<String, String>> = v1
        .par_iter()
        .flat_map(|&a| v2.par_iter().map(move |&b| (a, b)))
        .map(|(a, b)| {
            let v = row_for(req, a, b)?;
            let b_field = v.b.map(|b| b.to_string()).unwrap_or_default();
            Ok(format!(
                "{},{},{},{},{},{},{},{},{}",
                fmt_f64(a),
                fmt_f64(b),
                v.p,
                v.i,
                v.e,
                b_field,
                v.m,
                v.verdict,
                if v.on_surfaces.is_empty() { 0 } else { 1 },
            ))
        })
        .collect();
    let mut out = String::new();
    out.push_str(&format!(
        "{},{},P,I,E,B,M,verdict,on_boundary\n",
        req.axis1.name.label(),
        req.axis2.name.label()
    ));
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_chart_degenerates_to_indices() {
        let req = ChartRequest {
            family: Family::ND,
            axis1: Axis { name: AxisName::M, min: -1.0, max: -1.0, count: 1 },
            axis2: Axis { name: AxisName::Q, min: 1.0, max: 1.0, count: 1 },
            mu_re: 0.0,
            mu_im: 0.0,
            sigma: 0.0,
            delta2: 0.0,
            phys: PhysParams::new(1.0, 0.2).unwrap(),
        };
        let csv = run_chart(&req).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("m,q,"));
        // (m, q) = (-1, 1): indices (2, 1, -1, 1), M = 3, violated.
        assert!(lines[1].ends_with(",2,1,-1,1,3,violated,0"), "{}", lines[1]);
    }

    #[test]
    fn chart_is_byte_stable() {
        let req = ChartRequest {
            family: Family::NN,
            axis1: Axis { name: AxisName::Sigma, min: -1.0, max: 1.0, count: 7 },
            axis2: Axis { name: AxisName::Delta2, min: 0.0, max: 2.0, count: 5 },
            mu_re: 0.0,
            mu_im: 0.5,
            sigma: 0.0,
            delta2: 0.0,
            phys: PhysParams::new(1.0, 0.2).unwrap(),
        };
        let a = run_chart(&req).unwrap();
        let b = run_chart(&req).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 7 * 5);
    }

    #[test]
    fn mismatched_axis_family_is_rejected() {
        let req = ChartRequest {
            family: Family::ND,
            axis1: Axis { name: AxisName::Sigma, min: 0.0, max: 1.0, count: 2 },
            axis2: Axis { name: AxisName::Q, min: 0.0, max: 1.0, count: 2 },
            mu_re: 0.0,
            mu_im: 0.0,
            sigma: 0.0,
            delta2: 0.0,
            phys: PhysParams::new(1.0, 0.2).unwrap(),
        };
        assert!(req.validate().is_err());
    }
}
