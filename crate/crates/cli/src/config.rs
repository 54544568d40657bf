//! Flat `key = value` configuration files describing a boundary condition
//! and the physical parameters. The format is deliberately free of any
//! ecosystem dependency so that configurations can be produced from any
//! language.

use num_complex::Complex64;
use swbec::algebra::{c, C2};
use swbec::boundary::FamilyParams;
use swbec::bulk::PhysParams;
use swbec::Family;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Malformed { line: usize, text: String },
    UnknownKey(String),
    BadValue { key: String, value: String },
    MissingKey(&'static str),
    BadParams(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {e}"),
            ConfigError::Malformed { line, text } => {
                write!(f, "line {line} is not `key = value`: {text:?}")
            }
            ConfigError::UnknownKey(k) => write!(f, "unknown config key {k:?}"),
            ConfigError::BadValue { key, value } => {
                write!(f, "cannot parse value {value:?} for key {key:?}")
            }
            ConfigError::MissingKey(k) => write!(f, "missing required key {k:?}"),
            ConfigError::BadParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parsed configuration with defaults applied lazily on conversion.
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: Vec<(String, String)>,
}

const KNOWN_KEYS: &[&str] = &[
    "family",
    "phys.f",
    "phys.nu",
    "nd.alpha_re",
    "nd.alpha_im",
    "nd.lambda",
    "nd.lambda_p",
    "dn.alpha_re",
    "dn.alpha_im",
    "dn.lambda",
    "dn.lambda_p",
    "nn.mu_re",
    "nn.mu_im",
    "nn.mup_re",
    "nn.mup_im",
    "nn.l1",
    "nn.l2",
    "nn.l1p",
    "nn.l2p",
    "dd.a1p",
    "dd.a2p",
    "dd.b1",
    "dd.b2",
    "tol.classify",
];

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey(key));
            }
            entries.push((key, value.trim().to_string()));
        }
        Ok(Config { entries })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        Self::parse(&text)
    }

    /// Apply a `key=value` override (command-line mirror of the file keys).
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(ConfigError::Malformed {
                line: 0,
                text: assignment.to_string(),
            });
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(key));
        }
        self.entries.push((key, value.trim().to_string()));
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn get_f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: v.to_string(),
            }),
        }
    }

    fn get_c2(&self, key: &str, default: C2) -> Result<C2, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => {
                let parts: Result<Vec<f64>, _> =
                    v.split(',').map(|s| s.trim().parse::<f64>()).collect();
                match parts {
                    Ok(xs) if xs.len() == 4 => Ok(C2::new(c(xs[0], xs[1]), c(xs[2], xs[3]))),
                    _ => Err(ConfigError::BadValue {
                        key: key.to_string(),
                        value: v.to_string(),
                    }),
                }
            }
        }
    }

    pub fn phys(&self) -> Result<PhysParams, ConfigError> {
        let f = self.get_f64("phys.f", 1.0)?;
        let nu = self.get_f64("phys.nu", 0.2)?;
        PhysParams::new(f, nu).map_err(|e| ConfigError::BadParams(e.to_string()))
    }

    pub fn classify_tol(&self) -> Result<f64, ConfigError> {
        self.get_f64("tol.classify", swbec::boundary::CLASSIFY_TOL)
    }

    pub fn family(&self) -> Result<Family, ConfigError> {
        match self.get("family") {
            None => Err(ConfigError::MissingKey("family")),
            Some(v) => match v.to_ascii_uppercase().as_str() {
                "DD" => Ok(Family::DD),
                "ND" => Ok(Family::ND),
                "DN" => Ok(Family::DN),
                "NN" => Ok(Family::NN),
                _ => Err(ConfigError::BadValue {
                    key: "family".to_string(),
                    value: v.to_string(),
                }),
            },
        }
    }

    fn complex(&self, re_key: &str, im_key: &str) -> Result<Complex64, ConfigError> {
        Ok(c(self.get_f64(re_key, 0.0)?, self.get_f64(im_key, 0.0)?))
    }

    /// Assemble the family parameters described by the configuration.
    pub fn family_params(&self) -> Result<FamilyParams, ConfigError> {
        match self.family()? {
            Family::DD => Ok(FamilyParams::Dd {
                a1p: self.get_c2("dd.a1p", C2::from_re(1.0, 0.0))?,
                a2p: self.get_c2("dd.a2p", C2::from_re(0.0, 1.0))?,
                b1: self.get_c2("dd.b1", C2::zero())?,
                b2: self.get_c2("dd.b2", C2::zero())?,
            }),
            Family::ND => Ok(FamilyParams::nd(
                self.complex("nd.alpha_re", "nd.alpha_im")?,
                self.get_f64("nd.lambda", 0.0)?,
                self.get_f64("nd.lambda_p", 0.0)?,
            )),
            Family::DN => Ok(FamilyParams::dn(
                self.complex("dn.alpha_re", "dn.alpha_im")?,
                self.get_f64("dn.lambda", 0.0)?,
                self.get_f64("dn.lambda_p", 0.0)?,
            )),
            Family::NN => Ok(FamilyParams::nn(
                self.complex("nn.mu_re", "nn.mu_im")?,
                self.complex("nn.mup_re", "nn.mup_im")?,
                self.get_f64("nn.l1", 0.0)?,
                self.get_f64("nn.l2", 0.0)?,
                self.get_f64("nn.l1p", 0.0)?,
                self.get_f64("nn.l2p", 0.0)?,
            )),
        }
    }
}

/// Render family parameters and physical constants in the config format;
/// parsing the result reproduces the same boundary condition.
pub fn render_config(fp: &FamilyParams, phys: &PhysParams) -> String {
    let mut out = String::new();
    out.push_str(&format!("phys.f = {:.17}\nphys.nu = {:.17}\n", phys.f(), phys.nu()));
    match *fp {
        FamilyParams::Dd { a1p, a2p, b1, b2 } => {
            out.push_str("family = dd\n");
            for (key, v) in [("dd.a1p", a1p), ("dd.a2p", a2p), ("dd.b1", b1), ("dd.b2", b2)] {
                out.push_str(&format!(
                    "{key} = {:.17},{:.17},{:.17},{:.17}\n",
                    v.x.re, v.x.im, v.y.re, v.y.im
                ));
            }
        }
        FamilyParams::Nd { alpha, lambda, lambda_p, .. } => {
            out.push_str("family = nd\n");
            out.push_str(&format!("nd.alpha_re = {:.17}\nnd.alpha_im = {:.17}\n", alpha.re, alpha.im));
            out.push_str(&format!("nd.lambda = {lambda:.17}\nnd.lambda_p = {lambda_p:.17}\n"));
        }
        FamilyParams::Dn { alpha, lambda, lambda_p, .. } => {
            out.push_str("family = dn\n");
            out.push_str(&format!("dn.alpha_re = {:.17}\ndn.alpha_im = {:.17}\n", alpha.re, alpha.im));
            out.push_str(&format!("dn.lambda = {lambda:.17}\ndn.lambda_p = {lambda_p:.17}\n"));
        }
        FamilyParams::Nn { mu, mup, l1, l2, l1p, l2p, .. } => {
            out.push_str("family = nn\n");
            out.push_str(&format!("nn.mu_re = {:.17}\nnn.mu_im = {:.17}\n", mu.re, mu.im));
            out.push_str(&format!("nn.mup_re = {:.17}\nnn.mup_im = {:.17}\n", mup.re, mup.im));
            out.push_str(&format!("nn.l1 = {l1:.17}\nnn.l2 = {l2:.17}\n"));
            out.push_str(&format!("nn.l1p = {l1p:.17}\nnn.l2p = {l2p:.17}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nd_config() {
        let cfg = Config::parse(
            "family = nd\nphys.f = 1.0\nphys.nu = 0.2\nnd.lambda = -0.1 # comment\n",
        )
        .unwrap();
        assert_eq!(cfg.family().unwrap(), Family::ND);
        let fp = cfg.family_params().unwrap();
        match fp {
            FamilyParams::Nd { lambda, .. } => assert_eq!(lambda, -0.1),
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_unknown_key() {
        let err = Config::parse("family = nd\nnd.lambd = 1\n").unwrap_err();
        match err {
            ConfigError::UnknownKey(k) => assert_eq!(k, "nd.lambd"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let phys = PhysParams::new(1.0, 0.2).unwrap();
        let cases = [
            FamilyParams::dirichlet(),
            FamilyParams::nd(c(0.3, -0.7), 0.9, -0.2),
            FamilyParams::dn(c(-0.1, 0.4), -1.3, 0.8),
            FamilyParams::nn(c(0.3, 0.5), c(-0.2, 0.1), 1.2, -0.7, 0.3, 0.6),
        ];
        for fp in cases {
            let text = render_config(&fp, &phys);
            let cfg = Config::parse(&text).unwrap();
            let back = cfg.family_params().unwrap();
            let (a, b) = (
                swbec::boundary::build(&fp).unwrap(),
                swbec::boundary::build(&back).unwrap(),
            );
            // Canonical-gauge constructors make orbit equality literal
            // equality for ND/NN/DN; DD round-trips its raw vectors.
            assert!(swbec::boundary::orbit_equivalent(&a, &b, 16), "{text}");
        }
        assert!((cfg_f(&render_config(&cases[1], &phys)) - 1.0).abs() < 1e-15);
    }

    fn cfg_f(text: &str) -> f64 {
        Config::parse(text).unwrap().phys().unwrap().f()
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = Config::parse("family = nd\nnd.lambda = 1.0\n").unwrap();
        cfg.set("nd.lambda=2.5").unwrap();
        match cfg.family_params().unwrap() {
            FamilyParams::Nd { lambda, .. } => assert_eq!(lambda, 2.5),
            _ => panic!(),
        }
    }
}
