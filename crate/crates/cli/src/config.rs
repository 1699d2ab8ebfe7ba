//! JSON input files. Physical times carry their unit in the key name.

use std::path::Path;

use qmem_core::bounds::LogBase;
use qmem_core::codes::{Axis, BbPolynomial, CssCode};
use qmem_core::decoder_time::{GrowthLaw, OptimizerConfig};
use qmem_core::gf2::BinaryMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Decoder-time setup; omitted keys take the reference values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerFile {
    pub c1: Option<f64>,
    pub tau_c_ns: Option<f64>,
    pub tau_0_ns: Option<f64>,
    pub tau_r_us: Option<f64>,
    pub tau_d_us: Option<f64>,
    pub eps: Option<f64>,
    pub growth: Option<GrowthLaw>,
    pub grid_points: Option<usize>,
    pub refine_tol: Option<f64>,
    pub log_base: Option<LogBase>,
    pub n_ceiling: Option<f64>,
    pub contour: Option<ContourFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourFile {
    pub n_min: f64,
    pub n_max: f64,
    pub tau_min_ns: f64,
    pub tau_max_ns: f64,
    pub n_points: usize,
    pub tau_points: usize,
}

impl Default for ContourFile {
    fn default() -> Self {
        Self {
            n_min: 1e2,
            n_max: 1e10,
            tau_min_ns: 5.0,
            tau_max_ns: 150.0,
            n_points: 200,
            tau_points: 200,
        }
    }
}

/// Where a configuration value came from, reported alongside results.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigNotes {
    pub tau_0_ns: f64,
    /// The readout latency was not given and the default was used.
    pub tau_0_defaulted: bool,
}

impl OptimizerFile {
    pub fn resolve(&self) -> (OptimizerConfig, ConfigNotes) {
        let d = OptimizerConfig::default();
        let cfg = OptimizerConfig {
            c1: self.c1.unwrap_or(d.c1),
            tau_c: self.tau_c_ns.map_or(d.tau_c, |t| t * 1e-9),
            tau_0: self.tau_0_ns.map_or(d.tau_0, |t| t * 1e-9),
            tau_r: self.tau_r_us.map_or(d.tau_r, |t| t * 1e-6),
            tau_d: self.tau_d_us.map_or(d.tau_d, |t| t * 1e-6),
            eps: self.eps.unwrap_or(d.eps),
            growth: self.growth.unwrap_or(d.growth),
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            refine_tol: self.refine_tol.unwrap_or(d.refine_tol),
            log_base: self.log_base.unwrap_or(d.log_base),
            n_ceiling: self.n_ceiling.unwrap_or(d.n_ceiling),
        };
        let notes = ConfigNotes {
            tau_0_ns: cfg.tau_0 * 1e9,
            tau_0_defaulted: self.tau_0_ns.is_none(),
        };
        (cfg, notes)
    }
}

/// Check matrices as rows of '0'/'1' separated by newlines.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub h_x: String,
    pub h_z: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<qmem_core::codes::CodeCertificate>,
}

impl CodeFile {
    pub fn from_code(code: &CssCode) -> Self {
        Self {
            h_x: code.h_x.to_string(),
            h_z: code.h_z.to_string(),
            certificate: Some(code.certificate()),
        }
    }

    pub fn to_code(&self) -> Result<CssCode, CliError> {
        let h_x: BinaryMatrix = self.h_x.trim().parse()?;
        let h_z: BinaryMatrix = self.h_z.trim().parse()?;
        Ok(CssCode::new(h_x, h_z)?)
    }
}

/// Parameters of a bivariate bicycle code, e.g.
/// `{"l": 12, "m": 6, "a": "x^3 + y + y^2", "b": "y^3 + x + x^2"}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BbFile {
    pub l: usize,
    pub m: usize,
    pub a: String,
    pub b: String,
}

/// Parses `x^3 + y + y^2`; a bare `1` is `x^0`.
pub fn parse_polynomial(text: &str) -> Result<BbPolynomial, CliError> {
    let bad = || CliError::Validation(format!("cannot parse polynomial '{text}'"));
    let mut terms = Vec::new();
    for raw in text.split('+') {
        let t = raw.trim();
        if t == "1" {
            terms.push((Axis::X, 0));
            continue;
        }
        let axis = match t.chars().next() {
            Some('x') => Axis::X,
            Some('y') => Axis::Y,
            _ => return Err(bad()),
        };
        let rest = &t[1..];
        let exponent = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
        };
        terms.push((axis, exponent));
    }
    Ok(BbPolynomial { terms })
}

/// Inline check matrix: rows separated by ',', ';' or newlines.
pub fn parse_inline_matrix(text: &str) -> Result<BinaryMatrix, CliError> {
    let rows: Vec<&str> = text
        .split([',', ';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .collect();
    Ok(rows.join("\n").parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_syntax() {
        let p = parse_polynomial("x^3 + y + y^2").unwrap();
        assert_eq!(p.terms, vec![(Axis::X, 3), (Axis::Y, 1), (Axis::Y, 2)]);
        assert_eq!(parse_polynomial("1 + x + y^0").unwrap().terms.len(), 3);
        assert!(parse_polynomial("z^2").is_err());
        assert!(parse_polynomial("x3").is_err());
    }

    #[test]
    fn inline_matrix_separators() {
        let m = parse_inline_matrix("110; 011").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert!(parse_inline_matrix("12").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = serde_json::from_str::<OptimizerFile>(r#"{"tau_r": 49}"#);
        assert!(err.is_err());
        let ok: OptimizerFile = serde_json::from_str(r#"{"tau_r_us": 49}"#).unwrap();
        assert_eq!(ok.resolve().0.tau_r, 49e-6);
    }
}
