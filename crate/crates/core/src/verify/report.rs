//! Verification reports: one object per identity check, serializable to
//! JSON (stable key order, floats fixed at 20 significant digits), CSV, or
//! a human-readable table.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::Float;
use serde::Serialize;
use serde_json::Value;

use crate::hp;

/// The paper-level identity a report certifies. Several operations can
/// target the same identity at different framings (point values vs series
/// coefficients); the report's `operation` field records which one ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityId {
    #[serde(rename = "PNT_COEFF_DECAY")]
    PntCoeffDecay,
    #[serde(rename = "SIGMA_ZETA")]
    SigmaZeta,
    #[serde(rename = "ZETA_RATIO")]
    ZetaRatio,
    #[serde(rename = "R2_SERIES")]
    R2Series,
    #[serde(rename = "THETA_SQUARE")]
    ThetaSquare,
    #[serde(rename = "PI_OVER_4")]
    PiOver4,
    #[serde(rename = "BOUNDARY_STUDY")]
    BoundaryStudy,
}

impl IdentityId {
    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::PntCoeffDecay => "PNT_COEFF_DECAY",
            IdentityId::SigmaZeta => "SIGMA_ZETA",
            IdentityId::ZetaRatio => "ZETA_RATIO",
            IdentityId::R2Series => "R2_SERIES",
            IdentityId::ThetaSquare => "THETA_SQUARE",
            IdentityId::PiOver4 => "PI_OVER_4",
            IdentityId::BoundaryStudy => "BOUNDARY_STUDY",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "PNT_COEFF_DECAY" => Ok(IdentityId::PntCoeffDecay),
            "SIGMA_ZETA" => Ok(IdentityId::SigmaZeta),
            "ZETA_RATIO" => Ok(IdentityId::ZetaRatio),
            "R2_SERIES" => Ok(IdentityId::R2Series),
            "THETA_SQUARE" => Ok(IdentityId::ThetaSquare),
            "PI_OVER_4" => Ok(IdentityId::PiOver4),
            "BOUNDARY_STUDY" => Ok(IdentityId::BoundaryStudy),
            other => Err(format!("unknown identity id {other:?}")),
        }
    }
}

/// Where a tolerance comes from: a rigorous bound (with its formula spelled
/// out) or an empirically calibrated threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ToleranceProvenance {
    #[serde(rename = "rigorous-bound")]
    RigorousBound { formula: String },
    #[serde(rename = "calibrated")]
    Calibrated,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub identity_id: IdentityId,
    pub operation: String,
    pub parameters: BTreeMap<String, String>,
    pub residual: String,
    pub tolerance: String,
    pub tolerance_provenance: ToleranceProvenance,
    pub pass: bool,
    pub runtime_ms: u64,
    pub details: Value,
    #[serde(skip)]
    pub residual_value: f64,
    #[serde(skip)]
    pub tolerance_value: f64,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

impl VerificationReport {
    /// The pass flag must always be recomputable from the serialized pair.
    pub fn pass_is_consistent(&self) -> bool {
        self.pass == (self.residual_value <= self.tolerance_value)
    }
}

/// Accumulates parameters and details for a report, then fixes residual
/// against tolerance; `pass` is derived, never set by hand.
pub struct ReportBuilder {
    identity_id: IdentityId,
    operation: String,
    parameters: BTreeMap<String, String>,
    details: serde_json::Map<String, Value>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(identity_id: IdentityId, operation: &str) -> Self {
        ReportBuilder {
            identity_id,
            operation: operation.to_string(),
            parameters: BTreeMap::new(),
            details: serde_json::Map::new(),
            started: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn detail(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn finish(
        self,
        residual: &Float,
        tolerance: &Float,
        provenance: ToleranceProvenance,
    ) -> VerificationReport {
        let pass = residual <= tolerance;
        VerificationReport {
            schema_version: REPORT_SCHEMA_VERSION,
            identity_id: self.identity_id,
            operation: self.operation,
            parameters: self.parameters,
            residual: hp::format_report(residual),
            tolerance: hp::format_report(tolerance),
            tolerance_provenance: provenance,
            pass,
            runtime_ms: self.started.elapsed().as_millis() as u64,
            details: Value::Object(self.details),
            residual_value: residual.to_f64(),
            tolerance_value: tolerance.to_f64(),
        }
    }
}

/// JSON array of reports, pretty-printed; key order and float formatting
/// are fixed, so identical runs serialize byte-identically (runtime_ms is
/// the one field excluded from that contract).
pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("report serialization cannot fail")
}

/// Flat CSV of reports (no details column).
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("identity,operation,pass,residual,tolerance,provenance,runtime_ms\n");
    for r in reports {
        let prov = match &r.tolerance_provenance {
            ToleranceProvenance::RigorousBound { .. } => "rigorous-bound",
            ToleranceProvenance::Calibrated => "calibrated",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.identity_id, r.operation, r.pass, r.residual, r.tolerance, prov, r.runtime_ms
        ));
    }
    out
}

/// Aligned human-readable summary, one line per report.
pub fn reports_to_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<16} {:<22} {:<5} {:<26} {:<26} {}\n",
        "identity", "operation", "pass", "residual", "tolerance", "ms"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<16} {:<22} {:<5} {:<26} {:<26} {}\n",
            r.identity_id.to_string(),
            r.operation,
            r.pass,
            r.residual,
            r.tolerance,
            r.runtime_ms
        ));
    }
    out
}

/// CSV of a boundary grid with the fixed header `N,r,theta,abs_PN`.
pub fn grid_to_csv(rows: &[crate::cyclotomic::GridRow]) -> String {
    let mut out = String::from("N,r,theta,abs_PN\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n_terms,
            row.radius,
            hp::format_report(&row.theta),
            hp::format_report(&row.abs_value)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_list_serializes_to_brackets() {
        assert_eq!(reports_to_json(&[]), "[]");
    }

    #[test]
    fn pass_follows_residual_vs_tolerance() {
        let r = ReportBuilder::new(IdentityId::ThetaSquare, "verify_theta_square")
            .param("order", 10)
            .finish(
                &Float::with_val(64, 0),
                &Float::with_val(64, 0),
                ToleranceProvenance::RigorousBound {
                    formula: "exact integer equality".into(),
                },
            );
        assert!(r.pass);
        assert!(r.pass_is_consistent());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["identity_id"], "THETA_SQUARE");
        assert_eq!(json["pass"], true);
        assert_eq!(json["tolerance_provenance"]["kind"], "rigorous-bound");

        let f = ReportBuilder::new(IdentityId::PiOver4, "verify_pi_over_4").finish(
            &Float::with_val(64, 2),
            &Float::with_val(64, 1),
            ToleranceProvenance::Calibrated,
        );
        assert!(!f.pass);
        assert!(f.pass_is_consistent());
    }

    #[test]
    fn identity_ids_round_trip() {
        for id in [
            IdentityId::PntCoeffDecay,
            IdentityId::SigmaZeta,
            IdentityId::ZetaRatio,
            IdentityId::R2Series,
            IdentityId::ThetaSquare,
            IdentityId::PiOver4,
            IdentityId::BoundaryStudy,
        ] {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("NOT_AN_ID".parse::<IdentityId>().is_err());
    }
}
