//! Calibrated acceptance thresholds, embedded from `defaults/calibrated.json`.
//!
//! The verified identities are limit statements with no usable rate, so
//! wherever no rigorous bound exists the pass thresholds were fixed once
//! from oracle runs at 10× the acceptance truncations (see the JSON file's
//! `derivation` notes) and are versioned with the crate. Rigorous bounds
//! (σ–ζ, θ²) never consult this file.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct PntDecayCalibration {
    /// Truncation the thresholds were fixed for.
    pub final_n: u64,
    /// Per-m thresholds on |S_N(m)| at final_n.
    pub thresholds: BTreeMap<u64, f64>,
    /// For m outside the table: threshold = fallback_per_sigma · σ(m).
    pub fallback_per_sigma: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AveragedSeriesCalibration {
    pub tolerance: f64,
    /// Fraction of the partial-sum history averaged at the tail.
    pub window_fraction: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RatioCalibration {
    pub tolerance: f64,
    /// Fraction of the partial-sum history averaged at the tail (0 disables).
    pub window_fraction: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PlainToleranceCalibration {
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct InteriorProductCalibration {
    /// |P_N(z) − 1| at the final checkpoint must fall below this.
    pub final_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BoundaryInteriorCalibration {
    /// Rows with radius ≤ radius_max and N ≥ min_n must sit this close to 1.
    pub radius_max: f64,
    pub min_n: u64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Calibration {
    pub version: u32,
    pub derivation: String,
    pub pnt_decay: PntDecayCalibration,
    pub r2_series: AveragedSeriesCalibration,
    pub r2_logderiv: AveragedSeriesCalibration,
    pub pi_over_4: RatioCalibration,
    pub zeta_ratio: PlainToleranceCalibration,
    pub interior_product: InteriorProductCalibration,
    pub boundary_interior: BoundaryInteriorCalibration,
}

impl Calibration {
    pub fn pnt_threshold(&self, m: u64, sigma_m: u64) -> f64 {
        match self.pnt_decay.thresholds.get(&m) {
            Some(&t) => t,
            None => self.pnt_decay.fallback_per_sigma * sigma_m as f64,
        }
    }
}

const EMBEDDED: &str = include_str!("../../defaults/calibrated.json");

/// The calibration shipped with this build.
pub fn default_calibration() -> &'static Calibration {
    static CAL: OnceLock<Calibration> = OnceLock::new();
    CAL.get_or_init(|| serde_json::from_str(EMBEDDED).expect("embedded calibration parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_calibration_loads() {
        let cal = default_calibration();
        assert_eq!(cal.version, 1);
        assert_eq!(cal.pnt_decay.final_n, 1_000_000);
        assert!(cal.pnt_decay.thresholds.len() >= 10);
        for m in 1..=10 {
            let t = cal.pnt_threshold(m, 0);
            assert!(t > 0.0 && t < 1.0, "threshold for m={m} is {t}");
        }
        // fallback path for uncalibrated m
        let t = cal.pnt_threshold(99, 156);
        assert!((t - cal.pnt_decay.fallback_per_sigma * 156.0).abs() < 1e-12);
        assert!(cal.r2_series.tolerance > 0.0);
        assert!(cal.zeta_ratio.tolerance > 0.0);
    }
}
