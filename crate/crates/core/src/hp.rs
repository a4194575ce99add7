//! High-precision arithmetic plumbing on top of MPFR/MPC (via `rug`).
//!
//! Every public operation in this crate that takes a `precision` argument
//! interprets it as the number of significand bits the *result* is good for.
//! Internally values are carried at `precision + GUARD_BITS` (plus a term
//! for accumulation length where loops are long), and rounded once at the
//! end. `rug::Float` / `rug::Complex` carry their precision per value, so
//! the stated-precision invariant is enforced by construction.

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Default working precision in bits for all verifiers and evaluators.
pub const DEFAULT_PRECISION: u32 = 128;

/// Guard bits added on top of the requested precision for intermediates.
pub const GUARD_BITS: u32 = 32;

/// Significant decimal digits used when fixing floats into reports and CSV.
pub const REPORT_SIG_DIGITS: usize = 20;

/// Working precision for a computation that accumulates about `terms` terms.
pub fn working_precision(precision: u32, terms: u64) -> u32 {
    let len_bits = 64 - terms.max(1).leading_zeros();
    precision + GUARD_BITS + len_bits
}

pub fn pi(precision: u32) -> Float {
    Float::with_val(precision, Constant::Pi)
}

/// e^{2πik/n} at the given precision.
pub fn root_of_unity(n: u64, k: u64, precision: u32) -> Complex {
    let two_pi = Float::with_val(precision, Constant::Pi) * 2u32;
    let angle = two_pi * Float::with_val(precision, k) / Float::with_val(precision, n);
    let (sin, cos) = angle.sin_cos(Float::new(precision));
    Complex::with_val(precision, (cos, sin))
}

/// Principal complex logarithm (imaginary part in (−π, π]).
pub fn principal_log(z: &Complex) -> Complex {
    z.clone().ln()
}

pub fn complex_abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Checks |z| < 1 strictly, returning the modulus for error reporting.
pub fn require_inside_unit_disk(z: &Complex) -> Result<()> {
    let norm = Float::with_val(z.prec().0, z.norm_ref());
    if norm >= 1u32 {
        return Err(Error::OutsideUnitDisk {
            modulus: format_sig(&norm.sqrt(), 6),
        });
    }
    Ok(())
}

/// Deterministic decimal rendering with a fixed number of significant digits.
///
/// MPFR's conversion is exact-directed, so the output depends only on the
/// value and the digit count, never on platform or build flags.
pub fn format_sig(x: &Float, sig_digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (sign, digits, exp) = x.to_sign_string_exp(10, Some(sig_digits));
    let exp = exp.expect("finite nonzero value has an exponent");
    let sign = if sign { "-" } else { "" };
    // digits is a bare significand like "16449340668482264365"; present it as
    // d.ddd...e<exp-1> so the value round-trips unambiguously.
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{}", exp - 1)
    } else {
        format!("{sign}{head}.{tail}e{}", exp - 1)
    }
}

/// Render for reports at the fixed report width.
pub fn format_report(x: &Float) -> String {
    format_sig(x, REPORT_SIG_DIGITS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_unity_fourth() {
        let z = root_of_unity(4, 1, 128);
        assert!(z.real().clone().abs() < 1e-30);
        assert!((z.imag().clone() - 1u32).abs() < 1e-30);
    }

    #[test]
    fn root_of_unity_is_periodic() {
        let a = root_of_unity(6, 1, 128);
        let b = root_of_unity(6, 7, 128);
        let d = Float::with_val(128, (a - b).abs_ref());
        assert!(d < 1e-35);
    }

    #[test]
    fn principal_log_branch() {
        // Log(-1 + 0i) = iπ, on the branch boundary.
        let z = Complex::with_val(128, (-1, 0));
        let l = principal_log(&z);
        let pi = pi(128);
        assert!((l.imag().clone() - pi).abs() < 1e-35);
    }

    #[test]
    fn format_sig_is_stable() {
        let x = Float::with_val(128, 1) / 3u32;
        assert_eq!(format_sig(&x, 5), "3.3333e-1");
        let y = Float::with_val(128, -1250);
        assert_eq!(format_sig(&y, 3), "-1.25e3");
        assert_eq!(format_sig(&Float::with_val(64, 0), 5), "0");
    }

    #[test]
    fn unit_disk_check() {
        let inside = Complex::with_val(64, (0.6, 0.6));
        assert!(require_inside_unit_disk(&inside).is_ok());
        let outside = Complex::with_val(64, (0.8, 0.7));
        assert!(require_inside_unit_disk(&outside).is_err());
        let boundary = Complex::with_val(64, (1, 0));
        assert!(require_inside_unit_disk(&boundary).is_err());
    }
}
