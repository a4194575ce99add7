//! ζ(s) for real s > 1 with a rigorous absolute error bound.
//!
//! The default evaluator is Euler–Maclaurin: a direct sum to a cutoff plus
//! the integral term, the half-correction, and Bernoulli corrections, with
//! the remainder bounded by the first omitted term (valid for real s > 0).
//! A plain direct-sum-plus-integral-bracket evaluator is also provided; its
//! bound is far weaker but independent, which makes it a usable oracle.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::hp;

/// A ζ value together with a rigorous bound on its absolute error.
#[derive(Debug, Clone)]
pub struct ZetaValue {
    pub value: Float,
    pub error_bound: Float,
}

fn require_s_gt_1(s: &Float) -> Result<()> {
    if !(s.is_finite() && *s > 1u32) {
        return Err(Error::OutOfDomain {
            name: "s",
            value: hp::format_sig(s, 8),
            domain: "s > 1",
        });
    }
    Ok(())
}

/// Bernoulli numbers B_0..B_max as exact rationals (B_1 = −1/2 convention).
fn bernoulli_numbers(max: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(max + 1);
    b.push(Rational::from(1));
    for m in 1..=max {
        // B_m = −(1/(m+1)) Σ_{k<m} C(m+1, k) B_k
        let mut acc = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate().take(m) {
            acc += Rational::from((bk.numer() * &binom, bk.denom().clone()));
            // advance binom to C(m+1, k+1)
            binom *= (m + 1 - k) as u64;
            binom /= (k + 1) as u64;
        }
        acc /= -((m as i64) + 1);
        b.push(acc);
    }
    b
}

/// ζ(s) by Euler–Maclaurin at the requested precision.
///
/// The returned `error_bound` is rigorous: it is the first omitted
/// Euler–Maclaurin term plus a conservative rounding allowance for the
/// finitely many correctly-rounded MPFR operations performed. For s
/// bounded away from 1 the bound lands near 2^(8−precision)·max(1, ζ(s));
/// the guard worsens gracefully as s → 1⁺ because ζ itself blows up.
pub fn zeta(s: &Float, precision: u32) -> Result<ZetaValue> {
    require_s_gt_1(s)?;
    let wp = precision + 64;
    let s = Float::with_val(wp, s);
    let neg_s = -s.clone();

    let mut cutoff: u64 = (precision as u64 / 4).max(24);
    for _attempt in 0..6 {
        if let Some(v) = euler_maclaurin_attempt(&s, &neg_s, cutoff, precision, wp) {
            return Ok(v);
        }
        cutoff *= 2;
    }
    Err(Error::PrecisionInsufficient {
        detail: format!(
            "Euler-Maclaurin tail failed to reach 2^-{} even at cutoff {cutoff}",
            precision
        ),
    })
}

fn euler_maclaurin_attempt(
    s: &Float,
    neg_s: &Float,
    cutoff: u64,
    precision: u32,
    wp: u32,
) -> Option<ZetaValue> {
    // direct sum over k <= cutoff
    let mut sum = Float::new(wp);
    for k in 1..=cutoff {
        sum += Float::with_val(wp, k).pow(neg_s);
    }
    let i_f = Float::with_val(wp, cutoff);
    // integral term I^(1-s)/(s-1) and half-correction -I^(-s)/2
    let s_minus_1 = Float::with_val(wp, s - 1u32);
    let integral = i_f.clone().pow(&(1u32 - s.clone())) / &s_minus_1;
    let i_pow_neg_s = i_f.clone().pow(neg_s);
    let mut value = sum + &integral - Float::with_val(wp, &i_pow_neg_s / 2u32);

    // Bernoulli corrections: term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * I^(-s-2j+1)
    let target = {
        let mag = Float::with_val(wp, value.clone().abs()).max(&Float::with_val(wp, 1));
        mag * Float::with_val(wp, Float::i_exp(1, -((precision as i32) + 12)))
    };
    let j_max = 8 + (wp as usize) / 2;
    let bern = bernoulli_numbers(2 * j_max + 2);
    let mut factorial = Rational::from(1); // (2j)!
    let mut poch = Float::with_val(wp, 1); // s(s+1)...(s+2j-2), starts at empty product
    let mut i_shift = Float::with_val(wp, &i_pow_neg_s * &i_f); // I^(-s-2j+1), j=0 value I^(1-s)
    let i_sq_recip = Float::with_val(wp, i_f.square_ref()).recip();
    let mut prev_mag: Option<Float> = None;
    let mut steps = 0u64;
    for j in 1..=j_max {
        factorial *= Integer::from(2 * j - 1) * Integer::from(2 * j);
        poch *= if j == 1 {
            Float::with_val(wp, s)
        } else {
            let a = Float::with_val(wp, s + ((2 * j - 3) as u32));
            let b = Float::with_val(wp, s + ((2 * j - 2) as u32));
            a * b
        };
        i_shift *= &i_sq_recip;
        let coeff = Float::with_val(wp, &bern[2 * j]) / Float::with_val(wp, &factorial);
        let term = coeff * &poch * &i_shift;
        let mag = Float::with_val(wp, term.abs_ref());
        if mag <= target {
            // `term` is the first omitted one; it bounds the remainder.
            let ops = cutoff + 6 * steps + 16;
            let scale = Float::with_val(wp, value.abs_ref())
                + Float::with_val(wp, integral.abs_ref())
                + 2u32;
            let rounding = Float::with_val(wp, ops) * scale
                * Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 1));
            // the result is rounded once more from wp down to `precision`
            let final_rounding = Float::with_val(wp, value.abs_ref())
                * Float::with_val(wp, Float::i_exp(1, -(precision as i32) + 1));
            let bound = mag + rounding + final_rounding;
            return Some(ZetaValue {
                value: Float::with_val(precision, value),
                error_bound: Float::with_val(precision, bound),
            });
        }
        if let Some(prev) = &prev_mag {
            if mag > *prev {
                // asymptotic series started diverging; need a larger cutoff
                return None;
            }
        }
        prev_mag = Some(mag);
        value += term;
        steps += 1;
    }
    None
}

/// ζ(s) by direct summation of `terms` terms plus the integral bracket
/// [(T+1)^{1−s}, T^{1−s}]/(s−1) for the tail: the midpoint is returned and
/// half the bracket width (plus rounding) is the bound. Crude but
/// independent of the Euler–Maclaurin path.
pub fn zeta_direct_bracket(s: &Float, terms: u64, precision: u32) -> Result<ZetaValue> {
    require_s_gt_1(s)?;
    if terms < 1 {
        return Err(Error::OutOfDomain {
            name: "terms",
            value: "0".into(),
            domain: "terms >= 1",
        });
    }
    let wp = precision + 32;
    let s = Float::with_val(wp, s);
    let neg_s = -s.clone();
    let mut sum = Float::new(wp);
    for k in 1..=terms {
        sum += Float::with_val(wp, k).pow(&neg_s);
    }
    let one_minus_s = 1u32 - s.clone();
    let s_minus_1 = s.clone() - 1u32;
    let hi = Float::with_val(wp, terms).pow(&one_minus_s) / &s_minus_1;
    let lo = Float::with_val(wp, terms + 1).pow(&one_minus_s) / &s_minus_1;
    let mid = Float::with_val(wp, &hi + &lo) / 2u32;
    let half_width = Float::with_val(wp, &hi - &lo) / 2u32;
    let rounding = Float::with_val(wp, terms + 8)
        * (Float::with_val(wp, sum.abs_ref()) + 1u32)
        * Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 1));
    let value = sum + mid;
    let final_rounding = Float::with_val(wp, value.abs_ref())
        * Float::with_val(wp, Float::i_exp(1, -(precision as i32) + 1));
    Ok(ZetaValue {
        value: Float::with_val(precision, value),
        error_bound: Float::with_val(precision, half_width.abs() + rounding + final_rounding),
    })
}

pub fn zeta_f64(s: f64, precision: u32) -> Result<ZetaValue> {
    zeta(&Float::with_val(precision + 64, s), precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp;

    #[test]
    fn rejects_s_at_most_one() {
        assert!(zeta_f64(1.0, 64).is_err());
        assert!(zeta_f64(0.5, 64).is_err());
        assert!(zeta_f64(-2.0, 64).is_err());
    }

    #[test]
    fn zeta_2_matches_pi_squared_over_6() {
        let z = zeta_f64(2.0, 192).unwrap();
        let reference = hp::pi(256).square() / 6u32;
        let diff = Float::with_val(256, &z.value - &reference).abs();
        assert!(diff <= z.error_bound, "diff {diff} bound {}", z.error_bound);
        // the bound itself must be near the requested precision
        assert!(z.error_bound < Float::with_val(64, Float::i_exp(1, -170)));
    }

    #[test]
    fn zeta_4_matches_pi_fourth_over_90() {
        let z = zeta_f64(4.0, 192).unwrap();
        let reference = hp::pi(256).square().square() / 90u32;
        let diff = Float::with_val(256, &z.value - &reference).abs();
        assert!(diff <= z.error_bound);
    }

    #[test]
    fn two_precisions_agree_near_one() {
        let lo = zeta_f64(1.0001, 96).unwrap();
        let hi = zeta_f64(1.0001, 224).unwrap();
        let diff = Float::with_val(256, &lo.value - &hi.value).abs();
        assert!(diff <= lo.error_bound);
        assert!(lo.value > 9999.0); // ζ(1+ε) ≈ 1/ε + γ
    }

    #[test]
    fn bracket_oracle_agrees_with_euler_maclaurin() {
        for s in [1.5f64, 2.0, 3.25, 6.0] {
            let em = zeta_f64(s, 128).unwrap();
            let br = zeta_direct_bracket(&Float::with_val(160, s), 4000, 64).unwrap();
            let diff = Float::with_val(192, &em.value - &br.value).abs();
            let allowed = Float::with_val(192, &br.error_bound + &em.error_bound);
            assert!(diff <= allowed, "s={s}: diff {diff} > {allowed}");
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], Rational::from(1));
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[3], Rational::from(0));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[12], Rational::from((-691, 2730)));
    }
}
