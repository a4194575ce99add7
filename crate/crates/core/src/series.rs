//! Truncated formal power series over exact rationals.
//!
//! A `RationalSeries` of order M stores coefficients for z¹..z^M plus a
//! separately-tracked constant term. All log-series produced here have a
//! vanishing constant term by construction (the generating products are
//! normalized to constant term 1); keeping the slot separate means a sign
//! or normalization slip shows up as a nonzero constant immediately
//! instead of silently shifting every exponent.
//!
//! Invariants:
//! - arithmetic is closed at the common order; mixed orders are an error
//! - equality is exact coefficientwise equality through order M

use rug::Rational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ramanujan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    order: usize,
    constant: Rational,
    /// coeffs[i] is the coefficient of z^{i+1}
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        RationalSeries {
            order,
            constant: Rational::new(),
            coeffs: vec![Rational::new(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Coefficient of z^m for 1 <= m <= order.
    pub fn coeff(&self, m: usize) -> &Rational {
        assert!(
            m >= 1 && m <= self.order,
            "coefficient index {m} outside 1..={}",
            self.order
        );
        &self.coeffs[m - 1]
    }

    pub fn set_coeff(&mut self, m: usize, value: Rational) {
        assert!(m >= 1 && m <= self.order);
        self.coeffs[m - 1] = value;
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        out.constant += &other.constant;
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let mut out = self.clone();
        out.constant -= &other.constant;
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = self.clone();
        out.constant *= factor;
        for c in out.coeffs.iter_mut() {
            *c *= factor;
        }
        out
    }

    /// JSON dump as numerator/denominator strings, low order first.
    pub fn to_json(&self) -> Value {
        let pair = |q: &Rational| json!([q.numer().to_string(), q.denom().to_string()]);
        json!({
            "order": self.order,
            "constant": pair(&self.constant),
            "coefficients": self.coeffs.iter().map(pair).collect::<Vec<_>>(),
        })
    }
}

/// Outcome of an exact coefficientwise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesComparison {
    Equal,
    /// Smallest differing exponent with both values (exponent 0 = constant).
    MismatchAt {
        exponent: usize,
        left: Rational,
        right: Rational,
    },
}

pub fn series_equal(a: &RationalSeries, b: &RationalSeries) -> Result<SeriesComparison> {
    a.check_order(b)?;
    if a.constant != b.constant {
        return Ok(SeriesComparison::MismatchAt {
            exponent: 0,
            left: a.constant.clone(),
            right: b.constant.clone(),
        });
    }
    for m in 1..=a.order {
        if a.coeff(m) != b.coeff(m) {
            return Ok(SeriesComparison::MismatchAt {
                exponent: m,
                left: a.coeff(m).clone(),
                right: b.coeff(m).clone(),
            });
        }
    }
    Ok(SeriesComparison::Equal)
}

/// Series of log(1 − z^i): −Σ_{k ≥ 1, ik ≤ M} z^{ik}/k.
pub fn log_one_minus_power(i: u64, order: usize) -> Result<RationalSeries> {
    if i == 0 {
        return Err(Error::OutOfDomain {
            name: "i",
            value: "0".into(),
            domain: "i >= 1",
        });
    }
    let mut out = RationalSeries::zero(order);
    let mut k = 1u64;
    while (i * k) as usize <= order {
        out.set_coeff((i * k) as usize, Rational::from((-1i64, k as i64)));
        k += 1;
    }
    Ok(out)
}

/// Series of log Φ̂ₙ(z): the coefficient of z^m is −cₙ(m)/m.
pub fn log_phi_hat_series(n: u64, order: usize) -> Result<RationalSeries> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let mut out = RationalSeries::zero(order);
    for m in 1..=order {
        let c = ramanujan::cn(n, m as u64);
        if c != 0 {
            out.set_coeff(m, Rational::from((-c, m as i64)));
        }
    }
    Ok(out)
}

/// Series of log P_N(z) = −Σ_{n≤N} log Φ̂ₙ(z)/n, summed term by term; the
/// coefficient of z^m comes out as S_N(m)/m exactly.
pub fn log_truncated_product_series(n_terms: u64, order: usize) -> Result<RationalSeries> {
    if n_terms == 0 {
        return Err(Error::OutOfDomain {
            name: "n_terms",
            value: "0".into(),
            domain: ">= 1",
        });
    }
    if (n_terms as u128) * (order as u128) > 50_000_000 {
        return Err(Error::ResourceExhausted {
            detail: format!("series sum of {n_terms} x {order} rational terms over budget"),
        });
    }
    let mut acc = RationalSeries::zero(order);
    for n in 1..=n_terms {
        let s = log_phi_hat_series(n, order)?;
        acc = acc.sub(&s.scale(&Rational::from((1, n))))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn mercator_series() {
        let s = log_one_minus_power(1, 3).unwrap();
        assert_eq!(*s.coeff(1), q(-1, 1));
        assert_eq!(*s.coeff(2), q(-1, 2));
        assert_eq!(*s.coeff(3), q(-1, 3));
        assert!(s.constant().is_zero());
    }

    #[test]
    fn powers_beyond_order_vanish() {
        let s = log_one_minus_power(2, 5).unwrap();
        assert_eq!(*s.coeff(2), q(-1, 1));
        assert_eq!(*s.coeff(4), q(-1, 2));
        assert!(s.coeff(1).is_zero() && s.coeff(3).is_zero() && s.coeff(5).is_zero());
        let t = log_one_minus_power(7, 5).unwrap();
        assert_eq!(t, RationalSeries::zero(5));
    }

    #[test]
    fn log_phi_hat_series_examples() {
        // n = 1: c_1(m) = 1, so this is exactly log(1 − z)
        let a = log_phi_hat_series(1, 3).unwrap();
        let b = log_one_minus_power(1, 3).unwrap();
        assert_eq!(series_equal(&a, &b).unwrap(), SeriesComparison::Equal);

        // n = 2: c_2(m) = (−1)^m, giving the log(1 + z) series
        let s = log_phi_hat_series(2, 4).unwrap();
        assert_eq!(*s.coeff(1), q(1, 1));
        assert_eq!(*s.coeff(2), q(-1, 2));
        assert_eq!(*s.coeff(3), q(1, 3));
        assert_eq!(*s.coeff(4), q(-1, 4));

        // n = 4: coefficient of z² is −c_4(2)/2 = 1
        let s = log_phi_hat_series(4, 4).unwrap();
        assert_eq!(*s.coeff(2), q(1, 1));
    }

    #[test]
    fn log_series_constant_terms_vanish() {
        for n in 1..=20u64 {
            assert!(log_phi_hat_series(n, 12).unwrap().constant().is_zero());
            assert!(log_one_minus_power(n, 12).unwrap().constant().is_zero());
        }
        assert!(log_truncated_product_series(50, 12)
            .unwrap()
            .constant()
            .is_zero());
    }

    #[test]
    fn truncated_product_series_small_cases() {
        // N = 1: only Φ̂₁ contributes, so the result is −log(1−z): z^m/m
        let s = log_truncated_product_series(1, 6).unwrap();
        for m in 1..=6usize {
            assert_eq!(*s.coeff(m), q(1, m as i64));
        }
        // N = 2: coefficient of z¹ is S_2(1) = 1 − 1/2 = 1/2
        let s = log_truncated_product_series(2, 2).unwrap();
        assert_eq!(*s.coeff(1), q(1, 2));
    }

    #[test]
    fn mismatch_reporting() {
        let a = log_one_minus_power(1, 4).unwrap();
        let mut b = a.clone();
        b.set_coeff(3, q(7, 1));
        match series_equal(&a, &b).unwrap() {
            SeriesComparison::MismatchAt {
                exponent,
                left,
                right,
            } => {
                assert_eq!(exponent, 3);
                assert_eq!(left, q(-1, 3));
                assert_eq!(right, q(7, 1));
            }
            SeriesComparison::Equal => panic!("should differ"),
        }
        assert_eq!(series_equal(&a, &a).unwrap(), SeriesComparison::Equal);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = RationalSeries::zero(3);
        let b = RationalSeries::zero(4);
        assert!(series_equal(&a, &b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn divisor_sums_collapse_to_geometric_tail() {
        // Σ_{d|n} log Φ̂_d has coefficient −(n/m) at z^m when n | m, else 0
        for n in 1..=50u64 {
            let order = 40usize;
            let mut acc = RationalSeries::zero(order);
            for d in crate::arith::factorize(n).unwrap().divisors() {
                acc = acc.add(&log_phi_hat_series(d, order).unwrap()).unwrap();
            }
            for m in 1..=order {
                let expect = if m as u64 % n == 0 {
                    q(-(n as i64), m as i64)
                } else {
                    Rational::new()
                };
                assert_eq!(*acc.coeff(m), expect, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn json_dump_uses_string_pairs() {
        let s = log_one_minus_power(1, 2).unwrap();
        let v = s.to_json();
        assert_eq!(v["order"], 2);
        assert_eq!(v["constant"][0], "0");
        assert_eq!(v["coefficients"][1][0], "-1");
        assert_eq!(v["coefficients"][1][1], "2");
    }
}
