//! One verifier per identity. Each returns a `VerificationReport` whose
//! `pass` flag is derived from an explicit residual/tolerance pair:
//! rigorous bounds where the truncation error can be bounded by a formula
//! (σ–ζ, the product identity, θ²), calibrated thresholds everywhere the
//! underlying statement is a limit with no proved rate.
//!
//! Conditionally convergent series (the r₂ series, the π/4 ratio, the
//! partial sums S_N(m)) are summed strictly in index order; rearrangement
//! is only used where the sum is a finite regrouping of the same terms
//! (gcd/divisor grouping for absolutely convergent σ–ζ sums).

pub mod calibration;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};

use rug::ops::Pow;
use rug::{Float, Rational};
use serde_json::json;

use crate::arith::{self, SieveTables};
use crate::cyclotomic::{self, GridRow};
use crate::error::{Error, Result};
use crate::hp;
use crate::ramanujan::{self, partial_sum_trace, TraceMode};
use crate::zeta;

pub use calibration::{default_calibration, Calibration};
pub use report::{
    grid_to_csv, reports_to_csv, reports_to_json, reports_to_table, IdentityId, ReportBuilder,
    ToleranceProvenance, VerificationReport,
};

fn require(cond: bool, name: &'static str, value: String, domain: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value,
            domain,
        })
    }
}

fn require_sieve(sieve: &SieveTables, needed: u64) -> Result<()> {
    require(
        sieve.limit >= needed,
        "sieve.limit",
        sieve.limit.to_string(),
        "at least the requested truncation",
    )
}

/// s interpreted as an exact small integer exponent when possible; exact
/// rational arithmetic is available on those paths.
fn integer_exponent(s: f64) -> Option<u32> {
    if s.fract() == 0.0 && (1.0..=64.0).contains(&s) {
        Some(s as u32)
    } else {
        None
    }
}

/// k^(−t) with a cheap reciprocal when t is a small integer.
fn pow_neg(k: u64, t: f64, t_int: Option<u32>, wp: u32) -> Float {
    match t_int {
        Some(e) => Float::with_val(wp, rug::Integer::from(k).pow(e)).recip(),
        None => Float::with_val(wp, k).pow(&Float::with_val(wp, -t)),
    }
}

/// Σ_{e≤J} μ(e)/e^t streamed once, snapshotting at every J in `stops`.
fn mobius_prefix_sums(
    stops: &BTreeSet<u64>,
    t: f64,
    t_int: Option<u32>,
    wp: u32,
    sieve: &SieveTables,
) -> BTreeMap<u64, Float> {
    let mut out = BTreeMap::new();
    let mut acc = Float::new(wp);
    let mut stop_iter = stops.iter().copied().peekable();
    let max = *stops.iter().next_back().expect("stops nonempty");
    for e in 1..=max {
        let mu = sieve.mu(e);
        if mu != 0 {
            let p = pow_neg(e, t, t_int, wp);
            if mu > 0 {
                acc += p;
            } else {
                acc -= p;
            }
        }
        while stop_iter.peek() == Some(&e) {
            out.insert(e, acc.clone());
            stop_iter.next();
        }
    }
    out
}

/// Theorem-level decay of S_N(m) = Σ_{n≤N} cₙ(m)/n for each m in `m_list`.
///
/// Passes when every |S_N(m)| at the final checkpoint sits below its
/// calibrated threshold and the checkpoint magnitudes are non-increasing on
/// a majority of steps. The reported residual is the worst normalized
/// magnitude (|S|/threshold), pushed above 1 if the majority check fails.
pub fn verify_pnt_decay(
    m_list: &[u64],
    schedule: &[u64],
    precision: u32,
    sieve: &SieveTables,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(!m_list.is_empty(), "m_list", "[]".into(), "nonempty")?;
    require(
        !schedule.is_empty(),
        "schedule",
        "[]".into(),
        "nonempty ascending",
    )?;
    let n_max = *schedule.last().unwrap();
    require_sieve(sieve, n_max)?;
    let wp = hp::working_precision(precision, n_max);
    let builder = ReportBuilder::new(IdentityId::PntCoeffDecay, "verify_pnt_decay")
        .param("m_list", format!("{m_list:?}"))
        .param("schedule", format!("{schedule:?}"))
        .param("final_n", n_max)
        .param("precision", precision)
        .param("threshold_final_n", cal.pnt_decay.final_n);

    let mut worst = Float::new(wp);
    let mut detail_rows = Vec::new();
    for &m in m_list {
        let trace = partial_sum_trace(m, n_max, schedule, TraceMode::Float, precision, sieve)?;
        let mags: Vec<Float> = trace
            .checkpoints
            .iter()
            .map(|c| match &c.value {
                ramanujan::TraceValue::Float(x) => Float::with_val(wp, x.abs_ref()),
                ramanujan::TraceValue::Exact(q) => Float::with_val(wp, q).abs(),
            })
            .collect();
        let steps = mags.len().saturating_sub(1);
        let non_increasing = mags.windows(2).filter(|w| w[1] <= w[0]).count();
        let majority_ok = steps == 0 || 2 * non_increasing > steps;
        let sigma_m = arith::sigma(m)?;
        let threshold = cal.pnt_threshold(m, sigma_m);
        let mut ratio =
            Float::with_val(wp, mags.last().unwrap() / &Float::with_val(wp, threshold));
        if !majority_ok && ratio < 1.5f64 {
            ratio = Float::with_val(wp, 1.5);
        }
        if ratio > worst {
            worst = ratio.clone();
        }
        detail_rows.push(json!({
            "m": m,
            "threshold": threshold,
            "majority_non_increasing": majority_ok,
            "normalized_final_magnitude": hp::format_report(&ratio),
            "trace": trace
                .checkpoints
                .iter()
                .map(|c| json!([c.n, c.value.to_report_string()]))
                .collect::<Vec<_>>(),
        }));
    }
    let tolerance = Float::with_val(wp, 1);
    Ok(builder
        .detail("per_m", json!(detail_rows))
        .finish(&worst, &tolerance, ToleranceProvenance::Calibrated))
}

/// σ(n)/n^s = ζ(s+1)·Σ_q c_q(n)/q^{s+1}, truncated at q ≤ I with the
/// rigorous tail bound ζ(s+1)·σ(n)·I^(−s)/s (since |c_q(n)| ≤ σ(gcd(q,n))
/// ≤ σ(n)). The truncated sum is evaluated by the exact finite regrouping
/// Σ_{d|n} d^{1−t}·Σ_{e≤I/d} μ(e)/e^t (t = s+1), which follows from
/// c_q(n) = Σ_{d|gcd(q,n)} d·μ(q/d).
pub fn verify_sigma_zeta(
    n_list: &[u64],
    s: f64,
    i_max: u64,
    precision: u32,
    sieve: &SieveTables,
) -> Result<VerificationReport> {
    require(s > 0.0, "s", s.to_string(), "s > 0")?;
    require(!n_list.is_empty(), "n_list", "[]".into(), "nonempty")?;
    require(
        n_list.iter().all(|&n| n >= 1),
        "n_list",
        format!("{n_list:?}"),
        "entries >= 1",
    )?;
    require(i_max >= 1, "I", i_max.to_string(), ">= 1")?;
    require_sieve(sieve, i_max)?;
    let t = s + 1.0;
    let t_int = integer_exponent(t);
    let wp = hp::working_precision(precision, i_max);
    let zeta_t = zeta::zeta_f64(t, precision + 32)?;
    let zeta_val = Float::with_val(wp, &zeta_t.value);

    let builder = ReportBuilder::new(IdentityId::SigmaZeta, "verify_sigma_zeta")
        .param("s", s)
        .param("I", i_max)
        .param("precision", precision)
        .param("n_count", n_list.len())
        .param("zeta_s_plus_1", hp::format_report(&zeta_t.value));

    let mut divisor_lists: Vec<(u64, Vec<u64>)> = Vec::with_capacity(n_list.len());
    let mut stops = BTreeSet::new();
    for &n in n_list {
        let divs = arith::factorize(n)?.divisors();
        for &d in &divs {
            stops.insert(i_max / d);
        }
        divisor_lists.push((n, divs));
    }
    let prefix = mobius_prefix_sums(&stops, t, t_int, wp, sieve);

    // floor for division-noise on top of the rigorous truncation bound
    let float_slack = Float::with_val(wp, Float::i_exp(1, -((precision / 2) as i32)));
    let i_pow_neg_s = match t_int {
        // t = s+1 integral means s is too: I^(−s) = I/I^t
        Some(_) => Float::with_val(wp, i_max) * pow_neg(i_max, t, t_int, wp),
        None => pow_neg(i_max, s, None, wp),
    };

    let mut worst = Float::new(wp);
    let mut detail_rows = Vec::new();
    for (n, divs) in divisor_lists {
        let mut truncated = Float::new(wp);
        for &d in &divs {
            // d^{1−t} = d·d^{−t}
            let d_term = Float::with_val(wp, d) * pow_neg(d, t, t_int, wp);
            truncated += d_term * &prefix[&(i_max / d)];
        }
        let sigma_n = sieve_or_factor_sigma(n, sieve)?;
        let lhs = Float::with_val(wp, sigma_n) * pow_neg(n, s, t_int.map(|e| e - 1), wp);
        let rhs = Float::with_val(wp, &zeta_val * &truncated);
        let residual = Float::with_val(wp, &lhs - &rhs).abs();
        let tail = Float::with_val(wp, &zeta_val * &Float::with_val(wp, sigma_n)) * &i_pow_neg_s
            / Float::with_val(wp, s);
        let zeta_err = Float::with_val(wp, &zeta_t.error_bound)
            * (Float::with_val(wp, truncated.abs_ref()) + 1u32);
        let bound = tail + zeta_err + &float_slack * &Float::with_val(wp, sigma_n + 1);
        let ratio = Float::with_val(wp, &residual / &bound);
        if ratio > worst {
            worst = ratio.clone();
        }
        detail_rows.push(json!({
            "n": n,
            "sigma": sigma_n,
            "residual": hp::format_report(&residual),
            "bound": hp::format_report(&bound),
            "normalized": hp::format_report(&ratio),
        }));
    }
    let tolerance = Float::with_val(wp, 1);
    Ok(builder
        .detail("per_n", json!(detail_rows))
        .detail("zeta_error_bound", json!(hp::format_report(&zeta_t.error_bound)))
        .finish(
            &worst,
            &tolerance,
            ToleranceProvenance::RigorousBound {
                formula: "residual(n) <= zeta(s+1)*sigma(n)*I^(-s)/s + zeta_err*(|A|+1) + 2^(-precision/2)*(sigma(n)+1); reported residual = max_n residual(n)/bound(n)".into(),
            },
        ))
}

fn sieve_or_factor_sigma(n: u64, sieve: &SieveTables) -> Result<u64> {
    if n <= sieve.limit {
        Ok(sieve.sigma(n))
    } else {
        arith::sigma(n)
    }
}

/// Coefficient-level form of the s-parameter product identity
/// Π(1−z^i)^{−1/i^s} = Π Φ̂ᵢ(z)^{−ζ(s)/i^s}: for every n ≤ M it checks
/// Σ_{i|n} i^{1−s}  vs  ζ(s)·Σ_{i≤M} c_i(n)/i^s
/// against the σ–ζ tail bound with s → s−1. The left side is exact (all
/// divisors of n ≤ M are ≤ M), and exactly rational for integer s.
pub fn verify_product_identity_s(
    order: usize,
    s: f64,
    precision: u32,
) -> Result<VerificationReport> {
    require(s > 1.0, "s", s.to_string(), "s > 1")?;
    require(
        (1..=60).contains(&order),
        "order",
        order.to_string(),
        "1..=60",
    )?;
    let wp = hp::working_precision(precision, order as u64);
    let s_int = integer_exponent(s);
    let zeta_s = zeta::zeta_f64(s, precision + 32)?;
    let zeta_val = Float::with_val(wp, &zeta_s.value);
    let m_f = order as u64;

    let builder = ReportBuilder::new(IdentityId::SigmaZeta, "verify_product_identity_s")
        .param("order", order)
        .param("s", s)
        .param("precision", precision)
        .param("zeta_s", hp::format_report(&zeta_s.value));

    let float_slack = Float::with_val(wp, Float::i_exp(1, -((precision / 2) as i32)));
    let mut worst = Float::new(wp);
    let mut detail_rows = Vec::new();
    for n in 1..=order as u64 {
        // exact LHS coefficient (times n): Σ_{i|n} i^{1−s}
        let divisors = arith::factorize(n)?.divisors();
        let (lhs, lhs_exact_string) = match s_int {
            Some(e) => {
                let mut acc = Rational::new();
                for &d in &divisors {
                    acc += Rational::from((1, rug::Integer::from(d).pow(e - 1)));
                }
                (Float::with_val(wp, &acc), Some(acc.to_string()))
            }
            None => {
                let mut acc = Float::new(wp);
                let one_minus_s = Float::with_val(wp, 1.0 - s);
                for &d in &divisors {
                    acc += Float::with_val(wp, d).pow(&one_minus_s);
                }
                (acc, None)
            }
        };
        let mut truncated = Float::new(wp);
        for i in 1..=m_f {
            let c = ramanujan::cn(i, n);
            if c != 0 {
                truncated += Float::with_val(wp, c) * pow_neg(i, s, s_int, wp);
            }
        }
        let rhs = Float::with_val(wp, &zeta_val * &truncated);
        let residual = Float::with_val(wp, &lhs - &rhs).abs();
        let sigma_n = arith::sigma(n)?;
        // tail: ζ(s)·σ(n)·M^{1−s}/(s−1)
        let m_pow = Float::with_val(wp, m_f) * pow_neg(m_f, s, s_int, wp);
        let tail = Float::with_val(wp, &zeta_val * &Float::with_val(wp, sigma_n)) * m_pow
            / Float::with_val(wp, s - 1.0);
        let zeta_err = Float::with_val(wp, &zeta_s.error_bound)
            * (Float::with_val(wp, truncated.abs_ref()) + 1u32);
        let bound = tail + zeta_err + &float_slack * &Float::with_val(wp, sigma_n + 1);
        let ratio = Float::with_val(wp, &residual / &bound);
        if ratio > worst {
            worst = ratio.clone();
        }
        let mut row = json!({
            "n": n,
            "residual": hp::format_report(&residual),
            "bound": hp::format_report(&bound),
        });
        if let Some(exact) = lhs_exact_string {
            row["lhs_exact"] = json!(exact);
        }
        detail_rows.push(row);
    }
    let tolerance = Float::with_val(wp, 1);
    Ok(builder
        .detail("per_coefficient", json!(detail_rows))
        .finish(
            &worst,
            &tolerance,
            ToleranceProvenance::RigorousBound {
                formula: "per coefficient n: |Σ_{i|n} i^(1-s) - zeta(s)·Σ_{i<=M} c_i(n)/i^s| <= zeta(s)*sigma(n)*M^(1-s)/(s-1) + zeta_err*(|A|+1) + 2^(-precision/2)*(sigma(n)+1)".into(),
            },
        ))
}

/// The ζ-ratio rearrangement: ζ(s+1) ≈ [Σ_{i≤I} i^{−(s+1)} ln(1−z^i)] /
/// [Σ_{i≤I} i^{−(s+1)} ln Φ̂ᵢ(z)] for real 0 < z < 1. The denominator is
/// evaluated through ln Φ̂ᵢ(z) = Σ_{d|i} μ(i/d)·ln(1−z^d), a finite exact
/// regrouping.
pub fn verify_zeta_ratio(
    z: f64,
    s: f64,
    i_max: u64,
    precision: u32,
    sieve: &SieveTables,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(z > 0.0 && z < 1.0, "z", z.to_string(), "0 < z < 1")?;
    require(s > 0.0, "s", s.to_string(), "s > 0")?;
    require(i_max >= 1, "I", i_max.to_string(), ">= 1")?;
    require(
        i_max <= 2_000_000,
        "I",
        i_max.to_string(),
        "<= 2e6 (prefix tables)",
    )?;
    require_sieve(sieve, i_max)?;
    let t = s + 1.0;
    let t_int = integer_exponent(t);
    let wp = hp::working_precision(precision, i_max);
    let zeta_t = zeta::zeta_f64(t, precision + 32)?;

    let builder = ReportBuilder::new(IdentityId::ZetaRatio, "verify_zeta_ratio")
        .param("z", z)
        .param("s", s)
        .param("I", i_max)
        .param("precision", precision);

    // L_d = ln(1 − z^d), z^d accumulated multiplicatively
    let zf = Float::with_val(wp, z);
    let mut z_pow = Float::with_val(wp, 1);
    let mut logs: Vec<Float> = Vec::with_capacity(i_max as usize + 1);
    logs.push(Float::new(wp));
    for _d in 1..=i_max {
        z_pow *= &zf;
        logs.push(Float::with_val(wp, (-z_pow.clone()).ln_1p()));
    }
    // weights i^{−t} and Möbius prefix sums M_t(J) for all J ≤ I
    let mut weights: Vec<Float> = Vec::with_capacity(i_max as usize + 1);
    weights.push(Float::new(wp));
    let mut prefix: Vec<Float> = Vec::with_capacity(i_max as usize + 1);
    prefix.push(Float::new(wp));
    let mut acc = Float::new(wp);
    for e in 1..=i_max {
        let w = pow_neg(e, t, t_int, wp);
        match sieve.mu(e) {
            1 => acc += &w,
            -1 => acc -= &w,
            _ => {}
        }
        weights.push(w);
        prefix.push(acc.clone());
    }

    let mut numerator = Float::new(wp);
    let mut denominator = Float::new(wp);
    for i in 1..=i_max as usize {
        numerator += Float::with_val(wp, &weights[i] * &logs[i]);
        denominator += Float::with_val(wp, &weights[i] * &logs[i])
            * &prefix[(i_max / i as u64) as usize];
    }
    let guard = Float::with_val(wp, Float::i_exp(1, -((precision / 2) as i32)));
    if Float::with_val(wp, denominator.abs_ref()) < guard {
        return Err(Error::NearZeroDenominator {
            magnitude: hp::format_sig(&denominator.abs(), 6),
        });
    }
    let ratio = Float::with_val(wp, &numerator / &denominator);
    let residual = Float::with_val(wp, &ratio - &Float::with_val(wp, &zeta_t.value)).abs();
    let tolerance = Float::with_val(wp, cal.zeta_ratio.tolerance);
    Ok(builder
        .detail("ratio", json!(hp::format_report(&ratio)))
        .detail("zeta_reference", json!(hp::format_report(&zeta_t.value)))
        .detail("numerator", json!(hp::format_report(&numerator)))
        .detail("denominator", json!(hp::format_report(&denominator)))
        .finish(&residual, &tolerance, ToleranceProvenance::Calibrated))
}

/// Raw and tail-averaged partial sums of π·Σ_{i≥0} (−1)^i c_{2i+1}(n)/(2i+1),
/// taken strictly in increasing i.
struct AlternatingSeriesOutcome {
    raw: Float,
    averaged: Float,
}

fn alternating_cn_series(
    n: u64,
    i_max: u64,
    window_fraction: f64,
    precision: u32,
    sieve: &SieveTables,
) -> Result<AlternatingSeriesOutcome> {
    require_sieve(sieve, 2 * i_max + 1)?;
    let wp = hp::working_precision(precision, i_max + 1);
    let window = (((i_max + 1) as f64 * window_fraction).ceil() as u64).clamp(1, i_max + 1);
    let mut ring: Vec<Float> = Vec::with_capacity(window as usize);
    let mut window_sum = Float::new(wp);
    let mut partial = Float::new(wp);
    for i in 0..=i_max {
        let q = 2 * i + 1;
        let c = ramanujan::cn_sieved(q, n, sieve);
        if c != 0 {
            let signed = if i % 2 == 0 { c } else { -c };
            partial += Float::with_val(wp, signed) / q;
        }
        if (ring.len() as u64) < window {
            ring.push(partial.clone());
            window_sum += &partial;
        } else {
            let slot = (i % window) as usize;
            window_sum -= &ring[slot];
            window_sum += &partial;
            ring[slot] = partial.clone();
        }
    }
    let pi = hp::pi(wp);
    let raw = Float::with_val(wp, &partial * &pi);
    let averaged = Float::with_val(wp, &window_sum / &Float::with_val(wp, ring.len() as u64)) * &pi;
    Ok(AlternatingSeriesOutcome { raw, averaged })
}

/// π·Σ (−1)^i c_{2i+1}(n)/(2i+1) against the enumerated r₂(n), with the
/// partial sums Cesàro-averaged over the trailing window to damp the
/// conditional-convergence oscillation.
pub fn verify_r2_series(
    n_list: &[u64],
    i_max: u64,
    precision: u32,
    sieve: &SieveTables,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(!n_list.is_empty(), "n_list", "[]".into(), "nonempty")?;
    require(i_max >= 1, "I", i_max.to_string(), ">= 1")?;
    let wp = hp::working_precision(precision, i_max + 1);
    let builder = ReportBuilder::new(IdentityId::R2Series, "verify_r2_series")
        .param("n_list", format!("{n_list:?}"))
        .param("I", i_max)
        .param("window_fraction", cal.r2_series.window_fraction)
        .param("precision", precision);

    let mut worst = Float::new(wp);
    let mut detail_rows = Vec::new();
    for &n in n_list {
        let r2 = arith::r2_enumerate(n)?;
        let (d1, d3) = arith::divisor_classes_mod4(n)?;
        let out = alternating_cn_series(n, i_max, cal.r2_series.window_fraction, precision, sieve)?;
        let raw_residual = Float::with_val(wp, &out.raw - &Float::with_val(wp, r2)).abs();
        let avg_residual = Float::with_val(wp, &out.averaged - &Float::with_val(wp, r2)).abs();
        if avg_residual > worst {
            worst = avg_residual.clone();
        }
        detail_rows.push(json!({
            "n": n,
            "r2": r2,
            "divisor_classes": [d1, d3],
            "raw_sum": hp::format_report(&out.raw),
            "averaged_sum": hp::format_report(&out.averaged),
            "raw_residual": hp::format_report(&raw_residual),
            "averaged_residual": hp::format_report(&avg_residual),
        }));
    }
    let tolerance = Float::with_val(wp, cal.r2_series.tolerance);
    Ok(builder
        .detail("per_n", json!(detail_rows))
        .finish(&worst, &tolerance, ToleranceProvenance::Calibrated))
}

/// Exact q-expansion check: the square of the truncated theta series must
/// match 1 + Σ_{n≤M} r₂(n)·zⁿ coefficient-for-coefficient. Residual is an
/// exact integer, required to be zero.
pub fn verify_theta_square(order: u64) -> Result<VerificationReport> {
    require(order >= 1, "order", order.to_string(), ">= 1")?;
    require(order <= 100_000, "order", order.to_string(), "<= 1e5")?;
    let builder = ReportBuilder::new(IdentityId::ThetaSquare, "verify_theta_square")
        .param("order", order);
    let theta = cyclotomic::theta_series(order);
    let square = theta.mul(&theta);
    let mut max_diff = rug::Integer::from(0);
    let mut first_mismatch: Option<u64> = None;
    let constant_diff = rug::Integer::from(square.coeff(0) - 1u32).abs();
    if constant_diff > max_diff {
        max_diff = constant_diff;
        first_mismatch = Some(0);
    }
    for n in 1..=order {
        let expect = arith::r2_enumerate(n)?;
        let diff = rug::Integer::from(square.coeff(n as usize) - rug::Integer::from(expect)).abs();
        if diff > 0 && first_mismatch.is_none() {
            first_mismatch = Some(n);
        }
        if diff > max_diff {
            max_diff = diff;
        }
    }
    let residual = Float::with_val(64, &max_diff);
    let tolerance = Float::with_val(64, 0);
    let mut b = builder.detail("max_coefficient_diff", json!(max_diff.to_string()));
    if let Some(n) = first_mismatch {
        b = b.detail("first_mismatch_exponent", json!(n));
    }
    Ok(b.finish(
        &residual,
        &tolerance,
        ToleranceProvenance::RigorousBound {
            formula: "exact integer coefficient equality (residual must be 0)".into(),
        },
    ))
}

/// The π/4 log-ratio at real 0 < z < 1:
/// π/4 = [Σ (−1)^{i+1} log(1−z^{2i+1})/(2i+1)] / [Σ (−1)^{i+1} log Φ̂_{2i+1}(z)/(2i+1)],
/// truncated at i ≤ I, with the trailing ratios averaged.
pub fn verify_pi_over_4(
    z: f64,
    i_max: u64,
    precision: u32,
    sieve: &SieveTables,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(z > 0.0 && z < 1.0, "z", z.to_string(), "0 < z < 1")?;
    let q_max = 2 * i_max + 1;
    require_sieve(sieve, q_max)?;
    let wp = hp::working_precision(precision, i_max + 1);
    let builder = ReportBuilder::new(IdentityId::PiOver4, "verify_pi_over_4")
        .param("z", z)
        .param("I", i_max)
        .param("window_fraction", cal.pi_over_4.window_fraction)
        .param("precision", precision);

    // logs of 1 − z^d for odd d, indexed by (d−1)/2
    let zf = Float::with_val(wp, z);
    let z_sq = Float::with_val(wp, zf.square_ref());
    let mut z_pow = zf.clone(); // z^1
    let mut odd_logs: Vec<Float> = Vec::with_capacity(i_max as usize + 1);
    odd_logs.push(Float::with_val(wp, (-z_pow.clone()).ln_1p()));
    for _ in 1..=i_max {
        z_pow *= &z_sq;
        odd_logs.push(Float::with_val(wp, (-z_pow.clone()).ln_1p()));
    }

    let guard = Float::with_val(wp, Float::i_exp(1, -((precision / 2) as i32)));
    let window = (((i_max + 1) as f64 * cal.pi_over_4.window_fraction).ceil() as u64)
        .clamp(1, i_max + 1);
    let mut ring: Vec<Float> = Vec::with_capacity(window as usize);
    let mut window_sum = Float::new(wp);
    let mut num = Float::new(wp);
    let mut den = Float::new(wp);
    let mut skipped_near_zero = 0u64;
    for i in 0..=i_max {
        let q = 2 * i + 1;
        let inv_q = Float::with_val(wp, q).recip();
        // numerator term: (−1)^{i+1} log(1−z^q)/q
        let log_term = Float::with_val(wp, &odd_logs[i as usize] * &inv_q);
        // denominator term uses log Φ̂_q(z) = Σ_{e|q squarefree} μ(e) L_{q/e}
        let mut phi_log = Float::new(wp);
        for (e, mu) in sieve.squarefree_divisors_mu(q) {
            let l = &odd_logs[((q / e - 1) / 2) as usize];
            if mu > 0 {
                phi_log += l;
            } else {
                phi_log -= l;
            }
        }
        let phi_term = phi_log * &inv_q;
        if i % 2 == 0 {
            num -= log_term;
            den -= phi_term;
        } else {
            num += log_term;
            den += phi_term;
        }
        // ratio of the partial sums, averaged over the trailing window
        if Float::with_val(wp, den.abs_ref()) >= guard {
            let ratio = Float::with_val(wp, &num / &den);
            if (ring.len() as u64) < window {
                window_sum += &ratio;
                ring.push(ratio);
            } else {
                let slot = (i % window) as usize;
                window_sum -= &ring[slot];
                window_sum += &ratio;
                ring[slot] = ratio;
            }
        } else {
            skipped_near_zero += 1;
        }
    }
    if ring.is_empty() {
        return Err(Error::NearZeroDenominator {
            magnitude: hp::format_sig(&den.abs(), 6),
        });
    }
    let raw_ratio = Float::with_val(wp, &num / &den);
    let averaged = Float::with_val(wp, &window_sum / &Float::with_val(wp, ring.len() as u64));
    let target = hp::pi(wp) / 4u32;
    let residual = Float::with_val(wp, &averaged - &target).abs();
    let tolerance = Float::with_val(wp, cal.pi_over_4.tolerance);
    Ok(builder
        .detail("raw_ratio", json!(hp::format_report(&raw_ratio)))
        .detail("averaged_ratio", json!(hp::format_report(&averaged)))
        .detail("target", json!(hp::format_report(&target)))
        .detail("skipped_near_zero_denominators", json!(skipped_near_zero))
        .finish(&residual, &tolerance, ToleranceProvenance::Calibrated))
}

/// Series-level framing of the r₂ identity: every coefficient m ≤ M of the
/// log-derivative q-expansion must land within tolerance of r₂(m). Shares
/// the averaged alternating series with `verify_r2_series` and additionally
/// carries the q-expansion rows for CSV emission.
pub fn verify_r2_product_logderiv(
    order: u64,
    i_max: u64,
    precision: u32,
    sieve: &SieveTables,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(
        (1..=60).contains(&order),
        "order",
        order.to_string(),
        "1..=60",
    )?;
    require(i_max >= 1, "I", i_max.to_string(), ">= 1")?;
    let wp = hp::working_precision(precision, i_max + 1);
    let builder = ReportBuilder::new(IdentityId::R2Series, "verify_r2_product_logderiv")
        .param("order", order)
        .param("I", i_max)
        .param("window_fraction", cal.r2_logderiv.window_fraction)
        .param("precision", precision);
    let mut worst = Float::new(wp);
    let mut rows = Vec::new();
    for m in 1..=order {
        let r2 = arith::r2_enumerate(m)?;
        let out =
            alternating_cn_series(m, i_max, cal.r2_logderiv.window_fraction, precision, sieve)?;
        let residual = Float::with_val(wp, &out.averaged - &Float::with_val(wp, r2)).abs();
        if residual > worst {
            worst = residual.clone();
        }
        rows.push(json!({
            "m": m,
            "r2": r2,
            "series_value": hp::format_report(&out.averaged),
            "residual": hp::format_report(&residual),
        }));
    }
    let tolerance = Float::with_val(wp, cal.r2_logderiv.tolerance);
    Ok(builder
        .detail("q_expansion", json!(rows))
        .finish(&worst, &tolerance, ToleranceProvenance::Calibrated))
}

/// Interior convergence of the truncated product at a real point: the
/// deviations |P_N(z) − 1| must be non-increasing across the checkpoint
/// list and below tolerance at the final one.
pub fn verify_interior_product(
    z: f64,
    checkpoints: &[u64],
    precision: u32,
    cal: &Calibration,
) -> Result<VerificationReport> {
    require(
        z > -1.0 && z < 1.0 && z != 0.0,
        "z",
        z.to_string(),
        "0 < |z| < 1",
    )?;
    let builder = ReportBuilder::new(IdentityId::PntCoeffDecay, "verify_interior_product")
        .param("z", z)
        .param("checkpoints", format!("{checkpoints:?}"))
        .param("precision", precision);
    let point = rug::Complex::with_val(hp::working_precision(precision, 2), (z, 0.0));
    let values = cyclotomic::truncated_product_checkpoints(checkpoints, &point, precision)?;
    let wp = hp::working_precision(precision, 2);
    let devs: Vec<Float> = values
        .iter()
        .map(|pv| {
            let diff = rug::Complex::with_val(wp, &pv.value - &rug::Complex::with_val(wp, (1, 0)));
            Float::with_val(wp, diff.abs_ref())
        })
        .collect();
    let monotone = devs.windows(2).all(|w| w[1] <= w[0]);
    let tolerance = Float::with_val(wp, cal.interior_product.final_tolerance);
    let mut residual = devs.last().unwrap().clone();
    if !monotone {
        let floor = Float::with_val(wp, &tolerance * &Float::with_val(wp, 2));
        if residual < floor {
            residual = floor;
        }
    }
    Ok(builder
        .detail("monotone_non_increasing", json!(monotone))
        .detail(
            "deviations",
            json!(values
                .iter()
                .zip(&devs)
                .map(|(pv, d)| json!([pv.n_terms, hp::format_report(d)]))
                .collect::<Vec<_>>()),
        )
        .finish(&residual, &tolerance, ToleranceProvenance::Calibrated))
}

/// Magnitude grid of |P_N| over circles inside the disk. Pass/fail applies
/// only to the deep-interior rows (fast convergence there is calibrated);
/// boundary-adjacent rows are observational and ride along in the CSV.
pub fn boundary_study(
    n_list: &[u64],
    radii: &[f64],
    angle_count: u64,
    precision: u32,
    cal: &Calibration,
) -> Result<(VerificationReport, Vec<GridRow>)> {
    let builder = ReportBuilder::new(IdentityId::BoundaryStudy, "boundary_grid_study")
        .param("n_list", format!("{n_list:?}"))
        .param("radii", format!("{radii:?}"))
        .param("angles", angle_count)
        .param("precision", precision);
    let rows = cyclotomic::boundary_grid(n_list, radii, angle_count, precision)?;
    let wp = hp::working_precision(precision, 2);
    let mut interior_rows = 0u64;
    let mut worst = Float::new(wp);
    for row in &rows {
        if row.radius <= cal.boundary_interior.radius_max
            && row.n_terms >= cal.boundary_interior.min_n
        {
            interior_rows += 1;
            let dev = Float::with_val(wp, &row.abs_value - &Float::with_val(wp, 1)).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    let tolerance = Float::with_val(wp, cal.boundary_interior.tolerance);
    let report = builder
        .detail("rows", json!(rows.len()))
        .detail("interior_rows_checked", json!(interior_rows))
        .detail(
            "interior_criterion",
            json!(format!(
                "rows with r <= {} and N >= {}",
                cal.boundary_interior.radius_max, cal.boundary_interior.min_n
            )),
        )
        .finish(&worst, &tolerance, ToleranceProvenance::Calibrated);
    Ok((report, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: u64) -> SieveTables {
        SieveTables::build(limit).unwrap()
    }

    #[test]
    fn sigma_zeta_small_run_passes() {
        let s = sieve(20_000);
        let r = verify_sigma_zeta(&[1, 2, 3, 6, 12], 1.0, 20_000, 128, &s).unwrap();
        assert!(r.pass, "residual {} tolerance {}", r.residual, r.tolerance);
        assert!(r.pass_is_consistent());
    }

    #[test]
    fn sigma_zeta_regrouping_matches_direct_sum() {
        // the divisor/Möbius regrouping must reproduce the naive q-loop
        let s = sieve(3_000);
        for n in [1u64, 2, 6, 30, 91] {
            let wp = 192;
            let mut direct = Float::new(wp);
            for q in 1..=3_000u64 {
                let c = ramanujan::cn_sieved(q, n, &s);
                if c != 0 {
                    direct += Float::with_val(wp, c)
                        / Float::with_val(wp, rug::Integer::from(q).pow(2));
                }
            }
            let stops: BTreeSet<u64> = arith::factorize(n)
                .unwrap()
                .divisors()
                .iter()
                .map(|d| 3_000 / d)
                .collect();
            let prefix = mobius_prefix_sums(&stops, 2.0, Some(2), wp, &s);
            let mut grouped = Float::new(wp);
            for d in arith::factorize(n).unwrap().divisors() {
                grouped += Float::with_val(wp, d)
                    * pow_neg(d, 2.0, Some(2), wp)
                    * &prefix[&(3_000 / d)];
            }
            let diff = Float::with_val(wp, &direct - &grouped).abs();
            assert!(diff < 1e-40, "n={n}: {diff}");
        }
    }

    #[test]
    fn sigma_zeta_rejects_bad_s() {
        let s = sieve(100);
        assert!(verify_sigma_zeta(&[1], 0.0, 100, 64, &s).is_err());
        assert!(verify_sigma_zeta(&[1], -1.0, 100, 64, &s).is_err());
    }

    #[test]
    fn theta_square_exact_small() {
        let r = verify_theta_square(50).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, "0");
    }

    #[test]
    fn product_identity_first_coefficient() {
        // n = 1 reduces to ζ(s)·Σ μ(i)/i^s ≈ 1
        let r = verify_product_identity_s(5, 2.0, 128).unwrap();
        assert!(r.pass);
        let r = verify_product_identity_s(40, 2.0, 128).unwrap();
        assert!(r.pass);
        assert!(verify_product_identity_s(5, 1.0, 64).is_err());
        assert!(verify_product_identity_s(61, 2.0, 64).is_err());
    }

    #[test]
    fn pnt_decay_degenerate_single_checkpoint_fails() {
        let s = sieve(10);
        let cal = default_calibration();
        let r = verify_pnt_decay(&[1], &[1], 128, &s, cal).unwrap();
        // S_1(1) = 1, far above any calibrated threshold
        assert!(!r.pass);
        assert!(r.pass_is_consistent());
    }

    #[test]
    fn zeta_ratio_small_z_limit() {
        // z → 0⁺: the ratio tends to ζ(s+1); at z = 1e-3 expect ~3 digits
        let s = sieve(10_000);
        let cal = default_calibration();
        let r = verify_zeta_ratio(1e-3, 1.0, 10_000, 128, &s, cal).unwrap();
        let ratio: f64 = r.details["ratio"].as_str().unwrap().parse().unwrap();
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((ratio - zeta2).abs() < 2e-3, "ratio {ratio}");
    }

    #[test]
    fn pi_over_4_degenerate_single_term() {
        // I = 0 leaves ratio = log(1−z)/log(1−z) = 1, far from π/4
        let s = sieve(10);
        let cal = default_calibration();
        let r = verify_pi_over_4(0.5, 0, 128, &s, cal).unwrap();
        assert!(!r.pass);
        let raw: f64 = r.details["raw_ratio"].as_str().unwrap().parse().unwrap();
        assert!((raw - 1.0).abs() < 1e-15);
    }

    #[test]
    fn r2_series_rounding_recovers_r2_at_moderate_truncation() {
        let s = sieve(20_001);
        let cal = default_calibration();
        let r = verify_r2_series(&[1, 2, 3], 10_000, 128, &s, cal).unwrap();
        for row in r.details["per_n"].as_array().unwrap() {
            let avg: f64 = row["averaged_sum"].as_str().unwrap().parse().unwrap();
            let r2 = row["r2"].as_u64().unwrap() as f64;
            assert!((avg - r2).abs() < 0.5, "avg {avg} vs r2 {r2}");
        }
    }

    #[test]
    fn interior_product_converges_at_0_3() {
        let cal = default_calibration();
        let r = verify_interior_product(0.3, &[100, 1000], 128, cal).unwrap();
        assert!(r.pass, "residual {}", r.residual);
        assert_eq!(r.details["monotone_non_increasing"], json!(true));
    }

    #[test]
    fn boundary_study_interior_rows_near_one() {
        let cal = default_calibration();
        let (report, rows) = boundary_study(&[1, 100], &[0.1, 0.6], 8, 96, cal).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 8);
        assert!(report.pass, "residual {}", report.residual);
        assert_eq!(report.details["interior_rows_checked"], json!(8));
    }
}
