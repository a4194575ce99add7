//! Exact cyclotomic polynomials Φₙ (and the product-normalized Φ̂ₙ), their
//! branch-safe logarithms inside the unit disk, and the truncated products
//! P_N(z) = Π_{n≤N} Φ̂ₙ(z)^{−1/n} together with a boundary grid study.
//!
//! Factor logs use the principal branch per factor: each 1 − zζ lies in the
//! open disk of radius |z| about 1, so its real part is positive and the
//! principal log varies smoothly — no branch bookkeeping is needed. The
//! product evaluator instead expands Φ̂ₙ(z) = Π_{d|n} (1 − z^d)^{μ(n/d)};
//! summing principal logs of 1 − z^d gives the same analytic value (both
//! sides vanish at z = 0 and have the same derivative on the disk), and a
//! test pins the two routes against each other.

use rayon::prelude::*;
use rug::{Complex, Float, Integer, Rational};

use crate::arith::{self, SieveTables};
use crate::error::{Error, Result};
use crate::hp;

/// Dense integer-coefficient polynomial; `coeffs[i]` is the coefficient of
/// z^i and the vector carries no trailing zeros (the zero polynomial is the
/// empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![Integer::from(1)],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// z^n − 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![Integer::from(0); n + 1];
        coeffs[0] = Integer::from(-1);
        coeffs[n] = Integer::from(1);
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Integer::from(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Self::from_coeffs(out)
    }

    /// Exact polynomial quotient; errors if the division leaves a remainder
    /// or a coefficient quotient is not integral.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dd = divisor.degree().unwrap();
        let nd = self.degree().unwrap();
        if nd < dd {
            return Err(Error::InexactDivision);
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Integer::from(0); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let head = rem[k + dd].clone();
            if head.is_zero() {
                continue;
            }
            if !head.is_divisible(lead) {
                return Err(Error::InexactDivision);
            }
            let q = head / lead;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= Integer::from(b * &q);
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(Self::from_coeffs(quot))
    }

    /// gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Integer {
        let mut g = Integer::from(0);
        for c in &self.coeffs {
            g.gcd_mut(c);
        }
        g
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    /// Horner evaluation at a complex point, at the point's precision.
    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec().0;
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += Float::with_val(prec, c);
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Rational::from(c);
        }
        acc
    }
}

/// Φₙ by iterated exact division: Φₙ = (zⁿ − 1) / Π_{d|n, d<n} Φ_d, with the
/// intermediate Φ_d built the same way over the divisor lattice of n.
pub fn cyclotomic(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let divisors = arith::factorize(n)?.divisors();
    let mut table: Vec<(u64, IntPoly)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        let mut poly = IntPoly::x_pow_minus_one(d as usize);
        for &(e, ref phi_e) in &table {
            if d % e == 0 {
                poly = poly.exact_div(phi_e)?;
            }
        }
        table.push((d, poly));
    }
    Ok(table.pop().unwrap().1)
}

/// Φₙ by the Möbius product: Π_{d|n} (z^{n/d} − 1)^{μ(d)}, assembled as one
/// exact quotient of two products. Independent of `cyclotomic` above.
pub fn cyclotomic_by_mobius(n: u64) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let f = arith::factorize(n)?;
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    let mut square_free: Vec<(u64, i64)> = vec![(1, 1)];
    for &(p, _) in &f.factors {
        let len = square_free.len();
        for i in 0..len {
            let (d, mu) = square_free[i];
            square_free.push((d * p, -mu));
        }
    }
    for (d, mu) in square_free {
        let factor = IntPoly::x_pow_minus_one((n / d) as usize);
        match mu {
            1 => num = num.mul(&factor),
            -1 => den = den.mul(&factor),
            _ => unreachable!(),
        }
    }
    num.exact_div(&den)
}

/// Φ̂ₙ: the product Π_{(k,n)=1}(1 − zζₙᵏ) as an exact polynomial. Equals Φₙ
/// for n ≥ 2 and 1 − z (i.e. −Φ₁) for n = 1.
pub fn cyclotomic_hat(n: u64) -> Result<IntPoly> {
    let phi = cyclotomic(n)?;
    if n == 1 {
        Ok(phi.neg())
    } else {
        Ok(phi)
    }
}

/// Truncation of the theta series 1 + 2Σ_{k≥1} z^{k²} at the given order.
pub fn theta_series(order: u64) -> IntPoly {
    let mut coeffs = vec![Integer::from(0); order as usize + 1];
    coeffs[0] = Integer::from(1);
    let mut k = 1u64;
    while k * k <= order {
        coeffs[(k * k) as usize] = Integer::from(2);
        k += 1;
    }
    IntPoly::from_coeffs(coeffs)
}

/// Σ_{(k,n)=1} Log(1 − zζₙᵏ) with per-factor principal logs; |z| < 1 strictly.
pub fn log_phi_hat(n: u64, z: &Complex, precision: u32) -> Result<Complex> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    hp::require_inside_unit_disk(z)?;
    let wp = hp::working_precision(precision, n);
    let zw = Complex::with_val(wp, z);
    let mut acc = Complex::new(wp);
    for k in 1..=n {
        if arith::gcd(k, n) == 1 {
            let factor = Complex::with_val(wp, 1u32) - Complex::with_val(wp, &zw * &hp::root_of_unity(n, k, wp));
            debug_assert!(*factor.real() > 0u32, "factor must stay in the right half-plane");
            acc += factor.ln();
        }
    }
    Ok(Complex::with_val(precision, acc))
}

/// Value of the truncated product at one point.
#[derive(Debug, Clone)]
pub struct ProductValue {
    pub n_terms: u64,
    pub point: Complex,
    /// −Σ_{n≤N} log Φ̂ₙ(z)/n
    pub log_value: Complex,
    /// exp(log_value) = P_N(z)
    pub value: Complex,
}

/// Ceiling on the internal log table for product sweeps (entries).
const PRODUCT_TABLE_CEILING: u64 = 4_000_000;

/// P_N(z) for a single truncation; see `truncated_product_checkpoints` for
/// shared sweeps over several N.
pub fn truncated_product(n_terms: u64, z: &Complex, precision: u32) -> Result<ProductValue> {
    let mut v = truncated_product_checkpoints(&[n_terms], z, precision)?;
    Ok(v.pop().unwrap())
}

/// One sweep n = 1..max(n_list) capturing P_N(z) at each requested N.
pub fn truncated_product_checkpoints(
    n_list: &[u64],
    z: &Complex,
    precision: u32,
) -> Result<Vec<ProductValue>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::OutOfDomain {
            name: "n_list",
            value: format!("{n_list:?}"),
            domain: "nonempty, strictly ascending, >= 1",
        });
    }
    hp::require_inside_unit_disk(z)?;
    let n_max = *n_list.last().unwrap();
    if n_max > PRODUCT_TABLE_CEILING {
        return Err(Error::ResourceExhausted {
            detail: format!("product sweep to N = {n_max} exceeds table ceiling"),
        });
    }
    let sieve = SieveTables::build(n_max.max(2))?;
    sweep_with_sieve(n_list, z, precision, &sieve)
}

fn sweep_with_sieve(
    n_list: &[u64],
    z: &Complex,
    precision: u32,
    sieve: &SieveTables,
) -> Result<Vec<ProductValue>> {
    let n_max = *n_list.last().unwrap();
    let mut wp = hp::working_precision(precision, n_max);
    // escalate on a failed certification, then give up loudly
    for _ in 0..3 {
        match sweep_at_precision(n_list, z, precision, wp, sieve) {
            Ok(values) => return Ok(values),
            Err(Error::PrecisionInsufficient { .. }) => wp *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionInsufficient {
        detail: format!("product sweep could not certify accuracy even at {wp} bits"),
    })
}

fn sweep_at_precision(
    n_list: &[u64],
    z: &Complex,
    precision: u32,
    wp: u32,
    sieve: &SieveTables,
) -> Result<Vec<ProductValue>> {
    let n_max = *n_list.last().unwrap();
    let zw = Complex::with_val(wp, z);
    let tiny = Float::with_val(wp, Float::i_exp(1, -((wp / 2) as i32)));

    // factor logs L_d = Log(1 - z^d); z^d accumulated multiplicatively
    let mut factor_logs: Vec<Complex> = Vec::with_capacity(n_max as usize + 1);
    factor_logs.push(Complex::new(wp)); // index 0 unused
    let mut z_pow = Complex::with_val(wp, 1u32);
    let mut max_log_mag = Float::new(wp);
    for _d in 1..=n_max {
        z_pow *= &zw;
        let factor = Complex::with_val(wp, 1u32) - &z_pow;
        let mag = Float::with_val(wp, factor.abs_ref());
        if mag < tiny {
            return Err(Error::PrecisionInsufficient {
                detail: "factor 1 - z^d too close to zero to log safely".into(),
            });
        }
        let log = factor.ln();
        let lmag = Float::with_val(wp, log.abs_ref());
        if lmag > max_log_mag {
            max_log_mag = lmag;
        }
        factor_logs.push(log);
    }

    let mut acc = Complex::new(wp);
    let mut out = Vec::with_capacity(n_list.len());
    let mut next = 0usize;
    let mut op_count: u64 = n_max;
    for n in 1..=n_max {
        // log Φ̂ₙ(z) = Σ_{e|n squarefree} μ(e) · L_{n/e}
        let mut inner = Complex::new(wp);
        for (e, mu) in sieve.squarefree_divisors_mu(n) {
            match mu {
                1 => inner += &factor_logs[(n / e) as usize],
                -1 => inner -= &factor_logs[(n / e) as usize],
                _ => unreachable!(),
            }
            op_count += 1;
        }
        acc -= inner / Float::with_val(wp, n);
        if n_list[next] == n {
            // certify: accumulated rounding stays far below the result scale
            let scale = Float::with_val(wp, acc.abs_ref()) + 1u32;
            let err_est = Float::with_val(wp, op_count * 8)
                * Float::with_val(wp, &max_log_mag + &scale)
                * Float::with_val(wp, Float::i_exp(1, -(wp as i32) + 1));
            let budget = Float::with_val(wp, Float::i_exp(1, -(precision as i32))) * &scale;
            if err_est > budget {
                return Err(Error::PrecisionInsufficient {
                    detail: format!(
                        "accumulated error estimate {} exceeds 2^-{} budget",
                        hp::format_sig(&err_est, 4),
                        precision
                    ),
                });
            }
            let log_value = Complex::with_val(precision, &acc);
            let value = Complex::with_val(precision, acc.clone().exp());
            out.push(ProductValue {
                n_terms: n,
                point: Complex::with_val(precision, z),
                log_value,
                value,
            });
            next += 1;
            if next == n_list.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// One row of the boundary study: |P_N(r·e^{iθ})|.
#[derive(Debug, Clone)]
pub struct GridRow {
    pub n_terms: u64,
    pub radius: f64,
    pub theta: Float,
    pub abs_value: Float,
}

/// Magnitude grid of P_N over circles strictly inside the unit disk, with
/// θ = 2πj/angle_count for j = 0..angle_count. Rows come out ordered by
/// (N, radius index, angle index); points are evaluated in parallel.
pub fn boundary_grid(
    n_list: &[u64],
    radii: &[f64],
    angle_count: u64,
    precision: u32,
) -> Result<Vec<GridRow>> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::OutOfDomain {
            name: "radii",
            value: format!("{radii:?}"),
            domain: "each radius strictly in (0, 1)",
        });
    }
    if angle_count == 0 {
        return Err(Error::OutOfDomain {
            name: "angle_count",
            value: "0".into(),
            domain: ">= 1",
        });
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::OutOfDomain {
            name: "n_list",
            value: format!("{n_list:?}"),
            domain: "nonempty, strictly ascending, >= 1",
        });
    }
    let n_max = *n_list.last().unwrap();
    let sieve = SieveTables::build(n_max.max(2))?;
    let wp = hp::working_precision(precision, n_max);
    let points: Vec<(usize, usize)> = (0..radii.len())
        .flat_map(|ri| (0..angle_count as usize).map(move |ai| (ri, ai)))
        .collect();
    let per_point: Vec<Result<Vec<(Float, Float)>>> = points
        .par_iter()
        .map(|&(ri, ai)| {
            let theta = hp::pi(wp) * 2u32 * Float::with_val(wp, ai as u64)
                / Float::with_val(wp, angle_count);
            let (sin, cos) = theta.clone().sin_cos(Float::new(wp));
            let r = Float::with_val(wp, radii[ri]);
            let z = Complex::with_val(wp, (r.clone() * cos, r * sin));
            let values = sweep_with_sieve(n_list, &z, precision, &sieve)?;
            Ok(values
                .into_iter()
                .map(|pv| {
                    (
                        Float::with_val(precision, &theta),
                        Float::with_val(precision, pv.value.abs_ref()),
                    )
                })
                .collect())
        })
        .collect();
    let mut resolved = Vec::with_capacity(points.len());
    for r in per_point {
        resolved.push(r?);
    }
    let mut rows = Vec::with_capacity(points.len() * n_list.len());
    for (ni, &n) in n_list.iter().enumerate() {
        for (pi, &(ri, _ai)) in points.iter().enumerate() {
            let (theta, abs_value) = resolved[pi][ni].clone();
            rows.push(GridRow {
                n_terms: n,
                radius: radii[ri],
                theta,
                abs_value,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    #[test]
    fn first_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), poly(&[-1, 1])); // z - 1
        assert_eq!(cyclotomic(2).unwrap(), poly(&[1, 1])); // z + 1
        assert_eq!(cyclotomic(3).unwrap(), poly(&[1, 1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), poly(&[1, 0, 1]));
        assert_eq!(cyclotomic(6).unwrap(), poly(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), poly(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn hat_normalization() {
        assert_eq!(cyclotomic_hat(1).unwrap(), poly(&[1, -1])); // 1 - z
        assert_eq!(cyclotomic_hat(2).unwrap(), poly(&[1, 1])); // 1 + z
        assert_eq!(cyclotomic_hat(6).unwrap(), poly(&[1, -1, 1]));
    }

    #[test]
    fn coefficient_of_z7_in_phi_105_is_minus_2() {
        let p = cyclotomic(105).unwrap();
        assert_eq!(p.coeff(7), Integer::from(-2));
        assert_eq!(p.degree(), Some(48));
    }

    #[test]
    fn construction_methods_agree() {
        for n in 1..=120u64 {
            assert_eq!(
                cyclotomic(n).unwrap(),
                cyclotomic_by_mobius(n).unwrap(),
                "methods disagree at n = {n}"
            );
        }
    }

    #[test]
    fn divisor_product_recovers_x_n_minus_one() {
        for n in 1..=60u64 {
            let mut prod = IntPoly::one();
            for d in arith::factorize(n).unwrap().divisors() {
                prod = prod.mul(&cyclotomic(d).unwrap());
            }
            assert_eq!(prod, IntPoly::x_pow_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn structural_invariants() {
        for n in 2..=80u64 {
            let p = cyclotomic(n).unwrap();
            assert_eq!(p.degree(), Some(arith::totient(n).unwrap() as usize));
            assert_eq!(p.coeff(0), Integer::from(1), "Φ_n(0) = 1 for n >= 2");
            assert!(p.is_palindromic(), "Φ_{n} not palindromic");
            assert_eq!(p.content(), Integer::from(1));
        }
    }

    #[test]
    fn exact_div_detects_remainder() {
        let a = poly(&[1, 1]); // z + 1
        let b = poly(&[1, 1, 1]); // z^2 + z + 1
        assert!(b.exact_div(&a).is_err());
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
    }

    #[test]
    fn log_phi_hat_examples() {
        // (n, 0) -> 0
        let zero = Complex::with_val(160, (0, 0));
        let l = log_phi_hat(7, &zero, 128).unwrap();
        assert!(Float::with_val(160, l.abs_ref()) < 1e-36);

        // (1, 1/2) -> Log(1/2) = -ln 2
        let half = Complex::with_val(160, (0.5, 0));
        let l = log_phi_hat(1, &half, 128).unwrap();
        let ln2 = Float::with_val(160, 2u32).ln();
        assert!(Float::with_val(160, l.real() + &ln2).abs() < 1e-36);
        assert!(Float::with_val(160, l.imag().abs_ref()) < 1e-36);

        // (4, i/2) matches Log of the exact polynomial value Φ̂_4(i/2)
        let zi = Complex::with_val(192, (0, 0.5));
        let l = log_phi_hat(4, &zi, 160).unwrap();
        let exact = cyclotomic_hat(4).unwrap().eval_complex(&zi).ln();
        let diff = Float::with_val(192, Complex::with_val(192, &l - &exact).abs_ref());
        assert!(diff < 1e-44, "diff = {diff}");
    }

    #[test]
    fn log_phi_hat_rejects_outside_disk() {
        let z = Complex::with_val(64, (1.0, 0.5));
        assert!(matches!(
            log_phi_hat(3, &z, 64),
            Err(Error::OutsideUnitDisk { .. })
        ));
    }

    #[test]
    fn truncated_product_at_zero_is_one() {
        let zero = Complex::with_val(160, (0, 0));
        let pv = truncated_product(25, &zero, 128).unwrap();
        let diff = Float::with_val(160, (pv.value - 1u32).abs_ref());
        assert!(diff < 1e-36);
    }

    #[test]
    fn truncated_product_single_term_is_inverse_of_one_minus_z() {
        // N = 1: P_1(z) = (1 - z)^{-1}, so at z = 1/2 the value is 2
        let half = Complex::with_val(160, (0.5, 0));
        let pv = truncated_product(1, &half, 128).unwrap();
        let diff = Float::with_val(160, (pv.value - 2u32).abs_ref());
        assert!(diff < 1e-36);
    }

    #[test]
    fn product_value_exponentiates_its_log() {
        let z = Complex::with_val(160, (0.3, 0.4));
        let pv = truncated_product(50, &z, 128).unwrap();
        let again = Complex::with_val(160, pv.log_value.clone().exp());
        let diff = Float::with_val(160, Complex::with_val(160, &pv.value - &again).abs_ref());
        assert!(diff < 1e-36);
    }

    #[test]
    fn product_sweep_matches_per_factor_logs() {
        // the Möbius-expanded sweep must equal exp(−Σ log_phi_hat(n,z)/n)
        let pts = [(0.4, 0.25), (-0.35, 0.2), (0.0, 0.6), (0.55, -0.3)];
        for (re, im) in pts {
            let z = Complex::with_val(192, (re, im));
            let pv = truncated_product(40, &z, 128).unwrap();
            let mut acc = Complex::new(192);
            for n in 1..=40u64 {
                acc -= log_phi_hat(n, &z, 160).unwrap() / Float::with_val(192, n);
            }
            let expect = acc.exp();
            let diff =
                Float::with_val(192, Complex::with_val(192, &pv.value - &expect).abs_ref());
            assert!(diff < 1e-34, "z = ({re}, {im}), diff = {diff}");
        }
    }

    #[test]
    fn grid_rows_are_ordered_and_sane() {
        let rows = boundary_grid(&[1, 10], &[0.1, 0.5], 4, 96).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 4);
        assert_eq!(rows[0].n_terms, 1);
        assert_eq!(rows.last().unwrap().n_terms, 10);
        // N = 1 rows must match |1 - z|^{-1} in closed form
        for row in rows.iter().filter(|r| r.n_terms == 1) {
            let wp = 160;
            let (sin, cos) = Float::with_val(wp, &row.theta).sin_cos(Float::new(wp));
            let z = Complex::with_val(wp, (cos * row.radius, sin * row.radius));
            let expect = (Complex::with_val(wp, (1, 0)) - z).abs().recip();
            let diff = Float::with_val(wp, expect.real() - &row.abs_value).abs();
            assert!(diff < 1e-25);
        }
    }

    #[test]
    fn grid_rejects_bad_radii() {
        assert!(boundary_grid(&[10], &[0.0], 4, 64).is_err());
        assert!(boundary_grid(&[10], &[1.0], 4, 64).is_err());
        assert!(boundary_grid(&[10], &[], 4, 64).is_err());
    }

    #[test]
    fn theta_series_truncation() {
        let t = theta_series(10);
        assert_eq!(t.coeff(0), Integer::from(1));
        assert_eq!(t.coeff(1), Integer::from(2));
        assert_eq!(t.coeff(4), Integer::from(2));
        assert_eq!(t.coeff(9), Integer::from(2));
        assert_eq!(t.coeff(2), Integer::from(0));
    }
}
