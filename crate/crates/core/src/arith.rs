//! Elementary multiplicative arithmetic: factorization, sieves, μ, φ, σ,
//! divisor classes mod 4, and sums of two squares.
//!
//! Per-value functions (`mobius`, `totient`, `sigma`, ...) factorize their
//! argument each call and serve as the reference path; `SieveTables` holds
//! the bulk-evaluation arrays the partial-sum and verifier modules consume.

use crate::error::{Error, Result};

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// All positive divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    pub fn mobius(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn totient(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn sigma(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
            .product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factorizes by trial division over small primes, then Pollard's rho with a
/// Miller–Rabin primality gate for what remains, so inputs far above the
/// desk-scale range still factor instead of failing silently.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let mut factors = Vec::new();
    let mut rest = n;
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // wheel over 7, 11, 13, ... up to a fixed trial bound
    let mut p = 7u64;
    let increments = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut idx = 0;
    while p <= 100_000 && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += increments[idx];
        idx = (idx + 1) % increments.len();
    }
    if rest > 1 {
        if rest <= 100_000u64.pow(2) || is_prime_u64(rest) {
            merge_factor(&mut factors, rest);
        } else {
            split_composite(rest, &mut factors);
        }
    }
    factors.sort_unstable();
    Ok(Factorization { n, factors })
}

fn merge_factor(factors: &mut Vec<(u64, u32)>, p: u64) {
    if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += 1;
    } else {
        factors.push((p, 1));
    }
}

fn split_composite(n: u64, factors: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        merge_factor(factors, n);
        return;
    }
    let d = pollard_rho(n);
    split_composite(d, factors);
    split_composite(n / d, factors);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 (the standard 12-base certificate).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n % 2 == 1 && n > 3);
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn mobius(n: u64) -> Result<i64> {
    Ok(factorize(n)?.mobius())
}

pub fn totient(n: u64) -> Result<u64> {
    Ok(factorize(n)?.totient())
}

pub fn sigma(n: u64) -> Result<u64> {
    Ok(factorize(n)?.sigma())
}

/// Counts of divisors of `n` congruent to 1 and to 3 modulo 4.
pub fn divisor_classes_mod4(n: u64) -> Result<(u64, u64)> {
    let f = factorize(n)?;
    let mut d1 = 0u64;
    let mut d3 = 0u64;
    for d in f.divisors() {
        match d % 4 {
            1 => d1 += 1,
            3 => d3 += 1,
            _ => {}
        }
    }
    Ok((d1, d3))
}

/// Number of representations n = a² + b² over ordered, signed integer pairs.
///
/// Walks a over 0..=⌊√n⌋ and tests n − a² for squareness; this O(√n) scan is
/// deliberately independent of the divisor-class formula so the two can
/// cross-check each other.
pub fn r2_enumerate(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfDomain {
            name: "n",
            value: "0".into(),
            domain: "n >= 1",
        });
    }
    let mut count = 0u64;
    let mut a = 0u64;
    while a * a <= n {
        let rem = n - a * a;
        let b = rem.isqrt();
        if b * b == rem {
            let sa = if a == 0 { 1 } else { 2 };
            let sb = if b == 0 { 1 } else { 2 };
            count += sa * sb;
        }
        a += 1;
    }
    Ok(count)
}

/// Bulk tables of μ, φ, σ, and smallest prime factor for 0..=limit.
///
/// Index 0 is a sentinel (all zeros). Built with a linear sieve, so each
/// composite is touched once through its smallest prime factor.
#[derive(Debug)]
pub struct SieveTables {
    pub limit: u64,
    mu: Vec<i8>,
    phi: Vec<u64>,
    sigma: Vec<u64>,
    spf: Vec<u32>,
}

/// Default ceiling on sieve allocation (bytes across all tables).
pub const DEFAULT_SIEVE_MEMORY_CEILING: u64 = 6 << 30;

const BYTES_PER_SIEVE_ENTRY: u64 = 1 + 8 + 8 + 4 + 8; // mu, phi, sigma, spf, transient pp

impl SieveTables {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_ceiling(limit, DEFAULT_SIEVE_MEMORY_CEILING)
    }

    pub fn build_with_ceiling(limit: u64, max_bytes: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::OutOfDomain {
                name: "limit",
                value: "0".into(),
                domain: "limit >= 1",
            });
        }
        if limit >= u32::MAX as u64 || (limit + 1).saturating_mul(BYTES_PER_SIEVE_ENTRY) > max_bytes
        {
            return Err(Error::ResourceExhausted {
                detail: format!(
                    "sieve to {limit} needs ~{} bytes, ceiling is {max_bytes}",
                    (limit + 1).saturating_mul(BYTES_PER_SIEVE_ENTRY)
                ),
            });
        }
        let n = (limit + 1) as usize;
        let mut mu = vec![0i8; n];
        let mut phi = vec![0u64; n];
        let mut sigma = vec![0u64; n];
        let mut spf = vec![0u32; n];
        // pp[i] = p^e with p = spf(i) and p^e || i; used to split σ multiplicatively.
        let mut pp = vec![0u64; n];
        let mut primes: Vec<u64> = Vec::new();
        if limit >= 1 {
            mu[1] = 1;
            phi[1] = 1;
            sigma[1] = 1;
            pp[1] = 1;
        }
        for i in 2..=limit {
            let iu = i as usize;
            if spf[iu] == 0 {
                primes.push(i);
                spf[iu] = i as u32;
                mu[iu] = -1;
                phi[iu] = i - 1;
                sigma[iu] = i + 1;
                pp[iu] = i;
            }
            for &p in &primes {
                let ip = i.checked_mul(p);
                let ip = match ip {
                    Some(v) if v <= limit => v as usize,
                    _ => break,
                };
                spf[ip] = p as u32;
                if i % p == 0 {
                    pp[ip] = pp[iu] * p;
                    mu[ip] = 0;
                    phi[ip] = phi[iu] * p;
                    sigma[ip] = if pp[ip] as u64 == ip as u64 {
                        // pure prime power: σ(p^{e+1}) = σ(p^e) + p^{e+1}
                        sigma[iu] + ip as u64
                    } else {
                        sigma[(ip as u64 / pp[ip]) as usize] * sigma[pp[ip] as usize]
                    };
                    break;
                }
                pp[ip] = p;
                mu[ip] = -mu[iu];
                phi[ip] = phi[iu] * (p - 1);
                sigma[ip] = sigma[iu] * (p + 1);
            }
        }
        Ok(SieveTables {
            limit,
            mu,
            phi,
            sigma,
            spf,
        })
    }

    #[inline]
    pub fn mu(&self, n: u64) -> i64 {
        self.mu[n as usize] as i64
    }

    #[inline]
    pub fn phi(&self, n: u64) -> u64 {
        self.phi[n as usize]
    }

    #[inline]
    pub fn sigma(&self, n: u64) -> u64 {
        self.sigma[n as usize]
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn factorize(&self, mut n: u64) -> Factorization {
        assert!(n >= 1 && n <= self.limit, "n out of sieve range");
        let orig = n;
        let mut factors = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Factorization { n: orig, factors }
    }

    pub fn divisors(&self, n: u64) -> Vec<u64> {
        self.factorize(n).divisors()
    }

    /// Squarefree divisors of n paired with their μ value, unordered.
    pub fn squarefree_divisors_mu(&self, n: u64) -> Vec<(u64, i64)> {
        let f = self.factorize(n);
        let mut out = vec![(1u64, 1i64)];
        for &(p, _) in &f.factors {
            let len = out.len();
            for i in 0..len {
                let (d, mu) = out[i];
                out.push((d * p, -mu));
            }
        }
        out
    }

    /// Raw table accessors for the cache codec.
    pub(crate) fn raw_parts(&self) -> (&[i8], &[u64], &[u64], &[u32]) {
        (&self.mu, &self.phi, &self.sigma, &self.spf)
    }

    pub(crate) fn from_raw_parts(
        limit: u64,
        mu: Vec<i8>,
        phi: Vec<u64>,
        sigma: Vec<u64>,
        spf: Vec<u32>,
    ) -> Self {
        SieveTables {
            limit,
            mu,
            phi,
            sigma,
            spf,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_basics() {
        assert_eq!(factorize(1).unwrap().factors, Vec::<(u64, u32)>::new());
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(
            factorize(105).unwrap().factors,
            vec![(3, 1), (5, 1), (7, 1)]
        );
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        // both factors above the trial-division bound
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(p * q).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(30).unwrap(), -1);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1).unwrap(), 1);
        assert_eq!(totient(2).unwrap(), 1);
        // brute-force unit count mod 12
        let units = (1..=12).filter(|&k| gcd(k, 12) == 1).count() as u64;
        assert_eq!(totient(12).unwrap(), units);
        assert_eq!(totient(12).unwrap(), 4);
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1).unwrap(), 1);
        let by_enum = |n: u64| (1..=n).filter(|d| n % d == 0).sum::<u64>();
        assert_eq!(sigma(6).unwrap(), by_enum(6));
        assert_eq!(sigma(6).unwrap(), 12);
        assert_eq!(sigma(100).unwrap(), by_enum(100));
        assert_eq!(sigma(100).unwrap(), 217);
    }

    #[test]
    fn divisor_classes_examples() {
        assert_eq!(divisor_classes_mod4(1).unwrap(), (1, 0));
        assert_eq!(divisor_classes_mod4(3).unwrap(), (1, 1));
        assert_eq!(divisor_classes_mod4(25).unwrap(), (3, 0));
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2_enumerate(1).unwrap(), 4);
        assert_eq!(r2_enumerate(3).unwrap(), 0);
        assert_eq!(r2_enumerate(25).unwrap(), 12);
        assert_eq!(r2_enumerate(2).unwrap(), 4);
    }

    #[test]
    fn sieve_matches_examples() {
        let s = SieveTables::build(10).unwrap();
        assert_eq!(s.mu(6), 1);
        assert_eq!(s.phi(10), 4);
        assert_eq!(s.sigma(9), 13);
        let tiny = SieveTables::build(1).unwrap();
        assert_eq!(tiny.limit, 1);
        assert_eq!(tiny.mu(1), 1);
    }

    #[test]
    fn sieve_agrees_with_per_value_functions() {
        let s = SieveTables::build(2_000).unwrap();
        for n in 1..=2_000u64 {
            assert_eq!(s.mu(n), mobius(n).unwrap(), "mu({n})");
            assert_eq!(s.phi(n), totient(n).unwrap(), "phi({n})");
            assert_eq!(s.sigma(n), sigma(n).unwrap(), "sigma({n})");
        }
    }

    #[test]
    fn sieve_rejects_over_ceiling() {
        let err = SieveTables::build_with_ceiling(1 << 20, 1024).unwrap_err();
        assert!(matches!(err, Error::ResourceExhausted { .. }));
    }

    #[test]
    fn squarefree_divisors() {
        let s = SieveTables::build(100).unwrap();
        let mut d = s.squarefree_divisors_mu(12);
        d.sort_unstable();
        assert_eq!(d, vec![(1, 1), (2, -1), (3, -1), (6, 1)]);
    }
}
