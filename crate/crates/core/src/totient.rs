//! Pointwise Euler totient via factorization, the prime-multiplication step
//! `phi(p*m)`, and a linear sieve producing a dense table of totient values.

use crate::arith::{gcd, is_prime, Nat, Prime};
use crate::error::{Error, Result};

/// Default cap on sieve allocations, in table entries.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Complete prime factorization, primes strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(Prime, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(Prime, u32)] {
        &self.pairs
    }

    /// The factored value, recomputed as `prod p^alpha`.
    pub fn value(&self) -> Result<Nat> {
        let mut acc = Nat::ONE;
        for &(p, alpha) in &self.pairs {
            for _ in 0..alpha {
                acc = acc.checked_mul(p.as_nat())?;
            }
        }
        Ok(acc)
    }
}

/// Prime factorization by trial division, with a deterministic primality
/// shortcut once the remaining cofactor is prime. Inputs are limited to the
/// `u64` range where the primality test is decisive.
pub fn factorize(n: Nat) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("factorize requires n >= 1"));
    }
    let mut m = u64::try_from(n.get()).map_err(|_| Error::OutOfRange {
        what: "factorize",
        value: n.get(),
        max: u64::MAX as u128,
    })?;

    let mut pairs = Vec::new();
    let mut push = |p: u64, alpha: u32| pairs.push((Prime::new_unchecked(p), alpha));

    for p in [2u64, 3, 5] {
        if m % p == 0 {
            let mut alpha = 0;
            while m % p == 0 {
                m /= p;
                alpha += 1;
            }
            push(p, alpha);
        }
    }
    let mut d = 7u64;
    let mut step = 4u64;
    while m > 1 {
        if is_prime(m) {
            push(m, 1);
            break;
        }
        while m % d != 0 {
            d += step;
            step = 6 - step;
        }
        let mut alpha = 0;
        while m % d == 0 {
            m /= d;
            alpha += 1;
        }
        push(d, alpha);
    }
    Ok(Factorization { pairs })
}

/// Euler's totient: the count of `1 <= x <= n` with `gcd(x, n) = 1`,
/// computed as `prod p^(alpha-1) * (p-1)` to stay in integers.
pub fn phi(n: Nat) -> Result<Nat> {
    let factors = factorize(n)?;
    let mut acc: u128 = 1;
    for &(p, alpha) in factors.pairs() {
        let p = p.get() as u128;
        // Each partial product divides phi(n) <= n, so stays in range.
        acc *= p - 1;
        for _ in 1..alpha {
            acc *= p;
        }
    }
    Ok(Nat::new(acc))
}

/// `phi(p*m)` from `phi(m)`: `(p-1)*phi(m)` when `gcd(p, m) = 1`, otherwise
/// `p*phi(m)`.
pub fn phi_step(p: Prime, m: Nat) -> Result<Nat> {
    if m.is_zero() {
        return Err(Error::Domain("phi_step requires m >= 1"));
    }
    // The product p*m must itself be representable.
    p.as_nat().checked_mul(m)?;
    let phi_m = phi(m)?;
    let factor = if gcd(p.as_nat(), m)? == Nat::ONE {
        Nat::new(p.get() as u128 - 1)
    } else {
        p.as_nat()
    };
    factor.checked_mul(phi_m)
}

/// Dense table of `phi(k)` for `1 <= k <= limit`.
#[derive(Debug, Clone)]
pub struct PhiTable {
    // values[0] is unused padding so that values[k] = phi(k).
    values: Vec<u64>,
}

impl PhiTable {
    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `phi(k)`; range error above the table limit.
    pub fn get(&self, k: u64) -> Result<Nat> {
        if k == 0 || k > self.limit() {
            return Err(Error::OutOfRange {
                what: "phi table lookup",
                value: k as u128,
                max: self.limit() as u128,
            });
        }
        Ok(Nat::new(self.values[k as usize] as u128))
    }

    /// Raw slice with `slice[k] = phi(k)`; index 0 is padding.
    pub fn as_slice(&self) -> &[u64] {
        &self.values
    }
}

/// Totient table up to `limit` with the default allocation cap.
pub fn phi_sieve(limit: Nat) -> Result<PhiTable> {
    phi_sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
}

/// Linear (Euler) sieve: every composite is visited exactly once, through
/// its smallest prime factor, so the build is O(limit).
pub fn phi_sieve_with_cap(limit: Nat, cap: u64) -> Result<PhiTable> {
    if limit.is_zero() {
        return Err(Error::Domain("phi_sieve requires limit >= 1"));
    }
    if limit.get() > cap as u128 {
        return Err(Error::SieveCap {
            requested: limit.get(),
            cap,
        });
    }
    let limit = limit.get() as usize;
    // 0 marks "not yet computed"; phi is never 0 on valid inputs.
    let mut values = vec![0u64; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    if limit >= 1 {
        values[1] = 1;
    }
    for i in 2..=limit {
        if values[i] == 0 {
            primes.push(i);
            values[i] = (i - 1) as u64;
        }
        for &p in &primes {
            let ip = match i.checked_mul(p) {
                Some(ip) if ip <= limit => ip,
                _ => break,
            };
            if i % p == 0 {
                // p divides i: phi(i*p) = p * phi(i), and p is the smallest
                // prime factor of i, so stop here to keep the sieve linear.
                values[ip] = values[i] * (p as u64);
                break;
            } else {
                values[ip] = values[i] * (p as u64 - 1);
            }
        }
    }
    Ok(PhiTable { values })
}
