//! Exact integer primitives: an overflow-checked 128-bit unsigned value,
//! validated primes, floor division, gcd, and the exact integer logarithm.
//!
//! Floor identities used throughout the crate hold in their integer form:
//! `floor(floor(a/m)/k) = floor(a/(m*k))`, and iterating `a -> floor(a/p)`
//! k times equals `floor(a/p^k)`. Both are exercised by the property tests.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Exact unsigned integer covering `[0, 2^128 - 1]`.
///
/// There are no wrapping operations: everything that can leave the range
/// returns `Err(Error::Overflow)` / `Err(Error::Underflow)` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Nat(u128);

impl Nat {
    pub const ZERO: Nat = Nat(0);
    pub const ONE: Nat = Nat(1);
    pub const MAX: Nat = Nat(u128::MAX);

    pub const fn new(value: u128) -> Self {
        Nat(value)
    }

    pub const fn get(self) -> u128 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, rhs: Nat) -> Result<Nat> {
        self.0
            .checked_add(rhs.0)
            .map(Nat)
            .ok_or(Error::Overflow("addition"))
    }

    pub fn checked_sub(self, rhs: Nat) -> Result<Nat> {
        self.0
            .checked_sub(rhs.0)
            .map(Nat)
            .ok_or(Error::Underflow("subtraction"))
    }

    pub fn checked_mul(self, rhs: Nat) -> Result<Nat> {
        self.0
            .checked_mul(rhs.0)
            .map(Nat)
            .ok_or(Error::Overflow("multiplication"))
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Nat {
    type Err = Error;

    /// Strict decimal parse; round-trips with `Display` exactly.
    fn from_str(s: &str) -> Result<Nat> {
        if s.is_empty() {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "empty string".to_string(),
            });
        }
        if !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                input: s.to_string(),
                reason: "expected decimal digits only".to_string(),
            });
        }
        u128::from_str(s).map(Nat).map_err(|_| Error::Parse {
            input: s.to_string(),
            reason: "exceeds 128-bit range".to_string(),
        })
    }
}

impl From<u128> for Nat {
    fn from(v: u128) -> Self {
        Nat(v)
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat(v as u128)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Self {
        Nat(v as u128)
    }
}

/// A prime number, proven prime at construction.
///
/// Primality is decided deterministically for the whole `u64` range; values
/// above `2^64 - 1` are rejected with a range error rather than guessed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Prime> {
        if is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value as u128))
        }
    }

    /// Caller guarantees primality (used by the factorizer, which only
    /// produces primes by construction).
    pub(crate) fn new_unchecked(value: u64) -> Prime {
        debug_assert!(is_prime(value));
        Prime(value)
    }

    pub const fn get(self) -> u64 {
        self.0
    }

    pub const fn as_nat(self) -> Nat {
        Nat(self.0 as u128)
    }
}

impl TryFrom<Nat> for Prime {
    type Error = Error;

    fn try_from(n: Nat) -> Result<Prime> {
        let v = u64::try_from(n.get()).map_err(|_| Error::OutOfRange {
            what: "prime candidate",
            value: n.get(),
            max: u64::MAX as u128,
        })?;
        Prime::new(v)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Floor division `floor(a/m)`; the returned `q` satisfies
/// `q*m <= a < (q+1)*m`.
pub fn floor_div(a: Nat, m: Nat) -> Result<Nat> {
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Nat(a.0 / m.0))
}

/// Largest `alpha >= 0` with `p^alpha <= n`, by exact repeated
/// multiplication. Floating-point logarithms round below the true exponent
/// at exact powers, so they are never used here.
pub fn ilog(p: Prime, n: Nat) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Domain("ilog requires n >= 1"));
    }
    let p = p.get() as u128;
    let n = n.get();
    let mut alpha = 0u32;
    let mut power = 1u128;
    loop {
        match power.checked_mul(p) {
            Some(next) if next <= n => {
                power = next;
                alpha += 1;
            }
            _ => break,
        }
    }
    Ok(alpha)
}

/// Greatest common divisor by Euclid's algorithm. `gcd(0, 0)` is undefined.
pub fn gcd(a: Nat, b: Nat) -> Result<Nat> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined"));
    }
    let (mut a, mut b) = (a.0, b.0);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    Ok(Nat(a))
}

// Seven bases that make Miller-Rabin deterministic for every n < 2^64
// (J. Sinclair's set).
const MR_BASES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

const TRIAL_DIVISION_LIMIT: u64 = 1 << 32;

/// Deterministic primality for the full `u64` range: trial division below
/// `2^32`, Miller-Rabin with a fixed witness set above.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < TRIAL_DIVISION_LIMIT {
        // 6k +/- 1 wheel up to sqrt(n).
        let mut d = 7u64;
        let mut step = 4u64; // alternates 4, 2: 7, 11, 13, 17, 19, ...
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += step;
            step = 6 - step;
        }
        true
    } else {
        miller_rabin(n)
    }
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

// Assumes n odd, n > 5, and n coprime to 2, 3, 5.
fn miller_rabin(n: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u128) -> Nat {
        Nat::new(v)
    }

    #[test]
    fn floor_div_examples() {
        assert_eq!(floor_div(nat(7), nat(2)).unwrap(), nat(3));
        assert_eq!(floor_div(nat(100), nat(9)).unwrap(), nat(11));
        // Two divisions by 3 collapse to one division by 9.
        let twice = floor_div(floor_div(nat(100), nat(3)).unwrap(), nat(3)).unwrap();
        assert_eq!(twice, floor_div(nat(100), nat(9)).unwrap());
        assert_eq!(twice, nat(11));
    }

    #[test]
    fn floor_div_by_zero() {
        assert_eq!(floor_div(nat(7), nat(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn ilog_examples() {
        let p2 = Prime::new(2).unwrap();
        let p3 = Prime::new(3).unwrap();
        let p5 = Prime::new(5).unwrap();
        assert_eq!(ilog(p2, nat(10)).unwrap(), 3); // 8 <= 10 < 16
        assert_eq!(ilog(p3, nat(9)).unwrap(), 2);
        assert_eq!(ilog(p5, nat(4)).unwrap(), 0);
        assert_eq!(
            ilog(p2, nat(0)),
            Err(Error::Domain("ilog requires n >= 1"))
        );
    }

    #[test]
    fn ilog_bracket_is_exact() {
        // p^alpha <= n < p^(alpha+1), checked by exact multiplication.
        for p in [2u64, 3, 5] {
            let p = Prime::new(p).unwrap();
            for n in 1u128..=4000 {
                let alpha = ilog(p, nat(n)).unwrap();
                let pow = (p.get() as u128).pow(alpha);
                assert!(pow <= n);
                assert!(pow.checked_mul(p.get() as u128).is_none_or(|up| up > n));
            }
        }
    }

    #[test]
    fn ilog_near_u128_top() {
        let p2 = Prime::new(2).unwrap();
        assert_eq!(ilog(p2, Nat::MAX).unwrap(), 127);
        assert_eq!(ilog(p2, nat(1u128 << 127)).unwrap(), 127);
        assert_eq!(ilog(p2, nat((1u128 << 127) - 1)).unwrap(), 126);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(nat(12), nat(18)).unwrap(), nat(6));
        assert_eq!(gcd(nat(7), nat(1)).unwrap(), nat(1));
        assert_eq!(gcd(nat(5), nat(30)).unwrap(), nat(5));
        assert_eq!(gcd(nat(0), nat(9)).unwrap(), nat(9));
        assert!(matches!(gcd(nat(0), nat(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn is_prime_small_values() {
        assert!(is_prime(2));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(91)); // 7 * 13
        assert!(is_prime(97));
        assert!(!is_prime(561)); // Carmichael number
        assert!(!is_prime(1105));
    }

    #[test]
    fn is_prime_large_values() {
        assert!(is_prime((1 << 61) - 1)); // Mersenne prime 2^61 - 1
        assert!(!is_prime(u64::MAX)); // 3 * 5 * 17 * 257 * 641 * 65537 * 6700417
        assert!(!is_prime((1 << 61) - 3));
    }

    #[test]
    fn is_prime_matches_trial_division_oracle() {
        fn naive(n: u64) -> bool {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    return false;
                }
                d += 1;
            }
            true
        }
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
        // Straddle the trial-division / Miller-Rabin switchover.
        for n in (TRIAL_DIVISION_LIMIT - 200)..(TRIAL_DIVISION_LIMIT + 200) {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn prime_construction() {
        assert_eq!(Prime::new(2).unwrap().get(), 2);
        assert_eq!(Prime::new(4), Err(Error::NotPrime(4)));
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        let too_big = Nat::new(u64::MAX as u128 + 1);
        assert!(matches!(
            Prime::try_from(too_big),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn nat_overflow_is_signaled() {
        // 2^126 * 2 = 2^127 is the last power of two in range.
        let big = nat(1u128 << 126);
        assert_eq!(big.checked_mul(nat(2)).unwrap(), nat(1u128 << 127));
        // (2^127 - 1) * 2 still fits; 2^127 * 2 = 2^128 does not.
        assert!(nat((1u128 << 127) - 1).checked_mul(nat(2)).is_ok());
        assert_eq!(
            nat(1u128 << 127).checked_mul(nat(2)),
            Err(Error::Overflow("multiplication"))
        );
        assert_eq!(
            nat(1u128 << 127).checked_mul(nat(4)),
            Err(Error::Overflow("multiplication"))
        );
        assert_eq!(
            Nat::MAX.checked_add(Nat::ONE),
            Err(Error::Overflow("addition"))
        );
        assert_eq!(
            Nat::ZERO.checked_sub(Nat::ONE),
            Err(Error::Underflow("subtraction"))
        );
    }

    #[test]
    fn nat_decimal_round_trip() {
        for v in [0u128, 1, 7, 10_000_000_000, u128::MAX] {
            let s = nat(v).to_string();
            assert_eq!(s.parse::<Nat>().unwrap(), nat(v));
        }
        assert_eq!("007".parse::<Nat>().unwrap(), nat(7));
        assert!("".parse::<Nat>().is_err());
        assert!("12x".parse::<Nat>().is_err());
        assert!("-3".parse::<Nat>().is_err());
        // One past u128::MAX.
        assert!("340282366920938463463374607431768211456"
            .parse::<Nat>()
            .is_err());
    }
}
