//! The summatory totient `Psi(n) = sum_{k=1}^{n} phi(k)`, evaluated exactly.
//!
//! Small arguments come from a sieve prefix table; everything above the
//! threshold uses the memoized recurrence
//!
//! ```text
//! Psi(n) = n(n+1)/2 - sum_{d=2}^{n} Psi(floor(n/d))
//! ```
//!
//! with the sum grouped over blocks of equal quotient, which yields roughly
//! O(n^(2/3)) work when the threshold is near n^(2/3).

use crate::arith::Nat;
use crate::error::{Error, Result};
use crate::totient::{phi_sieve_with_cap, PhiTable, DEFAULT_SIEVE_CAP};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

/// Sieve threshold used when no target size is known.
pub const DEFAULT_THRESHOLD: u64 = 4_000_000;

const CACHE_HEADER: &str = "n,psi";

/// Memo-table traffic counters for one engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoStats {
    /// Queries answered from the memo table.
    pub hits: u64,
    /// Queries that had to run the recurrence.
    pub misses: u64,
}

/// Exact `Psi` evaluator: a dense prefix table up to `threshold`, plus a
/// memo map for the recurrence above it.
///
/// The prefix table is immutable and shared between clones; the memo is
/// per-instance. A single engine must not be used from several threads at
/// once; give each worker its own clone instead.
#[derive(Debug, Clone)]
pub struct SummatoryEngine {
    threshold: u64,
    // prefix[k] = Psi(k) for 0 <= k <= threshold; strictly increasing from
    // index 1 on because phi >= 1.
    prefix: Arc<[u128]>,
    memo: HashMap<u128, u128>,
    stats: MemoStats,
}

impl SummatoryEngine {
    /// Engine with exact prefix sums up to `threshold` and an empty memo,
    /// under the default sieve cap.
    pub fn build(threshold: Nat) -> Result<Self> {
        Self::build_with_cap(threshold, DEFAULT_SIEVE_CAP)
    }

    pub fn build_with_cap(threshold: Nat, cap: u64) -> Result<Self> {
        let table = phi_sieve_with_cap(threshold, cap)?;
        Self::from_table(&table, threshold)
    }

    /// Engine sized for a known target `n`: threshold `ceil(n^(2/3))`,
    /// clamped to the cap.
    pub fn for_target(n: Nat, cap: u64) -> Result<Self> {
        Self::build_with_cap(Nat::new(default_threshold_for(n).min(cap as u128)), cap)
    }

    /// Build the prefix table from an existing totient table; `threshold`
    /// must not exceed the table limit.
    pub fn from_table(table: &PhiTable, threshold: Nat) -> Result<Self> {
        if threshold.is_zero() {
            return Err(Error::Domain("engine threshold must be >= 1"));
        }
        if threshold.get() > table.limit() as u128 {
            return Err(Error::OutOfRange {
                what: "engine threshold",
                value: threshold.get(),
                max: table.limit() as u128,
            });
        }
        let threshold = threshold.get() as u64;
        let phi = table.as_slice();
        let mut prefix = Vec::with_capacity(threshold as usize + 1);
        prefix.push(0u128);
        let mut acc = 0u128;
        for &phi_k in &phi[1..=threshold as usize] {
            // Bounded by Psi(threshold) < threshold^2, far inside u128 for
            // any allocatable table.
            acc += phi_k as u128;
            prefix.push(acc);
        }
        Ok(SummatoryEngine {
            threshold,
            prefix: prefix.into(),
            memo: HashMap::new(),
            stats: MemoStats::default(),
        })
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn stats(&self) -> MemoStats {
        self.stats
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// A worker-private engine: shares the immutable prefix table, starts
    /// with an empty memo and fresh counters.
    pub fn fork(&self) -> Self {
        SummatoryEngine {
            threshold: self.threshold,
            prefix: Arc::clone(&self.prefix),
            memo: HashMap::new(),
            stats: MemoStats::default(),
        }
    }

    /// Exact `Psi(n)`, with `Psi(0) = 0`.
    pub fn psi(&mut self, n: Nat) -> Result<Nat> {
        self.psi_raw(n.get()).map(Nat::new)
    }

    pub(crate) fn psi_raw(&mut self, n: u128) -> Result<u128> {
        if n <= self.threshold as u128 {
            return Ok(self.prefix[n as usize]);
        }
        if let Some(&v) = self.memo.get(&n) {
            self.stats.hits += 1;
            return Ok(v);
        }
        self.stats.misses += 1;
        let mut acc = triangular(n)?;
        // Subtract sum_{d=2}^{n} Psi(n/d), one block of equal quotient at a
        // time. Every partial sum is bounded by n(n+1)/2, so the running
        // value cannot leave the range once the triangular number fits.
        if n <= u64::MAX as u128 {
            let n64 = n as u64;
            let mut d = 2u64;
            while d <= n64 {
                let q = n64 / d;
                let d_end = n64 / q;
                let s = self.psi_raw(q as u128)?;
                acc -= (d_end - d + 1) as u128 * s;
                d = d_end + 1;
            }
        } else {
            let mut d = 2u128;
            while d <= n {
                let q = n / d;
                let d_end = n / q;
                let s = self.psi_raw(q)?;
                acc -= (d_end - d + 1) * s;
                d = d_end + 1;
            }
        }
        self.memo.insert(n, acc);
        Ok(acc)
    }

    /// Persist the memo as `n,psi` lines in ascending `n`.
    pub fn cache_save<P: AsRef<Path>>(&self, path: P) -> Result<usize> {
        let file = std::fs::File::create(path)?;
        let mut out = BufWriter::new(file);
        let mut entries: Vec<(u128, u128)> = self.memo.iter().map(|(&n, &v)| (n, v)).collect();
        entries.sort_unstable();
        writeln!(out, "{CACHE_HEADER}")?;
        for (n, v) in &entries {
            writeln!(out, "{n},{v}")?;
        }
        out.flush()?;
        Ok(entries.len())
    }

    /// Preload the memo from a cache file. Entries at or below the sieve
    /// threshold are skipped (the prefix table already answers those).
    /// Malformed content fails loudly with its line number; an empty file
    /// is an empty memo.
    pub fn cache_load<P: AsRef<Path>>(&mut self, path: P) -> Result<usize> {
        let file = std::fs::File::open(path)?;
        let reader = BufReader::new(file);
        let mut loaded = 0usize;
        let mut last_n: Option<u128> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            if lineno == 1 && line == CACHE_HEADER {
                continue;
            }
            if line.is_empty() {
                return Err(Error::MalformedCache {
                    line: lineno,
                    reason: "blank line".to_string(),
                });
            }
            let (n, v) = parse_cache_line(&line, lineno)?;
            if let Some(prev) = last_n {
                if n <= prev {
                    return Err(Error::MalformedCache {
                        line: lineno,
                        reason: format!("n values must be strictly increasing ({n} after {prev})"),
                    });
                }
            }
            last_n = Some(n);
            if n > self.threshold as u128 {
                self.memo.insert(n, v);
                loaded += 1;
            }
        }
        Ok(loaded)
    }
}

fn parse_cache_line(line: &str, lineno: usize) -> Result<(u128, u128)> {
    let (n_str, v_str) = line.split_once(',').ok_or_else(|| Error::MalformedCache {
        line: lineno,
        reason: "expected `<n>,<psi>`".to_string(),
    })?;
    let parse = |s: &str, which: &str| {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedCache {
                line: lineno,
                reason: format!("{which} is not a decimal number: {s:?}"),
            });
        }
        s.parse::<u128>().map_err(|_| Error::MalformedCache {
            line: lineno,
            reason: format!("{which} exceeds 128-bit range: {s:?}"),
        })
    };
    Ok((parse(n_str, "n")?, parse(v_str, "psi")?))
}

/// `n(n+1)/2` without intermediate overflow; errors when the result itself
/// leaves the 128-bit range.
pub(crate) fn triangular(n: u128) -> Result<u128> {
    let np1 = n.checked_add(1).ok_or(Error::Overflow("n + 1"))?;
    let r = if n.is_multiple_of(2) {
        (n / 2).checked_mul(np1)
    } else {
        n.checked_mul(np1 / 2)
    };
    r.ok_or(Error::Overflow("n(n+1)/2"))
}

/// `ceil(n^(2/3))`, exact: the smallest `t` with `t^3 >= n^2`. Saturates to
/// `u128::MAX` above the `u64` range, where callers clamp to the sieve cap
/// anyway.
pub fn default_threshold_for(n: Nat) -> u128 {
    let n = n.get();
    if n <= 1 {
        return 1;
    }
    let Ok(n64) = u64::try_from(n) else {
        return u128::MAX;
    };
    let n2 = n64 as u128 * n64 as u128;
    // t^3 overflowing u128 already implies t^3 > n^2.
    let cube_ge = |t: u128| {
        t.checked_mul(t)
            .and_then(|t2| t2.checked_mul(t))
            .is_none_or(|t3| t3 >= n2)
    };
    let mut lo = 1u128;
    let mut hi = 1u128 << 43; // (2^43)^3 > (2^64)^2
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if cube_ge(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Literal evaluation of `Psi(n)` over a freshly built sieve table, used as
/// the independent oracle for the engine.
pub fn psi_bruteforce(n: Nat) -> Result<Nat> {
    psi_bruteforce_with_cap(n, DEFAULT_SIEVE_CAP)
}

pub fn psi_bruteforce_with_cap(n: Nat, cap: u64) -> Result<Nat> {
    if n.is_zero() {
        return Ok(Nat::ZERO);
    }
    let table = phi_sieve_with_cap(n, cap)?;
    let mut acc = 0u128;
    for &v in &table.as_slice()[1..] {
        acc += v as u128;
    }
    Ok(Nat::new(acc))
}
