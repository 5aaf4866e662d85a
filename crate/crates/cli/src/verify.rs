//! The identity-verification sweep: every check runs over
//! `n in [1, max_n] x primes`, with fast paths compared against literal
//! running sums maintained incrementally from a shared totient table.
//!
//! Results are deterministic for any worker count: the n-range is split
//! into contiguous chunks, each worker gets its own engine over the shared
//! immutable table, and chunk results are merged in range order.

use serde::Serialize;
use std::time::Instant;
use totsum_core::arith::{Nat, Prime};
use totsum_core::partition::{delta_recursive, delta_theorem, remark_check};
use totsum_core::summatory::{SummatoryEngine, DEFAULT_THRESHOLD};
use totsum_core::totient::{phi, phi_sieve_with_cap, phi_step, PhiTable};
use totsum_core::{Error, Result};

/// The selectable checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    /// psi(n) = upsilon(n,p) + delta(n,p), with upsilon against the literal
    /// coprime-filtered sum.
    Eq2,
    /// Closed-form delta = iterated-recursion delta = literal table sum.
    Thm,
    /// delta(n,p) = (p-1) psi(n/p) + delta(n/p, p).
    Eq4,
    /// The p-scaling identity delta(pn,p) = (p-1) psi(n) + delta(n,p); also
    /// tracks the scaled variant (p-1)(psi(n)+delta(n,p)) informationally.
    Remark,
    /// phi(p*m) from phi(m) via the prime-multiplication step.
    Prop1,
    /// Chained division by p equals division by p^k.
    Prop3,
    /// Sublinear psi against the running sieve sum.
    PsiOracle,
}

pub const ALL_CHECKS: [CheckKind; 7] = [
    CheckKind::Eq2,
    CheckKind::Thm,
    CheckKind::Eq4,
    CheckKind::Remark,
    CheckKind::Prop1,
    CheckKind::Prop3,
    CheckKind::PsiOracle,
];

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Eq2 => "eq2",
            CheckKind::Thm => "thm",
            CheckKind::Eq4 => "eq4",
            CheckKind::Remark => "remark",
            CheckKind::Prop1 => "prop1",
            CheckKind::Prop3 => "prop3",
            CheckKind::PsiOracle => "psi-oracle",
        }
    }

    pub fn parse(token: &str) -> Result<CheckKind> {
        ALL_CHECKS
            .iter()
            .copied()
            .find(|c| c.name() == token)
            .ok_or_else(|| Error::Parse {
                input: token.to_string(),
                reason: "unknown check (expected eq2, thm, eq4, remark, prop1, prop3 \
                         or psi-oracle)"
                    .to_string(),
            })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_n: u64,
    pub primes: Vec<Prime>,
    pub checks: Vec<CheckKind>,
    pub jobs: usize,
    pub sieve_cap: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases_run: u64,
    pub cases_failed: u64,
    pub first_failure: Option<Failure>,
    /// Informational entries do not affect the overall verdict.
    pub advisory: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub max_n: u64,
    pub primes: Vec<String>,
    pub checks: Vec<&'static str>,
    pub jobs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.advisory || c.cases_failed == 0)
    }
}

/// One report entry under construction.
#[derive(Debug, Clone, Default)]
struct Accum {
    run: u64,
    failed: u64,
    first: Option<Failure>,
}

impl Accum {
    fn record(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.run += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(failure());
            }
        }
    }

    fn merge(&mut self, later: Accum) {
        self.run += later.run;
        self.failed += later.failed;
        if self.first.is_none() {
            self.first = later.first;
        }
    }
}

/// Report entries a requested check expands to: `(name, advisory)`.
fn entries_for(check: CheckKind) -> Vec<(&'static str, bool)> {
    match check {
        CheckKind::Remark => vec![("remark", false), ("remark-as-printed", true)],
        other => vec![(other.name(), false)],
    }
}

pub fn verify_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.primes.is_empty() {
        return Err(Error::Domain("verify requires at least one prime"));
    }
    if config.max_n == 0 {
        return Err(Error::Domain("verify requires max_n >= 1"));
    }
    if config.checks.is_empty() {
        return Err(Error::Domain("verify requires at least one check"));
    }
    let started = Instant::now();

    // One shared table serves both the literal sums (up to max_n) and the
    // engine prefix; sized so sweep-scale psi queries are table lookups.
    let threshold = config.max_n.max(DEFAULT_THRESHOLD).min(config.sieve_cap);
    if config.max_n > config.sieve_cap {
        return Err(Error::SieveCap {
            requested: config.max_n as u128,
            cap: config.sieve_cap,
        });
    }
    let table = phi_sieve_with_cap(Nat::new(threshold as u128), config.sieve_cap)?;
    let engine = SummatoryEngine::from_table(&table, Nat::new(threshold as u128))?;

    let jobs = config.jobs.max(1).min(config.max_n as usize);
    let chunks = chunk_ranges(config.max_n, jobs);

    let outcomes: Vec<Result<Vec<Accum>>> = if jobs == 1 {
        vec![run_chunk(config, &table, engine.fork(), chunks[0])]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|&range| {
                    let worker = engine.fork();
                    let table = &table;
                    scope.spawn(move || run_chunk(config, table, worker, range))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };

    // Merge in chunk order so the first failure is the globally first one.
    let mut merged: Option<Vec<Accum>> = None;
    for outcome in outcomes {
        let accums = outcome?;
        match &mut merged {
            None => merged = Some(accums),
            Some(m) => {
                for (slot, acc) in m.iter_mut().zip(accums) {
                    slot.merge(acc);
                }
            }
        }
    }
    let merged = merged.expect("at least one chunk");

    let mut results = Vec::new();
    let mut idx = 0;
    for &check in &config.checks {
        for (name, advisory) in entries_for(check) {
            let acc = &merged[idx];
            idx += 1;
            results.push(CheckResult {
                name,
                cases_run: acc.run,
                cases_failed: acc.failed,
                first_failure: acc.first.clone(),
                advisory,
            });
        }
    }

    let mut report = VerifyReport {
        config: ConfigEcho {
            max_n: config.max_n,
            primes: config.primes.iter().map(|p| p.to_string()).collect(),
            checks: config.checks.iter().map(|c| c.name()).collect(),
            jobs: config.jobs,
        },
        checks: results,
        passed: false,
        elapsed_ms: 0,
    };
    report.passed = report.passed();
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

/// Contiguous inclusive sub-ranges covering [1, max_n].
fn chunk_ranges(max_n: u64, jobs: usize) -> Vec<(u64, u64)> {
    let jobs = jobs as u64;
    let base = max_n / jobs;
    let extra = max_n % jobs;
    let mut ranges = Vec::with_capacity(jobs as usize);
    let mut start = 1u64;
    for i in 0..jobs {
        let len = base + if i < extra { 1 } else { 0 };
        ranges.push((start, start + len - 1));
        start += len;
    }
    ranges
}

/// Running per-prime state for the literal sums.
struct PrimeSums {
    delta: u128,   // sum of phi(k) over k <= current n with p | k
    upsilon: u128, // sum of phi(k) over k <= current n with p coprime to k
}

#[allow(clippy::too_many_lines)]
fn run_chunk(
    config: &VerifyConfig,
    table: &PhiTable,
    mut engine: SummatoryEngine,
    (lo, hi): (u64, u64),
) -> Result<Vec<Accum>> {
    let phi_table = table.as_slice();
    let primes = &config.primes;

    // Initialize the running sums at n = lo - 1 with one table pass.
    let mut psi_run = 0u128;
    let mut sums: Vec<PrimeSums> = primes
        .iter()
        .map(|_| PrimeSums {
            delta: 0,
            upsilon: 0,
        })
        .collect();
    for k in 1..lo {
        let phi_k = phi_table[k as usize] as u128;
        psi_run += phi_k;
        for (i, p) in primes.iter().enumerate() {
            if k % p.get() == 0 {
                sums[i].delta += phi_k;
            } else {
                sums[i].upsilon += phi_k;
            }
        }
    }

    let entry_count: usize = config.checks.iter().map(|c| entries_for(*c).len()).sum();
    let mut accums = vec![Accum::default(); entry_count];

    for n in lo..=hi {
        let phi_n = phi_table[n as usize] as u128;
        psi_run += phi_n;
        for (i, p) in primes.iter().enumerate() {
            if n % p.get() == 0 {
                sums[i].delta += phi_n;
            } else {
                sums[i].upsilon += phi_n;
            }
        }

        let n_nat = Nat::new(n as u128);
        let mut slot = 0;
        for &check in &config.checks {
            match check {
                CheckKind::Eq2 => {
                    for (i, &p) in primes.iter().enumerate() {
                        let psi = engine.psi(n_nat)?.get();
                        let delta = delta_theorem(&mut engine, n_nat, p)?.get();
                        // delta <= psi always; a sentinel marks the broken case
                        // instead of panicking mid-sweep.
                        let upsilon = psi.checked_sub(delta).unwrap_or(u128::MAX);
                        let ok = psi == sums[i].upsilon + sums[i].delta
                            && upsilon == sums[i].upsilon;
                        accums[slot].record(ok, || Failure {
                            inputs: format!("(n={n}, p={p})"),
                            expected: format!(
                                "psi={}, upsilon={}",
                                sums[i].upsilon + sums[i].delta,
                                sums[i].upsilon
                            ),
                            got: format!("psi={psi}, upsilon={upsilon}"),
                        });
                    }
                }
                CheckKind::Thm => {
                    for (i, &p) in primes.iter().enumerate() {
                        let thm = delta_theorem(&mut engine, n_nat, p)?.get();
                        let rec = delta_recursive(&mut engine, n_nat, p)?.get();
                        let brute = sums[i].delta;
                        accums[slot].record(thm == brute && rec == brute, || Failure {
                            inputs: format!("(n={n}, p={p})"),
                            expected: brute.to_string(),
                            got: format!("theorem={thm}, recursive={rec}"),
                        });
                    }
                }
                CheckKind::Eq4 => {
                    for &p in primes.iter() {
                        let whole = delta_theorem(&mut engine, n_nat, p)?.get();
                        let q = Nat::new(n as u128 / p.get() as u128);
                        let step = (p.get() as u128 - 1) * engine.psi(q)?.get()
                            + delta_theorem(&mut engine, q, p)?.get();
                        accums[slot].record(whole == step, || Failure {
                            inputs: format!("(n={n}, p={p})"),
                            expected: step.to_string(),
                            got: whole.to_string(),
                        });
                    }
                }
                CheckKind::Remark => {
                    let printed_slot = slot + 1;
                    for &p in primes.iter() {
                        let rc = remark_check(&mut engine, n_nat, p)?;
                        let p_val = p.get() as u128;
                        let pn = Nat::new(n as u128 * p_val);
                        let delta_pn = delta_theorem(&mut engine, pn, p)?.get();
                        let psi_n = engine.psi(n_nat)?.get();
                        let delta_n = delta_theorem(&mut engine, n_nat, p)?.get();
                        let corrected = (p_val - 1)
                            .checked_mul(psi_n)
                            .and_then(|x| x.checked_add(delta_n))
                            .ok_or(Error::Overflow("remark sweep"))?;
                        let variant = (p_val - 1)
                            .checked_mul(psi_n + delta_n)
                            .ok_or(Error::Overflow("remark sweep"))?;

                        let ok = rc.corrected_holds && rc.p2_holds.unwrap_or(true);
                        accums[slot].record(ok, || Failure {
                            inputs: format!("(n={n}, p={p})"),
                            expected: corrected.to_string(),
                            got: delta_pn.to_string(),
                        });
                        // Informational: where the fully scaled variant
                        // diverges from the true value.
                        accums[printed_slot].record(rc.general_form_holds, || Failure {
                            inputs: format!("(n={n}, p={p})"),
                            expected: delta_pn.to_string(),
                            got: variant.to_string(),
                        });
                    }
                    slot += 1; // consumed the extra informational slot
                }
                CheckKind::Prop1 => {
                    for &p in primes.iter() {
                        let step = phi_step(p, n_nat)?.get();
                        let direct = phi_of_prime_times(p, n)?;
                        accums[slot].record(step == direct, || Failure {
                            inputs: format!("(p={p}, m={n})"),
                            expected: direct.to_string(),
                            got: step.to_string(),
                        });
                    }
                }
                CheckKind::Prop3 => {
                    for &p in primes.iter() {
                        let p_val = p.get() as u128;
                        let mut chained = n as u128;
                        let mut power = 1u128;
                        let mut ok = true;
                        let mut mismatch = (0u32, 0u128, 0u128);
                        let mut k = 0u32;
                        while power <= n as u128 {
                            k += 1;
                            chained /= p_val;
                            power *= p_val; // <= p * n, far from overflow
                            let direct = n as u128 / power;
                            if chained != direct {
                                ok = false;
                                mismatch = (k, direct, chained);
                                break;
                            }
                        }
                        accums[slot].record(ok, || Failure {
                            inputs: format!("(n={n}, p={p}, k={})", mismatch.0),
                            expected: mismatch.1.to_string(),
                            got: mismatch.2.to_string(),
                        });
                    }
                }
                CheckKind::PsiOracle => {
                    let got = engine.psi(n_nat)?.get();
                    accums[slot].record(got == psi_run, || Failure {
                        inputs: format!("(n={n})"),
                        expected: psi_run.to_string(),
                        got: got.to_string(),
                    });
                }
            }
            slot += 1;
        }
    }
    Ok(accums)
}

/// `phi(p * m)` assembled from the prime-power formula: strip the p-part of
/// m, then `p^e (p-1) phi(m0)`. Exact for any prime and any m in the
/// factorization range.
fn phi_of_prime_times(p: Prime, m: u64) -> Result<u128> {
    let p_val = p.get() as u128;
    let mut rest = m as u128;
    let mut p_part = 1u128;
    while rest.is_multiple_of(p_val) {
        rest /= p_val;
        p_part *= p_val;
    }
    let phi_rest = phi(Nat::new(rest))?.get();
    p_part
        .checked_mul(p_val - 1)
        .and_then(|x| x.checked_mul(phi_rest))
        .ok_or(Error::Overflow("phi(p*m)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(max_n: u64, primes: &[u64], checks: &[CheckKind], jobs: usize) -> VerifyConfig {
        VerifyConfig {
            max_n,
            primes: primes.iter().map(|&p| Prime::new(p).unwrap()).collect(),
            checks: checks.to_vec(),
            jobs,
            sieve_cap: 10_000_000,
        }
    }

    #[test]
    fn all_checks_pass_on_small_range() {
        let report = verify_suite(&config(100, &[2], &ALL_CHECKS, 1)).unwrap();
        assert!(report.passed);
        for check in &report.checks {
            assert!(check.cases_run > 0, "{}", check.name);
            if !check.advisory {
                assert_eq!(check.cases_failed, 0, "{}", check.name);
                assert!(check.first_failure.is_none());
            }
        }
    }

    #[test]
    fn printed_variant_diverges_at_3_3() {
        let report = verify_suite(&config(10, &[3], &[CheckKind::Remark], 1)).unwrap();
        assert!(report.passed, "corrected form must hold");
        let corrected = report.checks.iter().find(|c| c.name == "remark").unwrap();
        assert_eq!(corrected.cases_failed, 0);
        let printed = report
            .checks
            .iter()
            .find(|c| c.name == "remark-as-printed")
            .unwrap();
        assert!(printed.advisory);
        assert!(printed.cases_failed > 0);
        let failure = printed.first_failure.as_ref().unwrap();
        assert_eq!(failure.inputs, "(n=3, p=3)");
        assert_eq!(failure.expected, "10");
        assert_eq!(failure.got, "12");
    }

    #[test]
    fn minimal_range_runs_every_check() {
        let report = verify_suite(&config(1, &[2], &ALL_CHECKS, 1)).unwrap();
        assert!(report.passed);
        for check in &report.checks {
            assert!(check.cases_run >= 1, "{}", check.name);
            if !check.advisory {
                assert_eq!(check.cases_failed, 0);
            }
        }
    }

    #[test]
    fn jobs_do_not_change_counts() {
        let single = verify_suite(&config(200, &[2, 3, 5], &ALL_CHECKS, 1)).unwrap();
        for jobs in [2usize, 3, 7, 64] {
            let multi = verify_suite(&config(200, &[2, 3, 5], &ALL_CHECKS, jobs)).unwrap();
            assert_eq!(single.checks.len(), multi.checks.len());
            for (a, b) in single.checks.iter().zip(multi.checks.iter()) {
                assert_eq!(a.name, b.name);
                assert_eq!(a.cases_run, b.cases_run, "{}", a.name);
                assert_eq!(a.cases_failed, b.cases_failed, "{}", a.name);
                match (&a.first_failure, &b.first_failure) {
                    (None, None) => {}
                    (Some(x), Some(y)) => {
                        assert_eq!(x.inputs, y.inputs);
                        assert_eq!(x.expected, y.expected);
                        assert_eq!(x.got, y.got);
                    }
                    _ => panic!("first_failure mismatch for {}", a.name),
                }
            }
        }
    }

    #[test]
    fn cap_violation_is_resource_error() {
        let mut cfg = config(1000, &[2], &ALL_CHECKS, 1);
        cfg.sieve_cap = 100;
        assert!(matches!(
            verify_suite(&cfg),
            Err(Error::SieveCap { .. })
        ));
    }

    #[test]
    fn check_token_parsing() {
        assert_eq!(CheckKind::parse("eq2").unwrap(), CheckKind::Eq2);
        assert_eq!(CheckKind::parse("psi-oracle").unwrap(), CheckKind::PsiOracle);
        assert!(CheckKind::parse("bogus").is_err());
    }
}
