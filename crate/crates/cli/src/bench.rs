//! Timed delta computations with memo statistics, cross-checked between
//! methods when more than one runs.

use crate::args::DeltaMethod;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;
use totsum_core::arith::{Nat, Prime};
use totsum_core::partition::{delta_bruteforce, delta_recursive, delta_theorem};
use totsum_core::summatory::SummatoryEngine;
use totsum_core::totient::phi_sieve_with_cap;
use totsum_core::Result;

#[derive(Debug, Clone, Serialize)]
pub struct MethodTiming {
    pub method: &'static str,
    pub value: String,
    pub build_ms: u128,
    pub compute_ms: u128,
    pub memo_hits: u64,
    pub memo_misses: u64,
    pub memo_entries: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchOutcome {
    pub query: &'static str,
    pub n: String,
    pub p: String,
    pub results: Vec<MethodTiming>,
    pub agree: bool,
}

pub fn run_bench(
    n: Nat,
    p: Prime,
    methods: &[DeltaMethod],
    sieve_cap: u64,
    cache: Option<&Path>,
) -> Result<BenchOutcome> {
    let mut results = Vec::new();
    for &method in methods {
        results.push(match method {
            DeltaMethod::Theorem | DeltaMethod::Recursive => {
                let build_start = Instant::now();
                let mut engine = SummatoryEngine::for_target(n, sieve_cap)?;
                if let Some(path) = cache {
                    if path.exists() {
                        engine.cache_load(path)?;
                    }
                }
                let build_ms = build_start.elapsed().as_millis();

                let compute_start = Instant::now();
                let value = match method {
                    DeltaMethod::Theorem => delta_theorem(&mut engine, n, p)?,
                    DeltaMethod::Recursive => delta_recursive(&mut engine, n, p)?,
                    DeltaMethod::Brute => unreachable!(),
                };
                let compute_ms = compute_start.elapsed().as_millis();
                if let Some(path) = cache {
                    engine.cache_save(path)?;
                }
                let stats = engine.stats();
                MethodTiming {
                    method: method.name(),
                    value: value.to_string(),
                    build_ms,
                    compute_ms,
                    memo_hits: stats.hits,
                    memo_misses: stats.misses,
                    memo_entries: engine.memo_len(),
                }
            }
            DeltaMethod::Brute => {
                let build_start = Instant::now();
                let table = phi_sieve_with_cap(n.max(Nat::ONE), sieve_cap)?;
                let build_ms = build_start.elapsed().as_millis();

                let compute_start = Instant::now();
                let value = delta_bruteforce(&table, n, p)?;
                let compute_ms = compute_start.elapsed().as_millis();
                MethodTiming {
                    method: method.name(),
                    value: value.to_string(),
                    build_ms,
                    compute_ms,
                    memo_hits: 0,
                    memo_misses: 0,
                    memo_entries: 0,
                }
            }
        });
    }
    let agree = results.windows(2).all(|w| w[0].value == w[1].value);
    Ok(BenchOutcome {
        query: "bench",
        n: n.to_string(),
        p: p.to_string(),
        results,
        agree,
    })
}
