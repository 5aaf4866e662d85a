//! Library half of the `totsum` binary: argument surface, subcommand
//! dispatch, verification sweeps, bench harness, and output rendering.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 overflow or resource exhaustion.

pub mod args;
pub mod bench;
pub mod output;
pub mod verify;

use args::{Cli, Command, DeltaMethod, PsiMethod};
use clap::Parser;
use output::{PartitionResult, QueryResult};
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;
use totsum_core::arith::{Nat, Prime};
use totsum_core::partition::{delta_bruteforce, delta_recursive, delta_theorem, partition};
use totsum_core::summatory::{psi_bruteforce_with_cap, SummatoryEngine, DEFAULT_THRESHOLD};
use totsum_core::totient::{phi, phi_sieve_with_cap};
use totsum_core::{Error, Result};
use verify::{CheckKind, VerifyConfig, ALL_CHECKS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Full CLI entry point: parse, dispatch, map errors to exit codes.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too, with exit code 0.
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NotPrime(_) | Error::Parse { .. } | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_RESOURCE,
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let started = Instant::now();
    let code = match &cli.command {
        Command::Phi { n } => {
            let value = phi(*n)?;
            print(output::render_query(
                &QueryResult {
                    query: "phi",
                    n: n.to_string(),
                    p: None,
                    method: "pointwise",
                    value: value.to_string(),
                },
                cli.format,
            ));
            EXIT_OK
        }
        Command::Psi { n, method } => {
            let (value, used) = run_psi(cli, *n, *method)?;
            print(output::render_query(
                &QueryResult {
                    query: "psi",
                    n: n.to_string(),
                    p: None,
                    method: used,
                    value: value.to_string(),
                },
                cli.format,
            ));
            EXIT_OK
        }
        Command::Delta { n, p, method } => {
            let p = Prime::new(*p)?;
            let value = run_delta(cli, *n, p, *method)?;
            print(output::render_query(
                &QueryResult {
                    query: "delta",
                    n: n.to_string(),
                    p: Some(p.to_string()),
                    method: method.name(),
                    value: value.to_string(),
                },
                cli.format,
            ));
            EXIT_OK
        }
        Command::Upsilon { n, p } => {
            let p = Prime::new(*p)?;
            let mut engine = engine_for(cli, *n)?;
            load_cache(&mut engine, &cli.cache)?;
            let value = totsum_core::partition::upsilon(&mut engine, *n, p)?;
            save_cache(&engine, &cli.cache)?;
            print(output::render_query(
                &QueryResult {
                    query: "upsilon",
                    n: n.to_string(),
                    p: Some(p.to_string()),
                    method: "theorem",
                    value: value.to_string(),
                },
                cli.format,
            ));
            EXIT_OK
        }
        Command::Partition { n, p } => {
            let p = Prime::new(*p)?;
            let mut engine = engine_for(cli, *n)?;
            load_cache(&mut engine, &cli.cache)?;
            let sums = partition(&mut engine, *n, p)?;
            save_cache(&engine, &cli.cache)?;
            print(output::render_partition(
                &PartitionResult {
                    query: "partition",
                    n: n.to_string(),
                    p: p.to_string(),
                    psi: sums.psi.to_string(),
                    upsilon: sums.upsilon.to_string(),
                    delta: sums.delta.to_string(),
                },
                cli.format,
            ));
            EXIT_OK
        }
        Command::Verify {
            max_n,
            primes,
            checks,
            jobs,
        } => {
            let primes: Vec<Prime> = primes
                .iter()
                .map(|&p| Prime::new(p))
                .collect::<Result<_>>()?;
            let checks = match checks {
                None => ALL_CHECKS.to_vec(),
                Some(tokens) => {
                    let mut parsed = Vec::new();
                    for token in tokens {
                        let check = CheckKind::parse(token)?;
                        if !parsed.contains(&check) {
                            parsed.push(check);
                        }
                    }
                    parsed
                }
            };
            let report = verify::verify_suite(&VerifyConfig {
                max_n: max_n.get(),
                primes,
                checks,
                jobs: jobs.get(),
                sieve_cap: cli.sieve_cap,
            })?;
            print(output::render_verify(&report, cli.format));
            eprintln!("verify: {} ms", report.elapsed_ms);
            if report.passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Command::Bench { n, p, method } => {
            let p = Prime::new(*p)?;
            let mut methods: Vec<DeltaMethod> = Vec::new();
            for &m in method {
                if !methods.contains(&m) {
                    methods.push(m);
                }
            }
            let outcome =
                bench::run_bench(*n, p, &methods, cli.sieve_cap, cli.cache.as_deref())?;
            print(output::render_bench(&outcome, cli.format));
            if outcome.agree {
                EXIT_OK
            } else {
                eprintln!("error: methods disagree");
                EXIT_VERIFY_FAILED
            }
        }
    };
    if !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    }
    Ok(code)
}

fn print(rendered: String) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(rendered.as_bytes());
    let _ = stdout.flush();
}

fn run_psi(cli: &Cli, n: Nat, method: PsiMethod) -> Result<(Nat, &'static str)> {
    let auto_cutoff = (DEFAULT_THRESHOLD.min(cli.sieve_cap)) as u128;
    let resolved = match method {
        PsiMethod::Sieve => PsiMethod::Sieve,
        PsiMethod::Sublinear => PsiMethod::Sublinear,
        PsiMethod::Auto => {
            if n.get() <= auto_cutoff {
                PsiMethod::Sieve
            } else {
                PsiMethod::Sublinear
            }
        }
    };
    match resolved {
        PsiMethod::Sieve => Ok((psi_bruteforce_with_cap(n, cli.sieve_cap)?, "sieve")),
        PsiMethod::Sublinear => {
            let mut engine = engine_for(cli, n)?;
            load_cache(&mut engine, &cli.cache)?;
            let value = engine.psi(n)?;
            save_cache(&engine, &cli.cache)?;
            Ok((value, "sublinear"))
        }
        PsiMethod::Auto => unreachable!(),
    }
}

fn run_delta(cli: &Cli, n: Nat, p: Prime, method: DeltaMethod) -> Result<Nat> {
    match method {
        DeltaMethod::Brute => {
            let table = phi_sieve_with_cap(n.max(Nat::ONE), cli.sieve_cap)?;
            delta_bruteforce(&table, n, p)
        }
        DeltaMethod::Theorem | DeltaMethod::Recursive => {
            let mut engine = engine_for(cli, n)?;
            load_cache(&mut engine, &cli.cache)?;
            let value = match method {
                DeltaMethod::Theorem => delta_theorem(&mut engine, n, p)?,
                DeltaMethod::Recursive => delta_recursive(&mut engine, n, p)?,
                DeltaMethod::Brute => unreachable!(),
            };
            save_cache(&engine, &cli.cache)?;
            Ok(value)
        }
    }
}

/// Engine sized for the target n, clamped to the sieve cap.
fn engine_for(cli: &Cli, n: Nat) -> Result<SummatoryEngine> {
    SummatoryEngine::for_target(n, cli.sieve_cap)
}

fn load_cache(engine: &mut SummatoryEngine, cache: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = cache {
        if path.exists() {
            let loaded = engine.cache_load(path)?;
            eprintln!("cache: loaded {loaded} entries from {}", path.display());
        }
    }
    Ok(())
}

fn save_cache(engine: &SummatoryEngine, cache: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = cache {
        let saved = engine.cache_save(path)?;
        eprintln!("cache: saved {saved} entries to {}", path.display());
    }
    Ok(())
}
