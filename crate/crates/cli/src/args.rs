//! Command-line surface.

use clap::{Parser, Subcommand, ValueEnum};
use std::num::{NonZeroU64, NonZeroUsize};
use std::path::PathBuf;
use totsum_core::Nat;

#[derive(Debug, Parser)]
#[command(
    name = "totsum",
    version,
    about = "Exact Euler-totient partial sums: phi, psi, and the prime-filtered delta/upsilon",
    long_about = None
)]
pub struct Cli {
    /// Output format for results on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Psi memo cache file (created if missing, updated after queries).
    #[arg(long, global = true, env = "TOTSUM_CACHE")]
    pub cache: Option<PathBuf>,

    /// Maximum sieve table size, in entries.
    #[arg(long, global = true, default_value_t = totsum_core::totient::DEFAULT_SIEVE_CAP)]
    pub sieve_cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euler's totient phi(n).
    Phi { n: Nat },

    /// Summatory totient psi(n) = phi(1) + ... + phi(n).
    Psi {
        n: Nat,
        #[arg(long, value_enum, default_value_t = PsiMethod::Auto)]
        method: PsiMethod,
    },

    /// Totient sum over multiples of p up to n.
    Delta {
        n: Nat,
        /// Filter prime p.
        p: u64,
        #[arg(long, value_enum, default_value_t = DeltaMethod::Theorem)]
        method: DeltaMethod,
    },

    /// Totient sum over k <= n coprime to p.
    Upsilon { n: Nat, p: u64 },

    /// The consistent triple psi / upsilon / delta at (n, p).
    Partition { n: Nat, p: u64 },

    /// Sweep the identity battery over n in [1, max-n] and a prime set.
    Verify {
        #[arg(long = "max-n")]
        max_n: NonZeroU64,
        /// Comma-separated primes, e.g. 2,3,5.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Comma-separated subset of: eq2,thm,eq4,remark,prop1,prop3,psi-oracle.
        /// Defaults to all.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Worker count; results are identical for any value.
        #[arg(long, default_value = "1")]
        jobs: NonZeroUsize,
    },

    /// Time delta computations and report memo statistics.
    Bench {
        #[arg(long)]
        n: Nat,
        #[arg(long)]
        p: u64,
        /// Comma-separated subset of: theorem,recursive,brute.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [DeltaMethod::Theorem])]
        method: Vec<DeltaMethod>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PsiMethod {
    Auto,
    Sieve,
    Sublinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaMethod {
    Theorem,
    Recursive,
    Brute,
}

impl DeltaMethod {
    pub fn name(self) -> &'static str {
        match self {
            DeltaMethod::Theorem => "theorem",
            DeltaMethod::Recursive => "recursive",
            DeltaMethod::Brute => "brute",
        }
    }
}
