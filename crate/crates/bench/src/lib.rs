//! Shared input sizes for the criterion benches.

/// Sieve sizes for the table-build benchmark.
pub const SIEVE_SIZES: [u64; 2] = [100_000, 1_000_000];

/// Targets for the sublinear engine benchmark.
pub const PSI_TARGETS: [u128; 3] = [10_000_000, 1_000_000_000, 10_000_000_000];

/// Target for the delta method comparison.
pub const DELTA_TARGET: u128 = 1_000_000_000;
