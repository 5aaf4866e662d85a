//! Exact arithmetic for Euler's totient, its summatory function
//! `Psi(n) = sum_{k<=n} phi(k)`, and the prime-filtered partial sums
//! `delta(n, p)` (over multiples of p) and `upsilon(n, p)` (over k coprime
//! to p).
//!
//! Everything is computed in checked 128-bit integers; there are no
//! floating-point shortcuts and no wrapping arithmetic. The summatory
//! engine evaluates `Psi` in roughly O(n^(2/3)) time via a memoized
//! quotient-blocking recurrence, which makes the closed form
//! `delta(n, p) = (p-1) * sum_a Psi(floor(n/p^a))` practical at n = 10^10
//! and beyond. Every fast path has a literal table-sum oracle next to it.

pub mod arith;
pub mod error;
pub mod partition;
pub mod summatory;
pub mod totient;

pub use arith::{Nat, Prime};
pub use error::{Error, Result};
pub use partition::{PartitionSums, RemarkCheck};
pub use summatory::{MemoStats, SummatoryEngine};
pub use totient::{Factorization, PhiTable};
