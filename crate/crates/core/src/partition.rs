//! Prime-filtered partial sums of the totient.
//!
//! For a prime p, `delta(n, p)` sums `phi(k)` over the multiples of p up to
//! n and `upsilon(n, p)` over the k coprime to p, so that
//! `psi(n) = upsilon(n, p) + delta(n, p)`. Delta admits the closed form
//!
//! ```text
//! delta(n, p) = (p - 1) * sum_{a=1}^{ilog(p, n)} psi(floor(n / p^a))
//! ```
//!
//! and the one-step recursion
//!
//! ```text
//! delta(n, p) = (p - 1) * psi(floor(n / p)) + delta(floor(n / p), p)
//! ```
//!
//! Both are implemented, over genuinely different floor-division routes, and
//! checked against the literal table sum.

use crate::arith::{ilog, Nat, Prime};
use crate::error::{Error, Result};
use crate::summatory::SummatoryEngine;
use crate::totient::PhiTable;

/// The consistent triple `(psi, upsilon, delta)` at a given `(n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionSums {
    pub n: Nat,
    pub p: Prime,
    pub psi: Nat,
    pub upsilon: Nat,
    pub delta: Nat,
}

/// Closed-form delta: `(p - 1) * sum psi(floor(n / p^a))`, the exponent
/// running from 1 to `ilog(p, n)` in ascending order (largest quotients
/// first). The empty sum for `n < p` is 0.
pub fn delta_theorem(engine: &mut SummatoryEngine, n: Nat, p: Prime) -> Result<Nat> {
    let n_val = n.get();
    let p_val = p.get() as u128;
    if n_val < p_val {
        return Ok(Nat::ZERO);
    }
    let bound = ilog(p, n)?;
    let mut acc = 0u128;
    let mut power = 1u128;
    for _ in 1..=bound {
        // power stays <= n by the ilog bound, so this cannot overflow.
        power *= p_val;
        acc = acc
            .checked_add(engine.psi_raw(n_val / power)?)
            .ok_or(Error::Overflow("delta summation"))?;
    }
    (p_val - 1)
        .checked_mul(acc)
        .map(Nat::new)
        .ok_or(Error::Overflow("delta scaling"))
}

/// Delta by iterating the one-step recursion: replace n by `floor(n / p)`
/// until it drops below p, accumulating `(p - 1) * psi(floor(n / p))` at
/// each step. Equal to [`delta_theorem`] because iterated division by p is
/// division by p^k, but computed along the chained-division route.
pub fn delta_recursive(engine: &mut SummatoryEngine, n: Nat, p: Prime) -> Result<Nat> {
    let p_val = p.get() as u128;
    let mut m = n.get();
    let mut acc = 0u128;
    while m >= p_val {
        m /= p_val;
        let term = (p_val - 1)
            .checked_mul(engine.psi_raw(m)?)
            .ok_or(Error::Overflow("delta step"))?;
        acc = acc
            .checked_add(term)
            .ok_or(Error::Overflow("delta summation"))?;
    }
    Ok(Nat::new(acc))
}

/// Literal delta: sum `phi(k)` over multiples of p up to n, straight from a
/// totient table. Independent of the engine entirely.
pub fn delta_bruteforce(table: &PhiTable, n: Nat, p: Prime) -> Result<Nat> {
    if n.get() > table.limit() as u128 {
        return Err(Error::OutOfRange {
            what: "delta_bruteforce",
            value: n.get(),
            max: table.limit() as u128,
        });
    }
    let n = n.get() as u64;
    let phi = table.as_slice();
    let mut acc = 0u128;
    let mut k = p.get();
    while k <= n {
        acc += phi[k as usize] as u128;
        k += p.get();
    }
    Ok(Nat::new(acc))
}

/// `upsilon(n, p) = psi(n) - delta(n, p)`: the totient sum over k coprime
/// to p.
pub fn upsilon(engine: &mut SummatoryEngine, n: Nat, p: Prime) -> Result<Nat> {
    let psi = engine.psi(n)?;
    let delta = delta_theorem(engine, n, p)?;
    psi.checked_sub(delta)
}

/// The full `(psi, upsilon, delta)` triple with one shared pass of psi
/// evaluations.
pub fn partition(engine: &mut SummatoryEngine, n: Nat, p: Prime) -> Result<PartitionSums> {
    let psi = engine.psi(n)?;
    let delta = delta_theorem(engine, n, p)?;
    let upsilon = psi.checked_sub(delta)?;
    Ok(PartitionSums {
        n,
        p,
        psi,
        upsilon,
        delta,
    })
}

/// Outcome of checking the p-scaling identities at one `(n, p)`.
///
/// The recursion step at argument `p*n` forces
/// `delta(p*n, p) = (p - 1) * psi(n) + delta(n, p)`; that is the corrected
/// form. The variant `delta(p*n, p) = (p - 1) * (psi(n) + delta(n, p))`,
/// which scales both terms, holds only when `p = 2` or `delta(n, p) = 0`.
/// At `p = 2` both collapse to `delta(2n, 2) = psi(n) + delta(n, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemarkCheck {
    /// `delta(p*n, p) == (p - 1) * psi(n) + delta(n, p)`.
    pub corrected_holds: bool,
    /// `delta(p*n, p) == (p - 1) * (psi(n) + delta(n, p))`.
    pub general_form_holds: bool,
    /// `delta(2n, 2) == psi(n) + delta(n, 2)`; `None` when `p != 2`.
    pub p2_holds: Option<bool>,
}

/// Evaluate all three scaling identities exactly at `(n, p)`.
pub fn remark_check(engine: &mut SummatoryEngine, n: Nat, p: Prime) -> Result<RemarkCheck> {
    if n.is_zero() {
        return Err(Error::Domain("remark_check requires n >= 1"));
    }
    let pn = p.as_nat().checked_mul(n)?;
    let delta_pn = delta_theorem(engine, pn, p)?.get();
    let psi_n = engine.psi(n)?.get();
    let delta_n = delta_theorem(engine, n, p)?.get();
    let p_val = p.get() as u128;

    let scaled_psi = (p_val - 1)
        .checked_mul(psi_n)
        .ok_or(Error::Overflow("remark scaling"))?;
    let corrected = scaled_psi
        .checked_add(delta_n)
        .ok_or(Error::Overflow("remark sum"))?;
    let general = (p_val - 1)
        .checked_mul(
            psi_n
                .checked_add(delta_n)
                .ok_or(Error::Overflow("remark sum"))?,
        )
        .ok_or(Error::Overflow("remark scaling"))?;

    Ok(RemarkCheck {
        corrected_holds: delta_pn == corrected,
        general_form_holds: delta_pn == general,
        p2_holds: (p.get() == 2).then(|| delta_pn == psi_n + delta_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summatory::SummatoryEngine;
    use crate::totient::phi_sieve;

    fn nat(v: u128) -> Nat {
        Nat::new(v)
    }

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn engine() -> SummatoryEngine {
        SummatoryEngine::build(nat(64)).unwrap()
    }

    #[test]
    fn delta_theorem_examples() {
        let mut e = engine();
        // phi(2)+phi(4)+phi(6)+phi(8)+phi(10) = 1+2+2+4+4.
        assert_eq!(delta_theorem(&mut e, nat(10), prime(2)).unwrap(), nat(13));
        // No multiples of 5 up to 4: empty sum.
        assert_eq!(delta_theorem(&mut e, nat(4), prime(5)).unwrap(), nat(0));
        // phi(3)+phi(6)+phi(9) = 2+2+6.
        assert_eq!(delta_theorem(&mut e, nat(9), prime(3)).unwrap(), nat(10));
        assert_eq!(delta_theorem(&mut e, nat(0), prime(2)).unwrap(), nat(0));
    }

    #[test]
    fn delta_recursive_examples() {
        let mut e = engine();
        assert_eq!(delta_recursive(&mut e, nat(10), prime(2)).unwrap(), nat(13));
        assert_eq!(delta_recursive(&mut e, nat(1), prime(7)).unwrap(), nat(0));
        // 2 * Psi(3) + Delta(3, 3) = 8 + 2.
        assert_eq!(delta_recursive(&mut e, nat(9), prime(3)).unwrap(), nat(10));
    }

    #[test]
    fn delta_bruteforce_examples() {
        let table = phi_sieve(nat(64)).unwrap();
        assert_eq!(delta_bruteforce(&table, nat(10), prime(2)).unwrap(), nat(13));
        assert_eq!(delta_bruteforce(&table, nat(0), prime(3)).unwrap(), nat(0));
        assert_eq!(delta_bruteforce(&table, nat(10), prime(11)).unwrap(), nat(0));
        assert!(matches!(
            delta_bruteforce(&table, nat(65), prime(2)),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn upsilon_examples() {
        let mut e = engine();
        assert_eq!(upsilon(&mut e, nat(10), prime(2)).unwrap(), nat(19)); // 32 - 13
        assert_eq!(upsilon(&mut e, nat(4), prime(5)).unwrap(), nat(6)); // 1+1+2+2
        assert_eq!(upsilon(&mut e, nat(1), prime(13)).unwrap(), nat(1));
    }

    #[test]
    fn partition_examples() {
        let mut e = engine();
        let s = partition(&mut e, nat(10), prime(2)).unwrap();
        assert_eq!((s.psi, s.upsilon, s.delta), (nat(32), nat(19), nat(13)));

        let z = partition(&mut e, nat(0), prime(2)).unwrap();
        assert_eq!((z.psi, z.upsilon, z.delta), (nat(0), nat(0), nat(0)));

        let t = partition(&mut e, nat(9), prime(3)).unwrap();
        assert_eq!((t.psi, t.upsilon, t.delta), (nat(28), nat(18), nat(10)));
        assert_eq!(t.psi, t.upsilon.checked_add(t.delta).unwrap());
    }

    #[test]
    fn three_way_agreement_small_sweep() {
        let table = phi_sieve(nat(600)).unwrap();
        let mut e = engine();
        for p in [2u64, 3, 5, 7, 97] {
            let p = prime(p);
            for n in 0..=600u128 {
                let brute = delta_bruteforce(&table, nat(n), p).unwrap();
                assert_eq!(delta_theorem(&mut e, nat(n), p).unwrap(), brute);
                assert_eq!(delta_recursive(&mut e, nat(n), p).unwrap(), brute);
            }
        }
    }

    #[test]
    fn one_step_recursion_holds() {
        let mut e = engine();
        for p in [2u64, 3, 5] {
            let p = prime(p);
            for n in 0..=500u128 {
                let whole = delta_theorem(&mut e, nat(n), p).unwrap();
                let shrunk = n / p.get() as u128;
                let step = (p.get() as u128 - 1) * e.psi(nat(shrunk)).unwrap().get()
                    + delta_theorem(&mut e, nat(shrunk), p).unwrap().get();
                assert_eq!(whole.get(), step, "n = {n}, p = {p}");
            }
        }
    }

    #[test]
    fn delta_depends_only_on_quotient_chain() {
        let mut e = engine();
        for p in [2u64, 3, 7] {
            let p = prime(p);
            for n in 0..=400u128 {
                let clamped = p.get() as u128 * (n / p.get() as u128);
                assert_eq!(
                    delta_theorem(&mut e, nat(n), p).unwrap(),
                    delta_theorem(&mut e, nat(clamped), p).unwrap()
                );
            }
        }
    }

    #[test]
    fn remark_examples() {
        let mut e = engine();

        // p = 2: both forms coincide; Delta(10,2) = 13 = Psi(5) + Delta(5,2).
        let c = remark_check(&mut e, nat(5), prime(2)).unwrap();
        assert!(c.corrected_holds);
        assert!(c.general_form_holds);
        assert_eq!(c.p2_holds, Some(true));

        // p = 3, n = 3: Delta(9,3) = 10 = 2*Psi(3) + Delta(3,3) = 8 + 2, but
        // the scaled variant gives 2*(4+2) = 12.
        let w = remark_check(&mut e, nat(3), prime(3)).unwrap();
        assert!(w.corrected_holds);
        assert!(!w.general_form_holds);
        assert_eq!(w.p2_holds, None);

        // Delta(2,2) = 1 = Psi(1) + Delta(1,2) = 1 + 0.
        let t = remark_check(&mut e, nat(1), prime(2)).unwrap();
        assert!(t.corrected_holds);
        assert_eq!(t.p2_holds, Some(true));

        assert!(matches!(
            remark_check(&mut e, nat(0), prime(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn remark_errata_witness_by_bruteforce() {
        // All three quantities straight from the table: Delta(9,3) = 10,
        // Psi(3) = 4, Delta(3,3) = 2. Corrected: 2*4 + 2 = 10. Scaled
        // variant: 2*(4 + 2) = 12 != 10.
        let table = phi_sieve(nat(16)).unwrap();
        let p3 = prime(3);
        let delta_9 = delta_bruteforce(&table, nat(9), p3).unwrap().get();
        let delta_3 = delta_bruteforce(&table, nat(3), p3).unwrap().get();
        let psi_3: u128 = (1..=3u64).map(|k| table.get(k).unwrap().get()).sum();
        assert_eq!(delta_9, 10);
        assert_eq!(2 * psi_3 + delta_3, 10);
        assert_eq!(2 * (psi_3 + delta_3), 12);
    }

    #[test]
    fn corrected_form_sweep() {
        let mut e = engine();
        for p in [2u64, 3, 5, 7] {
            let p = prime(p);
            for n in 1..=300u128 {
                let c = remark_check(&mut e, nat(n), p).unwrap();
                assert!(c.corrected_holds, "n = {n}, p = {p}");
                if p.get() == 2 {
                    assert_eq!(c.p2_holds, Some(true));
                }
                // The scaled variant holds exactly when (p-2)*delta = 0.
                let delta_n = delta_theorem(&mut e, nat(n), p).unwrap().get();
                assert_eq!(
                    c.general_form_holds,
                    (p.get() as u128 - 2) * delta_n == 0,
                    "n = {n}, p = {p}"
                );
            }
        }
    }
}
