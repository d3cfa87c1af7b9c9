//! Batch verification over ranges, shared by the CLI and the acceptance suite.

use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::modular_basis::{valid_primes_upto, ModularBasisSet, ModularVerifyReport};
use crate::sigma::MembershipTable;

/// Largest `nmax` accepted by [`verify_basis`] and [`growth_rows`].
pub const BATCH_CAP: u64 = 10_000_000;

/// Exhaustive reports for every prime `p ≤ pmax` with `p ≡ 3, 5 (mod 8)`.
pub fn verify_modular(pmax: u64, cap: u64) -> Result<Vec<ModularVerifyReport>> {
    if pmax > cap {
        return Err(Error::capacity(format!("pmax = {pmax} exceeds the exhaustive cap {cap}")));
    }
    valid_primes_upto(pmax)
        .into_par_iter()
        .map(|p| ModularBasisSet::new(p)?.verify(cap))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisFailure {
    NotCovered { n: u64 },
    BadRepresentation { n: u64, a: BigUint, a_prime: BigUint },
    BoundExceeded { n: u64, exact: u128, bound: BigUint },
    OracleMismatch { n: u64, exact: u128, brute: u64 },
}

impl BasisFailure {
    pub fn n(&self) -> u64 {
        match *self {
            BasisFailure::NotCovered { n }
            | BasisFailure::BadRepresentation { n, .. }
            | BasisFailure::BoundExceeded { n, .. }
            | BasisFailure::OracleMismatch { n, .. } => n,
        }
    }
}

impl fmt::Display for BasisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisFailure::NotCovered { n } => write!(f, "n={n}: sigma_exact = 0"),
            BasisFailure::BadRepresentation { n, a, a_prime } => {
                write!(f, "n={n}: representation ({a}, {a_prime}) is not certified")
            }
            BasisFailure::BoundExceeded { n, exact, bound } => {
                write!(f, "n={n}: sigma_exact = {exact} exceeds bound {bound}")
            }
            BasisFailure::OracleMismatch { n, exact, brute } => {
                write!(f, "n={n}: sigma_exact = {exact} but brute force gives {brute}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVerifySummary {
    pub nmax: u64,
    /// Values of `n` given the full check (coverage, representation, bound).
    pub checked: u64,
    /// Values of `n` also compared against the brute-force oracle.
    pub oracle_checked: u64,
    /// Largest `σ_A(n)` seen and where it occurs (smallest such `n`).
    pub max_sigma: u128,
    pub max_sigma_at: u64,
    /// Failure with the smallest `n`, if any.
    pub first_failure: Option<BasisFailure>,
}

impl BasisVerifySummary {
    pub fn passes(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn check_one(ctx: &BasisContext, n: u64, oracle: Option<&MembershipTable>) -> Result<(u128, Option<BasisFailure>)> {
    let exact = ctx.sigma_exact_u64(n)?;
    if exact == 0 {
        return Ok((exact, Some(BasisFailure::NotCovered { n })));
    }
    let nb = BigUint::from(n);
    let rep = ctx.represent(&nb)?;
    if !rep.certify(ctx, &nb)? {
        return Ok((
            exact,
            Some(BasisFailure::BadRepresentation {
                n,
                a: rep.a,
                a_prime: rep.a_prime,
            }),
        ));
    }
    let bound = ctx.sigma_bound(&nb)?;
    if BigUint::from(exact) > bound {
        return Ok((exact, Some(BasisFailure::BoundExceeded { n, exact, bound })));
    }
    if let Some(table) = oracle.filter(|t| n <= t.limit()) {
        let brute = table.sigma(n)?;
        if brute as u128 != exact {
            return Ok((exact, Some(BasisFailure::OracleMismatch { n, exact, brute })));
        }
    }
    Ok((exact, None))
}

/// For every `n ≤ nmax`: `σ_A(n) ≥ 1`, the constructed representation is
/// certified, `σ_A(n)` respects the analytic bound, and for `n ≤ oracle_limit`
/// the automaton agrees with brute force. The context must already cover `nmax`.
pub fn verify_basis(ctx: &BasisContext, nmax: u64, oracle_limit: u64) -> Result<BasisVerifySummary> {
    if nmax > BATCH_CAP {
        return Err(Error::capacity(format!("nmax = {nmax} exceeds {BATCH_CAP}")));
    }
    let oracle_limit = oracle_limit.min(nmax);
    let table = MembershipTable::build(ctx, oracle_limit)?;
    let results: Vec<(u128, Option<BasisFailure>)> = (0..=nmax)
        .into_par_iter()
        .map(|n| check_one(ctx, n, Some(&table)))
        .collect::<Result<_>>()?;

    let mut max_sigma = 0;
    let mut max_sigma_at = 0;
    let mut first_failure = None;
    for (n, (exact, failure)) in results.into_iter().enumerate() {
        if exact > max_sigma {
            max_sigma = exact;
            max_sigma_at = n as u64;
        }
        if first_failure.is_none() {
            first_failure = failure;
        }
    }
    Ok(BasisVerifySummary {
        nmax,
        checked: nmax + 1,
        oracle_checked: oracle_limit + 1,
        max_sigma,
        max_sigma_at,
        first_failure,
    })
}

/// One row of the growth report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u64,
    /// `max σ_A` over the window `(n - step, n]`.
    pub max_sigma: u128,
    /// `sigma_bound(n)`.
    pub bound: BigUint,
}

/// Rows for `N = step, 2·step, …, ≤ nmax`. The context must cover `nmax`.
pub fn growth_rows(ctx: &BasisContext, nmax: u64, step: u64) -> Result<Vec<GrowthRow>> {
    if step == 0 {
        return Err(Error::parameter("step must be positive"));
    }
    if nmax > BATCH_CAP {
        return Err(Error::capacity(format!("nmax = {nmax} exceeds {BATCH_CAP}")));
    }
    (1..=nmax / step)
        .into_par_iter()
        .map(|i| {
            let n = i * step;
            let max_sigma = ((n - step + 1)..=n)
                .map(|m| ctx.sigma_exact_u64(m))
                .try_fold(0u128, |acc, s| s.map(|s| acc.max(s)))?;
            Ok(GrowthRow {
                n,
                max_sigma,
                bound: ctx.sigma_bound(&BigUint::from(n))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular_basis::DEFAULT_VERIFY_CAP;
    use crate::primes::GrowthSpec;

    #[test]
    fn modular_rows_up_to_20() {
        let rows = verify_modular(20, DEFAULT_VERIFY_CAP).unwrap();
        assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![3, 5, 11, 13, 19]);
        assert!(rows.iter().all(|r| r.passes()));
        assert_eq!((rows[0].size, rows[0].min_sigma, rows[0].max_sigma), (9, 9, 9));
        assert!(verify_modular(DEFAULT_VERIFY_CAP + 1, DEFAULT_VERIFY_CAP).is_err());
    }

    #[test]
    fn basis_summary_small() {
        let ctx = BasisContext::new(GrowthSpec::Linear, 3).unwrap();
        let s = verify_basis(&ctx, 0, 0).unwrap();
        assert!(s.passes());
        assert_eq!((s.checked, s.max_sigma), (1, 1));
        let s = verify_basis(&ctx, 20_000, 10_000).unwrap();
        assert!(s.passes(), "{:?}", s.first_failure);
        assert_eq!(s.oracle_checked, 10_001);
    }

    #[test]
    fn growth_rows_example() {
        let ctx = BasisContext::new(GrowthSpec::Linear, 3).unwrap();
        let rows = growth_rows(&ctx, 1089, 100).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].n, 100);
        assert!(rows.windows(2).all(|w| w[0].bound <= w[1].bound));
        assert!(rows.iter().all(|r| BigUint::from(r.max_sigma) <= r.bound));
        let tiny = growth_rows(&ctx, 9, 3).unwrap();
        assert!(tiny.iter().all(|r| r.max_sigma <= 18));
    }
}
