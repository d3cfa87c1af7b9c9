//! The set `A` and the context every query runs against.
//!
//! With canonical digits `n = (a_1, …, a_k)` in the radix `b_j = p_j²`,
//! `n ∈ A` iff `a_j ∈ A_{p_j}` for every `j < k`; the top digit is free and
//! `0 ∈ A`. This single-expansion rule is equivalent to the union over all
//! lengths: a padded expansion of `n` with zero top digits constrains every
//! canonical digit (zero is always in `A_{p_j}`), so it is never weaker than
//! the canonical one.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mixed_radix::{DigitString, RadixSystem};
use crate::modular_basis::{ModularBasisSet, A_SIGMA_BOUND, DEFAULT_VERIFY_CAP};
use crate::primes::{GrowthSpec, PrimeSequence};

/// Largest `N` accepted by [`BasisContext::enumerate_upto`].
pub const ENUMERATE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone)]
struct Level {
    set: ModularBasisSet,
    max_sigma: OnceLock<Result<u64>>,
}

/// Prime sequence, radix and per-digit modular bases up to a fixed digit capacity.
///
/// Queries never grow the context; [`BasisContext::extend_to`] and
/// [`BasisContext::ensure_capacity`] do, and need `&mut self`.
#[derive(Debug, Clone)]
pub struct BasisContext {
    seq: PrimeSequence,
    radix: RadixSystem,
    levels: Vec<Level>,
    span: BigUint,
    verify_cap: u64,
}

/// A certified decomposition `n = a + a'` with `a, a' ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub a: BigUint,
    pub a_prime: BigUint,
}

/// Digit-level output of the representation construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RepresentationTrace {
    pub a: Vec<u64>,
    pub a_prime: Vec<u64>,
    /// `c_1, …, c_{k-1}`.
    pub carries: Vec<u64>,
}

impl BasisContext {
    pub fn new(growth: GrowthSpec, capacity_digits: usize) -> Result<Self> {
        if capacity_digits == 0 {
            return Err(Error::parameter("digit capacity must be at least 1"));
        }
        let mut ctx = BasisContext {
            seq: PrimeSequence::new(growth),
            radix: RadixSystem::default(),
            levels: Vec::new(),
            span: BigUint::from(1u32),
            verify_cap: DEFAULT_VERIFY_CAP,
        };
        ctx.extend_to(capacity_digits)?;
        Ok(ctx)
    }

    /// Smallest context (at least one digit) able to answer queries about `n`.
    pub fn for_value(growth: GrowthSpec, n: &BigUint) -> Result<Self> {
        let mut ctx = Self::new(growth, 1)?;
        ctx.ensure_capacity(n)?;
        Ok(ctx)
    }

    /// Largest prime whose `M_j` is computed exhaustively; beyond it `M_j = 594`.
    pub fn with_verify_cap(mut self, cap: u64) -> Self {
        self.verify_cap = cap;
        for level in &mut self.levels {
            level.max_sigma = OnceLock::new();
        }
        self
    }

    pub fn growth(&self) -> GrowthSpec {
        self.seq.growth()
    }

    /// Number of digit positions available.
    pub fn capacity(&self) -> usize {
        self.levels.len()
    }

    pub fn primes(&self) -> &[u64] {
        self.seq.primes()
    }

    pub fn radix(&self) -> &RadixSystem {
        &self.radix
    }

    /// `A_{p_j}` for the 1-based digit position `j`.
    pub fn level(&self, j: usize) -> &ModularBasisSet {
        &self.levels[j - 1].set
    }

    pub fn extend_to(&mut self, capacity_digits: usize) -> Result<()> {
        if capacity_digits <= self.levels.len() {
            return Ok(());
        }
        self.seq.extend_to(capacity_digits)?;
        for &p in &self.seq.primes()[self.levels.len()..] {
            let set = ModularBasisSet::new(p)?;
            self.radix.push(set.modulus());
            self.span *= set.modulus();
            self.levels.push(Level {
                set,
                max_sigma: OnceLock::new(),
            });
        }
        Ok(())
    }

    /// Grows the capacity until `n < b_1 ⋯ b_m`.
    pub fn ensure_capacity(&mut self, n: &BigUint) -> Result<()> {
        while &self.span <= n {
            self.extend_to(self.levels.len() + 1)?;
        }
        Ok(())
    }

    /// `M_j = max_r σ_{A_{p_j}}(r)` for the 1-based position `j`: exact when
    /// `p_j` is within the verification cap, otherwise the proven 594.
    pub fn level_max(&self, j: usize) -> Result<u64> {
        let level = &self.levels[j - 1];
        level
            .max_sigma
            .get_or_init(|| {
                if level.set.p() <= self.verify_cap {
                    level.set.max_sigma(self.verify_cap)
                } else {
                    Ok(A_SIGMA_BOUND)
                }
            })
            .clone()
    }

    pub fn digits(&self, n: &BigUint) -> Result<DigitString> {
        match n.to_u64() {
            Some(v) => self.radix.to_digits_u64(v),
            None => self.radix.to_digits(n),
        }
    }

    fn digits_in_basis(&self, digits: &[u64]) -> bool {
        let below_top = digits.len().saturating_sub(1);
        digits[..below_top]
            .iter()
            .zip(&self.levels)
            .all(|(&d, level)| level.set.contains(d))
    }

    /// `n ∈ A`.
    pub fn contains(&self, n: &BigUint) -> Result<bool> {
        Ok(self.digits_in_basis(self.digits(n)?.digits()))
    }

    pub fn contains_u64(&self, n: u64) -> Result<bool> {
        Ok(self.digits_in_basis(self.radix.to_digits_u64(n)?.digits()))
    }

    /// Members of `A` in `[0, limit]`, ascending.
    pub fn enumerate_upto(&self, limit: u64) -> Result<Vec<u64>> {
        if limit > ENUMERATE_CAP {
            return Err(Error::capacity(format!("enumeration limit {limit} exceeds {ENUMERATE_CAP}")));
        }
        let mut out = Vec::new();
        for n in 0..=limit {
            if self.contains_u64(n)? {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Builds `n = a + a'` digit by digit. At each position below the top the
    /// lexicographically smallest pair `(a_j, a'_j) ∈ A_j²` with
    /// `a_j + a'_j ≡ n_j - c_{j-1} (mod b_j)` is taken; the top digit of `a`
    /// absorbs the final carry and `a'` is one digit shorter.
    pub fn represent(&self, n: &BigUint) -> Result<Representation> {
        let trace = self.represent_trace(n)?;
        Ok(Representation {
            a: self.radix.evaluate(&trace.a),
            a_prime: self.radix.evaluate(&trace.a_prime),
        })
    }

    pub(crate) fn represent_trace(&self, n: &BigUint) -> Result<RepresentationTrace> {
        let digits = self.digits(n)?.into_digits();
        let k = digits.len();
        if k == 0 {
            return Ok(RepresentationTrace {
                a: Vec::new(),
                a_prime: Vec::new(),
                carries: Vec::new(),
            });
        }
        let mut a = Vec::with_capacity(k);
        let mut a_prime = Vec::with_capacity(k - 1);
        let mut carries = Vec::with_capacity(k - 1);
        let mut carry = 0u64;
        for (j, &nj) in digits[..k - 1].iter().enumerate() {
            let set = &self.levels[j].set;
            let b = set.modulus();
            let target = (nj + b - carry) % b;
            let (x, y) = set
                .least_pair(target)
                .ok_or_else(|| {
                    Error::Internal(format!(
                        "residue {target} is not a sum of two elements of A_{}",
                        set.p()
                    ))
                })?;
            carry = (x + y + carry) / b;
            if carry > 1 {
                return Err(Error::Internal(format!("carry {carry} at position {}", j + 1)));
            }
            a.push(x);
            a_prime.push(y);
            carries.push(carry);
        }
        let top = digits[k - 1];
        if top < carry {
            return Err(Error::Internal("top digit cannot absorb the carry".to_string()));
        }
        a.push(top - carry);
        Ok(RepresentationTrace { a, a_prime, carries })
    }
}

impl Representation {
    /// `a + a' = n` and both summands lie in `A`.
    pub fn certify(&self, ctx: &BasisContext, n: &BigUint) -> Result<bool> {
        Ok(&self.a + &self.a_prime == *n && ctx.contains(&self.a)? && ctx.contains(&self.a_prime)?)
    }
}

impl Default for Representation {
    fn default() -> Self {
        Representation {
            a: BigUint::zero(),
            a_prime: BigUint::zero(),
        }
    }
}
