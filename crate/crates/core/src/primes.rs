//! Deterministic prime generation for the radix of the basis.
//!
//! The canonical sequence is `p_k = least prime q ≡ 3 (mod 8)` with
//! `q ≥ f(k)` and `q > p_{k-1}` (taking `p_0 = 2`), where `f` is the
//! configured [`GrowthSpec`]. Primality is decided by a deterministic
//! Miller-Rabin test that is exact on all of `u64`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Sequence primes stay below this so that sums of two elements of `B_p`
/// (up to `4p²`) fit in a `u64`.
pub const PRIME_LIMIT: u64 = 1 << 31;

/// Largest `N` accepted by [`least_p3mod8_in_doubling`]; the sieve is linear in `N`.
pub const DOUBLING_SIEVE_LIMIT: u64 = 1 << 40;

// Witness set that is deterministic for every n < 3.3 * 10^24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for any `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality of an arbitrary-size integer. Only the `u64` range is supported;
/// larger inputs are a capacity error rather than a probabilistic verdict.
pub fn is_prime(n: &BigUint) -> Result<bool> {
    match n.to_u64() {
        Some(v) => Ok(is_prime_u64(v)),
        None => Err(Error::capacity(format!(
            "primality of {n} is outside the deterministic range (< 2^64)"
        ))),
    }
}

fn small_primes_upto(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// The least prime `p ∈ [N, 2N]` with `p ≡ 3 (mod 8)`, found by a segmented
/// sieve of Eratosthenes over the interval. `None` if the interval has no such prime.
pub fn least_p3mod8_in_doubling(n: u64) -> Result<Option<u64>> {
    if n < 2 {
        return Err(Error::parameter(format!("interval start must be >= 2, got {n}")));
    }
    if n > DOUBLING_SIEVE_LIMIT {
        return Err(Error::capacity(format!(
            "sieving [{n}, {}] exceeds the limit N <= 2^40",
            2 * n as u128
        )));
    }
    let hi = 2 * n;
    let sieve_primes = small_primes_upto(hi.isqrt());
    const SEGMENT: u64 = 1 << 16;

    let mut lo = n;
    while lo <= hi {
        let seg_hi = (lo + SEGMENT - 1).min(hi);
        let len = (seg_hi - lo + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &sieve_primes {
            if p * p > seg_hi {
                break;
            }
            let first = (lo.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= seg_hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite.iter().enumerate() {
            let v = lo + i as u64;
            if !c && v >= 2 && v % 8 == 3 {
                return Ok(Some(v));
            }
        }
        lo = seg_hi + 1;
    }
    Ok(None)
}

/// The least prime `q > x` with `q ≡ 3 (mod 8)`.
pub fn next_p3mod8_above(x: u64) -> Result<u64> {
    let overflow = || Error::capacity(format!("no prime ≡ 3 (mod 8) above {x} fits in u64"));
    // smallest q > x with q ≡ 3 (mod 8)
    let mut q = x.checked_add(1).ok_or_else(overflow)?;
    q = q.checked_add((11 - q % 8) % 8).ok_or_else(overflow)?;
    loop {
        if is_prime_u64(q) {
            return Ok(q);
        }
        q = q.checked_add(8).ok_or_else(overflow)?;
    }
}

/// Positive rational `numer / denom`, parsed from `"a/b"`, `"0.25"` or `"3"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rate {
    numer: u64,
    denom: u64,
}

impl Rate {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if numer == 0 || denom == 0 {
            return Err(Error::parameter(format!(
                "growth rate must be a positive rational, got {numer}/{denom}"
            )));
        }
        let g = num_integer::gcd(numer, denom);
        Ok(Rate {
            numer: numer / g,
            denom: denom / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parameter(format!("cannot parse growth rate {s:?}"));
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if let Some((n, d)) = s.split_once('/') {
            if !all_digits(n) || !all_digits(d) {
                return Err(bad());
            }
            return Rate::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if !(all_digits(int) || (int.is_empty() && !frac.is_empty()))
            || !(frac.is_empty() || all_digits(frac))
            || frac.len() > 18
        {
            return Err(bad());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let int_part: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_part: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let numer = int_part
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        Rate::new(numer, denom)
    }
}

/// The growth function `f` that lower-bounds the sequence primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GrowthSpec {
    /// `f(k) = k`.
    #[default]
    Linear,
    /// `f(k) = ⌈exp(c·k)⌉`.
    Exponential(Rate),
}

impl GrowthSpec {
    /// Default rate for the exponential regime, `c = 1/2`.
    pub fn exponential_default() -> Self {
        GrowthSpec::Exponential(Rate { numer: 1, denom: 2 })
    }

    /// Evaluates `f(k)` for `k ≥ 1`.
    pub fn eval(&self, k: u64) -> Result<u64> {
        match *self {
            GrowthSpec::Linear => Ok(k),
            GrowthSpec::Exponential(c) => {
                let v = (c.to_f64() * k as f64).exp().ceil();
                // 2^53: beyond this f64 no longer represents every integer
                if !v.is_finite() || v > 9_007_199_254_740_992.0 {
                    return Err(Error::capacity(format!(
                        "f({k}) = exp({c}·{k}) is too large to evaluate exactly"
                    )));
                }
                Ok(v as u64)
            }
        }
    }
}

impl fmt::Display for GrowthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthSpec::Linear => write!(f, "linear"),
            GrowthSpec::Exponential(c) => write!(f, "exp(c={c})"),
        }
    }
}

/// Append-only canonical prime sequence `p_1 < p_2 < …` for a growth spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSequence {
    growth: GrowthSpec,
    primes: Vec<u64>,
}

impl PrimeSequence {
    pub fn new(growth: GrowthSpec) -> Self {
        PrimeSequence {
            growth,
            primes: Vec::new(),
        }
    }

    pub fn growth(&self) -> GrowthSpec {
        self.growth
    }

    /// `p_1, …, p_m` (index 0 holds `p_1`).
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Extends the sequence to at least `count` primes. Existing entries never change.
    pub fn extend_to(&mut self, count: usize) -> Result<()> {
        while self.primes.len() < count {
            let k = self.primes.len() as u64 + 1;
            let prev = self.primes.last().copied().unwrap_or(2);
            let floor = self.growth.eval(k)?;
            let q = next_p3mod8_above(prev.max(floor.saturating_sub(1)))?;
            if q >= PRIME_LIMIT {
                return Err(Error::capacity(format!(
                    "p_{k} = {q} exceeds the supported prime limit 2^31"
                )));
            }
            self.primes.push(q);
        }
        Ok(())
    }

    /// Consuming variant of [`PrimeSequence::extend_to`].
    pub fn extended(mut self, count: usize) -> Result<Self> {
        self.extend_to(count)?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    fn brute_least_in_doubling(n: u64) -> Option<u64> {
        (n..=2 * n).find(|&q| q % 8 == 3 && trial_division(q))
    }

    #[test]
    fn primality_examples() {
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(19));
        assert!(!is_prime_u64(1089));
        assert!(is_prime(&BigUint::from(19u32)).unwrap());
        assert!(matches!(
            is_prime(&(BigUint::from(1u32) << 70)),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn primality_on_hard_composites() {
        // strong pseudoprimes to several small bases, and Carmichael numbers
        for n in [
            561u64,
            1_373_653,
            25_326_001,
            3_215_031_751,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
            3_825_123_056_546_413_051,
        ] {
            assert!(!is_prime_u64(n), "{n} is composite");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(is_prime_u64(4_294_967_291)); // largest prime below 2^32
        assert!(is_prime_u64(2_147_483_647));
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(least_p3mod8_in_doubling(2).unwrap(), Some(3));
        assert_eq!(least_p3mod8_in_doubling(9).unwrap(), Some(11));
        assert_eq!(least_p3mod8_in_doubling(20).unwrap(), None);
        assert!(least_p3mod8_in_doubling(1).is_err());
    }

    #[test]
    fn doubling_matches_brute_force() {
        for n in 2..3000 {
            assert_eq!(least_p3mod8_in_doubling(n).unwrap(), brute_least_in_doubling(n), "N = {n}");
        }
        // crosses several sieve segments
        let n = 200_003;
        assert_eq!(least_p3mod8_in_doubling(n).unwrap(), brute_least_in_doubling(n));
    }

    #[test]
    fn doubling_agrees_with_scan() {
        for n in 2..2000u64 {
            let scan = next_p3mod8_above(n - 1).unwrap();
            if scan <= 2 * n {
                assert_eq!(least_p3mod8_in_doubling(n).unwrap(), Some(scan));
            }
        }
    }

    #[test]
    fn next_above_examples() {
        assert_eq!(next_p3mod8_above(0).unwrap(), 3);
        assert_eq!(next_p3mod8_above(2).unwrap(), 3);
        assert_eq!(next_p3mod8_above(3).unwrap(), 11);
        assert_eq!(next_p3mod8_above(19).unwrap(), 43);
        assert!(matches!(next_p3mod8_above(u64::MAX - 3), Err(Error::Capacity(_))));
    }

    #[test]
    fn linear_sequence_prefixes() {
        let seq = PrimeSequence::new(GrowthSpec::Linear).extended(7).unwrap();
        assert_eq!(seq.primes(), &[3, 11, 19, 43, 59, 67, 83]);
        assert_eq!(seq.primes()[..4], [3, 11, 19, 43]);
    }

    #[test]
    fn sequence_invariants() {
        for growth in [GrowthSpec::Linear, GrowthSpec::exponential_default()] {
            let seq = PrimeSequence::new(growth).extended(30).unwrap();
            let mut prev = 2;
            for (i, &p) in seq.primes().iter().enumerate() {
                assert!(trial_division(p));
                assert_eq!(p % 8, 3);
                assert!(p > prev);
                assert!(p >= growth.eval(i as u64 + 1).unwrap());
                // least admissible choice
                let floor = prev.max(growth.eval(i as u64 + 1).unwrap().saturating_sub(1));
                assert!(((floor + 1)..p).all(|q| q % 8 != 3 || !trial_division(q)));
                prev = p;
            }
        }
    }

    #[test]
    fn sequence_is_prefix_stable() {
        let mut a = PrimeSequence::new(GrowthSpec::Linear);
        a.extend_to(10).unwrap();
        let first = a.primes().to_vec();
        a.extend_to(10).unwrap();
        assert_eq!(a.primes(), &first[..]);
        a.extend_to(25).unwrap();
        assert_eq!(&a.primes()[..10], &first[..]);
        let b = PrimeSequence::new(GrowthSpec::Linear).extended(25).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exponential_growth_values() {
        let g = GrowthSpec::exponential_default();
        // ⌈e^{k/2}⌉
        assert_eq!(g.eval(1).unwrap(), 2);
        assert_eq!(g.eval(2).unwrap(), 3);
        assert_eq!(g.eval(4).unwrap(), 8);
        assert_eq!(g.eval(10).unwrap(), 149);
        assert!(GrowthSpec::exponential_default().eval(200).is_err());
        let seq = PrimeSequence::new(g).extended(12).unwrap();
        for (i, &p) in seq.primes().iter().enumerate() {
            assert!(p >= g.eval(i as u64 + 1).unwrap());
        }
    }

    #[test]
    fn exponential_sequence_hits_prime_limit() {
        let mut seq = PrimeSequence::new(GrowthSpec::exponential_default());
        let err = seq.extend_to(60).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
        assert!(seq.len() > 30);
        assert!(seq.primes().iter().all(|&p| p < PRIME_LIMIT));
    }

    #[test]
    fn rate_parsing() {
        assert_eq!("1/2".parse::<Rate>().unwrap(), Rate::new(1, 2).unwrap());
        assert_eq!("0.5".parse::<Rate>().unwrap(), Rate::new(1, 2).unwrap());
        assert_eq!(".25".parse::<Rate>().unwrap(), Rate::new(1, 4).unwrap());
        assert_eq!("3".parse::<Rate>().unwrap(), Rate::new(3, 1).unwrap());
        assert_eq!("2/4".parse::<Rate>().unwrap().to_string(), "1/2");
        for bad in ["", "0", "0/3", "1/0", "-1", "a", "1/2/3", "1.2.3", "+1", "."] {
            assert!(bad.parse::<Rate>().is_err(), "{bad:?}");
        }
    }
}
