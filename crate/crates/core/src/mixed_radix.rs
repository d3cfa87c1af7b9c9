//! Mixed-radix digit codec over bases `b = (b_1, b_2, …)`.
//!
//! `x = Σ a_i · Π_{j<i} b_j` with `0 ≤ a_i < b_i`. Digits are stored
//! little-endian (`digits[0]` is `a_1`), and the canonical form has no
//! leading zeros, so zero is the empty string.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::primes::PrimeSequence;

/// A finite prefix `(b_1, …, b_m)` of a generalized base.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadixSystem {
    bases: Vec<u64>,
}

impl RadixSystem {
    pub fn new(bases: Vec<u64>) -> Result<Self> {
        if let Some(i) = bases.iter().position(|&b| b < 2) {
            return Err(Error::parameter(format!("base b_{} = {} is below 2", i + 1, bases[i])));
        }
        Ok(RadixSystem { bases })
    }

    /// `b_k = p_k²` for every prime of the sequence.
    pub fn from_primes(seq: &PrimeSequence) -> Self {
        RadixSystem {
            bases: seq.primes().iter().map(|&p| p * p).collect(),
        }
    }

    pub(crate) fn push(&mut self, base: u64) {
        debug_assert!(base >= 2);
        self.bases.push(base);
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    /// Number of positions available.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// `b_1 ⋯ b_m`, one more than the largest representable value.
    pub fn span(&self) -> BigUint {
        self.bases.iter().fold(BigUint::from(1u32), |acc, &b| acc * b)
    }

    /// Canonical digits of `n`. Fails if `n ≥ b_1 ⋯ b_m`.
    pub fn to_digits(&self, n: &BigUint) -> Result<DigitString> {
        let mut limbs = n.to_u64_digits();
        let mut digits = Vec::new();
        let mut pos = 0;
        while !limbs.is_empty() {
            if pos == self.bases.len() {
                return Err(self.too_short(n));
            }
            // Peel off as many positions as fit into one u64 divisor.
            let mut group = self.bases[pos];
            let mut end = pos + 1;
            while end < self.bases.len() {
                match group.checked_mul(self.bases[end]) {
                    Some(g) => {
                        group = g;
                        end += 1;
                    }
                    None => break,
                }
            }
            let mut rem = div_rem_in_place(&mut limbs, group);
            for &b in &self.bases[pos..end] {
                digits.push(rem % b);
                rem /= b;
            }
            pos = end;
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitString { digits })
    }

    /// Canonical digits of a machine-word `n`.
    pub fn to_digits_u64(&self, mut n: u64) -> Result<DigitString> {
        let mut digits = Vec::new();
        for &b in &self.bases {
            if n == 0 {
                break;
            }
            digits.push(n % b);
            n /= b;
        }
        if n != 0 {
            return Err(self.too_short(&BigUint::from(n)));
        }
        Ok(DigitString { digits })
    }

    /// Value of a well-formed digit string.
    pub fn from_digits(&self, d: &DigitString) -> Result<BigUint> {
        self.validate(&d.digits)?;
        Ok(self.evaluate(&d.digits))
    }

    /// `Σ a_i Π_{j<i} b_j` for any in-range digits, leading zeros allowed.
    pub(crate) fn evaluate(&self, digits: &[u64]) -> BigUint {
        debug_assert!(digits.len() <= self.bases.len());
        digits
            .iter()
            .zip(&self.bases)
            .rev()
            .fold(BigUint::zero(), |acc, (&a, &b)| acc * b + a)
    }

    /// Length `k` of the canonical representation of `n`.
    pub fn digit_length(&self, n: &BigUint) -> Result<usize> {
        Ok(self.to_digits(n)?.len())
    }

    fn validate(&self, digits: &[u64]) -> Result<()> {
        if digits.len() > self.bases.len() {
            return Err(Error::validation(format!(
                "{} digits but only {} bases",
                digits.len(),
                self.bases.len()
            )));
        }
        if let Some((i, (&a, &b))) = digits
            .iter()
            .zip(&self.bases)
            .enumerate()
            .find(|(_, (&a, &b))| a >= b)
        {
            return Err(Error::validation(format!("digit a_{} = {a} is not below b_{} = {b}", i + 1, i + 1)));
        }
        if digits.last() == Some(&0) {
            return Err(Error::validation("top digit is zero".to_string()));
        }
        Ok(())
    }

    fn too_short(&self, n: &BigUint) -> Error {
        Error::capacity(format!("{n} needs more than the {} available digit positions", self.bases.len()))
    }
}

/// Divides little-endian limbs by `d` in place, returning the remainder.
fn div_rem_in_place(limbs: &mut Vec<u64>, d: u64) -> u64 {
    let mut rem: u128 = 0;
    for limb in limbs.iter_mut().rev() {
        let cur = (rem << 64) | *limb as u128;
        *limb = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
    rem as u64
}

/// Little-endian mixed-radix digits without leading zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitString {
    digits: Vec<u64>,
}

impl DigitString {
    /// Validates `digits` (little-endian) against `radix`.
    pub fn new(digits: Vec<u64>, radix: &RadixSystem) -> Result<Self> {
        radix.validate(&digits)?;
        Ok(DigitString { digits })
    }

    /// Digits `a_1, …, a_k`.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn into_digits(self) -> Vec<u64> {
        self.digits
    }
}

/// Most significant digit first, comma-separated; zero prints as the empty string.
impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::GrowthSpec;
    use proptest::prelude::*;

    fn linear_radix(m: usize) -> RadixSystem {
        RadixSystem::from_primes(&PrimeSequence::new(GrowthSpec::Linear).extended(m).unwrap())
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn to_digits_examples() {
        let r = linear_radix(4);
        assert_eq!(r.bases(), &[9, 121, 361, 1849]);
        assert!(r.to_digits(&big(0)).unwrap().is_empty());
        assert_eq!(r.to_digits(&big(8)).unwrap().digits(), &[8]);
        assert_eq!(r.to_digits(&big(10)).unwrap().digits(), &[1, 1]);
        assert_eq!(r.to_digits(&big(1089)).unwrap().digits(), &[0, 0, 1]);
        assert_eq!(r.to_digits_u64(1089).unwrap().digits(), &[0, 0, 1]);
    }

    #[test]
    fn from_digits_examples() {
        let r = linear_radix(4);
        assert_eq!(r.from_digits(&DigitString::default()).unwrap(), big(0));
        let ten = DigitString::new(vec![1, 1], &r).unwrap();
        assert_eq!(r.from_digits(&ten).unwrap(), big(10));
        assert!(DigitString::new(vec![0, 1], &r).is_ok());
        assert!(matches!(DigitString::new(vec![5, 0], &r), Err(Error::Validation(_))));
        assert!(matches!(DigitString::new(vec![9], &r), Err(Error::Validation(_))));
        assert!(matches!(DigitString::new(vec![1; 5], &r), Err(Error::Validation(_))));
        // a digit string built for a wider radix is re-checked
        let wide = RadixSystem::new(vec![100, 100]).unwrap();
        let d = DigitString::new(vec![50], &wide).unwrap();
        assert!(r.from_digits(&d).is_err());
    }

    #[test]
    fn digit_length_examples() {
        let r = linear_radix(4);
        assert_eq!(r.digit_length(&big(0)).unwrap(), 0);
        assert_eq!(r.digit_length(&big(8)).unwrap(), 1);
        assert_eq!(r.digit_length(&big(1089)).unwrap(), 3);
    }

    #[test]
    fn capacity_is_explicit() {
        let r = linear_radix(2);
        assert_eq!(r.span(), big(1089));
        assert_eq!(r.to_digits(&big(1088)).unwrap().digits(), &[8, 120]);
        assert!(matches!(r.to_digits(&big(1089)), Err(Error::Capacity(_))));
        assert!(matches!(r.to_digits_u64(1089), Err(Error::Capacity(_))));
        assert!(RadixSystem::default().to_digits(&big(0)).unwrap().is_empty());
        assert!(RadixSystem::new(vec![9, 1]).is_err());
    }

    #[test]
    fn display_is_most_significant_first() {
        let r = linear_radix(4);
        assert_eq!(r.to_digits(&big(10)).unwrap().to_string(), "1,1");
        assert_eq!(r.to_digits(&big(0)).unwrap().to_string(), "");
        assert_eq!(r.to_digits(&big(1089 + 2 * 9 + 3)).unwrap().to_string(), "1,2,3");
    }

    #[test]
    fn grouping_handles_large_bases() {
        // bases whose pairwise products overflow u64 are divided one at a time
        let r = RadixSystem::new(vec![u64::MAX - 58, 3, u64::MAX - 82]).unwrap();
        let n = r.span() - 1u32;
        let d = r.to_digits(&n).unwrap();
        assert_eq!(d.digits(), &[u64::MAX - 59, 2, u64::MAX - 83]);
        assert_eq!(r.from_digits(&d).unwrap(), n);
    }

    fn arb_biguint(max_bytes: usize) -> impl Strategy<Value = BigUint> {
        proptest::collection::vec(any::<u8>(), 0..max_bytes).prop_map(|b| BigUint::from_bytes_le(&b))
    }

    proptest! {
        #[test]
        fn roundtrip(n in arb_biguint(400)) {
            let r = linear_radix(500);
            let d = r.to_digits(&n).unwrap();
            prop_assert!(d.digits().iter().zip(r.bases()).all(|(&a, &b)| a < b));
            prop_assert_ne!(d.digits().last(), Some(&0));
            prop_assert_eq!(r.from_digits(&d).unwrap(), n);
        }

        #[test]
        fn u64_path_agrees(n in any::<u64>()) {
            let r = linear_radix(20);
            prop_assert_eq!(r.to_digits_u64(n).unwrap(), r.to_digits(&big(n)).unwrap());
        }

        #[test]
        fn order_preserving(a in arb_biguint(64), b in arb_biguint(64)) {
            let r = linear_radix(200);
            let (da, db) = (r.to_digits(&a).unwrap(), r.to_digits(&b).unwrap());
            let key = |d: &DigitString| (d.len(), d.digits().iter().rev().copied().collect::<Vec<_>>());
            prop_assert_eq!(a.cmp(&b), key(&da).cmp(&key(&db)));
        }
    }
}
