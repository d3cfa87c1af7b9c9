//! Ruzsa's modular basis `A_p ⊆ ℤ/p²ℤ` for primes `p ≡ 3, 5 (mod 8)`.
//!
//! The integer set
//!
//! ```text
//! B_p = ⋃_{c ∈ {3,4,6}} { x + 2p·(c·x² mod p) : 0 ≤ x < p }
//! ```
//!
//! is shifted by `{-p, 0, p}` and reduced modulo `p²` to give `A_p`. Every
//! residue is a sum of two elements of `A_p`, with at most `6·9·18 = 594`
//! ordered representations.
//!
//! Membership in `B_p` is decided in `O(1)` arithmetic on `log p`-bit numbers:
//! the generating `x` is forced to be `y mod p`. Membership in `A_p` reduces to
//! at most 12 such tests (`r + s·p² + t·p`, `s ∈ {-1,0,1,2}`, `t ∈ {-1,0,1}`).

use std::borrow::Cow;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::primes::{is_prime_u64, PRIME_LIMIT};

/// Quadratic coefficients of the three branches of `B_p`.
pub const COEFFICIENTS: [u64; 3] = [3, 4, 6];

/// Proven bound on `σ_{A_p}(r)`: `6 · 9 · 18`.
pub const A_SIGMA_BOUND: u64 = 594;

/// Proven bound on `sup_n σ_{B_p}(n)`.
pub const B_SIGMA_BOUND: u64 = 18;

/// Default largest `p` for exhaustive (`O(p²)`-pair) verification.
pub const DEFAULT_VERIFY_CAP: u64 = 200;

/// Residue lists and bit masks are cached for `p` up to this bound.
const DENSE_P_LIMIT: u64 = 1024;

/// Largest `p` for which prefix counts ([`ModularBasisSet::count_le`]) are
/// used by exact representation counting; above it each count scans `p` rows.
pub const COUNT_P_LIMIT: u64 = 1 << 22;

/// The integer pair-sum table (`2p² - 1` entries) is cached for `p` up to this bound.
const PAIR_TABLE_P_LIMIT: u64 = 256;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    // p < 2^31, so the product fits
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// A square root of `a` modulo a prime `p ≡ 3 (mod 4)` or `p ≡ 5 (mod 8)`.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let r = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        // Atkin
        let v = pow_mod(2 * a % p, (p - 5) / 8, p);
        let i = mul_mod(2 * a % p, mul_mod(v, v, p), p);
        mul_mod(mul_mod(a, v, p), (i + p - 1) % p, p)
    };
    (mul_mod(r, r, p) == a).then_some(r)
}

fn validate_prime(p: u64) -> Result<()> {
    if p >= PRIME_LIMIT {
        return Err(Error::parameter(format!("p = {p} exceeds the supported limit 2^31")));
    }
    if !is_prime_u64(p) {
        return Err(Error::parameter(format!("p = {p} is not prime")));
    }
    if p % 8 != 3 && p % 8 != 5 {
        return Err(Error::parameter(format!("p = {p} is not ≡ 3 or 5 (mod 8)")));
    }
    Ok(())
}

fn check_cap(p: u64, cap: u64) -> Result<()> {
    if p > cap {
        return Err(Error::capacity(format!(
            "exhaustive verification of p = {p} exceeds the cap p <= {cap}"
        )));
    }
    Ok(())
}

/// The set `A_p` for one prime, with lazily materialized lookup structures.
#[derive(Debug)]
pub struct ModularBasisSet {
    p: u64,
    modulus: u64,
    residues: OnceLock<Vec<u64>>,
    mask: OnceLock<Vec<u64>>,
    pair_table: OnceLock<Vec<u32>>,
}

impl Clone for ModularBasisSet {
    fn clone(&self) -> Self {
        ModularBasisSet {
            p: self.p,
            modulus: self.modulus,
            residues: self.residues.clone(),
            mask: self.mask.clone(),
            pair_table: self.pair_table.clone(),
        }
    }
}

impl ModularBasisSet {
    /// Fails unless `p` is a prime `≡ 3, 5 (mod 8)` below `2^31`.
    pub fn new(p: u64) -> Result<Self> {
        validate_prime(p)?;
        Ok(ModularBasisSet {
            p,
            modulus: p * p,
            residues: OnceLock::new(),
            mask: OnceLock::new(),
            pair_table: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `p²`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Largest value produced by the generating formula, `(p-1) + 2p(p-1)`.
    pub fn b_max(&self) -> u64 {
        (self.p - 1) + 2 * self.p * (self.p - 1)
    }

    /// `y ∈ B_p`.
    pub fn b_contains(&self, y: i128) -> bool {
        if y < 0 || y > self.b_max() as i128 {
            return false;
        }
        let y = y as u64;
        let p = self.p;
        let z = y % p;
        let rest = y - z;
        if !rest.is_multiple_of(2 * p) {
            return false;
        }
        let q = rest / (2 * p);
        let z2 = z * z % p;
        COEFFICIENTS.iter().any(|&c| c * z2 % p == q)
    }

    /// Membership of `r ∈ [0, p²)` in `A_p` via the 12-candidate reduction to `B_p`.
    ///
    /// This is the polylog test; it touches no precomputed data.
    pub fn test_membership(&self, r: u64) -> bool {
        debug_assert!(r < self.modulus);
        let (r, m, p) = (r as i128, self.modulus as i128, self.p as i128);
        (-1..=2).any(|s| (-1..=1).any(|t| self.b_contains(r + s * m + t * p)))
    }

    /// Membership of `r ∈ [0, p²)`: bit-mask lookup for small `p`, otherwise
    /// [`ModularBasisSet::test_membership`].
    pub fn contains(&self, r: u64) -> bool {
        debug_assert!(r < self.modulus);
        if self.p <= DENSE_P_LIMIT {
            let mask = self.mask.get_or_init(|| {
                let mut bits = vec![0u64; (self.modulus as usize).div_ceil(64)];
                for &x in self.residues().iter() {
                    bits[(x / 64) as usize] |= 1 << (x % 64);
                }
                bits
            });
            mask[(r / 64) as usize] >> (r % 64) & 1 == 1
        } else {
            self.test_membership(r)
        }
    }

    /// The `q` with `x + p·q ∈ A_p`, i.e. the distinct values `2c·x² + s mod p`
    /// for `c ∈ {3,4,6}`, `s ∈ {-1,0,1}`. Returns the buffer and its used length.
    fn row(&self, x: u64) -> ([u64; 9], usize) {
        let p = self.p;
        let x2 = mul_mod(x, x, p);
        let mut out = [0u64; 9];
        let mut len = 0;
        for c in COEFFICIENTS {
            let base = 2 * c % p * x2 % p;
            for q in [(base + p - 1) % p, base, (base + 1) % p] {
                if !out[..len].contains(&q) {
                    out[len] = q;
                    len += 1;
                }
            }
        }
        (out, len)
    }

    /// All ordered pairs `(a, a')` in `A_p²` with `a + a' ≡ r (mod p²)`, sorted by `a`.
    pub fn pairs(&self, r: u64) -> Vec<(u64, u64)> {
        let m = self.modulus;
        let r = r % m;
        if self.p <= DENSE_P_LIMIT {
            return self
                .residues()
                .iter()
                .map(|&a| (a, (r + m - a) % m))
                .filter(|&(_, b)| self.contains(b))
                .collect();
        }
        self.pairs_algebraic(r)
    }

    /// The pair `(a, a')` with `a + a' ≡ r (mod p²)` and `a` least.
    pub fn least_pair(&self, r: u64) -> Option<(u64, u64)> {
        let m = self.modulus;
        let r = r % m;
        if self.p <= DENSE_P_LIMIT {
            return self.residues().iter().find_map(|&a| {
                let b = (r + m - a) % m;
                self.contains(b).then_some((a, b))
            });
        }
        self.pairs_algebraic(r).first().copied()
    }

    /// Writing `a = x + p·q`, `a' = x' + p·q'`, the low parts satisfy
    /// `x' = u - x (mod p)` and the high parts give, for each choice of
    /// coefficients, shifts and low carry `e`, a quadratic in `x`. Solving all of
    /// them yields every candidate `x`; the pairs are then read off the rows.
    /// Needs `p ∤ 2(c + c')c`, which holds for `p ≥ 13`.
    pub(crate) fn pairs_algebraic(&self, r: u64) -> Vec<(u64, u64)> {
        let (p, m) = (self.p, self.modulus);
        debug_assert!(p >= 13 && r < m);
        let (u, v) = (r % p, r / p);
        let mut xs = Vec::new();
        for c in COEFFICIENTS {
            for c2 in COEFFICIENTS {
                let qa = 2 * (c + c2) % p;
                let qb = (p - 4 * c2 % p * u % p) % p;
                let c2u2 = 2 * c2 % p * mul_mod(u, u, p) % p;
                let inv_2a = pow_mod(2 * qa % p, p - 2, p);
                for e in 0..=1u64 {
                    for sigma in -2i64..=2 {
                        let rhs = (v as i64 - e as i64 - sigma).rem_euclid(p as i64) as u64;
                        let qc = (c2u2 + p - rhs) % p;
                        let disc = (mul_mod(qb, qb, p) + p - 4 * mul_mod(qa, qc, p) % p) % p;
                        let Some(root) = sqrt_mod(disc, p) else { continue };
                        for t in [root, (p - root) % p] {
                            let x = mul_mod((p - qb + t) % p, inv_2a, p);
                            if (x > u) == (e == 1) {
                                xs.push(x);
                            }
                        }
                    }
                }
            }
        }
        xs.sort_unstable();
        xs.dedup();
        let mut out = Vec::new();
        for x in xs {
            let (row, len) = self.row(x);
            for &q in &row[..len] {
                let a = x + p * q;
                let b = (r + m - a) % m;
                if self.contains(b) {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// `B_p` as a sorted, duplicate-free list.
    pub fn b_enumerate(&self) -> Vec<u64> {
        let p = self.p;
        let mut out: Vec<u64> = (0..p)
            .flat_map(|x| {
                let x2 = x * x % p;
                COEFFICIENTS.map(|c| x + 2 * p * (c * x2 % p))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `A_p` as a sorted residue list, computed from `B_p + {-p, 0, p}` reduced mod `p²`.
    pub fn enumerate(&self) -> Vec<u64> {
        let (p, m) = (self.p as i128, self.modulus as i128);
        let mut out: Vec<u64> = self
            .b_enumerate()
            .into_iter()
            .flat_map(|y| [-p, 0, p].map(|t| (y as i128 + t).rem_euclid(m) as u64))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sorted residues of `A_p`; cached for small `p`.
    pub fn residues(&self) -> Cow<'_, [u64]> {
        if self.p <= DENSE_P_LIMIT {
            Cow::Borrowed(self.residues.get_or_init(|| self.enumerate()))
        } else {
            Cow::Owned(self.enumerate())
        }
    }

    /// Number of residues of `A_p` that are `≤ x`. Binary search for small `p`;
    /// above that an `O(p)` scan of the rows `x + p·q`.
    pub fn count_le(&self, x: u64) -> u64 {
        if self.p <= DENSE_P_LIMIT {
            return self.residues().partition_point(|&a| a <= x) as u64;
        }
        let p = self.p;
        let x = x.min(self.modulus - 1);
        let (q_top, x_top) = (x / p, x % p);
        let mut count = 0;
        for low in 0..p {
            let (row, len) = self.row(low);
            for &q in &row[..len] {
                if q < q_top || (q == q_top && low <= x_top) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `σ_{A_p}(r)`: ordered pairs `(a, a')` in `A_p²` with `a + a' ≡ r (mod p²)`.
    pub fn sigma(&self, r: u64) -> u64 {
        let m = self.modulus;
        let r = r % m;
        if self.p > DENSE_P_LIMIT {
            return self.pairs_algebraic(r).len() as u64;
        }
        self.residues()
            .iter()
            .filter(|&&a| self.contains((r + m - a) % m))
            .count() as u64
    }

    /// Ordered pairs `(a, a')` of residue representatives in `[0, p²)` with
    /// `a + a' = s` as integers, for `0 ≤ s ≤ 2p² - 2`.
    pub fn pair_sum_count(&self, s: u64) -> u64 {
        let m = self.modulus;
        if s > 2 * m - 2 {
            return 0;
        }
        if self.p <= PAIR_TABLE_P_LIMIT {
            let table = self
                .pair_table
                .get_or_init(|| pair_sum_table(&self.residues(), 2 * m as usize - 1));
            return table[s as usize] as u64;
        }
        if self.p > DENSE_P_LIMIT {
            return self
                .pairs_algebraic(s % m)
                .iter()
                .filter(|&&(a, b)| a + b == s)
                .count() as u64;
        }
        let lo = s.saturating_sub(m - 1);
        let residues = self.residues();
        let start = residues.partition_point(|&a| a < lo);
        residues[start..]
            .iter()
            .take_while(|&&a| a <= s)
            .filter(|&&a| self.contains(s - a))
            .count() as u64
    }

    /// Histogram of `σ_{A_p}` over all residues.
    fn sigma_histogram(&self) -> Vec<u32> {
        let m = self.modulus as usize;
        let owned;
        let table: &[u32] = if self.p <= PAIR_TABLE_P_LIMIT {
            self.pair_table
                .get_or_init(|| pair_sum_table(&self.residues(), 2 * m - 1))
        } else {
            owned = pair_sum_table(&self.residues(), 2 * m - 1);
            &owned
        };
        (0..m)
            .map(|r| table[r] + table.get(r + m).copied().unwrap_or(0))
            .collect()
    }

    /// `max_r σ_{A_p}(r)`, exhaustively. Errors if `p > cap`, or if some residue
    /// has no representation at all.
    pub fn max_sigma(&self, cap: u64) -> Result<u64> {
        check_cap(self.p, cap)?;
        let hist = self.sigma_histogram();
        if let Some(r) = hist.iter().position(|&s| s == 0) {
            return Err(Error::Internal(format!(
                "residue {r} has no representation in A_{} + A_{}",
                self.p, self.p
            )));
        }
        Ok(hist.iter().copied().max().unwrap_or(0) as u64)
    }

    /// Exhaustive check of the `B_p` statements for this `p`.
    pub fn b_verify(&self, cap: u64) -> Result<BVerifyReport> {
        check_cap(self.p, cap)?;
        let b = self.b_enumerate();
        let len = 2 * self.b_max() as usize + 1;
        let table = pair_sum_table(&b, len);
        let sup_sigma = table.iter().copied().max().unwrap_or(0) as u64;
        let in_sumset = |v: i128| v >= 0 && (v as usize) < len && table[v as usize] > 0;

        let (p, m) = (self.p as i128, self.modulus as i128);
        let covered = |n: i128, wrap: i128| {
            [-p, 0, p, wrap - p, wrap, wrap + p]
                .iter()
                .any(|&d| in_sumset(n + d))
        };
        let mut six_cover_failures = Vec::new();
        let mut doubled_cover_ok = true;
        for n in 0..m {
            if !covered(n, m) {
                six_cover_failures.push(n as u64);
            }
            if !covered(n, 2 * m) {
                doubled_cover_ok = false;
            }
        }
        Ok(BVerifyReport {
            p: self.p,
            size: b.len() as u64,
            sup_sigma,
            six_cover_ok: six_cover_failures.is_empty(),
            six_cover_failures,
            doubled_cover_ok,
        })
    }

    /// Exhaustive check of the `A_p` statements, with the `B_p` checks embedded.
    pub fn verify(&self, cap: u64) -> Result<ModularVerifyReport> {
        check_cap(self.p, cap)?;
        let hist = self.sigma_histogram();
        let min_sigma = hist.iter().copied().min().unwrap_or(0) as u64;
        let max_sigma = hist.iter().copied().max().unwrap_or(0) as u64;
        let b = self.b_verify(cap)?;
        Ok(ModularVerifyReport {
            p: self.p,
            size: self.residues().len() as u64,
            min_sigma,
            max_sigma,
            covers_all: min_sigma >= 1,
            b_sup_sigma: b.sup_sigma,
            six_cover_ok: b.six_cover_ok,
            six_cover_failures: b.six_cover_failures,
            doubled_cover_ok: b.doubled_cover_ok,
        })
    }
}

/// `table[s]` = ordered pairs from `values` summing to `s`.
fn pair_sum_table(values: &[u64], len: usize) -> Vec<u32> {
    let mut table = vec![0u32; len];
    for &a in values {
        for &b in values {
            table[(a + b) as usize] += 1;
        }
    }
    table
}

/// Results of exhaustively checking `B_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BVerifyReport {
    pub p: u64,
    /// `|B_p|`.
    pub size: u64,
    /// `max_n σ_{B_p}(n)` over ordered pairs.
    pub sup_sigma: u64,
    /// For all `0 ≤ n < p²`, one of `n-p, n, n+p, n+p²-p, n+p², n+p²+p` lies in `B_p + B_p`.
    pub six_cover_ok: bool,
    /// Every `n` for which the six-number coverage fails.
    pub six_cover_failures: Vec<u64>,
    /// The same coverage with the wrap-around shift `2p²` in place of `p²`.
    pub doubled_cover_ok: bool,
}

/// Results of exhaustively checking `A_p` (and the `B_p` it is built from).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularVerifyReport {
    pub p: u64,
    /// `|A_p|`.
    pub size: u64,
    pub min_sigma: u64,
    pub max_sigma: u64,
    /// Every residue has at least one representation.
    pub covers_all: bool,
    pub b_sup_sigma: u64,
    pub six_cover_ok: bool,
    pub six_cover_failures: Vec<u64>,
    pub doubled_cover_ok: bool,
}

impl ModularVerifyReport {
    /// All proven statements hold: coverage, `σ_{A_p} ≤ 594`, `σ_{B_p} ≤ 18`, six-number coverage.
    pub fn passes(&self) -> bool {
        self.covers_all
            && self.max_sigma <= A_SIGMA_BOUND
            && self.b_sup_sigma <= B_SIGMA_BOUND
            && self.six_cover_ok
    }
}

/// `y ∈ B_p`.
pub fn b_membership(p: u64, y: i128) -> Result<bool> {
    Ok(ModularBasisSet::new(p)?.b_contains(y))
}

pub fn b_enumerate(p: u64) -> Result<Vec<u64>> {
    Ok(ModularBasisSet::new(p)?.b_enumerate())
}

/// `(sup σ_{B_p}, six-number coverage)` with the default cap.
pub fn b_verify(p: u64) -> Result<BVerifyReport> {
    ModularBasisSet::new(p)?.b_verify(DEFAULT_VERIFY_CAP)
}

/// `r ∈ A_p` for `0 ≤ r < p²`, via the 12-candidate test.
pub fn ap_membership(p: u64, r: u64) -> Result<bool> {
    let set = ModularBasisSet::new(p)?;
    if r >= set.modulus() {
        return Err(Error::parameter(format!("residue {r} is not in [0, {})", set.modulus())));
    }
    Ok(set.test_membership(r))
}

pub fn ap_enumerate(p: u64) -> Result<Vec<u64>> {
    Ok(ModularBasisSet::new(p)?.enumerate())
}

pub fn ap_sigma(p: u64, r: u64) -> Result<u64> {
    let set = ModularBasisSet::new(p)?;
    if r >= set.modulus() {
        return Err(Error::parameter(format!("residue {r} is not in [0, {})", set.modulus())));
    }
    Ok(set.sigma(r))
}

pub fn ap_verify(p: u64) -> Result<ModularVerifyReport> {
    ModularBasisSet::new(p)?.verify(DEFAULT_VERIFY_CAP)
}

/// Primes `p ≤ limit` with `p ≡ 3, 5 (mod 8)`.
pub fn valid_primes_upto(limit: u64) -> Vec<u64> {
    (3..=limit)
        .filter(|&p| (p % 8 == 3 || p % 8 == 5) && is_prime_u64(p))
        .collect()
}
