//! Representation counts `σ_A(n) = #{(a, a') ∈ A² : a + a' = n}`.
//!
//! [`BasisContext::sigma_exact`] runs a digit automaton over the positions of
//! `n`. The state is `(carry, status_a, status_a')`, where a status is
//! `Open` while every digit so far lies in its `A_j`, and `Frozen` once a digit
//! outside `A_j` has appeared; a frozen number must be zero from then on,
//! because that digit has to be its top digit. At each position the digit
//! pairs are not enumerated one by one. They are counted by class (in `A_j`,
//! outside `A_j`, zero) from the pair-sum counts of `A_j`, which makes one
//! position `O(1)` for cached levels.
//!
//! [`BasisContext::sigma_bruteforce`] scans all splittings `a + (n - a)`
//! against a membership table and shares no code with the automaton.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::modular_basis::COUNT_P_LIMIT;

/// Default largest `n` accepted by the brute-force counter.
pub const DEFAULT_BRUTE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMethod {
    Exact,
    Brute,
    Both,
}

/// Exact count, optional oracle count and the analytic bound for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub n: BigUint,
    pub exact: BigUint,
    pub brute: Option<u64>,
    pub bound: BigUint,
    /// `exact ≥ 1`.
    pub basis_ok: bool,
    /// `exact ≤ bound`.
    pub bound_ok: bool,
    /// `exact = brute`, when the oracle ran.
    pub agree: Option<bool>,
}

impl SigmaReport {
    pub fn new(n: BigUint, exact: BigUint, brute: Option<u64>, bound: BigUint) -> Self {
        let basis_ok = !exact.is_zero();
        let bound_ok = exact <= bound;
        let agree = brute.map(|b| exact == BigUint::from(b));
        SigmaReport {
            n,
            exact,
            brute,
            bound,
            basis_ok,
            bound_ok,
            agree,
        }
    }

    pub fn passes(&self) -> bool {
        self.basis_ok && self.bound_ok && self.agree != Some(false)
    }
}

/// Membership of every integer in `[0, limit]`, for brute-force counting.
#[derive(Debug, Clone)]
pub struct MembershipTable {
    bits: Vec<u64>,
    limit: u64,
}

impl MembershipTable {
    pub fn build(ctx: &BasisContext, limit: u64) -> Result<Self> {
        let mut bits = vec![0u64; (limit as usize + 1).div_ceil(64)];
        for n in 0..=limit {
            if ctx.contains_u64(n)? {
                bits[(n / 64) as usize] |= 1 << (n % 64);
            }
        }
        Ok(MembershipTable { bits, limit })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// `#{a ∈ [0, n] : a ∈ A and n - a ∈ A}`.
    pub fn sigma(&self, n: u64) -> Result<u64> {
        if n > self.limit {
            return Err(Error::capacity(format!("n = {n} is beyond the table limit {}", self.limit)));
        }
        Ok((0..=n).filter(|&a| self.contains(a) && self.contains(n - a)).count() as u64)
    }
}

const OPEN: usize = 0;
const FROZEN: usize = 1;

fn state(carry: usize, sa: usize, sb: usize) -> usize {
    carry * 4 + sa * 2 + sb
}

/// Counter used by the automaton: `u128` with overflow detection, or `BigUint`.
trait Count: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    /// `self += w * k`; false on overflow.
    fn add_scaled(&mut self, w: &Self, k: u64) -> bool;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn add_scaled(&mut self, w: &Self, k: u64) -> bool {
        match w.checked_mul(k as u128).and_then(|v| self.checked_add(v)) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, w: &Self, k: u64) -> bool {
        *self += w * k;
        true
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Pair counts with `d + d' = s`, split by digit class, at one position.
struct ClassCounts {
    // classes: 0 = in A_j, 1 = outside A_j, 2 = zero, 3 = unrestricted
    table: [[u64; 4]; 4],
}

impl ClassCounts {
    const IN: usize = 0;
    const OUT: usize = 1;
    const ZERO: usize = 2;
    const ANY: usize = 3;

    /// For the top position only the `ANY`/`ZERO` entries are filled; the
    /// level set is not consulted.
    fn new(ctx: &BasisContext, j: usize, s: u64, top: bool) -> Self {
        let b = ctx.radix().bases()[j - 1];
        let any_any = if s < b { s + 1 } else { 2 * b - 1 - s };
        let zero_any = (s < b) as u64;
        let zero_zero = (s == 0) as u64;
        let mut table = [[0u64; 4]; 4];
        table[Self::ANY][Self::ANY] = any_any;
        table[Self::ZERO][Self::ANY] = zero_any;
        table[Self::ANY][Self::ZERO] = zero_any;
        table[Self::ZERO][Self::ZERO] = zero_zero;
        if !top {
            let set = ctx.level(j);
            let le = |x: u64| set.count_le(x);
            // pairs with d ∈ A_j, d' unrestricted
            let in_any = le(s.min(b - 1)) - if s >= b { le(s - b) } else { 0 };
            let in_in = set.pair_sum_count(s);
            let zero_in = (s < b && set.contains(s)) as u64;
            table[Self::IN][Self::IN] = in_in;
            table[Self::IN][Self::OUT] = in_any - in_in;
            table[Self::OUT][Self::IN] = in_any - in_in;
            table[Self::OUT][Self::OUT] = any_any + in_in - 2 * in_any;
            table[Self::ZERO][Self::IN] = zero_in;
            table[Self::IN][Self::ZERO] = zero_in;
            table[Self::ZERO][Self::OUT] = zero_any - zero_in;
            table[Self::OUT][Self::ZERO] = zero_any - zero_in;
        }
        ClassCounts { table }
    }
}

/// `(digit class, next status)` choices for a number in `status`.
fn moves(status: usize, top: bool) -> &'static [(usize, usize)] {
    match (status, top) {
        (OPEN, false) => &[(ClassCounts::IN, OPEN), (ClassCounts::OUT, FROZEN)],
        (OPEN, true) => &[(ClassCounts::ANY, OPEN)],
        _ => &[(ClassCounts::ZERO, FROZEN)],
    }
}

fn run_automaton<C: Count>(ctx: &BasisContext, digits: &[u64]) -> Option<C> {
    let k = digits.len();
    let mut dp: [C; 8] = std::array::from_fn(|_| C::nil());
    dp[state(0, OPEN, OPEN)] = C::unit();
    for (idx, &nj) in digits.iter().enumerate() {
        let j = idx + 1;
        let top = j == k;
        let b = ctx.radix().bases()[idx];
        let mut next: [C; 8] = std::array::from_fn(|_| C::nil());
        for carry_in in 0..2usize {
            for carry_out in 0..2usize {
                // d + d' + carry_in = n_j + carry_out·b
                let s = nj as i128 + carry_out as i128 * b as i128 - carry_in as i128;
                if s < 0 || s > 2 * b as i128 - 2 {
                    continue;
                }
                if (0..4).all(|st| dp[carry_in * 4 + st].is_nil()) {
                    continue;
                }
                let counts = ClassCounts::new(ctx, j, s as u64, top);
                for sa in [OPEN, FROZEN] {
                    for sb in [OPEN, FROZEN] {
                        let w = &dp[state(carry_in, sa, sb)];
                        if w.is_nil() {
                            continue;
                        }
                        for &(ca, na) in moves(sa, top) {
                            for &(cb, nb) in moves(sb, top) {
                                let ways = counts.table[ca][cb];
                                if ways > 0 && !next[state(carry_out, na, nb)].add_scaled(w, ways) {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
        dp = next;
    }
    let mut total = C::nil();
    for st in 0..4 {
        if !total.add_scaled(&dp[state(0, 0, 0) + st], 1) {
            return None;
        }
    }
    Some(total)
}

impl BasisContext {
    /// Exact `σ_A(n)` by the carry/status digit automaton.
    pub fn sigma_exact(&self, n: &BigUint) -> Result<BigUint> {
        let digits = self.digits(n)?;
        self.sigma_exact_digits(digits.digits())
    }

    pub(crate) fn sigma_exact_digits(&self, digits: &[u64]) -> Result<BigUint> {
        if digits.len() > self.capacity() {
            return Err(Error::capacity(format!(
                "{} digits exceed the context capacity {}",
                digits.len(),
                self.capacity()
            )));
        }
        self.check_count_limit(digits.len())?;
        Ok(match run_automaton::<u128>(self, digits) {
            Some(v) => v.into_big(),
            None => run_automaton::<BigUint>(self, digits).expect("BigUint counts cannot overflow"),
        })
    }

    // below the top digit each level needs prefix counts of A_j
    fn check_count_limit(&self, len: usize) -> Result<()> {
        let below_top = &self.primes()[..len.saturating_sub(1)];
        match below_top.iter().find(|&&p| p > COUNT_P_LIMIT) {
            Some(p) => Err(Error::capacity(format!(
                "exact counting needs prefix counts of A_p for p = {p}, beyond the limit p <= {COUNT_P_LIMIT}"
            ))),
            None => Ok(()),
        }
    }

    /// Exact `σ_A(n)` for machine-word `n`, as long as it fits in a `u128`.
    pub fn sigma_exact_u64(&self, n: u64) -> Result<u128> {
        let digits = self.radix().to_digits_u64(n)?;
        self.check_count_limit(digits.len())?;
        run_automaton::<u128>(self, digits.digits())
            .ok_or_else(|| Error::capacity(format!("σ_A({n}) does not fit in u128")))
    }

    /// `σ_A(n)` by scanning every splitting, for `n` up to [`DEFAULT_BRUTE_CAP`].
    pub fn sigma_bruteforce(&self, n: u64) -> Result<u64> {
        self.sigma_bruteforce_capped(n, DEFAULT_BRUTE_CAP)
    }

    pub fn sigma_bruteforce_capped(&self, n: u64, cap: u64) -> Result<u64> {
        if n > cap {
            return Err(Error::capacity(format!("brute-force count of n = {n} exceeds the cap {cap}")));
        }
        MembershipTable::build(self, n)?.sigma(n)
    }

    /// `2 Σ_{ℓ=1}^{k} b_ℓ Π_{j<ℓ} M_j` with `k = max(digit length of n, 1)`.
    pub fn sigma_bound(&self, n: &BigUint) -> Result<BigUint> {
        let k = self.digits(n)?.len().max(1);
        let mut total = BigUint::zero();
        let mut prefix = BigUint::one();
        for l in 1..=k {
            total += &prefix * self.radix().bases()[l - 1];
            if l < k {
                prefix *= self.level_max(l)?;
            }
        }
        Ok(total * 2u32)
    }

    pub fn sigma_report(&self, n: &BigUint, method: SigmaMethod, brute_cap: u64) -> Result<SigmaReport> {
        let exact = self.sigma_exact(n)?;
        let bound = self.sigma_bound(n)?;
        let brute = match method {
            SigmaMethod::Exact => None,
            SigmaMethod::Brute | SigmaMethod::Both => {
                let v = n.to_u64().filter(|&v| v <= brute_cap).ok_or_else(|| {
                    Error::capacity(format!("brute-force count of n = {n} exceeds the cap {brute_cap}"))
                })?;
                Some(self.sigma_bruteforce_capped(v, brute_cap)?)
            }
        };
        Ok(SigmaReport::new(n.clone(), exact, brute, bound))
    }
}
