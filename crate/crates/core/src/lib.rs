//! An explicit additive basis of order 2 with small representation counts.
//!
//! The set `A ⊆ ℕ` is defined digit-wise in the mixed radix `(p_1², p_2², …)`,
//! where `p_1 < p_2 < …` are primes `≡ 3 (mod 8)`. A number belongs to `A`
//! when every digit below its top digit lies in the modular basis
//! `A_{p_j} ⊆ ℤ/p_j²ℤ` built from Ruzsa's quadratic-residue sets. Every
//! natural number is a sum of two members of `A`, and the number of such
//! ordered representations stays small.
//!
//! Modules:
//!
//! - [`primes`]: deterministic primality, the prime sequence and its growth rule.
//! - [`modular_basis`]: the sets `B_p` and `A_p`, their polylog membership tests and
//!   exhaustive verification.
//! - [`mixed_radix`]: conversion between integers and mixed-radix digit strings.
//! - [`basis`]: the set `A` itself, membership and representation construction.
//! - [`sigma`]: exact, brute-force and bounded representation counts.
//! - [`verify`]: batch verification over ranges of `n`.

pub mod basis;
mod error;
pub mod mixed_radix;
pub mod modular_basis;
pub mod primes;
pub mod sigma;
pub mod verify;

pub use basis::{BasisContext, Representation};
pub use error::{Error, Result};
pub use mixed_radix::{DigitString, RadixSystem};
pub use modular_basis::{ModularBasisSet, ModularVerifyReport};
pub use primes::{GrowthSpec, PrimeSequence};
pub use sigma::{SigmaMethod, SigmaReport};
