//! # mpkc
//!
//! A public-key block cipher toolkit built on commuting powers of the
//! generalized Fibonacci (multinacci) matrix over a prime field, together
//! with the analysis harness used to measure its cost and brute-force
//! resistance.
//!
//! ## How the scheme fits together
//!
//! * [`sequence`] — order-n linear recurrences (Fibonacci, tribonacci, …)
//!   with exact big-integer terms, a negative-index extension, and optional
//!   reduction modulo a prime.
//! * [`matrix`] / [`fib`] — exact modular matrix algebra and the closed-form
//!   construction of `F_n^k` from sequence terms. All powers of `F_n`
//!   commute, which is what makes the key agreement work.
//! * [`block`] — upper block-triangular matrices and the conjugation-style
//!   sums `Σ M^{len-1-r}·C·N^r` they evaluate: a literal O(len) reference, an
//!   O(log len) block power, and a geometric-series shortcut for all-F-power
//!   inputs.
//! * [`protocol`] — key construction, session-key derivation on both sides,
//!   and the affine block cipher `C = P·E_K + B (mod p)` over a 47-symbol
//!   text alphabet ([`codec`]).
//! * [`wire`] — a strict line-oriented document format for keys and messages.
//! * [`analysis`] — matrix order (generalized Pisano period), pruned
//!   brute-force exponent recovery, and instrumented multiplication counts.
//!
//! ## Example
//!
//! ```
//! use mpkc::{keygen, derive_encryption_key, derive_decryption_key};
//! use mpkc::{encrypt_message, decrypt_message, FibPower, SessionSecret};
//!
//! # fn main() -> mpkc::Result<()> {
//! // Alice constructs her key pair over Z_47 with secret length 5.
//! let (public, secret) = keygen(3, 47, 5, 9, 13, 2)?;
//!
//! // Bob picks a session secret and encrypts.
//! let session = SessionSecret::new(
//!     3,
//!     FibPower::new(3, 7, 47)?,
//!     FibPower::new(3, 15, 47)?,
//! )?;
//! let message = encrypt_message(&public, &session, "HEY")?;
//!
//! // Alice recovers the plaintext from the transmitted message alone.
//! assert_eq!(decrypt_message(&secret, &public, &message)?, "HEY");
//!
//! // Both sides agree on the underlying encryption key.
//! let (bob_key, wire) = derive_encryption_key(&public, &session)?;
//! let (alice_key, _) = derive_decryption_key(&secret, &public, &wire)?;
//! assert_eq!(bob_key, alice_key);
//! # Ok(())
//! # }
//! ```
//!
//! This is a research artifact: the cipher reuses one key and offset for
//! every block and makes no semantic-security claims. See the README for the
//! measured brute-force costs at toy parameters.

pub mod analysis;
pub mod block;
pub mod codec;
pub mod error;
pub mod fib;
pub mod matrix;
pub mod primes;
pub mod protocol;
pub mod sequence;
pub mod wire;

pub use block::{c_sum, c_sum_naive, double_sum, power_sum_fast, BlockMatrix, PowerSumSpec, SumLayer};
pub use codec::{decode_blocks, encode_text, SymbolCodec, PAD_RESIDUE};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use fib::FibPower;
pub use matrix::{mult_counter, ResidueMatrix};
pub use protocol::{
    b_vector, decrypt, decrypt_message, derive_decryption_key, derive_encryption_key, encrypt,
    encrypt_message, keygen, CipherMessage, KeygenParams, PublicKey, SecretKey, SessionSecret,
    MIN_MODULUS,
};
pub use sequence::MultinacciSequence;
