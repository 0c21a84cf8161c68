//! The public-key scheme: key construction, session-key derivation on both
//! sides, and the affine block cipher.
//!
//! Alice publishes a prime p, a matrix K and the wrapped sum
//! `K_l = Σ_{r<l} G^{l-1-r}·K·H^r`, keeping `(l, G, H)` secret. Bob picks his
//! own `(j, M, N)`, wraps K into `K_j` the same way, and builds the shared
//! encryption key by wrapping `K_l`. Because all of G, H, M, N are powers of
//! one Fibonacci matrix, the two nesting orders agree and Alice recovers the
//! same key from `K_j`. Blocks are enciphered as `C = P·E_K + B (mod p)` with
//! B the column-sum vector of `E_K`, and deciphered as `P = (C−B)·D_K`.
//!
//! Every block is encrypted independently with the same key and offset
//! (ECB-style); this is faithful to the construction and is NOT semantically
//! secure — see the crate README for the caveats.

use rand::Rng;

use crate::block::{c_sum, c_sum_naive, PowerSumSpec};
use crate::codec::{decode_blocks, encode_text, SymbolCodec};
use crate::error::{Error, Result};
use crate::fib::FibPower;
use crate::matrix::ResidueMatrix;

/// Smallest modulus the cipher definition allows.
pub const MIN_MODULUS: u64 = 26;

/// Alice's public part: the prime (carried by the matrices), the seed matrix
/// K and its wrapped sum K_l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    seed: ResidueMatrix,
    wrapped: ResidueMatrix,
}

impl PublicKey {
    pub fn new(seed: ResidueMatrix, wrapped: ResidueMatrix) -> Result<Self> {
        if seed.dim() != wrapped.dim() {
            return Err(Error::DimensionMismatch { left: seed.dim(), right: wrapped.dim() });
        }
        if seed.modulus() != wrapped.modulus() {
            return Err(Error::ModulusMismatch {
                left: seed.modulus(),
                right: wrapped.modulus(),
            });
        }
        if seed.modulus() < MIN_MODULUS {
            return Err(Error::ModulusTooSmall { got: seed.modulus(), min: MIN_MODULUS });
        }
        if seed.det() == 0 {
            return Err(Error::SingularMatrix { det: 0, modulus: seed.modulus() });
        }
        Ok(Self { seed, wrapped })
    }

    pub fn order(&self) -> usize {
        self.seed.dim()
    }

    pub fn modulus(&self) -> u64 {
        self.seed.modulus()
    }

    /// The public matrix K.
    pub fn seed(&self) -> &ResidueMatrix {
        &self.seed
    }

    /// The public wrapped sum K_l.
    pub fn wrapped(&self) -> &ResidueMatrix {
        &self.wrapped
    }
}

/// Alice's secret part: the sum length l and the wrapping pair (G, H).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    sum_len: u64,
    left: FibPower,
    right: FibPower,
}

impl SecretKey {
    pub fn new(sum_len: u64, left: FibPower, right: FibPower) -> Result<Self> {
        check_pair(sum_len, &left, &right)?;
        Ok(Self { sum_len, left, right })
    }

    pub fn sum_len(&self) -> u64 {
        self.sum_len
    }

    /// The left wrapping matrix G.
    pub fn left(&self) -> &FibPower {
        &self.left
    }

    /// The right wrapping matrix H.
    pub fn right(&self) -> &FibPower {
        &self.right
    }

    pub fn order(&self) -> usize {
        self.left.order()
    }

    pub fn modulus(&self) -> u64 {
        self.left.modulus()
    }
}

/// Bob's per-message secret: the sum length j and the wrapping pair (M, N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionSecret {
    sum_len: u64,
    left: FibPower,
    right: FibPower,
}

impl SessionSecret {
    pub fn new(sum_len: u64, left: FibPower, right: FibPower) -> Result<Self> {
        check_pair(sum_len, &left, &right)?;
        Ok(Self { sum_len, left, right })
    }

    /// Draw a session secret from the given generator. With a seeded
    /// generator the draw is bit-reproducible: sum length first (1..=12),
    /// then the two exponents (1..=60).
    pub fn random<R: Rng + ?Sized>(order: usize, modulus: u64, rng: &mut R) -> Result<Self> {
        let sum_len = rng.gen_range(1..=12);
        let left = FibPower::new(order, rng.gen_range(1..=60), modulus)?;
        let right = FibPower::new(order, rng.gen_range(1..=60), modulus)?;
        Self::new(sum_len, left, right)
    }

    pub fn sum_len(&self) -> u64 {
        self.sum_len
    }

    pub fn left(&self) -> &FibPower {
        &self.left
    }

    pub fn right(&self) -> &FibPower {
        &self.right
    }

    pub fn order(&self) -> usize {
        self.left.order()
    }

    pub fn modulus(&self) -> u64 {
        self.left.modulus()
    }
}

fn check_pair(sum_len: u64, left: &FibPower, right: &FibPower) -> Result<()> {
    if sum_len == 0 {
        return Err(Error::EmptySum);
    }
    if left.order() != right.order() {
        return Err(Error::DimensionMismatch { left: left.order(), right: right.order() });
    }
    if left.modulus() != right.modulus() {
        return Err(Error::ModulusMismatch { left: left.modulus(), right: right.modulus() });
    }
    Ok(())
}

/// Bob's transmission: the wrapped seed K_j plus the ciphertext blocks and
/// the pad count of the final block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherMessage {
    wrapped_seed: ResidueMatrix,
    blocks: Vec<Vec<u64>>,
    pad_count: usize,
}

impl CipherMessage {
    pub fn new(
        wrapped_seed: ResidueMatrix,
        blocks: Vec<Vec<u64>>,
        pad_count: usize,
    ) -> Result<Self> {
        let dim = wrapped_seed.dim();
        let modulus = wrapped_seed.modulus();
        for block in &blocks {
            if block.len() != dim {
                return Err(Error::BlockLength { expected: dim, got: block.len() });
            }
            for &e in block {
                if e >= modulus {
                    return Err(Error::EntryOutOfRange { entry: e, modulus });
                }
            }
        }
        if pad_count >= dim {
            return Err(Error::PadTooLarge { pad: pad_count, block: dim });
        }
        if pad_count > 0 && blocks.is_empty() {
            return Err(Error::PadWithoutBlocks);
        }
        Ok(Self { wrapped_seed, blocks, pad_count })
    }

    /// The wrapped seed K_j.
    pub fn wrapped_seed(&self) -> &ResidueMatrix {
        &self.wrapped_seed
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn pad_count(&self) -> usize {
        self.pad_count
    }

    pub fn order(&self) -> usize {
        self.wrapped_seed.dim()
    }

    pub fn modulus(&self) -> u64 {
        self.wrapped_seed.modulus()
    }
}

/// Build a key pair from explicit parameters: G = F^left_exp, H = F^right_exp,
/// K = F^seed_exp, and K_l the wrapped sum of length `sum_len`.
///
/// All exponents must be at least 1 and the modulus at least 26. The wrapped
/// sum is computed by the logarithmic fast path and, in debug builds,
/// cross-checked against the literal sum.
pub fn keygen(
    order: usize,
    modulus: u64,
    sum_len: u64,
    left_exp: i64,
    right_exp: i64,
    seed_exp: i64,
) -> Result<(PublicKey, SecretKey)> {
    for exp in [left_exp, right_exp, seed_exp] {
        if exp < 1 {
            return Err(Error::ExponentTooSmall(exp));
        }
    }
    if modulus < MIN_MODULUS {
        return Err(Error::ModulusTooSmall { got: modulus, min: MIN_MODULUS });
    }
    if sum_len == 0 {
        return Err(Error::EmptySum);
    }
    let left = FibPower::new(order, left_exp, modulus)?;
    let right = FibPower::new(order, right_exp, modulus)?;
    let seed = FibPower::new(order, seed_exp, modulus)?;
    // Fibonacci powers have determinant ±1, so the seed is always invertible.
    debug_assert_ne!(seed.matrix().det(), 0);

    let spec = PowerSumSpec::new(order, modulus, left_exp, seed_exp, right_exp, sum_len)?;
    let wrapped = crate::block::power_sum_fast(&spec)?;
    #[cfg(debug_assertions)]
    if sum_len <= 512 {
        let naive =
            c_sum_naive(left.matrix(), seed.matrix(), right.matrix(), sum_len)?;
        assert_eq!(wrapped, naive, "fast and literal key sums disagree");
    }

    let public = PublicKey::new(seed.into_matrix(), wrapped)?;
    let secret = SecretKey::new(sum_len, left, right)?;
    Ok((public, secret))
}

/// Parameter set for key construction, drawable from a seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeygenParams {
    pub order: usize,
    pub modulus: u64,
    pub sum_len: u64,
    pub left_exp: i64,
    pub right_exp: i64,
    pub seed_exp: i64,
}

impl KeygenParams {
    /// Draw the length and exponents from the generator (length first, then
    /// the G, H, K exponents), giving bit-reproducible keys for a fixed seed.
    pub fn random<R: Rng + ?Sized>(order: usize, modulus: u64, rng: &mut R) -> Self {
        Self {
            order,
            modulus,
            sum_len: rng.gen_range(1..=12),
            left_exp: rng.gen_range(1..=60),
            right_exp: rng.gen_range(1..=60),
            seed_exp: rng.gen_range(1..=60),
        }
    }

    pub fn run(&self) -> Result<(PublicKey, SecretKey)> {
        keygen(
            self.order,
            self.modulus,
            self.sum_len,
            self.left_exp,
            self.right_exp,
            self.seed_exp,
        )
    }
}

/// Bob's side: wrap the public seed into K_j and the public sum into the
/// encryption key E_K.
///
/// Fails with [`Error::DegenerateKey`] when the derived key is singular; the
/// caller should retry with a fresh session secret.
pub fn derive_encryption_key(
    public: &PublicKey,
    session: &SessionSecret,
) -> Result<(ResidueMatrix, ResidueMatrix)> {
    if session.order() != public.order() {
        return Err(Error::DimensionMismatch { left: public.order(), right: session.order() });
    }
    if session.modulus() != public.modulus() {
        return Err(Error::ModulusMismatch { left: public.modulus(), right: session.modulus() });
    }
    let m = session.left.matrix();
    let n = session.right.matrix();
    let wrapped_seed = c_sum(m, public.seed(), n, session.sum_len)?;
    let encryption_key = c_sum(m, public.wrapped(), n, session.sum_len)?;
    #[cfg(debug_assertions)]
    if session.sum_len <= 512 {
        assert_eq!(wrapped_seed, c_sum_naive(m, public.seed(), n, session.sum_len)?);
        assert_eq!(encryption_key, c_sum_naive(m, public.wrapped(), n, session.sum_len)?);
    }
    if encryption_key.det() == 0 {
        return Err(Error::DegenerateKey { modulus: public.modulus() });
    }
    Ok((encryption_key, wrapped_seed))
}

/// Alice's side: wrap the received K_j with her secret pair to recover E_K,
/// and invert it into the decryption key D_K.
pub fn derive_decryption_key(
    secret: &SecretKey,
    public: &PublicKey,
    wrapped_seed: &ResidueMatrix,
) -> Result<(ResidueMatrix, ResidueMatrix)> {
    if secret.order() != public.order() || wrapped_seed.dim() != public.order() {
        return Err(Error::DimensionMismatch {
            left: public.order(),
            right: wrapped_seed.dim(),
        });
    }
    if secret.modulus() != public.modulus() || wrapped_seed.modulus() != public.modulus() {
        return Err(Error::ModulusMismatch {
            left: public.modulus(),
            right: wrapped_seed.modulus(),
        });
    }
    let encryption_key = c_sum(
        secret.left.matrix(),
        wrapped_seed,
        secret.right.matrix(),
        secret.sum_len,
    )?;
    let decryption_key = encryption_key.inv()?;
    Ok((encryption_key, decryption_key))
}

/// Row vector whose i-th component is the mod-p sum of column i.
pub fn b_vector(key: &ResidueMatrix) -> Vec<u64> {
    let p = key.modulus() as u128;
    (0..key.dim())
        .map(|j| {
            let mut acc: u128 = 0;
            for i in 0..key.dim() {
                acc = (acc + key.entry(i, j) as u128) % p;
            }
            acc as u64
        })
        .collect()
}

/// Encipher residue blocks: `C = P·E_K + B (mod p)` per block.
pub fn encrypt(encryption_key: &ResidueMatrix, blocks: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let p = encryption_key.modulus();
    let offset = b_vector(encryption_key);
    blocks
        .iter()
        .map(|block| {
            check_block(block, encryption_key)?;
            let mut row = encryption_key.row_mul(block)?;
            for (c, &b) in row.iter_mut().zip(&offset) {
                *c = ((*c as u128 + b as u128) % p as u128) as u64;
            }
            Ok(row)
        })
        .collect()
}

/// Decipher residue blocks: `P = (C−B)·D_K (mod p)` per block. Padding is
/// stripped at the message layer, not here.
pub fn decrypt(
    decryption_key: &ResidueMatrix,
    encryption_key: &ResidueMatrix,
    blocks: &[Vec<u64>],
) -> Result<Vec<Vec<u64>>> {
    let p = encryption_key.modulus();
    let offset = b_vector(encryption_key);
    blocks
        .iter()
        .map(|block| {
            check_block(block, decryption_key)?;
            let shifted: Vec<u64> = block
                .iter()
                .zip(&offset)
                .map(|(&c, &b)| (c + p - b) % p)
                .collect();
            decryption_key.row_mul(&shifted)
        })
        .collect()
}

fn check_block(block: &[u64], key: &ResidueMatrix) -> Result<()> {
    if block.len() != key.dim() {
        return Err(Error::BlockLength { expected: key.dim(), got: block.len() });
    }
    for &e in block {
        if e >= key.modulus() {
            return Err(Error::EntryOutOfRange { entry: e, modulus: key.modulus() });
        }
    }
    Ok(())
}

/// Encrypt a text message end to end. Text mode requires the codec modulus 47.
pub fn encrypt_message(
    public: &PublicKey,
    session: &SessionSecret,
    plaintext: &str,
) -> Result<CipherMessage> {
    let codec = SymbolCodec;
    if public.modulus() != codec.modulus() {
        return Err(Error::TextModulus(public.modulus()));
    }
    let (blocks, pad_count) = encode_text(plaintext, &codec, public.order())?;
    let (encryption_key, wrapped_seed) = derive_encryption_key(public, session)?;
    let cipher_blocks = encrypt(&encryption_key, &blocks)?;
    CipherMessage::new(wrapped_seed, cipher_blocks, pad_count)
}

/// Decrypt a text message end to end. Text mode requires the codec modulus 47.
pub fn decrypt_message(
    secret: &SecretKey,
    public: &PublicKey,
    message: &CipherMessage,
) -> Result<String> {
    let codec = SymbolCodec;
    if public.modulus() != codec.modulus() {
        return Err(Error::TextModulus(public.modulus()));
    }
    let (encryption_key, decryption_key) =
        derive_decryption_key(secret, public, message.wrapped_seed())?;
    let blocks = decrypt(&decryption_key, &encryption_key, message.blocks())?;
    decode_blocks(&blocks, message.pad_count(), &codec)
}
