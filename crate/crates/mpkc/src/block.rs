//! Upper block-triangular matrices and the conjugation-style power sums they
//! compute.
//!
//! For square blocks M, C, N over the same prime field, the 2n×2n matrix
//! `[[M, C], [0, N]]` raised to the l-th power has `M^l` and `N^l` on its
//! diagonal and `C_l = Σ_{r=0}^{l-1} M^{l-1-r}·C·N^r` in its top-right
//! corner. That sum is the primitive behind key construction, so it comes in
//! three forms here: the literal O(l) evaluation (`c_sum_naive`, the
//! reference every fast path is checked against), the O(log l) block
//! exponentiation (`c_sum`), and a geometric-series shortcut for the case
//! where all three blocks are powers of the same Fibonacci matrix
//! (`power_sum_fast`).

use crate::error::{Error, Result};
use crate::fib::FibPower;
use crate::matrix::ResidueMatrix;

/// The block matrix `[[top_left, top_right], [0, bottom_right]]` with all
/// blocks square, of equal dimension, over the same prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    top_left: ResidueMatrix,
    top_right: ResidueMatrix,
    bottom_right: ResidueMatrix,
}

impl BlockMatrix {
    pub fn new(
        top_left: ResidueMatrix,
        top_right: ResidueMatrix,
        bottom_right: ResidueMatrix,
    ) -> Result<Self> {
        for other in [&top_right, &bottom_right] {
            if other.dim() != top_left.dim() {
                return Err(Error::DimensionMismatch {
                    left: top_left.dim(),
                    right: other.dim(),
                });
            }
            if other.modulus() != top_left.modulus() {
                return Err(Error::ModulusMismatch {
                    left: top_left.modulus(),
                    right: other.modulus(),
                });
            }
        }
        Ok(Self { top_left, top_right, bottom_right })
    }

    pub fn top_left(&self) -> &ResidueMatrix {
        &self.top_left
    }

    pub fn top_right(&self) -> &ResidueMatrix {
        &self.top_right
    }

    pub fn bottom_right(&self) -> &ResidueMatrix {
        &self.bottom_right
    }

    /// Block product:
    /// `[[M₁, C₁], [0, N₁]] · [[M₂, C₂], [0, N₂]] =
    ///  [[M₁M₂, M₁C₂ + C₁N₂], [0, N₁N₂]]`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let top_left = self.top_left.mul(&rhs.top_left)?;
        let top_right = self
            .top_left
            .mul(&rhs.top_right)?
            .add(&self.top_right.mul(&rhs.bottom_right)?)?;
        let bottom_right = self.bottom_right.mul(&rhs.bottom_right)?;
        Ok(Self { top_left, top_right, bottom_right })
    }

    /// Square-and-multiply block power. Exponent 0 yields the block identity.
    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        let mut acc = Self {
            top_left: self.top_left.identity_like(),
            top_right: self.top_left.zeros_like(),
            bottom_right: self.bottom_right.identity_like(),
        };
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// Literal evaluation of `Σ_{r=0}^{len-1} m^{len-1-r} · seed · n^r`, O(len)
/// matrix products. This is the reference implementation the fast paths are
/// verified against.
pub fn c_sum_naive(
    m: &ResidueMatrix,
    seed: &ResidueMatrix,
    n: &ResidueMatrix,
    len: u64,
) -> Result<ResidueMatrix> {
    if len == 0 {
        return Err(Error::EmptySum);
    }
    let len = usize::try_from(len).map_err(|_| Error::ExponentOverflow)?;
    let mut m_pows = Vec::with_capacity(len);
    m_pows.push(m.identity_like());
    for r in 1..len {
        let next = m_pows[r - 1].mul(m)?;
        m_pows.push(next);
    }
    let mut acc = seed.zeros_like();
    let mut n_pow = n.identity_like();
    for r in 0..len {
        let term = m_pows[len - 1 - r].mul(seed)?.mul(&n_pow)?;
        acc = acc.add(&term)?;
        if r + 1 < len {
            n_pow = n_pow.mul(n)?;
        }
    }
    Ok(acc)
}

/// Same sum as [`c_sum_naive`], computed as the top-right block of
/// `[[m, seed], [0, n]]^len` in O(log len) block products.
pub fn c_sum(
    m: &ResidueMatrix,
    seed: &ResidueMatrix,
    n: &ResidueMatrix,
    len: u64,
) -> Result<ResidueMatrix> {
    if len == 0 {
        return Err(Error::EmptySum);
    }
    let block = BlockMatrix::new(m.clone(), seed.clone(), n.clone())?;
    Ok(block.pow(len)?.top_right)
}

/// Description of a sum whose three factors are powers of the same Fibonacci
/// matrix: target `Σ_{r=0}^{len-1} F^{r·(right−left) + left·(len−1) + seed}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerSumSpec {
    order: usize,
    modulus: u64,
    /// Exponent of the left factor M = F^left_exp.
    left_exp: i64,
    /// Exponent of the wrapped seed C = F^seed_exp.
    seed_exp: i64,
    /// Exponent of the right factor N = F^right_exp.
    right_exp: i64,
    len: u64,
}

impl PowerSumSpec {
    pub fn new(
        order: usize,
        modulus: u64,
        left_exp: i64,
        seed_exp: i64,
        right_exp: i64,
        len: u64,
    ) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall(order));
        }
        crate::primes::ensure_prime(modulus)?;
        if len == 0 {
            return Err(Error::EmptySum);
        }
        Ok(Self { order, modulus, left_exp, seed_exp, right_exp, len })
    }
}

/// Evaluate a [`PowerSumSpec`] in O(log len) multiplications.
///
/// The common ratio is `F^d` with `d = right_exp − left_exp`; the geometric
/// series `Σ_{r<len} F^{dr}` is read off the top-right block of
/// `[[F^d, I], [0, I]]^len`, then shifted by the constant factor
/// `F^{left_exp·(len−1) + seed_exp}`. When `d = 0` the series collapses to
/// `len · I`, avoiding any reliance on `F^d − I` being invertible.
pub fn power_sum_fast(spec: &PowerSumSpec) -> Result<ResidueMatrix> {
    let base = FibPower::base(spec.order, spec.modulus)?.into_matrix();
    let combined = spec
        .left_exp
        .checked_mul(i64::try_from(spec.len - 1).map_err(|_| Error::ExponentOverflow)?)
        .and_then(|v| v.checked_add(spec.seed_exp))
        .ok_or(Error::ExponentOverflow)?;
    let shift = base.pow(combined)?;
    let d = spec
        .right_exp
        .checked_sub(spec.left_exp)
        .ok_or(Error::ExponentOverflow)?;
    if d == 0 {
        return Ok(shift.scalar_mul(spec.len % spec.modulus));
    }
    let ratio = base.pow(d)?;
    let geometric = BlockMatrix::new(ratio, base.identity_like(), base.identity_like())?
        .pow(spec.len)?
        .top_right;
    geometric.mul(&shift)
}

/// One layer of a nested conjugation sum: `Σ_{r<len} left^{len-1-r} · X · right^r`.
#[derive(Debug, Clone, Copy)]
pub struct SumLayer<'a> {
    pub left: &'a ResidueMatrix,
    pub right: &'a ResidueMatrix,
    pub len: u64,
}

impl<'a> SumLayer<'a> {
    pub fn new(left: &'a ResidueMatrix, right: &'a ResidueMatrix, len: u64) -> Self {
        Self { left, right, len }
    }

    fn apply(&self, seed: &ResidueMatrix) -> Result<ResidueMatrix> {
        c_sum(self.left, seed, self.right, self.len)
    }
}

/// Apply the inner layer to the seed and the outer layer to the result.
///
/// The two nesting orders agree whenever `outer.left` commutes with
/// `inner.left` and `outer.right` commutes with `inner.right`; both pairs are
/// checked eagerly (two products each) and a failure is reported rather than
/// silently producing an order-dependent result.
pub fn double_sum(
    outer: SumLayer<'_>,
    inner: SumLayer<'_>,
    seed: &ResidueMatrix,
) -> Result<ResidueMatrix> {
    if outer.left.mul(inner.left)? != inner.left.mul(outer.left)? {
        return Err(Error::CommutationViolation { side: "left" });
    }
    if outer.right.mul(inner.right)? != inner.right.mul(outer.right)? {
        return Err(Error::CommutationViolation { side: "right" });
    }
    outer.apply(&inner.apply(seed)?)
}
