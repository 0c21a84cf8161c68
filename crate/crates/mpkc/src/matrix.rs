//! Square matrices over a prime field, with exact modular arithmetic.

use std::fmt;

use crate::error::{Error, Result};
use crate::primes::{ensure_prime, mul_mod, pow_mod};

/// Instrumentation for multiplication counting.
///
/// Every `ResidueMatrix` product bumps a thread-local counter, which the
/// benchmark harness reads to compare construction strategies. The counter
/// never affects results.
pub mod mult_counter {
    use std::cell::Cell;

    thread_local! {
        static MULTS: Cell<u64> = const { Cell::new(0) };
    }

    /// Reset the current thread's counter to zero.
    pub fn reset() {
        MULTS.with(|c| c.set(0));
    }

    /// Matrix multiplications performed on this thread since the last reset.
    pub fn total() -> u64 {
        MULTS.with(|c| c.get())
    }

    pub(crate) fn record() {
        MULTS.with(|c| c.set(c.get() + 1));
    }
}

/// An n×n matrix of residues modulo a fixed prime.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    modulus: u64,
    dim: usize,
    /// Row-major, every entry in `[0, modulus)`.
    entries: Vec<u64>,
}

impl ResidueMatrix {
    /// Build from rows, rejecting non-prime moduli, non-square shapes and
    /// entries outside `[0, modulus)`.
    pub fn from_rows<R: AsRef<[u64]>>(modulus: u64, rows: &[R]) -> Result<Self> {
        ensure_prime(modulus)?;
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { left: row.len(), right: dim });
            }
            for &e in row {
                if e >= modulus {
                    return Err(Error::EntryOutOfRange { entry: e, modulus });
                }
                entries.push(e);
            }
        }
        Ok(Self { modulus, dim, entries })
    }

    pub fn identity(modulus: u64, dim: usize) -> Result<Self> {
        ensure_prime(modulus)?;
        if dim == 0 {
            return Err(Error::DimensionMismatch { left: 0, right: 1 });
        }
        let mut m = Self::zeros_unchecked(modulus, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1 % modulus;
        }
        Ok(m)
    }

    /// Identity matrix with this matrix's modulus and dimension.
    pub fn identity_like(&self) -> Self {
        let mut m = Self::zeros_unchecked(self.modulus, self.dim);
        for i in 0..self.dim {
            m.entries[i * self.dim + i] = 1;
        }
        m
    }

    /// Zero matrix with this matrix's modulus and dimension.
    pub fn zeros_like(&self) -> Self {
        Self::zeros_unchecked(self.modulus, self.dim)
    }

    pub(crate) fn zeros_unchecked(modulus: u64, dim: usize) -> Self {
        Self { modulus, dim, entries: vec![0; dim * dim] }
    }

    pub(crate) fn from_entries_unchecked(modulus: u64, dim: usize, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        debug_assert!(entries.iter().all(|&e| e < modulus));
        Self { modulus, dim, entries }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(row, col)`, zero-indexed.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        assert!(row < self.dim && col < self.dim, "entry index out of bounds");
        self.entries[row * self.dim + col]
    }

    /// Rows as owned vectors, in order.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(idx, &e)| {
            let (i, j) = (idx / self.dim, idx % self.dim);
            e == if i == j { 1 % self.modulus } else { 0 }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: rhs.dim });
        }
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: rhs.modulus });
        }
        Ok(())
    }

    /// Standard matrix product, entries reduced modulo the prime.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        mult_counter::record();
        let n = self.dim;
        let p = self.modulus as u128;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    let prod = self.entries[i * n + k] as u128 * rhs.entries[k * n + j] as u128;
                    acc = (acc + prod % p) % p;
                }
                entries[i * n + j] = acc as u64;
            }
        }
        Ok(Self { modulus: self.modulus, dim: n, entries })
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        let p = self.modulus as u128;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| ((a as u128 + b as u128) % p) as u64)
            .collect();
        Ok(Self { modulus: self.modulus, dim: self.dim, entries })
    }

    /// Scale every entry by `scalar` (reduced modulo the prime).
    pub fn scalar_mul(&self, scalar: u64) -> Self {
        let s = scalar % self.modulus;
        let entries = self
            .entries
            .iter()
            .map(|&e| mul_mod(e, s, self.modulus))
            .collect();
        Self { modulus: self.modulus, dim: self.dim, entries }
    }

    /// Square-and-multiply power. `exp == 0` yields the identity; negative
    /// exponents invert first and require the matrix to be invertible.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp < 0 {
            return self.inv()?.pow_u64(exp.unsigned_abs());
        }
        self.pow_u64(exp as u64)
    }

    fn pow_u64(&self, mut exp: u64) -> Result<Self> {
        let mut acc = self.identity_like();
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

    /// Inverse modulo the prime, by Gauss–Jordan elimination with modular
    /// pivot inverses.
    pub fn inv(&self) -> Result<Self> {
        let n = self.dim;
        let p = self.modulus;
        let mut work = self.entries.clone();
        let mut out = self.identity_like().entries;

        for col in 0..n {
            let pivot_row = (col..n).find(|&r| work[r * n + col] != 0);
            let Some(pivot_row) = pivot_row else {
                return Err(Error::SingularMatrix { det: self.det(), modulus: p });
            };
            if pivot_row != col {
                for j in 0..n {
                    work.swap(pivot_row * n + j, col * n + j);
                    out.swap(pivot_row * n + j, col * n + j);
                }
            }
            let inv_pivot = pow_mod(work[col * n + col], p - 2, p);
            for j in 0..n {
                work[col * n + j] = mul_mod(work[col * n + j], inv_pivot, p);
                out[col * n + j] = mul_mod(out[col * n + j], inv_pivot, p);
            }
            for r in 0..n {
                if r == col || work[r * n + col] == 0 {
                    continue;
                }
                let factor = work[r * n + col];
                for j in 0..n {
                    let w = mul_mod(factor, work[col * n + j], p);
                    work[r * n + j] = (work[r * n + j] + p - w) % p;
                    let o = mul_mod(factor, out[col * n + j], p);
                    out[r * n + j] = (out[r * n + j] + p - o) % p;
                }
            }
        }
        Ok(Self { modulus: p, dim: n, entries: out })
    }

    /// Determinant modulo the prime.
    pub fn det(&self) -> u64 {
        let n = self.dim;
        let p = self.modulus;
        let mut work = self.entries.clone();
        let mut det = 1 % p;
        for col in 0..n {
            let Some(pivot_row) = (col..n).find(|&r| work[r * n + col] != 0) else {
                return 0;
            };
            if pivot_row != col {
                for j in 0..n {
                    work.swap(pivot_row * n + j, col * n + j);
                }
                det = p - det; // row swap flips the sign
            }
            let pivot = work[col * n + col];
            det = mul_mod(det, pivot, p);
            let inv_pivot = pow_mod(pivot, p - 2, p);
            for r in col + 1..n {
                let factor = mul_mod(work[r * n + col], inv_pivot, p);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let w = mul_mod(factor, work[col * n + j], p);
                    work[r * n + j] = (work[r * n + j] + p - w) % p;
                }
            }
        }
        det % p
    }

    /// Row-vector times matrix: `row · self`, the convention the cipher uses.
    pub fn row_mul(&self, row: &[u64]) -> Result<Vec<u64>> {
        if row.len() != self.dim {
            return Err(Error::BlockLength { expected: self.dim, got: row.len() });
        }
        let p = self.modulus as u128;
        let n = self.dim;
        let mut out = vec![0u64; n];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc: u128 = 0;
            for (i, &v) in row.iter().enumerate() {
                acc = (acc + v as u128 * self.entries[i * n + j] as u128 % p) % p;
            }
            *slot = acc as u64;
        }
        Ok(out)
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueMatrix(mod {}, {:?})", self.modulus, self.rows())
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.dim).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}
