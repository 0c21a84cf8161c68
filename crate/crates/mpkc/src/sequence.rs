//! Order-n generalizations of the Fibonacci sequence, extended in both
//! index directions.
//!
//! A sequence of order `n` starts with `t_0 = … = t_{n-2} = 0`, `t_{n-1} = 1`
//! and satisfies `t_{k+n} = t_k + t_{k+1} + … + t_{k+n-1}`. Negative indices
//! are defined by the rearranged recurrence
//! `t_k = t_{k+n} − t_{k+1} − … − t_{k+n-1}`, which keeps the forward
//! recurrence valid over every window of the extended sequence.
//!
//! Terms are arbitrary-precision integers (they can be negative below index
//! zero), or residues when a prime modulus is attached. Computing `t_k` costs
//! O(|k|) the first time; results are memoized behind a lock so a shared
//! sequence behaves as if every term were recomputed on demand.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::ensure_prime;

#[derive(Debug)]
pub struct MultinacciSequence {
    order: usize,
    modulus: Option<u64>,
    cache: Mutex<Cache>,
}

#[derive(Debug)]
enum Cache {
    /// fwd[i] = t_i, back[i] = t_{-1-i}
    Exact { fwd: Vec<BigInt>, back: Vec<BigInt> },
    Modular { fwd: Vec<u64>, back: Vec<u64> },
}

impl MultinacciSequence {
    /// Exact integer sequence of the given order (n=2 Fibonacci, n=3 tribonacci, …).
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall(order));
        }
        let mut fwd = vec![BigInt::zero(); order - 1];
        fwd.push(BigInt::one());
        Ok(Self {
            order,
            modulus: None,
            cache: Mutex::new(Cache::Exact { fwd, back: Vec::new() }),
        })
    }

    /// Sequence reduced modulo the prime `modulus`.
    pub fn with_modulus(order: usize, modulus: u64) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall(order));
        }
        ensure_prime(modulus)?;
        let mut fwd = vec![0u64; order - 1];
        fwd.push(1 % modulus);
        Ok(Self {
            order,
            modulus: Some(modulus),
            cache: Mutex::new(Cache::Modular { fwd, back: Vec::new() }),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// The term `t_k`, for any signed index. Residues are returned as
    /// non-negative integers when a modulus is attached.
    pub fn term(&self, k: i64) -> BigInt {
        let mut cache = self.cache.lock().expect("sequence cache poisoned");
        match &mut *cache {
            Cache::Exact { fwd, back } => {
                extend_exact(self.order, fwd, back, k);
                exact_at(fwd, back, k).clone()
            }
            Cache::Modular { fwd, back } => {
                let p = self.modulus.expect("modular cache without modulus");
                extend_modular(self.order, p, fwd, back, k);
                BigInt::from(modular_at(fwd, back, k))
            }
        }
    }

    /// Residue access for sequences built with a modulus.
    pub(crate) fn term_residue(&self, k: i64) -> u64 {
        let p = self.modulus.expect("term_residue requires a modulus");
        let mut cache = self.cache.lock().expect("sequence cache poisoned");
        match &mut *cache {
            Cache::Modular { fwd, back } => {
                extend_modular(self.order, p, fwd, back, k);
                modular_at(fwd, back, k)
            }
            Cache::Exact { .. } => unreachable!("modulus is set"),
        }
    }
}

fn back_index(k: i64) -> usize {
    debug_assert!(k < 0);
    (-1 - k) as usize
}

fn exact_at<'a>(fwd: &'a [BigInt], back: &'a [BigInt], k: i64) -> &'a BigInt {
    if k >= 0 {
        &fwd[k as usize]
    } else {
        &back[back_index(k)]
    }
}

fn modular_at(fwd: &[u64], back: &[u64], k: i64) -> u64 {
    if k >= 0 {
        fwd[k as usize]
    } else {
        back[back_index(k)]
    }
}

fn extend_exact(order: usize, fwd: &mut Vec<BigInt>, back: &mut Vec<BigInt>, k: i64) {
    if k >= 0 {
        let idx = k as usize;
        while fwd.len() <= idx {
            let next: BigInt = fwd[fwd.len() - order..].iter().sum();
            fwd.push(next);
        }
    } else {
        let want = back_index(k) + 1;
        while back.len() < want {
            // t_m = t_{m+n} − t_{m+1} − … − t_{m+n−1}
            let m = -1 - back.len() as i64;
            let mut val = exact_at(fwd, back, m + order as i64).clone();
            for j in 1..order as i64 {
                val -= exact_at(fwd, back, m + j);
            }
            back.push(val);
        }
    }
}

fn extend_modular(order: usize, p: u64, fwd: &mut Vec<u64>, back: &mut Vec<u64>, k: i64) {
    if k >= 0 {
        let idx = k as usize;
        while fwd.len() <= idx {
            let sum: u128 = fwd[fwd.len() - order..].iter().map(|&t| t as u128).sum();
            fwd.push((sum % p as u128) as u64);
        }
    } else {
        let want = back_index(k) + 1;
        while back.len() < want {
            let m = -1 - back.len() as i64;
            let mut val = modular_at(fwd, back, m + order as i64) as i128;
            for j in 1..order as i64 {
                val -= modular_at(fwd, back, m + j) as i128;
            }
            back.push(val.rem_euclid(p as i128) as u64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(seq: &MultinacciSequence, range: std::ops::RangeInclusive<i64>) -> Vec<BigInt> {
        range.map(|k| seq.term(k)).collect()
    }

    #[test]
    fn initial_conditions() {
        let trib = MultinacciSequence::new(3).unwrap();
        assert_eq!(trib.term(0), BigInt::from(0));
        assert_eq!(trib.term(1), BigInt::from(0));
        assert_eq!(trib.term(2), BigInt::from(1));
    }

    #[test]
    fn tribonacci_forward() {
        let trib = MultinacciSequence::new(3).unwrap();
        let got: Vec<BigInt> = terms(&trib, 0..=10);
        let want: Vec<BigInt> = [0, 0, 1, 1, 2, 4, 7, 13, 24, 44, 81]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn tribonacci_term_nine_mod_47() {
        let trib = MultinacciSequence::with_modulus(3, 47).unwrap();
        assert_eq!(trib.term_residue(9), 44);
    }

    #[test]
    fn fibonacci_term_ten() {
        // iterate the order-2 recurrence by hand as the oracle
        let (mut a, mut b) = (0i64, 1i64);
        for _ in 0..10 {
            (a, b) = (b, a + b);
        }
        assert_eq!(a, 55);
        let fib = MultinacciSequence::new(2).unwrap();
        assert_eq!(fib.term(10), BigInt::from(55));
    }

    #[test]
    fn negative_extension() {
        let trib = MultinacciSequence::new(3).unwrap();
        assert_eq!(trib.term(-1), BigInt::from(1));
        let got: Vec<BigInt> = (1..=8).map(|k| trib.term(-k)).collect();
        let want: Vec<BigInt> = [1, -1, 0, 2, -3, 1, 4, -8]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(got, want);

        let fib = MultinacciSequence::new(2).unwrap();
        let got: Vec<BigInt> = (1..=5).map(|k| fib.term(-k)).collect();
        let want: Vec<BigInt> = [1, -1, 2, -3, 5].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn recurrence_holds_across_negative_range() {
        for order in 2..=5usize {
            let seq = MultinacciSequence::new(order).unwrap();
            for k in -15..=10i64 {
                let sum: BigInt = (0..order as i64).map(|j| seq.term(k + j)).sum();
                assert_eq!(seq.term(k + order as i64), sum, "order {order}, k {k}");
            }
        }
    }

    #[test]
    fn recurrence_holds_modulo_prime() {
        for p in [29u64, 47, 101] {
            let seq = MultinacciSequence::with_modulus(3, p).unwrap();
            for k in -20..=30i64 {
                let sum = (0..3).map(|j| seq.term_residue(k + j)).sum::<u64>() % p;
                assert_eq!(seq.term_residue(k + 3), sum, "p {p}, k {k}");
            }
        }
    }

    #[test]
    fn forward_recomputation_from_any_window() {
        // recomputing t_k forward from any window of n consecutive cached
        // terms reproduces the cache
        let seq = MultinacciSequence::new(4).unwrap();
        let cached: Vec<BigInt> = terms(&seq, -12..=20);
        let at = |k: i64| cached[(k + 12) as usize].clone();
        for start in -12..=(20 - 4) {
            let mut window: Vec<BigInt> = (start..start + 4).map(at).collect();
            for k in start + 4..=20 {
                let next: BigInt = window.iter().sum();
                assert_eq!(next, at(k), "window start {start}, k {k}");
                window.remove(0);
                window.push(next);
            }
        }
    }

    #[test]
    fn exact_terms_grow_past_u64() {
        let trib = MultinacciSequence::new(3).unwrap();
        assert!(trib.term(77) > BigInt::from(u64::MAX));
        // frozen via independent bignum computation
        assert_eq!(
            trib.term(100),
            "53324762928098149064722658".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            MultinacciSequence::new(1),
            Err(Error::OrderTooSmall(1))
        ));
        assert!(matches!(
            MultinacciSequence::with_modulus(3, 46),
            Err(Error::NotPrime(46))
        ));
    }
}
