//! Arithmetic and exact rank over GF(p) for word-sized primes.
//!
//! Generic rank is decided by evaluating the free parameters at random field
//! elements. Every matrix entry here is a polynomial of degree at most T in
//! those parameters, so by Schwartz–Zippel a single random evaluation
//! undercounts the rank with probability at most about N·T/p; with p near
//! 2^61 that is negligible, and the engine takes the max over independent
//! trials anyway. Floating-point rank is useless for this job: products of T
//! snapshot matrices are exponentially ill-conditioned.

use crate::{Error, Result};

/// default modulus: the Mersenne prime 2^61 − 1
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// smallest modulus the engine accepts
pub const MIN_PRIME: u64 = 1_000_003;

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // safe: both < p < 2^63
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// multiplicative inverse by Fermat; `a` must be nonzero mod p
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// deterministic Miller–Rabin for u64 (the first 12 primes as witnesses
/// cover the full 64-bit range)
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// checks a user-supplied modulus: prime, large enough for the
/// Schwartz–Zippel error bound to be meaningful, and small enough that sums
/// of two residues never overflow u64
pub fn validate_prime(p: u64) -> Result<()> {
    if p >= 1u64 << 63 {
        return Err(Error::InvalidConfig(format!("prime {p} too large, need < 2^63")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < MIN_PRIME {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(())
}

/// dense row-major matrix over GF(p); entries are already reduced
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// builds from column vectors (they must all share a length)
    pub fn from_columns(columns: &[Vec<u64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, &x) in col.iter().enumerate() {
                m.data[i * cols + j] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x;
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    /// keeps only the listed columns, in the given order
    pub fn select_columns(&self, keep: &[usize]) -> Matrix {
        let cols: Vec<Vec<u64>> = keep.iter().map(|&c| self.column(c)).collect();
        Matrix::from_columns(&cols)
    }

    /// rank by Gaussian elimination with partial pivoting on nonzero pivots;
    /// consumes the buffer in place
    pub fn rank_in_place(&mut self, p: u64) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0usize;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let pivot = (rank..rows).find(|&r| self.at(r, col) != 0);
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for c in col..cols {
                    self.data.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let inv = inv_mod(self.at(rank, col), p);
            for r in rank + 1..rows {
                let factor = self.at(r, col);
                if factor == 0 {
                    continue;
                }
                let scale = mul_mod(factor, inv, p);
                for c in col..cols {
                    let x = sub_mod(self.at(r, c), mul_mod(scale, self.at(rank, c), p), p);
                    self.set(r, c, x);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self, p: u64) -> usize {
        self.clone().rank_in_place(p)
    }

    /// solves `self · x = b` if consistent, touching neither input; returns
    /// one solution (free variables pinned to 0)
    pub fn solve(&self, b: &[u64], p: u64) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let (rows, cols) = (self.rows, self.cols);
        let width = cols + 1;
        let mut aug = vec![0u64; rows * width];
        for r in 0..rows {
            aug[r * width..r * width + cols]
                .copy_from_slice(&self.data[r * cols..(r + 1) * cols]);
            aug[r * width + cols] = b[r];
        }
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| aug[r * width + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for c in 0..width {
                    aug.swap(pivot * width + c, rank * width + c);
                }
            }
            let inv = inv_mod(aug[rank * width + col], p);
            for c in col..width {
                aug[rank * width + c] = mul_mod(aug[rank * width + c], inv, p);
            }
            for r in 0..rows {
                if r == rank || aug[r * width + col] == 0 {
                    continue;
                }
                let scale = aug[r * width + col];
                for c in col..width {
                    aug[r * width + c] =
                        sub_mod(aug[r * width + c], mul_mod(scale, aug[rank * width + c], p), p);
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        // inconsistent if a zero row meets a nonzero rhs
        for r in rank..rows {
            if aug[r * width + cols] != 0 {
                return None;
            }
        }
        let mut x = vec![0u64; cols];
        for (r, &col) in pivot_cols.iter().enumerate() {
            x[col] = aug[r * width + cols];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_basics() {
        let p = DEFAULT_PRIME;
        assert_eq!(add_mod(p - 1, 1, p), 0);
        assert_eq!(sub_mod(0, 1, p), p - 1);
        assert_eq!(mul_mod(p - 1, p - 1, p), 1); // (-1)^2
        for a in [1u64, 2, 12345, p - 2] {
            assert_eq!(mul_mod(a, inv_mod(a, p), p), 1);
        }
        assert_eq!(pow_mod(2, 61, p), 1); // 2^61 = p + 1
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(1_000_003));
        assert!(is_prime((1 << 31) - 1));
        assert!(!is_prime(1));
        assert!(!is_prime(1_000_001)); // 101 * 9901
        assert!(!is_prime((1u64 << 61) - 3));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn validate_rejects_small_or_composite() {
        assert_eq!(validate_prime(97), Err(Error::PrimeTooSmall(97)));
        assert_eq!(validate_prime(1_000_004), Err(Error::NotPrime(1_000_004)));
        assert!(validate_prime(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn identity_rank() {
        let p = DEFAULT_PRIME;
        for n in 1..6 {
            let mut m = Matrix::zero(n, n);
            for i in 0..n {
                m.set(i, i, (i as u64 % (p - 1)) + 1);
            }
            assert_eq!(m.rank(p), n);
        }
    }

    #[test]
    fn duplicate_column_does_not_add_rank() {
        let p = DEFAULT_PRIME;
        let c1 = vec![1u64, 2, 3];
        let c2 = vec![4u64, 5, 6];
        let with_dup = Matrix::from_columns(&[c1.clone(), c2.clone(), c1.clone()]);
        let without = Matrix::from_columns(&[c1, c2]);
        assert_eq!(with_dup.rank(p), without.rank(p));
        assert_eq!(with_dup.rank(p), 2);
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(Matrix::zero(4, 3).rank(DEFAULT_PRIME), 0);
    }

    #[test]
    fn solve_recovers_solution() {
        let p = DEFAULT_PRIME;
        let m = Matrix::from_columns(&[vec![1, 0, 2], vec![3, 1, 0], vec![4, 1, 2]]);
        // b = m * [5, 7, 0]
        let b = vec![
            add_mod(5, mul_mod(3, 7, p), p),
            7,
            mul_mod(2, 5, p),
        ];
        let x = m.solve(&b, p).expect("consistent system");
        // verify m * x = b
        for r in 0..3 {
            let mut acc = 0;
            for c in 0..3 {
                acc = add_mod(acc, mul_mod(m.at(r, c), x[c], p), p);
            }
            assert_eq!(acc, b[r]);
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Matrix::from_columns(&[vec![1, 1], vec![2, 2]]); // rank 1
        assert!(m.solve(&[1, 2], DEFAULT_PRIME).is_none());
    }
}
