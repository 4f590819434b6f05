//! Exact dense matrices and structured operators on `W = V^{⊗ℓ}`,
//! `dim W = r^ℓ`.
//!
//! Operators act on column coordinate vectors: the `ξ`-th column of a matrix
//! is the image of the basis vector `v_ξ`. Basis vectors of `W` are indexed
//! by [`IndexSpace`], with the first tensor slot most significant, so that
//! `A_t = I_{r^{t−1}} ⊗ A ⊗ I_{r^{ℓ−t}}` is a literal Kronecker product.

mod dense;
mod echelon;
mod operator;

use thiserror::Error;

pub use dense::{kron, DenseMatrix};
pub use echelon::{Echelon, SpanSolver};
pub use operator::{Fourier, Monomial, Operator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinopsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
}

/// Index set `{0, …, r−1}^ℓ` of the tensor basis `v_{ξ₁,…,ξ_ℓ}`; flat index
/// `Σ_t ξ_t · r^{ℓ−t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSpace {
    r: u64,
    ell: usize,
    n: usize,
}

impl IndexSpace {
    pub fn new(r: u64, ell: usize) -> Self {
        let n = (r as usize).pow(ell as u32);
        IndexSpace { r, ell, n }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `r^ℓ`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Flat-index distance between consecutive values of slot `t` (1-based).
    pub fn stride(&self, t: usize) -> usize {
        (self.r as usize).pow((self.ell - t) as u32)
    }

    pub fn digit(&self, idx: usize, t: usize) -> u64 {
        ((idx / self.stride(t)) % self.r as usize) as u64
    }

    pub fn flat(&self, xi: &[u64]) -> usize {
        debug_assert_eq!(xi.len(), self.ell);
        xi.iter().fold(0usize, |acc, &x| acc * self.r as usize + (x % self.r) as usize)
    }

    pub fn unflat(&self, mut idx: usize) -> Vec<u64> {
        let mut xi = vec![0u64; self.ell];
        for slot in xi.iter_mut().rev() {
            *slot = (idx % self.r as usize) as u64;
            idx /= self.r as usize;
        }
        xi
    }

    /// Flat index of `−ξ`.
    pub fn negate(&self, idx: usize) -> usize {
        let xi: Vec<u64> = self.unflat(idx).into_iter().map(|x| (self.r - x) % self.r).collect();
        self.flat(&xi)
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix() {
        let s = IndexSpace::new(3, 2);
        assert_eq!(s.dim(), 9);
        assert_eq!(s.flat(&[1, 2]), 5);
        assert_eq!(s.unflat(5), vec![1, 2]);
        assert_eq!(s.digit(5, 1), 1);
        assert_eq!(s.digit(5, 2), 2);
        assert_eq!(s.negate(5), s.flat(&[2, 1]));
        assert_eq!(s.negate(0), 0);
        for i in s.indices() {
            assert_eq!(s.flat(&s.unflat(i)), i);
        }
    }
}
