//! Arithmetic in `Sp_{2ℓ}(r)`: matrices, generator images, words in the
//! generators and their decomposition.
//!
//! Coordinates are taken in the hyperbolic basis `e_1, f_1, …, e_ℓ, f_ℓ`
//! (interleaved), so `e_t` has index `2(t−1)` and `f_t` index `2t−1`. The
//! form is `b(x, y) = Σ_t x_{e_t} y_{f_t} − x_{f_t} y_{e_t}`.

mod closure;
mod decompose;
mod weil;
mod word;

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

pub use closure::{enumerate_group, GroupTable};
pub use decompose::{decompose, decompose_randomized, word_length_bound, WORD_LENGTH_CONSTANT};
pub use weil::{weil_image, weil_operator};
pub use word::{evaluate_word, gen_images, random_element, random_word, GenToken, SpImages, Word, WordTarget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("expected a {expected}x{expected} matrix, got {got} entries")]
    Shape { expected: usize, got: usize },
    #[error("token {0} is not defined for this rank")]
    UndefinedToken(String),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: BigUint, cap: usize },
}

pub fn e_index(t: usize) -> usize {
    2 * (t - 1)
}

pub fn f_index(t: usize) -> usize {
    2 * t - 1
}

/// A `2ℓ × 2ℓ` matrix over `𝔽_r`, entries in `[0, r)`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpMatrix {
    r: u64,
    n: usize,
    data: Vec<u64>,
}

impl SpMatrix {
    /// Builds a matrix from integer rows, reducing mod `r`. The result is
    /// not checked for membership in `Sp`.
    pub fn from_rows(r: u64, rows: &[Vec<i64>]) -> Result<Self, SymplecticError> {
        let n = rows.len();
        if n == 0 || n % 2 == 1 || rows.iter().any(|row| row.len() != n) {
            return Err(SymplecticError::Shape { expected: n.max(2), got: rows.iter().map(Vec::len).sum() });
        }
        let data = rows.iter().flatten().map(|&x| x.rem_euclid(r as i64) as u64).collect();
        Ok(SpMatrix { r, n, data })
    }

    /// Row-major flat entries of a `2ℓ × 2ℓ` matrix, reduced mod `r`.
    pub fn from_flat(r: u64, ell: usize, entries: &[i64]) -> Result<Self, SymplecticError> {
        let n = 2 * ell;
        if entries.len() != n * n {
            return Err(SymplecticError::Shape { expected: n, got: entries.len() });
        }
        let data = entries.iter().map(|&x| x.rem_euclid(r as i64) as u64).collect();
        Ok(SpMatrix { r, n, data })
    }

    /// Like [`from_rows`](Self::from_rows), rejecting non-symplectic input.
    pub fn symplectic(r: u64, rows: &[Vec<i64>]) -> Result<Self, SymplecticError> {
        let m = Self::from_rows(r, rows)?;
        if m.is_symplectic() {
            Ok(m)
        } else {
            Err(SymplecticError::NotSymplectic)
        }
    }

    pub fn identity(r: u64, ell: usize) -> Self {
        let n = 2 * ell;
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        SpMatrix { r, n, data }
    }

    /// The Gram matrix `J` of the form: `ℓ` blocks `[[0,1],[−1,0]]`.
    pub fn form(r: u64, ell: usize) -> Self {
        let n = 2 * ell;
        let mut data = vec![0; n * n];
        for t in 1..=ell {
            data[e_index(t) * n + f_index(t)] = 1;
            data[f_index(t) * n + e_index(t)] = r - 1;
        }
        SpMatrix { r, n, data }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// `2ℓ`.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.n / 2
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.r;
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n).map(<[u64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.r, self.ell())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let data = (0..n * n).map(|k| self.data[(k % n) * n + k / n]).collect();
        SpMatrix { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.r, self.n), (other.r, other.n), "matrix shape or modulus");
        let n = self.n;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        for x in data.iter_mut() {
            *x %= self.r;
        }
        SpMatrix { r: self.r, n, data }
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum::<u64>() % self.r)
            .collect()
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|&x| (self.r - x) % self.r).collect();
        SpMatrix { data, ..self.clone() }
    }

    /// `gᵀ J g = J`.
    pub fn is_symplectic(&self) -> bool {
        let j = Self::form(self.r, self.ell());
        self.transpose().mul(&j).mul(self) == j
    }

    /// Inverse of a symplectic matrix, `g⁻¹ = −J gᵀ J`.
    pub fn inverse(&self) -> Result<Self, SymplecticError> {
        if !self.is_symplectic() {
            return Err(SymplecticError::NotSymplectic);
        }
        let j = Self::form(self.r, self.ell());
        Ok(j.mul(&self.transpose()).mul(&j).neg())
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = Self::identity(self.r, self.ell());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for SpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

impl Serialize for SpMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// `|Sp_{2ℓ}(r)| = r^{ℓ²} ∏_{i=1}^{ℓ} (r^{2i} − 1)`.
pub fn group_order(ell: usize, r: u64) -> BigUint {
    let r = BigUint::from(r);
    let mut order = r.pow((ell * ell) as u32);
    for i in 1..=ell {
        order *= r.pow(2 * i as u32) - 1u32;
    }
    order
}
