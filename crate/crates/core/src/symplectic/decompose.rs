//! Root-subgroup elimination: left-multiply `g` by elementary moves until it
//! becomes the identity, one hyperbolic pair at a time.
//!
//! Elementary moves on coordinates (`s < t`):
//!
//! ```text
//! T_ef(t,a) = U_t^a                     x_{e_t} += a·x_{f_t}
//! T_fe(t,a) = C_t U_t^{−a} C_t^{−1}     x_{f_t} += a·x_{e_t}
//! M1(s,t,a) = D_st^a                    x_{e_s} += a·x_{f_t}, x_{e_t} += a·x_{f_s}
//! M2(s,t,a) = C_t D_st^a C_t^{−1}       x_{e_s} += a·x_{e_t}, x_{f_t} −= a·x_{f_s}
//! M3(s,t,a) = C_s D_st^a C_s^{−1}       x_{e_t} += a·x_{e_s}, x_{f_s} −= a·x_{f_t}
//! M4(s,t,a) = (C_sC_t) D_st^a (C_sC_t)^{−1}
//!                                       x_{f_t} −= a·x_{e_s}, x_{f_s} −= a·x_{e_t}
//! ```

use super::word::{evaluate_word, gen_images, random_word, GenToken, SpImages, Word};
use super::{e_index, f_index, SpMatrix, SymplecticError};
use crate::field::arith::mod_pow;

/// Decomposed words have at most `WORD_LENGTH_CONSTANT · ℓ²` tokens.
pub const WORD_LENGTH_CONSTANT: usize = 14;

pub fn word_length_bound(ell: usize) -> usize {
    WORD_LENGTH_CONSTANT * ell * ell
}

struct Reducer {
    images: SpImages,
    h: SpMatrix,
    /// Applied moves, first move first.
    moves: Vec<Vec<GenToken>>,
}

impl Reducer {
    fn r(&self) -> u64 {
        self.images.r
    }

    fn entry(&self, row: usize, col: usize) -> u64 {
        self.h.get(row, col)
    }

    fn inv(&self, a: u64) -> u64 {
        mod_pow(a, self.r() - 2, self.r())
    }

    fn times(&self, a: u64, b: u64) -> u64 {
        a * b % self.r()
    }

    fn neg(&self, a: u64) -> u64 {
        (self.r() - a) % self.r()
    }

    fn apply(&mut self, tokens: Vec<GenToken>) {
        let m = evaluate_word(&self.images, &Word(tokens.clone())).expect("valid tokens");
        self.h = m.mul(&self.h);
        self.moves.push(tokens);
    }

    fn c(t: usize, exp: i64) -> GenToken {
        GenToken::C { t, exp }
    }

    fn t_ef(&mut self, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![GenToken::U { t, exp: a as i64 }]);
        }
    }

    fn t_fe(&mut self, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![Self::c(t, 1), GenToken::U { t, exp: -(a as i64) }, Self::c(t, 3)]);
        }
    }

    fn m1(&mut self, s: usize, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![GenToken::D { s, t, exp: a as i64 }]);
        }
    }

    fn m2(&mut self, s: usize, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![Self::c(t, 1), GenToken::D { s, t, exp: a as i64 }, Self::c(t, 3)]);
        }
    }

    fn m3(&mut self, s: usize, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![Self::c(s, 1), GenToken::D { s, t, exp: a as i64 }, Self::c(s, 3)]);
        }
    }

    fn m4(&mut self, s: usize, t: usize, a: u64) {
        if a != 0 {
            self.apply(vec![
                Self::c(s, 1),
                Self::c(t, 1),
                GenToken::D { s, t, exp: a as i64 },
                Self::c(t, 3),
                Self::c(s, 3),
            ]);
        }
    }

    /// Brings columns `e_k` and `f_k` to `e_k` and `f_k`, assuming pairs
    /// before `k` are already standard.
    fn reduce_pair(&mut self, k: usize) {
        let ell = self.images.ell;
        let (ek, fk) = (e_index(k), f_index(k));

        // A nonzero pivot at x_{e_k}.
        if self.entry(ek, ek) == 0 {
            if self.entry(fk, ek) != 0 {
                self.apply(vec![Self::c(k, 1)]);
            } else {
                let t = (k + 1..=ell)
                    .find(|&t| self.entry(e_index(t), ek) != 0 || self.entry(f_index(t), ek) != 0)
                    .expect("columns of an invertible matrix are nonzero");
                if self.entry(f_index(t), ek) == 0 {
                    self.apply(vec![Self::c(t, 1)]);
                }
                self.m1(k, t, 1);
            }
        }
        let p = self.entry(ek, ek);
        let p_inv = self.inv(p);

        // Clear the other pairs of column e_k.
        for t in k + 1..=ell {
            let a = self.neg(self.times(self.entry(e_index(t), ek), p_inv));
            self.m3(k, t, a);
            let a = self.times(self.entry(f_index(t), ek), p_inv);
            self.m4(k, t, a);
        }

        // p·e_k + q·f_k  →  p·e_k  →  e_k
        let q = self.entry(fk, ek);
        self.t_fe(k, self.neg(self.times(q, p_inv)));
        if p != 1 {
            self.t_fe(k, 1);
            self.t_ef(k, self.times((1 + self.r() - p) % self.r(), p_inv));
            self.t_fe(k, self.neg(p));
        }

        // Column f_k now has x_{f_k} = b(e_k, g f_k) = 1; clear the rest with
        // moves fixing e_k.
        for t in k + 1..=ell {
            self.m2(k, t, self.entry(f_index(t), fk));
            self.m1(k, t, self.neg(self.entry(e_index(t), fk)));
        }
        self.t_ef(k, self.neg(self.entry(ek, fk)));
    }
}

/// A word `w` in `C_t, D_{st}, U_t` with `evaluate_word(w, gen_images) = g`.
///
/// The word has at most [`word_length_bound`]`(ℓ)` tokens, each with
/// exponent below `r` (below 4 for `C_t`).
pub fn decompose(g: &SpMatrix) -> Result<Word, SymplecticError> {
    if !g.is_symplectic() {
        return Err(SymplecticError::NotSymplectic);
    }
    let (ell, r) = (g.ell(), g.r());
    let mut reducer = Reducer { images: gen_images(ell, r), h: g.clone(), moves: Vec::new() };
    for k in 1..=ell {
        reducer.reduce_pair(k);
    }
    assert!(reducer.h.is_identity(), "elimination did not reach the identity");
    // M_m ⋯ M_1 g = I, so g = M_1^{-1} ⋯ M_m^{-1}.
    let word: Word = reducer
        .moves
        .iter()
        .flat_map(|m| Word(m.clone()).inverse(r).0)
        .collect();
    Ok(word.normalized(r))
}

/// `ρ · decompose(ρ^{-1} g)` for a pseudorandom prefix `ρ`; evaluates to `g`
/// through a different word.
pub fn decompose_randomized(g: &SpMatrix, seed: u64) -> Result<Word, SymplecticError> {
    let (ell, r) = (g.ell(), g.r());
    let prefix = random_word(ell, r, seed, 8);
    let rho = evaluate_word(&gen_images(ell, r), &prefix)?;
    let rest = decompose(&rho.inverse()?.mul(g))?;
    Ok(prefix.concat(&rest).normalized(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_element;

    #[test]
    fn identity_gives_empty_word() {
        assert!(decompose(&SpMatrix::identity(5, 2)).unwrap().is_empty());
    }

    #[test]
    fn generator_roundtrip() {
        let images = gen_images(1, 3);
        let w = decompose(&images.u[0]).unwrap();
        assert_eq!(evaluate_word(&images, &w).unwrap(), images.u[0]);
    }

    #[test]
    fn random_roundtrips() {
        for &(ell, r) in &[(1usize, 3u64), (1, 5), (1, 7), (2, 3), (2, 5), (3, 3), (3, 7), (4, 5)] {
            let images = gen_images(ell, r);
            for seed in 0..100 {
                let g = random_element(ell, r, seed);
                let w = decompose(&g).unwrap();
                assert!(w.len() <= word_length_bound(ell), "({ell},{r}) length {}", w.len());
                assert_eq!(evaluate_word(&images, &w).unwrap(), g);
                let w2 = decompose_randomized(&g, seed + 1000).unwrap();
                assert_eq!(evaluate_word(&images, &w2).unwrap(), g);
            }
        }
    }

    #[test]
    fn rejects_non_symplectic() {
        let g = SpMatrix::from_rows(3, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(decompose(&g), Err(SymplecticError::NotSymplectic));
    }
}
