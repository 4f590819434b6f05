use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{e_index, f_index, SpMatrix, SymplecticError};

/// One generator raised to an integer power.
///
/// Serialized as `{"gen": "C"|"D"|"U", "t": …, "s": … (D only), "exp": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "gen")]
pub enum GenToken {
    #[serde(rename = "C")]
    C { t: usize, exp: i64 },
    #[serde(rename = "D")]
    D { s: usize, t: usize, exp: i64 },
    #[serde(rename = "U")]
    U { t: usize, exp: i64 },
}

impl GenToken {
    pub fn exp(&self) -> i64 {
        match *self {
            GenToken::C { exp, .. } | GenToken::D { exp, .. } | GenToken::U { exp, .. } => exp,
        }
    }

    pub fn with_exp(self, exp: i64) -> Self {
        match self {
            GenToken::C { t, .. } => GenToken::C { t, exp },
            GenToken::D { s, t, .. } => GenToken::D { s, t, exp },
            GenToken::U { t, .. } => GenToken::U { t, exp },
        }
    }

    /// Order of the generator's image: 4 for `C_t`, `r` otherwise.
    pub fn order(&self, r: u64) -> i64 {
        match self {
            GenToken::C { .. } => 4,
            _ => r as i64,
        }
    }

    /// Exponent reduced into `[0, order)`, with `D_{ts}` rewritten as `D_{st}`.
    pub fn normalized(self, r: u64) -> Self {
        let exp = self.exp().rem_euclid(self.order(r));
        match self {
            GenToken::D { s, t, .. } if s > t => GenToken::D { s: t, t: s, exp },
            other => other.with_exp(exp),
        }
    }

    fn same_generator(&self, other: &Self) -> bool {
        self.with_exp(0) == other.with_exp(0)
    }

    fn is_valid(&self, ell: usize) -> bool {
        match *self {
            GenToken::C { t, .. } | GenToken::U { t, .. } => (1..=ell).contains(&t),
            GenToken::D { s, t, .. } => s >= 1 && s < t && t <= ell,
        }
    }
}

impl fmt::Display for GenToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenToken::C { t, exp } => write!(f, "C{t}^{exp}"),
            GenToken::D { s, t, exp } => write!(f, "D{s},{t}^{exp}"),
            GenToken::U { t, exp } => write!(f, "U{t}^{exp}"),
        }
    }
}

/// A product of tokens, leftmost factor first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<GenToken>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn tokens(&self) -> &[GenToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, token: GenToken) {
        self.0.push(token);
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Reduces exponents, drops trivial tokens and merges equal neighbours.
    pub fn normalized(&self, r: u64) -> Word {
        let mut out: Vec<GenToken> = Vec::with_capacity(self.0.len());
        for token in &self.0 {
            let token = token.normalized(r);
            if token.exp() == 0 {
                continue;
            }
            match out.last() {
                Some(top) if top.same_generator(&token) => {
                    let merged = token.with_exp(top.exp() + token.exp()).normalized(r);
                    out.pop();
                    if merged.exp() != 0 {
                        out.push(merged);
                    }
                }
                _ => out.push(token),
            }
        }
        Word(out)
    }

    /// The inverse word, normalized.
    pub fn inverse(&self, r: u64) -> Word {
        self.0.iter().rev().map(|tok| tok.with_exp(-tok.exp())).collect::<Word>().normalized(r)
    }

    pub fn validate(&self, ell: usize) -> Result<(), SymplecticError> {
        match self.0.iter().find(|tok| !tok.is_valid(ell)) {
            Some(tok) => Err(SymplecticError::UndefinedToken(tok.to_string())),
            None => Ok(()),
        }
    }
}

impl FromIterator<GenToken> for Word {
    fn from_iter<I: IntoIterator<Item = GenToken>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A group in which words can be evaluated.
pub trait WordTarget {
    type Value: Clone;

    /// Modulus for exponent reduction.
    fn r(&self) -> u64;

    fn identity(&self) -> Self::Value;

    /// Image of `token`, whose exponent is already reduced into
    /// `[0, order)`; `None` if the generator is not assigned.
    fn power(&self, token: &GenToken) -> Option<Self::Value>;

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
}

/// Ordered product of the token images; the empty word gives the identity.
pub fn evaluate_word<T: WordTarget>(target: &T, word: &Word) -> Result<T::Value, SymplecticError> {
    let mut acc = target.identity();
    for token in word.tokens() {
        let token = token.normalized(target.r());
        let value = target
            .power(&token)
            .ok_or_else(|| SymplecticError::UndefinedToken(token.to_string()))?;
        acc = target.mul(&acc, &value);
    }
    Ok(acc)
}

/// `π(C_t)`, `π(D_{st})`, `π(U_t)`.
#[derive(Debug, Clone)]
pub struct SpImages {
    pub ell: usize,
    pub r: u64,
    pub c: Vec<SpMatrix>,
    pub d: BTreeMap<(usize, usize), SpMatrix>,
    pub u: Vec<SpMatrix>,
}

impl SpImages {
    /// All generators with exponent one, in the order `C_t, D_{st}, U_t`.
    pub fn tokens(&self) -> Vec<GenToken> {
        let c = (1..=self.ell).map(|t| GenToken::C { t, exp: 1 });
        let d = self.d.keys().map(|&(s, t)| GenToken::D { s, t, exp: 1 });
        let u = (1..=self.ell).map(|t| GenToken::U { t, exp: 1 });
        c.chain(d).chain(u).collect()
    }

    pub fn base(&self, token: &GenToken) -> Option<&SpMatrix> {
        if !token.is_valid(self.ell) {
            return None;
        }
        match *token {
            GenToken::C { t, .. } => self.c.get(t - 1),
            GenToken::D { s, t, .. } => self.d.get(&(s, t)),
            GenToken::U { t, .. } => self.u.get(t - 1),
        }
    }
}

impl WordTarget for SpImages {
    type Value = SpMatrix;

    fn r(&self) -> u64 {
        self.r
    }

    fn identity(&self) -> SpMatrix {
        SpMatrix::identity(self.r, self.ell)
    }

    fn power(&self, token: &GenToken) -> Option<SpMatrix> {
        Some(self.base(token)?.pow(token.exp() as u64))
    }

    fn mul(&self, a: &SpMatrix, b: &SpMatrix) -> SpMatrix {
        a.mul(b)
    }
}

/// `π(C_t): e_t ↦ −f_t, f_t ↦ e_t`; `π(D_{st}): f_t ↦ f_t + e_s,
/// f_s ↦ f_s + e_t`; `π(U_t): f_t ↦ f_t + e_t`; all other basis vectors
/// fixed. Columns are images.
pub fn gen_images(ell: usize, r: u64) -> SpImages {
    let id = SpMatrix::identity(r, ell);
    let c = (1..=ell)
        .map(|t| {
            let (e, f) = (e_index(t), f_index(t));
            let mut m = id.clone();
            m.set(e, e, 0);
            m.set(f, f, 0);
            m.set(f, e, r - 1);
            m.set(e, f, 1);
            m
        })
        .collect();
    let u = (1..=ell)
        .map(|t| {
            let mut m = id.clone();
            m.set(e_index(t), f_index(t), 1);
            m
        })
        .collect();
    let mut d = BTreeMap::new();
    for t in 1..=ell {
        for s in 1..t {
            let mut m = id.clone();
            m.set(e_index(s), f_index(t), 1);
            m.set(e_index(t), f_index(s), 1);
            d.insert((s, t), m);
        }
    }
    SpImages { ell, r, c, d, u }
}

/// Deterministic pseudorandom word of `len` tokens with nonzero exponents.
pub fn random_word(ell: usize, r: u64, seed: u64, len: usize) -> Word {
    let tokens = gen_images(ell, r).tokens();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| {
            let token = tokens[rng.gen_range(0..tokens.len())];
            token.with_exp(rng.gen_range(1..token.order(r)))
        })
        .collect()
}

/// Evaluates a 50-token [`random_word`] in [`gen_images`].
pub fn random_element(ell: usize, r: u64, seed: u64) -> SpMatrix {
    let word = random_word(ell, r, seed, 50);
    evaluate_word(&gen_images(ell, r), &word).expect("valid tokens")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn rank_one_images() {
        let g = gen_images(1, 3);
        assert_eq!(g.c[0].rows(), vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(g.u[0].rows(), vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn d12_images() {
        let g = gen_images(2, 5);
        let d = &g.d[&(1, 2)];
        // f_2 ↦ f_2 + e_1, f_1 ↦ f_1 + e_2
        assert_eq!(d.column(3), vec![1, 0, 0, 1]);
        assert_eq!(d.column(1), vec![0, 1, 1, 0]);
        assert_eq!(d.column(0), vec![1, 0, 0, 0]);
        for m in g.c.iter().chain(g.d.values()).chain(&g.u) {
            assert!(m.is_symplectic());
        }
    }

    #[test]
    fn evaluation_basics() {
        let g = gen_images(1, 3);
        assert!(evaluate_word(&g, &Word::new()).unwrap().is_identity());
        let c4 = Word(vec![GenToken::C { t: 1, exp: 4 }]);
        assert!(evaluate_word(&g, &c4).unwrap().is_identity());
        let bad = Word(vec![GenToken::D { s: 1, t: 2, exp: 1 }]);
        assert!(matches!(evaluate_word(&g, &bad), Err(SymplecticError::UndefinedToken(_))));
    }

    #[test]
    fn free_reduction_preserves_value() {
        let g = gen_images(2, 5);
        for seed in 0..20 {
            let w = random_word(2, 5, seed, 30);
            let padded = w.concat(&w.inverse(5)).concat(&w);
            assert!(padded.normalized(5).len() <= padded.len());
            assert_eq!(evaluate_word(&g, &padded).unwrap(), evaluate_word(&g, &w).unwrap());
            assert_eq!(evaluate_word(&g, &padded.normalized(5)).unwrap(), evaluate_word(&g, &w).unwrap());
            assert!(w.concat(&w.inverse(5)).normalized(5).is_empty());
        }
    }

    #[test]
    fn normalization() {
        let w = Word(vec![
            GenToken::C { t: 1, exp: 3 },
            GenToken::C { t: 1, exp: 1 },
            GenToken::U { t: 1, exp: -1 },
            GenToken::D { s: 2, t: 1, exp: 6 },
        ]);
        assert_eq!(w.normalized(5).0, vec![GenToken::U { t: 1, exp: 4 }, GenToken::D { s: 1, t: 2, exp: 1 }]);
    }

    #[test]
    fn token_json() {
        let w = Word(vec![GenToken::D { s: 1, t: 2, exp: 2 }, GenToken::C { t: 1, exp: 1 }]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"[{"gen":"D","s":1,"t":2,"exp":2},{"gen":"C","t":1,"exp":1}]"#);
        assert_eq!(serde_json::from_str::<Word>(&s).unwrap(), w);
    }

    #[test]
    fn random_elements() {
        assert_eq!(random_element(2, 3, 7), random_element(2, 3, 7));
        assert!(random_element(3, 5, 1).is_symplectic());
        let hit: HashSet<SpMatrix> = (0..10_000).map(|seed| random_element(1, 3, seed)).collect();
        assert_eq!(hit.len(), 24);
    }
}
