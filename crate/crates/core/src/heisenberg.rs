//! The extraspecial group `R = ⟨A_t, B_t⟩` of order `r^{1+2ℓ}`, recognition
//! of its elements among matrices, and the projection `π` from the
//! normalizer of `R` to `Sp_{2ℓ}(r)`.
//!
//! `(c, a, b)` stands for `θ^c B^b A^a: v_ξ ↦ θ^{c + a·ξ} v_{ξ+b}`, so
//! `(c₁,a₁,b₁)(c₂,a₂,b₂) = (c₁ + c₂ + a₁·b₂, a₁ + a₂, b₁ + b₂)`.

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::linops::{DenseMatrix, IndexSpace, Monomial, Operator};
use crate::symplectic::{e_index, f_index, SpMatrix};
use crate::weilgen::WeilParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("matrix is not {0}x{0}")]
    Shape(usize),
    #[error("column {column} does not have exactly one nonzero entry")]
    NotMonomial { column: usize },
    #[error("support is not a translation of the index set (column {column})")]
    NotTranslation { column: usize },
    #[error("entries do not form a character theta^(c + a.xi) (at column {column})")]
    NotCharacterDiagonal { column: usize },
    #[error("scalar is not a power of theta")]
    NotThetaPower,
    #[error("conjugate of {generator} is not in R modulo scalars: {reason}")]
    DoesNotNormalize { generator: String, reason: Box<HeisenbergError> },
}

/// `θ^c B^b A^a`, residues mod `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExtraspecialElement {
    #[serde(skip)]
    pub r: u64,
    pub c: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl ExtraspecialElement {
    pub fn new(r: u64, c: u64, a: Vec<u64>, b: Vec<u64>) -> Self {
        assert_eq!(a.len(), b.len(), "a and b lengths");
        let red = |v: Vec<u64>| v.into_iter().map(|x| x % r).collect();
        ExtraspecialElement { r, c: c % r, a: red(a), b: red(b) }
    }

    pub fn identity(r: u64, ell: usize) -> Self {
        Self::new(r, 0, vec![0; ell], vec![0; ell])
    }

    pub fn central(r: u64, ell: usize, c: u64) -> Self {
        Self::new(r, c, vec![0; ell], vec![0; ell])
    }

    /// `A_t`.
    pub fn a_gen(r: u64, ell: usize, t: usize) -> Self {
        let mut x = Self::identity(r, ell);
        x.a[t - 1] = 1;
        x
    }

    /// `B_t`.
    pub fn b_gen(r: u64, ell: usize, t: usize) -> Self {
        let mut x = Self::identity(r, ell);
        x.b[t - 1] = 1;
        x
    }

    pub fn ell(&self) -> usize {
        self.a.len()
    }

    fn dot(&self, u: &[u64], v: &[u64]) -> u64 {
        u.iter().zip(v).map(|(x, y)| x * y).sum::<u64>() % self.r
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.r;
        let c = self.c + other.c + self.dot(&self.a, &other.b);
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect();
        Self::new(r, c, a, b)
    }

    pub fn inv(&self) -> Self {
        let r = self.r;
        let neg = |v: &[u64]| v.iter().map(|x| (r - x) % r).collect();
        // (c, a, b)(c', −a, −b) has central part c + c' − a·b
        let c = (r - self.c + self.dot(&self.a, &self.b)) % r;
        Self::new(r, c, neg(&self.a), neg(&self.b))
    }

    pub fn is_central(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&x| x == 0)
    }

    /// Coordinates of the image in `R/Z(R)` in the hyperbolic basis
    /// (`e_t ↔ A_t`, `f_t ↔ B_t`).
    pub fn symplectic_vector(&self) -> Vec<u64> {
        let mut v = vec![0; 2 * self.ell()];
        for t in 1..=self.ell() {
            v[e_index(t)] = self.a[t - 1];
            v[f_index(t)] = self.b[t - 1];
        }
        v
    }

    pub fn to_operator<F: Field>(&self, f: &F, space: IndexSpace) -> Operator<F::Elem> {
        let diag = space
            .indices()
            .map(|idx| {
                let xi = space.unflat(idx);
                f.theta_pow((self.c + self.dot(&self.a, &xi)) as i64)
            })
            .collect();
        Operator::Monomial(Monomial::new(space, vec![false; space.ell()], self.b.clone(), diag))
    }
}

/// `a_x·b_y − a_y·b_x mod r`: the exponent of `θ` in `[x, y]`.
pub fn comm_exponent(x: &ExtraspecialElement, y: &ExtraspecialElement) -> u64 {
    let r = x.r;
    (x.dot(&x.a, &y.b) + r - x.dot(&y.a, &x.b)) % r
}

/// Writes `m = s · B^b A^a` for a scalar `s`; returns `s` and `(0, a, b)`.
pub fn recognize_modulo_scalars<F: Field>(
    m: &DenseMatrix<F::Elem>,
    params: &WeilParams<F>,
) -> Result<(F::Elem, ExtraspecialElement), HeisenbergError> {
    let f = params.field();
    let space = params.space();
    let (n, r, ell) = (space.dim(), space.r(), space.ell());
    if m.rows() != n || m.cols() != n {
        return Err(HeisenbergError::Shape(n));
    }
    let mut target = vec![0usize; n];
    for (j, slot) in target.iter_mut().enumerate() {
        let mut nonzero = (0..n).filter(|&i| !f.is_zero(m.get(i, j)));
        match (nonzero.next(), nonzero.next()) {
            (Some(i), None) => *slot = i,
            _ => return Err(HeisenbergError::NotMonomial { column: j }),
        }
    }
    let b = space.unflat(target[0]);
    for (j, &i) in target.iter().enumerate() {
        let shifted: Vec<u64> = space.unflat(j).iter().zip(&b).map(|(x, y)| (x + y) % r).collect();
        if space.flat(&shifted) != i {
            return Err(HeisenbergError::NotTranslation { column: j });
        }
    }
    let coeff = |j: usize| m.get(target[j], j);
    let scalar = coeff(0).clone();
    let s_inv = f.inv(&scalar).expect("nonzero");
    let mut a = vec![0u64; ell];
    for t in 1..=ell {
        let j = space.stride(t);
        a[t - 1] = f
            .theta_log(&f.mul(&s_inv, coeff(j)))
            .ok_or(HeisenbergError::NotCharacterDiagonal { column: j })?;
    }
    let x = ExtraspecialElement::new(r, 0, a, b);
    for j in space.indices() {
        let xi = space.unflat(j);
        let expect = f.mul(&scalar, &f.theta_pow(x.dot(&x.a, &xi) as i64));
        if *coeff(j) != expect {
            return Err(HeisenbergError::NotCharacterDiagonal { column: j });
        }
    }
    Ok((scalar, x))
}

/// `(c, a, b)` with `m = θ^c B^b A^a`.
pub fn recognize<F: Field>(
    m: &DenseMatrix<F::Elem>,
    params: &WeilParams<F>,
) -> Result<ExtraspecialElement, HeisenbergError> {
    let (scalar, mut x) = recognize_modulo_scalars(m, params)?;
    x.c = params.field().theta_log(&scalar).ok_or(HeisenbergError::NotThetaPower)?;
    Ok(x)
}

/// `π(n)`: column `e_t` (resp. `f_t`) holds the `(a, b)` part of
/// `n A_t n⁻¹` (resp. `n B_t n⁻¹`).
pub fn pi_map<F: Field>(n: &Operator<F::Elem>, params: &WeilParams<F>) -> Result<SpMatrix, HeisenbergError> {
    let f = params.field();
    let space = params.space();
    let (r, ell) = (space.r(), space.ell());
    if n.dim() != space.dim() {
        return Err(HeisenbergError::Shape(space.dim()));
    }
    let n_inv = n.inverse(f).map_err(|_| HeisenbergError::Shape(space.dim()))?;
    let mut pi = SpMatrix::identity(r, ell);
    for t in 1..=ell {
        for (name, gen, col) in [
            ("A", ExtraspecialElement::a_gen(r, ell, t), e_index(t)),
            ("B", ExtraspecialElement::b_gen(r, ell, t), f_index(t)),
        ] {
            let conj = Operator::product(space.dim(), [n.clone(), gen.to_operator(f, space), n_inv.clone()]);
            let fail = |e| HeisenbergError::DoesNotNormalize { generator: format!("{name}{t}"), reason: Box::new(e) };
            let (scalar, x) = recognize_modulo_scalars(&conj.materialize(f), params).map_err(fail)?;
            f.theta_log(&scalar).ok_or_else(|| fail(HeisenbergError::NotThetaPower))?;
            for (i, v) in x.symplectic_vector().into_iter().enumerate() {
                pi.set(i, col, v);
            }
        }
    }
    Ok(pi)
}
