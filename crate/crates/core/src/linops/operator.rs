use crate::field::Field;

use super::{DenseMatrix, IndexSpace, LinopsError};

/// `v_ξ ↦ d(ξ) · v_{φ(ξ)}` with `φ(ξ)_t = ±ξ_t + b_t` (sign chosen per slot).
///
/// Covers `A_t`, `B_t`, `D_{st}`, `E_t`, `U_t`, the involution `σ`, and every
/// element of the extraspecial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial<E> {
    space: IndexSpace,
    negate: Vec<bool>,
    shift: Vec<u64>,
    target: Vec<usize>,
    diag: Vec<E>,
}

impl<E: Clone> Monomial<E> {
    /// `diag[ξ]` is the coefficient of the image of `v_ξ`.
    pub fn new(space: IndexSpace, negate: Vec<bool>, shift: Vec<u64>, diag: Vec<E>) -> Self {
        assert_eq!(negate.len(), space.ell());
        assert_eq!(shift.len(), space.ell());
        assert_eq!(diag.len(), space.dim());
        let r = space.r();
        let target = space
            .indices()
            .map(|idx| {
                let xi: Vec<u64> = space
                    .unflat(idx)
                    .iter()
                    .zip(negate.iter().zip(&shift))
                    .map(|(&x, (&neg, &b))| (if neg { r - x } else { x } + b) % r)
                    .collect();
                space.flat(&xi)
            })
            .collect();
        Monomial { space, negate, shift, target, diag }
    }

    pub fn diagonal(space: IndexSpace, diag: Vec<E>) -> Self {
        let ell = space.ell();
        Self::new(space, vec![false; ell], vec![0; ell], diag)
    }

    pub fn permutation<F: Field<Elem = E>>(f: &F, space: IndexSpace, negate: Vec<bool>, shift: Vec<u64>) -> Self {
        let diag = vec![f.one(); space.dim()];
        Self::new(space, negate, shift, diag)
    }

    pub fn space(&self) -> IndexSpace {
        self.space
    }

    pub fn target(&self, idx: usize) -> usize {
        self.target[idx]
    }

    pub fn coefficient(&self, idx: usize) -> &E {
        &self.diag[idx]
    }

    pub fn negate(&self) -> &[bool] {
        &self.negate
    }

    pub fn shift(&self) -> &[u64] {
        &self.shift
    }

    pub fn is_diagonal(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `self ∘ inner`.
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, inner: &Self) -> Self {
        assert_eq!(self.space, inner.space);
        let r = self.space.r();
        let negate = self.negate.iter().zip(&inner.negate).map(|(a, b)| a ^ b).collect();
        let shift = self
            .shift
            .iter()
            .zip(&self.negate)
            .zip(&inner.shift)
            .map(|((&b1, &n1), &b2)| (if n1 { (r - b2) % r } else { b2 } + b1) % r)
            .collect();
        let diag = (0..self.space.dim())
            .map(|i| f.mul(&inner.diag[i], &self.diag[inner.target[i]]))
            .collect();
        let out = Self::new(self.space, negate, shift, diag);
        debug_assert!((0..self.space.dim()).all(|i| out.target[i] == self.target[inner.target[i]]));
        out
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, LinopsError> {
        let r = self.space.r();
        // φ^{-1}(η)_t = ε_t (η_t − b_t)
        let shift = self
            .shift
            .iter()
            .zip(&self.negate)
            .map(|(&b, &neg)| if neg { b % r } else { (r - b % r) % r })
            .collect();
        let mut diag = vec![f.zero(); self.space.dim()];
        for (src, &dst) in self.target.iter().enumerate() {
            diag[dst] = f.inv(&self.diag[src]).ok_or(LinopsError::SingularMatrix)?;
        }
        Ok(Self::new(self.space, self.negate.clone(), shift, diag))
    }

    fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut out = vec![f.zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            if !f.is_zero(x) {
                out[self.target[i]] = f.mul(&self.diag[i], x);
            }
        }
        out
    }

    fn permutation_sign(&self) -> bool {
        let n = self.target.len();
        let mut seen = vec![false; n];
        let mut odd = false;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.target[i];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        odd
    }
}

/// `scale · (I ⊗ C ⊗ I)` with `C` acting on tensor slot `slot`:
/// `C v_ξ = Σ_i θ^{iξ} v_i`. With `conjugate` set the entries are `θ^{−iξ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fourier<E> {
    pub space: IndexSpace,
    pub slot: usize,
    pub scale: E,
    pub conjugate: bool,
}

impl<E: Clone> Fourier<E> {
    fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let r = self.space.r() as usize;
        let stride = self.space.stride(self.slot);
        let block = stride * r;
        let sign: i64 = if self.conjugate { -1 } else { 1 };
        let powers: Vec<E> = (0..r as i64).map(|k| f.mul(&self.scale, &f.theta_pow(sign * k))).collect();
        let mut out = vec![f.zero(); v.len()];
        for hi in (0..v.len()).step_by(block) {
            for lo in 0..stride {
                let base = hi + lo;
                for i in 0..r {
                    let mut acc = f.zero();
                    for j in 0..r {
                        let x = &v[base + j * stride];
                        if !f.is_zero(x) {
                            acc = f.add(&acc, &f.mul(&powers[(i * j) % r], x));
                        }
                    }
                    out[base + i * stride] = acc;
                }
            }
        }
        out
    }

    /// The `r × r` factor (without `scale`).
    fn factor<F: Field<Elem = E>>(&self, f: &F) -> DenseMatrix<E> {
        let r = self.space.r() as usize;
        let sign: i64 = if self.conjugate { -1 } else { 1 };
        DenseMatrix::from_fn(r, r, |i, j| f.theta_pow(sign * (i * j) as i64))
    }
}

/// A linear operator on `W`, kept in factored form where possible.
///
/// `Product(vec![a, b, c])` is `a · b · c` (so `c` acts first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operator<E> {
    Monomial(Monomial<E>),
    Fourier(Fourier<E>),
    Scalar { dim: usize, c: E },
    Dense(DenseMatrix<E>),
    Product { dim: usize, factors: Vec<Operator<E>> },
}

impl<E: Clone> Operator<E> {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Monomial(m) => m.space.dim(),
            Operator::Fourier(c) => c.space.dim(),
            Operator::Scalar { dim, .. } | Operator::Product { dim, .. } => *dim,
            Operator::Dense(m) => m.rows(),
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, dim: usize) -> Self {
        Operator::Scalar { dim, c: f.one() }
    }

    /// Ordered product `ops[0] · ops[1] · …`; nested products are flattened.
    pub fn product(dim: usize, ops: impl IntoIterator<Item = Operator<E>>) -> Self {
        let mut factors = Vec::new();
        for op in ops {
            assert_eq!(op.dim(), dim, "operator dimension");
            match op {
                Operator::Product { factors: inner, .. } => factors.extend(inner),
                other => factors.push(other),
            }
        }
        if factors.len() == 1 {
            return factors.pop().unwrap();
        }
        Operator::Product { dim, factors }
    }

    /// `c · self`.
    pub fn scaled<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        match self {
            Operator::Fourier(four) => Operator::Fourier(Fourier { scale: f.mul(c, &four.scale), ..four.clone() }),
            Operator::Scalar { dim, c: d } => Operator::Scalar { dim: *dim, c: f.mul(c, d) },
            Operator::Monomial(m) => {
                let diag = m.diag.iter().map(|d| f.mul(c, d)).collect();
                Operator::Monomial(Monomial { diag, ..m.clone() })
            }
            Operator::Dense(m) => Operator::Dense(m.scale(f, c)),
            Operator::Product { dim, factors } => {
                let mut factors = factors.clone();
                factors.insert(0, Operator::Scalar { dim: *dim, c: c.clone() });
                Operator::Product { dim: *dim, factors }
            }
        }
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<Vec<E>, LinopsError> {
        if v.len() != self.dim() {
            return Err(LinopsError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(self.apply_unchecked(f, v))
    }

    fn apply_unchecked<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        match self {
            Operator::Monomial(m) => m.apply(f, v),
            Operator::Fourier(c) => c.apply(f, v),
            Operator::Scalar { c, .. } => v.iter().map(|x| f.mul(c, x)).collect(),
            Operator::Dense(m) => m.mul_vec(f, v).expect("checked dimension"),
            Operator::Product { factors, .. } => {
                let mut w = v.to_vec();
                for op in factors.iter().rev() {
                    w = op.apply_unchecked(f, &w);
                }
                w
            }
        }
    }

    /// Dense matrix whose column `ξ` is the image of `v_ξ`.
    pub fn materialize<F: Field<Elem = E>>(&self, f: &F) -> DenseMatrix<E> {
        let n = self.dim();
        match self {
            Operator::Dense(m) => m.clone(),
            Operator::Monomial(m) => {
                let mut out = DenseMatrix::zeros(f, n, n);
                for j in 0..n {
                    out.set(m.target[j], j, m.diag[j].clone());
                }
                out
            }
            Operator::Scalar { c, .. } => DenseMatrix::identity(f, n).scale(f, c),
            _ => {
                let columns: Vec<Vec<E>> = (0..n)
                    .map(|j| {
                        let mut e = vec![f.zero(); n];
                        e[j] = f.one();
                        self.apply_unchecked(f, &e)
                    })
                    .collect();
                DenseMatrix::from_columns(n, &columns)
            }
        }
    }

    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, LinopsError> {
        Ok(match self {
            Operator::Monomial(m) => Operator::Monomial(m.inverse(f)?),
            // C^{-1} = r^{-1} · conj(C), from C · conj(C) = r · I
            Operator::Fourier(c) => {
                let r = f.from_int(c.space.r() as i64);
                let scale = f.inv(&f.mul(&c.scale, &r)).ok_or(LinopsError::SingularMatrix)?;
                Operator::Fourier(Fourier { scale, conjugate: !c.conjugate, ..c.clone() })
            }
            Operator::Scalar { dim, c } => Operator::Scalar {
                dim: *dim,
                c: f.inv(c).ok_or(LinopsError::SingularMatrix)?,
            },
            Operator::Dense(m) => Operator::Dense(m.inverse(f)?),
            Operator::Product { dim, factors } => Operator::Product {
                dim: *dim,
                factors: factors.iter().rev().map(|op| op.inverse(f)).collect::<Result<_, _>>()?,
            },
        })
    }

    /// `self^n`; negative `n` uses the inverse.
    pub fn pow<F: Field<Elem = E>>(&self, f: &F, n: i64) -> Result<Self, LinopsError> {
        let base = if n < 0 { self.inverse(f)? } else { self.clone() };
        let k = n.unsigned_abs() as usize;
        if k == 0 {
            return Ok(Self::identity(f, self.dim()));
        }
        if let Operator::Monomial(m) = &base {
            let mut acc = m.clone();
            for _ in 1..k {
                acc = acc.compose(f, m);
            }
            return Ok(Operator::Monomial(acc));
        }
        Ok(Self::product(self.dim(), std::iter::repeat_n(base, k)))
    }

    /// Determinant, computed structurally: `sign(φ) · ∏ d(ξ)` for monomial
    /// operators and `scale^N · det(C)^{N/r}` for Fourier factors.
    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> Result<E, LinopsError> {
        let n = self.dim() as u64;
        Ok(match self {
            Operator::Monomial(m) => {
                let prod = m.diag.iter().fold(f.one(), |acc, d| f.mul(&acc, d));
                if m.permutation_sign() {
                    f.neg(&prod)
                } else {
                    prod
                }
            }
            Operator::Fourier(c) => {
                let r = c.space.r();
                let small = c.factor(f).det(f)?;
                f.mul(&f.pow(&c.scale, n), &f.pow(&small, n / r))
            }
            Operator::Scalar { c, .. } => f.pow(c, n),
            Operator::Dense(m) => m.det(f)?,
            Operator::Product { factors, .. } => {
                let mut acc = f.one();
                for op in factors {
                    acc = f.mul(&acc, &op.det(f)?);
                }
                acc
            }
        })
    }

    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> E {
        match self {
            Operator::Monomial(m) => (0..m.target.len())
                .filter(|&i| m.target[i] == i)
                .fold(f.zero(), |acc, i| f.add(&acc, &m.diag[i])),
            Operator::Fourier(c) => {
                let r = c.space.r() as i64;
                let sign = if c.conjugate { -1 } else { 1 };
                let gauss = (0..r).fold(f.zero(), |acc, i| f.add(&acc, &f.theta_pow(sign * i * i)));
                let copies = f.from_int((c.space.dim() as u64 / c.space.r()) as i64);
                f.mul(&f.mul(&c.scale, &copies), &gauss)
            }
            Operator::Scalar { dim, c } => f.mul(c, &f.from_int(*dim as i64)),
            Operator::Dense(m) => m.trace(f).expect("square"),
            Operator::Product { .. } => self.materialize(f).trace(f).expect("square"),
        }
    }

    /// Exact equality of the underlying linear maps.
    pub fn equals<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool
    where
        E: PartialEq,
    {
        if self.dim() != other.dim() {
            return false;
        }
        if let (Operator::Monomial(a), Operator::Monomial(b)) = (self, other) {
            return a.target == b.target && a.diag == b.diag;
        }
        self.materialize(f) == other.materialize(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, PrimeField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf7() -> PrimeField {
        PrimeField::new(3, 7).unwrap()
    }

    fn fourier(f: &PrimeField, space: IndexSpace, slot: usize) -> Operator<u64> {
        Operator::Fourier(Fourier { space, slot, scale: f.one(), conjugate: false })
    }

    #[test]
    fn fourier_on_basis_vector() {
        let f = gf7();
        let c = fourier(&f, IndexSpace::new(3, 1), 1);
        assert_eq!(c.apply(&f, &[0, 1, 0]).unwrap(), vec![1, 2, 4]);
        assert!(matches!(c.apply(&f, &[0, 1]), Err(LinopsError::DimensionMismatch { .. })));
        // C has det 6 over GF(7) with θ = 2
        assert_eq!(c.det(&f).unwrap(), 6);
        assert_eq!(c.materialize(&f).det(&f).unwrap(), 6);
    }

    #[test]
    fn fourier_inverse_and_square() {
        let f = gf7();
        let space = IndexSpace::new(3, 2);
        for slot in 1..=2 {
            let c = fourier(&f, space, slot);
            let prod = Operator::product(9, [c.inverse(&f).unwrap(), c.clone()]);
            assert!(prod.materialize(&f).is_identity(&f));
        }
    }

    #[test]
    fn shift_and_negation() {
        let f = gf7();
        let space = IndexSpace::new(3, 1);
        let b = Monomial::permutation(&f, space, vec![false], vec![1]);
        assert_eq!(Operator::Monomial(b.clone()).apply(&f, &[1, 0, 0]).unwrap(), vec![0, 1, 0]);
        let sigma = Monomial::permutation(&f, space, vec![true], vec![0]);
        assert_eq!(sigma.target(1), 2);
        assert_eq!(sigma.target(0), 0);
        // σBσ = B^{-1}
        let conj = sigma.compose(&f, &b).compose(&f, &sigma);
        assert_eq!(conj, b.inverse(&f).unwrap());
        assert_eq!(Operator::Monomial(sigma).det(&f).unwrap(), 6);
    }

    fn random_monomial(f: &PrimeField, space: IndexSpace, rng: &mut ChaCha8Rng) -> Monomial<u64> {
        let ell = space.ell();
        let negate = (0..ell).map(|_| rng.gen_bool(0.5)).collect();
        let shift = (0..ell).map(|_| rng.gen_range(0..space.r())).collect();
        let diag = (0..space.dim()).map(|_| rng.gen_range(1..7)).collect();
        let _ = f;
        Monomial::new(space, negate, shift, diag)
    }

    #[test]
    fn apply_matches_materialize_and_det() {
        let f = gf7();
        let space = IndexSpace::new(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m1 = random_monomial(&f, space, &mut rng);
            let m2 = random_monomial(&f, space, &mut rng);
            let ops = vec![
                Operator::Monomial(m1.clone()),
                fourier(&f, space, 2).scaled(&f, &3),
                Operator::Monomial(m2.clone()),
                fourier(&f, space, 1),
            ];
            let prod = Operator::product(9, ops.clone());
            let dense = ops
                .iter()
                .map(|op| op.materialize(&f))
                .reduce(|a, b| a.matmul(&f, &b).unwrap())
                .unwrap();
            assert_eq!(prod.materialize(&f), dense);
            for _ in 0..20 {
                let v: Vec<u64> = (0..9).map(|_| rng.gen_range(0..7)).collect();
                assert_eq!(prod.apply(&f, &v).unwrap(), dense.mul_vec(&f, &v).unwrap());
            }
            assert_eq!(prod.det(&f).unwrap(), dense.det(&f).unwrap());
            assert_eq!(prod.trace(&f), dense.trace(&f).unwrap());
            for op in &ops {
                assert_eq!(op.det(&f).unwrap(), op.materialize(&f).det(&f).unwrap());
                assert_eq!(op.trace(&f), op.materialize(&f).trace(&f).unwrap());
            }
            let composed = Operator::Monomial(m1.compose(&f, &m2));
            let explicit = Operator::product(9, [Operator::Monomial(m1.clone()), Operator::Monomial(m2.clone())]);
            assert!(composed.equals(&f, &explicit));
            let inv = Operator::Monomial(m1.inverse(&f).unwrap());
            assert!(Operator::product(9, [inv, Operator::Monomial(m1)]).materialize(&f).is_identity(&f));
        }
    }

    #[test]
    fn scalar_identity_materializes() {
        let f = PrimeField::new(3, 7).unwrap();
        assert!(Operator::identity(&f, 9).materialize(&f).is_identity(&f));
        let s = Operator::Scalar { dim: 3, c: 5 };
        assert_eq!(s.apply(&f, &[1, 2, 3]).unwrap(), vec![5, 3, 1]);
    }
}
