use super::word::{evaluate_word, GenToken, Word, WordTarget};
use super::{decompose, SpMatrix, SymplecticError};
use crate::field::Field;
use crate::linops::{DenseMatrix, Operator};
use crate::weilgen::WeilGeneratorSet;

/// Tokens evaluate to `λC_t`, `D_{st}`, `U_t` as structured operators.
impl<F: Field> WordTarget for WeilGeneratorSet<F> {
    type Value = Operator<F::Elem>;

    fn r(&self) -> u64 {
        self.params.r()
    }

    fn identity(&self) -> Self::Value {
        Operator::identity(self.field(), self.dim())
    }

    fn power(&self, token: &GenToken) -> Option<Self::Value> {
        let base = match *token {
            GenToken::C { t, .. } => self.lam_c.get(t.checked_sub(1)?)?,
            GenToken::D { s, t, .. } => self.d.get(&(s, t))?,
            GenToken::U { t, .. } => self.u.get(t.checked_sub(1)?)?,
        };
        base.pow(self.field(), token.exp()).ok()
    }

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        let f = self.field();
        match a {
            Operator::Scalar { c, .. } if f.is_one(c) => b.clone(),
            _ => Operator::product(self.dim(), [a.clone(), b.clone()]),
        }
    }
}

/// The preimage of `g` in `G = ⟨λC_t, D_{st}, U_t⟩`, as a structured
/// operator, together with the word used to build it.
pub fn weil_operator<F: Field>(
    g: &SpMatrix,
    gens: &WeilGeneratorSet<F>,
) -> Result<(Word, Operator<F::Elem>), SymplecticError> {
    let (r, ell) = (gens.params.r(), gens.params.ell());
    if g.r() != r || g.ell() != ell {
        return Err(SymplecticError::Shape { expected: 2 * ell, got: g.size() * g.size() });
    }
    let word = decompose(g)?;
    let op = evaluate_word(gens, &word)?;
    Ok((word, op))
}

/// Dense matrix of [`weil_operator`].
pub fn weil_image<F: Field>(g: &SpMatrix, gens: &WeilGeneratorSet<F>) -> Result<DenseMatrix<F::Elem>, SymplecticError> {
    let (_, op) = weil_operator(g, gens)?;
    Ok(op.materialize(gens.field()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CyclotomicField, PrimeField};
    use crate::symplectic::{gen_images, random_element};
    use crate::weilgen::WeilParams;

    #[test]
    fn identity_and_generators() {
        let f = CyclotomicField::new(3);
        let gens = WeilGeneratorSet::new(&WeilParams::new(f.clone(), 1).unwrap());
        let images = gen_images(1, 3);
        assert!(weil_image(&SpMatrix::identity(3, 1), &gens).unwrap().is_identity(&f));
        let u = weil_image(&images.u[0], &gens).unwrap();
        assert_eq!(u, gens.u[0].materialize(&f));
        let t2 = f.theta_pow(2);
        assert_eq!((u.get(1, 1), u.get(2, 2)), (&t2, &t2));

        let p = PrimeField::new(3, 7).unwrap();
        let gens = WeilGeneratorSet::new(&WeilParams::new(p.clone(), 1).unwrap());
        let c = weil_image(&images.c[0], &gens).unwrap();
        assert_eq!(c, gens.c[0].materialize(&p).scale(&p, &3));
    }

    #[test]
    fn homomorphism_and_word_independence() {
        let f = PrimeField::new(5, 11).unwrap();
        let gens = WeilGeneratorSet::new(&WeilParams::new(f.clone(), 1).unwrap());
        let images = gen_images(1, 5);
        for seed in 0..20 {
            let g = random_element(1, 5, seed);
            let h = random_element(1, 5, seed + 500);
            let wg = weil_image(&g, &gens).unwrap();
            let wh = weil_image(&h, &gens).unwrap();
            assert_eq!(weil_image(&g.mul(&h), &gens).unwrap(), wg.matmul(&f, &wh).unwrap());
            let alt = crate::symplectic::decompose_randomized(&g, seed).unwrap();
            assert_eq!(evaluate_word(&images, &alt).unwrap(), g);
            assert_eq!(evaluate_word(&gens, &alt).unwrap().materialize(&f), wg);
        }
    }

    #[test]
    fn rank_mismatch() {
        let f = PrimeField::new(3, 7).unwrap();
        let gens = WeilGeneratorSet::new(&WeilParams::new(f, 2).unwrap());
        assert!(weil_image(&SpMatrix::identity(3, 1), &gens).is_err());
    }
}
