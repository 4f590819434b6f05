use crate::field::Field;

/// Incrementally built semi-echelon basis of a subspace of `F^n`.
///
/// Each stored row has a pivot entry equal to one, and every row is zero at
/// the pivots of the rows inserted before it.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    n: usize,
    rows: Vec<Vec<E>>,
    pivots: Vec<usize>,
}

impl<E: Clone> Echelon<E> {
    pub fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    /// Reduces `v` against the basis; returns the residual and the
    /// coefficients used for every row.
    pub fn reduce<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> (Vec<E>, Vec<E>) {
        let mut w = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if !f.is_zero(&c) {
                for (x, y) in w.iter_mut().zip(row) {
                    if !f.is_zero(y) {
                        *x = f.sub(x, &f.mul(&c, y));
                    }
                }
            }
            coeffs.push(c);
        }
        (w, coeffs)
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        self.reduce(f, v).0.iter().all(|x| f.is_zero(x))
    }

    /// Adds `v` to the span. Returns `false` if it was already contained.
    pub fn insert<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> bool {
        self.insert_with_coeffs(f, v).is_some()
    }

    /// Like [`insert`](Self::insert), also returning the reduction
    /// coefficients and the pivot scale applied to the residual.
    fn insert_with_coeffs<F: Field<Elem = E>>(&mut self, f: &F, v: &[E]) -> Option<(Vec<E>, E)> {
        assert_eq!(v.len(), self.n, "vector length");
        let (mut w, coeffs) = self.reduce(f, v);
        let p = w.iter().position(|x| !f.is_zero(x))?;
        let inv = f.inv(&w[p]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(&inv, x);
        }
        self.rows.push(w);
        self.pivots.push(p);
        Some((coeffs, inv))
    }
}

/// Solves for coordinates with respect to a fixed (linearly independent)
/// list of vectors.
#[derive(Debug, Clone)]
pub struct SpanSolver<E> {
    echelon: Echelon<E>,
    /// `transform[i]` expresses echelon row `i` in the original basis.
    transform: Vec<Vec<E>>,
}

impl<E: Clone> SpanSolver<E> {
    /// `None` if `basis` is linearly dependent.
    pub fn new<F: Field<Elem = E>>(f: &F, n: usize, basis: &[Vec<E>]) -> Option<Self> {
        let d = basis.len();
        let mut echelon = Echelon::new(n);
        let mut transform: Vec<Vec<E>> = Vec::with_capacity(d);
        for (j, b) in basis.iter().enumerate() {
            let (coeffs, scale) = echelon.insert_with_coeffs(f, b)?;
            // new row = scale · (b_j − Σ_i coeffs[i] · row_i)
            let mut t = vec![f.zero(); d];
            t[j] = f.one();
            for (c, ti) in coeffs.iter().zip(&transform) {
                if f.is_zero(c) {
                    continue;
                }
                for (x, y) in t.iter_mut().zip(ti) {
                    *x = f.sub(x, &f.mul(c, y));
                }
            }
            for x in t.iter_mut() {
                *x = f.mul(&scale, x);
            }
            transform.push(t);
        }
        Some(SpanSolver { echelon, transform })
    }

    pub fn dim(&self) -> usize {
        self.transform.len()
    }

    /// Coordinates of `v` in the original basis, or `None` if `v` is not in
    /// the span.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        let (residual, coeffs) = self.echelon.reduce(f, v);
        if residual.iter().any(|x| !f.is_zero(x)) {
            return None;
        }
        let mut out = vec![f.zero(); self.dim()];
        for (c, t) in coeffs.iter().zip(&self.transform) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in out.iter_mut().zip(t) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn coordinates_recover_combination() {
        let f = PrimeField::new(3, 7).unwrap();
        let basis = vec![vec![1, 2, 0, 3], vec![0, 1, 1, 1], vec![2, 0, 5, 0]];
        let solver = SpanSolver::new(&f, 4, &basis).unwrap();
        let coeffs = [3u64, 5, 6];
        let v: Vec<u64> = (0..4)
            .map(|i| (0..3).fold(0, |acc, j| f.add(&acc, &f.mul(&coeffs[j], &basis[j][i]))))
            .collect();
        assert_eq!(solver.coordinates(&f, &v).unwrap(), coeffs.to_vec());
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = PrimeField::new(3, 7).unwrap();
        assert!(SpanSolver::new(&f, 2, &[vec![1, 2], vec![2, 4]]).is_none());
        let mut e = Echelon::new(2);
        assert!(e.insert(&f, &[1, 2]));
        assert!(!e.insert(&f, &[3, 6]));
        assert!(e.insert(&f, &[0, 1]));
        assert_eq!(e.dim(), 2);
    }
}
