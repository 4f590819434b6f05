use crate::field::Field;

use super::LinopsError;

/// Row-major matrix over an exact field. The field itself is passed to each
/// arithmetic method.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> DenseMatrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut entry: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(entry(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(n_rows: usize, columns: &[Vec<E>]) -> Self {
        Self::from_fn(n_rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Field<Elem = E>>(&self, f: &F, g: impl Fn(&F, &E) -> E) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| g(f, x)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        self.map(f, |f, x| f.mul(c, x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        f.is_one(x)
                    } else {
                        f.is_zero(x)
                    }
                })
            })
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, LinopsError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinopsError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn matmul<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self, LinopsError> {
        if self.cols != other.rows {
            return Err(LinopsError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let row = other.row(k);
                for (j, b) in row.iter().enumerate() {
                    if !f.is_zero(b) {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<Vec<E>, LinopsError> {
        if v.len() != self.cols {
            return Err(LinopsError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, x)| {
                    if f.is_zero(a) || f.is_zero(x) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, x))
                    }
                })
            })
            .collect())
    }

    pub fn trace<F: Field<Elem = E>>(&self, f: &F) -> Result<E, LinopsError> {
        self.require_square()?;
        Ok((0..self.rows).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i))))
    }

    fn require_square(&self) -> Result<(), LinopsError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinopsError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det<F: Field<Elem = E>>(&self, f: &F) -> Result<E, LinopsError> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&i| !f.is_zero(m.get(i, col))) else {
                return Ok(f.zero());
            };
            if piv != col {
                m.swap_rows(piv, col);
                det = f.neg(&det);
            }
            let p = m.get(col, col).clone();
            det = f.mul(&det, &p);
            let p_inv = f.inv(&p).expect("nonzero pivot");
            for i in col + 1..n {
                let factor = f.mul(m.get(i, col), &p_inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse<F: Field<Elem = E>>(&self, f: &F) -> Result<Self, LinopsError> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(f, n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&i| !f.is_zero(m.get(i, col)))
                .ok_or(LinopsError::SingularMatrix)?;
            m.swap_rows(piv, col);
            inv.swap_rows(piv, col);
            let p_inv = f.inv(m.get(col, col)).expect("nonzero pivot");
            m.scale_row(f, col, &p_inv);
            inv.scale_row(f, col, &p_inv);
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = m.get(i, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                m.axpy_row(f, i, col, &factor);
                inv.axpy_row(f, i, col, &factor);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row<F: Field<Elem = E>>(&mut self, f: &F, i: usize, c: &E) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = f.mul(c, &self.data[idx]);
        }
    }

    /// `row[target] −= c · row[source]`.
    fn axpy_row<F: Field<Elem = E>>(&mut self, f: &F, target: usize, source: usize, c: &E) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if f.is_zero(s) {
                continue;
            }
            let v = f.sub(&self.data[target * self.cols + j], &f.mul(c, s));
            self.data[target * self.cols + j] = v;
        }
    }

    /// Row-major nested arrays of encoded field elements.
    pub fn encode<F: Field<Elem = E>>(&self, f: &F) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(|x| f.encode(x)).collect()))
                .collect(),
        )
    }
}

/// Kronecker product; `left` indexes the more significant part of the flat
/// index.
pub fn kron<F: Field>(
    f: &F,
    left: &DenseMatrix<F::Elem>,
    right: &DenseMatrix<F::Elem>,
) -> DenseMatrix<F::Elem> {
    let (rr, rc) = (right.rows, right.cols);
    DenseMatrix::from_fn(left.rows * rr, left.cols * rc, |i, j| {
        f.mul(left.get(i / rr, j / rc), right.get(i % rr, j % rc))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CyclotomicField, PrimeField};
    use proptest::prelude::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(3, p).unwrap()
    }

    fn mat(f: &PrimeField, rows: &[&[i64]]) -> DenseMatrix<u64> {
        DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect())
    }

    #[test]
    fn identity_det_and_trace() {
        let f = gf(7);
        for n in 0..5 {
            let id = DenseMatrix::identity(&f, n);
            assert_eq!(id.det(&f).unwrap(), 1);
            assert_eq!(id.trace(&f).unwrap(), n as u64 % 7);
        }
    }

    #[test]
    fn singular_inverse() {
        let f = gf(7);
        let m = mat(&f, &[&[1, 2], &[2, 4]]);
        assert_eq!(m.det(&f).unwrap(), 0);
        assert_eq!(m.inverse(&f), Err(LinopsError::SingularMatrix));
        let r = mat(&f, &[&[1, 2, 3]]);
        assert!(matches!(r.det(&f), Err(LinopsError::NotSquare { .. })));
    }

    #[test]
    fn kron_identity_unit() {
        let f = gf(7);
        let m = mat(&f, &[&[1, 2], &[3, 4]]);
        let one = DenseMatrix::identity(&f, 1);
        assert_eq!(kron(&f, &one, &m), m);
        assert_eq!(kron(&f, &m, &one), m);
    }

    #[test]
    fn cyclotomic_inverse() {
        let f = CyclotomicField::new(3);
        let t = f.theta();
        let m = DenseMatrix::from_rows(vec![
            vec![f.one(), t.clone()],
            vec![f.mul(&t, &t), f.from_int(5)],
        ]);
        let prod = m.inverse(&f).unwrap().matmul(&f, &m).unwrap();
        assert!(prod.is_identity(&f));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0i64..13, n * n)
    }

    fn from_flat(f: &PrimeField, n: usize, v: &[i64]) -> DenseMatrix<u64> {
        DenseMatrix::from_fn(n, n, |i, j| f.from_int(v[i * n + j]))
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in arb_matrix(4), b in arb_matrix(4)) {
            let f = gf(13);
            let (a, b) = (from_flat(&f, 4, &a), from_flat(&f, 4, &b));
            let ab = a.matmul(&f, &b).unwrap();
            prop_assert_eq!(ab.det(&f).unwrap(), f.mul(&a.det(&f).unwrap(), &b.det(&f).unwrap()));
        }

        #[test]
        fn kron_is_associative(a in arb_matrix(2), b in arb_matrix(2), c in arb_matrix(3)) {
            let f = gf(13);
            let (a, b, c) = (from_flat(&f, 2, &a), from_flat(&f, 2, &b), from_flat(&f, 3, &c));
            prop_assert_eq!(kron(&f, &kron(&f, &a, &b), &c), kron(&f, &a, &kron(&f, &b, &c)));
        }

        #[test]
        fn inverse_contract(a in arb_matrix(4)) {
            let f = gf(13);
            let a = from_flat(&f, 4, &a);
            match a.inverse(&f) {
                Ok(inv) => {
                    prop_assert!(inv.matmul(&f, &a).unwrap().is_identity(&f));
                    prop_assert!(a.det(&f).unwrap() != 0);
                }
                Err(e) => {
                    prop_assert_eq!(e, LinopsError::SingularMatrix);
                    prop_assert_eq!(a.det(&f).unwrap(), 0);
                }
            }
        }
    }
}
