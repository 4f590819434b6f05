//! The submodules `W⁺`, `W⁻` (characteristic not 2) and the chain
//! `A ⊂ B ⊂ W` (characteristic 2), spanned by `y_ξ = v_ξ ± v_{−ξ}`.
//!
//! Representatives: `ξ ≠ 0` with `flat(ξ) < flat(−ξ)`. The vector `v_0`
//! enters `W⁺` and `B` directly (first in `W⁺`, last in `B`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::linops::{DenseMatrix, Echelon, IndexSpace, Operator, SpanSolver};
use crate::symplectic::{weil_operator, SpMatrix, SymplecticError};
use crate::weilgen::{WeilGeneratorSet, WeilParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("image of basis vector {index} of {label} leaves the subspace")]
    NotInvariant { label: SubmoduleLabel, index: usize },
    #[error("{which} requires characteristic {requirement}")]
    WrongCharacteristic { which: Irreducible, requirement: &'static str },
    #[error("seed vector {0} is zero")]
    ZeroSeed(usize),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubmoduleLabel {
    #[serde(rename = "W+")]
    Plus,
    #[serde(rename = "W-")]
    Minus,
    A,
    B,
}

impl fmt::Display for SubmoduleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubmoduleLabel::Plus => "W+",
            SubmoduleLabel::Minus => "W-",
            SubmoduleLabel::A => "A",
            SubmoduleLabel::B => "B",
        })
    }
}

/// Which irreducible constituent [`weil_image_irreducible`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducible {
    /// `W⁺`, degree `(r^ℓ+1)/2`.
    Plus,
    /// `W⁻`, degree `(r^ℓ−1)/2`.
    Minus,
    /// `A` in characteristic 2.
    Socle,
    /// `W/B` in characteristic 2.
    Quotient,
}

impl fmt::Display for Irreducible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Irreducible::Plus => "plus",
            Irreducible::Minus => "minus",
            Irreducible::Socle => "socle",
            Irreducible::Quotient => "quotient",
        })
    }
}

/// Flat indices `ξ ≠ 0` with `flat(ξ) < flat(−ξ)`.
pub fn representatives(space: IndexSpace) -> Vec<usize> {
    space.indices().filter(|&i| i != 0 && i < space.negate(i)).collect()
}

#[derive(Debug, Clone)]
pub struct SubmoduleBasis<E> {
    pub label: SubmoduleLabel,
    pub vectors: Vec<Vec<E>>,
    /// `ξ` of every `y_ξ` in the basis, in basis order.
    pub representatives: Vec<Vec<u64>>,
    solver: SpanSolver<E>,
}

impl<E: Clone> SubmoduleBasis<E> {
    fn new<F: Field<Elem = E>>(f: &F, label: SubmoduleLabel, vectors: Vec<Vec<E>>, reps: Vec<Vec<u64>>) -> Self {
        let n = vectors.first().map_or(0, Vec::len);
        let solver = SpanSolver::new(f, n, &vectors).expect("independent basis");
        SubmoduleBasis { label, vectors, representatives: reps, solver }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        self.solver.coordinates(f, v)
    }
}

fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// `v_ξ + sign · v_{−ξ}`.
fn y_vector<F: Field>(f: &F, space: IndexSpace, idx: usize, sign: i64) -> Vec<F::Elem> {
    let mut v = unit(f, space.dim(), idx);
    v[space.negate(idx)] = f.from_int(sign);
    v
}

/// `[W⁺, W⁻]` outside characteristic 2, `[A, B]` in characteristic 2.
pub fn submodule_bases<F: Field>(params: &WeilParams<F>) -> Vec<SubmoduleBasis<F::Elem>> {
    let f = params.field();
    let space = params.space();
    let reps = representatives(space);
    let xis: Vec<Vec<u64>> = reps.iter().map(|&i| space.unflat(i)).collect();
    let plus: Vec<_> = reps.iter().map(|&i| y_vector(f, space, i, 1)).collect();
    let v0 = unit(f, space.dim(), 0);
    let zero = vec![0; space.ell()];
    if f.characteristic() == 2 {
        let a = SubmoduleBasis::new(f, SubmoduleLabel::A, plus.clone(), xis.clone());
        let mut b_vecs = plus;
        b_vecs.push(v0);
        let mut b_reps = xis;
        b_reps.push(zero);
        vec![a, SubmoduleBasis::new(f, SubmoduleLabel::B, b_vecs, b_reps)]
    } else {
        let mut p_vecs = vec![v0];
        p_vecs.extend(plus);
        let mut p_reps = vec![zero];
        p_reps.extend(xis.iter().cloned());
        let minus = reps.iter().map(|&i| y_vector(f, space, i, -1)).collect();
        vec![
            SubmoduleBasis::new(f, SubmoduleLabel::Plus, p_vecs, p_reps),
            SubmoduleBasis::new(f, SubmoduleLabel::Minus, minus, xis),
        ]
    }
}

/// Matrix of `op` on the span of `basis` (columns are images).
pub fn restrict<F: Field>(
    f: &F,
    op: &Operator<F::Elem>,
    basis: &SubmoduleBasis<F::Elem>,
) -> Result<DenseMatrix<F::Elem>, ModuleError> {
    let columns = basis
        .vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let image = op.apply(f, v).expect("dimension");
            basis
                .coordinates(f, &image)
                .ok_or(ModuleError::NotInvariant { label: basis.label, index: j })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DenseMatrix::from_columns(basis.dim(), &columns))
}

/// Action of `op` on `W/lower` in the basis `{v_ξ + lower}` for the
/// representatives `ξ`.
pub fn quotient_action<F: Field>(
    params: &WeilParams<F>,
    op: &Operator<F::Elem>,
    lower: &SubmoduleBasis<F::Elem>,
) -> Result<DenseMatrix<F::Elem>, ModuleError> {
    let f = params.field();
    let space = params.space();
    let n = space.dim();
    let reps = representatives(space);
    let mut full = lower.vectors.clone();
    full.extend(reps.iter().map(|&i| unit(f, n, i)));
    let solver = SpanSolver::new(f, n, &full).expect("lower + representatives span W");
    let k = lower.dim();
    let columns = reps
        .iter()
        .map(|&i| {
            let image = op.apply(f, &unit(f, n, i)).expect("dimension");
            solver.coordinates(f, &image).expect("spanning set")[k..].to_vec()
        })
        .collect::<Vec<_>>();
    for (j, v) in lower.vectors.iter().enumerate() {
        let image = op.apply(f, v).expect("dimension");
        if lower.coordinates(f, &image).is_none() {
            return Err(ModuleError::NotInvariant { label: lower.label, index: j });
        }
    }
    Ok(DenseMatrix::from_columns(reps.len(), &columns))
}

/// Scalar by which `op` acts on the one-dimensional `B/A`.
pub fn middle_action<F: Field>(
    f: &F,
    op: &Operator<F::Elem>,
    b: &SubmoduleBasis<F::Elem>,
) -> Result<F::Elem, ModuleError> {
    let m = restrict(f, op, b)?;
    let last = b.dim() - 1;
    Ok(m.get(last, last).clone())
}

/// `weil_image(g)` restricted to an irreducible constituent.
pub fn weil_image_irreducible<F: Field>(
    g: &SpMatrix,
    gens: &WeilGeneratorSet<F>,
    which: Irreducible,
) -> Result<DenseMatrix<F::Elem>, ModuleError> {
    let params = &gens.params;
    let f = params.field();
    let char2 = f.characteristic() == 2;
    match (which, char2) {
        (Irreducible::Plus | Irreducible::Minus, true) => {
            return Err(ModuleError::WrongCharacteristic { which, requirement: "not 2" })
        }
        (Irreducible::Socle | Irreducible::Quotient, false) => {
            return Err(ModuleError::WrongCharacteristic { which, requirement: "2" })
        }
        _ => {}
    }
    let (_, op) = weil_operator(g, gens)?;
    let bases = submodule_bases(params);
    match which {
        Irreducible::Plus | Irreducible::Socle => restrict(f, &op, &bases[0]),
        Irreducible::Minus => restrict(f, &op, &bases[1]),
        Irreducible::Quotient => quotient_action(params, &op, &bases[1]),
    }
}

/// Dimension of the smallest subspace containing `seeds` and invariant
/// under `ops`.
pub fn spin<F: Field>(f: &F, seeds: &[Vec<F::Elem>], ops: &[&Operator<F::Elem>]) -> Result<usize, ModuleError> {
    let n = seeds.first().map_or(0, Vec::len);
    let mut echelon = Echelon::new(n);
    let mut queue = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        if s.iter().all(|x| f.is_zero(x)) {
            return Err(ModuleError::ZeroSeed(i));
        }
        if echelon.insert(f, s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            let w = op.apply(f, &v).expect("dimension");
            if echelon.insert(f, &w) {
                if echelon.dim() == n {
                    return Ok(n);
                }
                queue.push(w);
            }
        }
    }
    Ok(echelon.dim())
}
