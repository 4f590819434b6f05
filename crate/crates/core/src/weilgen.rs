//! The operators `A_t, B_t, C_t, D_{st}, E_t, U_t`, the scalar `λ`, the
//! involution `σ`, and the Weil generator set `{λC_t, D_{st}, U_t}`.
//!
//! On `V` with basis `v_0, …, v_{r−1}` (indices mod `r`):
//!
//! ```text
//! A v_ξ = θ^ξ v_ξ          B v_ξ = v_{ξ+1}
//! C v_ξ = Σ_i θ^{iξ} v_i   E v_ξ = θ^{ξ(ξ−1)/2} v_ξ
//! U v_ξ = θ^{ξ(ξ+r)/2} v_ξ = A^{(r+1)/2} E v_ξ
//! ```
//!
//! and `X_t = I_{r^{t−1}} ⊗ X ⊗ I_{r^{ℓ−t}}` on `W = V^{⊗ℓ}`, together with
//! `D_{st} v_ξ = θ^{ξ_s ξ_t} v_ξ`. The scalar `λ = (−r)^{(r−1)/2} det(C)^{−1}`
//! normalizes `C` to determinant one.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{legendre, Field};
use crate::linops::{Fourier, IndexSpace, Monomial, Operator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("l must be at least 1")]
    InvalidRank,
}

/// `(r, ℓ, 𝔽)`; `r` is the root order of the field.
#[derive(Debug, Clone)]
pub struct WeilParams<F: Field> {
    field: F,
    space: IndexSpace,
}

impl<F: Field> WeilParams<F> {
    pub fn new(field: F, ell: usize) -> Result<Self, WeilError> {
        if ell == 0 {
            return Err(WeilError::InvalidRank);
        }
        let space = IndexSpace::new(field.root_order(), ell);
        Ok(WeilParams { field, space })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn space(&self) -> IndexSpace {
        self.space
    }

    pub fn r(&self) -> u64 {
        self.space.r()
    }

    pub fn ell(&self) -> usize {
        self.space.ell()
    }

    /// `N = r^ℓ`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The same field at rank one.
    pub fn slice(&self) -> Self {
        WeilParams::new(self.field.clone(), 1).expect("rank one")
    }
}

/// `ξ(ξ−1)/2 mod r`, computed as an exact integer first.
pub fn e_exponent(xi: u64, r: u64) -> u64 {
    (xi * xi.saturating_sub(1) / 2) % r
}

/// `ξ(ξ+r)/2 mod r`.
pub fn u_exponent(xi: u64, r: u64) -> u64 {
    (xi * (xi + r) / 2) % r
}

fn theta_diag<F: Field>(f: &F, space: IndexSpace, exponent: impl Fn(&[u64]) -> u64) -> Operator<F::Elem> {
    let diag = space
        .indices()
        .map(|idx| f.theta_pow(exponent(&space.unflat(idx)) as i64))
        .collect();
    Operator::Monomial(Monomial::diagonal(space, diag))
}

pub fn op_a<F: Field>(f: &F, space: IndexSpace, t: usize) -> Operator<F::Elem> {
    theta_diag(f, space, |xi| xi[t - 1])
}

pub fn op_b<F: Field>(f: &F, space: IndexSpace, t: usize) -> Operator<F::Elem> {
    let mut shift = vec![0; space.ell()];
    shift[t - 1] = 1;
    Operator::Monomial(Monomial::permutation(f, space, vec![false; space.ell()], shift))
}

pub fn op_c<F: Field>(f: &F, space: IndexSpace, t: usize) -> Operator<F::Elem> {
    Operator::Fourier(Fourier { space, slot: t, scale: f.one(), conjugate: false })
}

pub fn op_d<F: Field>(f: &F, space: IndexSpace, s: usize, t: usize) -> Operator<F::Elem> {
    let r = space.r();
    theta_diag(f, space, |xi| xi[s - 1] * xi[t - 1] % r)
}

pub fn op_e<F: Field>(f: &F, space: IndexSpace, t: usize) -> Operator<F::Elem> {
    let r = space.r();
    theta_diag(f, space, |xi| e_exponent(xi[t - 1], r))
}

pub fn op_u<F: Field>(f: &F, space: IndexSpace, t: usize) -> Operator<F::Elem> {
    let r = space.r();
    theta_diag(f, space, |xi| u_exponent(xi[t - 1], r))
}

/// `v_ξ ↦ v_{−ξ}` on the given slots.
pub fn op_negation<F: Field>(f: &F, space: IndexSpace, slots: &[usize]) -> Operator<F::Elem> {
    let mut negate = vec![false; space.ell()];
    for &t in slots {
        negate[t - 1] = true;
    }
    Operator::Monomial(Monomial::permutation(f, space, negate, vec![0; space.ell()]))
}

/// The rank-one operators on `V`.
#[derive(Debug, Clone)]
pub struct BaseGenerators<E> {
    pub a: Operator<E>,
    pub b: Operator<E>,
    pub c: Operator<E>,
    pub e: Operator<E>,
    pub u: Operator<E>,
}

pub fn base_generators<F: Field>(f: &F) -> BaseGenerators<F::Elem> {
    let space = IndexSpace::new(f.root_order(), 1);
    BaseGenerators {
        a: op_a(f, space, 1),
        b: op_b(f, space, 1),
        c: op_c(f, space, 1),
        e: op_e(f, space, 1),
        u: op_u(f, space, 1),
    }
}

/// `A_t, B_t, C_t, D_{st}, E_t, U_t` on `W`, before scaling by `λ`.
#[derive(Debug, Clone)]
pub struct TensorGenerators<E> {
    pub a: Vec<Operator<E>>,
    pub b: Vec<Operator<E>>,
    pub c: Vec<Operator<E>>,
    pub d: BTreeMap<(usize, usize), Operator<E>>,
    pub e: Vec<Operator<E>>,
    pub u: Vec<Operator<E>>,
}

pub fn tensor_generators<F: Field>(params: &WeilParams<F>) -> TensorGenerators<F::Elem> {
    let f = params.field();
    let space = params.space();
    let ell = params.ell();
    let slots = 1..=ell;
    TensorGenerators {
        a: slots.clone().map(|t| op_a(f, space, t)).collect(),
        b: slots.clone().map(|t| op_b(f, space, t)).collect(),
        c: slots.clone().map(|t| op_c(f, space, t)).collect(),
        d: (1..=ell)
            .flat_map(|t| (1..t).map(move |s| (s, t)))
            .map(|(s, t)| ((s, t), op_d(f, space, s, t)))
            .collect(),
        e: slots.clone().map(|t| op_e(f, space, t)).collect(),
        u: slots.map(|t| op_u(f, space, t)).collect(),
    }
}

/// `det(C)` for the `r × r` Fourier matrix, by elimination.
pub fn det_c<F: Field>(f: &F) -> F::Elem {
    let space = IndexSpace::new(f.root_order(), 1);
    op_c(f, space, 1).materialize(f).det(f).expect("square")
}

/// `λ = (−r)^{(r−1)/2} · det(C)^{−1}`.
pub fn lambda_scalar<F: Field>(f: &F) -> F::Elem {
    let r = f.root_order();
    let numerator = f.pow(&f.from_int(-(r as i64)), (r - 1) / 2);
    f.div(&numerator, &det_c(f)).expect("C is invertible")
}

/// `σ: v_{ξ₁,…,ξ_ℓ} ↦ v_{−ξ₁,…,−ξ_ℓ}`.
pub fn sigma_involution<F: Field>(params: &WeilParams<F>) -> Operator<F::Elem> {
    let all: Vec<usize> = (1..=params.ell()).collect();
    op_negation(params.field(), params.space(), &all)
}

/// Three evaluations of `det(C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussSumIdentity<E> {
    /// By Gaussian elimination.
    pub det_c: E,
    /// `(2|r) · r^{(r−1)/2} · Σ_i θ^{i²}`.
    pub via_gauss_sum: E,
    /// `r^{(r−1)/2} · Σ_i θ^{i(i+r)/2}`.
    pub via_u_trace: E,
}

impl<E: PartialEq> GaussSumIdentity<E> {
    pub fn holds(&self) -> bool {
        self.det_c == self.via_gauss_sum && self.det_c == self.via_u_trace
    }
}

pub fn gauss_sum_identity<F: Field>(f: &F) -> GaussSumIdentity<F::Elem> {
    let r = f.root_order();
    let half = f.pow(&f.from_int(r as i64), (r - 1) / 2);
    let gauss = (0..r).fold(f.zero(), |acc, i| f.add(&acc, &f.theta_pow((i * i % r) as i64)));
    let u_trace = (0..r).fold(f.zero(), |acc, i| f.add(&acc, &f.theta_pow(u_exponent(i, r) as i64)));
    let sign = f.from_int(legendre(2, r) as i64);
    GaussSumIdentity {
        det_c: det_c(f),
        via_gauss_sum: f.mul(&sign, &f.mul(&half, &gauss)),
        via_u_trace: f.mul(&half, &u_trace),
    }
}

/// Generators of `G ≅ Sp_{2ℓ}(r)` plus the normalizer extras.
///
/// Fields are public so that callers can build deliberately broken sets
/// (negative controls for the relation suite).
#[derive(Debug, Clone)]
pub struct WeilGeneratorSet<F: Field> {
    pub params: WeilParams<F>,
    /// `λC_t`, `t = 1..ℓ`.
    pub lam_c: Vec<Operator<F::Elem>>,
    pub d: BTreeMap<(usize, usize), Operator<F::Elem>>,
    pub u: Vec<Operator<F::Elem>>,
    pub a: Vec<Operator<F::Elem>>,
    pub b: Vec<Operator<F::Elem>>,
    /// Unscaled `C_t`.
    pub c: Vec<Operator<F::Elem>>,
    pub e: Vec<Operator<F::Elem>>,
    pub lambda: F::Elem,
    pub sigma: Operator<F::Elem>,
}

impl<F: Field> WeilGeneratorSet<F> {
    pub fn new(params: &WeilParams<F>) -> Self {
        let f = params.field();
        let raw = tensor_generators(params);
        let lambda = lambda_scalar(f);
        let lam_c = raw.c.iter().map(|c| c.scaled(f, &lambda)).collect();
        WeilGeneratorSet {
            params: params.clone(),
            lam_c,
            d: raw.d,
            u: raw.u,
            a: raw.a,
            b: raw.b,
            c: raw.c,
            e: raw.e,
            lambda,
            sigma: sigma_involution(params),
        }
    }

    pub fn field(&self) -> &F {
        self.params.field()
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    /// `λC_t, D_{st}, U_t` in a fixed order.
    pub fn generators(&self) -> Vec<&Operator<F::Elem>> {
        self.lam_c.iter().chain(self.d.values()).chain(self.u.iter()).collect()
    }

    /// Generators with their output names (`C1`, `D12`, `U1`, …); with
    /// `full`, also `rawC1`, `A1`, `B1`, `E1`, `sigma`.
    pub fn named(&self, full: bool) -> Vec<(String, &Operator<F::Elem>)> {
        let mut out = Vec::new();
        for (t, op) in self.lam_c.iter().enumerate() {
            out.push((format!("C{}", t + 1), op));
        }
        for (&(s, t), op) in &self.d {
            out.push((d_name(s, t), op));
        }
        for (t, op) in self.u.iter().enumerate() {
            out.push((format!("U{}", t + 1), op));
        }
        if full {
            for (prefix, ops) in [("rawC", &self.c), ("A", &self.a), ("B", &self.b), ("E", &self.e)] {
                for (t, op) in ops.iter().enumerate() {
                    out.push((format!("{prefix}{}", t + 1), op));
                }
            }
            out.push(("sigma".into(), &self.sigma));
        }
        out
    }
}

pub fn weil_generators<F: Field>(params: &WeilParams<F>) -> WeilGeneratorSet<F> {
    WeilGeneratorSet::new(params)
}

fn d_name(s: usize, t: usize) -> String {
    if t < 10 {
        format!("D{s}{t}")
    } else {
        format!("D{s}_{t}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CyclotomicField, PrimeField};
    use crate::linops::kron;

    #[test]
    fn base_diagonals_r3() {
        let f = CyclotomicField::new(3);
        let g = base_generators(&f);
        let t = |k| f.theta_pow(k);
        let diag = |op: &Operator<_>| (0..3).map(|i| op.materialize(&f).get(i, i).clone()).collect::<Vec<_>>();
        assert_eq!(diag(&g.u), vec![t(0), t(2), t(2)]);
        assert_eq!(diag(&g.e), vec![t(0), t(0), t(1)]);
        // Fourier matrix rows (1,1,1), (1,θ,θ²), (1,θ²,θ)
        let c = g.c.materialize(&f);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*c.get(i, j), t((i * j) as i64));
            }
        }
    }

    #[test]
    fn commutator_ab_is_theta() {
        for r in [3u64, 5, 7] {
            let f = CyclotomicField::new(r);
            let g = base_generators(&f);
            let n = r as usize;
            let comm = Operator::product(
                n,
                [g.a.clone(), g.b.clone(), g.a.inverse(&f).unwrap(), g.b.inverse(&f).unwrap()],
            );
            assert!(comm.equals(&f, &Operator::Scalar { dim: n, c: f.theta() }));
        }
    }

    #[test]
    fn u_is_a_power_times_e() {
        let f = PrimeField::new(5, 11).unwrap();
        let params = WeilParams::new(f.clone(), 2).unwrap();
        let raw = tensor_generators(&params);
        for t in 0..2 {
            let composed = Operator::product(25, [raw.a[t].pow(&f, 3).unwrap(), raw.e[t].clone()]);
            assert!(composed.equals(&f, &raw.u[t]));
        }
    }

    #[test]
    fn tensor_slots_are_kronecker_sandwiches() {
        let f = PrimeField::new(3, 7).unwrap();
        let params = WeilParams::new(f.clone(), 2).unwrap();
        let raw = tensor_generators(&params);
        let base = base_generators(&f);
        let id = crate::linops::DenseMatrix::identity(&f, 3);
        for (ops, small) in [
            (&raw.a, &base.a),
            (&raw.b, &base.b),
            (&raw.c, &base.c),
            (&raw.e, &base.e),
            (&raw.u, &base.u),
        ] {
            let m = small.materialize(&f);
            assert_eq!(ops[0].materialize(&f), kron(&f, &m, &id));
            assert_eq!(ops[1].materialize(&f), kron(&f, &id, &m));
        }
    }

    #[test]
    fn d12_entries() {
        let f = CyclotomicField::new(3);
        let params = WeilParams::new(f.clone(), 2).unwrap();
        let raw = tensor_generators(&params);
        let d = raw.d[&(1, 2)].materialize(&f);
        let space = params.space();
        let idx = space.flat(&[2, 2]);
        assert_eq!(*d.get(idx, idx), f.theta());
        for i in space.indices() {
            let xi = space.unflat(i);
            assert_eq!(*d.get(i, i), f.theta_pow((xi[0] * xi[1]) as i64));
        }
    }

    #[test]
    fn u2_ignores_first_slot() {
        let f = CyclotomicField::new(5);
        let params = WeilParams::new(f.clone(), 2).unwrap();
        let u2 = tensor_generators(&params).u[1].materialize(&f);
        for i in params.space().indices() {
            let xi = params.space().unflat(i);
            assert_eq!(*u2.get(i, i), f.theta_pow(u_exponent(xi[1], 5) as i64));
        }
    }

    /// Vandermonde oracle: `det(C) = ∏_{i<j} (θ^j − θ^i)`.
    fn vandermonde<F: Field>(f: &F) -> F::Elem {
        let r = f.root_order() as i64;
        let mut acc = f.one();
        for i in 0..r {
            for j in i + 1..r {
                acc = f.mul(&acc, &f.sub(&f.theta_pow(j), &f.theta_pow(i)));
            }
        }
        acc
    }

    #[test]
    fn det_c_matches_vandermonde() {
        for r in [3u64, 5, 7, 11, 13] {
            let f = CyclotomicField::new(r);
            assert_eq!(det_c(&f), vandermonde(&f), "r = {r}");
        }
        let f = PrimeField::new(3, 7).unwrap();
        assert_eq!(det_c(&f), 6);
        assert_eq!(vandermonde(&f), 6);
    }

    #[test]
    fn lambda_r3() {
        let f = CyclotomicField::new(3);
        // det(C) = 3θ² − 3θ = −3 − 6θ, λ = (θ² − θ)/3
        assert_eq!(det_c(&f), f.add(&f.from_int(-3), &f.mul(&f.from_int(-6), &f.theta())));
        let lam = lambda_scalar(&f);
        let expect = f.div(&f.sub(&f.theta_pow(2), &f.theta()), &f.from_int(3)).unwrap();
        assert_eq!(lam, expect);
        assert_eq!(f.mul(&lam, &lam), f.div(&f.from_int(-1), &f.from_int(3)).unwrap());

        let g = PrimeField::new(3, 7).unwrap();
        assert_eq!(lambda_scalar(&g), 3);
    }

    #[test]
    fn lambda_c_has_unit_determinant() {
        for r in [3u64, 5, 7] {
            let f = CyclotomicField::new(r);
            let params = WeilParams::new(f.clone(), 1).unwrap();
            let gens = WeilGeneratorSet::new(&params);
            assert!(f.is_one(&gens.lam_c[0].det(&f).unwrap()));
            let r = r as i64;
            let lhs = f.mul(&f.mul(&gens.lambda, &gens.lambda), &f.from_int(r));
            assert_eq!(lhs, f.from_int(if (r - 1) / 2 % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let f = CyclotomicField::new(3);
        let g = gauss_sum_identity(&f);
        assert!(g.holds());
        assert_eq!(g.det_c, f.add(&f.from_int(-3), &f.mul(&f.from_int(-6), &f.theta())));
        let p = PrimeField::new(3, 7).unwrap();
        let g = gauss_sum_identity(&p);
        assert!(g.holds());
        assert_eq!(g.det_c, 6);
    }

    #[test]
    fn sigma_equals_scaled_square() {
        let f = CyclotomicField::new(3);
        let params = WeilParams::new(f.clone(), 1).unwrap();
        let gens = WeilGeneratorSet::new(&params);
        // σ = −(λC)² at r = 3
        let sq = gens.lam_c[0].pow(&f, 2).unwrap().scaled(&f, &f.from_int(-1));
        assert!(sq.equals(&f, &gens.sigma));
        let s = gens.sigma.materialize(&f);
        assert!(f.is_one(s.get(0, 0)) && f.is_one(s.get(2, 1)) && f.is_one(s.get(1, 2)));
    }

    #[test]
    fn names() {
        let f = PrimeField::new(3, 7).unwrap();
        let params = WeilParams::new(f, 2).unwrap();
        let gens = WeilGeneratorSet::new(&params);
        let names: Vec<String> = gens.named(false).into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["C1", "C2", "D12", "U1", "U2"]);
        assert_eq!(gens.named(true).len(), 5 + 8 + 1);
        assert!(WeilParams::new(PrimeField::new(3, 7).unwrap(), 0).is_err());
    }
}
