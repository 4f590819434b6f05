//! Exact coefficient fields containing a distinguished primitive `r`-th root
//! of unity `θ`.
//!
//! Three families are supported: the cyclotomic field `ℚ(θ)`, prime fields
//! `GF(p)` with `p ≡ 1 (mod r)`, and extension fields `GF(p^k)` with
//! `r | p^k − 1` (this covers characteristic 2). Every element has a single
//! canonical encoding, so derived `Eq` and `Hash` agree with field equality.
//!
//! Algorithms elsewhere in the crate are generic over [`Field`]. The
//! run-time choice of field is expressed by [`FieldContext`], which is
//! dispatched once with [`with_field!`](crate::with_field).

pub mod arith;
mod cyclotomic;
mod extension;
mod prime;

use std::fmt;
use std::hash::Hash;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{CycElem, CyclotomicField};
pub use extension::{find_irreducible_polynomial, is_irreducible, ExtensionField};
pub use prime::PrimeField;

pub use arith::legendre;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("invalid field spec: {0}")]
    InvalidFieldSpec(String),
    #[error("cannot decode field element: {0}")]
    Decode(String),
}

/// Description of a coefficient field. `AutoPrime` and `AutoChar2` are
/// resolved by [`make_field`] to concrete variants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Cyclotomic {
        r: u64,
    },
    PrimeField {
        r: u64,
        p: u64,
    },
    /// `modulus` lists the coefficients of a monic degree-`k` polynomial,
    /// constant term first (length `k + 1`).
    ExtensionField {
        r: u64,
        p: u64,
        k: u32,
        modulus: Vec<u64>,
    },
    AutoPrime {
        r: u64,
    },
    AutoChar2 {
        r: u64,
    },
}

impl FieldSpec {
    pub fn r(&self) -> u64 {
        match *self {
            FieldSpec::Cyclotomic { r }
            | FieldSpec::PrimeField { r, .. }
            | FieldSpec::ExtensionField { r, .. }
            | FieldSpec::AutoPrime { r }
            | FieldSpec::AutoChar2 { r } => r,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Cyclotomic { r } => write!(f, "Q(zeta_{r})"),
            FieldSpec::PrimeField { p, .. } => write!(f, "GF({p})"),
            FieldSpec::ExtensionField { p, k, .. } => write!(f, "GF({p}^{k})"),
            FieldSpec::AutoPrime { r } => write!(f, "auto-prime(r={r})"),
            FieldSpec::AutoChar2 { r } => write!(f, "gf2-auto(r={r})"),
        }
    }
}

/// A primitive `r`-th root of unity together with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootOfUnity<E> {
    pub theta: E,
    pub order: u64,
}

/// Exact field arithmetic. Implementors are cheap to clone (shared tables
/// live behind an `Arc`).
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    /// The odd prime `r` for which `θ` is a primitive `r`-th root of unity.
    fn root_order(&self) -> u64;
    /// Characteristic; `0` for `ℚ(θ)`.
    fn characteristic(&self) -> u64;
    /// The fully resolved spec this field was built from.
    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `θ^k`, with `k` reduced mod `r`.
    fn theta_pow(&self, k: i64) -> Self::Elem;

    /// JSON encoding (decimal string, or array of strings).
    fn encode(&self, a: &Self::Elem) -> serde_json::Value;
    fn decode(&self, v: &serde_json::Value) -> Result<Self::Elem, FieldError>;
    /// Human / CAS-readable expression. `gen` names `θ` (cyclotomic) or the
    /// adjoined root (extension fields).
    fn format(&self, a: &Self::Elem, gen: &str) -> String;

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn theta(&self) -> Self::Elem {
        self.theta_pow(1)
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    fn powi(&self, a: &Self::Elem, n: i64) -> Option<Self::Elem> {
        if n >= 0 {
            Some(self.pow(a, n as u64))
        } else {
            self.inv(a).map(|b| self.pow(&b, n.unsigned_abs()))
        }
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Exponent `j ∈ [0, r)` with `θ^j = a`, if `a` is a power of `θ`.
    fn theta_log(&self, a: &Self::Elem) -> Option<u64> {
        (0..self.root_order()).find(|&j| self.theta_pow(j as i64) == *a)
    }

    fn root_of_unity(&self) -> RootOfUnity<Self::Elem> {
        RootOfUnity {
            theta: self.theta(),
            order: self.root_order(),
        }
    }
}

/// The distinguished primitive root of unity of a field.
pub fn primitive_root_of_unity<F: Field>(field: &F) -> RootOfUnity<F::Elem> {
    field.root_of_unity()
}

/// A constructed field of any supported family.
#[derive(Debug, Clone)]
pub enum FieldContext {
    Cyclotomic(CyclotomicField),
    Prime(PrimeField),
    Extension(ExtensionField),
}

impl FieldContext {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldContext::Cyclotomic(f) => f.spec(),
            FieldContext::Prime(f) => f.spec(),
            FieldContext::Extension(f) => f.spec(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldContext::Cyclotomic(f) => f.characteristic(),
            FieldContext::Prime(f) => f.characteristic(),
            FieldContext::Extension(f) => f.characteristic(),
        }
    }
}

/// Runs `body` with `$f` bound to the concrete field inside a
/// [`FieldContext`].
///
/// ```
/// use weil::field::{make_field, Field, FieldSpec};
/// let ctx = make_field(&FieldSpec::AutoPrime { r: 3 }).unwrap();
/// let theta = weil::with_field!(ctx, f => f.encode(&f.theta()));
/// assert_eq!(theta, serde_json::json!("2"));
/// ```
#[macro_export]
macro_rules! with_field {
    ($ctx:expr, $f:ident => $body:expr) => {
        match $ctx {
            $crate::field::FieldContext::Cyclotomic(ref $f) => $body,
            $crate::field::FieldContext::Prime(ref $f) => $body,
            $crate::field::FieldContext::Extension(ref $f) => $body,
        }
    };
}

fn check_r(r: u64) -> Result<(), FieldError> {
    if r.is_multiple_of(2) || !arith::is_prime(r) {
        return Err(FieldError::InvalidFieldSpec("r must be an odd prime".into()));
    }
    Ok(())
}

/// Builds the field described by `spec`, resolving the `Auto` variants:
/// `AutoPrime` picks the smallest prime `p ≡ 1 (mod r)`, `AutoChar2` picks
/// `GF(2^k)` with `k` the multiplicative order of 2 mod `r`.
pub fn make_field(spec: &FieldSpec) -> Result<FieldContext, FieldError> {
    let r = spec.r();
    check_r(r)?;
    match spec {
        FieldSpec::Cyclotomic { .. } => Ok(FieldContext::Cyclotomic(CyclotomicField::new(r))),
        FieldSpec::PrimeField { p, .. } => PrimeField::new(r, *p).map(FieldContext::Prime),
        FieldSpec::ExtensionField { p, k, modulus, .. } => {
            ExtensionField::new(r, *p, *k, modulus.clone()).map(FieldContext::Extension)
        }
        FieldSpec::AutoPrime { .. } => {
            let p = (1..)
                .map(|m| m * r + 1)
                .find(|&p| arith::is_prime(p))
                .expect("Dirichlet");
            PrimeField::new(r, p).map(FieldContext::Prime)
        }
        FieldSpec::AutoChar2 { .. } => {
            let k = arith::multiplicative_order(2, r) as u32;
            let modulus = find_irreducible_polynomial(2, k);
            ExtensionField::new(r, 2, k, modulus).map(FieldContext::Extension)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field_axioms<F: Field>(f: &F) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let x = f.random(&mut rng);
            let y = f.random(&mut rng);
            let z = f.random(&mut rng);
            assert_eq!(f.add(&f.add(&x, &y), &z), f.add(&x, &f.add(&y, &z)));
            assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
            assert_eq!(
                f.mul(&x, &f.add(&y, &z)),
                f.add(&f.mul(&x, &y), &f.mul(&x, &z))
            );
            assert_eq!(f.sub(&f.add(&x, &y), &y), x);
            if !f.is_zero(&x) {
                assert!(f.is_one(&f.mul(&x, &f.inv(&x).unwrap())));
            }
        }
        assert!(f.inv(&f.zero()).is_none());
    }

    fn root_properties<F: Field>(f: &F) {
        let r = f.root_order();
        let theta = f.theta();
        assert!(f.is_one(&f.pow(&theta, r)));
        for j in 1..r {
            assert!(!f.is_one(&f.pow(&theta, j)), "theta^{j} = 1");
        }
        let mut sum = f.zero();
        for i in 0..r {
            sum = f.add(&sum, &f.pow(&theta, i));
        }
        assert!(f.is_zero(&sum));
        for n in -3 * r as i64..3 * r as i64 {
            assert_eq!(f.theta_pow(n), f.powi(&theta, n).unwrap());
        }
    }

    fn all_specs() -> Vec<FieldSpec> {
        let mut specs = Vec::new();
        for r in [3u64, 5, 7, 11, 13] {
            specs.push(FieldSpec::Cyclotomic { r });
            specs.push(FieldSpec::AutoPrime { r });
        }
        for r in [3u64, 5, 7] {
            specs.push(FieldSpec::AutoChar2 { r });
        }
        specs.push(FieldSpec::ExtensionField {
            r: 3,
            p: 5,
            k: 2,
            modulus: find_irreducible_polynomial(5, 2),
        });
        specs
    }

    #[test]
    fn axioms_and_roots_in_every_family() {
        for spec in all_specs() {
            let ctx = make_field(&spec).unwrap();
            with_field!(ctx, f => {
                field_axioms(f);
                root_properties(f);
            });
        }
    }

    #[test]
    fn auto_resolution() {
        let ctx = make_field(&FieldSpec::AutoPrime { r: 3 }).unwrap();
        assert_eq!(ctx.spec(), FieldSpec::PrimeField { r: 3, p: 7 });
        let ctx = make_field(&FieldSpec::AutoPrime { r: 5 }).unwrap();
        assert_eq!(ctx.spec(), FieldSpec::PrimeField { r: 5, p: 11 });
        let FieldContext::Prime(f) = ctx else { panic!() };
        assert_eq!(f.theta(), 4);

        let ctx = make_field(&FieldSpec::AutoChar2 { r: 3 }).unwrap();
        assert_eq!(
            ctx.spec(),
            FieldSpec::ExtensionField { r: 3, p: 2, k: 2, modulus: vec![1, 1, 1] }
        );
        let FieldContext::Extension(f) = ctx else { panic!() };
        assert_eq!(f.theta(), vec![0, 1]);
        let ctx = make_field(&FieldSpec::AutoChar2 { r: 5 }).unwrap();
        assert_eq!(
            ctx.spec(),
            FieldSpec::ExtensionField { r: 5, p: 2, k: 4, modulus: vec![1, 1, 0, 0, 1] }
        );
    }

    #[test]
    fn theta_gf7() {
        let ctx = make_field(&FieldSpec::AutoPrime { r: 3 }).unwrap();
        let FieldContext::Prime(f) = ctx else { panic!() };
        assert_eq!(f.theta(), 2);
        assert_eq!(primitive_root_of_unity(&f), primitive_root_of_unity(&f));
    }

    #[test]
    fn deterministic_construction() {
        for spec in all_specs() {
            let a = make_field(&spec).unwrap();
            let b = make_field(&spec).unwrap();
            assert_eq!(a.spec(), b.spec());
            let ta = with_field!(a, f => f.encode(&f.theta()));
            let tb = with_field!(b, f => f.encode(&f.theta()));
            assert_eq!(ta, tb);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            make_field(&FieldSpec::PrimeField { r: 3, p: 11 }),
            Err(FieldError::InvalidFieldSpec(_))
        ));
        assert!(make_field(&FieldSpec::PrimeField { r: 3, p: 9 }).is_err());
        assert!(make_field(&FieldSpec::Cyclotomic { r: 2 }).is_err());
        assert!(make_field(&FieldSpec::Cyclotomic { r: 9 }).is_err());
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(make_field(&FieldSpec::ExtensionField { r: 3, p: 2, k: 2, modulus: vec![1, 0, 1] })
            .is_err());
        // 3 does not divide 2^3 - 1
        assert!(make_field(&FieldSpec::ExtensionField {
            r: 3,
            p: 2,
            k: 3,
            modulus: find_irreducible_polynomial(2, 3)
        })
        .is_err());
        // characteristic r
        assert!(make_field(&FieldSpec::ExtensionField {
            r: 3,
            p: 3,
            k: 2,
            modulus: find_irreducible_polynomial(3, 2)
        })
        .is_err());
    }

    #[test]
    fn encode_decode_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in all_specs() {
            let ctx = make_field(&spec).unwrap();
            with_field!(ctx, f => {
                for _ in 0..10 {
                    let x = f.random(&mut rng);
                    assert_eq!(f.decode(&f.encode(&x)).unwrap(), x);
                }
            });
        }
    }
}
