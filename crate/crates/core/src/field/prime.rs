use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use super::arith::{is_prime, mod_pow, smallest_primitive_root};
use super::{Field, FieldError, FieldSpec};

/// `GF(p)` with `p ≡ 1 (mod r)`; elements are residues in `[0, p)`.
#[derive(Debug, Clone)]
pub struct PrimeField {
    r: u64,
    p: u64,
    theta_table: Arc<[u64]>,
}

impl PrimeField {
    pub fn new(r: u64, p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::InvalidFieldSpec(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(FieldError::InvalidFieldSpec(format!("p = {p} is too large")));
        }
        if !(p - 1).is_multiple_of(r) {
            return Err(FieldError::InvalidFieldSpec(format!(
                "{r} does not divide {p} - 1; GF({p}) has no primitive {r}-th root of unity"
            )));
        }
        let g = smallest_primitive_root(p);
        let theta = mod_pow(g, (p - 1) / r, p);
        let table = (0..r).map(|j| mod_pow(theta, j, p)).collect();
        Ok(PrimeField { r, p, theta_table: table })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn root_order(&self) -> u64 {
        self.r
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { r: self.r, p: self.p }
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(mod_pow(*a, self.p - 2, self.p))
        }
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn theta_pow(&self, k: i64) -> u64 {
        self.theta_table[k.rem_euclid(self.r as i64) as usize]
    }

    fn theta_log(&self, a: &u64) -> Option<u64> {
        self.theta_table.iter().position(|t| t == a).map(|j| j as u64)
    }

    fn encode(&self, a: &u64) -> Value {
        Value::String(a.to_string())
    }

    fn decode(&self, v: &Value) -> Result<u64, FieldError> {
        let s = v
            .as_str()
            .ok_or_else(|| FieldError::Decode(format!("expected a string, got {v}")))?;
        let x: u64 = s.parse().map_err(|_| FieldError::Decode(format!("bad residue {s:?}")))?;
        if x >= self.p {
            return Err(FieldError::Decode(format!("{x} is not reduced mod {}", self.p)));
        }
        Ok(x)
    }

    fn format(&self, a: &u64, _gen: &str) -> String {
        a.to_string()
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}
