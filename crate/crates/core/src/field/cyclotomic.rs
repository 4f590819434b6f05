use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use super::{Field, FieldError, FieldSpec};

/// Element of `ℚ(θ)` in the power basis `1, θ, …, θ^{r−2}`, stored as integer
/// numerators over a common positive denominator with overall gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElem {
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycElem {
    /// Coefficient of `θ^i` as a reduced fraction `(numerator, denominator)`.
    pub fn coefficient(&self, i: usize) -> (BigInt, BigInt) {
        let g = self.num[i].gcd(&self.den);
        if g.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        (&self.num[i] / &g, &self.den / &g)
    }

    fn normalize(mut self) -> Self {
        let mut g = self.den.clone();
        for c in &self.num {
            g = g.gcd(c);
            if g.is_one() {
                return self;
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return self;
        }
        for c in &mut self.num {
            *c /= &g;
        }
        self.den /= &g;
        self
    }
}

#[derive(Debug)]
struct CycInner {
    r: usize,
    theta_table: Vec<CycElem>,
}

/// The cyclotomic field `ℚ(θ) = ℚ[x]/(Φ_r)` for an odd prime `r`.
#[derive(Debug, Clone)]
pub struct CyclotomicField(Arc<CycInner>);

impl CyclotomicField {
    pub fn new(r: u64) -> Self {
        let r = r as usize;
        let theta_table = (0..r)
            .map(|j| {
                let mut wide = vec![BigInt::zero(); r];
                wide[j] = BigInt::one();
                Self::reduce_wide(r, wide, BigInt::one())
            })
            .collect();
        CyclotomicField(Arc::new(CycInner { r, theta_table }))
    }

    /// Reduces coefficients of `1, θ, …, θ^{r−1}` using
    /// `θ^{r−1} = −(1 + θ + ⋯ + θ^{r−2})`.
    fn reduce_wide(r: usize, mut wide: Vec<BigInt>, den: BigInt) -> CycElem {
        debug_assert_eq!(wide.len(), r);
        let top = wide.pop().unwrap();
        if !top.is_zero() {
            for c in &mut wide {
                *c -= &top;
            }
        }
        debug_assert_eq!(wide.len(), r - 1);
        CycElem { num: wide, den }.normalize()
    }

    /// Galois conjugate `θ ↦ θ^k`.
    fn conjugate(&self, a: &CycElem, k: usize) -> CycElem {
        let r = self.0.r;
        let mut wide = vec![BigInt::zero(); r];
        for (i, c) in a.num.iter().enumerate() {
            wide[i * k % r] += c;
        }
        Self::reduce_wide(r, wide, a.den.clone())
    }

    fn rational(&self, num: BigInt, den: BigInt) -> CycElem {
        let mut v = vec![BigInt::zero(); self.0.r - 1];
        v[0] = num;
        let (v, den) = if den.is_negative() {
            (v.into_iter().map(|c| -c).collect(), -den)
        } else {
            (v, den)
        };
        CycElem { num: v, den }.normalize()
    }

    pub fn degree(&self) -> usize {
        self.0.r - 1
    }
}

impl Field for CyclotomicField {
    type Elem = CycElem;

    fn root_order(&self) -> u64 {
        self.0.r as u64
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Cyclotomic { r: self.0.r as u64 }
    }

    fn zero(&self) -> CycElem {
        self.rational(BigInt::zero(), BigInt::one())
    }

    fn one(&self) -> CycElem {
        self.rational(BigInt::one(), BigInt::one())
    }

    fn from_int(&self, n: i64) -> CycElem {
        self.rational(BigInt::from(n), BigInt::one())
    }

    fn add(&self, a: &CycElem, b: &CycElem) -> CycElem {
        if a.den == b.den {
            let num = a.num.iter().zip(&b.num).map(|(x, y)| x + y).collect();
            return CycElem { num, den: a.den.clone() }.normalize();
        }
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        CycElem { num, den: &a.den * &b.den }.normalize()
    }

    fn sub(&self, a: &CycElem, b: &CycElem) -> CycElem {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &CycElem) -> CycElem {
        CycElem {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &CycElem, b: &CycElem) -> CycElem {
        let r = self.0.r;
        let mut wide = vec![BigInt::zero(); r];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    wide[(i + j) % r] += x * y;
                }
            }
        }
        Self::reduce_wide(r, wide, &a.den * &b.den)
    }

    /// `a^{-1} = (∏_{k=2}^{r−1} σ_k(a)) / N(a)` where `N(a) = ∏_k σ_k(a)` is
    /// rational.
    fn inv(&self, a: &CycElem) -> Option<CycElem> {
        if self.is_zero(a) {
            return None;
        }
        let r = self.0.r;
        let mut others = self.one();
        for k in 2..r {
            others = self.mul(&others, &self.conjugate(a, k));
        }
        let norm = self.mul(a, &others);
        debug_assert!(norm.num[1..].iter().all(Zero::is_zero));
        let (n, d) = (norm.num[0].clone(), norm.den);
        // 1 / (n/d) = d/n
        let scale = self.rational(d, n);
        Some(self.mul(&others, &scale))
    }

    fn is_zero(&self, a: &CycElem) -> bool {
        a.num.iter().all(Zero::is_zero)
    }

    fn theta_pow(&self, k: i64) -> CycElem {
        self.0.theta_table[k.rem_euclid(self.0.r as i64) as usize].clone()
    }

    fn theta_log(&self, a: &CycElem) -> Option<u64> {
        self.0.theta_table.iter().position(|t| t == a).map(|j| j as u64)
    }

    fn encode(&self, a: &CycElem) -> Value {
        Value::Array(
            (0..a.num.len())
                .map(|i| {
                    let (n, d) = a.coefficient(i);
                    Value::String(format!("{n}/{d}"))
                })
                .collect(),
        )
    }

    fn decode(&self, v: &Value) -> Result<CycElem, FieldError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == self.0.r - 1)
            .ok_or_else(|| FieldError::Decode(format!("expected {} rationals, got {v}", self.0.r - 1)))?;
        let mut acc = self.zero();
        for (i, c) in arr.iter().enumerate() {
            let s = c.as_str().ok_or_else(|| FieldError::Decode(format!("bad coefficient {c}")))?;
            let (n, d) = s.split_once('/').unwrap_or((s, "1"));
            let n: BigInt = n.trim().parse().map_err(|_| FieldError::Decode(format!("bad numerator {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| FieldError::Decode(format!("bad denominator {s:?}")))?;
            if d.is_zero() {
                return Err(FieldError::Decode("zero denominator".into()));
            }
            let term = self.mul(&self.rational(n, d), &self.theta_pow(i as i64));
            acc = self.add(&acc, &term);
        }
        Ok(acc)
    }

    fn format(&self, a: &CycElem, gen: &str) -> String {
        let mut out = String::new();
        for i in 0..a.num.len() {
            let (n, d) = a.coefficient(i);
            if n.is_zero() {
                continue;
            }
            let neg = n.is_negative();
            let mag = n.abs();
            let coeff = if d.is_one() { mag.to_string() } else { format!("{mag}/{d}") };
            let term = match (i, coeff.as_str()) {
                (0, c) => c.to_string(),
                (1, "1") => gen.to_string(),
                (1, c) => format!("{c}*{gen}"),
                (i, "1") => format!("{gen}^{i}"),
                (i, c) => format!("{c}*{gen}^{i}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> CycElem {
        let num = (0..self.0.r - 1).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect();
        let den = BigInt::from(rng.gen_range(1i64..=3));
        CycElem { num, den }.normalize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_reduction() {
        let f = CyclotomicField::new(5);
        // θ^4 = −1 − θ − θ² − θ³
        assert_eq!(f.encode(&f.theta_pow(4)), serde_json::json!(["-1/1", "-1/1", "-1/1", "-1/1"]));
        assert_eq!(f.theta_pow(7), f.theta_pow(2));
        assert_eq!(f.theta_pow(-1), f.theta_pow(4));
    }

    #[test]
    fn inverse_of_gauss_period() {
        let f = CyclotomicField::new(3);
        // (θ² − θ)² = −3
        let x = f.sub(&f.theta_pow(2), &f.theta());
        assert_eq!(f.mul(&x, &x), f.from_int(-3));
        let xi = f.inv(&x).unwrap();
        assert_eq!(f.mul(&xi, &f.from_int(-3)), x);
        assert_eq!(f.format(&xi, "theta"), "1/3 + 2/3*theta");
    }

    #[test]
    fn serialization_is_lowest_terms() {
        let f = CyclotomicField::new(3);
        let half = f.inv(&f.from_int(2)).unwrap();
        let x = f.add(&half, &f.mul(&f.from_int(3), &f.theta()));
        assert_eq!(f.encode(&x), serde_json::json!(["1/2", "3/1"]));
        assert_eq!(f.format(&f.neg(&x), "t"), "-1/2 - 3*t");
    }
}
