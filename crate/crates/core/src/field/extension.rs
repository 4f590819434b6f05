use std::sync::Arc;

use rand::Rng;
use serde_json::Value;

use super::arith::{is_prime, mul_mod, mod_pow, prime_factors};
use super::{Field, FieldError, FieldSpec};

// Polynomials over GF(p): coefficient vectors, constant term first.

fn trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        if c != 0 {
            for i in 0..=dm {
                let sub = mul_mod(c, m[i], p);
                r[d - dm + i] = (r[d - dm + i] + p - sub) % p;
            }
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, m, p);
        }
        b = poly_mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic `f` of degree `k ≥ 1` over
/// `GF(p)`: `x^{p^k} ≡ x (mod f)` and `gcd(x^{p^{k/q}} − x, f) = 1` for every
/// prime `q | k`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frob[j] = x^{p^j} mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for j in 1..=k {
        let next = poly_pow_mod(&frob[j - 1], p, f, p);
        frob.push(next);
    }
    if poly_sub(&frob[k], &poly_rem(&x, f, p), p).iter().any(|&c| c != 0) {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|q| {
        let h = poly_sub(&frob[k / q as usize], &x, p);
        let g = poly_gcd(f, &h, p);
        g.len() == 1
    })
}

/// The lexicographically smallest monic irreducible polynomial of degree `k`
/// over `GF(p)`, coefficients compared from the top degree down. Returned
/// constant term first.
pub fn find_irreducible_polynomial(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut lower = vec![0u64; k];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment lower as a base-p number, constant term least significant
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < k, "an irreducible polynomial of every degree exists");
        }
    }
}

#[derive(Debug)]
struct ExtInner {
    r: u64,
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    theta_table: Vec<Vec<u64>>,
}

/// `GF(p^k) = GF(p)[x]/(f)`; elements are coefficient vectors of length `k`.
#[derive(Debug, Clone)]
pub struct ExtensionField(Arc<ExtInner>);

impl ExtensionField {
    pub fn new(r: u64, p: u64, k: u32, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let invalid = |m: String| Err(FieldError::InvalidFieldSpec(m));
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if p == r {
            return invalid(format!("characteristic {p} equals r"));
        }
        if p >= 1 << 32 || k == 0 {
            return invalid(format!("unsupported field GF({p}^{k})"));
        }
        let q = match p.checked_pow(k) {
            Some(q) if q < 1 << 62 => q,
            _ => return invalid(format!("GF({p}^{k}) is too large")),
        };
        if (q - 1) % r != 0 {
            return invalid(format!("{r} does not divide {p}^{k} - 1"));
        }
        if modulus.len() != k as usize + 1 || modulus[k as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return invalid("modulus must be a monic degree-k polynomial with reduced coefficients".into());
        }
        if !is_irreducible(&modulus, p) {
            return invalid("modulus is reducible".into());
        }
        let mut field = ExtensionField(Arc::new(ExtInner {
            r,
            p,
            k: k as usize,
            modulus,
            theta_table: Vec::new(),
        }));
        let g = field.smallest_generator(q);
        let theta = field.pow(&g, (q - 1) / r);
        let table = (0..r).map(|j| field.pow(&theta, j)).collect();
        Arc::get_mut(&mut field.0).expect("unshared").theta_table = table;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Element with integer encoding `n = Σ c_i p^i`.
    #[allow(clippy::wrong_self_convention)]
    fn from_encoding(&self, mut n: u64) -> Vec<u64> {
        let p = self.0.p;
        (0..self.0.k)
            .map(|_| {
                let c = n % p;
                n /= p;
                c
            })
            .collect()
    }

    fn smallest_generator(&self, q: u64) -> Vec<u64> {
        let factors = prime_factors(q - 1);
        (1..q)
            .map(|n| self.from_encoding(n))
            .find(|g| factors.iter().all(|&l| !self.is_one(&self.pow(g, (q - 1) / l))))
            .expect("multiplicative group is cyclic")
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn root_order(&self) -> u64 {
        self.0.r
    }

    fn characteristic(&self) -> u64 {
        self.0.p
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::ExtensionField {
            r: self.0.r,
            p: self.0.p,
            k: self.0.k as u32,
            modulus: self.0.modulus.clone(),
        }
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.0.k]
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.0.k];
        v[0] = 1;
        v
    }

    fn from_int(&self, n: i64) -> Vec<u64> {
        let mut v = vec![0; self.0.k];
        v[0] = n.rem_euclid(self.0.p as i64) as u64;
        v
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let p = self.0.p;
        a.iter().map(|x| (p - x) % p).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let ExtInner { p, k, ref modulus, .. } = *self.0;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c != 0 {
                for (i, &m) in modulus.iter().take(k).enumerate() {
                    let idx = d - k + i;
                    prod[idx] = (prod[idx] + (p - c) * m) % p;
                }
            }
        }
        prod.truncate(k);
        prod
    }

    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let q = self.0.p.pow(self.0.k as u32);
        Some(self.pow(a, q - 2))
    }

    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn theta_pow(&self, k: i64) -> Vec<u64> {
        self.0.theta_table[k.rem_euclid(self.0.r as i64) as usize].clone()
    }

    fn theta_log(&self, a: &Vec<u64>) -> Option<u64> {
        self.0.theta_table.iter().position(|t| t == a).map(|j| j as u64)
    }

    fn encode(&self, a: &Vec<u64>) -> Value {
        Value::Array(a.iter().map(|c| Value::String(c.to_string())).collect())
    }

    fn decode(&self, v: &Value) -> Result<Vec<u64>, FieldError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == self.0.k)
            .ok_or_else(|| FieldError::Decode(format!("expected {} coefficients, got {v}", self.0.k)))?;
        arr.iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| s.parse::<u64>().ok())
                    .filter(|&x| x < self.0.p)
                    .ok_or_else(|| FieldError::Decode(format!("bad coefficient {c}")))
            })
            .collect()
    }

    fn format(&self, a: &Vec<u64>, gen: &str) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => gen.to_string(),
                (1, c) => format!("{c}*{gen}"),
                (i, 1) => format!("{gen}^{i}"),
                (i, c) => format!("{c}*{gen}^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.0.k).map(|_| rng.gen_range(0..self.0.p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_search() {
        assert_eq!(find_irreducible_polynomial(2, 2), vec![1, 1, 1]);
        assert_eq!(find_irreducible_polynomial(2, 1), vec![0, 1]);
        assert_eq!(find_irreducible_polynomial(2, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(find_irreducible_polynomial(2, 3), vec![1, 1, 0, 1]);
        // x^2 + 2 is the first monic quadratic over GF(5) without a root
        assert_eq!(find_irreducible_polynomial(5, 2), vec![2, 0, 1]);
    }

    /// Brute-force oracle: no roots and no monic quadratic factor (enough
    /// for degree ≤ 5).
    fn irreducible_by_trial(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            let count = p.pow(d as u32);
            for n in 0..count {
                let mut g: Vec<u64> = (0..d).map(|i| n / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u64, 3, 5] {
            for k in 1..=4u32 {
                for n in 0..p.pow(k) {
                    let mut f: Vec<u64> = (0..k).map(|i| n / p.pow(i) % p).collect();
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), irreducible_by_trial(&f, p), "{f:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn gf4_theta_is_x() {
        let f = ExtensionField::new(3, 2, 2, vec![1, 1, 1]).unwrap();
        assert_eq!(f.theta(), vec![0, 1]);
        // all of GF(4)^* is {1, x, x + 1}; x has order 3
        assert_eq!(f.mul(&f.theta(), &f.theta()), vec![1, 1]);
        assert_eq!(f.format(&vec![1, 1], "w"), "w + 1");
    }

    #[test]
    fn gf16_inverse() {
        let f = ExtensionField::new(5, 2, 4, vec![1, 1, 0, 0, 1]).unwrap();
        for n in 1..16 {
            let x = f.from_encoding(n);
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
    }
}
