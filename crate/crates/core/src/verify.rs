//! The relation suite: every identity the construction relies on, evaluated
//! exactly at given parameters, plus closure-based order certification and
//! deliberately broken generator sets (negative controls).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::heisenberg::{comm_exponent, pi_map, ExtraspecialElement};
use crate::linops::{kron, DenseMatrix, Echelon, Operator};
use crate::symplectic::{evaluate_word, gen_images, group_order, random_word, SpMatrix};
use crate::weilgen::{gauss_sum_identity, op_negation, WeilGeneratorSet, WeilParams};
use crate::weilmodule::{middle_action, quotient_action, restrict, spin, submodule_bases, SubmoduleBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckParams {
    pub r: u64,
    pub l: usize,
    pub field: String,
}

impl fmt::Display for CheckParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r={} l={} field={}", self.r, self.l, self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub params: CheckParams,
    pub status: CheckStatus,
    /// For failures, the identity that failed and the offending entry; for
    /// skipped checks, the reason.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// No check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            write!(f, "[{status}] {} ({})", c.id, c.params)?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        let (p, s, x) = (self.count(CheckStatus::Pass), self.count(CheckStatus::Skipped), self.count(CheckStatus::Fail));
        write!(f, "{p} passed, {x} failed, {s} skipped")
    }
}

type Outcome = Result<(), String>;

/// Field elements in witnesses: `theta` for the cyclotomic generator, `x`
/// for the polynomial generator of an extension field.
fn show<F: Field>(f: &F, a: &F::Elem) -> String {
    f.format(a, if f.characteristic() == 0 { "theta" } else { "x" })
}

/// Explains why `lhs ≠ rhs`: the scalar `c` if `lhs = c · rhs`, and the
/// first differing entry.
pub fn describe_difference<F: Field>(f: &F, lhs: &DenseMatrix<F::Elem>, rhs: &DenseMatrix<F::Elem>) -> String {
    if (lhs.rows(), lhs.cols()) != (rhs.rows(), rhs.cols()) {
        return format!("shape {}x{} vs {}x{}", lhs.rows(), lhs.cols(), rhs.rows(), rhs.cols());
    }
    let rhs_name = if rhs.is_identity(f) { "I" } else { "expected" };
    let diff = (0..lhs.rows())
        .flat_map(|i| (0..lhs.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| lhs.get(i, j) != rhs.get(i, j));
    let Some((i, j)) = diff else {
        return "matrices agree".into();
    };
    let entry = format!(
        "entry ({i},{j}) is {} instead of {}",
        show(f, lhs.get(i, j)),
        show(f, rhs.get(i, j))
    );
    let pivot = rhs.entries().iter().position(|x| !f.is_zero(x));
    if let Some(k) = pivot {
        let c = f.div(&lhs.entries()[k], &rhs.entries()[k]).expect("nonzero");
        if !f.is_zero(&c) && rhs.scale(f, &c) == *lhs {
            return format!("got ({})·{rhs_name}; {entry}", show(f, &c));
        }
    }
    entry
}

fn sign_pow<F: Field>(f: &F, e: u64) -> F::Elem {
    f.from_int(if e.is_multiple_of(2) { 1 } else { -1 })
}

struct Suite<'a, F: Field> {
    gens: &'a WeilGeneratorSet<F>,
    report: VerificationReport,
    params: CheckParams,
    rng: ChaCha8Rng,
}

impl<'a, F: Field> Suite<'a, F> {
    fn new(gens: &'a WeilGeneratorSet<F>) -> Self {
        let p = &gens.params;
        let params = CheckParams { r: p.r(), l: p.ell(), field: p.field().spec().to_string() };
        Suite { gens, report: VerificationReport::default(), params, rng: ChaCha8Rng::seed_from_u64(0x5eed) }
    }

    fn f(&self) -> &'a F {
        self.gens.field()
    }

    fn n(&self) -> usize {
        self.gens.dim()
    }

    fn r(&self) -> u64 {
        self.gens.params.r()
    }

    fn ell(&self) -> usize {
        self.gens.params.ell()
    }

    fn record(&mut self, id: &str, outcome: Outcome) {
        let (status, witness) = match outcome {
            Ok(()) => (CheckStatus::Pass, None),
            Err(w) => (CheckStatus::Fail, Some(w)),
        };
        self.report.checks.push(CheckResult { id: id.into(), params: self.params.clone(), status, witness });
    }

    fn skip(&mut self, id: &str, why: &str) {
        self.report.checks.push(CheckResult {
            id: id.into(),
            params: self.params.clone(),
            status: CheckStatus::Skipped,
            witness: Some(why.into()),
        });
    }

    fn prod(&self, ops: &[&Operator<F::Elem>]) -> Operator<F::Elem> {
        Operator::product(self.n(), ops.iter().map(|&op| op.clone()))
    }

    fn inv(&self, op: &Operator<F::Elem>) -> Operator<F::Elem> {
        op.inverse(self.f()).expect("generators are invertible")
    }

    fn pow(&self, op: &Operator<F::Elem>, k: i64) -> Operator<F::Elem> {
        op.pow(self.f(), k).expect("generators are invertible")
    }

    fn scalar(&self, c: F::Elem) -> Operator<F::Elem> {
        Operator::Scalar { dim: self.n(), c }
    }

    fn identity(&self) -> Operator<F::Elem> {
        self.scalar(self.f().one())
    }

    fn commutator(&self, x: &Operator<F::Elem>, y: &Operator<F::Elem>) -> Operator<F::Elem> {
        self.prod(&[x, y, &self.inv(x), &self.inv(y)])
    }

    fn op_eq(&self, label: &str, lhs: &Operator<F::Elem>, rhs: &Operator<F::Elem>) -> Outcome {
        let f = self.f();
        let (l, r) = (lhs.materialize(f), rhs.materialize(f));
        if l == r {
            Ok(())
        } else {
            Err(format!("{label}: {}", describe_difference(f, &l, &r)))
        }
    }

    fn elem_eq(&self, label: &str, lhs: &F::Elem, rhs: &F::Elem) -> Outcome {
        if lhs == rhs {
            Ok(())
        } else {
            Err(format!("{label}: got {}, expected {}", show(self.f(), lhs), show(self.f(), rhs)))
        }
    }

    fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        outcomes.into_iter().collect::<Result<Vec<()>, String>>().map(|_| ())
    }

    fn slots(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.ell()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.gens.d.keys().copied().collect()
    }

    // ---- extraspecial group and defining relations -------------------------

    fn extraspecial(&mut self) {
        let g = self.gens;
        let r = self.r() as i64;
        let orders = Self::all(self.slots().flat_map(|t| {
            [
                self.op_eq(&format!("A{t}^r"), &self.pow(&g.a[t - 1], r), &self.identity()),
                self.op_eq(&format!("B{t}^r"), &self.pow(&g.b[t - 1], r), &self.identity()),
            ]
        }));
        self.record("extraspecial_orders", orders);

        let mut outcomes = Vec::new();
        for s in self.slots() {
            for t in self.slots() {
                let (a_s, b_s, a_t, b_t) = (&g.a[s - 1], &g.b[s - 1], &g.a[t - 1], &g.b[t - 1]);
                let expect = if s == t { self.scalar(self.f().theta()) } else { self.identity() };
                outcomes.push(self.op_eq(&format!("[A{s},B{t}]"), &self.commutator(a_s, b_t), &expect));
                outcomes.push(self.op_eq(&format!("[A{s},A{t}]"), &self.commutator(a_s, a_t), &self.identity()));
                outcomes.push(self.op_eq(&format!("[B{s},B{t}]"), &self.commutator(b_s, b_t), &self.identity()));
            }
        }
        self.record("extraspecial_commutators", Self::all(outcomes));

        let half = (self.r() as i64 + 1) / 2;
        let u = Self::all(self.slots().map(|t| {
            let rhs = self.prod(&[&self.pow(&g.a[t - 1], half), &g.e[t - 1]]);
            self.op_eq(&format!("U{t} = A{t}^((r+1)/2) E{t}"), &g.u[t - 1], &rhs)
        }));
        self.record("u_equals_a_power_times_e", u);
    }

    fn kronecker(&mut self) {
        let g = self.gens;
        let f = self.f();
        let (r, ell) = (self.r() as usize, self.ell());
        let slice = WeilGeneratorSet::new(&g.params.slice());
        let mut outcomes = Vec::new();
        for t in self.slots() {
            let left = DenseMatrix::identity(f, r.pow(t as u32 - 1));
            let right = DenseMatrix::identity(f, r.pow((ell - t) as u32));
            for (name, op, small) in [
                ("A", &g.a, &slice.a),
                ("B", &g.b, &slice.b),
                ("C", &g.c, &slice.c),
                ("E", &g.e, &slice.e),
            ] {
                let expect = kron(f, &kron(f, &left, &small[0].materialize(f)), &right);
                let got = op[t - 1].materialize(f);
                if got != expect {
                    outcomes.push(Err(format!("{name}{t}: {}", describe_difference(f, &got, &expect))));
                }
            }
        }
        self.record("tensor_kronecker_sandwich", Self::all(outcomes));
    }

    // ---- rank-one identities ----------------------------------------------

    fn rank_one(&mut self) {
        let own;
        let slice = if self.ell() == 1 {
            self.gens
        } else {
            own = WeilGeneratorSet::new(&self.gens.params.slice());
            &own
        };
        let mut sub = Suite::new(slice);
        sub.params = self.params.clone();
        sub.rank_one_checks();
        self.report.extend(sub.report);
    }

    fn rank_one_checks(&mut self) {
        let g = self.gens;
        let f = self.f();
        let r = self.r();
        let half = (r - 1) / 2;
        let sign = sign_pow(f, half);
        let r_elem = f.from_int(r as i64);
        let (c, u, lam_c) = (&g.c[0], &g.u[0], &g.lam_c[0]);

        let c2 = self.pow(c, 2);
        let rsigma = g.sigma.scaled(f, &r_elem);
        self.record("c_squared_is_r_sigma", self.op_eq("C^2 = r sigma", &c2, &rsigma));

        let expect = f.mul(&sign, &f.pow(&r_elem, r));
        let det_c = c.materialize(f).det(f).expect("square");
        let det_c2 = c2.materialize(f).det(f).expect("square");
        let outcome = Self::all([
            self.elem_eq("det(C)^2", &f.mul(&det_c, &det_c), &expect),
            self.elem_eq("det(C^2)", &det_c2, &expect),
        ]);
        self.record("det_c_squared", outcome);

        let lam2r = f.mul(&f.mul(&g.lambda, &g.lambda), &r_elem);
        self.record("lambda_squared_times_r", self.elem_eq("lambda^2 r", &lam2r, &sign));

        let outcome = self.op_eq("(lambda C)^2", &self.pow(lam_c, 2), &g.sigma.scaled(f, &sign));
        self.record("lambda_c_squared_is_signed_sigma", outcome);

        let det_lc = lam_c.det(f).expect("square");
        self.record("det_lambda_c", self.elem_eq("det(lambda C)", &det_lc, &f.one()));

        let det_u = u.det(f).expect("square");
        let expect = if r == 3 { f.theta() } else { f.one() };
        self.record("det_u", self.elem_eq("det(U)", &det_u, &expect));

        let tr = u.trace(f);
        self.record("trace_u_squared", self.elem_eq("Tr(U)^2", &f.mul(&tr, &tr), &f.mul(&sign, &r_elem)));

        let cu = self.prod(&[c, u]);
        let cu3 = self.pow(&cu, 3);
        let outcome = self.op_eq("(CU)^3 = r Tr(U) I", &cu3, &self.scalar(f.mul(&r_elem, &tr)));
        self.record("cu_cubed_is_r_trace_u", outcome);

        let gauss = gauss_sum_identity(f);
        let outcome = Self::all([
            self.elem_eq("det(C) vs (2|r) r^((r-1)/2) sum theta^(i^2)", &det_c, &gauss.via_gauss_sum),
            self.elem_eq("det(C) vs r^((r-1)/2) sum theta^(i(i+r)/2)", &det_c, &gauss.via_u_trace),
            self.elem_eq("elimination vs identity", &gauss.det_c, &det_c),
        ]);
        self.record("gauss_sum_identity", outcome);

        if r == 3 {
            let pres = check_sl23_presentation(g);
            self.report.checks.extend(pres.checks.into_iter().map(|mut c| {
                c.params = self.params.clone();
                c
            }));
        }
    }

    // ---- relations of the generator set ------------------------------------

    fn generator_relations(&mut self) {
        let g = self.gens;
        let f = self.f();
        let r = self.r() as i64;
        let id = self.identity();

        let r_elem = f.from_int(r);
        let outcome = Self::all(self.slots().map(|t| {
            let rp = slot_negation(&g.params, t).scaled(f, &r_elem);
            self.op_eq(&format!("C{t}^2 = r P{t}"), &self.pow(&g.c[t - 1], 2), &rp)
        }));
        self.record("c_t_squared_is_r_slot_negation", outcome);

        let outcome = Self::all(
            self.slots().map(|t| self.op_eq(&format!("(lambda C{t})^4"), &self.pow(&g.lam_c[t - 1], 4), &id)),
        );
        self.record("lambda_c_fourth_power", outcome);

        let outcome = Self::all(self.slots().map(|t| {
            let x = self.prod(&[&g.lam_c[t - 1], &g.u[t - 1]]);
            self.op_eq(&format!("(lambda C{t} U{t})^3"), &self.pow(&x, 3), &id)
        }));
        self.record("lambda_c_u_cubed", outcome);

        let outcome = Self::all(
            self.slots()
                .map(|t| self.op_eq(&format!("U{t}^r"), &self.pow(&g.u[t - 1], r), &id))
                .chain(self.pairs().into_iter().map(|(s, t)| {
                    self.op_eq(&format!("D{s}{t}^r"), &self.pow(&g.d[&(s, t)], r), &id)
                })),
        );
        self.record("u_and_d_orders", outcome);

        if self.ell() == 1 {
            self.skip("lambda_c_squared_d_squared", "needs l >= 2");
            self.skip("conjugated_d_commutator", "needs l >= 2");
        } else {
            let outcome = Self::all(self.pairs().into_iter().map(|(s, t)| {
                let x = self.prod(&[&self.pow(&g.lam_c[t - 1], 2), &g.d[&(s, t)]]);
                self.op_eq(&format!("((lambda C{t})^2 D{s}{t})^2"), &self.pow(&x, 2), &id)
            }));
            self.record("lambda_c_squared_d_squared", outcome);

            let outcome = Self::all(self.pairs().into_iter().map(|(s, t)| {
                let (c_t, d, u_t, u_s) = (&g.c[t - 1], &g.d[&(s, t)], &g.u[t - 1], &g.u[s - 1]);
                let x = self.prod(&[c_t, d, &self.inv(c_t)]);
                let lhs = self.commutator(&x, u_t);
                self.op_eq(&format!("X U{t} X^-1 U{t}^-1 = U{s} D{s}{t}"), &lhs, &self.prod(&[u_s, d]))
            }));
            self.record("conjugated_d_commutator", outcome);
        }

        let outcome = Self::all(self.pairs().into_iter().map(|(s, t)| {
            self.elem_eq(&format!("det(D{s}{t})"), &g.d[&(s, t)].det(f).expect("square"), &f.one())
        }));
        self.record("det_d", outcome);

        let det_u = if self.r() == 3 && self.ell() == 1 { f.theta() } else { f.one() };
        let outcome = Self::all(
            self.slots()
                .map(|t| self.elem_eq(&format!("det(lambda C{t})"), &g.lam_c[t - 1].det(f).expect("square"), &f.one()))
                .chain(self.slots().map(|t| {
                    self.elem_eq(&format!("det(U{t})"), &g.u[t - 1].det(f).expect("square"), &det_u)
                })),
        );
        self.record("det_tensor_generators", outcome);

        let outcome = Self::all(g.named(false).into_iter().map(|(name, op)| {
            let d = op.det(f).expect("square");
            self.elem_eq(&format!("det({name})^r"), &f.pow(&d, self.r()), &f.one())
        }));
        self.record("det_rth_power_trivial", outcome);
    }

    // ---- the involution sigma ----------------------------------------------

    fn sigma(&mut self) {
        let g = self.gens;
        let f = self.f();
        let sigma = &g.sigma;
        let id = self.identity();
        self.record("sigma_involution", self.op_eq("sigma^2", &self.pow(sigma, 2), &id));

        let outcome = Self::all(self.slots().flat_map(|t| {
            [("A", &g.a[t - 1]), ("B", &g.b[t - 1])].map(|(name, x)| {
                let lhs = self.prod(&[sigma, x, &self.inv(sigma)]);
                self.op_eq(&format!("sigma {name}{t} sigma^-1"), &lhs, &self.inv(x))
            })
        }));
        self.record("sigma_inverts_r", outcome);

        let outcome = self.sigma_centralizer();
        self.record("sigma_centralizer_is_center", outcome);

        let e = self.ell() as u64 * (self.r() - 1) / 2;
        let squares: Vec<Operator<F::Elem>> = g.lam_c.iter().map(|c| self.pow(c, 2)).collect();
        let product = Operator::product(self.n(), squares).scaled(f, &sign_pow(f, e));
        self.record("sigma_product_formula", self.op_eq("sigma = ±prod (lambda C_t)^2", sigma, &product));

        let outcome = Self::all(g.named(false).into_iter().map(|(name, op)| {
            self.op_eq(&format!("[sigma,{name}]"), &self.commutator(sigma, op), &id)
        }));
        self.record("sigma_centralizes_generators", outcome);
    }

    /// Exhaustive over all `(c, a, b)` when `r^{1+2ℓ} ≤ 243`, else 64
    /// random elements (plus all central ones).
    fn sigma_centralizer(&mut self) -> Outcome {
        let (r, ell) = (self.r(), self.ell());
        let space = self.gens.params.space();
        let size = (r as u128).pow(1 + 2 * ell as u32);
        let elements: Vec<ExtraspecialElement> = if size <= 243 {
            (0..size as u64)
                .map(|mut k| {
                    let mut digit = || {
                        let d = k % r;
                        k /= r;
                        d
                    };
                    let c = digit();
                    let a = (0..ell).map(|_| digit()).collect();
                    let b = (0..ell).map(|_| digit()).collect();
                    ExtraspecialElement::new(r, c, a, b)
                })
                .collect()
        } else {
            let mut v: Vec<_> = (0..r).map(|c| ExtraspecialElement::central(r, ell, c)).collect();
            for _ in 0..64 {
                let c = self.rng.gen_range(0..r);
                let a = (0..ell).map(|_| self.rng.gen_range(0..r)).collect();
                let b = (0..ell).map(|_| self.rng.gen_range(0..r)).collect();
                v.push(ExtraspecialElement::new(r, c, a, b));
            }
            v
        };
        let f = self.f();
        let sigma = &self.gens.sigma;
        for x in elements {
            let op = x.to_operator(f, space);
            let commutes = self.prod(&[sigma, &op]).equals(f, &self.prod(&[&op, sigma]));
            if commutes != x.is_central() {
                return Err(format!(
                    "element (c={}, a={:?}, b={:?}) {} with sigma",
                    x.c,
                    x.a,
                    x.b,
                    if commutes { "commutes" } else { "does not commute" }
                ));
            }
        }
        Ok(())
    }

    // ---- the projection pi ---------------------------------------------------

    fn pi(&mut self) {
        let g = self.gens;
        let params = &g.params;
        let f = self.f();
        let images = gen_images(self.ell(), self.r());
        let sp_eq = |label: String, op: &Operator<F::Elem>, expect: &SpMatrix| -> Outcome {
            match pi_map(op, params) {
                Ok(m) if m == *expect => Ok(()),
                Ok(m) => Err(format!("pi({label}) = [{m}], expected [{expect}]")),
                Err(e) => Err(format!("pi({label}): {e}")),
            }
        };

        let outcome = Self::all(
            self.slots()
                .flat_map(|t| {
                    [
                        sp_eq(format!("lambda C{t}"), &g.lam_c[t - 1], &images.c[t - 1]),
                        sp_eq(format!("U{t}"), &g.u[t - 1], &images.u[t - 1]),
                    ]
                })
                .chain(self.pairs().into_iter().map(|(s, t)| sp_eq(format!("D{s}{t}"), &g.d[&(s, t)], &images.d[&(s, t)]))),
        );
        self.record("pi_generator_images", outcome);

        let id = SpMatrix::identity(self.r(), self.ell());
        let outcome = Self::all(
            self.slots()
                .flat_map(|t| {
                    [
                        sp_eq(format!("A{t}"), &g.a[t - 1], &id),
                        sp_eq(format!("B{t}"), &g.b[t - 1], &id),
                        sp_eq(format!("E{t}"), &g.e[t - 1], &images.u[t - 1]),
                    ]
                })
                .chain([sp_eq("theta I".into(), &self.scalar(f.theta()), &id)]),
        );
        self.record("pi_kernel_contains_rz", outcome);

        self.record("pi_sigma_is_minus_identity", sp_eq("sigma".into(), &g.sigma, &id.neg()));

        let outcome = Self::all(images.c.iter().chain(images.d.values()).chain(&images.u).map(|m| {
            if m.is_symplectic() {
                Ok(())
            } else {
                Err(format!("[{m}] is not symplectic"))
            }
        }));
        self.record("gen_images_symplectic", outcome);

        let mut outcomes = Vec::new();
        for k in 0..4u64 {
            let seed = self.rng.gen::<u64>() ^ k;
            let w1 = random_word(self.ell(), self.r(), seed, 6);
            let w2 = random_word(self.ell(), self.r(), seed.wrapping_add(1), 6);
            let m = evaluate_word(g, &w1).expect("valid word");
            let n = evaluate_word(g, &w2).expect("valid word");
            let mn = self.prod(&[&m, &n]);
            let outcome = match (pi_map(&mn, params), pi_map(&m, params), pi_map(&n, params)) {
                (Ok(a), Ok(b), Ok(c)) if a == b.mul(&c) => Ok(()),
                (Ok(a), Ok(b), Ok(c)) => Err(format!("pi(mn) = [{a}] but pi(m)pi(n) = [{}]", b.mul(&c))),
                _ => Err("pi_map failed on a product of generators".into()),
            };
            outcomes.push(outcome);
        }
        self.record("pi_homomorphism", Self::all(outcomes));

        let (r, ell) = (self.r(), self.ell());
        let j = SpMatrix::form(r, ell);
        let basis: Vec<ExtraspecialElement> = (1..=ell)
            .flat_map(|t| [ExtraspecialElement::a_gen(r, ell, t), ExtraspecialElement::b_gen(r, ell, t)])
            .collect();
        let mut outcomes = Vec::new();
        for (i, x) in basis.iter().enumerate() {
            for (k, y) in basis.iter().enumerate() {
                if comm_exponent(x, y) != j.get(i, k) {
                    outcomes.push(Err(format!("commutator form at ({i},{k}) differs from J")));
                }
            }
        }
        if !j.mul(&j).neg().is_identity() {
            outcomes.push(Err("J is degenerate".into()));
        }
        self.record("commutator_form_is_j", Self::all(outcomes));
    }

    // ---- submodules ------------------------------------------------------------

    fn submodules(&mut self) {
        if self.f().characteristic() == 2 {
            self.char2_chain();
        } else {
            self.plus_minus();
        }
    }

    fn restrict_all(&self, basis: &SubmoduleBasis<F::Elem>) -> Outcome {
        Self::all(self.gens.named(false).into_iter().map(|(name, op)| {
            restrict(self.f(), op, basis).map(|_| ()).map_err(|e| format!("{name}: {e}"))
        }))
    }

    fn rank(&self, vectors: &[Vec<F::Elem>]) -> usize {
        let mut e = Echelon::new(self.n());
        for v in vectors {
            e.insert(self.f(), v);
        }
        e.dim()
    }

    fn spin_all(&self, basis: &SubmoduleBasis<F::Elem>) -> Outcome {
        let ops = self.gens.generators();
        Self::all(basis.vectors.iter().enumerate().map(|(i, v)| match spin(self.f(), std::slice::from_ref(v), &ops) {
            Ok(d) if d == basis.dim() => Ok(()),
            Ok(d) => Err(format!("seed {i} of {} spins to dimension {d}, not {}", basis.label, basis.dim())),
            Err(e) => Err(e.to_string()),
        }))
    }

    fn eigen(&self, basis: &SubmoduleBasis<F::Elem>, c: F::Elem) -> Outcome {
        let f = self.f();
        let m = restrict(f, &self.gens.sigma, basis).map_err(|e| e.to_string())?;
        let expect = DenseMatrix::identity(f, basis.dim()).scale(f, &c);
        if m == expect {
            Ok(())
        } else {
            Err(format!("sigma on {}: {}", basis.label, describe_difference(f, &m, &expect)))
        }
    }

    fn plus_minus(&mut self) {
        let f = self.f();
        let n = self.n();
        let bases = submodule_bases(&self.gens.params);
        let (plus, minus) = (&bases[0], &bases[1]);
        let outcome = if plus.dim() == n.div_ceil(2) && minus.dim() == (n - 1) / 2 {
            Ok(())
        } else {
            Err(format!("dims {} and {}", plus.dim(), minus.dim()))
        };
        self.record("submodule_dimensions", outcome);

        let all: Vec<_> = plus.vectors.iter().chain(&minus.vectors).cloned().collect();
        let rank = self.rank(&all);
        self.record(
            "direct_sum",
            if rank == n { Ok(()) } else { Err(format!("W+ + W- has dimension {rank} < {n}")) },
        );

        let outcome = Self::all([self.restrict_all(plus), self.restrict_all(minus)]);
        self.record("submodule_invariance", outcome);

        let outcome = Self::all([self.eigen(plus, f.one()), self.eigen(minus, f.from_int(-1))]);
        self.record("sigma_eigenspaces", outcome);

        self.record("spin_minus_irreducible", self.spin_all(minus));
        self.record("spin_plus_irreducible", self.spin_all(plus));
    }

    fn char2_chain(&mut self) {
        let f = self.f();
        let n = self.n();
        let params = &self.gens.params;
        let bases = submodule_bases(params);
        let (a, b) = (&bases[0], &bases[1]);
        let inside = a.vectors.iter().all(|v| b.coordinates(f, v).is_some());
        let outcome = if a.dim() == (n - 1) / 2 && b.dim() == n.div_ceil(2) && inside && b.dim() < n {
            Ok(())
        } else {
            Err(format!("dims {} < {} < {n}, A inside B: {inside}", a.dim(), b.dim()))
        };
        self.record("chain_dimensions", outcome);

        let outcome = Self::all([self.restrict_all(a), self.restrict_all(b)]);
        self.record("chain_invariance", outcome);

        let outcome = {
            let on_b = self.eigen(b, f.one());
            let on_quot = quotient_action(params, &self.gens.sigma, b)
                .map_err(|e| e.to_string())
                .and_then(|m| if m.is_identity(f) { Ok(()) } else { Err("sigma on W/B is not trivial".into()) });
            Self::all([on_b, on_quot])
        };
        self.record("sigma_trivial_on_chain", outcome);

        if (self.r(), self.ell()) == (3, 1) {
            self.skip("middle_factor_trivial", "G is not perfect at (r, l) = (3, 1)");
        } else {
            let outcome = Self::all(self.gens.named(false).into_iter().map(|(name, op)| {
                match middle_action(f, op, b) {
                    Ok(c) if f.is_one(&c) => Ok(()),
                    Ok(c) => Err(format!("{name} acts on B/A by {}", show(f, &c))),
                    Err(e) => Err(e.to_string()),
                }
            }));
            self.record("middle_factor_trivial", outcome);
        }

        let mut additivity = Vec::new();
        let mut agreement = Vec::new();
        for (name, op) in self.gens.named(false) {
            let traces = restrict(f, op, a)
                .and_then(|ma| Ok((ma, quotient_action(params, op, b)?, middle_action(f, op, b)?)));
            match traces {
                Ok((ma, mq, mid)) => {
                    let (ta, tq) = (ma.trace(f).expect("square"), mq.trace(f).expect("square"));
                    let total = f.add(&f.add(&ta, &tq), &mid);
                    additivity.push(self.elem_eq(&format!("Tr({name})"), &total, &op.trace(f)));
                    agreement.push(self.elem_eq(&format!("Tr({name}) on A vs W/B"), &ta, &tq));
                }
                Err(e) => additivity.push(Err(format!("{name}: {e}"))),
            }
        }
        self.record("trace_additivity", Self::all(additivity));
        let dims = if a.dim() == n - b.dim() { Ok(()) } else { Err("dim A != dim W/B".into()) };
        self.record("socle_quotient_agreement", Self::all(std::iter::once(dims).chain(agreement)));

        self.record("spin_socle_irreducible", self.spin_all(a));
    }
}

/// Every relation check on a (possibly deliberately broken) generator set.
pub fn run_checks<F: Field>(gens: &WeilGeneratorSet<F>) -> VerificationReport {
    let mut suite = Suite::new(gens);
    suite.extraspecial();
    suite.kronecker();
    suite.rank_one();
    suite.generator_relations();
    suite.sigma();
    suite.pi();
    suite.submodules();
    suite.report
}

/// [`run_checks`] on the standard generator set for `params`.
pub fn run_relation_suite<F: Field>(params: &WeilParams<F>) -> VerificationReport {
    run_checks(&WeilGeneratorSet::new(params))
}

/// `x = λC`, `y = U` at `r = 3` satisfy `x⁴ = y³ = (xy)³ = [x², y] = 1`;
/// also `x²` commutes with `x`.
pub fn check_sl23_presentation<F: Field>(gens: &WeilGeneratorSet<F>) -> VerificationReport {
    let mut suite = Suite::new(gens);
    let id = suite.identity();
    let (x, y) = (&gens.lam_c[0], &gens.u[0]);
    let x2 = suite.pow(x, 2);
    let xy = suite.prod(&[x, y]);
    let outcomes = [
        ("presentation_x4", suite.op_eq("x^4", &suite.pow(x, 4), &id)),
        ("presentation_y3", suite.op_eq("y^3", &suite.pow(y, 3), &id)),
        ("presentation_xy_cubed", suite.op_eq("(xy)^3", &suite.pow(&xy, 3), &id)),
        (
            "presentation_x2_central",
            Suite::<F>::all([
                suite.op_eq("[x^2,y]", &suite.commutator(&x2, y), &id),
                suite.op_eq("[x^2,x]", &suite.commutator(&x2, x), &id),
            ]),
        ),
    ];
    for (id, outcome) in outcomes {
        suite.record(id, outcome);
    }
    suite.report
}

/// Order of the group generated by `gens`, by breadth-first closure keyed
/// on the exact (canonical) matrix entries.
pub fn closure_order<F: Field>(f: &F, gens: &[DenseMatrix<F::Elem>], cap: usize) -> Result<usize, VerifyError> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let id = DenseMatrix::identity(f, first.rows());
    let mut seen: HashMap<DenseMatrix<F::Elem>, ()> = HashMap::from([(id.clone(), ())]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.matmul(f, &x).expect("square generators");
            if !seen.contains_key(&y) {
                if seen.len() >= cap {
                    return Err(VerifyError::CapExceeded { cap });
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

/// Closure of the materialized `{λC_t, D_{st}, U_t}` compared to
/// `|Sp_{2ℓ}(r)|`; skipped when the order exceeds `cap`.
pub fn closure_check<F: Field>(gens: &WeilGeneratorSet<F>, cap: usize) -> CheckResult {
    let suite = Suite::new(gens);
    let params = suite.params.clone();
    let id = "closure_order_matches_group_order".to_string();
    let expected = group_order(gens.params.ell(), gens.params.r());
    if expected > BigUint::from(cap) {
        return CheckResult {
            id,
            params,
            status: CheckStatus::Skipped,
            witness: Some(format!("|Sp| = {expected} exceeds cap {cap}")),
        };
    }
    let f = gens.field();
    let mats: Vec<_> = gens.generators().into_iter().map(|op| op.materialize(f)).collect();
    match closure_order(f, &mats, cap) {
        Ok(n) if BigUint::from(n) == expected => CheckResult { id, params, status: CheckStatus::Pass, witness: None },
        Ok(n) => CheckResult {
            id,
            params,
            status: CheckStatus::Fail,
            witness: Some(format!("closure has {n} elements, |Sp| = {expected}")),
        },
        Err(e) => CheckResult { id, params, status: CheckStatus::Skipped, witness: Some(e.to_string()) },
    }
}

/// Negative control: `λ → −λ`.
pub fn mutate_lambda_sign<F: Field>(gens: &WeilGeneratorSet<F>) -> WeilGeneratorSet<F> {
    let f = gens.field();
    let minus = f.from_int(-1);
    let mut out = gens.clone();
    out.lambda = f.neg(&gens.lambda);
    out.lam_c = gens.lam_c.iter().map(|c| c.scaled(f, &minus)).collect();
    out
}

/// Negative control: `U_t → E_t`.
pub fn mutate_u_to_e<F: Field>(gens: &WeilGeneratorSet<F>) -> WeilGeneratorSet<F> {
    let mut out = gens.clone();
    out.u = gens.e.clone();
    out
}

/// Negative control: add one to entry `(0, 1)` of `λC_1` and `C_1`.
pub fn mutate_c_entry<F: Field>(gens: &WeilGeneratorSet<F>) -> WeilGeneratorSet<F> {
    let f = gens.field();
    let corrupt = |op: &Operator<F::Elem>| {
        let mut m = op.materialize(f);
        let x = f.add(m.get(0, 1), &f.one());
        m.set(0, 1, x);
        Operator::Dense(m)
    };
    let mut out = gens.clone();
    out.lam_c[0] = corrupt(&gens.lam_c[0]);
    out.c[0] = corrupt(&gens.c[0]);
    out
}

/// `v_ξ ↦ v_{−ξ}` on slot `t` only.
pub fn slot_negation<F: Field>(params: &WeilParams<F>, t: usize) -> Operator<F::Elem> {
    op_negation(params.field(), params.space(), &[t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{CyclotomicField, ExtensionField, PrimeField};

    fn assert_passes(report: &VerificationReport) {
        assert!(report.passed(), "{report}");
        assert!(report.count(CheckStatus::Pass) > 20);
    }

    #[test]
    fn suite_passes_r3() {
        assert_passes(&run_relation_suite(&WeilParams::new(CyclotomicField::new(3), 1).unwrap()));
        assert_passes(&run_relation_suite(&WeilParams::new(PrimeField::new(3, 7).unwrap(), 2).unwrap()));
        let gf4 = ExtensionField::new(3, 2, 2, vec![1, 1, 1]).unwrap();
        assert_passes(&run_relation_suite(&WeilParams::new(gf4, 2).unwrap()));
    }

    #[test]
    fn suite_passes_r5_l2() {
        assert_passes(&run_relation_suite(&WeilParams::new(PrimeField::new(5, 11).unwrap(), 2).unwrap()));
    }

    #[test]
    fn lambda_sign_control_witness() {
        let gens = WeilGeneratorSet::new(&WeilParams::new(CyclotomicField::new(3), 1).unwrap());
        let report = run_checks(&mutate_lambda_sign(&gens));
        let cube = report.get("lambda_c_u_cubed").unwrap();
        assert_eq!(cube.status, CheckStatus::Fail);
        assert!(cube.witness.as_ref().unwrap().contains("got (-1)·I"), "{:?}", cube.witness);
    }

    #[test]
    fn other_controls_fail() {
        let gens = WeilGeneratorSet::new(&WeilParams::new(PrimeField::new(3, 7).unwrap(), 1).unwrap());
        assert!(!run_checks(&mutate_u_to_e(&gens)).passed());
        assert!(!run_checks(&mutate_c_entry(&gens)).passed());
    }

    #[test]
    fn presentation_over_each_family() {
        let gf4 = ExtensionField::new(3, 2, 2, vec![1, 1, 1]).unwrap();
        for report in [
            check_sl23_presentation(&WeilGeneratorSet::new(&WeilParams::new(CyclotomicField::new(3), 1).unwrap())),
            check_sl23_presentation(&WeilGeneratorSet::new(&WeilParams::new(PrimeField::new(3, 7).unwrap(), 1).unwrap())),
            check_sl23_presentation(&WeilGeneratorSet::new(&WeilParams::new(gf4, 1).unwrap())),
        ] {
            assert_eq!(report.count(CheckStatus::Pass), 4, "{report}");
        }
    }

    #[test]
    fn closure_small() {
        let f = PrimeField::new(3, 7).unwrap();
        let gens = WeilGeneratorSet::new(&WeilParams::new(f.clone(), 1).unwrap());
        let mats: Vec<_> = gens.generators().into_iter().map(|op| op.materialize(&f)).collect();
        assert_eq!(closure_order(&f, &mats, 1000), Ok(24));
        let mut rev = mats.clone();
        rev.reverse();
        assert_eq!(closure_order(&f, &rev, 1000), Ok(24));
        assert_eq!(closure_order(&f, &mats, 10), Err(VerifyError::CapExceeded { cap: 10 }));
        assert_eq!(closure_check(&gens, 1000).status, CheckStatus::Pass);
        assert_eq!(closure_check(&gens, 10).status, CheckStatus::Skipped);
    }

    #[test]
    fn report_json_shape() {
        let gens = WeilGeneratorSet::new(&WeilParams::new(PrimeField::new(3, 7).unwrap(), 1).unwrap());
        let report = check_sl23_presentation(&gens);
        let json = serde_json::to_value(&report).unwrap();
        let first = &json[0];
        assert_eq!(first["id"], "presentation_x4");
        assert_eq!(first["status"], "pass");
        assert_eq!(first["params"]["r"], 3);
        assert!(first["witness"].is_null());
    }
}
