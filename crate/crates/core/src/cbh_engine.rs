//! Compressed Campbell–Baker–Hausdorff series in the metabelian quotient
//! of the free Lie algebra on `P, Q`, two independent oracles for it, and
//! the Hausdorff product in the three-letter model `L3`.
//!
//! In the metabelian quotient every long commutator `[Q^j P^i Q P]` equals
//! `q^j p^i · [Q,P]`, where `p`, `q` are the commuting actions of `ad P`
//! and `ad Q` on the commutator ideal. A commutator part is therefore a
//! bivariate series in `(p, q)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::exact_arith::{bernoulli_vec, factorial, int, ExtBernoulliTable, Rational};
use crate::series_core::{c_generating_closed, BiSeries, CoeffRing, Matrix2};

/// `coeff_p·P + coeff_q·Q + comm(p,q)·[Q,P]`, truncated at Lie degree
/// `comm.order() + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetabelianElement2<R: CoeffRing> {
    pub coeff_p: R,
    pub coeff_q: R,
    /// Coefficient `(i, j)` multiplies `[Q^j P^i Q P]`.
    pub comm: BiSeries<R>,
}

/// One term `C·[Q^{n-1} P^{m-1} Q P]` of a dump.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CbhRecord {
    pub n: usize,
    pub m: usize,
    pub coeff: String,
}

impl<R: CoeffRing> MetabelianElement2<R> {
    pub fn zero(comm_order: usize) -> Self {
        MetabelianElement2 { coeff_p: R::zero(), coeff_q: R::zero(), comm: BiSeries::zero(comm_order) }
    }

    pub fn p(comm_order: usize) -> Self {
        MetabelianElement2 { coeff_p: R::one(), ..Self::zero(comm_order) }
    }

    pub fn q(comm_order: usize) -> Self {
        MetabelianElement2 { coeff_q: R::one(), ..Self::zero(comm_order) }
    }

    pub fn add(&self, o: &Self) -> Self {
        MetabelianElement2 {
            coeff_p: self.coeff_p.clone() + &o.coeff_p,
            coeff_q: self.coeff_q.clone() + &o.coeff_q,
            comm: self.comm.add(&o.comm),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        MetabelianElement2 {
            coeff_p: self.coeff_p.scale(r),
            coeff_q: self.coeff_q.scale(r),
            comm: self.comm.scale(r),
        }
    }

    /// Lie bracket; the result is purely a commutator part.
    pub fn bracket(&self, o: &Self) -> Self {
        let n = self.comm.order().min(o.comm.order());
        let lin = self.coeff_q.clone() * &o.coeff_p - &(self.coeff_p.clone() * &o.coeff_q);
        let act = |x: &Self, s: &BiSeries<R>| -> BiSeries<R> {
            let a = s.shift(1, 0).scale_ring(&x.coeff_p);
            let b = s.shift(0, 1).scale_ring(&x.coeff_q);
            a.add(&b).truncate(n)
        };
        let comm = BiSeries::constant(lin, n)
            .add(&act(self, &o.comm))
            .sub(&act(o, &self.comm));
        MetabelianElement2 { coeff_p: R::zero(), coeff_q: R::zero(), comm }
    }
}

impl MetabelianElement2<Rational> {
    /// Terms in the canonical basis, ordered by Lie degree then `m`.
    pub fn records(&self) -> Vec<CbhRecord> {
        self.comm
            .terms()
            .map(|(i, j, c)| CbhRecord { n: j + 1, m: i + 1, coeff: c.to_string() })
            .collect()
    }

    /// Coefficient of `[P^a Q^b P Q] = -p^a q^b [Q,P]`.
    pub fn mirrored_coefficient(&self, a: usize, b: usize) -> Rational {
        -self.comm.coeff(a, b).clone()
    }
}

fn comm_order(n: usize) -> usize {
    n.saturating_sub(2)
}

/// `H̄ = P + Q + sum C_mn/(m! n!) [Q^{n-1} P^{m-1} Q P]` up to Lie degree `n`.
pub fn compressed_cbh(n: usize) -> MetabelianElement2<Rational> {
    let order = comm_order(n);
    let t = ExtBernoulliTable::new(order + 2);
    let mut comm = BiSeries::zero(order);
    if n >= 2 {
        for d in 0..=order {
            for i in 0..=d {
                let (m, nn) = (i + 1, d - i + 1);
                comm.set(i, d - i, t.get(m, nn) / (factorial(m) * factorial(nn)));
            }
        }
    }
    MetabelianElement2 { coeff_p: int(1), coeff_q: int(1), comm }
}

/// The same series in the mirrored basis `[P^{n-1} Q^{m-1} P Q]` with the
/// primed numbers `C'_mn`, converted back to the canonical basis.
pub fn mirrored_cbh(n: usize) -> MetabelianElement2<Rational> {
    let order = comm_order(n);
    let t = ExtBernoulliTable::primed(order + 2);
    let mut comm = BiSeries::zero(order);
    if n >= 2 {
        for d in 0..=order {
            for i in 0..=d {
                // [P^i Q^j P Q] with i = n-1, j = m-1
                let (nn, m) = (i + 1, d - i + 1);
                comm.set(i, d - i, -(t.get(m, nn) / (factorial(m) * factorial(nn))));
            }
        }
    }
    MetabelianElement2 { coeff_p: int(1), coeff_q: int(1), comm }
}

/// Recursive scheme `H_0 = Q`, `H_m = (1/m)·D(H_{m-1})` with `D` the
/// derivation replacing one `Q` by `H_1`.
pub fn classical_cbh_in_model(n: usize) -> MetabelianElement2<Rational> {
    let order = comm_order(n);
    let b = bernoulli_vec(order + 1);
    let beta: Vec<Rational> = (0..=order + 1).map(|k| &b[k] / factorial(k)).collect();
    // H_1 = P + sum_{k>=1} B_k/k! q^{k-1} [Q,P]
    let mut h1_comm = BiSeries::zero(order);
    for k in 1..=order + 1 {
        h1_comm.set(0, k - 1, beta[k].clone());
    }
    let derive = |s: &BiSeries<Rational>| -> BiSeries<Rational> {
        let mut out: BiSeries<Rational> = BiSeries::zero(order);
        for (i, j, c) in s.terms() {
            // replacing a Q of ad_Q^i by P
            if j > 0 {
                let cur = out.coeff(i + 1, j - 1).clone();
                out.set(i + 1, j - 1, cur + c * int(j as i64));
            }
            // replacing the Q of [Q,P] by H_1
            for k in 1..=order + 1 {
                if i + j + k > order || beta[k].is_zero() {
                    continue;
                }
                let cur = out.coeff(i + 1, j + k - 1).clone();
                out.set(i + 1, j + k - 1, cur - c * &beta[k]);
            }
        }
        out
    };
    let mut total = h1_comm.clone();
    let mut prev = h1_comm.clone();
    for m in 2..=n.max(1) {
        prev = derive(&prev).scale(&int(m as i64).recip());
        if prev.is_zero() {
            break;
        }
        total = total.add(&prev);
    }
    if n < 2 {
        total = BiSeries::zero(order);
    }
    MetabelianElement2 { coeff_p: int(1), coeff_q: int(1), comm: total }
}

/// Truncated free associative algebra on `P = 0`, `Q = 1`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NCPoly2 {
    pub terms: BTreeMap<Vec<u8>, Rational>,
    pub max_len: usize,
}

impl NCPoly2 {
    pub fn zero(max_len: usize) -> Self {
        NCPoly2 { terms: BTreeMap::new(), max_len }
    }

    pub fn letter(l: u8, max_len: usize) -> Self {
        let mut p = Self::zero(max_len);
        if max_len >= 1 {
            p.terms.insert(vec![l], int(1));
        }
        p
    }

    pub fn one(max_len: usize) -> Self {
        let mut p = Self::zero(max_len);
        p.terms.insert(Vec::new(), int(1));
        p
    }

    fn add_term(&mut self, w: Vec<u8>, c: Rational) {
        let e = self.terms.entry(w).or_insert_with(Rational::zero);
        *e += c;
        // zero entries are cleaned up lazily
    }

    fn clean(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out.clean()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = &*c * r;
        }
        out.clean()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.max_len);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                if w1.len() + w2.len() > self.max_len {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out.clean()
    }

    /// `exp(x)` for `x` without constant term.
    pub fn exp(&self) -> Self {
        let mut out = Self::one(self.max_len);
        let mut pw = Self::one(self.max_len);
        for k in 1..=self.max_len {
            pw = pw.mul(self).scale(&int(k as i64).recip());
            out = out.add(&pw);
        }
        out
    }

    /// `log(1 + x)` for `x` without constant term.
    pub fn log1p(&self) -> Self {
        let mut out = Self::zero(self.max_len);
        let mut pw = Self::one(self.max_len);
        for k in 1..=self.max_len {
            pw = pw.mul(self);
            let c = Rational::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, (k as i64).into());
            out = out.add(&pw.scale(&c));
        }
        out
    }
}

/// `log(exp P · exp Q)` computed with words, projected to Lie elements by
/// right-nested bracketing divided by word length, evaluated in the model.
pub fn associative_log_oracle(n: usize) -> MetabelianElement2<Rational> {
    let order = comm_order(n);
    let prod = NCPoly2::letter(0, n).exp().mul(&NCPoly2::letter(1, n).exp());
    let mut x = prod;
    x.terms.remove(&Vec::new());
    let log = x.log1p();
    let mut out: MetabelianElement2<Rational> = MetabelianElement2::zero(order);
    for (w, c) in &log.terms {
        let len = w.len();
        if len == 1 {
            if w[0] == 0 {
                out.coeff_p += c;
            } else {
                out.coeff_q += c;
            }
            continue;
        }
        let (a, b) = (w[len - 2], w[len - 1]);
        if a == b {
            continue;
        }
        // [Q,P] = gen, [P,Q] = -gen; outer letters act as p or q.
        let sgn = if a == 1 { int(1) } else { int(-1) };
        let i = w[..len - 2].iter().filter(|&&l| l == 0).count();
        let j = len - 2 - i;
        let v = c * sgn / int(len as i64);
        let cur = out.comm.coeff(i, j).clone();
        out.comm.set(i, j, cur + v);
    }
    out
}

/// `log(exp X · exp Y)` for arbitrary elements of the two-letter model.
pub fn hausdorff_m2(x: &MetabelianElement2<Rational>, y: &MetabelianElement2<Rational>) -> MetabelianElement2<Rational> {
    let order = x.comm.order().min(y.comm.order());
    // comm(p,q) = C(q,p); substitute p -> ad X, q -> ad Y
    let c = c_generating_closed(order);
    let m: Matrix2 = [
        [y.coeff_p.clone(), y.coeff_q.clone()],
        [x.coeff_p.clone(), x.coeff_q.clone()],
    ];
    let series = c.substitute_linear(&m);
    let yx = y.bracket(x);
    MetabelianElement2 {
        coeff_p: x.coeff_p.clone() + &y.coeff_p,
        coeff_q: x.coeff_q.clone() + &y.coeff_q,
        comm: x.comm.add(&y.comm).add(&series.mul(&yx.comm)),
    }
}

/// Element `x_a a + x_b b + x_c c + comm(λ,μ)·[a,b]` of the model `L3`
/// with `a + b + c` central, `[a,[a,b]] = λ[a,b]`, `[b,[a,b]] = μ[a,b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct L3Element<R: CoeffRing> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub comm: BiSeries<R>,
}

impl<R: CoeffRing> L3Element<R> {
    pub fn zero(order: usize) -> Self {
        L3Element { a: R::zero(), b: R::zero(), c: R::zero(), comm: BiSeries::zero(order) }
    }

    pub fn letter(which: char, order: usize) -> Self {
        let mut e = Self::zero(order);
        match which {
            'a' => e.a = R::one(),
            'b' => e.b = R::one(),
            'c' => e.c = R::one(),
            _ => panic!("L3 has letters a, b, c"),
        }
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        L3Element {
            a: self.a.clone() + &o.a,
            b: self.b.clone() + &o.b,
            c: self.c.clone() + &o.c,
            comm: self.comm.add(&o.comm),
        }
    }

    pub fn neg(&self) -> Self {
        L3Element { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone(), comm: self.comm.neg() }
    }

    /// Coefficients of `λ` and `μ` in the action of `ad self` on `[a,b]`.
    pub fn action(&self) -> (R, R) {
        (self.a.clone() - &self.c, self.b.clone() - &self.c)
    }

    /// Lie bracket, landing in the commutator part.
    pub fn bracket(&self, o: &Self) -> Self {
        let n = self.comm.order().min(o.comm.order());
        let lin = (self.a.clone() * &o.b - &(self.b.clone() * &o.a))
            + &(self.b.clone() * &o.c - &(self.c.clone() * &o.b))
            + &(self.c.clone() * &o.a - &(self.a.clone() * &o.c));
        let act = |x: &Self, s: &BiSeries<R>| -> BiSeries<R> {
            let (l, m) = x.action();
            s.shift(1, 0).scale_ring(&l).add(&s.shift(0, 1).scale_ring(&m)).truncate(n)
        };
        let comm = BiSeries::constant(lin, n).add(&act(self, &o.comm)).sub(&act(o, &self.comm));
        L3Element { a: R::zero(), b: R::zero(), c: R::zero(), comm }
    }

    /// Linear part `a + b + c` up to scalars, i.e. whether the element is
    /// a multiple of the central element with zero commutator part.
    pub fn is_central_multiple(&self, k: &R) -> bool {
        self.a == *k && self.b == *k && self.c == *k && self.comm.is_zero()
    }
}

/// `log(exp X · exp Y)` in `L3`, with `[Q^j P^i Q P] ↦ ℓ(Y)^j ℓ(X)^i [Y,X]`.
pub fn hausdorff_in_l3(x: &L3Element<Rational>, y: &L3Element<Rational>, n: usize) -> L3Element<Rational> {
    let order = n.min(x.comm.order()).min(y.comm.order());
    let c = c_generating_closed(order);
    let (yl, ym) = y.action();
    let (xl, xm) = x.action();
    let m: Matrix2 = [[yl, ym], [xl, xm]];
    let series = c.substitute_linear(&m);
    let yx = y.bracket(x);
    L3Element {
        a: x.a.clone() + &y.a,
        b: x.b.clone() + &y.b,
        c: x.c.clone() + &y.c,
        comm: x.comm.add(&y.comm).add(&series.mul(&yx.comm)).truncate(order),
    }
}

/// Whether two elements agree on all coefficients up to the smaller order.
pub fn agree(x: &MetabelianElement2<Rational>, y: &MetabelianElement2<Rational>) -> bool {
    let n = x.comm.order().min(y.comm.order());
    x.coeff_p == y.coeff_p && x.coeff_q == y.coeff_q && x.comm.truncate(n) == y.comm.truncate(n)
}
