//! The metabelian quotients `L̄₃` and `L̄₄` and the compressed pentagon.
//!
//! The free metabelian Lie algebra on `r` letters is modelled faithfully:
//! a letter is a basis vector of the linear part, `[x_i, x_j]` maps to
//! `t_i ε_j - t_j ε_i` in the free module `Q[t_1..t_r]^r`, and bracketing a
//! commutator with `x_k` multiplies it by `t_k`. Brackets of two
//! commutators vanish. The relation ideal is the span of all monomial
//! multiples of the quadratic relations, reduced by sparse exact
//! elimination with a fixed column order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound::{Excluded, Unbounded};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{binom, int, Rational};
use crate::hexagon_solver::AlphaTable;

pub const MAX_LETTERS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PentagonError {
    #[error("degree exceeds reducer bound ({degree} > {bound})")]
    DegreeExceedsBound { degree: usize, bound: usize },
    #[error("unknown letter '{0}'")]
    UnknownLetter(char),
}

/// Letters of the four-strand alphabet: `a=t12, b=t23, c=t13, d=t24, e=t34, v=t14`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    V,
}

impl Letter {
    pub const ALL: [Letter; 6] = [Letter::A, Letter::B, Letter::C, Letter::D, Letter::E, Letter::V];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        ['a', 'b', 'c', 'd', 'e', 'v'][self.index()]
    }

    /// Strand indices `(i, j)` of `t^{ij}`.
    pub fn strands(self) -> (u8, u8) {
        [(1, 2), (2, 3), (1, 3), (2, 4), (3, 4), (1, 4)][self.index()]
    }

    pub fn parse(ch: char) -> Result<Letter, PentagonError> {
        Letter::ALL.iter().copied().find(|l| l.name() == ch).ok_or(PentagonError::UnknownLetter(ch))
    }
}

/// Exponent vector of a commutative monomial in the letter variables.
pub type Mono = [u8; MAX_LETTERS];

/// Column key `(component, monomial)`; a key of monomial degree `m`
/// lives in Lie degree `m + 1`.
pub type Key = (u8, Mono);

fn key_degree(k: &Key) -> usize {
    k.1.iter().map(|&e| e as usize).sum::<usize>() + 1
}

/// Element of the free metabelian Lie algebra on `rank` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metabelian {
    pub rank: usize,
    pub linear: Vec<Rational>,
    pub comm: BTreeMap<Key, Rational>,
}

pub type MetabelianElement6 = Metabelian;

fn add_into(map: &mut BTreeMap<Key, Rational>, k: Key, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Metabelian {
    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_LETTERS);
        Metabelian { rank, linear: vec![Rational::zero(); rank], comm: BTreeMap::new() }
    }

    pub fn letter(rank: usize, i: usize) -> Self {
        let mut m = Self::zero(rank);
        m.linear[i] = Rational::one();
        m
    }

    /// Linear combination of letters from `(index, coefficient)` pairs.
    pub fn linear_combination(rank: usize, terms: &[(usize, i64)]) -> Self {
        let mut m = Self::zero(rank);
        for &(i, c) in terms {
            m.linear[i] += int(c);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.linear.iter().all(|c| c.is_zero()) && self.comm.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.comm.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (x, y) in r.linear.iter_mut().zip(&o.linear) {
            *x += y;
        }
        for (k, c) in &o.comm {
            add_into(&mut r.comm, *k, c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        Metabelian {
            rank: self.rank,
            linear: self.linear.iter().map(|c| c * s).collect(),
            comm: self.comm.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Commutator part multiplied by the linear form `lin`, i.e. `ad` of a
    /// linear element acting on the commutator part.
    fn comm_times(&self, lin: &[Rational]) -> BTreeMap<Key, Rational> {
        let mut out = BTreeMap::new();
        for (i, s) in lin.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for ((comp, mono), c) in &self.comm {
                let mut m = *mono;
                m[i] += 1;
                add_into(&mut out, (*comp, m), c * s);
            }
        }
        out
    }

    /// The Lie bracket `[self, o]`.
    pub fn bracket(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.rank);
        for (i, xi) in self.linear.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in o.linear.iter().enumerate() {
                if i == j || yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                let mut ti = [0u8; MAX_LETTERS];
                ti[i] = 1;
                let mut tj = [0u8; MAX_LETTERS];
                tj[j] = 1;
                add_into(&mut r.comm, (j as u8, ti), c.clone());
                add_into(&mut r.comm, (i as u8, tj), -c);
            }
        }
        for (k, c) in o.comm_times(&self.linear) {
            add_into(&mut r.comm, k, c);
        }
        for (k, c) in self.comm_times(&o.linear) {
            add_into(&mut r.comm, k, -c);
        }
        r
    }

    /// `[s, [s, ..., [s, self]]]` with `n` copies of the linear element `s`.
    pub fn ad_pow(&self, s: &Self, n: usize) -> Self {
        (0..n).fold(self.clone(), |acc, _| s.bracket(&acc))
    }

    /// Homogeneous component of Lie degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        let mut r = Self::zero(self.rank);
        if d == 1 {
            r.linear = self.linear.clone();
        } else {
            r.comm = self.comm.iter().filter(|(k, _)| key_degree(k) == d).map(|(k, c)| (*k, c.clone())).collect();
        }
        r
    }

    pub fn max_degree(&self) -> usize {
        self.comm.keys().map(key_degree).max().unwrap_or(if self.linear.iter().all(|c| c.is_zero()) { 0 } else { 1 })
    }
}

/// Left-normed commutator `[w1 w2 ... wk] = [w1,[w2,[...,wk]]]` of linear
/// elements. Words of length one return the element itself.
pub fn long_commutator(word: &[Metabelian]) -> Metabelian {
    assert!(!word.is_empty(), "empty word");
    let mut acc = word[word.len() - 1].clone();
    for w in word[..word.len() - 1].iter().rev() {
        acc = w.bracket(&acc);
    }
    acc
}

/// Named elements of the six-letter algebra.
pub mod l4 {
    use super::{Letter, Metabelian};

    pub fn letter(l: Letter) -> Metabelian {
        Metabelian::letter(6, l.index())
    }

    pub fn a() -> Metabelian {
        letter(Letter::A)
    }
    pub fn b() -> Metabelian {
        letter(Letter::B)
    }
    pub fn c() -> Metabelian {
        letter(Letter::C)
    }
    pub fn d() -> Metabelian {
        letter(Letter::D)
    }
    pub fn e() -> Metabelian {
        letter(Letter::E)
    }
    pub fn v() -> Metabelian {
        letter(Letter::V)
    }
    pub fn x() -> Metabelian {
        a().bracket(&b())
    }
    pub fn y() -> Metabelian {
        a().bracket(&d())
    }
    pub fn z() -> Metabelian {
        b().bracket(&e())
    }
    pub fn u() -> Metabelian {
        c().bracket(&e())
    }

    /// Parses a word such as `"adx"` or `"ddey"` into its long commutator;
    /// `x, y, z, u` stand for the named degree-two generators.
    pub fn word(s: &str) -> Metabelian {
        let items: Vec<Metabelian> = s
            .chars()
            .map(|ch| match ch {
                'x' => x(),
                'y' => y(),
                'z' => z(),
                'u' => u(),
                _ => letter(Letter::parse(ch).expect("letter")),
            })
            .collect();
        let (last, prefix) = items.split_last().expect("nonempty word");
        prefix.iter().rev().fold(last.clone(), |acc, s| s.bracket(&acc))
    }
}

/// The quadratic relations defining `L̄₄`.
pub fn l4_relations() -> Vec<Metabelian> {
    use l4::*;
    let br = |p: Metabelian, q: Metabelian| p.bracket(&q);
    vec![
        br(a(), e()),
        br(b(), v()),
        br(c(), d()),
        br(a(), b()).sub(&br(b(), c())),
        br(b(), c()).sub(&br(c(), a())),
        br(a(), d()).sub(&br(d(), v())),
        br(d(), v()).sub(&br(v(), a())),
        br(b(), e()).sub(&br(e(), d())),
        br(e(), d()).sub(&br(d(), b())),
        br(c(), e()).sub(&br(e(), v())),
        br(e(), v()).sub(&br(v(), c())),
    ]
}

/// Relations of `L̄₃` on `a, b, c`: `[a,b] = [b,c] = [c,a]`.
pub fn l3_relations() -> Vec<Metabelian> {
    let l = |i| Metabelian::letter(3, i);
    let ab = l(0).bracket(&l(1));
    vec![ab.sub(&l(1).bracket(&l(2))), ab.sub(&l(2).bracket(&l(0)))]
}

fn monomials(rank: usize, degree: usize) -> Vec<Mono> {
    fn rec(rank: usize, pos: usize, left: usize, cur: &mut Mono, out: &mut Vec<Mono>) {
        if pos + 1 == rank {
            cur[pos] = left as u8;
            out.push(*cur);
            cur[pos] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u8;
            rec(rank, pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if rank > 0 {
        rec(rank, 0, degree, &mut [0; MAX_LETTERS], &mut out);
    }
    out
}

fn shift(row: &BTreeMap<Key, Rational>, m: &Mono) -> BTreeMap<Key, Rational> {
    row.iter()
        .map(|((comp, mono), c)| {
            let mut n = *mono;
            for (x, y) in n.iter_mut().zip(m) {
                *x += *y;
            }
            ((*comp, n), c.clone())
        })
        .collect()
}

/// Sparse semi-echelon basis: each stored row has leading coefficient 1 at
/// its pivot key and no entries before it.
#[derive(Clone, Debug, Default)]
struct SparseEchelon {
    rows: BTreeMap<Key, BTreeMap<Key, Rational>>,
}

impl SparseEchelon {
    fn reduce(&self, mut v: BTreeMap<Key, Rational>) -> BTreeMap<Key, Rational> {
        let mut cursor: Option<Key> = None;
        loop {
            let next = match cursor {
                None => v.iter().find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone())),
                Some(c) => v.range((Excluded(c), Unbounded)).find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone())),
            };
            let Some((k, c)) = next else {
                return v;
            };
            for (rk, rc) in &self.rows[&k] {
                add_into(&mut v, *rk, -(rc * &c));
            }
            cursor = Some(k);
        }
    }

    /// Inserts a row; returns whether the rank grew.
    fn insert(&mut self, v: BTreeMap<Key, Rational>) -> bool {
        let r = self.reduce(v);
        let Some((&k, c)) = r.iter().next() else {
            return false;
        };
        let inv = c.recip();
        self.rows.insert(k, r.into_iter().map(|(rk, rc)| (rk, rc * &inv)).collect());
        true
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Canonical coordinates of an element of the quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub linear: Vec<Rational>,
    pub comm: BTreeMap<Key, Rational>,
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        self.linear.iter().all(|c| c.is_zero()) && self.comm.is_empty()
    }

    /// Number of nonzero coordinates in Lie degree `d`.
    pub fn nonzero_in_degree(&self, d: usize) -> usize {
        if d == 1 {
            self.linear.iter().filter(|c| !c.is_zero()).count()
        } else {
            self.comm.keys().filter(|k| key_degree(k) == d).count()
        }
    }

    /// Inverse of `reduce` on canonical vectors.
    pub fn lift(&self, rank: usize) -> Metabelian {
        Metabelian { rank, linear: self.linear.clone(), comm: self.comm.clone() }
    }
}

/// Relation subspace of a metabelian quotient, echelonized up to a degree bound.
#[derive(Clone, Debug)]
pub struct QuotientReducer {
    pub rank: usize,
    pub bound: usize,
    relations: Vec<Metabelian>,
    echelon: SparseEchelon,
    rel_rank: Vec<usize>,
}

impl QuotientReducer {
    pub fn new(rank: usize, relations: Vec<Metabelian>, bound: usize) -> Self {
        let mut r = QuotientReducer { rank, bound: 1, relations, echelon: SparseEchelon::default(), rel_rank: vec![0, 0] };
        r.extend_to(bound);
        r
    }

    pub fn l4(bound: usize) -> Self {
        Self::new(6, l4_relations(), bound)
    }

    pub fn l3(bound: usize) -> Self {
        Self::new(3, l3_relations(), bound)
    }

    /// Echelonizes `m · r` for every relation `r` and monomial `m` of degree `n - 2`.
    pub fn extend_to(&mut self, bound: usize) {
        for n in self.bound + 1..=bound {
            let mut grew = 0;
            for m in monomials(self.rank, n - 2) {
                for r in &self.relations {
                    if self.echelon.insert(shift(&r.comm, &m)) {
                        grew += 1;
                    }
                }
            }
            self.rel_rank.push(grew);
        }
        self.bound = self.bound.max(bound);
    }

    /// Dimension of the relation subspace in Lie degree `n`.
    pub fn relation_rank(&self, n: usize) -> usize {
        self.rel_rank.get(n).copied().unwrap_or(0)
    }

    pub fn reduce(&self, elem: &Metabelian) -> Result<Canonical, PentagonError> {
        let deg = elem.max_degree();
        if deg > self.bound {
            return Err(PentagonError::DegreeExceedsBound { degree: deg, bound: self.bound });
        }
        Ok(Canonical { linear: elem.linear.clone(), comm: self.echelon.reduce(elem.comm.clone()) })
    }

    pub fn is_zero(&self, elem: &Metabelian) -> Result<bool, PentagonError> {
        Ok(self.reduce(elem)?.is_zero())
    }

    pub fn total_rank(&self) -> usize {
        self.echelon.len()
    }
}

/// Rank of the Lie-degree-`n` part of the free metabelian algebra on `rank`
/// letters, computed from the spanning set `m · [x_i, x_j]`.
pub fn free_metabelian_rank(rank: usize, n: usize) -> usize {
    if n == 1 {
        return rank;
    }
    let mut ech = SparseEchelon::default();
    for m in monomials(rank, n - 2) {
        for i in 0..rank {
            for j in i + 1..rank {
                let g = Metabelian::letter(rank, i).bracket(&Metabelian::letter(rank, j));
                ech.insert(shift(&g.comm, &m));
            }
        }
    }
    ech.len()
}

/// Closed form `(n-1) C(n+r-2, n)` for `n >= 2`.
pub fn free_metabelian_dimension(rank: usize, n: usize) -> usize {
    if n == 1 {
        return rank;
    }
    let c = binom(n + rank - 2, n);
    (n - 1) * c.to_string().parse::<usize>().expect("small binomial")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    L3bar,
    L4bar,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::L3bar => "L3bar",
            Variant::L4bar => "L4bar",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub variant: Variant,
    pub degree: usize,
    pub free_metabelian: usize,
    pub relations: usize,
    pub dimension: usize,
    /// Model dimension for `L3bar`, spanning bound `5(n-1)` for `L4bar`.
    pub reference: usize,
    pub ok: bool,
}

pub fn dimension_report(n: usize, variant: Variant) -> Vec<DimensionRow> {
    let reducer = match variant {
        Variant::L3bar => QuotientReducer::l3(n),
        Variant::L4bar => QuotientReducer::l4(n),
    };
    (1..=n)
        .map(|d| {
            let free = free_metabelian_rank(reducer.rank, d);
            let rel = reducer.relation_rank(d);
            let dim = free - rel;
            let (reference, ok) = match variant {
                Variant::L3bar => {
                    let m = if d == 1 { 3 } else { d - 1 };
                    (m, dim == m)
                }
                Variant::L4bar => match d {
                    1 => (6, dim == 6),
                    2 => (4, dim == 4),
                    _ => (5 * (d - 1), dim <= 5 * (d - 1)),
                },
            };
            DimensionRow { variant, degree: d, free_metabelian: free, relations: rel, dimension: dim, reference, ok }
        })
        .collect()
}

/// `φ̄(u, w) = sum_{k+l <= n-2} α_kl [u^k w^l u w]` for linear `u, w`.
pub fn phi_bar_eval(alpha: &AlphaTable<Rational>, u: &Metabelian, w: &Metabelian, n: usize) -> Metabelian {
    let mut out = Metabelian::zero(u.rank);
    if n < 2 {
        return out;
    }
    let base = u.bracket(w);
    let mut wpow = vec![base];
    for _ in 1..=n - 2 {
        let next = w.bracket(wpow.last().expect("nonempty"));
        wpow.push(next);
    }
    for (&(k, l), c) in &alpha.alpha {
        if k + l > n - 2 || c.is_zero() {
            continue;
        }
        out = out.add(&wpow[l].ad_pow(u, k).scale(c));
    }
    out
}

/// Left side minus right side of the substituted compressed pentagon
/// `φ̄(b,e) + φ̄(a+c,d+e) + φ̄(a,b) = φ̄(a,b+d) + φ̄(b+c,e)`, unreduced.
pub fn pentagon_difference(alpha: &AlphaTable<Rational>, n: usize) -> Metabelian {
    use l4::*;
    let lhs = phi_bar_eval(alpha, &b(), &e(), n)
        .add(&phi_bar_eval(alpha, &a().add(&c()), &d().add(&e()), n))
        .add(&phi_bar_eval(alpha, &a(), &b(), n));
    let rhs = phi_bar_eval(alpha, &a(), &b().add(&d()), n).add(&phi_bar_eval(alpha, &b().add(&c()), &e(), n));
    lhs.sub(&rhs)
}

/// Reduced pentagon residual.
pub fn pentagon_residual(alpha: &AlphaTable<Rational>, reducer: &QuotientReducer, n: usize) -> Result<Canonical, PentagonError> {
    reducer.reduce(&pentagon_difference(alpha, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeNorm {
    pub degree: usize,
    /// Nonzero canonical coordinates of the residual in this degree.
    pub nonzero: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PentagonReport {
    pub degree: usize,
    pub residual_norms: Vec<DegreeNorm>,
    pub pass: bool,
}

pub fn pentagon_check(alpha: &AlphaTable<Rational>, n: usize) -> Result<PentagonReport, PentagonError> {
    pentagon_check_with(&QuotientReducer::l4(n), alpha, n)
}

/// As [`pentagon_check`] with a prebuilt reducer.
pub fn pentagon_check_with(reducer: &QuotientReducer, alpha: &AlphaTable<Rational>, n: usize) -> Result<PentagonReport, PentagonError> {
    let r = pentagon_residual(alpha, reducer, n)?;
    let residual_norms = (2..=n).map(|d| DegreeNorm { degree: d, nonzero: r.nonzero_in_degree(d) }).collect();
    Ok(PentagonReport { degree: n, pass: r.is_zero(), residual_norms })
}
