//! Truncated power series in one and two variables over an exact
//! coefficient ring.
//!
//! Every series carries the order `N` up to which its coefficients are
//! known. Binary operations keep the smaller order; division by `λ`, `μ`
//! or `λ+μ` lowers it by one and fails loudly on a nonzero remainder.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_arith::{bernoulli_vec, binom, factorial, int, Rational};

/// Exact commutative coefficient ring.
pub trait CoeffRing:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    /// Multiplies by a rational scalar.
    fn scale(&self, r: &Rational) -> Self;
    fn from_rational(r: Rational) -> Self;
    /// Multiplicative inverse when the element is a unit.
    fn try_inverse(&self) -> Option<Self>;
    /// Human readable form used in plain output.
    fn render(&self) -> String;
    /// Structured form used in JSON output.
    fn to_json(&self) -> serde_json::Value;
}

impl CoeffRing for Rational {
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("non-unit constant term")]
    NonUnitConstant,
    #[error("not divisible: nonzero remainder at ({0},{1})")]
    NotDivisible(usize, usize),
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("order too small: need {need}, have {have}")]
    OrderTooSmall { need: usize, have: usize },
}

fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Product of two homogeneous polynomials given by coefficient lists
/// `p[k]` of `λ^k μ^(dp-k)`.
fn mul_homog<R: CoeffRing>(p: &[R], q: &[R]) -> Vec<R> {
    let mut out = vec![R::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            out[i + j] += &(a.clone() * b);
        }
    }
    out
}

/// Truncated univariate series `sum c_n x^n`, `n <= order`.
#[derive(Clone, PartialEq)]
pub struct UniSeries<R> {
    coeffs: Vec<R>,
}

impl<R: CoeffRing> UniSeries<R> {
    pub fn zero(order: usize) -> Self {
        UniSeries { coeffs: vec![R::zero(); order + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        UniSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, c: R) {
        self.coeffs[n] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        UniSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        UniSeries { coeffs: (0..=n).map(|i| self.coeffs[i].clone() + &o.coeffs[i]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        UniSeries { coeffs: (0..=n).map(|i| self.coeffs[i].clone() - &o.coeffs[i]).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        UniSeries { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![R::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                out[i + j] += &(self.coeffs[i].clone() * &o.coeffs[j]);
            }
        }
        UniSeries { coeffs: out }
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].try_inverse().ok_or(SeriesError::NonUnitConstant)?;
        let n = self.order();
        let mut y = vec![R::zero(); n + 1];
        y[0] = c0.clone();
        for d in 1..=n {
            let mut s = R::zero();
            for j in 1..=d {
                s += &(self.coeffs[j].clone() * &y[d - j]);
            }
            y[d] = -(s * &c0);
        }
        Ok(UniSeries { coeffs: y })
    }

    /// Coefficients of the even powers only.
    pub fn even_coeffs(&self) -> Vec<R> {
        self.coeffs.iter().step_by(2).cloned().collect()
    }
}

impl<R: CoeffRing> fmt::Debug for UniSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniSeries[order {}](", self.order())?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " {n}: {}", c.render())?;
            }
        }
        write!(f, " )")
    }
}

/// Truncated bivariate series `sum c_kl λ^k μ^l`, `k + l <= order`,
/// stored densely by total degree then `k`.
#[derive(Clone, PartialEq)]
pub struct BiSeries<R> {
    order: usize,
    coeffs: Vec<R>,
}

/// One coefficient in the serialized form of a series.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SeriesRecord {
    pub k: usize,
    pub l: usize,
    pub coeff: serde_json::Value,
}

/// A `2×2` rational matrix `[[a, b], [c, d]]` acting by
/// `λ ↦ aλ + bμ`, `μ ↦ cλ + dμ`.
pub type Matrix2 = [[Rational; 2]; 2];

/// Builds a substitution matrix from small integers.
pub fn matrix(a: i64, b: i64, c: i64, d: i64) -> Matrix2 {
    [[int(a), int(b)], [int(c), int(d)]]
}

/// `(λ, μ) ↦ (μ, -λ-μ)`.
pub fn subst_mu_rho() -> Matrix2 {
    matrix(0, 1, -1, -1)
}

/// `(λ, μ) ↦ (-λ-μ, λ)`.
pub fn subst_rho_lambda() -> Matrix2 {
    matrix(-1, -1, 1, 0)
}

/// `(λ, μ) ↦ (λ, -λ-μ)`.
pub fn subst_lambda_rho() -> Matrix2 {
    matrix(1, 0, -1, -1)
}

/// `(λ, μ) ↦ (μ, λ)`.
pub fn subst_swap() -> Matrix2 {
    matrix(0, 1, 1, 0)
}

/// `(λ, μ) ↦ (-λ, -μ)`.
pub fn subst_negate() -> Matrix2 {
    matrix(-1, 0, 0, -1)
}

/// Matrix of the composite substitution "first `m1`, then `m2`".
pub fn compose_subst(m1: &Matrix2, m2: &Matrix2) -> Matrix2 {
    // s ↦ s∘L1 ↦ (s∘L1)∘L2 = s∘(L1∘L2); as matrices L1·L2.
    let mut out: Matrix2 = matrix(0, 0, 0, 0);
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &m1[i][0] * &m2[0][j] + &m1[i][1] * &m2[1][j];
        }
    }
    out
}

fn linear_power<R: CoeffRing>(a: &Rational, b: &Rational, n: usize) -> Vec<Vec<R>> {
    // powers[p][k] = coefficient of λ^k μ^(p-k) in (aλ + bμ)^p
    let base = vec![R::from_rational(b.clone()), R::from_rational(a.clone())];
    let mut powers = vec![vec![R::one()]];
    for p in 1..=n {
        let next = mul_homog(&powers[p - 1], &base);
        powers.push(next);
    }
    powers
}

impl<R: CoeffRing> BiSeries<R> {
    pub fn zero(order: usize) -> Self {
        BiSeries { order, coeffs: vec![R::zero(); tri(order + 1)] }
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    /// `c λ^k μ^l`; zero when `k + l` exceeds the order.
    pub fn monomial(k: usize, l: usize, c: R, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k + l <= order {
            s.set(k, l, c);
        }
        s
    }

    pub fn lambda(order: usize) -> Self {
        Self::monomial(1, 0, R::one(), order)
    }

    pub fn mu(order: usize) -> Self {
        Self::monomial(0, 1, R::one(), order)
    }

    /// Builds a series from its nonzero terms.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, R)>>(terms: I, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, l, c) in terms {
            if k + l <= order {
                let cur = s.coeff(k, l).clone();
                s.set(k, l, cur + &c);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn idx(k: usize, l: usize) -> usize {
        tri(k + l) + k
    }

    pub fn coeff(&self, k: usize, l: usize) -> &R {
        assert!(k + l <= self.order, "coefficient ({k},{l}) beyond order {}", self.order);
        &self.coeffs[Self::idx(k, l)]
    }

    pub fn get(&self, k: usize, l: usize) -> Option<&R> {
        if k + l <= self.order {
            Some(&self.coeffs[Self::idx(k, l)])
        } else {
            None
        }
    }

    pub fn set(&mut self, k: usize, l: usize, c: R) {
        assert!(k + l <= self.order, "coefficient ({k},{l}) beyond order {}", self.order);
        self.coeffs[Self::idx(k, l)] = c;
    }

    /// Homogeneous part of degree `d` as the list indexed by the `λ` exponent.
    pub fn homogeneous(&self, d: usize) -> Vec<R> {
        assert!(d <= self.order);
        self.coeffs[tri(d)..tri(d + 1)].to_vec()
    }

    fn homog_slice(&self, d: usize) -> &[R] {
        &self.coeffs[tri(d)..tri(d + 1)]
    }

    pub fn set_homogeneous(&mut self, d: usize, h: &[R]) {
        assert_eq!(h.len(), d + 1);
        self.coeffs[tri(d)..tri(d + 1)].clone_from_slice(h);
    }

    /// Keeps only the homogeneous part of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        let mut s = Self::zero(self.order);
        s.set_homogeneous(d, self.homog_slice(d));
        s
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order, "cannot raise order {} to {order}", self.order);
        BiSeries { order, coeffs: self.coeffs[..tri(order + 1)].to_vec() }
    }

    /// Pads with zero coefficients; only meaningful for exact polynomials.
    pub fn extend_polynomial(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        let n = self.order.min(order);
        s.coeffs[..tri(n + 1)].clone_from_slice(&self.coeffs[..tri(n + 1)]);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Smallest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        (0..=self.order).find(|&d| self.homog_slice(d).iter().any(|c| !c.is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|(k, l, c)| self.coeff(l, k) == c)
    }

    /// Nonzero terms ordered by total degree then `k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        (0..=self.order).flat_map(move |d| {
            (0..=d).filter_map(move |k| {
                let c = &self.coeffs[tri(d) + k];
                if c.is_zero() {
                    None
                } else {
                    Some((k, d - k, c))
                }
            })
        })
    }

    pub fn records(&self) -> Vec<SeriesRecord> {
        self.terms()
            .map(|(k, l, c)| SeriesRecord { k, l, coeff: c.to_json() })
            .collect()
    }

    pub fn map_coeffs<S: CoeffRing, F: Fn(&R) -> S>(&self, f: F) -> BiSeries<S> {
        BiSeries { order: self.order, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order.min(o.order);
        BiSeries {
            order: n,
            coeffs: (0..tri(n + 1)).map(|i| self.coeffs[i].clone() + &o.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order.min(o.order);
        BiSeries {
            order: n,
            coeffs: (0..tri(n + 1)).map(|i| self.coeffs[i].clone() - &o.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        BiSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        BiSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn scale_ring(&self, r: &R) -> Self {
        BiSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c.clone() * r).collect() }
    }

    pub fn add_constant(&self, c: &R) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = s.coeffs[0].clone() + c;
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order.min(o.order);
        let mut out = Self::zero(n);
        for d1 in 0..=n {
            let p = self.homog_slice(d1);
            if p.iter().all(|c| c.is_zero()) {
                continue;
            }
            for d2 in 0..=n - d1 {
                let q = o.homog_slice(d2);
                if q.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let prod = mul_homog(p, q);
                let base = tri(d1 + d2);
                for (k, c) in prod.into_iter().enumerate() {
                    out.coeffs[base + k] += &c;
                }
            }
        }
        out
    }

    /// `λ^i μ^j · s`, exact, so the order grows by `i + j`.
    pub fn shift(&self, i: usize, j: usize) -> Self {
        let mut out = Self::zero(self.order + i + j);
        for (k, l, c) in self.terms() {
            out.set(k + i, l + j, c.clone());
        }
        out
    }

    /// `(aλ + bμ) · s`, exact, so the order grows by one.
    pub fn mul_linear(&self, a: &Rational, b: &Rational) -> Self {
        let mut out = Self::zero(self.order + 1);
        for (k, l, c) in self.terms() {
            let i = Self::idx(k + 1, l);
            out.coeffs[i] += &c.scale(a);
            let j = Self::idx(k, l + 1);
            out.coeffs[j] += &c.scale(b);
        }
        out
    }

    /// Exact quotient by `λ^i μ^j`; the order drops by `i + j`.
    pub fn div_monomial(&self, i: usize, j: usize) -> Result<Self, SeriesError> {
        let need = i + j;
        if self.order < need {
            return Err(SeriesError::OrderTooSmall { need, have: self.order });
        }
        let mut out = Self::zero(self.order - need);
        for (k, l, c) in self.terms() {
            if k < i || l < j {
                return Err(SeriesError::NotDivisible(k, l));
            }
            if k + l - need <= out.order {
                out.set(k - i, l - j, c.clone());
            }
        }
        Ok(out)
    }

    /// Exact quotient by the linear form `aλ + bμ` (not both zero).
    pub fn div_linear(&self, a: &Rational, b: &Rational) -> Result<Self, SeriesError> {
        if self.order == 0 {
            return Err(SeriesError::OrderTooSmall { need: 1, have: 0 });
        }
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotDivisible(0, 0));
        }
        let mut out = Self::zero(self.order - 1);
        for d in 1..=self.order {
            let s = self.homog_slice(d);
            let mut q = vec![R::zero(); d];
            // s[k] = a q[k-1] + b q[k]
            if !b.is_zero() {
                let binv = b.recip();
                for k in 0..d {
                    let mut t = s[k].clone();
                    if k > 0 {
                        t -= &q[k - 1].scale(a);
                    }
                    q[k] = t.scale(&binv);
                }
                let rem = s[d].clone() - &q[d - 1].scale(a);
                if !rem.is_zero() {
                    return Err(SeriesError::NotDivisible(d, 0));
                }
            } else {
                if a.is_zero() {
                    return Err(SeriesError::UnsupportedDivisor("zero linear form".into()));
                }
                if !s[0].is_zero() {
                    return Err(SeriesError::NotDivisible(0, d));
                }
                let ainv = a.recip();
                for k in 1..=d {
                    q[k - 1] = s[k].scale(&ainv);
                }
            }
            out.set_homogeneous(d - 1, &q);
        }
        Ok(out)
    }

    pub fn div_lambda(&self) -> Result<Self, SeriesError> {
        self.div_monomial(1, 0)
    }

    pub fn div_mu(&self) -> Result<Self, SeriesError> {
        self.div_monomial(0, 1)
    }

    pub fn div_lambda_plus_mu(&self) -> Result<Self, SeriesError> {
        self.div_linear(&int(1), &int(1))
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].try_inverse().ok_or(SeriesError::NonUnitConstant)?;
        let n = self.order;
        let mut out = Self::zero(n);
        out.coeffs[0] = c0.clone();
        for d in 1..=n {
            let mut acc = vec![R::zero(); d + 1];
            for j in 1..=d {
                let p = mul_homog(self.homog_slice(j), out.homog_slice(d - j));
                for (k, c) in p.into_iter().enumerate() {
                    acc[k] += &c;
                }
            }
            let h: Vec<R> = acc.into_iter().map(|c| -(c * &c0)).collect();
            out.set_homogeneous(d, &h);
        }
        Ok(out)
    }

    /// Exact division by a unit series, a monomial, or a linear form.
    pub fn divide_exact(&self, d: &Self) -> Result<Self, SeriesError> {
        if d.coeffs[0].try_inverse().is_some() {
            return Ok(self.mul(&d.inverse()?));
        }
        let terms: Vec<(usize, usize, R)> = d.terms().map(|(k, l, c)| (k, l, c.clone())).collect();
        match terms.as_slice() {
            [] => Err(SeriesError::UnsupportedDivisor("zero series".into())),
            [(i, j, c)] => {
                let inv = c.try_inverse().ok_or_else(|| {
                    SeriesError::UnsupportedDivisor("monomial with non-unit coefficient".into())
                })?;
                Ok(self.div_monomial(*i, *j)?.scale_ring(&inv))
            }
            _ if d.valuation() == Some(1) && (2..=d.order).all(|e| d.homog_slice(e).iter().all(|c| c.is_zero())) => {
                let h = d.homog_slice(1);
                let a = rational_of(&h[1])?;
                let b = rational_of(&h[0])?;
                self.div_linear(&a, &b)
            }
            _ => Err(SeriesError::UnsupportedDivisor("not a unit, monomial or linear form".into())),
        }
    }

    /// `s(aλ + bμ, cλ + dμ)` at the same order.
    pub fn substitute_linear(&self, m: &Matrix2) -> Self {
        let n = self.order;
        let pa: Vec<Vec<R>> = linear_power(&m[0][0], &m[0][1], n);
        let pb: Vec<Vec<R>> = linear_power(&m[1][0], &m[1][1], n);
        let mut out = Self::zero(n);
        for (k, l, c) in self.terms() {
            let prod = mul_homog(&pa[k], &pb[l]);
            let base = tri(k + l);
            for (i, t) in prod.into_iter().enumerate() {
                if !t.is_zero() {
                    out.coeffs[base + i] += &(t * c);
                }
            }
        }
        out
    }

    pub fn swap(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (k, l, c) in self.terms() {
            out.set(l, k, c.clone());
        }
        out
    }

    /// `(s(λ,μ) + s(-λ,-μ))/2`.
    pub fn even_part(&self) -> Self {
        let mut out = self.clone();
        for d in (1..=self.order).step_by(2) {
            for c in &mut out.coeffs[tri(d)..tri(d + 1)] {
                *c = R::zero();
            }
        }
        out
    }

    /// `(s(λ,μ) - s(-λ,-μ))/2`.
    pub fn odd_part(&self) -> Self {
        let mut out = self.clone();
        for d in (0..=self.order).step_by(2) {
            for c in &mut out.coeffs[tri(d)..tri(d + 1)] {
                *c = R::zero();
            }
        }
        out
    }

    /// Formal exponential; the constant term must vanish.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonUnitConstant);
        }
        // Euler operator: d·y_d = sum_j j·s_j·y_{d-j}
        let n = self.order;
        let mut out = Self::one(n);
        for d in 1..=n {
            let mut acc = vec![R::zero(); d + 1];
            for j in 1..=d {
                let sj: Vec<R> = self.homog_slice(j).iter().map(|c| c.scale(&int(j as i64))).collect();
                let p = mul_homog(&sj, out.homog_slice(d - j));
                for (k, c) in p.into_iter().enumerate() {
                    acc[k] += &c;
                }
            }
            let inv = int(d as i64).recip();
            let h: Vec<R> = acc.iter().map(|c| c.scale(&inv)).collect();
            out.set_homogeneous(d, &h);
        }
        Ok(out)
    }

    /// Formal logarithm; the constant term must be one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstant);
        }
        // E(log s) = E(s) / s
        let n = self.order;
        let mut es = Self::zero(n);
        for d in 1..=n {
            let h: Vec<R> = self.homog_slice(d).iter().map(|c| c.scale(&int(d as i64))).collect();
            es.set_homogeneous(d, &h);
        }
        let q = es.mul(&self.inverse()?);
        let mut out = Self::zero(n);
        for d in 1..=n {
            let inv = int(d as i64).recip();
            let h: Vec<R> = q.homog_slice(d).iter().map(|c| c.scale(&inv)).collect();
            out.set_homogeneous(d, &h);
        }
        Ok(out)
    }

    /// Square root with constant term one; the constant term must be one.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::NonUnitConstant);
        }
        let n = self.order;
        let mut out = Self::one(n);
        let half = Rational::new(1.into(), 2.into());
        for d in 1..=n {
            // 2 y_d = s_d - sum_{0<j<d} y_j y_{d-j}
            let mut acc: Vec<R> = self.homog_slice(d).to_vec();
            for j in 1..d {
                let p = mul_homog(out.homog_slice(j), out.homog_slice(d - j));
                for (k, c) in p.into_iter().enumerate() {
                    acc[k] -= &c;
                }
            }
            let h: Vec<R> = acc.iter().map(|c| c.scale(&half)).collect();
            out.set_homogeneous(d, &h);
        }
        Ok(out)
    }

    /// Integer power.
    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::one(self.order);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Restriction `s(λ, -λ)`.
    pub fn restrict_antidiagonal(&self) -> UniSeries<R> {
        let mut out = UniSeries::zero(self.order);
        for d in 0..=self.order {
            let mut acc = R::zero();
            for (k, c) in self.homog_slice(d).iter().enumerate() {
                if (d - k) % 2 == 0 {
                    acc += c;
                } else {
                    acc -= c;
                }
            }
            out.set(d, acc);
        }
        out
    }

    /// Restriction `s(λ, 0)`.
    pub fn restrict_mu_zero(&self) -> UniSeries<R> {
        let mut out = UniSeries::zero(self.order);
        for d in 0..=self.order {
            out.set(d, self.coeff(d, 0).clone());
        }
        out
    }

    /// `u(aλ + bμ)` for a univariate series `u`.
    pub fn from_uni_linear(u: &UniSeries<R>, a: &Rational, b: &Rational) -> Self {
        let n = u.order();
        let pw: Vec<Vec<R>> = linear_power(a, b, n);
        let mut out = Self::zero(n);
        for (p, c) in u.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let h: Vec<R> = pw[p].iter().map(|t| t.clone() * c).collect();
            out.set_homogeneous(p, &h);
        }
        out
    }

    /// Evaluates a polynomial in one variable `t` at the series: `sum p_j s^j`.
    pub fn compose_into(&self, u: &UniSeries<R>) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonUnitConstant);
        }
        let mut out = Self::zero(self.order);
        let mut pw = Self::one(self.order);
        for (j, c) in u.coeffs().iter().enumerate() {
            if j > self.order {
                break;
            }
            if !c.is_zero() {
                out = out.add(&pw.scale_ring(c));
            }
            pw = pw.mul(self);
        }
        Ok(out)
    }
}

fn rational_of<R: CoeffRing>(r: &R) -> Result<Rational, SeriesError> {
    // Only rational linear forms are accepted as divisors.
    let candidates = [-2i64, -1, 0, 1, 2];
    for c in candidates {
        if R::from_rational(int(c)) == *r {
            return Ok(int(c));
        }
    }
    Err(SeriesError::UnsupportedDivisor("linear form with non-integer coefficient".into()))
}

impl<R: CoeffRing> fmt::Debug for BiSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiSeries[order {}](", self.order)?;
        for (k, l, c) in self.terms() {
            write!(f, " ({k},{l}): {}", c.render())?;
        }
        write!(f, " )")
    }
}

impl<R: CoeffRing> fmt::Display for BiSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.order)?;
        for (k, l, c) in self.terms() {
            writeln!(f, "({k},{l}): {}", c.render())?;
        }
        Ok(())
    }
}

impl<R: CoeffRing> Add for &BiSeries<R> {
    type Output = BiSeries<R>;
    fn add(self, o: Self) -> BiSeries<R> {
        BiSeries::add(self, o)
    }
}

impl<R: CoeffRing> Sub for &BiSeries<R> {
    type Output = BiSeries<R>;
    fn sub(self, o: Self) -> BiSeries<R> {
        BiSeries::sub(self, o)
    }
}

impl<R: CoeffRing> Mul for &BiSeries<R> {
    type Output = BiSeries<R>;
    fn mul(self, o: Self) -> BiSeries<R> {
        BiSeries::mul(self, o)
    }
}

impl<R: CoeffRing> Neg for &BiSeries<R> {
    type Output = BiSeries<R>;
    fn neg(self) -> BiSeries<R> {
        BiSeries::neg(self)
    }
}

/// Named series with exact rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardSeries {
    /// `x/(e^x - 1)`
    XOverExpm1,
    /// `(e^x - 1)/x`
    Expm1OverX,
    /// `2x/(e^x - e^-x)`
    TwoXOverSinh,
    /// `(e^{λ+μ} - e^{-λ-μ}) / (2(λ+μ))`
    SinhFactorBivariate,
    /// `(e^μ-1)/(λμ) · ((λ+μ)/(e^{λ+μ}-1) - μ/(e^μ-1))`
    CGeneratingClosed,
}

/// A univariate or bivariate standard series.
#[derive(Clone, Debug, PartialEq)]
pub enum StdSeries {
    Uni(UniSeries<Rational>),
    Bi(BiSeries<Rational>),
}

pub fn standard_series(name: StandardSeries, n: usize) -> StdSeries {
    match name {
        StandardSeries::XOverExpm1 => StdSeries::Uni(x_over_expm1(n)),
        StandardSeries::Expm1OverX => StdSeries::Uni(expm1_over_x(n)),
        StandardSeries::TwoXOverSinh => StdSeries::Uni(two_x_over_sinh(n)),
        StandardSeries::SinhFactorBivariate => StdSeries::Bi(sinh_factor(n)),
        StandardSeries::CGeneratingClosed => StdSeries::Bi(c_generating_closed(n)),
    }
}

/// `e^x`.
pub fn exp_uni(n: usize) -> UniSeries<Rational> {
    UniSeries::from_coeffs((0..=n).map(|k| factorial(k).recip()).collect())
}

/// `x/(e^x - 1) = sum B_n x^n / n!`.
pub fn x_over_expm1(n: usize) -> UniSeries<Rational> {
    let b = bernoulli_vec(n);
    UniSeries::from_coeffs((0..=n).map(|k| &b[k] / factorial(k)).collect())
}

/// `(e^x - 1)/x`.
pub fn expm1_over_x(n: usize) -> UniSeries<Rational> {
    UniSeries::from_coeffs((0..=n).map(|k| factorial(k + 1).recip()).collect())
}

/// `sinh(x)/x = (e^x - e^-x)/(2x)`.
pub fn sinh_over_x(n: usize) -> UniSeries<Rational> {
    UniSeries::from_coeffs(
        (0..=n)
            .map(|k| if k % 2 == 0 { factorial(k + 1).recip() } else { Rational::zero() })
            .collect(),
    )
}

/// `2x/(e^x - e^-x)`.
pub fn two_x_over_sinh(n: usize) -> UniSeries<Rational> {
    sinh_over_x(n).inverse().expect("unit constant term")
}

/// `(e^{λ+μ} - e^{-λ-μ}) / (2(λ+μ))`.
pub fn sinh_factor(n: usize) -> BiSeries<Rational> {
    BiSeries::from_uni_linear(&sinh_over_x(n), &int(1), &int(1))
}

/// Closed form of the generating function of `C_mn`.
pub fn c_generating_closed(n: usize) -> BiSeries<Rational> {
    let m = n + 1;
    let one = int(1);
    let zero = int(0);
    let a = BiSeries::from_uni_linear(&x_over_expm1(m), &one, &one);
    let b = BiSeries::from_uni_linear(&x_over_expm1(m), &zero, &one);
    let diff = a.sub(&b).div_lambda().expect("vanishes at λ = 0");
    let e = BiSeries::from_uni_linear(&expm1_over_x(n), &zero, &one);
    diff.mul(&e)
}

/// `sum C_mn/(m! n!) λ^{n-1} μ^{m-1}` built from the recursive table.
pub fn c_generating_from_table(n: usize) -> BiSeries<Rational> {
    let t = crate::exact_arith::ExtBernoulliTable::new(n + 2);
    let mut out = BiSeries::zero(n);
    for d in 0..=n {
        for k in 0..=d {
            // λ^k μ^(d-k): n_idx = k + 1, m_idx = d - k + 1
            let (mi, ni) = (d - k + 1, k + 1);
            let c = t.get(mi, ni) / (factorial(mi) * factorial(ni));
            out.set(k, d - k, c);
        }
    }
    out
}

/// Coefficient `binom(n,k)` helper re-exported for series code.
pub fn binomial(n: usize, k: usize) -> Rational {
    binom(n, k)
}
