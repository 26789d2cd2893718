//! The Drinfeld series with odd zeta values kept as formal symbols.
//!
//! `θ_n = ζ(n)/(n (π√-1)^n)` is an exact rational for even `n` and an
//! opaque commuting generator for odd `n >= 3`. Coefficients live in
//! [`ThetaPoly`], the polynomial ring over `Q` in `θ_3, θ_5, θ_7, ...`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::exact_arith::{bernoulli, binom, factorial, fmt_rational, gamma_coefficients, int, Rational};
use crate::hexagon_solver::{decompose_h, HexagonError, ParamSet};
use crate::series_core::{sinh_factor, sinh_over_x, BiSeries, CoeffRing, UniSeries};

/// Polynomial in the odd symbols; exponent slot `i` belongs to `θ_{2i+3}`.
/// Exponent vectors carry no trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ThetaPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// Odd index `2i+3` of exponent slot `i`.
pub fn theta_index(slot: usize) -> usize {
    2 * slot + 3
}

impl ThetaPoly {
    pub fn constant(c: Rational) -> Self {
        let mut p = ThetaPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    /// The symbol `θ_n` for odd `n >= 3`.
    pub fn theta(n: usize) -> Self {
        assert!(n >= 3 && n % 2 == 1, "odd index at least 3");
        let mut e = vec![0; (n - 3) / 2 + 1];
        e[(n - 3) / 2] = 1;
        let mut p = ThetaPoly::default();
        p.add_term(e, Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(it: I) -> Self {
        let mut p = ThetaPoly::default();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let sum = self.terms.get(&e).map_or_else(|| c.clone(), |v| v + &c);
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(&trim(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value after setting every odd symbol to zero.
    pub fn constant_part(&self) -> Rational {
        self.coefficient(&[])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_empty())
    }

    /// Weight of a monomial: `θ_n` has weight `n`.
    pub fn monomial_weight(e: &[u32]) -> usize {
        e.iter().enumerate().map(|(i, &x)| x as usize * theta_index(i)).sum()
    }

    /// Largest weight of a monomial with nonzero coefficient.
    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(|e| Self::monomial_weight(e)).max().unwrap_or(0)
    }

    fn monomial_string(e: &[u32], latex: bool) -> String {
        let mut parts = Vec::new();
        for (i, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let n = theta_index(i);
            let base = if latex { format!("\\theta_{{{n}}}") } else { format!("t{n}") };
            parts.push(match (x, latex) {
                (1, _) => base,
                (_, true) => format!("{base}^{{{x}}}"),
                (_, false) => format!("{base}^{x}"),
            });
        }
        parts.join(if latex { " " } else { "*" })
    }

    fn render_with(&self, latex: bool) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest weight first, constant last
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| Self::monomial_weight(b.0).cmp(&Self::monomial_weight(a.0)).then(b.0.cmp(a.0)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = Self::monomial_string(e, latex);
            let coef = if latex && !a.is_integer() {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            } else {
                fmt_rational(&a)
            };
            match (mono.is_empty(), a.is_one()) {
                (true, _) => out.push_str(&coef),
                (false, true) => out.push_str(&mono),
                (false, false) if latex => out.push_str(&format!("{coef} {mono}")),
                (false, false) => out.push_str(&format!("{coef}*{mono}")),
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render_with(true)
    }
}

impl fmt::Debug for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(false))
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(false))
    }
}

impl Zero for ThetaPoly {
    fn zero() -> Self {
        ThetaPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ThetaPoly {
    fn one() -> Self {
        ThetaPoly::constant(Rational::one())
    }
}

impl Neg for ThetaPoly {
    type Output = ThetaPoly;

    fn neg(self) -> ThetaPoly {
        ThetaPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<'a> AddAssign<&'a ThetaPoly> for ThetaPoly {
    fn add_assign(&mut self, o: &'a ThetaPoly) {
        for (e, c) in &o.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a ThetaPoly> for ThetaPoly {
    fn sub_assign(&mut self, o: &'a ThetaPoly) {
        for (e, c) in &o.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<'a> Add<&'a ThetaPoly> for ThetaPoly {
    type Output = ThetaPoly;

    fn add(mut self, o: &'a ThetaPoly) -> ThetaPoly {
        self += o;
        self
    }
}

impl Add for ThetaPoly {
    type Output = ThetaPoly;

    fn add(self, o: ThetaPoly) -> ThetaPoly {
        self + &o
    }
}

impl<'a> Sub<&'a ThetaPoly> for ThetaPoly {
    type Output = ThetaPoly;

    fn sub(mut self, o: &'a ThetaPoly) -> ThetaPoly {
        self -= o;
        self
    }
}

impl<'a> Mul<&'a ThetaPoly> for ThetaPoly {
    type Output = ThetaPoly;

    fn mul(self, o: &'a ThetaPoly) -> ThetaPoly {
        let mut out = ThetaPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> =
                    (0..n).map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0)).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Mul for ThetaPoly {
    type Output = ThetaPoly;

    fn mul(self, o: ThetaPoly) -> ThetaPoly {
        self * &o
    }
}

impl CoeffRing for ThetaPoly {
    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return ThetaPoly::default();
        }
        ThetaPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect() }
    }

    fn from_rational(r: Rational) -> Self {
        ThetaPoly::constant(r)
    }

    fn try_inverse(&self) -> Option<Self> {
        let c = self.constant_part();
        (self.is_constant() && !c.is_zero()).then(|| ThetaPoly::constant(c.recip()))
    }

    fn render(&self) -> String {
        self.render_with(false)
    }

    fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> =
            self.terms.iter().map(|(e, c)| json!([e, c.to_string()])).collect();
        json!({ "poly": terms })
    }
}

/// `θ_{2n} = -2^{2n} B_{2n} / (2 (2n)! · 2n)`.
pub fn theta_even(n: usize) -> Rational {
    assert!(n >= 1);
    let two = Rational::from_integer(BigInt::from(2).pow(2 * n as u32));
    -(two * bernoulli(2 * n)) / (int(2) * factorial(2 * n) * int(2 * n as i64))
}

/// `θ_n` as a ring element: rational for even `n`, a symbol for odd `n`.
pub fn theta(n: usize) -> ThetaPoly {
    if n % 2 == 0 {
        ThetaPoly::constant(theta_even(n / 2))
    } else {
        ThetaPoly::theta(n)
    }
}

/// `S(x) = sum_{n>=2} θ_n x^n`.
pub fn s_uni(order: usize) -> UniSeries<ThetaPoly> {
    UniSeries::from_coeffs((0..=order).map(|n| if n < 2 { ThetaPoly::zero() } else { theta(n) }).collect())
}

/// The Drinfeld series `s(λ,μ) = S(λ) + S(μ) - S(λ+μ)`.
pub fn drinfeld_s(order: usize) -> BiSeries<ThetaPoly> {
    let s = s_uni(order);
    let (one, zero) = (int(1), int(0));
    BiSeries::from_uni_linear(&s, &one, &zero)
        .add(&BiSeries::from_uni_linear(&s, &zero, &one))
        .sub(&BiSeries::from_uni_linear(&s, &one, &one))
}

/// `f^D` from `1 + λμ f^D = exp(s)`, to order `n`.
pub fn drinfeld_f(n: usize) -> BiSeries<ThetaPoly> {
    drinfeld_s(n + 2)
        .exp()
        .expect("s has no constant term")
        .add_constant(&-ThetaPoly::one())
        .div_monomial(1, 1)
        .expect("exp(s) - 1 vanishes on both axes")
}

/// Checks `exp(-2 Even S(ρ)) = sinh(ρ)/ρ` coefficientwise to order `n`.
pub fn verify_even_s_identity(n: usize) -> bool {
    let even: Vec<Rational> = (0..=n).map(|k| if k >= 2 && k % 2 == 0 { -int(2) * theta_even(k / 2) } else { Rational::zero() }).collect();
    let lhs = BiSeries::from_uni_linear(&UniSeries::from_coeffs(even), &int(1), &int(0)).exp().expect("no constant term");
    let rhs = BiSeries::from_uni_linear(&sinh_over_x(n), &int(1), &int(0));
    lhs == rhs
}

/// `θ(λ,μ) = -sum θ_{2n+1} ((λ+μ)^{2n+1} - λ^{2n+1} - μ^{2n+1})`.
pub fn theta_series(order: usize) -> BiSeries<ThetaPoly> {
    let mut out = BiSeries::zero(order);
    for m in (3..=order).step_by(2) {
        let t = ThetaPoly::theta(m);
        let mut hom = vec![ThetaPoly::zero(); m + 1];
        for (k, slot) in hom.iter_mut().enumerate().take(m).skip(1) {
            *slot = -t.scale(&binom(m, k));
        }
        out.set_homogeneous(m, &hom);
    }
    out
}

/// `sqrt( sinh(λ+μ)/(λ+μ) · λ/sinh λ · μ/sinh μ )^{-1}`, i.e. the rational
/// factor dividing the hyperbolic functions of `θ(λ,μ)`.
fn inverse_root_factor(order: usize) -> BiSeries<Rational> {
    let sx = sinh_over_x(order);
    let prod = sinh_factor(order)
        .mul(&BiSeries::from_uni_linear(&sx, &int(1), &int(0)))
        .mul(&BiSeries::from_uni_linear(&sx, &int(0), &int(1)));
    prod.sqrt().expect("unit constant term").inverse().expect("unit constant term")
}

/// `h` and `h̃` solving the two equations in hyperbolic form: `cosh θ = h·R`
/// and `sinh θ = h̃ λμ(λ+μ) R`, with `R` the rational square root factor.
pub fn hyperbolic_h(n: usize) -> Result<(BiSeries<ThetaPoly>, BiSeries<ThetaPoly>), HexagonError> {
    let m = n + 2;
    let e = theta_series(m).exp()?;
    let rinv = inverse_root_factor(m).map_coeffs(|c| ThetaPoly::constant(c.clone()));
    let h = e.even_part().mul(&rinv);
    let ht = e.odd_part().mul(&rinv).div_monomial(1, 1)?.div_lambda_plus_mu()?;
    Ok((h, ht))
}

/// The free parameters reproducing `f^D`, solved degree by degree with
/// coefficients in the θ-ring.
pub fn solve_betas_in_theta(n: usize) -> Result<ParamSet<ThetaPoly>, HexagonError> {
    let (h, ht) = hyperbolic_h(n)?;
    let spine = gamma_coefficients(h.order());
    let mut params = ParamSet::zero();
    for ((d, k), v) in decompose_h(&h)? {
        if k == 0 {
            if v != ThetaPoly::constant(spine[d].clone()) {
                return Err(HexagonError::SpineMismatch(d));
            }
        } else {
            params.beta.insert((d, k), v);
        }
    }
    params.beta_tilde = decompose_h(&ht)?;
    Ok(params.normalized())
}

/// Sets every odd symbol to zero.
pub fn drop_odd(f: &BiSeries<ThetaPoly>) -> BiSeries<Rational> {
    f.map_coeffs(|c| c.constant_part())
}

/// Largest θ-weight among the degree-`d` coefficients of a series.
pub fn weight_profile(f: &BiSeries<ThetaPoly>) -> Vec<usize> {
    (0..=f.order()).map(|d| f.homogeneous(d).iter().map(|c| c.max_weight()).max().unwrap_or(0)).collect()
}
