//! Compressed hexagon equation: residual forms, the associator-polynomial
//! basis, the general solution built from free parameters, the three
//! distinguished families, and a degree-by-degree linear solver.
//!
//! A compressed associator is encoded by its symmetric generating series
//! `f(λ,μ) = sum α_kl λ^k μ^l`. Throughout, `ρ = -λ-μ`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::cbh_engine::{hausdorff_in_l3, L3Element};
use crate::exact_arith::{bernoulli_vec, factorial, gamma_coefficients, int, Rational};
use crate::linalg::{echelon_basis, solve, LinalgError};
use crate::series_core::{
    c_generating_closed, exp_uni, expm1_over_x, sinh_factor, subst_lambda_rho, subst_mu_rho,
    subst_rho_lambda, two_x_over_sinh, x_over_expm1, BiSeries, CoeffRing, SeriesError, UniSeries,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexagonError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("asymmetric input")]
    AsymmetricInput,
    #[error("inconsistent system at degree {0}")]
    InconsistentSystem(usize),
    #[error("residual outside span at degree {0}")]
    ResidualOutsideSpan(usize),
    #[error("spine coefficient beta_({0},0) differs from the forced value")]
    SpineMismatch(usize),
}

/// Coefficients `α_kl` of `f`, keyed by `(k, l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTable<R> {
    pub alpha: BTreeMap<(usize, usize), R>,
    pub order: usize,
}

impl<R: CoeffRing> AlphaTable<R> {
    pub fn from_series(f: &BiSeries<R>) -> Self {
        let mut alpha = BTreeMap::new();
        for d in 0..=f.order() {
            for k in 0..=d {
                alpha.insert((k, d - k), f.coeff(k, d - k).clone());
            }
        }
        AlphaTable { alpha, order: f.order() }
    }

    pub fn to_series(&self) -> BiSeries<R> {
        BiSeries::from_terms(self.alpha.iter().map(|(&(k, l), c)| (k, l, c.clone())), self.order)
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha.iter().all(|(&(k, l), c)| self.alpha.get(&(l, k)) == Some(c))
    }
}

/// Free parameters of the general solution. `beta` holds `β_nk` for
/// `k >= 1` (the `k = 0` spine is forced); `beta_tilde` holds `β̃_nk` for
/// `0 <= k <= n/3`. Missing entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet<R> {
    pub beta: BTreeMap<(usize, usize), R>,
    pub beta_tilde: BTreeMap<(usize, usize), R>,
}

impl<R: CoeffRing> Default for ParamSet<R> {
    fn default() -> Self {
        ParamSet { beta: BTreeMap::new(), beta_tilde: BTreeMap::new() }
    }
}

impl<R: CoeffRing> ParamSet<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn with_beta(mut self, n: usize, k: usize, v: R) -> Self {
        assert!(k >= 1 && 3 * k <= n, "beta_({n},{k}) is not a free parameter");
        self.beta.insert((n, k), v);
        self
    }

    pub fn with_beta_tilde(mut self, n: usize, k: usize, v: R) -> Self {
        assert!(3 * k <= n, "beta~_({n},{k}) is not a free parameter");
        self.beta_tilde.insert((n, k), v);
        self
    }

    fn beta_or_zero(&self, n: usize, k: usize) -> R {
        self.beta.get(&(n, k)).cloned().unwrap_or_else(R::zero)
    }

    fn beta_tilde_or_zero(&self, n: usize, k: usize) -> R {
        self.beta_tilde.get(&(n, k)).cloned().unwrap_or_else(R::zero)
    }

    /// Drops entries equal to zero.
    pub fn normalized(mut self) -> Self {
        self.beta.retain(|_, v| !v.is_zero());
        self.beta_tilde.retain(|_, v| !v.is_zero());
        self
    }
}

/// Homogeneous polynomial `F_n = sum δ_k λ^k μ^(n-k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssociatorPolynomial<R> {
    pub degree: usize,
    pub coeffs: Vec<R>,
}

impl<R: CoeffRing> AssociatorPolynomial<R> {
    pub fn to_series(&self) -> BiSeries<R> {
        let mut s = BiSeries::zero(self.degree);
        s.set_homogeneous(self.degree, &self.coeffs);
        s
    }
}

fn lift<R: CoeffRing>(s: &BiSeries<Rational>) -> BiSeries<R> {
    s.map_coeffs(|c| R::from_rational(c.clone()))
}

fn lift_uni<R: CoeffRing>(u: &UniSeries<Rational>) -> UniSeries<R> {
    UniSeries::from_coeffs(u.coeffs().iter().map(|c| R::from_rational(c.clone())).collect())
}

/// `λμ(λ+μ)` and `λ² + λμ + μ²` as exact polynomials.
fn u_w(order: usize) -> (BiSeries<Rational>, BiSeries<Rational>) {
    let u = BiSeries::from_terms([(2, 1, int(1)), (1, 2, int(1))], order);
    let w = BiSeries::from_terms([(2, 0, int(1)), (1, 1, int(1)), (0, 2, int(1))], order);
    (u, w)
}

/// `(λμ(λ+μ))^{2k} (λ²+λμ+μ²)^{n-3k}`, homogeneous of degree `2n`.
pub fn even_basis(n: usize, k: usize) -> Vec<Rational> {
    assert!(3 * k <= n);
    let (u, w) = u_w(2 * n);
    u.pow(2 * k).mul(&w.pow(n - 3 * k)).homogeneous(2 * n)
}

/// `(λμ(λ+μ))^{2k+1} (λ²+λμ+μ²)^{n-3k-1}`, homogeneous of degree `2n+1`.
pub fn odd_basis(n: usize, k: usize) -> Vec<Rational> {
    assert!(n >= 1 && 3 * k < n);
    let (u, w) = u_w(2 * n + 1);
    u.pow(2 * k + 1).mul(&w.pow(n - 3 * k - 1)).homogeneous(2 * n + 1)
}

/// Number of free parameters of `F_degree`.
pub fn associator_param_count(degree: usize) -> usize {
    if degree % 2 == 0 {
        degree / 2 / 3 + 1
    } else if degree == 1 {
        0
    } else {
        (degree / 2 - 1) / 3 + 1
    }
}

/// General associator polynomial of the given degree from its parameters.
pub fn associator_polynomial<R: CoeffRing>(degree: usize, params: &[R]) -> AssociatorPolynomial<R> {
    assert_eq!(params.len(), associator_param_count(degree), "wrong number of parameters");
    let mut coeffs = vec![R::zero(); degree + 1];
    for (k, p) in params.iter().enumerate() {
        let basis = if degree % 2 == 0 { even_basis(degree / 2, k) } else { odd_basis(degree / 2, k) };
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += &p.scale(b);
        }
    }
    AssociatorPolynomial { degree, coeffs }
}

/// `F(λ,μ) = F(μ,λ) = F(λ,-λ-μ)` exactly.
pub fn is_associator_polynomial<R: CoeffRing>(p: &AssociatorPolynomial<R>) -> bool {
    let s = p.to_series();
    s.swap() == s && s.substitute_linear(&subst_lambda_rho()) == s
}

/// `g = λ f/(e^λ - 1)`.
pub fn g_from_f<R: CoeffRing>(f: &BiSeries<R>) -> BiSeries<R> {
    let b = BiSeries::from_uni_linear(&lift_uni(&x_over_expm1(f.order())), &int(1), &int(0));
    b.mul(f)
}

/// `G`, `C` and `T` with `G + C·T = 0` equivalent to the hexagon.
pub fn hexagon_parts<R: CoeffRing>(f: &BiSeries<R>) -> (BiSeries<R>, BiSeries<R>, BiSeries<R>) {
    let n = f.order();
    let g = g_from_f(f);
    let g_mr = g.substitute_linear(&subst_mu_rho());
    let g_rl = g.substitute_linear(&subst_rho_lambda());
    let big_g = g.add(&g_mr).add(&g_rl);
    let t = BiSeries::one(n)
        .add(&g_mr.shift(1, 0).truncate(n))
        .sub(&g.shift(0, 1).truncate(n));
    let c = lift(&c_generating_closed(n));
    (big_g, c, t)
}

/// `G + C·T`.
pub fn residual_39<R: CoeffRing>(f: &BiSeries<R>) -> BiSeries<R> {
    let (g, c, t) = hexagon_parts(f);
    g.add(&c.mul(&t))
}

fn exp_linear<R: CoeffRing>(a: i64, b: i64, order: usize) -> BiSeries<R> {
    BiSeries::from_uni_linear(&lift_uni(&exp_uni(order)), &int(a), &int(b))
}

/// Right-hand side `((e^μ-1)/μ - (e^{-λ}-1)/(-λ)) / (λ+μ)`.
fn rhs_15b(order: usize) -> BiSeries<Rational> {
    let e = expm1_over_x(order + 1);
    let a = BiSeries::from_uni_linear(&e, &int(0), &int(1));
    let b = BiSeries::from_uni_linear(&e, &int(-1), &int(0));
    a.sub(&b).div_lambda_plus_mu().expect("divisible by λ+μ")
}

/// `f + e^μ f(μ,ρ) + e^{-λ} f(λ,ρ) - RHS`.
pub fn residual_15b<R: CoeffRing>(f: &BiSeries<R>) -> BiSeries<R> {
    let n = f.order();
    let lhs = f
        .add(&exp_linear(0, 1, n).mul(&f.substitute_linear(&subst_mu_rho())))
        .add(&exp_linear(-1, 0, n).mul(&f.substitute_linear(&subst_lambda_rho())));
    lhs.sub(&lift(&rhs_15b(n)))
}

/// Residuals of the even and odd halves of the hexagon.
pub fn split_residuals<R: CoeffRing>(f: &BiSeries<R>) -> Result<(BiSeries<R>, BiSeries<R>), HexagonError> {
    if !f.is_symmetric() {
        return Err(HexagonError::AsymmetricInput);
    }
    let n = f.order();
    let ft = f.shift(1, 1).add_constant(&R::one());
    let ev = ft.even_part();
    let m = n + 2;
    let a = ev
        .mul_linear(&int(1), &int(1))
        .truncate(m)
        .sub(&exp_linear(0, 1, m).mul(&ev.substitute_linear(&subst_mu_rho())).shift(1, 0).truncate(m))
        .sub(&exp_linear(-1, 0, m).mul(&ev.substitute_linear(&subst_lambda_rho())).shift(0, 1).truncate(m));
    let od = f.odd_part();
    let b = od
        .add(&exp_linear(0, 1, n).mul(&od.substitute_linear(&subst_mu_rho())))
        .add(&exp_linear(-1, 0, n).mul(&od.substitute_linear(&subst_lambda_rho())));
    Ok((a, b))
}

/// `α_{2k,0} = 2^{2k+1} B_{2k+2}/(2k+2)!` for `2k <= n`.
pub fn extreme_coefficients(n: usize) -> Vec<Rational> {
    let b = bernoulli_vec(n + 2);
    (0..=n / 2)
        .map(|k| {
            let e = 2 * k;
            Rational::from_integer(num_bigint::BigInt::from(2).pow((e + 1) as u32)) * &b[e + 2] / factorial(e + 2)
        })
        .collect()
}

/// `f(λ,-λ) = (1 - 2λ/(e^λ - e^{-λ}))/λ²` up to `λ^n`.
pub fn diagonal_series(n: usize) -> UniSeries<Rational> {
    let g = two_x_over_sinh(n + 2);
    UniSeries::from_coeffs((0..=n).map(|d| -g.coeff(d + 2).clone()).collect())
}

fn spine(n: usize) -> Vec<Rational> {
    gamma_coefficients(2 * n)
}

/// `h = sum_n sum_k β_nk (λμ(λ+μ))^{2k} ω^{2n-6k}` up to the order, with
/// `β_n0` forced.
pub fn build_h<R: CoeffRing>(params: &ParamSet<R>, order: usize) -> BiSeries<R> {
    let gam = spine(order / 2);
    let mut h = BiSeries::zero(order);
    for n in 0..=order / 2 {
        for k in 0..=n / 3 {
            let c = if k == 0 { R::from_rational(gam[n].clone()) } else { params.beta_or_zero(n, k) };
            if c.is_zero() {
                continue;
            }
            let mut hom = h.homogeneous(2 * n);
            for (i, b) in even_basis(n, k).iter().enumerate() {
                hom[i] += &c.scale(b);
            }
            h.set_homogeneous(2 * n, &hom);
        }
    }
    h
}

/// `h̃ = sum_n sum_k β̃_nk (λμ(λ+μ))^{2k} ω^{2n-6k}` up to the order.
pub fn build_h_tilde<R: CoeffRing>(params: &ParamSet<R>, order: usize) -> BiSeries<R> {
    let mut h = BiSeries::zero(order);
    for n in 0..=order / 2 {
        for k in 0..=n / 3 {
            let c = params.beta_tilde_or_zero(n, k);
            if c.is_zero() {
                continue;
            }
            let mut hom = h.homogeneous(2 * n);
            for (i, b) in even_basis(n, k).iter().enumerate() {
                hom[i] += &c.scale(b);
            }
            h.set_homogeneous(2 * n, &hom);
        }
    }
    h
}

/// The general solution: `1 + λμ Even f = S·h`, `Odd f = (λ+μ) S·h̃` with
/// `S = sinh(λ+μ)/(λ+μ)`.
pub fn build_f<R: CoeffRing>(params: &ParamSet<R>, n: usize) -> Result<BiSeries<R>, HexagonError> {
    let s = lift::<R>(&sinh_factor(n + 2));
    let h = build_h(params, n + 2);
    let even = s.mul(&h).add_constant(&-R::one()).div_monomial(1, 1)?;
    if n == 0 {
        return Ok(even);
    }
    let ht = build_h_tilde(params, n - 1);
    let odd = s.truncate(n - 1).mul(&ht).mul_linear(&int(1), &int(1));
    Ok(even.add(&odd))
}

/// `h` and `h̃` recovered from a symmetric `f`; `h̃` is `None` at order 0.
pub fn extract_h<R: CoeffRing>(f: &BiSeries<R>) -> Result<(BiSeries<R>, Option<BiSeries<R>>), HexagonError> {
    let n = f.order();
    let s_inv = lift::<R>(&sinh_factor(n + 2).inverse()?);
    let h = f.even_part().shift(1, 1).add_constant(&R::one()).mul(&s_inv);
    if n == 0 {
        return Ok((h, None));
    }
    let ht = f.odd_part().div_lambda_plus_mu()?.mul(&s_inv.truncate(n - 1));
    Ok((h, Some(ht)))
}

/// Expresses a series with the four symmetries in the even basis;
/// returns `β_nk` for every `(n, k)` up to the order.
pub fn decompose_h<R: CoeffRing>(h: &BiSeries<R>) -> Result<BTreeMap<(usize, usize), R>, HexagonError> {
    let mut out = BTreeMap::new();
    for d in (1..=h.order()).step_by(2) {
        if h.homogeneous(d).iter().any(|c| !c.is_zero()) {
            return Err(HexagonError::ResidualOutsideSpan(d));
        }
    }
    for n in 0..=h.order() / 2 {
        let cols: Vec<Vec<Rational>> = (0..=n / 3).map(|k| even_basis(n, k)).collect();
        let rows: Vec<Vec<Rational>> = (0..=2 * n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let rhs = h.homogeneous(2 * n);
        let sol = solve(&rows, &rhs, cols.len()).map_err(|_| HexagonError::ResidualOutsideSpan(2 * n))?;
        for (k, v) in sol.particular.into_iter().enumerate() {
            out.insert((n, k), v);
        }
    }
    Ok(out)
}

/// Recovers the free parameters of a solution `f`.
pub fn decompose<R: CoeffRing>(f: &BiSeries<R>) -> Result<ParamSet<R>, HexagonError> {
    if !f.is_symmetric() {
        return Err(HexagonError::AsymmetricInput);
    }
    let (h, ht) = extract_h(f)?;
    let gam = spine(h.order() / 2);
    let mut params = ParamSet::zero();
    for ((n, k), v) in decompose_h(&h)? {
        if k == 0 {
            if v != R::from_rational(gam[n].clone()) {
                return Err(HexagonError::SpineMismatch(n));
            }
        } else {
            params.beta.insert((n, k), v);
        }
    }
    if let Some(ht) = ht {
        params.beta_tilde = decompose_h(&ht)?;
    }
    Ok(params.normalized())
}

/// Whether `h` has the four symmetries and, if requested, the boundary
/// value `h(λ,0) = 2λ/(e^λ - e^{-λ})`.
pub fn has_h_symmetries<R: CoeffRing>(h: &BiSeries<R>, boundary: bool) -> bool {
    let sym = h.swap() == *h
        && h.odd_part().is_zero()
        && h.substitute_linear(&subst_lambda_rho()) == *h;
    if !sym || !boundary {
        return sym;
    }
    let g = two_x_over_sinh(h.order());
    (0..=h.order()).all(|d| *h.coeff(d, 0) == R::from_rational(g.coeff(d).clone()))
}

/// `f^I`: all free parameters zero.
pub fn family_i(n: usize) -> BiSeries<Rational> {
    build_f(&ParamSet::zero(), n).expect("exact construction")
}

/// `f^II` from `1 + 2λμ f = S·(γ(λ) + γ(μ) - 1)`.
pub fn family_ii(n: usize) -> BiSeries<Rational> {
    let m = n + 2;
    let g = two_x_over_sinh(m);
    let gl = BiSeries::from_uni_linear(&g, &int(1), &int(0));
    let gm = BiSeries::from_uni_linear(&g, &int(0), &int(1));
    let rhs = sinh_factor(m).mul(&gl.add(&gm).add_constant(&int(-1)));
    rhs.add_constant(&int(-1))
        .div_monomial(1, 1)
        .expect("divisible by λμ")
        .scale(&Rational::new(1.into(), 2.into()))
}

/// `f^III` from `1 + λμ f = exp(sum 2^{2n} B_{2n}/(4n (2n)!) ((λ+μ)^{2n} - λ^{2n} - μ^{2n}))`.
pub fn family_iii(n: usize) -> BiSeries<Rational> {
    let m = n + 2;
    let b = bernoulli_vec(m);
    let mut coeffs = vec![Rational::zero(); m + 1];
    for j in (2..=m).step_by(2) {
        let two = Rational::from_integer(num_bigint::BigInt::from(2).pow(j as u32));
        coeffs[j] = two * &b[j] / (int(2 * j as i64) * factorial(j));
    }
    let u = UniSeries::from_coeffs(coeffs);
    let e = BiSeries::from_uni_linear(&u, &int(1), &int(1))
        .sub(&BiSeries::from_uni_linear(&u, &int(1), &int(0)))
        .sub(&BiSeries::from_uni_linear(&u, &int(0), &int(1)));
    e.exp().expect("zero constant term").add_constant(&int(-1)).div_monomial(1, 1).expect("divisible by λμ")
}

/// Free parameters entering `f` at total degree `d`.
pub fn free_parameter_count(d: usize) -> usize {
    if d % 2 == 0 {
        (d + 2) / 6
    } else {
        (d / 2) / 3 + 1
    }
}

/// Extra degrees solved beyond the requested one; the top degrees of a
/// truncated system carry directions that only later equations pin down.
pub const SOLVER_LOOKAHEAD: usize = 2;

/// Solution data at one total degree.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degree: usize,
    /// Symmetric unknowns `α_kl`, `k <= l`, in column order.
    pub unknowns: Vec<(usize, usize)>,
    /// Free directions whose lowest nonzero degree is this one.
    pub kernel_dim: usize,
    pub expected_free: usize,
    /// Normalized solution: free unknowns set to zero.
    #[serde(serialize_with = "ser_values")]
    pub values: Vec<((usize, usize), Rational)>,
    /// Leading parts of those free directions on `unknowns`.
    #[serde(serialize_with = "ser_kernel")]
    pub kernel: Vec<Vec<Rational>>,
}

fn ser_values<S: serde::Serializer>(v: &[((usize, usize), Rational)], s: S) -> Result<S::Ok, S::Error> {
    let x: Vec<(usize, usize, String)> = v.iter().map(|((k, l), c)| (*k, *l, c.to_string())).collect();
    serde::Serialize::serialize(&x, s)
}

fn ser_kernel<S: serde::Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let x: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
    serde::Serialize::serialize(&x, s)
}

#[derive(Clone, Debug)]
pub struct SolverReport {
    pub degrees: Vec<DegreeReport>,
    /// The normalized solution assembled from all degrees.
    pub f: BiSeries<Rational>,
}

impl SolverReport {
    pub fn census_matches(&self) -> bool {
        self.degrees.iter().all(|d| d.kernel_dim == d.expected_free)
    }
}

/// Symmetric unknowns of degree `d`, largest `k` first.
fn degree_unknowns(d: usize) -> Vec<(usize, usize)> {
    (0..=d / 2).rev().map(|k| (k, d - k)).collect()
}

/// Solves the hexagon on symmetric unknowns of degree `<= n` (plus a
/// lookahead) and reports, degree by degree, the normalized solution and
/// the free directions entering there.
pub fn solve_degreewise(n: usize) -> Result<SolverReport, HexagonError> {
    solve_with_lookahead(n, SOLVER_LOOKAHEAD)
}

pub fn solve_with_lookahead(n: usize, lookahead: usize) -> Result<SolverReport, HexagonError> {
    let m = n + lookahead;
    // high degrees first so that free columns sit at low degrees
    let unknowns: Vec<(usize, usize)> = (0..=m).rev().flat_map(degree_unknowns).collect();
    let zero = BiSeries::<Rational>::zero(m);
    let r0 = residual_15b(&zero);
    let flat = |s: &BiSeries<Rational>| -> Vec<Rational> { (0..=m).flat_map(|d| s.homogeneous(d)).collect() };
    let r0v = flat(&r0);
    let mut cols = Vec::with_capacity(unknowns.len());
    for &(k, l) in &unknowns {
        let mut e = zero.clone();
        e.set(k, l, int(1));
        e.set(l, k, int(1));
        let rv = flat(&residual_15b(&e));
        cols.push(rv.iter().zip(&r0v).map(|(a, b)| a - b).collect::<Vec<_>>());
    }
    let rows: Vec<Vec<Rational>> = (0..r0v.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let rhs: Vec<Rational> = r0v.iter().map(|c| -c.clone()).collect();
    let sol = solve(&rows, &rhs, unknowns.len()).map_err(|e| match e {
        LinalgError::Inconsistent => HexagonError::InconsistentSystem(m),
        other => HexagonError::Linalg(other),
    })?;

    let mut f = BiSeries::<Rational>::zero(n);
    for (&(k, l), v) in unknowns.iter().zip(&sol.particular) {
        if k + l <= n {
            f.set(k, l, v.clone());
            f.set(l, k, v.clone());
        }
    }
    // kernel in echelon form with coordinates in ascending degree
    let order: Vec<usize> = (0..unknowns.len()).rev().collect();
    let permuted: Vec<Vec<Rational>> =
        sol.kernel.iter().map(|v| order.iter().map(|&i| v[i].clone()).collect()).collect();
    let ech = echelon_basis(&permuted, unknowns.len());
    let mut degrees = Vec::new();
    for d in 0..=n {
        let cols_d: Vec<usize> = unknowns
            .iter()
            .enumerate()
            .filter(|(_, (k, l))| k + l == d)
            .map(|(i, _)| i)
            .collect();
        let leading: Vec<Vec<Rational>> = ech
            .iter()
            .filter(|(p, _)| cols_d.contains(&order[*p]))
            .map(|(_, row)| cols_d.iter().map(|&i| row[order.iter().position(|&o| o == i).unwrap()].clone()).collect())
            .collect();
        degrees.push(DegreeReport {
            degree: d,
            unknowns: degree_unknowns(d),
            kernel_dim: leading.len(),
            expected_free: free_parameter_count(d),
            values: cols_d.iter().map(|&i| (unknowns[i], sol.particular[i].clone())).collect(),
            kernel: leading,
        });
    }
    Ok(SolverReport { degrees, f })
}

/// `φ̄(u,w) = f(ℓu, ℓw)·[u,w]` for linear `u`, `w` in the model `L3`.
pub fn phi_bar_l3(f: &BiSeries<Rational>, u: &L3Element<Rational>, w: &L3Element<Rational>) -> L3Element<Rational> {
    let (ul, um) = u.action();
    let (wl, wm) = w.action();
    let sub = f.substitute_linear(&[[ul, um], [wl, wm]]);
    let br = u.bracket(w);
    L3Element { comm: sub.mul(&br.comm), ..L3Element::zero(f.order()) }
}

/// Independent check of the hexagon through Hausdorff products in `L3`:
/// `log(e^{ψ(c,a)} e^{ψ(b,c)} e^{ψ(a,b)}) = a + b + c`.
pub fn model_hexagon_check(f: &BiSeries<Rational>, n: usize) -> bool {
    let n = n.min(f.order());
    let f = f.truncate(n);
    let a = L3Element::letter('a', n);
    let b = L3Element::letter('b', n);
    let c = L3Element::letter('c', n);
    let psi = |u: &L3Element<Rational>, w: &L3Element<Rational>| hausdorff_in_l3(&phi_bar_l3(&f, u, w), u, n);
    let inner = hausdorff_in_l3(&psi(&b, &c), &psi(&a, &b), n);
    let total = hausdorff_in_l3(&psi(&c, &a), &inner, n);
    total.is_central_multiple(&int(1))
}
