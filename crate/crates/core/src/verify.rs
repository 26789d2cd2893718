//! The `verify all` suite: named self-checks run concurrently.

use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cbh_engine::{agree, associative_log_oracle, classical_cbh_in_model, compressed_cbh, mirrored_cbh};
use crate::exact_arith::{
    check_bernoulli_identity, ext_bernoulli_closed, rat, BernoulliIdentity, ExtBernoulliTable, Rational,
};
use crate::hexagon_solver::{
    decompose, diagonal_series, extreme_coefficients, family_i, family_ii, family_iii, model_hexagon_check,
    residual_15b, solve_degreewise, split_residuals, AlphaTable,
};
use crate::pentagon_checker::{dimension_report, pentagon_check_with, QuotientReducer, Variant};
use crate::series_core::{BiSeries, CoeffRing};
use crate::zeta_symbols::{drinfeld_f, drop_odd, solve_betas_in_theta, theta_even, verify_even_s_identity, ThetaPoly};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub millis: u128,
}

type CheckFn = fn(usize) -> Result<String, String>;

/// Every sub-check, in report order.
pub const CHECKS: &[(&str, CheckFn)] = &[
    ("bernoulli", check_bernoulli),
    ("cbh_paths", check_cbh),
    ("hexagon_families", check_hexagon_families),
    ("extreme_and_diagonal", check_extreme),
    ("degreewise_census", check_census),
    ("pentagon", check_pentagon),
    ("l3bar_dimensions", check_l3bar),
    ("l4bar_dimensions", check_l4bar),
    ("zeta", check_zeta),
];

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn check_bernoulli(_: usize) -> Result<String, String> {
    let t = ExtBernoulliTable::new(12);
    ensure(t.len() == 66, format!("table has {} entries", t.len()))?;
    for (&(m, n), c) in t.entries() {
        ensure(*c == ext_bernoulli_closed(m, n), format!("C_({m},{n}) recursion differs from closed form"))?;
    }
    for m in 1..=30 {
        for v in [BernoulliIdentity::A, BernoulliIdentity::B, BernoulliIdentity::C] {
            ensure(check_bernoulli_identity(m, v), format!("identity {v:?} fails at m={m}"))?;
        }
    }
    Ok("66 table entries, recursion = closed form".into())
}

fn check_cbh(n: usize) -> Result<String, String> {
    let c = compressed_cbh(n);
    ensure(agree(&c, &mirrored_cbh(n)), "recursion and mirrored recursion differ")?;
    ensure(agree(&c, &classical_cbh_in_model(n)), "closed form and classical recursion differ")?;
    let m = n.min(8);
    ensure(agree(&compressed_cbh(m), &associative_log_oracle(m)), "associative oracle differs")?;
    Ok(format!("three paths agree to degree {n}, associative oracle to {m}"))
}

fn check_hexagon_families(_: usize) -> Result<String, String> {
    for (name, f) in [("I", family_i(12)), ("II", family_ii(12)), ("III", family_iii(12))] {
        ensure(residual_15b(&f).is_zero(), format!("family {name} residual nonzero"))?;
        ensure(model_hexagon_check(&f, 8), format!("family {name} fails the L3 product check"))?;
    }
    let (a, b) = split_residuals(&drinfeld_f(9)).map_err(|e| e.to_string())?;
    ensure(a.is_zero() && b.is_zero(), "Drinfeld series residual nonzero")?;
    Ok("I, II, III to degree 12; Drinfeld series to 9".into())
}

fn check_extreme(_: usize) -> Result<String, String> {
    let want = [rat(1, 6), rat(-1, 90), rat(1, 945), rat(-1, 9450)];
    ensure(extreme_coefficients(6) == want, "extreme coefficients")?;
    let d = diagonal_series(6);
    let diag = [rat(1, 6), rat(-7, 360), rat(31, 15120), rat(-127, 604800)];
    for (i, w) in diag.iter().enumerate() {
        ensure(d.coeff(2 * i) == w, format!("diagonal coefficient {}", 2 * i))?;
    }
    Ok("extreme and diagonal coefficients match".into())
}

fn check_census(_: usize) -> Result<String, String> {
    let rep = solve_degreewise(12).map_err(|e| e.to_string())?;
    ensure(rep.census_matches(), "kernel dimensions differ from the free-parameter count")?;
    let dims: Vec<String> = rep.degrees.iter().map(|d| d.kernel_dim.to_string()).collect();
    Ok(format!("free dimensions {}", dims.join(",")))
}

/// Random symmetric table with small entries; the same seed gives the same table.
pub fn random_symmetric_alpha(seed: u64, order: usize) -> AlphaTable<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = BiSeries::zero(order);
    for d in 0..=order {
        for k in 0..=d / 2 {
            let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=9).into());
            f.set(k, d - k, c.clone());
            f.set(d - k, k, c);
        }
    }
    AlphaTable::from_series(&f)
}

/// `random_symmetric_alpha` with one off-diagonal entry perturbed.
pub fn random_asymmetric_alpha(seed: u64, order: usize) -> AlphaTable<Rational> {
    let mut t = random_symmetric_alpha(seed, order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let d = rng.gen_range(1..=order);
    let k = rng.gen_range(0..=(d - 1) / 2);
    let delta = Rational::new(rng.gen_range(1i64..=5).into(), rng.gen_range(1i64..=5).into());
    *t.alpha.get_mut(&(k, d - k)).expect("entry present") += delta;
    t
}

fn check_pentagon(n: usize) -> Result<String, String> {
    let n = n.clamp(2, 10);
    let order = n - 2;
    let reducer = QuotientReducer::l4(n);
    let pentagon_check = |t: &AlphaTable<Rational>, n: usize| pentagon_check_with(&reducer, t, n);
    let fi = AlphaTable::from_series(&family_i(order));
    ensure(pentagon_check(&fi, n).map_err(|e| e.to_string())?.pass, "f^I fails")?;
    for seed in 0..10 {
        let sym = random_symmetric_alpha(seed, order);
        ensure(pentagon_check(&sym, n).map_err(|e| e.to_string())?.pass, format!("symmetric table {seed} fails"))?;
        if order >= 1 {
            let asym = random_asymmetric_alpha(seed, order);
            ensure(!pentagon_check(&asym, n).map_err(|e| e.to_string())?.pass, format!("asymmetric table {seed} passes"))?;
        }
    }
    Ok(format!("zero to degree {n} for f^I and 10 symmetric tables, nonzero for 10 perturbations"))
}

fn check_l3bar(_: usize) -> Result<String, String> {
    let rep = dimension_report(10, Variant::L3bar);
    ensure(rep.iter().all(|r| r.ok), "dimension differs from the model")?;
    Ok("dimensions 3,1,2,...,9 through degree 10".into())
}

fn check_l4bar(n: usize) -> Result<String, String> {
    let rep = dimension_report(n.clamp(2, 10), Variant::L4bar);
    ensure(rep.iter().all(|r| r.ok), "dimension above the spanning bound")?;
    let dims: Vec<String> = rep.iter().map(|r| r.dimension.to_string()).collect();
    Ok(format!("dimensions {}", dims.join(",")))
}

fn check_zeta(_: usize) -> Result<String, String> {
    let want = [rat(-1, 12), rat(1, 360), rat(-1, 5670), rat(1, 75600), rat(-1, 935550)];
    for (i, w) in want.iter().enumerate() {
        ensure(theta_even(i + 1) == *w, format!("theta_{}", 2 * i + 2))?;
    }
    ensure(verify_even_s_identity(12), "even part of S")?;
    ensure(drop_odd(&drinfeld_f(12)) == family_iii(12), "odd symbols set to zero differ from f^III")?;
    let p = solve_betas_in_theta(9).map_err(|e| e.to_string())?;
    ensure(p == decompose(&drinfeld_f(9)).map_err(|e| e.to_string())?, "the two parameter routes differ")?;
    let t3 = ThetaPoly::theta(3);
    let b31 = (t3.clone() * &t3).scale(&rat(9, 2)) + &ThetaPoly::constant(rat(-8, 15120));
    ensure(p.beta.get(&(3, 1)) == Some(&b31), "beta_31")?;
    Ok("even thetas, f^III limit, parameters solved to degree 9".into())
}

/// Runs the selected checks concurrently, preserving order.
pub fn run_checks(n: usize, names: &[&str]) -> Vec<CheckResult> {
    let selected: Vec<(&'static str, CheckFn)> =
        CHECKS.iter().filter(|(name, _)| names.is_empty() || names.contains(name)).copied().collect();
    thread::scope(|s| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(name, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = f(n);
                    let millis = t.elapsed().as_millis();
                    match r {
                        Ok(detail) => CheckResult { name, pass: true, detail, millis },
                        Err(detail) => CheckResult { name, pass: false, detail, millis },
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    })
}

pub fn run_all(n: usize) -> Vec<CheckResult> {
    run_checks(n, &[])
}
