//! End-to-end acceptance run: one printed PASS/FAIL line per criterion.
//! Runs without the test harness so the lines are always shown.
//!
//! Every expected value below is a literal transcription of a printed table
//! or display. Where a printed value is a misprint, the entry carries both
//! the printed and the corrected value; the check then requires the engine
//! to produce the corrected value and to differ from the printed one.

use std::collections::BTreeMap;
use std::thread;
use std::time::Instant;

use assoc_core::cbh_engine::{agree, associative_log_oracle, classical_cbh_in_model, compressed_cbh, mirrored_cbh};
use assoc_core::exact_arith::{
    bernoulli, check_bernoulli_identity, ext_bernoulli_closed, factorial, parse_rational, rat, BernoulliIdentity,
    ExtBernoulliTable, Rational,
};
use assoc_core::hexagon_solver::{
    build_f, build_h, decompose, decompose_h, diagonal_series, extract_h, extreme_coefficients, family_i, family_ii,
    family_iii, has_h_symmetries, hexagon_parts, residual_15b, solve_degreewise, AlphaTable, ParamSet,
};
use assoc_core::pentagon_checker::l4::*;
use assoc_core::pentagon_checker::{dimension_report, pentagon_check_with, Metabelian, QuotientReducer, Variant};
use assoc_core::series_core::{c_generating_closed, c_generating_from_table, BiSeries, CoeffRing};
use assoc_core::verify::{random_asymmetric_alpha, random_symmetric_alpha};
use assoc_core::zeta_symbols::{drinfeld_f, drop_odd, solve_betas_in_theta, theta_even, ThetaPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(p: i64, d: i64) -> Rational {
    rat(p, d)
}

/// `1/n!` times `r`.
fn over_fact(r: Rational, n: usize) -> Rational {
    r / factorial(n)
}

/// A printed coefficient together with its correction, if misprinted.
struct Printed {
    key: (usize, usize),
    printed: Rational,
    corrected: Option<Rational>,
}

fn exact(k: usize, l: usize, v: Rational) -> Printed {
    Printed { key: (k, l), printed: v, corrected: None }
}

fn erratum(k: usize, l: usize, printed: Rational, corrected: Rational) -> Printed {
    Printed { key: (k, l), printed, corrected: Some(corrected) }
}

/// Compares printed entries against `value`; returns the number of errata
/// or every disagreement.
fn compare_printed(entries: &[Printed], value: impl Fn(usize, usize) -> Rational) -> Result<usize, String> {
    let mut errata = 0;
    let mut bad = Vec::new();
    for p in entries {
        let (k, l) = p.key;
        let got = value(k, l);
        match &p.corrected {
            None if got != p.printed => bad.push(format!("({k},{l}) computed {got}, printed {}", p.printed)),
            None => {}
            Some(c) if got != *c => bad.push(format!("({k},{l}) computed {got}, expected correction {c}")),
            Some(_) if got == p.printed => bad.push(format!("({k},{l}) listed as erratum but printed value holds")),
            Some(_) => errata += 1,
        }
    }
    if bad.is_empty() {
        Ok(errata)
    } else {
        Err(bad.join("; "))
    }
}

/// Adds a zero entry for every monomial of degree `<= max` absent from the display.
fn with_implicit_zeros(mut printed: Vec<Printed>, max: usize) -> Vec<Printed> {
    for d in 0..=max {
        for k in 0..=d {
            if !printed.iter().any(|p| p.key == (k, d - k)) {
                printed.push(exact(k, d - k, q(0, 1)));
            }
        }
    }
    printed
}

// ---------------------------------------------------------------- 1

const DISPLAYED_TABLE: [&str; 11] = [
    "-1/2 1/6 0 -1/30 0 1/42 0 -1/30 0 5/66 0",
    "-1/6 1/6 -1/15 -1/30 1/21 1/42 -1/15 -1/30 5/33 5/66",
    "0 1/15 -1/10 4/105 1/14 -8/105 -1/10 32/165 5/22",
    "1/30 -1/30 -4/105 23/210 -4/105 -37/210 28/165 139/330",
    "0 -1/21 1/14 4/105 -3/14 16/231 13/22",
    "-1/42 1/42 8/105 -37/210 -16/231 305/462",
    "0 1/15 -1/10 -28/165 13/22",
    "1/30 -1/30 -32/165 139/330",
    "0 -5/33 5/22",
    "-5/66 5/66",
    "0",
];

fn criterion_table() -> Outcome {
    let t = ExtBernoulliTable::new(12);
    let mut count = 0;
    for (i, row) in DISPLAYED_TABLE.iter().enumerate() {
        for (j, cell) in row.split_whitespace().enumerate() {
            let (m, n) = (i + 1, j + 1);
            let want = parse_rational(cell).ok_or_else(|| format!("bad literal {cell}"))?;
            ensure(*t.get(m, n) == want, format!("C_({m},{n}) = {}, printed {want}", t.get(m, n)))?;
            count += 1;
        }
    }
    ensure(count == 66 && t.len() == 66, format!("{count} printed cells, {} computed", t.len()))?;
    Ok(format!("{count} entries with m+n <= 12 match"))
}

// ---------------------------------------------------------------- 2

/// Coefficients of `λ^k μ^l` in the displayed generating function.
fn displayed_c_series() -> Vec<Printed> {
    let mut v = vec![
        exact(0, 0, q(-1, 2)),
        exact(1, 0, q(1, 12)),
        exact(0, 1, q(-1, 12)),
        exact(1, 1, q(1, 24)),
        exact(0, 3, q(1, 720)),
        exact(1, 2, q(1, 180)),
        exact(2, 1, q(-1, 180)),
        exact(3, 0, q(-1, 720)),
        exact(3, 1, q(-1, 1440)),
        exact(2, 2, q(-1, 360)),
        exact(1, 3, q(-1, 1440)),
    ];
    for (k, l, c) in [(5, 0, q(1, 6)), (4, 1, q(1, 1)), (3, 2, q(4, 3)), (2, 3, q(-4, 3)), (1, 4, q(-1, 1)), (0, 5, q(-1, 6))]
    {
        v.push(exact(k, l, over_fact(c, 7)));
    }
    for (k, l, c) in [(5, 1, q(1, 12)), (4, 2, q(1, 2)), (3, 3, q(23, 24)), (2, 4, q(1, 2)), (1, 5, q(1, 12))] {
        v.push(exact(k, l, over_fact(c, 7)));
    }
    for (k, l, c) in [
        (0, 7, q(1, 240)),
        (1, 6, q(1, 30)),
        (2, 5, q(4, 45)),
        (3, 4, q(1, 15)),
        (4, 3, q(-1, 15)),
        (5, 2, q(-4, 45)),
        (6, 1, q(-1, 30)),
        (7, 0, q(-1, 240)),
    ] {
        v.push(exact(k, l, over_fact(c, 7)));
    }
    for (k, l, c) in [
        (7, 1, q(1, 60)),
        (6, 2, q(2, 15)),
        (5, 3, q(37, 90)),
        (4, 4, q(3, 5)),
        (3, 5, q(37, 90)),
        (2, 6, q(2, 15)),
        (1, 7, q(1, 60)),
    ] {
        v.push(exact(k, l, -over_fact(c, 8)));
    }
    for (k, l, c) in [
        (8, 1, q(25, 3)),
        (7, 2, q(32, 1)),
        (6, 3, q(56, 1)),
        (5, 4, q(32, 1)),
        (4, 5, q(-32, 1)),
        (3, 6, q(-56, 1)),
        (2, 7, q(-32, 1)),
        (1, 8, q(-25, 3)),
    ] {
        v.push(exact(k, l, over_fact(c, 11)));
    }
    // printed 1/6 and 1/24; the values are B_10/10! and C_39/(3! 9!)
    v.push(erratum(9, 0, over_fact(q(1, 6), 11), over_fact(q(5, 6), 11)));
    v.push(erratum(0, 9, over_fact(q(-1, 6), 11), over_fact(q(-5, 6), 11)));
    v.push(erratum(8, 2, over_fact(q(1, 24), 11), over_fact(q(25, 6), 11)));
    v.push(erratum(2, 8, over_fact(q(1, 24), 11), over_fact(q(25, 6), 11)));
    for (k, l, c) in [
        (9, 1, q(5, 12)),
        (1, 9, q(5, 12)),
        (7, 3, q(139, 8)),
        (3, 7, q(139, 8)),
        (6, 4, q(39, 1)),
        (4, 6, q(39, 1)),
        (5, 5, q(305, 6)),
    ] {
        v.push(exact(k, l, over_fact(c, 11)));
    }
    v
}

fn criterion_generating_function() -> Outcome {
    let c = c_generating_closed(10);
    ensure(c == c_generating_from_table(10), "closed form and table differ")?;
    let printed = with_implicit_zeros(displayed_c_series(), 10);
    let errata = compare_printed(&printed, |k, l| c.coeff(k, l).clone())?;
    Ok(format!("all {} coefficients through degree 10 match ({errata} errata)", printed.len()))
}

// ---------------------------------------------------------------- 3

/// Coefficients of `[P^a Q^b P Q]` in the displayed compressed series;
/// `[P^k Q]` is `[P^{k-1} P Q]`.
fn displayed_cbh() -> Vec<Printed> {
    let mut v = vec![
        exact(0, 0, q(1, 2)),
        exact(1, 0, q(1, 12)),
        exact(0, 1, q(-1, 12)),
        exact(1, 1, q(-1, 24)),
        exact(0, 3, q(1, 720)),
        exact(3, 0, q(-1, 720)),
        exact(1, 2, q(1, 180)),
        exact(2, 1, q(-1, 180)),
        exact(3, 1, q(1, 1440)),
        exact(1, 3, q(1, 1440)),
        exact(2, 2, q(1, 360)),
    ];
    for (a, b, c) in [(5, 0, q(1, 6)), (4, 1, q(1, 1)), (3, 2, q(4, 3)), (2, 3, q(-4, 3)), (1, 4, q(-1, 1)), (0, 5, q(-1, 6))]
    {
        v.push(exact(a, b, over_fact(c, 7)));
    }
    for (a, b, c) in [(5, 1, q(1, 12)), (4, 2, q(1, 2)), (3, 3, q(23, 24)), (2, 4, q(1, 2)), (1, 5, q(1, 12))] {
        v.push(exact(a, b, -over_fact(c, 7)));
    }
    // degrees 9 and 10 are printed with the opposite sign, except [P^4 Q^4 P Q]
    for (a, b, c) in [
        (7, 0, q(1, 240)),
        (0, 7, q(-1, 240)),
        (6, 1, q(1, 30)),
        (1, 6, q(-1, 30)),
        (5, 2, q(4, 45)),
        (2, 5, q(-4, 45)),
        (4, 3, q(1, 15)),
        (3, 4, q(-1, 15)),
    ] {
        let printed = over_fact(c, 7);
        v.push(erratum(a, b, printed.clone(), -printed));
    }
    for (a, b, c) in [
        (7, 1, q(1, 60)),
        (1, 7, q(1, 60)),
        (6, 2, q(2, 15)),
        (2, 6, q(2, 15)),
        (5, 3, q(37, 90)),
        (3, 5, q(37, 90)),
    ] {
        let printed = -over_fact(c, 8);
        v.push(erratum(a, b, printed.clone(), -printed));
    }
    v.push(exact(4, 4, over_fact(q(3, 5), 8)));
    v
}

fn criterion_compressed_cbh() -> Outcome {
    let h = compressed_cbh(10);
    let printed = with_implicit_zeros(displayed_cbh(), 8);
    let errata = compare_printed(&printed, |a, b| h.mirrored_coefficient(a, b))?;
    ensure(agree(&h, &mirrored_cbh(10)), "mirrored recursion differs")?;
    ensure(agree(&h, &classical_cbh_in_model(10)), "classical recursion differs")?;
    ensure(agree(&compressed_cbh(8), &associative_log_oracle(8)), "associative logarithm differs")?;
    Ok(format!(
        "all {} coefficients through degree 10 ({errata} errata); three paths agree to degree 8",
        printed.len()
    ))
}

// ---------------------------------------------------------------- 4

fn homogeneous_literal(order: usize, terms: &[(usize, usize, Rational)]) -> BiSeries<Rational> {
    BiSeries::from_terms(terms.iter().cloned(), order)
}

/// The two even families as displayed, symmetric halves only.
fn displayed_even_families() -> (Vec<Printed>, Vec<Printed>) {
    let f7 = factorial(7);
    let f9 = factorial(9);
    let common = |v: &mut Vec<Printed>| {
        for (k, l, c) in [(0, 0, q(1, 6)), (2, 0, q(-4, 360)), (1, 1, q(-1, 360)), (4, 0, q(1, 945)), (6, 0, q(-1, 9450)), (8, 0, q(1, 93555))] {
            v.push(exact(k, l, c));
        }
    };
    let mut first = Vec::new();
    common(&mut first);
    // printed as 20/(4·7!)
    first.push(erratum(3, 1, q(20, 4) / &f7, q(20, 3) / &f7));
    first.push(exact(2, 2, q(13, 1) / &f7));
    first.push(exact(5, 1, q(-1, 4200)));
    first.push(exact(4, 2, q(-113, 45) / &f7));
    first.push(exact(3, 3, q(-947, 5) / &f9));
    let mut second = Vec::new();
    common(&mut second);
    second.push(exact(3, 1, q(-53, 6) / &f7));
    second.push(exact(2, 2, q(-18, 1) / &f7));
    second.push(exact(5, 1, q(1, 11200)));
    second.push(exact(4, 2, q(-13, 90) / &f7));
    second.push(exact(3, 3, q(-431, 5) / &f9));
    (first, second)
}

fn check_displayed_families() -> Result<usize, String> {
    let (first, second) = displayed_even_families();
    let mut errata = 0;
    for (name, f, printed) in [("f^I", family_i(8), first), ("f^II", family_ii(8), second)] {
        ensure(f.is_symmetric(), format!("{name} asymmetric"))?;
        errata += compare_printed(&printed, |k, l| f.coeff(k, l).clone()).map_err(|e| format!("{name}: {e}"))?;
    }
    let f7 = factorial(7);
    ensure(decompose(&family_i(8)).map_err(|e| e.to_string())? == ParamSet::zero(), "f^I parameters")?;
    let p = decompose(&family_ii(8)).map_err(|e| e.to_string())?;
    ensure(p.beta.get(&(3, 1)) == Some(&(q(-31, 2) / &f7)), "β31 of f^II")?;
    ensure(p.beta.get(&(4, 1)) == Some(&(q(127, 30) / &f7)), "β41 of f^II")?;
    ensure(p.beta_tilde.is_empty(), "f^II has odd parameters")?;
    Ok(errata)
}

fn criterion_hexagon() -> Outcome {
    for (name, f) in [("I", family_i(12)), ("II", family_ii(12)), ("III", family_iii(12))] {
        ensure(residual_15b(&f).is_zero(), format!("f^{name} residual nonzero"))?;
    }
    ensure(residual_15b(&drinfeld_f(9)).is_zero(), "Drinfeld series residual nonzero")?;

    let (g, c, t) = hexagon_parts(&family_i(3));
    let gl = homogeneous_literal(
        3,
        &[
            (0, 0, q(1, 2)),
            (2, 0, q(-1, 72)),
            (1, 1, q(-1, 72)),
            (0, 2, q(-1, 72)),
            (0, 3, q(1, 240)),
            (2, 1, q(-3, 240)),
            (3, 0, q(-1, 240)),
        ],
    );
    let cl = homogeneous_literal(
        3,
        &[
            (0, 0, q(-1, 2)),
            (1, 0, q(1, 12)),
            (0, 1, q(-1, 12)),
            (1, 1, q(1, 24)),
            (0, 3, q(1, 720)),
            (1, 2, q(4, 720)),
            (2, 1, q(-4, 720)),
            (3, 0, q(-1, 720)),
        ],
    );
    let tl = homogeneous_literal(
        3,
        &[
            (0, 0, q(1, 1)),
            (1, 0, q(1, 6)),
            (0, 1, q(-1, 6)),
            (0, 3, q(4, 360)),
            (1, 2, q(-1, 360)),
            (2, 1, q(-8, 360)),
            (3, 0, q(-4, 360)),
        ],
    );
    ensure(g == gl, "G^B differs")?;
    ensure(c == cl, "C differs")?;
    ensure(t == tl, "T^B differs")?;
    let part = |s: &BiSeries<Rational>, d: usize| s.homogeneous_part(d);
    let identities = [
        part(&gl, 0).add(&part(&cl, 0)),
        part(&gl, 1).add(&part(&cl, 0).mul(&part(&tl, 1))).add(&part(&cl, 1)),
        part(&gl, 2).add(&part(&cl, 1).mul(&part(&tl, 1))).add(&part(&cl, 2)),
        part(&gl, 3)
            .add(&part(&cl, 0).mul(&part(&tl, 3)))
            .add(&part(&cl, 2).mul(&part(&tl, 1)))
            .add(&part(&cl, 3)),
    ];
    for (i, s) in identities.iter().enumerate() {
        ensure(s.is_zero(), format!("low-degree identity {i} fails"))?;
    }
    let errata = check_displayed_families()?;
    Ok(format!(
        "families I, II, III to degree 12, Drinfeld series to 9, four low-degree identities, \
         displayed f^I and f^II ({errata} errata)"
    ))
}

// ---------------------------------------------------------------- 5

fn criterion_extreme_diagonal() -> Outcome {
    ensure(extreme_coefficients(6) == [q(1, 6), q(-1, 90), q(1, 945), q(-1, 9450)], "extreme coefficients")?;
    let d = diagonal_series(6);
    let want = [q(1, 6), q(-7, 360), q(31, 15120), q(-127, 604800)];
    for (i, w) in want.iter().enumerate() {
        ensure(d.coeff(2 * i) == w, format!("diagonal coefficient of λ^{}", 2 * i))?;
        if 2 * i < d.order() {
            ensure(*d.coeff(2 * i + 1) == q(0, 1), "odd diagonal coefficient")?;
        }
    }
    let f = family_i(6);
    for (i, w) in [q(1, 6), q(-1, 90), q(1, 945), q(-1, 9450)].iter().enumerate() {
        ensure(f.coeff(2 * i, 0) == w && f.coeff(0, 2 * i) == w, "f^I extreme coefficient")?;
    }
    Ok("extreme 1/6, -1/90, 1/945, -1/9450; diagonal 1/6, -7/360, 31/15120, -127/604800".into())
}

// ---------------------------------------------------------------- 6

const CENSUS: [usize; 13] = [0, 1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2];

fn criterion_degreewise() -> Outcome {
    let rep = solve_degreewise(12).map_err(|e| e.to_string())?;
    let dims: Vec<usize> = rep.degrees.iter().map(|d| d.kernel_dim).collect();
    ensure(dims == CENSUS, format!("free dimensions {dims:?}"))?;
    let value = |d: usize, key: (usize, usize)| -> Option<Rational> {
        rep.degrees[d].values.iter().find(|(k, _)| *k == key).map(|(_, v)| v.clone())
    };
    ensure(value(0, (0, 0)) == Some(q(1, 6)), "α00")?;
    ensure(value(2, (0, 2)) == Some(q(-1, 90)), "α20")?;
    ensure(value(2, (1, 1)) == Some(q(-1, 360)), "α11")?;
    for d in [1, 3] {
        ensure(rep.degrees[d].values.iter().all(|(_, v)| *v == q(0, 1)), format!("degree {d} not zero"))?;
    }
    let f = &rep.f;
    for (k, l, v) in [(0, 0, q(1, 6)), (2, 0, q(-1, 90)), (1, 1, q(-1, 360)), (3, 0, q(0, 1)), (2, 1, q(0, 1))] {
        ensure(*f.coeff(k, l) == v, format!("assembled α_{k}{l}"))?;
    }
    let d4 = &rep.degrees[4];
    ensure(d4.unknowns == [(2, 2), (1, 3), (0, 4)], "degree-4 unknown order")?;
    ensure(d4.kernel.len() == 1, "one direction at degree 4")?;
    let dir = &d4.kernel[0];
    let s = dir[1].clone();
    ensure(s != q(0, 1), "β31 direction has no λ^3 μ component")?;
    let normalized: Vec<Rational> = dir.iter().map(|c| c / &s).collect();
    ensure(normalized == [q(2, 1), q(1, 1), q(0, 1)], format!("β31 direction {normalized:?}"))?;
    Ok(format!("α values match, census {dims:?}, β31 direction λ^3μ + 2λ^2μ^2 + λμ^3"))
}

// ---------------------------------------------------------------- 7

fn criterion_pentagon() -> Outcome {
    let n = 8;
    let reducer = QuotientReducer::l4(n);
    let check = |t: &AlphaTable<Rational>| pentagon_check_with(&reducer, t, n).map_err(|e| e.to_string());
    ensure(check(&AlphaTable::from_series(&family_i(n - 2)))?.pass, "f^I")?;
    for seed in 0..10 {
        let sym = random_symmetric_alpha(seed, n - 2);
        ensure(check(&sym)?.pass, format!("symmetric table {seed}"))?;
        let asym = random_asymmetric_alpha(seed, n - 2);
        ensure(!asym.is_symmetric(), "perturbation is symmetric")?;
        let rep = check(&asym)?;
        ensure(!rep.pass, format!("asymmetric table {seed} passes"))?;
        ensure(rep.residual_norms.iter().any(|d| d.nonzero > 0), "no nonzero degree reported")?;
    }
    Ok("zero through degree 8 for f^I and 10 symmetric tables; nonzero for 10 perturbations".into())
}

// ---------------------------------------------------------------- 8

fn ad2(s: &Metabelian, k: usize, t: &Metabelian, l: usize, g: &Metabelian) -> Metabelian {
    g.ad_pow(t, l).ad_pow(s, k)
}

fn criterion_identities() -> Outcome {
    const K: usize = 4;
    let r = QuotientReducer::l4(2 * K + 3);
    let zero = |m: &Metabelian| r.is_zero(m).expect("within bound");
    let eq = |p: &Metabelian, q: &Metabelian| zero(&p.sub(q));
    let mde = d().add(&e()).neg();
    let mut count = 0usize;
    let mut check = |ok: bool, what: String| -> Result<(), String> {
        count += 1;
        ensure(ok, what)
    };

    // quadratic relations, central sums and the fourth strand
    for (p, w) in [("a", "e"), ("b", "v"), ("c", "d")] {
        check(zero(&word(p).bracket(&word(w))), format!("[{p}{w}]"))?;
    }
    for (p, w) in [("ab", "bc"), ("bc", "ca"), ("ad", "dv"), ("be", "ed"), ("ce", "ev")] {
        check(eq(&word(p), &word(w)), format!("[{p}] = [{w}]"))?;
    }
    for (s, g) in [("abc", x()), ("adv", y()), ("bed", z()), ("cev", u())] {
        let sum = s.chars().map(|ch| word(&ch.to_string())).fold(Metabelian::zero(6), |acc, m| acc.add(&m));
        check(zero(&sum.bracket(&g)), format!("central sum {s}"))?;
    }
    let dev = d().add(&e()).add(&v());
    for g in [a(), b(), x()] {
        check(zero(&dev.bracket(&g)), "d+e+v".into())?;
    }
    // non-simple commutators of degree three
    for chain in [
        [word("dx"), word("cy").neg(), word("cz").neg(), word("du")],
        [word("ex"), word("ey").neg(), word("az").neg(), word("au")],
        [word("vx"), word("by").neg(), word("vz").neg(), word("bu")],
    ] {
        for w in &chain[1..] {
            check(eq(&chain[0], w), "degree-three chain".into())?;
        }
    }
    // powers of two letters acting on the four generators
    for k in 0..=K {
        for l in 1..=K {
            let at = format!("k={k} l={l}");
            check(eq(&ad2(&b(), k, &d(), l, &x()), &ad2(&mde, k, &d(), l, &x())), format!("b,d on x {at}"))?;
            check(eq(&ad2(&d(), k, &b(), l, &y()), &ad2(&d(), k, &mde, l, &x()).neg()), format!("d,b on y {at}"))?;
            check(eq(&ad2(&b(), k, &c(), l, &z()), &ad2(&mde, k, &d(), l, &x()).neg()), format!("b,c on z {at}"))?;
            check(eq(&ad2(&c(), k, &b(), l, &u()), &ad2(&d(), k, &mde, l, &x())), format!("c,b on u {at}"))?;
            check(eq(&ad2(&d(), k, &e(), l, &y()), &ad2(&d(), k, &e(), l, &x()).neg()), format!("d,e on y {at}"))?;
            check(eq(&ad2(&e(), k, &d(), l, &u()), &ad2(&e(), k, &d(), l, &x())), format!("e,d on u {at}"))?;
            check(eq(&ad2(&a(), k, &c(), l, &y()), &ad2(&e(), k, &d(), l, &x()).neg()), format!("a,c on y {at}"))?;
            check(eq(&ad2(&c(), k, &a(), l, &u()), &ad2(&d(), k, &e(), l, &x())), format!("c,a on u {at}"))?;
        }
    }
    // powers of sums
    let me = e().neg();
    let (de, bd, bc, ac) = (d().add(&e()), b().add(&d()), b().add(&c()), a().add(&c()));
    for k in 0..=2 * K {
        let p = |s: &Metabelian, g: &Metabelian| g.ad_pow(s, k);
        let at = format!("k={k}");
        check(eq(&p(&bd, &x()), &p(&b(), &x()).sub(&p(&mde, &x())).add(&p(&me, &x()))), format!("(b+d) on x {at}"))?;
        check(eq(&p(&bd, &y()), &p(&d(), &y()).add(&p(&d(), &x())).sub(&p(&me, &x()))), format!("(b+d) on y {at}"))?;
        check(eq(&p(&bc, &z()), &p(&b(), &z()).add(&p(&mde, &x())).sub(&p(&me, &x()))), format!("(b+c) on z {at}"))?;
        check(eq(&p(&bc, &u()), &p(&c(), &u()).sub(&p(&d(), &x())).add(&p(&me, &x()))), format!("(b+c) on u {at}"))?;
        check(eq(&p(&de, &y()), &p(&d(), &y()).add(&p(&d(), &x())).sub(&p(&de, &x()))), format!("(d+e) on y {at}"))?;
        check(eq(&p(&de, &u()), &p(&e(), &u()).sub(&p(&e(), &x())).add(&p(&de, &x()))), format!("(d+e) on u {at}"))?;
        check(eq(&p(&ac, &y()), &p(&a(), &y()).add(&p(&e(), &x())).sub(&p(&de, &x()))), format!("(a+c) on y {at}"))?;
        check(eq(&p(&ac, &u()), &p(&c(), &u()).sub(&p(&d(), &x())).add(&p(&de, &x()))), format!("(a+c) on u {at}"))?;
    }
    // substituted arguments of the compressed associator
    for k in 0..=K {
        for l in 0..=K {
            let at = format!("k={k} l={l}");
            let lhs = ad2(&a(), k, &bd, l, &a().bracket(&bd));
            let rhs = ad2(&a(), k, &b(), l, &x())
                .add(&ad2(&a(), k, &d(), l, &y()))
                .add(&ad2(&e(), k, &d(), l, &x()))
                .sub(&ad2(&e(), k, &mde, l, &x()));
            check(eq(&lhs, &rhs), format!("(a, b+d) {at}"))?;
            let lhs = ad2(&bc, k, &e(), l, &bc.bracket(&e()));
            let rhs = ad2(&b(), k, &e(), l, &z())
                .add(&ad2(&c(), k, &e(), l, &u()))
                .sub(&ad2(&d(), k, &e(), l, &x()))
                .add(&ad2(&mde, k, &e(), l, &x()));
            check(eq(&lhs, &rhs), format!("(b+c, e) {at}"))?;
            let lhs = ad2(&ac, k, &de, l, &ac.bracket(&de));
            let rhs = ad2(&a(), k, &d(), l, &y())
                .add(&ad2(&c(), k, &e(), l, &u()))
                .add(&ad2(&e(), k, &d(), l, &x()))
                .sub(&ad2(&d(), k, &e(), l, &x()));
            check(eq(&lhs, &rhs), format!("(a+c, d+e) {at}"))?;
        }
    }
    Ok(format!("{count} identities reduce to zero for k, l <= {K}"))
}

// ---------------------------------------------------------------- 9

fn criterion_l3bar() -> Outcome {
    let want = [3, 1, 2, 3, 4, 5, 6, 7, 8, 9];
    let dims: Vec<usize> = dimension_report(10, Variant::L3bar).iter().map(|r| r.dimension).collect();
    ensure(dims == want, format!("dimensions {dims:?}"))?;
    Ok(format!("dimensions {dims:?} through degree 10"))
}

// ---------------------------------------------------------------- 10

fn th(n: usize) -> ThetaPoly {
    ThetaPoly::theta(n)
}

fn cst(r: Rational) -> ThetaPoly {
    ThetaPoly::constant(r)
}

/// `sum c_i * θ-monomial_i + constant`, monomials given as products of odd indices.
fn tp(terms: &[(&[usize], Rational)]) -> ThetaPoly {
    terms.iter().fold(ThetaPoly::default(), |acc, (idx, c)| {
        let m = idx.iter().fold(cst(q(1, 1)), |m, &i| m * &th(i));
        acc + &m.scale(c)
    })
}

fn displayed_drinfeld() -> BTreeMap<(usize, usize), ThetaPoly> {
    let f7 = factorial(7);
    let f9 = factorial(9);
    let sym = vec![
        ((0, 0), tp(&[(&[], q(1, 6))])),
        ((2, 0), tp(&[(&[], q(-1, 90))])),
        ((1, 1), tp(&[(&[], q(-1, 360))])),
        ((4, 0), tp(&[(&[], q(1, 945))])),
        ((3, 1), tp(&[(&[3, 3], q(9, 2)), (&[], q(1, 1260))])),
        ((2, 2), tp(&[(&[3, 3], q(9, 1)), (&[], q(23, 3) / &f7)])),
        ((6, 0), tp(&[(&[], q(-1, 9450))])),
        ((5, 1), tp(&[(&[3, 5], q(15, 1)), (&[], q(-2, 3) / &f7)])),
        ((4, 2), tp(&[(&[3, 5], q(45, 1)), (&[3, 3], q(3, 4)), (&[], q(-61, 45) / &f7)])),
        ((3, 3), tp(&[(&[3, 5], q(60, 1)), (&[3, 3], q(3, 2)), (&[], q(-499, 5) / &f9)])),
        ((1, 0), tp(&[(&[3], q(-3, 1))])),
        ((3, 0), tp(&[(&[5], q(-5, 1))])),
        ((2, 1), tp(&[(&[5], q(-10, 1)), (&[3], q(-1, 2))])),
        ((5, 0), tp(&[(&[7], q(-7, 1))])),
        ((4, 1), tp(&[(&[7], q(-21, 1)), (&[5], q(-5, 6)), (&[3], q(1, 30))])),
        ((3, 2), tp(&[(&[7], q(-35, 1)), (&[5], q(-5, 3)), (&[3], q(1, 24))])),
        ((7, 0), tp(&[(&[9], q(-9, 1))])),
        ((6, 1), tp(&[(&[9], q(-36, 1)), (&[7], q(-7, 6)), (&[5], q(1, 18)), (&[3], q(-1, 315))])),
        (
            (5, 2),
            tp(&[(&[3, 3, 3], q(-9, 2)), (&[9], q(-84, 1)), (&[7], q(-7, 2)), (&[5], q(1, 8)), (&[3], q(-1, 180))]),
        ),
        (
            (4, 3),
            tp(&[
                (&[3, 3, 3], q(-27, 2)),
                (&[9], q(-126, 1)),
                (&[7], q(-35, 6)),
                (&[5], q(7, 36)),
                (&[3], q(-1, 144)),
            ]),
        ),
    ];
    let mut out = BTreeMap::new();
    for ((k, l), v) in sym {
        out.insert((k, l), v.clone());
        out.insert((l, k), v);
    }
    out
}

fn criterion_zeta() -> Outcome {
    let thetas = [q(-1, 12), q(1, 360), q(-1, 5670), q(1, 75600), q(-1, 935550)];
    for (i, w) in thetas.iter().enumerate() {
        ensure(theta_even(i + 1) == *w, format!("θ_{}", 2 * i + 2))?;
    }
    let f = drinfeld_f(7);
    let printed = displayed_drinfeld();
    for d in 0..=7 {
        for k in 0..=d {
            let want = printed.get(&(k, d - k)).cloned().unwrap_or_default();
            ensure(*f.coeff(k, d - k) == want, format!("λ^{k} μ^{}: computed {}, printed {want}", d - k, f.coeff(k, d - k)))?;
        }
    }

    let f7 = factorial(7);
    let params = [
        ("β31", (3, 1), false, tp(&[(&[3, 3], q(9, 2)), (&[], q(-8, 3) / &f7)])),
        ("β41", (4, 1), false, tp(&[(&[3, 5], q(15, 1)), (&[3, 3], q(-3, 4)), (&[], q(44, 45) / &f7)])),
        ("β~00", (0, 0), true, tp(&[(&[3], q(-3, 1))])),
        ("β~10", (1, 0), true, tp(&[(&[5], q(-5, 1)), (&[3], q(1, 2))])),
        ("β~20", (2, 0), true, tp(&[(&[7], q(-7, 1)), (&[5], q(5, 6)), (&[3], q(-7, 120))])),
        ("β~30", (3, 0), true, tp(&[(&[9], q(-9, 1)), (&[7], q(7, 6)), (&[5], q(-7, 72)), (&[3], q(31, 1) / &f7)])),
        ("β~31", (3, 1), true, tp(&[(&[3, 3, 3], q(-9, 2)), (&[9], q(-3, 1)), (&[3], q(1, 630))])),
    ];
    let p = solve_betas_in_theta(9).map_err(|e| e.to_string())?;
    for (name, key, tilde, want) in &params {
        let got = if *tilde { p.beta_tilde.get(key) } else { p.beta.get(key) };
        ensure(got == Some(want), format!("{name}: computed {got:?}, printed {want}"))?;
    }
    let rebuilt = build_f(&p, 9).map_err(|e| e.to_string())?;
    ensure(rebuilt == drinfeld_f(9), "rebuilt series differs")?;
    ensure(residual_15b(&rebuilt).is_zero(), "residual nonzero at degree 9")?;
    ensure(drop_odd(&drinfeld_f(12)) == family_iii(12), "odd symbols set to zero differ from f^III")?;
    Ok("θ values, coefficients through degree 7, seven parameters, f^III limit to degree 12".into())
}

// ---------------------------------------------------------------- 11

fn bn(n: usize) -> Rational {
    bernoulli(n)
}

fn closed_forms_hold(t: &ExtBernoulliTable, n: usize) -> bool {
    let c = |m: usize, k: usize| t.get(m, k).clone();
    let (e, o) = (2 * n, 2 * n + 1);
    let checks = [
        (c(2, e), bn(e)),
        (c(e, 2), bn(e)),
        (c(2, o), bn(e + 2) * q(2, 1)),
        (-c(o, 2), bn(e + 2) * q(2, 1)),
        (c(3, e), bn(e + 2) * q(3, 1) + bn(e)),
        (-c(e, 3), bn(e + 2) * q(3, 1) + bn(e)),
        (c(3, o), bn(e + 2) * q(3, 1)),
        (c(o, 3), bn(e + 2) * q(3, 1)),
        (c(4, e), bn(e + 2) * q(6, 1) + bn(e)),
        (c(e, 4), bn(e + 2) * q(6, 1) + bn(e)),
        (c(4, o), bn(e + 4) * q(4, 1) + bn(e + 2) * q(4, 1)),
        (-c(o, 4), bn(e + 4) * q(4, 1) + bn(e + 2) * q(4, 1)),
        (c(5, e), bn(e + 4) * q(5, 1) + bn(e + 2) * q(10, 1) + bn(e)),
        (-c(e, 5), bn(e + 4) * q(5, 1) + bn(e + 2) * q(10, 1) + bn(e)),
        (c(5, o), bn(e + 4) * q(10, 1) + bn(e + 2) * q(5, 1)),
        (c(o, 5), bn(e + 4) * q(10, 1) + bn(e + 2) * q(5, 1)),
        (c(6, e), bn(e + 4) * q(15, 1) + bn(e + 2) * q(15, 1) + bn(e)),
        (c(e, 6), bn(e + 4) * q(15, 1) + bn(e + 2) * q(15, 1) + bn(e)),
        (c(6, o), bn(e + 6) * q(6, 1) + bn(e + 4) * q(20, 1) + bn(e + 2) * q(6, 1)),
        (-c(o, 6), bn(e + 6) * q(6, 1) + bn(e + 4) * q(20, 1) + bn(e + 2) * q(6, 1)),
    ];
    checks.iter().all(|(l, r)| l == r)
}

fn arb_q() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(p, d)| rat(p, d))
}

fn arb_params() -> impl Strategy<Value = ParamSet<Rational>> {
    (prop::collection::vec(arb_q(), 3), prop::collection::vec(arb_q(), 5)).prop_map(|(be, bt)| {
        ParamSet::zero()
            .with_beta(3, 1, be[0].clone())
            .with_beta(4, 1, be[1].clone())
            .with_beta(5, 1, be[2].clone())
            .with_beta_tilde(0, 0, bt[0].clone())
            .with_beta_tilde(1, 0, bt[1].clone())
            .with_beta_tilde(2, 0, bt[2].clone())
            .with_beta_tilde(3, 0, bt[3].clone())
            .with_beta_tilde(3, 1, bt[4].clone())
            .normalized()
    })
}

fn criterion_properties() -> Outcome {
    let w = 30;
    let t = ExtBernoulliTable::new(w);
    let tp = ExtBernoulliTable::primed(w);
    for (&(m, n), c) in t.entries() {
        let sign = if (m + n) % 2 == 0 { q(1, 1) } else { q(-1, 1) };
        ensure(*c == sign.clone() * t.get(n, m), format!("antisymmetry at ({m},{n})"))?;
        ensure(*c == ext_bernoulli_closed(m, n), format!("closed form at ({m},{n})"))?;
        ensure(*tp.get(m, n) == -sign * c, format!("primed numbers at ({m},{n})"))?;
    }
    ensure(agree(&compressed_cbh(12), &mirrored_cbh(12)), "mirrored expansion")?;
    for m in 1..=50 {
        for v in [BernoulliIdentity::A, BernoulliIdentity::B, BernoulliIdentity::C] {
            ensure(check_bernoulli_identity(m, v), format!("Bernoulli identity {v:?} at m={m}"))?;
        }
    }
    let big = ExtBernoulliTable::new(2 * 20 + 8);
    for n in 1..=20 {
        ensure(closed_forms_hold(&big, n), format!("closed forms of C_mn at n={n}"))?;
    }

    let mut runner = TestRunner::new(Config { cases: 24, ..Config::default() });
    runner
        .run(&arb_params(), |p| {
            let f = build_f(&p, 8).expect("construction");
            prop_assert!(f.is_symmetric());
            prop_assert!(residual_15b(&f).is_zero());
            let (h, ht) = extract_h(&f).expect("extraction");
            prop_assert!(has_h_symmetries(&h, true));
            prop_assert!(has_h_symmetries(ht.as_ref().expect("odd part"), false));
            prop_assert_eq!(decompose(&f).expect("decomposition"), p.clone());
            let coeffs = decompose_h(&build_h(&p, 10)).expect("span");
            let rebuilt = build_h(&ParamSet { beta: coeffs.into_iter().filter(|((_, k), _)| *k > 0).collect(), ..ParamSet::zero() }, 10);
            prop_assert_eq!(rebuilt, build_h(&p, 10));
            Ok(())
        })
        .map_err(|e| format!("hexagon round trip: {e}"))?;
    Ok(format!("weight {w} tables, identities for m <= 50, closed forms for n <= 20, 24 random round trips"))
}

// ----------------------------------------------------------------

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    ("extended Bernoulli table", criterion_table),
    ("generating function C(λ,μ)", criterion_generating_function),
    ("compressed CBH series", criterion_compressed_cbh),
    ("hexagon residuals", criterion_hexagon),
    ("extreme and diagonal coefficients", criterion_extreme_diagonal),
    ("degreewise solver", criterion_degreewise),
    ("pentagon", criterion_pentagon),
    ("identity suite", criterion_identities),
    ("L3bar dimensions", criterion_l3bar),
    ("zeta symbols", criterion_zeta),
    ("property suites", criterion_properties),
];

fn main() {
    misprint_helpers();
    let results: Vec<(usize, &str, Outcome, u128)> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .enumerate()
            .map(|(i, &(name, f))| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = f();
                    (i + 1, name, r, t.elapsed().as_millis())
                })
            })
            .collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(i, h)| h.join().unwrap_or_else(|_| (i + 1, CRITERIA[i].0, Err("panicked".into()), 0)))
            .collect()
    });
    let mut failed = Vec::new();
    for (i, name, r, ms) in &results {
        match r {
            Ok(detail) => println!("criterion {i:>2} PASS {name}: {detail} ({ms} ms)"),
            Err(detail) => {
                println!("criterion {i:>2} FAIL {name}: {detail} ({ms} ms)");
                failed.push(*i);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

/// Self-check of the erratum bookkeeping.
fn misprint_helpers() {
    let entries = [exact(0, 0, q(1, 2)), erratum(1, 0, q(1, 3), q(1, 4))];
    let vals = |k: usize, _: usize| if k == 0 { q(1, 2) } else { q(1, 4) };
    assert_eq!(compare_printed(&entries, vals), Ok(1));
    assert!(compare_printed(&entries, |_, _| q(1, 2)).is_err());
    let stale = [erratum(0, 0, q(1, 2), q(1, 2))];
    assert!(compare_printed(&stale, |_, _| q(1, 2)).is_err());
}

