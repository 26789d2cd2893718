//! Pentagon residuals in the metabelian quotient of the four-strand algebra:
//! symmetric tables pass, a perturbed table does not.

use assoc_core::hexagon_solver::{family_i, AlphaTable};
use assoc_core::pentagon_checker::{dimension_report, pentagon_check_with, QuotientReducer, Variant};
use assoc_core::verify::{random_asymmetric_alpha, random_symmetric_alpha};

fn main() {
    let n = 7;
    for row in dimension_report(n, Variant::L4bar) {
        println!("L4bar degree {:>2}: dimension {:>3} (spanning bound {})", row.degree, row.dimension, row.reference);
    }

    let reducer = QuotientReducer::l4(n);
    let cases = [
        ("f^I", AlphaTable::from_series(&family_i(n - 2))),
        ("random symmetric", random_symmetric_alpha(1, n - 2)),
        ("perturbed", random_asymmetric_alpha(1, n - 2)),
    ];
    for (name, alpha) in &cases {
        let rep = pentagon_check_with(&reducer, alpha, n).expect("within bound");
        let norms: Vec<String> = rep.residual_norms.iter().map(|d| format!("{}:{}", d.degree, d.nonzero)).collect();
        println!("{name:>16}: pass={} nonzero terms by degree [{}]", rep.pass, norms.join(" "));
    }
}
