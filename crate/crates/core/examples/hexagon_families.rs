//! The three distinguished even solutions of the compressed hexagon and
//! their free parameters.

use assoc_core::hexagon_solver::{decompose, family_i, family_ii, family_iii, residual_15b};

fn main() {
    let n = 8;
    for (name, f) in [("I", family_i(n)), ("II", family_ii(n)), ("III", family_iii(n))] {
        assert!(residual_15b(&f).is_zero());
        println!("f^{name}:");
        for d in 0..=n {
            let terms: Vec<String> = (0..=d / 2)
                .rev()
                .map(|k| format!("a_{}{}={}", d - k, k, f.coeff(d - k, k)))
                .collect();
            println!("  degree {d}: {}", terms.join("  "));
        }
        let p = decompose(&f).expect("hexagon solution");
        for ((m, k), v) in &p.beta {
            println!("  beta_{m}{k} = {v}");
        }
    }
}
