//! The Drinfeld series over formal odd zeta symbols and its parameters.

use assoc_core::zeta_symbols::{drinfeld_f, solve_betas_in_theta, theta_even};

fn main() {
    for k in 1..=5 {
        println!("theta_{} = {}", 2 * k, theta_even(k));
    }

    let f = drinfeld_f(5);
    println!("\nf^D up to degree 5:");
    for d in 0..=5 {
        for k in (0..=d).rev().filter(|k| 2 * k >= d) {
            println!("  l^{k} m^{}: {}", d - k, f.coeff(k, d - k));
        }
    }

    let p = solve_betas_in_theta(9).expect("solution");
    println!("\nparameters:");
    for ((n, k), v) in &p.beta {
        println!("  beta_{n}{k} = {v}");
    }
    for ((n, k), v) in &p.beta_tilde {
        println!("  beta~_{n}{k} = {v}");
    }
}
