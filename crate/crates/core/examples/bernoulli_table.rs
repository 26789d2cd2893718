//! Prints the extended Bernoulli numbers `C_mn` for `m + n <= 12`.

use assoc_core::exact_arith::{bernoulli_vec, ExtBernoulliTable};

fn main() {
    let b = bernoulli_vec(12);
    println!("B_0..B_12: {}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));

    let t = ExtBernoulliTable::new(12);
    println!("\nC_mn, row m, column n:");
    for m in 1..12 {
        let row: Vec<String> = (1..12 - m + 1).map(|n| format!("{:>9}", t.get(m, n).to_string())).collect();
        println!("{m:>2} |{}", row.join(""));
    }
}
