//! The compressed CBH series `log(exp P · exp Q)` modulo `[[L,L],[L,L]]`,
//! computed three ways and printed in the basis `[P^a Q^b P Q]`.

use assoc_core::cbh_engine::{agree, associative_log_oracle, classical_cbh_in_model, compressed_cbh};
use assoc_core::int;

fn main() {
    let n = 8;
    let h = compressed_cbh(n);
    assert!(agree(&h, &classical_cbh_in_model(n)));
    assert!(agree(&h, &associative_log_oracle(n)));

    println!("P + Q");
    for d in 0..=n - 2 {
        for a in (0..=d).rev() {
            let c = h.mirrored_coefficient(a, d - a);
            if c != int(0) {
                println!("  {c:>14} [P^{a} Q^{} P Q]", d - a);
            }
        }
    }
}
