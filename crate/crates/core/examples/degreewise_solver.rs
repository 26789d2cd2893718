//! Solves the hexagon degree by degree and shows where free parameters enter.

use assoc_core::hexagon_solver::solve_degreewise;

fn main() {
    let rep = solve_degreewise(10).expect("consistent system");
    for d in &rep.degrees {
        let vals: Vec<String> = d.values.iter().map(|((k, l), v)| format!("a_{k}{l}={v}")).collect();
        println!("degree {:>2}: free {} (expected {})  {}", d.degree, d.kernel_dim, d.expected_free, vals.join(" "));
        for dir in &d.kernel {
            let v: Vec<String> = dir.iter().map(|c| c.to_string()).collect();
            println!("           direction on {:?}: [{}]", d.unknowns, v.join(", "));
        }
    }
    println!("census matches: {}", rep.census_matches());
}
