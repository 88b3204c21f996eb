//! Enumerate every state of small networks, group them by the function they
//! realize, and show why some functions are out of reach.
//!
//!     cargo run --example feasibility_atlas

use ccgates::analysis::{synthesize_target, Synthesis};
use ccgates::oracle::enumerate_feasible;
use ccgates::TargetFunction;

fn main() {
    for m in 1..=3 {
        let atlas = enumerate_feasible(m, false).unwrap();
        println!(
            "m = {m}: {} states realize {} distinct functions",
            atlas.state_count(),
            atlas.entries.len()
        );
        if m < 3 {
            for (f, states) in &atlas.entries {
                println!("  {:<24} {:>2} states   y = {}", f.to_string(), states.len(), f.formula());
            }
        }
    }

    for f in [
        TargetFunction::new([2], []),
        TargetFunction::new([1], [3]),
        TargetFunction::new([1, 3, 4], [3]),
    ] {
        match synthesize_target(&f, 3).unwrap() {
            Synthesis::Feasible(t) => println!("{f}: feasible, X* = {t}"),
            Synthesis::Infeasible(o) => println!("{f}: infeasible, {o}"),
        }
    }
}
