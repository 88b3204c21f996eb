//! Training toward v11 | v13 | w13 | v14 from a three-layer network, once
//! from the function (synthesized target, don't-cares kept as they are) and
//! once from a fully specified target state.
//!
//!     cargo run --example train_worked_example

use ccgates::analysis::{resolve, support, synthesize_target};
use ccgates::oracle::truth_table_of;
use ccgates::training::train;
use ccgates::{Network, StateVector, TargetFunction, UnitTime};

fn report(label: &str, x0: &StateVector, x_star: &StateVector) {
    let mut net = Network::new(UnitTime::new(3).unwrap(), x0);
    let (plan, traces) = train(&mut net, x_star).unwrap();
    println!("{label}: X* = {x_star}");
    for d in &plan.directives {
        println!("  flip {} from {:<3} input {} x{}", d.node, d.from, d.input, d.hold);
    }
    println!("  k* = {}, T = {} ({} steps traced)", plan.k_star(), plan.duration(), traces.len());
    let f = support(&net.state());
    println!("  final {}  realizes {f}  y = {}", net.state(), f.formula());
}

fn main() {
    let x0: StateVector = "YES,YES,OR,YES,OR,OR,OR".parse().unwrap();
    let f = TargetFunction::new([1, 3, 4], [3]);

    let pattern = synthesize_target(&f, 3).unwrap().feasible().unwrap();
    println!("target {f}: pattern {pattern}");
    let x_star = resolve(&pattern, &x0).unwrap();
    report("function target", &x0, &x_star);
    assert!(truth_table_of(&x_star).unwrap().equals_function(&f));

    let explicit: StateVector = "YES,YES,OR,YES,YES,OR,YES".parse().unwrap();
    report("explicit state", &x0, &explicit);
}
