//! Simulating a three-layer network: realized function, tree view, and a
//! short trace under the two state-preserving inputs.
//!
//!     cargo run --example network_simulation

use ccgates::analysis::support;
use ccgates::render::render_tree;
use ccgates::{InputVector, Network, StateVector, UnitTime};

fn main() {
    let x: StateVector = "YES,YES,OR,YES,OR,OR,YES".parse().unwrap();
    let mut net = Network::new(UnitTime::new(3).unwrap(), &x);

    let f = support(&x);
    println!("state {x}");
    println!("{f}   y = {}", f.formula());
    print!("{}", render_tree(&x));

    let probe: InputVector = "0 0 1 0 0 1 1 1".parse().unwrap();
    let eval = net.evaluate(&probe).unwrap();
    println!("\ninput {probe} -> y = {}", eval.output as u8);

    for u in [InputVector::leading_one(3), InputVector::zeros(3)] {
        let tr = net.step(&u).unwrap();
        println!("t={} input {} -> y_m = {}", tr.t, tr.input, tr.output as u8);
    }
    assert_eq!(net.state(), x);
    println!("state unchanged after {} steps", net.time());
}
