//! Flip every node of a three-layer network one at a time and show which
//! nodes moved. Nodes in the flipped node's layer and upstream never move;
//! downstream nodes may.
//!
//!     cargo run --example flipping_principle

use ccgates::network::nodes;
use ccgates::{flip_input, Network, StateVector, UnitTime};

fn main() {
    let s = UnitTime::new(2).unwrap();
    let x: StateVector = "YES,YES,OR,YES,OR,OR,YES".parse().unwrap();
    println!("initial {x}, s = {s}");
    for node in nodes(3) {
        let u = flip_input(3, node, x.get(node)).unwrap();
        let mut net = Network::new(s, &x);
        net.hold(&u, s.get()).unwrap();
        let after = net.state();
        let moved: Vec<String> = nodes(3)
            .filter(|&n| after.get(n) != x.get(n))
            .map(|n| n.to_string())
            .collect();
        println!("flip {node}: input {u}  -> {after}  moved: {}", moved.join(" "));
        assert!(moved.contains(&node.to_string()));
        assert!(nodes(3)
            .filter(|n| n.layer <= node.layer && *n != node)
            .all(|n| after.get(n) == x.get(n)));
    }
}
