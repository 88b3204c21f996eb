//! A single conditioning gate: acquisition (YES -> OR under repeated (1,1))
//! and extinction (OR -> YES under repeated (0,1)).
//!
//!     cargo run --example gate_conditioning

use ccgates::{Gate, GateState, UnitTime};

fn show(label: &str, gate: Gate, inputs: &[(bool, bool)], s: UnitTime) -> Gate {
    println!("{label} (s = {s})");
    let mut g = gate;
    for (t, &(v, w)) in inputs.iter().enumerate() {
        let (y, next) = g.step(v, w, s);
        println!(
            "  t={t}  in=({},{})  state={:<3} acq={} ext={}  y={}  -> {}",
            v as u8,
            w as u8,
            g.state(),
            g.acq_streak(),
            g.ext_streak(),
            y as u8,
            next.state()
        );
        g = next;
    }
    g
}

fn main() {
    let s = UnitTime::new(3).unwrap();
    let bell_and_food = (true, true);
    let bell_only = (false, true);

    let g = show("acquisition", Gate::new(GateState::Yes), &[bell_and_food; 4], s);
    assert_eq!(g.state(), GateState::Or);

    let g = show("extinction", g, &[bell_only; 3], s);
    assert_eq!(g.state(), GateState::Yes);

    let g = show(
        "interrupted streak",
        g,
        &[bell_and_food, bell_and_food, (false, false), bell_and_food],
        s,
    );
    assert_eq!(g.state(), GateState::Yes);
}
