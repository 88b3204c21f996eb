//! Steering a network to a target state with external stimuli only.
//!
//! [`flip_input`] builds the input that, held for `s` steps, flips one node
//! while leaving its own layer and every upstream layer untouched.
//! [`plan`] visits nodes upstream-first and flips each one that disagrees with
//! the target at the moment it is visited; [`execute`] replays the plan on a
//! live network and checks every flip.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{GateState, UnitTime};
use crate::network::{check_layers, input_width, nodes, InputVector, Network, NodeId, StateVector, StepTrace};

/// The flipping input for `node` currently in state `from`.
///
/// The `2^m` input bits are cut into `2^(m+1-p)` equal blocks (`p` the node's
/// layer). Block `2q` is `(1,0,...,0)`; block `2q-1` is `(1,0,...,0)` when
/// `from` is YES and all zeros when it is OR; the rest are zero. The node then
/// sees its own training pair while every other gate in layers `<= p` sees
/// `(0,0)` or `(1,0)`.
pub fn flip_input(m: usize, node: NodeId, from: GateState) -> Result<InputVector> {
    check_layers(m)?;
    node.check(m)?;
    let block = 1usize << (node.layer - 1);
    let first = 2 * (node.position - 1) * block;
    let second = first + block;
    let mut bits = vec![false; input_width(m)];
    if from == GateState::Yes {
        bits[first] = true;
    }
    bits[second] = true;
    Ok(InputVector::new(bits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipDirective {
    pub node: NodeId,
    pub from: GateState,
    pub input: InputVector,
    pub hold: u32,
}

/// Ordered flip directives; total duration is `k* · s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainingPlan {
    pub m: usize,
    pub s: UnitTime,
    pub directives: Vec<FlipDirective>,
}

impl TrainingPlan {
    pub fn k_star(&self) -> usize {
        self.directives.len()
    }

    /// Total number of steps `T`.
    pub fn duration(&self) -> u64 {
        self.directives.len() as u64 * u64::from(self.s.get())
    }

    pub fn is_empty(&self) -> bool {
        self.directives.is_empty()
    }

    /// The full input sequence, one vector per step.
    pub fn inputs(&self) -> impl Iterator<Item = &InputVector> {
        self.directives
            .iter()
            .flat_map(|d| std::iter::repeat_n(&d.input, d.hold as usize))
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.directives.iter().map(|d| d.node).collect()
    }
}

/// Simulates the upstream-first flipping procedure on a copy of `net` and
/// returns the resulting plan. States are read from the simulated network at
/// visit time, since earlier flips may disturb downstream nodes.
pub fn plan(net: &Network, x_star: &StateVector) -> Result<TrainingPlan> {
    let m = net.m();
    if x_star.m() != m {
        return Err(Error::Dimension {
            what: "target node states",
            expected: crate::network::node_count(m),
            found: x_star.states().len(),
        });
    }
    let s = net.unit_time();
    let mut sim = net.clone();
    let mut directives = Vec::new();
    for node in nodes(m) {
        let current = sim.gate(node).state();
        if current == x_star.get(node) {
            continue;
        }
        let input = flip_input(m, node, current)?;
        sim.hold(&input, s.get())?;
        directives.push(FlipDirective {
            node,
            from: current,
            input,
            hold: s.get(),
        });
    }
    debug_assert_eq!(&sim.state(), x_star);
    Ok(TrainingPlan { m, s, directives })
}

/// Applies `plan` to `net`, checking that each directive's node starts in its
/// recorded state and changes state exactly once, on the last step of its
/// block.
pub fn execute(net: &mut Network, plan: &TrainingPlan) -> Result<Vec<StepTrace>> {
    if plan.m != net.m() || plan.s != net.unit_time() {
        return Err(Error::PlanMismatch {
            plan_m: plan.m,
            plan_s: plan.s.get(),
            m: net.m(),
            s: net.unit_time().get(),
        });
    }
    for d in &plan.directives {
        d.input.check_width(plan.m)?;
        d.node.check(plan.m)?;
    }
    let mut traces = Vec::with_capacity(plan.duration() as usize);
    for (k, d) in plan.directives.iter().enumerate() {
        let found = net.gate(d.node).state();
        if found != d.from {
            return Err(Error::UnexpectedState {
                directive: k,
                node: d.node,
                expected: d.from,
                found,
            });
        }
        let block = net.hold(&d.input, d.hold)?;
        let changes: Vec<bool> = block
            .iter()
            .filter_map(|tr| tr.record(d.node))
            .map(|r| r.state != r.next)
            .collect();
        let flips = changes.iter().filter(|c| **c).count();
        let at_boundary = changes.last() == Some(&true);
        if flips != 1 || !at_boundary || net.gate(d.node).state() != d.from.flipped() {
            return Err(Error::FlipFailed {
                directive: k,
                node: d.node,
                flips,
                traces: Box::new(block),
            });
        }
        traces.extend(block);
    }
    Ok(traces)
}

/// Plans and executes in one go.
pub fn train(net: &mut Network, x_star: &StateVector) -> Result<(TrainingPlan, Vec<StepTrace>)> {
    let p = plan(net, x_star)?;
    let traces = execute(net, &p)?;
    Ok((p, traces))
}

/// Outcome of holding a node's flip input for `s` steps from some state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipViolation {
    pub initial: Vec<GateState>,
    pub node: NodeId,
    pub s: u32,
    /// Nodes that ended in the wrong state: the target if it did not flip,
    /// or any other node in layers `<= p` that changed.
    pub wrong: Vec<NodeId>,
}

/// Checks the flipping property for one node and one initial state: after
/// `s` held steps the node is flipped and every other node in its layer or an
/// upstream layer is unchanged.
pub fn check_flip(x: &StateVector, node: NodeId, s: UnitTime) -> Result<Option<FlipViolation>> {
    let mut net = Network::new(s, x);
    let input = flip_input(x.m(), node, x.get(node))?;
    net.hold(&input, s.get())?;
    let after = net.state();
    let wrong: Vec<NodeId> = nodes(x.m())
        .filter(|n| n.layer <= node.layer)
        .filter(|&n| {
            let expect = if n == node { x.get(n).flipped() } else { x.get(n) };
            after.get(n) != expect
        })
        .collect();
    Ok((!wrong.is_empty()).then(|| FlipViolation {
        initial: x.states().to_vec(),
        node,
        s: s.get(),
        wrong,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateState::{Or, Yes};

    fn sv(s: &str) -> StateVector {
        s.parse().unwrap()
    }

    fn unit(s: u32) -> UnitTime {
        UnitTime::new(s).unwrap()
    }

    #[test]
    fn flip_input_examples() {
        let u = flip_input(3, NodeId::new(2, 1), Or).unwrap();
        assert_eq!(u.to_string(), "0 0 1 0 0 0 0 0");
        let u = flip_input(3, NodeId::new(3, 1), Or).unwrap();
        assert_eq!(u.to_string(), "0 0 0 0 1 0 0 0");
        let u = flip_input(3, NodeId::new(1, 2), Yes).unwrap();
        assert_eq!(u.to_string(), "0 0 1 1 0 0 0 0");
        assert!(matches!(
            flip_input(3, NodeId::new(2, 3), Yes),
            Err(Error::NodeOutOfRange { .. })
        ));
    }

    #[test]
    fn flip_input_on_single_gate() {
        assert_eq!(flip_input(1, NodeId::root(1), Yes).unwrap().to_string(), "1 1");
        assert_eq!(flip_input(1, NodeId::root(1), Or).unwrap().to_string(), "0 1");
    }

    #[test]
    fn target_node_sees_training_pair() {
        for x in StateVector::all(3).unwrap() {
            let net = Network::new(unit(1), &x);
            for node in nodes(3) {
                let u = flip_input(3, node, x.get(node)).unwrap();
                let eval = net.evaluate(&u).unwrap();
                let sig = eval.signals[node.index(3)];
                assert_eq!((sig.v, sig.w), x.get(node).training_pair());
                for other in nodes(3).filter(|n| n.layer <= node.layer && *n != node) {
                    let sig = eval.signals[other.index(3)];
                    assert!(!sig.w, "{other} receives a second-input pulse");
                }
            }
        }
    }

    #[test]
    fn empty_plan_when_already_there() {
        let x = sv("YES,YES,OR,YES,OR,OR,OR");
        let mut net = Network::new(unit(3), &x);
        let p = plan(&net, &x).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.duration(), 0);
        assert!(execute(&mut net, &p).unwrap().is_empty());
        assert_eq!(net.time(), 0);
    }

    #[test]
    fn worked_example_two_flips() {
        let mut net = Network::new(unit(3), &sv("YES,YES,OR,YES,OR,OR,OR"));
        let x_star = sv("YES,YES,OR,YES,YES,OR,YES");
        let p = plan(&net, &x_star).unwrap();
        assert_eq!(p.nodes(), vec![NodeId::new(2, 1), NodeId::new(3, 1)]);
        assert_eq!(p.k_star(), 2);
        assert_eq!(p.duration(), 6);
        let traces = execute(&mut net, &p).unwrap();
        assert_eq!(traces.len(), 6);
        assert_eq!(net.state(), x_star);
        let mid: Vec<_> = traces[2].nodes.iter().map(|r| r.next).collect();
        assert_eq!(StateVector::from_states(mid).unwrap(), sv("YES,YES,OR,YES,YES,OR,OR"));
    }

    #[test]
    fn plan_mismatch_rejected() {
        let x = sv("YES,YES,OR,YES,OR,OR,OR");
        let net = Network::new(unit(3), &x);
        let p = plan(&net, &sv("OR,YES,OR,YES,OR,OR,OR")).unwrap();
        let mut other = Network::new(unit(2), &x);
        assert!(matches!(execute(&mut other, &p), Err(Error::PlanMismatch { .. })));
        let mut moved = Network::new(unit(3), &sv("OR,YES,OR,YES,OR,OR,OR"));
        assert!(matches!(execute(&mut moved, &p), Err(Error::UnexpectedState { directive: 0, .. })));
        assert!(plan(&net, &StateVector::uniform(2, Yes).unwrap()).is_err());
    }

    #[test]
    fn tampered_directive_fails_to_flip() {
        let x = sv("YES,YES,OR,YES,OR,OR,OR");
        let mut net = Network::new(unit(3), &x);
        let mut p = plan(&net, &sv("YES,YES,OR,YES,YES,OR,OR")).unwrap();
        p.directives[0].input = InputVector::leading_one(3);
        match execute(&mut net, &p) {
            Err(Error::FlipFailed { directive, node, flips, traces }) => {
                assert_eq!((directive, node, flips), (0, NodeId::new(2, 1), 0));
                assert_eq!(traces.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn flipping_property_m2_all_s() {
        for s in 1..=3 {
            for x in StateVector::all(2).unwrap() {
                for node in nodes(2) {
                    assert_eq!(check_flip(&x, node, unit(s)).unwrap(), None);
                }
            }
        }
    }
}
