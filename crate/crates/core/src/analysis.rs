//! Realized functions, feasibility, and target-state synthesis.
//!
//! Under any state the network output is a disjunction
//! `OR_{j in J1} v1j  OR  OR_{j in J2} w1j` over leaf inputs. [`support`]
//! reads `(J1, J2)` off a state structurally; [`synthesize_target`] goes the
//! other way, producing a (partial) state that realizes a requested function
//! or a witness that none exists.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::GateState;
use crate::network::{check_layers, leaf_count, node_count, nodes, NodeId, StateVector};

/// The pair `(J1, J2)` of 1-based leaf indices whose `v` (resp. `w`) inputs
/// are OR-ed together at the output.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TargetFunction {
    pub j1: BTreeSet<usize>,
    pub j2: BTreeSet<usize>,
}

impl TargetFunction {
    pub fn new<A, B>(j1: A, j2: B) -> Self
    where
        A: IntoIterator<Item = usize>,
        B: IntoIterator<Item = usize>,
    {
        TargetFunction {
            j1: j1.into_iter().collect(),
            j2: j2.into_iter().collect(),
        }
    }

    /// Checks that every index names a leaf gate of an `m`-layer network.
    pub fn check(&self, m: usize) -> Result<()> {
        check_layers(m)?;
        let leaves = leaf_count(m);
        match self.j1.iter().chain(&self.j2).find(|&&j| j == 0 || j > leaves) {
            Some(&index) => Err(Error::IndexOutOfRange { index, leaves }),
            None => Ok(()),
        }
    }

    /// Input-bit positions (0-based, `(v11, w11, v12, ...)` layout) in the
    /// disjunction.
    pub fn positions(&self) -> BTreeSet<usize> {
        self.j1
            .iter()
            .map(|j| 2 * (j - 1))
            .chain(self.j2.iter().map(|j| 2 * j - 1))
            .collect()
    }

    /// Evaluates the disjunction on an input vector.
    pub fn eval(&self, bits: &[bool]) -> bool {
        self.positions().into_iter().any(|p| bits[p])
    }

    /// Renders the disjunction, e.g. `v11 | v13 | w13`.
    pub fn formula(&self) -> String {
        let mut terms: Vec<(usize, bool, String)> = self
            .j1
            .iter()
            .map(|j| (*j, false, format!("v1{j}")))
            .chain(self.j2.iter().map(|j| (*j, true, format!("w1{j}"))))
            .collect();
        terms.sort();
        if terms.is_empty() {
            return "0".into();
        }
        terms.into_iter().map(|t| t.2).collect::<Vec<_>>().join(" | ")
    }
}

impl fmt::Display for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<usize>| s.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "J1=[{}] J2=[{}]", list(&self.j1), list(&self.j2))
    }
}

/// The function realized by state `x`.
pub fn support(x: &StateVector) -> TargetFunction {
    let mut f = TargetFunction::default();
    collect_support(x, NodeId::root(x.m()), &mut f);
    f
}

fn collect_support(x: &StateVector, node: NodeId, f: &mut TargetFunction) {
    let state = x.get(node);
    match (node.first_child(), node.second_child()) {
        (Some(left), Some(right)) => {
            collect_support(x, left, f);
            if state == GateState::Or {
                collect_support(x, right, f);
            }
        }
        _ => {
            f.j1.insert(node.position);
            if state == GateState::Or {
                f.j2.insert(node.position);
            }
        }
    }
}

/// A partial state: `None` marks a don't-care node whose state cannot reach
/// the output.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetState {
    m: usize,
    assignments: Vec<Option<GateState>>,
}

impl TargetState {
    pub fn dont_care(m: usize) -> Result<Self> {
        check_layers(m)?;
        Ok(TargetState {
            m,
            assignments: vec![None; node_count(m)],
        })
    }

    pub fn from_state(x: &StateVector) -> Self {
        TargetState {
            m: x.m(),
            assignments: x.states().iter().copied().map(Some).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, node: NodeId) -> Option<GateState> {
        self.assignments[node.index(self.m)]
    }

    pub fn set(&mut self, node: NodeId, value: Option<GateState>) {
        let k = node.index(self.m);
        self.assignments[k] = value;
    }

    pub fn assignments(&self) -> &[Option<GateState>] {
        &self.assignments
    }

    /// Whether `x` agrees with every assigned node.
    pub fn matches(&self, x: &StateVector) -> bool {
        x.m() == self.m
            && self
                .assignments
                .iter()
                .zip(x.states())
                .all(|(a, s)| a.is_none_or(|a| a == *s))
    }
}

impl fmt::Display for TargetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, a) in self.assignments.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            match a {
                Some(st) => write!(f, "{st}")?,
                None => f.write_str("*")?,
            }
        }
        f.write_str(")")
    }
}

/// Why a function cannot be realized: the subtree rooted at `node` has a
/// demanded input but not its leftmost first input `v1{leaf}`, which every
/// state routes to the subtree output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Obstruction {
    pub node: NodeId,
    pub leaf: usize,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "subtree rooted at node {} must include its leftmost first input v1{} (index {} in J1): \
             that input reaches the subtree output under every state",
            self.node, self.leaf, self.leaf
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Synthesis {
    Feasible(TargetState),
    Infeasible(Obstruction),
}

impl Synthesis {
    pub fn feasible(self) -> Option<TargetState> {
        match self {
            Synthesis::Feasible(t) => Some(t),
            Synthesis::Infeasible(_) => None,
        }
    }
}

/// Builds a partial state whose every completion realizes `f`, or reports the
/// first subtree (top-down, left-first) that makes `f` unrealizable.
///
/// Top-down over demanded index sets: an internal node whose right subtree is
/// not demanded becomes YES and its right subtree is left unassigned; otherwise
/// it becomes OR and both children are recursed. A leaf is YES for `{v}` and OR
/// for `{v, w}`. Any subtree whose demand misses its leftmost `v` is infeasible.
pub fn synthesize_target(f: &TargetFunction, m: usize) -> Result<Synthesis> {
    f.check(m)?;
    let mut target = TargetState::dont_care(m)?;
    Ok(match assign(f, NodeId::root(m), &mut target) {
        Ok(()) => Synthesis::Feasible(target),
        Err(obstruction) => Synthesis::Infeasible(obstruction),
    })
}

fn assign(f: &TargetFunction, node: NodeId, target: &mut TargetState) -> Result<(), Obstruction> {
    let leftmost = node.leaves().start;
    if !f.j1.contains(&leftmost) {
        return Err(Obstruction { node, leaf: leftmost });
    }
    match (node.first_child(), node.second_child()) {
        (Some(left), Some(right)) => {
            let r = right.leaves();
            let right_demanded = f.j1.range(r.clone()).next().is_some() || f.j2.range(r).next().is_some();
            if right_demanded {
                target.set(node, Some(GateState::Or));
                assign(f, left, target)?;
                assign(f, right, target)
            } else {
                target.set(node, Some(GateState::Yes));
                assign(f, left, target)
            }
        }
        _ => {
            let st = if f.j2.contains(&leftmost) { GateState::Or } else { GateState::Yes };
            target.set(node, Some(st));
            Ok(())
        }
    }
}

/// Completes `target` with `current`'s value at every don't-care node, so no
/// unnecessary flips are planned.
pub fn resolve(target: &TargetState, current: &StateVector) -> Result<StateVector> {
    if target.m != current.m() {
        return Err(Error::Dimension {
            what: "node states",
            expected: node_count(target.m),
            found: current.states().len(),
        });
    }
    let states = target
        .assignments
        .iter()
        .zip(current.states())
        .map(|(a, cur)| a.unwrap_or(*cur))
        .collect();
    StateVector::new(target.m, states)
}

/// Nodes that can influence the output under `x`: reachable from the root
/// through first inputs, and through second inputs of OR nodes.
pub fn active_nodes(x: &StateVector) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    let mut stack = vec![NodeId::root(x.m())];
    while let Some(node) = stack.pop() {
        out.insert(node);
        if let Some(left) = node.first_child() {
            stack.push(left);
        }
        if x.get(node) == GateState::Or {
            if let Some(right) = node.second_child() {
                stack.push(right);
            }
        }
    }
    out
}

/// Nodes in lexicographic order whose assignment differs from `x`.
pub fn mismatches(target: &StateVector, x: &StateVector) -> Vec<NodeId> {
    nodes(x.m()).filter(|&n| target.get(n) != x.get(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateState::{Or, Yes};
    use proptest::prelude::*;

    fn sv(s: &str) -> StateVector {
        s.parse().unwrap()
    }

    #[test]
    fn support_examples() {
        let all_yes = StateVector::uniform(3, Yes).unwrap();
        assert_eq!(support(&all_yes), TargetFunction::new([1], []));
        assert_eq!(support(&sv("YES,YES,OR,YES,OR,OR,YES")), TargetFunction::new([1, 2], []));
        assert_eq!(
            support(&sv("YES,YES,OR,YES,YES,OR,OR")),
            TargetFunction::new([1, 3, 4], [3])
        );
    }

    #[test]
    fn display_and_formula() {
        let f = TargetFunction::new([1, 3, 4], [3]);
        assert_eq!(f.to_string(), "J1=[1,3,4] J2=[3]");
        assert_eq!(f.formula(), "v11 | v13 | w13 | v14");
        assert_eq!(TargetFunction::new([1, 2], []).to_string(), "J1=[1,2] J2=[]");
    }

    #[test]
    fn spine_target() {
        for m in 1..=5 {
            let t = synthesize_target(&TargetFunction::new([1], []), m).unwrap().feasible().unwrap();
            for node in nodes(m) {
                let expect = (node.position == 1).then_some(Yes);
                assert_eq!(t.get(node), expect, "m={m} node {node}");
            }
        }
    }

    #[test]
    fn missing_first_index_is_infeasible() {
        let r = synthesize_target(&TargetFunction::new([2], []), 3).unwrap();
        assert_eq!(r, Synthesis::Infeasible(Obstruction { node: NodeId::root(3), leaf: 1 }));
        let r = synthesize_target(&TargetFunction::default(), 3).unwrap();
        assert!(matches!(r, Synthesis::Infeasible(_)));
    }

    #[test]
    fn inner_obstruction_names_subtree() {
        // right half demanded through w13 only: (2,2) lacks v13
        let r = synthesize_target(&TargetFunction::new([1], [3]), 3).unwrap();
        assert_eq!(r, Synthesis::Infeasible(Obstruction { node: NodeId::new(2, 2), leaf: 3 }));
    }

    #[test]
    fn worked_example_target() {
        let t = synthesize_target(&TargetFunction::new([1, 3, 4], [3]), 3)
            .unwrap()
            .feasible()
            .unwrap();
        assert_eq!(t.to_string(), "(YES,*,OR,YES,YES,OR,OR)");
        let resolved = resolve(&t, &sv("YES,YES,OR,YES,OR,OR,OR")).unwrap();
        assert_eq!(resolved, sv("YES,YES,OR,YES,YES,OR,OR"));
    }

    #[test]
    fn out_of_range_indices() {
        let err = synthesize_target(&TargetFunction::new([1, 5], []), 3).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 5, leaves: 4 }));
        assert!(TargetFunction::new([0], []).check(3).is_err());
    }

    #[test]
    fn resolve_edge_cases() {
        let cur = sv("YES,YES,OR,YES,OR,OR,OR");
        assert_eq!(resolve(&TargetState::dont_care(3).unwrap(), &cur).unwrap(), cur);
        let full = sv("OR,OR,OR,OR,YES,YES,YES");
        assert_eq!(resolve(&TargetState::from_state(&full), &cur).unwrap(), full);
        assert!(resolve(&TargetState::dont_care(2).unwrap(), &cur).is_err());
    }

    #[test]
    fn synthesized_states_realize_target_m3() {
        for x in StateVector::all(3).unwrap() {
            let f = support(&x);
            let t = synthesize_target(&f, 3).unwrap().feasible().expect("support is feasible");
            assert!(t.matches(&x));
            assert_eq!(support(&resolve(&t, &x).unwrap()), f);
        }
    }

    #[test]
    fn active_nodes_are_assigned() {
        for x in StateVector::all(3).unwrap() {
            let t = synthesize_target(&support(&x), 3).unwrap().feasible().unwrap();
            let active = active_nodes(&resolve(&t, &x).unwrap());
            for node in nodes(3) {
                assert_eq!(t.get(node).is_some(), active.contains(&node), "{x} {node}");
            }
        }
    }

    proptest! {
        #[test]
        fn resolve_is_idempotent(target_code in 0u64..128, mask in 0u64..128, cur in 0u64..128) {
            let full = StateVector::from_code(3, target_code).unwrap();
            let mut t = TargetState::from_state(&full);
            for (k, node) in nodes(3).enumerate() {
                if mask >> k & 1 == 1 {
                    t.set(node, None);
                }
            }
            let x = StateVector::from_code(3, cur).unwrap();
            let once = resolve(&t, &x).unwrap();
            prop_assert_eq!(resolve(&t, &once).unwrap(), once.clone());
            prop_assert!(t.matches(&once));
        }

        #[test]
        fn support_always_has_first_leaf(m in 1usize..7, seed in any::<u64>()) {
            let x = StateVector::from_code(m, seed).unwrap();
            let f = support(&x);
            prop_assert!(f.j1.contains(&1));
            prop_assert!(f.j2.is_subset(&f.j1));
        }
    }

    #[test]
    fn m1_functions() {
        assert_eq!(support(&sv("YES")), TargetFunction::new([1], []));
        assert_eq!(support(&sv("OR")), TargetFunction::new([1], [1]));
        let t = synthesize_target(&TargetFunction::new([1], [1]), 1).unwrap().feasible().unwrap();
        assert_eq!(t.get(NodeId::root(1)), Some(Or));
    }
}
