//! ASCII rendering of a network state, root first.

use std::fmt::Write;

use crate::analysis::active_nodes;
use crate::gate::GateState;
use crate::network::{NodeId, StateVector};

/// Draws the tree sideways. Leaves on an active path list the inputs they
/// pass on; nodes that cannot reach the output are marked `(inactive)`.
pub fn render_tree(x: &StateVector) -> String {
    let active = active_nodes(x);
    let mut out = String::new();
    draw(x, NodeId::root(x.m()), &active, "", "", &mut out);
    out
}

fn draw(
    x: &StateVector,
    node: NodeId,
    active: &std::collections::BTreeSet<NodeId>,
    lead: &str,
    child_lead: &str,
    out: &mut String,
) {
    let state = x.get(node);
    let _ = write!(out, "{lead}{node} {state}");
    if !active.contains(&node) {
        out.push_str("  (inactive)");
    } else if node.layer == 1 {
        let j = node.position;
        match state {
            GateState::Yes => {
                let _ = write!(out, "  [v1{j}]");
            }
            GateState::Or => {
                let _ = write!(out, "  [v1{j}, w1{j}]");
            }
        }
    }
    out.push('\n');
    if let (Some(left), Some(right)) = (node.first_child(), node.second_child()) {
        draw(x, left, active, &format!("{child_lead}├─ "), &format!("{child_lead}│  "), out);
        draw(x, right, active, &format!("{child_lead}└─ "), &format!("{child_lead}   "), out);
    }
}
