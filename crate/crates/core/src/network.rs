//! The binary-tree network of conditioning gates.
//!
//! A network with `m` layers has `2^(m-i)` gates in layer `i`; layer 1 reads
//! the external input and layer `m` holds the single root gate whose output is
//! the network output. Node `(i, j)` (for `i >= 2`) takes its first input from
//! `(i-1, 2j-1)` and its second from `(i-1, 2j)`.
//!
//! Nodes are always enumerated in lexicographic order
//! `(1,1), (1,2), ..., (1,n1), (2,1), ..., (m,1)` and every flat per-node
//! vector in this crate (states, signals, trace records) uses that order.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Gate, GateState, UnitTime};

/// Largest layer count accepted when constructing networks. Input vectors
/// have `2^m` bits, so this is far beyond anything tractable anyway.
pub const MAX_LAYERS: usize = 24;

/// Node `(layer, position)`, both 1-based. Ordering is lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId {
    #[serde(rename = "i")]
    pub layer: usize,
    #[serde(rename = "j")]
    pub position: usize,
}

impl NodeId {
    pub const fn new(layer: usize, position: usize) -> Self {
        NodeId { layer, position }
    }

    pub const fn root(m: usize) -> Self {
        NodeId::new(m, 1)
    }

    pub fn is_valid(&self, m: usize) -> bool {
        self.layer >= 1 && self.layer <= m && self.position >= 1 && self.position <= layer_width(m, self.layer)
    }

    pub fn check(self, m: usize) -> Result<Self> {
        if self.is_valid(m) {
            Ok(self)
        } else {
            Err(Error::NodeOutOfRange { node: self, m })
        }
    }

    /// The child feeding this node's first (`v`) input, if any.
    pub fn first_child(&self) -> Option<NodeId> {
        (self.layer > 1).then(|| NodeId::new(self.layer - 1, 2 * self.position - 1))
    }

    /// The child feeding this node's second (`w`) input, if any.
    pub fn second_child(&self) -> Option<NodeId> {
        (self.layer > 1).then(|| NodeId::new(self.layer - 1, 2 * self.position))
    }

    /// Leaf gates (1-based positions) under this node.
    pub fn leaves(&self) -> Range<usize> {
        let width = 1usize << (self.layer - 1);
        let start = (self.position - 1) * width + 1;
        start..start + width
    }

    /// Flat lexicographic index of this node in an `m`-layer network.
    pub fn index(&self, m: usize) -> usize {
        layer_offset(m, self.layer) + self.position - 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.layer, self.position)
    }
}

impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "node id",
            detail: format!("expected \"i,j\" or \"(i,j)\", got {s:?}"),
        };
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        let layer = i.trim().parse().map_err(|_| bad())?;
        let position = j.trim().parse().map_err(|_| bad())?;
        Ok(NodeId::new(layer, position))
    }
}

pub fn check_layers(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidLayerCount(m))
    } else if m > MAX_LAYERS {
        Err(Error::TooLarge { m, max: MAX_LAYERS })
    } else {
        Ok(())
    }
}

/// Number of gates in layer `i`: `2^(m-i)`.
pub fn layer_width(m: usize, layer: usize) -> usize {
    1 << (m - layer)
}

/// Total gate count `2^m - 1`.
pub fn node_count(m: usize) -> usize {
    (1 << m) - 1
}

/// Number of leaf gates `2^(m-1)`.
pub fn leaf_count(m: usize) -> usize {
    1 << (m - 1)
}

/// Number of external input bits `2^m`.
pub fn input_width(m: usize) -> usize {
    1 << m
}

fn layer_offset(m: usize, layer: usize) -> usize {
    // sum_{k < layer} 2^(m-k)
    (1 << m) - (1 << (m + 1 - layer))
}

/// All nodes of an `m`-layer network in lexicographic order.
pub fn nodes(m: usize) -> impl Iterator<Item = NodeId> {
    (1..=m).flat_map(move |i| (1..=layer_width(m, i)).map(move |j| NodeId::new(i, j)))
}

/// Input-bit ranges (0-based, half-open) that a node's `v` and `w` signals
/// depend on: the `(2j-1)`-th and `2j`-th of `2^(m+1-i)` equal blocks.
pub fn input_blocks(m: usize, node: NodeId) -> Result<(Range<usize>, Range<usize>)> {
    check_layers(m)?;
    node.check(m)?;
    let size = 1usize << (node.layer - 1);
    let v_start = 2 * (node.position - 1) * size;
    Ok((v_start..v_start + size, v_start + size..v_start + 2 * size))
}

/// One external stimulus `U(t)`, laid out `(v11, w11, v12, w12, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InputVector(Vec<bool>);

impl InputVector {
    pub fn new(bits: Vec<bool>) -> Self {
        InputVector(bits)
    }

    pub fn zeros(m: usize) -> Self {
        InputVector(vec![false; input_width(m)])
    }

    /// `(1, 0, ..., 0)`: forces the network output to 1 without touching state.
    pub fn leading_one(m: usize) -> Self {
        let mut u = Self::zeros(m);
        u.0[0] = true;
        u
    }

    /// Input whose bit `k` is bit `k` of `value` (bit 0 is `v11`).
    pub fn from_index(m: usize, value: u64) -> Self {
        InputVector((0..input_width(m)).map(|k| value >> k & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First input of leaf gate `j` (1-based).
    pub fn v(&self, j: usize) -> bool {
        self.0[2 * (j - 1)]
    }

    /// Second input of leaf gate `j` (1-based).
    pub fn w(&self, j: usize) -> bool {
        self.0[2 * j - 1]
    }

    pub fn check_width(&self, m: usize) -> Result<()> {
        if self.0.len() == input_width(m) {
            Ok(())
        } else {
            Err(Error::Dimension {
                what: "input bits",
                expected: input_width(m),
                found: self.0.len(),
            })
        }
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn from_u8s(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Parse {
                    what: "input bit",
                    detail: format!("expected 0 or 1, got {other}"),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(InputVector)
    }
}

impl fmt::Display for InputVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Accepts whitespace/comma separated bits (`1 0 0 1`) or a packed string (`1001`).
impl FromStr for InputVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == ',' => {}
                other => {
                    return Err(Error::Parse {
                        what: "input vector",
                        detail: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(InputVector(bits))
    }
}

/// The collective state `X` of every gate, in lexicographic node order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateVector {
    m: usize,
    states: Vec<GateState>,
}

impl StateVector {
    /// Builds a state vector, inferring `m` from the length `2^m - 1`.
    pub fn from_states(states: Vec<GateState>) -> Result<Self> {
        let len = states.len();
        let m = (len + 1).trailing_zeros() as usize;
        if len == 0 || node_count(m) != len {
            return Err(Error::NotATree(len));
        }
        check_layers(m)?;
        Ok(StateVector { m, states })
    }

    pub fn new(m: usize, states: Vec<GateState>) -> Result<Self> {
        check_layers(m)?;
        if states.len() != node_count(m) {
            return Err(Error::Dimension {
                what: "node states",
                expected: node_count(m),
                found: states.len(),
            });
        }
        Ok(StateVector { m, states })
    }

    pub fn uniform(m: usize, state: GateState) -> Result<Self> {
        check_layers(m)?;
        Ok(StateVector {
            m,
            states: vec![state; node_count(m)],
        })
    }

    /// Decodes bit `k` of `code` as the state of the `k`-th node
    /// (lexicographic), 1 meaning OR. Used for exhaustive sweeps.
    pub fn from_code(m: usize, code: u64) -> Result<Self> {
        check_layers(m)?;
        let states = (0..node_count(m))
            .map(|k| if code >> k & 1 == 1 { GateState::Or } else { GateState::Yes })
            .collect();
        Ok(StateVector { m, states })
    }

    /// Every state of an `m`-layer network (`2^(2^m - 1)` of them).
    pub fn all(m: usize) -> Result<impl Iterator<Item = StateVector>> {
        check_layers(m)?;
        if m > 5 {
            return Err(Error::TooLarge { m, max: 5 });
        }
        Ok((0..1u64 << node_count(m)).map(move |c| StateVector::from_code(m, c).unwrap()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn states(&self) -> &[GateState] {
        &self.states
    }

    pub fn get(&self, node: NodeId) -> GateState {
        self.states[node.index(self.m)]
    }

    pub fn set(&mut self, node: NodeId, state: GateState) {
        let k = node.index(self.m);
        self.states[k] = state;
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, GateState)> + '_ {
        nodes(self.m).zip(self.states.iter().copied())
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, st) in self.states.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{st}")?;
        }
        f.write_str(")")
    }
}

/// Accepts `YES,OR,...` with optional surrounding parentheses.
impl FromStr for StateVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let states = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<GateState>>>()?;
        StateVector::from_states(states)
    }
}

/// Signals seen by one node during a combinational settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signal {
    pub v: bool,
    pub w: bool,
    pub y: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    /// Per-node signals in lexicographic order.
    pub signals: Vec<Signal>,
    /// Output of the root node.
    pub output: bool,
}

/// What happened to one node during a step. `state`/`acq`/`ext` are the
/// pre-step values; `next` is the state after the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub node: NodeId,
    pub v: bool,
    pub w: bool,
    pub y: bool,
    pub state: GateState,
    pub acq: u32,
    pub ext: u32,
    pub next: GateState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTrace {
    pub t: u64,
    pub input: InputVector,
    pub nodes: Vec<NodeRecord>,
    pub output: bool,
}

impl StepTrace {
    pub fn record(&self, node: NodeId) -> Option<&NodeRecord> {
        self.nodes.iter().find(|r| r.node == node)
    }
}

/// A network `Σ(m)` with unit training time `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Network {
    m: usize,
    s: UnitTime,
    gates: Vec<Gate>,
    t: u64,
}

impl Network {
    pub fn new(s: UnitTime, state: &StateVector) -> Self {
        Network {
            m: state.m(),
            s,
            gates: state.states().iter().map(|&st| Gate::new(st)).collect(),
            t: 0,
        }
    }

    pub fn uniform(m: usize, s: UnitTime, state: GateState) -> Result<Self> {
        Ok(Network::new(s, &StateVector::uniform(m, state)?))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn unit_time(&self) -> UnitTime {
        self.s
    }

    /// Steps taken so far.
    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn gate(&self, node: NodeId) -> &Gate {
        &self.gates[node.index(self.m)]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn state(&self) -> StateVector {
        StateVector {
            m: self.m,
            states: self.gates.iter().map(Gate::state).collect(),
        }
    }

    /// Settles every signal for input `u` without changing any state.
    pub fn evaluate(&self, u: &InputVector) -> Result<Evaluation> {
        u.check_width(self.m)?;
        let mut signals = Vec::with_capacity(self.gates.len());
        let mut prev_start = 0;
        for layer in 1..=self.m {
            let start = signals.len();
            for j in 1..=layer_width(self.m, layer) {
                let (v, w) = if layer == 1 {
                    (u.v(j), u.w(j))
                } else {
                    let left: &Signal = &signals[prev_start + 2 * (j - 1)];
                    let right: &Signal = &signals[prev_start + 2 * j - 1];
                    (left.y, right.y)
                };
                let y = self.gates[start + j - 1].output(v, w);
                signals.push(Signal { v, w, y });
            }
            prev_start = start;
        }
        let output = signals.last().map(|s| s.y).unwrap_or(false);
        Ok(Evaluation { signals, output })
    }

    /// Network output for `u` under the current state.
    pub fn output(&self, u: &InputVector) -> Result<bool> {
        Ok(self.evaluate(u)?.output)
    }

    /// One synchronous step: every signal is settled from the pre-step state,
    /// then all gates update simultaneously.
    pub fn step(&mut self, u: &InputVector) -> Result<StepTrace> {
        let eval = self.evaluate(u)?;
        let s = self.s;
        let mut records = Vec::with_capacity(self.gates.len());
        for ((node, gate), sig) in nodes(self.m).zip(self.gates.iter_mut()).zip(&eval.signals) {
            let pre = *gate;
            let (y, next) = pre.step(sig.v, sig.w, s);
            debug_assert_eq!(y, sig.y);
            *gate = next;
            records.push(NodeRecord {
                node,
                v: sig.v,
                w: sig.w,
                y,
                state: pre.state,
                acq: pre.acq_streak,
                ext: pre.ext_streak,
                next: next.state,
            });
        }
        let trace = StepTrace {
            t: self.t,
            input: u.clone(),
            nodes: records,
            output: eval.output,
        };
        self.t += 1;
        Ok(trace)
    }

    /// Applies `inputs` in order. All widths are checked before the first
    /// step, so on error the network is left untouched.
    pub fn run<'a, I>(&mut self, inputs: I) -> Result<Vec<StepTrace>>
    where
        I: IntoIterator<Item = &'a InputVector>,
    {
        let inputs: Vec<&InputVector> = inputs.into_iter().collect();
        for (index, u) in inputs.iter().enumerate() {
            u.check_width(self.m).map_err(|e| Error::AtInput {
                index,
                source: Box::new(e),
            })?;
        }
        inputs.into_iter().map(|u| self.step(u)).collect()
    }

    /// Applies `u` for `count` consecutive steps.
    pub fn hold(&mut self, u: &InputVector, count: u32) -> Result<Vec<StepTrace>> {
        u.check_width(self.m)?;
        (0..count).map(|_| self.step(u)).collect()
    }
}
