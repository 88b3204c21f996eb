//! Brute-force reference implementations.
//!
//! Nothing here reuses the evaluation, support, or streak code of the main
//! modules: the windowed gate keeps the literal last-`s` history, and truth
//! tables come from a separate recursive evaluator over the raw state list.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::analysis::TargetFunction;
use crate::error::{Error, Result};
use crate::gate::GateState;
use crate::network::{Network, StateVector};

/// Largest `m` for which truth tables are built (`2^16` rows).
pub const MAX_TABLE_LAYERS: usize = 4;
/// Largest `m` enumerated by [`enumerate_feasible`] without opting in.
pub const MAX_ATLAS_LAYERS: usize = 3;

/// A gate that remembers its last `s` (state, input) pairs and applies the
/// conditioning rule by inspecting that window directly: the gate becomes OR
/// at `t+1` if it was YES at `t-s+1` and the inputs at `t-s+1..=t` were all
/// `(1,1)`, and becomes YES if it was OR at `t-s+1` and they were all `(0,1)`.
/// Until `s` steps have been observed there is no window and nothing flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowedGate {
    pub state: GateState,
    history: VecDeque<(GateState, bool, bool)>,
}

impl WindowedGate {
    pub fn new(state: GateState) -> Self {
        WindowedGate {
            state,
            history: VecDeque::new(),
        }
    }

    /// Restarts observation with a given window (oldest first).
    pub fn with_history(state: GateState, history: Vec<(GateState, bool, bool)>) -> Self {
        WindowedGate {
            state,
            history: history.into(),
        }
    }

    pub fn step(&mut self, v: bool, w: bool, s: u32) -> bool {
        assert!(s >= 1);
        let y = match self.state {
            GateState::Yes => v,
            GateState::Or => v | w,
        };
        self.history.push_back((self.state, v, w));
        while self.history.len() > s as usize {
            self.history.pop_front();
        }
        if self.history.len() == s as usize {
            let (oldest, _, _) = self.history[0];
            let all = |pv: bool, pw: bool| self.history.iter().all(|&(_, a, b)| a == pv && b == pw);
            if oldest == GateState::Yes && all(true, true) {
                self.state = GateState::Or;
            } else if oldest == GateState::Or && all(false, true) {
                self.state = GateState::Yes;
            }
        }
        y
    }
}

/// Free-function form of [`WindowedGate::step`].
pub fn windowed_gate_step(gate: &WindowedGate, v: bool, w: bool, s: u32) -> (bool, WindowedGate) {
    let mut next = gate.clone();
    let y = next.step(v, w, s);
    (y, next)
}

/// Output of the frozen network for every input vector. Row `k` holds the
/// output for the input whose bit `b` is bit `b` of `k` (bit 0 = `v11`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub m: usize,
    pub outputs: Vec<bool>,
}

fn naive_output(states: &[GateState], m: usize, layer: usize, pos: usize, bits: u64) -> bool {
    let mut offset = 0;
    for i in 1..layer {
        offset += 1 << (m - i);
    }
    let state = states[offset + pos - 1];
    let (v, w) = if layer == 1 {
        (bits >> (2 * (pos - 1)) & 1 == 1, bits >> (2 * pos - 1) & 1 == 1)
    } else {
        (
            naive_output(states, m, layer - 1, 2 * pos - 1, bits),
            naive_output(states, m, layer - 1, 2 * pos, bits),
        )
    };
    match state {
        GateState::Yes => v,
        GateState::Or => v || w,
    }
}

fn table_for(states: &[GateState], m: usize) -> TruthTable {
    let rows = 1u64 << (1u64 << m);
    TruthTable {
        m,
        outputs: (0..rows).map(|k| naive_output(states, m, m, 1, k)).collect(),
    }
}

/// Exhaustive input/output table of `net` under its current state.
pub fn truth_table(net: &Network) -> Result<TruthTable> {
    truth_table_of(&net.state())
}

pub fn truth_table_of(x: &StateVector) -> Result<TruthTable> {
    if x.m() > MAX_TABLE_LAYERS {
        return Err(Error::TooLarge {
            m: x.m(),
            max: MAX_TABLE_LAYERS,
        });
    }
    Ok(table_for(x.states(), x.m()))
}

impl TruthTable {
    /// Builds the table of an arbitrary function of the input bits.
    pub fn from_fn(m: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        if m == 0 || m > MAX_TABLE_LAYERS {
            return Err(Error::TooLarge {
                m,
                max: MAX_TABLE_LAYERS,
            });
        }
        let width = 1usize << m;
        let outputs = (0..1u64 << width)
            .map(|k| {
                let bits: Vec<bool> = (0..width).map(|b| k >> b & 1 == 1).collect();
                f(&bits)
            })
            .collect();
        Ok(TruthTable { m, outputs })
    }

    pub fn width(&self) -> usize {
        1 << self.m
    }

    pub fn get(&self, row: usize) -> bool {
        self.outputs[row]
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.outputs.len()).all(|row| {
            (0..self.width()).all(|b| !self.outputs[row] || self.outputs[row | 1 << b])
        })
    }

    /// If the table is a disjunction of single input bits, returns them as
    /// `(J1, J2)`; the disjuncts are exactly the bits whose unit vector gives 1.
    pub fn disjunctive_support(&self) -> Option<TargetFunction> {
        let positions: Vec<usize> = (0..self.width()).filter(|&b| self.outputs[1 << b]).collect();
        let mask: usize = positions.iter().map(|b| 1 << b).sum();
        let is_disjunction = (0..self.outputs.len()).all(|row| self.outputs[row] == (row & mask != 0));
        is_disjunction.then(|| {
            TargetFunction::new(
                positions.iter().filter(|b| *b % 2 == 0).map(|b| b / 2 + 1),
                positions.iter().filter(|b| *b % 2 == 1).map(|b| b.div_ceil(2)),
            )
        })
    }

    /// Row-by-row comparison with the disjunction named by `f`.
    pub fn equals_function(&self, f: &TargetFunction) -> bool {
        let width = self.width();
        (0..self.outputs.len()).all(|row| {
            let hit = f.j1.iter().any(|j| row >> (2 * (j - 1)) & 1 == 1)
                || f.j2.iter().any(|j| row >> (2 * j - 1) & 1 == 1);
            debug_assert!(f.j1.iter().chain(&f.j2).all(|j| 2 * j <= width));
            self.outputs[row] == hit
        })
    }
}

/// Every state of `Σ(m)` grouped by the function it realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityAtlas {
    pub m: usize,
    pub entries: BTreeMap<TargetFunction, Vec<StateVector>>,
}

impl FeasibilityAtlas {
    pub fn contains(&self, f: &TargetFunction) -> bool {
        self.entries.contains_key(f)
    }

    pub fn states(&self, f: &TargetFunction) -> &[StateVector] {
        self.entries.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn functions(&self) -> impl Iterator<Item = &TargetFunction> {
        self.entries.keys()
    }

    pub fn state_count(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }
}

/// Enumerates all `2^(2^m - 1)` states and keys them by truth-table support.
/// `m = 4` is refused unless `allow_m4` is set (2^15 states × 2^16 rows).
pub fn enumerate_feasible(m: usize, allow_m4: bool) -> Result<FeasibilityAtlas> {
    let max = if allow_m4 { MAX_TABLE_LAYERS } else { MAX_ATLAS_LAYERS };
    if m == 0 {
        return Err(Error::InvalidLayerCount(m));
    }
    if m > max {
        return Err(Error::TooLarge { m, max });
    }
    let keyed: Vec<(TargetFunction, StateVector)> = StateVector::all(m)?
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            let table = table_for(x.states(), m);
            assert!(table.is_monotone(), "non-monotone table for {x}");
            let f = table
                .disjunctive_support()
                .unwrap_or_else(|| panic!("state {x} does not realize a disjunction"));
            (f, x)
        })
        .collect();
    let mut entries: BTreeMap<TargetFunction, Vec<StateVector>> = BTreeMap::new();
    for (f, x) in keyed {
        entries.entry(f).or_default().push(x);
    }
    for states in entries.values_mut() {
        states.sort();
    }
    Ok(FeasibilityAtlas { m, entries })
}
