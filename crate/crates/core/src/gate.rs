//! A single classical conditioning gate.
//!
//! The gate behaves as a logical YES (output = first input) or a logical OR
//! depending on its state. Holding `(1, 1)` for `s` consecutive steps moves a
//! YES gate to OR (acquisition); holding `(0, 1)` for `s` consecutive steps
//! moves an OR gate back to YES (extinction).
//!
//! Instead of keeping the last `s` inputs around, a gate tracks how many
//! consecutive qualifying pairs it has seen in its current state. A qualifying
//! pair for one state never qualifies for the other, so the state is constant
//! over any qualifying run and the counters carry the same information as the
//! full window. [`crate::oracle::WindowedGate`] keeps the literal window for
//! cross-checking.

use std::fmt;
use std::num::NonZeroU32;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateState {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "OR")]
    Or,
}

impl GateState {
    pub const ALL: [GateState; 2] = [GateState::Yes, GateState::Or];

    pub fn flipped(self) -> Self {
        match self {
            GateState::Yes => GateState::Or,
            GateState::Or => GateState::Yes,
        }
    }

    /// The input pair that, held for `s` steps, moves a gate out of this state.
    pub fn training_pair(self) -> (bool, bool) {
        match self {
            GateState::Yes => (true, true),
            GateState::Or => (false, true),
        }
    }
}

impl fmt::Display for GateState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateState::Yes => "YES",
            GateState::Or => "OR",
        })
    }
}

impl FromStr for GateState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "YES" | "yes" | "Yes" => Ok(GateState::Yes),
            "OR" | "or" | "Or" => Ok(GateState::Or),
            other => Err(Error::Parse {
                what: "gate state",
                detail: format!("expected YES or OR, got {other:?}"),
            }),
        }
    }
}

/// Combinational output of a gate in the given state.
pub fn gate_output(state: GateState, v: bool, w: bool) -> bool {
    match state {
        GateState::Yes => v,
        GateState::Or => v || w,
    }
}

/// Unit training time: the number of consecutive qualifying steps needed to
/// flip a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct UnitTime(NonZeroU32);

impl UnitTime {
    pub fn new(s: u32) -> Result<Self> {
        NonZeroU32::new(s)
            .map(UnitTime)
            .ok_or(Error::InvalidUnitTime(s))
    }

    pub fn get(self) -> u32 {
        self.0.get()
    }
}

impl TryFrom<u32> for UnitTime {
    type Error = Error;

    fn try_from(s: u32) -> Result<Self> {
        UnitTime::new(s)
    }
}

impl From<UnitTime> for u32 {
    fn from(s: UnitTime) -> u32 {
        s.get()
    }
}

impl fmt::Display for UnitTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A gate together with its acquisition/extinction streak counters.
///
/// Between steps both counters are `< s`, at most one of them is nonzero, and
/// a nonzero `acq_streak` (resp. `ext_streak`) implies state YES (resp. OR).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub(crate) state: GateState,
    pub(crate) acq_streak: u32,
    pub(crate) ext_streak: u32,
}

impl Gate {
    pub fn new(state: GateState) -> Self {
        Gate {
            state,
            acq_streak: 0,
            ext_streak: 0,
        }
    }

    pub fn state(&self) -> GateState {
        self.state
    }

    pub fn acq_streak(&self) -> u32 {
        self.acq_streak
    }

    pub fn ext_streak(&self) -> u32 {
        self.ext_streak
    }

    pub fn output(&self, v: bool, w: bool) -> bool {
        gate_output(self.state, v, w)
    }

    /// Advance one time step. The returned output is computed from the
    /// pre-step state.
    pub fn step(self, v: bool, w: bool, s: UnitTime) -> (bool, Gate) {
        let y = self.output(v, w);
        let mut next = self;
        match (self.state, v, w) {
            (GateState::Yes, true, true) => {
                next.acq_streak += 1;
                next.ext_streak = 0;
            }
            (GateState::Or, false, true) => {
                next.ext_streak += 1;
                next.acq_streak = 0;
            }
            _ => {
                next.acq_streak = 0;
                next.ext_streak = 0;
            }
        }
        if next.acq_streak >= s.get() || next.ext_streak >= s.get() {
            next = Gate::new(self.state.flipped());
        }
        (y, next)
    }
}

/// Free-function form of [`Gate::step`].
pub fn gate_step(gate: Gate, v: bool, w: bool, s: UnitTime) -> (bool, Gate) {
    gate.step(v, w, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PAIRS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

    fn s(n: u32) -> UnitTime {
        UnitTime::new(n).unwrap()
    }

    fn check_invariants(g: &Gate, s: UnitTime) {
        assert!(g.acq_streak < s.get() && g.ext_streak < s.get());
        assert!(g.acq_streak == 0 || g.ext_streak == 0);
        if g.acq_streak > 0 {
            assert_eq!(g.state, GateState::Yes);
        }
        if g.ext_streak > 0 {
            assert_eq!(g.state, GateState::Or);
        }
    }

    #[test]
    fn truth_table_rows() {
        assert!(gate_output(GateState::Yes, true, false));
        assert!(!gate_output(GateState::Yes, false, true));
        assert!(gate_output(GateState::Or, false, true));
        assert!(!gate_output(GateState::Or, false, false));
        assert!(gate_output(GateState::Yes, true, true));
        assert!(gate_output(GateState::Or, true, true));
    }

    #[test]
    fn flip_is_involution() {
        for st in GateState::ALL {
            assert_ne!(st.flipped(), st);
            assert_eq!(st.flipped().flipped(), st);
        }
    }

    #[test]
    fn zero_unit_time_rejected() {
        assert!(matches!(UnitTime::new(0), Err(Error::InvalidUnitTime(0))));
    }

    #[test]
    fn acquisition_after_s_steps() {
        for n in 1..=4 {
            let mut g = Gate::new(GateState::Yes);
            for k in 0..n {
                assert_eq!(g.state, GateState::Yes, "flipped early at step {k}");
                let (y, next) = g.step(true, true, s(n));
                assert!(y);
                g = next;
            }
            assert_eq!(g.state, GateState::Or);
        }
    }

    #[test]
    fn extinction_after_s_steps() {
        for n in 1..=4 {
            let mut g = Gate::new(GateState::Or);
            for _ in 0..n {
                assert_eq!(g.state, GateState::Or);
                let (y, next) = g.step(false, true, s(n));
                assert!(y);
                g = next;
            }
            assert_eq!(g.state, GateState::Yes);
        }
    }

    #[test]
    fn broken_streak_does_not_flip() {
        let g = Gate::new(GateState::Yes);
        let (_, g) = g.step(true, true, s(3));
        let (_, g) = g.step(true, true, s(3));
        assert_eq!(g.acq_streak, 2);
        let (_, g) = g.step(false, false, s(3));
        assert_eq!(g, Gate::new(GateState::Yes));
    }

    #[test]
    fn holding_longer_does_not_flip_back() {
        for n in 1..=3 {
            for st in GateState::ALL {
                let (v, w) = st.training_pair();
                let mut g = Gate::new(st);
                for k in 1..=3 * n {
                    g = g.step(v, w, s(n)).1;
                    let expect = if k >= n { st.flipped() } else { st };
                    assert_eq!(g.state, expect, "s={n} from {st} after {k} steps");
                }
            }
        }
    }

    #[test]
    fn wrong_training_pair_never_flips() {
        for n in 1..=3 {
            for st in GateState::ALL {
                let (v, w) = st.flipped().training_pair();
                let mut g = Gate::new(st);
                for _ in 0..10 {
                    g = g.step(v, w, s(n)).1;
                    assert_eq!(g.state, st);
                }
            }
        }
    }

    #[test]
    fn step_output_matches_pre_step_state() {
        for st in GateState::ALL {
            for (v, w) in PAIRS {
                let (y, _) = Gate::new(st).step(v, w, s(1));
                assert_eq!(y, gate_output(st, v, w));
            }
        }
    }

    fn arb_gate(s: u32) -> impl Strategy<Value = Gate> {
        (any::<bool>(), 0..s).prop_map(|(yes, streak)| {
            if yes {
                Gate { state: GateState::Yes, acq_streak: streak, ext_streak: 0 }
            } else {
                Gate { state: GateState::Or, acq_streak: 0, ext_streak: streak }
            }
        })
    }

    proptest! {
        #[test]
        fn holding_inputs_preserve_state(g in arb_gate(5), inputs in prop::collection::vec(any::<bool>(), 1..20)) {
            let unit = s(5);
            let mut g = g;
            let state = g.state;
            for v in inputs {
                let (y, next) = g.step(v, false, unit);
                prop_assert_eq!(y, v);
                prop_assert_eq!(next, Gate::new(state));
                g = next;
            }
        }

        #[test]
        fn streak_invariants_hold(n in 1u32..5, inputs in prop::collection::vec(0usize..4, 0..40)) {
            let unit = s(n);
            let mut g = Gate::new(GateState::Yes);
            for i in inputs {
                let (v, w) = PAIRS[i];
                let pre = g.state;
                let (y, next) = g.step(v, w, unit);
                prop_assert_eq!(y, gate_output(pre, v, w));
                check_invariants(&next, unit);
                g = next;
            }
        }
    }
}
