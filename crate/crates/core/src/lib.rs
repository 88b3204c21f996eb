//! Binary-tree networks of classical conditioning gates.
//!
//! Each gate is a two-state machine acting as a logical YES or OR gate and
//! switching state when a conditioning stimulus is held for `s` steps. This
//! crate simulates such networks, reads off the Boolean function a state
//! realizes, synthesizes states for a requested function, and trains a
//! network toward a target state using external inputs only.
//!
//! ```
//! use ccgates::{analysis, training, Network, StateVector, TargetFunction, UnitTime};
//!
//! let x0: StateVector = "YES,YES,OR,YES,OR,OR,OR".parse().unwrap();
//! let mut net = Network::new(UnitTime::new(3).unwrap(), &x0);
//!
//! let f = TargetFunction::new([1, 3, 4], [3]);
//! let target = analysis::synthesize_target(&f, 3).unwrap().feasible().unwrap();
//! let x_star = analysis::resolve(&target, &net.state()).unwrap();
//!
//! let (plan, _traces) = training::train(&mut net, &x_star).unwrap();
//! assert_eq!(plan.duration(), 3);
//! assert_eq!(analysis::support(&net.state()), f);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod format;
pub mod gate;
pub mod network;
pub mod oracle;
pub mod render;
pub mod training;

pub use analysis::{support, synthesize_target, Synthesis, TargetFunction, TargetState};
pub use error::{Error, Result};
pub use gate::{gate_output, Gate, GateState, UnitTime};
pub use network::{input_blocks, InputVector, Network, NodeId, StateVector, StepTrace};
pub use training::{flip_input, FlipDirective, TrainingPlan};
