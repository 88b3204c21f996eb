//! On-disk formats: network configs, targets, trace streams, plans, and atlas
//! reports. Everything is JSON (traces are one JSON object per line) and
//! carries a `format_version` field.

use serde::{Deserialize, Serialize};

use crate::analysis::{support, TargetFunction};
use crate::error::{Error, Result};
use crate::gate::{GateState, UnitTime};
use crate::network::{InputVector, Network, NodeId, StateVector, StepTrace};
use crate::oracle::FeasibilityAtlas;
use crate::training::{FlipDirective, TrainingPlan};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(found: u32, what: &'static str) -> Result<()> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::Parse {
            what,
            detail: format!("unsupported format_version {found} (expected {FORMAT_VERSION})"),
        })
    }
}

fn bit(b: bool) -> u8 {
    b as u8
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub format_version: u32,
    pub m: usize,
    pub s: u32,
    /// Gate states in lexicographic node order.
    pub initial_state: Vec<GateState>,
}

impl NetworkConfig {
    pub fn new(s: UnitTime, x: &StateVector) -> Self {
        NetworkConfig {
            format_version: FORMAT_VERSION,
            m: x.m(),
            s: s.get(),
            initial_state: x.states().to_vec(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: NetworkConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "network config",
            detail: e.to_string(),
        })?;
        check_version(cfg.format_version, "network config")?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        StateVector::new(self.m, self.initial_state.clone())
    }

    pub fn unit_time(&self) -> Result<UnitTime> {
        UnitTime::new(self.s)
    }

    pub fn network(&self) -> Result<Network> {
        Ok(Network::new(self.unit_time()?, &self.initial_state()?))
    }
}

/// Either a function `(J1, J2)` or an explicit target state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Function(TargetFunction),
    State(StateVector),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j1: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<GateState>>,
}

impl TargetFile {
    pub fn function(f: &TargetFunction) -> Self {
        TargetFile {
            format_version: FORMAT_VERSION,
            j1: Some(f.j1.iter().copied().collect()),
            j2: Some(f.j2.iter().copied().collect()),
            state: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Target> {
        let file: TargetFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "target",
            detail: e.to_string(),
        })?;
        check_version(file.format_version, "target")?;
        file.into_target()
    }

    pub fn into_target(self) -> Result<Target> {
        let bad = |detail: &str| Error::Parse {
            what: "target",
            detail: detail.to_string(),
        };
        match (self.j1, self.j2, self.state) {
            (None, None, Some(state)) => Ok(Target::State(StateVector::from_states(state)?)),
            (j1, j2, None) if j1.is_some() || j2.is_some() => {
                let j1 = j1.unwrap_or_default();
                let j2 = j2.unwrap_or_default();
                let f = TargetFunction::new(j1.iter().copied(), j2.iter().copied());
                if f.j1.len() != j1.len() || f.j2.len() != j2.len() {
                    return Err(bad("duplicate leaf index"));
                }
                Ok(Target::Function(f))
            }
            (_, _, Some(_)) => Err(bad("give either j1/j2 or state, not both")),
            _ => Err(bad("expected j1/j2 or state")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub i: usize,
    pub j: usize,
    pub v: u8,
    pub w: u8,
    pub y: u8,
    /// Pre-step state.
    pub x: GateState,
    pub acq: u32,
    pub ext: u32,
    /// Post-step state.
    pub x_next: GateState,
}

/// One line of a trace stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub format_version: u32,
    pub t: u64,
    pub input: Vec<u8>,
    pub nodes: Vec<NodeEntry>,
    pub y_m: u8,
}

impl From<&StepTrace> for TraceRecord {
    fn from(tr: &StepTrace) -> Self {
        TraceRecord {
            format_version: FORMAT_VERSION,
            t: tr.t,
            input: tr.input.to_u8s(),
            nodes: tr
                .nodes
                .iter()
                .map(|r| NodeEntry {
                    i: r.node.layer,
                    j: r.node.position,
                    v: bit(r.v),
                    w: bit(r.w),
                    y: bit(r.y),
                    x: r.state,
                    acq: r.acq,
                    ext: r.ext,
                    x_next: r.next,
                })
                .collect(),
            y_m: bit(tr.output),
        }
    }
}

/// Serializes traces as JSON lines.
pub fn write_trace(traces: &[StepTrace]) -> String {
    let mut out = String::new();
    for tr in traces {
        out.push_str(&serde_json::to_string(&TraceRecord::from(tr)).expect("trace serializes"));
        out.push('\n');
    }
    out
}

/// Parses a JSON-lines trace. Errors name the 1-based line.
pub fn read_trace(text: &str) -> Result<Vec<TraceRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            let rec: TraceRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
                what: "trace record",
                detail: format!("line {}: {e}", n + 1),
            })?;
            check_version(rec.format_version, "trace record")?;
            Ok(rec)
        })
        .collect()
}

/// Parses an input-sequence file: one vector per line, `#` comments and
/// blank lines ignored. Each vector must have `2^m` bits.
pub fn read_inputs(text: &str, m: usize) -> Result<Vec<InputVector>> {
    let mut inputs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::Parse {
            what: "input file",
            detail: format!("line {}: {e}", n + 1),
        };
        let u: InputVector = line.parse().map_err(at)?;
        u.check_width(m).map_err(at)?;
        inputs.push(u);
    }
    Ok(inputs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectiveRecord {
    pub node: NodeId,
    pub from_state: GateState,
    pub input: Vec<u8>,
    pub hold: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub format_version: u32,
    pub m: usize,
    pub s: u32,
    pub k_star: usize,
    #[serde(rename = "T")]
    pub total_steps: u64,
    pub directives: Vec<DirectiveRecord>,
}

impl From<&TrainingPlan> for PlanFile {
    fn from(p: &TrainingPlan) -> Self {
        PlanFile {
            format_version: FORMAT_VERSION,
            m: p.m,
            s: p.s.get(),
            k_star: p.k_star(),
            total_steps: p.duration(),
            directives: p
                .directives
                .iter()
                .map(|d| DirectiveRecord {
                    node: d.node,
                    from_state: d.from,
                    input: d.input.to_u8s(),
                    hold: d.hold,
                })
                .collect(),
        }
    }
}

impl PlanFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: PlanFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            what: "plan",
            detail: e.to_string(),
        })?;
        check_version(p.format_version, "plan")?;
        Ok(p)
    }

    /// Rebuilds the plan, checking the header counts and every directive.
    pub fn to_plan(&self) -> Result<TrainingPlan> {
        let s = UnitTime::new(self.s)?;
        let bad = |detail: String| Error::Parse { what: "plan", detail };
        let directives = self
            .directives
            .iter()
            .enumerate()
            .map(|(k, d)| {
                d.node.check(self.m)?;
                if d.hold != self.s {
                    return Err(bad(format!("directive {k}: hold {} differs from s = {}", d.hold, self.s)));
                }
                let input = InputVector::from_u8s(&d.input)?;
                input.check_width(self.m)?;
                Ok(FlipDirective {
                    node: d.node,
                    from: d.from_state,
                    input,
                    hold: d.hold,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let plan = TrainingPlan { m: self.m, s, directives };
        if plan.k_star() != self.k_star || plan.duration() != self.total_steps {
            return Err(bad(format!(
                "header says k*={} T={}, directives give k*={} T={}",
                self.k_star,
                self.total_steps,
                plan.k_star(),
                plan.duration()
            )));
        }
        Ok(plan)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    pub formula: String,
    pub states: Vec<Vec<GateState>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub format_version: u32,
    pub m: usize,
    pub state_count: usize,
    pub functions: Vec<AtlasEntry>,
}

impl From<&FeasibilityAtlas> for AtlasReport {
    fn from(atlas: &FeasibilityAtlas) -> Self {
        AtlasReport {
            format_version: FORMAT_VERSION,
            m: atlas.m,
            state_count: atlas.state_count(),
            functions: atlas
                .entries
                .iter()
                .map(|(f, states)| AtlasEntry {
                    j1: f.j1.iter().copied().collect(),
                    j2: f.j2.iter().copied().collect(),
                    formula: f.formula(),
                    states: states.iter().map(|x| x.states().to_vec()).collect(),
                })
                .collect(),
        }
    }
}

impl AtlasReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("atlas serializes") + "\n"
    }
}

/// Summary of a state for human-readable output.
pub fn describe(x: &StateVector) -> String {
    let f = support(x);
    format!("{x}  {f}  y = {}", f.formula())
}
