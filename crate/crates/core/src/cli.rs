//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards `argv` and the standard streams.
//!
//! Exit codes: 0 success, 1 usage/parse/I-O error, 2 infeasible target,
//! 3 verification mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{resolve, support, synthesize_target, Synthesis};
use crate::error::Error;
use crate::format::{
    describe, read_inputs, read_trace, write_trace, AtlasReport, NetworkConfig, PlanFile, Target, TargetFile,
    TraceRecord,
};
use crate::gate::UnitTime;
use crate::network::{node_count, nodes, InputVector, NodeId, StateVector};
use crate::oracle::{enumerate_feasible, truth_table_of, MAX_TABLE_LAYERS};
use crate::render::render_tree;
use crate::training::{check_flip, execute, plan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ccgates", version, about = "Simulate and train networks of classical conditioning gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an input sequence and write a trace
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Train the configured network toward a function or an explicit state
    Train {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the function (J1, J2) realized by a state
    Support {
        #[arg(long, required_unless_present = "state")]
        config: Option<PathBuf>,
        /// Explicit state, e.g. "YES,YES,OR,YES,OR,OR,YES"
        #[arg(long)]
        state: Option<String>,
        /// Also draw the tree
        #[arg(long)]
        tree: bool,
    },
    /// Synthesize a target state for a function
    Synth {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, required_unless_present = "m")]
        config: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
    },
    /// List every realizable function by exhaustive enumeration
    Feasible {
        #[arg(long)]
        m: usize,
        /// Permit m = 4 (2^15 states, slow)
        #[arg(long)]
        allow_m4: bool,
        /// Emit the machine-readable atlas report
        #[arg(long)]
        json: bool,
    },
    /// Recompute a stored trace and check plan postconditions
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
    },
    /// Sweep the single-node flipping property over initial states
    Check {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Sample this many random states instead of enumerating all
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TargetArgs {
    /// Target file with j1/j2 (function) or state
    #[arg(long)]
    target: Option<PathBuf>,
    /// Explicit target state, e.g. "YES,YES,OR,YES,YES,OR,YES"
    #[arg(long)]
    state: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Error(String),
    Infeasible(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Error(_) => EXIT_ERROR,
            Failure::Infeasible(_) => EXIT_INFEASIBLE,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Error(m) | Failure::Infeasible(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    let result = match cli.command {
        Command::Simulate { config, inputs, trace } => simulate(&config, &inputs, &trace, out),
        Command::Train {
            config,
            target,
            plan,
            trace,
        } => train(&config, &target, plan.as_deref(), trace.as_deref(), out),
        Command::Support { config, state, tree } => support_cmd(config.as_deref(), state.as_deref(), tree, out),
        Command::Synth { target, config, m } => synth(&target, config.as_deref(), m, out),
        Command::Feasible { m, allow_m4, json } => feasible(m, allow_m4, json, out),
        Command::Verify { config, trace, plan } => verify(&config, &trace, plan.as_deref(), out),
        Command::Check { m, s, samples, seed } => check(m, s, samples, seed, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path) -> Result<NetworkConfig, Failure> {
    let cfg = NetworkConfig::from_json(&read(path)?).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    cfg.network()
        .map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> CmdResult {
    writeln!(out, "{}", line.as_ref()).map_err(|e| Failure::Error(e.to_string()))
}

fn simulate(config: &Path, inputs: &Path, trace: &Path, out: &mut dyn Write) -> CmdResult {
    let cfg = load_config(config)?;
    let mut net = cfg.network()?;
    let inputs = read_inputs(&read(inputs)?, cfg.m).map_err(|e| Failure::Error(format!("{}: {e}", inputs.display())))?;
    let traces = net.run(&inputs)?;
    write_file(trace, &write_trace(&traces))?;
    say(out, format!("steps: {}", traces.len()))?;
    if let Some(last) = traces.last() {
        say(out, format!("last y_m: {}", last.output as u8))?;
    }
    say(out, format!("final state: {}", describe(&net.state())))
}

fn train(
    config: &Path,
    target: &TargetArgs,
    plan_path: Option<&Path>,
    trace_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let cfg = load_config(config)?;
    let mut net = cfg.network()?;
    let initial = net.state();
    let target = match (&target.target, &target.state) {
        (Some(path), _) => TargetFile::from_json(&read(path)?).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?,
        (None, Some(state)) => Target::State(state.parse()?),
        (None, None) => return Err(Failure::Error("a --target file or --state is required".into())),
    };
    let (x_star, expected) = match target {
        Target::Function(f) => match synthesize_target(&f, cfg.m)? {
            Synthesis::Feasible(t) => {
                say(out, format!("target pattern: {t}"))?;
                (resolve(&t, &initial)?, f)
            }
            Synthesis::Infeasible(obstruction) => {
                return Err(Failure::Infeasible(format!("target {f} is not realizable: {obstruction}")));
            }
        },
        Target::State(x) => {
            if x.m() != cfg.m {
                return Err(Failure::Error(format!(
                    "target state has {} nodes, network has {}",
                    x.states().len(),
                    node_count(cfg.m)
                )));
            }
            let f = support(&x);
            (x, f)
        }
    };
    say(out, format!("X* = {x_star}"))?;
    let p = plan(&net, &x_star)?;
    let traces = execute(&mut net, &p)?;
    let final_state = net.state();
    if final_state != x_star {
        return Err(Failure::Mismatch(format!("final state {final_state} differs from X* {x_star}")));
    }
    if cfg.m <= MAX_TABLE_LAYERS {
        let table = truth_table_of(&final_state)?;
        if !table.equals_function(&expected) {
            return Err(Failure::Mismatch(format!(
                "trained network does not realize {expected}; truth table gives {:?}",
                table.disjunctive_support()
            )));
        }
    } else if support(&final_state) != expected {
        return Err(Failure::Mismatch(format!("trained network does not realize {expected}")));
    }
    if let Some(path) = plan_path {
        write_file(path, &PlanFile::from(&p).to_json())?;
    }
    if let Some(path) = trace_path {
        write_file(path, &write_trace(&traces))?;
    }
    say(out, format!("k* = {}", p.k_star()))?;
    say(out, format!("T = {}", p.duration()))?;
    for d in &p.directives {
        say(out, format!("  flip {} from {}: input {} held {} steps", d.node, d.from, d.input, d.hold))?;
    }
    say(out, format!("realized: {expected}  y = {}", expected.formula()))?;
    if cfg.m <= MAX_TABLE_LAYERS {
        say(out, format!("verified against the full truth table ({} inputs)", 1u64 << (1u64 << cfg.m)))?;
    }
    Ok(())
}

fn support_cmd(config: Option<&Path>, state: Option<&str>, tree: bool, out: &mut dyn Write) -> CmdResult {
    let x = match (state, config) {
        (Some(s), _) => s.parse::<StateVector>()?,
        (None, Some(path)) => load_config(path)?.initial_state()?,
        (None, None) => return Err(Failure::Error("need --config or --state".into())),
    };
    let f = support(&x);
    say(out, f.to_string())?;
    say(out, format!("y = {}", f.formula()))?;
    if tree {
        write!(out, "{}", render_tree(&x)).map_err(|e| Failure::Error(e.to_string()))?;
    }
    Ok(())
}

fn synth(target: &Path, config: Option<&Path>, m: Option<usize>, out: &mut dyn Write) -> CmdResult {
    let cfg = config.map(load_config).transpose()?;
    let m = match (&cfg, m) {
        (Some(c), Some(m)) if c.m != m => {
            return Err(Failure::Error(format!("--m {m} disagrees with config m = {}", c.m)))
        }
        (Some(c), _) => c.m,
        (None, Some(m)) => m,
        (None, None) => return Err(Failure::Error("need --config or --m".into())),
    };
    let f = match TargetFile::from_json(&read(target)?).map_err(|e| Failure::Error(format!("{}: {e}", target.display())))? {
        Target::Function(f) => f,
        Target::State(_) => return Err(Failure::Error("synth needs a j1/j2 target, not a state".into())),
    };
    match synthesize_target(&f, m)? {
        Synthesis::Feasible(t) => {
            say(out, format!("X* = {t}"))?;
            if let Some(cfg) = cfg {
                let resolved = resolve(&t, &cfg.initial_state()?)?;
                say(out, format!("resolved against initial state: {resolved}"))?;
            }
            Ok(())
        }
        Synthesis::Infeasible(o) => Err(Failure::Infeasible(format!("target {f} is not realizable: {o}"))),
    }
}

fn feasible(m: usize, allow_m4: bool, json: bool, out: &mut dyn Write) -> CmdResult {
    let atlas = enumerate_feasible(m, allow_m4)?;
    if json {
        return write!(out, "{}", AtlasReport::from(&atlas).to_json()).map_err(|e| Failure::Error(e.to_string()));
    }
    say(
        out,
        format!(
            "{} realizable functions for m = {m} ({} states)",
            atlas.entries.len(),
            atlas.state_count()
        ),
    )?;
    for (f, states) in &atlas.entries {
        say(out, format!("{f}  y = {}  ({} states)", f.formula(), states.len()))?;
    }
    Ok(())
}

fn first_difference(stored: &TraceRecord, fresh: &TraceRecord) -> String {
    let t = fresh.t;
    if stored.input != fresh.input {
        return format!("step {t}: input differs");
    }
    if stored.nodes.len() != fresh.nodes.len() {
        return format!(
            "step {t}: {} node records stored, {} expected",
            stored.nodes.len(),
            fresh.nodes.len()
        );
    }
    for (a, b) in stored.nodes.iter().zip(&fresh.nodes) {
        let node = NodeId::new(b.i, b.j);
        let fields: [(&str, String, String); 9] = [
            ("i", a.i.to_string(), b.i.to_string()),
            ("j", a.j.to_string(), b.j.to_string()),
            ("v", a.v.to_string(), b.v.to_string()),
            ("w", a.w.to_string(), b.w.to_string()),
            ("y", a.y.to_string(), b.y.to_string()),
            ("x", a.x.to_string(), b.x.to_string()),
            ("acq", a.acq.to_string(), b.acq.to_string()),
            ("ext", a.ext.to_string(), b.ext.to_string()),
            ("x_next", a.x_next.to_string(), b.x_next.to_string()),
        ];
        if let Some((name, s, r)) = fields.into_iter().find(|(_, s, r)| s != r) {
            return format!("step {t}, node {node}: {name} stored {s}, recomputed {r}");
        }
    }
    format!("step {t}: y_m stored {}, recomputed {}", stored.y_m, fresh.y_m)
}

fn verify(config: &Path, trace: &Path, plan_path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let cfg = load_config(config)?;
    let records = read_trace(&read(trace)?).map_err(|e| Failure::Error(format!("{}: {e}", trace.display())))?;
    let mut net = cfg.network()?;
    let mut recomputed = Vec::with_capacity(records.len());
    for (k, rec) in records.iter().enumerate() {
        if rec.t != k as u64 {
            return Err(Failure::Mismatch(format!("record {k} has t = {}, expected {k}", rec.t)));
        }
        let u = InputVector::from_u8s(&rec.input).map_err(|e| Failure::Mismatch(format!("step {k}: {e}")))?;
        let step = net.step(&u).map_err(|e| Failure::Mismatch(format!("step {k}: {e}")))?;
        let fresh = TraceRecord::from(&step);
        if &fresh != rec {
            return Err(Failure::Mismatch(first_difference(rec, &fresh)));
        }
        recomputed.push(step);
    }
    let mut checks = vec![format!("{} steps recomputed", records.len())];

    if let Some(path) = plan_path {
        let p = PlanFile::from_json(&read(path)?)
            .and_then(|f| f.to_plan())
            .map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
        if p.m != cfg.m || p.s.get() != cfg.s {
            return Err(Failure::Mismatch(format!(
                "plan is for m={}, s={}; config has m={}, s={}",
                p.m, p.s, cfg.m, cfg.s
            )));
        }
        if p.duration() != records.len() as u64 {
            return Err(Failure::Mismatch(format!(
                "plan T = {} but trace has {} steps",
                p.duration(),
                records.len()
            )));
        }
        for (k, (u, tr)) in p.inputs().zip(&recomputed).enumerate() {
            if *u != tr.input {
                return Err(Failure::Mismatch(format!("step {k}: trace input differs from plan")));
            }
        }
        let hold = p.s.get() as usize;
        for (k, d) in p.directives.iter().enumerate() {
            let block = &recomputed[k * hold..(k + 1) * hold];
            let recs: Vec<_> = block.iter().filter_map(|tr| tr.record(d.node)).collect();
            let flips = recs.iter().filter(|r| r.state != r.next).count();
            let start = recs.first().map(|r| r.state);
            let last = recs.last().map(|r| (r.state, r.next));
            if start != Some(d.from) || last != Some((d.from, d.from.flipped())) || flips != 1 {
                return Err(Failure::Mismatch(format!(
                    "directive {k}: node {} did not flip exactly once from {} at the end of steps {}..{}",
                    d.node,
                    d.from,
                    k * hold,
                    (k + 1) * hold
                )));
            }
        }
        checks.push(format!("plan postconditions hold (k* = {}, T = {})", p.k_star(), p.duration()));
    }

    let final_state = net.state();
    let f = support(&final_state);
    if cfg.m <= MAX_TABLE_LAYERS {
        let table = truth_table_of(&final_state)?;
        if table.disjunctive_support().as_ref() != Some(&f) {
            return Err(Failure::Mismatch(format!(
                "final state {final_state}: structural support {f} disagrees with the truth table"
            )));
        }
        checks.push("final truth table matches".into());
    }
    say(out, format!("ok: {}", checks.join("; ")))?;
    say(out, format!("final state: {}", describe(&final_state)))
}

fn check(m: usize, s: u32, samples: Option<usize>, seed: u64, out: &mut dyn Write) -> CmdResult {
    let unit = UnitTime::new(s)?;
    crate::network::check_layers(m)?;
    if m > 10 {
        return Err(Failure::Error(format!("m = {m} is too large for a sweep (at most 10)")));
    }
    let exhaustive = samples.is_none() && m <= 3;
    let states: Vec<StateVector> = if exhaustive {
        StateVector::all(m)?.collect()
    } else {
        let count = samples.unwrap_or(4096);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = node_count(m);
        (0..count)
            .map(|_| {
                let code: u64 = rng.gen::<u64>() & ((1u64 << n) - 1);
                StateVector::from_code(m, code)
            })
            .collect::<crate::error::Result<_>>()?
    };
    let mut violations = 0usize;
    let mut first = None;
    for x in &states {
        for node in nodes(m) {
            if let Some(v) = check_flip(x, node, unit)? {
                violations += 1;
                first.get_or_insert((x.clone(), v));
            }
        }
    }
    let mode = if exhaustive { "exhaustive" } else { "sampled" };
    say(
        out,
        format!(
            "{mode}: {} states x {} nodes, s = {s}: {violations} violations",
            states.len(),
            node_count(m)
        ),
    )?;
    match first {
        None => Ok(()),
        Some((x, v)) => Err(Failure::Mismatch(format!(
            "flipping node {} from {x} left wrong states at {:?}",
            v.node, v.wrong
        ))),
    }
}

