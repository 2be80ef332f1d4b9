//! The `bbforge` command line: one JSON experiment config, five commands.

mod config;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

pub use config::{
    load_group, ExperimentConfig, GroupSource, InitialState, ModelSource, OutputSettings, PresetModel,
    SimulationSettings,
};

use crate::bb_synthesis::{synthesize, SynthesisResult};
use crate::error::{Error, Result};
use crate::json::{self, format_f64};
use crate::open_system::{bb_cycle_unitary, propagate, DensityMatrix, JointChannel, PulseGroup, SystemBathModel};
use crate::operator_algebra::build_pauli_basis;
use crate::optimizer::{learning_loop, measure_generator, write_records_csv, CostEvaluation, CostFunction};
use crate::tomography::{chi_from_lambda, run_qpt, ChiMatrix};

#[derive(Debug, Parser)]
#[command(name = "bbforge", version, about = "Bang-bang decoupling and gate synthesis from process tomography")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "X")]
    pub probe_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Reduced-state trajectory, free or under the configured pulse set.
    Simulate,
    /// χ-matrix of the free channel at the probe time.
    Tomography,
    /// Pulse set for the configured target from the measured generator.
    Synthesize,
    /// Cost of the configured pulse set against free evolution.
    Verify,
    /// Analysis chain followed by the genetic search.
    Optimize,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Unconverged,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INCONSISTENT: u8 = 3;
pub const EXIT_UNCONVERGED: u8 = 4;

pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Unconverged) => EXIT_UNCONVERGED,
        Err(Error::Config(_)) | Err(Error::Json(_)) => EXIT_CONFIG,
        Err(Error::Inconsistent { .. }) => EXIT_INCONSISTENT,
        Err(_) => EXIT_FAILURE,
    }
}

/// Caps the rayon pool at `BBFORGE_THREADS` when set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("BBFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("BBFORGE_THREADS must be a positive integer, got {v:?}")))?;
    // a pool that already exists is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Context {
    cfg: ExperimentConfig,
    model: SystemBathModel,
    out_dir: PathBuf,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self> {
        let path = cli
            .config
            .as_deref()
            .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
        let mut cfg = ExperimentConfig::load(path)?;
        if let Some(t) = cli.probe_time {
            cfg.probe_time = t;
        }
        if let Some(s) = cli.seed {
            cfg.seed = Some(s);
        }
        cfg.validate()?;
        let model = cfg.build_model()?;
        let out_dir = match (&cli.out, &cfg.outputs.dir) {
            (Some(d), _) => d.clone(),
            (None, Some(d)) if d.is_absolute() => d.clone(),
            (None, Some(d)) => cfg.base_dir.join(d),
            (None, None) => PathBuf::from("."),
        };
        fs::create_dir_all(&out_dir)?;
        Ok(Self { cfg, model, out_dir })
    }

    fn num_qubits(&self) -> Result<usize> {
        self.model
            .num_qubits()
            .ok_or_else(|| Error::Config("the model's system must be a register of qubits".into()))
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    init_threads()?;
    let ctx = Context::new(cli)?;
    match cli.command {
        Command::Simulate => simulate(&ctx),
        Command::Tomography => tomography(&ctx),
        Command::Synthesize => synthesize_cmd(&ctx),
        Command::Verify => verify(&ctx),
        Command::Optimize => optimize(&ctx),
    }
}

/// Trace distance of the reduced state to the initial one. Under a pulse
/// set the samples sit at whole cycles.
pub fn trajectory(
    model: &SystemBathModel,
    group: Option<&PulseGroup>,
    rho: &DensityMatrix,
    duration: f64,
    steps: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut rows = vec![(0.0, 0.0)];
    match group.filter(|g| !g.is_trivial()) {
        Some(g) => {
            let cycles = ((duration / g.cycle_time()) * (1.0 + 1e-12)).floor() as usize;
            let cycle = bb_cycle_unitary(model, g, 1)?;
            let mut u = cycle.clone();
            for k in 1..=cycles {
                if k > 1 {
                    u = &cycle * &u;
                }
                let out = JointChannel::new(model, u.clone())?.apply(rho.matrix());
                rows.push((k as f64 * g.cycle_time(), crate::linalg::trace_distance(&out, rho.matrix())));
            }
        }
        None => {
            for k in 1..=steps {
                let t = duration * k as f64 / steps as f64;
                let out = JointChannel::new(model, propagate(model, t)?)?.apply(rho.matrix());
                rows.push((t, crate::linalg::trace_distance(&out, rho.matrix())));
            }
        }
    }
    Ok(rows)
}

fn simulate(ctx: &Context) -> Result<Outcome> {
    let n = ctx.num_qubits()?;
    let rho = ctx.cfg.initial_state(n)?;
    let group = ctx.cfg.build_group()?;
    let sim = &ctx.cfg.simulation;
    let rows = trajectory(&ctx.model, group.as_ref(), &rho, sim.duration, sim.steps)?;
    let path = ctx.path("trajectory.csv");
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["time", "trace_distance"])?;
    for (t, d) in &rows {
        w.write_record([format_f64(*t), format_f64(*d)])?;
    }
    w.flush()?;
    let last = rows.last().expect("at least the initial row");
    println!("{} samples, trace distance {:.6e} at t = {:.6e}", rows.len(), last.1, last.0);
    println!("wrote {}", path.display());
    Ok(Outcome::Done)
}

/// χ of the free channel over `t`.
pub fn free_chi(model: &SystemBathModel, t: f64) -> Result<ChiMatrix> {
    let n = model
        .num_qubits()
        .ok_or_else(|| Error::Config("the model's system must be a register of qubits".into()))?;
    let ch = JointChannel::new(model, propagate(model, t)?)?;
    let data = run_qpt(|x| ch.apply(x), &build_pauli_basis(n)?)?.at_time(t);
    chi_from_lambda(&data)
}

fn tomography(ctx: &Context) -> Result<Outcome> {
    let chi = free_chi(&ctx.model, ctx.cfg.probe_time)?;
    let path = ctx.path("chi.json");
    json::write_file(&path, &chi)?;
    println!("chi at t = {:.6e}: chi_00 = {:.6e}", chi.time_tag, chi.entries[(0, 0)].re);
    for a in 1..chi.entries.nrows() {
        let v = chi.entries[(a, 0)].im;
        if v.abs() > 1e-12 {
            let label = crate::operator_algebra::PauliString::from_ordinal(chi.basis.num_qubits, a);
            println!("  Im chi[{label},0] = {v:.6e}");
        }
    }
    println!("wrote {}", path.display());
    Ok(Outcome::Done)
}

fn print_result(res: &SynthesisResult) {
    println!("method {}: |G| = {}, d = {:.3e}", res.method, res.group.len(), res.report.distance);
    match res.group.axis_angles() {
        Some(aas) => {
            for (k, aa) in aas.iter().enumerate() {
                println!(
                    "  g{k}: axis ({:.6}, {:.6}, {:.6}), angle {:.6}",
                    aa.axis[0], aa.axis[1], aa.axis[2], aa.angle
                );
            }
        }
        None => {
            for (k, r) in res.group.rotations().iter().enumerate() {
                println!("  g{k}: adjoint rotation of dimension {}", r.matrix.nrows());
            }
        }
    }
}

fn synthesize_cmd(ctx: &Context) -> Result<Outcome> {
    let gen = measure_generator(&ctx.model, &PulseGroup::trivial(ctx.model.system_dim(), ctx.cfg.probe_time)?, 1)?;
    let res = synthesize(&gen, &ctx.cfg.target, &ctx.cfg.synthesis)?;
    print_result(&res);
    let path = ctx.path("synthesis.json");
    json::write_file(&path, &res)?;
    println!("wrote {}", path.display());
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct Verification<'a> {
    group: &'a PulseGroup,
    free: CostEvaluation,
    decoupled: CostEvaluation,
    /// J under the pulse set over J without it.
    suppression: f64,
}

fn verify(ctx: &Context) -> Result<Outcome> {
    let group = ctx
        .cfg
        .build_group()?
        .ok_or_else(|| Error::Config("verify needs a `group` in the config".into()))?;
    let cost = CostFunction::new(ctx.model.clone(), ctx.cfg.target.clone(), ctx.cfg.cost.clone())?;
    let free = cost.evaluate(&PulseGroup::trivial(group.dim(), group.delta_t())?)?;
    let decoupled = cost.evaluate(&group)?;
    let suppression = if free.value > 0.0 { decoupled.value / free.value } else { 0.0 };
    println!(
        "|G| = {}: J = {:.6e} (free {:.6e}, ratio {:.3e})",
        group.len(),
        decoupled.value,
        free.value,
        suppression
    );
    let path = ctx.path("verify.json");
    json::write_file(
        &path,
        &Verification {
            group: &group,
            free,
            decoupled,
            suppression,
        },
    )?;
    println!("wrote {}", path.display());
    Ok(Outcome::Done)
}

fn optimize(ctx: &Context) -> Result<Outcome> {
    let mut loop_cfg = ctx.cfg.learning.clone().unwrap_or_default();
    if let Some(s) = ctx.cfg.seed {
        loop_cfg.seed = s;
    }
    let cost = CostFunction::new(ctx.model.clone(), ctx.cfg.target.clone(), ctx.cfg.cost.clone())?;
    let outcome = learning_loop(&cost, &loop_cfg)?;
    let csv_path = ctx.path("generations.csv");
    write_records_csv(&outcome.records, fs::File::create(&csv_path)?)?;
    let best_path = ctx.path("best.json");
    json::write_file(&best_path, &outcome)?;
    println!(
        "{} after {} generations: |G| = {}, J = {:.6e}",
        if outcome.converged { "converged" } else { "unconverged" },
        outcome.records.len(),
        outcome.best_group.len(),
        outcome.best_cost
    );
    println!("wrote {} and {}", csv_path.display(), best_path.display());
    Ok(if outcome.converged {
        Outcome::Done
    } else {
        Outcome::Unconverged
    })
}

/// Entry point of the binary: parses, runs and reports, returning the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = run(&cli);
    if let Err(e) = &result {
        eprintln!("bbforge: {e}");
    }
    exit_code(&result)
}
