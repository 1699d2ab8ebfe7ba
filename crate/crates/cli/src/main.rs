//! `qmem`: storage-capacity calculations for quantum memories.

mod config;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qmem_core::bounds::{self, HullMode, LogBase};
use qmem_core::classical::{self, ClassicalBoundPoint, Variant};
use qmem_core::codes::{self, CssCode, DistanceSector, DEFAULT_DISTANCE_BUDGET};
use qmem_core::decoder_time;
use qmem_core::model::{self, ExpanderFamilyConstants};
use qmem_core::reproduce;
use qmem_core::sim::{self, SimConfig};

use config::{read_json, BbFile, CodeFile, OptimizerFile};
use error::CliError;

#[derive(Parser)]
#[command(name = "qmem", version, about = "Storage capacity of LDPC-protected quantum memories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and export CSS codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Complexity accounting and logical-error bounds.
    #[command(subcommand)]
    Memory(MemoryCommand),
    /// Converse bounds on storage capacity.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Decoder-time constrained optimization.
    #[command(subcommand)]
    Optimize(OptimizeCommand),
    /// Classical storage-capacity bounds.
    #[command(subcommand)]
    Classical(ClassicalCommand),
    /// Monte Carlo of repeated wait–refresh cycles on a small code.
    Simulate(SimulateArgs),
    /// Write plot tables as CSV.
    #[command(subcommand)]
    Emit(EmitCommand),
    /// Recompute published numbers and compare against stored tolerances.
    #[command(subcommand)]
    Reproduce(ReproduceCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hgp,
    Bb,
}

#[derive(Args)]
struct CodeSpec {
    #[arg(long, value_enum)]
    family: Family,
    /// Inline classical check matrix for `hgp`, rows separated by ',' or ';'.
    #[arg(long)]
    h: Option<String>,
    /// JSON parameter file: `{"h": "11"}` for hgp, `{"l", "m", "a", "b"}` for bb.
    /// Without it, bb builds the [[144,12,12]] instance.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Largest kernel dimension searched when certifying the distance.
    #[arg(long, default_value_t = DEFAULT_DISTANCE_BUDGET)]
    distance_budget: usize,
    /// Certify both X and Z distances instead of X only.
    #[arg(long)]
    both_sectors: bool,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Print the check matrices and parameter certificate as JSON.
    Build(CodeSpec),
    /// Write `h_x.txt`, `h_z.txt` and `certificate.json` into a directory.
    Export {
        #[command(flatten)]
        spec: CodeSpec,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MemoryFamily {
    /// Quantum expander (hypergraph product of biregular graphs).
    Expander,
    Bb,
}

#[derive(Args)]
struct ExpanderArgs {
    #[arg(long, default_value_t = 7)]
    d_a: u64,
    #[arg(long, default_value_t = 8)]
    d_b: u64,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1e-5)]
    delta: f64,
}

impl ExpanderArgs {
    fn constants(&self) -> Result<ExpanderFamilyConstants, CliError> {
        Ok(ExpanderFamilyConstants::new(
            self.d_a as f64,
            self.d_b as f64,
            self.gamma,
            self.delta,
        )?)
    }
}

#[derive(Subcommand)]
enum MemoryCommand {
    /// Component counts, complexity and storage rate.
    Rate {
        #[arg(long, value_enum)]
        family: MemoryFamily,
        #[command(flatten)]
        expander: ExpanderArgs,
        /// Expander block sizes; the smallest consistent pair by default.
        #[arg(long)]
        n_a: Option<u64>,
        #[arg(long)]
        n_b: Option<u64>,
        /// Bivariate bicycle block length and logical qubits.
        #[arg(long, default_value_t = 144)]
        n: u64,
        #[arg(long, default_value_t = 12)]
        k: u64,
    },
    /// Error-correction threshold of an expander family.
    Threshold {
        #[command(flatten)]
        expander: ExpanderArgs,
    },
    /// Logical error probability per cycle (and over a storage period).
    Pe {
        #[arg(long, value_enum)]
        family: MemoryFamily,
        #[command(flatten)]
        expander: ExpanderArgs,
        /// Physical qubits (expander).
        #[arg(long)]
        n: Option<f64>,
        /// Physical noise per cycle.
        #[arg(long)]
        p: f64,
        /// Residual noise from the previous correction (expander).
        #[arg(long, conflicts_with = "q")]
        p_r: Option<f64>,
        /// Syndrome noise; sets the residual noise through `K q^(1/c0)`.
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = model::DEFAULT_RESIDUAL_CONSTANT)]
        k_const: f64,
        /// Circuit distance (bb).
        #[arg(long, default_value_t = 10)]
        d_circ: u32,
        /// Storage period and cycle time for the union bound over cycles.
        #[arg(long, requires = "tau_ns")]
        total_time_us: Option<f64>,
        #[arg(long)]
        tau_ns: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Pointwise,
    Envelope,
}

impl Mode {
    fn hull(self) -> HullMode {
        match self {
            Mode::Pointwise => HullMode::PointwiseMin,
            Mode::Envelope => HullMode::envelope(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Two,
    Natural,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Two => LogBase::Two,
            Base::Natural => LogBase::Natural,
        }
    }
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Depolarizing capacity bound, tightened by ζ-noisy measurements when `--zeta` is given.
    Upper {
        #[arg(long)]
        p_tilde: f64,
        #[arg(long)]
        zeta: Option<f64>,
        #[arg(long, value_enum, default_value = "pointwise")]
        mode: Mode,
    },
    /// Finite-blocklength bound.
    SecondOrder {
        #[arg(long)]
        p_tilde: f64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value = "pointwise")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "two")]
        log_base: Base,
    },
    /// One-shot converse from a capacity bound.
    OneShot {
        #[arg(long)]
        q_cap: f64,
        #[arg(long)]
        n: f64,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum OptimizeCommand {
    /// Best code size under a decoding-time budget.
    DecoderTime {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Include the scan trace and refinement brackets.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    New,
    Old,
    Both,
}

#[derive(Subcommand)]
enum ClassicalCommand {
    /// Upper bound for gate noise `alpha`.
    Ub {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "both")]
        variant: VariantArg,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON file with `h_x` and `h_z` matrix strings (as written by `code build`).
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    p_tilde: f64,
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    #[arg(long, default_value_t = 1)]
    cycles: u32,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum EmitCommand {
    /// Objective contours and constraint curve of the decoder-time problem.
    Fig2 {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Contour table: n, tau_ns, q_so.
        #[arg(long)]
        out: PathBuf,
        /// Constraint curve: n, tau_ns. Defaults to `<out>` with a `-constraint` suffix.
        #[arg(long)]
        constraint_out: Option<PathBuf>,
    },
    /// Old and new classical bounds over the gate noise.
    Fig3 {
        #[arg(long, default_value_t = 500)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReproduceCommand {
    /// Storage rates, threshold, converse bounds and decoder-time optimum.
    Section7 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn build_code(spec: &CodeSpec) -> Result<CssCode, CliError> {
    let sector = if spec.both_sectors {
        DistanceSector::Both
    } else {
        DistanceSector::X
    };
    match spec.family {
        Family::Hgp => {
            let h = match (&spec.h, &spec.params) {
                (Some(inline), None) => config::parse_inline_matrix(inline)?,
                (None, Some(path)) => {
                    let file: HgpFile = read_json(path)?;
                    config::parse_inline_matrix(&file.h)?
                }
                _ => return Err(CliError::Validation("hgp needs exactly one of --h or --params".into())),
            };
            let mut code = codes::hypergraph_product(&h)?;
            code.d_min = codes::min_distance_sector(&code, spec.distance_budget, sector);
            Ok(code)
        }
        Family::Bb => {
            let Some(path) = &spec.params else {
                return Ok(codes::gross_code()?);
            };
            let file: BbFile = read_json(path)?;
            let a = config::parse_polynomial(&file.a)?;
            let b = config::parse_polynomial(&file.b)?;
            let gross = codes::gross_code()?;
            let mut code = codes::bb_code(file.l, file.m, &a, &b)?;
            if code.h_x == gross.h_x && code.h_z == gross.h_z {
                return Ok(gross);
            }
            code.d_min = codes::min_distance_sector(&code, spec.distance_budget, sector);
            Ok(code)
        }
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct HgpFile {
    h: String,
}

#[derive(Serialize)]
struct RateReport {
    #[serde(flatten)]
    breakdown: model::ComplexityBreakdown,
    gate_count: u64,
    chi: u64,
    storage_rate: f64,
    overhead: f64,
}

impl From<model::ComplexityBreakdown> for RateReport {
    fn from(b: model::ComplexityBreakdown) -> Self {
        Self {
            gate_count: b.gate_count(),
            chi: b.chi(),
            storage_rate: b.storage_rate(),
            overhead: b.overhead(),
            breakdown: b,
        }
    }
}

#[derive(Serialize)]
struct PeReport {
    log10_pe: f64,
    flags: Vec<model::BoundFlag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycles: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    log10_pe_total: Option<f64>,
}

fn run_memory(cmd: MemoryCommand) -> Result<(), CliError> {
    match cmd {
        MemoryCommand::Rate {
            family,
            expander,
            n_a,
            n_b,
            n,
            k,
        } => {
            let breakdown = match family {
                MemoryFamily::Expander => {
                    let (da, db) = (expander.d_a, expander.d_b);
                    let (min_a, min_b) = model::minimal_block_sizes(da, db);
                    model::expander_complexity(n_a.unwrap_or(min_a), n_b.unwrap_or(min_b), da, db)?
                }
                MemoryFamily::Bb => model::bb_complexity(n, k)?,
            };
            print_json(&RateReport::from(breakdown))
        }
        MemoryCommand::Threshold { expander } => print_json(&model::expander_threshold(&expander.constants()?)?),
        MemoryCommand::Pe {
            family,
            expander,
            n,
            p,
            p_r,
            q,
            k_const,
            d_circ,
            total_time_us,
            tau_ns,
        } => {
            let (bound, p_r) = match family {
                MemoryFamily::Expander => {
                    let n = n.ok_or_else(|| CliError::Validation("expander pe needs --n".into()))?;
                    let consts = expander.constants()?;
                    let p_r = match (p_r, q) {
                        (Some(v), _) => v,
                        (None, Some(q)) => model::residual_noise(q, &consts, k_const)?,
                        (None, None) => 0.0,
                    };
                    (model::expander_logical_error(n, p, p_r, &consts)?, Some(p_r))
                }
                MemoryFamily::Bb => {
                    let pl = model::bb_logical_error(p, d_circ)?;
                    (
                        model::LogBound {
                            log10_pe: pl.log10(),
                            flags: Vec::new(),
                        },
                        None,
                    )
                }
            };
            let (cycles, total) = match (total_time_us, tau_ns) {
                (Some(t), Some(tau)) => {
                    let (t, tau) = (t * 1e-6, tau * 1e-9);
                    (
                        Some(model::cycle_count(t, tau)),
                        Some(model::multi_cycle_error(bound.log10_pe, t, tau)?),
                    )
                }
                _ => (None, None),
            };
            print_json(&PeReport {
                log10_pe: bound.log10_pe,
                flags: bound.flags,
                p_r,
                cycles,
                log10_pe_total: total,
            })
        }
    }
}

fn run_bounds(cmd: BoundsCommand) -> Result<(), CliError> {
    let result = match cmd {
        BoundsCommand::Upper { p_tilde, zeta, mode } => match zeta {
            Some(z) => bounds::depolarizing_dissipation_ub(p_tilde, z, mode.hull())?,
            None => bounds::depolarizing_capacity_ub(p_tilde, mode.hull())?,
        },
        BoundsCommand::SecondOrder {
            p_tilde,
            n,
            eps,
            mode,
            log_base,
        } => bounds::second_order_bound(p_tilde, n, eps, mode.hull(), log_base.into())?,
        BoundsCommand::OneShot { q_cap, n, eps } => bounds::one_shot_bound(q_cap, n, eps)?,
    };
    print_json(&result)
}

fn load_optimizer(path: &Option<PathBuf>) -> Result<OptimizerFile, CliError> {
    match path {
        Some(p) => read_json(p),
        None => Ok(OptimizerFile::default()),
    }
}

#[derive(Serialize)]
struct OptimizeReport {
    n_star: f64,
    tau_star_ns: f64,
    q_star: f64,
    p_tilde_star: f64,
    n_continuous: f64,
    ln_n_max: f64,
    n_max_unbounded: bool,
    flags: Vec<decoder_time::OptimizerFlag>,
    config: config::ConfigNotes,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<decoder_time::TracePoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Vec<qmem_core::search::Bracket>>,
}

fn run_optimize(cmd: OptimizeCommand) -> Result<(), CliError> {
    let OptimizeCommand::DecoderTime { config, trace } = cmd;
    let (cfg, notes) = load_optimizer(&config)?.resolve();
    let r = decoder_time::optimize(&cfg)?;
    print_json(&OptimizeReport {
        n_star: r.n_star,
        tau_star_ns: r.tau_star * 1e9,
        q_star: r.q_star,
        p_tilde_star: r.p_tilde_star,
        n_continuous: r.n_continuous,
        ln_n_max: r.limit.ln_n_max,
        n_max_unbounded: r.limit.unbounded,
        flags: r.flags,
        config: notes,
        trace: trace.then_some(r.trace),
        certificate: trace.then_some(r.certificate),
    })
}

#[derive(Serialize)]
struct ClassicalReport {
    alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ub_new: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ub_old: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_h_star: Option<f64>,
}

fn run_classical(cmd: ClassicalCommand) -> Result<(), CliError> {
    let ClassicalCommand::Ub { alpha, variant } = cmd;
    let new = matches!(variant, VariantArg::New | VariantArg::Both);
    let old = matches!(variant, VariantArg::Old | VariantArg::Both);
    let star = if new { Some(classical::delta_h_star(alpha)?) } else { None };
    print_json(&ClassicalReport {
        alpha,
        ub_new: if new { Some(classical::classical_ub(alpha, Variant::New)?) } else { None },
        ub_old: if old { Some(classical::classical_ub(alpha, Variant::Old)?) } else { None },
        p_star: star.map(|s| s.0),
        delta_h_star: star.map(|s| s.1),
    })
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let file: CodeFile = read_json(&args.code)?;
    let cfg = SimConfig {
        code: file.to_code()?,
        p_tilde: args.p_tilde,
        q: args.q,
        cycles: args.cycles,
        trials: args.trials,
        seed: args.seed,
    };
    print_json(&sim::simulate(&cfg)?)
}

#[derive(Serialize)]
struct ContourRow {
    n: f64,
    tau_ns: f64,
    q_so: f64,
}

#[derive(Serialize)]
struct ConstraintRow {
    n: f64,
    tau_ns: f64,
}

#[derive(Serialize)]
struct Fig3Row {
    alpha: f64,
    ub_old: f64,
    ub_new: f64,
    gap: f64,
    p_star: f64,
    delta_h_star: f64,
}

impl From<ClassicalBoundPoint> for Fig3Row {
    fn from(p: ClassicalBoundPoint) -> Self {
        Self {
            alpha: p.alpha,
            ub_old: p.ub_old,
            ub_new: p.ub_new,
            gap: p.gap(),
            p_star: p.p_star,
            delta_h_star: p.delta_h_star,
        }
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn constraint_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("fig2");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}-constraint.{ext}"))
}

fn run_emit(cmd: EmitCommand) -> Result<(), CliError> {
    match cmd {
        EmitCommand::Fig2 {
            config,
            out,
            constraint_out,
        } => {
            let file = load_optimizer(&config)?;
            let (cfg, _) = file.resolve();
            let c = file.contour.clone().unwrap_or_default();
            let table = decoder_time::contour_grid(
                &cfg,
                (c.n_min, c.n_max),
                (c.tau_min_ns * 1e-9, c.tau_max_ns * 1e-9),
                (c.n_points, c.tau_points),
            )?;
            write_csv(
                &out,
                table.cells.iter().map(|cell| ContourRow {
                    n: cell.n,
                    tau_ns: cell.tau * 1e9,
                    q_so: cell.q_so,
                }),
            )?;
            let constraint = constraint_out.unwrap_or_else(|| constraint_path(&out));
            write_csv(
                &constraint,
                table.constraint.iter().map(|p| ConstraintRow {
                    n: p.n,
                    tau_ns: p.tau * 1e9,
                }),
            )
        }
        EmitCommand::Fig3 { grid, out } => {
            let rows = classical::figure3_data(grid)?;
            write_csv(&out, rows.into_iter().map(Fig3Row::from))
        }
    }
}

fn run_reproduce(cmd: ReproduceCommand) -> Result<(), CliError> {
    let ReproduceCommand::Section7 { out } = cmd;
    let report = reproduce::headline_numbers(&decoder_time::OptimizerConfig::default());
    match out {
        Some(path) => write_file(&path, &serde_json::to_string_pretty(&report)?)?,
        None => print_json(&report)?,
    }
    if report.all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(CliError::Infeasible(format!("outside tolerance: {}", failed.join(", "))))
    }
}

fn run_code(cmd: CodeCommand) -> Result<(), CliError> {
    match cmd {
        CodeCommand::Build(spec) => print_json(&CodeFile::from_code(&build_code(&spec)?)),
        CodeCommand::Export { spec, out } => {
            let code = build_code(&spec)?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
            write_file(&out.join("h_x.txt"), &code.h_x.to_string())?;
            write_file(&out.join("h_z.txt"), &code.h_z.to_string())?;
            write_file(
                &out.join("certificate.json"),
                &serde_json::to_string_pretty(&code.certificate())?,
            )?;
            write_file(
                &out.join("code.json"),
                &serde_json::to_string_pretty(&CodeFile::from_code(&code))?,
            )
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QMEM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Validation(format!("QMEM_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(CliError::validation)
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Code(c) => run_code(c),
        Command::Memory(c) => run_memory(c),
        Command::Bounds(c) => run_bounds(c),
        Command::Optimize(c) => run_optimize(c),
        Command::Classical(c) => run_classical(c),
        Command::Simulate(a) => run_simulate(a),
        Command::Emit(c) => run_emit(c),
        Command::Reproduce(c) => run_reproduce(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qmem: {e}");
            e.exit_code()
        }
    }
}
