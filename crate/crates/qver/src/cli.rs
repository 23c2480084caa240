//! Command-line surface: circuit generation, verification, benchmarks,
//! and the reference simulator.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{
    self, build_bell_circuit, build_fabric, build_kicked_ising, Circuit, FabricMode, GateKind,
    KickedIsingParams,
};
use crate::encode::{Condition, Dialect, SqrtHalfMode};
use crate::oracle;
use crate::smt::{
    self, bench_csv, bench_markdown, detect_solver_command, run_bench, run_solver, BenchItem,
    RenderOptions, SolverConfig, SolverVerdict,
};
use crate::vcgen::{
    self, make_compositional, make_fabric_prefix_vc, make_fabric_trig_vc, make_h4_hw_vc,
    make_monolithic, make_wp_chain, HoareTriple, VerificationCondition,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser)]
#[command(name = "qver", version, about = "SMT-backed quantum circuit verification")]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Directory for emitted files (SMT-LIB, reports, manifests).
    #[arg(long, global = true, default_value = "./qver-out")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a circuit JSON file for one of the built-in families.
    Generate(GenerateArgs),
    /// Check a Hoare triple over a circuit file.
    Verify(VerifyArgs),
    /// Run a benchmark suite and write results.csv / results.md.
    Bench(BenchArgs),
    /// Run the reference statevector simulator.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Subcommand)]
enum Family {
    /// Two-qubit H + CNOT circuit.
    Bell {
        #[arg(long, default_value = "bell.json")]
        out: PathBuf,
    },
    /// Brick-wall fabric of H(4) blocks.
    Fabric {
        #[arg(long, default_value_t = 6)]
        qubits: usize,
        #[arg(long, default_value_t = 4)]
        layers: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Abstract)]
        mode: ModeArg,
        /// Block angles; sampled from the seed when omitted.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "fabric.json")]
        out: PathBuf,
    },
    /// One Floquet period of the kicked Ising chain.
    KickedIsing {
        #[arg(short = 'L', long, default_value_t = 4)]
        sites: usize,
        /// Pulse parameter g (g = 1 is a perfect bit flip).
        #[arg(long, default_value_t = 1.0)]
        pulse: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "kicked-ising.json")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Abstract,
    Decomposed,
}

#[derive(Args)]
struct VerifyArgs {
    circuit: PathBuf,
    /// Precondition: `input-basis <bits>`, `subspace <bits,...>`, or `true`.
    #[arg(long, default_value = "true")]
    pre: String,
    /// Postcondition: `subspace <bits,...>`, `hw-preserved`, or `input-basis <bits>`.
    #[arg(long, required_unless_present = "post_raw")]
    post: Option<String>,
    /// Raw SMT-LIB term asserted (negated) as the postcondition.
    /// Passed through unchecked.
    #[arg(long, conflicts_with = "post")]
    post_raw: Option<String>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Monolithic)]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = DialectArg::Auto)]
    dialect: DialectArg,
    #[arg(long, value_enum, default_value_t = SqrtModeArg::Approx)]
    sqrt_mode: SqrtModeArg,
    /// Solver timeout in seconds.
    #[arg(long, default_value_t = 1800)]
    timeout: u64,
    /// Disable the nlsat tactic line for QF_NRA goals.
    #[arg(long)]
    no_nra_tactic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Monolithic,
    Compositional,
    Wp,
    Locality,
}

impl StrategyArg {
    fn name(&self) -> &'static str {
        match self {
            StrategyArg::Monolithic => "monolithic",
            StrategyArg::Compositional => "compositional",
            StrategyArg::Wp => "wp",
            StrategyArg::Locality => "locality",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Auto,
    Lra,
    Nra,
    Trig,
}

#[derive(Clone, Copy, ValueEnum)]
enum SqrtModeArg {
    /// r_half pinned to a 16-digit decimal; keeps formulas linear.
    Approx,
    /// 2 r^2 = 1, r > 0; exact but nonlinear.
    Exact,
}

impl SqrtModeArg {
    fn mode(&self) -> SqrtHalfMode {
        match self {
            SqrtModeArg::Approx => SqrtHalfMode::default(),
            SqrtModeArg::Exact => SqrtHalfMode::ExactVar,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "table1")]
    suite: String,
    /// Keep only rows whose name contains this substring.
    #[arg(long)]
    only: Option<String>,
    /// Solver timeout in seconds per call.
    #[arg(long, default_value_t = 1800)]
    timeout: u64,
    /// Repetitions per row (wall clock is averaged).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long)]
    no_nra_tactic: bool,
}

#[derive(Args)]
struct SimulateArgs {
    circuit: PathBuf,
    /// Input basis bitstring, qubit 0 leftmost.
    #[arg(long)]
    input: String,
    /// Also report expected Hamming weight of input and output.
    #[arg(long)]
    report: Option<String>,
    /// Values for abstract block parameters, in block order.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct RunManifest {
    tool_version: &'static str,
    seed: Option<u64>,
    solver: Option<Vec<String>>,
    strategy: Option<String>,
    inputs: Vec<String>,
    artifacts: Vec<String>,
    verdicts: Vec<(String, String)>,
}

impl RunManifest {
    fn new() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            seed: None,
            solver: None,
            strategy: None,
            inputs: Vec::new(),
            artifacts: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    fn write(&self, out_dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self).unwrap())?;
        Ok(path)
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Cmd::Generate(args) => cmd_generate(args, &cli.out_dir),
        Cmd::Verify(args) => cmd_verify(args, &cli.out_dir),
        Cmd::Bench(args) => cmd_bench(args, &cli.out_dir),
        Cmd::Simulate(args) => cmd_simulate(args),
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn cmd_generate(args: GenerateArgs, out_dir: &Path) -> Result<i32, String> {
    let (circuit, out, seed) = match args.family {
        Family::Bell { out } => (build_bell_circuit(), out, None),
        Family::Fabric {
            qubits,
            layers,
            mode,
            lambdas,
            seed,
            out,
        } => {
            let pairs = circuit::fabric_block_pairs(qubits, layers);
            let lambdas = match lambdas {
                Some(l) => l,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..pairs.len())
                        .map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI))
                        .collect()
                }
            };
            let mode = match mode {
                ModeArg::Abstract => FabricMode::Abstract,
                ModeArg::Decomposed => FabricMode::Decomposed,
            };
            let c = build_fabric(qubits, layers, &lambdas, mode).map_err(|e| e.to_string())?;
            (c, out, Some(seed))
        }
        Family::KickedIsing {
            sites,
            pulse,
            seed,
            out,
        } => {
            let params = KickedIsingParams::sample(sites, pulse, seed);
            let c = build_kicked_ising(&params).map_err(|e| e.to_string())?;
            (c, out, Some(seed))
        }
    };
    circuit::save_circuit(&circuit, &out).map_err(|e| e.to_string())?;
    let mut manifest = RunManifest::new();
    manifest.seed = seed;
    manifest.artifacts.push(out.display().to_string());
    manifest.write(out_dir).map_err(|e| e.to_string())?;
    println!(
        "wrote {} ({} qubits, {} ops)",
        out.display(),
        circuit.n_qubits,
        circuit.ops.len()
    );
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn parse_bits(s: &str, n_qubits: usize) -> Result<usize, String> {
    if s.len() != n_qubits || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(format!(
            "`{s}` is not a {n_qubits}-bit basis label (qubit 0 leftmost)"
        ));
    }
    Ok(usize::from_str_radix(s, 2).unwrap())
}

/// The property mini-language: `true`, `input-basis <bits>`,
/// `subspace <bits,...>`, `hw-preserved`.
fn parse_condition(spec: &str, circuit: &Circuit) -> Result<Condition, String> {
    let spec = spec.trim();
    if spec == "true" {
        return Ok(Condition::Explicit(crate::encode::Formula::And(vec![])));
    }
    if spec == "hw-preserved" {
        return Ok(Condition::HwEquals {
            step_a: 0,
            step_b: circuit.ops.len(),
        });
    }
    let (kw, rest) = spec.split_once(char::is_whitespace).unwrap_or((spec, ""));
    match kw {
        "input-basis" => Ok(Condition::InputBasis(parse_bits(
            rest.trim(),
            circuit.n_qubits,
        )?)),
        "subspace" => {
            let mut set = BTreeSet::new();
            for item in rest.split(',') {
                let item = item.trim().trim_matches(|c| c == '{' || c == '}');
                if item.is_empty() {
                    continue;
                }
                set.insert(parse_bits(item, circuit.n_qubits)?);
            }
            if set.is_empty() {
                return Err("subspace needs at least one basis label".to_string());
            }
            Ok(Condition::Subspace(set))
        }
        other => Err(format!(
            "unknown property `{other}`; expected input-basis, subspace, hw-preserved, or true"
        )),
    }
}

fn pick_dialect(arg: DialectArg, circuit: &Circuit) -> Dialect {
    match arg {
        DialectArg::Lra => Dialect::Lra,
        DialectArg::Nra => Dialect::Nra,
        DialectArg::Trig => Dialect::Trig,
        DialectArg::Auto => {
            if circuit.has_abstract_gates() {
                Dialect::Nra
            } else {
                Dialect::Lra
            }
        }
    }
}

#[derive(Serialize)]
struct ObligationResult {
    name: String,
    logic: String,
    verdict: String,
    wct_s: f64,
    smt_file: String,
    model: Option<HashMap<String, f64>>,
}

#[derive(Serialize)]
struct VerifyReport {
    circuit: String,
    pre: String,
    post: String,
    strategy: String,
    obligations: Vec<ObligationResult>,
    trusted_steps: Vec<String>,
    overall: String,
}

fn solver_config(out_dir: &Path, timeout: u64, no_tactic: bool) -> Result<SolverConfig, String> {
    let command = detect_solver_command().map_err(|e| e.to_string())?;
    let mut cfg = SolverConfig::new(command, out_dir.join("smt2"));
    cfg.timeout = Duration::from_secs(timeout);
    cfg.nra_tactic = !no_tactic;
    Ok(cfg)
}

fn cmd_verify(args: VerifyArgs, out_dir: &Path) -> Result<i32, String> {
    let circuit = circuit::load_circuit(&args.circuit).map_err(|e| e.to_string())?;
    let cfg = solver_config(out_dir, args.timeout, args.no_nra_tactic)?;
    let pre = parse_condition(&args.pre, &circuit)?;
    let sqrt_mode = args.sqrt_mode.mode();
    let dialect = pick_dialect(args.dialect, &circuit);

    // raw post bypasses the typed pipeline entirely
    if let Some(raw) = &args.post_raw {
        return verify_raw_post(&args, raw, &circuit, pre, dialect, sqrt_mode, &cfg, out_dir);
    }
    let post_spec = args.post.as_deref().unwrap();
    let post = parse_condition(post_spec, &circuit)?;

    let triple = HoareTriple {
        pre,
        circuit,
        post,
    };
    let (vcs, trusted_steps): (Vec<VerificationCondition>, Vec<String>) = match args.strategy {
        StrategyArg::Monolithic => (
            vec![make_monolithic(&triple, dialect, sqrt_mode, false).map_err(|e| e.to_string())?],
            vec![],
        ),
        StrategyArg::Compositional => (
            make_compositional(&triple, None, sqrt_mode).map_err(|e| e.to_string())?,
            vec![],
        ),
        StrategyArg::Wp => (
            make_wp_chain(&triple, sqrt_mode, false).map_err(|e| e.to_string())?,
            vec!["assumptions are weakest preconditions, correct by construction".to_string()],
        ),
        StrategyArg::Locality => {
            let (vcs, report) = vcgen::locality_reduce(&triple).map_err(|e| e.to_string())?;
            (vcs, report.trusted_steps)
        }
    };

    let mut obligations = Vec::new();
    let mut refuted = false;
    let mut inconclusive = false;
    for vc in &vcs {
        let want_model = true;
        let (verdict, wall, path) =
            run_solver(vc, &cfg, want_model).map_err(|e| e.to_string())?;
        match &verdict {
            SolverVerdict::Refuted(model) => {
                refuted = true;
                println!("{}: refuted; counterexample:", vc.name);
                let mut keys: Vec<_> = model.keys().collect();
                keys.sort();
                for k in keys {
                    println!("  {k} = {}", model[k]);
                }
            }
            SolverVerdict::Holds => println!("{}: holds ({:.3}s)", vc.name, wall.as_secs_f64()),
            other => {
                inconclusive = true;
                println!("{}: {}", vc.name, other.label());
            }
        }
        obligations.push(ObligationResult {
            name: vc.name.clone(),
            logic: vc.logic.as_str().to_string(),
            verdict: verdict.label().to_string(),
            wct_s: wall.as_secs_f64(),
            smt_file: path.display().to_string(),
            model: match verdict {
                SolverVerdict::Refuted(m) => Some(m),
                _ => None,
            },
        });
    }

    let overall = if refuted {
        "refuted"
    } else if inconclusive {
        "inconclusive"
    } else {
        "holds"
    };
    let report = VerifyReport {
        circuit: args.circuit.display().to_string(),
        pre: args.pre.clone(),
        post: post_spec.to_string(),
        strategy: args.strategy.name().to_string(),
        obligations,
        trusted_steps,
        overall: overall.to_string(),
    };
    write_verify_outputs(&args, &report, &cfg, out_dir)?;
    println!("overall: {overall}");
    Ok(if refuted {
        EXIT_REFUTED
    } else if inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    })
}

fn write_verify_outputs(
    args: &VerifyArgs,
    report: &VerifyReport,
    cfg: &SolverConfig,
    out_dir: &Path,
) -> Result<(), String> {
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let report_path = out_dir.join("report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(report).unwrap())
        .map_err(|e| e.to_string())?;
    let mut manifest = RunManifest::new();
    manifest.solver = Some(cfg.command.clone());
    manifest.strategy = Some(args.strategy.name().to_string());
    manifest.inputs.push(args.circuit.display().to_string());
    manifest.artifacts.push(report_path.display().to_string());
    for o in &report.obligations {
        manifest.artifacts.push(o.smt_file.clone());
        manifest
            .verdicts
            .push((o.name.clone(), o.verdict.clone()));
    }
    manifest.write(out_dir).map_err(|e| e.to_string())?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify_raw_post(
    args: &VerifyArgs,
    raw: &str,
    circuit: &Circuit,
    pre: Condition,
    dialect: Dialect,
    sqrt_mode: SqrtHalfMode,
    cfg: &SolverConfig,
    out_dir: &Path,
) -> Result<i32, String> {
    // encode P and the step constraints with a trivially-true post,
    // drop its vacuous negation, and splice the raw negated term in
    let triple = HoareTriple {
        pre,
        circuit: circuit.clone(),
        post: Condition::Explicit(crate::encode::Formula::Or(vec![])),
    };
    let mut vc = make_monolithic(&triple, dialect, sqrt_mode, false).map_err(|e| e.to_string())?;
    vc.assertions.pop();
    vc.name = "raw-post".to_string();
    let opts = RenderOptions {
        get_model: true,
        nra_tactic: cfg.nra_tactic,
        raw_asserts: vec![format!("(assert (not {raw}))")],
        ..RenderOptions::default()
    };
    let script = smt::render_smtlib(&vc, &opts).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(&cfg.workdir).map_err(|e| e.to_string())?;
    let path = cfg.workdir.join("raw_post.smt2");
    std::fs::write(&path, &script).map_err(|e| e.to_string())?;
    let (verdict, wall) = smt::run_solver_on_file(&path, cfg).map_err(|e| e.to_string())?;
    println!("raw-post: {} ({:.3}s)  [post unchecked]", verdict.label(), wall.as_secs_f64());
    let report = VerifyReport {
        circuit: args.circuit.display().to_string(),
        pre: args.pre.clone(),
        post: format!("raw: {raw}"),
        strategy: "monolithic".to_string(),
        obligations: vec![ObligationResult {
            name: vc.name.clone(),
            logic: vc.logic.as_str().to_string(),
            verdict: verdict.label().to_string(),
            wct_s: wall.as_secs_f64(),
            smt_file: path.display().to_string(),
            model: match &verdict {
                SolverVerdict::Refuted(m) => Some(m.clone()),
                _ => None,
            },
        }],
        trusted_steps: vec!["raw postcondition text is passed to the solver unchecked".into()],
        overall: verdict.label().to_string(),
    };
    write_verify_outputs(args, &report, cfg, out_dir)?;
    Ok(match verdict {
        SolverVerdict::Holds => EXIT_OK,
        SolverVerdict::Refuted(_) => EXIT_REFUTED,
        _ => EXIT_INCONCLUSIVE,
    })
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

/// The bundled suite mirroring the headline experiment table.
pub fn table1_suite() -> Vec<BenchItem> {
    let bell = HoareTriple {
        pre: Condition::InputBasis(0),
        circuit: build_bell_circuit(),
        post: Condition::Subspace([0b00, 0b11].into_iter().collect()),
    };
    let sqrt = SqrtHalfMode::default();
    let mut items = Vec::new();

    let mut mono = make_monolithic(&bell, Dialect::Lra, sqrt, false).unwrap();
    mono.name = "H+CNOT".to_string();
    items.push(BenchItem {
        vc: mono,
        dispatch: true,
    });

    // compositional VCs come back as [P+A1, C1, C2]; table order is
    // C1, C2, P+A1
    let mut comp = make_compositional(&bell, None, sqrt).unwrap();
    comp.rotate_left(1);
    for vc in comp {
        items.push(BenchItem { vc, dispatch: true });
    }

    let fabric = build_fabric(6, 4, &[0.0; 10], FabricMode::Abstract).unwrap();
    let mut naive = make_fabric_trig_vc(&fabric, true).unwrap();
    naive.name = "H(2^6), naive".to_string();
    items.push(BenchItem {
        vc: naive,
        dispatch: false,
    });
    let mut precise = make_fabric_trig_vc(&fabric, false).unwrap();
    precise.name = "H(2^6), precise".to_string();
    items.push(BenchItem {
        vc: precise,
        dispatch: false,
    });
    for k in [10usize, 9, 8, 7, 5, 1] {
        let vc = make_fabric_prefix_vc(&fabric, k, true).unwrap();
        items.push(BenchItem { vc, dispatch: true });
    }
    items.push(BenchItem {
        vc: make_h4_hw_vc(),
        dispatch: true,
    });
    items
}

fn cmd_bench(args: BenchArgs, out_dir: &Path) -> Result<i32, String> {
    if args.suite != "table1" {
        return Err(format!("unknown suite `{}`", args.suite));
    }
    let cfg = solver_config(out_dir, args.timeout, args.no_nra_tactic)?;
    let mut suite = table1_suite();
    if let Some(filter) = &args.only {
        suite.retain(|item| item.vc.name.contains(filter.as_str()));
    }
    let records = run_bench(suite, &cfg, args.reps).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let csv = bench_csv(&records);
    let md = bench_markdown(&records);
    std::fs::write(out_dir.join("results.csv"), &csv).map_err(|e| e.to_string())?;
    std::fs::write(out_dir.join("results.md"), &md).map_err(|e| e.to_string())?;
    print!("{md}");
    let mut manifest = RunManifest::new();
    manifest.solver = Some(cfg.command.clone());
    manifest
        .artifacts
        .push(out_dir.join("results.csv").display().to_string());
    manifest
        .artifacts
        .push(out_dir.join("results.md").display().to_string());
    for r in &records {
        manifest.verdicts.push((r.example.clone(), r.verdict.clone()));
    }
    manifest.write(out_dir).map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> Result<i32, String> {
    let circuit = circuit::load_circuit(&args.circuit).map_err(|e| e.to_string())?;
    let index = parse_bits(&args.input, circuit.n_qubits)?;
    let params: HashMap<String, f64> = if circuit.has_abstract_gates() {
        let names: Vec<String> = {
            let mut seen = Vec::new();
            for op in &circuit.ops {
                if let GateKind::AbstractH4(p) = &op.gate {
                    if !seen.contains(p) {
                        seen.push(p.clone());
                    }
                }
            }
            seen
        };
        let Some(values) = &args.lambda else {
            return Err(format!(
                "circuit has {} abstract block parameter(s); pass --lambda v1,v2,...",
                names.len()
            ));
        };
        if values.len() != names.len() {
            return Err(format!(
                "expected {} lambda value(s), got {}",
                names.len(),
                values.len()
            ));
        }
        names.into_iter().zip(values.iter().copied()).collect()
    } else {
        HashMap::new()
    };

    let input = oracle::StateVector::basis_state(circuit.n_qubits, index);
    let hw_in = oracle::expected_hamming_weight(&input).map_err(|e| e.to_string())?;
    let output = oracle::run_with_params(&circuit, &input, &params).map_err(|e| e.to_string())?;

    println!("final state:");
    for (i, amp) in output.amps.iter().enumerate() {
        if amp.norm() > 1e-12 {
            println!(
                "  |{}>  {:+.10} {:+.10}i",
                crate::encode::basis_bits(circuit.n_qubits, i),
                amp.re,
                amp.im
            );
        }
    }
    if args.report.as_deref() == Some("hw") || args.report.is_none() {
        let hw_out = oracle::expected_hamming_weight(&output).map_err(|e| e.to_string())?;
        println!("HW(in)  = {hw_in:.10}");
        println!("HW(out) = {hw_out:.10}");
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_parsing() {
        let c = build_bell_circuit();
        assert!(matches!(
            parse_condition("input-basis 00", &c).unwrap(),
            Condition::InputBasis(0)
        ));
        assert!(matches!(
            parse_condition("input-basis 10", &c).unwrap(),
            Condition::InputBasis(2)
        ));
        let Condition::Subspace(s) = parse_condition("subspace 00,11", &c).unwrap() else {
            panic!()
        };
        assert_eq!(s, [0usize, 3].into_iter().collect());
        // braces tolerated
        let Condition::Subspace(s2) = parse_condition("subspace {00,11}", &c).unwrap() else {
            panic!()
        };
        assert_eq!(s2, [0usize, 3].into_iter().collect());
        assert!(matches!(
            parse_condition("hw-preserved", &c).unwrap(),
            Condition::HwEquals { step_a: 0, step_b: 2 }
        ));
        assert!(parse_condition("input-basis 0", &c).is_err());
        assert!(parse_condition("subspace", &c).is_err());
        assert!(parse_condition("nonsense 00", &c).is_err());
    }

    #[test]
    fn table1_suite_shape() {
        let suite = table1_suite();
        let names: Vec<&str> = suite.iter().map(|i| i.vc.name.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "H+CNOT",
                "C1",
                "C2",
                "P+A1",
                "H(2^6), naive",
                "H(2^6), precise",
                "H(2^6) 10/10",
                "H(2^6) 9/10",
                "H(2^6) 8/10",
                "H(2^6) 7/10",
                "H(2^6) 5/10",
                "H(2^6) 1/10",
                "H(4)"
            ]
        );
        let dns: Vec<&str> = suite
            .iter()
            .filter(|i| !i.dispatch)
            .map(|i| i.vc.name.as_str())
            .collect();
        assert_eq!(dns, vec!["H(2^6), naive", "H(2^6), precise"]);
    }

    #[test]
    fn table1_counts_against_golden() {
        let suite = table1_suite();
        let by_name: HashMap<&str, (usize, usize)> = suite
            .iter()
            .map(|i| {
                (
                    i.vc.name.as_str(),
                    (i.vc.metadata.n_vars, i.vc.metadata.n_assertions),
                )
            })
            .collect();
        assert_eq!(by_name["H+CNOT"], (25, 26));
        assert_eq!(by_name["P+A1"], (9, 3));
        assert_eq!(by_name["C1"], (17, 11));
        assert_eq!(by_name["H(2^6) 1/10"], (260, 72));
        assert_eq!(by_name["H(4)"], (20, 12));
    }
}
