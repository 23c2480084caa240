//! SMT-LIB2 rendering, solver process driving, verdict/model parsing,
//! and benchmark bookkeeping.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::encode::{CmpOp, Expr, Formula, Logic, Rational};
use crate::vcgen::VerificationCondition;

#[derive(Debug, Error)]
pub enum SmtError {
    #[error("trig atoms in a VC tagged {0}")]
    TrigInRealLogic(&'static str),
    #[error("no SMT solver found: set QVER_SOLVER, put z3 on PATH, or keep scripts/z3wasm.mjs next to the binary")]
    NoSolver,
    #[error("solver command is empty")]
    EmptyCommand,
    #[error("failed to launch `{command}`: {source}")]
    Spawn {
        command: String,
        source: std::io::Error,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RenderOptions {
    /// Emit `(set-option :pp.decimal true)` and `(get-model)` after the
    /// check; only wanted when a model will be read back.
    pub get_model: bool,
    /// Replace `(check-sat)` by a nlsat-based tactic for QF_NRA goals.
    /// z3-specific; harmless to disable for other solvers.
    pub nra_tactic: bool,
    /// Declare sin/cos as uninterpreted functions and assert interval
    /// bounds for every trig application. Off by default: TRIG files
    /// are emitted for trig-capable solvers as raw applications.
    pub trig_axioms: bool,
    /// Extra raw SMT-LIB text inserted verbatim before the check;
    /// unchecked, used by `--post-raw`.
    pub raw_asserts: Vec<String>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            get_model: false,
            nra_tactic: true,
            trig_axioms: false,
            raw_asserts: Vec::new(),
        }
    }
}

/// Exact decimal or rational numeral for SMT-LIB Real sort.
fn render_rational(r: &Rational) -> String {
    let (num, den) = (r.numer(), r.denom());
    if num.is_negative() {
        return format!("(- {})", render_rational(&-r));
    }
    if den.is_one() {
        return format!("{num}.0");
    }
    // power-of-ten denominators print as plain decimals
    let mut d = den.clone();
    let ten = BigInt::from(10);
    let mut digits = 0u32;
    while (&d % &ten).is_zero() {
        d /= &ten;
        digits += 1;
    }
    if d.is_one() {
        let s = num.to_string();
        let s = format!("{:0>width$}", s, width = (digits + 1) as usize);
        let split = s.len() - digits as usize;
        return format!("{}.{}", &s[..split], &s[split..]);
    }
    format!("(/ {num}.0 {den}.0)")
}

fn render_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(c) => out.push_str(&render_rational(c)),
        Expr::Var(v) => out.push_str(v),
        Expr::Add(ts) => render_nary(out, "+", ts),
        Expr::Mul(ts) => render_nary(out, "*", ts),
        Expr::Sub(a, b) => {
            out.push_str("(- ");
            render_expr(out, a);
            out.push(' ');
            render_expr(out, b);
            out.push(')');
        }
        Expr::Neg(a) => {
            out.push_str("(- ");
            render_expr(out, a);
            out.push(')');
        }
        Expr::Sin(a) => {
            out.push_str("(sin ");
            render_expr(out, a);
            out.push(')');
        }
        Expr::Cos(a) => {
            out.push_str("(cos ");
            render_expr(out, a);
            out.push(')');
        }
    }
}

fn render_nary(out: &mut String, op: &str, ts: &[Expr]) {
    if ts.is_empty() {
        out.push_str(if op == "*" { "1.0" } else { "0.0" });
        return;
    }
    if ts.len() == 1 {
        render_expr(out, &ts[0]);
        return;
    }
    out.push('(');
    out.push_str(op);
    for t in ts {
        out.push(' ');
        render_expr(out, t);
    }
    out.push(')');
}

fn render_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(op, a, b) => {
            out.push('(');
            out.push_str(match op {
                CmpOp::Eq => "=",
                CmpOp::Le => "<=",
                CmpOp::Lt => "<",
            });
            out.push(' ');
            render_expr(out, a);
            out.push(' ');
            render_expr(out, b);
            out.push(')');
        }
        Formula::And(fs) => render_junction(out, "and", "true", fs),
        Formula::Or(fs) => render_junction(out, "or", "false", fs),
        Formula::Not(f) => {
            out.push_str("(not ");
            render_formula(out, f);
            out.push(')');
        }
    }
}

fn render_junction(out: &mut String, op: &str, empty: &str, fs: &[Formula]) {
    if fs.is_empty() {
        out.push_str(empty);
        return;
    }
    if fs.len() == 1 {
        render_formula(out, &fs[0]);
        return;
    }
    out.push('(');
    out.push_str(op);
    for f in fs {
        out.push(' ');
        render_formula(out, f);
    }
    out.push(')');
}

fn collect_trig_apps(f: &Formula, out: &mut Vec<Expr>) {
    fn walk_expr(e: &Expr, out: &mut Vec<Expr>) {
        match e {
            Expr::Sin(a) | Expr::Cos(a) => {
                if !out.contains(e) {
                    out.push(e.clone());
                }
                walk_expr(a, out);
            }
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().for_each(|t| walk_expr(t, out)),
            Expr::Sub(a, b) => {
                walk_expr(a, out);
                walk_expr(b, out);
            }
            Expr::Neg(a) => walk_expr(a, out),
            Expr::Const(_) | Expr::Var(_) => {}
        }
    }
    match f {
        Formula::Atom(_, a, b) => {
            walk_expr(a, out);
            walk_expr(b, out);
        }
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| collect_trig_apps(g, out)),
        Formula::Not(g) => collect_trig_apps(g, out),
    }
}

/// Deterministic SMT-LIB2 script for a verification condition. The
/// same VC and options always yield byte-identical text.
pub fn render_smtlib(vc: &VerificationCondition, opts: &RenderOptions) -> Result<String, SmtError> {
    let has_trig = vc.assertions.iter().any(Formula::has_trig);
    match vc.logic {
        Logic::QfLra if has_trig => return Err(SmtError::TrigInRealLogic("QF_LRA")),
        Logic::QfNra if has_trig => return Err(SmtError::TrigInRealLogic("QF_NRA")),
        _ => {}
    }
    let mut out = String::new();
    writeln!(out, "; {}", vc.name).unwrap();
    writeln!(out, "; obligation: {}", vc.metadata.obligation).unwrap();
    match vc.logic {
        Logic::QfLra => writeln!(out, "(set-logic QF_LRA)").unwrap(),
        Logic::QfNra => writeln!(out, "(set-logic QF_NRA)").unwrap(),
        // no standard logic covers trig applications; leave it unset
        Logic::Trig => {}
    }
    if opts.get_model {
        writeln!(out, "(set-option :produce-models true)").unwrap();
        writeln!(out, "(set-option :pp.decimal true)").unwrap();
    }
    if vc.logic == Logic::Trig && opts.trig_axioms {
        writeln!(out, "(declare-fun sin (Real) Real)").unwrap();
        writeln!(out, "(declare-fun cos (Real) Real)").unwrap();
    }
    for d in &vc.decls {
        writeln!(out, "(declare-const {d} Real)").unwrap();
    }
    if vc.logic == Logic::Trig && opts.trig_axioms {
        let mut apps = Vec::new();
        for a in &vc.assertions {
            collect_trig_apps(a, &mut apps);
        }
        for app in apps {
            let mut t = String::new();
            render_expr(&mut t, &app);
            writeln!(out, "(assert (<= (- 1.0) {t}))").unwrap();
            writeln!(out, "(assert (<= {t} 1.0))").unwrap();
        }
    }
    for a in &vc.assertions {
        let mut f = String::new();
        render_formula(&mut f, a);
        writeln!(out, "(assert {f})").unwrap();
    }
    for raw in &opts.raw_asserts {
        writeln!(out, "{raw}").unwrap();
    }
    if vc.logic == Logic::QfNra && opts.nra_tactic {
        writeln!(
            out,
            "(check-sat-using (then simplify propagate-values solve-eqs qfnra-nlsat))"
        )
        .unwrap();
    } else {
        writeln!(out, "(check-sat)").unwrap();
    }
    if opts.get_model {
        writeln!(out, "(get-model)").unwrap();
    }
    Ok(out)
}

/// Filesystem-safe slug of an example name.
pub fn file_slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    while s.contains("__") {
        s = s.replace("__", "_");
    }
    s.trim_matches('_').to_ascii_lowercase()
}

// ---------------------------------------------------------------------------
// Solver configuration and process driving
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    /// Executable plus argument template; `{file}` and `{timeout_ms}`
    /// placeholders are substituted per run.
    pub command: Vec<String>,
    /// Wall-clock limit per solver call; the process is killed past it.
    pub timeout: Duration,
    /// Directory the `.smt2` files are written into.
    pub workdir: PathBuf,
    /// Use the nlsat tactic line for QF_NRA goals.
    pub nra_tactic: bool,
}

impl SolverConfig {
    pub fn new(command: Vec<String>, workdir: impl Into<PathBuf>) -> Self {
        Self {
            command,
            timeout: Duration::from_secs(1800),
            workdir: workdir.into(),
            nra_tactic: true,
        }
    }
}

/// Locate a usable solver command: the QVER_SOLVER environment variable
/// (whitespace-split, may use the placeholders), then a `z3` binary on
/// PATH, then the bundled node wrapper around the z3 WASM package.
pub fn detect_solver_command() -> Result<Vec<String>, SmtError> {
    if let Ok(cmd) = std::env::var("QVER_SOLVER") {
        let parts: Vec<String> = cmd.split_whitespace().map(str::to_string).collect();
        if !parts.is_empty() {
            return Ok(parts);
        }
    }
    if which("z3").is_some() {
        return Ok(vec![
            "z3".to_string(),
            "-smt2".to_string(),
            "{file}".to_string(),
        ]);
    }
    if which("node").is_some() {
        for candidate in wrapper_candidates() {
            if candidate.is_file() {
                return Ok(vec![
                    "node".to_string(),
                    candidate.to_string_lossy().into_owned(),
                    "{file}".to_string(),
                ]);
            }
        }
    }
    Err(SmtError::NoSolver)
}

fn wrapper_candidates() -> Vec<PathBuf> {
    let mut out = vec![PathBuf::from("scripts/z3wasm.mjs")];
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    out.push(manifest.join("../../scripts/z3wasm.mjs"));
    if let Ok(exe) = std::env::current_exe() {
        for anc in exe.ancestors().skip(1) {
            out.push(anc.join("scripts/z3wasm.mjs"));
        }
    }
    out
}

fn which(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(name))
        .find(|p| p.is_file())
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverVerdict {
    /// unsat: the negated obligation is unsatisfiable, the triple holds.
    Holds,
    /// sat: counterexample model attached.
    Refuted(HashMap<String, f64>),
    Unknown,
    Timeout,
    /// Dialect emitted but deliberately not dispatched (DNS rows).
    EmittedOnly,
    /// Solver failed; captured stderr/stdout for diagnosis.
    SolverError(String),
}

impl SolverVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SolverVerdict::Holds => "holds",
            SolverVerdict::Refuted(_) => "refuted",
            SolverVerdict::Unknown => "unknown",
            SolverVerdict::Timeout => "timeout",
            SolverVerdict::EmittedOnly => "DNS",
            SolverVerdict::SolverError(_) => "error",
        }
    }
}

/// Run the configured solver on an already-written file.
pub fn run_solver_on_file(
    file: &Path,
    config: &SolverConfig,
) -> Result<(SolverVerdict, Duration), SmtError> {
    if config.command.is_empty() {
        return Err(SmtError::EmptyCommand);
    }
    let timeout_ms = config.timeout.as_millis().to_string();
    let subst = |arg: &String| {
        arg.replace("{file}", &file.to_string_lossy())
            .replace("{timeout_ms}", &timeout_ms)
    };
    let program = subst(&config.command[0]);
    let args: Vec<String> = config.command[1..].iter().map(subst).collect();

    let start = Instant::now();
    let mut child = Command::new(&program)
        .args(&args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| SmtError::Spawn {
            command: program.clone(),
            source,
        })?;

    let deadline = start + config.timeout;
    let status = loop {
        match child.try_wait()? {
            Some(status) => break Some(status),
            None => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    break None;
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        }
    };
    let wall = start.elapsed();

    let Some(status) = status else {
        return Ok((SolverVerdict::Timeout, wall));
    };
    let mut stdout = String::new();
    let mut stderr = String::new();
    if let Some(mut s) = child.stdout.take() {
        s.read_to_string(&mut stdout)?;
    }
    if let Some(mut s) = child.stderr.take() {
        s.read_to_string(&mut stderr)?;
    }
    let first = stdout.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let verdict = match first.trim() {
        "unsat" => SolverVerdict::Holds,
        "sat" => SolverVerdict::Refuted(parse_model(&stdout)),
        "unknown" | "timeout" => SolverVerdict::Unknown,
        _ => {
            let mut msg = String::new();
            if !status.success() {
                msg.push_str(&format!("exit status {status}; "));
            }
            msg.push_str(stderr.trim());
            if msg.is_empty() {
                msg.push_str(stdout.trim());
            }
            SolverVerdict::SolverError(msg)
        }
    };
    Ok((verdict, wall))
}

/// Render a VC to `<slug>.smt2` under the workdir and solve it.
pub fn run_solver(
    vc: &VerificationCondition,
    config: &SolverConfig,
    get_model: bool,
) -> Result<(SolverVerdict, Duration, PathBuf), SmtError> {
    let opts = RenderOptions {
        get_model,
        nra_tactic: config.nra_tactic,
        ..RenderOptions::default()
    };
    let script = render_smtlib(vc, &opts)?;
    std::fs::create_dir_all(&config.workdir)?;
    let path = config.workdir.join(format!("{}.smt2", file_slug(&vc.name)));
    std::fs::write(&path, &script)?;
    let (verdict, wall) = run_solver_on_file(&path, config)?;
    Ok((verdict, wall, path))
}

// ---------------------------------------------------------------------------
// Model parsing
// ---------------------------------------------------------------------------

fn tokenize(s: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

/// Parse one numeric value starting at `i`; returns (value, next index).
/// Accepts decimals (with z3's trailing `?` truncation marker),
/// `(- v)`, and `(/ a b)` forms.
fn parse_value(tokens: &[String], i: usize) -> Option<(f64, usize)> {
    let tok = tokens.get(i)?;
    if tok == "(" {
        let op = tokens.get(i + 1)?;
        match op.as_str() {
            "-" => {
                let (v, next) = parse_value(tokens, i + 2)?;
                (tokens.get(next)? == ")").then_some((-v, next + 1))
            }
            "/" => {
                let (a, ni) = parse_value(tokens, i + 2)?;
                let (b, nj) = parse_value(tokens, ni)?;
                (tokens.get(nj)? == ")").then_some((a / b, nj + 1))
            }
            _ => None,
        }
    } else {
        let cleaned = tok.trim_end_matches('?');
        cleaned.parse::<f64>().ok().map(|v| (v, i + 1))
    }
}

/// Extract variable assignments from solver output. Handles
/// `(define-fun x () Real v)` blocks and bare `(x v)` pairs.
pub fn parse_model(output: &str) -> HashMap<String, f64> {
    let tokens = tokenize(output);
    let mut model = HashMap::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i] == "define-fun" {
            // define-fun NAME ( ) Real VALUE
            if let (Some(name), Some(open), Some(close), Some(sort)) = (
                tokens.get(i + 1),
                tokens.get(i + 2),
                tokens.get(i + 3),
                tokens.get(i + 4),
            ) {
                if open == "(" && close == ")" && sort == "Real" {
                    if let Some((v, next)) = parse_value(&tokens, i + 5) {
                        model.insert(name.clone(), v);
                        i = next;
                        continue;
                    }
                }
            }
        } else if tokens[i] == "("
            && tokens
                .get(i + 1)
                .is_some_and(|t| t != "(" && t != ")" && t.parse::<f64>().is_err())
            && tokens.get(i + 1).is_some_and(|t| t != "define-fun" && t != "model")
        {
            // bare (x v) pair
            if let Some((v, next)) = parse_value(&tokens, i + 2) {
                if tokens.get(next).map(String::as_str) == Some(")") {
                    model.insert(tokens[i + 1].clone(), v);
                    i = next + 1;
                    continue;
                }
            }
        }
        i += 1;
    }
    model
}

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub example: String,
    pub n_vars: usize,
    pub n_assertions: usize,
    pub logic: String,
    pub verdict: String,
    /// Mean wall clock over the repetitions; None for undispatched rows.
    pub wct_s: Option<f64>,
    pub repetitions: usize,
}

/// One suite entry: a VC plus whether it should actually be handed to
/// the solver (TRIG rows are emitted only).
pub struct BenchItem {
    pub vc: VerificationCondition,
    pub dispatch: bool,
}

/// Run every item `repetitions` times, averaging wall clock. Individual
/// failures become per-row verdicts; the suite continues.
pub fn run_bench(
    suite: Vec<BenchItem>,
    config: &SolverConfig,
    repetitions: usize,
) -> Result<Vec<BenchRecord>, SmtError> {
    std::fs::create_dir_all(&config.workdir)?;
    let mut records = Vec::new();
    for item in suite {
        let vc = &item.vc;
        let logic = vc.logic.as_str().to_string();
        if !item.dispatch {
            // emit the file so the row is auditable, but do not solve
            let opts = RenderOptions {
                nra_tactic: config.nra_tactic,
                ..RenderOptions::default()
            };
            let script = render_smtlib(vc, &opts)?;
            let path = config.workdir.join(format!("{}.smt2", file_slug(&vc.name)));
            std::fs::write(&path, &script)?;
            records.push(BenchRecord {
                example: vc.name.clone(),
                n_vars: vc.metadata.n_vars,
                n_assertions: vc.metadata.n_assertions,
                logic,
                verdict: SolverVerdict::EmittedOnly.label().to_string(),
                wct_s: None,
                repetitions: 0,
            });
            continue;
        }
        let mut total = Duration::ZERO;
        let mut verdict = SolverVerdict::Unknown;
        let mut done = 0usize;
        for _ in 0..repetitions.max(1) {
            match run_solver(vc, config, false) {
                Ok((v, wall, _)) => {
                    total += wall;
                    verdict = v;
                    done += 1;
                    // no point repeating a timeout at the same limit
                    if matches!(verdict, SolverVerdict::Timeout | SolverVerdict::SolverError(_)) {
                        break;
                    }
                }
                Err(e) => {
                    verdict = SolverVerdict::SolverError(e.to_string());
                    done += 1;
                    break;
                }
            }
        }
        records.push(BenchRecord {
            example: vc.name.clone(),
            n_vars: vc.metadata.n_vars,
            n_assertions: vc.metadata.n_assertions,
            logic,
            verdict: verdict.label().to_string(),
            wct_s: Some(total.as_secs_f64() / done.max(1) as f64),
            repetitions: done,
        });
    }
    Ok(records)
}

fn fmt_wct(w: Option<f64>) -> String {
    match w {
        Some(v) => format!("{v:.3}"),
        None => String::new(),
    }
}

/// CSV with the fixed header example,vars,assertions,logic,result,wct_s.
pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("example,vars,assertions,logic,result,wct_s\n");
    for r in records {
        let example = if r.example.contains(',') || r.example.contains('"') {
            format!("\"{}\"", r.example.replace('"', "\"\""))
        } else {
            r.example.clone()
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            example,
            r.n_vars,
            r.n_assertions,
            r.logic,
            r.verdict,
            fmt_wct(r.wct_s)
        )
        .unwrap();
    }
    out
}

/// Markdown table shaped like the CSV.
pub fn bench_markdown(records: &[BenchRecord]) -> String {
    let mut out = String::from("| Example | Vars | Ass. | Logic | Res. | wct [s] |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in records {
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.example,
            r.n_vars,
            r.n_assertions,
            r.logic,
            r.verdict,
            fmt_wct(r.wct_s)
        )
        .unwrap();
    }
    out
}

/// Check a refutation model against the VC it came from. Solvers omit
/// don't-care variables; those default to zero.
pub fn model_consistent(
    vc: &VerificationCondition,
    model: &HashMap<String, f64>,
    tol: f64,
) -> bool {
    vc.eval_model(model, tol)
}

/// Variables a model must mention for the check to be meaningful.
pub fn model_covers(vc: &VerificationCondition, model: &HashMap<String, f64>) -> bool {
    let mut vars = BTreeSet::new();
    for a in &vc.assertions {
        a.collect_vars(&mut vars);
    }
    // at least one declared variable should be pinned by the solver
    vars.iter().any(|v| model.contains_key(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_bell_circuit;
    use crate::encode::{Condition, Dialect, SqrtHalfMode};
    use crate::vcgen::{make_monolithic, HoareTriple};
    use std::collections::BTreeSet;

    fn bell_vc(post: Condition) -> VerificationCondition {
        let triple = HoareTriple {
            pre: Condition::InputBasis(0),
            circuit: build_bell_circuit(),
            post,
        };
        make_monolithic(&triple, Dialect::Lra, SqrtHalfMode::default(), false).unwrap()
    }

    fn subspace(items: &[usize]) -> Condition {
        Condition::Subspace(items.iter().copied().collect::<BTreeSet<_>>())
    }

    #[test]
    fn render_is_deterministic_and_shaped() {
        let vc = bell_vc(subspace(&[0b00, 0b11]));
        let a = render_smtlib(&vc, &RenderOptions::default()).unwrap();
        let b = render_smtlib(&vc, &RenderOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("(set-logic QF_LRA)"));
        assert_eq!(a.matches("(declare-const").count(), 25);
        assert_eq!(a.matches("(assert").count(), 26);
        assert!(a.ends_with("(check-sat)\n"));
        assert!(!a.contains("(get-model)"));
        // Hadamard row renders with the factored 1/sqrt(2)
        assert!(a.contains("(* r_half (+ c_00_0_re c_10_0_re))"));
    }

    #[test]
    fn render_numerals() {
        assert_eq!(render_rational(&Rational::from_integer(3.into())), "3.0");
        assert_eq!(
            render_rational(&Rational::new(1.into(), 2.into())),
            "(/ 1.0 2.0)"
        );
        assert_eq!(
            render_rational(&Rational::new(7071.into(), 10000.into())),
            "0.7071"
        );
        assert_eq!(
            render_rational(&Rational::new((-3).into(), 10.into())),
            "(- 0.3)"
        );
    }

    #[test]
    fn render_empty_vc() {
        let vc = VerificationCondition {
            name: "empty".into(),
            logic: crate::encode::Logic::QfLra,
            decls: vec![],
            assertions: vec![],
            metadata: crate::vcgen::VcMetadata {
                n_vars: 0,
                n_assertions: 0,
                obligation: "trivial".into(),
            },
        };
        let s = render_smtlib(&vc, &RenderOptions::default()).unwrap();
        assert!(s.contains("(check-sat)"));
        assert!(!s.contains("declare-const"));
    }

    #[test]
    fn model_parser_handles_define_fun_and_pairs() {
        let out = "sat\n(\n  (define-fun x () Real 0.5)\n  (define-fun y () Real (- 0.7071067811865475?))\n  (define-fun z () Real (/ 3.0 2.0))\n)\n";
        let m = parse_model(out);
        assert_eq!(m["x"], 0.5);
        assert!((m["y"] + 0.7071067811865475).abs() < 1e-15);
        assert_eq!(m["z"], 1.5);
        let pairs = "sat\n((a 1.25) (b (- 2.0)) (c (/ 1 4)))\n";
        let m2 = parse_model(pairs);
        assert_eq!(m2["a"], 1.25);
        assert_eq!(m2["b"], -2.0);
        assert_eq!(m2["c"], 0.25);
    }

    #[test]
    fn slugging() {
        assert_eq!(file_slug("H(2^6) 1/10"), "h_2_6_1_10");
        assert_eq!(file_slug("H+CNOT"), "h_cnot");
        assert_eq!(file_slug("P+A1"), "p_a1");
    }

    #[test]
    fn csv_header_and_blank_wct() {
        let rec = BenchRecord {
            example: "x".into(),
            n_vars: 1,
            n_assertions: 2,
            logic: "QF_LRA".into(),
            verdict: "DNS".into(),
            wct_s: None,
            repetitions: 0,
        };
        let csv = bench_csv(&[rec]);
        assert!(csv.starts_with("example,vars,assertions,logic,result,wct_s\n"));
        assert!(csv.contains("x,1,2,QF_LRA,DNS,\n"));
    }

    #[test]
    fn trig_render_has_no_set_logic() {
        use crate::circuit::{build_fabric, FabricMode};
        let fabric = build_fabric(6, 4, &vec![0.0; 10], FabricMode::Abstract).unwrap();
        let vc = crate::vcgen::make_fabric_trig_vc(&fabric, false).unwrap();
        let s = render_smtlib(&vc, &RenderOptions::default()).unwrap();
        assert!(!s.contains("set-logic"));
        assert!(s.contains("(sin "));
        assert!(!s.contains("declare-fun sin"));
        let with_axioms = render_smtlib(
            &vc,
            &RenderOptions {
                trig_axioms: true,
                ..RenderOptions::default()
            },
        )
        .unwrap();
        assert!(with_axioms.contains("(declare-fun sin (Real) Real)"));
        assert!(with_axioms.contains("(assert (<= (- 1.0) (sin "));
    }

    // Solver-dependent tests: skipped when no solver is available.
    fn solver_config(dir: &Path) -> Option<SolverConfig> {
        detect_solver_command()
            .ok()
            .map(|cmd| SolverConfig::new(cmd, dir))
    }

    #[test]
    fn solve_bell_holds() {
        let tmp = tempfile::tempdir().unwrap();
        let Some(cfg) = solver_config(tmp.path()) else {
            eprintln!("no solver; skipping");
            return;
        };
        let vc = bell_vc(subspace(&[0b00, 0b11]));
        let (verdict, wall, _) = run_solver(&vc, &cfg, false).unwrap();
        assert_eq!(verdict, SolverVerdict::Holds);
        assert!(wall < Duration::from_secs(30));
    }

    #[test]
    fn solve_bell_weakened_post_refuted_with_witness() {
        let tmp = tempfile::tempdir().unwrap();
        let Some(cfg) = solver_config(tmp.path()) else {
            eprintln!("no solver; skipping");
            return;
        };
        let vc = bell_vc(subspace(&[0b00]));
        let (verdict, _, _) = run_solver(&vc, &cfg, true).unwrap();
        let SolverVerdict::Refuted(model) = verdict else {
            panic!("expected refutation, got {verdict:?}");
        };
        assert!(model_covers(&vc, &model));
        assert!(model_consistent(&vc, &model, 1e-6));
        let c11 = model.get("c_11_2_re").copied().unwrap_or(0.0);
        let c11i = model.get("c_11_2_im").copied().unwrap_or(0.0);
        let mag = (c11 * c11 + c11i * c11i).sqrt();
        assert!(
            (mag - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6,
            "witness |11| magnitude {mag}"
        );
    }

    #[test]
    fn timeout_kills_solver() {
        let tmp = tempfile::tempdir().unwrap();
        let mut cfg = SolverConfig::new(
            vec!["sleep".to_string(), "30".to_string()],
            tmp.path().to_path_buf(),
        );
        cfg.timeout = Duration::from_millis(300);
        let file = tmp.path().join("x.smt2");
        std::fs::write(&file, "(check-sat)\n").unwrap();
        let start = Instant::now();
        let (verdict, _) = run_solver_on_file(&file, &cfg).unwrap();
        assert_eq!(verdict, SolverVerdict::Timeout);
        assert!(start.elapsed() < Duration::from_secs(2));
    }

    #[test]
    fn missing_solver_is_config_error() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = SolverConfig::new(
            vec!["definitely-not-a-solver-binary".to_string()],
            tmp.path().to_path_buf(),
        );
        let file = tmp.path().join("x.smt2");
        std::fs::write(&file, "(check-sat)\n").unwrap();
        assert!(matches!(
            run_solver_on_file(&file, &cfg),
            Err(SmtError::Spawn { .. })
        ));
    }

    #[test]
    fn bench_emits_dns_rows_without_dispatch() {
        let tmp = tempfile::tempdir().unwrap();
        // a command that would fail if ever invoked
        let cfg = SolverConfig::new(vec!["false".to_string()], tmp.path().to_path_buf());
        let vc = bell_vc(subspace(&[0b00, 0b11]));
        let slug = file_slug(&vc.name);
        let records = run_bench(
            vec![BenchItem { vc, dispatch: false }],
            &cfg,
            5,
        )
        .unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].verdict, "DNS");
        assert_eq!(records[0].wct_s, None);
        assert!(tmp.path().join(format!("{slug}.smt2")).is_file());
    }
}
