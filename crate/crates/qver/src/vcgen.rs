//! Verification-condition generation for Hoare triples over circuits:
//! monolithic encoding, assume-guarantee decomposition, weakest
//! preconditions, the linear over-approximation of parameterized
//! blocks, and the locality reduction of Hamming-weight obligations.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, GateApplication, GateKind};
use crate::encode::{
    encode_condition_with_names, encode_matrix_step, gate_sym_matrix, h4_sym_matrix, hw_expr,
    sqrt_half_constraints, step_var_names, CmpOp, Condition, Dialect, EncodeError, Expr, Formula,
    Logic, Rational, SqrtHalfMode, StepConstraint, SQRT_HALF_VAR,
};

#[derive(Debug, Error)]
pub enum VcError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("abstract gate `{0}` requires the NRA abstraction or TRIG dialect")]
    AbstractNeedsAbstraction(String),
    #[error("expected {expected} assumptions for {expected} segments, got {got}")]
    AssumptionCount { expected: usize, got: usize },
    #[error("weakest preconditions cannot be pushed through abstract gate `{0}`")]
    AbstractInWp(String),
    #[error("locality reduction only supports Hamming-weight preservation")]
    UnsupportedProperty,
    #[error("locality reduction requires 1- or 2-qubit gates only")]
    GateTooWide,
    #[error("prefix index k={k} out of range 1..={blocks}")]
    PrefixOutOfRange { k: usize, blocks: usize },
    #[error("fabric prefix VCs require an all-abstract fabric")]
    NotAbstractFabric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoareTriple {
    pub pre: Condition,
    pub circuit: Circuit,
    pub post: Condition,
}

impl HoareTriple {
    /// {true} C {HW(in) = HW(out)}.
    pub fn hw_preservation(circuit: Circuit) -> Self {
        let steps = circuit.ops.len();
        Self {
            pre: Condition::Explicit(Formula::And(vec![])),
            circuit,
            post: Condition::HwEquals {
                step_a: 0,
                step_b: steps,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub enum ProofPlan {
    Monolithic,
    /// Assumptions aligned to the segments; `None` entries are not
    /// allowed — use `wp_assumptions` to fill in defaults.
    Compositional(Vec<Formula>),
    WpChain,
    LocalityReduced,
}

#[derive(Debug, Clone, Serialize)]
pub struct VcMetadata {
    pub n_vars: usize,
    pub n_assertions: usize,
    pub obligation: String,
}

#[derive(Debug, Clone)]
pub struct VerificationCondition {
    pub name: String,
    pub logic: Logic,
    /// Sorted distinct declarations (all Real).
    pub decls: Vec<String>,
    /// One entry per emitted `assert`.
    pub assertions: Vec<Formula>,
    pub metadata: VcMetadata,
}

impl VerificationCondition {
    fn build(name: impl Into<String>, assertions: Vec<Formula>, obligation: &str) -> Self {
        let name = name.into();
        let mut vars = BTreeSet::new();
        for a in &assertions {
            a.collect_vars(&mut vars);
        }
        let decls: Vec<String> = vars.into_iter().collect();
        // r_half counts as a constant when pinned by a linear defining
        // equality (RationalApprox); under ExactVar the quadratic
        // constraint itself forces NRA.
        let mut defined: HashMap<String, Expr> = HashMap::new();
        for a in &assertions {
            if let Formula::Atom(CmpOp::Eq, Expr::Var(v), rhs @ Expr::Const(_)) = a {
                if v == SQRT_HALF_VAR {
                    defined.insert(v.clone(), rhs.clone());
                }
            }
        }
        let logic = if assertions.iter().any(Formula::has_trig) {
            Logic::Trig
        } else if assertions
            .iter()
            .all(|a| a.substitute(&defined).is_linear())
        {
            Logic::QfLra
        } else {
            Logic::QfNra
        };
        let metadata = VcMetadata {
            n_vars: decls.len(),
            n_assertions: assertions.len(),
            obligation: obligation.to_string(),
        };
        Self {
            name,
            logic,
            decls,
            assertions,
            metadata,
        }
    }

    /// Numeric check of the full assertion set under an assignment;
    /// missing variables default to zero (solvers omit don't-cares).
    pub fn eval_model(&self, model: &HashMap<String, f64>, tol: f64) -> bool {
        let mut env = model.clone();
        for d in &self.decls {
            env.entry(d.clone()).or_insert(0.0);
        }
        self.assertions
            .iter()
            .all(|a| a.eval(&env, tol).unwrap_or(false))
    }
}

/// Distinct declared variables and emitted assertions.
pub fn count_symbols(vc: &VerificationCondition) -> (usize, usize) {
    (vc.decls.len(), vc.assertions.len())
}

/// Relaxation variables of one abstract block: 0 <= s,c <= 1 and
/// s^2 + c^2 = 1, no trig.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractParams {
    pub s: String,
    pub c: String,
}

impl AbstractParams {
    pub fn constraints(&self) -> Vec<Formula> {
        let s = || Expr::var(&self.s);
        let c = || Expr::var(&self.c);
        vec![
            Formula::Atom(CmpOp::Le, Expr::int(0), s()),
            Formula::Atom(CmpOp::Le, s(), Expr::int(1)),
            Formula::Atom(CmpOp::Le, Expr::int(0), c()),
            Formula::Atom(CmpOp::Le, c(), Expr::int(1)),
            Formula::eq(
                Expr::Add(vec![
                    Expr::Mul(vec![s(), s()]),
                    Expr::Mul(vec![c(), c()]),
                ]),
                Expr::int(1),
            ),
        ]
    }
}

/// Step constraint for one abstract H(4) application using the matrix
/// with free s, c instead of trig terms.
pub fn abstract_h4_step(
    app: &GateApplication,
    n_qubits: usize,
    from_step: usize,
    to_step: usize,
    params: &AbstractParams,
) -> (StepConstraint, AbstractParams) {
    let names_in = step_var_names(n_qubits, from_step);
    let matrix = h4_sym_matrix(Expr::var(&params.s), Expr::var(&params.c));
    let (sc, _) = encode_matrix_step(n_qubits, &app.qubits, &matrix, &names_in, to_step, false);
    (sc, params.clone())
}

fn sqrt_uses(assertions: &[Formula]) -> bool {
    let mut vars = BTreeSet::new();
    for a in assertions {
        a.collect_vars(&mut vars);
    }
    vars.contains(SQRT_HALF_VAR)
}

/// Append the r_half constraints when any assertion references it.
fn push_sqrt_constraints(assertions: &mut Vec<Formula>, mode: SqrtHalfMode) {
    if sqrt_uses(assertions) {
        assertions.extend(sqrt_half_constraints(mode));
    }
}

struct EncodedCircuit {
    steps: Vec<StepConstraint>,
    abstract_params: Vec<AbstractParams>,
    final_names: Vec<(String, String)>,
}

/// Encode every op of the circuit as step constraints. Abstract gates
/// go through the s/c relaxation (NRA) or the trig matrix (TRIG);
/// under LRA they are an error.
fn encode_ops(
    circuit: &Circuit,
    dialect: Dialect,
    shared_abstract: bool,
    elide: bool,
) -> Result<EncodedCircuit, VcError> {
    let n = circuit.n_qubits;
    let mut names = step_var_names(n, 0);
    let mut steps = Vec::new();
    let mut abstract_params: Vec<AbstractParams> = Vec::new();
    for (pos, app) in circuit.ops.iter().enumerate() {
        let to_step = pos + 1;
        let matrix = match &app.gate {
            GateKind::AbstractH4(param) => match dialect {
                Dialect::Lra => {
                    return Err(VcError::AbstractNeedsAbstraction(param.clone()));
                }
                Dialect::Nra => {
                    let ap = if shared_abstract {
                        AbstractParams {
                            s: "s".to_string(),
                            c: "c".to_string(),
                        }
                    } else {
                        AbstractParams {
                            s: format!("s_{}", abstract_params.len()),
                            c: format!("c_{}", abstract_params.len()),
                        }
                    };
                    let m = h4_sym_matrix(Expr::var(&ap.s), Expr::var(&ap.c));
                    if !shared_abstract || abstract_params.is_empty() {
                        abstract_params.push(ap);
                    }
                    m
                }
                Dialect::Trig => {
                    let half = Expr::Mul(vec![
                        Expr::Const(Rational::new(1.into(), 2.into())),
                        Expr::var(param),
                    ]);
                    h4_sym_matrix(
                        Expr::Sin(Box::new(half.clone())),
                        Expr::Cos(Box::new(half)),
                    )
                }
            },
            g => gate_sym_matrix(g)?,
        };
        let (sc, names_out) = encode_matrix_step(n, &app.qubits, &matrix, &names, to_step, elide);
        names = names_out;
        steps.push(sc);
    }
    Ok(EncodedCircuit {
        steps,
        abstract_params,
        final_names: names,
    })
}

fn is_hw_condition(cond: &Condition) -> bool {
    matches!(cond, Condition::HwEquals { .. })
}

/// Single VC asserting P, the step constraints, and the negated
/// post-condition. Subspace-style conditions are flattened into one
/// assert per real atom, mirroring the figure encoding; Hamming-weight
/// posts go through hw_in/hw_out definitions and pair each amplitude
/// equation into one assert.
pub fn make_monolithic(
    triple: &HoareTriple,
    dialect: Dialect,
    sqrt_mode: SqrtHalfMode,
    elide: bool,
) -> Result<VerificationCondition, VcError> {
    let n = triple.circuit.n_qubits;
    let enc = encode_ops(&triple.circuit, dialect, true, elide)?;
    let hw_post = is_hw_condition(&triple.post);

    let mut assertions: Vec<Formula> = Vec::new();
    let names0 = step_var_names(n, 0);
    let pre = encode_condition_with_names(&triple.pre, n, &names0, None);
    assertions.extend(pre.conjuncts());
    for ap in &enc.abstract_params {
        assertions.extend(ap.constraints());
    }
    let mut step_atoms = Vec::new();
    for sc in &enc.steps {
        if hw_post {
            step_atoms.extend(sc.atoms_grouped());
        } else {
            step_atoms.extend(sc.atoms_flat());
        }
    }
    assertions.extend(step_atoms);
    push_sqrt_constraints(&mut assertions, sqrt_mode);

    if hw_post {
        assertions.push(Formula::eq(Expr::var("hw_in"), hw_expr(n, &names0)));
        assertions.push(Formula::eq(
            Expr::var("hw_out"),
            hw_expr(n, &enc.final_names),
        ));
        assertions.push(Formula::Not(Box::new(Formula::eq(
            Expr::var("hw_in"),
            Expr::var("hw_out"),
        ))));
    } else {
        let post = encode_condition_with_names(&triple.post, n, &enc.final_names, None);
        assertions.push(Formula::Not(Box::new(post.normalize())));
    }
    Ok(VerificationCondition::build(
        "monolithic",
        assertions,
        "P and C entail Q",
    ))
}

/// Weakest precondition of a run of ops: substitute every output
/// variable by its defining right-hand side, gate by gate from the
/// back. Only concrete gates are substitutable here.
pub fn weakest_precondition(
    circuit: &Circuit,
    ops: std::ops::Range<usize>,
    post: &Formula,
) -> Result<Formula, VcError> {
    let n = circuit.n_qubits;
    let mut formula = post.clone();
    for pos in ops.rev() {
        let app = &circuit.ops[pos];
        if let GateKind::AbstractH4(p) = &app.gate {
            return Err(VcError::AbstractInWp(p.clone()));
        }
        let sc = crate::encode::encode_gate_step(app, n, pos, pos + 1)?;
        formula = formula.substitute(&sc.defs());
    }
    Ok(formula.normalize())
}

/// Default assumptions of a segmented circuit: A_i is the weakest
/// precondition of everything after the start of segment i, computed
/// backwards from Q.
pub fn wp_assumptions(triple: &HoareTriple) -> Result<Vec<Formula>, VcError> {
    let n = triple.circuit.n_qubits;
    let segments = triple.circuit.segments();
    let final_step = triple.circuit.ops.len();
    let names_end = step_var_names(n, final_step);
    let q = encode_condition_with_names(&triple.post, n, &names_end, None).normalize();
    let mut acc = q;
    let mut assumptions = vec![Formula::And(vec![]); segments.len()];
    for (i, seg) in segments.iter().enumerate().rev() {
        acc = weakest_precondition(&triple.circuit, seg.clone(), &acc)?;
        assumptions[i] = acc.clone();
    }
    Ok(assumptions)
}

fn entailment_vc(
    name: String,
    antecedent_condition: Formula,
    steps: &[StepConstraint],
    consequent: Formula,
    sqrt_mode: SqrtHalfMode,
    obligation: &str,
) -> VerificationCondition {
    let mut assertions = Vec::new();
    let ante = antecedent_condition.normalize();
    // assumptions are interface formulas: asserted whole
    if !matches!(&ante, Formula::And(fs) if fs.is_empty()) {
        assertions.push(ante);
    }
    for sc in steps {
        assertions.extend(sc.atoms_flat());
    }
    assertions.push(Formula::Not(Box::new(consequent.normalize())));
    push_sqrt_constraints(&mut assertions, sqrt_mode);
    // keep the negated consequent last
    let neg = assertions
        .iter()
        .position(|f| matches!(f, Formula::Not(_)))
        .unwrap();
    let negated = assertions.remove(neg);
    assertions.push(negated);
    VerificationCondition::build(name, assertions, obligation)
}

/// Assume-guarantee plan: [P and not A1], [A_i and C_i and not A_{i+1}]
/// per segment, with Q closing the chain. Each VC only declares what
/// its segment touches.
pub fn make_compositional(
    triple: &HoareTriple,
    assumptions: Option<Vec<Formula>>,
    sqrt_mode: SqrtHalfMode,
) -> Result<Vec<VerificationCondition>, VcError> {
    let n = triple.circuit.n_qubits;
    let segments = triple.circuit.segments();
    let assumptions = match assumptions {
        Some(a) => {
            if a.len() != segments.len() {
                return Err(VcError::AssumptionCount {
                    expected: segments.len(),
                    got: a.len(),
                });
            }
            a
        }
        None => wp_assumptions(triple)?,
    };

    let names0 = step_var_names(n, 0);
    let p = encode_condition_with_names(&triple.pre, n, &names0, None);
    let final_step = triple.circuit.ops.len();
    let names_end = step_var_names(n, final_step);
    let q = encode_condition_with_names(&triple.post, n, &names_end, None);

    let mut vcs = Vec::new();
    vcs.push(entailment_vc(
        "P+A1".to_string(),
        p,
        &[],
        assumptions[0].clone(),
        sqrt_mode,
        "P entails A1",
    ));
    for (i, seg) in segments.iter().enumerate() {
        let mut steps = Vec::new();
        for pos in seg.clone() {
            let app = &triple.circuit.ops[pos];
            if let GateKind::AbstractH4(pname) = &app.gate {
                return Err(VcError::AbstractInWp(pname.clone()));
            }
            steps.push(crate::encode::encode_gate_step(app, n, pos, pos + 1)?);
        }
        let consequent = if i + 1 < segments.len() {
            assumptions[i + 1].clone()
        } else {
            q.clone()
        };
        vcs.push(entailment_vc(
            format!("C{}", i + 1),
            assumptions[i].clone(),
            &steps,
            consequent,
            sqrt_mode,
            &format!("A{} and C{} entail next", i + 1, i + 1),
        ));
    }
    Ok(vcs)
}

/// Weakest-precondition chain: all assumptions computed syntactically,
/// so only the head check [P and not A1] needs a solver. With
/// `emit_audit` the segment VCs are produced as well.
pub fn make_wp_chain(
    triple: &HoareTriple,
    sqrt_mode: SqrtHalfMode,
    emit_audit: bool,
) -> Result<Vec<VerificationCondition>, VcError> {
    let assumptions = wp_assumptions(triple)?;
    let n = triple.circuit.n_qubits;
    let names0 = step_var_names(n, 0);
    let p = encode_condition_with_names(&triple.pre, n, &names0, None);
    let head = entailment_vc(
        "P+A1".to_string(),
        p,
        &[],
        assumptions[0].clone(),
        sqrt_mode,
        "P entails the weakest precondition of C",
    );
    if emit_audit {
        let mut vcs = make_compositional(triple, Some(assumptions), sqrt_mode)?;
        vcs[0] = head;
        Ok(vcs)
    } else {
        Ok(vec![head])
    }
}

/// Hamming-weight VC for a prefix of an all-abstract fabric: the first
/// k blocks with one shared (s, c) relaxation pair, hw_in/hw_out
/// definitions, and the negated weight equality. `shared_params =
/// false` gives every block its own pair.
pub fn make_fabric_prefix_vc(
    fabric: &Circuit,
    k: usize,
    shared_params: bool,
) -> Result<VerificationCondition, VcError> {
    if !fabric.ops.iter().all(|op| op.gate.is_abstract()) {
        return Err(VcError::NotAbstractFabric);
    }
    let blocks = fabric.ops.len();
    if k == 0 || k > blocks {
        return Err(VcError::PrefixOutOfRange { k, blocks });
    }
    let mut prefix = Circuit::new(fabric.n_qubits).unwrap();
    for op in &fabric.ops[..k] {
        prefix.push(op.gate.clone(), &op.qubits).unwrap();
    }
    let triple = HoareTriple::hw_preservation(prefix);
    let mut vc = make_monolithic(&triple, Dialect::Nra, SqrtHalfMode::default(), false)?;
    if !shared_params {
        // re-encode with per-block pairs
        let enc = encode_ops(&triple.circuit, Dialect::Nra, false, false)?;
        let n = triple.circuit.n_qubits;
        let names0 = step_var_names(n, 0);
        let mut assertions = Vec::new();
        for ap in &enc.abstract_params {
            assertions.extend(ap.constraints());
        }
        for sc in &enc.steps {
            assertions.extend(sc.atoms_grouped());
        }
        assertions.push(Formula::eq(Expr::var("hw_in"), hw_expr(n, &names0)));
        assertions.push(Formula::eq(
            Expr::var("hw_out"),
            hw_expr(n, &enc.final_names),
        ));
        assertions.push(Formula::Not(Box::new(Formula::eq(
            Expr::var("hw_in"),
            Expr::var("hw_out"),
        ))));
        vc = VerificationCondition::build(
            format!("H(2^{}) {k}/{blocks}", fabric.n_qubits),
            assertions,
            "prefix preserves expected Hamming weight",
        );
        return Ok(vc);
    }
    vc.name = format!("H(2^{}) {k}/{blocks}", fabric.n_qubits);
    vc.metadata.obligation = "prefix preserves expected Hamming weight".to_string();
    Ok(vc)
}

/// TRIG encodings of the full fabric. `precise` uses the H(4) matrix
/// with sin/cos of each block parameter; `naive` inlines the Ry/CZ
/// decomposition with symbolic middle angles.
pub fn make_fabric_trig_vc(
    fabric: &Circuit,
    naive: bool,
) -> Result<VerificationCondition, VcError> {
    if !fabric.ops.iter().all(|op| op.gate.is_abstract()) {
        return Err(VcError::NotAbstractFabric);
    }
    let n = fabric.n_qubits;
    if !naive {
        let triple = HoareTriple::hw_preservation(fabric.clone());
        let mut vc = make_monolithic(&triple, Dialect::Trig, SqrtHalfMode::default(), false)?;
        vc.name = format!("H(2^{n}) precise");
        return Ok(vc);
    }
    // naive: expand each block into its gate sequence, middle rotations
    // symbolic in the block parameter
    let half = |num: i64, den: i64, of: Expr| {
        Expr::Mul(vec![Expr::Const(Rational::new(num.into(), den.into())), of])
    };
    let mut names = step_var_names(n, 0);
    let mut steps = Vec::new();
    let mut step_no = 0usize;
    for op in &fabric.ops {
        let param = match &op.gate {
            GateKind::AbstractH4(p) => p.clone(),
            _ => unreachable!(),
        };
        let (qa, qb) = (op.qubits[0], op.qubits[1]);
        let pi = std::f64::consts::PI;
        let lam = Expr::var(&param);
        // figure angles doubled into the half-angle convention
        let seq: Vec<(Vec<usize>, Vec<crate::encode::SymComplex>)> = vec![
            (vec![qa], gate_sym_matrix(&GateKind::Ry(pi / 2.0))?),
            (vec![qb], gate_sym_matrix(&GateKind::Ry(pi / 2.0))?),
            (vec![qa, qb], gate_sym_matrix(&GateKind::Cz)?),
            (vec![qa], crate::encode::ry_sym_matrix(half(1, 2, lam.clone()))),
            (vec![qb], crate::encode::ry_sym_matrix(half(-1, 2, lam))),
            (vec![qa, qb], gate_sym_matrix(&GateKind::Cz)?),
            (vec![qa], gate_sym_matrix(&GateKind::Ry(-pi / 2.0))?),
            (vec![qb], gate_sym_matrix(&GateKind::Ry(-pi / 2.0))?),
        ];
        for (qubits, matrix) in seq {
            step_no += 1;
            let (sc, out) = encode_matrix_step(n, &qubits, &matrix, &names, step_no, false);
            names = out;
            steps.push(sc);
        }
    }
    let names0 = step_var_names(n, 0);
    let mut assertions = Vec::new();
    for sc in &steps {
        assertions.extend(sc.atoms_grouped());
    }
    assertions.push(Formula::eq(Expr::var("hw_in"), hw_expr(n, &names0)));
    assertions.push(Formula::eq(Expr::var("hw_out"), hw_expr(n, &names)));
    assertions.push(Formula::Not(Box::new(Formula::eq(
        Expr::var("hw_in"),
        Expr::var("hw_out"),
    ))));
    Ok(VerificationCondition::build(
        format!("H(2^{n}) naive"),
        assertions,
        "full fabric preserves expected Hamming weight (trig)",
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ObligationRecord {
    pub name: String,
    pub logic: String,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub strategy: String,
    pub obligations: Vec<ObligationRecord>,
    pub trusted_steps: Vec<String>,
}

/// Locality reduction of an n-qubit Hamming-weight preservation
/// obligation: one small HW VC per distinct gate kind. All obligations
/// UNSAT implies the n-qubit property; the reduction lemma itself is a
/// trusted (non-SMT) step and is reported as such.
pub fn locality_reduce(
    triple: &HoareTriple,
) -> Result<(Vec<VerificationCondition>, ProofReport), VcError> {
    if !is_hw_condition(&triple.post) {
        return Err(VcError::UnsupportedProperty);
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut vcs = Vec::new();
    for op in &triple.circuit.ops {
        if op.qubits.len() > 2 {
            return Err(VcError::GateTooWide);
        }
        let key = gate_identity_key(&op.gate);
        if !seen.insert(key.clone()) {
            continue;
        }
        let width = op.gate.arity();
        let mut small = Circuit::new(width).unwrap();
        let qubits: Vec<usize> = (0..width).collect();
        small.push(op.gate.clone(), &qubits).unwrap();
        let small_triple = HoareTriple::hw_preservation(small);
        let mut vc = make_monolithic(&small_triple, Dialect::Nra, SqrtHalfMode::default(), false)?;
        vc.name = obligation_label(&op.gate);
        vc.metadata.obligation = format!(
            "{} preserves expected Hamming weight on {width} qubit(s)",
            vc.name
        );
        vcs.push(vc);
    }
    let report = ProofReport {
        strategy: "locality".to_string(),
        obligations: vcs
            .iter()
            .map(|vc| ObligationRecord {
                name: vc.name.clone(),
                logic: vc.logic.as_str().to_string(),
                status: "pending".to_string(),
            })
            .collect(),
        trusted_steps: vec![
            "a 1- or 2-qubit gate preserving expected Hamming weight on its own qubits \
             preserves the total expected Hamming weight of the full register"
                .to_string(),
        ],
    };
    Ok((vcs, report))
}

/// Deduplication key: gate kind plus exact parameter identity.
fn gate_identity_key(gate: &GateKind) -> String {
    match gate {
        GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) | GateKind::Rzz(a) => {
            format!("{}:{:016x}", gate.name(), a.to_bits())
        }
        GateKind::CustomUnitary(u) => {
            let mut key = format!("unitary{}:", u.dim());
            for r in 0..u.dim() {
                for c in 0..u.dim() {
                    let e = u.entry(r, c);
                    key.push_str(&format!("{:016x}{:016x}", e.re.to_bits(), e.im.to_bits()));
                }
            }
            key
        }
        // all abstract blocks share one obligation
        GateKind::AbstractH4(_) => "abstract_h4".to_string(),
        g => g.name().to_string(),
    }
}

fn obligation_label(gate: &GateKind) -> String {
    match gate {
        GateKind::AbstractH4(_) => "H(4)".to_string(),
        GateKind::Rx(a) => format!("rx({a})"),
        GateKind::Ry(a) => format!("ry({a})"),
        GateKind::Rz(a) => format!("rz({a})"),
        GateKind::Rzz(a) => format!("rzz({a})"),
        g => g.name().to_string(),
    }
}

/// The Table-1 style H(4) obligation on two qubits.
pub fn make_h4_hw_vc() -> VerificationCondition {
    let mut c = Circuit::new(2).unwrap();
    c.push(GateKind::AbstractH4("lambda".to_string()), &[0, 1])
        .unwrap();
    let triple = HoareTriple::hw_preservation(c);
    let mut vc = make_monolithic(&triple, Dialect::Nra, SqrtHalfMode::default(), false)
        .expect("abstract H4 under NRA");
    vc.name = "H(4)".to_string();
    vc.metadata.obligation = "H(4) preserves expected Hamming weight on two qubits".to_string();
    vc
}
