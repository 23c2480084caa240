//! Symbolic amplitude encoding: turns gate applications into per-step
//! constraints over real variables for the real and imaginary parts of
//! the basis-state coefficients.
//!
//! Variables are named `c_<bits>_<step>_<re|im>`; step 0 is the
//! pre-condition surface. All constants are exact rationals; binary
//! floats never appear in emitted formulas.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::{GateApplication, GateKind};

pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("abstract gate `{0}` cannot be encoded concretely; use the abstraction path")]
    AbstractGate(String),
    #[error("trig atoms are not allowed in dialect {0:?}")]
    TrigInRealDialect(Dialect),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    Lra,
    Nra,
    Trig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    QfLra,
    QfNra,
    Trig,
}

impl Logic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Logic::QfLra => "QF_LRA",
            Logic::QfNra => "QF_NRA",
            Logic::Trig => "TRIG",
        }
    }
}

/// How 1/sqrt(2) is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtHalfMode {
    /// Fixed-precision decimal constant bound to the `r_half` variable;
    /// keeps formulas linear.
    RationalApprox(u32),
    /// Fresh variable constrained by 2 r^2 = 1 and r > 0; exact but
    /// forces NRA.
    ExactVar,
}

impl Default for SqrtHalfMode {
    fn default() -> Self {
        SqrtHalfMode::RationalApprox(16)
    }
}

pub const SQRT_HALF_VAR: &str = "r_half";

// ---------------------------------------------------------------------------
// Expression and formula ASTs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rational),
    Var(String),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Vec<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

impl Expr {
    pub fn zero() -> Self {
        Expr::Const(Rational::zero())
    }

    pub fn int(v: i64) -> Self {
        Expr::Const(Rational::from_integer(BigInt::from(v)))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn eval(&self, env: &HashMap<String, f64>) -> Option<f64> {
        Some(match self {
            Expr::Const(c) => c.to_f64()?,
            Expr::Var(name) => *env.get(name)?,
            Expr::Add(ts) => ts.iter().map(|t| t.eval(env)).sum::<Option<f64>>()?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Mul(ts) => ts
                .iter()
                .map(|t| t.eval(env))
                .try_fold(1.0, |acc, v| Some(acc * v?))?,
            Expr::Sin(a) => a.eval(env)?.sin(),
            Expr::Cos(a) => a.eval(env)?.cos(),
        })
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Expr::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) => a.collect_vars(out),
        }
    }

    pub fn substitute(&self, map: &HashMap<String, Expr>) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(name) => map.get(name).cloned().unwrap_or_else(|| self.clone()),
            Expr::Add(ts) => Expr::Add(ts.iter().map(|t| t.substitute(map)).collect()),
            Expr::Mul(ts) => Expr::Mul(ts.iter().map(|t| t.substitute(map)).collect()),
            Expr::Sub(a, b) => {
                Expr::Sub(Box::new(a.substitute(map)), Box::new(b.substitute(map)))
            }
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(map))),
            Expr::Sin(a) => Expr::Sin(Box::new(a.substitute(map))),
            Expr::Cos(a) => Expr::Cos(Box::new(a.substitute(map))),
        }
    }

    pub fn has_trig(&self) -> bool {
        match self {
            Expr::Sin(_) | Expr::Cos(_) => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().any(Expr::has_trig),
            Expr::Sub(a, b) => a.has_trig() || b.has_trig(),
            Expr::Neg(a) => a.has_trig(),
        }
    }

    /// True when no product multiplies two variable-bearing factors
    /// and no trig application occurs.
    pub fn is_linear(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Add(ts) => ts.iter().all(Expr::is_linear),
            Expr::Sub(a, b) => a.is_linear() && b.is_linear(),
            Expr::Neg(a) => a.is_linear(),
            Expr::Mul(ts) => {
                let with_vars = ts
                    .iter()
                    .filter(|t| {
                        let mut vs = BTreeSet::new();
                        t.collect_vars(&mut vs);
                        !vs.is_empty()
                    })
                    .count();
                with_vars <= 1 && ts.iter().all(Expr::is_linear)
            }
            Expr::Sin(_) | Expr::Cos(_) => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Le,
    Lt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(CmpOp, Expr, Expr),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Expr, rhs: Expr) -> Self {
        Formula::Atom(CmpOp::Eq, lhs, rhs)
    }

    pub fn and(mut fs: Vec<Formula>) -> Self {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::And(fs)
        }
    }

    /// Numeric evaluation with tolerance on the atoms.
    pub fn eval(&self, env: &HashMap<String, f64>, tol: f64) -> Option<bool> {
        Some(match self {
            Formula::Atom(op, a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                match op {
                    CmpOp::Eq => (x - y).abs() <= tol,
                    CmpOp::Le => x <= y + tol,
                    CmpOp::Lt => x < y + tol,
                }
            }
            Formula::And(fs) => {
                for f in fs {
                    if !f.eval(env, tol)? {
                        return Some(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if f.eval(env, tol)? {
                        return Some(true);
                    }
                }
                false
            }
            Formula::Not(f) => !f.eval(env, tol)?,
        })
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Formula::Not(f) => f.collect_vars(out),
        }
    }

    pub fn substitute(&self, map: &HashMap<String, Expr>) -> Formula {
        match self {
            Formula::Atom(op, a, b) => Formula::Atom(*op, a.substitute(map), b.substitute(map)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(map)).collect()),
            Formula::Not(f) => Formula::Not(Box::new(f.substitute(map))),
        }
    }

    pub fn has_trig(&self) -> bool {
        match self {
            Formula::Atom(_, a, b) => a.has_trig() || b.has_trig(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::has_trig),
            Formula::Not(f) => f.has_trig(),
        }
    }

    pub fn is_linear(&self) -> bool {
        match self {
            Formula::Atom(_, a, b) => a.is_linear() && b.is_linear(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_linear),
            Formula::Not(f) => f.is_linear(),
        }
    }

    /// Flatten nested conjunctions (the normal form used for syntactic
    /// comparison of weakest preconditions).
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::And(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.normalize() {
                        Formula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Formula::and(flat)
            }
            Formula::Or(fs) => Formula::Or(fs.iter().map(Formula::normalize).collect()),
            Formula::Not(f) => Formula::Not(Box::new(f.normalize())),
            atom => atom.clone(),
        }
    }

    /// Top-level conjuncts after flattening.
    pub fn conjuncts(&self) -> Vec<Formula> {
        match self.normalize() {
            Formula::And(fs) => fs,
            other => vec![other],
        }
    }
}

// ---------------------------------------------------------------------------
// Variable naming and constants
// ---------------------------------------------------------------------------

pub fn basis_bits(n_qubits: usize, index: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if index & (1 << (n_qubits - 1 - q)) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

pub fn amp_var(n_qubits: usize, index: usize, step: usize, part: Part) -> String {
    format!(
        "c_{}_{}_{}",
        basis_bits(n_qubits, index),
        step,
        part.suffix()
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn suffix(&self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
        }
    }
}

/// Standard (re, im) variable names for every amplitude of a step.
pub fn step_var_names(n_qubits: usize, step: usize) -> Vec<(String, String)> {
    (0..(1usize << n_qubits))
        .map(|i| {
            (
                amp_var(n_qubits, i, step, Part::Re),
                amp_var(n_qubits, i, step, Part::Im),
            )
        })
        .collect()
}

/// Nearest rational with the given number of decimal digits.
pub fn decimal_approx(x: f64, digits: u32) -> Rational {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * 10f64.powi(digits as i32);
    let num = BigInt::from(scaled.round() as i128);
    Rational::new(num, scale)
}

pub fn sqrt_half_value(digits: u32) -> Rational {
    decimal_approx(std::f64::consts::FRAC_1_SQRT_2, digits)
}

/// The constraints pinning down `r_half` under the given mode.
pub fn sqrt_half_constraints(mode: SqrtHalfMode) -> Vec<Formula> {
    let r = Expr::var(SQRT_HALF_VAR);
    match mode {
        SqrtHalfMode::RationalApprox(digits) => {
            vec![Formula::eq(r, Expr::Const(sqrt_half_value(digits)))]
        }
        SqrtHalfMode::ExactVar => vec![
            Formula::eq(
                Expr::Mul(vec![Expr::int(2), r.clone(), r.clone()]),
                Expr::int(1),
            ),
            Formula::Atom(CmpOp::Lt, Expr::zero(), r),
        ],
    }
}

// ---------------------------------------------------------------------------
// Symbolic gate matrices
// ---------------------------------------------------------------------------

/// A complex number with symbolic real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SymComplex {
    pub re: Expr,
    pub im: Expr,
}

impl SymComplex {
    pub fn real(re: Expr) -> Self {
        Self {
            re,
            im: Expr::zero(),
        }
    }

    pub fn rational(re: Rational) -> Self {
        Self::real(Expr::Const(re))
    }

    fn from_int(re: i64, im: i64) -> Self {
        Self {
            re: Expr::int(re),
            im: Expr::int(im),
        }
    }
}

fn approx_complex(re: f64, im: f64, digits: u32) -> SymComplex {
    SymComplex {
        re: Expr::Const(decimal_approx(re, digits)),
        im: Expr::Const(decimal_approx(im, digits)),
    }
}

const ANGLE_DIGITS: u32 = 16;

/// Symbolic matrix of a concrete gate. Hadamard entries reference the
/// `r_half` variable; rotation entries are 16-digit decimal rationals.
pub fn gate_sym_matrix(gate: &GateKind) -> Result<Vec<SymComplex>, EncodeError> {
    let r = || Expr::var(SQRT_HALF_VAR);
    Ok(match gate {
        GateKind::Hadamard => vec![
            SymComplex::real(r()),
            SymComplex::real(r()),
            SymComplex::real(r()),
            SymComplex::real(Expr::Neg(Box::new(r()))),
        ],
        GateKind::PauliX => vec![
            SymComplex::from_int(0, 0),
            SymComplex::from_int(1, 0),
            SymComplex::from_int(1, 0),
            SymComplex::from_int(0, 0),
        ],
        GateKind::PauliZ => vec![
            SymComplex::from_int(1, 0),
            SymComplex::from_int(0, 0),
            SymComplex::from_int(0, 0),
            SymComplex::from_int(-1, 0),
        ],
        GateKind::Rx(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![
                approx_complex(ch, 0.0, ANGLE_DIGITS),
                approx_complex(0.0, -sh, ANGLE_DIGITS),
                approx_complex(0.0, -sh, ANGLE_DIGITS),
                approx_complex(ch, 0.0, ANGLE_DIGITS),
            ]
        }
        GateKind::Ry(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![
                approx_complex(ch, 0.0, ANGLE_DIGITS),
                approx_complex(-sh, 0.0, ANGLE_DIGITS),
                approx_complex(sh, 0.0, ANGLE_DIGITS),
                approx_complex(ch, 0.0, ANGLE_DIGITS),
            ]
        }
        GateKind::Rz(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![
                approx_complex(ch, -sh, ANGLE_DIGITS),
                approx_complex(0.0, 0.0, ANGLE_DIGITS),
                approx_complex(0.0, 0.0, ANGLE_DIGITS),
                approx_complex(ch, sh, ANGLE_DIGITS),
            ]
        }
        GateKind::Cnot => {
            let mut m = vec![SymComplex::from_int(0, 0); 16];
            for (row, col) in [(0usize, 0usize), (1, 1), (2, 3), (3, 2)] {
                m[row * 4 + col] = SymComplex::from_int(1, 0);
            }
            m
        }
        GateKind::Cz => {
            let mut m = vec![SymComplex::from_int(0, 0); 16];
            for row in 0..4 {
                m[row * 4 + row] = SymComplex::from_int(if row == 3 { -1 } else { 1 }, 0);
            }
            m
        }
        GateKind::Rzz(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            let mut m = vec![SymComplex::from_int(0, 0); 16];
            for row in 0..4 {
                let sign = if row == 0 || row == 3 { -1.0 } else { 1.0 };
                m[row * 4 + row] = approx_complex(ch, sign * sh, ANGLE_DIGITS);
            }
            m
        }
        GateKind::CustomUnitary(u) => {
            let d = u.dim();
            (0..d * d)
                .map(|i| {
                    let e = u.entry(i / d, i % d);
                    approx_complex(e.re, e.im, ANGLE_DIGITS)
                })
                .collect()
        }
        GateKind::AbstractH4(name) => return Err(EncodeError::AbstractGate(name.clone())),
    })
}

/// The H(4) matrix over symbolic entries for s and c.
pub fn h4_sym_matrix(s: Expr, c: Expr) -> Vec<SymComplex> {
    let z = || SymComplex::from_int(0, 0);
    let one = || SymComplex::from_int(1, 0);
    vec![
        one(),
        z(),
        z(),
        z(),
        z(),
        SymComplex::real(c.clone()),
        SymComplex::real(s.clone()),
        z(),
        z(),
        SymComplex::real(Expr::Neg(Box::new(s))),
        SymComplex::real(c),
        z(),
        z(),
        z(),
        z(),
        one(),
    ]
}

/// Ry matrix with a symbolic angle (trig dialect): entries are
/// cos(angle/2) and sin(angle/2) applications.
pub fn ry_sym_matrix(angle: Expr) -> Vec<SymComplex> {
    let half = Expr::Mul(vec![
        Expr::Const(Rational::new(BigInt::from(1), BigInt::from(2))),
        angle,
    ]);
    let ch = || Expr::Cos(Box::new(half.clone()));
    let sh = || Expr::Sin(Box::new(half.clone()));
    vec![
        SymComplex::real(ch()),
        SymComplex::real(Expr::Neg(Box::new(sh()))),
        SymComplex::real(sh()),
        SymComplex::real(ch()),
    ]
}

// ---------------------------------------------------------------------------
// Step constraints
// ---------------------------------------------------------------------------

/// One amplitude equation of a gate step: lhs variables at the new
/// step, rhs expressions over the previous step's variables.
#[derive(Debug, Clone, PartialEq)]
pub struct AmpEquation {
    pub index: usize,
    pub lhs_re: String,
    pub lhs_im: String,
    pub rhs_re: Expr,
    pub rhs_im: Expr,
    pub passthrough: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepConstraint {
    pub step: usize,
    pub equations: Vec<AmpEquation>,
}

impl StepConstraint {
    /// Output-variable definitions, the substitution used by the
    /// weakest-precondition transformer.
    pub fn defs(&self) -> HashMap<String, Expr> {
        let mut map = HashMap::new();
        for eq in &self.equations {
            map.insert(eq.lhs_re.clone(), eq.rhs_re.clone());
            map.insert(eq.lhs_im.clone(), eq.rhs_im.clone());
        }
        map
    }

    /// One equality atom per real variable.
    pub fn atoms_flat(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        for eq in &self.equations {
            out.push(Formula::eq(Expr::var(&eq.lhs_re), eq.rhs_re.clone()));
            out.push(Formula::eq(Expr::var(&eq.lhs_im), eq.rhs_im.clone()));
        }
        out
    }

    /// One conjunction per amplitude (re and im paired).
    pub fn atoms_grouped(&self) -> Vec<Formula> {
        self.equations
            .iter()
            .map(|eq| {
                Formula::And(vec![
                    Formula::eq(Expr::var(&eq.lhs_re), eq.rhs_re.clone()),
                    Formula::eq(Expr::var(&eq.lhs_im), eq.rhs_im.clone()),
                ])
            })
            .collect()
    }
}

fn mul_expr(a: &Expr, b: Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if let Expr::Const(c) = a {
        if c.is_one() {
            return b;
        }
        if (-c).is_one() {
            return Expr::Neg(Box::new(b));
        }
    }
    if let Expr::Neg(inner) = a {
        return Expr::Neg(Box::new(mul_expr(inner, b)));
    }
    Expr::Mul(vec![a.clone(), b])
}

fn sum_expr(terms: Vec<Expr>) -> Expr {
    let mut nonzero: Vec<Expr> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    match nonzero.len() {
        0 => Expr::zero(),
        1 => nonzero.pop().unwrap(),
        _ => Expr::Add(nonzero),
    }
}

/// Sum that pulls out a common variable factor, so a Hadamard row
/// renders as r*(a + b) rather than r*a + r*b.
fn factored_sum(terms: Vec<Expr>) -> Expr {
    fn split(t: &Expr) -> Option<(bool, &str, &Expr)> {
        match t {
            Expr::Mul(fs) if fs.len() == 2 => match &fs[0] {
                Expr::Var(v) => Some((false, v, &fs[1])),
                _ => None,
            },
            Expr::Neg(inner) => split(inner).map(|(_, v, r)| (true, v, r)),
            _ => None,
        }
    }
    let nonzero: Vec<&Expr> = terms.iter().filter(|t| !t.is_zero()).collect();
    if nonzero.len() >= 2 {
        if let Some((_, v0, _)) = split(nonzero[0]) {
            if nonzero.iter().all(|t| matches!(split(t), Some((_, v, _)) if v == v0)) {
                let inner = nonzero
                    .iter()
                    .map(|t| {
                        let (neg, _, rest) = split(t).unwrap();
                        if neg {
                            Expr::Neg(Box::new(rest.clone()))
                        } else {
                            rest.clone()
                        }
                    })
                    .collect();
                return Expr::Mul(vec![Expr::var(v0), Expr::Add(inner)]);
            }
        }
    }
    sum_expr(terms)
}

/// Matrix-vector step over symbolic entries. `positions` are the bit
/// positions (shift amounts) of the gate's qubits, most significant
/// first; `names_in` maps every amplitude index to its current (re, im)
/// variable names. Touched amplitudes get fresh variables at
/// `to_step`; untouched amplitudes get explicit pass-through equalities
/// unless `elide` is set, in which case they keep their old names.
pub fn encode_matrix_step(
    n_qubits: usize,
    qubits: &[usize],
    matrix: &[SymComplex],
    names_in: &[(String, String)],
    to_step: usize,
    elide: bool,
) -> (StepConstraint, Vec<(String, String)>) {
    let dim_bits = qubits.len();
    let side = 1usize << dim_bits;
    assert_eq!(matrix.len(), side * side);
    let positions: Vec<usize> = qubits.iter().map(|&q| n_qubits - 1 - q).collect();

    let size = 1usize << n_qubits;
    let mut names_out = names_in.to_vec();
    let mut equations = Vec::new();

    for base in 0..size {
        // walk each group once, from its representative with all gate bits 0
        if positions.iter().any(|&p| base & (1 << p) != 0) {
            continue;
        }
        // group member for local row r: set bits per r
        let member = |r: usize| {
            let mut idx = base;
            for (k, &p) in positions.iter().enumerate() {
                if r & (1 << (dim_bits - 1 - k)) != 0 {
                    idx |= 1 << p;
                }
            }
            idx
        };
        for row in 0..side {
            let i = member(row);
            let identity_row = (0..side).all(|col| {
                let e = &matrix[row * side + col];
                if col == row {
                    e.re == Expr::int(1) && e.im.is_zero()
                } else {
                    e.re.is_zero() && e.im.is_zero()
                }
            });
            if identity_row && elide {
                continue;
            }
            let mut re_terms = Vec::new();
            let mut im_terms = Vec::new();
            for col in 0..side {
                let e = &matrix[row * side + col];
                let j = member(col);
                let (xr, xi) = (
                    Expr::var(&names_in[j].0),
                    Expr::var(&names_in[j].1),
                );
                // (er + i ei)(xr + i xi)
                re_terms.push(mul_expr(&e.re, xr.clone()));
                if !e.im.is_zero() {
                    re_terms.push(Expr::Neg(Box::new(mul_expr(&e.im, xi.clone()))));
                }
                im_terms.push(mul_expr(&e.re, xi));
                if !e.im.is_zero() {
                    im_terms.push(mul_expr(&e.im, xr));
                }
            }
            let lhs_re = amp_var(n_qubits, i, to_step, Part::Re);
            let lhs_im = amp_var(n_qubits, i, to_step, Part::Im);
            names_out[i] = (lhs_re.clone(), lhs_im.clone());
            equations.push(AmpEquation {
                index: i,
                lhs_re,
                lhs_im,
                rhs_re: factored_sum(re_terms),
                rhs_im: factored_sum(im_terms),
                passthrough: identity_row,
            });
        }
    }
    equations.sort_by_key(|eq| eq.index);
    (
        StepConstraint {
            step: to_step,
            equations,
        },
        names_out,
    )
}

/// Encode one concrete gate application as a step constraint between
/// two adjacent steps, with explicit pass-throughs. Abstract gates are
/// rejected; the abstraction path in vcgen handles them.
pub fn encode_gate_step(
    app: &GateApplication,
    n_qubits: usize,
    from_step: usize,
    to_step: usize,
) -> Result<StepConstraint, EncodeError> {
    let matrix = gate_sym_matrix(&app.gate)?;
    let names_in = step_var_names(n_qubits, from_step);
    let (sc, _) = encode_matrix_step(n_qubits, &app.qubits, &matrix, &names_in, to_step, false);
    Ok(sc)
}

// ---------------------------------------------------------------------------
// Conditions
// ---------------------------------------------------------------------------

/// The property forms of the verification surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    /// State fixed to one computational basis vector.
    InputBasis(usize),
    /// All amplitude mass inside the given basis set: amplitudes
    /// outside it are zero.
    Subspace(BTreeSet<usize>),
    /// Expected Hamming weight equal between two steps.
    HwEquals { step_a: usize, step_b: usize },
    /// Arbitrary formula, used verbatim.
    Explicit(Formula),
}

/// Quadratic expression for the expected Hamming weight at a step,
/// over the given variable names.
pub fn hw_expr(n_qubits: usize, names: &[(String, String)]) -> Expr {
    debug_assert_eq!(names.len(), 1 << n_qubits);
    let mut terms = Vec::new();
    for (i, (re, im)) in names.iter().enumerate() {
        let w = i.count_ones() as i64;
        if w == 0 {
            continue;
        }
        let sq = Expr::Add(vec![
            Expr::Mul(vec![Expr::var(re), Expr::var(re)]),
            Expr::Mul(vec![Expr::var(im), Expr::var(im)]),
        ]);
        terms.push(mul_expr(&Expr::int(w), sq));
    }
    sum_expr(terms)
}

pub fn encode_condition_with_names(
    cond: &Condition,
    n_qubits: usize,
    names: &[(String, String)],
    names_b: Option<&[(String, String)]>,
) -> Formula {
    match cond {
        Condition::InputBasis(basis) => {
            let mut atoms = Vec::new();
            for (i, (re, im)) in names.iter().enumerate() {
                let v = if i == *basis { 1 } else { 0 };
                atoms.push(Formula::eq(Expr::var(re), Expr::int(v)));
                atoms.push(Formula::eq(Expr::var(im), Expr::int(0)));
            }
            Formula::And(atoms)
        }
        Condition::Subspace(allowed) => {
            let mut atoms = Vec::new();
            for (i, (re, im)) in names.iter().enumerate() {
                if !allowed.contains(&i) {
                    atoms.push(Formula::eq(Expr::var(re), Expr::int(0)));
                    atoms.push(Formula::eq(Expr::var(im), Expr::int(0)));
                }
            }
            Formula::And(atoms)
        }
        Condition::HwEquals { .. } => {
            let nb = names_b.expect("HwEquals needs both step name sets");
            Formula::eq(hw_expr(n_qubits, names), hw_expr(n_qubits, nb))
        }
        Condition::Explicit(f) => f.clone(),
    }
}

/// Condition over the standard per-step variable names.
pub fn encode_condition(cond: &Condition, n_qubits: usize, step: usize) -> Formula {
    let names = step_var_names(n_qubits, step);
    let names_b = if let Condition::HwEquals { step_a, step_b } = cond {
        let a = step_var_names(n_qubits, *step_a);
        let b = step_var_names(n_qubits, *step_b);
        return encode_condition_with_names(cond, n_qubits, &a, Some(&b));
    } else {
        None
    };
    encode_condition_with_names(cond, n_qubits, &names, names_b)
}

/// Distinct variables and top-level conjuncts of a formula list.
pub fn count_formula_symbols(formulas: &[Formula]) -> (usize, usize) {
    let mut vars = BTreeSet::new();
    let mut conjuncts = 0usize;
    for f in formulas {
        f.collect_vars(&mut vars);
        conjuncts += f.conjuncts().len();
    }
    (vars.len(), conjuncts)
}
