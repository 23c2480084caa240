//! Concrete state-vector simulator. This is the brute-force ground
//! truth every symbolic claim is checked against: gate semantics,
//! Hamming-weight preservation, solver model cross-checks.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, GateApplication, GateKind};

pub const EQ_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-6;

/// Width guard for dense unitary extraction.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("abstract gate `{0}` has no instantiation for its parameter")]
    UninstantiatedParameter(String),
    #[error("gate addresses qubit {index} outside width {n_qubits}")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("circuit width {0} exceeds the dense-unitary guard of {MAX_UNITARY_QUBITS} qubits")]
    TooWideForUnitary(usize),
    #[error("non-finite amplitude produced")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    /// 2^n amplitudes; index i carries bitstring b(i) with qubit 0 as
    /// the leftmost (most significant) bit.
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0)
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// Uniform on the sphere: standard complex Gaussians, normalized.
    pub fn random<R: Rng>(n_qubits: usize, rng: &mut R) -> Self {
        let dist = rand::distributions::Standard;
        let mut amps: Vec<Complex64> = (0..(1usize << n_qubits))
            .map(|_| {
                // Box-Muller from uniform samples
                let u1: f64 = rng.sample(dist);
                let u2: f64 = rng.sample(dist);
                let u3: f64 = rng.sample(dist);
                let u4: f64 = rng.sample(dist);
                let g1 = (-2.0 * u1.max(1e-300).ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                let g2 = (-2.0 * u3.max(1e-300).ln()).sqrt() * (2.0 * std::f64::consts::PI * u4).cos();
                Complex64::new(g1, g2)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Self { n_qubits, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n_qubits == other.n_qubits
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Bit position (shift amount) of a qubit index: qubit 0 is the
/// leftmost bit of the basis label.
fn bit_pos(n_qubits: usize, qubit: usize) -> usize {
    n_qubits - 1 - qubit
}

/// Dense matrix of a concrete gate kind (2x2 or 4x4, row-major).
pub fn gate_matrix(gate: &GateKind) -> Result<Vec<Complex64>, OracleError> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let r = FRAC_1_SQRT_2;
    Ok(match gate {
        GateKind::Hadamard => vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)],
        GateKind::PauliX => vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        GateKind::PauliZ => vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        GateKind::Rx(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![c(ch, 0.0), c(0.0, -sh), c(0.0, -sh), c(ch, 0.0)]
        }
        GateKind::Ry(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![c(ch, 0.0), c(-sh, 0.0), c(sh, 0.0), c(ch, 0.0)]
        }
        GateKind::Rz(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            vec![c(ch, -sh), c(0.0, 0.0), c(0.0, 0.0), c(ch, sh)]
        }
        GateKind::Cnot => {
            let mut m = vec![c(0.0, 0.0); 16];
            for (row, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m[row * 4 + col] = c(1.0, 0.0);
            }
            m
        }
        GateKind::Cz => {
            let mut m = vec![c(0.0, 0.0); 16];
            for row in 0..4 {
                m[row * 4 + row] = if row == 3 { c(-1.0, 0.0) } else { c(1.0, 0.0) };
            }
            m
        }
        GateKind::Rzz(t) => {
            let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
            let mut m = vec![c(0.0, 0.0); 16];
            // e^{-i t/2 Z(x)Z}: phase e^{-it/2} on |00>,|11>, e^{+it/2} on |01>,|10>
            for row in 0..4 {
                let sign = if row == 0 || row == 3 { -1.0 } else { 1.0 };
                m[row * 4 + row] = c(ch, sign * sh);
            }
            m
        }
        GateKind::CustomUnitary(u) => {
            let d = u.dim();
            (0..d * d).map(|i| u.entry(i / d, i % d)).collect()
        }
        GateKind::AbstractH4(name) => {
            return Err(OracleError::UninstantiatedParameter(name.clone()))
        }
    })
}

/// The H(4) matrix at a concrete angle: identity on |00>,|11>, the
/// rotation [[c, s], [-s, c]] on span{|01>, |10>}.
pub fn h4_matrix(lambda: f64) -> Vec<Complex64> {
    let (co, si) = ((lambda / 2.0).cos(), (lambda / 2.0).sin());
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let c = Complex64::new(co, 0.0);
    let s = Complex64::new(si, 0.0);
    vec![
        one, z, z, z, //
        z, c, s, z, //
        z, -s, c, z, //
        z, z, z, one,
    ]
}

fn concrete_matrix(
    app: &GateApplication,
    params: &HashMap<String, f64>,
) -> Result<Vec<Complex64>, OracleError> {
    match &app.gate {
        GateKind::AbstractH4(name) => match params.get(name) {
            Some(&lambda) => Ok(h4_matrix(lambda)),
            None => Err(OracleError::UninstantiatedParameter(name.clone())),
        },
        g => gate_matrix(g),
    }
}

/// Matrix-vector product restricted to the addressed qubit positions:
/// amplitudes are updated in pairs (1-qubit gates) or quadruples
/// (2-qubit gates) that differ only on the gate's bits. No Kronecker
/// lifting.
pub fn apply_gate_with(
    state: &StateVector,
    app: &GateApplication,
    params: &HashMap<String, f64>,
) -> Result<StateVector, OracleError> {
    for &q in &app.qubits {
        if q >= state.n_qubits {
            return Err(OracleError::QubitOutOfRange {
                index: q,
                n_qubits: state.n_qubits,
            });
        }
    }
    let m = concrete_matrix(app, params)?;
    let n = state.n_qubits;
    let mut out = state.amps.clone();
    match app.qubits.len() {
        1 => {
            let p = bit_pos(n, app.qubits[0]);
            let mask = 1usize << p;
            for i in 0..state.amps.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (a0, a1) = (state.amps[i], state.amps[j]);
                    out[i] = m[0] * a0 + m[1] * a1;
                    out[j] = m[2] * a0 + m[3] * a1;
                }
            }
        }
        2 => {
            let pa = bit_pos(n, app.qubits[0]);
            let pb = bit_pos(n, app.qubits[1]);
            let (ma, mb) = (1usize << pa, 1usize << pb);
            for i in 0..state.amps.len() {
                if i & ma == 0 && i & mb == 0 {
                    let idx = [i, i | mb, i | ma, i | ma | mb];
                    let a: Vec<Complex64> = idx.iter().map(|&k| state.amps[k]).collect();
                    for (row, &k) in idx.iter().enumerate() {
                        out[k] = (0..4).map(|col| m[row * 4 + col] * a[col]).sum();
                    }
                }
            }
        }
        _ => unreachable!("gate arity checked at construction"),
    }
    if out.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(OracleError::NonFinite);
    }
    Ok(StateVector { n_qubits: n, amps: out })
}

pub fn apply_gate(state: &StateVector, app: &GateApplication) -> Result<StateVector, OracleError> {
    apply_gate_with(state, app, &HashMap::new())
}

/// Left fold of `apply_gate` over the ops in step order.
pub fn run(circuit: &Circuit, input: &StateVector) -> Result<StateVector, OracleError> {
    run_with_params(circuit, input, &HashMap::new())
}

pub fn run_with_params(
    circuit: &Circuit,
    input: &StateVector,
    params: &HashMap<String, f64>,
) -> Result<StateVector, OracleError> {
    let mut state = input.clone();
    for app in &circuit.ops {
        state = apply_gate_with(&state, app, params)?;
    }
    Ok(state)
}

/// Expected Hamming weight: sum over basis states of popcount times
/// probability. Errors on inputs that are not normalized, which would
/// make the expectation meaningless.
pub fn expected_hamming_weight(state: &StateVector) -> Result<f64, OracleError> {
    let n2 = state.norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(OracleError::NotNormalized(n2));
    }
    Ok(hamming_weight_raw(state))
}

/// The same weighted sum without the normalization guard (used when
/// comparing raw quadratic forms against the encoder).
pub fn hamming_weight_raw(state: &StateVector) -> f64 {
    state
        .amps
        .iter()
        .enumerate()
        .map(|(i, a)| (i.count_ones() as f64) * a.norm_sqr())
        .sum()
}

/// Dense circuit unitary, columns = run on basis states. Guarded
/// against exponential blowup.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Vec<Vec<Complex64>>, OracleError> {
    circuit_unitary_with(circuit, &HashMap::new())
}

pub fn circuit_unitary_with(
    circuit: &Circuit,
    params: &HashMap<String, f64>,
) -> Result<Vec<Vec<Complex64>>, OracleError> {
    if circuit.n_qubits > MAX_UNITARY_QUBITS {
        return Err(OracleError::TooWideForUnitary(circuit.n_qubits));
    }
    let dim = 1usize << circuit.n_qubits;
    let mut cols = Vec::with_capacity(dim);
    for i in 0..dim {
        let out = run_with_params(circuit, &StateVector::basis_state(circuit.n_qubits, i), params)?;
        cols.push(out.amps);
    }
    Ok(cols)
}

/// Equality of two unitaries (given as column lists) up to one global
/// complex unit factor.
pub fn unitaries_equal_up_to_phase(
    a: &[Vec<Complex64>],
    b: &[Vec<Complex64>],
    tol: f64,
) -> bool {
    if a.len() != b.len() {
        return false;
    }
    // pick the largest entry to fix the phase
    let mut phase = None;
    let mut best = 0.0;
    for (ca, cb) in a.iter().zip(b) {
        for (x, y) in ca.iter().zip(cb) {
            if x.norm() > best && y.norm() > tol {
                best = x.norm();
                phase = Some(x / y);
            }
        }
    }
    let phase = match phase {
        Some(p) if (p.norm() - 1.0).abs() < 1e-6 => p,
        _ => return a.iter().zip(b).all(|(ca, cb)| {
            ca.iter().zip(cb).all(|(x, y)| (x - y).norm() <= tol)
        }),
    };
    a.iter().zip(b).all(|(ca, cb)| {
        ca.iter()
            .zip(cb)
            .all(|(x, y)| (x - phase * y).norm() <= tol)
    })
}
