//! Dense state vectors for small systems.
//!
//! Qubit `q` is bit `q` of the basis index. Used to cross-check the tableau,
//! to build code states directly as `∏(1 + A)|0…0⟩`, and to carry
//! non-Clifford seed states through the Clifford pipeline.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::model::TdModel;
use crate::pauli::PauliOp;
use crate::tableau::Tableau;

pub const DEFAULT_QUBIT_CAP: usize = 22;

/// Tolerance for norms and eigenvalue checks.
pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{n} qubits exceed the dense cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error("expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} is not a seed")]
    NotASeed(usize),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("measured norm {measured} differs from the closed form {expected}")]
    NormMismatch { measured: f64, expected: f64 },
}

pub type Unitary2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

/// Which D-cubes of a code-state construction get a `(1 + A)` factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Region {
    All,
    /// A indices.
    Cubes(Vec<usize>),
}

/// A directly constructed code state and its norm before normalization.
#[derive(Debug, Clone)]
pub struct Ewsc {
    pub state: DenseState,
    pub raw_norm: f64,
}

impl DenseState {
    pub fn basis(n: usize, index: u64) -> Result<Self, OracleError> {
        DenseState::basis_with_cap(n, index, DEFAULT_QUBIT_CAP)
    }

    pub fn basis_with_cap(n: usize, index: u64, cap: usize) -> Result<Self, OracleError> {
        if n > cap || n >= 64 {
            return Err(OracleError::TooManyQubits { n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[(index as usize) & ((1 << n) - 1)] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self, OracleError> {
        DenseState::basis(n, 0)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, OracleError> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(OracleError::DimensionMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(DenseState { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(Complex64::norm_sqr).sum())
    }

    pub fn normalize(&mut self) -> Result<f64, OracleError> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(OracleError::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= norm;
        }
        Ok(norm)
    }

    fn check(&self, q: usize) -> Result<(), OracleError> {
        if q < self.n {
            Ok(())
        } else {
            Err(OracleError::QubitOutOfRange { qubit: q, n: self.n })
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), OracleError> {
        for q in gate.qubits() {
            self.check(q)?;
        }
        match *gate {
            Gate::H(q) => {
                let s = core::f64::consts::FRAC_1_SQRT_2;
                let h = Complex64::new(s, 0.0);
                self.apply_unitary(q, &[[h, h], [h, -h]])?;
            }
            Gate::X(q) => {
                let bit = 1 << q;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        self.amps.swap(i, i | bit);
                    }
                }
            }
            Gate::Z(q) => {
                let bit = 1 << q;
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Cx(c, t) => {
                let (cb, tb) = (1 << c, 1 << t);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
        }
        Ok(())
    }

    /// Any single-qubit unitary `u` on qubit `q`, `u[row][col]`.
    pub fn apply_unitary(&mut self, q: usize, u: &Unitary2) -> Result<(), OracleError> {
        self.check(q)?;
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Like [`DenseState::apply_unitary`], restricted to seed qubits.
    pub fn apply_seed_unitary(&mut self, seeds: &[usize], q: usize, u: &Unitary2) -> Result<(), OracleError> {
        if !seeds.contains(&q) {
            return Err(OracleError::NotASeed(q));
        }
        self.apply_unitary(q, u)
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), OracleError> {
        if circuit.n_qubits != self.n {
            return Err(OracleError::DimensionMismatch {
                expected: self.n,
                got: circuit.n_qubits,
            });
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// `|ψ⟩ ← P|ψ⟩`, with `Y = iXZ`.
    pub fn apply_pauli(&mut self, p: &PauliOp) -> Result<(), OracleError> {
        let out = self.pauli_image(p)?;
        self.amps = out;
        Ok(())
    }

    fn pauli_image(&self, p: &PauliOp) -> Result<Vec<Complex64>, OracleError> {
        if p.num_qubits() != self.n {
            return Err(OracleError::DimensionMismatch {
                expected: self.n,
                got: p.num_qubits(),
            });
        }
        let xm = mask(p.x.ones());
        let zm = mask(p.z.ones());
        let ys = (xm & zm).count_ones() as usize + if p.negative { 2 } else { 0 };
        let phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][ys % 4];
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (j, &a) in self.amps.iter().enumerate() {
            let sign = if (j as u64 & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[j ^ xm as usize] = phase * a * sign;
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩` for a normalized state.
    pub fn expectation(&self, p: &PauliOp) -> Result<f64, OracleError> {
        let img = self.pauli_image(p)?;
        Ok(inner(&self.amps, &img).re)
    }
}

fn mask(ones: impl Iterator<Item = usize>) -> u64 {
    ones.fold(0, |m, q| m | 1 << q)
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Runs `circuit` gate by gate from `init`.
pub fn dense_run(circuit: &Circuit, init: DenseState) -> Result<DenseState, OracleError> {
    let mut state = init;
    state.apply_circuit(circuit)?;
    Ok(state)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64, OracleError> {
    if a.n != b.n {
        return Err(OracleError::DimensionMismatch {
            expected: a.n,
            got: b.n,
        });
    }
    Ok(inner(&a.amps, &b.amps).norm_sqr())
}

/// True when `dense` is a `+1` eigenvector of every generator of `state`.
pub fn tableau_crosscheck(state: &Tableau, dense: &DenseState) -> Result<bool, OracleError> {
    if state.num_qubits() != dense.n {
        return Err(OracleError::DimensionMismatch {
            expected: dense.n,
            got: state.num_qubits(),
        });
    }
    let norm = dense.norm();
    if norm == 0.0 {
        return Ok(false);
    }
    for g in state.generators() {
        let e = dense.expectation(&g)? / (norm * norm);
        if (e - 1.0).abs() > TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∏_{γ ∈ Ω} (1 + A_γ)` applied to `|0…0⟩` with Hadamards on the
/// representatives of the cubes outside `Ω`, then normalized.
///
/// For `Ω = All` the norm before normalization must equal
/// `2^{|R|/2} · 2^{#A/2}` with `|R| = #A - rank(G_X)`; a mismatch is an error.
pub fn dense_ewsc(model: &TdModel, reps: &[Option<usize>], region: &Region) -> Result<Ewsc, OracleError> {
    let n = model.n_qubits();
    let mut state = DenseState::zero(n)?;
    let n_a = model.a_terms().len();
    let inside: Vec<bool> = match region {
        Region::All => vec![true; n_a],
        Region::Cubes(ix) => {
            let mut v = vec![false; n_a];
            for &i in ix {
                if i < n_a {
                    v[i] = true;
                }
            }
            v
        }
    };
    for (i, rep) in reps.iter().enumerate() {
        if let (Some(q), false) = (rep, inside.get(i).copied().unwrap_or(false)) {
            state.apply_gate(&Gate::H(*q))?;
        }
    }
    for (term, _) in model.a_terms().iter().zip(&inside).filter(|(_, &inn)| inn) {
        let xm = mask(term.op.x.ones()) as usize;
        let old = state.amps.clone();
        for (j, a) in state.amps.iter_mut().enumerate() {
            *a += old[j ^ xm];
        }
    }
    let raw_norm = state.normalize()?;
    if *region == Region::All {
        let redundancies = n_a - crate::gf2::rank(&model.gx());
        let expected = libm::pow(2.0, (redundancies + n_a) as f64 / 2.0);
        if (raw_norm / expected - 1.0).abs() > TOLERANCE {
            return Err(OracleError::NormMismatch {
                measured: raw_norm,
                expected,
            });
        }
    }
    Ok(Ewsc { state, raw_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Layer, Tag};
    use proptest::prelude::*;

    fn circuit(n: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push_layer(Layer::single(Tag::Untagged, alloc::vec![*g]));
        }
        c
    }

    #[test]
    fn hadamard() {
        let s = dense_run(&circuit(1, &[Gate::H(0)]), DenseState::zero(1).unwrap()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - r).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn cap_and_fidelity() {
        assert_eq!(
            DenseState::zero(23),
            Err(OracleError::TooManyQubits { n: 23, cap: 22 })
        );
        let a = DenseState::basis(2, 1).unwrap();
        let b = DenseState::basis(2, 2).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn bell_crosscheck() {
        let bell = circuit(2, &[Gate::H(0), Gate::Cx(0, 1)]);
        let t = Tableau::run(&bell).unwrap();
        let d = dense_run(&bell, DenseState::zero(2).unwrap()).unwrap();
        assert!(tableau_crosscheck(&t, &d).unwrap());
        assert!(!tableau_crosscheck(&t, &DenseState::zero(2).unwrap()).unwrap());
    }

    #[test]
    fn seed_unitary_restricted() {
        let mut s = DenseState::zero(2).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let id = [[one, zero], [zero, one]];
        assert_eq!(s.apply_seed_unitary(&[0], 1, &id), Err(OracleError::NotASeed(1)));
        assert!(s.apply_seed_unitary(&[0], 0, &id).is_ok());
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        (0..4u8, 0..n, 1..n).prop_map(move |(k, a, off)| match k {
            0 => Gate::H(a),
            1 => Gate::X(a),
            2 => Gate::Z(a),
            _ => Gate::Cx(a, (a + off) % n),
        })
    }

    proptest! {
        #[test]
        fn agrees_with_tableau(gates in proptest::collection::vec(arb_gate(5), 0..40)) {
            let c = circuit(5, &gates);
            let t = Tableau::run(&c).unwrap();
            let d = dense_run(&c, DenseState::zero(5).unwrap()).unwrap();
            prop_assert!((d.norm() - 1.0).abs() < TOLERANCE);
            prop_assert!(tableau_crosscheck(&t, &d).unwrap());
        }
    }
}
