//! Stabilizer-state simulation for H/CNOT/X/Z circuits.
//!
//! Each generator is stored as `i^r X^a Z^b` with `r` mod 4. Only the real
//! signs can appear for Hermitian generators, which is asserted whenever a
//! generator is read back as a [`PauliOp`].

use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::gf2::BitVector;
use crate::model::TdModel;
use crate::pauli::PauliOp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("a tableau needs at least one qubit")]
    InvalidSize,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generators do not describe a pure stabilizer state")]
    NotAStabilizerState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Row {
    x: BitVector,
    z: BitVector,
    r: u8,
}

impl Row {
    fn y_count(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn from_pauli(p: &PauliOp) -> Row {
        let mut row = Row {
            x: p.x.clone(),
            z: p.z.clone(),
            r: 0,
        };
        row.r = ((row.y_count() + if p.negative { 2 } else { 0 }) % 4) as u8;
        row
    }

    fn to_pauli(&self) -> PauliOp {
        let phase = (self.r as usize + 4 - self.y_count() % 4) % 4;
        assert!(phase.is_multiple_of(2), "imaginary phase on a stabilizer generator");
        PauliOp {
            x: self.x.clone(),
            z: self.z.clone(),
            negative: phase == 2,
        }
    }

    /// `self ← self · other`.
    fn mul_assign(&mut self, other: &Row) {
        let cross = self.z.dot(&other.x) as u8;
        self.r = (self.r + other.r + 2 * cross) % 4;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    fn bit(&self, col: usize, n: usize) -> bool {
        if col < n {
            self.x.get(col)
        } else {
            self.z.get(col - n)
        }
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<Row>,
}

/// Expectation values and the verdict of [`Tableau::verify_code_state`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeStateReport {
    pub a_expectations: Vec<i8>,
    pub b_expectations: Vec<i8>,
    pub violated_a: Vec<usize>,
    pub violated_b: Vec<usize>,
    pub pass: bool,
}

impl Tableau {
    /// `|0…0⟩`, stabilized by every `Z_i`.
    pub fn new_zero(n: usize) -> Result<Self, TableauError> {
        if n == 0 {
            return Err(TableauError::InvalidSize);
        }
        let rows = (0..n)
            .map(|i| Row {
                x: BitVector::zeros(n),
                z: BitVector::from_indices(n, [i]),
                r: 0,
            })
            .collect();
        Ok(Tableau { n, rows })
    }

    /// Builds a state from `n` commuting, independent generators.
    pub fn from_generators(gens: &[PauliOp]) -> Result<Self, TableauError> {
        let n = gens.first().map(PauliOp::num_qubits).ok_or(TableauError::InvalidSize)?;
        if n == 0 {
            return Err(TableauError::InvalidSize);
        }
        for g in gens {
            if g.num_qubits() != n {
                return Err(TableauError::DimensionMismatch {
                    expected: n,
                    got: g.num_qubits(),
                });
            }
        }
        let t = Tableau {
            n,
            rows: gens.iter().map(Row::from_pauli).collect(),
        };
        if gens.len() != n || !t.is_valid() {
            return Err(TableauError::NotAStabilizerState);
        }
        Ok(t)
    }

    /// `|0…0⟩` driven through `circuit`.
    pub fn run(circuit: &Circuit) -> Result<Self, TableauError> {
        let mut t = Tableau::new_zero(circuit.n_qubits)?;
        t.apply_circuit(circuit)?;
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> Vec<PauliOp> {
        self.rows.iter().map(Row::to_pauli).collect()
    }

    /// Generators pairwise commute and are independent.
    pub fn is_valid(&self) -> bool {
        let ops = self.generators();
        for (i, a) in ops.iter().enumerate() {
            for b in &ops[i + 1..] {
                if a.anticommutes(b) {
                    return false;
                }
            }
        }
        self.clone().reduce() == self.n
    }

    fn check(&self, q: usize) -> Result<(), TableauError> {
        if q < self.n {
            Ok(())
        } else {
            Err(TableauError::QubitOutOfRange { qubit: q, n: self.n })
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), TableauError> {
        for q in gate.qubits() {
            self.check(q)?;
        }
        match *gate {
            Gate::H(q) => {
                for row in &mut self.rows {
                    let a = row.x.get(q);
                    let b = row.z.get(q);
                    if a && b {
                        row.r = (row.r + 2) % 4;
                    }
                    row.x.set(q, b);
                    row.z.set(q, a);
                }
            }
            Gate::X(q) => {
                for row in &mut self.rows {
                    if row.z.get(q) {
                        row.r = (row.r + 2) % 4;
                    }
                }
            }
            Gate::Z(q) => {
                for row in &mut self.rows {
                    if row.x.get(q) {
                        row.r = (row.r + 2) % 4;
                    }
                }
            }
            Gate::Cx(c, t) => {
                for row in &mut self.rows {
                    if row.x.get(c) {
                        row.x.flip(t);
                    }
                    if row.z.get(t) {
                        row.z.flip(c);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), TableauError> {
        if circuit.n_qubits > self.n {
            return Err(TableauError::DimensionMismatch {
                expected: self.n,
                got: circuit.n_qubits,
            });
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Multiplies the state by a Pauli, i.e. applies it as a gate.
    pub fn apply_pauli(&mut self, p: &PauliOp) -> Result<(), TableauError> {
        self.check_len(p)?;
        for row in &mut self.rows {
            if p.x.dot(&row.z) ^ p.z.dot(&row.x) {
                row.r = (row.r + 2) % 4;
            }
        }
        Ok(())
    }

    fn check_len(&self, p: &PauliOp) -> Result<(), TableauError> {
        if p.num_qubits() == self.n {
            Ok(())
        } else {
            Err(TableauError::DimensionMismatch {
                expected: self.n,
                got: p.num_qubits(),
            })
        }
    }

    /// Symplectic RREF in place (X columns before Z columns); returns rank.
    /// Zero rows end up last.
    fn reduce(&mut self) -> usize {
        let n = self.n;
        let mut rank = 0;
        for col in 0..2 * n {
            let Some(p) = (rank..self.rows.len()).find(|&i| self.rows[i].bit(col, n)) else {
                continue;
            };
            self.rows.swap(rank, p);
            let pivot = self.rows[rank].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != rank && row.bit(col, n) {
                    row.mul_assign(&pivot);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Unique generator set of the state: reduced row echelon form of the
    /// symplectic matrix, with the signs that the group dictates.
    pub fn canonical(&self) -> Tableau {
        let mut t = self.clone();
        t.reduce();
        t
    }

    pub fn states_equal(&self, other: &Tableau) -> bool {
        self.n == other.n && self.canonical() == other.canonical()
    }

    /// `+1`/`-1` if `±p` stabilizes the state, `0` otherwise.
    pub fn expectation(&self, p: &PauliOp) -> Result<i8, TableauError> {
        Ok(self.expectations(core::slice::from_ref(p))?[0])
    }

    pub fn expectations(&self, ops: &[PauliOp]) -> Result<Vec<i8>, TableauError> {
        for p in ops {
            self.check_len(p)?;
        }
        let canon = self.canonical();
        let n = self.n;
        let pivots: Vec<usize> = canon
            .rows
            .iter()
            .map(|r| (0..2 * n).find(|&c| r.bit(c, n)).expect("full rank"))
            .collect();
        let gens = self.generators();
        Ok(ops
            .iter()
            .map(|p| {
                if gens.iter().any(|g| g.anticommutes(p)) {
                    return 0;
                }
                let target = Row::from_pauli(p);
                let mut rest = target.clone();
                let mut acc = Row {
                    x: BitVector::zeros(n),
                    z: BitVector::zeros(n),
                    r: 0,
                };
                for (row, &col) in canon.rows.iter().zip(&pivots) {
                    if rest.bit(col, n) {
                        rest.mul_assign(row);
                        acc.mul_assign(row);
                    }
                }
                assert!(rest.is_zero(), "commuting Pauli outside the stabilizer group");
                let diff = (acc.r + 4 - target.r) % 4;
                assert!(diff.is_multiple_of(2), "imaginary phase in group membership");
                if diff == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect())
    }

    /// Expectation of every A and B term of `model`; passes when all are `+1`.
    pub fn verify_code_state(&self, model: &TdModel) -> Result<CodeStateReport, TableauError> {
        let a_ops: Vec<PauliOp> = model.a_terms().iter().map(|t| t.op.clone()).collect();
        let b_ops: Vec<PauliOp> = model.b_terms().iter().map(|t| t.op.clone()).collect();
        let a_expectations = self.expectations(&a_ops)?;
        let b_expectations = self.expectations(&b_ops)?;
        let violated = |v: &[i8]| -> Vec<usize> {
            v.iter()
                .enumerate()
                .filter(|(_, &e)| e != 1)
                .map(|(i, _)| i)
                .collect()
        };
        let violated_a = violated(&a_expectations);
        let violated_b = violated(&b_expectations);
        let pass = violated_a.is_empty() && violated_b.is_empty();
        Ok(CodeStateReport {
            a_expectations,
            b_expectations,
            violated_a,
            violated_b,
            pass,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Layer, Tag};
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn circuit(n: usize, gates: &[Gate]) -> Circuit {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push_layer(Layer::single(Tag::Untagged, vec![*g]));
        }
        c
    }

    fn p(s: &str) -> PauliOp {
        let (neg, body) = match s.as_bytes()[0] {
            b'-' => (true, &s[1..]),
            b'+' => (false, &s[1..]),
            _ => (false, s),
        };
        let n = body.len();
        let mut op = PauliOp::identity(n);
        for (i, c) in body.chars().enumerate() {
            match c {
                'X' => op.x.set(i, true),
                'Z' => op.z.set(i, true),
                'Y' => {
                    op.x.set(i, true);
                    op.z.set(i, true);
                }
                _ => {}
            }
        }
        op.negative = neg;
        op
    }

    #[test]
    fn zero_state() {
        assert_eq!(Tableau::new_zero(0), Err(TableauError::InvalidSize));
        let t = Tableau::new_zero(3).unwrap();
        assert_eq!(t.generators(), vec![p("ZII"), p("IZI"), p("IIZ")]);
        let one = Tableau::new_zero(1).unwrap();
        assert_eq!(one.expectation(&p("X")).unwrap(), 0);
        assert_eq!(one.expectation(&p("Z")).unwrap(), 1);
    }

    #[test]
    fn bell_and_flips() {
        let bell = Tableau::run(&circuit(2, &[Gate::H(0), Gate::Cx(0, 1)])).unwrap();
        assert_eq!(bell.expectation(&p("XX")).unwrap(), 1);
        assert_eq!(bell.expectation(&p("ZZ")).unwrap(), 1);
        assert_eq!(bell.expectation(&p("YY")).unwrap(), -1);
        let other = Tableau::run(&circuit(2, &[Gate::H(1), Gate::Cx(1, 0)])).unwrap();
        assert!(bell.states_equal(&other));
        let flipped = Tableau::run(&circuit(1, &[Gate::X(0)])).unwrap();
        assert_eq!(flipped.generators(), vec![p("-Z")]);
        let zero2 = Tableau::new_zero(2).unwrap();
        let one2 = Tableau::run(&circuit(2, &[Gate::X(1)])).unwrap();
        assert!(!zero2.states_equal(&one2));
    }

    #[test]
    fn y_phases() {
        // Z H |0> = |->
        let t = Tableau::run(&circuit(1, &[Gate::H(0), Gate::Z(0)])).unwrap();
        assert_eq!(t.expectation(&p("X")).unwrap(), -1);
        let t = Tableau::from_generators(&[p("Y")]).unwrap();
        let mut h = t.clone();
        h.apply_gate(&Gate::H(0)).unwrap();
        assert_eq!(h.expectation(&p("Y")).unwrap(), -1);
    }

    #[test]
    fn rejects_bad_input() {
        let mut t = Tableau::new_zero(2).unwrap();
        assert_eq!(
            t.apply_gate(&Gate::H(2)),
            Err(TableauError::QubitOutOfRange { qubit: 2, n: 2 })
        );
        assert!(matches!(t.expectation(&p("Z")), Err(TableauError::DimensionMismatch { .. })));
        assert_eq!(
            Tableau::from_generators(&[p("XI"), p("ZI")]),
            Err(TableauError::NotAStabilizerState)
        );
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
        fn gates_keep_a_valid_state(gates in proptest::collection::vec(arb_gate(6), 0..60)) {
            let t = Tableau::run(&circuit(6, &gates)).unwrap();
            prop_assert!(t.is_valid());
            let canon = t.canonical();
            prop_assert!(canon.states_equal(&t));
            // products of stabilizers carry the product of signs
            let g = t.generators();
            let prod = {
                let mut a = Row::from_pauli(&g[0]);
                a.mul_assign(&Row::from_pauli(&g[1]));
                a.to_pauli()
            };
            prop_assert_eq!(t.expectation(&prod).unwrap(), 1);
            prop_assert_eq!(t.expectation(&prod.negated()).unwrap(), -1);
        }

        #[test]
        fn inverse_circuit_returns_to_zero(gates in proptest::collection::vec(arb_gate(5), 0..40)) {
            let mut all: Vec<Gate> = gates.clone();
            all.extend(gates.iter().rev());
            let t = Tableau::run(&circuit(5, &all)).unwrap();
            prop_assert!(t.states_equal(&Tableau::new_zero(5).unwrap()));
        }
    }
}
