//! Hermitian Pauli products in binary symplectic form.

use alloc::vec::Vec;
use core::fmt;

use crate::gf2::BitVector;

/// `±∏ X^{x_i} Z^{z_i}` up to the usual `Y = iXZ` convention: a qubit with
/// both bits set carries `Y`, and `negative` is the overall sign.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub x: BitVector,
    pub z: BitVector,
    pub negative: bool,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            negative: false,
        }
    }

    pub fn x_type(x: BitVector) -> Self {
        let n = x.len();
        PauliOp {
            x,
            z: BitVector::zeros(n),
            negative: false,
        }
    }

    pub fn z_type(z: BitVector) -> Self {
        let n = z.len();
        PauliOp {
            x: BitVector::zeros(n),
            z,
            negative: false,
        }
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        PauliOp::x_type(BitVector::from_indices(n, qubits))
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        PauliOp::z_type(BitVector::from_indices(n, qubits))
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits acted on non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.x.ones().chain(self.z.ones()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Symplectic product: `true` when the two operators anticommute.
    pub fn anticommutes(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        !self.anticommutes(other)
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense string such as `+XIZY`.
impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        for i in 0..self.num_qubits() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => "I",
                (true, false) => "X",
                (false, true) => "Z",
                (true, true) => "Y",
            };
            f.write_str(c)?;
        }
        Ok(())
    }
}
