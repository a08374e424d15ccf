//! Tetradigit (TD) stabilizer codes on D-dimensional hypercubic lattices.
//!
//! The crate builds `[d_n, d_s, d_l, D]` models from the cell complex of a
//! hypercubic lattice, synthesizes the sequential Hadamard + CNOT circuits that
//! prepare their code states (including the seed/growth circuits that load an
//! arbitrary logical state), and checks every claim about them with exact
//! GF(2) linear algebra and a stabilizer tableau. A small dense state-vector
//! simulator serves as an independent oracle at desk scale.
//!
//! Everything here is `no_std` + `alloc`; file formats, reports and the
//! command-line front end live in the companion `tetradigit` crate.
//!
//! Module map:
//! - [`lattice`]: cells, faces, leaves and star patterns.
//! - [`gf2`]: bit-packed vectors and matrices over the two-element field.
//! - [`pauli`]: pure Pauli products in binary symplectic form.
//! - [`model`]: TD Hamiltonian terms, GSD, redundancies and seed counting.
//! - [`circuit`]: circuit IR, `U_c`, truncation, seeds, `U_g` and entanglers.
//! - [`tableau`]: stabilizer-state simulation and code-state verification.
//! - [`oracle`]: dense amplitudes for cross-checks and non-Clifford seeds.
//! - [`css`]: seed finding for generic CSS codes and preparation plans.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod circuit;
pub mod css;
pub mod gf2;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod pauli;
pub mod tableau;

pub use circuit::{Circuit, Gate, Layer, Segment, Tag};
pub use gf2::{BitMatrix, BitVector};
pub use lattice::{Boundary, Cube, DirSet, Lattice, LatticeSpec, Leaf};
pub use model::{TdModel, TdParams};
pub use pauli::PauliOp;
pub use tableau::Tableau;


/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}
