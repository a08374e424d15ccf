//! TD models `[d_n, d_s, d_l, D]`: terms, commutation, GSD and the counting
//! formulas for redundancies and seeds.
//!
//! Qubits sit on the `d_s`-cubes of the lattice and are indexed by the
//! canonical cube order. An A term is `∏ X` over the `d_s`-faces of a
//! `D`-cube; a B term is `∏ Z` over the `d_s`-cubes that contain a
//! `d_n`-cube node and lie in a `d_l`-dimensional leaf through it.
//!
//! Under open boundaries a B term keeps the cofaces that exist; see the
//! README for the boundary convention.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::binomial;
use crate::gf2::{self, BitMatrix, BitVector};
use crate::lattice::{Cube, DirSet, Lattice, LatticeError, Leaf, PatternEntry};
use crate::pauli::PauliOp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid TD parameters {0}: need d_n <= d_s <= d_l <= D")]
    InvalidParams(TdParams),
    #[error("lattice dimension {lattice} does not match model dimension {model}")]
    DimensionMismatch { lattice: usize, model: usize },
    #[error("{0} is not a stabilizer code")]
    NotAStabilizerCode(TdParams),
    #[error("unsupported model: {0}")]
    Unsupported(&'static str),
    #[error("redundancy formula gives {formula} but #A - rank(G_X) = {rank_based}")]
    InternalConsistency { formula: u64, rank_based: u64 },
    #[error("product of the A terms of a redundancy class is not the identity")]
    RedundancyCheckFailed,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TdParams {
    pub d_n: usize,
    pub d_s: usize,
    pub d_l: usize,
    pub dim: usize,
}

impl TdParams {
    pub fn new(d_n: usize, d_s: usize, d_l: usize, dim: usize) -> Result<Self, ModelError> {
        let p = TdParams { d_n, d_s, d_l, dim };
        if d_n <= d_s && d_s <= d_l && d_l <= dim && dim >= 1 {
            Ok(p)
        } else {
            Err(ModelError::InvalidParams(p))
        }
    }

    /// `C(d_l - d_n, d_s - d_n)` even: every A term commutes with every B term.
    pub fn is_stabilizer_code(&self) -> bool {
        binomial(self.d_l - self.d_n, self.d_s - self.d_n).is_multiple_of(2)
    }

    /// The `[d-1, d, d+1, D]` family that carries the seed construction.
    pub fn is_seed_family(&self) -> bool {
        self.d_s >= 1 && self.d_n + 1 == self.d_s && self.d_s + 1 == self.d_l
    }

    /// `D* = D - d_s`.
    pub fn codim(&self) -> usize {
        self.dim - self.d_s
    }
}

impl fmt::Debug for TdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.d_n, self.d_s, self.d_l, self.dim)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATerm {
    pub cube: Cube,
    pub op: PauliOp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BTerm {
    pub node: Cube,
    pub leaf: Leaf,
    pub op: PauliOp,
}

#[derive(Debug, Clone)]
pub struct TdModel {
    lattice: Lattice,
    params: TdParams,
    a_terms: Vec<ATerm>,
    b_terms: Vec<BTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationReport {
    pub commuting: bool,
    /// `(A index, B index)` pairs with odd overlap.
    pub violating_pairs: Vec<(usize, usize)>,
}

/// A set of A terms, selected by a star pattern, whose product is identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReClass {
    pub pattern: Vec<PatternEntry>,
    /// Indices into [`TdModel::a_terms`].
    pub members: Vec<usize>,
}

impl TdModel {
    pub fn build(lattice: Lattice, params: TdParams) -> Result<Self, ModelError> {
        if lattice.dim() != params.dim {
            return Err(ModelError::DimensionMismatch {
                lattice: lattice.dim(),
                model: params.dim,
            });
        }
        let n = lattice.cube_count(params.d_s);
        let to_op_x = |cubes: &[Cube]| {
            PauliOp::x_on(n, cubes.iter().map(|c| lattice.index_of(c).expect("face in lattice")))
        };
        let mut a_terms = Vec::with_capacity(lattice.cube_count(params.dim));
        for cube in lattice.cubes(params.dim)? {
            let faces = lattice.faces(cube, params.d_s)?;
            a_terms.push(ATerm {
                cube: *cube,
                op: to_op_x(&faces),
            });
        }
        let mut b_terms = Vec::new();
        for node in lattice.cubes(params.d_n)? {
            for leaf in lattice.leaves_through(node, params.d_l)? {
                let cof = lattice.cofaces_in_leaf(node, params.d_s, &leaf)?;
                if cof.is_empty() {
                    continue;
                }
                let op = PauliOp::z_on(n, cof.iter().map(|c| lattice.index_of(c).expect("coface in lattice")));
                b_terms.push(BTerm {
                    node: *node,
                    leaf,
                    op,
                });
            }
        }
        Ok(TdModel {
            lattice,
            params,
            a_terms,
            b_terms,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn params(&self) -> TdParams {
        self.params
    }

    pub fn n_qubits(&self) -> usize {
        self.lattice.cube_count(self.params.d_s)
    }

    pub fn a_terms(&self) -> &[ATerm] {
        &self.a_terms
    }

    pub fn b_terms(&self) -> &[BTerm] {
        &self.b_terms
    }

    pub fn qubit_index(&self, cube: &Cube) -> Option<usize> {
        if cube.dim() != self.params.d_s {
            return None;
        }
        self.lattice.index_of(cube)
    }

    pub fn qubit_cube(&self, index: usize) -> Option<Cube> {
        self.lattice.cube_at(self.params.d_s, index)
    }

    pub fn a_index(&self, cube: &Cube) -> Option<usize> {
        if cube.dim() != self.params.dim {
            return None;
        }
        self.lattice.index_of(cube)
    }

    /// A-term supports as rows.
    pub fn gx(&self) -> BitMatrix {
        let rows: Vec<BitVector> = self.a_terms.iter().map(|t| t.op.x.clone()).collect();
        BitMatrix::from_rows(self.n_qubits(), &rows)
    }

    /// B-term supports as rows.
    pub fn gz(&self) -> BitMatrix {
        let rows: Vec<BitVector> = self.b_terms.iter().map(|t| t.op.z.clone()).collect();
        BitMatrix::from_rows(self.n_qubits(), &rows)
    }

    fn require_code(&self) -> Result<(), ModelError> {
        if self.params.is_stabilizer_code() {
            Ok(())
        } else {
            Err(ModelError::NotAStabilizerCode(self.params))
        }
    }

    fn require_periodic(&self) -> Result<(), ModelError> {
        if self.lattice.is_fully_periodic() {
            Ok(())
        } else {
            Err(ModelError::Unsupported("operation needs a fully periodic lattice"))
        }
    }

    pub fn check_commutation(&self) -> CommutationReport {
        let mut violating_pairs = Vec::new();
        for (i, a) in self.a_terms.iter().enumerate() {
            for (j, b) in self.b_terms.iter().enumerate() {
                if a.op.x.dot(&b.op.z) {
                    violating_pairs.push((i, j));
                }
            }
        }
        CommutationReport {
            commuting: violating_pairs.is_empty(),
            violating_pairs,
        }
    }

    /// `n - rank(G_X) - rank(G_Z)`.
    pub fn log2_gsd(&self) -> Result<u64, ModelError> {
        self.require_code()?;
        let n = self.n_qubits();
        Ok((n - gf2::rank(&self.gx()) - gf2::rank(&self.gz())) as u64)
    }

    /// Number of independent A-term redundancies, from the closed form,
    /// cross-checked against `#A - rank(G_X)`.
    pub fn a_redundancy_count(&self) -> Result<u64, ModelError> {
        self.require_periodic()?;
        let formula = redundancy_formula(self.lattice.sizes(), self.params.d_s);
        let rank_based = (self.a_terms.len() - gf2::rank(&self.gx())) as u64;
        if formula != rank_based {
            return Err(ModelError::InternalConsistency { formula, rank_based });
        }
        Ok(formula)
    }

    /// The simple redundancy classes: fix half-integer coordinates along
    /// `D - d_s - 1` directions, leave the rest free. Each class is checked to
    /// multiply to the identity.
    pub fn enumerate_re_classes(&self) -> Result<Vec<ReClass>, ModelError> {
        self.require_periodic()?;
        let dim = self.params.dim;
        if self.params.d_s + 1 > dim {
            return Ok(Vec::new());
        }
        let fixed_count = dim - self.params.d_s - 1;
        let mut classes = Vec::new();
        for fixed in DirSet::subsets_of_size(dim, fixed_count) {
            let dirs: Vec<usize> = fixed.iter().collect();
            let mut values = vec![0u32; dirs.len()];
            loop {
                let mut pattern = vec![PatternEntry::Star; dim];
                for (k, &dir) in dirs.iter().enumerate() {
                    pattern[dir] = PatternEntry::Fixed(2 * values[k] + 1);
                }
                let cubes = self.lattice.star_expand(&pattern, Some(dim))?;
                let mut acc = BitVector::zeros(self.n_qubits());
                let mut members = Vec::with_capacity(cubes.len());
                for c in &cubes {
                    let idx = self.a_index(c).expect("D-cube indexed");
                    acc.xor_assign(&self.a_terms[idx].op.x);
                    members.push(idx);
                }
                if !acc.is_zero() {
                    return Err(ModelError::RedundancyCheckFailed);
                }
                classes.push(ReClass { pattern, members });
                if !advance(&mut values, &dirs, self.lattice.sizes()) {
                    break;
                }
            }
        }
        Ok(classes)
    }

    /// Maps each qubit of `self` to the qubit of `host` at the same doubled
    /// coordinates. Used to check a truncated circuit built on a periodic
    /// host against the open-boundary model it prepares.
    pub fn qubit_embedding(&self, host: &TdModel) -> Result<Vec<usize>, ModelError> {
        if host.params != self.params {
            return Err(ModelError::Unsupported("embedding requires identical TD parameters"));
        }
        let mut map = Vec::with_capacity(self.n_qubits());
        for c in self.lattice.cubes(self.params.d_s)? {
            let idx = host
                .lattice
                .index_of(c)
                .ok_or(ModelError::Unsupported("cell missing from host lattice"))?;
            map.push(idx);
        }
        Ok(map)
    }
}

/// Odometer step over `values[k] ∈ 0..sizes[dirs[k]]`; `false` once wrapped.
fn advance(values: &mut [u32], dirs: &[usize], sizes: &[u32]) -> bool {
    for k in (0..dirs.len()).rev() {
        values[k] += 1;
        if values[k] < sizes[dirs[k]] {
            return true;
        }
        values[k] = 0;
    }
    false
}

/// `|R_D| = Σ_{p=0}^{D*-1} Σ_{|S|=p} ∏_{i∈S} (L_i - 1)`.
pub fn redundancy_formula(sizes: &[u32], d: usize) -> u64 {
    let dim = sizes.len();
    let codim = dim.saturating_sub(d);
    (0..codim)
        .map(|p| {
            DirSet::subsets_of_size(dim, p)
                .into_iter()
                .map(|s| s.iter().map(|i| sizes[i] as u64 - 1).product::<u64>())
                .sum::<u64>()
        })
        .sum()
}

/// Number of seeds, `Σ_{p=d+1}^{D} Σ_{|S|=p} C(p,d) ∏_{i∉S} (L_i - 1)`.
pub fn seed_count(params: &TdParams, sizes: &[u32]) -> u64 {
    let d = params.d_s;
    let dim = params.dim;
    (d + 1..=dim)
        .map(|p| {
            DirSet::subsets_of_size(dim, p)
                .into_iter()
                .map(|s| {
                    binomial(p, d)
                        * s.complement(dim).iter().map(|i| sizes[i] as u64 - 1).product::<u64>()
                })
                .sum::<u64>()
        })
        .sum()
}

/// The same count with an inner sum in place of the inner product. Kept only
/// to show that it disagrees with the logical-qubit count.
pub fn seed_count_sum_variant(params: &TdParams, sizes: &[u32]) -> u64 {
    let d = params.d_s;
    let dim = params.dim;
    (d + 1..=dim)
        .map(|p| {
            DirSet::subsets_of_size(dim, p)
                .into_iter()
                .map(|s| {
                    binomial(p, d) * s.complement(dim).iter().map(|i| sizes[i] as u64 - 1).sum::<u64>()
                })
                .sum::<u64>()
        })
        .sum()
}
