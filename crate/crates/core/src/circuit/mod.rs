//! Layered Clifford circuits over H, CNOT, X and Z.
//!
//! A [`Layer`] is a set of mutually commuting gates (not necessarily
//! disjoint). Gates inside a layer are grouped into [`Segment`]s that carry a
//! [`Tag`], so that the step/part structure of a synthesized circuit survives
//! interleaving and can be truncated afterwards.

mod seeds;
mod uc;

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::lattice::{DirSet, LatticeError};
use crate::model::{ModelError, TdParams};

pub use seeds::{
    logical_x, seed_entangler, seed_plan, seed_set, synth_ug, SeedEntangler, SeedPlan,
};
pub use uc::{
    depth_of_part, predicted_depth, representative, synth_uc, synth_uc_open, truncate_uc, truncated_spec, Uc,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("unsupported model: {0}")]
    UnsupportedModel(&'static str),
    #[error("circuit has segments without step/part tags")]
    MissingTags,
    #[error("cube has no representative for the requested part")]
    NotRepresentable,
    #[error("seed is not in the canonical seed set")]
    InvalidSeeds,
    #[error("entangler touches qubit {0}, which is not a seed")]
    SeedSetViolation(usize),
    #[error("basis pattern has {got} bits for {expected} seeds")]
    PatternLength { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("CNOT control and target coincide on qubit {0}")]
    SelfTargetingCnot(usize),
    #[error("layer {0} contains gates that do not commute")]
    NonCommutingLayer(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gate {
    H(usize),
    /// `Cx(control, target)`.
    Cx(usize, usize),
    X(usize),
    Z(usize),
}

impl Gate {
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => (q, None),
            Gate::Cx(c, t) => (c, Some(t)),
        };
        core::iter::once(a).chain(b)
    }

    fn roles(&self) -> [(usize, Role); 2] {
        match *self {
            Gate::H(q) => [(q, Role::H), (q, Role::H)],
            Gate::X(q) => [(q, Role::X), (q, Role::X)],
            Gate::Z(q) => [(q, Role::Z), (q, Role::Z)],
            Gate::Cx(c, t) => [(c, Role::Control), (t, Role::Target)],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Cx(c, t) => write!(f, "CX {c} {t}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
        }
    }
}

/// How a gate acts on one of its qubits. Gates acting on a shared qubit
/// commute when their roles there are compatible: controls with Z (both
/// diagonal), targets with X (both X-diagonal), and any role with itself
/// except H.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    H,
    X,
    Z,
    Control,
    Target,
}

impl Role {
    fn compatible(self, other: Role) -> bool {
        use Role::*;
        matches!(
            (self, other),
            (Control, Control)
                | (Target, Target)
                | (X, X)
                | (Z, Z)
                | (Control, Z)
                | (Z, Control)
                | (Target, X)
                | (X, Target)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    /// Part `part` of step `step` of the sequential preparation circuit;
    /// `layer` counts from 1 within the part (0 for the Hadamard step).
    Uc { step: usize, part: DirSet, layer: usize },
    SeedEntangler,
    /// Layer of the growth circuit that spreads seeds into logical operators.
    Growth { layer: usize },
    /// Generic Hadamard + CNOT preparation; `layer` 0 is the Hadamard layer.
    Prep { layer: usize },
    Untagged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub tag: Tag,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layer {
    pub segments: Vec<Segment>,
}

impl Layer {
    pub fn single(tag: Tag, gates: Vec<Gate>) -> Self {
        Layer {
            segments: alloc::vec![Segment { tag, gates }],
        }
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.segments.iter().flat_map(|s| s.gates.iter())
    }

    pub fn gate_count(&self) -> usize {
        self.segments.iter().map(|s| s.gates.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.gate_count() == 0
    }

    /// True when every pair of gates in the layer commutes.
    pub fn is_commuting(&self) -> bool {
        let mut roles: Vec<(usize, Role)> = Vec::with_capacity(2 * self.gate_count());
        let mut hadamards: Vec<usize> = Vec::new();
        for g in self.gates() {
            match *g {
                Gate::H(q) => hadamards.push(q),
                _ => {
                    let r = g.roles();
                    roles.push(r[0]);
                    if r[1] != r[0] {
                        roles.push(r[1]);
                    }
                }
            }
        }
        hadamards.sort_unstable();
        if hadamards.windows(2).any(|w| w[0] == w[1]) {
            // H·H on one qubit cancels but is not a meaningful layer
            return false;
        }
        roles.sort_unstable_by_key(|&(q, _)| q);
        for h in &hadamards {
            if roles.binary_search_by_key(h, |&(q, _)| q).is_ok() {
                return false;
            }
        }
        let mut i = 0;
        while i < roles.len() {
            let q = roles[i].0;
            let mut j = i;
            while j < roles.len() && roles[j].0 == q {
                j += 1;
            }
            let group = &roles[i..j];
            for a in group {
                for b in group {
                    if !a.1.compatible(b.1) {
                        return false;
                    }
                }
            }
            i = j;
        }
        true
    }

    /// The `Uc` step of the layer, if it has one.
    pub fn uc_step(&self) -> Option<usize> {
        self.segments.iter().find_map(|s| match s.tag {
            Tag::Uc { step, .. } => Some(step),
            _ => None,
        })
    }
}

/// Provenance of a synthesized circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitMeta {
    pub params: TdParams,
    pub sizes: Vec<u32>,
    pub open: DirSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub layers: Vec<Layer>,
    pub meta: Option<CircuitMeta>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            layers: Vec::new(),
            meta: None,
        }
    }

    pub fn push_layer(&mut self, layer: Layer) {
        if !layer.is_empty() {
            self.layers.push(layer);
        }
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flat_map(|l| l.gates())
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Layer::gate_count).sum()
    }

    /// Layers that belong to a CNOT step (step ≥ 1) of a `Uc` circuit.
    pub fn cnot_layer_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| l.uc_step().is_some_and(|s| s >= 1))
            .count()
    }

    /// Distinct layer indices used by one part of one step.
    pub fn part_layer_count(&self, step: usize, part: DirSet) -> usize {
        let mut seen: Vec<usize> = self
            .layers
            .iter()
            .flat_map(|l| l.segments.iter())
            .filter_map(|s| match s.tag {
                Tag::Uc { step: st, part: p, layer } if st == step && p == part && !s.gates.is_empty() => {
                    Some(layer)
                }
                _ => None,
            })
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// `self` followed by `next`; metadata of `next` is kept when present.
    pub fn then(mut self, next: &Circuit) -> Circuit {
        self.n_qubits = self.n_qubits.max(next.n_qubits);
        self.layers.extend(next.layers.iter().cloned());
        if next.meta.is_some() {
            self.meta = next.meta.clone();
        }
        self
    }

    /// Checks qubit ranges, CNOT distinctness and per-layer commutation.
    pub fn validate(&self) -> Result<(), CircuitError> {
        for (k, layer) in self.layers.iter().enumerate() {
            for g in layer.gates() {
                for q in g.qubits() {
                    if q >= self.n_qubits {
                        return Err(CircuitError::QubitOutOfRange {
                            qubit: q,
                            n: self.n_qubits,
                        });
                    }
                }
                if let Gate::Cx(c, t) = *g {
                    if c == t {
                        return Err(CircuitError::SelfTargetingCnot(c));
                    }
                }
            }
            if !layer.is_commuting() {
                return Err(CircuitError::NonCommutingLayer(k));
            }
        }
        Ok(())
    }

    /// First qubit that is used as a CNOT control after having been a CNOT
    /// target in an earlier layer, restricted to `watched` qubits.
    pub fn control_after_target(&self, watched: &[bool]) -> Option<usize> {
        let mut targeted = alloc::vec![false; self.n_qubits];
        for layer in &self.layers {
            for g in layer.gates() {
                if let Gate::Cx(c, _) = *g {
                    if watched.get(c).copied().unwrap_or(false) && targeted[c] {
                        return Some(c);
                    }
                }
            }
            for g in layer.gates() {
                if let Gate::Cx(_, t) = *g {
                    targeted[t] = true;
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn commutation_roles() {
        let fan = Layer::single(Tag::Untagged, vec![Gate::Cx(0, 1), Gate::Cx(0, 2), Gate::Cx(3, 2)]);
        assert!(fan.is_commuting());
        let chain = Layer::single(Tag::Untagged, vec![Gate::Cx(0, 1), Gate::Cx(1, 2)]);
        assert!(!chain.is_commuting());
        let hx = Layer::single(Tag::Untagged, vec![Gate::H(0), Gate::X(0)]);
        assert!(!hx.is_commuting());
        let zc = Layer::single(Tag::Untagged, vec![Gate::Z(0), Gate::Cx(0, 1), Gate::X(1)]);
        assert!(zc.is_commuting());
        let xc = Layer::single(Tag::Untagged, vec![Gate::X(0), Gate::Cx(0, 1)]);
        assert!(!xc.is_commuting());
    }

    #[test]
    fn validate_catches_bad_gates() {
        let mut c = Circuit::new(2);
        c.push_layer(Layer::single(Tag::Untagged, vec![Gate::Cx(0, 2)]));
        assert_eq!(c.validate(), Err(CircuitError::QubitOutOfRange { qubit: 2, n: 2 }));
        let mut c = Circuit::new(2);
        c.push_layer(Layer::single(Tag::Untagged, vec![Gate::Cx(1, 1)]));
        assert_eq!(c.validate(), Err(CircuitError::SelfTargetingCnot(1)));
    }
}
