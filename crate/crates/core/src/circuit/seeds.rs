//! Seed sets, logical X operators, the growth circuit `U_g` and seed
//! entanglers for the `[d-1, d, d+1, D]` family.

use alloc::vec;
use alloc::vec::Vec;

use super::{Circuit, CircuitError, Gate, Layer, Segment, Tag};
use crate::lattice::{Cube, DirSet, Lattice, PatternEntry};
use crate::model::TdModel;
use crate::pauli::PauliOp;

#[derive(Debug, Clone)]
pub struct SeedPlan {
    pub seeds: Vec<Cube>,
    pub seed_qubits: Vec<usize>,
    /// One logical X per seed, same order.
    pub logical_x: Vec<PauliOp>,
    pub u_g: Circuit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedEntangler {
    /// X on every seed whose bit is set.
    Basis(Vec<bool>),
    /// H on the first seed, then a CNOT chain in seed order.
    Ghz,
    /// H on the first seed, then a doubling CNOT tree.
    GhzTree,
    /// Any circuit that only touches seed qubits.
    Custom(Circuit),
}

fn require_family(model: &TdModel) -> Result<(), CircuitError> {
    if !model.params().is_seed_family() {
        return Err(CircuitError::UnsupportedModel("seeds are defined for the [d-1,d,d+1,D] family"));
    }
    if !model.lattice().is_fully_periodic() {
        return Err(CircuitError::UnsupportedModel("seeds need a fully periodic lattice"));
    }
    Ok(())
}

/// Every `f(γ, S_d)` with `S_d ⊂ ES(γ)`, over the D-cubes with at least
/// `d + 1` coordinates at `-1/2`. Canonical order.
pub fn seed_set(model: &TdModel) -> Result<Vec<Cube>, CircuitError> {
    require_family(model)?;
    let lat = model.lattice();
    let d = model.params().d_s;
    let dim = lat.dim();
    let mut out = Vec::new();
    for gamma in lat.cubes(dim)? {
        let mut es = DirSet::EMPTY;
        for i in 0..dim {
            if gamma.coord(i) == 2 * lat.size(i) - 1 {
                es.insert(i);
            }
        }
        if es.len() <= d {
            continue;
        }
        for s in es.subsets(d) {
            out.push(super::representative(lat, gamma, s, d)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// X on every d-cube of the leaf that extends `seed` along its own axes.
pub fn logical_x(seed: &Cube, model: &TdModel) -> Result<PauliOp, CircuitError> {
    let lat = model.lattice();
    let d = model.params().d_s;
    if seed.dim() != d || !lat.contains(seed) {
        return Err(CircuitError::InvalidSeeds);
    }
    let spanned = seed.spanned();
    let pattern: Vec<PatternEntry> = (0..lat.dim())
        .map(|i| {
            if spanned.contains(i) {
                PatternEntry::Star
            } else {
                PatternEntry::Fixed(seed.coord(i))
            }
        })
        .collect();
    let cells = lat.star_expand(&pattern, Some(d))?;
    Ok(PauliOp::x_on(
        model.n_qubits(),
        cells.iter().map(|c| model.qubit_index(c).expect("leaf cell indexed")),
    ))
}

/// `ι(seed)` as `(layer, control, target)` triples, layers counted from 1.
fn iota(lat: &Lattice, seed: &Cube) -> Vec<(usize, Cube, Cube)> {
    let axes: Vec<usize> = seed.spanned().iter().collect();
    let mut out = Vec::new();
    let mut offset = 0;
    // cells already reached, as displacements along earlier axes
    let mut reached: Vec<Cube> = vec![*seed];
    for &axis in &axes {
        let len = lat.size(axis) as i64;
        let mut next = Vec::with_capacity(reached.len() * len as usize);
        for x in 0..len - 1 {
            for base in &reached {
                let control = lat.shift(base, axis, -2 * x).expect("periodic");
                let target = lat.shift(base, axis, -2 * (x + 1)).expect("periodic");
                out.push((offset + x as usize + 1, control, target));
            }
        }
        for x in 0..len {
            for base in &reached {
                next.push(lat.shift(base, axis, -2 * x).expect("periodic"));
            }
        }
        offset += len as usize - 1;
        reached = next;
    }
    out
}

/// `U_g = ∏ ι(seed)`, with the factors of different seeds sharing layers.
pub fn synth_ug(model: &TdModel, seeds: &[Cube]) -> Result<Circuit, CircuitError> {
    let canonical = seed_set(model)?;
    let lat = model.lattice();
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    let mut seen = Vec::with_capacity(seeds.len());
    for seed in seeds {
        if canonical.binary_search(seed).is_err() || seen.contains(seed) {
            return Err(CircuitError::InvalidSeeds);
        }
        seen.push(*seed);
        for (layer, c, t) in iota(lat, seed) {
            if layers.len() < layer {
                layers.resize(layer, Vec::new());
            }
            let q = |cube: &Cube| model.qubit_index(cube).expect("seed leaf indexed");
            layers[layer - 1].push(Gate::Cx(q(&c), q(&t)));
        }
    }
    let mut circuit = Circuit::new(model.n_qubits());
    for (k, gates) in layers.into_iter().enumerate() {
        circuit.push_layer(Layer::single(Tag::Growth { layer: k + 1 }, gates));
    }
    Ok(circuit)
}

pub fn seed_plan(model: &TdModel) -> Result<SeedPlan, CircuitError> {
    let seeds = seed_set(model)?;
    let seed_qubits = seeds
        .iter()
        .map(|s| model.qubit_index(s).ok_or(CircuitError::InvalidSeeds))
        .collect::<Result<Vec<_>, _>>()?;
    let logical_x = seeds
        .iter()
        .map(|s| logical_x(s, model))
        .collect::<Result<Vec<_>, _>>()?;
    let u_g = synth_ug(model, &seeds)?;
    Ok(SeedPlan {
        seeds,
        seed_qubits,
        logical_x,
        u_g,
    })
}

/// Circuit on `n_qubits` that prepares the seed state from `|0…0⟩`.
pub fn seed_entangler(kind: &SeedEntangler, seeds: &[usize], n_qubits: usize) -> Result<Circuit, CircuitError> {
    let mut circuit = Circuit::new(n_qubits);
    let tagged = |gates| Layer::single(Tag::SeedEntangler, gates);
    if let Some(&q) = seeds.iter().find(|&&q| q >= n_qubits) {
        return Err(CircuitError::QubitOutOfRange { qubit: q, n: n_qubits });
    }
    match kind {
        SeedEntangler::Basis(bits) => {
            if bits.len() != seeds.len() {
                return Err(CircuitError::PatternLength {
                    expected: seeds.len(),
                    got: bits.len(),
                });
            }
            let gates = seeds
                .iter()
                .zip(bits)
                .filter(|(_, &b)| b)
                .map(|(&q, _)| Gate::X(q))
                .collect();
            circuit.push_layer(tagged(gates));
        }
        SeedEntangler::Ghz => {
            if let Some(&first) = seeds.first() {
                circuit.push_layer(tagged(vec![Gate::H(first)]));
            }
            for w in seeds.windows(2) {
                circuit.push_layer(tagged(vec![Gate::Cx(w[0], w[1])]));
            }
        }
        SeedEntangler::GhzTree => {
            if let Some(&first) = seeds.first() {
                circuit.push_layer(tagged(vec![Gate::H(first)]));
            }
            let mut width = 1;
            while width < seeds.len() {
                let gates = (0..width)
                    .filter(|i| i + width < seeds.len())
                    .map(|i| Gate::Cx(seeds[i], seeds[i + width]))
                    .collect();
                circuit.push_layer(tagged(gates));
                width *= 2;
            }
        }
        SeedEntangler::Custom(c) => {
            for g in c.gates() {
                for q in g.qubits() {
                    if !seeds.contains(&q) {
                        return Err(CircuitError::SeedSetViolation(q));
                    }
                }
            }
            for layer in &c.layers {
                let segments = layer
                    .segments
                    .iter()
                    .map(|s| Segment {
                        tag: Tag::SeedEntangler,
                        gates: s.gates.clone(),
                    })
                    .collect();
                circuit.push_layer(Layer { segments });
            }
        }
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2;
    use crate::model::{seed_count, TdParams};

    fn model(p: [usize; 4], sizes: &[u32]) -> TdModel {
        let params = TdParams::new(p[0], p[1], p[2], p[3]).unwrap();
        TdModel::build(Lattice::periodic(sizes).unwrap(), params).unwrap()
    }

    #[test]
    fn toric_seeds() {
        let m = model([0, 1, 2, 2], &[4, 4]);
        let seeds = seed_set(&m).unwrap();
        assert_eq!(seeds, vec![Cube::new(&[6, 7]), Cube::new(&[7, 6])]);
        let x = logical_x(&seeds[0], &m).unwrap();
        assert_eq!(x.weight(), 4);
        assert!(x.support().iter().all(|&q| m.qubit_cube(q).unwrap().coord(0) == 6));
    }

    #[test]
    fn three_dim_toric_seeds() {
        let m = model([1, 2, 3, 3], &[3, 3, 3]);
        let seeds = seed_set(&m).unwrap();
        assert_eq!(
            seeds,
            vec![Cube::new(&[4, 5, 5]), Cube::new(&[5, 4, 5]), Cube::new(&[5, 5, 4])]
        );
        assert_eq!(logical_x(&seeds[0], &m).unwrap().weight(), 9);
    }

    #[test]
    fn xcube_seed_count() {
        let m = model([0, 1, 2, 3], &[2, 3, 3]);
        let seeds = seed_set(&m).unwrap();
        assert_eq!(seeds.len(), 13);
        assert_eq!(seeds.len() as u64, seed_count(&m.params(), &[2, 3, 3]));
    }

    #[test]
    fn growth_maps_seed_to_logical() {
        for (p, s) in [([0, 1, 2, 2], vec![3, 3]), ([1, 2, 3, 3], vec![3, 2, 3]), ([0, 1, 2, 3], vec![2, 3, 3])] {
            let m = model(p, &s);
            let plan = seed_plan(&m).unwrap();
            plan.u_g.validate().unwrap();
            for (q, lx) in plan.seed_qubits.iter().zip(&plan.logical_x) {
                // propagate X_q through the CNOT layers
                let mut x = gf2::BitVector::from_indices(m.n_qubits(), [*q]);
                for g in plan.u_g.gates() {
                    if let Gate::Cx(c, t) = *g {
                        if x.get(c) {
                            x.flip(t);
                        }
                    }
                }
                assert_eq!(&x, &lx.x);
            }
        }
    }

    #[test]
    fn toric_growth_layers() {
        let m = model([0, 1, 2, 2], &[3, 3]);
        let plan = seed_plan(&m).unwrap();
        assert_eq!(plan.u_g.layers.len(), 2);
        assert_eq!(plan.u_g.gate_count(), 4);
        let m = model([1, 2, 3, 3], &[3, 3, 3]);
        let ug = synth_ug(&m, &seed_set(&m).unwrap()[..1]).unwrap();
        assert_eq!(ug.layers.len(), 4);
    }

    #[test]
    fn invalid_seed_rejected() {
        let m = model([0, 1, 2, 2], &[3, 3]);
        assert_eq!(synth_ug(&m, &[Cube::new(&[0, 1])]).unwrap_err(), CircuitError::InvalidSeeds);
    }

    #[test]
    fn entanglers() {
        let seeds = [0, 3, 5];
        let basis = seed_entangler(&SeedEntangler::Basis(vec![true, false, false]), &seeds, 6).unwrap();
        assert_eq!(basis.gate_count(), 1);
        let ghz = seed_entangler(&SeedEntangler::Ghz, &seeds, 6).unwrap();
        assert_eq!(ghz.gate_count(), 3);
        assert_eq!(ghz.layers.len(), 3);
        let tree = seed_entangler(&SeedEntangler::GhzTree, &seeds, 6).unwrap();
        assert_eq!(tree.gate_count(), 3);
        let mut bad = Circuit::new(6);
        bad.push_layer(Layer::single(Tag::Untagged, vec![Gate::Cx(0, 1)]));
        assert_eq!(
            seed_entangler(&SeedEntangler::Custom(bad), &seeds, 6),
            Err(CircuitError::SeedSetViolation(1))
        );
        assert!(matches!(
            seed_entangler(&SeedEntangler::Basis(vec![true]), &seeds, 6),
            Err(CircuitError::PatternLength { expected: 3, got: 1 })
        ));
    }
}
