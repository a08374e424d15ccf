//! The sequential preparation circuit `U_c` and its boundary truncation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{Circuit, CircuitError, CircuitMeta, Gate, Layer, Segment, Tag};
use crate::lattice::{Cube, DirSet, Lattice, LatticeSpec};
use crate::model::{TdModel, TdParams};

/// Output of [`synth_uc`].
#[derive(Debug, Clone)]
pub struct Uc {
    pub circuit: Circuit,
    /// Representative qubit of each A term (by A index), `None` for the
    /// cubes left without one.
    pub reps: Vec<Option<usize>>,
    /// A indices in the order their GCNOTs are applied.
    pub order: Vec<usize>,
}

impl Uc {
    pub fn representative_qubits(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.reps.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }
}

/// Directions whose doubled coordinate is `-1/2`, i.e. `2L_i - 1`.
fn edge_set(lat: &Lattice, gamma: &Cube) -> DirSet {
    let mut s = DirSet::EMPTY;
    for i in 0..lat.dim() {
        if gamma.coord(i) == 2 * lat.size(i) - 1 {
            s.insert(i);
        }
    }
    s
}

/// `Σ_{i ∈ min_{D*}(S^c)} (L_i - 2) + 1`.
pub fn depth_of_part(sizes: &[u32], part: DirSet, d: usize) -> usize {
    let dim = sizes.len();
    let m = part.complement(dim).smallest(dim - d);
    m.iter().map(|i| sizes[i] as usize - 2).sum::<usize>() + 1
}

/// `[(D - d)(L - 2) + 1](d + 1)` for an equal-size lattice.
pub fn predicted_depth(dim: usize, d: usize, l: u32) -> usize {
    ((dim - d) * (l as usize - 2) + 1) * (d + 1)
}

/// `f(γ, S)`: moves `gamma` down by half a cell along `min_{D*}(S^c)`.
pub fn representative(lat: &Lattice, gamma: &Cube, part: DirSet, d: usize) -> Result<Cube, CircuitError> {
    let dim = lat.dim();
    if gamma.dim() != dim || part.len() > d || d > dim {
        return Err(CircuitError::NotRepresentable);
    }
    if !part.is_subset(edge_set(lat, gamma)) {
        return Err(CircuitError::NotRepresentable);
    }
    let mut out = *gamma;
    for i in part.complement(dim).smallest(dim - d).iter() {
        out = lat.shift(&out, i, -1).ok_or(CircuitError::NotRepresentable)?;
    }
    Ok(out)
}

/// Synthesizes `U_c` for a stabilizer TD model on a fully periodic lattice.
pub fn synth_uc(model: &TdModel) -> Result<Uc, CircuitError> {
    let params = model.params();
    if !params.is_stabilizer_code() {
        return Err(CircuitError::UnsupportedModel("U_c needs a stabilizer TD model"));
    }
    let lat = model.lattice();
    if !lat.is_fully_periodic() {
        return Err(CircuitError::UnsupportedModel(
            "U_c is synthesized on a periodic lattice; use truncation for open directions",
        ));
    }
    let d = params.d_s;
    let dim = params.dim;
    if d == 0 || d >= dim {
        return Err(CircuitError::UnsupportedModel("need 0 < d_s < D"));
    }
    let n = model.n_qubits();

    // (step, alpha, part) -> cubes
    let mut buckets: BTreeMap<(usize, usize, DirSet), Vec<(usize, usize)>> = BTreeMap::new();
    let mut reps = vec![None; model.a_terms().len()];
    for (a_idx, term) in model.a_terms().iter().enumerate() {
        let gamma = term.cube;
        let es = edge_set(lat, &gamma);
        if es.len() > d {
            continue;
        }
        let m = es.complement(dim).smallest(dim - d);
        let sum: usize = m.iter().map(|i| (gamma.coord(i) as usize - 1) / 2).sum();
        let alpha = depth_of_part(lat.sizes(), es, d) - sum;
        let rep = representative(lat, &gamma, es, d)?;
        let rep_q = model.qubit_index(&rep).ok_or(CircuitError::NotRepresentable)?;
        reps[a_idx] = Some(rep_q);
        buckets
            .entry((es.len() + 1, alpha, es))
            .or_default()
            .push((a_idx, rep_q));
    }

    let mut circuit = Circuit::new(n);
    let mut h_layer = Layer::default();
    for s in 0..=d {
        for part in DirSet::subsets_of_size(dim, s) {
            let mut gates: Vec<Gate> = buckets
                .iter()
                .filter(|((_, _, p), _)| *p == part)
                .flat_map(|(_, v)| v.iter().map(|&(_, q)| Gate::H(q)))
                .collect();
            gates.sort_unstable();
            h_layer.segments.push(Segment {
                tag: Tag::Uc { step: 0, part, layer: 0 },
                gates,
            });
        }
    }
    circuit.push_layer(h_layer);

    let mut order = Vec::with_capacity(model.a_terms().len());
    for step in 1..=d + 1 {
        let parts = DirSet::subsets_of_size(dim, step - 1);
        let max_depth = parts
            .iter()
            .map(|&p| depth_of_part(lat.sizes(), p, d))
            .max()
            .unwrap_or(0);
        for alpha in 1..=max_depth {
            let mut layer = Layer::default();
            for &part in &parts {
                let Some(cubes) = buckets.get(&(step, alpha, part)) else {
                    continue;
                };
                let mut gates = Vec::new();
                for &(a_idx, rep_q) in cubes {
                    order.push(a_idx);
                    for t in model.a_terms()[a_idx].op.x.ones() {
                        if t != rep_q {
                            gates.push(Gate::Cx(rep_q, t));
                        }
                    }
                }
                layer.segments.push(Segment {
                    tag: Tag::Uc { step, part, layer: alpha },
                    gates,
                });
            }
            circuit.push_layer(layer);
        }
    }
    circuit.meta = Some(CircuitMeta {
        params,
        sizes: lat.sizes().to_vec(),
        open: DirSet::EMPTY,
    });
    Ok(Uc { circuit, reps, order })
}

/// Drops every part that meets an open direction, Hadamards included.
pub fn truncate_uc(circuit: &Circuit, open: DirSet) -> Result<Circuit, CircuitError> {
    let mut out = Circuit::new(circuit.n_qubits);
    for layer in &circuit.layers {
        let mut kept = Layer::default();
        for seg in &layer.segments {
            let Tag::Uc { part, .. } = seg.tag else {
                return Err(CircuitError::MissingTags);
            };
            if part.intersection(open).is_empty() {
                kept.segments.push(seg.clone());
            }
        }
        out.push_layer(kept);
    }
    out.meta = circuit.meta.clone().map(|mut m| {
        m.open = m.open.union(open);
        m
    });
    Ok(out)
}

/// Lattice prepared by a truncated `U_c`: `L_i - 1` open cells along each
/// open direction, sharing doubled coordinates with the periodic host.
pub fn truncated_spec(sizes: &[u32], open: DirSet) -> LatticeSpec {
    let mut spec = LatticeSpec::periodic(sizes);
    for i in open.iter().filter(|&i| i < sizes.len()) {
        spec.sizes[i] -= 1;
    }
    spec.with_open(open)
}

/// `U_c` for a lattice with the given open directions: synthesized on the
/// periodic host, truncated, and re-indexed onto the qubits of the
/// open-boundary model it prepares.
pub fn synth_uc_open(params: TdParams, sizes: &[u32], open: DirSet) -> Result<(TdModel, Circuit), CircuitError> {
    let host = TdModel::build(Lattice::periodic(sizes)?, params)?;
    let uc = synth_uc(&host)?;
    let target = TdModel::build(Lattice::new(truncated_spec(sizes, open))?, params)?;
    let embed = target.qubit_embedding(&host)?;
    let mut inverse = vec![None; host.n_qubits()];
    for (q, &h) in embed.iter().enumerate() {
        inverse[h] = Some(q);
    }
    let truncated = truncate_uc(&uc.circuit, open)?;
    let mut circuit = truncated.remap(&inverse, target.n_qubits())?;
    circuit.meta = truncated.meta;
    Ok((target, circuit))
}

impl Circuit {
    /// Renames qubits through `map`; fails if a gate touches an unmapped one.
    pub fn remap(&self, map: &[Option<usize>], n_qubits: usize) -> Result<Circuit, CircuitError> {
        let f = |q: usize| {
            map.get(q)
                .copied()
                .flatten()
                .ok_or(CircuitError::QubitOutOfRange { qubit: q, n: n_qubits })
        };
        let mut out = Circuit::new(n_qubits);
        out.meta = self.meta.clone();
        for layer in &self.layers {
            let mut nl = Layer::default();
            for seg in &layer.segments {
                let gates = seg
                    .gates
                    .iter()
                    .map(|g| {
                        Ok(match *g {
                            Gate::H(q) => Gate::H(f(q)?),
                            Gate::X(q) => Gate::X(f(q)?),
                            Gate::Z(q) => Gate::Z(f(q)?),
                            Gate::Cx(c, t) => Gate::Cx(f(c)?, f(t)?),
                        })
                    })
                    .collect::<Result<Vec<_>, CircuitError>>()?;
                nl.segments.push(Segment { tag: seg.tag, gates });
            }
            out.layers.push(nl);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: [usize; 4], sizes: &[u32]) -> TdModel {
        let params = TdParams::new(p[0], p[1], p[2], p[3]).unwrap();
        TdModel::build(Lattice::periodic(sizes).unwrap(), params).unwrap()
    }

    fn d(dirs: &[usize]) -> DirSet {
        let mut s = DirSet::EMPTY;
        for &i in dirs {
            s.insert(i);
        }
        s
    }

    #[test]
    fn representative_examples() {
        let lat = Lattice::periodic(&[4, 4]).unwrap();
        let r = representative(&lat, &Cube::new(&[1, 1]), DirSet::EMPTY, 1).unwrap();
        assert_eq!(r, Cube::new(&[0, 1]));
        let lat3 = Lattice::periodic(&[3, 3, 3]).unwrap();
        let r = representative(&lat3, &Cube::new(&[1, 1, 1]), DirSet::EMPTY, 1).unwrap();
        assert_eq!(r, Cube::new(&[0, 0, 1]));
        // [-1/2, -1/2, x+1/2] with S = {1,2} -> [-1/2, -1/2, x]
        let r = representative(&lat3, &Cube::new(&[5, 5, 3]), d(&[0, 1]), 2).unwrap();
        assert_eq!(r, Cube::new(&[5, 5, 2]));
        assert_eq!(
            representative(&lat3, &Cube::new(&[1, 5, 3]), d(&[0]), 2),
            Err(CircuitError::NotRepresentable)
        );
    }

    #[test]
    fn toric_depth() {
        let uc = synth_uc(&model([0, 1, 2, 2], &[4, 4])).unwrap();
        assert_eq!(uc.circuit.cnot_layer_count(), 6);
        assert_eq!(uc.circuit.part_layer_count(1, DirSet::EMPTY), 3);
        assert_eq!(uc.circuit.part_layer_count(2, d(&[0])), 3);
        assert_eq!(uc.circuit.part_layer_count(2, d(&[1])), 3);
        assert_eq!(uc.reps.iter().filter(|r| r.is_none()).count(), 1);
        uc.circuit.validate().unwrap();
    }

    #[test]
    fn xcube_part_depths() {
        let uc = synth_uc(&model([0, 1, 2, 3], &[2, 3, 3])).unwrap();
        assert_eq!(uc.circuit.part_layer_count(1, DirSet::EMPTY), 2);
        assert_eq!(uc.circuit.part_layer_count(2, d(&[0])), 3);
        assert_eq!(uc.reps.iter().filter(|r| r.is_none()).count(), 6);
        uc.circuit.validate().unwrap();
    }

    #[test]
    fn three_dim_toric_depth() {
        let uc = synth_uc(&model([1, 2, 3, 3], &[3, 3, 3])).unwrap();
        assert_eq!(uc.circuit.cnot_layer_count(), 6);
        assert_eq!(predicted_depth(3, 2, 3), 6);
        uc.circuit.validate().unwrap();
    }

    #[test]
    fn reps_never_targeted_before_control() {
        for (p, s) in [([0, 1, 2, 2], vec![4, 3]), ([0, 1, 2, 3], vec![3, 2, 3]), ([1, 2, 3, 4], vec![2, 3, 2, 2])] {
            let m = model(p, &s);
            let uc = synth_uc(&m).unwrap();
            let mut watched = vec![false; m.n_qubits()];
            for q in uc.representative_qubits() {
                watched[q] = true;
            }
            assert_eq!(uc.circuit.control_after_target(&watched), None);
            assert_eq!(uc.order.len(), uc.reps.iter().flatten().count());
        }
    }

    #[test]
    fn rejects_non_codes() {
        assert!(matches!(
            synth_uc(&model([0, 1, 1, 2], &[3, 3])),
            Err(CircuitError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn truncation() {
        let uc = synth_uc(&model([0, 1, 2, 2], &[4, 4])).unwrap();
        let same = truncate_uc(&uc.circuit, DirSet::EMPTY).unwrap();
        assert_eq!(same.layers, uc.circuit.layers);
        let half = truncate_uc(&uc.circuit, d(&[0])).unwrap();
        assert_eq!(half.part_layer_count(2, d(&[0])), 0);
        assert_eq!(half.part_layer_count(2, d(&[1])), 3);
        assert_eq!(half.part_layer_count(1, DirSet::EMPTY), 3);
        let full = truncate_uc(&uc.circuit, d(&[0, 1])).unwrap();
        assert!(full.layers.iter().all(|l| l.uc_step().unwrap() <= 1));
        let untagged = {
            let mut c = Circuit::new(2);
            c.push_layer(Layer::single(Tag::Untagged, vec![Gate::H(0)]));
            c
        };
        assert_eq!(truncate_uc(&untagged, d(&[0])), Err(CircuitError::MissingTags));
    }

    #[test]
    fn open_remap_stays_in_range() {
        let params = TdParams::new(1, 2, 3, 3).unwrap();
        let (m, c) = synth_uc_open(params, &[3, 3, 3], d(&[0])).unwrap();
        assert_eq!(m.lattice().size(0), 2);
        c.validate().unwrap();
    }
}
