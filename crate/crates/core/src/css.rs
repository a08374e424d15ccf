//! Seed finding for generic CSS codes.
//!
//! A Hadamard + CNOT preparation plan assigns each X check `i` a
//! representative qubit `c(i)` in its support and an application order. The
//! plan is valid when no check's support contains the representative of a
//! check applied after it. Given a valid plan, [`find_seeds`] returns `k`
//! physical qubits and logical X operators that avoid every representative,
//! together with the CNOT layer that grows each seed into its operator.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, Layer, Tag, Uc};
use crate::gf2::{self, BitMatrix, BitVector, Gf2Error};
use crate::model::TdModel;
use crate::pauli::PauliOp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CssError {
    #[error("X check {x_row} anticommutes with Z check {z_row}")]
    NotCss { x_row: usize, z_row: usize },
    #[error("{0} checks are linearly dependent")]
    DependentGenerators(&'static str),
    #[error("check matrices have {gx} and {gz} columns")]
    ColumnMismatch { gx: usize, gz: usize },
    #[error("invalid plan: {0}")]
    InvalidPlan(&'static str),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    n: usize,
    gx: BitMatrix,
    gz: BitMatrix,
    k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepPlan {
    /// `c(i)` for each X check `i`.
    pub representatives: Vec<usize>,
    /// Check indices in application order.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SeedReport {
    pub seeds: Vec<usize>,
    /// One operator per seed; its only seed qubit is its own.
    pub logical_x_tilde: Vec<PauliOp>,
    pub u_g_prime: Circuit,
    pub unique: bool,
}

impl CssCode {
    pub fn load(gx: BitMatrix, gz: BitMatrix) -> Result<Self, CssError> {
        if gx.cols() != gz.cols() {
            return Err(CssError::ColumnMismatch {
                gx: gx.cols(),
                gz: gz.cols(),
            });
        }
        for i in 0..gx.rows() {
            let x = gx.row(i);
            for j in 0..gz.rows() {
                if x.dot(&gz.row(j)) {
                    return Err(CssError::NotCss { x_row: i, z_row: j });
                }
            }
        }
        let rx = gf2::rank(&gx);
        if rx != gx.rows() {
            return Err(CssError::DependentGenerators("X"));
        }
        let rz = gf2::rank(&gz);
        if rz != gz.rows() {
            return Err(CssError::DependentGenerators("Z"));
        }
        let n = gx.cols();
        Ok(CssCode {
            n,
            k: n - rx - rz,
            gx,
            gz,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.gx.rows()
    }

    pub fn gx(&self) -> &BitMatrix {
        &self.gx
    }

    pub fn gz(&self) -> &BitMatrix {
        &self.gz
    }

    pub fn stabilizers(&self) -> Vec<PauliOp> {
        let xs = self.gx.row_vectors().into_iter().map(PauliOp::x_type);
        let zs = self.gz.row_vectors().into_iter().map(PauliOp::z_type);
        xs.chain(zs).collect()
    }
}

/// The CSS code of a TD model together with the plan read off `U_c`. X
/// checks are the A terms that own a representative; Z checks are a maximal
/// independent subset of the B terms.
pub fn from_td(model: &TdModel, uc: &Uc) -> Result<(CssCode, PrepPlan), CssError> {
    let full = model.gx();
    let mut row_of = vec![None; full.rows()];
    let mut kept = Vec::new();
    let mut representatives = Vec::new();
    for (a, rep) in uc.reps.iter().enumerate() {
        if let Some(q) = rep {
            row_of[a] = Some(kept.len());
            kept.push(a);
            representatives.push(*q);
        }
    }
    let gx = full.select_rows(&kept);
    let gz_full = model.gz();
    let gz = gz_full.select_rows(&gf2::independent_rows(&gz_full));
    let order = uc
        .order
        .iter()
        .map(|&a| row_of[a].ok_or(CssError::InvalidPlan("ordered check has no representative")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((CssCode::load(gx, gz)?, PrepPlan { representatives, order }))
}

fn check_shape(code: &CssCode, plan: &PrepPlan) -> Result<(), CssError> {
    let r = code.r();
    if plan.representatives.len() != r {
        return Err(CssError::InvalidPlan("one representative per X check required"));
    }
    if plan.representatives.iter().any(|&c| c >= code.n) {
        return Err(CssError::InvalidPlan("representative out of range"));
    }
    let mut seen = vec![false; code.n];
    for &c in &plan.representatives {
        if seen[c] {
            return Err(CssError::InvalidPlan("representatives must be distinct"));
        }
        seen[c] = true;
    }
    let mut seen = vec![false; r];
    if plan.order.len() != r {
        return Err(CssError::InvalidPlan("order must be a permutation of the X checks"));
    }
    for &i in &plan.order {
        if i >= r || seen[i] {
            return Err(CssError::InvalidPlan("order must be a permutation of the X checks"));
        }
        seen[i] = true;
    }
    Ok(())
}

/// `K_{j,j'} = (Gx)_{i_j, c(i_{j'})}` is unit lower triangular.
pub fn validate_plan(code: &CssCode, plan: &PrepPlan) -> Result<bool, CssError> {
    check_shape(code, plan)?;
    for (j, &i) in plan.order.iter().enumerate() {
        if !code.gx.get(i, plan.representatives[i]) {
            return Err(CssError::InvalidPlan("representative outside its check"));
        }
        for &later in &plan.order[j + 1..] {
            if code.gx.get(i, plan.representatives[later]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A valid plan for `code`, built from the back: the last check is the
/// lowest-index remaining one that owns a column no other remaining check
/// touches. When that gets stuck, the X checks are replaced by their RREF,
/// whose pivot columns always work; the returned code then differs from the
/// input by row operations only.
pub fn greedy_plan(code: &CssCode) -> (CssCode, PrepPlan) {
    if let Some(plan) = try_greedy(&code.gx) {
        return (code.clone(), plan);
    }
    let reduced = gf2::rref(&code.gx);
    let gx = reduced.matrix.select_rows(&(0..reduced.rank()).collect::<Vec<_>>());
    let plan = PrepPlan {
        representatives: reduced.pivots.clone(),
        order: (0..gx.rows()).collect(),
    };
    let code = CssCode {
        gx,
        ..code.clone()
    };
    (code, plan)
}

fn try_greedy(gx: &BitMatrix) -> Option<PrepPlan> {
    let r = gx.rows();
    let rows = gx.row_vectors();
    let mut remaining: Vec<usize> = (0..r).collect();
    let mut reps = vec![0; r];
    let mut reversed = Vec::with_capacity(r);
    while !remaining.is_empty() {
        let (pos, col) = remaining.iter().enumerate().find_map(|(pos, &i)| {
            rows[i]
                .ones()
                .find(|&c| remaining.iter().all(|&j| j == i || !rows[j].get(c)))
                .map(|c| (pos, c))
        })?;
        let i = remaining.remove(pos);
        reps[i] = col;
        reversed.push(i);
    }
    reversed.reverse();
    Some(PrepPlan {
        representatives: reps,
        order: reversed,
    })
}

/// Hadamards on the representatives, then one GCNOT per layer in plan order.
pub fn synth_prep(code: &CssCode, plan: &PrepPlan) -> Result<Circuit, CssError> {
    if !validate_plan(code, plan)? {
        return Err(CssError::InvalidPlan("K is not lower triangular"));
    }
    let mut circuit = Circuit::new(code.n);
    let mut hs: Vec<Gate> = plan.representatives.iter().map(|&c| Gate::H(c)).collect();
    hs.sort_unstable();
    circuit.push_layer(Layer::single(Tag::Prep { layer: 0 }, hs));
    for (j, &i) in plan.order.iter().enumerate() {
        let c = plan.representatives[i];
        let gates = code.gx.row(i).ones().filter(|&t| t != c).map(|t| Gate::Cx(c, t)).collect();
        circuit.push_layer(Layer::single(Tag::Prep { layer: j + 1 }, gates));
    }
    Ok(circuit)
}

/// `k` pure-X logical operators: a basis of `ker(Gz)` modulo `rowspace(Gx)`.
pub fn logical_x_basis(code: &CssCode) -> BitMatrix {
    let kernel = gf2::right_kernel(&code.gz);
    let mut stacked = code.gx.clone();
    let mut out = BitMatrix::zeros(0, code.n);
    for v in kernel.row_vectors() {
        if out.rows() == code.k {
            break;
        }
        if gf2::solve_membership(&stacked, &v).is_err() {
            stacked.push_row(&v);
            out.push_row(&v);
        }
    }
    out
}

/// No nonzero combination of X checks vanishes on all representative
/// columns, i.e. `K^(0)` has full rank.
pub fn uniqueness_check(code: &CssCode, plan: &PrepPlan) -> bool {
    gf2::rank(&code.gx.select_columns(&plan.representatives)) == code.r()
}

/// Runs the seed-finding algorithm for a valid plan.
pub fn find_seeds(code: &CssCode, plan: &PrepPlan) -> Result<SeedReport, CssError> {
    if !validate_plan(code, plan)? {
        return Err(CssError::InvalidPlan("K is not lower triangular"));
    }
    let reps = &plan.representatives;
    // rows of G' indexed by check: column c(i) is the unit vector at row i
    let reduced = gf2::rref_with_preference(&code.gx, reps);
    let mut g_prime: Vec<Option<BitVector>> = vec![None; code.r()];
    for (row, &p) in reduced.pivots.iter().enumerate() {
        if let Some(i) = reps.iter().position(|&c| c == p) {
            g_prime[i] = Some(reduced.matrix.row(row));
        }
    }
    let g_prime: Vec<BitVector> = g_prime
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or(CssError::InvalidPlan("representative columns are not independent"))?;

    let mut tilde = BitMatrix::zeros(0, code.n);
    for mut x in logical_x_basis(code).row_vectors() {
        for (i, &c) in reps.iter().enumerate() {
            if x.get(c) {
                x.xor_assign(&g_prime[i]);
            }
        }
        tilde.push_row(&x);
    }
    let reid = gf2::rref(&tilde);
    let seeds = reid.pivots.clone();
    let rows: Vec<BitVector> = (0..reid.rank()).map(|i| reid.matrix.row(i)).collect();

    let mut gates = Vec::new();
    for (row, &q) in rows.iter().zip(&seeds) {
        gates.extend(row.ones().filter(|&t| t != q).map(|t| Gate::Cx(q, t)));
    }
    let mut u_g_prime = Circuit::new(code.n);
    u_g_prime.push_layer(Layer::single(Tag::Growth { layer: 1 }, gates));
    Ok(SeedReport {
        seeds,
        logical_x_tilde: rows.into_iter().map(PauliOp::x_type).collect(),
        u_g_prime,
        unique: uniqueness_check(code, plan),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::Tableau;

    fn m(rows: &[&str]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<BitVector> = rows
            .iter()
            .map(|r| BitVector::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(cols, &vs)
    }

    fn steane() -> CssCode {
        let h = ["0001111", "0110011", "1010101"];
        CssCode::load(m(&h), m(&h)).unwrap()
    }

    #[test]
    fn load_checks() {
        assert_eq!(steane().k(), 1);
        assert_eq!(
            CssCode::load(m(&["11"]), m(&["10"])),
            Err(CssError::NotCss { x_row: 0, z_row: 0 })
        );
        assert_eq!(
            CssCode::load(m(&["11", "11"]), BitMatrix::zeros(0, 2)),
            Err(CssError::DependentGenerators("X"))
        );
        let trivial = CssCode::load(BitMatrix::zeros(0, 3), m(&["100", "010", "001"])).unwrap();
        assert_eq!(trivial.k(), 0);
        assert_eq!(logical_x_basis(&trivial).rows(), 0);
    }

    #[test]
    fn steane_greedy_plan() {
        let (code, plan) = greedy_plan(&steane());
        assert_eq!(code, steane());
        assert_eq!(plan.order, vec![2, 1, 0]);
        assert_eq!(plan.representatives, vec![3, 1, 0]);
        assert!(validate_plan(&code, &plan).unwrap());
        // row 2 is applied first but contains the representative of row 1
        let bad = PrepPlan {
            representatives: vec![3, 2, 0],
            order: vec![2, 1, 0],
        };
        assert!(!validate_plan(&code, &bad).unwrap());
        let swapped = PrepPlan {
            order: vec![1, 2, 0],
            ..bad.clone()
        };
        assert!(validate_plan(&code, &swapped).unwrap());
        let dup = PrepPlan {
            representatives: vec![3, 3, 0],
            ..plan
        };
        assert!(matches!(validate_plan(&code, &dup), Err(CssError::InvalidPlan(_))));
    }

    #[test]
    fn greedy_falls_back_to_rref() {
        // every column of each row is shared with another row
        let gx = m(&["1100", "0110", "1010"]);
        assert!(try_greedy(&gx).is_none());
        let gx = m(&["1110", "0111"]);
        let code = CssCode::load(gx, BitMatrix::zeros(0, 4)).unwrap();
        let (c2, plan) = greedy_plan(&code);
        assert!(validate_plan(&c2, &plan).unwrap());
    }

    #[test]
    fn steane_seeds() {
        let code = steane();
        let (_, plan) = greedy_plan(&code);
        let report = find_seeds(&code, &plan).unwrap();
        assert_eq!(report.seeds.len(), 1);
        assert!(report.unique);
        let lx = &report.logical_x_tilde[0];
        assert!(plan.representatives.iter().all(|&c| !lx.x.get(c)));
        // seed flipped + growth + prep equals the logical X on the code state
        let prep = synth_prep(&code, &plan).unwrap();
        let mut pipe = Circuit::new(7);
        pipe.push_layer(Layer::single(Tag::SeedEntangler, vec![Gate::X(report.seeds[0])]));
        let pipe = pipe.then(&report.u_g_prime).then(&prep);
        let mut expected = Tableau::run(&prep).unwrap();
        expected.apply_pauli(lx).unwrap();
        assert!(Tableau::run(&pipe).unwrap().states_equal(&expected));
        let verdict = Tableau::run(&prep).unwrap().expectations(&code.stabilizers()).unwrap();
        assert!(verdict.iter().all(|&e| e == 1));
    }

    #[test]
    fn uniqueness_detects_missing_representative() {
        let code = steane();
        let bad = PrepPlan {
            representatives: vec![6, 5, 4],
            order: vec![0, 1, 2],
        };
        assert!(uniqueness_check(&code, &bad));
        let collapsed = PrepPlan {
            representatives: vec![3, 1, 5],
            order: vec![0, 1, 2],
        };
        assert!(!uniqueness_check(&code, &collapsed));
    }

    #[test]
    fn empty_x_checks() {
        let code = CssCode::load(BitMatrix::zeros(0, 2), m(&["10"])).unwrap();
        let plan = PrepPlan {
            representatives: vec![],
            order: vec![],
        };
        assert!(validate_plan(&code, &plan).unwrap());
        assert!(uniqueness_check(&code, &plan));
        assert_eq!(synth_prep(&code, &plan).unwrap().gate_count(), 0);
    }
}
