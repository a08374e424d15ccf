use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use tetradigit_core::circuit::{
    depth_of_part, predicted_depth, seed_entangler, seed_plan, seed_set, synth_uc, synth_uc_open, truncated_spec,
    SeedEntangler, SeedPlan, Uc,
};
use tetradigit_core::css::{self, CssCode, PrepPlan};
use tetradigit_core::lattice::{Boundary, PatternEntry};
use tetradigit_core::model::{redundancy_formula, seed_count};
use tetradigit_core::oracle::{self, DenseState, Region};
use tetradigit_core::{BitVector, Circuit, DirSet, Lattice, PauliOp, Tableau, TdModel, TdParams};

use crate::args::{CssCmd, ModelArgs, ModelCmd, SeedArg, SynthCmd, VerifyCmd};
use crate::error::{config, CliError};
use crate::format::{parse_circuit, parse_matrix, write_circuit, write_matrix};

/// What a command prints, and whether its checks passed.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub pass: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn open_dirs(args: &ModelArgs) -> Result<DirSet, CliError> {
    let mut set = DirSet::EMPTY;
    for &dir in &args.open {
        let dir = dir as usize;
        if dir > args.td[3] {
            return Err(config(format!("open direction {dir} exceeds D = {}", args.td[3])));
        }
        set.insert(dir - 1);
    }
    Ok(set)
}

fn params(args: &ModelArgs) -> Result<TdParams, CliError> {
    let [d_n, d_s, d_l, dim] = args.td;
    let p = TdParams::new(d_n, d_s, d_l, dim)?;
    if args.dims.len() != dim {
        return Err(config(format!("{} sizes given for D = {dim}", args.dims.len())));
    }
    Ok(p)
}

fn build_model(args: &ModelArgs) -> Result<(TdModel, DirSet), CliError> {
    let p = params(args)?;
    let open = open_dirs(args)?;
    let lattice = Lattice::new(truncated_spec(&args.dims, open)).map_err(config)?;
    Ok((TdModel::build(lattice, p)?, open))
}

/// `U_c` for the configured lattice. `Uc` (with representatives) is only
/// available for fully periodic lattices.
fn synthesize(args: &ModelArgs) -> Result<(TdModel, Circuit, Option<Uc>), CliError> {
    let (model, open) = build_model(args)?;
    if open.is_empty() {
        let uc = synth_uc(&model)?;
        Ok((model, uc.circuit.clone(), Some(uc)))
    } else {
        let (model, circuit) = synth_uc_open(model.params(), &args.dims, open)?;
        Ok((model, circuit, None))
    }
}

fn boundary_names(model: &TdModel) -> Vec<&'static str> {
    (0..model.lattice().dim())
        .map(|i| match model.lattice().boundary(i) {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        })
        .collect()
}

fn entangler_kind(seed: &SeedArg, n: usize) -> Result<SeedEntangler, CliError> {
    Ok(match seed {
        SeedArg::Ghz => SeedEntangler::Ghz,
        SeedArg::GhzTree => SeedEntangler::GhzTree,
        SeedArg::Basis(bits) => SeedEntangler::Basis(bits.clone()),
        SeedArg::Custom(path) => {
            let c = parse_circuit(&read(path)?)?;
            if c.n_qubits != n {
                return Err(config(format!("entangler has {} qubits, model has {n}", c.n_qubits)));
            }
            SeedEntangler::Custom(c)
        }
        SeedArg::Random => return Err(config("`random` seeds are only accepted by verify")),
    })
}

fn seed_label(seed: &SeedArg) -> String {
    match seed {
        SeedArg::Ghz => "ghz".into(),
        SeedArg::GhzTree => "ghz-tree".into(),
        SeedArg::Basis(bits) => format!("basis:{}", bit_string(bits)),
        SeedArg::Custom(path) => format!("custom:{}", path.display()),
        SeedArg::Random => "random".into(),
    }
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn pipeline(plan: &SeedPlan, kind: &SeedEntangler, uc: &Circuit) -> Result<Circuit, CliError> {
    let ent = seed_entangler(kind, &plan.seed_qubits, uc.n_qubits)?;
    Ok(ent.then(&plan.u_g).then(uc))
}

fn x_product(ops: &[PauliOp], bits: &[bool], n: usize) -> PauliOp {
    let mut x = BitVector::zeros(n);
    for (op, _) in ops.iter().zip(bits).filter(|(_, &b)| b) {
        x.xor_assign(&op.x);
    }
    PauliOp::x_type(x)
}

fn run_tableau(c: &Circuit) -> Result<Tableau, CliError> {
    Tableau::run(c).map_err(config)
}

// ---------------------------------------------------------------- model

#[derive(Serialize)]
struct ReClassReport {
    pattern: Vec<String>,
    size: usize,
}

#[derive(Serialize)]
struct ModelReport {
    params: [usize; 4],
    dims: Vec<u32>,
    lattice_sizes: Vec<u32>,
    boundary: Vec<&'static str>,
    n_qubits: usize,
    a_terms: usize,
    b_terms: usize,
    commuting: bool,
    anticommuting_pairs: usize,
    gsd_log2: Option<u64>,
    gsd_error: Option<String>,
    redundancies: Option<u64>,
    redundancy_formula: Option<u64>,
    seed_count: Option<u64>,
    seed_set_size: Option<usize>,
    re_classes: Option<Vec<ReClassReport>>,
    exported: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct PlanFile {
    pub representatives: Vec<usize>,
    pub order: Vec<usize>,
}

#[derive(Serialize)]
struct ModelExport {
    params: [usize; 4],
    dims: Vec<u32>,
    lattice_sizes: Vec<u32>,
    boundary: Vec<&'static str>,
    n_qubits: usize,
    /// Doubled coordinates of each qubit, by qubit index.
    qubits: Vec<Vec<u32>>,
    /// Doubled coordinates of the D-cube behind each row of gx.txt.
    x_checks: Vec<Vec<u32>>,
    z_checks: usize,
}

pub fn cmd_model(cmd: &ModelCmd) -> Result<Output, CliError> {
    let (model, open) = build_model(&cmd.model)?;
    let p = model.params();
    let periodic = open.is_empty();
    let comm = model.check_commutation();
    let (gsd_log2, gsd_error) = match model.log2_gsd() {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let family = periodic && p.is_seed_family();
    let re_classes = model.enumerate_re_classes().ok().map(|classes| {
        classes
            .into_iter()
            .map(|c| ReClassReport {
                pattern: c
                    .pattern
                    .iter()
                    .map(|e| match e {
                        PatternEntry::Fixed(v) => v.to_string(),
                        PatternEntry::Star => "*".into(),
                    })
                    .collect(),
                size: c.members.len(),
            })
            .collect()
    });
    let exported = match &cmd.export_dir {
        Some(dir) => export_model(&model, &cmd.model, dir)?,
        None => Vec::new(),
    };
    let report = ModelReport {
        params: cmd.model.td,
        dims: cmd.model.dims.clone(),
        lattice_sizes: model.lattice().sizes().to_vec(),
        boundary: boundary_names(&model),
        n_qubits: model.n_qubits(),
        a_terms: model.a_terms().len(),
        b_terms: model.b_terms().len(),
        commuting: comm.commuting,
        anticommuting_pairs: comm.violating_pairs.len(),
        gsd_log2,
        gsd_error,
        redundancies: model.a_redundancy_count().ok(),
        redundancy_formula: periodic.then(|| redundancy_formula(&cmd.model.dims, p.d_s)),
        seed_count: family.then(|| seed_count(&p, &cmd.model.dims)),
        seed_set_size: seed_set(&model).ok().map(|s| s.len()),
        re_classes,
        exported,
    };
    Ok(Output {
        stdout: json(&report),
        pass: true,
        ..Output::default()
    })
}

fn export_model(model: &TdModel, args: &ModelArgs, dir: &Path) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| config(format!("{}: {e}", dir.display())))?;
    let uc = if model.lattice().is_fully_periodic() {
        synth_uc(model).ok()
    } else {
        None
    };
    let mut files = Vec::new();
    let mut put = |name: &str, text: String| -> Result<(), CliError> {
        let path = dir.join(name);
        write(&path, &text)?;
        files.push(path.display().to_string());
        Ok(())
    };
    let (gx, gz, x_rows) = match &uc {
        Some(uc) => {
            let (code, plan) = css::from_td(model, uc)?;
            let kept: Vec<usize> = uc
                .reps
                .iter()
                .enumerate()
                .filter_map(|(a, r)| r.map(|_| a))
                .collect();
            put(
                "plan.json",
                json(&PlanFile {
                    representatives: plan.representatives,
                    order: plan.order,
                }),
            )?;
            (code.gx().clone(), code.gz().clone(), kept)
        }
        None => (model.gx(), model.gz(), (0..model.a_terms().len()).collect()),
    };
    put("gx.txt", write_matrix(&gx))?;
    put("gz.txt", write_matrix(&gz))?;
    let export = ModelExport {
        params: args.td,
        dims: args.dims.clone(),
        lattice_sizes: model.lattice().sizes().to_vec(),
        boundary: boundary_names(model),
        n_qubits: model.n_qubits(),
        qubits: (0..model.n_qubits())
            .filter_map(|q| model.qubit_cube(q))
            .map(|c| c.coords().to_vec())
            .collect(),
        x_checks: x_rows
            .iter()
            .map(|&a| model.a_terms()[a].cube.coords().to_vec())
            .collect(),
        z_checks: gz.rows(),
    };
    put("model.json", json(&export))?;
    Ok(files)
}

// ---------------------------------------------------------------- synth

#[derive(Serialize)]
struct PartReport {
    step: usize,
    part: String,
    layers: usize,
    predicted: usize,
    removed: bool,
}

#[derive(Serialize)]
struct SynthReport {
    n_qubits: usize,
    layers: usize,
    gates: usize,
    prefix_layers: usize,
    h_layers: usize,
    cnot_layers: usize,
    predicted_cnot_layers: Option<usize>,
    parts: Vec<PartReport>,
    seeds: Option<String>,
    out: Option<String>,
}

pub fn cmd_synth(cmd: &SynthCmd) -> Result<Output, CliError> {
    let (model, uc, _) = synthesize(&cmd.model)?;
    let open = open_dirs(&cmd.model)?;
    let p = model.params();
    let dims = &cmd.model.dims;
    let full = match &cmd.seeds {
        Some(seed) => {
            let plan = seed_plan(&model)?;
            pipeline(&plan, &entangler_kind(seed, model.n_qubits())?, &uc)?
        }
        None => uc.clone(),
    };
    let parts = (0..=p.d_s)
        .flat_map(|k| DirSet::subsets_of_size(p.dim, k))
        .map(|part| PartReport {
            step: part.len() + 1,
            part: part.to_string(),
            layers: uc.part_layer_count(part.len() + 1, part),
            predicted: depth_of_part(dims, part, p.d_s),
            removed: !part.intersection(open).is_empty(),
        })
        .collect();
    let equal = dims.iter().all(|&l| l == dims[0]);
    let mut report = SynthReport {
        n_qubits: full.n_qubits,
        layers: full.layers.len(),
        gates: full.gate_count(),
        prefix_layers: full.layers.len() - uc.layers.len(),
        h_layers: uc.layers.iter().filter(|l| l.uc_step() == Some(0)).count(),
        cnot_layers: uc.cnot_layer_count(),
        predicted_cnot_layers: (equal && open.is_empty()).then(|| predicted_depth(p.dim, p.d_s, dims[0])),
        parts,
        seeds: cmd.seeds.as_ref().map(seed_label),
        out: cmd.out.as_ref().map(|p| p.display().to_string()),
    };
    let text = write_circuit(&full);
    Ok(match &cmd.out {
        Some(path) => {
            write(path, &text)?;
            Output {
                stdout: json(&report),
                pass: true,
                ..Output::default()
            }
        }
        None => {
            report.out = None;
            Output {
                stdout: text,
                stderr: json(&report),
                pass: true,
            }
        }
    })
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct CodeStateSummary {
    pass: bool,
    violated_a: Vec<usize>,
    violated_b: Vec<usize>,
}

#[derive(Serialize)]
struct OracleReport {
    ran: bool,
    reason: Option<String>,
    tableau_agrees: Option<bool>,
    fidelity: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct CaseReport {
    label: String,
    layers: usize,
    gates: usize,
    layer_check: Option<String>,
    code_state: CodeStateSummary,
    logical: Option<bool>,
    oracle: Option<OracleReport>,
    pass: bool,
}

#[derive(Serialize)]
struct CountsReport {
    gsd_log2: u64,
    seed_count: u64,
    seed_set_size: usize,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    params: [usize; 4],
    dims: Vec<u32>,
    lattice_sizes: Vec<u32>,
    boundary: Vec<&'static str>,
    n_qubits: usize,
    source: String,
    seeds: Option<String>,
    counts: Option<CountsReport>,
    cases: Vec<CaseReport>,
    pass: bool,
}

/// The logical state a case should prepare.
enum Expected {
    CodeState,
    Basis(Vec<bool>),
    Ghz,
    /// Only the stabilizers are checked.
    Any,
}

struct Case {
    label: String,
    circuit: Circuit,
    expected: Expected,
}

/// Synthesized pieces the checks compare against.
struct Reference {
    uc: Circuit,
    reps: Option<Vec<Option<usize>>>,
    plan: Option<SeedPlan>,
}

pub fn cmd_verify(cmd: &VerifyCmd) -> Result<Output, CliError> {
    let synth = synthesize(&cmd.model);
    let (model, reference) = match synth {
        Ok((model, uc, full)) => {
            let plan = match &cmd.seeds {
                Some(_) => Some(seed_plan(&model)?),
                None => None,
            };
            let reference = Reference {
                uc,
                reps: full.map(|u| u.reps),
                plan,
            };
            (model, Some(reference))
        }
        Err(e) if cmd.circuit.is_some() && cmd.seeds.is_none() && e.exit_code() == 3 => (build_model(&cmd.model)?.0, None),
        Err(e) => return Err(e),
    };
    let n = model.n_qubits();
    let cases = build_cases(cmd, n, reference.as_ref())?;
    let mut reports = Vec::new();
    for case in &cases {
        reports.push(run_case(cmd, &model, reference.as_ref(), case)?);
    }
    let counts = counts_report(&model, &cmd.model);
    let pass = reports.iter().all(|r| r.pass) && counts.as_ref().is_none_or(|c| c.pass);
    let report = VerifyReport {
        params: cmd.model.td,
        dims: cmd.model.dims.clone(),
        lattice_sizes: model.lattice().sizes().to_vec(),
        boundary: boundary_names(&model),
        n_qubits: n,
        source: match &cmd.circuit {
            Some(p) => p.display().to_string(),
            None => "synthesized".into(),
        },
        seeds: cmd.seeds.as_ref().map(seed_label),
        counts,
        cases: reports,
        pass,
    };
    Ok(Output {
        stdout: json(&report),
        pass,
        ..Output::default()
    })
}

fn counts_report(model: &TdModel, args: &ModelArgs) -> Option<CountsReport> {
    if !model.lattice().is_fully_periodic() || !model.params().is_seed_family() {
        return None;
    }
    let gsd_log2 = model.log2_gsd().ok()?;
    let seed_count = seed_count(&model.params(), &args.dims);
    let seed_set_size = seed_set(model).ok()?.len();
    Some(CountsReport {
        gsd_log2,
        seed_count,
        seed_set_size,
        pass: gsd_log2 == seed_count && seed_count == seed_set_size as u64,
    })
}

fn build_cases(cmd: &VerifyCmd, n: usize, reference: Option<&Reference>) -> Result<Vec<Case>, CliError> {
    let expected = |seed: &SeedArg| match seed {
        SeedArg::Basis(bits) => Expected::Basis(bits.clone()),
        SeedArg::Ghz | SeedArg::GhzTree => Expected::Ghz,
        _ => Expected::Any,
    };
    if let Some(path) = &cmd.circuit {
        if cmd.seeds == Some(SeedArg::Random) {
            return Err(config("`random` seeds cannot be combined with --circuit"));
        }
        let circuit = parse_circuit(&read(path)?)?;
        if circuit.n_qubits != n {
            return Err(config(format!("circuit has {} qubits, model has {n}", circuit.n_qubits)));
        }
        let expected = cmd.seeds.as_ref().map_or(Expected::CodeState, expected);
        return Ok(vec![Case {
            label: path.display().to_string(),
            circuit,
            expected,
        }]);
    }
    let reference = reference.expect("synthesis succeeded without --circuit");
    let Some(seed) = &cmd.seeds else {
        return Ok(vec![Case {
            label: "u_c".into(),
            circuit: reference.uc.clone(),
            expected: Expected::CodeState,
        }]);
    };
    let plan = reference.plan.as_ref().expect("seed plan built with --seeds");
    if *seed == SeedArg::Random {
        let mut rng = StdRng::seed_from_u64(cmd.rng_seed);
        return (0..cmd.patterns)
            .map(|_| {
                let bits: Vec<bool> = (0..plan.seeds.len()).map(|_| rng.random()).collect();
                Ok(Case {
                    label: format!("basis:{}", bit_string(&bits)),
                    circuit: pipeline(plan, &SeedEntangler::Basis(bits.clone()), &reference.uc)?,
                    expected: Expected::Basis(bits),
                })
            })
            .collect();
    }
    Ok(vec![Case {
        label: seed_label(seed),
        circuit: pipeline(plan, &entangler_kind(seed, n)?, &reference.uc)?,
        expected: expected(seed),
    }])
}

fn run_case(cmd: &VerifyCmd, model: &TdModel, reference: Option<&Reference>, case: &Case) -> Result<CaseReport, CliError> {
    let layer_check = case.circuit.validate().err().map(|e| e.to_string());
    let tab = run_tableau(&case.circuit)?;
    let state = tab.verify_code_state(model).map_err(config)?;
    let logical = match (&case.expected, reference) {
        (Expected::Basis(bits), Some(r)) => {
            let plan = r.plan.as_ref().expect("seed plan built with --seeds");
            if bits.len() != plan.seeds.len() {
                return Err(config(format!(
                    "basis pattern has {} bits for {} seeds",
                    bits.len(),
                    plan.seeds.len()
                )));
            }
            let mut want = run_tableau(&r.uc)?;
            want.apply_pauli(&x_product(&plan.logical_x, bits, model.n_qubits()))
                .map_err(config)?;
            Some(tab.states_equal(&want))
        }
        (Expected::Ghz, Some(r)) => {
            let plan = r.plan.as_ref().expect("seed plan built with --seeds");
            let all = vec![true; plan.seeds.len()];
            let even = tab
                .expectation(&x_product(&plan.logical_x, &all, model.n_qubits()))
                .map_err(config)?
                == 1;
            let other = match cmd.seeds {
                Some(SeedArg::Ghz) if cmd.circuit.is_none() => SeedEntangler::GhzTree,
                _ => SeedEntangler::Ghz,
            };
            let twin = run_tableau(&pipeline(plan, &other, &r.uc)?)?;
            Some(even && tab.states_equal(&twin))
        }
        _ => None,
    };
    let oracle = if cmd.oracle {
        Some(run_oracle(cmd, model, reference, case, &tab))
    } else {
        None
    };
    let pass = layer_check.is_none()
        && state.pass
        && logical.unwrap_or(true)
        && oracle.as_ref().is_none_or(|o| o.pass);
    Ok(CaseReport {
        label: case.label.clone(),
        layers: case.circuit.layers.len(),
        gates: case.circuit.gate_count(),
        layer_check,
        code_state: CodeStateSummary {
            pass: state.pass,
            violated_a: state.violated_a,
            violated_b: state.violated_b,
        },
        logical,
        oracle,
        pass,
    })
}

fn run_oracle(cmd: &VerifyCmd, model: &TdModel, reference: Option<&Reference>, case: &Case, tab: &Tableau) -> OracleReport {
    let n = model.n_qubits();
    let skipped = |reason: String| OracleReport {
        ran: false,
        reason: Some(reason),
        tableau_agrees: None,
        fidelity: None,
        pass: true,
    };
    if n > cmd.oracle_cap {
        return skipped(format!("{n} qubits exceed the oracle cap {}", cmd.oracle_cap));
    }
    let failed = |e: oracle::OracleError| OracleReport {
        ran: true,
        reason: Some(e.to_string()),
        tableau_agrees: None,
        fidelity: None,
        pass: false,
    };
    let dense = match DenseState::basis_with_cap(n, 0, cmd.oracle_cap).and_then(|s| oracle::dense_run(&case.circuit, s)) {
        Ok(d) => d,
        Err(e) => return failed(e),
    };
    let agrees = match oracle::tableau_crosscheck(tab, &dense) {
        Ok(a) => a,
        Err(e) => return failed(e),
    };
    let target = match dense_target(model, reference, &case.expected) {
        Ok(t) => t,
        Err(e) => return failed(e),
    };
    let fidelity = match target.map(|t| oracle::fidelity(&dense, &t)).transpose() {
        Ok(f) => f,
        Err(e) => return failed(e),
    };
    OracleReport {
        ran: true,
        reason: None,
        tableau_agrees: Some(agrees),
        fidelity,
        pass: agrees && fidelity.is_none_or(|f| f >= 1.0 - oracle::TOLERANCE),
    }
}

/// The expected state built from `∏(1 + A)|0…0⟩` and the logical X
/// operators, when the lattice is periodic.
fn dense_target(
    model: &TdModel,
    reference: Option<&Reference>,
    expected: &Expected,
) -> Result<Option<DenseState>, oracle::OracleError> {
    let Some(reps) = reference.and_then(|r| r.reps.as_ref()) else {
        return Ok(None);
    };
    let plan = reference.and_then(|r| r.plan.as_ref());
    let n = model.n_qubits();
    let code = || oracle::dense_ewsc(model, reps, &Region::All).map(|e| e.state);
    match (expected, plan) {
        (Expected::CodeState, _) => code().map(Some),
        (Expected::Basis(bits), Some(plan)) => {
            let mut s = code()?;
            s.apply_pauli(&x_product(&plan.logical_x, bits, n))?;
            Ok(Some(s))
        }
        (Expected::Ghz, Some(plan)) => {
            let zero = code()?;
            let mut flipped = zero.clone();
            flipped.apply_pauli(&x_product(&plan.logical_x, &vec![true; plan.seeds.len()], n))?;
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let amps: Vec<Complex64> = zero
                .amplitudes()
                .iter()
                .zip(flipped.amplitudes())
                .map(|(a, b)| (a + b) * h)
                .collect();
            DenseState::from_amplitudes(amps).map(Some)
        }
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------- css

#[derive(Serialize)]
struct PatternReport {
    bits: String,
    tableau: bool,
    dense: Option<bool>,
}

#[derive(Serialize)]
struct CssReport {
    n: usize,
    k: usize,
    r: usize,
    plan_source: &'static str,
    plan: PlanFile,
    seeds: Vec<usize>,
    logical_x_tilde: Vec<Vec<usize>>,
    u_g_prime_gates: usize,
    no_rep_condition: bool,
    unique: bool,
    prep_is_code_state: bool,
    patterns: Vec<PatternReport>,
    pass: bool,
}

fn css_matrix(path: &Path) -> Result<tetradigit_core::BitMatrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e| CliError::Css(format!("{}: {e}", path.display())))
}

pub fn cmd_css(cmd: &CssCmd) -> Result<Output, CliError> {
    let code = CssCode::load(css_matrix(&cmd.gx)?, css_matrix(&cmd.gz)?)?;
    let (code, plan, source) = match &cmd.plan {
        Some(path) => {
            let file: PlanFile = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::Css(format!("{}: {e}", path.display())))?;
            let plan = PrepPlan {
                representatives: file.representatives,
                order: file.order,
            };
            (code, plan, "file")
        }
        None => {
            let (code, plan) = css::greedy_plan(&code);
            (code, plan, "greedy")
        }
    };
    if !css::validate_plan(&code, &plan)? {
        return Err(CliError::Css("plan does not give a lower triangular K".into()));
    }
    let seeds = css::find_seeds(&code, &plan)?;
    let n = code.n();
    let no_rep = seeds
        .logical_x_tilde
        .iter()
        .all(|op| plan.representatives.iter().all(|&c| !op.x.get(c)));
    let prep = css::synth_prep(&code, &plan)?;
    let base = run_tableau(&prep)?;
    let prep_ok = base
        .expectations(&code.stabilizers())
        .map_err(config)?
        .iter()
        .all(|&e| e == 1);

    let k = code.k();
    let bit_patterns: Vec<Vec<bool>> = if k <= 4 {
        (0..1u32 << k).map(|m| (0..k).map(|i| m >> i & 1 == 1).collect()).collect()
    } else {
        let mut rng = StdRng::seed_from_u64(cmd.rng_seed);
        (0..8).map(|_| (0..k).map(|_| rng.random()).collect()).collect()
    };
    let dense_ok = cmd.oracle && n <= cmd.oracle_cap;
    let mut patterns = Vec::new();
    for bits in bit_patterns {
        let ent = seed_entangler(&SeedEntangler::Basis(bits.clone()), &seeds.seeds, n)?;
        let full = ent.then(&seeds.u_g_prime).then(&prep);
        let flip = x_product(&seeds.logical_x_tilde, &bits, n);
        let mut want = base.clone();
        want.apply_pauli(&flip).map_err(config)?;
        let tableau = run_tableau(&full)?.states_equal(&want);
        let dense = if dense_ok {
            Some(dense_matches(&full, &prep, &flip, cmd.oracle_cap).unwrap_or(false))
        } else {
            None
        };
        patterns.push(PatternReport {
            bits: bit_string(&bits),
            tableau,
            dense,
        });
    }
    let pass = no_rep && prep_ok && patterns.iter().all(|p| p.tableau && p.dense.unwrap_or(true));
    let report = CssReport {
        n,
        k,
        r: code.r(),
        plan_source: source,
        plan: PlanFile {
            representatives: plan.representatives.clone(),
            order: plan.order.clone(),
        },
        seeds: seeds.seeds.clone(),
        logical_x_tilde: seeds.logical_x_tilde.iter().map(PauliOp::support).collect(),
        u_g_prime_gates: seeds.u_g_prime.gate_count(),
        no_rep_condition: no_rep,
        unique: seeds.unique,
        prep_is_code_state: prep_ok,
        patterns,
        pass,
    };
    let text = json(&report);
    if let Some(path) = &cmd.out {
        write(path, &text)?;
    }
    Ok(Output {
        stdout: text,
        pass,
        ..Output::default()
    })
}

fn dense_matches(full: &Circuit, prep: &Circuit, flip: &PauliOp, cap: usize) -> Result<bool, oracle::OracleError> {
    let n = full.n_qubits;
    let got = oracle::dense_run(full, DenseState::basis_with_cap(n, 0, cap)?)?;
    let mut want = oracle::dense_run(prep, DenseState::basis_with_cap(n, 0, cap)?)?;
    want.apply_pauli(flip)?;
    Ok(oracle::fidelity(&got, &want)? >= 1.0 - oracle::TOLERANCE)
}
