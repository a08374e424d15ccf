//! Text formats: circuits and GF(2) matrices.
//!
//! A circuit file starts with `qubits <N>`, optionally followed by a
//! `# meta td=<d_n,d_s,d_l,D> dims=<L,...> open=<{dirs}>` line. Layers are
//! separated by `==`. Each segment of a layer opens with a tag comment
//! (`# uc step=1 part={1,2} layer=3`, `# seed_entangler`, `# u_g layer=1`,
//! `# prep layer=0`, `# untagged`); gates read `H q`, `CX c t`, `X q`,
//! `Z q`. Other comments are ignored. Files end with a newline.

use std::fmt::Write as _;

use thiserror::Error;

use tetradigit_core::circuit::CircuitMeta;
use tetradigit_core::{BitMatrix, BitVector, Circuit, DirSet, Gate, Layer, Segment, Tag, TdParams};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `qubits <N>` header")]
    MissingHeader,
    #[error("missing trailing newline")]
    NoTrailingNewline,
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn tag_text(tag: &Tag) -> String {
    match tag {
        Tag::Uc { step, part, layer } => format!("uc step={step} part={part} layer={layer}"),
        Tag::SeedEntangler => "seed_entangler".into(),
        Tag::Growth { layer } => format!("u_g layer={layer}"),
        Tag::Prep { layer } => format!("prep layer={layer}"),
        Tag::Untagged => "untagged".into(),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits);
    if let Some(meta) = &circuit.meta {
        let p = meta.params;
        let _ = writeln!(
            out,
            "# meta td={},{},{},{} dims={} open={}",
            p.d_n,
            p.d_s,
            p.d_l,
            p.dim,
            join(&meta.sizes),
            meta.open
        );
    }
    for (k, layer) in circuit.layers.iter().enumerate() {
        if k > 0 {
            out.push_str("==\n");
        }
        for seg in &layer.segments {
            let _ = writeln!(out, "# {}", tag_text(&seg.tag));
            for g in &seg.gates {
                let _ = writeln!(out, "{g}");
            }
        }
    }
    out
}

/// Comma-separated unsigned integers.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// `{1,3}` with 1-based directions.
pub fn parse_dirset(s: &str) -> Option<DirSet> {
    let inner = s.strip_prefix('{')?.strip_suffix('}')?;
    let mut set = DirSet::EMPTY;
    for dir in parse_list::<usize>(inner)? {
        if dir == 0 || dir > 16 {
            return None;
        }
        set.insert(dir - 1);
    }
    Some(set)
}

fn fields<'a>(words: impl Iterator<Item = &'a str>) -> Option<Vec<(&'a str, &'a str)>> {
    words.map(|w| w.split_once('=')).collect()
}

fn field<'a>(kv: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

/// `Ok(None)` for free-form comments.
fn parse_tag(body: &str, line: usize) -> Result<Option<Tag>, FormatError> {
    let mut words = body.split_whitespace();
    let Some(kind) = words.next() else {
        return Ok(None);
    };
    if !matches!(kind, "uc" | "seed_entangler" | "u_g" | "prep" | "untagged") {
        return Ok(None);
    }
    let kv = fields(words).ok_or_else(|| syntax(line, "malformed tag fields"))?;
    let num = |key: &str| -> Result<usize, FormatError> {
        field(&kv, key)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| syntax(line, format!("tag `{kind}` needs `{key}=<n>`")))
    };
    let tag = match kind {
        "uc" => Tag::Uc {
            step: num("step")?,
            part: field(&kv, "part")
                .and_then(parse_dirset)
                .ok_or_else(|| syntax(line, "tag `uc` needs `part={...}`"))?,
            layer: num("layer")?,
        },
        "seed_entangler" => Tag::SeedEntangler,
        "u_g" => Tag::Growth { layer: num("layer")? },
        "prep" => Tag::Prep { layer: num("layer")? },
        _ => Tag::Untagged,
    };
    Ok(Some(tag))
}

fn parse_meta(body: &str, line: usize) -> Result<CircuitMeta, FormatError> {
    let kv = fields(body.split_whitespace()).ok_or_else(|| syntax(line, "malformed meta line"))?;
    let bad = || syntax(line, "meta needs td=, dims= and open=");
    let td: Vec<usize> = field(&kv, "td").and_then(parse_list).ok_or_else(bad)?;
    let sizes: Vec<u32> = field(&kv, "dims").and_then(parse_list).ok_or_else(bad)?;
    let open = field(&kv, "open").and_then(parse_dirset).ok_or_else(bad)?;
    if td.len() != 4 {
        return Err(bad());
    }
    let params = TdParams::new(td[0], td[1], td[2], td[3]).map_err(|e| syntax(line, e.to_string()))?;
    Ok(CircuitMeta { params, sizes, open })
}

fn parse_qubit(word: Option<&str>, line: usize) -> Result<usize, FormatError> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| syntax(line, "expected a qubit index"))
}

fn parse_gate(text: &str, line: usize) -> Result<Gate, FormatError> {
    let mut words = text.split_whitespace();
    let op = words.next().unwrap_or_default();
    let gate = match op {
        "H" => Gate::H(parse_qubit(words.next(), line)?),
        "X" => Gate::X(parse_qubit(words.next(), line)?),
        "Z" => Gate::Z(parse_qubit(words.next(), line)?),
        "CX" => {
            let c = parse_qubit(words.next(), line)?;
            Gate::Cx(c, parse_qubit(words.next(), line)?)
        }
        _ => return Err(syntax(line, format!("unknown gate `{op}`"))),
    };
    if words.next().is_some() {
        return Err(syntax(line, "trailing tokens after gate"));
    }
    Ok(gate)
}

/// Parses a circuit and checks qubit ranges. Layer commutation is left to
/// [`Circuit::validate`].
pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(FormatError::NoTrailingNewline);
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let n_qubits = loop {
        match lines.next() {
            None => return Err(FormatError::MissingHeader),
            Some((_, "")) => continue,
            Some((_, l)) if l.starts_with('#') => continue,
            Some((i, l)) => {
                break l
                    .strip_prefix("qubits ")
                    .and_then(|n| n.trim().parse::<usize>().ok())
                    .ok_or_else(|| syntax(i, "expected `qubits <N>`"))?;
            }
        }
    };
    let mut circuit = Circuit::new(n_qubits);
    let mut layer = Layer { segments: Vec::new() };
    for (i, l) in lines {
        if l.is_empty() {
            continue;
        }
        if l == "==" {
            circuit.layers.push(std::mem::replace(&mut layer, Layer { segments: Vec::new() }));
            continue;
        }
        if let Some(body) = l.strip_prefix('#') {
            let body = body.trim();
            if let Some(rest) = body.strip_prefix("meta ") {
                circuit.meta = Some(parse_meta(rest, i)?);
            } else if let Some(tag) = parse_tag(body, i)? {
                layer.segments.push(Segment { tag, gates: Vec::new() });
            }
            continue;
        }
        let gate = parse_gate(l, i)?;
        if let Some(q) = match gate {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => Some(q),
            Gate::Cx(c, t) => Some(c.max(t)),
        }
        .filter(|&q| q >= n_qubits)
        {
            return Err(syntax(i, format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        match layer.segments.last_mut() {
            Some(seg) => seg.gates.push(gate),
            None => layer.segments.push(Segment {
                tag: Tag::Untagged,
                gates: vec![gate],
            }),
        }
    }
    if !layer.segments.is_empty() || !circuit.layers.is_empty() {
        circuit.layers.push(layer);
    }
    Ok(circuit)
}

/// One row per line of `0`/`1`, preceded by a `# <rows> x <cols>` comment.
pub fn write_matrix(m: &BitMatrix) -> String {
    let mut out = format!("# {} x {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(if m.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Reads the matrix text format. The column count comes from the rows, or
/// from a `# <rows> x <cols>` comment when there are none.
pub fn parse_matrix(text: &str) -> Result<BitMatrix, FormatError> {
    let mut rows = Vec::new();
    let mut declared = None;
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(body) = l.strip_prefix('#') {
            if let Some((_, c)) = body.split_once(" x ") {
                declared = c.trim().parse::<usize>().ok().or(declared);
            }
            continue;
        }
        let bits = l
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(syntax(i + 1, format!("unexpected character `{ch}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(BitVector::from_bools(&bits));
    }
    let cols = rows.first().map(BitVector::len).or(declared).unwrap_or(0);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(FormatError::RaggedRow {
                row,
                expected: cols,
                got: r.len(),
            });
        }
    }
    Ok(BitMatrix::from_rows(cols, &rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_and_tag_lines() {
        let text = "qubits 3\n# note\nH 0\n# uc step=1 part={2} layer=1\nCX 0 1\nCX 0 2\n==\n# u_g layer=2\nX 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.layers.len(), 2);
        assert_eq!(c.layers[0].segments[0].tag, Tag::Untagged);
        assert_eq!(
            c.layers[0].segments[1].tag,
            Tag::Uc {
                step: 1,
                part: DirSet::single(1),
                layer: 1
            }
        );
        assert_eq!(c.layers[1].segments[0].gates, vec![Gate::X(2)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_circuit("H 0\n"), Err(syntax(1, "expected `qubits <N>`")));
        assert_eq!(parse_circuit("qubits 2\nH 0"), Err(FormatError::NoTrailingNewline));
        assert!(parse_circuit("qubits 2\nCX 0 2\n").is_err());
        assert!(parse_circuit("qubits 2\nY 0\n").is_err());
        assert!(parse_circuit("qubits 2\n# uc step=1\n").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = parse_matrix("# steane\n0001111\n0110011\n\n1010101\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 7));
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        let empty = BitMatrix::zeros(0, 5);
        assert_eq!(parse_matrix(&write_matrix(&empty)).unwrap().cols(), 5);
        assert!(matches!(parse_matrix("01\n011\n"), Err(FormatError::RaggedRow { .. })));
    }

    #[test]
    fn dirsets_are_one_based() {
        assert_eq!(parse_dirset("{}"), Some(DirSet::EMPTY));
        assert_eq!(parse_dirset("{1,3}").map(|s| s.iter().collect::<Vec<_>>()), Some(vec![0, 2]));
        assert_eq!(parse_dirset("{0}"), None);
    }
}
