//! Braid-to-circuit compiler over path qubits, a counter register and an
//! optional test ancilla, with a statevector simulator and a line-oriented
//! text format (grammar in `docs/circuit-ir.md`).
//!
//! Qubit layout: path qubit `s - 1` holds step `s`; counter qubits follow
//! (little-endian value); the ancilla, if present, is last. A statevector
//! index has qubit `q` at bit `q`.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::laurent::unit_a;
use crate::path_model::{BlockOperator, CMatrix, CoefficientTable, PathBasis};

/// Statevector simulation refuses circuits wider than this.
pub const MAX_SIMULATED_QUBITS: usize = 22;

const HEADER: &str = "JONES-CIRCUIT 1";

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Compute,
    Uncompute,
}

impl Direction {
    /// Counter shift for a select bit of 1 (a bit of 0 shifts the other way).
    fn step(self) -> i64 {
        match self {
            Self::Compute => 1,
            Self::Uncompute => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    /// `counter += +1` if the select qubit is 1, `-1` if it is 0 (negated
    /// when uncomputing), modulo `modulus`. Counter values at or above the
    /// modulus are left alone.
    CounterUpdate { select: usize, modulus: u32, direction: Direction },
    /// Explicit unitary on `counter ++ [q_i, q_{i+1}]`.
    LocalCrossing { matrix: usize },
    Hadamard,
    /// Explicit single-qubit unitary preparing the ancilla phase.
    PhasePrep { matrix: usize },
    Measure,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CounterUpdate { .. } => "counter-update",
            Self::LocalCrossing { .. } => "local-crossing",
            Self::Hadamard => "hadamard",
            Self::PhasePrep { .. } => "phase-prep",
            Self::Measure => "measure",
        }
    }

    pub fn matrix(&self) -> Option<usize> {
        match self {
            Self::LocalCrossing { matrix } | Self::PhasePrep { matrix } => Some(*matrix),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    /// All must be 1 for the gate to act.
    pub controls: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestPart {
    Re,
    Im,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub path_qubits: usize,
    pub counter_qubits: usize,
    pub ancilla: bool,
    pub k: u32,
    pub gates: Vec<Gate>,
    pub matrices: Vec<CMatrix>,
}

/// `ceil(log2(2k))`.
pub fn counter_width(k: u32) -> usize {
    (2 * k as u64).next_power_of_two().trailing_zeros() as usize
}

impl Circuit {
    pub fn new(path_qubits: usize, k: u32, ancilla: bool) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidK(k));
        }
        Ok(Self { path_qubits, counter_qubits: counter_width(k), ancilla, k, gates: Vec::new(), matrices: Vec::new() })
    }

    pub fn qubit_count(&self) -> usize {
        self.path_qubits + self.counter_qubits + usize::from(self.ancilla)
    }

    pub fn modulus(&self) -> u32 {
        2 * self.k
    }

    pub fn counter_register(&self) -> Vec<usize> {
        (self.path_qubits..self.path_qubits + self.counter_qubits).collect()
    }

    pub fn ancilla_qubit(&self) -> Option<usize> {
        self.ancilla.then_some(self.path_qubits + self.counter_qubits)
    }

    /// Path qubit holding step `s` (1-based).
    pub fn path_qubit(&self, s: usize) -> usize {
        s - 1
    }

    pub fn local_crossing_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.kind, GateKind::LocalCrossing { .. })).count()
    }

    pub fn counter_update_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.kind, GateKind::CounterUpdate { .. })).count()
    }

    /// Largest number of target qubits of any gate.
    pub fn max_gate_width(&self) -> usize {
        self.gates.iter().map(|g| g.targets.len()).max().unwrap_or(0)
    }

    fn add_matrix(&mut self, m: CMatrix) -> usize {
        if let Some(i) = self.matrices.iter().position(|x| *x == m) {
            return i;
        }
        self.matrices.push(m);
        self.matrices.len() - 1
    }
}

/// Counter updates bringing the counter from 1 to `z_i`, or back.
pub fn counter_walk(i: usize, n: usize, k: u32, direction: Direction) -> Result<Vec<Gate>> {
    if i < 1 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: i as i64, strands: n });
    }
    let counter: Vec<usize> = (n..n + counter_width(k)).collect();
    let gate = |j: usize| Gate {
        kind: GateKind::CounterUpdate { select: j - 1, modulus: 2 * k, direction },
        targets: counter.clone(),
        controls: Vec::new(),
    };
    Ok(match direction {
        Direction::Compute => (1..i).map(gate).collect(),
        Direction::Uncompute => (1..i).rev().map(gate).collect(),
    })
}

/// Unitary on `counter ++ [q_i, q_{i+1}]` (local index `z + 2^c b_i +
/// 2^{c+1} b_{i+1}`): for counter value `z` in `1..k`, `x Phi + y` on the
/// pair `(01, 10)` and `y` on `00`/`11`, with `(x, y) = (A, A^-1)` for a
/// positive crossing; identity for every other counter value.
pub fn local_crossing_gate(k: u32, sign: i8) -> Result<CMatrix> {
    let a = unit_a(k)?;
    let table = CoefficientTable::new(k)?;
    let (x, y) = if sign > 0 { (a, a.inv()) } else { (a.inv(), a) };
    let c = counter_width(k);
    let dim = 1usize << (c + 2);
    let idx = |z: usize, bi: usize, bj: usize| z | bi << c | bj << (c + 1);
    let mut m = CMatrix::identity(dim, dim);
    for z in 1..k as usize {
        m[(idx(z, 0, 0), idx(z, 0, 0))] = y;
        m[(idx(z, 1, 1), idx(z, 1, 1))] = y;
        let local = table.local_phi(z);
        // pattern 01 means b_i = 0, b_{i+1} = 1
        let sector = [idx(z, 0, 1), idx(z, 1, 0)];
        for (r, &row) in sector.iter().enumerate() {
            for (s, &col) in sector.iter().enumerate() {
                let id = if r == s { y } else { ZERO };
                m[(row, col)] = x * local[r][s] + id;
            }
        }
    }
    Ok(m)
}

fn crossing_gates(circuit: &mut Circuit, g: i32, controls: &[usize]) -> Result<()> {
    let n = circuit.path_qubits;
    let i = g.unsigned_abs() as usize;
    let matrix = circuit.add_matrix(local_crossing_gate(circuit.k, g.signum() as i8)?);
    let mut block = counter_walk(i, n, circuit.k, Direction::Compute)?;
    let mut targets = circuit.counter_register();
    targets.extend([circuit.path_qubit(i), circuit.path_qubit(i + 1)]);
    block.push(Gate { kind: GateKind::LocalCrossing { matrix }, targets, controls: Vec::new() });
    block.extend(counter_walk(i, n, circuit.k, Direction::Uncompute)?);
    for mut gate in block {
        gate.controls.extend_from_slice(controls);
        circuit.gates.push(gate);
    }
    Ok(())
}

/// `Q(B)`: one block per crossing, last letter first, so the circuit's
/// unitary on the path space is `phi(g_1) ... phi(g_m)`.
pub fn synthesize_braid(braid: &BraidWord, k: u32) -> Result<Circuit> {
    let mut circuit = Circuit::new(braid.strands(), k, false)?;
    for &g in braid.word().iter().rev() {
        crossing_gates(&mut circuit, g, &[])?;
    }
    Ok(circuit)
}

/// Ancilla preparation, `Q(B)` controlled on the ancilla, a final Hadamard
/// and a measurement of the ancilla. The input path is loaded by the
/// simulator, not by gates.
pub fn synthesize_hadamard_test(braid: &BraidWord, k: u32, part: TestPart) -> Result<Circuit> {
    let mut circuit = Circuit::new(braid.strands(), k, true)?;
    let anc = circuit.ancilla_qubit().expect("ancilla requested");
    let single = |kind| Gate { kind, targets: vec![anc], controls: Vec::new() };
    circuit.gates.push(single(GateKind::Hadamard));
    if part == TestPart::Im {
        let mut s_dag = CMatrix::identity(2, 2);
        s_dag[(1, 1)] = Complex64::new(0.0, -1.0);
        let matrix = circuit.add_matrix(s_dag);
        circuit.gates.push(single(GateKind::PhasePrep { matrix }));
    }
    for &g in braid.word().iter().rev() {
        crossing_gates(&mut circuit, g, &[anc])?;
    }
    circuit.gates.push(single(GateKind::Hadamard));
    circuit.gates.push(single(GateKind::Measure));
    Ok(circuit)
}

fn hadamard_matrix() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[h.into(), h.into(), h.into(), (-h).into()])
}

fn control_mask(controls: &[usize]) -> usize {
    controls.iter().fold(0, |m, &q| m | 1 << q)
}

fn apply_matrix(state: &mut [Complex64], matrix: &CMatrix, targets: &[usize], controls: &[usize]) {
    let cmask = control_mask(controls);
    let tmask = control_mask(targets);
    let dim = 1usize << targets.len();
    let spread = |local: usize| {
        targets.iter().enumerate().fold(0, |acc, (t, &q)| acc | ((local >> t) & 1) << q)
    };
    let offsets: Vec<usize> = (0..dim).map(spread).collect();
    let mut input = vec![ZERO; dim];
    for base in 0..state.len() {
        if base & tmask != 0 || base & cmask != cmask {
            continue;
        }
        for (l, &off) in offsets.iter().enumerate() {
            input[l] = state[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            state[base | off] = (0..dim).map(|c| matrix[(r, c)] * input[c]).sum();
        }
    }
}

fn apply_counter_update(state: &mut [Complex64], gate: &Gate, select: usize, modulus: u32, direction: Direction) {
    let cmask = control_mask(&gate.controls);
    let tmask = control_mask(&gate.targets);
    let read = |idx: usize| {
        gate.targets.iter().enumerate().fold(0usize, |acc, (t, &q)| acc | ((idx >> q) & 1) << t)
    };
    let spread = |v: usize| gate.targets.iter().enumerate().fold(0, |acc, (t, &q)| acc | ((v >> t) & 1) << q);
    let m = modulus as i64;
    let mut out = vec![ZERO; state.len()];
    for (idx, &amp) in state.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        let mut target = idx;
        if idx & cmask == cmask {
            let v = read(idx) as i64;
            if v < m {
                let shift = if idx >> select & 1 == 1 { direction.step() } else { -direction.step() };
                target = (idx & !tmask) | spread((v + shift).rem_euclid(m) as usize);
            }
        }
        out[target] = amp;
    }
    state.copy_from_slice(&out);
}

fn apply_gate(circuit: &Circuit, gate: &Gate, state: &mut [Complex64]) {
    match gate.kind {
        GateKind::CounterUpdate { select, modulus, direction } => {
            apply_counter_update(state, gate, select, modulus, direction)
        }
        GateKind::LocalCrossing { matrix } | GateKind::PhasePrep { matrix } => {
            apply_matrix(state, &circuit.matrices[matrix], &gate.targets, &gate.controls)
        }
        GateKind::Hadamard => apply_matrix(state, &hadamard_matrix(), &gate.targets, &gate.controls),
        GateKind::Measure => {}
    }
}

fn check_width(circuit: &Circuit) -> Result<()> {
    let q = circuit.qubit_count();
    if q > MAX_SIMULATED_QUBITS {
        return Err(Error::CapExceeded { what: "qubit count", value: q, cap: MAX_SIMULATED_QUBITS });
    }
    Ok(())
}

/// Statevector index of path `bits` (path-model encoding) with counter 1
/// and the ancilla at 0.
fn embed(circuit: &Circuit, bits: u64) -> usize {
    let n = circuit.path_qubits;
    let path: usize = (1..=n).filter(|&s| bits >> (n - s) & 1 == 1).map(|s| 1 << circuit.path_qubit(s)).sum();
    path | 1 << n
}

fn check_basis(circuit: &Circuit, basis: &PathBasis) -> Result<()> {
    if basis.n() != circuit.path_qubits {
        return Err(Error::DimensionMismatch { expected: circuit.path_qubits, got: basis.n() });
    }
    if basis.k() != circuit.k {
        return Err(Error::Config(format!("basis has k = {}, circuit has k = {}", basis.k(), circuit.k)));
    }
    Ok(())
}

/// Run every gate on a full statevector.
pub fn simulate(circuit: &Circuit, state: &mut [Complex64]) -> Result<()> {
    check_width(circuit)?;
    let dim = 1usize << circuit.qubit_count();
    if state.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: state.len() });
    }
    for gate in &circuit.gates {
        apply_gate(circuit, gate, state);
    }
    Ok(())
}

/// The circuit's action on `H_{n,k} (x) |counter = 1>`, one column per path.
pub fn circuit_to_matrix(circuit: &Circuit, basis: &Arc<PathBasis>) -> Result<BlockOperator> {
    check_width(circuit)?;
    check_basis(circuit, basis)?;
    if circuit.ancilla {
        return Err(Error::Config("restriction to the path space needs a circuit without ancilla".into()));
    }
    let dim = 1usize << circuit.qubit_count();
    let rows: Vec<usize> = basis.paths().iter().map(|&p| embed(circuit, p)).collect();
    let columns: Vec<Vec<Complex64>> = rows
        .par_iter()
        .map(|&start| {
            let mut state = vec![ZERO; dim];
            state[start] = ONE;
            for gate in &circuit.gates {
                apply_gate(circuit, gate, &mut state);
            }
            rows.iter().map(|&r| state[r]).collect()
        })
        .collect();
    let len = basis.len();
    let dense = DMatrix::from_fn(len, len, |r, c| columns[c][r]);
    BlockOperator::from_dense(basis.clone(), &dense)
        .ok_or_else(|| Error::Config("circuit mixes paths with different endpoints".into()))
}

/// Whether, for every admissible input with counter 1, the counter register
/// holds exactly 1 whenever no counter walk is open (all amplitudes on other
/// counter values are exactly zero).
pub fn counter_returns_to_one(circuit: &Circuit, basis: &PathBasis) -> Result<bool> {
    check_width(circuit)?;
    check_basis(circuit, basis)?;
    let dim = 1usize << circuit.qubit_count();
    let n = circuit.path_qubits;
    let counter_mask = ((1usize << circuit.counter_qubits) - 1) << n;
    let anc = circuit.ancilla_qubit();
    let clean = basis.paths().par_iter().all(|&p| {
        let mut state = vec![ZERO; dim];
        let start = embed(circuit, p);
        // with an ancilla, start from both branches so controlled gates act
        match anc {
            Some(q) => {
                state[start] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                state[start | 1 << q] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            }
            None => state[start] = ONE,
        }
        let mut open = 0i64;
        for gate in &circuit.gates {
            if matches!(gate.kind, GateKind::Hadamard | GateKind::PhasePrep { .. }) {
                continue;
            }
            apply_gate(circuit, gate, &mut state);
            if let GateKind::CounterUpdate { direction, .. } = gate.kind {
                open += direction.step();
            }
            if open == 0
                && state.iter().enumerate().any(|(i, amp)| *amp != ZERO && i & counter_mask != 1 << n)
            {
                return false;
            }
        }
        true
    });
    Ok(clean)
}

/// `P(ancilla = 0) - P(ancilla = 1)` for a Hadamard-test circuit run on
/// input path `path` (basis index).
pub fn hadamard_expectation(circuit: &Circuit, basis: &PathBasis, path: usize) -> Result<f64> {
    check_width(circuit)?;
    check_basis(circuit, basis)?;
    let anc = circuit
        .ancilla_qubit()
        .ok_or_else(|| Error::Config("hadamard test circuit needs an ancilla".into()))?;
    let mut state = vec![ZERO; 1 << circuit.qubit_count()];
    state[embed(circuit, basis.path(path))] = ONE;
    simulate(circuit, &mut state)?;
    Ok(state
        .iter()
        .enumerate()
        .map(|(i, amp)| if i >> anc & 1 == 0 { amp.norm_sqr() } else { -amp.norm_sqr() })
        .sum())
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_list(qubits: &[usize]) -> String {
    if qubits.is_empty() {
        "-".into()
    } else {
        qubits.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Byte-stable text form.
pub fn emit_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(
        out,
        "registers path={} counter={} ancilla={}",
        circuit.path_qubits,
        circuit.counter_qubits,
        u8::from(circuit.ancilla)
    );
    let _ = writeln!(out, "k={}", circuit.k);
    for gate in &circuit.gates {
        let _ = write!(out, "GATE {} {} {}", gate.kind.name(), fmt_list(&gate.targets), fmt_list(&gate.controls));
        match gate.kind {
            GateKind::CounterUpdate { select, modulus, direction } => {
                let step = if direction == Direction::Compute { "+1" } else { "-1" };
                let _ = write!(out, " select={select} step={step} mod={modulus}");
            }
            GateKind::LocalCrossing { matrix } | GateKind::PhasePrep { matrix } => {
                let _ = write!(out, " matrix={matrix}");
            }
            GateKind::Hadamard | GateKind::Measure => {}
        }
        out.push('\n');
    }
    for (i, m) in circuit.matrices.iter().enumerate() {
        let _ = writeln!(out, "MATRIX {i} {}", m.nrows());
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|c| format!("{} {}", fmt_f64(m[(r, c)].re), fmt_f64(m[(r, c)].im)))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next().map(|(i, l)| (i + 1, l.trim_end()))
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::CircuitParse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T> {
    text.parse().map_err(|_| perr(line, format!("invalid {what} {text:?}")))
}

fn parse_key<'a>(line: usize, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected {key}=...")))
}

fn parse_list(line: usize, text: Option<&str>) -> Result<Vec<usize>> {
    match text {
        None => Err(perr(line, "missing qubit list")),
        Some("-") => Ok(Vec::new()),
        Some(t) => t.split(',').map(|q| parse_num(line, q, "qubit index")).collect(),
    }
}

/// Inverse of [`emit_text`]; also validates qubit indices and matrix
/// references.
pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut lines = Lines { inner: text.lines().enumerate().peekable() };
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((l, other)) => return Err(perr(l, format!("expected {HEADER:?}, found {other:?}"))),
        None => return Err(perr(1, "empty document")),
    }
    let (l, regs) = lines.next().ok_or_else(|| perr(2, "missing registers line"))?;
    let mut tok = regs.split_whitespace();
    if tok.next() != Some("registers") {
        return Err(perr(l, "expected registers line"));
    }
    let path_qubits: usize = parse_num(l, parse_key(l, tok.next(), "path")?, "path width")?;
    let counter_qubits: usize = parse_num(l, parse_key(l, tok.next(), "counter")?, "counter width")?;
    let ancilla = match parse_key(l, tok.next(), "ancilla")? {
        "0" => false,
        "1" => true,
        other => return Err(perr(l, format!("ancilla must be 0 or 1, got {other:?}"))),
    };
    let (l, kline) = lines.next().ok_or_else(|| perr(3, "missing k line"))?;
    let k: u32 = parse_num(l, parse_key(l, Some(kline), "k")?, "k")?;
    let mut circuit = Circuit::new(path_qubits, k, ancilla).map_err(|e| perr(l, e.to_string()))?;
    if circuit.counter_qubits != counter_qubits {
        return Err(perr(l, format!("counter width {counter_qubits} does not match k = {k}")));
    }

    let width = circuit.qubit_count();
    let mut matrix_refs = Vec::new();
    while let Some((l, line)) = lines.next() {
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("GATE") => {
                let name = tok.next().ok_or_else(|| perr(l, "missing gate kind"))?;
                let targets = parse_list(l, tok.next())?;
                let controls = parse_list(l, tok.next())?;
                if let Some(&q) = targets.iter().chain(&controls).find(|&&q| q >= width) {
                    return Err(perr(l, format!("qubit {q} out of range for {width} qubits")));
                }
                let kind = match name {
                    "counter-update" => {
                        let select = parse_num(l, parse_key(l, tok.next(), "select")?, "select qubit")?;
                        let direction = match parse_key(l, tok.next(), "step")? {
                            "+1" => Direction::Compute,
                            "-1" => Direction::Uncompute,
                            other => return Err(perr(l, format!("step must be +1 or -1, got {other:?}"))),
                        };
                        let modulus = parse_num(l, parse_key(l, tok.next(), "mod")?, "modulus")?;
                        GateKind::CounterUpdate { select, modulus, direction }
                    }
                    "local-crossing" | "phase-prep" => {
                        let matrix = parse_num(l, parse_key(l, tok.next(), "matrix")?, "matrix index")?;
                        matrix_refs.push((l, matrix, 1usize << targets.len()));
                        if name == "local-crossing" {
                            GateKind::LocalCrossing { matrix }
                        } else {
                            GateKind::PhasePrep { matrix }
                        }
                    }
                    "hadamard" => GateKind::Hadamard,
                    "measure" => GateKind::Measure,
                    other => return Err(perr(l, format!("unknown gate kind {other:?}"))),
                };
                if let Some(extra) = tok.next() {
                    return Err(perr(l, format!("unexpected token {extra:?}")));
                }
                circuit.gates.push(Gate { kind, targets, controls });
            }
            Some("MATRIX") => {
                let index: usize = parse_num(l, tok.next().unwrap_or(""), "matrix index")?;
                let dim: usize = parse_num(l, tok.next().unwrap_or(""), "matrix dimension")?;
                if index != circuit.matrices.len() {
                    return Err(perr(l, format!("expected matrix {}, found {index}", circuit.matrices.len())));
                }
                let mut m = CMatrix::zeros(dim, dim);
                for r in 0..dim {
                    let (lr, row) = lines.next().ok_or_else(|| perr(l + r + 1, "truncated matrix"))?;
                    let vals: Vec<f64> =
                        row.split_whitespace().map(|v| parse_num(lr, v, "matrix entry")).collect::<Result<_>>()?;
                    if vals.len() != 2 * dim {
                        return Err(perr(lr, format!("expected {} numbers, found {}", 2 * dim, vals.len())));
                    }
                    for c in 0..dim {
                        m[(r, c)] = Complex64::new(vals[2 * c], vals[2 * c + 1]);
                    }
                }
                circuit.matrices.push(m);
            }
            _ => return Err(perr(l, format!("unrecognized line {line:?}"))),
        }
    }
    for (l, index, dim) in matrix_refs {
        match circuit.matrices.get(index) {
            Some(m) if m.nrows() == dim => {}
            Some(m) => return Err(perr(l, format!("matrix {index} is {}x{0}, gate needs {dim}x{dim}", m.nrows()))),
            None => return Err(perr(l, format!("undefined matrix {index}"))),
        }
    }
    Ok(circuit)
}
