//! Pauli product measurements and Clifford-frame execution.
//!
//! Three layers live here:
//!
//! * gate-level measurement circuits that realize a non-destructive Pauli
//!   product measurement through a CAT ancilla register, with and without
//!   an explicit `S^dagger` (the latter borrows a reusable `|Y>` register);
//! * the Clifford frame: a `2n`-row Pauli table that absorbs deferred
//!   Clifford corrections with exact `i^s` phase arithmetic, so corrections
//!   are never applied as gates;
//! * a compiler and executor that turn Clifford+T programs into streams of
//!   `INIT` / `PPM` / conditional-`CLIFFORD` instructions, plus a greedy
//!   scheduler that packs commuting PPMs into layers.

use rand::Rng;

use crate::error::Error;
use crate::pauli::{PauliKind, PauliString};
use crate::sim::{Basis, DenseState};
use crate::Result;

// ---------------------------------------------------------------------------
// Clifford frame

/// `2n`-row lookup table mapping instruction-level `X_j` / `Z_j` to their
/// images under every Clifford deferred so far.
#[derive(Debug, Clone)]
pub struct CliffordFrame {
    n: usize,
    x_rows: Vec<PauliString>,
    z_rows: Vec<PauliString>,
    word_ops: usize,
}

impl CliffordFrame {
    pub fn identity(n: usize) -> Self {
        CliffordFrame {
            n,
            x_rows: (0..n).map(|q| PauliString::single_x(n, q)).collect(),
            z_rows: (0..n).map(|q| PauliString::single_z(n, q)).collect(),
            word_ops: 0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_row(&self, q: usize) -> &PauliString {
        &self.x_rows[q]
    }

    pub fn z_row(&self, q: usize) -> &PauliString {
        &self.z_rows[q]
    }

    /// Accumulated word-level operation count of all updates.
    pub fn word_ops(&self) -> usize {
        self.word_ops
    }

    /// Rewrites an instruction-level Pauli through the frame with exact
    /// phase: `i^s * prod_j Xrow_j^{x_j} * prod_j Zrow_j^{z_j}`.
    pub fn lookup(&self, p: &PauliString) -> Result<PauliString> {
        if p.n_qubits() != self.n {
            return Err(Error::dimension(format!(
                "lookup of {}-qubit Pauli in {}-qubit frame",
                p.n_qubits(),
                self.n
            )));
        }
        let mut out = PauliString::identity(self.n);
        out.set_phase(p.phase());
        for q in 0..self.n {
            if p.x_bit(q) {
                out = out.mul(&self.x_rows[q])?;
            }
        }
        for q in 0..self.n {
            if p.z_bit(q) {
                out = out.mul(&self.z_rows[q])?;
            }
        }
        Ok(out)
    }

    /// Folds the correction `exp(i k pi/4 P)` into the table: rows commuting
    /// with `P` are untouched; an anticommuting row `Q` becomes `i^k Q P`
    /// for odd `k` and `-Q` for `k = 2`.
    pub fn update(&mut self, k: u8, p: &PauliString) -> Result<()> {
        let k = k % 4;
        if k == 0 {
            return Ok(());
        }
        if p.n_qubits() != self.n {
            return Err(Error::dimension("frame update size mismatch"));
        }
        if !p.is_hermitian() {
            return Err(Error::validation(format!(
                "correction Pauli must be Hermitian, got {p}"
            )));
        }
        let words = p.word_count();
        let mut ops = 0usize;
        for rows in [&mut self.x_rows, &mut self.z_rows] {
            for row in rows.iter_mut() {
                ops += 2 * words; // commutation parity
                if row.commutes_with(p) {
                    continue;
                }
                if k == 2 {
                    row.set_phase((row.phase() + 2) % 4);
                } else {
                    let mut next = row.mul(p)?;
                    next.set_phase((next.phase() + k) % 4);
                    *row = next;
                    ops += 3 * words; // xor x, xor z, phase parity
                }
            }
        }
        self.word_ops += ops;
        Ok(())
    }

    /// Symplectic validity: `Xrow_i` anticommutes with `Zrow_i` and commutes
    /// with every other row.
    pub fn is_symplectic(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let want_anti = i == j;
                if self.x_rows[i].commutes_with(&self.z_rows[j]) == want_anti {
                    return false;
                }
                if i < j
                    && (!self.x_rows[i].commutes_with(&self.x_rows[j])
                        || !self.z_rows[i].commutes_with(&self.z_rows[j]))
                {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Measurement circuits

/// Gate-level realization of one Pauli product measurement.
#[derive(Debug, Clone)]
pub struct PpmCircuit {
    pub n_data: usize,
    /// `(data qubit, letter)` for every non-identity site, ascending.
    pub sites: Vec<(usize, PauliKind)>,
    /// CAT register width: support size, plus one for the `|Y>` variant.
    pub cat_width: usize,
    /// Whether the circuit carries the reusable `|Y>` register.
    pub uses_y_register: bool,
    /// Whether the `|Y>` register receives entangling gates (odd Y count).
    pub y_register_gated: bool,
    /// Whether `S^dagger` is applied on the ancilla for Y sites.
    pub explicit_phase: bool,
    /// Sign folding the input phase (and CAT bookkeeping) into the parity.
    pub outcome_sign: i8,
}

fn hermitian_sign(p: &PauliString) -> Result<i8> {
    if !p.is_hermitian() {
        return Err(Error::validation(format!("{p} is not Hermitian")));
    }
    let n_y = p.count_y() as u8;
    Ok(match (p.phase() + 4 - n_y % 4) % 4 {
        0 => 1,
        2 => -1,
        _ => unreachable!("hermitian check guarantees an even residual"),
    })
}

/// CAT-state measurement circuit with explicit `S^dagger` on Y sites.
pub fn ppm_circuit(p: &PauliString) -> Result<PpmCircuit> {
    if p.is_identity() {
        return Err(Error::validation("cannot measure the identity"));
    }
    let sign = hermitian_sign(p)?;
    let sites: Vec<_> = p.support().iter().map(|&q| (q, p.kind(q))).collect();
    Ok(PpmCircuit {
        n_data: p.n_qubits(),
        cat_width: sites.len(),
        sites,
        uses_y_register: false,
        y_register_gated: false,
        explicit_phase: true,
        outcome_sign: sign,
    })
}

/// CAT-state measurement circuit without `S^dagger`; odd Y counts are evened
/// out by entangling the widened CAT register with a reusable `|Y>` qubit,
/// and the parity picks up `(-1)^{n_Y / 2}`.
pub fn ppm_circuit_no_phase(p: &PauliString) -> Result<PpmCircuit> {
    if p.is_identity() {
        return Err(Error::validation("cannot measure the identity"));
    }
    let sign = hermitian_sign(p)?;
    let sites: Vec<_> = p.support().iter().map(|&q| (q, p.kind(q))).collect();
    let n_y = p.count_y();
    let gated = n_y % 2 == 1;
    let evened = n_y + usize::from(gated);
    let cat_sign = if (evened / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    Ok(PpmCircuit {
        n_data: p.n_qubits(),
        cat_width: sites.len() + 1,
        sites,
        uses_y_register: true,
        y_register_gated: gated,
        explicit_phase: false,
        outcome_sign: sign * cat_sign,
    })
}

/// Result of running a measurement circuit on the dense backend.
#[derive(Debug)]
pub struct PpmRun {
    pub outcome: i8,
    /// Probability that the declared outcome is `+1` (computed exactly
    /// before sampling).
    pub prob_plus: f64,
    /// Post-measurement state over the data qubits only.
    pub post_data: DenseState,
    /// Overlap of the `|Y>` register with `|Y>` after the run, when present.
    pub y_register_fidelity: Option<f64>,
}

/// Runs the circuit: tensors on the CAT (and `|Y>`) registers, applies the
/// entangling recipe, measures every CAT qubit in the X basis, declares the
/// signed joint parity, and factors the ancillas back out.
pub fn run_ppm_circuit(circ: &PpmCircuit, data: &DenseState, rng: &mut impl Rng) -> Result<PpmRun> {
    let n = circ.n_data;
    if data.n_qubits() != n {
        return Err(Error::dimension("data state size mismatch"));
    }
    let cw = circ.cat_width;
    let total = n + cw + usize::from(circ.uses_y_register);
    if total > crate::sim::MAX_QUBITS {
        return Err(Error::capability(format!(
            "{total} qubits exceeds the dense cap"
        )));
    }
    // Joint register: data | CAT | (Y).
    let dim = 1usize << total;
    let mut amps = vec![num_complex::Complex64::ZERO; dim];
    let cat_mask = ((1usize << cw) - 1) << n;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for (i, a) in data.amplitudes().iter().enumerate() {
        amps[i] += a * inv_sqrt2;
        amps[i | cat_mask] += a * inv_sqrt2;
    }
    let mut joint = DenseState::from_amplitudes(amps)?;
    if circ.uses_y_register {
        // |0> at the top qubit so far; rewrite it to |Y>.
        joint.prepare(total - 1, Basis::PlusY);
    }

    // Entangling recipe; ancilla j pairs with site j.
    for (j, (q, kind)) in circ.sites.iter().enumerate() {
        let anc = n + j;
        match kind {
            PauliKind::X => joint.cx(anc, *q),
            PauliKind::Z => joint.cz(anc, *q),
            PauliKind::Y => {
                joint.cx(anc, *q);
                joint.cz(anc, *q);
                if circ.explicit_phase {
                    joint.s_dagger(anc);
                }
            }
            PauliKind::I => unreachable!("support sites are non-identity"),
        }
    }
    if circ.y_register_gated {
        let anc = n + cw - 1;
        let y = total - 1;
        joint.cx(anc, y);
        joint.cz(anc, y);
    }

    // Exact declared-outcome distribution before sampling.
    let mut all_x = PauliString::identity(total);
    for j in 0..cw {
        all_x.set_x(n + j, true);
    }
    let parity_expect = joint.expectation(&all_x);
    let p_even = ((1.0 + parity_expect) / 2.0).clamp(0.0, 1.0);
    let prob_plus = if circ.outcome_sign == 1 {
        p_even
    } else {
        1.0 - p_even
    };

    // Sample each ancilla in the X basis.
    let mut parity = 1i8;
    let mut outcomes = Vec::with_capacity(cw);
    for j in 0..cw {
        let x = PauliString::single_x(total, n + j);
        let o = joint.measure_pauli(&x, rng)?;
        parity *= o;
        outcomes.push(o);
    }
    let outcome = parity * circ.outcome_sign;

    // Factor ancillas out, highest index first.
    let mut y_fid = None;
    if circ.uses_y_register {
        let captured = joint.factor_out(total - 1, Basis::PlusY.amplitudes());
        y_fid = Some(captured.sqrt());
    }
    for j in (0..cw).rev() {
        let axis = if outcomes[j] == 1 {
            Basis::Plus.amplitudes()
        } else {
            [
                num_complex::Complex64::new(inv_sqrt2, 0.0),
                num_complex::Complex64::new(-inv_sqrt2, 0.0),
            ]
        };
        joint.factor_out(n + j, axis);
    }
    joint.normalize();
    Ok(PpmRun {
        outcome,
        prob_plus,
        post_data: joint,
        y_register_fidelity: y_fid,
    })
}

// ---------------------------------------------------------------------------
// Programs, compilation, execution

/// Measurement basis for destructive single-qubit readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasBasis {
    Z,
    X,
}

/// Logical-level instruction set accepted by the compiler.
#[derive(Debug, Clone)]
pub enum Instruction {
    /// `exp(i pi/8 P)`
    PprT(PauliString),
    /// `exp(i k pi/4 P)`, `k` in `0..=3`
    Clifford {
        k: u8,
        pauli: PauliString,
    },
    /// Non-destructive Pauli product measurement.
    Ppm(PauliString),
    Init {
        qubit: usize,
        basis: Basis,
    },
    DestructiveMeas {
        qubit: usize,
        basis: MeasBasis,
    },
}

/// Parses the program text form: `T +XIZY`, `C k +ZZII`, `M +ZIII`,
/// `INIT q T|0|+|Y` (one instruction per line).
pub fn parse_program(text: &str) -> Result<Vec<Instruction>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: ln + 1, msg };
        let mut it = line.split_whitespace();
        match it.next().unwrap() {
            "T" => {
                let p = it.next().ok_or_else(|| err("T needs a Pauli".into()))?;
                out.push(Instruction::PprT(PauliString::parse(p)?));
            }
            "C" => {
                let k: u8 = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("C needs `k pauli`".into()))?;
                let p = it.next().ok_or_else(|| err("C needs `k pauli`".into()))?;
                out.push(Instruction::Clifford {
                    k: k % 4,
                    pauli: PauliString::parse(p)?,
                });
            }
            "M" => {
                let p = it.next().ok_or_else(|| err("M needs a Pauli".into()))?;
                out.push(Instruction::Ppm(PauliString::parse(p)?));
            }
            "INIT" => {
                let q: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("INIT needs `q basis`".into()))?;
                let basis = match it.next() {
                    Some("T") => Basis::MagicT,
                    Some("0") => Basis::Zero,
                    Some("+") => Basis::Plus,
                    Some("Y") => Basis::PlusY,
                    other => return Err(err(format!("unknown INIT basis {other:?}"))),
                };
                out.push(Instruction::Init { qubit: q, basis });
            }
            other => return Err(err(format!("unknown instruction {other:?}"))),
        }
    }
    Ok(out)
}

pub fn format_program(prog: &[Instruction]) -> String {
    let mut s = String::new();
    for ins in prog {
        match ins {
            Instruction::PprT(p) => s.push_str(&format!("T {p}\n")),
            Instruction::Clifford { k, pauli } => s.push_str(&format!("C {k} {pauli}\n")),
            Instruction::Ppm(p) => s.push_str(&format!("M {p}\n")),
            Instruction::Init { qubit, basis } => {
                let b = match basis {
                    Basis::MagicT => "T",
                    Basis::Zero => "0",
                    Basis::Plus => "+",
                    Basis::PlusY => "Y",
                };
                s.push_str(&format!("INIT {qubit} {b}\n"));
            }
            Instruction::DestructiveMeas { qubit, basis } => {
                let b = match basis {
                    MeasBasis::Z => "0",
                    MeasBasis::X => "+",
                };
                s.push_str(&format!("# DMEAS {qubit} {b}\n"));
            }
        }
    }
    s
}

/// Compiled stream element. Conditional corrections key on the outcome of
/// the most recent PPM: they fire when it was `-1`.
#[derive(Debug, Clone)]
pub enum StreamOp {
    Init {
        qubit: usize,
        basis: Basis,
    },
    Ppm {
        pauli: PauliString,
        /// Index of the originating program instruction, when it carries a
        /// program-visible outcome.
        source: Option<usize>,
    },
    CondClifford {
        k: u8,
        pauli: PauliString,
    },
    /// Standalone Clifford, deferred into the frame at runtime.
    Clifford {
        k: u8,
        pauli: PauliString,
    },
}

#[derive(Debug, Clone)]
pub struct CompiledStream {
    pub n_data: usize,
    /// Total register width: data plus one fresh magic qubit per T gate.
    pub n_qubits: usize,
    pub ops: Vec<StreamOp>,
}

/// Lowers a Clifford+T program onto `{INIT, PPM, conditional CLIFFORD}`.
///
/// Each `exp(i pi/8 P)` consumes a fresh `|T>` register: the joint parity of
/// `P` with the magic qubit's Z is measured (negated, so the quarter-turn
/// correction fires on `-1`), the magic qubit is released by an X-basis PPM,
/// and both corrections fold into the Clifford frame at runtime. Standalone
/// Cliffords defer to frame updates; destructive measurements become PPMs.
pub fn compile(program: &[Instruction], n_data: usize) -> Result<CompiledStream> {
    let n_t = program
        .iter()
        .filter(|i| matches!(i, Instruction::PprT(_)))
        .count();
    let n_qubits = n_data + n_t;
    let mut ops = Vec::new();
    let mut next_magic = n_data;
    for (idx, ins) in program.iter().enumerate() {
        match ins {
            Instruction::PprT(p) => {
                if p.n_qubits() != n_data {
                    return Err(Error::dimension("instruction width mismatch"));
                }
                if p.is_identity() {
                    return Err(Error::validation("T rotation about identity"));
                }
                let m = next_magic;
                next_magic += 1;
                let data_p = p.padded(n_qubits);
                let joint = data_p.mul(&PauliString::single_z(n_qubits, m))?.negated();
                ops.push(StreamOp::Init {
                    qubit: m,
                    basis: Basis::MagicT,
                });
                ops.push(StreamOp::Ppm {
                    pauli: joint,
                    source: None,
                });
                ops.push(StreamOp::CondClifford {
                    k: 1,
                    pauli: data_p.clone(),
                });
                ops.push(StreamOp::Ppm {
                    pauli: PauliString::single_x(n_qubits, m),
                    source: None,
                });
                ops.push(StreamOp::CondClifford {
                    k: 2,
                    pauli: data_p,
                });
            }
            Instruction::Clifford { k, pauli } => {
                ops.push(StreamOp::Clifford {
                    k: *k,
                    pauli: pauli.padded(n_qubits),
                });
            }
            Instruction::Ppm(p) => {
                if p.is_identity() {
                    return Err(Error::validation("PPM of identity"));
                }
                ops.push(StreamOp::Ppm {
                    pauli: p.padded(n_qubits),
                    source: Some(idx),
                });
            }
            Instruction::Init { qubit, basis } => {
                ops.push(StreamOp::Init {
                    qubit: *qubit,
                    basis: *basis,
                });
            }
            Instruction::DestructiveMeas { qubit, basis } => {
                let p = match basis {
                    MeasBasis::Z => PauliString::single_z(n_qubits, *qubit),
                    MeasBasis::X => PauliString::single_x(n_qubits, *qubit),
                };
                ops.push(StreamOp::Ppm {
                    pauli: p,
                    source: Some(idx),
                });
            }
        }
    }
    Ok(CompiledStream {
        n_data,
        n_qubits,
        ops,
    })
}

/// One measurement event: stream index, instruction-level Pauli, outcome.
#[derive(Debug, Clone)]
pub struct MeasEvent {
    pub index: usize,
    pub pauli: PauliString,
    pub outcome: i8,
    /// Originating program instruction, for program-visible measurements.
    pub source: Option<usize>,
}

/// Execution outcome: the measurement record, the residual frame, the list
/// of corrections that actually fired (instruction-level), and the final
/// backend state.
#[derive(Debug)]
pub struct Execution {
    pub record: Vec<MeasEvent>,
    pub frame: CliffordFrame,
    pub fired_corrections: Vec<(u8, PauliString)>,
    pub state: DenseState,
}

impl Execution {
    /// Formats the record as `idx pauli outcome` lines.
    pub fn record_text(&self) -> String {
        let mut s = String::new();
        for ev in &self.record {
            s.push_str(&format!("{} {} {:+}\n", ev.index, ev.pauli, ev.outcome));
        }
        s
    }
}

/// Runs a compiled stream on the dense backend, folding every correction
/// into the Clifford frame. Deterministic for a fixed seed and input state.
pub fn execute(
    stream: &CompiledStream,
    initial: Option<&DenseState>,
    rng: &mut impl Rng,
) -> Result<Execution> {
    let n = stream.n_qubits;
    let mut state = match initial {
        Some(data) => {
            if data.n_qubits() > n {
                return Err(Error::capability(
                    "initial state larger than register".to_string(),
                ));
            }
            let mut amps = vec![num_complex::Complex64::ZERO; 1 << n];
            amps[..data.amplitudes().len()].copy_from_slice(data.amplitudes());
            DenseState::from_amplitudes(amps)?
        }
        None => DenseState::zero(n)?,
    };
    let mut frame = CliffordFrame::identity(n);
    let mut record = Vec::new();
    let mut fired = Vec::new();
    let mut last_outcome: i8 = 1;
    for (i, op) in stream.ops.iter().enumerate() {
        match op {
            StreamOp::Init { qubit, basis } => state.prepare(*qubit, *basis),
            StreamOp::Ppm { pauli, source } => {
                let physical = frame.lookup(pauli)?;
                let outcome = state.measure_pauli(&physical, rng)?;
                record.push(MeasEvent {
                    index: i,
                    pauli: pauli.clone(),
                    outcome,
                    source: *source,
                });
                last_outcome = outcome;
            }
            StreamOp::CondClifford { k, pauli } => {
                if last_outcome == -1 {
                    let physical = frame.lookup(pauli)?;
                    frame.update(*k, &physical)?;
                    fired.push((*k, pauli.clone()));
                }
            }
            StreamOp::Clifford { k, pauli } => {
                let physical = frame.lookup(pauli)?;
                frame.update(*k, &physical)?;
                fired.push((*k, pauli.clone()));
            }
        }
    }
    Ok(Execution {
        record,
        frame,
        fired_corrections: fired,
        state,
    })
}

/// Reference path: applies the program directly (rotations as exact Pauli
/// exponentials, measurements projectively) without any frame.
pub fn direct_execute(
    program: &[Instruction],
    n_data: usize,
    initial: Option<&DenseState>,
    rng: &mut impl Rng,
) -> Result<(Vec<(usize, i8)>, DenseState)> {
    let mut state = match initial {
        Some(s) => s.clone(),
        None => DenseState::zero(n_data)?,
    };
    let mut outcomes = Vec::new();
    for (idx, ins) in program.iter().enumerate() {
        match ins {
            Instruction::PprT(p) => state.apply_ppr(p, std::f64::consts::FRAC_PI_8),
            Instruction::Clifford { k, pauli } => {
                state.apply_ppr(pauli, *k as f64 * std::f64::consts::FRAC_PI_4)
            }
            Instruction::Ppm(p) => {
                let o = state.measure_pauli(p, rng)?;
                outcomes.push((idx, o));
            }
            Instruction::Init { qubit, basis } => state.prepare(*qubit, *basis),
            Instruction::DestructiveMeas { qubit, basis } => {
                let p = match basis {
                    MeasBasis::Z => PauliString::single_z(n_data, *qubit),
                    MeasBasis::X => PauliString::single_x(n_data, *qubit),
                };
                let o = state.measure_pauli(&p, rng)?;
                outcomes.push((idx, o));
            }
        }
    }
    Ok((outcomes, state))
}

// ---------------------------------------------------------------------------
// Commuting-layer scheduling

/// Layered PPM schedule; every layer is pairwise commuting and at most
/// `min(max_width, distance)` wide.
#[derive(Debug, Clone)]
pub struct PpmLayerSchedule {
    pub layers: Vec<Vec<usize>>,
    pub max_width: usize,
    pub distance: usize,
}

impl PpmLayerSchedule {
    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }
}

/// Greedy first-fit layering that preserves program order: each PPM joins
/// the earliest layer after its last non-commuting predecessor that has
/// room and commutes with every member.
pub fn schedule_layers(
    ppms: &[PauliString],
    max_width: usize,
    distance: usize,
) -> PpmLayerSchedule {
    let cap = max_width.min(distance).max(1);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, p) in ppms.iter().enumerate() {
        // Earliest admissible layer: strictly after any layer containing a
        // non-commuting predecessor.
        let mut floor = 0;
        for (li, layer) in layers.iter().enumerate() {
            if layer.iter().any(|&j| !ppms[j].commutes_with(p)) {
                floor = li + 1;
            }
        }
        let mut placed = false;
        for layer in layers.iter_mut().skip(floor) {
            if layer.len() < cap && layer.iter().all(|&j| ppms[j].commutes_with(p)) {
                layer.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            layers.push(vec![i]);
        }
    }
    PpmLayerSchedule {
        layers,
        max_width: cap,
        distance,
    }
}

/// Effective depth ratio offered by a schedule: T-count over layer count.
pub fn speedup_estimate(schedule: &PpmLayerSchedule, n_t: u64) -> f64 {
    if schedule.layers.is_empty() {
        return 1.0;
    }
    n_t as f64 / schedule.layers.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::sim::{conjugate, pauli_decompose, pauli_matrix};

    fn random_hermitian_pauli(n: usize, rng: &mut ChaCha8Rng) -> PauliString {
        loop {
            let kinds: Vec<PauliKind> = (0..n)
                .map(|_| match rng.random_range(0..4) {
                    0 => PauliKind::I,
                    1 => PauliKind::X,
                    2 => PauliKind::Y,
                    _ => PauliKind::Z,
                })
                .collect();
            let mut p = PauliString::from_kinds(&kinds);
            if rng.random_bool(0.5) {
                p = p.negated();
            }
            if !p.is_identity() {
                return p;
            }
        }
    }

    fn correction_matrix(k: u8, p: &PauliString) -> DMatrix<Complex64> {
        let dim = 1usize << p.n_qubits();
        let theta = k as f64 * std::f64::consts::FRAC_PI_4;
        let id = DMatrix::<Complex64>::identity(dim, dim);
        let pm = pauli_matrix(p);
        id * Complex64::new(theta.cos(), 0.0) + pm * Complex64::new(0.0, theta.sin())
    }

    #[test]
    fn identity_frame_lookup_is_identity_map() {
        let f = CliffordFrame::identity(3);
        let p = PauliString::parse("-XYZ").unwrap();
        assert_eq!(f.lookup(&p).unwrap(), p);
        assert!(f.is_symplectic());
    }

    #[test]
    fn z_conjugation_frame_row() {
        // Frame of a deferred Z on qubit 0: X -> -X, Z -> Z.
        let mut f = CliffordFrame::identity(3);
        f.update(2, &PauliString::single_z(3, 0)).unwrap();
        let looked = f.lookup(&PauliString::single_x(3, 0)).unwrap();
        assert_eq!(looked.to_string(), "-XII");
        assert_eq!(looked.phase(), 2);
        assert!(f.is_symplectic());
    }

    #[test]
    fn update_k1_x_row_becomes_y() {
        let mut f = CliffordFrame::identity(1);
        f.update(1, &PauliString::single_z(1, 0)).unwrap();
        let row = f.x_row(0);
        assert!(row.x_bit(0) && row.z_bit(0));
        // Dense check: exp(-i pi/4 Z) X exp(i pi/4 Z) = Y.
        let c = correction_matrix(1, &PauliString::single_z(1, 0));
        let m = conjugate(&c, &PauliString::single_x(1, 0));
        let expect = pauli_decompose(&m, 1e-10).unwrap();
        assert_eq!(row, &expect);
    }

    #[test]
    fn update_k0_is_noop() {
        let mut f = CliffordFrame::identity(2);
        let before = f.lookup(&PauliString::parse("+XY").unwrap()).unwrap();
        f.update(0, &PauliString::parse("+ZZ").unwrap()).unwrap();
        let after = f.lookup(&PauliString::parse("+XY").unwrap()).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn frame_update_matches_dense_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..200 {
            let n = rng.random_range(1..=4);
            let mut frame = CliffordFrame::identity(n);
            // Random valid frame via a few random updates.
            for _ in 0..rng.random_range(0..6) {
                let k = rng.random_range(1..4) as u8;
                let p = random_hermitian_pauli(n, &mut rng);
                frame.update(k, &p).unwrap();
            }
            assert!(frame.is_symplectic(), "trial {trial}");
            let k = rng.random_range(1..4) as u8;
            let p = random_hermitian_pauli(n, &mut rng);
            let c = correction_matrix(k, &p);
            let mut expect_rows = Vec::new();
            for q in 0..n {
                for row in [frame.x_row(q).clone(), frame.z_row(q).clone()] {
                    let m = conjugate(&c, &row);
                    expect_rows.push(pauli_decompose(&m, 1e-9).expect("conjugate is a Pauli"));
                }
            }
            frame.update(k, &p).unwrap();
            assert!(frame.is_symplectic(), "post-update trial {trial}");
            for (q, chunk) in expect_rows.chunks(2).enumerate() {
                assert_eq!(frame.x_row(q), &chunk[0], "X row {q}, trial {trial}");
                assert_eq!(frame.z_row(q), &chunk[1], "Z row {q}, trial {trial}");
            }
        }
    }

    #[test]
    fn lookup_matches_dense_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31337);
        for _ in 0..50 {
            let n = rng.random_range(1..=3);
            let mut frame = CliffordFrame::identity(n);
            let mut total = DMatrix::<Complex64>::identity(1 << n, 1 << n);
            for _ in 0..rng.random_range(1..5) {
                let k = rng.random_range(1..4) as u8;
                let p = random_hermitian_pauli(n, &mut rng);
                let translated = frame.lookup(&p).unwrap();
                frame.update(k, &translated).unwrap();
                // Later Cliffords compose on the left.
                total = correction_matrix(k, &p) * total;
            }
            let probe = random_hermitian_pauli(n, &mut rng);
            let looked = frame.lookup(&probe).unwrap();
            let dense = conjugate(&total, &probe);
            let expect = pauli_decompose(&dense, 1e-9).expect("Pauli image");
            assert_eq!(looked, expect);
        }
    }

    #[test]
    fn word_ops_scale_linearly_with_rows() {
        for n in [64usize, 128, 256] {
            let mut f = CliffordFrame::identity(n);
            let p = random_hermitian_pauli(n, &mut ChaCha8Rng::seed_from_u64(1));
            let before = f.word_ops();
            f.update(2, &p).unwrap();
            let cost = f.word_ops() - before;
            let words = p.word_count();
            // 2n rows, bounded word work per row.
            assert!(cost <= 2 * n * 5 * words, "cost {cost} at n={n}");
            assert!(cost >= 2 * n * words);
        }
    }

    #[test]
    fn ppm_zz_on_zero_is_deterministic() {
        let p = PauliString::parse("+ZZ").unwrap();
        let circ = ppm_circuit(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let data = DenseState::zero(2).unwrap();
        let run = run_ppm_circuit(&circ, &data, &mut rng).unwrap();
        assert_eq!(run.outcome, 1);
        assert!((run.prob_plus - 1.0).abs() < 1e-12);
        assert!(run.post_data.fidelity(&data) > 1.0 - 1e-12);
    }

    #[test]
    fn ppm_matches_direct_measurement_distribution_and_state() {
        let p = PauliString::parse("+XYZI").unwrap();
        let data = DenseState::zero(4).unwrap();
        let circ = ppm_circuit(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let run = run_ppm_circuit(&circ, &data, &mut rng).unwrap();
        assert!((run.prob_plus - 0.5).abs() < 1e-12);
        // Direct projective reference conditioned on the same outcome.
        let direct = data.clone();
        let mut refstate = direct.clone();
        refstate.apply_pauli(&p);
        let sign = run.outcome as f64;
        let projected: Vec<Complex64> = direct
            .amplitudes()
            .iter()
            .zip(refstate.amplitudes())
            .map(|(a, b)| (a + sign * b) / 2.0)
            .collect();
        let mut proj = DenseState::from_amplitudes(projected).unwrap();
        proj.normalize();
        assert!(run.post_data.fidelity(&proj) > 1.0 - 1e-10);
    }

    #[test]
    fn ppm_repeat_is_idempotent() {
        let p = PauliString::parse("+XYZI").unwrap();
        let circ = ppm_circuit(&p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let data = DenseState::zero(4).unwrap();
            let first = run_ppm_circuit(&circ, &data, &mut rng).unwrap();
            let second = run_ppm_circuit(&circ, &first.post_data, &mut rng).unwrap();
            assert_eq!(first.outcome, second.outcome);
            assert!(second.post_data.fidelity(&first.post_data) > 1.0 - 1e-10);
        }
    }

    #[test]
    fn ppm_rejects_identity() {
        assert!(ppm_circuit(&PauliString::identity(3)).is_err());
        assert!(ppm_circuit_no_phase(&PauliString::identity(3)).is_err());
    }

    #[test]
    fn ppm_equivalence_on_five_qubit_support() {
        // Full-support five-qubit strings sit at the dense capacity edge:
        // 5 data + 6 CAT + |Y> register = 12 qubits.
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        for s in ["+XYZYX", "-YZXZY", "+YYYYZ"] {
            let p = PauliString::parse(s).unwrap();
            let with = ppm_circuit(&p).unwrap();
            let without = ppm_circuit_no_phase(&p).unwrap();
            for _ in 0..6 {
                let data = random_state(5, &mut rng);
                let direct_p = data.prob_plus(&p);
                let a = run_ppm_circuit(&with, &data, &mut rng).unwrap();
                let b = run_ppm_circuit(&without, &data, &mut rng).unwrap();
                assert!((a.prob_plus - direct_p).abs() < 1e-10, "{s}");
                assert!((b.prob_plus - direct_p).abs() < 1e-10, "{s}");
                assert!(b.y_register_fidelity.unwrap() > 1.0 - 1e-10, "{s}");
                let mut rot = data.clone();
                rot.apply_pauli(&p);
                let sign = a.outcome as f64;
                let projected: Vec<Complex64> = data
                    .amplitudes()
                    .iter()
                    .zip(rot.amplitudes())
                    .map(|(x, y)| (x + sign * y) / 2.0)
                    .collect();
                let mut proj = DenseState::from_amplitudes(projected).unwrap();
                proj.normalize();
                assert!(a.post_data.fidelity(&proj) > 1.0 - 1e-10, "{s}");
            }
        }
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> DenseState {
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mut st = DenseState::from_amplitudes(amps).unwrap();
        st.normalize();
        st
    }

    #[test]
    fn no_phase_variant_matches_phase_variant() {
        let mut rng = ChaCha8Rng::seed_from_u64(555);
        for s in ["+XYZ", "+YYI", "-XYY", "+IZY", "+XXX"] {
            let p = PauliString::parse(s).unwrap();
            let with = ppm_circuit(&p).unwrap();
            let without = ppm_circuit_no_phase(&p).unwrap();
            if p.count_y().is_multiple_of(2) {
                assert!(!without.y_register_gated, "{s}");
            }
            for _ in 0..20 {
                let data = random_state(3, &mut rng);
                let a = run_ppm_circuit(&with, &data, &mut rng).unwrap();
                let b = run_ppm_circuit(&without, &data, &mut rng).unwrap();
                assert!((a.prob_plus - b.prob_plus).abs() < 1e-10, "{s}");
                let direct_p = data.prob_plus(&p);
                assert!((a.prob_plus - direct_p).abs() < 1e-10, "{s}");
                let fid = b.y_register_fidelity.unwrap();
                assert!(fid > 1.0 - 1e-10, "Y register drifted: {fid} for {s}");
                if a.outcome == b.outcome {
                    assert!(a.post_data.fidelity(&b.post_data) > 1.0 - 1e-10);
                }
            }
        }
    }

    #[test]
    fn compile_single_t_structure() {
        let p = PauliString::parse("+Z").unwrap();
        let stream = compile(&[Instruction::PprT(p)], 1).unwrap();
        assert_eq!(stream.n_qubits, 2);
        assert!(matches!(
            stream.ops[0],
            StreamOp::Init {
                qubit: 1,
                basis: Basis::MagicT
            }
        ));
        match &stream.ops[1] {
            StreamOp::Ppm { pauli, .. } => {
                assert_eq!(pauli.kind(0), PauliKind::Z);
                assert_eq!(pauli.kind(1), PauliKind::Z);
            }
            other => panic!("expected joint PPM, got {other:?}"),
        }
        match &stream.ops[2] {
            StreamOp::CondClifford { k: 1, pauli } => {
                assert_eq!(pauli.kind(0), PauliKind::Z);
                assert_eq!(pauli.kind(1), PauliKind::I);
            }
            other => panic!("expected conditional quarter turn, got {other:?}"),
        }
        // Magic-register release: X PPM plus conditional Pauli fixup.
        assert!(
            matches!(&stream.ops[3], StreamOp::Ppm { pauli, .. } if pauli.kind(1) == PauliKind::X)
        );
        assert!(matches!(
            &stream.ops[4],
            StreamOp::CondClifford { k: 2, .. }
        ));
    }

    #[test]
    fn compile_empty_program() {
        let stream = compile(&[], 3).unwrap();
        assert!(stream.ops.is_empty());
        assert_eq!(stream.n_qubits, 3);
    }

    #[test]
    fn stabilizer_stream_is_deterministic() {
        let prog = vec![
            Instruction::Ppm(PauliString::parse("+ZI").unwrap()),
            Instruction::Ppm(PauliString::parse("+IZ").unwrap()),
            Instruction::Ppm(PauliString::parse("+ZZ").unwrap()),
        ];
        let stream = compile(&prog, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let exec = execute(&stream, None, &mut rng).unwrap();
        assert!(exec.record.iter().all(|ev| ev.outcome == 1));
    }

    #[test]
    fn magic_consumption_implements_t() {
        // T on one qubit via the gadget equals the direct rotation after the
        // residual frame corrections are replayed onto the state.
        for basis in [Basis::Zero, Basis::Plus, Basis::MagicT, Basis::PlusY] {
            let mut input = DenseState::zero(1).unwrap();
            input.prepare(0, basis);
            let p = PauliString::parse("+Z").unwrap();
            let prog = vec![Instruction::PprT(p.clone())];
            let stream = compile(&prog, 1).unwrap();
            for seed in 0..16 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let exec = execute(&stream, Some(&input), &mut rng).unwrap();
                // Resolve deferred corrections: earliest first.
                let mut resolved = exec.state.clone();
                for (k, pauli) in &exec.fired_corrections {
                    resolved.apply_ppr(pauli, *k as f64 * std::f64::consts::FRAC_PI_4);
                }
                // Reference: direct T application on the data qubit.
                let mut want = input.clone();
                want.apply_ppr(&p, std::f64::consts::FRAC_PI_8);
                // Factor the released magic qubit out of `resolved`.
                let mag_x = PauliString::single_x(2, 1);
                let mexp = resolved.expectation(&mag_x);
                let axis = if mexp > 0.0 {
                    Basis::Plus.amplitudes()
                } else {
                    [
                        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
                    ]
                };
                let captured = resolved.factor_out(1, axis);
                assert!(captured > 1.0 - 1e-10, "magic qubit entangled: {captured}");
                let fid = resolved.fidelity(&want);
                assert!(
                    fid > 1.0 - 1e-10,
                    "fidelity {fid} for basis {basis:?} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn frame_replay_reconstructs_final_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let prog = vec![
            Instruction::PprT(PauliString::parse("+ZX").unwrap()),
            Instruction::Clifford {
                k: 1,
                pauli: PauliString::parse("+XX").unwrap(),
            },
            Instruction::PprT(PauliString::parse("+YZ").unwrap()),
            Instruction::Ppm(PauliString::parse("+ZI").unwrap()),
        ];
        let stream = compile(&prog, 2).unwrap();
        let exec = execute(&stream, None, &mut rng).unwrap();
        let mut replay = CliffordFrame::identity(stream.n_qubits);
        for (k, p) in &exec.fired_corrections {
            let translated = replay.lookup(p).unwrap();
            replay.update(*k, &translated).unwrap();
        }
        for q in 0..stream.n_qubits {
            assert_eq!(replay.x_row(q), exec.frame.x_row(q));
            assert_eq!(replay.z_row(q), exec.frame.z_row(q));
        }
    }

    #[test]
    fn compiled_stream_matches_direct_distribution() {
        // Random 4-qubit Clifford+T programs ending in Z measurements.
        let mut rng = ChaCha8Rng::seed_from_u64(20_000);
        for trial in 0..3 {
            let n = 4;
            let mut prog = Vec::new();
            let mut t_budget = 6;
            for _ in 0..14 {
                if t_budget > 0 && rng.random_bool(0.4) {
                    prog.push(Instruction::PprT(random_hermitian_pauli(n, &mut rng)));
                    t_budget -= 1;
                } else {
                    prog.push(Instruction::Clifford {
                        k: rng.random_range(1..4) as u8,
                        pauli: random_hermitian_pauli(n, &mut rng),
                    });
                }
            }
            for q in 0..n {
                prog.push(Instruction::Ppm(PauliString::single_z(n, q)));
            }
            let stream = compile(&prog, n).unwrap();
            assert!(stream.n_qubits <= crate::sim::MAX_QUBITS);

            let shots = 400;
            let mut compiled_counts = vec![0usize; 1 << n];
            let mut direct_counts = vec![0usize; 1 << n];
            for shot in 0..shots {
                let mut rng_c = ChaCha8Rng::seed_from_u64(1_000_000 + shot);
                let exec = execute(&stream, None, &mut rng_c).unwrap();
                let mut key = 0usize;
                for ev in exec.record.iter().filter(|e| e.source.is_some()) {
                    key = (key << 1) | usize::from(ev.outcome == -1);
                }
                compiled_counts[key] += 1;
                let mut rng_d = ChaCha8Rng::seed_from_u64(2_000_000 + shot);
                let (outs, _) = direct_execute(&prog, n, None, &mut rng_d).unwrap();
                let mut key = 0usize;
                for (_, o) in outs {
                    key = (key << 1) | usize::from(o == -1);
                }
                direct_counts[key] += 1;
            }
            let tvd: f64 = compiled_counts
                .iter()
                .zip(&direct_counts)
                .map(|(a, b)| (*a as f64 - *b as f64).abs())
                .sum::<f64>()
                / (2.0 * shots as f64);
            assert!(tvd < 0.12, "trial {trial}: tvd {tvd}");
        }
    }

    #[test]
    fn scheduler_example_and_bounds() {
        let ppms = vec![
            PauliString::parse("+ZI").unwrap(),
            PauliString::parse("+IZ").unwrap(),
            PauliString::parse("+XX").unwrap(),
        ];
        let s = schedule_layers(&ppms, 100, 100);
        assert_eq!(s.layers, vec![vec![0, 1], vec![2]]);
        // All-commuting with no width cap: one layer.
        let zs: Vec<_> = (0..5).map(|q| PauliString::single_z(5, q)).collect();
        let s = schedule_layers(&zs, usize::MAX, usize::MAX);
        assert_eq!(s.n_layers(), 1);
        assert!((speedup_estimate(&s, 5) - 5.0).abs() < 1e-12);
        // Anticommuting chain: fully serial.
        let chain = vec![
            PauliString::parse("+X").unwrap(),
            PauliString::parse("+Z").unwrap(),
            PauliString::parse("+X").unwrap(),
        ];
        let s = schedule_layers(&chain, usize::MAX, usize::MAX);
        assert_eq!(s.n_layers(), 3);
        assert!((speedup_estimate(&s, 3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scheduler_respects_width_and_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let ppms: Vec<_> = (0..24)
            .map(|_| random_hermitian_pauli(4, &mut rng))
            .collect();
        for (m, d) in [(3usize, 100usize), (100, 2), (4, 4)] {
            let s = schedule_layers(&ppms, m, d);
            let cap = m.min(d);
            for layer in &s.layers {
                assert!(layer.len() <= cap);
                for (i, &a) in layer.iter().enumerate() {
                    for &b in &layer[i + 1..] {
                        assert!(ppms[a].commutes_with(&ppms[b]));
                    }
                }
            }
            // Order preservation: a PPM never lands before a non-commuting
            // predecessor's layer.
            let mut layer_of = vec![0usize; ppms.len()];
            for (li, layer) in s.layers.iter().enumerate() {
                for &i in layer {
                    layer_of[i] = li;
                }
            }
            for i in 0..ppms.len() {
                for j in 0..i {
                    if !ppms[i].commutes_with(&ppms[j]) {
                        assert!(layer_of[i] > layer_of[j]);
                    }
                }
            }
            assert!(s.n_layers() <= ppms.len());
        }
    }

    #[test]
    fn program_text_round_trip() {
        let text = "T +XIZY\nC 2 +ZZII\nM +ZIII\nINIT 2 T\nINIT 0 Y\n";
        let prog = parse_program(text).unwrap();
        assert_eq!(prog.len(), 5);
        let formatted = format_program(&prog);
        assert_eq!(formatted, text);
        let bad = parse_program("Q +XX");
        assert!(bad.is_err());
    }
}
