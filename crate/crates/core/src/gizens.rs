//! Fermionic basis-change synthesis.
//!
//! Builds circuits that conjugate the bare Majorana `gamma_0` into the
//! rotated Majorana `gamma_u = sum_j u_j gamma_j`, either as a linear-depth
//! ladder of adjacent rotations or as a logarithmic-depth binary tree of
//! long-range rotations. Both use exactly `N - 1` two-Majorana rotations;
//! the tree packs them into `ceil(log2 N)` commuting layers.
//!
//! Under the Jordan-Wigner encoding each two-Majorana rotation becomes a
//! pair of commuting Pauli-product rotations with `X..Z..Y` / `Y..Z..X`
//! patterns; [`verify_basis_change`] checks the synthesized circuit against
//! the dense oracle.

use std::f64::consts::FRAC_PI_4;

use crate::error::Error;
use crate::pauli::{PauliKind, PauliString};
use crate::sim::{self, MAX_QUBITS};
use crate::Result;

const UNIT_TOL: f64 = 1e-12;

/// Unit coefficient vector defining `gamma_u`.
#[derive(Debug, Clone)]
pub struct MajoranaVector {
    values: Vec<f64>,
}

impl MajoranaVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::validation("need at least two modes"));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::validation("zero vector has no basis change"));
        }
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::validation(format!(
                "vector norm {norm} is not 1 within {UNIT_TOL}"
            )));
        }
        Ok(MajoranaVector { values })
    }

    /// Normalizes, then constructs.
    pub fn normalized(mut values: Vec<f64>) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::validation("zero vector has no basis change"));
        }
        for v in &mut values {
            *v /= norm;
        }
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Zero-padded copy of length `next_power_of_two(len)`.
    pub fn padded(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.resize(self.values.len().next_power_of_two(), 0.0);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationKind {
    /// Adjacent-pair rotation (`q = p + 1`).
    Givens,
    /// Long-range rotation with interior Z string.
    Gizens,
}

/// One two-Majorana rotation acting on mode indices `p < q`.
///
/// `theta` follows the convention `sin(theta) = left share`,
/// `cos(theta) = right share` of the parent amplitude.
#[derive(Debug, Clone, Copy)]
pub struct Rotation {
    pub kind: RotationKind,
    pub p: usize,
    pub q: usize,
    pub theta: f64,
    /// True when the rotation acts on a zero-amplitude subtree and may be
    /// dropped by a later optimization pass.
    pub elidable: bool,
}

/// Layered rotation circuit; layers apply in order, rotations within a
/// layer act on disjoint index spans.
#[derive(Debug, Clone)]
pub struct RotationCircuit {
    n_modes: usize,
    layers: Vec<Vec<Rotation>>,
}

impl RotationCircuit {
    pub fn new(n_modes: usize, layers: Vec<Vec<Rotation>>) -> Self {
        RotationCircuit { n_modes, layers }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Rotation>] {
        &self.layers
    }

    pub fn rotation_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Rotations in application order.
    pub fn rotations(&self) -> impl Iterator<Item = &Rotation> {
        self.layers.iter().flatten()
    }

    /// Checks that every layer's `[p, q]` spans are pairwise disjoint.
    pub fn layers_disjoint(&self) -> bool {
        self.layers.iter().all(|layer| {
            for (i, a) in layer.iter().enumerate() {
                for b in &layer[i + 1..] {
                    if a.p <= b.q && b.p <= a.q {
                        return false;
                    }
                }
            }
            true
        })
    }

    /// Text form: one rotation per line, `---` between layers.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (li, layer) in self.layers.iter().enumerate() {
            if li > 0 {
                out.push_str("---\n");
            }
            for r in layer {
                match r.kind {
                    RotationKind::Givens => {
                        out.push_str(&format!("GIVENS {} {}\n", r.p, r.theta));
                    }
                    RotationKind::Gizens => {
                        out.push_str(&format!("GIZENS {} {} {}\n", r.p, r.q, r.theta));
                    }
                }
            }
        }
        out
    }

    pub fn parse_text(text: &str, n_modes: usize) -> Result<Self> {
        let mut layers = vec![Vec::new()];
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line == "---" {
                layers.push(Vec::new());
                continue;
            }
            let mut it = line.split_whitespace();
            let head = it.next().unwrap();
            let parse_err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let rot = match head {
                "GIVENS" => {
                    let p: usize = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err("GIVENS needs `p theta`"))?;
                    let theta: f64 = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err("GIVENS needs `p theta`"))?;
                    Rotation {
                        kind: RotationKind::Givens,
                        p,
                        q: p + 1,
                        theta,
                        elidable: false,
                    }
                }
                "GIZENS" => {
                    let p: usize = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err("GIZENS needs `p q theta`"))?;
                    let q: usize = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err("GIZENS needs `p q theta`"))?;
                    let theta: f64 = it
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| parse_err("GIZENS needs `p q theta`"))?;
                    Rotation {
                        kind: RotationKind::Gizens,
                        p,
                        q,
                        theta,
                        elidable: false,
                    }
                }
                other => return Err(parse_err(&format!("unknown rotation kind {other:?}"))),
            };
            if rot.q >= n_modes || rot.p >= rot.q {
                return Err(parse_err("rotation indices out of range"));
            }
            layers.last_mut().unwrap().push(rot);
        }
        Ok(RotationCircuit { n_modes, layers })
    }
}

/// Pair of commuting Pauli-product rotations realizing one two-Majorana
/// rotation under Jordan-Wigner.
#[derive(Debug, Clone)]
pub struct PauliRotationPair {
    /// `X_p (Z..Z) Y_q`
    pub xy: PauliString,
    /// `Y_p (Z..Z) X_q`
    pub yx: PauliString,
    /// Common rotation angle applied as `exp(i angle P)` for both members.
    pub angle: f64,
}

/// Linear-depth ladder: adjacent rotations `(0,1), (1,2), ...` chosen so the
/// synthesized circuit carries `gamma_0` onto `gamma_u`.
pub fn givens_ladder(u: &MajoranaVector) -> RotationCircuit {
    let v = u.values();
    let n = v.len();
    // Residual tail norms r[k] = ||v[k..]||.
    let mut tail = vec![0.0; n + 1];
    for k in (0..n).rev() {
        tail[k] = (tail[k + 1] * tail[k + 1] + v[k] * v[k]).sqrt();
    }
    let mut layers = Vec::with_capacity(n - 1);
    for k in 0..n - 1 {
        let left = v[k];
        // Last rotation takes the signed final component directly.
        let right = if k == n - 2 { v[n - 1] } else { tail[k + 1] };
        let elidable = left == 0.0 && right == 0.0;
        let theta = if elidable { 0.0 } else { left.atan2(right) };
        layers.push(vec![Rotation {
            kind: RotationKind::Givens,
            p: k,
            q: k + 1,
            theta,
            elidable,
        }]);
    }
    RotationCircuit { n_modes: n, layers }
}

/// Log-depth binary tree over the zero-padded vector. Internal amplitudes
/// are nonnegative subtree norms; the leaf layer uses the signed entries.
pub fn gizens_tree(u: &MajoranaVector) -> RotationCircuit {
    let v = u.padded();
    let n = v.len();
    let levels = n.trailing_zeros() as usize;
    // amps[s][i] = amplitude of node i after s layers; amps[levels] = leaves.
    let mut amps: Vec<Vec<f64>> = vec![Vec::new(); levels + 1];
    amps[levels] = v;
    for s in (0..levels).rev() {
        let child = amps[s + 1].clone();
        amps[s] = child
            .chunks(2)
            .map(|c| (c[0] * c[0] + c[1] * c[1]).sqrt())
            .collect();
    }
    let mut layers = Vec::with_capacity(levels);
    for s in 0..levels {
        let span = n >> s; // parent block width
        let mut layer = Vec::with_capacity(1 << s);
        for i in 0..(1usize << s) {
            let parent = amps[s][i];
            let (left, right) = (amps[s + 1][2 * i], amps[s + 1][2 * i + 1]);
            let elidable = parent == 0.0;
            let theta = if elidable { 0.0 } else { left.atan2(right) };
            layer.push(Rotation {
                kind: RotationKind::Gizens,
                p: i * span,
                q: i * span + span / 2,
                theta,
                elidable,
            });
        }
        layers.push(layer);
    }
    RotationCircuit { n_modes: n, layers }
}

/// Expands each rotation into its Jordan-Wigner Pauli-rotation pair.
///
/// A pair with common angle `phi` rotates the even-Majorana coefficients by
/// `(v_p, v_q) -> (cos(2 phi) v_p - sin(2 phi) v_q, sin(2 phi) v_p + cos(2 phi) v_q)`,
/// so the stored `theta` convention maps to `phi = pi/4 - theta/2`.
pub fn jw_encode(circuit: &RotationCircuit) -> Vec<PauliRotationPair> {
    let n = circuit.n_modes;
    circuit
        .rotations()
        .map(|r| {
            let mut kinds_xy = vec![PauliKind::I; n];
            let mut kinds_yx = vec![PauliKind::I; n];
            kinds_xy[r.p] = PauliKind::X;
            kinds_xy[r.q] = PauliKind::Y;
            kinds_yx[r.p] = PauliKind::Y;
            kinds_yx[r.q] = PauliKind::X;
            for t in r.p + 1..r.q {
                kinds_xy[t] = PauliKind::Z;
                kinds_yx[t] = PauliKind::Z;
            }
            PauliRotationPair {
                xy: PauliString::from_kinds(&kinds_xy),
                yx: PauliString::from_kinds(&kinds_yx),
                angle: FRAC_PI_4 - r.theta / 2.0,
            }
        })
        .collect()
}

/// Applies the encoded rotation pairs (or their inverse) to a raw
/// amplitude vector.
fn apply_pairs(pairs: &[PauliRotationPair], state: &mut sim::DenseState, inverse: bool) {
    if inverse {
        for pair in pairs.iter().rev() {
            state.apply_ppr(&pair.yx, -pair.angle);
            state.apply_ppr(&pair.xy, -pair.angle);
        }
    } else {
        for pair in pairs {
            state.apply_ppr(&pair.xy, pair.angle);
            state.apply_ppr(&pair.yx, pair.angle);
        }
    }
}

/// Dense image of `V gamma_j V^dagger` as a set of columns.
fn conjugated_majorana_columns(
    circ: &RotationCircuit,
    j: usize,
) -> Result<Vec<Vec<num_complex::Complex64>>> {
    let n = circ.n_modes;
    if n > MAX_QUBITS {
        return Err(Error::capability(format!(
            "{n} modes exceeds the dense verification cap of {MAX_QUBITS}"
        )));
    }
    let gamma = sim::majorana(j, n)?;
    let pairs = jw_encode(circ);
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for c in 0..dim {
        let mut amps = vec![num_complex::Complex64::ZERO; dim];
        amps[c] = num_complex::Complex64::ONE;
        let mut st = sim::DenseState::from_amplitudes(amps)?;
        apply_pairs(&pairs, &mut st, true);
        st.apply_pauli(&gamma);
        apply_pairs(&pairs, &mut st, false);
        cols.push(st.amplitudes().to_vec());
    }
    Ok(cols)
}

/// Outcome of the dense basis-change check.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOutcome {
    pub residual: f64,
    pub pass: bool,
}

pub const VERIFY_TOL: f64 = 1e-9;

/// Frobenius distance between `V gamma_0 V^dagger` and `sum_j u_j gamma_{2j}`
/// computed with the dense oracle. Capped at [`MAX_QUBITS`] modes.
pub fn verify_basis_change(circ: &RotationCircuit, u: &MajoranaVector) -> Result<VerifyOutcome> {
    let n = circ.n_modes;
    let padded = {
        let mut v = u.values().to_vec();
        if v.len() > n {
            return Err(Error::dimension("vector longer than circuit".to_string()));
        }
        v.resize(n, 0.0);
        v
    };
    let actual = conjugated_majorana_columns(circ, 0)?;
    let dim = 1usize << n;
    // Target columns: sum_j u_j gamma_{2j} |c>.
    let mut residual_sq = 0.0;
    for c in 0..dim {
        let mut target = vec![num_complex::Complex64::ZERO; dim];
        for (j, &uj) in padded.iter().enumerate() {
            if uj == 0.0 {
                continue;
            }
            let gamma = sim::majorana(2 * j, n)?;
            let mut amps = vec![num_complex::Complex64::ZERO; dim];
            amps[c] = num_complex::Complex64::ONE;
            let mut st = sim::DenseState::from_amplitudes(amps)?;
            st.apply_pauli(&gamma);
            for (t, a) in target.iter_mut().zip(st.amplitudes()) {
                *t += uj * a;
            }
        }
        for (a, t) in actual[c].iter().zip(&target) {
            residual_sq += (a - t).norm_sqr();
        }
    }
    let residual = residual_sq.sqrt();
    Ok(VerifyOutcome {
        residual,
        pass: residual <= VERIFY_TOL,
    })
}

/// Frobenius distance between the `gamma_0` images of two circuits.
pub fn circuits_agree_on_gamma0(a: &RotationCircuit, b: &RotationCircuit) -> Result<f64> {
    if a.n_modes != b.n_modes {
        return Err(Error::dimension(
            "circuits act on different mode counts".to_string(),
        ));
    }
    let ca = conjugated_majorana_columns(a, 0)?;
    let cb = conjugated_majorana_columns(b, 0)?;
    let mut sq = 0.0;
    for (col_a, col_b) in ca.iter().zip(&cb) {
        for (x, y) in col_a.iter().zip(col_b) {
            sq += (x - y).norm_sqr();
        }
    }
    Ok(sq.sqrt())
}

/// Expands `V gamma_j V^dagger` in the Majorana basis; returns the real
/// coefficient vector and the magnitude of everything it fails to explain.
pub fn majorana_expansion(circ: &RotationCircuit, j: usize) -> Result<(Vec<f64>, f64)> {
    let n = circ.n_modes;
    let cols = conjugated_majorana_columns(circ, j)?;
    let dim = 1usize << n;
    let mut coeffs = Vec::with_capacity(2 * n);
    let mut explained = vec![vec![num_complex::Complex64::ZERO; dim]; dim];
    for k in 0..2 * n {
        let gamma = sim::majorana(k, n)?;
        let mut acc = num_complex::Complex64::ZERO;
        for c in 0..dim {
            let mut amps = vec![num_complex::Complex64::ZERO; dim];
            amps[c] = num_complex::Complex64::ONE;
            let mut st = sim::DenseState::from_amplitudes(amps)?;
            st.apply_pauli(&gamma);
            for (r, g) in st.amplitudes().iter().enumerate() {
                acc += g.conj() * cols[c][r];
            }
        }
        let ck = acc / dim as f64;
        coeffs.push(ck.re);
        for c in 0..dim {
            let mut amps = vec![num_complex::Complex64::ZERO; dim];
            amps[c] = num_complex::Complex64::ONE;
            let mut st = sim::DenseState::from_amplitudes(amps)?;
            st.apply_pauli(&gamma);
            for (r, g) in st.amplitudes().iter().enumerate() {
                explained[c][r] += ck * g;
            }
        }
    }
    let mut leftover = 0.0;
    for c in 0..dim {
        for r in 0..dim {
            leftover += (cols[c][r] - explained[c][r]).norm_sqr();
        }
    }
    Ok((coeffs, leftover.sqrt()))
}
