//! Dense statevector oracle.
//!
//! Brute-force backend for the verification suites: exact Pauli application,
//! Pauli-product rotations, projective Pauli measurements, a handful of
//! Clifford gates, and Jordan-Wigner Majorana operators. Capacity is capped
//! at 12 qubits so every oracle stays fast.
//!
//! Qubit `k` maps to bit `k` of the amplitude index (qubit 0 is the least
//! significant bit).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::pauli::PauliString;
use crate::Result;

/// Hard cap on dense simulation size.
pub const MAX_QUBITS: usize = 12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-qubit preparation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// |0>
    Zero,
    /// |+>
    Plus,
    /// (|0> + e^{i pi/4}|1>)/sqrt(2)
    MagicT,
    /// +1 eigenstate of Y
    PlusY,
}

impl Basis {
    pub fn amplitudes(self) -> [Complex64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Basis::Zero => [ONE, ZERO],
            Basis::Plus => [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            Basis::MagicT => [
                Complex64::new(s, 0.0),
                Complex64::from_polar(s, std::f64::consts::FRAC_PI_4),
            ],
            Basis::PlusY => [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
        }
    }
}

/// Normalized amplitude vector over `2^n` basis states.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::capability(format!(
                "{n} qubits exceeds the dense cap of {MAX_QUBITS}"
            )));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(DenseState { n, amps })
    }

    /// Product state with the given per-qubit bases.
    pub fn product(bases: &[Basis]) -> Result<Self> {
        let mut st = DenseState::zero(bases.len())?;
        for (q, b) in bases.iter().enumerate() {
            st.prepare(q, *b);
        }
        Ok(st)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if 1 << n != amps.len() {
            return Err(Error::validation("amplitude length must be a power of two"));
        }
        if n > MAX_QUBITS {
            return Err(Error::capability("state too large"));
        }
        Ok(DenseState { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
    }

    /// |<self|other>|
    pub fn fidelity(&self, other: &DenseState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Resets qubit `q` to the given basis state. The qubit must be in a
    /// product state with the rest of the register (true for retired magic
    /// and ancilla qubits); this collapses it in Z and re-prepares.
    pub fn prepare(&mut self, q: usize, basis: Basis) {
        let mask = 1usize << q;
        let p1: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        // Collapse deterministically onto the heavier branch.
        let keep_one = p1 > 0.5;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & mask != 0) != keep_one) && a.norm_sqr() > 0.0 {
                *a = ZERO;
            }
        }
        self.normalize();
        // Move the collapsed bit to 0, then write the target amplitudes.
        let [a0, a1] = basis.amplitudes();
        let mut out = vec![ZERO; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let base = i & !mask;
            out[base] += a * a0;
            out[base | mask] += a * a1;
        }
        self.amps = out;
        self.normalize();
    }

    /// Applies `P` in place: `|psi> -> P |psi>`.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        assert_eq!(p.n_qubits(), self.n, "pauli size mismatch");
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        for q in 0..self.n {
            if p.x_bit(q) {
                xmask |= 1 << q;
            }
            if p.z_bit(q) {
                zmask |= 1 << q;
            }
        }
        let global = match p.phase() % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        let mut out = vec![ZERO; self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let sign = if ((b & zmask).count_ones() & 1) == 1 {
                -ONE
            } else {
                ONE
            };
            out[b ^ xmask] = a * sign * global;
        }
        self.amps = out;
    }

    /// `exp(i theta P) |psi> = cos(theta)|psi> + i sin(theta) P|psi>`.
    pub fn apply_ppr(&mut self, p: &PauliString, theta: f64) {
        let mut rotated = self.clone();
        rotated.apply_pauli(p);
        let (s, c) = theta.sin_cos();
        for (a, pa) in self.amps.iter_mut().zip(&rotated.amps) {
            *a = c * *a + I * s * pa;
        }
    }

    /// <psi| P |psi> (real part; exact for Hermitian `P`).
    pub fn expectation(&self, p: &PauliString) -> f64 {
        let mut rotated = self.clone();
        rotated.apply_pauli(p);
        self.amps
            .iter()
            .zip(&rotated.amps)
            .map(|(a, b)| (a.conj() * b).re)
            .sum::<f64>()
    }

    /// Projective measurement of a Hermitian Pauli. Returns the outcome and
    /// collapses the state; deterministic given the rng stream.
    pub fn measure_pauli(&mut self, p: &PauliString, rng: &mut impl Rng) -> Result<i8> {
        if !p.is_hermitian() {
            return Err(Error::validation(format!(
                "cannot measure non-Hermitian Pauli {p}"
            )));
        }
        let p_plus = ((1.0 + self.expectation(p)) / 2.0).clamp(0.0, 1.0);
        let outcome = if p_plus >= 1.0 - 1e-12 {
            1
        } else if p_plus <= 1e-12 {
            -1
        } else if rng.random_range(0.0..1.0) < p_plus {
            1
        } else {
            -1
        };
        let mut rotated = self.clone();
        rotated.apply_pauli(p);
        let sign = outcome as f64;
        for (a, pa) in self.amps.iter_mut().zip(&rotated.amps) {
            *a = (*a + sign * pa) / 2.0;
        }
        self.normalize();
        Ok(outcome)
    }

    /// Probability of outcome +1 without collapsing.
    pub fn prob_plus(&self, p: &PauliString) -> f64 {
        ((1.0 + self.expectation(p)) / 2.0).clamp(0.0, 1.0)
    }

    // Gates used by the measurement-circuit expansions.

    pub fn cx(&mut self, control: usize, target: usize) {
        let cm = 1usize << control;
        let tm = 1usize << target;
        for b in 0..self.amps.len() {
            if b & cm != 0 && b & tm == 0 {
                self.amps.swap(b, b | tm);
            }
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        let am = 1usize << a;
        let bm = 1usize << b;
        for i in 0..self.amps.len() {
            if i & am != 0 && i & bm != 0 {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    pub fn s_dagger(&mut self, q: usize) {
        let m = 1usize << q;
        for i in 0..self.amps.len() {
            if i & m != 0 {
                self.amps[i] *= -I;
            }
        }
    }

    pub fn hadamard(&mut self, q: usize) {
        let m = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a = self.amps[i];
                let b = self.amps[i | m];
                self.amps[i] = s * (a + b);
                self.amps[i | m] = s * (a - b);
            }
        }
    }

    /// Contracts qubit `q` against a fixed single-qubit state, removing it.
    /// Returns the squared norm captured by the contraction.
    pub fn factor_out(&mut self, q: usize, axis: [Complex64; 2]) -> f64 {
        let mask = 1usize << q;
        let half = self.amps.len() / 2;
        let mut out = vec![ZERO; half];
        for (j, o) in out.iter_mut().enumerate() {
            let low = j & (mask - 1);
            let high = (j & !(mask - 1)) << 1;
            let b0 = high | low;
            *o = axis[0].conj() * self.amps[b0] + axis[1].conj() * self.amps[b0 | mask];
        }
        let captured: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        self.amps = out;
        self.n -= 1;
        if captured > 0.0 {
            let inv = captured.sqrt().recip();
            for a in &mut self.amps {
                *a *= inv;
            }
        }
        captured
    }
}

/// Jordan-Wigner Majorana operator `gamma_j` on `n_modes` modes
/// (`2 * n_modes` Majoranas, one qubit per mode):
/// even index `2k` is `Z..Z X_k`, odd index `2k+1` is `Z..Z Y_k`.
pub fn majorana(j: usize, n_modes: usize) -> Result<PauliString> {
    if j >= 2 * n_modes {
        return Err(Error::validation(format!(
            "majorana index {j} out of range for {n_modes} modes"
        )));
    }
    if n_modes > MAX_QUBITS {
        return Err(Error::capability("too many modes for the dense oracle"));
    }
    let k = j / 2;
    let mut p = if j.is_multiple_of(2) {
        PauliString::single_x(n_modes, k)
    } else {
        PauliString::single_y(n_modes, k)
    };
    for t in 0..k {
        p.set_z(t, true);
    }
    Ok(p)
}

/// Dense matrix of a Pauli string.
pub fn pauli_matrix(p: &PauliString) -> DMatrix<Complex64> {
    let dim = 1usize << p.n_qubits();
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let mut st = DenseState {
            n: p.n_qubits(),
            amps: vec![ZERO; dim],
        };
        st.amps[col] = ONE;
        st.apply_pauli(p);
        for row in 0..dim {
            m[(row, col)] = st.amps[row];
        }
    }
    m
}

/// Recovers `(P, ok)` such that `m = i^s X^x Z^z` exactly (within `tol`);
/// fails if `m` is not proportional to a Pauli with a fourth-root-of-unity
/// coefficient.
pub fn pauli_decompose(m: &DMatrix<Complex64>, tol: f64) -> Option<PauliString> {
    let dim = m.nrows();
    let n = dim.trailing_zeros() as usize;
    // Column 0 of X^x Z^z has its single entry at row x.
    let x = (0..dim).find(|&r| m[(r, 0)].norm() > tol)?;
    let c = m[(x, 0)];
    let phase = [ONE, I, -ONE, -I]
        .iter()
        .position(|ph| (c - ph).norm() < tol)? as u8;
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set_x(q, (x >> q) & 1 == 1);
    }
    for q in 0..n {
        let col = 1usize << q;
        let row = col ^ x;
        let r = m[(row, col)] / c;
        if (r - ONE).norm() < tol {
            // z_q = 0
        } else if (r + ONE).norm() < tol {
            p.set_z(q, true);
        } else {
            return None;
        }
    }
    p.set_phase(phase);
    // Full verification.
    let rebuilt = pauli_matrix(&p);
    let diff = (m - rebuilt).norm();
    if diff < tol * dim as f64 {
        Some(p)
    } else {
        None
    }
}

/// Conjugates `P` by the dense unitary: `U^dagger P U`.
pub fn conjugate(u: &DMatrix<Complex64>, p: &PauliString) -> DMatrix<Complex64> {
    let pm = pauli_matrix(p);
    u.adjoint() * pm * u
}
