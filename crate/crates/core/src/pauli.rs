//! Phase-tracked symplectic Pauli strings.
//!
//! A Pauli operator on `n` qubits is stored as `i^s * (X^x) * (Z^z)` with
//! `s` modulo 4 and per-qubit x/z bits packed into `u64` words. All phase
//! arithmetic is exact, which is what the Clifford frame machinery relies on.

use std::fmt;

use crate::error::Error;
use crate::Result;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

fn and_parity(a: &[u64], b: &[u64]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ ((x & y).count_ones() & 1))
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

/// `i^phase * X^x * Z^z` over `n` qubits.
#[derive(Clone, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Power of `i`, modulo 4.
    phase: u8,
}

impl PauliString {
    /// Identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// Single-qubit X embedded in `n` qubits.
    pub fn single_x(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.set_x(q, true);
        p
    }

    /// Single-qubit Z embedded in `n` qubits.
    pub fn single_z(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.set_z(q, true);
        p
    }

    /// Single-qubit Y (`i * X * Z`) embedded in `n` qubits.
    pub fn single_y(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.set_x(q, true);
        p.set_z(q, true);
        p.phase = 1;
        p
    }

    /// Builds from per-qubit letters; phase gets one factor of `i` per Y so
    /// the result is the Hermitian tensor product of the letters.
    pub fn from_kinds(kinds: &[PauliKind]) -> Self {
        let mut p = Self::identity(kinds.len());
        for (q, k) in kinds.iter().enumerate() {
            match k {
                PauliKind::I => {}
                PauliKind::X => p.set_x(q, true),
                PauliKind::Z => p.set_z(q, true),
                PauliKind::Y => {
                    p.set_x(q, true);
                    p.set_z(q, true);
                    p.phase = (p.phase + 1) % 4;
                }
            }
        }
        p
    }

    /// Parses the text form: a sign (`+`/`-`, optional) followed by one
    /// letter of `IXYZ` per qubit, e.g. `+XIZY`.
    pub fn parse(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'+') => (0u8, &s[1..]),
            Some(b'-') => (2u8, &s[1..]),
            _ => (0u8, s),
        };
        let mut kinds = Vec::with_capacity(body.len());
        for c in body.chars() {
            kinds.push(match c {
                'I' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                other => {
                    return Err(Error::validation(format!(
                        "invalid Pauli letter {other:?} in {s:?}"
                    )))
                }
            });
        }
        if kinds.is_empty() {
            return Err(Error::validation("empty Pauli string"));
        }
        let mut p = Self::from_kinds(&kinds);
        p.phase = (p.phase + sign) % 4;
        Ok(p)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, s: u8) {
        self.phase = s % 4;
    }

    /// Multiplies the operator by -1.
    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + 2) % 4;
        p
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / WORD] >> (q % WORD)) & 1 == 1
    }

    pub fn set_x(&mut self, q: usize, v: bool) {
        let (w, b) = (q / WORD, q % WORD);
        if v {
            self.x[w] |= 1 << b;
        } else {
            self.x[w] &= !(1 << b);
        }
    }

    pub fn set_z(&mut self, q: usize, v: bool) {
        let (w, b) = (q / WORD, q % WORD);
        if v {
            self.z[w] |= 1 << b;
        } else {
            self.z[w] &= !(1 << b);
        }
    }

    /// Letter at qubit `q`, ignoring the global phase.
    pub fn kind(&self, q: usize) -> PauliKind {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (false, true) => PauliKind::Z,
            (true, true) => PauliKind::Y,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Qubits with a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// Number of Y letters.
    pub fn count_y(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x & z).count_ones() as usize)
            .sum()
    }

    /// True iff the operator is Hermitian: `s + |x & z|` must be even.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + and_parity(&self.x, &self.z)).is_multiple_of(2)
    }

    /// True iff `self` and `other` commute (symplectic product is even).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        and_parity(&self.x, &other.z) ^ and_parity(&other.x, &self.z) == 0
    }

    /// Exact product `self * other` with phase tracking.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::dimension(format!(
                "pauli product: {} vs {} qubits",
                self.n, other.n
            )));
        }
        // Moving Z^{z1} across X^{x2} contributes (-1)^{|z1 & x2|}.
        let swap = and_parity(&self.z, &other.x);
        let mut out = PauliString {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            phase: (self.phase + other.phase + 2 * swap as u8) % 4,
        };
        out.phase %= 4;
        Ok(out)
    }

    /// Tensor-extends to `n` qubits (appending identities).
    pub fn padded(&self, n: usize) -> PauliString {
        assert!(n >= self.n);
        let mut p = PauliString::identity(n);
        for q in 0..self.n {
            p.set_x(q, self.x_bit(q));
            p.set_z(q, self.z_bit(q));
        }
        p.phase = self.phase;
        p
    }

    /// Word-level operation count of one frame-row update against this
    /// string; used by the update-cost instrumentation.
    pub fn word_count(&self) -> usize {
        self.x.len()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Canonical form: fold one i per Y into the printed sign when possible.
        let n_y = self.count_y() as u8;
        let residual = (self.phase + 4 - n_y % 4) % 4;
        let sign = match residual {
            0 => "+",
            2 => "-",
            1 => "+i",
            _ => "-i",
        };
        write!(f, "{sign}")?;
        for q in 0..self.n {
            let c = match self.kind(q) {
                PauliKind::I => 'I',
                PauliKind::X => 'X',
                PauliKind::Y => 'Y',
                PauliKind::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["+XIZY", "-ZZII", "+YYYY", "-IXIZ"] {
            let p = PauliString::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
            assert!(p.is_hermitian());
        }
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::single_x(1, 0);
        let z = PauliString::single_z(1, 0);
        let y = PauliString::single_y(1, 0);
        // X * Z = -i Y
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.kind(0), PauliKind::Y);
        assert_eq!(xz.phase(), 0); // i^0 * XZ = -i * Y, and Y = i XZ
        assert_eq!(xz.to_string(), "-iY");
        // Z * X = +i Y
        let zx = z.mul(&x).unwrap();
        assert_eq!(zx.to_string(), "+iY");
        // Y * Y = I
        let yy = y.mul(&y).unwrap();
        assert!(yy.is_identity());
        assert_eq!(yy.phase(), 0);
    }

    #[test]
    fn commutation() {
        let xx = PauliString::parse("+XX").unwrap();
        let zz = PauliString::parse("+ZZ").unwrap();
        let zi = PauliString::parse("+ZI").unwrap();
        assert!(xx.commutes_with(&zz));
        assert!(!xx.commutes_with(&zi));
    }

    #[test]
    fn hermiticity() {
        let mut p = PauliString::single_z(2, 0);
        assert!(p.is_hermitian());
        p.set_phase(1); // iZ
        assert!(!p.is_hermitian());
        p.set_phase(2); // -Z
        assert!(p.is_hermitian());
    }

    #[test]
    fn y_count_and_support() {
        let p = PauliString::parse("+XYZY").unwrap();
        assert_eq!(p.count_y(), 2);
        assert_eq!(p.support(), vec![0, 1, 2, 3]);
        let q = PauliString::parse("+IXII").unwrap();
        assert_eq!(q.support(), vec![1]);
    }
}
