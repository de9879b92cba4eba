//! Double factorization of the two-electron tensor.
//!
//! The rank-4 coefficient tensor is reshaped to an `N^2 x N^2` symmetric
//! positive-semidefinite matrix and eigendecomposed into `R` symmetric
//! factor matrices; each factor is eigendecomposed again into rank-one
//! terms. Truncation drops eigenpairs by ascending norm contribution and
//! reports a rigorous reconstruction-error bound; `alpha` is the norm that
//! feeds the phase-estimation repetition count.

use nalgebra::{DMatrix, DVector};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::Result;

const SYM_TOL: f64 = 1e-8;
const ONE_BODY_SYM_TOL: f64 = 1e-10;
const PSD_REL_TOL: f64 = 1e-6;

/// Dense rank-4 coefficient tensor over `n` spatial orbitals, row-major
/// `(i, j, k, l)`.
#[derive(Debug, Clone)]
pub struct TwoElectronTensor {
    n: usize,
    values: Vec<f64>,
}

impl TwoElectronTensor {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("orbital count must be positive"));
        }
        if values.len() != n * n * n * n {
            return Err(Error::dimension(format!(
                "expected {} tensor entries, got {}",
                n * n * n * n,
                values.len()
            )));
        }
        Ok(TwoElectronTensor { n, values })
    }

    pub fn n_orbitals(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.values[((i * n + j) * n + k) * n + l]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Checks the symmetries required by the eigendecomposition route and
    /// names the first violated one.
    pub fn check_symmetries(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        if (v - self.get(k, l, i, j)).abs() > SYM_TOL {
                            return Err(Error::validation(format!(
                                "block-exchange symmetry (ij)<->(kl) violated at ({i},{j},{k},{l})"
                            )));
                        }
                        if (v - self.get(j, i, k, l)).abs() > SYM_TOL {
                            return Err(Error::validation(format!(
                                "within-block symmetry i<->j violated at ({i},{j},{k},{l})"
                            )));
                        }
                        if (v - self.get(i, j, l, k)).abs() > SYM_TOL {
                            return Err(Error::validation(format!(
                                "within-block symmetry k<->l violated at ({i},{j},{k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn reshaped(&self) -> DMatrix<f64> {
        let n2 = self.n * self.n;
        DMatrix::from_fn(n2, n2, |row, col| self.values[row * n2 + col])
    }
}

/// Dense symmetric one-body coefficient matrix.
#[derive(Debug, Clone)]
pub struct OneBodyMatrix {
    n: usize,
    values: DMatrix<f64>,
}

impl OneBodyMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::dimension(format!(
                "expected {} matrix entries, got {}",
                n * n,
                values.len()
            )));
        }
        let m = DMatrix::from_fn(n, n, |i, j| values[i * n + j]);
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > ONE_BODY_SYM_TOL {
                    return Err(Error::validation(format!(
                        "one-body matrix asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(OneBodyMatrix { n, values: m })
    }

    pub fn zero(n: usize) -> Self {
        OneBodyMatrix {
            n,
            values: DMatrix::zeros(n, n),
        }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// One-norm of the eigenvalue spectrum.
    pub fn eigenvalue_one_norm(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.values
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|e| e.abs())
            .sum()
    }
}

/// Retained eigenpair of one factor matrix.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<f64>,
}

/// All retained eigenpairs of one first-level factor.
#[derive(Debug, Clone)]
pub struct FactorBlock {
    pub pairs: Vec<EigenPair>,
}

impl FactorBlock {
    /// One-norm of the retained eigenvalues.
    pub fn one_norm(&self) -> f64 {
        self.pairs.iter().map(|p| p.value.abs()).sum()
    }

    /// Rebuilds the factor matrix from the retained pairs.
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for p in &self.pairs {
            m += p.value * &p.vector * p.vector.transpose();
        }
        m
    }
}

/// Double-factorized two-electron tensor.
#[derive(Debug, Clone)]
pub struct FactorizedHamiltonian {
    n: usize,
    blocks: Vec<FactorBlock>,
    truncation_error_bound: f64,
}

impl FactorizedHamiltonian {
    pub fn from_blocks(n: usize, blocks: Vec<FactorBlock>, truncation_error_bound: f64) -> Self {
        FactorizedHamiltonian {
            n,
            blocks,
            truncation_error_bound,
        }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[FactorBlock] {
        &self.blocks
    }

    /// First-level rank `R`.
    pub fn rank_r(&self) -> usize {
        self.blocks.len()
    }

    /// Total retained eigenpairs `M`.
    pub fn rank_m(&self) -> usize {
        self.blocks.iter().map(|b| b.pairs.len()).sum()
    }

    pub fn per_rank_m(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.pairs.len()).collect()
    }

    pub fn max_rank_m(&self) -> usize {
        self.blocks.iter().map(|b| b.pairs.len()).max().unwrap_or(0)
    }

    pub fn truncation_error_bound(&self) -> f64 {
        self.truncation_error_bound
    }

    /// Two-body norm term: `(1/4) sum_r (sum_m |lambda|)^2`.
    pub fn two_body_norm(&self) -> f64 {
        0.25 * self
            .blocks
            .iter()
            .map(|b| {
                let s = b.one_norm();
                s * s
            })
            .sum::<f64>()
    }

    /// Builds the untruncated factorization.
    pub fn build(h: &TwoElectronTensor) -> Result<Self> {
        let factors = first_factorize(h)?;
        let mut blocks = Vec::with_capacity(factors.len());
        for l in &factors {
            let pairs = second_factorize(l)?;
            blocks.push(FactorBlock { pairs });
        }
        Ok(FactorizedHamiltonian {
            n: h.n_orbitals(),
            blocks,
            truncation_error_bound: 0.0,
        })
    }
}

fn canonical_sign(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            *v = -v.clone();
        }
    }
}

/// First-level factorization: eigendecomposes the `N^2 x N^2` reshaping and
/// returns the symmetric factor matrices (eigenvalue magnitudes absorbed),
/// ordered by descending eigenvalue.
pub fn first_factorize(h: &TwoElectronTensor) -> Result<Vec<DMatrix<f64>>> {
    h.check_symmetries()?;
    let n = h.n_orbitals();
    let w = h.reshaped();
    let eig = w.symmetric_eigen();
    let max_abs = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()));
    if max_abs == 0.0 {
        return Ok(Vec::new());
    }
    for e in eig.eigenvalues.iter() {
        if *e < -PSD_REL_TOL * max_abs {
            return Err(Error::Indefinite(format!(
                "reshaped matrix has eigenvalue {e} below -{PSD_REL_TOL} * {max_abs}"
            )));
        }
    }
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut factors = Vec::new();
    for idx in order {
        let weight = eig.eigenvalues[idx].max(0.0);
        if weight <= 1e-12 * max_abs {
            continue;
        }
        let mut v: DVector<f64> = eig.eigenvectors.column(idx).into();
        canonical_sign(&mut v);
        let mut m = DMatrix::from_fn(n, n, |i, j| v[i * n + j]);
        // The within-block symmetry makes the reshaped eigenvector a
        // symmetric matrix; symmetrize away the numerical residue.
        m = (&m + m.transpose()) * 0.5;
        factors.push(m * weight.sqrt());
    }
    Ok(factors)
}

/// Second-level factorization of one symmetric factor: eigenpairs sorted by
/// descending magnitude, unit-norm vectors with a deterministic sign.
pub fn second_factorize(l: &DMatrix<f64>) -> Result<Vec<EigenPair>> {
    if l.nrows() != l.ncols() {
        return Err(Error::dimension("factor matrix must be square"));
    }
    for i in 0..l.nrows() {
        for j in 0..i {
            if (l[(i, j)] - l[(j, i)]).abs() > ONE_BODY_SYM_TOL {
                return Err(Error::validation(format!(
                    "factor matrix asymmetric at ({i},{j})"
                )));
            }
        }
    }
    let sym = (l + l.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut pairs: Vec<EigenPair> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(idx, &value)| {
            let mut vector: DVector<f64> = eig.eigenvectors.column(idx).into();
            let norm = vector.norm();
            if norm > 0.0 {
                vector /= norm;
            }
            canonical_sign(&mut vector);
            EigenPair { value, vector }
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.value
            .abs()
            .partial_cmp(&a.value.abs())
            .unwrap()
            .then(b.value.partial_cmp(&a.value).unwrap())
    });
    Ok(pairs)
}

/// Greedy truncation: eigenpairs leave in ascending order of the score
/// `|lambda| * (block one-norm)`, ties broken by `(r, m)` index, while the
/// accumulated error bound stays within `eps_trunc`. Emptied blocks are
/// dropped. The reported bound dominates the true reconstruction error:
/// per block, `||removed||_1 * (original + retained one-norms)`.
pub fn truncate(f: &FactorizedHamiltonian, eps_trunc: f64) -> Result<FactorizedHamiltonian> {
    if eps_trunc < 0.0 {
        return Err(Error::validation("truncation budget must be nonnegative"));
    }
    let original_norms: Vec<f64> = f.blocks.iter().map(FactorBlock::one_norm).collect();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (r, block) in f.blocks.iter().enumerate() {
        for (m, pair) in block.pairs.iter().enumerate() {
            candidates.push((pair.value.abs() * original_norms[r], r, m));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then((a.1, a.2).cmp(&(b.1, b.2)))
    });

    let mut removed_one_norm = vec![0.0f64; f.blocks.len()];
    let mut removed: Vec<Vec<bool>> = f
        .blocks
        .iter()
        .map(|b| vec![false; b.pairs.len()])
        .collect();
    let mut bound = 0.0;
    for (_, r, m) in candidates {
        let lam = f.blocks[r].pairs[m].value.abs();
        let new_removed = removed_one_norm[r] + lam;
        // Per-block bound term if this pair also leaves.
        let old_term =
            removed_one_norm[r] * (original_norms[r] + (original_norms[r] - removed_one_norm[r]));
        let new_term = new_removed * (original_norms[r] + (original_norms[r] - new_removed));
        let new_bound = bound - old_term + new_term;
        if new_bound > eps_trunc {
            break;
        }
        bound = new_bound;
        removed_one_norm[r] = new_removed;
        removed[r][m] = true;
    }

    let mut blocks = Vec::new();
    for (r, block) in f.blocks.iter().enumerate() {
        let pairs: Vec<EigenPair> = block
            .pairs
            .iter()
            .enumerate()
            .filter(|(m, _)| !removed[r][*m])
            .map(|(_, p)| p.clone())
            .collect();
        if !pairs.is_empty() {
            blocks.push(FactorBlock { pairs });
        }
    }
    Ok(FactorizedHamiltonian {
        n: f.n,
        blocks,
        truncation_error_bound: f.truncation_error_bound + bound,
    })
}

/// Hamiltonian norm: one-body eigenvalue one-norm plus the squared
/// per-block one-norms of the two-body part.
pub fn compute_alpha(f: &FactorizedHamiltonian, t: &OneBodyMatrix) -> Result<f64> {
    if t.n_orbitals() != f.n && !f.blocks.is_empty() {
        return Err(Error::dimension(format!(
            "one-body matrix over {} orbitals but factorization over {}",
            t.n_orbitals(),
            f.n
        )));
    }
    Ok(t.eigenvalue_one_norm() + f.two_body_norm())
}

/// Max-abs and Frobenius deviation of the rebuilt tensor from `h`.
pub fn reconstruction_error(
    f: &FactorizedHamiltonian,
    h: &TwoElectronTensor,
) -> Result<(f64, f64)> {
    if f.n != h.n_orbitals() {
        return Err(Error::dimension(format!(
            "factorization over {} orbitals vs tensor over {}",
            f.n,
            h.n_orbitals()
        )));
    }
    let n = f.n;
    let mats: Vec<DMatrix<f64>> = f.blocks.iter().map(|b| b.matrix(n)).collect();
    let mut max_abs = 0.0f64;
    let mut fro = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut rebuilt = 0.0;
                    for m in &mats {
                        rebuilt += m[(i, j)] * m[(k, l)];
                    }
                    let d = rebuilt - h.get(i, j, k, l);
                    max_abs = max_abs.max(d.abs());
                    fro += d * d;
                }
            }
        }
    }
    Ok((max_abs, fro.sqrt()))
}

// ---------------------------------------------------------------------------
// Tensor / matrix file formats

fn read_text_values(content: &str) -> Result<(usize, Vec<f64>)> {
    let mut it = content.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "expected leading orbital count".to_string(),
        })?;
    let values: Vec<f64> = it
        .map(|s| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad number {s:?}"),
            })
        })
        .collect::<Result<_>>()?;
    Ok((n, values))
}

fn read_binary_values(bytes: &[u8]) -> Result<(usize, Vec<f64>)> {
    if bytes.len() < 8 {
        return Err(Error::validation("binary file too short"));
    }
    let n = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    let rest = &bytes[8..];
    if !rest.len().is_multiple_of(8) {
        return Err(Error::validation("binary payload is not 8-byte aligned"));
    }
    let values = rest
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((n, values))
}

fn is_binary_path(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some("bin")
}

/// Reads a two-electron tensor; `.bin` selects the binary layout, anything
/// else the text layout.
pub fn read_tensor(path: &Path) -> Result<TwoElectronTensor> {
    let (n, values) = if is_binary_path(path) {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        read_binary_values(&buf)?
    } else {
        read_text_values(&std::fs::read_to_string(path)?)?
    };
    TwoElectronTensor::new(n, values)
}

/// Reads a one-body matrix with the same layout conventions.
pub fn read_one_body(path: &Path) -> Result<OneBodyMatrix> {
    let (n, values) = if is_binary_path(path) {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        read_binary_values(&buf)?
    } else {
        read_text_values(&std::fs::read_to_string(path)?)?
    };
    OneBodyMatrix::new(n, values)
}

pub fn write_tensor_text(path: &Path, t: &TwoElectronTensor) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{}", t.n_orbitals())?;
    for chunk in t.values().chunks(t.n_orbitals()) {
        let line: Vec<String> = chunk.iter().map(|v| format!("{v}")).collect();
        writeln!(f, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_tensor_binary(path: &Path, t: &TwoElectronTensor) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&(t.n_orbitals() as u64).to_le_bytes())?;
    for v in t.values() {
        f.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        (&m + m.transpose()) * 0.5
    }

    /// Tensor assembled as a sum of symmetric outer squares; positive
    /// semidefinite by construction.
    fn product_tensor(gs: &[DMatrix<f64>]) -> TwoElectronTensor {
        let n = gs[0].nrows();
        let mut values = vec![0.0; n * n * n * n];
        for g in gs {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            values[((i * n + j) * n + k) * n + l] += g[(i, j)] * g[(k, l)];
                        }
                    }
                }
            }
        }
        TwoElectronTensor::new(n, values).unwrap()
    }

    /// Jacobi eigenvalue sweep, used as an eigensolver independent of the
    /// implementation path.
    fn jacobi_abs_eigenvalue_sum(m: &DMatrix<f64>) -> f64 {
        let n = m.nrows();
        let mut a = m.clone();
        for _ in 0..100 {
            let mut off = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += a[(i, j)] * a[(i, j)];
                    }
                }
            }
            if off < 1e-24 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-18 {
                        continue;
                    }
                    let theta = 0.5 * (2.0 * a[(p, q)]).atan2(a[(q, q)] - a[(p, p)]);
                    let (s, c) = theta.sin_cos();
                    let rot = {
                        let mut r = DMatrix::identity(n, n);
                        r[(p, p)] = c;
                        r[(q, q)] = c;
                        r[(p, q)] = s;
                        r[(q, p)] = -s;
                        r
                    };
                    a = rot.transpose() * a * rot;
                }
            }
        }
        (0..n).map(|i| a[(i, i)].abs()).sum()
    }

    #[test]
    fn rank_one_tensor_recovers_outer_product() {
        // h_{ijkl} = v_i v_j v_k v_l with v = (1, 0).
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let g = &v * v.transpose();
        let h = product_tensor(std::slice::from_ref(&g));
        let factors = first_factorize(&h).unwrap();
        assert_eq!(factors.len(), 1);
        assert!((&factors[0] - &g).norm() < 1e-10);
        let f = FactorizedHamiltonian::build(&h).unwrap();
        let (max_abs, _) = reconstruction_error(&f, &h).unwrap();
        assert!(max_abs < 1e-12);
    }

    #[test]
    fn zero_tensor_gives_empty_factorization() {
        let h = TwoElectronTensor::new(2, vec![0.0; 16]).unwrap();
        let factors = first_factorize(&h).unwrap();
        assert!(factors.is_empty());
        let f = FactorizedHamiltonian::build(&h).unwrap();
        let (max_abs, fro) = reconstruction_error(&f, &h).unwrap();
        assert_eq!(max_abs, 0.0);
        assert_eq!(fro, 0.0);
    }

    #[test]
    fn three_term_tensor_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let gs: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(4, &mut rng)).collect();
        let h = product_tensor(&gs);
        let f = FactorizedHamiltonian::build(&h).unwrap();
        let (max_abs, _) = reconstruction_error(&f, &h).unwrap();
        assert!(max_abs < 1e-10, "max abs error {max_abs}");
    }

    #[test]
    fn asymmetric_tensor_is_named_in_error() {
        let mut values = vec![0.0; 16];
        values[1] = 1.0; // h_{0001} without partners
        let h = TwoElectronTensor::new(2, values).unwrap();
        let err = first_factorize(&h).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("symmetry"), "got: {msg}");
    }

    #[test]
    fn indefinite_reshape_is_rejected() {
        // h_{ijkl} = -delta_{ij} delta_{kl}: symmetric but negative definite.
        let n = 2;
        let mut values = vec![0.0; 16];
        for i in 0..n {
            for k in 0..n {
                values[((i * n + i) * n + k) * n + k] = -1.0;
            }
        }
        let h = TwoElectronTensor::new(n, values).unwrap();
        assert!(matches!(first_factorize(&h), Err(Error::Indefinite(_))));
    }

    #[test]
    fn second_factorize_identity_and_diagonal() {
        let pairs = second_factorize(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!((pairs[0].value - 1.0).abs() < 1e-12);
        assert!((pairs[1].value - 1.0).abs() < 1e-12);

        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0]));
        let pairs = second_factorize(&d).unwrap();
        assert!((pairs[0].value - 3.0).abs() < 1e-12);
        assert!((pairs[1].value + 1.0).abs() < 1e-12);
        assert!((pairs[0].vector[0].abs() - 1.0).abs() < 1e-12);
        assert!((pairs[1].vector[1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_factorize_rebuilds_random_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let l = random_symmetric(5, &mut rng);
        let pairs = second_factorize(&l).unwrap();
        let mut rebuilt = DMatrix::zeros(5, 5);
        for p in &pairs {
            rebuilt += p.value * &p.vector * p.vector.transpose();
        }
        assert!((&rebuilt - &l).norm() < 1e-10);
        for p in &pairs {
            assert!((p.vector.norm() - 1.0).abs() < 1e-12);
        }
        for w in pairs.windows(2) {
            assert!(w[0].value.abs() >= w[1].value.abs() - 1e-14);
        }
        assert!(second_factorize(&DMatrix::from_fn(2, 2, |i, j| (i + 2 * j) as f64)).is_err());
    }

    #[test]
    fn truncate_zero_budget_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gs: Vec<DMatrix<f64>> = (0..2).map(|_| random_symmetric(3, &mut rng)).collect();
        let f = FactorizedHamiltonian::build(&product_tensor(&gs)).unwrap();
        let t = truncate(&f, 0.0).unwrap();
        assert_eq!(t.rank_m(), f.rank_m());
        assert_eq!(t.truncation_error_bound(), 0.0);
    }

    #[test]
    fn truncate_everything_on_rank_one() {
        let v = DVector::from_vec(vec![1.0, 0.0]);
        let h = product_tensor(&[&v * v.transpose()]);
        let f = FactorizedHamiltonian::build(&h).unwrap();
        // Sole contribution is 1; any larger budget empties the factorization.
        let t = truncate(&f, 1.5).unwrap();
        assert_eq!(t.rank_r(), 0);
        assert_eq!(t.rank_m(), 0);
        assert!(t.truncation_error_bound() > 0.0);
        let (max_abs, _) = reconstruction_error(&t, &h).unwrap();
        assert!(max_abs <= t.truncation_error_bound() + 1e-12);
    }

    #[test]
    fn truncation_bound_dominates_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..10 {
            let gs: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(4, &mut rng)).collect();
            let h = product_tensor(&gs);
            let f = FactorizedHamiltonian::build(&h).unwrap();
            for eps in [1e-6, 1e-3, 1e-1, 1.0] {
                let t = truncate(&f, eps).unwrap();
                assert!(
                    t.truncation_error_bound() <= eps + 1e-12,
                    "bound exceeds budget on trial {trial}"
                );
                let (max_abs, fro) = reconstruction_error(&t, &h).unwrap();
                assert!(
                    fro <= t.truncation_error_bound() + 1e-9,
                    "trial {trial}: fro {fro} > bound {}",
                    t.truncation_error_bound()
                );
                assert!(max_abs <= fro + 1e-12);
            }
        }
    }

    #[test]
    fn truncation_is_monotone_in_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let gs: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(4, &mut rng)).collect();
        let f = FactorizedHamiltonian::build(&product_tensor(&gs)).unwrap();
        let t_onebody = OneBodyMatrix::zero(4);
        let mut last_m = usize::MAX;
        let mut last_bound = -1.0;
        let mut last_alpha = f64::INFINITY;
        for eps in [0.0, 1e-5, 1e-3, 1e-2, 1e-1, 1.0, 10.0] {
            let t = truncate(&f, eps).unwrap();
            assert!(t.rank_m() <= last_m);
            assert!(t.truncation_error_bound() >= last_bound);
            let alpha = compute_alpha(&t, &t_onebody).unwrap();
            assert!(alpha <= last_alpha + 1e-12);
            last_m = t.rank_m();
            last_bound = t.truncation_error_bound();
            last_alpha = alpha;
        }
    }

    #[test]
    fn alpha_examples() {
        // Empty two-body factorization, t = diag(1, -2): alpha = 3.
        let f = FactorizedHamiltonian::from_blocks(2, vec![], 0.0);
        let t = OneBodyMatrix::new(2, vec![1.0, 0.0, 0.0, -2.0]).unwrap();
        assert!((compute_alpha(&f, &t).unwrap() - 3.0).abs() < 1e-12);

        // Single block with eigenvalues (2, 2), t = 0: alpha = 16 / 4 = 4.
        let e0 = DVector::from_vec(vec![1.0, 0.0]);
        let e1 = DVector::from_vec(vec![0.0, 1.0]);
        let f = FactorizedHamiltonian::from_blocks(
            2,
            vec![FactorBlock {
                pairs: vec![
                    EigenPair {
                        value: 2.0,
                        vector: e0,
                    },
                    EigenPair {
                        value: 2.0,
                        vector: e1,
                    },
                ],
            }],
            0.0,
        );
        assert!((compute_alpha(&f, &OneBodyMatrix::zero(2)).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_matches_independent_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let gs: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(4, &mut rng)).collect();
        let h = product_tensor(&gs);
        let f = FactorizedHamiltonian::build(&h).unwrap();
        let t = random_symmetric(4, &mut rng);
        let flat: Vec<f64> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| t[(i, j)])
            .collect();
        let one_body = OneBodyMatrix::new(4, flat).unwrap();
        let alpha = compute_alpha(&f, &one_body).unwrap();
        // Oracle path: Jacobi sweeps over the one-body matrix and over each
        // rebuilt block matrix.
        let mut expect = jacobi_abs_eigenvalue_sum(&t);
        for block in f.blocks() {
            let s = jacobi_abs_eigenvalue_sum(&block.matrix(4));
            expect += 0.25 * s * s;
        }
        assert!(
            (alpha - expect).abs() < 1e-8,
            "alpha {alpha} vs oracle {expect}"
        );
    }

    #[test]
    fn untruncated_roundtrip_within_1e8() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [2usize, 4, 6, 8] {
            let gs: Vec<DMatrix<f64>> = (0..3).map(|_| random_symmetric(n, &mut rng)).collect();
            let h = product_tensor(&gs);
            let f = FactorizedHamiltonian::build(&h).unwrap();
            let (max_abs, _) = reconstruction_error(&f, &h).unwrap();
            assert!(max_abs < 1e-8, "n={n}: {max_abs}");
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let h2 = TwoElectronTensor::new(2, vec![0.0; 16]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_symmetric(3, &mut rng);
        let f = FactorizedHamiltonian::build(&product_tensor(&[g])).unwrap();
        assert!(matches!(
            reconstruction_error(&f, &h2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn tensor_file_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let g = random_symmetric(3, &mut rng);
        let h = product_tensor(&[g]);
        let dir = std::env::temp_dir().join("ftre-tensor-io");
        std::fs::create_dir_all(&dir).unwrap();
        let text = dir.join("h.txt");
        let bin = dir.join("h.bin");
        write_tensor_text(&text, &h).unwrap();
        write_tensor_binary(&bin, &h).unwrap();
        let ht = read_tensor(&text).unwrap();
        let hb = read_tensor(&bin).unwrap();
        assert_eq!(ht.n_orbitals(), 3);
        assert_eq!(hb.values(), h.values());
        for (a, b) in ht.values().iter().zip(h.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
