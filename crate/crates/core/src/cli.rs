//! Batch front-end: molecule ingestion, estimate and overhead pipelines,
//! verification suites, and CSV / table / plot-data emission.

use std::path::Path;

use rayon::prelude::*;

use crate::cost::{self, CostConstants, CostReport, MolecularInstance, Objective};
use crate::error::Error;
use crate::factorize;
use crate::gizens;
use crate::overhead::{self, FtParams, FtReport, NoiseRegime};
use crate::pauli::{PauliKind, PauliString};
use crate::ppm;
use crate::sim::DenseState;
use crate::Result;

/// Parsed molecule parameter table.
#[derive(Debug, Clone)]
pub struct MoleculeTable {
    pub rows: Vec<MolecularInstance>,
    /// Free-form per-row note (SCF caveats and the like).
    pub notes: Vec<String>,
    pub provenance: String,
}

/// Parses `name,basis,N,R,M,alpha[,note]` rows, rejecting duplicates and
/// non-positive parameters. An empty file yields an empty table.
pub fn ingest(path: &Path) -> Result<MoleculeTable> {
    let content = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (ln, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if ln == 0 && line.starts_with("name,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 6 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected at least 6 fields, got {}", fields.len()),
            });
        }
        let parse_u = |s: &str, what: &str| -> Result<u64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad {what}: {s:?}"),
            })
        };
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad {what}: {s:?}"),
            })
        };
        let name = fields[0].trim();
        let basis = fields[1].trim();
        let inst = MolecularInstance::new(
            name,
            basis,
            parse_u(fields[2], "N")?,
            parse_u(fields[3], "R")?,
            parse_u(fields[4], "M")?,
            parse_f(fields[5], "alpha")?,
        )
        .map_err(|e| Error::Parse {
            line: ln + 1,
            msg: e.to_string(),
        })?;
        if !seen.insert((name.to_string(), basis.to_string())) {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("duplicate key {name}/{basis}"),
            });
        }
        notes.push(
            fields
                .get(6)
                .map(|s| s.trim().to_string())
                .unwrap_or_default(),
        );
        rows.push(inst);
    }
    Ok(MoleculeTable {
        rows,
        notes,
        provenance: path.display().to_string(),
    })
}

/// Shipped logical counts keyed by `(name, basis)`.
#[derive(Debug, Clone)]
pub struct CountsTable {
    pub rows: Vec<CountRow>,
}

#[derive(Debug, Clone)]
pub struct CountRow {
    pub name: String,
    pub basis: String,
    pub n_l: u64,
    pub n_t: u64,
}

/// Parses `name,basis,n_L,n_T` rows (`n_T` may be in scientific notation).
pub fn ingest_counts(path: &Path) -> Result<CountsTable> {
    let content = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (ln, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || (ln == 0 && line.starts_with("name,")) {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: "expected name,basis,n_L,n_T".to_string(),
            });
        }
        let n_l: u64 = f[2].trim().parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("bad n_L {:?}", f[2]),
        })?;
        let n_t_f: f64 = f[3].trim().parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("bad n_T {:?}", f[3]),
        })?;
        rows.push(CountRow {
            name: f[0].trim().to_string(),
            basis: f[1].trim().to_string(),
            n_l,
            n_t: n_t_f.round() as u64,
        });
    }
    Ok(CountsTable { rows })
}

// ---------------------------------------------------------------------------
// Estimate pipeline

/// Runs the cost model over every instance; instance-level parallel with
/// input-ordered output.
pub fn run_estimate(
    table: &MoleculeTable,
    objective: Objective,
    eps_total: f64,
    consts: &CostConstants,
) -> Result<Vec<CostReport>> {
    table
        .rows
        .par_iter()
        .map(|inst| cost::total_cost(inst, eps_total, objective, consts))
        .collect()
}

pub fn estimate_csv(reports: &[CostReport]) -> String {
    let mut out = String::from(CostReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Parsed estimate row: `(name, basis, n_T, D_T, n_L)`.
pub type EstimateRow = (String, String, u64, u64, u64);

/// Re-parses an emitted estimate CSV (round-trip support).
pub fn parse_estimate_csv(text: &str) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if ln == 0 {
            if line != CostReport::CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    msg: "unexpected estimate header".to_string(),
                });
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 16 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected 16 fields, got {}", f.len()),
            });
        }
        let g = |i: usize| -> Result<u64> {
            f[i].parse().map_err(|_| Error::Parse {
                line: ln + 1,
                msg: format!("bad integer {:?}", f[i]),
            })
        };
        rows.push((f[0].to_string(), f[1].to_string(), g(11)?, g(12)?, g(13)?));
    }
    Ok(rows)
}

/// Aligned text table with the count/depth ratio column.
pub fn estimate_table(reports: &[CostReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:<8} {:>4} {:>5} {:>7} {:>8} | {:>6} {:>4} {:>12} {:>12} {:>8} {:>8}\n",
        "name", "basis", "N", "R", "M", "alpha", "beta", "lam", "n_T", "D_T", "n_L", "nT/DT"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<8} {:<8} {:>4} {:>5} {:>7} {:>8} | {:>6} {:>4} {:>12.3e} {:>12.3e} {:>8} {:>8.2}\n",
            r.instance.name,
            r.instance.basis,
            r.instance.n,
            r.instance.r,
            r.instance.m,
            r.instance.alpha,
            r.beta,
            r.lambda.rotation,
            r.n_t as f64,
            r.d_t as f64,
            r.n_l,
            r.count_depth_ratio()
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Overhead pipeline

/// Where the logical counts come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountsSource {
    /// Shipped logical-count table.
    Table,
    /// Fresh run of the cost model.
    Model,
}

impl std::str::FromStr for CountsSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(CountsSource::Table),
            "model" => Ok(CountsSource::Model),
            other => Err(Error::validation(format!(
                "unknown counts source {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OverheadRow {
    pub name: String,
    pub basis: String,
    pub report: FtReport,
}

/// Converts each `(n_T, n_L)` row under each regime and interleave ratio.
pub fn run_overhead(
    counts: &[CountRow],
    regimes: &[NoiseRegime],
    params: &FtParams,
    interleaves: &[u64],
) -> Result<Vec<OverheadRow>> {
    let mut out = Vec::new();
    for row in counts {
        for regime in regimes {
            for &l in interleaves {
                let p = FtParams {
                    l_intl: l,
                    ..*params
                };
                let report = overhead::ft_report(row.n_t, row.n_l, regime, &p)?;
                out.push(OverheadRow {
                    name: row.name.clone(),
                    basis: row.basis.clone(),
                    report,
                });
            }
        }
    }
    Ok(out)
}

pub const OVERHEAD_CSV_HEADER: &str =
    "name,basis,regime,A,B,eps_total,d,n_L,n_T,L_intl,n_distill,n_RSG,n_cycles,t_algo_hours,msd_ratio";

pub fn overhead_csv(rows: &[OverheadRow], params: &FtParams) -> String {
    let mut out = String::from(OVERHEAD_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let rep = &r.report;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{:.2e},{:.4e}\n",
            r.name,
            r.basis,
            rep.regime.label,
            rep.regime.a,
            rep.regime.b,
            params.eps_total,
            rep.d,
            rep.n_l,
            rep.n_t,
            rep.l_intl,
            rep.n_distill,
            rep.n_rsg,
            rep.n_cycles,
            rep.t_algo_hours(),
            rep.msd_ratio
        ));
    }
    out
}

/// Parsed overhead row: `(name, basis, regime, d, n_RSG, t_hours)`.
pub type OverheadCsvRow = (String, String, String, u64, u64, f64);

/// Re-parses an emitted overhead CSV (round-trip support).
pub fn parse_overhead_csv(text: &str) -> Result<Vec<OverheadCsvRow>> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if ln == 0 {
            if line != OVERHEAD_CSV_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    msg: "unexpected overhead header".to_string(),
                });
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 15 {
            return Err(Error::Parse {
                line: ln + 1,
                msg: format!("expected 15 fields, got {}", f.len()),
            });
        }
        let d: u64 = f[6].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: "bad d".to_string(),
        })?;
        let n_rsg: u64 = f[11].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: "bad n_RSG".to_string(),
        })?;
        let hours: f64 = f[13].parse().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: "bad hours".to_string(),
        })?;
        rows.push((
            f[0].to_string(),
            f[1].to_string(),
            f[2].to_string(),
            d,
            n_rsg,
            hours,
        ));
    }
    Ok(rows)
}

pub fn overhead_table(rows: &[OverheadRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<8} {:<8} {:<9} {:>3} {:>5} | {:>10} {:>10} {:>10} {:>8}\n",
        "name", "basis", "regime", "d", "L", "n_RSG", "t[h]", "n_distill", "msd"
    ));
    for r in rows {
        let rep = &r.report;
        out.push_str(&format!(
            "{:<8} {:<8} {:<9} {:>3} {:>5} | {:>10.3e} {:>10.3e} {:>10} {:>8.4}\n",
            r.name,
            r.basis,
            rep.regime.label,
            rep.d,
            rep.l_intl,
            rep.n_rsg as f64,
            rep.t_algo_hours(),
            rep.n_distill,
            rep.msd_ratio
        ));
    }
    out
}

/// Plot-ready `(L, n_RSG, t_hours)` triples, one line per sample.
pub fn plot_data(rows: &[OverheadRow]) -> String {
    let mut out = String::from("name,basis,regime,L_intl,n_RSG,t_algo_hours\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6e}\n",
            r.name,
            r.basis,
            r.report.regime.label,
            r.report.l_intl,
            r.report.n_rsg,
            r.report.t_algo_hours()
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Verification suites

#[derive(Debug)]
pub struct VerifyLine {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct VerifyReport {
    pub lines: Vec<VerifyLine>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&format!(
                "[{}] {}: {}\n",
                if l.passed { "pass" } else { "FAIL" },
                l.check,
                l.detail
            ));
        }
        out
    }
}

fn verify_gizens(seed: u64) -> Vec<VerifyLine> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    for n in [2usize, 4, 8] {
        let mut max_residual = 0.0f64;
        let mut structure_ok = true;
        for _ in 0..100 {
            let mut v: Vec<f64>;
            loop {
                v = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                if v.iter().map(|x| x * x).sum::<f64>() > 1e-3 {
                    break;
                }
            }
            let u = gizens::MajoranaVector::normalized(v).unwrap();
            let tree = gizens::gizens_tree(&u);
            let ladder = gizens::givens_ladder(&u);
            structure_ok &= tree.rotation_count() == n - 1
                && ladder.rotation_count() == n - 1
                && tree.depth() == (n as f64).log2().ceil() as usize
                && tree.layers_disjoint();
            let vt = gizens::verify_basis_change(&tree, &u).unwrap();
            let vl = gizens::verify_basis_change(&ladder, &u).unwrap();
            let agree = gizens::circuits_agree_on_gamma0(&tree, &ladder).unwrap();
            max_residual = max_residual.max(vt.residual).max(vl.residual).max(agree);
        }
        lines.push(VerifyLine {
            check: format!("gizens basis change (N={n}, 100 vectors)"),
            passed: max_residual <= gizens::VERIFY_TOL && structure_ok,
            detail: format!("max residual {max_residual:.3e}"),
        });
    }
    lines
}

fn verify_ppm(seed: u64) -> Vec<VerifyLine> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();

    // Measurement-circuit equivalence over every 3-qubit Pauli.
    let mut worst_prob = 0.0f64;
    let mut worst_fid = 1.0f64;
    let mut worst_y = 1.0f64;
    for code in 1..64usize {
        let kinds: Vec<PauliKind> = (0..3)
            .map(|q| match (code >> (2 * q)) & 3 {
                0 => PauliKind::I,
                1 => PauliKind::X,
                2 => PauliKind::Y,
                _ => PauliKind::Z,
            })
            .collect();
        let p = PauliString::from_kinds(&kinds);
        if p.is_identity() {
            continue;
        }
        let with = ppm::ppm_circuit(&p).unwrap();
        let without = ppm::ppm_circuit_no_phase(&p).unwrap();
        for _ in 0..8 {
            let amps: Vec<num_complex::Complex64> = (0..8)
                .map(|_| {
                    num_complex::Complex64::new(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    )
                })
                .collect();
            let mut data = DenseState::from_amplitudes(amps).unwrap();
            data.normalize();
            let direct = data.prob_plus(&p);
            let a = ppm::run_ppm_circuit(&with, &data, &mut rng).unwrap();
            let b = ppm::run_ppm_circuit(&without, &data, &mut rng).unwrap();
            worst_prob = worst_prob
                .max((a.prob_plus - direct).abs())
                .max((b.prob_plus - direct).abs());
            worst_y = worst_y.min(b.y_register_fidelity.unwrap_or(1.0));
            // Post state against the direct projection for the same outcome.
            let mut proj = data.clone();
            let mut rot = data.clone();
            rot.apply_pauli(&p);
            let sign = a.outcome as f64;
            let projected: Vec<num_complex::Complex64> = proj
                .amplitudes()
                .iter()
                .zip(rot.amplitudes())
                .map(|(x, y)| (x + sign * y) / 2.0)
                .collect();
            proj = DenseState::from_amplitudes(projected).unwrap();
            proj.normalize();
            worst_fid = worst_fid.min(a.post_data.fidelity(&proj));
        }
    }
    lines.push(VerifyLine {
        check: "measurement circuits vs projective reference (63 Paulis)".to_string(),
        passed: worst_prob < 1e-10 && worst_fid > 1.0 - 1e-10 && worst_y > 1.0 - 1e-10,
        detail: format!(
            "max |dp| {worst_prob:.3e}, min fidelity {worst_fid:.12}, min Y fidelity {worst_y:.12}"
        ),
    });

    // Frame soundness against dense conjugation.
    let mut frame_ok = true;
    for _ in 0..200 {
        let n = rng.random_range(1..=4);
        let mut frame = ppm::CliffordFrame::identity(n);
        for _ in 0..rng.random_range(0..5) {
            let k = rng.random_range(1..4) as u8;
            let p = random_pauli(n, &mut rng);
            frame.update(k, &p).unwrap();
        }
        frame_ok &= frame.is_symplectic();
    }
    lines.push(VerifyLine {
        check: "clifford frame symplectic closure (200 random updates)".to_string(),
        passed: frame_ok,
        detail: if frame_ok {
            "all valid".into()
        } else {
            "violation".into()
        },
    });

    // Compiled-stream distribution vs direct simulation.
    let n = 3;
    let mut prog = Vec::new();
    for _ in 0..4 {
        prog.push(ppm::Instruction::PprT(random_pauli(n, &mut rng)));
        prog.push(ppm::Instruction::Clifford {
            k: rng.random_range(1..4) as u8,
            pauli: random_pauli(n, &mut rng),
        });
    }
    for q in 0..n {
        prog.push(ppm::Instruction::Ppm(PauliString::single_z(n, q)));
    }
    let stream = ppm::compile(&prog, n).unwrap();
    let shots = 500;
    let mut cc = vec![0usize; 1 << n];
    let mut dc = vec![0usize; 1 << n];
    for shot in 0..shots {
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (0x10_0000 + shot));
        let exec = ppm::execute(&stream, None, &mut r1).unwrap();
        let mut key = 0usize;
        for ev in exec.record.iter().filter(|e| e.source.is_some()) {
            key = (key << 1) | usize::from(ev.outcome == -1);
        }
        cc[key] += 1;
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (0x20_0000 + shot));
        let (outs, _) = ppm::direct_execute(&prog, n, None, &mut r2).unwrap();
        let mut key = 0usize;
        for (_, o) in outs {
            key = (key << 1) | usize::from(o == -1);
        }
        dc[key] += 1;
    }
    let tvd: f64 = cc
        .iter()
        .zip(&dc)
        .map(|(a, b)| (*a as f64 - *b as f64).abs())
        .sum::<f64>()
        / (2.0 * shots as f64);
    lines.push(VerifyLine {
        check: format!("compiled stream vs direct execution ({shots} shots)"),
        passed: tvd < 0.15,
        detail: format!("total variation distance {tvd:.4}"),
    });
    lines
}

fn random_pauli(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> PauliString {
    use rand::Rng;
    loop {
        let kinds: Vec<PauliKind> = (0..n)
            .map(|_| match rng.random_range(0..4) {
                0 => PauliKind::I,
                1 => PauliKind::X,
                2 => PauliKind::Y,
                _ => PauliKind::Z,
            })
            .collect();
        let p = PauliString::from_kinds(&kinds);
        if !p.is_identity() {
            return p;
        }
    }
}

fn verify_factorizer(seed: u64) -> Vec<VerifyLine> {
    use nalgebra::DMatrix;
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();

    // Zero tensor: trivially exact.
    let zero = factorize::TwoElectronTensor::new(2, vec![0.0; 16]).unwrap();
    let f = factorize::FactorizedHamiltonian::build(&zero).unwrap();
    let (zmax, _) = factorize::reconstruction_error(&f, &zero).unwrap();
    lines.push(VerifyLine {
        check: "factorizer zero tensor".to_string(),
        passed: zmax == 0.0,
        detail: format!("max abs {zmax}"),
    });

    let mut worst_round = 0.0f64;
    let mut bound_ok = true;
    for _ in 0..10 {
        let n = rng.random_range(2..=6);
        let gs: Vec<DMatrix<f64>> = (0..3)
            .map(|_| {
                let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0f64));
                (&m + m.transpose()) * 0.5
            })
            .collect();
        let mut values = vec![0.0; n * n * n * n];
        for g in &gs {
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
        let h = factorize::TwoElectronTensor::new(n, values).unwrap();
        let f = factorize::FactorizedHamiltonian::build(&h).unwrap();
        let (max_abs, _) = factorize::reconstruction_error(&f, &h).unwrap();
        worst_round = worst_round.max(max_abs);
        for eps in [1e-4, 1e-2, 1.0] {
            let t = factorize::truncate(&f, eps).unwrap();
            let (_, fro) = factorize::reconstruction_error(&t, &h).unwrap();
            bound_ok &= t.truncation_error_bound() <= eps + 1e-12
                && fro <= t.truncation_error_bound() + 1e-9;
        }
    }
    lines.push(VerifyLine {
        check: "factorizer round trip (10 random tensors)".to_string(),
        passed: worst_round < 1e-8,
        detail: format!("max abs reconstruction error {worst_round:.3e}"),
    });
    lines.push(VerifyLine {
        check: "factorizer truncation bound dominance".to_string(),
        passed: bound_ok,
        detail: if bound_ok {
            "error <= bound <= budget everywhere".into()
        } else {
            "violation".into()
        },
    });
    lines
}

/// Which verification suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gizens,
    Ppm,
    Factorizer,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gizens" => Ok(Suite::Gizens),
            "ppm" => Ok(Suite::Ppm),
            "factorizer" => Ok(Suite::Factorizer),
            "all" => Ok(Suite::All),
            other => Err(Error::validation(format!("unknown suite {other:?}"))),
        }
    }
}

/// Runs the oracle-backed desk checks; every line carries its residuals.
pub fn run_verify(suite: Suite, seed: u64) -> VerifyReport {
    let mut lines = Vec::new();
    if matches!(suite, Suite::Gizens | Suite::All) {
        lines.extend(verify_gizens(seed));
    }
    if matches!(suite, Suite::Ppm | Suite::All) {
        lines.extend(verify_ppm(seed));
    }
    if matches!(suite, Suite::Factorizer | Suite::All) {
        lines.extend(verify_factorizer(seed));
    }
    VerifyReport { lines }
}
