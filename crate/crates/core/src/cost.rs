//! Logical resource model for the double-factorized qubitization walk.
//!
//! The per-walk-step T-count, T-depth and qubit count are assembled from
//! five named components: the rotation-angle data lookup (twice per step),
//! the basis-change rotation network (four times per step), the two alias
//! sampling state preparations (over the first- and second-level ranks),
//! and the select/reflection pair. Every data lookup carries a tunable
//! space-time parameter `lambda`; phase estimation multiplies the per-step
//! cost by `ceil(alpha * pi * P / eps_P)` repetitions.
//!
//! Two optimization strategies are provided: `lambda` per site minimizing
//! the count volume `n_L * n_T`, and a depth strategy that reassigns every
//! site from the largest ancilla block of the count-optimal assignment,
//! trading T-count for T-depth at an unchanged qubit count. The error
//! budget split between qubitization and phase estimation is searched by
//! golden section plus a local grid refinement.

use crate::error::Error;
use crate::Result;

/// `ceil(log2(x))` for positive integers; 0 for `x = 1`.
pub fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    64 - (x.saturating_sub(1)).leading_zeros() as u64
}

/// Molecule parameters driving the cost formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularInstance {
    pub name: String,
    pub basis: String,
    /// Spatial orbital count.
    pub n: u64,
    /// First-level factorization rank.
    pub r: u64,
    /// Total second-level rank.
    pub m: u64,
    /// Hamiltonian norm in Hartree.
    pub alpha: f64,
}

impl MolecularInstance {
    pub fn new(name: &str, basis: &str, n: u64, r: u64, m: u64, alpha: f64) -> Result<Self> {
        if n < 1 || r < 1 || m < 1 {
            return Err(Error::validation(format!(
                "instance {name}/{basis}: N, R, M must be at least 1"
            )));
        }
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::validation(format!(
                "instance {name}/{basis}: alpha must be positive"
            )));
        }
        Ok(MolecularInstance {
            name: name.to_string(),
            basis: basis.to_string(),
            n,
            r,
            m,
            alpha,
        })
    }
}

/// Split of the total error budget between the qubitization approximation
/// and phase estimation.
#[derive(Debug, Clone, Copy)]
pub struct ErrorBudget {
    pub eps_total: f64,
    pub eps_q: f64,
    pub eps_p: f64,
    /// Phase-estimation prefactor `P`.
    pub pe_constant: f64,
}

impl ErrorBudget {
    pub const DEFAULT_PE_CONSTANT: f64 = 0.5;

    pub fn new(eps_total: f64, eps_q: f64, eps_p: f64) -> Result<Self> {
        if !(eps_total > 0.0 && eps_q > 0.0 && eps_p > 0.0) {
            return Err(Error::validation("error budget terms must be positive"));
        }
        if eps_q + eps_p > eps_total * (1.0 + 1e-12) {
            return Err(Error::validation(format!(
                "eps_Q + eps_P = {} exceeds eps_total = {eps_total}",
                eps_q + eps_p
            )));
        }
        Ok(ErrorBudget {
            eps_total,
            eps_q,
            eps_p,
            pe_constant: Self::DEFAULT_PE_CONSTANT,
        })
    }

    /// Budget with `eps_Q = t * eps_total` and the rest in phase estimation.
    pub fn from_fraction(eps_total: f64, t: f64) -> Result<Self> {
        Self::new(eps_total, t * eps_total, (1.0 - t) * eps_total)
    }
}

/// Named model constants. Defaults are frozen against the shipped
/// acceptance bands; every value is overridable.
#[derive(Debug, Clone, Copy)]
pub struct CostConstants {
    /// T-gates per Toffoli in count accounting.
    pub toffoli_t: u64,
    /// Select network T-count per orbital.
    pub c_sel: u64,
    /// Walk-reflection T-count per index bit.
    pub c_ref: u64,
    /// Comparator T-count per keep-probability bit.
    pub c_cmp: u64,
    /// Comparator T-depth per log keep-bit.
    pub c_cmp_depth: u64,
    pub c_sel_depth: u64,
    pub c_ref_depth: u64,
    /// Ancilla multiplier on `ceil(log2(N / eps_Q))`.
    pub c_anc: u64,
    /// Cap on the keep-probability register width.
    pub mu_cap: u64,
}

impl Default for CostConstants {
    fn default() -> Self {
        CostConstants {
            toffoli_t: 4,
            c_sel: 4,
            c_ref: 16,
            c_cmp: 16,
            c_cmp_depth: 4,
            c_sel_depth: 2,
            c_ref_depth: 2,
            c_anc: 3,
            mu_cap: 32,
        }
    }
}

/// Data-lookup T-count: `ceil(K / lambda) + b * (lambda - 1)` (Toffoli
/// units; the caller applies the Toffoli-to-T factor).
pub fn qrom_tcount(k: u64, b: u64, lam: u64) -> u64 {
    debug_assert!(k >= 1 && b >= 1 && lam >= 1);
    k.div_ceil(lam) + b * (lam - 1)
}

/// Data-lookup T-depth: `ceil(K / lambda) + ceil(log2 lambda)`; the output
/// word width drops out of the depth.
pub fn qrom_tdepth(k: u64, lam: u64) -> u64 {
    debug_assert!(k >= 1 && lam >= 1);
    k.div_ceil(lam) + ceil_log2(lam)
}

/// Rotation-angle precision bits: `ceil(5.652 + log2(N * alpha / eps_Q))`.
pub fn beta_bits(n: u64, alpha: f64, eps_q: f64) -> u64 {
    let x = (n as f64) * alpha / eps_q;
    (5.652 + x.log2()).ceil().max(1.0) as u64
}

/// Keep-probability bits for alias sampling: `ceil(log2(alpha / eps_Q))`,
/// capped.
pub fn mu_bits(alpha: f64, eps_q: f64, cap: u64) -> u64 {
    ((alpha / eps_q).log2().ceil().max(1.0) as u64).min(cap)
}

/// Walk-operator repetitions from phase estimation:
/// `ceil(alpha * pi * P / eps_P)`.
pub fn pe_iterations(alpha: f64, eps_p: f64, pe_constant: f64) -> u64 {
    (alpha * std::f64::consts::PI * pe_constant / eps_p).ceil() as u64
}

/// QROM sites carrying an independent `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QromSite {
    Rotation,
    PrepareR,
    PrepareM,
}

/// Strategy used to fix the per-site `lambda` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaStrategy {
    MinCount,
    MinDepthIndependent,
    MinDepthContingent,
}

impl std::fmt::Display for LambdaStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaStrategy::MinCount => write!(f, "min-count"),
            LambdaStrategy::MinDepthIndependent => write!(f, "min-depth-independent"),
            LambdaStrategy::MinDepthContingent => write!(f, "min-depth-contingent"),
        }
    }
}

/// Per-site `lambda` assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaAssignment {
    pub rotation: u64,
    pub prepare_r: u64,
    pub prepare_m: u64,
    pub strategy: LambdaStrategy,
}

impl LambdaAssignment {
    pub fn get(&self, site: QromSite) -> u64 {
        match site {
            QromSite::Rotation => self.rotation,
            QromSite::PrepareR => self.prepare_r,
            QromSite::PrepareM => self.prepare_m,
        }
    }
}

/// Scan window provably containing the count minimizer of one site.
fn lambda_window(k: u64, b: u64) -> u64 {
    let guess = (4.0 * ((k.max(1) as f64) / (b.max(1) as f64)).sqrt()).ceil() as u64;
    (guess + 16).min(k.max(1))
}

/// Exact count minimizer of Eq-17 for one site, smallest `lambda` on ties.
pub fn optimize_qrom_lambda(k: u64, b: u64) -> u64 {
    let hi = lambda_window(k, b);
    let mut best = (u64::MAX, 1u64);
    for lam in 1..=hi {
        let c = qrom_tcount(k, b, lam);
        if c < best.0 {
            best = (c, lam);
        }
    }
    best.1
}

/// Exact depth minimizer over the full `lambda` range, smallest on ties.
pub fn optimize_qrom_lambda_depth(k: u64) -> u64 {
    let mut best = (u64::MAX, 1u64);
    for lam in 1..=k.max(1) {
        let d = qrom_tdepth(k, lam);
        if d < best.0 {
            best = (d, lam);
        }
    }
    best.1
}

/// Derived per-instance register widths shared by the component formulas.
#[derive(Debug, Clone, Copy)]
struct Widths {
    beta: u64,
    mu: u64,
    b_r: u64,
    b_m: u64,
    k_rot: u64,
}

fn widths(inst: &MolecularInstance, budget: &ErrorBudget, consts: &CostConstants) -> Widths {
    let beta = beta_bits(inst.n, inst.alpha, budget.eps_q);
    let mu = mu_bits(inst.alpha, budget.eps_q, consts.mu_cap);
    Widths {
        beta,
        mu,
        b_r: ceil_log2(inst.r) + mu,
        b_m: ceil_log2(inst.m) + mu,
        k_rot: inst.m + inst.n,
    }
}

/// One subroutine's contribution to a walk step.
#[derive(Debug, Clone)]
pub struct Component {
    pub label: &'static str,
    pub t_count: u64,
    pub t_depth: u64,
    pub qubits: u64,
}

/// Per-walk-step logical cost.
#[derive(Debug, Clone)]
pub struct WalkStepCost {
    pub n_t: u64,
    pub d_t: u64,
    pub n_l: u64,
    pub beta: u64,
    pub mu: u64,
    pub components: Vec<Component>,
}

/// Logical qubit count of an assignment: the rotation data block
/// `N*beta*(1 + lambda)`, the system and its double, the alias-sampling
/// blocks, and the log-sized workspace.
fn logical_qubits(
    inst: &MolecularInstance,
    budget: &ErrorBudget,
    lam: &LambdaAssignment,
    consts: &CostConstants,
) -> u64 {
    let w = widths(inst, budget, consts);
    let log_work = ((inst.n as f64 / budget.eps_q).log2().ceil().max(1.0)) as u64;
    inst.n * w.beta * (1 + lam.rotation)
        + 2 * inst.n
        + consts.c_anc * log_work
        + w.b_r * lam.prepare_r
        + w.b_m * lam.prepare_m
}

/// Per-walk-step component model. Counts are T-gates (Toffolis at four T);
/// depths count Toffolis as single layers. The rotation lookup appears
/// twice in the count; its unload pass is measurement-assisted, so the
/// depth carries one full pass plus a logarithmic tail.
pub fn qubitization_cost(
    inst: &MolecularInstance,
    budget: &ErrorBudget,
    lam: &LambdaAssignment,
    consts: &CostConstants,
) -> Result<WalkStepCost> {
    let w = widths(inst, budget, consts);
    for (site, k) in [
        (QromSite::Rotation, w.k_rot),
        (QromSite::PrepareR, inst.r),
        (QromSite::PrepareM, inst.m),
    ] {
        let l = lam.get(site);
        if l < 1 {
            return Err(Error::validation(format!(
                "lambda for {site:?} must be >= 1"
            )));
        }
        if l > k {
            return Err(Error::validation(format!(
                "lambda {l} for {site:?} exceeds its table size {k}"
            )));
        }
    }
    let tgt = consts.toffoli_t;
    let n = inst.n;
    let beta = w.beta;

    let rot_lookup = Component {
        label: "rotation-lookup",
        t_count: 2 * tgt * qrom_tcount(w.k_rot, n * beta, lam.rotation),
        t_depth: qrom_tdepth(w.k_rot, lam.rotation) + ceil_log2(lam.rotation.max(1)) + 1,
        qubits: n * beta * (1 + lam.rotation),
    };
    let rotations = Component {
        label: "rotations",
        t_count: 4 * 2 * (n - 1) * beta,
        t_depth: 4 * 2 * ceil_log2(n) * beta,
        qubits: n + beta,
    };
    let prep = |label: &'static str, k: u64, b: u64, l: u64| {
        let swaps = ceil_log2(k);
        Component {
            label,
            t_count: tgt * qrom_tcount(k, b, l) + consts.c_cmp * w.mu + 4 * swaps,
            t_depth: qrom_tdepth(k, l)
                + consts.c_cmp_depth * ceil_log2(w.mu.max(1))
                + u64::from(swaps > 0),
            qubits: b * l,
        }
    };
    let prep_r = prep("prepare-R", inst.r, w.b_r, lam.prepare_r);
    let prep_m = prep("prepare-M", inst.m, w.b_m, lam.prepare_m);
    let select = Component {
        label: "select-reflect",
        t_count: consts.c_sel * n + consts.c_ref * ceil_log2(w.k_rot),
        t_depth: consts.c_sel_depth * ceil_log2(n) + consts.c_ref_depth * ceil_log2(w.k_rot),
        qubits: 2 * n,
    };

    let components = vec![rot_lookup, rotations, prep_r, prep_m, select];
    let n_t = components.iter().map(|c| c.t_count).sum();
    let d_t = components.iter().map(|c| c.t_depth).sum();
    let n_l = logical_qubits(inst, budget, lam, consts);
    Ok(WalkStepCost {
        n_t,
        d_t,
        n_l,
        beta,
        mu: w.mu,
        components,
    })
}

/// Count-volume strategy: alias-sampling sites take their own count
/// minimizer; the rotation site scans for the exact minimizer of
/// `n_T * n_L`. Ties resolve to the smaller `lambda`.
pub fn optimize_lambda_count(
    inst: &MolecularInstance,
    budget: &ErrorBudget,
    consts: &CostConstants,
) -> LambdaAssignment {
    let w = widths(inst, budget, consts);
    let prepare_r = optimize_qrom_lambda(inst.r, w.b_r);
    let prepare_m = optimize_qrom_lambda(inst.m, w.b_m);
    let hi = lambda_window(w.k_rot, inst.n * w.beta);
    let mut best: (u128, u64) = (u128::MAX, 1);
    for rotation in 1..=hi {
        let lam = LambdaAssignment {
            rotation,
            prepare_r,
            prepare_m,
            strategy: LambdaStrategy::MinCount,
        };
        let step =
            qubitization_cost(inst, budget, &lam, consts).expect("window lambdas are in range");
        let volume = step.n_t as u128 * step.n_l as u128;
        if volume < best.0 {
            best = (volume, rotation);
        }
    }
    LambdaAssignment {
        rotation: best.1,
        prepare_r,
        prepare_m,
        strategy: LambdaStrategy::MinCount,
    }
}

/// Independent depth strategy: every site minimizes its own lookup depth.
pub fn optimize_lambda_depth_independent(
    inst: &MolecularInstance,
    budget: &ErrorBudget,
    consts: &CostConstants,
) -> LambdaAssignment {
    let w = widths(inst, budget, consts);
    LambdaAssignment {
        rotation: optimize_qrom_lambda_depth(w.k_rot),
        prepare_r: optimize_qrom_lambda_depth(inst.r),
        prepare_m: optimize_qrom_lambda_depth(inst.m),
        strategy: LambdaStrategy::MinDepthIndependent,
    }
}

/// Contingent depth strategy: the site whose count-minimal `lambda` claims
/// the largest ancilla block keeps that `lambda` and fixes the borrowable
/// budget (its copies plus the output word); every other site then takes
/// `floor(budget / word)` copies. Counts rise, depths fall, and the
/// count-assignment qubit allocation is reused unchanged.
pub fn optimize_lambda_depth_contingent(
    inst: &MolecularInstance,
    budget: &ErrorBudget,
    consts: &CostConstants,
) -> LambdaAssignment {
    let w = widths(inst, budget, consts);
    let sites = [(w.k_rot, inst.n * w.beta), (inst.r, w.b_r), (inst.m, w.b_m)];
    let mc: Vec<u64> = sites
        .iter()
        .map(|&(k, b)| optimize_qrom_lambda(k, b))
        .collect();
    let mut q_max = 0u64;
    let mut max_site = 0usize;
    for (i, &(_, b)) in sites.iter().enumerate() {
        let block = (mc[i] + 1) * b;
        if block > q_max {
            q_max = block;
            max_site = i;
        }
    }
    let lams: Vec<u64> = sites
        .iter()
        .enumerate()
        .map(|(i, &(k, b))| {
            if i == max_site {
                mc[i]
            } else {
                (q_max / b).clamp(1, k)
            }
        })
        .collect();
    LambdaAssignment {
        rotation: lams[0],
        prepare_r: lams[1],
        prepare_m: lams[2],
        strategy: LambdaStrategy::MinDepthContingent,
    }
}

/// Optimization objective: count volume or depth volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Vn,
    Vd,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Vn => write!(f, "vn"),
            Objective::Vd => write!(f, "vd"),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vn" => Ok(Objective::Vn),
            "vd" => Ok(Objective::Vd),
            other => Err(Error::validation(format!("unknown objective {other:?}"))),
        }
    }
}

/// Full algorithm cost for one instance.
#[derive(Debug, Clone)]
pub struct CostReport {
    pub instance: MolecularInstance,
    pub objective: Objective,
    pub eps_q: f64,
    pub eps_p: f64,
    pub beta: u64,
    pub mu: u64,
    pub lambda: LambdaAssignment,
    pub pe_iterations: u64,
    pub n_t: u64,
    pub d_t: u64,
    pub n_l: u64,
    /// Per-walk-step components (occurrence multiplicities already folded).
    pub components: Vec<Component>,
}

impl CostReport {
    pub fn v_n(&self) -> u128 {
        self.n_t as u128 * self.n_l as u128
    }

    pub fn v_d(&self) -> u128 {
        self.d_t as u128 * self.n_l as u128
    }

    pub fn count_depth_ratio(&self) -> f64 {
        self.n_t as f64 / self.d_t as f64
    }

    pub const CSV_HEADER: &'static str =
        "name,basis,N,R,M,alpha,objective,eps_Q,eps_P,beta,lambda_rot,n_T,D_T,n_L,V_n,V_D";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:e},{:e},{},{},{},{},{},{},{}",
            self.instance.name,
            self.instance.basis,
            self.instance.n,
            self.instance.r,
            self.instance.m,
            self.instance.alpha,
            self.objective,
            self.eps_q,
            self.eps_p,
            self.beta,
            self.lambda.rotation,
            self.n_t,
            self.d_t,
            self.n_l,
            self.v_n(),
            self.v_d()
        )
    }
}

/// Per-subroutine share of the count volume; multiplicities are already in
/// the component counts, so shares add to 100.
pub fn volume_breakdown(report: &CostReport) -> Vec<(&'static str, f64)> {
    let total: u64 = report.components.iter().map(|c| c.t_count).sum();
    if total == 0 {
        return report.components.iter().map(|c| (c.label, 0.0)).collect();
    }
    report
        .components
        .iter()
        .map(|c| (c.label, 100.0 * c.t_count as f64 / total as f64))
        .collect()
}

struct SplitEval {
    value: u128,
    budget: ErrorBudget,
    lambda: LambdaAssignment,
    step: WalkStepCost,
    pe: u64,
}

fn evaluate_split(
    inst: &MolecularInstance,
    eps_total: f64,
    t: f64,
    objective: Objective,
    consts: &CostConstants,
) -> Result<SplitEval> {
    let budget = ErrorBudget::from_fraction(eps_total, t)?;
    let mincount = optimize_lambda_count(inst, &budget, consts);
    let (lambda, step) = match objective {
        Objective::Vn => {
            let step = qubitization_cost(inst, &budget, &mincount, consts)?;
            (mincount, step)
        }
        Objective::Vd => {
            let contingent = optimize_lambda_depth_contingent(inst, &budget, consts);
            let mut step = qubitization_cost(inst, &budget, &contingent, consts)?;
            // Depth assignment borrows inside the count-optimal allocation.
            step.n_l = logical_qubits(inst, &budget, &mincount, consts);
            (contingent, step)
        }
    };
    let pe = pe_iterations(inst.alpha, budget.eps_p, budget.pe_constant);
    let value = match objective {
        Objective::Vn => step.n_t as u128 * pe as u128 * step.n_l as u128,
        Objective::Vd => step.d_t as u128 * pe as u128 * step.n_l as u128,
    };
    Ok(SplitEval {
        value,
        budget,
        lambda,

        step,
        pe,
    })
}

const SPLIT_LO: f64 = 0.01;
const SPLIT_HI: f64 = 0.99;

/// Golden-section search over the budget fraction, then a local grid.
fn optimal_split(
    inst: &MolecularInstance,
    eps_total: f64,
    objective: Objective,
    consts: &CostConstants,
    trace: Option<&mut Vec<(f64, u128)>>,
) -> Result<f64> {
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut lo = SPLIT_LO;
    let mut hi = SPLIT_HI;
    let mut trace_acc: Vec<(f64, u128)> = Vec::new();
    let mut best: (u128, f64) = (u128::MAX, SPLIT_LO);
    let mut eval = |t: f64, best: &mut (u128, f64)| -> Result<u128> {
        let v = evaluate_split(inst, eps_total, t, objective, consts)?.value;
        trace_acc.push((t, v));
        if v < best.0 || (v == best.0 && t < best.1) {
            *best = (v, t);
        }
        Ok(v)
    };
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = eval(a, &mut best)?;
    let mut fb = eval(b, &mut best)?;
    while (hi - lo) > 1e-3 * hi {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = eval(a, &mut best)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = eval(b, &mut best)?;
        }
    }
    // Local grid around the best point seen anywhere in the search; the
    // discrete register widths make the objective piecewise, so the
    // bracketing alone is not trusted.
    let center = best.1;
    let mut i = -20i32;
    while i <= 20 {
        let t = (center + i as f64 * 1e-3).clamp(5e-3, 0.995);
        eval(t, &mut best)?;
        i += 1;
    }
    if let Some(tr) = trace {
        *tr = trace_acc;
    }
    Ok(best.1)
}

/// Minimizes the chosen volume over the error split and the matching
/// `lambda` strategy, then expands into the full report. The depth
/// objective reuses the count-optimal split so both objectives report the
/// same qubit count.
pub fn total_cost(
    inst: &MolecularInstance,
    eps_total: f64,
    objective: Objective,
    consts: &CostConstants,
) -> Result<CostReport> {
    total_cost_traced(inst, eps_total, objective, consts, None)
}

/// [`total_cost`] with an optional record of every `(split, volume)` pair
/// the search evaluated.
pub fn total_cost_traced(
    inst: &MolecularInstance,
    eps_total: f64,
    objective: Objective,
    consts: &CostConstants,
    trace: Option<&mut Vec<(f64, u128)>>,
) -> Result<CostReport> {
    if eps_total.is_nan() || eps_total <= 0.0 {
        return Err(Error::validation("eps_total must be positive"));
    }
    // Both objectives share the count-optimal split; the depth strategy
    // only reassigns lambdas inside the same allocation.
    let t = optimal_split(inst, eps_total, Objective::Vn, consts, trace)?;
    let eval = evaluate_split(inst, eps_total, t, objective, consts)?;
    let pe = eval.pe;
    let scale = |c: &Component| Component {
        label: c.label,
        t_count: c.t_count,
        t_depth: c.t_depth,
        qubits: c.qubits,
    };
    Ok(CostReport {
        instance: inst.clone(),
        objective,
        eps_q: eval.budget.eps_q,
        eps_p: eval.budget.eps_p,
        beta: eval.step.beta,
        mu: eval.step.mu,
        lambda: eval.lambda,
        pe_iterations: pe,
        n_t: eval.step.n_t * pe,
        d_t: eval.step.d_t * pe,
        n_l: eval.step.n_l,
        components: eval.step.components.iter().map(scale).collect(),
    })
}

/// Convenience: the qubit-count assignment backing a report's allocation.
pub fn qubit_assignment(report: &CostReport) -> LambdaAssignment {
    report.lambda
}
