//! Fault-tolerant footprint and runtime model.
//!
//! Logical counts convert to physical resources through the sub-threshold
//! scaling `eps_gate = A * exp(-B * d)`: the per-gate budget fixes the code
//! distance, each logical qubit costs `2 d^2` resource-state generators per
//! lattice-surgery operation, magic-state distillation adds a `d^2`-sized
//! block, and the algorithm runs for `n_T * d` clock cycles. Interleaving
//! divides the footprint and multiplies the runtime by the same factor.

use crate::error::Error;
use crate::Result;

/// Sub-threshold scaling regime.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRegime {
    pub label: String,
    /// Scaling prefactor.
    pub a: f64,
    /// Per-distance decay.
    pub b: f64,
    /// Fusion Pauli error rate (informational).
    pub p_pauli: f64,
    /// Fusion erasure rate (informational).
    pub p_erasure: f64,
    /// Logical Pauli rate of raw injected magic states.
    pub magic_input_error: f64,
}

impl NoiseRegime {
    /// High physical error rate: `0.2 x` of threshold.
    pub fn high() -> Self {
        NoiseRegime {
            label: "high".to_string(),
            a: 0.4,
            b: 1.1,
            p_pauli: 9.4e-4,
            p_erasure: 9.4e-3,
            magic_input_error: 1e-3,
        }
    }

    /// Moderate physical error rate: `0.1 x` of threshold.
    pub fn moderate() -> Self {
        NoiseRegime {
            label: "moderate".to_string(),
            a: 0.5,
            b: 1.6,
            p_pauli: 4.7e-4,
            p_erasure: 4.7e-3,
            magic_input_error: 1e-3,
        }
    }

    pub fn custom(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::validation("scaling parameters must be positive"));
        }
        Ok(NoiseRegime {
            label: "custom".to_string(),
            a,
            b,
            p_pauli: 0.0,
            p_erasure: 0.0,
            magic_input_error: 1e-3,
        })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "high" => Ok(Self::high()),
            "moderate" => Ok(Self::moderate()),
            other => Err(Error::validation(format!("unknown regime {other:?}"))),
        }
    }
}

/// Architecture parameters. `c_distill` counts RSGs per factory in units of
/// `d^2`; two factories totalling `78 d^2` cover one magic state per logical
/// cycle while keeping the distillation share of the footprint inside the
/// documented bands.
#[derive(Debug, Clone, Copy)]
pub struct FtParams {
    pub eps_total: f64,
    /// Resource-state generator clock in Hz.
    pub f_rsg: f64,
    pub l_intl: u64,
    pub n_factories: u64,
    pub c_distill: u64,
}

/// Interleaving ratios beyond this draw a warning.
pub const MAX_PRACTICAL_INTERLEAVE: u64 = 5000;

impl Default for FtParams {
    fn default() -> Self {
        FtParams {
            eps_total: 1e-2,
            f_rsg: 1e9,
            l_intl: 1,
            n_factories: 2,
            c_distill: 39,
        }
    }
}

impl FtParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_total > 0.0 && self.f_rsg > 0.0) {
            return Err(Error::validation("eps_total and f_RSG must be positive"));
        }
        if self.l_intl == 0 || self.n_factories == 0 || self.c_distill == 0 {
            return Err(Error::validation(
                "interleave ratio and factory parameters must be positive",
            ));
        }
        Ok(())
    }

    pub fn interleave_warning(&self) -> bool {
        self.l_intl > MAX_PRACTICAL_INTERLEAVE
    }
}

/// Tolerable error per lattice-surgery operation:
/// `eps_total / (n_T * n_L)`.
pub fn gate_budget(eps_total: f64, n_t: u64, n_l: u64) -> f64 {
    eps_total / (n_t as f64 * n_l as f64)
}

/// Code distance meeting the gate budget: `ceil(ln(A / eps_gate) / B)`,
/// at least 1. The flag reports a budget so loose that distance 1 already
/// suffices.
pub fn code_distance(regime: &NoiseRegime, eps_gate: f64) -> (u64, bool) {
    if eps_gate >= regime.a {
        return (1, true);
    }
    let d = ((regime.a / eps_gate).ln() / regime.b).ceil() as u64;
    (d.max(1), false)
}

/// Total distillation block: `n_factories * c_distill * d^2`.
pub fn distillation_footprint(d: u64, params: &FtParams) -> u64 {
    params.n_factories * params.c_distill * d * d
}

/// Interleaved footprint: `ceil((2 d^2 n_L + n_distill) / L)`.
pub fn footprint(n_l: u64, d: u64, n_distill: u64, l_intl: u64) -> u64 {
    (2 * d * d * n_l + n_distill).div_ceil(l_intl)
}

/// Clock cycles and wall time: `n_T * d * L` cycles at `f_RSG`.
pub fn runtime(n_t: u64, d: u64, f_rsg: f64, l_intl: u64) -> (u128, f64) {
    let cycles = n_t as u128 * d as u128 * l_intl as u128;
    (cycles, cycles as f64 / f_rsg)
}

/// RSGs that keep one idling logical qubit alive.
pub fn idle_qubit_footprint(d: u64) -> u64 {
    d * d
}

/// Full conversion of one `(n_T, n_L)` pair.
#[derive(Debug, Clone)]
pub struct FtReport {
    pub regime: NoiseRegime,
    pub d: u64,
    /// Distance-1 flag: the gate budget exceeded the scaling prefactor.
    pub unprotected: bool,
    pub eps_gate: f64,
    pub n_l: u64,
    pub n_t: u64,
    pub l_intl: u64,
    pub n_distill: u64,
    pub n_rsg: u64,
    pub n_cycles: u128,
    pub t_algo_seconds: f64,
    /// Distillation share of the non-interleaved footprint.
    pub msd_ratio: f64,
}

impl FtReport {
    pub fn t_algo_hours(&self) -> f64 {
        self.t_algo_seconds / 3600.0
    }
}

/// Converts logical counts under a regime and parameter set.
pub fn ft_report(n_t: u64, n_l: u64, regime: &NoiseRegime, params: &FtParams) -> Result<FtReport> {
    params.validate()?;
    if n_t == 0 || n_l == 0 {
        return Err(Error::validation("logical counts must be positive"));
    }
    let eps_gate = gate_budget(params.eps_total, n_t, n_l);
    let (d, unprotected) = code_distance(regime, eps_gate);
    let n_distill = distillation_footprint(d, params);
    let n_rsg = footprint(n_l, d, n_distill, params.l_intl);
    let (n_cycles, t_algo_seconds) = runtime(n_t, d, params.f_rsg, params.l_intl);
    let base = 2 * d * d * n_l + n_distill;
    Ok(FtReport {
        regime: regime.clone(),
        d,
        unprotected,
        eps_gate,
        n_l,
        n_t,
        l_intl: params.l_intl,
        n_distill,
        n_rsg,
        n_cycles,
        t_algo_seconds,
        msd_ratio: n_distill as f64 / base as f64,
    })
}

/// Footprint/runtime samples along a range of interleaving ratios.
pub fn tradeoff_curve(
    n_t: u64,
    n_l: u64,
    regime: &NoiseRegime,
    params: &FtParams,
    ratios: &[u64],
) -> Result<Vec<(u64, u64, f64)>> {
    let mut out = Vec::with_capacity(ratios.len());
    for &l in ratios {
        let p = FtParams {
            l_intl: l,
            ..*params
        };
        let rep = ft_report(n_t, n_l, regime, &p)?;
        out.push((l, rep.n_rsg, rep.t_algo_seconds));
    }
    Ok(out)
}

/// Geometric ladder of interleave ratios `lo..hi` with `steps` points.
pub fn interleave_ladder(lo: u64, hi: u64, steps: usize) -> Vec<u64> {
    if steps <= 1 || lo >= hi {
        return vec![lo.max(1)];
    }
    let (flo, fhi) = (lo.max(1) as f64, hi as f64);
    let mut out: Vec<u64> = (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            (flo * (fhi / flo).powf(t)).round() as u64
        })
        .collect();
    out.dedup();
    out
}
