//! CPU-time bookkeeping for redundancy elimination and waveform tuning.
//!
//! Both tasks run one after the other on a single CPU at a fixed frequency.
//! Bit counts are integers so that residual and eliminated bits always sum
//! back to the packet size.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComputeParams {
    #[serde(rename = "cpu_frequency_Hz")]
    pub cpu_frequency_hz: f64,
    /// Effective switched capacitance; CPU power is `kappa * f^3`.
    pub energy_coefficient: f64,
    /// CPU cycles needed to strip one redundant bit.
    pub cycles_per_redundant_bit: f64,
    /// Largest fraction of a packet that is redundant.
    pub max_redundancy_fraction: f64,
    /// Gap coefficient of the untuned waveform.
    pub gap_initial: f64,
    /// Cycles for the excess gap to shrink by a factor of e.
    pub gap_decay_cycles: f64,
}

impl Default for ComputeParams {
    fn default() -> Self {
        Self {
            cpu_frequency_hz: 1e9,
            energy_coefficient: 1e-28,
            cycles_per_redundant_bit: 30.0,
            max_redundancy_fraction: 0.5,
            gap_initial: 3.0,
            gap_decay_cycles: 5e8,
        }
    }
}

impl ComputeParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("cpu_frequency_Hz", self.cpu_frequency_hz)?;
        ensure_positive("energy_coefficient", self.energy_coefficient)?;
        ensure_positive("cycles_per_redundant_bit", self.cycles_per_redundant_bit)?;
        ensure_positive("gap_decay_cycles", self.gap_decay_cycles)?;
        if !(0.0..1.0).contains(&self.max_redundancy_fraction) {
            return Err(Error::InvalidParameter {
                name: "max_redundancy_fraction",
                reason: format!("must lie in [0, 1), got {}", self.max_redundancy_fraction),
            });
        }
        if !(self.gap_initial >= 1.0 && self.gap_initial.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gap_initial",
                reason: format!("must be >= 1, got {}", self.gap_initial),
            });
        }
        Ok(())
    }

    /// CPU power while busy, W.
    pub fn cpu_power_w(&self) -> f64 {
        self.energy_coefficient * self.cpu_frequency_hz.powi(3)
    }
}

/// Redundant bits removed after `t_pre` seconds of preprocessing.
pub fn eliminated_bits(params: &ComputeParams, packet_bits: u64, t_pre: f64) -> u64 {
    let by_cpu = params.cpu_frequency_hz * t_pre / params.cycles_per_redundant_bit;
    let cap = params.max_redundancy_fraction * packet_bits as f64;
    by_cpu.min(cap).max(0.0).floor() as u64
}

pub fn residual_bits(params: &ComputeParams, packet_bits: u64, t_pre: f64) -> u64 {
    packet_bits - eliminated_bits(params, packet_bits, t_pre)
}

/// SNR gap left after `t_wf` seconds of waveform decision making.
pub fn gap_coefficient(params: &ComputeParams, t_wf: f64) -> f64 {
    let cycles = params.cpu_frequency_hz * t_wf;
    1.0 + (params.gap_initial - 1.0) * (-cycles / params.gap_decay_cycles).exp()
}

pub fn computation_energy(params: &ComputeParams, t_pre: f64, t_wf: f64) -> f64 {
    params.cpu_power_w() * (t_pre + t_wf)
}
