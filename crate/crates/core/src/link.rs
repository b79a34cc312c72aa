//! Gap-penalised Shannon rate and the transmit phase it implies.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioParams {
    #[serde(rename = "bandwidth_Hz")]
    pub bandwidth_hz: f64,
    #[serde(rename = "noise_psd_dBm_per_Hz")]
    pub noise_psd_dbm_per_hz: f64,
    #[serde(rename = "max_tx_power_W")]
    pub max_tx_power_w: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self { bandwidth_hz: 2e6, noise_psd_dbm_per_hz: -169.0, max_tx_power_w: 5.0 }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("bandwidth_Hz", self.bandwidth_hz)?;
        ensure_positive("max_tx_power_W", self.max_tx_power_w)?;
        if !self.noise_psd_dbm_per_hz.is_finite() {
            return Err(Error::InvalidParameter {
                name: "noise_psd_dBm_per_Hz",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }
}

/// In-band noise power, W.
pub fn noise_power(params: &RadioParams) -> f64 {
    let dbm = params.noise_psd_dbm_per_hz + 10.0 * params.bandwidth_hz.log10();
    10f64.powf(dbm / 10.0) / 1000.0
}

/// Rate in bit/s with the SNR divided by `gap`.
pub fn achievable_rate(params: &RadioParams, tx_power_w: f64, gain_db: f64, gap: f64) -> Result<f64> {
    if !(tx_power_w > 0.0 && tx_power_w <= params.max_tx_power_w) {
        return Err(Error::ConstraintViolation {
            power_w: tx_power_w,
            max_w: params.max_tx_power_w,
        });
    }
    Ok(rate_with_noise(params.bandwidth_hz, noise_power(params), tx_power_w, gain_db, gap))
}

/// Same as [`achievable_rate`] with a precomputed noise power and no power
/// bound check.
pub(crate) fn rate_with_noise(bandwidth_hz: f64, noise_w: f64, tx_power_w: f64, gain_db: f64, gap: f64) -> f64 {
    let snr = tx_power_w * 10f64.powf(gain_db / 10.0) / (gap * noise_w);
    bandwidth_hz * snr.ln_1p() / std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitPhase {
    pub duration_s: f64,
    pub tx_energy_j: f64,
    /// Propulsion energy spent hovering for the duration of the transmission.
    pub hover_energy_j: f64,
}

pub fn transmission_phase(bits: u64, rate_bps: f64, tx_power_w: f64, hover_power_w: f64) -> Result<TransmitPhase> {
    if !(rate_bps > 0.0) {
        return Err(Error::InfeasibleLink { rate_bps });
    }
    let duration_s = bits as f64 / rate_bps;
    Ok(TransmitPhase {
        duration_s,
        tx_energy_j: tx_power_w * duration_s,
        hover_energy_j: hover_power_w * duration_s,
    })
}
