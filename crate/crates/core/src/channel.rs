//! Probability-weighted LoS/NLoS channel gain between the two UAVs.
//!
//! The LoS probability follows the low-altitude-platform sigmoid, driven by
//! the deviation angle instead of an elevation angle: the further the sender
//! swings away from the shadowed initial bearing, the likelier a clear path.
//! Excess losses are averaged in dB.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Free-space path loss constant for metres and hertz, dB.
const FSPL_CONSTANT_DB: f64 = 147.55;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    #[serde(rename = "carrier_frequency_Hz")]
    pub carrier_frequency_hz: f64,
    /// Mean excess loss on a line-of-sight path, dB.
    #[serde(rename = "los_excess_loss_dB")]
    pub los_excess_loss_db: f64,
    #[serde(rename = "nlos_excess_loss_dB")]
    pub nlos_excess_loss_db: f64,
    pub sigmoid_a: f64,
    /// Per degree.
    pub sigmoid_b: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 5e9,
            los_excess_loss_db: 1.0,
            nlos_excess_loss_db: 20.0,
            sigmoid_a: 15.0,
            sigmoid_b: 0.12,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("carrier_frequency_Hz", self.carrier_frequency_hz)?;
        ensure_positive("sigmoid_a", self.sigmoid_a)?;
        ensure_positive("sigmoid_b", self.sigmoid_b)?;
        if !(self.los_excess_loss_db >= 0.0 && self.nlos_excess_loss_db > self.los_excess_loss_db) {
            return Err(Error::InvalidParameter {
                name: "nlos_excess_loss_dB",
                reason: format!(
                    "need nlos ({}) > los ({}) >= 0",
                    self.nlos_excess_loss_db, self.los_excess_loss_db
                ),
            });
        }
        Ok(())
    }
}

/// Free-space path loss in dB.
pub fn free_space_path_loss_db(distance_m: f64, frequency_hz: f64) -> f64 {
    20.0 * distance_m.log10() + 20.0 * frequency_hz.log10() - FSPL_CONSTANT_DB
}

pub fn los_probability(params: &ChannelParams, deviation_deg: f64) -> f64 {
    let a = params.sigmoid_a;
    let p = 1.0 / (1.0 + a * (-params.sigmoid_b * (deviation_deg - a)).exp());
    p.clamp(0.0, 1.0)
}

/// Channel power gain in dB (never positive) at `distance_m` and the given
/// deviation angle.
pub fn channel_power_gain(params: &ChannelParams, distance_m: f64, deviation_deg: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::Domain { quantity: "distance", value: distance_m });
    }
    let p_los = los_probability(params, deviation_deg);
    let excess = p_los * params.los_excess_loss_db + (1.0 - p_los) * params.nlos_excess_loss_db;
    Ok(-(free_space_path_loss_db(distance_m, params.carrier_frequency_hz) + excess))
}
