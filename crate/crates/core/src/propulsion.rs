//! Rotary-wing propulsion power versus forward speed.
//!
//! The model is the usual three-term decomposition for a rotorcraft in
//! level flight: blade-profile power that grows with the advance ratio,
//! induced power that falls as forward speed relieves the rotor, and
//! fuselage parasite power that grows with the cube of speed.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::search::bracket_and_refine;

/// Coarse scan step for the maximum-range search, m/s.
const SCAN_STEP_MPS: f64 = 0.5;
/// Upper end of the maximum-range search, m/s.
const SCAN_MAX_MPS: f64 = 60.0;
const SPEED_TOL_MPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropulsionParams {
    /// Blade profile power in hover, W.
    #[serde(rename = "blade_profile_power_W")]
    pub blade_profile_power_w: f64,
    /// Induced power in hover, W.
    #[serde(rename = "induced_power_W")]
    pub induced_power_w: f64,
    pub tip_speed_mps: f64,
    /// Mean rotor induced velocity in hover.
    pub mean_rotor_induced_velocity_mps: f64,
    pub fuselage_drag_ratio: f64,
    pub air_density_kg_m3: f64,
    pub rotor_solidity: f64,
    pub rotor_disc_area_m2: f64,
    /// Carried for configuration completeness; the power coefficients are
    /// not rescaled from it.
    pub uav_mass_kg: f64,
}

impl Default for PropulsionParams {
    fn default() -> Self {
        Self {
            blade_profile_power_w: 79.86,
            induced_power_w: 88.63,
            tip_speed_mps: 120.0,
            mean_rotor_induced_velocity_mps: 4.03,
            fuselage_drag_ratio: 0.6,
            air_density_kg_m3: 1.225,
            rotor_solidity: 0.05,
            rotor_disc_area_m2: 0.503,
            uav_mass_kg: 1.5,
        }
    }
}

impl PropulsionParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("blade_profile_power_W", self.blade_profile_power_w)?;
        ensure_positive("induced_power_W", self.induced_power_w)?;
        ensure_positive("tip_speed_mps", self.tip_speed_mps)?;
        ensure_positive("mean_rotor_induced_velocity_mps", self.mean_rotor_induced_velocity_mps)?;
        ensure_positive("fuselage_drag_ratio", self.fuselage_drag_ratio)?;
        ensure_positive("air_density_kg_m3", self.air_density_kg_m3)?;
        ensure_positive("rotor_solidity", self.rotor_solidity)?;
        ensure_positive("rotor_disc_area_m2", self.rotor_disc_area_m2)?;
        ensure_positive("uav_mass_kg", self.uav_mass_kg)
    }

    /// Copy with the three power terms multiplied by `factor`.
    pub fn scale_power(&self, factor: f64) -> Self {
        Self {
            blade_profile_power_w: self.blade_profile_power_w * factor,
            induced_power_w: self.induced_power_w * factor,
            fuselage_drag_ratio: self.fuselage_drag_ratio * factor,
            ..*self
        }
    }

    fn power_unchecked(&self, speed: f64) -> f64 {
        let v2 = speed * speed;
        let u2 = self.tip_speed_mps * self.tip_speed_mps;
        let v0_2 = self.mean_rotor_induced_velocity_mps * self.mean_rotor_induced_velocity_mps;

        let profile = self.blade_profile_power_w * (1.0 + 3.0 * v2 / u2);
        let induced = self.induced_power_w
            * ((1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)).sqrt() - v2 / (2.0 * v0_2)).sqrt();
        let parasite = 0.5
            * self.fuselage_drag_ratio
            * self.air_density_kg_m3
            * self.rotor_solidity
            * self.rotor_disc_area_m2
            * v2
            * speed;
        profile + induced + parasite
    }
}

/// Propulsion power in W at forward speed `speed` (m/s).
pub fn propulsion_power(params: &PropulsionParams, speed: f64) -> Result<f64> {
    if !(speed >= 0.0) || !speed.is_finite() {
        return Err(Error::Domain { quantity: "speed", value: speed });
    }
    Ok(params.power_unchecked(speed))
}

/// Power drawn while hovering in place.
pub fn hover_power(params: &PropulsionParams) -> f64 {
    params.power_unchecked(0.0)
}

/// Speed minimising propulsion energy per metre, `P(V)/V`.
pub fn max_range_speed(params: &PropulsionParams) -> Result<f64> {
    bracket_and_refine(
        |v| params.power_unchecked(v) / v,
        SCAN_STEP_MPS,
        SCAN_MAX_MPS,
        SCAN_STEP_MPS,
        SPEED_TOL_MPS,
    )
}

/// Speed minimising propulsion power (endurance speed).
pub fn min_power_speed(params: &PropulsionParams) -> Result<f64> {
    bracket_and_refine(
        |v| params.power_unchecked(v),
        0.0,
        SCAN_MAX_MPS,
        SCAN_STEP_MPS,
        SPEED_TOL_MPS,
    )
}
