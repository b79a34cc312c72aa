//! Rule-based orientation of a degraded link.
//!
//! Collisions, interference and shadowing all depress SINR and raise packet
//! loss, so loss alone cannot tell them apart. The retransmission count can:
//! collisions resolve after a few backoffs, while interference and shadowing
//! push nearly every frame to the retry limit. Idle-channel energy then
//! separates interference from shadowing, and shadowing, being a matter of
//! where the UAV sits, is handed to flight control.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkObservation {
    pub avg_retransmissions: f64,
    /// Protocol retry limit.
    pub max_retransmissions: u32,
    pub packet_loss_rate: f64,
    #[serde(rename = "rssi_dBm")]
    pub rssi_dbm: f64,
    /// Energy sensed while the link itself is silent.
    #[serde(rename = "idle_channel_energy_dBm")]
    pub idle_channel_energy_dbm: f64,
    #[serde(rename = "sinr_dB")]
    pub sinr_db: f64,
}

impl LinkObservation {
    pub fn validate(&self) -> Result<()> {
        let max = self.max_retransmissions as f64;
        if !(self.avg_retransmissions >= 0.0 && self.avg_retransmissions <= max) {
            return Err(Error::InvalidParameter {
                name: "avg_retransmissions",
                reason: format!("must lie in [0, {max}], got {}", self.avg_retransmissions),
            });
        }
        if !(0.0..=1.0).contains(&self.packet_loss_rate) {
            return Err(Error::InvalidParameter {
                name: "packet_loss_rate",
                reason: format!("must lie in [0, 1], got {}", self.packet_loss_rate),
            });
        }
        for (name, v) in [
            ("rssi_dBm", self.rssi_dbm),
            ("idle_channel_energy_dBm", self.idle_channel_energy_dbm),
            ("sinr_dB", self.sinr_db),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: "must be finite".into() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cause {
    Collision,
    Interference,
    Shadowing,
    Nominal,
}

impl Cause {
    pub const ALL: [Cause; 4] = [Cause::Collision, Cause::Interference, Cause::Shadowing, Cause::Nominal];

    pub fn issue_dimension(self) -> IssueDimension {
        match self {
            Cause::Shadowing => IssueDimension::Control,
            Cause::Collision | Cause::Interference | Cause::Nominal => IssueDimension::Communication,
        }
    }
}

impl fmt::Display for Cause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cause::Collision => "collision",
            Cause::Interference => "interference",
            Cause::Shadowing => "shadowing",
            Cause::Nominal => "nominal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IssueDimension {
    Communication,
    Computation,
    Control,
}

impl fmt::Display for IssueDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IssueDimension::Communication => "communication",
            IssueDimension::Computation => "computation",
            IssueDimension::Control => "control",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orientation {
    pub cause: Cause,
    pub issue_dimension: IssueDimension,
    pub rationale: String,
}

impl Orientation {
    fn new(cause: Cause, rationale: String) -> Self {
        Self { cause, issue_dimension: cause.issue_dimension(), rationale }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrientThresholds {
    /// Fraction of the retry limit above which retransmissions count as
    /// saturated.
    pub retx_saturation_fraction: f64,
    pub loss_threshold: f64,
    #[serde(rename = "interference_threshold_dBm")]
    pub interference_threshold_dbm: f64,
    #[serde(rename = "rssi_floor_dBm")]
    pub rssi_floor_dbm: f64,
}

impl Default for OrientThresholds {
    fn default() -> Self {
        Self {
            retx_saturation_fraction: 0.9,
            loss_threshold: 0.1,
            interference_threshold_dbm: -90.0,
            rssi_floor_dbm: -95.0,
        }
    }
}

/// Classifies one observation. Rules are tried in the order interference,
/// shadowing, collision, and anything left over is nominal.
pub fn orient(obs: &LinkObservation, th: &OrientThresholds) -> Orientation {
    let limit = th.retx_saturation_fraction * obs.max_retransmissions as f64;
    let saturated = obs.avg_retransmissions >= limit;

    if saturated && obs.idle_channel_energy_dbm > th.interference_threshold_dbm {
        return Orientation::new(
            Cause::Interference,
            format!(
                "retransmissions saturated ({:.2}/{}) with {:.1} dBm on the idle channel",
                obs.avg_retransmissions, obs.max_retransmissions, obs.idle_channel_energy_dbm
            ),
        );
    }
    if saturated && obs.rssi_dbm < th.rssi_floor_dbm {
        return Orientation::new(
            Cause::Shadowing,
            format!(
                "retransmissions saturated ({:.2}/{}) on a quiet channel with RSSI {:.1} dBm",
                obs.avg_retransmissions, obs.max_retransmissions, obs.rssi_dbm
            ),
        );
    }
    if !saturated && obs.packet_loss_rate > th.loss_threshold {
        return Orientation::new(
            Cause::Collision,
            format!(
                "loss {:.0}% with retransmissions below saturation ({:.2}/{})",
                100.0 * obs.packet_loss_rate,
                obs.avg_retransmissions,
                obs.max_retransmissions
            ),
        );
    }
    Orientation::new(Cause::Nominal, "no rule fired".into())
}

/// One line of an observation trace, optionally labelled with the true
/// cause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    #[serde(flatten)]
    pub observation: LinkObservation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Cause>,
}

/// Scripted environments for synthetic traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentProfile {
    CollisionHeavy,
    InterferenceHeavy,
    Shadowed,
}

impl EnvironmentProfile {
    pub const ALL: [EnvironmentProfile; 3] = [
        EnvironmentProfile::CollisionHeavy,
        EnvironmentProfile::InterferenceHeavy,
        EnvironmentProfile::Shadowed,
    ];

    pub fn cause(self) -> Cause {
        match self {
            EnvironmentProfile::CollisionHeavy => Cause::Collision,
            EnvironmentProfile::InterferenceHeavy => Cause::Interference,
            EnvironmentProfile::Shadowed => Cause::Shadowing,
        }
    }

    fn sample<R: Rng>(self, rng: &mut R) -> LinkObservation {
        const RETRY_LIMIT: u32 = 7;
        // Saturated profiles sit at 92-100% of the retry limit.
        let saturated = |rng: &mut R| rng.gen_range(6.45..=7.0);
        let quiet = |rng: &mut R| rng.gen_range(-105.0..-96.0);
        let (avg, loss, rssi, idle, sinr) = match self {
            EnvironmentProfile::CollisionHeavy => (
                rng.gen_range(0.5..4.5),
                rng.gen_range(0.15..0.6),
                rng.gen_range(-75.0..-55.0),
                quiet(rng),
                rng.gen_range(0.0..8.0),
            ),
            EnvironmentProfile::InterferenceHeavy => (
                saturated(rng),
                rng.gen_range(0.3..0.9),
                rng.gen_range(-80.0..-60.0),
                rng.gen_range(-82.0..-60.0),
                rng.gen_range(-5.0..3.0),
            ),
            EnvironmentProfile::Shadowed => (
                saturated(rng),
                rng.gen_range(0.4..0.95),
                rng.gen_range(-112.0..-98.0),
                quiet(rng),
                rng.gen_range(-8.0..2.0),
            ),
        };
        LinkObservation {
            avg_retransmissions: avg,
            max_retransmissions: RETRY_LIMIT,
            packet_loss_rate: loss,
            rssi_dbm: rssi,
            idle_channel_energy_dbm: idle,
            sinr_db: sinr,
        }
    }
}

/// `count` labelled observations from `profile`.
pub fn synthetic_trace(profile: EnvironmentProfile, count: usize, seed: u64) -> Vec<TraceRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(profile as u64);
    (0..count)
        .map(|_| TraceRecord { observation: profile.sample(&mut rng), label: Some(profile.cause()) })
        .collect()
}

/// Parses a JSON array of [`TraceRecord`]s, naming the first bad record.
pub fn parse_trace(json: &str) -> Result<Vec<TraceRecord>> {
    let raw: Vec<serde_json::Value> =
        serde_json::from_str(json).map_err(|e| Error::Trace { index: 0, message: format!("not a JSON array of records: {e}") })?;
    raw.into_iter()
        .enumerate()
        .map(|(index, v)| {
            let rec: TraceRecord =
                serde_json::from_value(v).map_err(|e| Error::Trace { index, message: e.to_string() })?;
            rec.observation.validate().map_err(|e| Error::Trace { index, message: e.to_string() })?;
            Ok(rec)
        })
        .collect()
}
