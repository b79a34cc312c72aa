//! Saturation throughput of 802.11 DCF under basic access.
//!
//! Every station always has a frame queued and transmits in a slot with a
//! fixed probability `tau`. A slot is then idle, carries exactly one
//! successful frame, or carries a collision, and the normalised throughput
//! is the fraction of channel time spent on successful payload.
//!
//! [`simulate_saturation`] plays the same channel slot by slot with random
//! per-station decisions; it shares nothing with the closed form and serves
//! as its cross-check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::search::golden_section_tol;

const PEAK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DcfParams {
    pub n_stations: u32,
    pub payload_bits: f64,
    pub mac_header_bits: f64,
    pub phy_header_bits: f64,
    /// ACK frame body; the PHY header is added on top.
    pub ack_bits: f64,
    pub channel_bit_rate_bps: f64,
    pub slot_time_s: f64,
    pub sifs_s: f64,
    pub difs_s: f64,
    pub propagation_delay_s: f64,
}

impl Default for DcfParams {
    fn default() -> Self {
        Self {
            n_stations: 10,
            payload_bits: 8184.0,
            mac_header_bits: 272.0,
            phy_header_bits: 128.0,
            ack_bits: 112.0,
            channel_bit_rate_bps: 1e6,
            slot_time_s: 50e-6,
            sifs_s: 28e-6,
            difs_s: 128e-6,
            propagation_delay_s: 1e-6,
        }
    }
}

impl DcfParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_stations == 0 {
            return Err(Error::InvalidParameter { name: "n_stations", reason: "must be >= 1".into() });
        }
        ensure_positive("payload_bits", self.payload_bits)?;
        ensure_positive("mac_header_bits", self.mac_header_bits)?;
        ensure_positive("phy_header_bits", self.phy_header_bits)?;
        ensure_positive("ack_bits", self.ack_bits)?;
        ensure_positive("channel_bit_rate_bps", self.channel_bit_rate_bps)?;
        ensure_positive("slot_time_s", self.slot_time_s)?;
        ensure_positive("sifs_s", self.sifs_s)?;
        ensure_positive("difs_s", self.difs_s)?;
        ensure_positive("propagation_delay_s", self.propagation_delay_s)
    }

    pub fn with_stations(&self, n_stations: u32) -> Self {
        Self { n_stations, ..*self }
    }

    pub fn payload_time_s(&self) -> f64 {
        self.payload_bits / self.channel_bit_rate_bps
    }

    fn header_time_s(&self) -> f64 {
        (self.phy_header_bits + self.mac_header_bits) / self.channel_bit_rate_bps
    }

    fn ack_time_s(&self) -> f64 {
        (self.ack_bits + self.phy_header_bits) / self.channel_bit_rate_bps
    }

    /// Channel time consumed by a successful exchange.
    pub fn success_time_s(&self) -> f64 {
        self.header_time_s()
            + self.payload_time_s()
            + self.sifs_s
            + self.propagation_delay_s
            + self.ack_time_s()
            + self.difs_s
            + self.propagation_delay_s
    }

    /// Channel time wasted by a collision; colliding frames have the same
    /// payload length.
    pub fn collision_time_s(&self) -> f64 {
        self.header_time_s() + self.payload_time_s() + self.difs_s + self.propagation_delay_s
    }
}

/// The three terms of the throughput ratio, kept apart so callers can check
/// `throughput * denominator == numerator`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputTerms {
    pub numerator: f64,
    pub denominator: f64,
    pub throughput: f64,
}

pub fn throughput_terms(params: &DcfParams, tau: f64) -> ThroughputTerms {
    let n = params.n_stations as f64;
    let tau = tau.clamp(0.0, 1.0);
    let p_idle = (1.0 - tau).powf(n);
    let p_tr = 1.0 - p_idle;
    // P_tr * P_s: exactly one station transmits.
    let p_success = n * tau * (1.0 - tau).powf(n - 1.0);
    let numerator = p_success * params.payload_time_s();
    let denominator = p_idle * params.slot_time_s
        + p_success * params.success_time_s()
        + (p_tr - p_success).max(0.0) * params.collision_time_s();
    ThroughputTerms { numerator, denominator, throughput: numerator / denominator }
}

/// Normalised saturation throughput for per-slot transmission probability
/// `tau`.
pub fn saturation_throughput(params: &DcfParams, tau: f64) -> f64 {
    throughput_terms(params, tau).throughput
}

/// Transmission probability maximising throughput, and the peak value.
pub fn peak_throughput(params: &DcfParams) -> Result<(f64, f64)> {
    if params.n_stations < 2 {
        return Err(Error::InvalidParameter {
            name: "n_stations",
            reason: "a single station has no interior throughput peak".into(),
        });
    }
    let (tau, neg) = golden_section_tol(|t| -saturation_throughput(params, t), 0.0, 1.0, PEAK_TOL);
    Ok((tau, -neg))
}

/// Slot-level simulation of `slots` consecutive slots.
pub fn simulate_saturation<R: Rng>(params: &DcfParams, tau: f64, slots: u64, rng: &mut R) -> f64 {
    let mut busy_payload = 0.0;
    let mut elapsed = 0.0;
    let (idle, success, collision) = (params.slot_time_s, params.success_time_s(), params.collision_time_s());
    for _ in 0..slots {
        let mut transmitters = 0u32;
        for _ in 0..params.n_stations {
            if rng.gen::<f64>() < tau {
                transmitters += 1;
            }
        }
        match transmitters {
            0 => elapsed += idle,
            1 => {
                elapsed += success;
                busy_payload += params.payload_time_s();
            }
            _ => elapsed += collision,
        }
    }
    if elapsed > 0.0 {
        busy_payload / elapsed
    } else {
        0.0
    }
}

/// [`simulate_saturation`] with a ChaCha8 stream derived from `seed` and
/// `stream`, so independent grid points can run in any order.
pub fn simulate_seeded(params: &DcfParams, tau: f64, slots: u64, seed: u64, stream: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    simulate_saturation(params, tau, slots, &mut rng)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
