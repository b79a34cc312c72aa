//! Sender/receiver layout on a fixed-altitude plane.
//!
//! Only the sender moves. Headings are measured counter-clockwise from the
//! initial sender-to-receiver segment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    fn minus(self, other: Point) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometrySpec", into = "GeometrySpec")]
pub struct Geometry {
    pub sender_position: Point,
    pub receiver_position: Point,
}

impl Default for Geometry {
    fn default() -> Self {
        Self::with_separation(500.0)
    }
}

impl Geometry {
    /// Sender at the origin, receiver `separation_m` along +x.
    pub fn with_separation(separation_m: f64) -> Self {
        Self {
            sender_position: Point::new(0.0, 0.0),
            receiver_position: Point::new(separation_m, 0.0),
        }
    }

    pub fn initial_separation_m(&self) -> f64 {
        self.sender_position.distance(self.receiver_position)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.initial_separation_m();
        if d > 0.0 && d.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "initial_separation_m",
                reason: format!("must be finite and > 0, got {d}"),
            })
        }
    }
}

/// On-disk form of [`Geometry`]: a separation, explicit positions, or both.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometrySpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_separation_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sender_position: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    receiver_position: Option<Point>,
}

impl TryFrom<GeometrySpec> for Geometry {
    type Error = String;

    fn try_from(spec: GeometrySpec) -> std::result::Result<Self, String> {
        let base = Geometry::with_separation(spec.initial_separation_m.unwrap_or(500.0));
        let geometry = Geometry {
            sender_position: spec.sender_position.unwrap_or(base.sender_position),
            receiver_position: spec.receiver_position.unwrap_or(base.receiver_position),
        };
        if let (Some(d), true) = (
            spec.initial_separation_m,
            spec.sender_position.is_some() || spec.receiver_position.is_some(),
        ) {
            let actual = geometry.initial_separation_m();
            if (actual - d).abs() > 1e-9 * d.abs().max(1.0) {
                return Err(format!(
                    "initial_separation_m {d} disagrees with positions ({actual} m apart)"
                ));
            }
        }
        geometry.validate().map_err(|e| e.to_string())?;
        Ok(geometry)
    }
}

impl From<Geometry> for GeometrySpec {
    fn from(g: Geometry) -> Self {
        GeometrySpec {
            initial_separation_m: Some(g.initial_separation_m()),
            sender_position: Some(g.sender_position),
            receiver_position: Some(g.receiver_position),
        }
    }
}

/// Sender position after flying straight for `duration` seconds.
pub fn final_position(geometry: &Geometry, heading_rad: f64, speed: f64, duration: f64) -> Point {
    let start = geometry.sender_position;
    let (dx, dy) = geometry.receiver_position.minus(start);
    let norm = dx.hypot(dy);
    let (ux, uy) = (dx / norm, dy / norm);
    let (s, c) = heading_rad.sin_cos();
    let travelled = speed * duration;
    Point::new(
        start.x + travelled * (ux * c - uy * s),
        start.y + travelled * (ux * s + uy * c),
    )
}

/// Angle in degrees, at `receiver`, between the bearings to `initial_sender`
/// and to `sender`. Always in `[0, 180]`.
pub fn angle_at_receiver(receiver: Point, initial_sender: Point, sender: Point) -> Result<f64> {
    let (ax, ay) = initial_sender.minus(receiver);
    let (bx, by) = sender.minus(receiver);
    if bx == 0.0 && by == 0.0 {
        return Err(Error::DegenerateGeometry { x: sender.x, y: sender.y });
    }
    let cross = ax * by - ay * bx;
    let dot = ax * bx + ay * by;
    Ok(cross.abs().atan2(dot).to_degrees())
}

/// Deviation of the current sender bearing from the initial one, seen from
/// the receiver.
pub fn deviation_angle(geometry: &Geometry, sender_pos: Point) -> Result<f64> {
    angle_at_receiver(geometry.receiver_position, geometry.sender_position, sender_pos)
}
