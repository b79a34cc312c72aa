use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::dcf::{peak_throughput, saturation_throughput, simulate_seeded};
use crate::error::Result;
use crate::exec::Execution;

use super::DcfSweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Curve,
    Peak,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DcfRow {
    pub n_stations: u32,
    pub kind: RowKind,
    pub tau: f64,
    pub throughput: f64,
    /// Slot-level simulation at the same point, when enabled.
    pub monte_carlo: Option<f64>,
}

/// Throughput curve for every station count, each followed by its peak row.
/// The peak row is omitted for a single station, which has no interior peak.
pub fn run_dcf(sweep: &DcfSweep, exec: Execution) -> Result<Vec<DcfRow>> {
    sweep.validate()?;
    let mut rows = Vec::new();
    for (ni, &n) in sweep.n_values.iter().enumerate() {
        let params = sweep.params.with_stations(n);
        let points: Vec<(usize, f64)> = sweep.tau_grid.iter().copied().enumerate().collect();
        rows.extend(exec.map(&points, |&(i, tau)| DcfRow {
            n_stations: n,
            kind: RowKind::Curve,
            tau,
            throughput: saturation_throughput(&params, tau),
            monte_carlo: (sweep.monte_carlo_slots > 0).then(|| {
                let stream = (ni as u64) << 32 | i as u64;
                simulate_seeded(&params, tau, sweep.monte_carlo_slots, sweep.seed, stream)
            }),
        }));
        if n >= 2 {
            let (tau, s) = peak_throughput(&params)?;
            rows.push(DcfRow { n_stations: n, kind: RowKind::Peak, tau, throughput: s, monte_carlo: None });
        }
    }
    Ok(rows)
}

pub fn write_dcf_csv<W: Write>(rows: &[DcfRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn dcf_summary(rows: &[DcfRow]) -> String {
    let mut s = String::new();
    for r in rows.iter().filter(|r| r.kind == RowKind::Peak) {
        let _ = writeln!(s, "n={:<4} peak throughput {:.4} at tau={:.5}", r.n_stations, r.throughput, r.tau);
    }
    let worst = rows
        .iter()
        .filter_map(|r| r.monte_carlo.map(|m| (m - r.throughput).abs()))
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))));
    if let Some(d) = worst {
        let _ = writeln!(s, "max |analytic - simulated| = {d:.5}");
    }
    s
}
