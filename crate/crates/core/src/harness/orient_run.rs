use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::orient::{orient, Cause, OrientThresholds, Orientation, TraceRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct OrientReport {
    pub orientations: Vec<Orientation>,
    pub labels: Vec<Option<Cause>>,
    /// (label, predicted) counts over labelled records.
    pub confusion: BTreeMap<(Cause, Cause), usize>,
}

impl OrientReport {
    pub fn labelled(&self) -> usize {
        self.confusion.values().sum()
    }

    /// Share of labelled records classified as labelled.
    pub fn accuracy(&self) -> Option<f64> {
        let n = self.labelled();
        let hits: usize = self.confusion.iter().filter(|((l, p), _)| l == p).map(|(_, c)| c).sum();
        (n > 0).then(|| hits as f64 / n as f64)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let mut counts: BTreeMap<Cause, usize> = BTreeMap::new();
        for o in &self.orientations {
            *counts.entry(o.cause).or_default() += 1;
        }
        let _ = writeln!(s, "{} records", self.orientations.len());
        for (cause, n) in &counts {
            let _ = writeln!(s, "  {cause:<13} {n:>6}  ({})", cause.issue_dimension());
        }
        if let Some(acc) = self.accuracy() {
            let _ = write!(s, "confusion (rows: label, cols: predicted)\n{:<13}", "");
            for c in Cause::ALL {
                let _ = write!(s, "{:>13}", c.to_string());
            }
            s.push('\n');
            for l in Cause::ALL {
                let _ = write!(s, "{:<13}", l.to_string());
                for p in Cause::ALL {
                    let _ = write!(s, "{:>13}", self.confusion.get(&(l, p)).copied().unwrap_or(0));
                }
                s.push('\n');
            }
            let _ = writeln!(s, "agreement with labels: {:.1}% of {}", 100.0 * acc, self.labelled());
        }
        s
    }
}

pub fn run_orient(records: &[TraceRecord], thresholds: &OrientThresholds) -> OrientReport {
    let orientations: Vec<Orientation> = records.iter().map(|r| orient(&r.observation, thresholds)).collect();
    let labels: Vec<Option<Cause>> = records.iter().map(|r| r.label).collect();
    let mut confusion = BTreeMap::new();
    for (o, l) in orientations.iter().zip(&labels) {
        if let Some(l) = l {
            *confusion.entry((*l, o.cause)).or_default() += 1;
        }
    }
    OrientReport { orientations, labels, confusion }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    index: usize,
    label: Option<Cause>,
    cause: Cause,
    issue_dimension: crate::orient::IssueDimension,
    rationale: &'a str,
}

pub fn write_orient_csv<W: Write>(report: &OrientReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (index, (o, label)) in report.orientations.iter().zip(&report.labels).enumerate() {
        w.serialize(CsvRow { index, label: *label, cause: o.cause, issue_dimension: o.issue_dimension, rationale: &o.rationale })?;
    }
    w.flush()?;
    Ok(())
}
