use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::planner::{Method, Plan, PlanEvaluation, Planner, Scenario, SearchGrid, Solution};

use super::SweepSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOutcome {
    pub method: Method,
    pub plan: Plan,
    pub evaluation: PlanEvaluation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub packet_bits: u64,
    pub cps: MethodOutcome,
    pub jpcc: MethodOutcome,
}

impl SweepRow {
    fn both_feasible(&self) -> bool {
        self.cps.evaluation.feasible && self.jpcc.evaluation.feasible
    }

    /// Fractional energy saving of CPS over JP-CC, when both are feasible.
    pub fn energy_reduction(&self) -> Option<f64> {
        self.both_feasible()
            .then(|| reduction(self.cps.evaluation.e_total_j, self.jpcc.evaluation.e_total_j))
    }

    pub fn delay_reduction(&self) -> Option<f64> {
        self.both_feasible()
            .then(|| reduction(self.cps.evaluation.t_total_s, self.jpcc.evaluation.t_total_s))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Mean over rows where both methods are feasible, in percent.
    pub mean_energy_reduction_pct: Option<f64>,
    pub mean_delay_reduction_pct: Option<f64>,
}

fn reduction(ours: f64, baseline: f64) -> f64 {
    if baseline > 0.0 {
        1.0 - ours / baseline
    } else {
        0.0
    }
}

fn solve(planner: &Planner, method: Method) -> Result<MethodOutcome> {
    let (plan, evaluation) = match planner.optimize(method) {
        Ok(Solution { plan, evaluation }) => (plan, evaluation),
        Err(Error::InfeasibleScenario { best_effort, .. }) => *best_effort,
        Err(e) => return Err(e),
    };
    Ok(MethodOutcome { method, plan, evaluation })
}

fn mean_pct(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| 100.0 * v.iter().sum::<f64>() / v.len() as f64)
}

/// Runs both optimisers at every packet length. Rows where a method misses
/// the delay budget are kept with its least-violating plan.
pub fn run_sweep(scenario: &Scenario, grid: &SearchGrid, spec: &SweepSpec, exec: Execution) -> Result<SweepResult> {
    spec.validate()?;
    let rows = exec
        .map(&spec.packet_bits_list, |&bits| -> Result<SweepRow> {
            let planner = Planner::new(&scenario.with_packet_bits(bits))?
                .with_grid(*grid)?
                .with_execution(exec);
            Ok(SweepRow { packet_bits: bits, cps: solve(&planner, Method::Cps)?, jpcc: solve(&planner, Method::JpCc)? })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        mean_energy_reduction_pct: mean_pct(rows.iter().map(SweepRow::energy_reduction)),
        mean_delay_reduction_pct: mean_pct(rows.iter().map(SweepRow::delay_reduction)),
        rows,
    })
}

#[derive(Serialize)]
struct CsvRow {
    method: &'static str,
    packet_bits: u64,
    t_pre: f64,
    t_wf: f64,
    t_fly: f64,
    t_tx: f64,
    t_total: f64,
    e_comp: f64,
    e_fly: f64,
    e_tx: f64,
    e_hover: f64,
    e_total: f64,
    heading_deg: f64,
    #[serde(rename = "tx_power_W")]
    tx_power_w: f64,
    final_distance_m: f64,
    feasible: bool,
}

impl CsvRow {
    fn new(packet_bits: u64, o: &MethodOutcome) -> Self {
        let (p, e) = (&o.plan, &o.evaluation);
        Self {
            method: o.method.label(),
            packet_bits,
            t_pre: p.t_pre_s,
            t_wf: p.t_wf_s,
            t_fly: p.t_fly_s,
            t_tx: e.t_tx_s,
            t_total: e.t_total_s,
            e_comp: e.e_comp_j,
            e_fly: e.e_fly_j,
            e_tx: e.e_tx_j,
            e_hover: e.e_hover_j,
            e_total: e.e_total_j,
            heading_deg: p.heading_rad.to_degrees(),
            tx_power_w: p.tx_power_w,
            final_distance_m: e.final_distance_m,
            feasible: e.feasible,
        }
    }
}

/// Writes the plot data: one CPS and one JP-CC row per packet length.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in &result.rows {
        w.serialize(CsvRow::new(row.packet_bits, &row.cps))?;
        w.serialize(CsvRow::new(row.packet_bits, &row.jpcc))?;
    }
    w.flush()?;
    Ok(())
}

impl SweepResult {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>12} {:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "packet_Mbit", "E_CPS_J", "E_JPCC_J", "dE_%", "T_CPS_s", "T_JPCC_s", "dT_%", "fly_s"
        );
        for r in &self.rows {
            let pct = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{:.1}", 100.0 * x));
            let mark = |o: &MethodOutcome| if o.evaluation.feasible { "" } else { "*" };
            let _ = writeln!(
                s,
                "{:>12.1} {:>9.1}{:1} {:>9.1}{:1} {:>8} {:>8.2} {:>8.2} {:>8} {:>3.1}/{:.1}",
                r.packet_bits as f64 / 1e6,
                r.cps.evaluation.e_total_j,
                mark(&r.cps),
                r.jpcc.evaluation.e_total_j,
                mark(&r.jpcc),
                pct(r.energy_reduction()),
                r.cps.evaluation.t_total_s,
                r.jpcc.evaluation.t_total_s,
                pct(r.delay_reduction()),
                r.cps.plan.t_fly_s,
                r.jpcc.plan.t_fly_s,
            );
        }
        let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.1}%"));
        let _ = writeln!(s, "mean energy reduction: {}", fmt(self.mean_energy_reduction_pct));
        let _ = writeln!(s, "mean delay reduction:  {}", fmt(self.mean_delay_reduction_pct));
        if self.rows.iter().any(|r| !r.both_feasible()) {
            let _ = writeln!(s, "* misses the delay budget; least-violating plan shown");
        }
        s
    }
}
