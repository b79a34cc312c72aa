//! Joint planning of computation, flight and transmission.
//!
//! A [`Plan`] fixes the five decision variables. [`evaluate_plan`] walks the
//! compute, fly and transmit phases in order and charges every joule. The
//! optimisers search a fixed grid over the three durations; for each grid
//! cell the heading maximises the channel gain at the landing point and the
//! transmit power is picked by golden-section on energy inside the range
//! that still meets the delay budget.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::channel::{channel_power_gain, ChannelParams};
use crate::computation::{computation_energy, gap_coefficient, residual_bits, ComputeParams};
use crate::error::{ensure_positive, Error, Result};
use crate::exec::Execution;
use crate::geometry::{deviation_angle, final_position, Geometry, Point};
use crate::link::{noise_power, rate_with_noise, transmission_phase, RadioParams};
use crate::propulsion::{hover_power, max_range_speed, propulsion_power, PropulsionParams};
use crate::search::{golden_section, golden_section_tol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub geometry: Geometry,
    pub channel: ChannelParams,
    pub radio: RadioParams,
    pub compute: ComputeParams,
    pub propulsion: PropulsionParams,
    pub packet_bits: u64,
    pub delay_constraint_s: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            geometry: Geometry::default(),
            channel: ChannelParams::default(),
            radio: RadioParams::default(),
            compute: ComputeParams::default(),
            propulsion: PropulsionParams::default(),
            packet_bits: 50_000_000,
            delay_constraint_s: 25.0,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.channel.validate()?;
        self.radio.validate()?;
        self.compute.validate()?;
        self.propulsion.validate()?;
        ensure_positive("delay_constraint_s", self.delay_constraint_s)
    }

    pub fn with_packet_bits(&self, packet_bits: u64) -> Self {
        Self { packet_bits, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub t_pre_s: f64,
    pub t_wf_s: f64,
    pub t_fly_s: f64,
    pub heading_rad: f64,
    #[serde(rename = "tx_power_W")]
    pub tx_power_w: f64,
}

impl Plan {
    /// Hover in place and transmit straight away at `tx_power_w`.
    pub fn stay(tx_power_w: f64) -> Self {
        Self { t_pre_s: 0.0, t_wf_s: 0.0, t_fly_s: 0.0, heading_rad: 0.0, tx_power_w }
    }

    pub fn validate(&self, radio: &RadioParams) -> Result<()> {
        for (name, v) in [("t_pre_s", self.t_pre_s), ("t_wf_s", self.t_wf_s), ("t_fly_s", self.t_fly_s)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("must be >= 0, got {v}") });
            }
        }
        if !(self.heading_rad.abs() <= std::f64::consts::PI) {
            return Err(Error::InvalidParameter {
                name: "heading_rad",
                reason: format!("must lie in [-pi, pi], got {}", self.heading_rad),
            });
        }
        if !(self.tx_power_w > 0.0 && self.tx_power_w <= radio.max_tx_power_w) {
            return Err(Error::ConstraintViolation { power_w: self.tx_power_w, max_w: radio.max_tx_power_w });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanEvaluation {
    pub e_comp_j: f64,
    pub e_fly_j: f64,
    pub e_tx_j: f64,
    pub e_hover_j: f64,
    pub e_total_j: f64,
    pub t_tx_s: f64,
    pub t_total_s: f64,
    pub residual_bits: u64,
    pub gap: f64,
    #[serde(rename = "final_gain_dB")]
    pub final_gain_db: f64,
    pub final_distance_m: f64,
    pub rate_bps: f64,
    pub feasible: bool,
}

/// Which decision variables the optimiser may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Computation, flight and transmission planned together.
    Cps,
    /// Flight and transmission only; no preprocessing, untuned waveform.
    JpCc,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Cps => "CPS",
            Method::JpCc => "JP-CC",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchGrid {
    pub compute_step_s: f64,
    pub compute_max_s: f64,
    pub fly_step_s: f64,
    /// Flight durations are further capped by the delay budget.
    pub fly_max_s: f64,
    pub heading_step_deg: f64,
    pub heading_tol_rad: f64,
    pub power_iterations: usize,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            compute_step_s: 0.25,
            compute_max_s: 5.0,
            fly_step_s: 0.5,
            fly_max_s: 20.0,
            heading_step_deg: 1.0,
            heading_tol_rad: 1e-7,
            power_iterations: 30,
        }
    }
}

impl SearchGrid {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("compute_step_s", self.compute_step_s)?;
        ensure_positive("fly_step_s", self.fly_step_s)?;
        ensure_positive("heading_step_deg", self.heading_step_deg)?;
        ensure_positive("heading_tol_rad", self.heading_tol_rad)?;
        if !(self.compute_max_s >= 0.0 && self.fly_max_s >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "compute_max_s",
                reason: "grid upper bounds must be >= 0".into(),
            });
        }
        Ok(())
    }

    /// Preprocessing and waveform-decision durations.
    pub fn compute_values(&self) -> Vec<f64> {
        steps(self.compute_step_s, self.compute_max_s)
    }

    pub fn fly_values(&self, delay_constraint_s: f64) -> Vec<f64> {
        steps(self.fly_step_s, self.fly_max_s.min(delay_constraint_s))
    }
}

fn steps(step: f64, max: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

/// Scenario with the speed-dependent quantities resolved once.
#[derive(Debug, Clone)]
pub struct Evaluator {
    scenario: Scenario,
    cruise_speed_mps: f64,
    cruise_power_w: f64,
    hover_power_w: f64,
    noise_w: f64,
}

impl Evaluator {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let cruise_speed_mps = max_range_speed(&scenario.propulsion)?;
        Ok(Self {
            scenario: *scenario,
            cruise_speed_mps,
            cruise_power_w: propulsion_power(&scenario.propulsion, cruise_speed_mps)?,
            hover_power_w: hover_power(&scenario.propulsion),
            noise_w: noise_power(&scenario.radio),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Maximum-range speed, used for every flight leg.
    pub fn cruise_speed_mps(&self) -> f64 {
        self.cruise_speed_mps
    }

    pub fn hover_power_w(&self) -> f64 {
        self.hover_power_w
    }

    pub fn landing_point(&self, heading_rad: f64, t_fly_s: f64) -> Point {
        final_position(&self.scenario.geometry, heading_rad, self.cruise_speed_mps, t_fly_s)
    }

    /// Channel gain after the flight leg, or `None` when the sender lands on
    /// the receiver.
    pub fn landing_gain_db(&self, heading_rad: f64, t_fly_s: f64) -> Option<f64> {
        let pos = self.landing_point(heading_rad, t_fly_s);
        let distance = pos.distance(self.scenario.geometry.receiver_position);
        let deviation = deviation_angle(&self.scenario.geometry, pos).ok()?;
        channel_power_gain(&self.scenario.channel, distance, deviation).ok()
    }

    pub fn evaluate(&self, plan: &Plan) -> PlanEvaluation {
        let s = &self.scenario;
        let compute_s = plan.t_pre_s + plan.t_wf_s;
        let residual = residual_bits(&s.compute, s.packet_bits, plan.t_pre_s);
        let gap = gap_coefficient(&s.compute, plan.t_wf_s);
        let e_comp = computation_energy(&s.compute, plan.t_pre_s, plan.t_wf_s);

        let pos = self.landing_point(plan.heading_rad, plan.t_fly_s);
        let final_distance = pos.distance(s.geometry.receiver_position);
        let e_fly = self.cruise_power_w * plan.t_fly_s;

        let (gain_db, rate) = match self.landing_gain_db(plan.heading_rad, plan.t_fly_s) {
            Some(g) => (g, rate_with_noise(s.radio.bandwidth_hz, self.noise_w, plan.tx_power_w, g, gap)),
            None => (f64::NEG_INFINITY, 0.0),
        };
        let (t_tx, e_tx, e_hover_tx) = match transmission_phase(residual, rate, plan.tx_power_w, self.hover_power_w) {
            Ok(phase) => (phase.duration_s, phase.tx_energy_j, phase.hover_energy_j),
            Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
        };
        let e_hover = self.hover_power_w * compute_s + e_hover_tx;
        let t_total = compute_s + plan.t_fly_s + t_tx;

        PlanEvaluation {
            e_comp_j: e_comp,
            e_fly_j: e_fly,
            e_tx_j: e_tx,
            e_hover_j: e_hover,
            e_total_j: e_comp + e_fly + e_tx + e_hover,
            t_tx_s: t_tx,
            t_total_s: t_total,
            residual_bits: residual,
            gap,
            final_gain_db: gain_db,
            final_distance_m: final_distance,
            rate_bps: rate,
            feasible: rate > 0.0 && t_total <= s.delay_constraint_s,
        }
    }
}

/// Evaluates `plan` against `scenario`. Fails only on an invalid scenario;
/// missing the delay budget is reported through `feasible`.
pub fn evaluate_plan(scenario: &Scenario, plan: &Plan) -> Result<PlanEvaluation> {
    Ok(Evaluator::new(scenario)?.evaluate(plan))
}

pub fn optimize_heading(scenario: &Scenario, t_fly_s: f64) -> Result<f64> {
    Ok(Planner::new(scenario)?.optimize_heading(t_fly_s))
}

pub fn optimize_cps(scenario: &Scenario) -> Result<(Plan, PlanEvaluation)> {
    Planner::new(scenario)?.optimize(Method::Cps).map(|s| (s.plan, s.evaluation))
}

pub fn optimize_jpcc(scenario: &Scenario) -> Result<(Plan, PlanEvaluation)> {
    Planner::new(scenario)?.optimize(Method::JpCc).map(|s| (s.plan, s.evaluation))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solution {
    pub plan: Plan,
    pub evaluation: PlanEvaluation,
}

#[derive(Debug, Clone)]
pub struct Planner {
    evaluator: Evaluator,
    grid: SearchGrid,
    exec: Execution,
}

impl Planner {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        Ok(Self { evaluator: Evaluator::new(scenario)?, grid: SearchGrid::default(), exec: Execution::default() })
    }

    pub fn with_grid(mut self, grid: SearchGrid) -> Result<Self> {
        grid.validate()?;
        self.grid = grid;
        Ok(self)
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn grid(&self) -> &SearchGrid {
        &self.grid
    }

    /// Heading whose landing point has the highest channel gain.
    ///
    /// Scans the heading grid outwards from zero (0, +1, -1, +2, ...) keeping
    /// only strict improvements, so ties resolve to the smallest |heading|
    /// and then to the positive side, then polishes the winner within one
    /// grid step.
    pub fn optimize_heading(&self, t_fly_s: f64) -> f64 {
        let gain = |h: f64| self.evaluator.landing_gain_db(h, t_fly_s).unwrap_or(f64::NEG_INFINITY);
        let step = self.grid.heading_step_deg.to_radians();
        let half_turns = (180.0 / self.grid.heading_step_deg).floor() as i64;

        let mut best = (0.0, gain(0.0));
        for k in 1..=half_turns {
            for h in [k as f64 * step, -(k as f64) * step] {
                let g = gain(h);
                if g > best.1 {
                    best = (h, g);
                }
            }
        }

        let pi = std::f64::consts::PI;
        let lo = (best.0 - step).max(-pi);
        let hi = (best.0 + step).min(pi);
        let (h, neg_g) = golden_section_tol(|h| -gain(h), lo, hi, self.grid.heading_tol_rad);
        if -neg_g > best.1 {
            h
        } else {
            best.0
        }
    }

    /// Best transmit power for fixed durations and heading.
    pub fn choose_power(&self, t_pre_s: f64, t_wf_s: f64, t_fly_s: f64, heading_rad: f64) -> Solution {
        let ev = &self.evaluator;
        let s = ev.scenario();
        let p_max = s.radio.max_tx_power_w;
        let at = |p: f64| {
            let plan = Plan { t_pre_s, t_wf_s, t_fly_s, heading_rad, tx_power_w: p };
            Solution { plan, evaluation: ev.evaluate(&plan) }
        };

        let at_max = at(p_max);
        if at_max.evaluation.residual_bits == 0 || !at_max.evaluation.feasible {
            return at_max;
        }

        // Smallest power that still meets the delay budget.
        let e = &at_max.evaluation;
        let budget = s.delay_constraint_s - (t_pre_s + t_wf_s + t_fly_s);
        let bits_per_hz = e.residual_bits as f64 / (budget * s.radio.bandwidth_hz);
        let snr_needed = bits_per_hz.exp2() - 1.0;
        let p_floor = snr_needed * e.gap * ev.noise_w / 10f64.powf(e.final_gain_db / 10.0);
        let lo = p_floor.clamp(p_max * 1e-9, p_max);

        let (p, _) = golden_section(|p| at(p).evaluation.e_total_j, lo, p_max, self.grid.power_iterations);
        [at(p), at(lo)]
            .into_iter()
            .fold(at_max, |best, c| if rank(&c, &best) == Ordering::Less { c } else { best })
    }

    pub fn optimize(&self, method: Method) -> Result<Solution> {
        let s = self.evaluator.scenario();
        let compute = match method {
            Method::Cps => self.grid.compute_values(),
            Method::JpCc => vec![0.0],
        };
        let fly = self.grid.fly_values(s.delay_constraint_s);
        let headings = self.exec.map(&fly, |&t| self.optimize_heading(t));

        let (n_c, n_f) = (compute.len(), fly.len());
        let best = self
            .exec
            .map_reduce(
                n_c * n_c * n_f,
                |idx| {
                    let (i_pre, rest) = (idx / (n_c * n_f), idx % (n_c * n_f));
                    let (i_wf, i_fly) = (rest / n_f, rest % n_f);
                    let sol = self.choose_power(compute[i_pre], compute[i_wf], fly[i_fly], headings[i_fly]);
                    (sol, idx)
                },
                |a, b| match rank(&a.0, &b.0).then(a.1.cmp(&b.1)) {
                    Ordering::Greater => b,
                    _ => a,
                },
            )
            .map(|(sol, _)| sol)
            .expect("search grid always has the all-zero cell");

        if best.evaluation.feasible {
            Ok(best)
        } else {
            Err(Error::InfeasibleScenario {
                delay_constraint_s: s.delay_constraint_s,
                best_effort: Box::new((best.plan, best.evaluation)),
            })
        }
    }
}

/// Feasible before infeasible; feasible by energy, then total time, then
/// flight time; infeasible by total time (least violation), then energy.
pub fn rank(a: &Solution, b: &Solution) -> Ordering {
    let (x, y) = (&a.evaluation, &b.evaluation);
    match (x.feasible, y.feasible) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => x
            .e_total_j
            .total_cmp(&y.e_total_j)
            .then(x.t_total_s.total_cmp(&y.t_total_s))
            .then(a.plan.t_fly_s.total_cmp(&b.plan.t_fly_s)),
        (false, false) => x
            .t_total_s
            .total_cmp(&y.t_total_s)
            .then(x.e_total_j.total_cmp(&y.e_total_j))
            .then(a.plan.t_fly_s.total_cmp(&b.plan.t_fly_s)),
    }
}
