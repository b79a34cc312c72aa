//! Brute-force references shared by the integration suites. Nothing here
//! calls the optimisers or the search helpers.
#![allow(dead_code)]

use rand::Rng;
use uavcps::channel::channel_power_gain;
use uavcps::computation::{computation_energy, gap_coefficient, residual_bits};
use uavcps::geometry::{deviation_angle, final_position};
use uavcps::link::{achievable_rate, transmission_phase};
use uavcps::planner::{Evaluator, Method, Plan, PlanEvaluation, Scenario, SearchGrid};
use uavcps::propulsion::{hover_power, max_range_speed, propulsion_power};

/// Default sweep packet lengths, 20..200 Mbit.
pub fn default_sweep() -> Vec<u64> {
    (1..=10).map(|k| k * 20_000_000).collect()
}

/// Independent closed form of the rotary-wing power model.
pub fn power_closed_form(v: f64) -> f64 {
    let (p0, pi, utip, v0, d0, rho, s, a): (f64, f64, f64, f64, f64, f64, f64, f64) = (79.86, 88.63, 120.0, 4.03, 0.6, 1.225, 0.05, 0.503);
    p0 * (1.0 + 3.0 * v * v / (utip * utip))
        + pi * ((1.0 + v.powi(4) / (4.0 * v0.powi(4))).sqrt() - v * v / (2.0 * v0 * v0)).sqrt()
        + 0.5 * d0 * rho * s * a * v.powi(3)
}

/// Argmin of `f` over `k * step` for `k` in `1..=n`.
pub fn grid_argmin(step: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    (1..=n)
        .map(|k| k as f64 * step)
        .map(|v| (v, f(v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0
}

/// Rebuilds a plan evaluation by calling each model function in turn.
pub fn recompose(s: &Scenario, plan: &Plan) -> PlanEvaluation {
    let v = max_range_speed(&s.propulsion).unwrap();
    let hover = hover_power(&s.propulsion);
    let residual = residual_bits(&s.compute, s.packet_bits, plan.t_pre_s);
    let gap = gap_coefficient(&s.compute, plan.t_wf_s);
    let e_comp = computation_energy(&s.compute, plan.t_pre_s, plan.t_wf_s);
    let e_fly = propulsion_power(&s.propulsion, v).unwrap() * plan.t_fly_s;
    let pos = final_position(&s.geometry, plan.heading_rad, v, plan.t_fly_s);
    let dist = pos.distance(s.geometry.receiver_position);
    let gain = channel_power_gain(&s.channel, dist, deviation_angle(&s.geometry, pos).unwrap()).unwrap();
    let rate = achievable_rate(&s.radio, plan.tx_power_w, gain, gap).unwrap();
    let tx = transmission_phase(residual, rate, plan.tx_power_w, hover).unwrap();
    let e_hover = hover * (plan.t_pre_s + plan.t_wf_s) + tx.hover_energy_j;
    let t_total = plan.t_pre_s + plan.t_wf_s + plan.t_fly_s + tx.duration_s;
    PlanEvaluation {
        e_comp_j: e_comp,
        e_fly_j: e_fly,
        e_tx_j: tx.tx_energy_j,
        e_hover_j: e_hover,
        e_total_j: e_comp + e_fly + tx.tx_energy_j + e_hover,
        t_tx_s: tx.duration_s,
        t_total_s: t_total,
        residual_bits: residual,
        gap,
        final_gain_db: gain,
        final_distance_m: dist,
        rate_bps: rate,
        feasible: t_total <= s.delay_constraint_s,
    }
}

/// Heading with the best landing gain on a `step_deg` grid over [-180, 180].
pub fn scan_heading(ev: &Evaluator, t_fly: f64, step_deg: f64) -> (f64, f64) {
    let n = (360.0 / step_deg).round() as i64;
    (0..=n)
        .map(|k| (-180.0 + k as f64 * step_deg).to_radians())
        .map(|h| (h, ev.landing_gain_db(h, t_fly).unwrap_or(f64::NEG_INFINITY)))
        .fold((0.0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

pub struct Enumerated {
    pub plan: Plan,
    pub evaluation: PlanEvaluation,
}

/// Exhaustive search on the optimiser's duration grid: heading on a 0.1 deg
/// scan, power on `power_points` uniform levels up to the maximum.
pub fn enumerate(s: &Scenario, grid: &SearchGrid, method: Method, power_points: usize) -> Option<Enumerated> {
    let ev = Evaluator::new(s).unwrap();
    let steps = |step: f64, max: f64| {
        let n = (max / step + 1e-9).floor() as usize;
        (0..=n).map(move |k| k as f64 * step).collect::<Vec<_>>()
    };
    let compute = match method {
        Method::Cps => steps(grid.compute_step_s, grid.compute_max_s),
        Method::JpCc => vec![0.0],
    };
    let fly = steps(grid.fly_step_s, grid.fly_max_s.min(s.delay_constraint_s));
    let pmax = s.radio.max_tx_power_w;
    let mut best: Option<Enumerated> = None;
    for &t_fly in &fly {
        let (heading, _) = scan_heading(&ev, t_fly, 0.1);
        for &t_pre in &compute {
            for &t_wf in &compute {
                for k in 1..=power_points {
                    let plan = Plan { t_pre_s: t_pre, t_wf_s: t_wf, t_fly_s: t_fly, heading_rad: heading, tx_power_w: pmax * k as f64 / power_points as f64 };
                    let e = ev.evaluate(&plan);
                    if !e.feasible {
                        continue;
                    }
                    if best.as_ref().is_none_or(|b| e.e_total_j < b.evaluation.e_total_j) {
                        best = Some(Enumerated { plan, evaluation: e });
                    }
                }
            }
        }
    }
    best
}

/// Draws every model constant within +-50% of its default.
pub fn random_scenario<R: Rng>(rng: &mut R) -> Scenario {
    let mut s = Scenario::default();
    let mut j = |x: &mut f64| *x *= rng.gen_range(0.5..1.5);
    j(&mut s.channel.los_excess_loss_db);
    j(&mut s.channel.nlos_excess_loss_db);
    j(&mut s.channel.sigmoid_a);
    j(&mut s.channel.sigmoid_b);
    j(&mut s.channel.carrier_frequency_hz);
    j(&mut s.radio.bandwidth_hz);
    j(&mut s.radio.max_tx_power_w);
    j(&mut s.compute.cpu_frequency_hz);
    j(&mut s.compute.energy_coefficient);
    j(&mut s.compute.cycles_per_redundant_bit);
    j(&mut s.compute.max_redundancy_fraction);
    j(&mut s.compute.gap_decay_cycles);
    j(&mut s.propulsion.blade_profile_power_w);
    j(&mut s.propulsion.induced_power_w);
    j(&mut s.propulsion.fuselage_drag_ratio);
    j(&mut s.delay_constraint_s);
    let mut sep = 500.0;
    j(&mut sep);
    s.geometry = uavcps::geometry::Geometry::with_separation(sep);
    // The gap must stay >= 1, so jitter its excess over 1.
    s.compute.gap_initial = 1.0 + (s.compute.gap_initial - 1.0) * rng.gen_range(0.5..1.5);
    s.packet_bits = (100e6 * rng.gen_range(0.5..1.5)) as u64;
    s
}
