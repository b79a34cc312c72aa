//! Exit criteria. Each test prints one `criterion N: PASS|FAIL` line with the
//! measured values; run with `--nocapture` to see them.

mod common;

use std::f64::consts::FRAC_PI_3;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::{default_sweep, enumerate, grid_argmin, power_closed_form, random_scenario, recompose};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uavcps::dcf::{linspace, peak_throughput, DcfParams};
use uavcps::harness::{run_dcf, run_sweep, RowKind, SweepResult, SweepSpec};
use uavcps::orient::{orient, synthetic_trace, Cause, EnvironmentProfile, IssueDimension, LinkObservation, OrientThresholds};
use uavcps::planner::{evaluate_plan, Method, Plan, Planner, Scenario, SearchGrid};
use uavcps::propulsion::{hover_power, max_range_speed, propulsion_power, PropulsionParams};
use uavcps::{Error, Execution};

const RANDOM_SCENARIOS: usize = 200;
const ENERGY_BAND_PCT: (f64, f64) = (20.0, 45.0);
const MIN_DELAY_REDUCTION_PCT: f64 = 20.0;
const DCF_SLOTS: u64 = 1_000_000;
const DCF_ABS_TOL: f64 = 0.01;
const SPEED_GRID_MPS: f64 = 0.01;
const ENUMERATION_POWER_LEVELS: usize = 1000;
/// Relative slack allowed to the optimiser over the enumeration's discrete
/// power levels, in either direction.
const ENUMERATION_REL_TOL: f64 = 1e-3;

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn default_sweep_result() -> &'static (SweepResult, Duration) {
    static CELL: OnceLock<(SweepResult, Duration)> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let spec = SweepSpec { packet_bits_list: default_sweep(), output_path: None };
        let r = run_sweep(&Scenario::default(), &SearchGrid::default(), &spec, Execution::Parallel).unwrap();
        (r, start.elapsed())
    })
}

fn optimum(planner: &Planner, method: Method) -> Option<uavcps::planner::Solution> {
    match planner.optimize(method) {
        Ok(s) => Some(s),
        Err(Error::InfeasibleScenario { .. }) => None,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn criterion_1_dominance() {
    let start = Instant::now();
    let mut scenarios: Vec<Scenario> = default_sweep().into_iter().map(|b| Scenario::default().with_packet_bits(b)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    scenarios.extend((0..RANDOM_SCENARIOS).map(|_| random_scenario(&mut rng)));

    let (mut both, mut violations, mut fly_worse) = (0, Vec::new(), 0);
    for (i, s) in scenarios.iter().enumerate() {
        let planner = Planner::new(s).unwrap();
        let (cps, jp) = (optimum(&planner, Method::Cps), optimum(&planner, Method::JpCc));
        if jp.is_some() && cps.is_none() {
            violations.push(format!("#{i}: JP-CC feasible but CPS not"));
        }
        if let (Some(c), Some(j)) = (cps, jp) {
            both += 1;
            if c.evaluation.e_total_j > j.evaluation.e_total_j {
                violations.push(format!("#{i}: E {} > {}", c.evaluation.e_total_j, j.evaluation.e_total_j));
            }
            if c.evaluation.t_total_s > j.evaluation.t_total_s {
                violations.push(format!("#{i}: T {} > {}", c.evaluation.t_total_s, j.evaluation.t_total_s));
            }
            if c.plan.t_fly_s > j.plan.t_fly_s {
                fly_worse += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 4 (report only): CPS flies longer than JP-CC on {fly_worse} of {both} randomized/sweep scenarios");
    report(
        1,
        violations.is_empty() && elapsed < Duration::from_secs(300),
        format!("{} scenarios, {both} with both feasible, violations {:?}, {:.1?}", scenarios.len(), violations, elapsed),
    );
}

#[test]
fn criterion_2_trend_band() {
    let (r, elapsed) = default_sweep_result();
    let e = r.mean_energy_reduction_pct.unwrap_or(f64::NAN);
    let t = r.mean_delay_reduction_pct.unwrap_or(f64::NAN);
    let feasible_rows = r.rows.iter().filter(|row| row.energy_reduction().is_some()).count();
    report(
        2,
        (ENERGY_BAND_PCT.0..=ENERGY_BAND_PCT.1).contains(&e)
            && t > MIN_DELAY_REDUCTION_PCT
            && *elapsed < Duration::from_secs(60),
        format!("mean energy reduction {e:.2}% (band {ENERGY_BAND_PCT:?}), mean delay reduction {t:.2}% (> {MIN_DELAY_REDUCTION_PCT}), {feasible_rows}/10 rows, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_3_monotone_in_packet_length() {
    let (r, _) = default_sweep_result();
    let mut bad = Vec::new();
    for w in r.rows.windows(2) {
        for (name, a, b) in [("CPS", &w[0].cps, &w[1].cps), ("JP-CC", &w[0].jpcc, &w[1].jpcc)] {
            if b.evaluation.e_total_j < a.evaluation.e_total_j || b.evaluation.t_total_s < a.evaluation.t_total_s {
                bad.push(format!("{name} {} -> {} bits", w[0].packet_bits, w[1].packet_bits));
            }
        }
    }
    report(3, bad.is_empty(), format!("{} sweep points, decreases at {bad:?}", r.rows.len()));
}

#[test]
fn criterion_4_less_flying() {
    let (r, _) = default_sweep_result();
    let flights: Vec<(f64, f64)> = r.rows.iter().map(|row| (row.cps.plan.t_fly_s, row.jpcc.plan.t_fly_s)).collect();
    let pass = flights.iter().all(|(c, j)| c <= j);
    report(4, pass, format!("(CPS, JP-CC) flight seconds per sweep point {flights:?}"));
}

#[test]
fn criterion_5_propulsion() {
    let p = PropulsionParams::default();
    let n = (60.0 / SPEED_GRID_MPS).round() as usize;
    let v_mr = max_range_speed(&p).unwrap();
    let grid_mr = grid_argmin(SPEED_GRID_MPS, n, |v| power_closed_form(v) / v);
    let at_mr = propulsion_power(&p, v_mr).unwrap() / v_mr;
    let never_beaten = (1..=n).all(|k| {
        let v = k as f64 * SPEED_GRID_MPS;
        at_mr <= power_closed_form(v) / v + 1e-12
    });

    let powers: Vec<f64> = (0..=n).map(|k| propulsion_power(&p, k as f64 * SPEED_GRID_MPS).unwrap()).collect();
    let k_min = powers.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let interior = k_min > 0 && k_min < n && powers[0] > powers[k_min] && powers[n] > powers[k_min];
    let hover_ok = hover_power(&p).to_bits() == propulsion_power(&p, 0.0).unwrap().to_bits();

    report(
        5,
        interior && never_beaten && (v_mr - grid_mr).abs() <= SPEED_GRID_MPS && hover_ok,
        format!(
            "P(V) min at {:.2} m/s ({:.2} W < hover {:.2} W); V_mr {v_mr:.4} m/s vs grid {grid_mr:.2}; hover==P(0): {hover_ok}",
            k_min as f64 * SPEED_GRID_MPS,
            powers[k_min],
            powers[0]
        ),
    );
}

#[test]
fn criterion_6_dcf_oracle() {
    let start = Instant::now();
    let sweep = uavcps::harness::DcfSweep {
        params: DcfParams::default(),
        n_values: vec![5, 10, 50],
        tau_grid: linspace(0.001, 0.5, 50),
        monte_carlo_slots: DCF_SLOTS,
        seed: 6,
    };
    let rows = run_dcf(&sweep, Execution::Parallel).unwrap();
    let curve = |n: u32| rows.iter().filter(move |r| r.n_stations == n && r.kind == RowKind::Curve);
    let worst = rows.iter().filter_map(|r| r.monte_carlo.map(|m| (m - r.throughput).abs())).fold(0.0, f64::max);
    let unimodal = sweep.n_values.iter().all(|&n| {
        let fine: Vec<f64> = (1..1000)
            .map(|k| uavcps::dcf::saturation_throughput(&sweep.params.with_stations(n), k as f64 * 1e-3))
            .collect();
        let k = fine.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        fine[..=k].windows(2).all(|w| w[1] >= w[0]) && fine[k..].windows(2).all(|w| w[1] <= w[0])
    });
    let taus: Vec<f64> = sweep.n_values.iter().map(|&n| peak_throughput(&sweep.params.with_stations(n)).unwrap().0).collect();
    let decreasing = taus.windows(2).all(|w| w[1] < w[0]);
    let points = sweep.n_values.iter().map(|&n| curve(n).count()).sum::<usize>();
    let elapsed = start.elapsed();
    report(
        6,
        worst <= DCF_ABS_TOL && unimodal && decreasing && points == 150 && elapsed < Duration::from_secs(120),
        format!("max |analytic - MC| {worst:.5} over {points} points; unimodal {unimodal}; tau* {taus:?}; {elapsed:.1?}"),
    );
}

#[test]
fn criterion_7_module_oracles() {
    let start = Instant::now();
    let mut shadowed = Scenario::default();
    shadowed.channel.nlos_excess_loss_db = 40.0;

    let plans = [
        Plan { t_pre_s: 1.0, t_wf_s: 1.0, t_fly_s: 10.0, heading_rad: FRAC_PI_3, tx_power_w: 5.0 },
        Plan { t_pre_s: 0.0, t_wf_s: 2.5, t_fly_s: 3.0, heading_rad: -0.4, tx_power_w: 0.7 },
        Plan { t_pre_s: 4.0, t_wf_s: 0.0, t_fly_s: 19.5, heading_rad: 2.9, tx_power_w: 2.2 },
    ];
    let recomposed = [Scenario::default(), shadowed]
        .iter()
        .all(|s| plans.iter().all(|p| evaluate_plan(s, p).unwrap() == recompose(s, p)));

    let mut fixed = vec![
        Scenario::default(),
        Scenario::default().with_packet_bits(200_000_000),
        shadowed,
        Scenario { delay_constraint_s: 8.0, packet_bits: 100_000_000, ..Default::default() },
    ];
    let mut tuned = Scenario::default().with_packet_bits(150_000_000);
    tuned.compute.cycles_per_redundant_bit = 10.0;
    tuned.compute.gap_initial = 4.0;
    fixed.push(tuned);

    let grid = SearchGrid::default();
    let mut mismatches = Vec::new();
    for (i, s) in fixed.iter().enumerate() {
        let ours = Planner::new(s).unwrap().optimize(Method::Cps).unwrap().evaluation.e_total_j;
        let oracle = enumerate(s, &grid, Method::Cps, ENUMERATION_POWER_LEVELS).unwrap().evaluation.e_total_j;
        if (ours - oracle).abs() > ENUMERATION_REL_TOL * oracle {
            mismatches.push(format!("#{i}: {ours} vs {oracle}"));
        }
    }
    let elapsed = start.elapsed();
    report(
        7,
        recomposed && mismatches.is_empty() && elapsed < Duration::from_secs(180),
        format!("recomposition bit-exact: {recomposed}; enumeration mismatches on 5 scenarios: {mismatches:?}; {elapsed:.1?}"),
    );
}

#[test]
fn criterion_8_orient_table() {
    let th = OrientThresholds::default();
    let (mut agree, mut total) = (0, 0);
    for profile in EnvironmentProfile::ALL {
        for rec in synthetic_trace(profile, 1000, 8) {
            total += 1;
            agree += (orient(&rec.observation, &th).cause == rec.label.unwrap()) as usize;
        }
    }

    let mut checked = 0;
    let mut invariants_hold = true;
    let limit = th.retx_saturation_fraction * 7.0;
    for avg in [0.0, limit - 1e-9, limit, limit + 1e-9, 7.0] {
        for loss in [0.0, th.loss_threshold - 1e-9, th.loss_threshold, th.loss_threshold + 1e-9, 1.0] {
            for rssi in [-130.0, th.rssi_floor_dbm - 1e-9, th.rssi_floor_dbm, th.rssi_floor_dbm + 1e-9, -30.0] {
                for idle in [-120.0, th.interference_threshold_dbm - 1e-9, th.interference_threshold_dbm, th.interference_threshold_dbm + 1e-9, -40.0] {
                    let obs = LinkObservation {
                        avg_retransmissions: avg,
                        max_retransmissions: 7,
                        packet_loss_rate: loss,
                        rssi_dbm: rssi,
                        idle_channel_energy_dbm: idle,
                        sinr_db: 0.0,
                    };
                    let o = orient(&obs, &th);
                    checked += 1;
                    invariants_hold &= match o.cause {
                        Cause::Shadowing => o.issue_dimension == IssueDimension::Control,
                        Cause::Collision | Cause::Interference => o.issue_dimension == IssueDimension::Communication,
                        Cause::Nominal => true,
                    };
                }
            }
        }
    }
    report(
        8,
        agree == total && invariants_hold,
        format!("label agreement {agree}/{total}; invariants hold on {checked} boundary points: {invariants_hold}"),
    );
}

#[test]
fn criterion_9_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_uavcps"))
            .args(["sweep", "--out", name])
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    report(9, a == b && !a.is_empty(), format!("two default sweeps, {} bytes each, identical: {}", a.len(), a == b));
}
