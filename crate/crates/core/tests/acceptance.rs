//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report reads top to bottom.
//! Tolerances and runtime budgets are pinned below; reference values that
//! are irrational are evaluated from their closed forms.

use std::f64::consts::SQRT_2;
use std::process::Command;
use std::time::{Duration, Instant};

use lofeed::commands::{cmd_correct_both, cmd_optimize, RunOptions};
use lofeed::evolution::brute_force_element;
use lofeed::optimize::{optimize_chain, proportionality_residual, tradeoff_scan, ChainConfig};
use lofeed::{
    conditional_map, enumerate_outcomes, failure_stats, ideal_recovery_bound, matrix_element,
    max_success_ceiling, ns_canonical, ns_target, partial_ceiling, Classification, FockState, NetworkSpec,
    NetworkTemplate, PureState, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_TOL: f64 = 1e-9;
const VACUUM_FAILURE_TOL: f64 = 1e-12;
const RECOVERY_BOUND_TOL: f64 = 1e-4;
const CEILING_TOL: f64 = 1e-3;
const ADDED_PROBABILITY_TOL: f64 = 1e-3;
const GATE_TOTAL_TOL: f64 = 2e-3;
const CHAIN_TOTAL_TOL: f64 = 5e-3;
const CHAIN_FAILURE_TOL: f64 = 1e-2;
const VARIANT_SUCCESS_TOL: f64 = 2e-3;
const VARIANT_FAILURE_TOL: f64 = 5e-3;
const ORACLE_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-10;
const GRID_STEP: f64 = 1e-3;
const SECOND_ROUND_CHANGE: f64 = 0.01;

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Hard,
    Soft,
}

struct Outcome {
    pass: bool,
    detail: String,
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn run(&mut self, id: &str, title: &str, kind: Kind, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = outcome.pass && in_time;
        let status = match (pass, kind) {
            (true, _) => "PASS",
            (false, Kind::Soft) => "WARN",
            (false, Kind::Hard) => "FAIL",
        };
        if !pass && kind == Kind::Hard {
            self.failures += 1;
        }
        let timing = if in_time { "" } else { " OVER BUDGET" };
        println!(
            "{status} {id:>3} {title}: {} [{:.2}s / {}s{timing}]",
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
}

fn within(value: f64, reference: f64, tol: f64) -> bool {
    (value - reference).abs() <= tol
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn phase_aligned_gap(a: &[C64], b: &[C64]) -> f64 {
    let overlap: C64 = b.iter().zip(a).map(|(x, y)| x.conj() * y).sum();
    let phase = overlap / overlap.norm();
    a.iter().zip(b).map(|(x, y)| (x - y * phase).norm()).fold(0.0, f64::max)
}

fn random_network(rng: &mut ChaCha8Rng, splitters: usize) -> NetworkSpec {
    let mut net = NetworkSpec::new(3).unwrap();
    for _ in 0..splitters {
        let a = rng.random_range(0..3);
        let b = (a + rng.random_range(1..3)) % 3;
        net = net.with_splitter(a, b, rng.random_range(0.0..std::f64::consts::TAU)).unwrap();
    }
    net
}

fn ancilla() -> FockState {
    FockState::from([1, 0])
}

fn c1_gate() -> Outcome {
    let map = conditional_map(&ns_canonical(), &ancilla(), &ancilla(), 2).unwrap();
    let a = map.amplitudes();
    let magnitude_gap = a.iter().map(|x| (x.norm() - 0.5).abs()).fold(0.0, f64::max);
    let sign_flip = (a[2] / a[0] + 1.0).norm() < EXACT_TOL && (a[1] / a[0] - 1.0).norm() < EXACT_TOL;
    let residual = proportionality_residual(a, &ns_target()).unwrap();
    let p = map.worst_case_probability();
    Outcome {
        pass: magnitude_gap <= EXACT_TOL && sign_flip && residual <= EXACT_TOL && within(p, 0.25, EXACT_TOL),
        detail: format!("p={p:.12} |a|-0.5<={magnitude_gap:.1e} sign_flip={sign_flip} residual={residual:.1e}"),
    }
}

fn gate_records() -> Vec<lofeed::OutcomeRecord> {
    enumerate_outcomes(&ns_canonical(), &ancilla(), &ancilla(), 2).unwrap()
}

fn c2_failure() -> Outcome {
    let s = failure_stats(&gate_records()).unwrap();
    let avg_ref = 41.0 / SQRT_2 - 86.0 / 3.0;
    let max_ref = 57.0 * SQRT_2 - 80.0;
    Outcome {
        pass: within(s.average_failure, avg_ref, EXACT_TOL)
            && within(s.max_failure, max_ref, EXACT_TOL)
            && s.argmax_input == 2
            && s.per_input_failure[0].abs() <= VACUUM_FAILURE_TOL,
        detail: format!(
            "avg={:.12} (ref {avg_ref:.12}) max={:.12} (ref {max_ref:.12}) at |{}> q0={:.1e}",
            s.average_failure, s.max_failure, s.argmax_input, s.per_input_failure[0]
        ),
    }
}

fn c3_syndromes() -> Outcome {
    let q = 2f64.powf(0.25);
    let adding = [1.0 / q, q * (1.0 - SQRT_2), (51.0 - 36.0 * SQRT_2).sqrt() / q];
    let preserving = [(1.0 - SQRT_2) / 2.0, (5.0 - 3.0 * SQRT_2) / 2.0, (15.0 - 11.0 * SQRT_2) / 2.0];
    let gap = |pattern: [usize; 2], expect: &[f64]| {
        let map = conditional_map(&ns_canonical(), &ancilla(), &FockState::from(pattern), 2).unwrap();
        phase_aligned_gap(map.amplitudes(), &real(expect))
    };
    let (g00, g01) = (gap([0, 0], &adding), gap([0, 1], &preserving));
    Outcome {
        pass: g00 <= EXACT_TOL && g01 <= EXACT_TOL,
        detail: format!("|0,0> gap={g00:.1e} |0,1> gap={g01:.1e}"),
    }
}

fn c4_bounds() -> Outcome {
    let records = gate_records();
    let target = ns_target();
    let bound = |p: [usize; 2]| {
        let rec = records.iter().find(|r| r.pattern == FockState::from(p)).unwrap();
        ideal_recovery_bound(&rec.map, &target)
    };
    let (b00, b01) = (bound([0, 0]), bound([0, 1]));
    let ceiling = max_success_ceiling(&records, &target);
    let partial = partial_ceiling(&records, &target, &[Classification::CorrectableAdding]);
    Outcome {
        pass: within(b00, 0.0625, RECOVERY_BOUND_TOL)
            && within(b01, 0.0429, RECOVERY_BOUND_TOL)
            && within(ceiling, 0.355, CEILING_TOL)
            && within(partial, 0.312, CEILING_TOL),
        detail: format!("bound00={b00:.6} bound01={b01:.6} ceiling={ceiling:.6} partial={partial:.6}"),
    }
}

fn c5_corrections() -> Outcome {
    let (r00, r01) = cmd_correct_both(&RunOptions::default()).unwrap();
    let v = |r: &lofeed::report::Report, name: &str| r.find(name).unwrap().value;
    let (p00, t00) = (v(&r00, "added_probability"), v(&r00, "gate_total"));
    let (p01, t01) = (v(&r01, "added_probability"), v(&r01, "running_total"));
    Outcome {
        pass: within(p00, 0.007, ADDED_PROBABILITY_TOL)
            && within(t00, 0.257, GATE_TOTAL_TOL)
            && within(p01, 0.015, ADDED_PROBABILITY_TOL)
            && within(t01, 0.272, GATE_TOTAL_TOL),
        detail: format!("|0,0> adds {p00:.6} (total {t00:.6}); |0,1> adds {p01:.6} (total {t01:.6})"),
    }
}

fn c7_variant() -> Outcome {
    let r = cmd_optimize(&RunOptions::default(), &FockState::from([1, 1])).unwrap();
    let p = r.find("success_probability").unwrap().value;
    let q = r.find("max_failure").unwrap().value;
    Outcome {
        pass: within(p, 0.236, VARIANT_SUCCESS_TOL) && within(q, 0.546, VARIANT_FAILURE_TOL),
        detail: format!("success={p:.6} max_failure={q:.6}"),
    }
}

fn c8_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let basis = FockState::enumerate(3, 4);
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    for _ in 0..100 {
        let net = random_network(&mut rng, 6);
        let lambda = net.compose();
        for input in &basis {
            for output in basis.iter().filter(|o| o.total_photons() == input.total_photons()) {
                let perm = matrix_element(lambda.matrix(), output, input).unwrap();
                let brute = brute_force_element(&net, output, input, 4).unwrap();
                worst = worst.max((perm - brute).norm());
                pairs += 1;
            }
        }
    }
    Outcome { pass: worst <= ORACLE_TOL, detail: format!("{pairs} elements, max deviation {worst:.1e}") }
}

fn c9_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let net = random_network(&mut rng, 5);
        let records = enumerate_outcomes(&net, &ancilla(), &ancilla(), 2).unwrap();
        for _ in 0..50 {
            let coeffs: Vec<C64> = (0..3).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let signal = PureState::single_mode(&coeffs).normalized().unwrap();
            let total: f64 = records.iter().map(|r| r.map.branch_probability(&signal).unwrap()).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    Outcome { pass: worst <= COMPLETENESS_TOL, detail: format!("500 signals, max |sum - 1| = {worst:.1e}") }
}

fn c10_tradeoff() -> Outcome {
    let scan = tradeoff_scan(
        &NetworkTemplate::su3(),
        &ns_canonical().angles(),
        2,
        &ancilla(),
        &ancilla(),
        &FockState::from([0, 1]),
        &ns_target(),
        GRID_STEP,
    )
    .unwrap();
    Outcome {
        pass: scan.offset() <= GRID_STEP,
        detail: format!(
            "argmax p10 = {:.3}, argmin p01 = {:.3} over {} grid points",
            scan.argmax_success,
            scan.argmin_syndrome,
            scan.rows.len()
        ),
    }
}

fn all_json() -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_lofeed"))
        .args(["all", "--seed", "0", "--format", "json"])
        .output()
        .expect("binary runs");
    String::from_utf8(out.stdout).expect("utf-8 report")
}

fn c12_determinism() -> Outcome {
    let (a, b) = (all_json(), all_json());
    let results = |s: &str| {
        let v: serde_json::Value = serde_json::from_str(s).expect("valid json");
        serde_json::to_string_pretty(&v["results"]).unwrap()
    };
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n");
    let (ra, rb) = (results(&a), results(&b));
    let identical = ra == rb && strip(&a) == strip(&b) && !ra.is_empty();
    Outcome { pass: identical, detail: format!("results sections identical={identical} ({} bytes)", ra.len()) }
}

fn main() {
    let mut suite = Suite { failures: 0 };
    let secs = Duration::from_secs;
    suite.run("1", "canonical gate", Kind::Hard, secs(1), c1_gate);
    suite.run("2", "failure statistics", Kind::Hard, secs(1), c2_failure);
    suite.run("3", "syndrome maps", Kind::Hard, secs(1), c3_syndromes);
    suite.run("4", "recovery bounds", Kind::Hard, secs(1), c4_bounds);
    suite.run("5", "correction optimizations", Kind::Hard, secs(120), c5_corrections);

    let mut chain = None;
    suite.run("6", "joint chain", Kind::Hard, secs(300), || {
        let res = optimize_chain(&ChainConfig { rounds: 2, ..Default::default() }).unwrap();
        let outcome = Outcome {
            pass: within(res.total, 0.28, CHAIN_TOTAL_TOL) && within(res.max_failure, 0.66, CHAIN_FAILURE_TOL),
            detail: format!(
                "total={:.6} max_failure={:.6} (direct+retry alone {:.6}, failure incl. adding network {:.6})",
                res.total,
                res.max_failure,
                res.formula_total,
                res.max_failure_with_adding.unwrap_or(f64::NAN)
            ),
        };
        chain = Some(res);
        outcome
    });
    let chain = chain.expect("chain optimized");

    suite.run("7", "two-photon ancilla variant", Kind::Hard, secs(120), c7_variant);
    suite.run("8", "oracle equivalence", Kind::Hard, secs(30), c8_oracle);
    suite.run("9", "completeness", Kind::Hard, secs(10), c9_completeness);
    suite.run("10", "trade-off coincidence", Kind::Hard, secs(30), c10_tradeoff);
    suite.run("11", "second correction round", Kind::Soft, secs(300), || {
        let second = chain.second_round.as_ref().expect("two rounds requested");
        let change = second.total - chain.total;
        Outcome {
            pass: change.abs() < SECOND_ROUND_CHANGE,
            detail: format!("change={change:.3e} via {} correction", second.correction.pattern),
        }
    });
    suite.run("12", "determinism of `all --seed 0`", Kind::Hard, secs(600), c12_determinism);

    if suite.failures > 0 {
        println!("{} hard criteria failed", suite.failures);
        std::process::exit(1);
    }
    println!("all hard criteria passed");
}
