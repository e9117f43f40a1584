use lofeed::optimize::{correction_patterns, optimize_correction, optimize_single, OptimizationProblem, OptimizerConfig};
use lofeed::{conditional_map, enumerate_outcomes, failure_stats, ns_canonical, ns_target, FockState, NetworkTemplate};

fn gate_problem() -> OptimizationProblem {
    OptimizationProblem::gate(NetworkTemplate::su3(), FockState::from([1, 0]), FockState::from([1, 0]), ns_target())
}

fn small(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 12, seed, ..Default::default() }
}

#[test]
fn reported_angles_replay_to_reported_objective() {
    let problem = gate_problem();
    let res = optimize_single(&problem, &small(3)).unwrap();
    let (objective, residual) = problem.evaluate(&res.angles).unwrap();
    assert!((objective - res.objective_value).abs() <= 1e-12);
    assert!((residual - res.constraint_residual).abs() <= 1e-12);
    assert!(res.constraint_residual <= 1e-8);
    assert!((res.objective_value - 0.25).abs() <= 1e-6, "{}", res.objective_value);

    let net = NetworkTemplate::su3().instantiate(&res.angles).unwrap();
    let map = conditional_map(&net, &FockState::from([1, 0]), &FockState::from([1, 0]), 2).unwrap();
    assert!((map.worst_case_probability() - res.objective_value).abs() <= 1e-12);
}

#[test]
fn objective_never_beats_worst_case_failure() {
    let ancilla = FockState::from([1, 0]);
    for seed in 0..3 {
        let res = optimize_single(&gate_problem(), &small(seed)).unwrap();
        let net = NetworkTemplate::su3().instantiate(&res.angles).unwrap();
        let stats = failure_stats(&enumerate_outcomes(&net, &ancilla, &ancilla, 2).unwrap()).unwrap();
        assert!(res.objective_value <= 1.0 - stats.max_failure + 1e-8);
    }
}

#[test]
fn runs_are_deterministic_and_schedule_independent() {
    let serial = OptimizerConfig { parallel: false, ..small(11) };
    let parallel = OptimizerConfig { parallel: true, ..small(11) };
    let a = optimize_single(&gate_problem(), &serial).unwrap();
    let b = optimize_single(&gate_problem(), &parallel).unwrap();
    let c = optimize_single(&gate_problem(), &parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn tighter_penalty_barely_moves_the_optimum() {
    let base = small(5);
    let mut tight = base.clone();
    tight.penalty_schedule.push(tight.penalty_schedule.last().unwrap() * 10.0);
    let a = optimize_single(&gate_problem(), &base).unwrap();
    let b = optimize_single(&gate_problem(), &tight).unwrap();
    assert!((a.objective_value - b.objective_value).abs() < 1e-4);
}

#[test]
fn adding_correction_is_deterministic_for_a_seed() {
    let ancilla = FockState::from([1, 0]);
    let syndrome = conditional_map(&ns_canonical(), &ancilla, &FockState::from([0, 0]), 2).unwrap();
    let candidates = correction_patterns(&ancilla, syndrome.delta());
    let config = OptimizerConfig { restarts: 1, seed: 7, ..Default::default() };
    let run = || {
        optimize_correction(&syndrome, &NetworkTemplate::su3(), &ancilla, &candidates, &ns_target(), &config, &[])
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.pattern, b.pattern);
    assert_eq!(a.result, b.result);
    assert!(a.result.constraint_residual <= 1e-8);
}
