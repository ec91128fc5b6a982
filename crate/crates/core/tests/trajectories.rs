use approx::assert_relative_eq;
use proptest::prelude::*;

use weighted_lane_emden::emden_fowler::{integrate_cylinder, to_cylinder, CylinderSystem};
use weighted_lane_emden::io::{parse_trajectory_csv, trajectory_csv};
use weighted_lane_emden::ode::Tolerances;
use weighted_lane_emden::pohozaev::evaluate;
use weighted_lane_emden::shooter::{shoot, RadialTrajectory, ShootConfig, ShotOutcome};
use weighted_lane_emden::ProblemParams;

fn r0(params: &ProblemParams, beta: f64) -> f64 {
    match shoot(params, &ShootConfig { beta, ..ShootConfig::default() }).unwrap().outcome {
        ShotOutcome::CrossedZero { r0 } => r0,
        other => panic!("expected a crossing, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn crossing_radius_scales_with_beta(p in 1.5f64..4.5, b in 0.0f64..1.0, beta in 0.2f64..5.0) {
        let params = ProblemParams::new(3, 0.0, b, p);
        let expected = r0(&params, 1.0) * beta.powf(-(p - 1.0) / params.sigma());
        prop_assert!((r0(&params, beta) - expected).abs() <= 1e-7 * expected);
    }

    #[test]
    fn cylinder_system_is_autonomous(p in 5.5f64..9.0, t0 in -3.0f64..3.0, shift in -5.0f64..5.0) {
        let params = ProblemParams::new(3, 0.0, 0.0, p);
        let tol = Tolerances::default();
        let w0 = 0.3;
        let a = integrate_cylinder(&params, t0, w0, 0.1, t0 + 2.0, &tol).unwrap();
        let b = integrate_cylinder(&params, t0 + shift, w0, 0.1, t0 + shift + 2.0, &tol).unwrap();
        let (ea, eb) = (a.nodes.last().unwrap(), b.nodes.last().unwrap());
        prop_assert!((ea.w - eb.w).abs() <= 1e-9 && (ea.dw - eb.dw).abs() <= 1e-9);
    }
}

#[test]
fn crossing_radius_decreases_with_p_on_a_subcritical_ladder() {
    let mut last = f64::INFINITY;
    for p in [4.6, 4.2, 3.8, 3.4, 3.0, 2.5, 2.0] {
        let r = r0(&ProblemParams::new(3, 0.0, 0.0, p), 1.0);
        assert!(r < last, "r0({p}) = {r} not below {last}");
        last = r;
    }
}

#[test]
fn critical_shot_lies_on_the_zero_level_of_the_first_integral() {
    let params = ProblemParams::new(4, 0.0, 0.0, 3.0);
    let config = ShootConfig { r_max: 1e3, ..ShootConfig::default() };
    let traj = shoot(&params, &config).unwrap();
    assert!(!traj.outcome.crossed());
    let cyl = to_cylinder(&traj).unwrap();
    let system = CylinderSystem::new(&params).unwrap();
    for node in &cyl.nodes {
        assert!(system.hamiltonian(node.w, node.dw).abs() < 1e-9, "t = {}", node.t);
    }
}

#[test]
fn pohozaev_identity_over_a_radius_grid() {
    for (params, beta) in [
        (ProblemParams::new(3, 0.0, 0.0, 2.0), 1.0),
        (ProblemParams::new(4, 0.5, 1.0, 2.5), 0.7),
        (ProblemParams::new(3, 0.0, 0.0, 5.0), 1.0),
        (ProblemParams::new(5, 1.0, 0.0, 3.0), 2.0),
    ] {
        let traj = shoot(&params, &ShootConfig { beta, r_max: 50.0, ..ShootConfig::default() }).unwrap();
        let last = traj.positive_nodes().last().unwrap().r;
        for i in 0..25 {
            let radius = 1e-2 * (0.9 * last / 1e-2).powf(f64::from(i) / 24.0);
            let rep = evaluate(&traj, radius).unwrap();
            assert!(rep.relative_residual.abs() < 1e-6, "{params:?} R = {radius}: {rep:?}");
        }
    }
}

#[test]
fn csv_round_trip_preserves_pohozaev_values() {
    let params = ProblemParams::new(3, 0.0, 0.0, 3.0);
    let traj = shoot(&params, &ShootConfig::default()).unwrap();
    let parsed =
        RadialTrajectory::from_nodes(params, parse_trajectory_csv(&trajectory_csv(&traj.nodes)).unwrap()).unwrap();
    assert_eq!(parsed.nodes, traj.nodes);
    assert_eq!(parsed.outcome, traj.outcome);
    let (a, b) = (evaluate(&traj, 2.0).unwrap(), evaluate(&parsed, 2.0).unwrap());
    assert_relative_eq!(a.residual, b.residual);
}
