use lexmv_core::robustness::Measure;
use lexmv_core::stl::boolean_sat;
use lexmv_core::systems::running_example::{example_trajectories, overtaking, trajectory_fan, FAN_SIZE, FAN_START_T1, FAN_START_T2};
use lexmv_core::systems::{channel, mpc_loop, rollout, rollout_states, warm_start, Integrator, Scenario, SingleTrack, System};
use proptest::prelude::*;

fn inputs_strategy(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-0.3f64..=0.3, -8.0f64..=8.0), k + 1).prop_map(|v| v.into_iter().flat_map(|(a, b)| [a, b]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Reflecting about the x axis maps rollouts onto rollouts.
    #[test]
    fn single_track_mirror_symmetry(u in inputs_strategy(15), y0 in -2.0f64..2.0, th in -0.5f64..0.5, d in -0.4f64..0.4, v in 0.0f64..20.0) {
        let sys = SingleTrack::<f64>::default();
        let mirrored: Vec<f64> = u.chunks(2).flat_map(|c| [-c[0], c[1]]).collect();
        let a = rollout(&sys, &[0.0, y0, th, d, v], &u).unwrap();
        let b = rollout(&sys, &[0.0, -y0, -th, -d, v], &mirrored).unwrap();
        for k in 0..=a.horizon() {
            for ch in 0..sys.n_y() {
                let flip = matches!(ch, channel::Y | channel::THETA | channel::DELTA | channel::V_DELTA);
                let expect = if flip { -a.get(k, ch) } else { a.get(k, ch) };
                prop_assert!((b.get(k, ch) - expect).abs() <= 1e-9 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn integrator_stays_in_its_reachable_interval(u in prop::collection::vec(-1.35f64..=1.35, 9)) {
        let sys = Integrator::<f64>::default();
        let t = rollout(&sys, &[0.0], &u).unwrap();
        for k in 0..=8 {
            prop_assert!(t.get(k, 0).abs() <= 1.35 * k as f64 + 1e-12);
        }
    }

    #[test]
    fn warm_start_reproduces_the_remaining_plan(u in inputs_strategy(10)) {
        let sys = SingleTrack::<f64>::default();
        let x0 = [0.0, 0.0, 0.0, 0.0, 10.0];
        let states = rollout_states(&sys, &x0, &u).unwrap();
        let next = warm_start(&u, 2);
        prop_assert_eq!(next.len(), u.len());
        prop_assert_eq!(&next[..u.len() - 2], &u[2..]);
        prop_assert_eq!(&next[u.len() - 2..], &u[u.len() - 2..]);
        // states from x_1 under the shifted plan match the original tail
        let shifted = rollout_states(&sys, &states[5..10], &next).unwrap();
        for (a, b) in shifted[..states.len() - 5].iter().zip(&states[5..]) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn integrator_extremes_are_attained() {
    let sys = Integrator::<f64>::default();
    for k in 1..=8 {
        let t = rollout(&sys, &[0.0], &vec![1.35; k + 1]).unwrap();
        assert!((t.get(k, 0) - 1.35 * k as f64).abs() < 1e-12);
    }
}

const STATIC: &str = r#"
schema_version = 1
name = "static"
horizon = 4
initial_state = [0.0]

[system]
kind = "integrator"

[[predicates]]
id = "wide"
channel = 0
op = ">="
value = -100.0

[[specs]]
name = "anything"
formula = "G(wide)"
m = 3

[solver]
iterations = 4
samples = { kind = "constant", m = 20 }

[mpc]
steps = 3
"#;

#[test]
fn trivially_satisfiable_scenario_keeps_zero_cost() {
    let s = Scenario::from_toml_str(STATIC).unwrap();
    let cfg = s.solver_config().unwrap();
    let run = mpc_loop(&s, &cfg, s.mpc_steps(), None).unwrap();
    assert_eq!(run.steps.len(), 3);
    assert_eq!(run.states.len(), 4);
    assert_eq!(run.executed.horizon(), 3);
    assert!(run.steps.iter().all(|st| st.plan_cost.is_zero() && st.plan_discrete == vec![0]));
    assert!(run.evaluate(&s, None).unwrap().scalar.is_zero());

    let one = mpc_loop(&s, &cfg, 1, None).unwrap();
    assert_eq!((one.steps.len(), one.inputs.len(), one.executed.horizon()), (1, 1, 1));
    assert!(mpc_loop(&s, &cfg, 0, None).is_err());
}

#[test]
fn example_trajectories_follow_the_expected_order() {
    let s = overtaking().unwrap();
    let specs = s.spec_set_at(0, Some(Measure::SpaceLeftTime)).unwrap();
    let traces = example_trajectories(&s).unwrap();
    let cost = |c: char| specs.scalar_cost(&traces.iter().find(|t| t.0 == c).unwrap().1).unwrap();
    let order = ['b', 'a', 'c', 'e', 'd'];
    for w in order.windows(2) {
        assert!(cost(w[0]) < cost(w[1]), "{} should beat {}", w[0], w[1]);
    }
    let by_letter = |c: char| &traces.iter().find(|t| t.0 == c).unwrap().1;
    // d collides, e misses the progress goal, the others only leave the lane
    assert!(specs.discrete_costs(by_letter('d')).unwrap()[0] > 0);
    assert_eq!(specs.discrete_costs(by_letter('e')).unwrap()[0], 0);
    assert!(specs.discrete_costs(by_letter('e')).unwrap()[1] > 0);
    for c in ['a', 'b', 'c'] {
        let d = specs.discrete_costs(by_letter(c)).unwrap();
        assert_eq!(&d[..2], &[0, 0]);
        assert!(d[2] > 0);
    }
    let lane = &specs.specs()[2];
    assert!(!boolean_sat(lane.formula(), by_letter('d'), 0).unwrap());
}

#[test]
fn space_robustness_cannot_tell_a_from_b() {
    let s = overtaking().unwrap();
    let traces = example_trajectories(&s).unwrap();
    let get = |c: char| &traces.iter().find(|t| t.0 == c).unwrap().1;
    let space = s.spec_set_at(0, Some(Measure::Space)).unwrap();
    let lane = &space.specs()[2];
    assert_eq!(lane.robustness(get('a')).unwrap(), lane.robustness(get('b')).unwrap());
    let slt = s.spec_set_at(0, Some(Measure::SpaceLeftTime)).unwrap();
    let lane = &slt.specs()[2];
    assert!(lane.robustness(get('b')).unwrap() > lane.robustness(get('a')).unwrap());
}

#[test]
fn trajectory_fans() {
    let s = overtaking().unwrap();
    let lane_at = |m: Measure| s.spec_set_at(0, Some(m)).unwrap().specs()[2].clone();
    let t2 = trajectory_fan(&s, &FAN_START_T2).unwrap();
    assert_eq!(t2.len(), FAN_SIZE);
    // samples steering right all share the worst margin at k = 0 under space robustness
    let space = lane_at(Measure::Space);
    let sp: Vec<f64> = t2.iter().map(|t| space.robustness(t).unwrap().to_float()).collect();
    assert!(sp[10..].windows(2).all(|w| w[0] == w[1]), "{sp:?}");
    let slt = lane_at(Measure::SpaceLeftTime);
    let sl: Vec<f64> = t2.iter().map(|t| slt.robustness(t).unwrap().to_float()).collect();
    assert!(sl[10..].windows(2).all(|w| w[0] < w[1]), "{sl:?}");

    let t1 = trajectory_fan(&s, &FAN_START_T1).unwrap();
    let comb = lane_at(Measure::CombTime);
    let ct: Vec<f64> = t1.iter().map(|t| comb.robustness(t).unwrap().to_float()).collect();
    let inside: Vec<f64> = ct.iter().copied().filter(|v| *v > 0.0).collect();
    assert!(inside.len() >= 5 && inside.iter().all(|v| *v == inside[0]), "{ct:?}");
}
