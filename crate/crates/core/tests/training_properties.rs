use ccgates::analysis::{mismatches, resolve, support, synthesize_target, TargetFunction};
use ccgates::network::{node_count, nodes};
use ccgates::oracle::truth_table_of;
use ccgates::training::{check_flip, execute, flip_input, plan};
use ccgates::{GateState, InputVector, Network, NodeId, StateVector, UnitTime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit(s: u32) -> UnitTime {
    UnitTime::new(s).unwrap()
}

fn sv(s: &str) -> StateVector {
    s.parse().unwrap()
}

#[test]
fn flipping_property_exhaustive_small() {
    for m in 1..=3 {
        for s in 1..=3 {
            for x in StateVector::all(m).unwrap() {
                for node in nodes(m) {
                    assert_eq!(check_flip(&x, node, unit(s)).unwrap(), None, "m={m} s={s} {x} {node}");
                }
            }
        }
    }
}

#[test]
fn flipping_property_sampled_m5() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let x = StateVector::from_code(5, rng.gen()).unwrap();
        let s = rng.gen_range(1..=3);
        for node in nodes(5) {
            assert_eq!(check_flip(&x, node, unit(s)).unwrap(), None);
        }
    }
}

/// Runs plan + execute and checks convergence, duration, and that nodes
/// visited before a directive never change during or after it.
fn converge(x0: &StateVector, x_star: &StateVector, s: u32) -> usize {
    let mut net = Network::new(unit(s), x0);
    let p = plan(&net, x_star).unwrap();
    let traces = execute(&mut net, &p).unwrap();
    assert_eq!(&net.state(), x_star);
    assert_eq!(traces.len() as u64, p.duration());
    assert_eq!(p.duration(), p.k_star() as u64 * s as u64);
    assert!(p.k_star() <= node_count(x0.m()));
    assert!(p.directives.windows(2).all(|w| w[0].node < w[1].node));
    for (k, d) in p.directives.iter().enumerate() {
        let block = &traces[k * s as usize..(k + 1) * s as usize];
        for tr in block {
            for r in tr.nodes.iter().filter(|r| r.node < d.node) {
                assert_eq!(r.state, r.next, "visited node {} moved during directive {k}", r.node);
            }
        }
    }
    p.k_star()
}

#[test]
fn one_pass_convergence_m2_all_s() {
    for s in 1..=3 {
        for x0 in StateVector::all(2).unwrap() {
            for x_star in StateVector::all(2).unwrap() {
                converge(&x0, &x_star, s);
            }
        }
    }
}

#[test]
fn k_star_counts_mismatches_at_visit_time() {
    // flipping (1,2) from YES disturbs (2,1): it receives (0,1) and, being OR,
    // goes through extinction; the plan must then reflip it.
    let x0 = sv("YES,YES,OR,YES,OR,OR,OR");
    let x_star = sv("YES,OR,OR,YES,OR,OR,OR");
    let net = Network::new(unit(2), &x0);
    let p = plan(&net, &x_star).unwrap();
    assert_eq!(mismatches(&x_star, &x0), vec![NodeId::new(1, 2)]);
    assert_eq!(p.nodes(), vec![NodeId::new(1, 2), NodeId::new(2, 1)]);
    assert_eq!(converge(&x0, &x_star, 2), 2);
}

#[test]
fn function_level_worked_example() {
    let x0 = sv("YES,YES,OR,YES,OR,OR,OR");
    let f = TargetFunction::new([1, 3, 4], [3]);
    let t = synthesize_target(&f, 3).unwrap().feasible().unwrap();
    let x_star = resolve(&t, &x0).unwrap();
    assert_eq!(x_star, sv("YES,YES,OR,YES,YES,OR,OR"));
    let mut net = Network::new(unit(3), &x0);
    let p = plan(&net, &x_star).unwrap();
    assert_eq!(p.nodes(), vec![NodeId::new(2, 1)]);
    assert_eq!(p.duration(), 3);
    execute(&mut net, &p).unwrap();
    let table = truth_table_of(&net.state()).unwrap();
    assert!(table.equals_function(&f));
    for k in 0..256 {
        let u = InputVector::from_index(3, k);
        let expect = u.v(1) || u.v(3) || u.w(3) || u.v(4);
        assert_eq!(table.get(k as usize), expect);
    }
}

/// The printed target for the worked example has a YES root, which passes
/// only the left subtree, so it realizes v11 alone, not v11|v13|w13|v14.
#[test]
fn printed_worked_example_target_realizes_only_v11() {
    let printed = sv("YES,YES,OR,YES,YES,OR,YES");
    assert_eq!(support(&printed), TargetFunction::new([1], []));
    let table = truth_table_of(&printed).unwrap();
    assert!(table.equals_function(&TargetFunction::new([1], [])));
    assert!(!table.equals_function(&TargetFunction::new([1, 3, 4], [3])));
}

/// The vector printed for flipping (2,1) in the first worked example is the
/// output-pinning input (1,0,...,0), which leaves every state unchanged; the
/// block construction gives (0,0,1,0,0,0,0,0) instead.
#[test]
fn printed_flip_vector_for_node_21_is_a_holding_input() {
    let x0 = sv("YES,YES,OR,YES,OR,OR,YES");
    let printed: InputVector = "1 0 0 0 0 0 0 0".parse().unwrap();
    let mut net = Network::new(unit(3), &x0);
    net.hold(&printed, 3).unwrap();
    assert_eq!(net.state(), x0);

    let built = flip_input(3, NodeId::new(2, 1), GateState::Or).unwrap();
    assert_eq!(built.to_string(), "0 0 1 0 0 0 0 0");
    let mut net = Network::new(unit(3), &x0);
    net.hold(&built, 3).unwrap();
    let after = net.state();
    assert_eq!(after.get(NodeId::new(2, 1)), GateState::Yes);
    for node in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2)] {
        let node = NodeId::new(node.0, node.1);
        assert_eq!(after.get(node), x0.get(node));
    }
}

#[test]
fn random_m4_training_runs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let x0 = StateVector::from_code(4, rng.gen()).unwrap();
        let x_star = StateVector::from_code(4, rng.gen()).unwrap();
        converge(&x0, &x_star, rng.gen_range(1..=3));
    }
}
