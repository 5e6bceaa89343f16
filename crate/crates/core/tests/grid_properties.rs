use std::collections::{BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use qpf_core::grid::{branch_flows, build_reduced_system, solve_dc, Branch, Bus, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random connected network: a random spanning tree plus `extra` chords.
fn random_network(seed: u64, n: usize, extra: usize) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slack = rng.gen_range(0..n);
    let buses = (0..n)
        .map(|i| Bus {
            id: 10 + 3 * i as u32,
            slack: i == slack,
            p_injection: if i == slack {
                0.0
            } else {
                rng.gen_range(-2.0..2.0)
            },
        })
        .collect::<Vec<_>>();
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert((j, i));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let branches = edges
        .into_iter()
        .map(|(a, b)| Branch {
            from_bus: buses[a].id,
            to_bus: buses[b].id,
            x: rng.gen_range(0.01..0.5),
        })
        .collect();
    Network::new(100.0, buses, branches).unwrap()
}

fn index_of(net: &Network, id: u32) -> usize {
    net.buses().iter().position(|b| b.id == id).unwrap()
}

/// Full weighted Laplacian in `net.buses()` order, built from scratch.
fn full_laplacian(net: &Network) -> DMatrix<f64> {
    let n = net.buses().len();
    let mut l = DMatrix::zeros(n, n);
    for br in net.branches() {
        let (a, b) = (index_of(net, br.from_bus), index_of(net, br.to_bus));
        let y = 1.0 / br.x;
        l[(a, a)] += y;
        l[(b, b)] += y;
        l[(a, b)] -= y;
        l[(b, a)] -= y;
    }
    l
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_matrix_symmetric_and_pd(seed in any::<u64>(), n in 2usize..=8, extra in 0usize..6) {
        let sys = build_reduced_system(&random_network(seed, n, extra)).unwrap();
        prop_assert_eq!(&sys.b, &sys.b.transpose());
        let min = sys.b.clone().symmetric_eigenvalues().min();
        prop_assert!(min > 0.0);
    }

    #[test]
    fn solve_residual(seed in any::<u64>(), n in 2usize..=8, extra in 0usize..6) {
        let sys = build_reduced_system(&random_network(seed, n, extra)).unwrap();
        let theta = solve_dc(&sys).unwrap();
        let residual = (&sys.b * &theta - &sys.p).amax();
        prop_assert!(residual <= 1e-10 * sys.p.amax().max(1.0), "{residual}");
    }

    #[test]
    fn flows_match_pseudo_inverse(seed in any::<u64>(), n in 4usize..=8, extra in 0usize..6) {
        let net = random_network(seed, n, extra);
        let sys = build_reduced_system(&net).unwrap();
        let flows = branch_flows(&net, &sys, &solve_dc(&sys).unwrap());

        // Balanced injections: the slack absorbs the mismatch.
        let mut p: Vec<f64> = net.buses().iter().map(|b| if b.slack { 0.0 } else { b.p_injection }).collect();
        let slack = net.buses().iter().position(|b| b.slack).unwrap();
        p[slack] = -p.iter().sum::<f64>();
        let pinv = full_laplacian(&net).pseudo_inverse(1e-12).unwrap();
        let theta = pinv * DVector::from_vec(p);
        for (br, f) in net.branches().iter().zip(&flows) {
            let expected = (theta[index_of(&net, br.from_bus)] - theta[index_of(&net, br.to_bus)]) / br.x;
            prop_assert!((f - expected).abs() < 1e-8 * expected.abs().max(1.0), "{f} vs {expected}");
        }
    }

    #[test]
    fn tree_flows_are_downstream_sums(seed in any::<u64>(), n in 2usize..=8) {
        let net = random_network(seed, n, 0);
        let sys = build_reduced_system(&net).unwrap();
        let flows = branch_flows(&net, &sys, &solve_dc(&sys).unwrap());
        let injection = |i: usize| {
            let b = &net.buses()[i];
            if b.slack { 0.0 } else { b.p_injection }
        };
        for (skip, (br, f)) in net.branches().iter().zip(&flows).enumerate() {
            // Component of the `from` end once this branch is cut.
            let mut seen = vec![false; n];
            let start = index_of(&net, br.from_bus);
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for (k, e) in net.branches().iter().enumerate() {
                    if k == skip {
                        continue;
                    }
                    let (a, b) = (index_of(&net, e.from_bus), index_of(&net, e.to_bus));
                    for (x, y) in [(a, b), (b, a)] {
                        if x == u && !seen[y] {
                            seen[y] = true;
                            queue.push_back(y);
                        }
                    }
                }
            }
            let slack_on_from_side = net.buses().iter().zip(&seen).any(|(b, s)| b.slack && *s);
            let expected: f64 = if slack_on_from_side {
                -(0..n).filter(|&i| !seen[i]).map(injection).sum::<f64>()
            } else {
                (0..n).filter(|&i| seen[i]).map(injection).sum::<f64>()
            };
            prop_assert!((f - expected).abs() < 1e-9, "{f} vs {expected}");
        }
    }
}

#[test]
fn five_bus_tree_matches_explicit_inverse() {
    let buses = vec![
        Bus {
            id: 1,
            slack: true,
            p_injection: 0.0,
        },
        Bus {
            id: 2,
            slack: false,
            p_injection: 0.5,
        },
        Bus {
            id: 3,
            slack: false,
            p_injection: -0.8,
        },
        Bus {
            id: 4,
            slack: false,
            p_injection: 0.2,
        },
        Bus {
            id: 5,
            slack: false,
            p_injection: -0.4,
        },
    ];
    let branches = vec![
        Branch {
            from_bus: 1,
            to_bus: 2,
            x: 0.1,
        },
        Branch {
            from_bus: 2,
            to_bus: 3,
            x: 0.2,
        },
        Branch {
            from_bus: 2,
            to_bus: 4,
            x: 0.05,
        },
        Branch {
            from_bus: 4,
            to_bus: 5,
            x: 0.25,
        },
    ];
    let net = Network::new(100.0, buses, branches).unwrap();
    let sys = build_reduced_system(&net).unwrap();
    assert_eq!(sys.bus_order, vec![2, 3, 4, 5]);
    let expected = sys.b.clone().try_inverse().unwrap() * &sys.p;
    let theta = solve_dc(&sys).unwrap();
    assert!((theta - expected).amax() < 1e-9);
}
