mod common;

use common::*;
use proptest::prelude::*;
use sublinear_fpp::geodesy::{distance, middle_third, shortest_path};
use sublinear_fpp::graph::Vertex;
use sublinear_fpp::percolation::{sample_weights, DistributionSpec, WeightAssignment};
use sublinear_fpp::recurrence::{avoiding_path, recurrence_profile, Avoidance};

const DISTS: [&str; 4] = ["exp:1", "unif:0.5,1.5", "point:1", "pareto:1,2.5"];

fn dist(i: usize) -> DistributionSpec {
    DISTS[i % DISTS.len()].parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shortest_paths_match_enumeration(gseed in any::<u64>(), wseed in any::<u64>(), di in 0usize..4) {
        let g = random_connected(gseed, 8);
        let w = sample_weights(&g, &dist(di), wseed).unwrap();
        let n = g.vertex_count() as Vertex;
        for u in 0..n {
            for v in 0..n {
                let paths = simple_paths(&g, u, v);
                for omega in [None, Some(&w)] {
                    let (len, best) = brute_shortest(&g, &paths, omega);
                    let p = shortest_path(&g, u, v, omega).unwrap();
                    prop_assert_eq!(p.vertices(), &best[..]);
                    prop_assert_eq!(distance(&g, u, v, omega).unwrap(), len as f64 / if omega.is_some() { TICKS } else { 1.0 });
                }
            }
        }
    }

    #[test]
    fn metric_axioms(gseed in any::<u64>(), wseed in any::<u64>(), di in 0usize..4) {
        let g = random_connected(gseed, 10);
        let w = sample_weights(&g, &dist(di), wseed).unwrap();
        let n = g.vertex_count() as Vertex;
        for omega in [None, Some(&w)] {
            let d: Vec<Vec<f64>> = (0..n)
                .map(|u| (0..n).map(|v| distance(&g, u, v, omega).unwrap()).collect())
                .collect();
            for u in 0..n as usize {
                prop_assert_eq!(d[u][u], 0.0);
                for v in 0..n as usize {
                    prop_assert_eq!(d[u][v], d[v][u]);
                    if u != v {
                        prop_assert!(d[u][v] > 0.0);
                    }
                    for x in 0..n as usize {
                        prop_assert!(d[u][v] <= d[u][x] + d[x][v]);
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_matches_enumeration(gseed in any::<u64>(), wseed in any::<u64>(), di in 0usize..4, weighted in any::<bool>()) {
        let g = random_connected(gseed, 9);
        let w = sample_weights(&g, &dist(di), wseed).unwrap();
        let omega: Option<&WeightAssignment> = if weighted { Some(&w) } else { None };
        let scale = if weighted { TICKS } else { 1.0 };
        let d = floyd(&g, omega);
        let n = g.vertex_count() as Vertex;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let gamma = shortest_path(&g, a, b, omega).unwrap();
                let total = d[a as usize][b as usize];
                let middle: Vec<Vertex> = gamma
                    .vertices()
                    .iter()
                    .copied()
                    .filter(|&x| 3 * d[x as usize][a as usize].min(d[x as usize][b as usize]) >= total)
                    .collect();
                prop_assert_eq!(&middle_third(&g, &gamma, a, b, omega).unwrap(), &middle);
                let paths = simple_paths(&g, a, b);
                for c in [1.0, 1.5, 3.0] {
                    let report = &recurrence_profile(&g, &gamma, c, &[(a, b)], omega).unwrap()[0];
                    if middle.is_empty() {
                        prop_assert!(report.vacuous);
                        prop_assert_eq!(avoiding_path(&g, &gamma, a, b, 0.0, c, omega).unwrap(), Avoidance::Vacuous);
                        continue;
                    }
                    let to_m = |v: Vertex| middle.iter().map(|&m| d[v as usize][m as usize]).min().unwrap();
                    let cap = to_m(a).min(to_m(b));
                    let mut radii: Vec<u128> = (0..n).map(to_m).filter(|&r| r < cap).collect();
                    radii.sort();
                    radii.dedup();
                    let mut expected_d = 0.0;
                    let mut prev = true;
                    for &rho in &radii {
                        let best = paths
                            .iter()
                            .filter(|p| p.iter().all(|&v| to_m(v) > rho))
                            .map(|p| (path_ticks(&g, omega, p), p.clone()))
                            .min()
                            .filter(|(len, _)| *len as f64 <= c * total as f64);
                        let got = avoiding_path(&g, &gamma, a, b, rho as f64 / scale, c, omega).unwrap();
                        match (&best, &got) {
                            (Some((len, p)), Avoidance::Witness(wit)) => {
                                prop_assert_eq!(path_ticks(&g, omega, wit.vertices()), *len);
                                prop_assert_eq!(wit.vertices(), &p[..]);
                            }
                            (None, Avoidance::NoWitness) => {}
                            _ => prop_assert!(false, "rho {} c {}: oracle {:?} got {:?}", rho, c, best, got),
                        }
                        // existence is antitone in the radius
                        prop_assert!(prev || best.is_none());
                        prev = best.is_some();
                        if best.is_some() {
                            expected_d = rho as f64 / scale;
                        }
                    }
                    prop_assert_eq!(report.max_avoidance, expected_d);
                }
            }
        }
    }

    #[test]
    fn avoidance_is_monotone_in_the_slope(gseed in any::<u64>(), wseed in any::<u64>()) {
        let g = random_connected(gseed, 10);
        let w = sample_weights(&g, &dist(0), wseed).unwrap();
        let n = g.vertex_count() as Vertex;
        for a in 0..n {
            for b in a + 1..n {
                let gamma = shortest_path(&g, a, b, Some(&w)).unwrap();
                let ds: Vec<f64> = [1.0, 1.5, 2.0, 4.0, 8.0]
                    .iter()
                    .map(|&c| recurrence_profile(&g, &gamma, c, &[(a, b)], Some(&w)).unwrap()[0].max_avoidance)
                    .collect();
                prop_assert!(ds.windows(2).all(|x| x[0] <= x[1]), "{:?}", ds);
            }
        }
    }
}
