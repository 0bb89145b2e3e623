#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sublinear_fpp::graph::{Graph, Vertex};
use sublinear_fpp::percolation::WeightAssignment;

pub const TICKS: f64 = 4_294_967_296.0;

/// Random connected graph on 2..=max_n vertices: a random tree plus a few chords.
pub fn random_connected(seed: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v) as Vertex, v as Vertex));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let u = rng.random_range(0..n) as Vertex;
        let v = rng.random_range(0..n) as Vertex;
        if u != v
            && !edges.contains(&(u.min(v), u.max(v)))
            && !edges.contains(&(u.max(v), u.min(v)))
        {
            edges.push((u.min(v), u.max(v)));
        }
    }
    Graph::from_edges(n, &edges, 0).unwrap()
}

/// Every self-avoiding path from `u` to `v`.
pub fn simple_paths(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vec<Vertex>> {
    fn go(
        g: &Graph,
        cur: &mut Vec<Vertex>,
        on: &mut [bool],
        v: Vertex,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let x = *cur.last().unwrap();
        if x == v {
            out.push(cur.clone());
            return;
        }
        for &w in g.neighbors(x) {
            if !on[w as usize] {
                on[w as usize] = true;
                cur.push(w);
                go(g, cur, on, v, out);
                cur.pop();
                on[w as usize] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; g.vertex_count()];
    on[u as usize] = true;
    go(g, &mut vec![u], &mut on, v, &mut out);
    out
}

/// Edge length in 2^-32 units, straight from the real-valued weight.
pub fn edge_ticks(g: &Graph, omega: Option<&WeightAssignment>, a: Vertex, b: Vertex) -> u128 {
    let e = g.edge_index(a, b).expect("not an edge");
    match omega {
        None => 1,
        Some(w) => (w.weights()[e] * TICKS) as u128,
    }
}

pub fn path_ticks(g: &Graph, omega: Option<&WeightAssignment>, p: &[Vertex]) -> u128 {
    p.windows(2).map(|w| edge_ticks(g, omega, w[0], w[1])).sum()
}

/// Shortest path by enumeration: least length, then lexicographically least vertex sequence.
pub fn brute_shortest(
    g: &Graph,
    paths: &[Vec<Vertex>],
    omega: Option<&WeightAssignment>,
) -> (u128, Vec<Vertex>) {
    paths
        .iter()
        .map(|p| (path_ticks(g, omega, p), p.clone()))
        .min()
        .unwrap()
}

/// All-pairs distances by Floyd–Warshall, in ticks (hops for the base metric).
pub fn floyd(g: &Graph, omega: Option<&WeightAssignment>) -> Vec<Vec<u128>> {
    let n = g.vertex_count();
    let inf = u128::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in g.edges() {
        let t = edge_ticks(g, omega, a, b);
        d[a as usize][b as usize] = d[a as usize][b as usize].min(t);
        d[b as usize][a as usize] = d[b as usize][a as usize].min(t);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}
