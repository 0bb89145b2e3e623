//! Exact distances and shortest paths in the base metric `d` and the
//! percolated metric `d_ω`.
//!
//! Lengths are accumulated as unsigned integers: hop counts in the base
//! metric and weight ticks (units of 2^-32) in the weighted metric. Sums are
//! therefore exact and order independent, which makes symmetry, the
//! triangle inequality and the lexicographic tie-break exact as well.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Fingerprint, Graph, Vertex};
use crate::percolation::WeightAssignment;

/// Weight ticks per unit of passage time.
pub const TICKS_PER_UNIT: f64 = 4_294_967_296.0;

pub(crate) const UNREACHED: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricTag {
    Base,
    Omega,
}

impl fmt::Display for MetricTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricTag::Base => "base",
            MetricTag::Omega => "omega",
        })
    }
}

/// The metric a query runs in.
#[derive(Clone, Copy, Debug)]
pub enum Metric<'a> {
    Base,
    Omega(&'a WeightAssignment),
}

impl<'a> Metric<'a> {
    /// Selects the weighted metric when `omega` is present, checking that the
    /// weights were sampled on `g`.
    pub fn new(g: &Graph, omega: Option<&'a WeightAssignment>) -> Result<Self> {
        match omega {
            None => Ok(Metric::Base),
            Some(w) => {
                if w.graph_fingerprint != g.fingerprint() {
                    return Err(Error::Provenance {
                        expected: g.fingerprint().to_string(),
                        found: w.graph_fingerprint.to_string(),
                    });
                }
                Ok(Metric::Omega(w))
            }
        }
    }

    pub fn tag(&self) -> MetricTag {
        match self {
            Metric::Base => MetricTag::Base,
            Metric::Omega(_) => MetricTag::Omega,
        }
    }

    pub fn weights(&self) -> Option<&'a WeightAssignment> {
        match *self {
            Metric::Base => None,
            Metric::Omega(w) => Some(w),
        }
    }

    #[inline]
    pub fn cost(&self, edge: usize) -> u64 {
        match self {
            Metric::Base => 1,
            Metric::Omega(w) => w.ticks()[edge],
        }
    }

    /// Converts an integer length into the metric's real value.
    pub fn to_value(&self, units: u64) -> f64 {
        match self {
            Metric::Base => units as f64,
            Metric::Omega(_) => units as f64 / TICKS_PER_UNIT,
        }
    }

    /// Largest integer length not exceeding `value`.
    pub fn floor_units(&self, value: f64) -> u64 {
        if value <= 0.0 {
            return 0;
        }
        let scaled = match self {
            Metric::Base => value,
            Metric::Omega(_) => value * TICKS_PER_UNIT,
        };
        if scaled >= u64::MAX as f64 {
            u64::MAX - 1
        } else {
            scaled.floor() as u64
        }
    }
}

/// Single-source distances in integer units; [`UNREACHED`] marks unreachable
/// or blocked vertices.
pub(crate) fn distances_from(g: &Graph, metric: Metric<'_>, source: Vertex) -> Vec<u64> {
    distances_restricted(g, metric, &[source], None, None)
}

/// Multi-source distances, skipping `blocked` vertices and (optionally)
/// not expanding beyond `limit`.
pub(crate) fn distances_restricted(
    g: &Graph,
    metric: Metric<'_>,
    sources: &[Vertex],
    blocked: Option<&[bool]>,
    limit: Option<u64>,
) -> Vec<u64> {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHED; n];
    let is_blocked = |v: Vertex| blocked.is_some_and(|b| b[v as usize]);
    let limit = limit.unwrap_or(u64::MAX - 1);
    match metric {
        Metric::Base => {
            let mut queue = std::collections::VecDeque::new();
            for &s in sources {
                if !is_blocked(s) && dist[s as usize] == UNREACHED {
                    dist[s as usize] = 0;
                    queue.push_back(s);
                }
            }
            while let Some(u) = queue.pop_front() {
                let du = dist[u as usize];
                if du >= limit {
                    continue;
                }
                for &w in g.neighbors(u) {
                    if dist[w as usize] == UNREACHED && !is_blocked(w) {
                        dist[w as usize] = du + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Metric::Omega(_) => {
            let mut heap = BinaryHeap::new();
            for &s in sources {
                if !is_blocked(s) && dist[s as usize] != 0 {
                    dist[s as usize] = 0;
                    heap.push(Reverse((0u64, s)));
                }
            }
            while let Some(Reverse((du, u))) = heap.pop() {
                if du > dist[u as usize] {
                    continue;
                }
                for (w, e) in g.incident(u) {
                    if is_blocked(w) {
                        continue;
                    }
                    let nd = du.saturating_add(metric.cost(e));
                    if nd <= limit && nd < dist[w as usize] {
                        dist[w as usize] = nd;
                        heap.push(Reverse((nd, w)));
                    }
                }
            }
        }
    }
    dist
}

/// Lexicographically smallest optimal walk from `from` given distances to the target.
fn greedy_descent(
    g: &Graph,
    metric: Metric<'_>,
    from: Vertex,
    to_target: &[u64],
    blocked: Option<&[bool]>,
) -> Result<Vec<Vertex>> {
    let mut path = vec![from];
    let mut cur = from;
    while to_target[cur as usize] != 0 {
        let dc = to_target[cur as usize];
        let next = g
            .incident(cur)
            .find(|&(w, e)| {
                !blocked.is_some_and(|b| b[w as usize])
                    && to_target[w as usize] != UNREACHED
                    && to_target[w as usize].saturating_add(metric.cost(e)) == dc
            })
            .map(|(w, _)| w)
            .ok_or_else(|| Error::Internal(format!("no descent step from vertex {cur}")))?;
        path.push(next);
        cur = next;
    }
    Ok(path)
}

/// Shortest `u`–`v` path avoiding `blocked`, or `None` if they are separated.
pub(crate) fn shortest_path_avoiding(
    g: &Graph,
    metric: Metric<'_>,
    u: Vertex,
    v: Vertex,
    blocked: Option<&[bool]>,
) -> Result<Option<(Vec<Vertex>, u64)>> {
    let to_v = distances_restricted(g, metric, &[v], blocked, None);
    let total = to_v[u as usize];
    if total == UNREACHED {
        return Ok(None);
    }
    Ok(Some((greedy_descent(g, metric, u, &to_v, blocked)?, total)))
}

fn check_vertex(g: &Graph, v: Vertex) -> Result<()> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(Error::domain(format!("vertex {v} not in graph")))
    }
}

/// Exact distance between `u` and `v`; weighted when `omega` is given.
pub fn distance(g: &Graph, u: Vertex, v: Vertex, omega: Option<&WeightAssignment>) -> Result<f64> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let metric = Metric::new(g, omega)?;
    let d = distances_from(g, metric, u)[v as usize];
    if d == UNREACHED {
        return Err(Error::Internal(format!("{u} and {v} are disconnected")));
    }
    Ok(metric.to_value(d))
}

/// A geodesic from `u` to `v`. Among all optimal paths the lexicographically
/// smallest vertex sequence is returned.
pub fn shortest_path(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    omega: Option<&WeightAssignment>,
) -> Result<PathRecord> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    let metric = Metric::new(g, omega)?;
    let (vertices, _) = shortest_path_avoiding(g, metric, u, v, None)?
        .ok_or_else(|| Error::Internal(format!("{u} and {v} are disconnected")))?;
    PathRecord::new(g, vertices, omega)
}

/// A self-avoiding vertex path with its cached lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    vertices: Vec<Vertex>,
    graph_length: usize,
    passage_time: Option<f64>,
    metric: MetricTag,
    graph: Fingerprint,
}

impl PathRecord {
    /// Validates adjacency and self-avoidance. With `omega` the record carries
    /// its passage time and is tagged with the weighted metric.
    pub fn new(g: &Graph, vertices: Vec<Vertex>, omega: Option<&WeightAssignment>) -> Result<Self> {
        let metric = Metric::new(g, omega)?;
        let units = path_units(g, metric, &vertices)?;
        let mut seen = std::collections::HashSet::with_capacity(vertices.len());
        if let Some(dup) = vertices.iter().find(|v| !seen.insert(**v)) {
            return Err(Error::domain(format!("path revisits vertex {dup}")));
        }
        Ok(PathRecord {
            graph_length: vertices.len().saturating_sub(1),
            passage_time: omega.map(|_| metric.to_value(units)),
            metric: metric.tag(),
            graph: g.fingerprint(),
            vertices,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edge count `ℓ`.
    pub fn graph_length(&self) -> usize {
        self.graph_length
    }

    /// `ℓ_ω`, present iff weights were attached.
    pub fn passage_time(&self) -> Option<f64> {
        self.passage_time
    }

    pub fn metric(&self) -> MetricTag {
        self.metric
    }

    pub fn graph_fingerprint(&self) -> Fingerprint {
        self.graph
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Length in the record's own metric.
    pub fn length(&self) -> f64 {
        match self.metric {
            MetricTag::Base => self.graph_length as f64,
            MetricTag::Omega => self.passage_time.unwrap_or(f64::NAN),
        }
    }

    /// Sub-path between two positions (inclusive), re-measured in `omega`.
    pub fn subpath(
        &self,
        g: &Graph,
        i: usize,
        j: usize,
        omega: Option<&WeightAssignment>,
    ) -> Result<PathRecord> {
        if i > j || j >= self.vertices.len() {
            return Err(Error::domain(format!("bad sub-path range {i}..={j}")));
        }
        PathRecord::new(g, self.vertices[i..=j].to_vec(), omega)
    }

    /// `path metric=<base|omega> len=<ℓ> time=<ℓ_ω or -> v0 v1 ...`
    pub fn to_line(&self) -> String {
        let time = self
            .passage_time
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".to_string());
        let mut out = format!(
            "path metric={} len={} time={}",
            self.metric, self.graph_length, time
        );
        for v in &self.vertices {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out
    }

    /// Parses [`PathRecord::to_line`] output, re-validating against `g`.
    pub fn from_line(
        g: &Graph,
        line: &str,
        omega: Option<&WeightAssignment>,
    ) -> Result<PathRecord> {
        let mut parts = line.split_whitespace();
        let bad = |m: &str| Error::parse(1, m.to_string());
        if parts.next() != Some("path") {
            return Err(bad("expected `path`"));
        }
        let metric = parts
            .next()
            .and_then(|p| p.strip_prefix("metric="))
            .ok_or_else(|| bad("missing metric="))?;
        let len = parts
            .next()
            .and_then(|p| p.strip_prefix("len="))
            .and_then(|p| p.parse::<usize>().ok())
            .ok_or_else(|| bad("missing len="))?;
        let time = parts
            .next()
            .and_then(|p| p.strip_prefix("time="))
            .ok_or_else(|| bad("missing time="))?;
        let vertices = parts
            .map(|p| p.parse::<Vertex>().map_err(|_| bad("bad vertex id")))
            .collect::<Result<Vec<_>>>()?;
        let want_omega = match metric {
            "base" => false,
            "omega" => true,
            _ => return Err(bad("metric must be base or omega")),
        };
        if want_omega != omega.is_some() {
            return Err(bad("metric tag does not match supplied weights"));
        }
        let rec = PathRecord::new(g, vertices, omega)?;
        if rec.graph_length != len {
            return Err(bad("len= disagrees with vertex list"));
        }
        if let Some(t) = rec.passage_time {
            if time.parse::<f64>().ok() != Some(t) {
                return Err(bad("time= disagrees with weights"));
            }
        }
        Ok(rec)
    }
}

/// Integer length of a vertex sequence, checking adjacency.
pub(crate) fn path_units(g: &Graph, metric: Metric<'_>, vertices: &[Vertex]) -> Result<u64> {
    if vertices.is_empty() {
        return Err(Error::domain("path has no vertices"));
    }
    check_vertex(g, vertices[0])?;
    let mut total: u64 = 0;
    for w in vertices.windows(2) {
        let e = g
            .edge_index(w[0], w[1])
            .ok_or_else(|| Error::domain(format!("{} and {} are not adjacent", w[0], w[1])))?;
        total = total.saturating_add(metric.cost(e));
    }
    Ok(total)
}

/// Cumulative integer lengths along a path (entry `i` = length of `p[0..=i]`).
pub(crate) fn prefix_units(g: &Graph, metric: Metric<'_>, vertices: &[Vertex]) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(vertices.len());
    out.push(0u64);
    for w in vertices.windows(2) {
        let e = g
            .edge_index(w[0], w[1])
            .ok_or_else(|| Error::domain(format!("{} and {} are not adjacent", w[0], w[1])))?;
        out.push(out.last().unwrap().saturating_add(metric.cost(e)));
    }
    Ok(out)
}

fn metric_of<'a>(
    g: &Graph,
    p: &PathRecord,
    omega: Option<&'a WeightAssignment>,
) -> Result<Metric<'a>> {
    if p.graph != g.fingerprint() {
        return Err(Error::Provenance {
            expected: g.fingerprint().to_string(),
            found: p.graph.to_string(),
        });
    }
    match (p.metric, omega) {
        (MetricTag::Base, _) => Ok(Metric::Base),
        (MetricTag::Omega, Some(w)) => Metric::new(g, Some(w)),
        (MetricTag::Omega, None) => Err(Error::domain("omega-tagged path needs its weights")),
    }
}

/// `ℓ(p) / d(start, end)` in the path's own metric.
pub fn slope(g: &Graph, p: &PathRecord, omega: Option<&WeightAssignment>) -> Result<f64> {
    let metric = metric_of(g, p, omega)?;
    if p.first() == p.last() {
        return Err(Error::Degenerate(
            "slope of a path with equal endpoints".into(),
        ));
    }
    let length = path_units(g, metric, &p.vertices)?;
    let d = distances_from(g, metric, p.first())[p.last() as usize];
    Ok(length as f64 / d as f64)
}

/// Points `x` of the geodesic segment `γ[a, b]` with
/// `min(d(x, a), d(x, b)) >= d(a, b) / 3`, listed from `a` to `b`.
pub fn middle_third(
    g: &Graph,
    gamma: &PathRecord,
    a: Vertex,
    b: Vertex,
    omega: Option<&WeightAssignment>,
) -> Result<Vec<Vertex>> {
    let metric = Metric::new(g, omega)?;
    let seg = geodesic_segment(g, metric, gamma, a, b)?;
    Ok(middle_third_of_segment(&seg.vertices, &seg.prefix))
}

pub(crate) struct Segment {
    pub vertices: Vec<Vertex>,
    pub prefix: Vec<u64>,
}

impl Segment {
    pub fn total(&self) -> u64 {
        *self.prefix.last().unwrap()
    }
}

/// `γ` restricted to `[a, b]` (oriented from `a`), checked to be a geodesic.
pub(crate) fn geodesic_segment(
    g: &Graph,
    metric: Metric<'_>,
    gamma: &PathRecord,
    a: Vertex,
    b: Vertex,
) -> Result<Segment> {
    let ia = gamma
        .position(a)
        .ok_or_else(|| Error::domain(format!("vertex {a} is not on the path")))?;
    let ib = gamma
        .position(b)
        .ok_or_else(|| Error::domain(format!("vertex {b} is not on the path")))?;
    let mut vertices = if ia <= ib {
        gamma.vertices[ia..=ib].to_vec()
    } else {
        let mut v = gamma.vertices[ib..=ia].to_vec();
        v.reverse();
        v
    };
    vertices.shrink_to_fit();
    let prefix = prefix_units(g, metric, &vertices)?;
    let total = *prefix.last().unwrap();
    let d = distances_from(g, metric, a)[b as usize];
    if d != total {
        return Err(Error::Precondition(format!(
            "segment from {a} to {b} is not a geodesic in the {} metric",
            metric.tag()
        )));
    }
    Ok(Segment { vertices, prefix })
}

pub(crate) fn middle_third_of_segment(vertices: &[Vertex], prefix: &[u64]) -> Vec<Vertex> {
    let total = *prefix.last().unwrap() as u128;
    vertices
        .iter()
        .zip(prefix)
        .filter(|&(_, &s)| {
            let s = s as u128;
            3 * s.min(total - s) >= total
        })
        .map(|(&v, _)| v)
        .collect()
}

/// All nearest points of `targets` to `x`, sorted by id.
pub fn project(
    g: &Graph,
    x: Vertex,
    targets: &[Vertex],
    omega: Option<&WeightAssignment>,
) -> Result<Vec<Vertex>> {
    check_vertex(g, x)?;
    if targets.is_empty() {
        return Err(Error::domain("projection onto an empty set"));
    }
    for &z in targets {
        check_vertex(g, z)?;
    }
    let metric = Metric::new(g, omega)?;
    let dist = distances_from(g, metric, x);
    let best = targets.iter().map(|&z| dist[z as usize]).min().unwrap();
    let mut out: Vec<Vertex> = targets
        .iter()
        .copied()
        .filter(|&z| dist[z as usize] == best)
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Checks `|s_i - s_j| / q - Q <= d(p_i, p_j) <= q |s_i - s_j| + Q` on the
/// sampled index pairs, `s` being arc length (edge count or cumulative weight).
pub fn quasi_check(
    g: &Graph,
    p: &PathRecord,
    q: f64,
    big_q: f64,
    sample_stride: usize,
    omega: Option<&WeightAssignment>,
) -> Result<bool> {
    if !(q >= 1.0) || !(big_q >= 0.0) {
        return Err(Error::domain(format!(
            "quasi constants need q >= 1, Q >= 0 (got {q}, {big_q})"
        )));
    }
    let metric = metric_of(g, p, omega)?;
    let verts = &p.vertices;
    let arc = prefix_units(g, metric, verts)?;
    let stride = sample_stride.max(1);
    let mut idx: Vec<usize> = (0..verts.len()).step_by(stride).collect();
    if *idx.last().unwrap() != verts.len() - 1 {
        idx.push(verts.len() - 1);
    }
    const EPS: f64 = 1e-9;
    for (k, &i) in idx.iter().enumerate() {
        let dist = distances_from(g, metric, verts[i]);
        for &j in &idx[k + 1..] {
            let s = metric.to_value(arc[j] - arc[i]);
            let d = metric.to_value(dist[verts[j] as usize]);
            if d + EPS < s / q - big_q || d > q * s + big_q + EPS {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphSpec};
    use crate::percolation::{sample_weights, DistributionSpec, WeightAssignment};

    fn grid(n: u32) -> Graph {
        build_graph(&GraphSpec::LatticeBox {
            dim: 2,
            half_width: n,
        })
        .unwrap()
    }

    fn at(g: &Graph, x: i64, y: i64) -> Vertex {
        g.lattice_vertex(&[x, y]).unwrap()
    }

    fn cycle4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], 0).unwrap()
    }

    fn u_path(g: &Graph, n: i64) -> PathRecord {
        let mut v = Vec::new();
        for x in 0..=n {
            v.push(at(g, x, 0));
        }
        for y in 1..=n {
            v.push(at(g, n, y));
        }
        for x in (0..n).rev() {
            v.push(at(g, x, n));
        }
        PathRecord::new(g, v, None).unwrap()
    }

    #[test]
    fn distance_examples() {
        let g = grid(12);
        let o = g.basepoint();
        assert_eq!(distance(&g, o, o, None).unwrap(), 0.0);
        assert_eq!(distance(&g, o, at(&g, 3, 4), None).unwrap(), 7.0);
    }

    #[test]
    fn weighted_four_cycle() {
        let g = cycle4();
        // edges sorted: (0,1), (0,3), (1,2), (2,3); heavy edge is (0,3)
        let w = WeightAssignment::from_weights(
            &g,
            vec![1.0, 10.0, 1.0, 1.0],
            DistributionSpec::PointMass { c: 1.0 },
            0,
        )
        .unwrap();
        assert_eq!(distance(&g, 0, 3, Some(&w)).unwrap(), 3.0);
        assert_eq!(
            shortest_path(&g, 0, 3, Some(&w)).unwrap().vertices(),
            &[0, 1, 2, 3]
        );
        assert_eq!(shortest_path(&g, 0, 3, None).unwrap().vertices(), &[0, 3]);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let g = cycle4();
        // 0 -> 2 has two optimal routes: via 1 and via 3
        assert_eq!(
            shortest_path(&g, 0, 2, None).unwrap().vertices(),
            &[0, 1, 2]
        );
        assert_eq!(
            shortest_path(&g, 2, 0, None).unwrap().vertices(),
            &[2, 1, 0]
        );
    }

    #[test]
    fn tree_paths_ignore_weights() {
        let g = build_graph(&GraphSpec::RegularTree { arity: 3, depth: 5 }).unwrap();
        let w = sample_weights(&g, &DistributionSpec::Exponential { rate: 1.0 }, 9).unwrap();
        for (u, v) in [(5u32, 40u32), (0, 90), (17, 3)] {
            assert_eq!(
                shortest_path(&g, u, v, None).unwrap().vertices(),
                shortest_path(&g, u, v, Some(&w)).unwrap().vertices()
            );
        }
    }

    #[test]
    fn constant_weights_keep_base_geodesics() {
        let g = grid(6);
        let w = sample_weights(&g, &DistributionSpec::PointMass { c: 2.5 }, 1).unwrap();
        for (a, b) in [((-3, -2), (4, 5)), ((0, 0), (6, -6)), ((1, 1), (1, 1))] {
            let (u, v) = (at(&g, a.0, a.1), at(&g, b.0, b.1));
            let p0 = shortest_path(&g, u, v, None).unwrap();
            let p1 = shortest_path(&g, u, v, Some(&w)).unwrap();
            assert_eq!(p0.vertices(), p1.vertices());
            assert_eq!(
                distance(&g, u, v, Some(&w)).unwrap(),
                2.5 * distance(&g, u, v, None).unwrap()
            );
        }
    }

    #[test]
    fn slope_examples() {
        let g = grid(8);
        let p = shortest_path(&g, at(&g, -3, 2), at(&g, 5, -1), None).unwrap();
        assert_eq!(slope(&g, &p, None).unwrap(), 1.0);
        for n in 1..=5 {
            let u = u_path(&g, n);
            assert_eq!(u.graph_length(), 3 * n as usize);
            assert_eq!(slope(&g, &u, None).unwrap(), 3.0);
        }
        let single = PathRecord::new(&g, vec![g.basepoint()], None).unwrap();
        assert!(matches!(
            slope(&g, &single, None),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn middle_third_examples() {
        let g = grid(12);
        let gamma = PathRecord::new(&g, (0..=9).map(|x| at(&g, x, 0)).collect(), None).unwrap();
        let m = middle_third(&g, &gamma, at(&g, 0, 0), at(&g, 9, 0), None).unwrap();
        assert_eq!(m, (3..=6).map(|x| at(&g, x, 0)).collect::<Vec<_>>());
        // d(a, b) = 2: min distance is at most 1 < 2/3 fails only for endpoints
        let m = middle_third(&g, &gamma, at(&g, 0, 0), at(&g, 2, 0), None).unwrap();
        assert_eq!(m, vec![at(&g, 1, 0)]);
        let m = middle_third(&g, &gamma, at(&g, 0, 0), at(&g, 1, 0), None).unwrap();
        assert!(m.is_empty());
        assert!(middle_third(&g, &gamma, at(&g, 0, 0), at(&g, 0, 1), None).is_err());
    }

    #[test]
    fn middle_third_weighted_uses_prefix_sums() {
        // path graph 0-1-2-3-4-5 with weights 1,1,4,1,1
        let edges: Vec<(Vertex, Vertex)> = (0..5).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(6, &edges, 0).unwrap();
        let w = WeightAssignment::from_weights(
            &g,
            vec![1.0, 1.0, 4.0, 1.0, 1.0],
            DistributionSpec::PointMass { c: 1.0 },
            0,
        )
        .unwrap();
        let gamma = shortest_path(&g, 0, 5, Some(&w)).unwrap();
        assert_eq!(gamma.passage_time(), Some(8.0));
        // prefix sums 0,1,2,6,7,8: min distances 0,1,2,2,1,0, none reaches 8/3
        let oracle: Vec<Vertex> = [0.0, 1.0, 2.0, 6.0, 7.0, 8.0f64]
            .iter()
            .enumerate()
            .filter(|(_, &s)| s.min(8.0 - s) >= 8.0 / 3.0)
            .map(|(i, _)| i as Vertex)
            .collect();
        assert_eq!(middle_third(&g, &gamma, 0, 5, Some(&w)).unwrap(), oracle);
        assert!(oracle.is_empty());
        // with the heavy edge moved to the end the middle vertices qualify
        let w2 = WeightAssignment::from_weights(
            &g,
            vec![1.0, 1.0, 1.0, 1.0, 4.0],
            DistributionSpec::PointMass { c: 1.0 },
            0,
        )
        .unwrap();
        let gamma2 = shortest_path(&g, 0, 5, Some(&w2)).unwrap();
        assert_eq!(
            middle_third(&g, &gamma2, 0, 5, Some(&w2)).unwrap(),
            vec![3, 4]
        );
    }

    #[test]
    fn projection_examples() {
        let g = grid(12);
        let axis: Vec<Vertex> = (-12..=12).map(|x| at(&g, x, 0)).collect();
        assert_eq!(
            project(&g, at(&g, 3, 4), &axis, None).unwrap(),
            vec![at(&g, 3, 0)]
        );
        assert_eq!(
            project(&g, at(&g, -5, 0), &axis, None).unwrap(),
            vec![at(&g, -5, 0)]
        );
        assert!(project(&g, 0, &[], None).is_err());
        // nearest point projection is a 2-projection
        let x = at(&g, -2, 7);
        let w = project(&g, x, &axis, None).unwrap()[0];
        for &z in &axis {
            let dzw = distance(&g, z, w, None).unwrap();
            assert!(dzw <= 2.0 * distance(&g, z, x, None).unwrap());
        }
    }

    #[test]
    fn quasi_check_examples() {
        let g = grid(8);
        let p = shortest_path(&g, at(&g, -4, -3), at(&g, 6, 2), None).unwrap();
        assert!(quasi_check(&g, &p, 1.0, 0.0, 1, None).unwrap());
        for n in 1..=6 {
            let u = u_path(&g, n);
            assert!(!quasi_check(&g, &u, 1.0, 0.0, 1, None).unwrap());
            assert!(quasi_check(&g, &u, 3.0, 0.0, 1, None).unwrap());
        }
        assert!(quasi_check(&g, &p, 0.5, 0.0, 1, None).is_err());
    }

    #[test]
    fn u_path_quasi_constant_matches_pairwise_oracle() {
        // worst ratio arc / distance over all pairs, by enumeration
        let g = grid(8);
        for n in 1..=5 {
            let u = u_path(&g, n);
            let v = u.vertices();
            let mut worst: f64 = 1.0;
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let (ci, cj) = (
                        g.lattice_coords(v[i]).unwrap(),
                        g.lattice_coords(v[j]).unwrap(),
                    );
                    let d = ((ci[0] - cj[0]).abs() + (ci[1] - cj[1]).abs()) as f64;
                    worst = worst.max((j - i) as f64 / d);
                }
            }
            assert_eq!(worst, 3.0);
            assert!(quasi_check(&g, &u, worst, 0.0, 1, None).unwrap());
            assert!(!quasi_check(&g, &u, worst - 0.01, 0.0, 1, None).unwrap());
        }
    }

    #[test]
    fn path_record_validation_and_line_format() {
        let g = grid(3);
        let o = g.basepoint();
        assert!(PathRecord::new(&g, vec![o, at(&g, 1, 1)], None).is_err());
        assert!(PathRecord::new(&g, vec![o, at(&g, 1, 0), o], None).is_err());
        let w = sample_weights(&g, &DistributionSpec::Uniform { lo: 0.5, hi: 1.5 }, 3).unwrap();
        let p = shortest_path(&g, at(&g, -2, 1), at(&g, 3, -3), Some(&w)).unwrap();
        let line = p.to_line();
        assert!(line.starts_with("path metric=omega len="));
        assert_eq!(PathRecord::from_line(&g, &line, Some(&w)).unwrap(), p);
        let b = shortest_path(&g, o, at(&g, 1, 1), None).unwrap();
        assert_eq!(
            b.to_line(),
            format!(
                "path metric=base len=2 time=- {} {} {}",
                o,
                at(&g, 1, 0),
                at(&g, 1, 1)
            )
        );
        assert_eq!(PathRecord::from_line(&g, &b.to_line(), None).unwrap(), b);
    }

    #[test]
    fn weights_from_another_graph_are_rejected() {
        let g = grid(3);
        let h = grid(4);
        let w = sample_weights(&h, &DistributionSpec::PointMass { c: 1.0 }, 0).unwrap();
        assert!(matches!(
            distance(&g, 0, 1, Some(&w)),
            Err(Error::Provenance { .. })
        ));
    }
}
