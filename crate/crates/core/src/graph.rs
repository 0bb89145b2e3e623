//! Finite bounded-degree graphs with a distinguished basepoint.
//!
//! Every generated graph is a truncation of an infinite space (a lattice,
//! a regular tree, a free group Cayley graph, or a wedge of a lattice and a
//! tree). Vertex ids are dense and 0-based; edges are canonical `(min, max)`
//! pairs with a dense index used to address per-edge weights.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Vertex cap used by [`build_graph`].
pub const DEFAULT_VERTEX_CAP: usize = 4_000_000;

/// Generator descriptor for the graph families the library knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    /// `[-n, n]^dim` with nearest-neighbour edges.
    LatticeBox { dim: u32, half_width: u32 },
    /// Root of degree `arity`, every inner vertex of degree `arity`.
    RegularTree { arity: u32, depth: u32 },
    /// Ball of reduced words in the free group on `rank` generators.
    FreeGroupBall { rank: u32, radius: u32 },
    /// Lattice box and regular tree glued at their basepoints.
    Wedge {
        dim: u32,
        half_width: u32,
        arity: u32,
        depth: u32,
    },
}

impl GraphSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            GraphSpec::LatticeBox { dim, half_width } => dim >= 1 && half_width >= 1,
            GraphSpec::RegularTree { arity, depth } => arity >= 2 && depth >= 1,
            GraphSpec::FreeGroupBall { rank, radius } => rank >= 1 && radius >= 1,
            GraphSpec::Wedge {
                dim,
                half_width,
                arity,
                depth,
            } => dim >= 1 && half_width >= 1 && arity >= 2 && depth >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "graph parameters must be positive (tree arity >= 2): {self}"
            )))
        }
    }

    /// Number of vertices the spec would produce, computed without building it.
    pub fn vertex_count(&self) -> Option<u128> {
        fn geometric(first: u128, ratio: u128, terms: u32) -> Option<u128> {
            // first * (1 + ratio + ... + ratio^(terms-1))
            let mut sum: u128 = 0;
            let mut term: u128 = 1;
            for _ in 0..terms {
                sum = sum.checked_add(term)?;
                term = term.checked_mul(ratio)?;
            }
            first.checked_mul(sum)
        }
        match *self {
            GraphSpec::LatticeBox { dim, half_width } => {
                (2 * half_width as u128 + 1).checked_pow(dim)
            }
            GraphSpec::RegularTree { arity, depth } => {
                geometric(arity as u128, arity as u128 - 1, depth)?.checked_add(1)
            }
            GraphSpec::FreeGroupBall { rank, radius } => {
                let k = 2 * rank as u128;
                geometric(k, k - 1, radius)?.checked_add(1)
            }
            GraphSpec::Wedge {
                dim,
                half_width,
                arity,
                depth,
            } => {
                let lattice = GraphSpec::LatticeBox { dim, half_width }.vertex_count()?;
                let tree = GraphSpec::RegularTree { arity, depth }.vertex_count()?;
                lattice.checked_add(tree)?.checked_sub(1)
            }
        }
    }

    /// Graph distance from the basepoint to the nearest truncation boundary vertex.
    pub fn truncation_radius(&self) -> usize {
        match *self {
            GraphSpec::LatticeBox { half_width, .. } => half_width as usize,
            GraphSpec::RegularTree { depth, .. } => depth as usize,
            GraphSpec::FreeGroupBall { radius, .. } => radius as usize,
            GraphSpec::Wedge {
                half_width, depth, ..
            } => half_width.min(depth) as usize,
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphSpec::LatticeBox { dim, half_width } => write!(f, "lattice:{dim},{half_width}"),
            GraphSpec::RegularTree { arity, depth } => write!(f, "tree:{arity},{depth}"),
            GraphSpec::FreeGroupBall { rank, radius } => write!(f, "free:{rank},{radius}"),
            GraphSpec::Wedge {
                dim,
                half_width,
                arity,
                depth,
            } => write!(f, "wedge:{dim},{half_width},{arity},{depth}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// `lattice:d,n`, `tree:arity,depth`, `free:rank,radius`, `wedge:d,n,arity,depth`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::config(format!("graph spec `{s}` lacks `kind:` prefix")))?;
        let nums = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::config(format!("bad graph parameter `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let want = |n: usize| -> Result<()> {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::config(format!(
                    "`{kind}` takes {n} parameters, got {}",
                    nums.len()
                )))
            }
        };
        let spec = match kind {
            "lattice" => {
                want(2)?;
                GraphSpec::LatticeBox {
                    dim: nums[0],
                    half_width: nums[1],
                }
            }
            "tree" => {
                want(2)?;
                GraphSpec::RegularTree {
                    arity: nums[0],
                    depth: nums[1],
                }
            }
            "free" => {
                want(2)?;
                GraphSpec::FreeGroupBall {
                    rank: nums[0],
                    radius: nums[1],
                }
            }
            "wedge" => {
                want(4)?;
                GraphSpec::Wedge {
                    dim: nums[0],
                    half_width: nums[1],
                    arity: nums[2],
                    depth: nums[3],
                }
            }
            other => return Err(Error::config(format!("unknown graph kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Stable 64-bit digest of a graph's text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint(pub u64);

impl Fingerprint {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        Fingerprint(u64::from_be_bytes(head))
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl FromStr for Fingerprint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        u64::from_str_radix(s, 16)
            .map(Fingerprint)
            .map_err(|_| Error::config(format!("bad fingerprint `{s}`")))
    }
}

/// Immutable bounded-degree graph stored in compressed adjacency form.
#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    incident: Vec<u32>,
    edges: Vec<(Vertex, Vertex)>,
    basepoint: Vertex,
    degree_bound: usize,
    spec: Option<GraphSpec>,
    truncation_radius: usize,
    boundary_margin: usize,
    fingerprint: Fingerprint,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.basepoint == other.basepoint
            && self.degree_bound == other.degree_bound
            && self.offsets == other.offsets
            && self.neighbors == other.neighbors
    }
}

impl Graph {
    /// Builds a graph from an arbitrary edge list, checking every invariant.
    ///
    /// The degree bound is the maximum degree (at least 2) and the truncation
    /// radius is the eccentricity of the basepoint, with no boundary margin.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(Vertex, Vertex)],
        basepoint: Vertex,
    ) -> Result<Self> {
        let mut g = Self::assemble(vertex_count, edges, basepoint, None, 0, 0)?;
        let max_deg = (0..vertex_count)
            .map(|v| g.degree(v as Vertex))
            .max()
            .unwrap_or(0);
        g.degree_bound = max_deg.max(2);
        g.truncation_radius = g.bfs_distances(basepoint).into_iter().max().unwrap_or(0) as usize;
        g.fingerprint = Fingerprint::of_bytes(g.to_text().as_bytes());
        Ok(g)
    }

    fn assemble(
        vertex_count: usize,
        edges: &[(Vertex, Vertex)],
        basepoint: Vertex,
        spec: Option<GraphSpec>,
        truncation_radius: usize,
        boundary_margin: usize,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if vertex_count > u32::MAX as usize {
            return Err(Error::InvalidGraph("vertex ids exceed 32 bits".into()));
        }
        if basepoint as usize >= vertex_count {
            return Err(Error::InvalidGraph(format!(
                "basepoint {basepoint} out of range"
            )));
        }
        let mut canon: Vec<(Vertex, Vertex)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }

        let mut degree = vec![0usize; vertex_count];
        for &(u, v) in &canon {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..vertex_count].to_vec();
        let mut neighbors = vec![0; 2 * canon.len()];
        let mut incident = vec![0; 2 * canon.len()];
        for (e, &(u, v)) in canon.iter().enumerate() {
            neighbors[fill[u as usize]] = v;
            incident[fill[u as usize]] = e as u32;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            incident[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }
        for v in 0..vertex_count {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut pairs: Vec<(Vertex, u32)> = neighbors[lo..hi]
                .iter()
                .copied()
                .zip(incident[lo..hi].iter().copied())
                .collect();
            pairs.sort_unstable();
            for (k, (n, e)) in pairs.into_iter().enumerate() {
                neighbors[lo + k] = n;
                incident[lo + k] = e;
            }
        }

        let max_deg = degree.iter().copied().max().unwrap_or(0);
        let g = Graph {
            offsets,
            neighbors,
            incident,
            edges: canon,
            basepoint,
            degree_bound: max_deg,
            spec,
            truncation_radius,
            boundary_margin,
            fingerprint: Fingerprint(0),
        };
        if g.bfs_distances(basepoint).contains(&u32::MAX) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Generator descriptor, `None` for graphs loaded from files or edge lists.
    pub fn spec(&self) -> Option<GraphSpec> {
        self.spec
    }

    pub fn truncation_radius(&self) -> usize {
        self.truncation_radius
    }

    pub fn boundary_margin(&self) -> usize {
        self.boundary_margin
    }

    /// Largest radius around the basepoint whose geometry is trusted.
    pub fn unclipped_radius(&self) -> usize {
        self.truncation_radius.saturating_sub(self.boundary_margin)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (v as usize) < self.vertex_count()
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbours paired with the dense index of the connecting edge.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = (Vertex, usize)> + '_ {
        let v = v as usize;
        let range = self.offsets[v]..self.offsets[v + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.incident[range].iter().map(|&e| e as usize))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Canonical edges `(min, max)` in index order (lexicographically sorted).
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_index(&self, u: Vertex, v: Vertex) -> Option<usize> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let ns = self.neighbors(u);
        ns.binary_search(&v)
            .ok()
            .map(|k| self.incident[self.offsets[u as usize] + k] as usize)
    }

    /// Hop distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: Vertex) -> Vec<u32> {
        self.bfs_bounded(source, u32::MAX)
    }

    fn bfs_bounded(&self, source: Vertex, limit: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du == limit {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices at hop distance at most `radius` from `center`, sorted by id.
    pub fn ball(&self, center: Vertex, radius: usize) -> Result<Vec<Vertex>> {
        if !self.contains(center) {
            return Err(Error::domain(format!("vertex {center} not in graph")));
        }
        let limit = radius.min(u32::MAX as usize - 1) as u32;
        let dist = self.bfs_bounded(center, limit);
        Ok((0..self.vertex_count() as Vertex)
            .filter(|&v| dist[v as usize] <= limit)
            .collect())
    }

    /// Compares `|B(o, floor(D n))|` with the counting bound `(q+1)^(floor(D n)+1)`.
    pub fn check_ball_bound(&self, ratio: f64, n: usize) -> Result<BallBoundReport> {
        if !(ratio >= 0.0) || !ratio.is_finite() {
            return Err(Error::domain(format!(
                "ball ratio must be finite and >= 0, got {ratio}"
            )));
        }
        let radius = (ratio * n as f64).floor() as usize;
        let limit = self.unclipped_radius();
        if radius > limit {
            return Err(Error::Truncation { radius, limit });
        }
        let count = self.ball(self.basepoint, radius)?.len();
        let base = self.degree_bound as u128 + 1;
        let bound = (radius as u32)
            .checked_add(1)
            .and_then(|e| base.checked_pow(e))
            .unwrap_or(u128::MAX);
        Ok(BallBoundReport {
            radius,
            count,
            bound,
            holds: (count as u128) <= bound,
        })
    }

    /// Text form: a header line and one `edge U V` line per canonical edge.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * (self.edges.len() + 1));
        out.push_str(&format!(
            "vertices {} basepoint {} degree_bound {}\n",
            self.vertex_count(),
            self.basepoint,
            self.degree_bound
        ));
        for &(u, v) in &self.edges {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6
            || fields[0] != "vertices"
            || fields[2] != "basepoint"
            || fields[4] != "degree_bound"
        {
            return Err(Error::parse(
                1,
                "expected `vertices N basepoint B degree_bound Q`",
            ));
        }
        let num = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| Error::parse(1, format!("bad number `{s}`")))
        };
        let n = num(fields[1])? as usize;
        let basepoint = num(fields[3])? as Vertex;
        let q = num(fields[5])? as usize;
        let mut edges = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "edge" {
                return Err(Error::parse(i + 1, "expected `edge U V`"));
            }
            let u = parts[1]
                .parse::<Vertex>()
                .map_err(|_| Error::parse(i + 1, "bad vertex"))?;
            let v = parts[2]
                .parse::<Vertex>()
                .map_err(|_| Error::parse(i + 1, "bad vertex"))?;
            edges.push((u, v));
        }
        let mut g = Self::assemble(n, &edges, basepoint, None, 0, 0)?;
        if q < 2 || g.degree_bound > q {
            return Err(Error::InvalidGraph(format!(
                "declared degree bound {q} invalid (max degree {})",
                g.degree_bound
            )));
        }
        g.degree_bound = q;
        g.truncation_radius = g.bfs_distances(basepoint).into_iter().max().unwrap_or(0) as usize;
        g.fingerprint = Fingerprint::of_bytes(g.to_text().as_bytes());
        Ok(g)
    }

    /// Lattice id of integer coordinates (lattice boxes and the lattice part of wedges).
    pub fn lattice_vertex(&self, coords: &[i64]) -> Option<Vertex> {
        let (dim, n) = match self.spec? {
            GraphSpec::LatticeBox { dim, half_width } => (dim, half_width),
            GraphSpec::Wedge {
                dim, half_width, ..
            } => (dim, half_width),
            _ => return None,
        };
        if coords.len() != dim as usize {
            return None;
        }
        let side = 2 * n as i64 + 1;
        let mut id: i64 = 0;
        let mut stride: i64 = 1;
        for &x in coords {
            if x.abs() > n as i64 {
                return None;
            }
            id += (x + n as i64) * stride;
            stride *= side;
        }
        Some(id as Vertex)
    }

    /// Inverse of [`Graph::lattice_vertex`].
    pub fn lattice_coords(&self, v: Vertex) -> Option<Vec<i64>> {
        let (dim, n) = match self.spec? {
            GraphSpec::LatticeBox { dim, half_width } => (dim, half_width),
            GraphSpec::Wedge {
                dim, half_width, ..
            } => (dim, half_width),
            _ => return None,
        };
        let side = 2 * n as i64 + 1;
        let total = side.pow(dim);
        let mut id = v as i64;
        if id >= total {
            return None;
        }
        let mut out = Vec::with_capacity(dim as usize);
        for _ in 0..dim {
            out.push(id % side - n as i64);
            id /= side;
        }
        Some(out)
    }

    /// Whether `v` belongs to the tree part of a wedge (the wedge point counts as both).
    pub fn in_wedge_tree(&self, v: Vertex) -> bool {
        match self.spec {
            Some(GraphSpec::Wedge {
                dim, half_width, ..
            }) => {
                let lattice = (2 * half_width as u64 + 1).pow(dim);
                v as u64 >= lattice || v == self.basepoint
            }
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallBoundReport {
    pub radius: usize,
    pub count: usize,
    pub bound: u128,
    pub holds: bool,
}

/// Builds the graph described by `spec` under [`DEFAULT_VERTEX_CAP`].
pub fn build_graph(spec: &GraphSpec) -> Result<Graph> {
    build_graph_with_cap(spec, DEFAULT_VERTEX_CAP)
}

pub fn build_graph_with_cap(spec: &GraphSpec, cap: usize) -> Result<Graph> {
    spec.validate()?;
    let requested = spec.vertex_count().unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::SizeCap { requested, cap });
    }
    let n = requested as usize;
    let (edges, basepoint) = match *spec {
        GraphSpec::LatticeBox { dim, half_width } => (
            lattice_edges(dim, half_width),
            lattice_origin(dim, half_width),
        ),
        GraphSpec::RegularTree { arity, depth } => (tree_edges(arity, depth, 0, 0), 0),
        GraphSpec::FreeGroupBall { rank, radius } => (free_group_edges(rank, radius), 0),
        GraphSpec::Wedge {
            dim,
            half_width,
            arity,
            depth,
        } => {
            let origin = lattice_origin(dim, half_width);
            let offset = (2 * half_width + 1).pow(dim);
            let mut edges = lattice_edges(dim, half_width);
            edges.extend(tree_edges(arity, depth, origin, offset - 1));
            (edges, origin)
        }
    };
    let radius = spec.truncation_radius();
    let margin = (radius as f64 * 0.1).ceil() as usize;
    let mut g = Graph::assemble(n, &edges, basepoint, Some(*spec), radius, margin)?;
    g.fingerprint = Fingerprint::of_bytes(g.to_text().as_bytes());
    Ok(g)
}

fn lattice_origin(dim: u32, n: u32) -> Vertex {
    let side = 2 * n + 1;
    (0..dim).map(|i| n * side.pow(i)).sum()
}

fn lattice_edges(dim: u32, n: u32) -> Vec<(Vertex, Vertex)> {
    let side = 2 * n + 1;
    let total = side.pow(dim);
    let mut edges = Vec::with_capacity((dim * total) as usize);
    for id in 0..total {
        let mut rest = id;
        let mut stride = 1;
        for _ in 0..dim {
            if rest % side < side - 1 {
                edges.push((id, id + stride));
            }
            rest /= side;
            stride *= side;
        }
    }
    edges
}

/// Breadth-first regular tree. Tree vertex `t > 0` gets id `t + offset`,
/// the root gets `root`.
fn tree_edges(arity: u32, depth: u32, root: Vertex, offset: Vertex) -> Vec<(Vertex, Vertex)> {
    let id = |t: Vertex| if t == 0 { root } else { t + offset };
    let mut edges = Vec::new();
    let mut frontier: Vec<Vertex> = vec![0];
    let mut next_id: Vertex = 1;
    for level in 0..depth {
        let children = if level == 0 { arity } else { arity - 1 };
        let mut next = Vec::with_capacity(frontier.len() * children as usize);
        for &parent in &frontier {
            for _ in 0..children {
                edges.push((id(parent), id(next_id)));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    edges
}

/// Cayley graph of the free group restricted to words of length <= radius.
/// Letters are ordered `a, a^-1, b, b^-1, ...`; vertices are numbered breadth first.
fn free_group_edges(rank: u32, radius: u32) -> Vec<(Vertex, Vertex)> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut edges = Vec::new();
    // (vertex id, last letter) of the current sphere
    let mut frontier: Vec<(Vertex, i32)> = vec![(0, 0)];
    let mut next_id: Vertex = 1;
    for _ in 0..radius {
        let mut next = Vec::new();
        for &(v, last) in &frontier {
            for &l in &letters {
                if l == -last {
                    continue;
                }
                edges.push((v, next_id));
                next.push((next_id, l));
                next_id += 1;
            }
        }
        frontier = next;
    }
    edges
}
