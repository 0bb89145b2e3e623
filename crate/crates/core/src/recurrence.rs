//! Middle-third recurrence by forbidden-region shortest paths, profiles over
//! scales, Morse gauge lower bounds and fellow-travel measurements.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesy::{
    distances_from, distances_restricted, geodesic_segment, middle_third_of_segment, path_units,
    quasi_check, shortest_path_avoiding, Metric, PathRecord, Segment, UNREACHED,
};
use crate::graph::{Graph, GraphSpec, Vertex};
use crate::kappa::Kappa;
use crate::percolation::{stream_rng, WeightAssignment};

/// Result of one deletion query.
#[derive(Clone, Debug, PartialEq)]
pub enum Avoidance {
    /// Shortest `a`–`b` path in the remaining graph, with slope at most `C`.
    Witness(PathRecord),
    /// No slope-`C` path survives the deletion.
    NoWitness,
    /// The middle third is empty, so the recurrence condition holds vacuously.
    Vacuous,
}

/// One scale `γ[a, b]` prepared for repeated deletion queries.
struct Scale<'a> {
    g: &'a Graph,
    metric: Metric<'a>,
    a: Vertex,
    b: Vertex,
    seg: Segment,
    middle: Vec<Vertex>,
    /// Distance of every vertex to the middle third.
    to_middle: Vec<u64>,
    /// `min(d(a, M), d(b, M))`; deletion radii must stay below it.
    cap: u64,
}

impl<'a> Scale<'a> {
    fn new(
        g: &'a Graph,
        metric: Metric<'a>,
        gamma: &PathRecord,
        a: Vertex,
        b: Vertex,
    ) -> Result<Self> {
        let seg = geodesic_segment(g, metric, gamma, a, b)?;
        let middle = middle_third_of_segment(&seg.vertices, &seg.prefix);
        let to_middle = if middle.is_empty() {
            Vec::new()
        } else {
            distances_restricted(g, metric, &middle, None, None)
        };
        let cap = if middle.is_empty() {
            0
        } else {
            to_middle[a as usize].min(to_middle[b as usize])
        };
        Ok(Scale {
            g,
            metric,
            a,
            b,
            seg,
            middle,
            to_middle,
            cap,
        })
    }

    fn total(&self) -> u64 {
        self.seg.total()
    }

    /// Shortest surviving path when every vertex within `rho` of the middle third is deleted.
    fn probe(&self, rho: u64, c: f64) -> Result<Option<Vec<Vertex>>> {
        let blocked: Vec<bool> = self.to_middle.iter().map(|&d| d <= rho).collect();
        let found = shortest_path_avoiding(self.g, self.metric, self.a, self.b, Some(&blocked))?;
        Ok(found.and_then(|(path, len)| {
            if len as f64 <= c * self.total() as f64 {
                Some(path)
            } else {
                None
            }
        }))
    }

    /// Distinct distances to the middle third below the endpoint cap, ascending.
    fn candidate_radii(&self) -> Vec<u64> {
        let mut radii: Vec<u64> = self
            .to_middle
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED && d < self.cap)
            .collect();
        radii.sort_unstable();
        radii.dedup();
        radii
    }
}

fn check_slope_bound(c: f64) -> Result<()> {
    if c >= 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "slope bound must be a finite value >= 1, got {c}"
        )))
    }
}

/// Deletes every vertex within distance `rho` of the middle third of
/// `γ[a, b]` and returns the shortest surviving `a`–`b` path if its slope is
/// at most `c`. Since that path minimizes length, a slope-`c` avoiding path
/// exists exactly when one is returned.
pub fn avoiding_path(
    g: &Graph,
    gamma: &PathRecord,
    a: Vertex,
    b: Vertex,
    rho: f64,
    c: f64,
    omega: Option<&WeightAssignment>,
) -> Result<Avoidance> {
    check_slope_bound(c)?;
    if !(rho >= 0.0) {
        return Err(Error::domain(format!(
            "deletion radius must be nonnegative, got {rho}"
        )));
    }
    let metric = Metric::new(g, omega)?;
    let scale = Scale::new(g, metric, gamma, a, b)?;
    if scale.middle.is_empty() {
        return Ok(Avoidance::Vacuous);
    }
    let rho_units = metric.floor_units(rho);
    if rho_units >= scale.cap {
        return Err(Error::EndpointCap {
            radius: rho,
            cap: metric.to_value(scale.cap),
        });
    }
    match scale.probe(rho_units, c)? {
        Some(path) => Ok(Avoidance::Witness(PathRecord::new(g, path, omega)?)),
        None => Ok(Avoidance::NoWitness),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchStep {
    pub rho: f64,
    pub exists: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceReport {
    /// `d(a, b)` in the metric of the query.
    pub r: f64,
    pub a: Vertex,
    pub b: Vertex,
    pub slope_bound: f64,
    /// Largest deletion radius at which a slope-bounded avoiding path exists
    /// (0 when none exists at all).
    pub max_avoidance: f64,
    /// The endpoint cap bound the search rather than the slope.
    pub capped: bool,
    /// Empty middle third.
    pub vacuous: bool,
    pub witness: Option<PathRecord>,
    /// Binary search probes in order.
    pub trace: Vec<SearchStep>,
}

impl RecurrenceReport {
    /// `{r, a, b, C, D, capped, vacuous, witness_len}`
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "a": self.a,
            "b": self.b,
            "C": self.slope_bound,
            "D": self.max_avoidance,
            "capped": self.capped,
            "vacuous": self.vacuous,
            "witness_len": self.witness.as_ref().map(|w| w.graph_length()),
        })
    }
}

fn profile_one(
    g: &Graph,
    metric: Metric<'_>,
    gamma: &PathRecord,
    c: f64,
    (a, b): (Vertex, Vertex),
    omega: Option<&WeightAssignment>,
) -> Result<RecurrenceReport> {
    let scale = Scale::new(g, metric, gamma, a, b)?;
    let r = metric.to_value(scale.total());
    let mut report = RecurrenceReport {
        r,
        a,
        b,
        slope_bound: c,
        max_avoidance: 0.0,
        capped: false,
        vacuous: scale.middle.is_empty(),
        witness: None,
        trace: Vec::new(),
    };
    if report.vacuous {
        return Ok(report);
    }
    let radii = scale.candidate_radii();
    // existence is antitone in the radius: find the last index with a witness
    let (mut lo, mut hi) = (0usize, radii.len());
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let found = scale.probe(radii[mid], c)?;
        report.trace.push(SearchStep {
            rho: metric.to_value(radii[mid]),
            exists: found.is_some(),
        });
        match found {
            Some(path) => {
                best = Some((mid, path));
                lo = mid + 1;
            }
            None => hi = mid,
        }
    }
    if let Some((idx, path)) = best {
        report.max_avoidance = metric.to_value(radii[idx]);
        report.capped = idx + 1 == radii.len();
        report.witness = Some(PathRecord::new(g, path, omega)?);
    }
    Ok(report)
}

/// `D(r)` for every scale `(a, b)` on `γ`, by binary search over the
/// distinct distances to the middle third below the endpoint cap.
pub fn recurrence_profile(
    g: &Graph,
    gamma: &PathRecord,
    c: f64,
    scales: &[(Vertex, Vertex)],
    omega: Option<&WeightAssignment>,
) -> Result<Vec<RecurrenceReport>> {
    check_slope_bound(c)?;
    let metric = Metric::new(g, omega)?;
    scales
        .par_iter()
        .map(|&s| profile_one(g, metric, gamma, c, s, omega))
        .collect()
}

/// Classification of a recurrence profile.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// `D(r) <= c κ(r)` at every non-vacuous scale with the least such `c`.
    RecurrentWith {
        kappa: Kappa,
        c: f64,
    },
    /// `D(r)/r` stays bounded below; `rate` is its mean over the top half of scales.
    NonRecurrent {
        rate: f64,
    },
    Inconclusive {
        reason: String,
    },
}

impl Verdict {
    pub fn is_recurrent(&self) -> bool {
        matches!(self, Verdict::RecurrentWith { .. })
    }

    /// `{kind, kappa, c, rate}`
    pub fn to_json(&self) -> Value {
        match self {
            Verdict::RecurrentWith { kappa, c } => {
                json!({"kind": "recurrent_with", "kappa": kappa.to_string(), "c": c, "rate": null})
            }
            Verdict::NonRecurrent { rate } => {
                json!({"kind": "non_recurrent", "kappa": null, "c": null, "rate": rate})
            }
            Verdict::Inconclusive { reason } => {
                json!({"kind": "inconclusive", "kappa": null, "c": null, "rate": null, "reason": reason})
            }
        }
    }
}

/// Minimum `D(r)/r` over the top half of scales for a non-recurrent verdict.
pub const LINEAR_RATE_FLOOR: f64 = 0.05;
/// Minimum log-log growth exponent of `D(r)` for a non-recurrent verdict.
pub const LINEAR_EXPONENT_FLOOR: f64 = 0.9;
/// Largest log-log growth exponent of `D(r)/κ(r)` still counted as bounded.
pub const BOUNDED_EXPONENT_CEIL: f64 = 0.25;

/// Least squares slope of `ln y` on `ln x` over points with `y > 0`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx
}

/// Sorts non-vacuous scales by `r` and decides between recurrence with some
/// family member, linear non-recurrence, or an inconclusive verdict.
///
/// Needs at least three non-vacuous scales whose radii span a factor of 4,
/// except that a profile vanishing at three or more scales is recurrent with
/// the first family member and `c = 0` whatever its span.
pub fn classify_direction(profile: &[RecurrenceReport], family: &[Kappa]) -> Verdict {
    let mut pts: Vec<(f64, f64)> = profile
        .iter()
        .filter(|rep| !rep.vacuous)
        .map(|rep| (rep.r, rep.max_avoidance))
        .collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    if pts.len() < 3 {
        return Verdict::Inconclusive {
            reason: format!("{} non-vacuous scales, need 3", pts.len()),
        };
    }
    if let (true, Some(kappa)) = (pts.iter().all(|p| p.1 == 0.0), family.first()) {
        return Verdict::RecurrentWith {
            kappa: kappa.clone(),
            c: 0.0,
        };
    }
    let span = pts[pts.len() - 1].0 / pts[0].0;
    if !(span >= 4.0) {
        return Verdict::Inconclusive {
            reason: format!("scales span a factor {span}, need 4"),
        };
    }
    let top = &pts[pts.len() / 2..];
    let rates: Vec<f64> = top.iter().map(|p| p.1 / p.0).collect();
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);
    if min_rate >= LINEAR_RATE_FLOOR && loglog_slope(&pts) >= LINEAR_EXPONENT_FLOOR {
        return Verdict::NonRecurrent {
            rate: rates.iter().sum::<f64>() / rates.len() as f64,
        };
    }
    for kappa in family {
        let ratios: Vec<(f64, f64)> = pts
            .iter()
            .map(|&(r, d)| (r, d / kappa.eval(r).unwrap_or(f64::NAN)))
            .collect();
        if loglog_slope(&ratios) <= BOUNDED_EXPONENT_CEIL {
            let c = ratios.iter().map(|p| p.1).fold(0.0, f64::max);
            return Verdict::RecurrentWith {
                kappa: kappa.clone(),
                c,
            };
        }
    }
    Verdict::Inconclusive {
        reason: "no family member bounds the profile".into(),
    }
}

/// Loop erasure of a walk, keeping the first visit order.
pub fn loop_erase(walk: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(walk.len());
    let mut pos = std::collections::HashMap::new();
    for &v in walk {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeScale {
    /// Scales `d(s, t)` in `[2^k, 2^(k+1))` share this bucket.
    pub scale: f64,
    pub max_deviation_over_kappa: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseGaugeEstimate {
    pub q: f64,
    pub big_q: f64,
    /// Candidates that passed the quasi-geodesic filter.
    pub samples: usize,
    /// `max dist(x, Z)/κ(‖x‖)` over all accepted candidates.
    pub sup_deviation_over_kappa: f64,
    /// `max(sup, q, Q)`.
    pub gauge: f64,
    pub scale_profile: Vec<GaugeScale>,
    /// Always true: sampling can only find lower bounds.
    pub lower_bound: bool,
    pub inconclusive: bool,
}

/// Lower bound on the gauge `m'_Z(q, Q)`: samples `(q, Q)`-quasi-geodesics
/// with endpoints on `Z` and measures their deviation from `Z` in units of `κ(‖x‖)`.
///
/// Candidates are loop-erased detours `Z_i → w → Z_j` through random `w`
/// near the segment, plus the avoiding-path witnesses of slope `q` at the
/// scales `(Z_0, Z_k)` for `k = 3, 6, 12, ...`.
#[allow(clippy::too_many_arguments)]
pub fn morse_gauge_probe(
    g: &Graph,
    z: &PathRecord,
    q: f64,
    big_q: f64,
    kappa: &Kappa,
    samples: usize,
    seed: u64,
    omega: Option<&WeightAssignment>,
) -> Result<MorseGaugeEstimate> {
    if !(q >= 1.0) || !(big_q >= 0.0) {
        return Err(Error::domain(format!(
            "quasi constants need q >= 1, Q >= 0 (got {q}, {big_q})"
        )));
    }
    let metric = Metric::new(g, omega)?;
    let zv = z.vertices();
    if zv.len() < 2 {
        return Err(Error::Degenerate("gauge of a single point".into()));
    }
    geodesic_segment(g, metric, z, zv[0], zv[zv.len() - 1])?;
    let to_z = distances_restricted(g, metric, zv, None, None);
    let norms = distances_from(g, metric, g.basepoint());
    let deviation = |path: &[Vertex]| -> f64 {
        path.iter()
            .map(|&x| {
                let d = metric.to_value(to_z[x as usize]);
                d / kappa
                    .eval(metric.to_value(norms[x as usize]))
                    .unwrap_or(1.0)
            })
            .fold(0.0, f64::max)
    };

    let mut candidates: Vec<Vec<Vertex>> = Vec::new();
    let n = zv.len();
    if n >= 3 {
        for s in 0..samples {
            let mut rng = stream_rng(seed, s as u64);
            let i = rng.random_range(0..n - 2);
            let j = rng.random_range(i + 2..n);
            let span = (j - i) as u32;
            let mid = zv[(i + j) / 2];
            let reach = g.bfs_distances(mid);
            let radius = rng.random_range(1..=span);
            let pool: Vec<Vertex> = (0..g.vertex_count() as Vertex)
                .filter(|&v| reach[v as usize] <= radius)
                .collect();
            let w = pool[rng.random_range(0..pool.len())];
            let first = shortest_path_avoiding(g, metric, zv[i], w, None)?;
            let second = shortest_path_avoiding(g, metric, w, zv[j], None)?;
            if let (Some((p1, _)), Some((p2, _))) = (first, second) {
                let mut walk = p1;
                walk.extend_from_slice(&p2[1..]);
                candidates.push(loop_erase(&walk));
            }
        }
    }
    let mut k = 3usize;
    let mut scales = Vec::new();
    while k < n {
        scales.push((zv[0], zv[k]));
        k *= 2;
    }
    scales.push((zv[0], zv[n - 1]));
    for rep in recurrence_profile(g, z, q, &scales, omega)? {
        if let Some(w) = rep.witness {
            candidates.push(w.vertices().to_vec());
        }
    }

    let mut accepted = 0usize;
    let mut sup = 0.0f64;
    let mut buckets: std::collections::BTreeMap<i32, (f64, usize)> =
        std::collections::BTreeMap::new();
    for cand in candidates {
        let rec = PathRecord::new(g, cand, omega)?;
        if !quasi_check(g, &rec, q, big_q, 1, omega)? {
            continue;
        }
        accepted += 1;
        let dev = deviation(rec.vertices());
        sup = sup.max(dev);
        let ends = distances_from(g, metric, rec.first())[rec.last() as usize];
        let scale = metric.to_value(ends).max(1.0);
        let entry = buckets
            .entry(scale.log2().floor() as i32)
            .or_insert((0.0, 0));
        entry.0 = entry.0.max(dev);
        entry.1 += 1;
    }
    Ok(MorseGaugeEstimate {
        q,
        big_q,
        samples: accepted,
        sup_deviation_over_kappa: sup,
        gauge: sup.max(q).max(big_q),
        scale_profile: buckets
            .into_iter()
            .map(|(k, (m, c))| GaugeScale {
                scale: 2f64.powi(k),
                max_deviation_over_kappa: m,
                samples: c,
            })
            .collect(),
        lower_bound: true,
        inconclusive: accepted == 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrackingEntry {
    pub r: f64,
    /// `d(α_r, β_r)/r`, absent when a ray never reaches norm `r`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackingReport {
    pub entries: Vec<TrackingEntry>,
    /// Whether `β ⊂ N_κ(α, n)` for the supplied `(κ, n)`.
    pub beta_in_nbhd: Option<bool>,
}

/// First point of `ray` with norm at least `r`.
fn point_at_norm(ray: &PathRecord, norms: &[u64], r_units: u64) -> Option<Vertex> {
    ray.vertices()
        .iter()
        .copied()
        .find(|&v| norms[v as usize] >= r_units)
}

/// `d(α_r, β_r)/r` for each radius, `α_r` being the first point of `α` at norm `r`.
pub fn tracking_ratio(
    g: &Graph,
    alpha: &PathRecord,
    beta: &PathRecord,
    radii: &[f64],
    omega: Option<&WeightAssignment>,
    nbhd: Option<(&Kappa, f64)>,
) -> Result<TrackingReport> {
    let metric = Metric::new(g, omega)?;
    let o = g.basepoint();
    if alpha.first() != o || beta.first() != o {
        return Err(Error::domain("rays must start at the basepoint"));
    }
    let norms = distances_from(g, metric, o);
    let mut entries = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0) {
            return Err(Error::domain(format!("radius must be positive, got {r}")));
        }
        // smallest integer length >= r
        let mut units = metric.floor_units(r);
        if metric.to_value(units) < r {
            units += 1;
        }
        let ratio = match (
            point_at_norm(alpha, &norms, units),
            point_at_norm(beta, &norms, units),
        ) {
            (Some(x), Some(y)) => {
                Some(metric.to_value(distances_from(g, metric, x)[y as usize]) / r)
            }
            _ => None,
        };
        entries.push(TrackingEntry { r, ratio });
    }
    let beta_in_nbhd = match nbhd {
        None => None,
        Some((kappa, n)) => {
            let mask = crate::kappa::nbhd_mask(g, alpha.vertices(), n, kappa, omega)?;
            Some(beta.vertices().iter().all(|&v| mask[v as usize]))
        }
    };
    Ok(TrackingReport {
        entries,
        beta_in_nbhd,
    })
}

/// `d = max{M((13q + 2)/10), 1}` for a one-argument gauge `M`.
pub fn fellow_travel_constant(q: f64, gauge: impl Fn(f64) -> f64) -> f64 {
    gauge((13.0 * q + 2.0) / 10.0).max(1.0)
}

/// Rays from the basepoint by name.
///
/// * `axis`, `neg_axis`: the positive or negative first coordinate axis of a lattice or wedge.
/// * `diagonal`: the staircase `(1,0), (1,1), (2,1), ...` of a lattice or wedge.
/// * `first`, `last`: greedy outward rays taking the smallest or largest id one
///   step further from the basepoint; in a wedge they stay in the tree.
pub fn named_ray(g: &Graph, name: &str) -> Result<PathRecord> {
    let lattice = match g.spec() {
        Some(GraphSpec::LatticeBox { dim, half_width })
        | Some(GraphSpec::Wedge {
            dim, half_width, ..
        }) => Some((dim, half_width as i64)),
        _ => None,
    };
    let verts: Vec<Vertex> = match name {
        "axis" | "neg_axis" | "diagonal" => {
            let (dim, n) = lattice
                .ok_or_else(|| Error::domain(format!("ray `{name}` needs a lattice or wedge")))?;
            if name == "diagonal" && dim < 2 {
                return Err(Error::domain("diagonal ray needs dimension >= 2"));
            }
            let mut coords = vec![0i64; dim as usize];
            let mut out = vec![g.lattice_vertex(&coords).unwrap()];
            let mut step = 0usize;
            loop {
                match name {
                    "axis" => coords[0] += 1,
                    "neg_axis" => coords[0] -= 1,
                    _ => coords[step % 2] += 1,
                }
                step += 1;
                if coords.iter().any(|x| x.abs() > n) {
                    break;
                }
                out.push(g.lattice_vertex(&coords).unwrap());
            }
            out
        }
        "first" | "last" => {
            let depth = g.bfs_distances(g.basepoint());
            let wedge = matches!(g.spec(), Some(GraphSpec::Wedge { .. }));
            let mut out = vec![g.basepoint()];
            let mut cur = g.basepoint();
            loop {
                let mut next = g.neighbors(cur).iter().copied().filter(|&w| {
                    depth[w as usize] == depth[cur as usize] + 1 && (!wedge || g.in_wedge_tree(w))
                });
                let pick = if name == "first" {
                    next.next()
                } else {
                    next.next_back()
                };
                match pick {
                    Some(w) => {
                        out.push(w);
                        cur = w;
                    }
                    None => break,
                }
            }
            out
        }
        other => return Err(Error::domain(format!("unknown ray `{other}`"))),
    };
    PathRecord::new(g, verts, None)
}

/// Length of the path in integer units of the metric, for callers comparing witnesses.
pub fn path_length(g: &Graph, p: &PathRecord, omega: Option<&WeightAssignment>) -> Result<f64> {
    let metric = Metric::new(g, omega)?;
    Ok(metric.to_value(path_units(g, metric, p.vertices())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesy::shortest_path;
    use crate::graph::build_graph;
    use crate::percolation::{sample_weights, DistributionSpec};

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

    fn x_axis(g: &Graph, n: i64) -> PathRecord {
        PathRecord::new(g, (-n..=n).map(|x| at(g, x, 0)).collect(), None).unwrap()
    }

    #[test]
    fn lattice_deletion_examples() {
        let g = grid(12);
        let gamma = x_axis(&g, 12);
        let (a, b) = (at(&g, -12, 0), at(&g, 12, 0));
        match avoiding_path(&g, &gamma, a, b, 7.0, 2.0, None).unwrap() {
            Avoidance::Witness(p) => assert_eq!(p.graph_length(), 40),
            other => panic!("{other:?}"),
        }
        match avoiding_path(&g, &gamma, a, b, 8.0, 2.0, None) {
            Err(Error::EndpointCap { cap, .. }) => assert_eq!(cap, 8.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            avoiding_path(&g, &gamma, a, at(&g, -11, 0), 0.0, 2.0, None).unwrap(),
            Avoidance::Vacuous
        );
    }

    #[test]
    fn tree_middle_third_separates() {
        let g = build_graph(&GraphSpec::RegularTree { arity: 3, depth: 6 }).unwrap();
        let ray = named_ray(&g, "last").unwrap();
        let gamma =
            shortest_path(&g, named_ray(&g, "first").unwrap().last(), ray.last(), None).unwrap();
        let v = gamma.vertices();
        for c in [2.0, 3.0, 4.0] {
            assert_eq!(
                avoiding_path(&g, &gamma, v[0], v[v.len() - 1], 0.0, c, None).unwrap(),
                Avoidance::NoWitness
            );
        }
    }

    #[test]
    fn axis_profile_hits_the_endpoint_cap() {
        let g = grid(12);
        let gamma = x_axis(&g, 12);
        let scales: Vec<(Vertex, Vertex)> = (1..=4)
            .map(|m| (at(&g, -3 * m, 0), at(&g, 3 * m, 0)))
            .collect();
        let profile = recurrence_profile(&g, &gamma, 2.0, &scales, None).unwrap();
        let d: Vec<f64> = profile.iter().map(|r| r.max_avoidance).collect();
        assert_eq!(d, vec![1.0, 3.0, 5.0, 7.0]);
        assert!(profile.iter().all(|r| r.capped));
        // the trace is consistent with antitone existence
        for rep in &profile {
            for s in &rep.trace {
                assert_eq!(s.exists, s.rho <= rep.max_avoidance);
            }
        }
        match classify_direction(&profile, &Kappa::default_family()) {
            Verdict::NonRecurrent { rate } => assert!(rate > 0.25 && rate < 1.0 / 3.0),
            other => panic!("{other:?}"),
        }
        let json = profile[1].to_json();
        assert_eq!(json["D"], 3.0);
        assert_eq!(json["C"], 2.0);
    }

    #[test]
    fn slope_bound_limits_the_radius() {
        // with C = 1.5 the detour 6m + 2(ρ+1) <= 9m allows ρ <= 1.5m - 1 < 2m - 1
        let g = grid(12);
        let gamma = x_axis(&g, 12);
        let rep = &recurrence_profile(&g, &gamma, 1.5, &[(at(&g, -12, 0), at(&g, 12, 0))], None)
            .unwrap()[0];
        assert_eq!(rep.max_avoidance, 5.0);
        assert!(!rep.capped);
        assert_eq!(rep.witness.as_ref().unwrap().graph_length(), 36);
    }

    #[test]
    fn classification_examples() {
        let rep = |r: f64, d: f64| RecurrenceReport {
            r,
            a: 0,
            b: 0,
            slope_bound: 2.0,
            max_avoidance: d,
            capped: false,
            vacuous: false,
            witness: None,
            trace: vec![],
        };
        let zeros: Vec<_> = [4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&r| rep(r, 0.0))
            .collect();
        assert_eq!(
            classify_direction(&zeros, &Kappa::default_family()),
            Verdict::RecurrentWith {
                kappa: Kappa::Constant { c: 1.0 },
                c: 0.0
            }
        );
        let logs = vec![rep(8.0, 2.0), rep(16.0, 3.0), rep(32.0, 4.0)];
        let log = Kappa::log(1.0, 0.0).unwrap();
        match classify_direction(&logs, std::slice::from_ref(&log)) {
            Verdict::RecurrentWith { kappa, c } => {
                assert_eq!(kappa, log);
                // least envelope: max D / log(r + e)
                let oracle = [(8.0f64, 2.0f64), (16.0, 3.0), (32.0, 4.0)]
                    .iter()
                    .map(|(r, d)| d / (r + std::f64::consts::E).ln())
                    .fold(0.0, f64::max);
                assert_eq!(c, oracle);
            }
            other => panic!("{other:?}"),
        }
        // the constant family member does not bound a growing profile
        match classify_direction(&logs, &Kappa::default_family()) {
            Verdict::RecurrentWith { kappa, .. } => assert_ne!(kappa, Kappa::Constant { c: 1.0 }),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            classify_direction(&logs[..2], &Kappa::default_family()),
            Verdict::Inconclusive { .. }
        ));
        let narrow = vec![rep(8.0, 2.0), rep(12.0, 3.0), rep(16.0, 4.0)];
        assert!(matches!(
            classify_direction(&narrow, &Kappa::default_family()),
            Verdict::Inconclusive { .. }
        ));
        let narrow_zero = vec![rep(8.0, 0.0), rep(12.0, 0.0), rep(16.0, 0.0)];
        assert!(classify_direction(&narrow_zero, &Kappa::default_family()).is_recurrent());
    }

    #[test]
    fn loop_erasure() {
        assert_eq!(loop_erase(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(loop_erase(&[1, 2, 3, 1, 5, 6, 5, 7]), vec![1, 5, 7]);
        assert_eq!(loop_erase(&[4]), vec![4]);
    }

    #[test]
    fn gauge_on_tree_geodesic_is_zero() {
        let g = build_graph(&GraphSpec::RegularTree { arity: 3, depth: 8 }).unwrap();
        let z = shortest_path(
            &g,
            named_ray(&g, "first").unwrap().last(),
            named_ray(&g, "last").unwrap().last(),
            None,
        )
        .unwrap();
        let one = Kappa::constant(1.0).unwrap();
        let est = morse_gauge_probe(&g, &z, 1.0, 0.0, &one, 40, 3, None).unwrap();
        assert_eq!(est.sup_deviation_over_kappa, 0.0);
        assert_eq!(est.gauge, 1.0);
        assert!(est.samples > 0);
        let est = morse_gauge_probe(&g, &z, 3.0, 2.0, &one, 40, 3, None).unwrap();
        assert_eq!(est.sup_deviation_over_kappa, 0.0);
        assert_eq!(est.gauge, 3.0);
    }

    #[test]
    fn gauge_on_lattice_axis_grows() {
        let g = grid(16);
        let one = Kappa::constant(1.0).unwrap();
        let mut sups = Vec::new();
        for m in [2i64, 4, 8] {
            let z = PathRecord::new(&g, (-m..=m).map(|x| at(&g, x, 0)).collect(), None).unwrap();
            let est = morse_gauge_probe(&g, &z, 3.0, 0.0, &one, 60, 5, None).unwrap();
            sups.push(est.sup_deviation_over_kappa);
        }
        assert!(sups[0] < sups[1] && sups[1] < sups[2], "{sups:?}");
    }

    #[test]
    fn tracking_examples() {
        let g = grid(10);
        let axis = named_ray(&g, "axis").unwrap();
        let diag = named_ray(&g, "diagonal").unwrap();
        let radii = [2.0, 4.0, 8.0, 16.0];
        let same = tracking_ratio(&g, &axis, &axis, &radii, None, None).unwrap();
        assert_eq!(same.entries[0].ratio, Some(0.0));
        assert_eq!(same.entries[3].ratio, None);
        let t = tracking_ratio(
            &g,
            &axis,
            &diag,
            &radii,
            None,
            Some((&Kappa::constant(1.0).unwrap(), 1.0)),
        )
        .unwrap();
        // α_r = (r, 0), β_r = (ceil(r/2), floor(r/2)), ℓ¹ distance r
        for e in &t.entries[..3] {
            assert_eq!(e.ratio, Some(1.0));
        }
        assert_eq!(t.beta_in_nbhd, Some(false));
    }

    #[test]
    fn diverging_tree_rays_separate_linearly() {
        // rays sharing the first k edges are 2(r - k) apart at norm r
        let g = build_graph(&GraphSpec::RegularTree {
            arity: 3,
            depth: 10,
        })
        .unwrap();
        let alpha = named_ray(&g, "first").unwrap();
        let k = 3;
        let branch = alpha.vertices()[k];
        let depth = g.bfs_distances(0);
        let mut beta = alpha.vertices()[..=k].to_vec();
        let mut cur = *g
            .neighbors(branch)
            .iter()
            .filter(|&&w| depth[w as usize] == k as u32 + 1)
            .next_back()
            .unwrap();
        beta.push(cur);
        while let Some(&w) = g
            .neighbors(cur)
            .iter()
            .rev()
            .find(|&&w| depth[w as usize] == depth[cur as usize] + 1)
        {
            beta.push(w);
            cur = w;
        }
        let beta = PathRecord::new(&g, beta, None).unwrap();
        let radii: Vec<f64> = (4..=10).map(|r| r as f64).collect();
        let t = tracking_ratio(&g, &alpha, &beta, &radii, None, None).unwrap();
        for e in &t.entries {
            assert_eq!(e.ratio, Some(2.0 * (e.r - k as f64) / e.r));
        }
    }

    #[test]
    fn wedge_rays() {
        let g = build_graph(&GraphSpec::Wedge {
            dim: 2,
            half_width: 3,
            arity: 3,
            depth: 4,
        })
        .unwrap();
        let first = named_ray(&g, "first").unwrap();
        assert_eq!(first.graph_length(), 4);
        assert!(first.vertices().iter().all(|&v| g.in_wedge_tree(v)));
        assert_eq!(named_ray(&g, "axis").unwrap().graph_length(), 3);
        assert!(named_ray(&g, "spiral").is_err());
    }

    #[test]
    fn point_mass_profile_matches_base() {
        let g = grid(8);
        let gamma = x_axis(&g, 8);
        let w = sample_weights(&g, &DistributionSpec::PointMass { c: 1.0 }, 0).unwrap();
        let scales = [(at(&g, -6, 0), at(&g, 6, 0)), (at(&g, -3, 0), at(&g, 3, 0))];
        let base = recurrence_profile(&g, &gamma, 2.0, &scales, None).unwrap();
        let weighted = recurrence_profile(&g, &gamma, 2.0, &scales, Some(&w)).unwrap();
        for (x, y) in base.iter().zip(&weighted) {
            assert_eq!(x.max_avoidance, y.max_avoidance);
            assert_eq!(
                x.witness.as_ref().map(|p| p.vertices().to_vec()),
                y.witness.as_ref().map(|p| p.vertices().to_vec())
            );
        }
    }

    #[test]
    fn fellow_travel_constant_examples() {
        assert_eq!(fellow_travel_constant(1.0, |_| 0.5), 1.0);
        assert_eq!(fellow_travel_constant(2.0, |x| x), 2.8);
    }
}
