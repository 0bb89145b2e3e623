//! First passage percolation: i.i.d. edge weights and the passage-time
//! envelopes that hold almost surely along self-avoiding paths.
//!
//! Randomness is counter based. Each edge (or Monte Carlo trial) reads its
//! own ChaCha8 stream selected by its index under a fixed key, so a weight
//! depends only on `(seed, index)` and never on evaluation order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Pareto, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{path_units, prefix_units, Metric, PathRecord, TICKS_PER_UNIT};
use crate::graph::{Fingerprint, Graph, Vertex};

/// Weights are clamped here before quantization so that tick sums stay far from overflow.
pub const MAX_WEIGHT: f64 = 1_048_576.0;

/// SplitMix64 finalizer applied to `master + index * golden_gamma`.
///
/// Used to derive per-trial seeds: `mix_seed(master, t)`.
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream `index` under key `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Edge weight law `ν`; all supports lie in `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionSpec {
    PointMass {
        c: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Pareto law with support `[xm, ∞)` and tail index `alpha > 1`.
    ShiftedPareto {
        xm: f64,
        alpha: f64,
    },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let fin = |x: f64| x.is_finite();
        let ok = match *self {
            DistributionSpec::PointMass { c } => fin(c) && c > 0.0,
            DistributionSpec::Uniform { lo, hi } => fin(lo) && fin(hi) && lo > 0.0 && hi > lo,
            DistributionSpec::Exponential { rate } => fin(rate) && rate > 0.0,
            DistributionSpec::ShiftedPareto { xm, alpha } => {
                fin(xm) && fin(alpha) && xm > 0.0 && alpha > 1.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::config(format!(
                "distribution {self} violates its support (needs no atom at 0 and a finite mean)"
            )))
        }
    }

    /// `b = E[ω_e]`.
    pub fn mean(&self) -> f64 {
        match *self {
            DistributionSpec::PointMass { c } => c,
            DistributionSpec::Uniform { lo, hi } => 0.5 * (lo + hi),
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::ShiftedPareto { xm, alpha } => alpha * xm / (alpha - 1.0),
        }
    }

    /// Standard deviation, infinite for Pareto tails with `alpha <= 2`.
    pub fn std_dev(&self) -> f64 {
        match *self {
            DistributionSpec::PointMass { .. } => 0.0,
            DistributionSpec::Uniform { lo, hi } => (hi - lo) / 12f64.sqrt(),
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::ShiftedPareto { xm, alpha } => {
                if alpha <= 2.0 {
                    f64::INFINITY
                } else {
                    xm / (alpha - 1.0) * (alpha / (alpha - 2.0)).sqrt()
                }
            }
        }
    }

    /// Draws one weight; `rng` must be a dedicated stream.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let w = match *self {
            DistributionSpec::PointMass { c } => c,
            DistributionSpec::Uniform { lo, hi } => {
                Uniform::new(lo, hi).expect("validated").sample(rng)
            }
            DistributionSpec::Exponential { rate } => {
                Exp::new(rate).expect("validated").sample(rng)
            }
            DistributionSpec::ShiftedPareto { xm, alpha } => {
                Pareto::new(xm, alpha).expect("validated").sample(rng)
            }
        };
        w.clamp(f64::MIN_POSITIVE, MAX_WEIGHT)
    }

    /// Exact `P(ω_1 + ... + ω_n <= x)` where a closed form exists.
    pub fn sum_cdf(&self, n: usize, x: f64) -> Option<f64> {
        if n == 0 {
            return Some(if x >= 0.0 { 1.0 } else { 0.0 });
        }
        match *self {
            DistributionSpec::PointMass { c } => Some(if x >= n as f64 * c { 1.0 } else { 0.0 }),
            DistributionSpec::Uniform { lo, hi } => {
                let u = (x - n as f64 * lo) / (hi - lo);
                Some(irwin_hall_cdf(n, u))
            }
            DistributionSpec::Exponential { rate } => {
                if x <= 0.0 {
                    Some(0.0)
                } else {
                    Some(statrs::function::gamma::gamma_lr(n as f64, rate * x))
                }
            }
            DistributionSpec::ShiftedPareto { .. } => None,
        }
    }

    /// Chernoff rate `I(ε) = sup_θ≥0 (-θε - log E e^{-θω})` for the lower tail.
    pub fn lower_tail_rate(&self, eps: f64) -> Option<f64> {
        if eps >= self.mean() {
            return Some(0.0);
        }
        match *self {
            DistributionSpec::PointMass { .. } => Some(f64::INFINITY),
            DistributionSpec::Exponential { rate } => {
                let x = rate * eps;
                if x <= 0.0 {
                    Some(f64::INFINITY)
                } else {
                    Some(x - 1.0 - x.ln())
                }
            }
            DistributionSpec::Uniform { lo, hi } => {
                if eps < lo {
                    return Some(f64::INFINITY);
                }
                let width = hi - lo;
                // log E e^{-θω}, stable for large θ
                let log_mgf = |theta: f64| {
                    if theta < 1e-12 {
                        -theta * 0.5 * (lo + hi)
                    } else {
                        let t = theta * width;
                        -theta * lo + (-(-t).exp_m1()).ln() - t.ln()
                    }
                };
                let objective = |theta: f64| -theta * eps - log_mgf(theta);
                Some(golden_max(objective, 0.0, 1e6 / width.max(1e-12)).max(0.0))
            }
            DistributionSpec::ShiftedPareto { .. } => None,
        }
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    // unimodal objective on [a, b]; search in log space for wide brackets
    let to = |x: f64| (x + 1.0).ln();
    let from = |y: f64| y.exp() - 1.0;
    let (mut lo, mut hi) = (to(a), to(b));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if f(from(m1)) < f(from(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    a = from(lo);
    b = from(hi);
    f(0.5 * (a + b)).max(f(0.0))
}

/// CDF of the sum of `n` independent uniform(0, 1) variables.
pub fn irwin_hall_cdf(n: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= n as f64 {
        return 1.0;
    }
    // symmetric about n/2; evaluate the short side for accuracy
    if x > n as f64 / 2.0 {
        return 1.0 - irwin_hall_cdf(n, n as f64 - x);
    }
    let mut sum = 0.0;
    let mut binom = 1.0;
    for k in 0..=(x.floor() as usize) {
        if k > 0 {
            binom *= (n - k + 1) as f64 / k as f64;
        }
        let term = binom * (x - k as f64).powi(n as i32);
        sum += if k % 2 == 0 { term } else { -term };
    }
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    (sum / fact).clamp(0.0, 1.0)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::PointMass { c } => write!(f, "point:{c}"),
            DistributionSpec::Uniform { lo, hi } => write!(f, "unif:{lo},{hi}"),
            DistributionSpec::Exponential { rate } => write!(f, "exp:{rate}"),
            DistributionSpec::ShiftedPareto { xm, alpha } => write!(f, "pareto:{xm},{alpha}"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// `point:c`, `unif:lo,hi`, `exp:rate`, `pareto:xm,a`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::config(format!("distribution `{s}` lacks `kind:` prefix")))?;
        let nums = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config(format!("bad number `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::config(format!("`{kind}` takes {n} parameters")))
            }
        };
        let d = match kind {
            "point" => {
                arity(1)?;
                DistributionSpec::PointMass { c: nums[0] }
            }
            "unif" => {
                arity(2)?;
                DistributionSpec::Uniform {
                    lo: nums[0],
                    hi: nums[1],
                }
            }
            "exp" => {
                arity(1)?;
                DistributionSpec::Exponential { rate: nums[0] }
            }
            "pareto" => {
                arity(2)?;
                DistributionSpec::ShiftedPareto {
                    xm: nums[0],
                    alpha: nums[1],
                }
            }
            other => return Err(Error::config(format!("unknown distribution `{other}`"))),
        };
        d.validate()?;
        Ok(d)
    }
}

/// One FPP sample `ω` with provenance.
///
/// Weights are quantized to multiples of 2^-32 so that every path sum is
/// exact; `ticks` holds the same values as integers.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightAssignment {
    weights: Vec<f64>,
    ticks: Vec<u64>,
    pub dist: DistributionSpec,
    pub seed: u64,
    pub graph_fingerprint: Fingerprint,
}

fn quantize(w: f64) -> u64 {
    ((w.clamp(0.0, MAX_WEIGHT) * TICKS_PER_UNIT).round() as u64).max(1)
}

impl WeightAssignment {
    /// Wraps explicit weights (one per canonical edge index).
    pub fn from_weights(
        g: &Graph,
        weights: Vec<f64>,
        dist: DistributionSpec,
        seed: u64,
    ) -> Result<Self> {
        if weights.len() != g.edge_count() {
            return Err(Error::domain(format!(
                "{} weights for {} edges",
                weights.len(),
                g.edge_count()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::domain(format!("edge weight {w} is not positive")));
        }
        let ticks: Vec<u64> = weights.iter().map(|&w| quantize(w)).collect();
        Ok(WeightAssignment {
            weights: ticks.iter().map(|&t| t as f64 / TICKS_PER_UNIT).collect(),
            ticks,
            dist,
            seed,
            graph_fingerprint: g.fingerprint(),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn ticks(&self) -> &[u64] {
        &self.ticks
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    /// Header `weights dist=<spec> seed=<s> graph=<fingerprint> edges=<m>` and one `U V W` line per edge.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = format!(
            "weights dist={} seed={} graph={} edges={}\n",
            self.dist,
            self.seed,
            self.graph_fingerprint,
            self.weights.len()
        );
        for (&(u, v), w) in g.edges().iter().zip(&self.weights) {
            out.push_str(&format!("{u} {v} {w}\n"));
        }
        out
    }

    pub fn from_text(g: &Graph, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty weight file"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("weights") {
            return Err(Error::parse(1, "expected `weights` header"));
        }
        let (mut dist, mut seed, mut fp, mut count) = (None, None, None, None);
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::parse(1, format!("bad header field `{f}`")))?;
            match k {
                "dist" => dist = Some(v.parse::<DistributionSpec>()?),
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| Error::parse(1, "bad seed"))?),
                "graph" => fp = Some(v.parse::<Fingerprint>()?),
                "edges" => {
                    count = Some(
                        v.parse::<usize>()
                            .map_err(|_| Error::parse(1, "bad edge count"))?,
                    )
                }
                _ => return Err(Error::parse(1, format!("unknown header field `{k}`"))),
            }
        }
        let (dist, seed, fp, count) = match (dist, seed, fp, count) {
            (Some(d), Some(s), Some(f), Some(c)) => (d, s, f, c),
            _ => return Err(Error::parse(1, "header needs dist, seed, graph and edges")),
        };
        if fp != g.fingerprint() {
            return Err(Error::Provenance {
                expected: g.fingerprint().to_string(),
                found: fp.to_string(),
            });
        }
        let mut weights = Vec::with_capacity(count);
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let k = weights.len();
            if parts.len() != 3 || k >= g.edge_count() {
                return Err(Error::parse(i + 1, "expected `U V W`"));
            }
            let (u, v) = g.edges()[k];
            if parts[0] != u.to_string() || parts[1] != v.to_string() {
                return Err(Error::parse(i + 1, format!("expected edge {u} {v}")));
            }
            let w = parts[2]
                .parse::<f64>()
                .map_err(|_| Error::parse(i + 1, "bad weight"))?;
            weights.push(w);
        }
        if weights.len() != count {
            return Err(Error::parse(0, "edge count disagrees with header"));
        }
        let wa = WeightAssignment::from_weights(g, weights, dist, seed)?;
        Ok(wa)
    }
}

/// Draws one weight per edge; edge `e` reads stream `e` under key `seed`.
pub fn sample_weights(g: &Graph, dist: &DistributionSpec, seed: u64) -> Result<WeightAssignment> {
    dist.validate()?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..g.edge_count())
        .map(|e| {
            let mut rng = base.clone();
            rng.set_stream(e as u64);
            dist.draw(&mut rng)
        })
        .collect();
    WeightAssignment::from_weights(g, weights, *dist, seed)
}

/// `ℓ_ω(p)`, the sum of weights along `p`.
pub fn passage_time(g: &Graph, p: &PathRecord, omega: &WeightAssignment) -> Result<f64> {
    if p.graph_fingerprint() != omega.graph_fingerprint {
        return Err(Error::Provenance {
            expected: p.graph_fingerprint().to_string(),
            found: omega.graph_fingerprint.to_string(),
        });
    }
    let metric = Metric::new(g, Some(omega))?;
    Ok(metric.to_value(path_units(g, metric, p.vertices())?))
}

/// Window selection for [`check_upper_envelope`].
#[derive(Clone, Debug, PartialEq)]
pub enum Windows {
    /// Explicit `(i, j)` position pairs, `i <= j`.
    Explicit(Vec<(usize, usize)>),
    /// Every window `γ[i, j]` with `j - i >= min_len`.
    AllAtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperEnvelopeReport {
    /// `max(0, max_w ℓ_ω(γ[i,j]) - 2b(j-i))`
    pub fitted_r0: f64,
    /// Windows exceeding `2b(j-i) + r0` for the supplied `r0`.
    pub violations: Option<u64>,
    pub windows: u64,
}

/// Upper passage-time envelope `ℓ_ω(γ[i,j]) <= 2b(j-i) + r0` along a self-avoiding path.
pub fn check_upper_envelope(
    g: &Graph,
    gamma: &PathRecord,
    omega: &WeightAssignment,
    windows: &Windows,
    r0: Option<f64>,
) -> Result<UpperEnvelopeReport> {
    let metric = Metric::new(g, Some(omega))?;
    let prefix = prefix_units(g, metric, gamma.vertices())?;
    let two_b = 2.0 * omega.dist.mean();
    // T_k = S_k - 2b k so that a window's excess is T_j - T_i
    let t: Vec<f64> = prefix
        .iter()
        .enumerate()
        .map(|(k, &s)| metric.to_value(s) - two_b * k as f64)
        .collect();
    match windows {
        Windows::Explicit(list) => {
            let mut best = 0.0f64;
            let mut violations = 0u64;
            for &(i, j) in list {
                if i > j || j >= t.len() {
                    return Err(Error::domain(format!("window ({i}, {j}) outside the path")));
                }
                let excess = t[j] - t[i];
                best = best.max(excess);
                if r0.is_some_and(|r| excess > r) {
                    violations += 1;
                }
            }
            Ok(UpperEnvelopeReport {
                fitted_r0: best,
                violations: r0.map(|_| violations),
                windows: list.len() as u64,
            })
        }
        Windows::AllAtLeast(min_len) => {
            let min_len = (*min_len).max(1);
            let n = t.len();
            if n <= min_len {
                return Ok(UpperEnvelopeReport {
                    fitted_r0: 0.0,
                    violations: r0.map(|_| 0),
                    windows: 0,
                });
            }
            let mut best = 0.0f64;
            let mut running_min = f64::INFINITY;
            for j in min_len..n {
                running_min = running_min.min(t[j - min_len]);
                best = best.max(t[j] - running_min);
            }
            let windows = ((n - min_len) * (n - min_len + 1) / 2) as u64;
            let violations = r0.map(|r| count_excess_pairs(&t, min_len, r));
            Ok(UpperEnvelopeReport {
                fitted_r0: best,
                violations,
                windows,
            })
        }
    }
}

/// Number of pairs `i + gap <= j` with `t[j] - t[i] > r`, via a Fenwick tree over ranks.
fn count_excess_pairs(t: &[f64], gap: usize, r: f64) -> u64 {
    let mut sorted = t.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut tree = vec![0u64; sorted.len() + 1];
    let mut total = 0u64;
    for j in gap..t.len() {
        // insert t[j - gap]
        let rank = sorted.partition_point(|x| x.total_cmp(&t[j - gap]).is_lt()) + 1;
        let mut k = rank;
        while k < tree.len() {
            tree[k] += 1;
            k += k & k.wrapping_neg();
        }
        // count inserted values strictly below t[j] - r
        let cut = t[j] - r;
        let mut k = sorted.partition_point(|x| *x < cut);
        while k > 0 {
            total += tree[k];
            k -= k & k.wrapping_neg();
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    MonteCarlo,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthEstimate {
    pub n: usize,
    /// Probability used for `α̂_n` (empirical or exact).
    pub probability: f64,
    pub hits: Option<u64>,
    pub trials: Option<u64>,
    /// Closed-form probability when the law admits one.
    pub exact: Option<f64>,
    pub source: AlphaSource,
    /// No event observed (or exact probability 0); `alpha` is an upper bound.
    pub censored: bool,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaEstimate {
    pub epsilon: f64,
    pub per_length: Vec<LengthEstimate>,
    /// `max_n α̂_n`.
    pub alpha: f64,
    pub censored: bool,
}

/// Monte Carlo counts below this are replaced by the exact law when available.
pub const RARE_HITS: u64 = 100;

/// One-sided 95% upper bound on a probability after zero hits in `trials`.
fn zero_hit_upper_bound(trials: u64) -> f64 {
    1.0 - 0.05f64.powf(1.0 / trials as f64)
}

/// Estimates `α(ε)` with `P(ℓ_ω(γ) <= ε ℓ(γ)) <= α(ε)^ℓ(γ)` from sums of
/// `n` i.i.d. weights for every `n` in `lengths`.
///
/// Monte Carlo is used while `εn` lies within six standard deviations of the
/// mean `nb`; further out, or when fewer than [`RARE_HITS`] events are
/// observed, the exact law of the sum is used when one is known. Zero observed
/// events without a closed form give a censored upper bound.
pub fn estimate_alpha(
    dist: &DistributionSpec,
    eps: f64,
    lengths: &[usize],
    trials: u64,
    seed: u64,
) -> Result<AlphaEstimate> {
    dist.validate()?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::domain("lengths must be positive and nonempty"));
    }
    let b = dist.mean();
    let sigma = dist.std_dev();
    let mut per_length = Vec::with_capacity(lengths.len());
    for (li, &n) in lengths.iter().enumerate() {
        let threshold = eps * n as f64;
        let exact = dist.sum_cdf(n, threshold);
        let within_guard = (b * n as f64 - threshold) <= 6.0 * sigma * (n as f64).sqrt();
        let use_mc = trials > 0 && (within_guard || exact.is_none());
        let mc_hits = if use_mc {
            let key = mix_seed(seed, li as u64);
            let base = ChaCha8Rng::seed_from_u64(key);
            let mut hits = 0u64;
            for t in 0..trials {
                let mut rng = base.clone();
                rng.set_stream(t);
                let mut s = 0.0;
                for _ in 0..n {
                    s += dist.draw(&mut rng);
                }
                if s <= threshold {
                    hits += 1;
                }
            }
            Some(hits)
        } else {
            None
        };
        let est = match (mc_hits, exact) {
            (Some(hits), Some(p)) if hits < RARE_HITS => LengthEstimate {
                n,
                probability: p,
                hits: Some(hits),
                trials: Some(trials),
                exact,
                source: AlphaSource::Exact,
                censored: p == 0.0,
                alpha: p.powf(1.0 / n as f64),
            },
            (Some(hits), _) => {
                let (probability, censored) = if hits == 0 {
                    (zero_hit_upper_bound(trials), true)
                } else {
                    (hits as f64 / trials as f64, false)
                };
                LengthEstimate {
                    n,
                    probability,
                    hits: Some(hits),
                    trials: Some(trials),
                    exact,
                    source: AlphaSource::MonteCarlo,
                    censored,
                    alpha: probability.powf(1.0 / n as f64),
                }
            }
            (None, _) => {
                let p = exact.ok_or_else(|| {
                    Error::domain("no trials requested and no closed form available")
                })?;
                LengthEstimate {
                    n,
                    probability: p,
                    hits: None,
                    trials: None,
                    exact,
                    source: AlphaSource::Exact,
                    censored: p == 0.0,
                    alpha: p.powf(1.0 / n as f64),
                }
            }
        };
        per_length.push(est);
    }
    let alpha = per_length.iter().map(|e| e.alpha).fold(0.0, f64::max);
    let censored = per_length.iter().any(|e| e.censored);
    Ok(AlphaEstimate {
        epsilon: eps,
        per_length,
        alpha,
        censored,
    })
}

/// Tabulated `ε ↦ α̂(ε)`, kept monotone by an isotonic (running max) clamp.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaTable {
    points: Vec<(f64, f64)>,
}

impl AlphaTable {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("empty alpha table"));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("duplicate epsilon in alpha table"));
        }
        let mut running = 0.0f64;
        for p in &mut points {
            running = running.max(p.1);
            p.1 = running;
        }
        Ok(AlphaTable { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Piecewise linear interpolation, flat outside the tabulated range.
    pub fn eval(&self, eps: f64) -> f64 {
        let p = &self.points;
        if eps <= p[0].0 {
            return p[0].1;
        }
        if eps >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let k = p.partition_point(|q| q.0 <= eps);
        let (x0, y0) = p[k - 1];
        let (x1, y1) = p[k];
        y0 + (y1 - y0) * (eps - x0) / (x1 - x0)
    }
}

/// Builds an [`AlphaTable`] by running [`estimate_alpha`] over an ε grid.
pub fn alpha_table(
    dist: &DistributionSpec,
    eps_grid: &[f64],
    lengths: &[usize],
    trials: u64,
    seed: u64,
) -> Result<AlphaTable> {
    let points = eps_grid
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            estimate_alpha(dist, e, lengths, trials, mix_seed(seed, i as u64)).map(|a| (e, a.alpha))
        })
        .collect::<Result<Vec<_>>>()?;
    AlphaTable::new(points)
}

/// Source of `α` for [`c_of_d`].
#[derive(Clone, Debug, PartialEq)]
pub enum Alpha {
    Table(AlphaTable),
    /// `α(ε) = exp(-I(ε))` from the Chernoff rate of the law.
    Analytic(DistributionSpec),
}

impl Alpha {
    pub fn eval(&self, eps: f64) -> Result<f64> {
        match self {
            Alpha::Table(t) => Ok(t.eval(eps)),
            Alpha::Analytic(d) => d
                .lower_tail_rate(eps)
                .map(|rate| (-rate).exp())
                .ok_or_else(|| Error::domain(format!("no closed-form lower-tail rate for {d}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CofD {
    pub value: f64,
    /// `α` exceeded the threshold everywhere; `value` is the smallest tabulated ε.
    pub conservative: bool,
    pub threshold: f64,
}

/// Threshold `1/(q+1)^(D+2)` at which `C(D) = β(threshold)` is read off.
pub fn c_of_d_threshold(q: usize, d: f64) -> f64 {
    (q as f64 + 1.0).powf(-(d + 2.0))
}

/// `C(D) = β(1/(q+1)^(D+2))` with `β(t) = sup{ε : α(ε) <= t}`, by bisection.
pub fn c_of_d(alpha: &Alpha, q: usize, d: f64) -> Result<CofD> {
    if !(d >= 0.0) || q < 2 {
        return Err(Error::domain(format!(
            "need D >= 0 and q >= 2 (got D={d}, q={q})"
        )));
    }
    let threshold = c_of_d_threshold(q, d);
    let (mut lo, mut hi) = match alpha {
        Alpha::Table(t) => {
            let p = t.points();
            let (first, last) = (p[0], p[p.len() - 1]);
            if first.1 > threshold {
                return Ok(CofD {
                    value: first.0,
                    conservative: true,
                    threshold,
                });
            }
            if last.1 <= threshold {
                return Ok(CofD {
                    value: last.0,
                    conservative: false,
                    threshold,
                });
            }
            (first.0, last.0)
        }
        Alpha::Analytic(dist) => {
            if let DistributionSpec::PointMass { c } = *dist {
                return Ok(CofD {
                    value: c,
                    conservative: false,
                    threshold,
                });
            }
            (0.0, dist.mean())
        }
    };
    // invariant: alpha(lo) <= threshold < alpha(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if alpha.eval(mid)? <= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CofD {
        value: lo,
        conservative: false,
        threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerEnvelopeReport {
    /// `max(0, max_γ c ℓ(γ) - ℓ_ω(γ))`
    pub fitted_r1: f64,
    pub violations: Option<u64>,
    pub paths: usize,
}

fn check_d_condition(g: &Graph, paths: &[PathRecord], d: f64) -> Result<()> {
    let from_o = g.bfs_distances(g.basepoint());
    let offenders: Vec<usize> = paths
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let near = p
                .vertices()
                .iter()
                .map(|&v| from_o[v as usize])
                .min()
                .unwrap_or(0);
            near as f64 > d * p.graph_length() as f64
        })
        .map(|(i, _)| i)
        .collect();
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "paths violate d(path, o) <= D * len: indices {offenders:?}"
        )))
    }
}

/// Lower passage-time envelope `ℓ_ω(γ) >= c ℓ(γ) - r1` over paths with `d(γ, o) <= D ℓ(γ)`.
pub fn check_lower_envelope(
    g: &Graph,
    paths: &[PathRecord],
    omega: &WeightAssignment,
    d: f64,
    c: f64,
    r1: Option<f64>,
) -> Result<LowerEnvelopeReport> {
    check_d_condition(g, paths, d)?;
    let metric = Metric::new(g, Some(omega))?;
    let mut fitted = 0.0f64;
    let mut violations = 0u64;
    for p in paths {
        let t = metric.to_value(path_units(g, metric, p.vertices())?);
        let deficit = c * p.graph_length() as f64 - t;
        fitted = fitted.max(deficit);
        if r1.is_some_and(|r| deficit > r) {
            violations += 1;
        }
    }
    Ok(LowerEnvelopeReport {
        fitted_r1: fitted,
        violations: r1.map(|_| violations),
        paths: paths.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiReport {
    pub q: f64,
    pub big_q: f64,
    pub fitted_r0: f64,
    pub fitted_r1: f64,
    pub holds: bool,
    /// Smallest margin of either inequality over all paths.
    pub slack: f64,
}

/// Verifies `ℓ/q - Q <= ℓ_ω <= q ℓ + Q` with `q = max(2b, 1/c)` and
/// `Q = max(r0, r1)` fitted over the supplied paths.
pub fn qi_envelope_check(
    g: &Graph,
    omega: &WeightAssignment,
    paths: &[PathRecord],
    d: f64,
    c: f64,
) -> Result<QiReport> {
    if !(c > 0.0) {
        return Err(Error::domain("c must be positive"));
    }
    let lower = check_lower_envelope(g, paths, omega, d, c, None)?;
    let metric = Metric::new(g, Some(omega))?;
    let two_b = 2.0 * omega.dist.mean();
    let mut measured = Vec::with_capacity(paths.len());
    let mut fitted_r0 = 0.0f64;
    for p in paths {
        let t = metric.to_value(path_units(g, metric, p.vertices())?);
        let l = p.graph_length() as f64;
        fitted_r0 = fitted_r0.max(t - two_b * l);
        measured.push((l, t));
    }
    let q = two_b.max(1.0 / c);
    let big_q = fitted_r0.max(lower.fitted_r1);
    let mut slack = f64::INFINITY;
    for &(l, t) in &measured {
        slack = slack.min(t - (l / q - big_q)).min(q * l + big_q - t);
    }
    Ok(QiReport {
        q,
        big_q,
        fitted_r0,
        fitted_r1: lower.fitted_r1,
        holds: slack >= 0.0,
        slack,
    })
}

/// Random self-avoiding walks satisfying `d(γ, o) <= D ℓ(γ)`, with lengths in
/// `[min_len, max_len]`. Walks are started in `B(o, floor(D ℓ))` and grown by
/// uniformly chosen unvisited neighbours.
pub fn sample_admissible_paths(
    g: &Graph,
    d: f64,
    count: usize,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<PathRecord>> {
    if min_len == 0 || min_len > max_len {
        return Err(Error::domain("need 1 <= min_len <= max_len"));
    }
    let from_o = g.bfs_distances(g.basepoint());
    let mut by_dist: Vec<Vec<Vertex>> = Vec::new();
    for (v, &dv) in from_o.iter().enumerate() {
        let dv = dv as usize;
        if by_dist.len() <= dv {
            by_dist.resize(dv + 1, Vec::new());
        }
        by_dist[dv].push(v as Vertex);
    }
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0u64;
    let mut visited = vec![false; g.vertex_count()];
    while out.len() < count {
        if attempt > 1000 * count as u64 + 1000 {
            return Err(Error::Precondition(
                "could not sample admissible paths; graph too small".into(),
            ));
        }
        let mut rng = stream_rng(seed, attempt);
        attempt += 1;
        let target = rng.random_range(min_len..=max_len);
        let reach = ((d * target as f64).floor() as usize).min(by_dist.len() - 1);
        let pool: usize = by_dist[..=reach].iter().map(Vec::len).sum();
        let mut pick = rng.random_range(0..pool);
        let mut start = g.basepoint();
        for shell in &by_dist[..=reach] {
            if pick < shell.len() {
                start = shell[pick];
                break;
            }
            pick -= shell.len();
        }
        let mut walk = vec![start];
        visited[start as usize] = true;
        while walk.len() <= target {
            let cur = *walk.last().unwrap();
            let free: Vec<Vertex> = g
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| !visited[w as usize])
                .collect();
            if free.is_empty() {
                break;
            }
            let next = free[rng.random_range(0..free.len())];
            visited[next as usize] = true;
            walk.push(next);
        }
        for &v in &walk {
            visited[v as usize] = false;
        }
        let len = walk.len() - 1;
        if len < min_len || from_o[start as usize] as f64 > d * len as f64 {
            continue;
        }
        out.push(PathRecord::new(g, walk, None)?);
    }
    Ok(out)
}
