//! Declarative experiments: a flat `key = value` spec, seeded trials run in
//! parallel, JSON-lines trial output and a CSV summary.
//!
//! ```text
//! graph.kind = tree
//! graph.arity = 3
//! graph.depth = 14
//! dist.kind = exp
//! dist.rate = 1
//! seed = 7
//! trials = 20
//! probes = morse_image
//! probe.morse_image.C = 2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::boundary::{bi_infinite_probe, image_ray, morse_image_probe, neighborhood_image_check};
use crate::error::{Error, Result};
use crate::geodesy::PathRecord;
use crate::graph::{build_graph, Graph, GraphSpec};
use crate::kappa::Kappa;
use crate::percolation::{
    check_upper_envelope, mix_seed, passage_time, sample_weights, DistributionSpec,
    WeightAssignment, Windows,
};
use crate::recurrence::{classify_direction, morse_gauge_probe, named_ray, recurrence_profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    /// Recurrence profile and verdict of a named ray.
    Recur,
    /// Verdicts of a ray and of its ω-image.
    MorseImage,
    /// Neighbourhood preservation fit and its stability.
    Neighborhood,
    /// Offsets of ω-geodesics joining two rays.
    BiInfinite,
    /// Stabilization of ω-geodesics towards a ray.
    ImageRay,
    /// Upper passage-time envelope along a ray.
    UpperEnvelope,
    /// Morse gauge lower bound of a ray segment.
    Gauge,
}

impl ProbeKind {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "recur" => ProbeKind::Recur,
            "morse_image" => ProbeKind::MorseImage,
            "neighborhood" => ProbeKind::Neighborhood,
            "bi_infinite" => ProbeKind::BiInfinite,
            "image_ray" => ProbeKind::ImageRay,
            "upper_envelope" => ProbeKind::UpperEnvelope,
            "gauge" => ProbeKind::Gauge,
            other => return Err(Error::config(format!("unknown probe kind `{other}`"))),
        })
    }

    fn as_str(&self) -> &'static str {
        match self {
            ProbeKind::Recur => "recur",
            ProbeKind::MorseImage => "morse_image",
            ProbeKind::Neighborhood => "neighborhood",
            ProbeKind::BiInfinite => "bi_infinite",
            ProbeKind::ImageRay => "image_ray",
            ProbeKind::UpperEnvelope => "upper_envelope",
            ProbeKind::Gauge => "gauge",
        }
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self {
            ProbeKind::Recur => &["ray", "C", "scales", "rmax", "metric", "expect"],
            ProbeKind::MorseImage => &["ray", "C", "scales", "rmax"],
            ProbeKind::Neighborhood => &["ray", "kappa", "n", "radius", "r1", "samples"],
            ProbeKind::BiInfinite => &["ray1", "ray2", "radii", "kappa", "c"],
            ProbeKind::ImageRay => &["ray", "radii"],
            ProbeKind::UpperEnvelope => &["ray", "min_len", "r0"],
            ProbeKind::Gauge => &["ray", "q", "Q", "kappa", "samples", "rmax"],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpec {
    pub name: String,
    pub kind: ProbeKind,
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub graph: GraphSpec,
    pub dist: DistributionSpec,
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    pub probes: Vec<ProbeSpec>,
    pub out_trials: Option<String>,
    pub out_summary: Option<String>,
}

fn graph_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "lattice" => &["dim", "half_width"],
        "tree" => &["arity", "depth"],
        "free" => &["rank", "radius"],
        "wedge" => &["dim", "half_width", "arity", "depth"],
        _ => return None,
    })
}

fn dist_keys(kind: &str) -> Option<&'static [&'static str]> {
    Some(match kind {
        "point" => &["c"],
        "unif" => &["lo", "hi"],
        "exp" => &["rate"],
        "pareto" => &["xm", "alpha"],
        _ => return None,
    })
}

/// Reassembles `prefix.kind` and `prefix.<param>` keys into a `kind:p1,p2` string.
fn compact(
    entries: &BTreeMap<String, String>,
    prefix: &str,
    keys_of: fn(&str) -> Option<&'static [&'static str]>,
) -> Result<String> {
    let kind = entries
        .get(&format!("{prefix}.kind"))
        .ok_or_else(|| Error::config(format!("missing `{prefix}.kind`")))?;
    let keys =
        keys_of(kind).ok_or_else(|| Error::config(format!("unknown {prefix} kind `{kind}`")))?;
    for k in entries
        .keys()
        .filter_map(|k| k.strip_prefix(&format!("{prefix}.")))
    {
        if k != "kind" && !keys.contains(&k) {
            return Err(Error::config(format!(
                "`{prefix}.{k}` is not a parameter of `{kind}`"
            )));
        }
    }
    let values = keys
        .iter()
        .map(|k| {
            entries
                .get(&format!("{prefix}.{k}"))
                .cloned()
                .ok_or_else(|| Error::config(format!("missing `{prefix}.{k}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(format!("{kind}:{}", values.join(",")))
}

fn expand(
    prefix: &str,
    compact: &str,
    keys_of: fn(&str) -> Option<&'static [&'static str]>,
    out: &mut String,
) {
    let (kind, rest) = compact.split_once(':').unwrap();
    let _ = writeln!(out, "{prefix}.kind = {kind}");
    for (k, v) in keys_of(kind).unwrap().iter().zip(rest.split(',')) {
        let _ = writeln!(out, "{prefix}.{k} = {v}");
    }
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::parse(i + 1, format!("expected `key = value`, got `{line}`"))
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(Error::parse(i + 1, "empty key"));
            }
            if entries.insert(k.clone(), v).is_some() {
                return Err(Error::parse(i + 1, format!("duplicate key `{k}`")));
            }
        }
        let graph: GraphSpec = compact(&entries, "graph", graph_keys)?.parse()?;
        let dist: DistributionSpec = compact(&entries, "dist", dist_keys)?.parse()?;
        let num = |key: &str, default: Option<u64>| -> Result<u64> {
            match entries.get(key) {
                Some(v) => v
                    .parse()
                    .map_err(|_| Error::config(format!("`{key}` must be a nonnegative integer"))),
                None => default.ok_or_else(|| Error::config(format!("missing `{key}`"))),
            }
        };
        let seed = num("seed", None)?;
        let trials = num("trials", Some(1))?;
        if trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        let workers = num("workers", Some(1))?.max(1) as usize;
        let names: Vec<String> = entries
            .get("probes")
            .map(|p| {
                p.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        let mut probes = Vec::new();
        for name in &names {
            if probes.iter().any(|p: &ProbeSpec| &p.name == name) {
                return Err(Error::config(format!("probe `{name}` listed twice")));
            }
            let prefix = format!("probe.{name}.");
            let mut params: BTreeMap<String, String> = entries
                .iter()
                .filter_map(|(k, v)| k.strip_prefix(&prefix).map(|p| (p.to_string(), v.clone())))
                .collect();
            let kind = ProbeKind::parse(params.remove("kind").as_deref().unwrap_or(name))?;
            if let Some(bad) = params
                .keys()
                .find(|k| !kind.allowed().contains(&k.as_str()))
            {
                return Err(Error::config(format!(
                    "probe `{name}` has undeclared parameter `{bad}`"
                )));
            }
            probes.push(ProbeSpec {
                name: name.clone(),
                kind,
                params,
            });
        }
        for key in entries.keys() {
            let known = key.starts_with("graph.")
                || key.starts_with("dist.")
                || matches!(
                    key.as_str(),
                    "seed" | "trials" | "workers" | "probes" | "out.trials" | "out.summary"
                )
                || key
                    .strip_prefix("probe.")
                    .and_then(|rest| rest.split_once('.'))
                    .is_some_and(|(name, _)| names.iter().any(|n| n == name));
            if !known {
                return Err(Error::config(format!("unknown key `{key}`")));
            }
        }
        Ok(ExperimentSpec {
            graph,
            dist,
            seed,
            trials,
            workers,
            probes,
            out_trials: entries.get("out.trials").cloned(),
            out_summary: entries.get("out.summary").cloned(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        ExperimentSpec::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text of everything that determines the results.
    fn canonical_body(&self) -> String {
        let mut out = String::new();
        expand("graph", &self.graph.to_string(), graph_keys, &mut out);
        expand("dist", &self.dist.to_string(), dist_keys, &mut out);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "trials = {}", self.trials);
        let names: Vec<&str> = self.probes.iter().map(|p| p.name.as_str()).collect();
        let _ = writeln!(out, "probes = {}", names.join(", "));
        for p in &self.probes {
            if p.kind.as_str() != p.name {
                let _ = writeln!(out, "probe.{}.kind = {}", p.name, p.kind.as_str());
            }
            for (k, v) in &p.params {
                let _ = writeln!(out, "probe.{}.{k} = {v}", p.name);
            }
        }
        out
    }

    /// Canonical file form; parsing it gives back an equal spec.
    pub fn to_text(&self) -> String {
        let mut out = self.canonical_body();
        let _ = writeln!(out, "workers = {}", self.workers);
        if let Some(p) = &self.out_trials {
            let _ = writeln!(out, "out.trials = {p}");
        }
        if let Some(p) = &self.out_summary {
            let _ = writeln!(out, "out.summary = {p}");
        }
        out
    }

    /// First 16 hex digits of the SHA-256 of the canonical body. Worker count
    /// and output paths do not enter the hash.
    pub fn spec_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_body().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Outcome of one probe in one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbeOutcome {
    Done {
        pass: bool,
        metrics: BTreeMap<String, f64>,
        detail: Value,
    },
    Failed {
        error: ProbeError,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeError {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: u64,
    pub seed: u64,
    pub spec_hash: String,
    pub probes: BTreeMap<String, ProbeOutcome>,
}

struct Params<'a> {
    probe: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn bad(&self, key: &str, v: &str) -> Error {
        Error::config(format!(
            "probe `{}`: bad value `{v}` for `{key}`",
            self.probe
        ))
    }

    fn str_or<'b>(&'b self, key: &str, default: &'b str) -> &'b str {
        self.map.get(key).map(String::as_str).unwrap_or(default)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            Some(v) => v.parse().map_err(|_| self.bad(key, v)),
            None => Ok(default),
        }
    }

    fn usize_opt(&self, key: &str) -> Result<Option<usize>> {
        self.map
            .get(key)
            .map(|v| v.parse().map_err(|_| self.bad(key, v)))
            .transpose()
    }

    fn kappa_or(&self, key: &str, default: &str) -> Result<Kappa> {
        self.str_or(key, default).parse()
    }

    fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.map
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|p| p.trim().parse::<usize>().map_err(|_| self.bad(key, v)))
                    .collect()
            })
            .transpose()
    }

    /// `origin` = (0, k) for k = 2..=rmax, `both` adds (k, rmax), or explicit `i:j,i:j`.
    fn scales(&self, rmax: usize) -> Result<Vec<(usize, usize)>> {
        let spec = self.str_or("scales", "origin");
        let origin = (2..=rmax).map(|k| (0, k));
        Ok(match spec {
            "origin" => origin.collect(),
            "both" => origin
                .chain((0..rmax.saturating_sub(1)).map(|k| (k, rmax)))
                .collect(),
            list => list
                .split(',')
                .map(|pair| {
                    let (i, j) = pair
                        .split_once(':')
                        .ok_or_else(|| self.bad("scales", list))?;
                    Ok((
                        i.trim().parse().map_err(|_| self.bad("scales", list))?,
                        j.trim().parse().map_err(|_| self.bad("scales", list))?,
                    ))
                })
                .collect::<Result<_>>()?,
        })
    }
}

fn default_rmax(g: &Graph, ray: &PathRecord) -> usize {
    g.unclipped_radius().min(ray.graph_length())
}

fn done(pass: bool, metrics: &[(&str, f64)], detail: Value) -> ProbeOutcome {
    ProbeOutcome::Done {
        pass,
        metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        detail,
    }
}

fn run_probe(
    g: &Graph,
    omega: &WeightAssignment,
    probe: &ProbeSpec,
    seed: u64,
) -> Result<ProbeOutcome> {
    let p = Params {
        probe: &probe.name,
        map: &probe.params,
    };
    let ray = named_ray(g, p.str_or("ray", "first"))?;
    match probe.kind {
        ProbeKind::Recur => {
            let c = p.f64_or("C", 2.0)?;
            let rmax = p
                .usize_opt("rmax")?
                .unwrap_or_else(|| default_rmax(g, &ray));
            let scales = p.scales(rmax)?;
            let (path, w) = match p.str_or("metric", "base") {
                "base" => (ray.clone(), None),
                "omega" => {
                    let target = *ray
                        .vertices()
                        .get(rmax)
                        .ok_or_else(|| p.bad("rmax", &rmax.to_string()))?;
                    (
                        crate::geodesy::shortest_path(g, g.basepoint(), target, Some(omega))?,
                        Some(omega),
                    )
                }
                other => return Err(p.bad("metric", other)),
            };
            let pairs = scales
                .iter()
                .map(
                    |&(i, j)| match (path.vertices().get(i), path.vertices().get(j)) {
                        (Some(&a), Some(&b)) => Ok((a, b)),
                        _ => Err(p.bad("scales", &format!("{i}:{j}"))),
                    },
                )
                .collect::<Result<Vec<_>>>()?;
            let profile = recurrence_profile(g, &path, c, &pairs, w)?;
            let verdict = classify_direction(&profile, &Kappa::default_family());
            let expect_recurrent = match p.str_or("expect", "recurrent") {
                "recurrent" => true,
                "non_recurrent" => false,
                other => return Err(p.bad("expect", other)),
            };
            let pass = if expect_recurrent {
                verdict.is_recurrent()
            } else {
                matches!(verdict, crate::recurrence::Verdict::NonRecurrent { .. })
            };
            let max_d = profile.iter().map(|r| r.max_avoidance).fold(0.0, f64::max);
            Ok(done(
                pass,
                &[("max_avoidance", max_d)],
                json!({
                    "verdict": verdict.to_json(),
                    "profile": profile.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                }),
            ))
        }
        ProbeKind::MorseImage => {
            let c = p.f64_or("C", 2.0)?;
            let rmax = p
                .usize_opt("rmax")?
                .unwrap_or_else(|| default_rmax(g, &ray));
            let rep = morse_image_probe(
                g,
                &ray,
                omega,
                c,
                &p.scales(rmax)?,
                &Kappa::default_family(),
            )?;
            let image_c = match &rep.image_verdict {
                crate::recurrence::Verdict::RecurrentWith { c, .. } => *c,
                _ => f64::NAN,
            };
            let mut metrics = vec![("hypothesis_met", rep.hypothesis_met as u8 as f64)];
            if image_c.is_finite() {
                metrics.push(("image_c", image_c));
            }
            Ok(done(
                rep.hypothesis_met && rep.image_verdict.is_recurrent(),
                &metrics,
                json!({
                    "base_verdict": rep.base_verdict.to_json(),
                    "image_verdict": rep.image_verdict.to_json(),
                }),
            ))
        }
        ProbeKind::Neighborhood => {
            let radius = match p.usize_opt("radius")? {
                Some(r) => r,
                None => default_rmax(g, &ray) / 2,
            };
            let rep = neighborhood_image_check(
                g,
                &ray,
                omega,
                &p.kappa_or("kappa", "pow:1,0.5")?,
                p.f64_or("n", 1.0)?,
                radius,
                p.f64_or("r1", 0.0)?,
                p.usize_opt("samples")?.unwrap_or(usize::MAX),
                seed,
            )?;
            Ok(done(
                rep.stable,
                &[
                    ("fitted_n_omega", rep.fitted_n_omega),
                    ("fitted_n_omega_double", rep.fitted_n_omega_double),
                    ("base_ratio", rep.base_ratio),
                ],
                serde_json::to_value(&rep)?,
            ))
        }
        ProbeKind::BiInfinite => {
            let a = named_ray(g, p.str_or("ray1", "first"))?;
            let b = named_ray(g, p.str_or("ray2", "last"))?;
            let rmax = default_rmax(g, &a).min(default_rmax(g, &b));
            let radii = p
                .usize_list("radii")?
                .unwrap_or_else(|| vec![rmax / 2, rmax]);
            let kappa = p.kappa_or("kappa", "const:1")?;
            let c = p.f64_or("c", 1.0)?;
            let reps = radii
                .iter()
                .map(|&r| bi_infinite_probe(g, &a, &b, omega, r, &kappa, c))
                .collect::<Result<Vec<_>>>()?;
            let max_offset = reps.iter().map(|r| r.offset).fold(0.0, f64::max);
            Ok(done(
                reps.iter().all(|r| r.passes_near_origin),
                &[("max_offset", max_offset)],
                json!(reps
                    .iter()
                    .map(|r| json!({"radius": r.radius, "offset": r.offset}))
                    .collect::<Vec<_>>()),
            ))
        }
        ProbeKind::ImageRay => {
            let rmax = default_rmax(g, &ray);
            let radii = p.usize_list("radii")?.unwrap_or_else(|| {
                [rmax / 4, rmax / 2, rmax]
                    .into_iter()
                    .filter(|&r| r > 0)
                    .collect()
            });
            let rec = image_ray(g, &ray, omega, &radii)?;
            Ok(done(
                !rec.unstable,
                &[("stabilization_depth", rec.stabilization_depth as f64)],
                json!({"radii": rec.radii, "stabilized_prefix": rec.stabilized_prefix}),
            ))
        }
        ProbeKind::UpperEnvelope => {
            let min_len = p.usize_opt("min_len")?.unwrap_or(1);
            let r0 = p.f64_or("r0", 0.0)?;
            let rep =
                check_upper_envelope(g, &ray, omega, &Windows::AllAtLeast(min_len), Some(r0))?;
            let slope = passage_time(g, &ray, omega)? / ray.graph_length().max(1) as f64;
            Ok(done(
                rep.violations == Some(0),
                &[("fitted_r0", rep.fitted_r0), ("time_per_edge", slope)],
                json!({"violations": rep.violations, "windows": rep.windows}),
            ))
        }
        ProbeKind::Gauge => {
            let rmax = p
                .usize_opt("rmax")?
                .unwrap_or_else(|| default_rmax(g, &ray));
            let target = *ray
                .vertices()
                .get(rmax)
                .ok_or_else(|| p.bad("rmax", &rmax.to_string()))?;
            let z = crate::geodesy::shortest_path(g, g.basepoint(), target, Some(omega))?;
            let est = morse_gauge_probe(
                g,
                &z,
                p.f64_or("q", 2.0)?,
                p.f64_or("Q", 0.0)?,
                &p.kappa_or("kappa", "const:1")?,
                p.usize_opt("samples")?.unwrap_or(50),
                seed,
                Some(omega),
            )?;
            Ok(done(
                !est.inconclusive,
                &[
                    ("sup_deviation_over_kappa", est.sup_deviation_over_kappa),
                    ("gauge", est.gauge),
                ],
                serde_json::to_value(&est)?,
            ))
        }
    }
}

fn run_trial(spec: &ExperimentSpec, g: &Graph, hash: &str, trial: u64) -> TrialResult {
    let seed = mix_seed(spec.seed, trial);
    let mut probes = BTreeMap::new();
    let weights = sample_weights(g, &spec.dist, seed);
    for probe in &spec.probes {
        let outcome = weights
            .as_ref()
            .map_err(|e| Error::Internal(e.to_string()))
            .and_then(|w| run_probe(g, w, probe, seed))
            .unwrap_or_else(|e| ProbeOutcome::Failed {
                error: ProbeError {
                    kind: e.kind().to_string(),
                    message: e.to_string(),
                },
            });
        probes.insert(probe.name.clone(), outcome);
    }
    TrialResult {
        trial,
        seed,
        spec_hash: hash.to_string(),
        probes,
    }
}

/// Runs every trial; trial `t` samples weights with seed `mix_seed(seed, t)`.
/// Results come back in trial order whatever the worker count. Probe failures
/// are recorded in the trial, never propagated.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialResult>> {
    let g = build_graph(&spec.graph)?;
    let hash = spec.spec_hash();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    Ok(pool.install(|| {
        (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, &g, &hash, t))
            .collect()
    }))
}

pub fn trials_to_jsonl(results: &[TrialResult]) -> Result<String> {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn trials_from_jsonl(text: &str) -> Result<Vec<TrialResult>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub spec_hash: String,
    pub probe: String,
    pub metric: String,
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    /// Passing trials over all trials (errors count as failures).
    pub pass_frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

/// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per probe and metric aggregates; a pure function of the result set.
/// Each probe also gets a `pass` row over its 0/1 outcomes.
pub fn summarize(results: &[TrialResult]) -> Result<Summary> {
    if results.is_empty() {
        return Err(Error::domain("cannot summarize an empty result set"));
    }
    let mut results: Vec<&TrialResult> = results.iter().collect();
    results.sort_by_key(|r| r.trial);
    let total = results.len() as f64;
    // (hash, probe) -> metric -> values
    let mut groups: BTreeMap<(String, String), BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    let mut passes: BTreeMap<(String, String), usize> = BTreeMap::new();
    for r in &results {
        for (name, outcome) in &r.probes {
            let key = (r.spec_hash.clone(), name.clone());
            let metrics = groups.entry(key.clone()).or_default();
            let pass = match outcome {
                ProbeOutcome::Done {
                    pass, metrics: m, ..
                } => {
                    for (k, v) in m {
                        metrics.entry(k.clone()).or_default().push(*v);
                    }
                    *pass
                }
                ProbeOutcome::Failed { .. } => false,
            };
            metrics
                .entry("pass".into())
                .or_default()
                .push(pass as u8 as f64);
            *passes.entry(key).or_default() += pass as usize;
        }
    }
    let mut rows = Vec::new();
    for ((hash, probe), metrics) in groups {
        let freq = passes[&(hash.clone(), probe.clone())] as f64 / total;
        for (metric, mut values) in metrics {
            values.sort_by(|a, b| a.total_cmp(b));
            rows.push(SummaryRow {
                spec_hash: hash.clone(),
                probe: probe.clone(),
                metric,
                n: values.len(),
                min: values[0],
                max: values[values.len() - 1],
                mean: values.iter().sum::<f64>() / values.len() as f64,
                q25: quantile(&values, 0.25),
                q50: quantile(&values, 0.5),
                q75: quantile(&values, 0.75),
                pass_frequency: freq,
            });
        }
    }
    Ok(Summary { rows })
}

pub const SUMMARY_COLUMNS: &str =
    "spec_hash,probe,metric,n,min,max,mean,q25,q50,q75,pass_frequency";

impl Summary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SUMMARY_COLUMNS);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.spec_hash,
                r.probe,
                r.metric,
                r.n,
                r.min,
                r.max,
                r.mean,
                r.q25,
                r.q50,
                r.q75,
                r.pass_frequency
            );
        }
        out
    }

    pub fn pass_frequency(&self, probe: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.probe == probe)
            .map(|r| r.pass_frequency)
    }
}

/// Runs the experiment and writes the configured outputs; returns the trial
/// JSON-lines and summary CSV text.
pub fn run_and_write(spec: &ExperimentSpec) -> Result<(String, String)> {
    let results = run_experiment(spec)?;
    let jsonl = trials_to_jsonl(&results)?;
    let csv = summarize(&results)?.to_csv();
    if let Some(p) = &spec.out_trials {
        std::fs::write(p, &jsonl)?;
    }
    if let Some(p) = &spec.out_summary {
        std::fs::write(p, &csv)?;
    }
    Ok((jsonl, csv))
}
