//! Finite-scale probes of how percolation acts on rays: image rays built
//! from ω-geodesics, neighbourhood preservation, recurrence of images,
//! equivalence preservation and bi-infinite geodesics.

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geodesy::{
    distances_from, distances_restricted, shortest_path, Metric, PathRecord, UNREACHED,
};
use crate::graph::{Graph, Vertex};
use crate::kappa::{nbhd_mask, Kappa};
use crate::percolation::{stream_rng, WeightAssignment};
use crate::recurrence::{
    classify_direction, recurrence_profile, tracking_ratio, RecurrenceReport, TrackingReport,
    Verdict,
};

/// Relative change of the fitted multiplier tolerated under radius doubling.
pub const STABILITY_TOLERANCE: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageRayRecord {
    pub source: PathRecord,
    pub radii: Vec<usize>,
    /// ω-geodesics `[o, γ(r_i)]`.
    pub prefix_paths: Vec<PathRecord>,
    /// Longest common prefix of the paths for the top half of radii.
    pub stabilized_prefix: Vec<Vertex>,
    /// Edge length of `stabilized_prefix`.
    pub stabilization_depth: usize,
    /// The common prefix is shorter than half the smallest radius.
    pub unstable: bool,
}

impl ImageRayRecord {
    /// The ω-geodesic to the farthest radius, the finite stand-in for the image ray.
    pub fn longest(&self) -> &PathRecord {
        self.prefix_paths.last().unwrap()
    }
}

fn check_ray(g: &Graph, gamma: &PathRecord) -> Result<()> {
    if gamma.first() != g.basepoint() {
        return Err(Error::Precondition(
            "ray must start at the basepoint".into(),
        ));
    }
    let depth = g.bfs_distances(g.basepoint());
    if gamma
        .vertices()
        .iter()
        .enumerate()
        .any(|(i, &v)| depth[v as usize] as usize != i)
    {
        return Err(Error::Precondition(
            "ray is not a geodesic from the basepoint".into(),
        ));
    }
    Ok(())
}

fn check_radius(g: &Graph, gamma: &PathRecord, r: usize) -> Result<()> {
    let limit = g.unclipped_radius().min(gamma.graph_length());
    if r > limit {
        return Err(Error::Truncation { radius: r, limit });
    }
    Ok(())
}

/// ω-geodesics from the basepoint to `γ(r_i)` and their stabilized common prefix.
pub fn image_ray(
    g: &Graph,
    gamma: &PathRecord,
    omega: &WeightAssignment,
    radii: &[usize],
) -> Result<ImageRayRecord> {
    check_ray(g, gamma)?;
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] == 0 {
        return Err(Error::domain(
            "radii must be positive and strictly increasing",
        ));
    }
    check_radius(g, gamma, *radii.last().unwrap())?;
    let o = g.basepoint();
    let prefix_paths = radii
        .iter()
        .map(|&r| shortest_path(g, o, gamma.vertices()[r], Some(omega)))
        .collect::<Result<Vec<_>>>()?;
    let top = &prefix_paths[prefix_paths.len() / 2..];
    let first = top[0].vertices();
    let common = (0..first.len())
        .take_while(|&i| top.iter().all(|p| p.vertices().get(i) == Some(&first[i])))
        .count();
    let stabilized_prefix = first[..common].to_vec();
    let stabilization_depth = common.saturating_sub(1);
    Ok(ImageRayRecord {
        source: gamma.clone(),
        radii: radii.to_vec(),
        unstable: 2 * stabilization_depth < radii[0],
        prefix_paths,
        stabilized_prefix,
        stabilization_depth,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NeighborhoodImageReport {
    pub radius: usize,
    /// `max d_ω(x, image)/κ(‖x‖_ω + r1)` over sampled `x` with `‖x‖ <= radius`.
    pub fitted_n_omega: f64,
    /// The same fit with samples up to `2·radius`.
    pub fitted_n_omega_double: f64,
    /// `max d(x, γ)/κ(‖x‖)` in the base metric over the same samples.
    pub base_ratio: f64,
    pub base_ratio_double: f64,
    pub samples: usize,
    pub stable: bool,
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (b - a).abs() / a.abs().max(b.abs())
    }
}

/// Samples `x` in the base `(κ, n)`-neighbourhood of `γ` and measures
/// `d_ω(x, γ_ω)/κ'(‖x‖_ω)` with `κ'(t) = κ(t + r1)`, where `γ_ω` is the
/// ω-geodesic to `γ(2·radius)`. The fit is stable when doubling the sampling
/// radius changes it by at most [`STABILITY_TOLERANCE`].
///
/// When `sample_count` covers every candidate all of them are used.
#[allow(clippy::too_many_arguments)]
pub fn neighborhood_image_check(
    g: &Graph,
    gamma: &PathRecord,
    omega: &WeightAssignment,
    kappa: &Kappa,
    n: f64,
    radius: usize,
    r1: f64,
    sample_count: usize,
    seed: u64,
) -> Result<NeighborhoodImageReport> {
    check_ray(g, gamma)?;
    if radius == 0 {
        return Err(Error::domain("sampling radius must be positive"));
    }
    check_radius(g, gamma, 2 * radius)?;
    if !(r1 >= 0.0) || !(n >= 0.0) {
        return Err(Error::domain("n and r1 must be nonnegative"));
    }
    let w = Metric::new(g, Some(omega))?;
    let o = g.basepoint();
    let image = shortest_path(g, o, gamma.vertices()[2 * radius], Some(omega))?;
    let mask = nbhd_mask(g, gamma.vertices(), n, kappa, None)?;
    let base_norm = g.bfs_distances(o);
    let base_to_gamma = distances_restricted(g, Metric::Base, gamma.vertices(), None, None);
    let omega_norm = distances_from(g, w, o);
    let omega_to_image = distances_restricted(g, w, image.vertices(), None, None);

    let measure = |limit: usize| -> (f64, f64, usize) {
        let pool: Vec<Vertex> = (0..g.vertex_count() as Vertex)
            .filter(|&v| mask[v as usize] && base_norm[v as usize] as usize <= limit)
            .collect();
        let chosen: Vec<Vertex> = if sample_count >= pool.len() {
            pool
        } else {
            let mut rng = stream_rng(seed, limit as u64);
            (0..sample_count)
                .map(|_| pool[rng.random_range(0..pool.len())])
                .collect()
        };
        let (mut fit, mut base) = (0.0f64, 0.0f64);
        for &x in &chosen {
            let xi = x as usize;
            let t = w.to_value(omega_norm[xi]);
            let d = w.to_value(omega_to_image[xi]);
            fit = fit.max(d / kappa.eval(t + r1).unwrap());
            let bd = base_to_gamma[xi];
            if bd != UNREACHED {
                base = base.max(bd as f64 / kappa.eval(base_norm[xi] as f64).unwrap());
            }
        }
        (fit, base, chosen.len())
    };
    let (fit, base, samples) = measure(radius);
    let (fit2, base2, samples2) = measure(2 * radius);
    Ok(NeighborhoodImageReport {
        radius,
        fitted_n_omega: fit,
        fitted_n_omega_double: fit2,
        base_ratio: base,
        base_ratio_double: base2,
        samples: samples + samples2,
        stable: relative_change(fit, fit2) <= STABILITY_TOLERANCE,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorseImageReport {
    pub base_profile: Vec<RecurrenceReport>,
    pub base_verdict: Verdict,
    pub image_profile: Vec<RecurrenceReport>,
    pub image_verdict: Verdict,
    /// The base ray was classified recurrent.
    pub hypothesis_met: bool,
}

impl MorseImageReport {
    pub fn to_json(&self) -> Value {
        json!({
            "hypothesis_met": self.hypothesis_met,
            "base_verdict": self.base_verdict.to_json(),
            "image_verdict": self.image_verdict.to_json(),
            "base_profile": self.base_profile.iter().map(RecurrenceReport::to_json).collect::<Vec<_>>(),
            "image_profile": self.image_profile.iter().map(RecurrenceReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Classifies `γ` in the base metric and its image (the ω-geodesic to
/// `γ(r_max)`) in `d_ω`, using the same index pairs on both paths.
pub fn morse_image_probe(
    g: &Graph,
    gamma: &PathRecord,
    omega: &WeightAssignment,
    c: f64,
    scales: &[(usize, usize)],
    family: &[Kappa],
) -> Result<MorseImageReport> {
    check_ray(g, gamma)?;
    let r_max = scales
        .iter()
        .map(|&(i, j)| i.max(j))
        .max()
        .ok_or_else(|| Error::domain("no scales given"))?;
    check_radius(g, gamma, r_max)?;
    let pairs = |p: &PathRecord| -> Result<Vec<(Vertex, Vertex)>> {
        scales
            .iter()
            .map(|&(i, j)| match (p.vertices().get(i), p.vertices().get(j)) {
                (Some(&a), Some(&b)) => Ok((a, b)),
                _ => Err(Error::domain(format!(
                    "scale ({i}, {j}) runs past the path of length {}",
                    p.graph_length()
                ))),
            })
            .collect()
    };
    let base_profile = recurrence_profile(g, gamma, c, &pairs(gamma)?, None)?;
    let base_verdict = classify_direction(&base_profile, family);
    let image = shortest_path(g, g.basepoint(), gamma.vertices()[r_max], Some(omega))?;
    let image_profile = recurrence_profile(g, &image, c, &pairs(&image)?, Some(omega))?;
    let image_verdict = classify_direction(&image_profile, family);
    Ok(MorseImageReport {
        hypothesis_met: base_verdict.is_recurrent(),
        base_profile,
        base_verdict,
        image_profile,
        image_verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceVerdict {
    Preserved,
    NotPreserved,
    /// Base rays do not fellow travel on the tested radii; nothing is claimed.
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub base: TrackingReport,
    pub image: TrackingReport,
    pub verdict: EquivalenceVerdict,
}

/// Ratios tend to zero on the top half of the table: all present, nonincreasing,
/// and the last at most half the largest ratio in the table (or all zero).
pub fn tends_to_zero(report: &TrackingReport) -> bool {
    let ratios: Option<Vec<f64>> = report.entries.iter().map(|e| e.ratio).collect();
    let Some(ratios) = ratios else { return false };
    if ratios.is_empty() {
        return false;
    }
    let top = &ratios[ratios.len() / 2..];
    if top.iter().all(|&x| x == 0.0) {
        return true;
    }
    let peak = ratios.iter().copied().fold(0.0, f64::max);
    top.windows(2).all(|w| w[1] <= w[0] + 1e-12) && *top.last().unwrap() <= 0.5 * peak
}

/// Compares fellow travel of `α, β` with fellow travel of their images. Image
/// radii are the base radii rescaled so that the largest maps to the smaller
/// ω-norm of `α(r_max)` and `β(r_max)`.
pub fn equivalence_image_check(
    g: &Graph,
    alpha: &PathRecord,
    beta: &PathRecord,
    omega: &WeightAssignment,
    radii: &[usize],
) -> Result<EquivalenceReport> {
    check_ray(g, alpha)?;
    check_ray(g, beta)?;
    let r_max = *radii
        .iter()
        .max()
        .ok_or_else(|| Error::domain("no radii given"))?;
    check_radius(g, alpha, r_max)?;
    check_radius(g, beta, r_max)?;
    let base_radii: Vec<f64> = radii.iter().map(|&r| r as f64).collect();
    let base = tracking_ratio(g, alpha, beta, &base_radii, None, None)?;
    let o = g.basepoint();
    let ia = shortest_path(g, o, alpha.vertices()[r_max], Some(omega))?;
    let ib = shortest_path(g, o, beta.vertices()[r_max], Some(omega))?;
    let w = Metric::new(g, Some(omega))?;
    let norms = distances_from(g, w, o);
    let reach = w.to_value(
        norms[alpha.vertices()[r_max] as usize].min(norms[beta.vertices()[r_max] as usize]),
    );
    let image_radii: Vec<f64> = base_radii
        .iter()
        .map(|r| r / r_max as f64 * reach)
        .collect();
    let image = tracking_ratio(g, &ia, &ib, &image_radii, Some(omega), None)?;
    let verdict = if !tends_to_zero(&base) {
        EquivalenceVerdict::HypothesisNotMet
    } else if tends_to_zero(&image) {
        EquivalenceVerdict::Preserved
    } else {
        EquivalenceVerdict::NotPreserved
    };
    Ok(EquivalenceReport {
        base,
        image,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiInfiniteReport {
    pub radius: usize,
    /// `d_ω(o, [γ1(R), γ2(R)]_ω)`.
    pub offset: f64,
    /// `offset <= c κ(R)`.
    pub passes_near_origin: bool,
    pub path: PathRecord,
}

/// The ω-geodesic between `γ1(R)` and `γ2(R)` and its distance to the basepoint.
pub fn bi_infinite_probe(
    g: &Graph,
    gamma1: &PathRecord,
    gamma2: &PathRecord,
    omega: &WeightAssignment,
    radius: usize,
    kappa: &Kappa,
    c: f64,
) -> Result<BiInfiniteReport> {
    check_ray(g, gamma1)?;
    check_ray(g, gamma2)?;
    if gamma1.vertices().get(1) == gamma2.vertices().get(1) {
        return Err(Error::Precondition(
            "rays must leave the basepoint in distinct directions".into(),
        ));
    }
    check_radius(g, gamma1, radius)?;
    check_radius(g, gamma2, radius)?;
    let w = Metric::new(g, Some(omega))?;
    let path = shortest_path(
        g,
        gamma1.vertices()[radius],
        gamma2.vertices()[radius],
        Some(omega),
    )?;
    let norms = distances_from(g, w, g.basepoint());
    let offset = path
        .vertices()
        .iter()
        .map(|&v| w.to_value(norms[v as usize]))
        .fold(f64::INFINITY, f64::min);
    Ok(BiInfiniteReport {
        radius,
        offset,
        passes_near_origin: offset <= c * kappa.eval(radius as f64)?,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphSpec};
    use crate::percolation::{sample_weights, DistributionSpec};
    use crate::recurrence::named_ray;

    fn tree(depth: u32) -> Graph {
        build_graph(&GraphSpec::RegularTree { arity: 3, depth }).unwrap()
    }

    fn exp_weights(g: &Graph, seed: u64) -> WeightAssignment {
        sample_weights(g, &DistributionSpec::Exponential { rate: 1.0 }, seed).unwrap()
    }

    #[test]
    fn tree_image_is_the_ray() {
        let g = tree(10);
        let gamma = named_ray(&g, "last").unwrap();
        let w = exp_weights(&g, 4);
        let rec = image_ray(&g, &gamma, &w, &[2, 4, 8]).unwrap();
        for (p, &r) in rec.prefix_paths.iter().zip(&rec.radii) {
            assert_eq!(p.vertices(), &gamma.vertices()[..=r]);
        }
        assert_eq!(rec.stabilized_prefix, gamma.vertices()[..=4]);
        assert!(!rec.unstable);
        assert!(matches!(
            image_ray(&g, &gamma, &w, &[4, 10]),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn point_mass_image_is_base_geodesic() {
        let g = build_graph(&GraphSpec::LatticeBox {
            dim: 2,
            half_width: 10,
        })
        .unwrap();
        let gamma = named_ray(&g, "diagonal").unwrap();
        let w = sample_weights(&g, &DistributionSpec::PointMass { c: 2.0 }, 0).unwrap();
        let rec = image_ray(&g, &gamma, &w, &[3, 6, 9]).unwrap();
        for (p, &r) in rec.prefix_paths.iter().zip(&rec.radii) {
            assert_eq!(
                p.vertices(),
                shortest_path(&g, g.basepoint(), gamma.vertices()[r], None)
                    .unwrap()
                    .vertices()
            );
        }
    }

    #[test]
    fn neighborhood_check_point_mass_matches_base() {
        let g = build_graph(&GraphSpec::LatticeBox {
            dim: 2,
            half_width: 12,
        })
        .unwrap();
        let gamma = named_ray(&g, "axis").unwrap();
        let w = sample_weights(&g, &DistributionSpec::PointMass { c: 1.0 }, 0).unwrap();
        let kappa = Kappa::power(1.0, 0.5).unwrap();
        let rep =
            neighborhood_image_check(&g, &gamma, &w, &kappa, 1.0, 5, 0.0, usize::MAX, 1).unwrap();
        assert_eq!(rep.fitted_n_omega, rep.base_ratio);
        assert_eq!(rep.fitted_n_omega_double, rep.base_ratio_double);
        // sub-sampling gives the same ratios for any seed since d_ω is deterministic
        let a = neighborhood_image_check(&g, &gamma, &w, &kappa, 1.0, 5, 0.0, 30, 1).unwrap();
        let b = neighborhood_image_check(&g, &gamma, &w, &kappa, 1.0, 5, 0.0, 30, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.fitted_n_omega <= 1.0);
    }

    #[test]
    fn neighborhood_check_on_ray_is_zero() {
        let g = tree(8);
        let gamma = named_ray(&g, "first").unwrap();
        let w = exp_weights(&g, 2);
        let one = Kappa::constant(1.0).unwrap();
        let rep =
            neighborhood_image_check(&g, &gamma, &w, &one, 0.0, 3, 0.0, usize::MAX, 0).unwrap();
        assert_eq!(rep.fitted_n_omega, 0.0);
        assert!(rep.stable);
    }

    #[test]
    fn morse_image_tree_point_mass() {
        let g = tree(12);
        let gamma = named_ray(&g, "first").unwrap();
        let w = sample_weights(&g, &DistributionSpec::PointMass { c: 1.0 }, 0).unwrap();
        let scales: Vec<(usize, usize)> = (2..=10).map(|k| (0, k)).collect();
        let rep =
            morse_image_probe(&g, &gamma, &w, 2.0, &scales, &Kappa::default_family()).unwrap();
        assert!(rep.hypothesis_met);
        assert_eq!(
            rep.image_verdict,
            Verdict::RecurrentWith {
                kappa: Kappa::Constant { c: 1.0 },
                c: 0.0
            }
        );
    }

    #[test]
    fn equivalence_examples() {
        let g = tree(8);
        let gamma = named_ray(&g, "first").unwrap();
        let w = exp_weights(&g, 1);
        let rep = equivalence_image_check(&g, &gamma, &gamma, &w, &[1, 2, 4, 6]).unwrap();
        assert!(rep.base.entries.iter().all(|e| e.ratio == Some(0.0)));
        assert!(rep.image.entries.iter().all(|e| e.ratio == Some(0.0)));
        assert_eq!(rep.verdict, EquivalenceVerdict::Preserved);

        let g = build_graph(&GraphSpec::LatticeBox {
            dim: 2,
            half_width: 12,
        })
        .unwrap();
        let w = exp_weights(&g, 1);
        let rep = equivalence_image_check(
            &g,
            &named_ray(&g, "axis").unwrap(),
            &named_ray(&g, "diagonal").unwrap(),
            &w,
            &[2, 4, 8, 10],
        )
        .unwrap();
        assert_eq!(rep.verdict, EquivalenceVerdict::HypothesisNotMet);
    }

    #[test]
    fn bi_infinite_through_tree_root() {
        let g = tree(10);
        let (a, b) = (
            named_ray(&g, "first").unwrap(),
            named_ray(&g, "last").unwrap(),
        );
        let one = Kappa::constant(1.0).unwrap();
        for seed in 0..3 {
            let rep = bi_infinite_probe(&g, &a, &b, &exp_weights(&g, seed), 8, &one, 1.0).unwrap();
            assert_eq!(rep.offset, 0.0);
            assert!(rep.passes_near_origin);
        }
        assert!(bi_infinite_probe(&g, &a, &a, &exp_weights(&g, 0), 8, &one, 1.0).is_err());

        let wedge = build_graph(&GraphSpec::Wedge {
            dim: 2,
            half_width: 8,
            arity: 3,
            depth: 8,
        })
        .unwrap();
        let w = sample_weights(&wedge, &DistributionSpec::PointMass { c: 1.0 }, 0).unwrap();
        let (a, b) = (
            named_ray(&wedge, "first").unwrap(),
            named_ray(&wedge, "last").unwrap(),
        );
        let rep = bi_infinite_probe(&wedge, &a, &b, &w, 6, &one, 1.0).unwrap();
        assert_eq!(rep.offset, 0.0);
    }
}
