//! Sublinear functions `κ: [0, ∞) → [1, ∞)` and the neighbourhood calculus built on them.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesy::{distances_from, distances_restricted, Metric, UNREACHED};
use crate::graph::{Graph, Vertex};
use crate::percolation::WeightAssignment;

/// Abscissa at which sublinearity is checked: `κ(T)/T < SUBLINEAR_RATIO`.
pub const SUBLINEAR_T: f64 = 1e6;
pub const SUBLINEAR_RATIO: f64 = 0.01;

/// Piecewise linear concave increasing table, flat outside its abscissae.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcaveTable {
    points: Vec<(f64, f64)>,
    /// File the table was read from, kept for display.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
}

impl ConcaveTable {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, t: f64) -> f64 {
        let p = &self.points;
        if t <= p[0].0 {
            return p[0].1;
        }
        if t >= p[p.len() - 1].0 {
            return p[p.len() - 1].1;
        }
        let k = p.partition_point(|q| q.0 <= t);
        let (x0, y0) = p[k - 1];
        let (x1, y1) = p[k];
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kappa {
    Constant {
        c: f64,
    },
    /// `a·ln(t + e) + b`
    Log {
        a: f64,
        b: f64,
    },
    /// `a·(t + 1)^s`, `0 < s < 1`
    Power {
        a: f64,
        s: f64,
    },
    Table(ConcaveTable),
}

impl Kappa {
    pub fn constant(c: f64) -> Result<Self> {
        Kappa::Constant { c }.validated()
    }

    pub fn log(a: f64, b: f64) -> Result<Self> {
        Kappa::Log { a, b }.validated()
    }

    pub fn power(a: f64, s: f64) -> Result<Self> {
        Kappa::Power { a, s }.validated()
    }

    /// `{constant(1), log(1, 0), power(1, 0.5)}`, slowest first.
    pub fn default_family() -> Vec<Kappa> {
        vec![
            Kappa::Constant { c: 1.0 },
            Kappa::Log { a: 1.0, b: 0.0 },
            Kappa::Power { a: 1.0, s: 0.5 },
        ]
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks `κ >= 1`, monotonicity, concavity and `κ(T)/T < 0.01` at `T = 10^6`.
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        let ok = match self {
            Kappa::Constant { c } => finite(*c) && *c >= 1.0,
            Kappa::Log { a, b } => finite(*a) && finite(*b) && *a >= 0.0 && a + b >= 1.0,
            Kappa::Power { a, s } => finite(*a) && finite(*s) && *a >= 1.0 && *s > 0.0 && *s < 1.0,
            Kappa::Table(t) => {
                let p = &t.points;
                !p.is_empty()
                    && p.iter()
                        .all(|&(x, y)| finite(x) && finite(y) && x >= 0.0 && y >= 1.0)
                    && p.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1)
                    && p.windows(3).all(|w| concave_triple(w[0], w[1], w[2]))
            }
        };
        if !ok {
            return Err(Error::config(format!(
                "{self} is not a monotone concave function into [1, ∞)"
            )));
        }
        let ratio = self.eval_unchecked(SUBLINEAR_T) / SUBLINEAR_T;
        if ratio >= SUBLINEAR_RATIO {
            return Err(Error::config(format!(
                "{self} is not sublinear enough: κ(1e6)/1e6 = {ratio}"
            )));
        }
        Ok(())
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        match self {
            Kappa::Constant { c } => *c,
            Kappa::Log { a, b } => a * (t + std::f64::consts::E).ln() + b,
            Kappa::Power { a, s } => a * (t + 1.0).powf(*s),
            Kappa::Table(table) => table.eval(t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!(
                "κ evaluated at negative argument {t}"
            )));
        }
        Ok(self.eval_unchecked(t))
    }

    /// Reads a table file of `t value` lines (`#` starts a comment) and regularizes it.
    pub fn table_from_file(path: &Path) -> Result<Kappa> {
        let text = std::fs::read_to_string(path)?;
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<f64> = line
                .split_whitespace()
                .map(|p| {
                    p.parse::<f64>()
                        .map_err(|_| Error::parse(i + 1, format!("bad number `{p}`")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::parse(i + 1, "expected `t value`"));
            }
            samples.push((nums[0], nums[1]));
        }
        let reg = regularize_concave(&samples)?;
        match reg.kappa {
            Kappa::Table(mut t) => {
                t.source = Some(path.display().to_string());
                Kappa::Table(t).validated()
            }
            _ => unreachable!(),
        }
    }
}

fn concave_triple(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    // slope(a, b) >= slope(b, c), with a relative tolerance for rounding
    let lhs = (b.1 - a.1) * (c.0 - b.0);
    let rhs = (c.1 - b.1) * (b.0 - a.0);
    lhs >= rhs - 1e-12 * (lhs.abs() + rhs.abs()).max(1e-300)
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Constant { c } => write!(f, "const:{c}"),
            Kappa::Log { a, b } => write!(f, "log:{a},{b}"),
            Kappa::Power { a, s } => write!(f, "pow:{a},{s}"),
            Kappa::Table(t) => match &t.source {
                Some(path) => write!(f, "table:{path}"),
                None => {
                    f.write_str("table:")?;
                    for (i, (x, y)) in t.points.iter().enumerate() {
                        if i > 0 {
                            f.write_str(";")?;
                        }
                        write!(f, "{x}/{y}")?;
                    }
                    Ok(())
                }
            },
        }
    }
}

impl FromStr for Kappa {
    type Err = Error;

    /// `const:c`, `log:a,b`, `pow:a,s`, `table:<path>` or inline `table:t/v;t/v;...`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::config(format!("κ spec `{s}` lacks `kind:` prefix")))?;
        if kind == "table" {
            if rest.contains('/') && !Path::new(rest).exists() {
                let samples = rest
                    .split(';')
                    .map(|pair| {
                        let (x, y) = pair
                            .split_once('/')
                            .ok_or_else(|| Error::config(format!("bad table entry `{pair}`")))?;
                        let parse = |v: &str| {
                            v.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::config(format!("bad number `{v}`")))
                        };
                        Ok((parse(x)?, parse(y)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let k = regularize_concave(&samples)?.kappa;
                k.validate()?;
                return Ok(k);
            }
            return Kappa::table_from_file(Path::new(rest));
        }
        let nums = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::config(format!("bad number `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        match (kind, nums.as_slice()) {
            ("const", &[c]) => Kappa::constant(c),
            ("log", &[a, b]) => Kappa::log(a, b),
            ("pow", &[a, e]) => Kappa::power(a, e),
            _ => Err(Error::config(format!("unknown or malformed κ spec `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Regularized {
    pub kappa: Kappa,
    /// `max κ̄(t_i) / v_i` over the samples.
    pub gap: f64,
}

/// Least concave increasing majorant of the samples: the upper hull,
/// held flat after its maximum.
pub fn regularize_concave(samples: &[(f64, f64)]) -> Result<Regularized> {
    if samples.len() < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::domain(
            "sample abscissae must be strictly increasing",
        ));
    }
    if samples
        .iter()
        .any(|&(x, y)| !(x >= 0.0) || !(y >= 1.0) || !y.is_finite() || !x.is_finite())
    {
        return Err(Error::domain("samples need t >= 0 and values >= 1"));
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    for &p in samples {
        while hull.len() >= 2 && !strictly_concave(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    // flat from the maximum to the last abscissa (and beyond, by evaluation)
    let top = hull
        .iter()
        .enumerate()
        .fold(0, |best, (i, p)| if p.1 > hull[best].1 { i } else { best });
    hull.truncate(top + 1);
    let (last_x, peak) = (samples[samples.len() - 1].0, hull[top].1);
    if last_x > hull[top].0 {
        hull.push((last_x, peak));
    }
    let table = ConcaveTable {
        points: hull,
        source: None,
    };
    let gap = samples
        .iter()
        .map(|&(x, y)| table.eval(x) / y)
        .fold(1.0, f64::max);
    Ok(Regularized {
        kappa: Kappa::Table(table),
        gap,
    })
}

fn strictly_concave(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    (b.1 - a.1) * (c.0 - b.0) > (c.1 - b.1) * (b.0 - a.0)
}

/// `D <= r / (2κ(r))`.
pub fn small_compared(d: f64, r: f64, kappa: &Kappa) -> bool {
    d <= r / (2.0 * kappa.eval_unchecked(r.max(0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OffsetConstants {
    /// Smallest `R` with `κ(t) <= t/(2D) + R` on the grid.
    pub r: f64,
    pub d1: f64,
    pub d2: f64,
    /// Grid point attaining `R`.
    pub argmax: f64,
}

/// Grid of `t = 0` plus `10^4` log-spaced points in `[10^-2, 10^6]`.
pub fn offset_grid() -> Vec<f64> {
    const N: usize = 10_000;
    let (lo, hi) = (1e-2f64.ln(), 1e6f64.ln());
    std::iter::once(0.0)
        .chain((0..N).map(|i| (lo + (hi - lo) * i as f64 / (N - 1) as f64).exp()))
        .collect()
}

/// Constants for the comparison `D1 κ(‖x‖) <= κ(‖y‖) <= D2 κ(‖x‖)` whenever
/// `d(x, y) <= D max{κ(‖x‖), κ(‖y‖)}`: `D2 = 3 + 2RD`, `D1 = 1/D2`.
///
/// `R` is maximized over [`offset_grid`], so it approximates the true
/// supremum from below between grid points.
pub fn lemma23_constants(d: f64, kappa: &Kappa) -> Result<OffsetConstants> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::domain(format!("D must be positive, got {d}")));
    }
    let grid = offset_grid();
    let (mut best, mut argmax, mut at) = (f64::NEG_INFINITY, 0.0, 0usize);
    for (i, &t) in grid.iter().enumerate() {
        let v = kappa.eval_unchecked(t) - t / (2.0 * d);
        if v > best {
            best = v;
            argmax = t;
            at = i;
        }
    }
    if at + 1 == grid.len() {
        return Err(Error::Precondition(format!(
            "κ(t) - t/(2D) still increases at t = 1e6 for {kappa} and D = {d}; no finite R on the grid"
        )));
    }
    let d2 = 3.0 + 2.0 * best * d;
    Ok(OffsetConstants {
        r: best,
        d1: 1.0 / d2,
        d2,
        argmax,
    })
}

/// Distances to the basepoint and to `z` in the selected metric, as reals.
fn norms_and_set_distances(
    g: &Graph,
    z: &[Vertex],
    omega: Option<&WeightAssignment>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if z.is_empty() {
        return Err(Error::domain("neighbourhood of an empty set"));
    }
    if let Some(&bad) = z.iter().find(|&&v| !g.contains(v)) {
        return Err(Error::domain(format!("vertex {bad} not in graph")));
    }
    let metric = Metric::new(g, omega)?;
    let conv = |d: Vec<u64>| -> Vec<f64> {
        d.into_iter()
            .map(|u| {
                if u == UNREACHED {
                    f64::INFINITY
                } else {
                    metric.to_value(u)
                }
            })
            .collect()
    };
    let norms = conv(distances_from(g, metric, g.basepoint()));
    let to_z = conv(distances_restricted(g, metric, z, None, None));
    Ok((norms, to_z))
}

/// `d(x, Z) <= n κ(‖x‖)`, with both distances in `d_ω` when `omega` is given.
pub fn nbhd_contains(
    g: &Graph,
    x: Vertex,
    z: &[Vertex],
    n: f64,
    kappa: &Kappa,
    omega: Option<&WeightAssignment>,
) -> Result<bool> {
    if !g.contains(x) {
        return Err(Error::domain(format!("vertex {x} not in graph")));
    }
    let (norms, to_z) = norms_and_set_distances(g, z, omega)?;
    Ok(to_z[x as usize] <= n * kappa.eval_unchecked(norms[x as usize]))
}

/// Membership mask of the `(κ, n)`-neighbourhood of `Z` over all vertices.
pub fn nbhd_mask(
    g: &Graph,
    z: &[Vertex],
    n: f64,
    kappa: &Kappa,
    omega: Option<&WeightAssignment>,
) -> Result<Vec<bool>> {
    let (norms, to_z) = norms_and_set_distances(g, z, omega)?;
    Ok(norms
        .iter()
        .zip(&to_z)
        .map(|(&norm, &dz)| dz <= n * kappa.eval_unchecked(norm))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphSpec};

    #[test]
    fn eval_examples() {
        assert_eq!(Kappa::constant(1.0).unwrap().eval(57.0).unwrap(), 1.0);
        assert_eq!(Kappa::power(1.0, 0.5).unwrap().eval(99.0).unwrap(), 10.0);
        assert_eq!(Kappa::log(1.0, 1.0).unwrap().eval(0.0).unwrap(), 2.0);
        assert!(Kappa::constant(1.0).unwrap().eval(-1.0).is_err());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Kappa::constant(0.5).is_err());
        assert!(Kappa::power(1.0, 1.0).is_err());
        assert!(Kappa::power(0.5, 0.5).is_err());
        assert!(Kappa::log(0.5, 0.0).is_err());
        // linear growth slips past a concavity check but not the sublinearity one
        assert!(Kappa::power(1.0, 0.9).is_err());
        assert!(Kappa::constant(2e4).is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["const:1", "log:1,0", "pow:2,0.25", "table:0/1;2/3;3/3"] {
            let k: Kappa = s.parse().unwrap();
            assert_eq!(k.to_string(), s);
        }
        assert!("pow:1".parse::<Kappa>().is_err());
        assert!("sqrt:1".parse::<Kappa>().is_err());
    }

    #[test]
    fn table_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.txt");
        std::fs::write(&path, "# t value\n0 1\n1 1\n2 3\n3 3\n").unwrap();
        let k: Kappa = format!("table:{}", path.display()).parse().unwrap();
        assert_eq!(k.eval(1.0).unwrap(), 2.0);
        assert_eq!(k.to_string(), format!("table:{}", path.display()));
    }

    #[test]
    fn regularize_examples() {
        let r = regularize_concave(&[(0.0, 1.0), (1.0, 1.0), (2.0, 3.0), (3.0, 3.0)]).unwrap();
        match &r.kappa {
            Kappa::Table(t) => assert_eq!(t.points(), &[(0.0, 1.0), (2.0, 3.0), (3.0, 3.0)]),
            _ => panic!(),
        }
        assert_eq!(r.kappa.eval(1.0).unwrap(), 2.0);
        assert_eq!(r.gap, 2.0);

        let r = regularize_concave(&[(0.0, 1.0), (10.0, 2.0)]).unwrap();
        assert_eq!(r.kappa.eval(5.0).unwrap(), 1.5);
        assert_eq!(r.kappa.eval(50.0).unwrap(), 2.0);
        assert_eq!(r.gap, 1.0);

        let samples: Vec<(f64, f64)> = (0..50)
            .map(|i| (i as f64, (i as f64 + 1.0).sqrt()))
            .collect();
        let r = regularize_concave(&samples).unwrap();
        assert_eq!(r.gap, 1.0);
        for &(x, y) in &samples {
            assert_eq!(r.kappa.eval(x).unwrap(), y);
        }

        assert!(regularize_concave(&[(0.0, 1.0)]).is_err());
        assert!(regularize_concave(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(regularize_concave(&[(0.0, 0.5), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn regularized_tables_are_concave_and_dominating() {
        // falling tail is clamped flat
        let samples = [(0.0, 1.0), (1.0, 4.0), (2.0, 2.0), (5.0, 3.5), (9.0, 1.5)];
        let r = regularize_concave(&samples).unwrap();
        let Kappa::Table(t) = &r.kappa else { panic!() };
        for w in t.points().windows(3) {
            assert!(concave_triple(w[0], w[1], w[2]));
        }
        for &(x, y) in &samples {
            assert!(r.kappa.eval(x).unwrap() >= y);
        }
        assert_eq!(r.kappa.eval(9.0).unwrap(), 4.0);
    }

    #[test]
    fn small_compared_examples() {
        let one = Kappa::constant(1.0).unwrap();
        assert!(small_compared(5.0, 10.0, &one));
        assert!(!small_compared(5.01, 10.0, &one));
        assert!(small_compared(4.0, 99.0, &Kappa::power(1.0, 0.5).unwrap()));
        assert!(small_compared(0.0, 3.0, &Kappa::power(1.0, 0.5).unwrap()));
    }

    #[test]
    fn offset_constant_examples() {
        let one = Kappa::constant(1.0).unwrap();
        let l = lemma23_constants(1.0, &one).unwrap();
        assert_eq!((l.r, l.d2, l.d1), (1.0, 5.0, 0.2));
        // sqrt(t+1) - t/2 is decreasing on [0, ∞), so R = 1 at t = 0
        let sqrt = Kappa::power(1.0, 0.5).unwrap();
        let l = lemma23_constants(1.0, &sqrt).unwrap();
        assert_eq!(l.r, 1.0);
        assert_eq!(l.argmax, 0.0);
        assert_eq!(l.d2, 5.0);
        // D = 2: max of sqrt(t+1) - t/4 is 1.25 at t = 3
        let l = lemma23_constants(2.0, &sqrt).unwrap();
        assert!((l.r - 1.25).abs() < 1e-5);
        assert!((l.d2 - 8.0).abs() < 1e-4);
        for d in [10.0, 100.0, 1000.0] {
            assert_eq!(lemma23_constants(d, &one).unwrap().d2, 3.0 + 2.0 * d);
        }
        assert!(lemma23_constants(0.0, &one).is_err());
        // log grows without bound against t/(2D) only for huge D
        assert!(lemma23_constants(1e9, &Kappa::log(1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn nbhd_examples() {
        let g = build_graph(&GraphSpec::LatticeBox {
            dim: 2,
            half_width: 12,
        })
        .unwrap();
        let axis: Vec<Vertex> = (-12..=12)
            .map(|x| g.lattice_vertex(&[x, 0]).unwrap())
            .collect();
        let x = g.lattice_vertex(&[3, 4]).unwrap();
        let sqrt = Kappa::power(1.0, 0.5).unwrap();
        assert!(nbhd_contains(&g, x, &axis, 2.0, &sqrt, None).unwrap());
        assert!(!nbhd_contains(&g, x, &axis, 1.0, &sqrt, None).unwrap());
        assert!(nbhd_contains(&g, axis[3], &axis, 0.0, &sqrt, None).unwrap());
        let one = Kappa::constant(1.0).unwrap();
        assert!(nbhd_contains(&g, x, &axis, 4.0, &one, None).unwrap());
        assert!(!nbhd_contains(&g, x, &axis, 3.99, &one, None).unwrap());
        assert!(nbhd_contains(&g, x, &[], 1.0, &one, None).is_err());
    }
}
