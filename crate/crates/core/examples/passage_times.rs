//! Passage-time envelopes: the linear upper bound along a straight path,
//! the small-ball exponent α(ε), the constant c(D) and the linear lower bound
//! on admissible paths.
//!
//! cargo run --release --example passage_times

use sublinear_fpp::geodesy::PathRecord;
use sublinear_fpp::graph::build_graph;
use sublinear_fpp::percolation::{
    alpha_table, c_of_d, check_upper_envelope, estimate_alpha, qi_envelope_check,
    sample_admissible_paths, sample_weights, Alpha, DistributionSpec, Windows,
};

fn main() -> sublinear_fpp::Result<()> {
    let exp: DistributionSpec = "exp:1".parse()?;

    let line = build_graph(&"lattice:1,1000".parse()?)?;
    let path = PathRecord::new(
        &line,
        (0..line.vertex_count() as u32)
            .map(|i| line.lattice_vertex(&[i as i64 - 1000]).unwrap())
            .collect(),
        None,
    )?;
    let omega = sample_weights(&line, &exp, 1)?;
    let up = check_upper_envelope(&line, &path, &omega, &Windows::AllAtLeast(50), Some(0.0))?;
    println!(
        "upper envelope: fitted r0 {:.3}, violations of ℓ_ω <= 2b·len over {} windows: {:?}",
        up.fitted_r0, up.windows, up.violations
    );

    let unif: DistributionSpec = "unif:0.000000001,1".parse()?;
    let est = estimate_alpha(&unif, 1.0 / 3.0, &[3, 4, 5, 6], 200_000, 5)?;
    for l in &est.per_length {
        println!(
            "P(S_{} <= n/3) ≈ {:.5} (exact {:.5}, {:?})",
            l.n,
            l.probability,
            unif.sum_cdf(l.n, l.n as f64 / 3.0).unwrap(),
            l.source
        );
    }
    println!("α(1/3) ≈ {:.4}", est.alpha);

    let grid: Vec<f64> = (0..30)
        .map(|i| 10f64.powf(-6.0 + 6.0 * i as f64 / 29.0) * 0.9)
        .collect();
    let table = Alpha::Table(alpha_table(&exp, &grid, &[1, 2, 4, 8, 16], 20_000, 9)?);
    for d in [0.5, 1.0, 2.0] {
        let c = c_of_d(&table, 4, d)?;
        println!(
            "c(D = {d}) = {:.3e}  (threshold {:.3e})",
            c.value, c.threshold
        );
    }

    let plane = build_graph(&"lattice:2,30".parse()?)?;
    let omega = sample_weights(&plane, &exp, 3)?;
    let paths = sample_admissible_paths(&plane, 1.0, 200, 5, 40, 4)?;
    let c = c_of_d(&table, plane.degree_bound(), 1.0)?.value;
    let qi = qi_envelope_check(&plane, &omega, &paths, 1.0, c)?;
    println!(
        "quasi-isometry constants on {} admissible paths: q = {:.3}, Q = {:.3}, holds {}",
        paths.len(),
        qi.q,
        qi.big_q,
        qi.holds
    );
    Ok(())
}
