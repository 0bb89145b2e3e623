//! Sublinear functions: the built-in families, concave regularization of
//! sampled data, the constants (R, D1, D2) of a small-compared-to-κ offset
//! and κ-neighbourhoods.
//!
//! cargo run --example sublinear

use sublinear_fpp::geodesy::PathRecord;
use sublinear_fpp::graph::build_graph;
use sublinear_fpp::kappa::{lemma23_constants, nbhd_mask, regularize_concave, Kappa};

fn main() -> sublinear_fpp::Result<()> {
    for k in Kappa::default_family() {
        let vals: Vec<String> = [0.0, 10.0, 1e3, 1e6]
            .iter()
            .map(|&t| format!("{:.2}", k.eval(t).unwrap()))
            .collect();
        println!("{k:>10}  κ(0, 10, 1e3, 1e6) = {}", vals.join(", "));
        for d in [1.0, 2.0] {
            let c = lemma23_constants(d, &k)?;
            println!(
                "            D = {d}: R = {:.3}, D1 = {:.3}, D2 = {:.3}",
                c.r, c.d1, c.d2
            );
        }
    }

    let noisy = [
        (0.0, 1.0),
        (1.0, 2.5),
        (2.0, 2.7),
        (4.0, 4.0),
        (8.0, 4.2),
        (16.0, 6.0),
        (32.0, 5.5),
    ];
    let reg = regularize_concave(&noisy)?;
    println!(
        "regularized {} samples, largest upward correction {:.3}",
        noisy.len(),
        reg.gap
    );
    println!("  {}", reg.kappa);

    "pow:1,1"
        .parse::<Kappa>()
        .map(|_| ())
        .unwrap_or_else(|e| println!("pow:1,1 rejected: {e}"));

    let g = build_graph(&"lattice:2,20".parse()?)?;
    let axis = PathRecord::new(
        &g,
        (0..=20)
            .map(|x| g.lattice_vertex(&[x, 0]).unwrap())
            .collect(),
        None,
    )?;
    for k in ["const:1", "pow:1,0.5"] {
        let k: Kappa = k.parse()?;
        let inside = nbhd_mask(&g, axis.vertices(), 1.0, &k, None)?
            .iter()
            .filter(|&&b| b)
            .count();
        println!("(κ = {k}, n = 1)-neighbourhood of the positive axis: {inside} vertices");
    }
    Ok(())
}
