//! Lower bounds on the Morse gauge of a geodesic by sampling quasi-geodesics
//! with endpoints on it.
//!
//! cargo run --example morse_gauge

use sublinear_fpp::geodesy::shortest_path;
use sublinear_fpp::graph::build_graph;
use sublinear_fpp::kappa::Kappa;
use sublinear_fpp::recurrence::{fellow_travel_constant, morse_gauge_probe, named_ray};

fn main() -> sublinear_fpp::Result<()> {
    let one = Kappa::constant(1.0)?;

    let tree = build_graph(&"tree:3,8".parse()?)?;
    let z = shortest_path(
        &tree,
        named_ray(&tree, "first")?.last(),
        named_ray(&tree, "last")?.last(),
        None,
    )?;
    let est = morse_gauge_probe(&tree, &z, 2.0, 1.0, &one, 60, 1, None)?;
    println!(
        "tree geodesic: {} samples, sup deviation/κ = {}, gauge >= {}",
        est.samples, est.sup_deviation_over_kappa, est.gauge
    );

    let plane = build_graph(&"lattice:2,16".parse()?)?;
    let at = |x: i64| plane.lattice_vertex(&[x, 0]).unwrap();
    let z = shortest_path(&plane, at(-16), at(16), None)?;
    let est = morse_gauge_probe(&plane, &z, 2.0, 1.0, &one, 60, 1, None)?;
    println!(
        "lattice axis: {} samples, sup deviation/κ = {}, inconclusive {}",
        est.samples, est.sup_deviation_over_kappa, est.inconclusive
    );
    for s in &est.scale_profile {
        println!("  {s:?}");
    }

    let c = fellow_travel_constant(2.0, |q| 3.0 * q);
    println!("fellow-travel constant for gauge 3q at q = 2: {c}");
    Ok(())
}
