//! Middle-third recurrence on the two reference geometries: geodesics in a
//! tree cannot be detoured at all, while the lattice axis admits detours at
//! every linear scale.
//!
//! cargo run --example recurrence_controls

use sublinear_fpp::geodesy::shortest_path;
use sublinear_fpp::graph::{build_graph, Vertex};
use sublinear_fpp::kappa::Kappa;
use sublinear_fpp::recurrence::{
    avoiding_path, classify_direction, named_ray, recurrence_profile, Avoidance,
};

fn main() -> sublinear_fpp::Result<()> {
    let tree = build_graph(&"tree:3,10".parse()?)?;
    let ray = named_ray(&tree, "first")?;
    let v = ray.vertices();
    let scales: Vec<(Vertex, Vertex)> = (2..=9).map(|k| (v[0], v[k])).collect();
    let profile = recurrence_profile(&tree, &ray, 3.0, &scales, None)?;
    let d: Vec<f64> = profile.iter().map(|r| r.max_avoidance).collect();
    println!("tree ray, C = 3: D(r) = {d:?}");
    println!(
        "  {:?}",
        classify_direction(&profile, &Kappa::default_family())
    );

    let leaf_to_leaf = shortest_path(&tree, v[10], named_ray(&tree, "last")?.last(), None)?;
    let (a, b) = (leaf_to_leaf.first(), leaf_to_leaf.last());
    match avoiding_path(&tree, &leaf_to_leaf, a, b, 0.0, 4.0, None)? {
        Avoidance::NoWitness => {
            println!("no slope-4 path avoids the middle third of a leaf-to-leaf geodesic")
        }
        other => println!("unexpected {other:?}"),
    }

    let plane = build_graph(&"lattice:2,12".parse()?)?;
    let axis = named_ray(&plane, "axis")?;
    let at = |x: i64| plane.lattice_vertex(&[x, 0]).unwrap();
    let symmetric = shortest_path(&plane, at(-12), at(12), None)?;
    let scales: Vec<(Vertex, Vertex)> = (1..=4).map(|m| (at(-3 * m), at(3 * m))).collect();
    let profile = recurrence_profile(&plane, &symmetric, 2.0, &scales, None)?;
    for r in &profile {
        println!(
            "axis, r = {:>2}: D = {} (capped {}), witness length {:?}",
            r.r,
            r.max_avoidance,
            r.capped,
            r.witness.as_ref().map(|w| w.graph_length())
        );
    }
    println!(
        "  {:?}",
        classify_direction(&profile, &Kappa::default_family())
    );

    let v = axis.vertices();
    let scales: Vec<(Vertex, Vertex)> = (2..=10).map(|k| (v[0], v[k])).collect();
    let profile = recurrence_profile(&plane, &axis, 2.0, &scales, None)?;
    println!(
        "axis ray from o: {:?}",
        classify_direction(&profile, &Kappa::default_family())
    );
    Ok(())
}
