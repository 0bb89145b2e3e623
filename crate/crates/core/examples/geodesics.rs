//! Distances and tie-broken shortest paths in the hop metric and a random
//! passage-time metric, middle thirds and projections.
//!
//! cargo run --example geodesics

use sublinear_fpp::geodesy::{
    distance, middle_third, project, quasi_check, shortest_path, slope, PathRecord,
};
use sublinear_fpp::graph::build_graph;
use sublinear_fpp::percolation::{sample_weights, DistributionSpec};

fn main() -> sublinear_fpp::Result<()> {
    let g = build_graph(&"lattice:2,8".parse()?)?;
    let at = |x: i64, y: i64| g.lattice_vertex(&[x, y]).unwrap();
    let (u, v) = (at(-5, -3), at(6, 4));

    let base = shortest_path(&g, u, v, None)?;
    println!("hop distance {}", distance(&g, u, v, None)?);
    println!("{}", base.to_line());

    let dist: DistributionSpec = "exp:1".parse()?;
    let omega = sample_weights(&g, &dist, 42)?;
    let fast = shortest_path(&g, u, v, Some(&omega))?;
    println!("passage time {:.4}", distance(&g, u, v, Some(&omega))?);
    println!("{}", fast.to_line());
    let fast_hops = PathRecord::new(&g, fast.vertices().to_vec(), None)?;
    println!(
        "hop slope of the ω-geodesic {:.3}",
        slope(&g, &fast_hops, None)?
    );
    println!(
        "ω-geodesic is a (2, 4)-quasi-geodesic in hops: {}",
        quasi_check(&g, &fast_hops, 2.0, 4.0, 1, None)?
    );

    let m = middle_third(&g, &base, u, v, None)?;
    let coords: Vec<_> = m.iter().map(|&x| g.lattice_coords(x).unwrap()).collect();
    println!("middle third of the hop geodesic: {coords:?}");

    let nearest = project(&g, at(0, 8), base.vertices(), None)?;
    let coords: Vec<_> = nearest
        .iter()
        .map(|&x| g.lattice_coords(x).unwrap())
        .collect();
    println!("closest points to (0, 8): {coords:?}");
    Ok(())
}
