//! Builds each graph family, checks the ball counting bound and round-trips
//! a graph through its text form.
//!
//! cargo run --example graphs

use sublinear_fpp::graph::{build_graph, Graph, GraphSpec};

fn main() -> sublinear_fpp::Result<()> {
    let specs = ["lattice:2,20", "tree:3,10", "free:2,6", "wedge:2,10,3,8"];
    for s in specs {
        let spec: GraphSpec = s.parse()?;
        let g = build_graph(&spec)?;
        println!(
            "{s:>16}  vertices {:>6}  edges {:>6}  q {}  unclipped radius {}  fingerprint {}",
            g.vertex_count(),
            g.edge_count(),
            g.degree_bound(),
            g.unclipped_radius(),
            g.fingerprint()
        );
        for d in [0.5, 1.0] {
            let n = (g.unclipped_radius() as f64 / d) as usize;
            let rep = g.check_ball_bound(d, n)?;
            println!(
                "    |B(o, {:>2})| = {:>6} <= {:>12}  {}",
                rep.radius, rep.count, rep.bound, rep.holds
            );
        }
    }

    let g = build_graph(&"tree:3,4".parse()?)?;
    let back = Graph::from_text(&g.to_text())?;
    assert_eq!(back.fingerprint(), g.fingerprint());
    println!(
        "tree:3,4 text form round-trips ({} lines)",
        g.to_text().lines().count()
    );

    // oversized specs are refused before any allocation
    match build_graph(&"lattice:6,100".parse()?) {
        Err(e) => println!("lattice:6,100 -> {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
