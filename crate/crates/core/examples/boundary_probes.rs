//! Images of base rays under a random passage-time metric: stabilization of
//! ω-geodesics, recurrence of the image, neighbourhood preservation,
//! equivalence of rays and bi-infinite geodesics.
//!
//! cargo run --release --example boundary_probes

use sublinear_fpp::boundary::{
    bi_infinite_probe, equivalence_image_check, image_ray, morse_image_probe,
    neighborhood_image_check,
};
use sublinear_fpp::graph::build_graph;
use sublinear_fpp::kappa::Kappa;
use sublinear_fpp::percolation::{sample_weights, DistributionSpec};
use sublinear_fpp::recurrence::named_ray;

fn main() -> sublinear_fpp::Result<()> {
    let exp: DistributionSpec = "exp:1".parse()?;
    let tree = build_graph(&"tree:3,12".parse()?)?;
    let omega = sample_weights(&tree, &exp, 17)?;
    let first = named_ray(&tree, "first")?;
    let last = named_ray(&tree, "last")?;

    let rec = image_ray(&tree, &first, &omega, &[3, 6, 10])?;
    println!(
        "image ray: stabilized prefix of {} vertices, unstable {}",
        rec.stabilized_prefix.len(),
        rec.unstable
    );

    let scales: Vec<(usize, usize)> = (2..=10).map(|k| (0, k)).collect();
    let rep = morse_image_probe(
        &tree,
        &first,
        &omega,
        2.0,
        &scales,
        &Kappa::default_family(),
    )?;
    println!("base {:?}\nimage {:?}", rep.base_verdict, rep.image_verdict);

    let one = Kappa::constant(1.0)?;
    for r in [5, 10] {
        let b = bi_infinite_probe(&tree, &first, &last, &omega, r, &one, 1.0)?;
        println!("bi-infinite at R = {r}: offset {:.3}", b.offset);
    }

    let eq = equivalence_image_check(&tree, &first, &last, &omega, &[2, 4, 6, 8, 10])?;
    println!("distinct tree rays: {:?}", eq.verdict);

    let wedge = build_graph(&"wedge:2,12,3,10".parse()?)?;
    let ray = named_ray(&wedge, "first")?;
    let kappa: Kappa = "pow:1,0.5".parse()?;
    for dist in ["point:1", "exp:1"] {
        let omega = sample_weights(&wedge, &dist.parse()?, 23)?;
        let n = neighborhood_image_check(&wedge, &ray, &omega, &kappa, 1.0, 4, 0.0, usize::MAX, 1)?;
        println!(
            "wedge, {dist}: fitted n_ω {:.3} -> {:.3} on doubling (base {:.3}), stable {}",
            n.fitted_n_omega, n.fitted_n_omega_double, n.base_ratio, n.stable
        );
    }
    Ok(())
}
