use std::process::Command;

use sublinear_fpp::harness::{run_and_write, summarize, trials_from_jsonl, ExperimentSpec};

const SPEC: &str = "\
graph.kind = wedge
graph.dim = 2
graph.half_width = 8
graph.arity = 3
graph.depth = 9
dist.kind = exp
dist.rate = 1
seed = 5
trials = 6
workers = 1
probes = recur, nbhd, offsets, env, broken
probe.recur.kind = recur
probe.recur.ray = axis
probe.recur.expect = non_recurrent
probe.nbhd.kind = neighborhood
probe.nbhd.radius = 3
probe.nbhd.samples = 40
probe.offsets.kind = bi_infinite
probe.offsets.ray1 = first
probe.offsets.ray2 = axis
probe.offsets.radii = 3,6
probe.env.kind = upper_envelope
probe.env.ray = axis
probe.env.min_len = 3
probe.broken.kind = image_ray
probe.broken.radii = 40
";

fn run_in(dir: &std::path::Path, workers: usize) -> (Vec<u8>, Vec<u8>) {
    let mut spec = ExperimentSpec::parse(SPEC).unwrap();
    spec.workers = workers;
    let t = dir.join(format!("t{workers}.jsonl"));
    let s = dir.join(format!("s{workers}.csv"));
    spec.out_trials = Some(t.display().to_string());
    spec.out_summary = Some(s.display().to_string());
    run_and_write(&spec).unwrap();
    (std::fs::read(t).unwrap(), std::fs::read(s).unwrap())
}

#[test]
fn outputs_are_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let first = run_in(dir.path(), 1);
    let again = run_in(dir.path(), 1);
    let wide = run_in(dir.path(), 3);
    assert_eq!(first, again);
    assert_eq!(first, wide);

    let results = trials_from_jsonl(std::str::from_utf8(&first.0).unwrap()).unwrap();
    assert_eq!(results.len(), 6);
    assert!(results.iter().enumerate().all(|(i, r)| r.trial == i as u64));
    // the oversized radius is a structured per-trial error, not an abort
    let line = std::str::from_utf8(&first.0)
        .unwrap()
        .lines()
        .next()
        .unwrap();
    assert!(line.contains("\"truncation\""), "{line}");
    let mut reversed = results.clone();
    reversed.reverse();
    assert_eq!(summarize(&reversed).unwrap(), summarize(&results).unwrap());
}

fn fpp(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fpp"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn cli_subcommands_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.txt");
    std::fs::write(&spec, SPEC.replace("trials = 6", "trials = 2")).unwrap();
    let out = dir.path().join("out");
    let o = fpp(&[
        "experiment",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let o = fpp(&["report", out.join("trials.jsonl").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), csv);

    let o = fpp(&["generate", "tree:3,2"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 10);

    let o = fpp(&["percolate", "tree:3,2", "point:2", "--seed", "4"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .all(|l| l.ends_with(" 2")));

    let o = fpp(&["geodesic", "lattice:2,3", "0", "48"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("distance 12\n"));

    let o = fpp(&["recur", "tree:3,10", "first"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("recurrent_with"));

    assert_eq!(fpp(&["generate", "lattice:two,3"]).status.code(), Some(2));
    assert_eq!(
        fpp(&["percolate", "tree:3,2", "gauss:1"]).status.code(),
        Some(2)
    );
    std::fs::write(&spec, format!("{SPEC}colour = red\n")).unwrap();
    assert_eq!(
        fpp(&["experiment", spec.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(fpp(&["generate", "lattice:5,200"]).status.code(), Some(3));
    assert_eq!(
        fpp(&["geodesic", "tree:3,2", "0", "99"]).status.code(),
        Some(1)
    );
}
