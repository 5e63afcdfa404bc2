use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triselect::certificate::{verify, verify_items};
use triselect::generators::{gen_instance, Family, GeneratorSpec, TriangleCount};
use triselect::geometry::{int, ratio, shear};
use triselect::oracle::depth_at;
use triselect::selection::run_selection_detailed;
use triselect::{exact_max_depth, run_selection, Error, Point2, PointSet, SelectionCertificate, SelectionOptions, TriangleSet};

fn instance(family: Family, n: usize, m: TriangleCount, seed: u64) -> (PointSet, TriangleSet) {
    gen_instance(&GeneratorSpec { family, n, m, seed }).unwrap()
}

#[test]
fn generated_runs_pass_and_verify() {
    for (k, family) in Family::ALL.into_iter().enumerate() {
        for (n, m) in [(8, TriangleCount::All), (9, TriangleCount::Count(81))] {
            let (s, t) = instance(family, n, m, 100 + k as u64);
            let cert = run_selection(&s, &t, &SelectionOptions::default()).unwrap();
            assert!(cert.all_pass(), "{family} n={n}: {:?}", cert.first_failure());
            assert!(cert.depth_triangles >= 1);
            assert!(cert.depth_max.unwrap() >= cert.depth_all);
            verify(&s, &t, &cert).unwrap();
        }
    }
}

#[test]
fn certificate_json_roundtrip() {
    let (s, t) = instance(Family::RandomInteger, 8, TriangleCount::All, 4);
    let cert = run_selection(&s, &t, &SelectionOptions::default()).unwrap();
    let json = serde_json::to_string_pretty(&cert).unwrap();
    assert!(json.contains("\"z0\": \""));
    assert!(json.contains("\"name\": \"C8\""));
    let back: SelectionCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn tampering_is_named() {
    let (s, t) = instance(Family::TwoClusters, 8, TriangleCount::All, 11);
    let cert = run_selection(&s, &t, &SelectionOptions::default()).unwrap();

    let mut bad = cert.clone();
    bad.depth_triangles += 1;
    match verify(&s, &t, &bad) {
        Err(Error::CheckFailed { name, .. }) => assert_eq!(name, "C8"),
        other => panic!("expected C8 failure, got {other:?}"),
    }

    let mut bad = cert.clone();
    bad.m_discarded += 1;
    assert!(matches!(verify(&s, &t, &bad), Err(Error::CheckFailed { name, .. }) if name == "C1a"));

    let mut bad = cert.clone();
    bad.chain_checks.retain(|c| c.name != "C4");
    assert!(matches!(verify(&s, &t, &bad), Err(Error::CheckFailed { name, .. }) if name == "C4"));

    let (s2, t2) = instance(Family::TwoClusters, 8, TriangleCount::All, 12);
    assert!(verify(&s2, &t2, &cert).is_err());
    assert!(verify_items(&s, &t, &cert).iter().all(|i| i.ok()));
}

#[test]
fn figure_configuration() {
    let s = PointSet::from_ints(&[(0, 0), (4, 0), (1, 2), (3, 2)], "figure").unwrap();
    let t = TriangleSet::from_triples(&[[0, 1, 2], [0, 1, 3]], 4).unwrap();
    let run = run_selection_detailed(&s, &t, &SelectionOptions::default()).unwrap();
    assert_eq!(run.segments.len(), 1);
    let sg = &run.segments[0];
    assert_eq!(sg.witness, [0, 1, 2, 3]);
    for y in sg.samples(&run.sheared) {
        let p = Point2::new(sg.x.clone(), y);
        let abc = triselect::geometry::point_in_open_triangle(&p, &run.sheared[0], &run.sheared[1], &run.sheared[2]);
        let abd = triselect::geometry::point_in_open_triangle(&p, &run.sheared[0], &run.sheared[1], &run.sheared[3]);
        assert!(abc || abd);
    }
    assert!(run.certificate.depth_triangles >= 1);
}

#[test]
fn oracle_dominates_probes_and_is_affine_invariant() {
    let (s, t) = instance(Family::UniformGridPerturbed, 7, TriangleCount::Count(25), 3);
    let best = exact_max_depth(&s, &t).unwrap();
    assert_eq!(depth_at(&best.point, &t, &s), best.depth);
    let side = 8 * 7i64.pow(4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..2000 {
        let d = rng.gen_range(1..50);
        let p = Point2::new(ratio(rng.gen_range(0..side * d), d), ratio(rng.gen_range(0..side * d), d));
        assert!(depth_at(&p, &t, &s) <= best.depth);
    }
    let sheared = shear(&s, &ratio(-2, 7));
    assert_eq!(exact_max_depth(&sheared, &t).unwrap().depth, best.depth);
    let scaled = PointSet::new(
        s.points().iter().map(|p| Point2::new(&p.x * int(3), &p.y * ratio(1, 2))).collect(),
        "scaled",
    )
    .unwrap();
    assert_eq!(exact_max_depth(&scaled, &t).unwrap().depth, best.depth);
}

#[test]
fn deterministic_certificates() {
    let (s, t) = instance(Family::ConvexPosition, 10, TriangleCount::Count(100), 8);
    let a = serde_json::to_string(&run_selection(&s, &t, &SelectionOptions::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&run_selection(&s, &t, &SelectionOptions::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}
