use serde_json::Value;
use triselect_web::{depth_json, oracle_json, select_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn select_view_is_consistent() {
    let v = parse(&select_json("random_integer", 9, "ALL", 4));
    assert_eq!(v["points"].as_array().unwrap().len(), 9);
    assert_eq!(v["triangles"].as_array().unwrap().len(), 84);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert!(!v["segments"].as_array().unwrap().is_empty());

    // depth at x0 as reported equals the clicked-point depth there
    let x0 = &v["x0"];
    let d = parse(&depth_json("random_integer", 9, "ALL", 4, x0["x"].as_f64().unwrap(), x0["y"].as_f64().unwrap()));
    let oracle = parse(&oracle_json("random_integer", 9, "ALL", 4));
    let depth = v["depth_triangles"].as_u64().unwrap();
    assert!(oracle["depth"].as_u64().unwrap() >= depth);
    assert!(d["depth"].as_u64().unwrap() <= oracle["depth"].as_u64().unwrap());
}

#[test]
fn errors_are_reported_as_json() {
    assert!(parse(&select_json("blobs", 9, "ALL", 0))["error"].is_string());
    assert!(parse(&select_json("random_integer", 6, "500", 0))["error"].as_str().unwrap().contains("C(n,3)"));
    assert!(parse(&depth_json("random_integer", 6, "ALL", 0, f64::NAN, 0.0))["error"].is_string());
}

#[test]
fn depth_of_far_point_is_zero() {
    let v = parse(&depth_json("two_clusters", 8, "20", 1, -1.0, -1.0));
    assert_eq!(v["depth"], 0);
    assert_eq!(v["point"]["exact"][0], "-1/1");
}
