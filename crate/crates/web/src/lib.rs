//! Browser bindings. Every exported function takes a generator spec, rebuilds
//! the (deterministic) instance and returns a JSON string; the plain Rust
//! versions are tested natively.

use num_traits::ToPrimitive;
use serde::Serialize;
use triselect::generators::{gen_instance, Family, GeneratorSpec, TriangleCount};
use triselect::geometry::{format_rational, unshear_point};
use triselect::selection::run_selection_detailed;
use triselect::{count_containing, exact_max_depth, Point2, PointSet, Rational, SelectionOptions, TriangleSet};
use wasm_bindgen::prelude::*;

/// The demo never runs the oracle inside `select`; it has its own button.
const DEMO_OPTIONS: SelectionOptions = SelectionOptions {
    oracle_max_n: None,
    max_z_retries: 32,
};

#[derive(Debug, Serialize)]
struct Xy {
    x: f64,
    y: f64,
    exact: [String; 2],
}

impl Xy {
    fn of(p: &Point2) -> Xy {
        Xy {
            x: f64_of(&p.x),
            y: f64_of(&p.y),
            exact: [format_rational(&p.x), format_rational(&p.y)],
        }
    }
}

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    text: String,
}

#[derive(Debug, Serialize)]
struct SelectView {
    points: Vec<Xy>,
    triangles: Vec<[usize; 3]>,
    /// Triangles of the chosen level.
    level_triangles: Vec<usize>,
    /// Lifted segments mapped back to input coordinates.
    segments: Vec<[Xy; 2]>,
    x0: Xy,
    j_star: usize,
    depth_triangles: usize,
    bound_rhs: String,
    checks: Vec<Check>,
}

#[derive(Debug, Serialize)]
struct OracleView {
    depth: usize,
    point: Xy,
}

#[derive(Debug, Serialize)]
struct ErrorView {
    error: String,
}

fn instance(family: &str, n: usize, m: &str, seed: u64) -> Result<(PointSet, TriangleSet), String> {
    let family: Family = family.parse()?;
    let m: TriangleCount = m.parse()?;
    gen_instance(&GeneratorSpec { family, n, m, seed }).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&ErrorView { error }),
    }
    .expect("views serialize")
}

fn select_view(family: &str, n: usize, m: &str, seed: u64) -> Result<SelectView, String> {
    let (s, t) = instance(family, n, m, seed)?;
    let run = run_selection_detailed(&s, &t, &DEMO_OPTIONS).map_err(|e| e.to_string())?;
    let cert = &run.certificate;
    let eps = &cert.shear_epsilon;
    let segments = run
        .segments
        .iter()
        .map(|sg| {
            let lo = unshear_point(&Point2::new(sg.x.clone(), sg.y_lo.clone()), eps);
            let hi = unshear_point(&Point2::new(sg.x.clone(), sg.y_hi.clone()), eps);
            [Xy::of(&lo), Xy::of(&hi)]
        })
        .collect();
    Ok(SelectView {
        points: s.points().iter().map(Xy::of).collect(),
        triangles: t.iter().map(|tr| tr.indices()).collect(),
        level_triangles: run.level_triangles.clone(),
        segments,
        x0: Xy::of(&cert.x0),
        j_star: cert.j_star,
        depth_triangles: cert.depth_triangles,
        bound_rhs: format_rational(&cert.bound_rhs),
        checks: cert
            .chain_checks
            .iter()
            .map(|c| Check {
                name: c.name.clone(),
                pass: c.pass,
                text: c.to_string(),
            })
            .collect(),
    })
}

/// Generates the instance and runs the selection pipeline.
pub fn select_json(family: &str, n: usize, m: &str, seed: u64) -> String {
    to_json(select_view(family, n, m, seed))
}

/// Exact maximum depth of the instance.
pub fn oracle_json(family: &str, n: usize, m: &str, seed: u64) -> String {
    to_json(instance(family, n, m, seed).and_then(|(s, t)| {
        let r = exact_max_depth(&s, &t).map_err(|e| e.to_string())?;
        Ok(OracleView {
            depth: r.depth,
            point: Xy::of(&r.point),
        })
    }))
}

/// Number of triangles whose interior contains `(x, y)`; the coordinates
/// are taken exactly as the nearest binary fractions.
pub fn depth_json(family: &str, n: usize, m: &str, seed: u64, x: f64, y: f64) -> String {
    to_json(instance(family, n, m, seed).and_then(|(s, t)| {
        let exact = |v: f64| Rational::from_float(v).ok_or_else(|| format!("coordinate {v} is not finite"));
        let p = Point2::new(exact(x)?, exact(y)?);
        Ok(OracleView {
            depth: count_containing(&p, &t, &s),
            point: Xy::of(&p),
        })
    }))
}

#[wasm_bindgen]
pub fn select(family: &str, n: usize, m: &str, seed: u32) -> String {
    select_json(family, n, m, seed.into())
}

#[wasm_bindgen]
pub fn oracle(family: &str, n: usize, m: &str, seed: u32) -> String {
    oracle_json(family, n, m, seed.into())
}

#[wasm_bindgen]
pub fn depth_at(family: &str, n: usize, m: &str, seed: u32, x: f64, y: f64) -> String {
    depth_json(family, n, m, seed.into(), x, y)
}
