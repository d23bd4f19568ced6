#![allow(dead_code)]

use spectre_core::oracle::{component_milnor, random_component, random_polygon, Bounds};
use spectre_core::{Component, Diagram, Polygon};

pub const POLYGON_COUNT: usize = 500;
pub const DEGENERATE_COUNT: usize = 200;
/// Largest Milnor number admitted into the degenerate corpus.
pub const MAX_MILNOR: i64 = 50_000;

/// Random commode polygons with at most 4 faces and entries at most 6.
pub fn polygons(count: usize) -> Vec<Polygon> {
    (0..count as u64).map(|s| random_polygon(s, 4, 6)).collect()
}

/// Random component trees of depth 1 to 3 with at least one horizontal edge and
/// Milnor number at most [`MAX_MILNOR`].
pub fn degenerate_components(count: usize) -> Vec<(u64, Component)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let c = random_component(seed, 1 + (seed % 3) as u32, Bounds::default());
        if !c.children.is_empty() && component_milnor(&c).unwrap() <= MAX_MILNOR {
            out.push((seed, c));
        }
        seed += 1;
    }
    out
}

pub fn degenerate_diagrams(count: usize) -> Vec<(u64, Diagram)> {
    degenerate_components(count).into_iter().map(|(s, c)| (s, c.build())).collect()
}

/// Prints one result line and returns whether the check passed.
pub fn report(label: &str, failures: &[String], checked: usize) -> bool {
    if failures.is_empty() {
        println!("PASS {label} ({checked} instances)");
        true
    } else {
        println!("FAIL {label} ({} of {checked} instances)", failures.len());
        for f in failures.iter().take(5) {
            println!("    {f}");
        }
        false
    }
}
