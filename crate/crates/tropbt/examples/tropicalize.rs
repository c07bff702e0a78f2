// Newton subdivision and tropical curve of the running example quartic.

use tropbt::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
use tropbt::tropcurve::build_curve;

pub fn run_example() {
    let q = QuarticInput::from_valuations(&running_example_valuations()).expect("valid quartic");
    let s = newton_subdivision(&q.heights());
    assert!(s.is_unimodular_triangulation(4));
    let curve = build_curve(&s, 4);
    println!("{} triangles, {} vertices, {} edges, {} rays", s.faces.len(), curve.vertices.len(), curve.edges.len(), curve.rays.len());
    print!("{curve}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
