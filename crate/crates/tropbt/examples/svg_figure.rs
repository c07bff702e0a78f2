// Draws the running example and its bitangent classes to an SVG file.

use tropbt::bitangent::bitangent_locus;
use tropbt::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
use tropbt::svg::emit_svg;
use tropbt::tropcurve::build_curve;

pub fn run_example() {
    let q = QuarticInput::from_valuations(&running_example_valuations()).expect("valid quartic");
    let s = newton_subdivision(&q.heights());
    let curve = build_curve(&s, 4);
    let classes = bitangent_locus(&curve, &s).expect("generic curve");
    let path = std::env::temp_dir().join("tropbt_running_example.svg");
    emit_svg(&curve, Some(&classes), &path).expect("writable temp dir");
    println!("wrote {}", path.display());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
