// The seven bitangent classes of the running example, with shapes and the
// lifting multiplicities of their representatives.

use tropbt::bitangent::bitangent_locus;
use tropbt::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
use tropbt::tropcurve::build_curve;

pub fn run_example() {
    let q = QuarticInput::from_valuations(&running_example_valuations()).expect("valid quartic");
    let s = newton_subdivision(&q.heights());
    let curve = build_curve(&s, 4);
    let classes = bitangent_locus(&curve, &s).expect("generic curve");
    let mut total = 0;
    for b in &classes {
        let pattern = b.pattern().expect("solved multiplicities");
        total += pattern.iter().sum::<u32>();
        let reps: Vec<String> = b.representatives.iter().map(|r| r.line.vertex.to_string()).collect();
        println!("{:<6} pattern {:?} at {}", b.shape.to_string(), pattern, reps.join(" "));
    }
    assert_eq!(classes.len(), 7);
    assert_eq!(total, 28);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
