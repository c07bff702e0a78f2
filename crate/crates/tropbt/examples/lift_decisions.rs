// Which bitangent classes lift to lines over the residue field, for the
// all-ones initials and after flipping the sign of a30.

use tropbt::bitangent::bitangent_locus;
use tropbt::lifting::{class_lifts_over, rational_total};
use tropbt::quartic::{newton_subdivision, running_example_valuations, QuarticInput};
use tropbt::residue::{InitialAssignment, ResidueField, Symbol};
use tropbt::tropcurve::build_curve;

pub fn run_example() {
    let q = QuarticInput::from_valuations(&running_example_valuations()).expect("valid quartic");
    let s = newton_subdivision(&q.heights());
    let classes = bitangent_locus(&build_curve(&s, 4), &s).expect("generic curve");
    let ones = InitialAssignment::ones(4);
    let flipped = ones.clone().with(Symbol::new(3, 0), -1);
    for k in [ResidueField::Reals, ResidueField::prime(7).unwrap(), ResidueField::Rationals] {
        for (name, asg) in [("ones", &ones), ("a30=-1", &flipped)] {
            let d: Vec<_> = classes.iter().map(|b| class_lifts_over(b, asg, k).expect("decision")).collect();
            let shown: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            println!("{k:<9} {name:<7} [{}] total {}", shown.join(" "), rational_total(&d));
            assert_eq!(rational_total(&d) % 4, 0);
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
