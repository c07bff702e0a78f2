// Quadratically enriched bitangent counts of random quartics over several
// residue fields, with the signed count over the reals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropbt::bitangent::bitangent_locus;
use tropbt::gw::{gw_mult_of_class, signed_count, total_gw_count};
use tropbt::quartic::{newton_subdivision, QuarticInput};
use tropbt::residue::ResidueField;
use tropbt::sample::{random_assignment, random_smooth_valuations};
use tropbt::tropcurve::build_curve;

pub fn run_example() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut shown = 0;
    while shown < 3 {
        let q = QuarticInput::from_valuations(&random_smooth_valuations(&mut rng)).expect("valid quartic");
        let s = newton_subdivision(&q.heights());
        let Ok(classes) = bitangent_locus(&build_curve(&s, 4), &s) else { continue };
        shown += 1;
        for k in [ResidueField::Reals, ResidueField::prime(7).unwrap(), ResidueField::Rationals, ResidueField::Complex] {
            let asg = random_assignment(&mut rng, k);
            let per: Vec<String> = classes
                .iter()
                .map(|b| gw_mult_of_class(b, &asg, k).map_or_else(|e| format!("?({e})"), |g| g.to_string()))
                .collect();
            match total_gw_count(&classes, &asg, k) {
                Ok(t) => {
                    assert_eq!(t.degree(), 28);
                    let sc = if k == ResidueField::Reals { format!(" signed {}", signed_count(&t, k).unwrap()) } else { String::new() };
                    println!("{k:<9} total {t}{sc}");
                }
                Err(e) => println!("{k:<9} total undetermined: {e}"),
            }
            println!("          classes {}", per.join(", "));
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
