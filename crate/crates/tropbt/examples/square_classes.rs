// Square classes and small quadratic forms over the supported residue fields.

use tropbt::gw::{trace_deg2, GWElement};
use tropbt::residue::{legendre, Rational, ResidueField};

pub fn run_example() {
    let fields = [ResidueField::Reals, ResidueField::Rationals, ResidueField::prime(5).unwrap(), ResidueField::prime(7).unwrap()];
    for k in fields {
        let classes: Vec<String> = [-3, -1, 2, 3, 6]
            .iter()
            .map(|&a| k.class_of_rational(&Rational::from_integer(a)).unwrap().to_string())
            .collect();
        // trace form of <1> from k(sqrt(-1)), when that is a field
        let tr = trace_deg2(&Rational::from_integer(1), &Rational::from_integer(0), &Rational::from_integer(-1), k)
            .map_or_else(|e| e.to_string(), |g| g.to_string());
        let h = GWElement::hyperbolic(1).normalized(k);
        let pair = GWElement::class(k.class_of_rational(&Rational::from_integer(3)).unwrap())
            .add(&GWElement::class(k.class_of_rational(&Rational::from_integer(-3)).unwrap()), k);
        println!("{k:<9} -3,-1,2,3,6 -> {}  Tr<1> = {tr}  <3>+<-3> ~ H: {}", classes.join(" "), pair.equivalent(&h, k));
    }
    println!("(3/7) = {}, (2/7) = {}", legendre(3, 7).unwrap(), legendre(2, 7).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
