// Closed-form tangency data for two local configurations: a curve vertex on the
// horizontal ray of a line, and a vertical curve edge inside the vertical ray.

use tropbt::lifting::solve_local_tangency;
use tropbt::tropcurve::{ComponentKind, LineRay};

pub fn run_example() {
    let vertex = ComponentKind::CurveVertexOnRay { ray: LineRay::Horizontal, triangle: vec![(0, 1), (1, 2), (2, 2)] };
    let sol = solve_local_tangency(&vertex).expect("supported configuration");
    let (x, y) = sol.tangency.expect("tangency point");
    let (a, b) = sol.equation.exps;
    println!("vertex on ray: m^{a} n^{b} = {}, tangency ({x}, {y})", sol.equation.rhs);

    let edge = ComponentKind::EdgeInRay { ray: LineRay::Vertical, edge: [(2, 1), (3, 1)], apexes: [(3, 0), (2, 2)] };
    let sol = solve_local_tangency(&edge).expect("supported configuration");
    let (x, _) = sol.tangency.expect("tangency point");
    println!("edge in ray: x = {x}, radicand {}", sol.radicand.expect("doubled tangency"));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
