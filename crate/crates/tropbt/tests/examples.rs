// Every file under examples/ runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!("../examples/", $file));

            #[test]
            fn runs() {
                run_example();
            }
        }
    };
}

example!(tropicalize, "tropicalize.rs");
example!(bitangent_classes, "bitangent_classes.rs");
example!(local_solver, "local_solver.rs");
example!(lift_decisions, "lift_decisions.rs");
example!(gw_multiplicities, "gw_multiplicities.rs");
example!(square_classes, "square_classes.rs");
example!(svg_figure, "svg_figure.rs");
