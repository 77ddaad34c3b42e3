//! Inputs shared by the benchmarks.

use b3tower::{build_example_family, build_model, Distribution, ExampleM, ModelName, Scalar};

pub fn f3() -> Distribution {
    build_model(ModelName::F3).expect("F3 model builds").distribution
}

pub fn example() -> Distribution {
    build_example_family(&ExampleM::Formal).expect("example builds")
}

/// The example family with m = x6³ + x6.
pub fn cubic_example() -> Distribution {
    let x = Scalar::coord("x6");
    let m = x.mul(&x).mul(&x).add(&x);
    build_example_family(&ExampleM::Polynomial(m)).expect("example builds")
}
