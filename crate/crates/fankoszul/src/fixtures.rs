//! The three reference fans used throughout the tests and reports.

use crate::fan_core::{load_fan, Fan};

pub const FX1_JSON: &str = include_str!("../../../fixtures/fx1.json");
pub const FX2_JSON: &str = include_str!("../../../fixtures/fx2.json");
pub const FX3_JSON: &str = include_str!("../../../fixtures/fx3.json");

/// The positive quadrant in rank 2.
pub fn fx1() -> Fan {
    load_fan(FX1_JSON).expect("fx1 fixture")
}

/// The cone over a square in rank 3.
pub fn fx2() -> Fan {
    load_fan(FX2_JSON).expect("fx2 fixture")
}

/// A single ray in rank 1.
pub fn fx3() -> Fan {
    load_fan(FX3_JSON).expect("fx3 fixture")
}

pub fn all() -> Vec<(&'static str, Fan)> {
    vec![("fx1", fx1()), ("fx2", fx2()), ("fx3", fx3())]
}
