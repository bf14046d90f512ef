//! Bundled surfaces.

use crate::cubic::CubicSurface;
use crate::dp4::Dp4Surface;
use crate::surface_file::{load_cubic, load_dp4};

pub const MINIMAL_F2: &str = include_str!("../fixtures/minimal_f2.toml");
pub const RATIONAL_F2: &str = include_str!("../fixtures/rational_f2.toml");
pub const DIAGONAL_F4_A: &str = include_str!("../fixtures/diagonal_f4_a.toml");
pub const DIAGONAL_F4_A1: &str = include_str!("../fixtures/diagonal_f4_a1.toml");
pub const DP4_DIAGONAL_F5: &str = include_str!("../fixtures/dp4_diagonal_f5.toml");
pub const DP4_F2: &str = include_str!("../fixtures/dp4_f2.toml");
pub const DP4_F3: &str = include_str!("../fixtures/dp4_f3.toml");

/// `(name, text)` for every cubic fixture.
pub const CUBICS: [(&str, &str); 4] = [
    ("minimal-f2", MINIMAL_F2),
    ("rational-f2", RATIONAL_F2),
    ("diagonal-f4-a", DIAGONAL_F4_A),
    ("diagonal-f4-a+1", DIAGONAL_F4_A1),
];

pub const DP4S: [(&str, &str); 3] = [
    ("dp4-diagonal-f5", DP4_DIAGONAL_F5),
    ("dp4-f2", DP4_F2),
    ("dp4-f3", DP4_F3),
];

pub fn minimal_f2() -> CubicSurface {
    load_cubic(MINIMAL_F2).expect("bundled fixture")
}

pub fn rational_f2() -> CubicSurface {
    load_cubic(RATIONAL_F2).expect("bundled fixture")
}

/// `X^3 + Y^3 + Z^3 + theta W^3` over `F_4`; `plus_one` selects `theta = alpha + 1`.
pub fn diagonal_f4(plus_one: bool) -> CubicSurface {
    load_cubic(if plus_one {
        DIAGONAL_F4_A1
    } else {
        DIAGONAL_F4_A
    })
    .expect("bundled fixture")
}

pub fn dp4(name: &str) -> Option<Dp4Surface> {
    DP4S.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| load_dp4(t).expect("bundled fixture"))
}
