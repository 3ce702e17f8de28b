//! Shared fixtures for the benchmarks.

use grounded_core::base_lang::BaseConfig;
use grounded_core::universe::{build_universe, Universe};

/// The standard two-seed fixture: 2634 sentences at depth 1.
pub fn fixture() -> Universe {
    build_universe(&BaseConfig::with_seeds(["0=0", "0<0"]), 1, 0).unwrap()
}

/// A larger three-seed universe for closure scaling.
pub fn fixture_large() -> Universe {
    build_universe(&BaseConfig::with_seeds(["0=0", "0<0", "(Ax<3)(x<5)"]), 1, 0).unwrap()
}
