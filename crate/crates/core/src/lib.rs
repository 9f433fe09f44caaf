//! Deciding solvability of three-source sum-networks over finite fields and
//! synthesizing linear codes for the solvable ones.

pub mod bits;
pub mod code;
pub mod codegen;
pub mod decide;
pub mod error;
pub mod gf;
pub mod network;
pub mod partition;
pub mod regions;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};

/// Bundled example instances.
pub mod fixtures {
    pub const FIX_A: &str = include_str!("../fixtures/fix_a.json");
    pub const FIX_B: &str = include_str!("../fixtures/fix_b.json");
    pub const G1: &str = include_str!("../fixtures/g1.json");
    pub const RG5A: &str = include_str!("../fixtures/rg5a.json");
    pub const RG5B: &str = include_str!("../fixtures/rg5b.json");
    pub const RG7: &str = include_str!("../fixtures/rg7.json");
    pub const RG8A: &str = include_str!("../fixtures/rg8a.json");
    pub const RG8B: &str = include_str!("../fixtures/rg8b.json");
}
