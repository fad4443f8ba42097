//! Coding for partially stuck memory cells.
//!
//! The crate implements masking codes that keep partially-stuck-at-1 cells
//! away from level 0 while correcting random errors, together with exact
//! sphere-packing and Gilbert-Varshamov type bounds for such codes, a greedy
//! constructor for parity-check matrices whose code contains the all-one
//! word, and a seeded stuck-cell channel simulator.

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod code;
pub mod error;
pub mod example1;
pub mod field;
pub mod format;
pub mod matrix;
pub mod psmc;

pub use bounds::{BoundQuery, BoundResult, GvConstruction};
pub use channel::{ErrorModel, MaskingScheme, TrialConfig, TrialReport};
pub use code::{LinearCode, SyndromeDecoder};
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use matrix::{Matrix, Rref};
pub use psmc::{AllOneMaskingCode, Message, PsmcParams, PsmcScheme, StuckProfile};
