//! Write-once-memory codes from finite geometries over GF(2), with
//! multilevel-cell lifting strategies, concatenated error correction, and
//! expected-write analysis.

pub mod analysis;
pub mod bits;
pub mod codes;
pub mod concat;
pub mod error;
pub mod geo_wom;
pub mod geometry;
pub mod multilevel;
pub mod simulate;
pub mod wom;

pub use bits::BitVector;
pub use error::{Error, Result};
pub use wom::{QCellState, WomCode};
