//! Divisible point sets and codes over small finite fields.

pub mod analysis;
pub mod canon;
pub mod classify;
pub mod code;
pub mod cylinder;
pub mod error;
pub mod geom;
pub mod gf;
pub mod io;
pub mod plane;
pub mod solver;

pub use analysis::{PointMultiset, Spectrum};
pub use error::{Error, Result};
pub use geom::{Space, Subspace};
pub use gf::Field;
