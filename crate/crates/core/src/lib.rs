//! Exact computations on shards of the adjoint braid arrangement: forest
//! derivatives, Steinmann relations and the structure they carry.

pub mod arrangement;
pub mod audit;
pub mod calculus;
pub mod error;
pub mod exactla;
pub mod forests;
pub mod ground;
pub mod io;
pub mod render;
pub mod steinmann;

pub use error::{Error, Result};
