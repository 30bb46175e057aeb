pub mod artal;
pub mod cover;
pub mod curvecomb;
pub mod cyclicnum;
pub mod equivalence;
pub mod error;
pub mod fingroup;
pub mod fixtures;
pub mod io;
pub mod multigraph;

pub use error::{Error, Result};
