pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod linalg;
pub mod modrep;
pub mod report;
pub mod sheaves;
pub mod sieves;
pub mod topology;
pub mod torsion;
pub mod typen;

pub use error::{Error, Result};
