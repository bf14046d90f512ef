pub mod certify;
pub mod cubic;
pub mod dp4;
pub mod error;
pub mod ffield;
pub mod fixtures;
pub mod lines;
pub mod param;
pub mod picard;
pub mod projgeom;
pub mod report;
pub mod scan;
pub mod surface_file;

pub use error::{Error, Result};
