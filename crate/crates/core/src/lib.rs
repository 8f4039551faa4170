pub mod curve;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod koszul;
pub mod linalg;
pub mod models;
pub mod poly;
pub mod projection;
pub mod section;
pub mod verify;

pub use error::{Error, Result};
