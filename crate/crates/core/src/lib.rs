pub mod cli;
pub mod combin;
pub mod conjectures;
pub mod error;
pub mod exact;
pub mod functional;
pub mod group;
pub mod laws;
pub mod quasicube;
pub mod search;

pub use error::{Error, Result};
