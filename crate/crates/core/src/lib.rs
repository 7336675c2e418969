pub mod canon;
pub mod catalog;
pub mod census;
pub mod error;
pub mod expr;
pub mod formulas;
pub mod graph;
pub mod graph6;
pub mod identities;
pub mod instances;
pub mod numbering;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Graph, SrgParams};
