pub mod cayley_dickson;
pub mod cli;
pub mod clifford;
pub mod document;
pub mod error;
pub mod forge;
pub mod identities;
pub mod numerics;
pub mod symmetry;
pub mod table;

pub use error::{Error, Result};
pub use numerics::{CMat, Tolerance};
pub use table::{AlgebraElement, Constants, Provenance, StructureTable};
