//! Exact Temperley-Lieb standard modules, XXZ spin chains and the
//! intertwiner between them.

pub mod cli;
pub mod diagram;
pub mod error;
pub mod exact;
pub mod gmap;
pub mod intertwiner;
pub mod poly_matrix;
pub mod qnum;
pub mod report;
pub mod scalar;
pub mod special_links;
pub mod spectral;
pub mod spin;
pub mod standard;
pub mod structure;
pub mod sufficient;
pub mod suites;

pub use error::{Error, Result};
