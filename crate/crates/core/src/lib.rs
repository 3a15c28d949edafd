//! Cheeger constants and maximal Cheeger sets of planar domains bounded by
//! segments and circular arcs, computed from inner parallel sets, together
//! with builders for sharp-regularity example domains and a raster oracle
//! that cross-checks every exact computation.

pub mod arcgeom;
pub mod cli;
pub mod cantor;
pub mod cmcprofile;
pub mod constructions;
pub mod error;
pub mod gridoracle;
pub mod report;
pub mod solver;
pub mod svg;

pub use error::{Error, Result};
