//! Exact computations with determinantal nodal sextic surfaces in P^3 over
//! prime fields: symmetric presentations, singular loci, even sets of nodes,
//! defects and obstruction certificates.

pub mod bundle;
pub mod codes;
pub mod cohomology;
pub mod complex;
pub mod defect;
pub mod determinantal;
pub mod error;
pub mod ideal;
pub mod pipeline;
pub mod poly;

pub use error::{Error, Result};
