//! Exact computer algebra for the double cosets
//! GL_m(k[[z]]) \ GL_m(k((z))) / GL_m(k((z^2))) over odd prime fields:
//! normal forms, symmetric coweights, coset enumeration, the closed
//! q-polynomial formulas for the Hecke-module structure constants, and a
//! brute-force verification engine that checks every formula against
//! exhaustive coset counts.

pub mod combinatorics;
pub mod cosets;
pub mod coweight;
pub mod engine;
pub mod error;
pub mod field;
pub mod formulas;
pub mod laurent;
pub mod matrix;
pub mod qpoly;
pub mod reduce;
pub mod series;
pub mod shapes;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use laurent::LaurentPoly;
pub use matrix::LMatrix;
pub use qpoly::QPoly;
pub use series::TruncSeries;
pub use shapes::{Partition, SymCoweight};
