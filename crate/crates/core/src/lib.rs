pub mod algebra;
pub mod error;

pub use algebra::{Field, Rational, Scalar, SparseMatrix, SparseVec};
pub use error::{Error, Result};
pub mod complex;

pub use complex::{FilteredComplex, Flavor, Generator, IntervalModule, Level};
pub mod cospan;
pub mod strip;

pub use cospan::{standard_summand, CospanMorphism, FilteredCospan, Summand};
pub use strip::{Homeomorphism, Region, Strip, StripPoint};
pub mod decompose;

pub use decompose::{decompose, Decomposition};
pub mod diagram;
pub use diagram::{barcode_of, bottleneck, diagram_of, hemidistance, Barcode, Diagram, Matching};
pub mod oracle;
pub mod simplicial;
pub use simplicial::{build_pinned_cospan, SimplicialInput};
pub mod io;
pub mod sample;
