//! Chromatic simplicial complexes, standard chromatic subdivisions and the
//! bounded iterated immediate snapshot model.
//!
//! The pipeline: build `Ch^r` of an input complex ([`subdivision`]), count
//! its faces by recurrence ([`fvector`]), synthesize per-round encodings by
//! coloring indistinguishability graphs ([`distinguishability`]), and check
//! by exhaustive simulation that bounded rounds reproduce `Ch^r`
//! ([`protocol`], [`iso`]).

pub mod agreement;
pub mod complex;
pub mod distinguishability;
pub mod error;
pub mod fvector;
pub mod io;
pub mod iso;
pub mod partition;
pub mod protocol;
pub mod random;
pub mod subdivision;

pub use complex::{ChromaticComplex, Color, FVector, FaceSet, Simplex, Vertex, VertexId};
pub use distinguishability::{Encoding, EncodingSchedule, IndistGraph};
pub use error::{Error, Result, Witness};
pub use iso::chromatic_iso;
pub use subdivision::{chromatic_subdivide, iterate_subdivide, IteratedSubdivision, Limits, Subdivision};
