//! Graded noncommutative algebra toolkit: truncated rewriting, graded linear
//! algebra over degree slices, module computations and coherence testing for
//! free extensions and twisted tensor products.

pub mod algebra;
pub mod criterion;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod module;
pub mod parser;
pub mod pipeline;
pub mod poly;
pub mod presentation;
pub mod rewrite;
pub mod scalar;
pub mod twist;
pub mod word;

pub use algebra::GradedAlgebra;
pub use criterion::{CoherenceReport, FreeExtension, IdealProbe, ReportOptions, Status};
pub use error::{AlgebraError, Error, ParseError};
pub use linalg::{DegreeSlice, SparseVec};
pub use module::{BettiTable, FreeModule, GradedIdeal, GradedSubspace, ModulePresentation, Side};
pub use poly::NcPolynomial;
pub use presentation::{AlgebraPresentation, Generator};
pub use rewrite::{RewriteRule, RewriteSystem};
pub use scalar::{Field, Scalar};
pub use twist::{TensorElement, TwistOutcome, TwistSpec};
pub use word::{Letter, Word};
