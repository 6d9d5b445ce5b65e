//! Two engines behind one workbench:
//!
//! * a numeric engine that builds transition-function cocycles, partitions of
//!   unity, connections and curvature over a small catalog of manifolds and
//!   computes Chern character forms both from curvature and from the
//!   projector presentation of a bundle;
//! * an exact engine that computes, over the rationals, the universal
//!   differential envelope of a finite-dimensional algebra, its graded
//!   commutator quotient, Hochschild and cyclic homology, the Connes B map,
//!   and the algebraic Chern character of idempotents.
//!
//! Everything numeric is sampled on deterministic grids and reported as
//! residuals against fixed thresholds; everything algebraic is exact.

pub mod chern;
pub mod cocycle;
pub mod connection;
pub mod error;
pub mod expr;
pub mod forms;
pub mod geometry;
pub mod linalg;
pub mod report;

pub use chern::{ChernForm, ProjectorField};
pub use cocycle::{Cocycle, CoboundaryWitness};
pub use connection::{Connection, Curvature};
pub use error::CoreError;
pub use expr::{EvalError, Expr, ParseError, Var};
pub use forms::{DForm, FormMat, MatrixForm};
pub use geometry::{integrate, Atlas, ManifoldId, PartitionOfUnity};
