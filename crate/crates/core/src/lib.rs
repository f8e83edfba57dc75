//! Khovanov homology of oriented ribbon graphs.
//!
//! Ribbon graphs are stored as rotation systems. The crate builds the
//! hypercube complex of spanning subgraphs, computes its homology exactly
//! through Smith normal form, enumerates spanning quasi-trees with their
//! activity gradings, and converts classical PD codes into all-A ribbon
//! graphs.

#![allow(clippy::needless_range_loop)]

pub mod arrows;
pub mod complex;
mod error;
pub mod homology;
pub mod links;
pub mod moves;
pub mod quasitree;
pub mod ribbon;
pub mod snf;

pub use arrows::{ArrowPresentation, Direction};
pub use complex::{BigradedComplex, EdgeAssignment};
pub use error::{Error, Result};
pub use homology::{BigradedGroup, GroupEntry, LaurentPoly};
pub use links::{PdCode, SignCount};
pub use quasitree::{ChordDiagram, QuasiTreeRecord, ResolutionLeaf};
pub use ribbon::{Basepoint, BoundaryWalkSet, EdgeClass, RibbonGraph};
