//! Construction, counting, and arc-disjoint packing of directed 4-cycles in
//! balanced orientations of complete bipartite graphs and in regular
//! tournaments, plus exact distance computations in the interchange graphs
//! of fixed-margin 0/1 matrix classes.

pub mod census;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod interchange;
pub mod model;
pub mod packing;
pub mod partition;
pub mod report;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use model::{ArcRef, BipartiteTournament, RegularTournament, ValidationReport};
