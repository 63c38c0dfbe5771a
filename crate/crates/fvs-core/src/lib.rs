//! Local search for feedback vertex set on sparse graph classes, together
//! with the verification machinery used to audit it: exact oracles for
//! small instances, exchange-graph construction and checking, balanced
//! r-divisions, instance generators (including counterexample families for
//! related problems), and an exact planarization reduction for drawings
//! with crossings.
//!
//! All graphs are immutable values with stable vertex ids; every operation
//! that "modifies" a graph returns a new one. All randomness is funneled
//! through caller-provided seeds, and every search/tie-break is
//! deterministic, so runs are reproducible.

pub mod division;
pub mod error;
pub mod exchange;
pub mod geometry;
pub mod graph;
pub mod instances;
pub mod io;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Cycle, Graph, VertexId};
