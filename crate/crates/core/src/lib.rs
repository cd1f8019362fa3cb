//! Reasoning about categories with RS-frames: formal contexts, concept
//! lattices, agent relations and the lattice-based modal logic they model.

pub mod bits;
pub mod cli;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod lattice;
pub mod logic;
pub mod modal;
pub mod rscheck;
pub mod social;
pub mod translation;

pub use context::{FeatureSet, FormalContext, ObjectSet};
pub use error::{Error, Result, Sort};
pub use lattice::{Concept, ConceptLattice};
pub use modal::{AgentId, AgentRelation, RsFrame};
