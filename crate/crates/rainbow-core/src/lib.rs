//! Rainbow copies of trees in locally k-bounded edge-colourings of `K_n`.
//!
//! The crate provides explicit and implicit colourings, tree splitting,
//! rainbow matching and star search by switching, length-3 path connection,
//! a layered randomized embedding pipeline with exact fallbacks, and the
//! packing, labelling and double-cover constructions built on top of it.

pub mod apps;
pub mod colouring;
pub mod embed;
pub mod error;
pub mod generators;
pub mod group;
pub mod io;
pub mod matching;
pub mod paths;
pub mod rng;
pub mod stars;
pub mod stats;
pub mod tree;
pub mod verify;

pub use colouring::{ColourId, ColourSet, EdgeColouring, VertexId, VertexSet};
pub use error::{Error, Result};
pub use group::GroupSpec;
pub use tree::Tree;
