//! Restricted-input-queue ("rique") linear layouts.
//!
//! A rique inserts at its head and removes at either end. This crate
//! validates rique layouts, computes rique-numbers by exhaustive search or a
//! SAT encoding, recognizes graphs with a strongly one-sided Hamiltonian path
//! (fixed embedding and over all planar embeddings), and provides the density
//! and complete-graph bounds together with an explicit construction.

pub mod blockcut;
pub mod bounds;
pub mod bridge;
pub mod corpus;
pub mod formats;
pub mod graph;
pub mod layout;
pub mod plane;
pub mod planarity;
pub mod rotation;
pub mod search;
pub mod spqr;

pub use graph::{Edge, Graph, GraphError};
pub use layout::{LinearLayout, PatternWitness, VertexOrder};
pub use rotation::RotationSystem;
