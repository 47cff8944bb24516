//! Finite-scale search for unavoidable induced subgraphs of 2-connected graphs.
//!
//! Every search result is a [`families::Certificate`] that can be checked
//! against the host graph independently of the search that produced it.

pub mod bridges_ties;
pub mod connecting_tree;
pub mod driver;
pub mod families;
pub mod graph;
pub mod io;
pub mod ladder;
pub mod oracle;
pub mod ramsey;

pub use families::{Certificate, FamilyTag};
pub use graph::{Graph, GraphError, VertexPath};
