//! Graphs with a horizon set, subdivisions, Eulerian machinery and
//! isoperimetric quantities.
//!
//! A finite graph stands in for an infinite one by marking a set of horizon
//! vertices: "connected to infinity" means "connected to the horizon".
//! Horizon vertices never belong to the sets under study and absorb random
//! walks.

mod connected;
mod euler;
mod generators;
mod graph;
mod io;
mod iso;
mod sets;
mod subdivision;

pub use connected::{all_connected_sets, for_each_connected_set};
pub use euler::{euler_circuit, euler_circuit_with_edges, eulerian_from_two_trees, Multigraph};
pub use generators::{Family, HorizonSpec};
pub use graph::{EdgeId, Graph, Target, VertexId};
pub use io::load_graph;
pub use iso::{iso_profile, weight, IsoMode, SUBSET_CAP};
pub use sets::{EdgeSet, UnionFind, VertexSet};
pub use subdivision::{subdivide, SubdivisionMap};
