//! Strictly Deza Cayley graphs over `D_{2k} x C_2 x C_2` and the machinery
//! to verify them exactly: table-based groups, the integer group ring,
//! S-ring closure, 2-dimensional Weisfeiler-Leman refinement, Deza and
//! divisible-design checks, and certified integral spectra.

pub mod error;
pub mod graphs;
pub mod group;
pub mod groupring;
pub mod report;
pub mod spectrum;
pub mod sring;
pub mod wl;

pub use error::{Error, Result};
pub use graphs::{cayley_graph, grid_graph, Graph};
pub use group::{Elem, Group, Section, Subgroup};
pub use groupring::{connection_set, GroupRingElement};
pub use sring::{wl_closure, SRingPartition};
