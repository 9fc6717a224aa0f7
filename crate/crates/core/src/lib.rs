//! Completely independent spanning trees (CISTs) in RCube data-center logic
//! graphs, protection routings built from them, and Monte-Carlo estimates of
//! transmission failure rates under node faults.

pub mod address;
pub mod cist;
pub mod error;
pub mod io;
pub mod protection;
pub mod simulate;
pub mod topology;
pub mod tree;
pub mod verify;

pub use address::{Address, VertexClass};
pub use cist::{cists_complete_graph, cists_rcube, cists_rcube_order1, CistSet};
pub use error::{Error, Result};
pub use protection::{
    build_mpr, configure_pair, configure_protection_routing, forward, verify_protected, FaultSet,
    ForwardMode, ProtectionRouting, RouteOutcome, WalkScratch,
};
pub use topology::{LogicGraph, Params, VertexId};
pub use tree::Tree;
pub use verify::{verify_cists_characterization, verify_cists_definitional, VerificationReport};
