//! Support code shared by the `gfmredux` binary and its acceptance suite.

pub mod bench;
pub mod routes;
