//! Hiding messages in graph edge lists.
//!
//! BIND and BYMOND reorder the rows of an existing (cover) edge list so that
//! each row's degree-derived type spells out the message; BYNIS synthesizes
//! a fresh edge list whose node IDs carry the message bytes.

pub mod bynis;
pub mod classify;
pub mod codec;
pub mod edgelist;
pub mod error;
pub mod keyperm;
pub mod simulate;
pub mod stats;

pub use classify::{Algorithm, CapacityReport, EdgeType};
pub use codec::{decode, encode};
pub use edgelist::{EdgeList, ParseOptions};
pub use error::{Error, Result};
pub use keyperm::StegoKey;
