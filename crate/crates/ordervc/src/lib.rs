//! Order-compatibility toolkit: exact VC-dimension computation for families
//! of partial and total orders on `[n]`, shattered-set constructions with
//! flip-strategy witnesses, and certificate-level verification.
//!
//! Two orders are compatible when the union of their strict relations is
//! acyclic, i.e. some partial order refines both. Grounding one family on
//! another through this relation turns each order into a set (the orders
//! compatible with it), and the usual notions of traces, shattering and
//! VC-dimension apply.

mod error;
mod graph;
mod order;
mod rng;

pub mod construct;
pub mod dot;
pub mod enumerate;
pub mod json;
pub mod shatter;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, MAX_VERTICES};
pub use order::{OrderRelation, TotalOrder};
pub use rng::SplitMix64;
