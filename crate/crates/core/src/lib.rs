//! Finite-domain constraint kernel built around a generalised-arc-consistent
//! propagator for the multiset ordering constraint.
//!
//! Everything is generic over the integer value type ([`Value`]); the
//! aliases at the bottom of this file fix it to `i64`, which is what the
//! command-line tools use.

pub mod engine;
mod error;
pub mod mset;
pub mod oracle;
pub mod propagators;
pub mod store;
mod value;

pub use engine::{EngineOutcome, Model, SearchStats};
pub use error::{Error, Result};
pub use mset::{mset_compare, MsetOrdering, OccurrenceVector, ValueRange};
pub use propagators::{
    LexLeq, MsetOrderingConstraint, PropagationOutcome, Propagator, SumEq, SumGeq,
};
pub use store::{Domain, DomainStore, MarkToken, PruneResult, VarId};
pub use value::Value;

pub type Range = ValueRange<i64>;
pub type Mset = OccurrenceVector<i64>;
pub type Store = DomainStore<i64>;
pub type IntDomain = Domain<i64>;
pub type MsetOrd = MsetOrderingConstraint<i64>;
pub type IntModel = Model<i64>;
