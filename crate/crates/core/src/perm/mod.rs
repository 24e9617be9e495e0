//! Permutation groups: stabilizer chains, orbits, stabilizers, induced
//! actions, minimal normal subgroups and randomized subgroup search.
//!
//! Points are 0-indexed. Every derived domain is kept sorted by label so the
//! results of all operations are reproducible.

mod action;
mod chain;
mod group;
mod permutation;
mod subgroups;

pub use action::{act_on_set, induced_action, orbit, orbit_closure, ActionRule, Closure, FixedDomain, GroupAction};
pub use chain::StabChain;
pub use group::{load_group_json, GroupFile, PermutationGroup};
pub use permutation::Permutation;
pub use subgroups::{
    minimal_normal_subgroups, prime_order_normal_closures, stabilizer, stabilizer_of_label, subgroup_search, SearchLog,
    SearchOutcome, StabilizerMode, SubgroupPredicate, DEFAULT_NORMAL_BOUND,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list is not a bijection")]
    NotBijection,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {0} outside the domain")]
    PointOutOfRange(usize),
    #[error("label outside the action domain")]
    OutsideDomain,
    #[error("domain labels must be sorted and distinct")]
    UnsortedDomain,
    #[error("{images} generator images supplied for {generators} generators")]
    ActionArity { generators: usize, images: usize },
    #[error("domain is not closed under generator {generator}")]
    NotClosed { generator: usize },
    #[error("action rule is not a homomorphism on sampled generator pairs")]
    NotHomomorphism,
    #[error("point set is not invariant under the group")]
    NotInvariant,
    #[error("group order {order} exceeds the configured bound {bound}")]
    Capacity { order: u128, bound: u128 },
    #[error("expected order {expected}, computed {found}")]
    OrderMismatch { expected: u128, found: u128 },
    #[error("bad search predicate: {0}")]
    BadPredicate(String),
    #[error("malformed group file: {0}")]
    Parse(String),
}

#[cfg(test)]
mod tests;
