//! Exact-arithmetic probabilistic automata.
//!
//! A [`Pa`] stores states and transitions under dense integer ids handed out in
//! insertion order, so every iteration in the workspace is deterministic.
//! Probabilities are [`Prob`] values (arbitrary precision rationals) and a
//! [`Distribution`] always sums to exactly one.

mod dist;
mod dot;
mod equiv;
mod error;
pub mod fixture;
pub mod graph;
mod iso;
mod pa;
mod path;

pub use dist::{parse_prob, Distribution, Prob, SubDistribution};
pub use dot::to_dot;
pub use equiv::{class_masses, dist_eq_mod_r, lift_dist, ClassId, EquivRel};
pub use error::PaError;
pub use iso::isomorphic;
pub use pa::{Label, Pa, PaBuilder, StateId, Transition, TransitionId};
pub use path::{trace, Path};

/// Shorthand for the Dirac distribution on `t`.
pub fn dirac(t: StateId) -> Distribution {
    Distribution::dirac(t)
}
