//! Scheduler semantics and branching probabilistic bisimulation.
//!
//! [`final_distribution`] and [`path_probability`] evaluate a concrete finite scheduler.
//! [`decide_weak_branching_step`] answers whether some scheduler realises a branching
//! step and returns a flow certificate; [`coarsest_branching_bisim`] builds on it.

mod bisim;
mod scheduler;
pub mod simplex;
mod weak_step;

use thiserror::Error;

pub use bisim::{check_bisimulation, coarsest_branching_bisim, pa_bisimilar, refine_once};
pub use scheduler::{
    final_distribution, final_distribution_with, path_probability, Choice, EnumerationLimits,
    FiniteScheduler,
};
pub use weak_step::{
    decide_weak_branching_step, decide_weak_branching_step_mod_r, validate_witness,
    validate_witness_mod_r, WeakStepWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedError {
    #[error("scheduler choice sums to {0}, expected 1")]
    ChoiceNotNormalized(String),
    #[error("transition {transition} does not leave state {state}")]
    ForeignTransition { transition: usize, state: usize },
    #[error("scheduler induces too many or too long paths ({explored} explored, length {length})")]
    NotFinitelyEnumerable { explored: usize, length: usize },
    #[error(transparent)]
    Pa(#[from] pa_core::PaError),
}
