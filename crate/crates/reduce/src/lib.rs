//! Quotient constructions.
//!
//! [`quotient`] collapses each class of an equivalence into one state. For a confluent
//! set, [`quotient_by_representatives`] instead keeps one representative per joinability
//! class, taken from the class's terminal component, and redirects every distribution to
//! representatives; the marked transitions disappear.

use std::fmt::Write as _;

use confluence::{joinability, ConfluentSet, JoinabilityResult};
use pa_core::graph::{reachable, tarjan_scc, terminal_sccs};
use pa_core::{EquivRel, Pa, PaBuilder, StateId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("no representation map: states {left} and {right} lie in different terminal components of one class")]
    NoRepresentationMap { left: StateId, right: StateId },
    #[error("representation map broken at state {state}: {reason}")]
    InvalidMap { state: StateId, reason: &'static str },
}

/// The automaton modulo `r`. Class `k` becomes state `k`, named after its members joined
/// with `|`; lifted transitions that coincide are stored once.
pub fn quotient(pa: &Pa, r: &EquivRel) -> Pa {
    let mut b = PaBuilder::new();
    for class in r.classes() {
        let names: Vec<&str> = class.iter().map(|&s| pa.name(s)).collect();
        b.add_state(names.join("|")).expect("member names are unique, so joined names are too");
    }
    for tr in pa.transitions() {
        b.add_transition(r.class_of(tr.source), tr.label.clone(), tr.dist.map(|&s| r.class_of(s)));
    }
    b.set_initial(r.class_of(pa.initial()));
    b.build().expect("class ids are declared states")
}

/// A map sending every state to a representative it reaches by marked steps, constant
/// along marked steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationMap {
    repr: Vec<StateId>,
}

impl RepresentationMap {
    /// Accepts `repr` only if it satisfies both conditions with respect to `c`.
    pub fn new(c: &ConfluentSet, repr: Vec<StateId>) -> Result<Self, ReduceError> {
        let map = RepresentationMap { repr };
        map.validate(c)?;
        Ok(map)
    }

    pub fn validate(&self, c: &ConfluentSet) -> Result<(), ReduceError> {
        let graph = c.graph();
        if graph.len() != self.repr.len() {
            return Err(ReduceError::InvalidMap { state: graph.len().min(self.repr.len()), reason: "wrong domain size" });
        }
        for (s, succ) in graph.iter().enumerate() {
            if succ.iter().any(|&t| self.repr[t] != self.repr[s]) {
                return Err(ReduceError::InvalidMap { state: s, reason: "a marked step changes the representative" });
            }
            if !reachable(s, graph).contains(&self.repr[s]) {
                return Err(ReduceError::InvalidMap { state: s, reason: "representative not reachable by marked steps" });
            }
        }
        Ok(())
    }

    pub fn repr(&self, s: StateId) -> StateId {
        self.repr[s]
    }

    pub fn as_slice(&self) -> &[StateId] {
        &self.repr
    }

    /// Distinct representatives in increasing id order.
    pub fn representatives(&self) -> Vec<StateId> {
        let mut reps: Vec<StateId> = self.repr.clone();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// One `state -> representative` line per state.
    pub fn table(&self, pa: &Pa) -> String {
        let mut out = String::new();
        for (s, &r) in self.repr.iter().enumerate() {
            writeln!(out, "{} -> {}", pa.name(s), pa.name(r)).expect("writing to a String");
        }
        out
    }
}

/// Picks the smallest state of the unique terminal component of every joinability class.
pub fn representation_map(pa: &Pa, c: &ConfluentSet) -> Result<RepresentationMap, ReduceError> {
    let r = match joinability(pa, c) {
        JoinabilityResult::Relation(r) => r,
        JoinabilityResult::Counterexample { left, right } => {
            return Err(ReduceError::NoRepresentationMap { left, right })
        }
    };
    let n = pa.num_states();
    let sccs = tarjan_scc(n, c.graph());
    let mut rep_of_class = vec![usize::MAX; r.num_classes()];
    for k in terminal_sccs(n, c.graph(), &sccs) {
        let min = *sccs[k].iter().min().expect("components are non-empty");
        rep_of_class[r.class_of(min)] = min;
    }
    let repr = pa.states().map(|s| rep_of_class[r.class_of(s)]).collect();
    RepresentationMap::new(c, repr)
}

/// The automaton modulo `map`: states are the representatives (keeping their names, in id
/// order) and every unmarked transition of any state is redirected to representatives.
pub fn quotient_by_map(pa: &Pa, c: &ConfluentSet, map: &RepresentationMap) -> Pa {
    build_reduced(pa, c, map, |_| true)
}

/// Like [`quotient_by_map`], but only the representatives' own transitions are kept.
/// This is what on-the-fly generation produces. For a confluent set it can only lack tau
/// transitions that stay inside their class, which become self-loops in the full quotient.
pub fn quotient_by_map_direct(pa: &Pa, c: &ConfluentSet, map: &RepresentationMap) -> Pa {
    build_reduced(pa, c, map, |s| map.repr(s) == s)
}

pub fn quotient_by_representatives(pa: &Pa, c: &ConfluentSet) -> Result<Pa, ReduceError> {
    Ok(quotient_by_map(pa, c, &representation_map(pa, c)?))
}

fn build_reduced(pa: &Pa, c: &ConfluentSet, map: &RepresentationMap, keep_source: impl Fn(StateId) -> bool) -> Pa {
    let reps = map.representatives();
    let mut index = vec![usize::MAX; pa.num_states()];
    let mut b = PaBuilder::new();
    for &rep in &reps {
        index[rep] = b.add_state(pa.name(rep)).expect("original names are unique");
    }
    for (id, tr) in pa.transitions().iter().enumerate() {
        if c.contains(id) || !keep_source(tr.source) {
            continue;
        }
        b.add_transition(index[map.repr(tr.source)], tr.label.clone(), tr.dist.map(|&s| index[map.repr(s)]));
    }
    b.set_initial(index[map.repr(pa.initial())]);
    b.build().expect("representatives are declared")
}
