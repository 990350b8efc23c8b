use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::dist::Distribution;
use crate::error::PaError;

pub type StateId = usize;
pub type TransitionId = usize;

/// Action label; `Tau` is the distinguished unobservable action.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Tau,
    Visible(String),
}

impl Label {
    /// `"tau"` maps to [`Label::Tau`], anything else is visible.
    pub fn parse(text: &str) -> Label {
        if text == "tau" {
            Label::Tau
        } else {
            Label::Visible(text.to_string())
        }
    }

    pub fn visible(name: impl Into<String>) -> Label {
        Label::Visible(name.into())
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Label::Tau)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Tau => f.write_str("tau"),
            Label::Visible(name) => f.write_str(name),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub dist: Distribution,
}

impl Transition {
    /// True for a tau transition with a Dirac target.
    pub fn is_tau_dirac(&self) -> bool {
        self.label.is_tau() && self.dist.is_dirac()
    }
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {:?}", self.source, self.label, self.dist)
    }
}

/// A finite probabilistic automaton. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct Pa {
    names: Vec<String>,
    initial: StateId,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<TransitionId>>,
}

impl Pa {
    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn transition(&self, t: TransitionId) -> &Transition {
        &self.transitions[t]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transition ids leaving `s`, in insertion order.
    pub fn outgoing(&self, s: StateId) -> &[TransitionId] {
        &self.outgoing[s]
    }

    pub fn enabled_transitions(&self, s: StateId) -> Result<&[TransitionId], PaError> {
        self.outgoing
            .get(s)
            .map(Vec::as_slice)
            .ok_or(PaError::UnknownState(s))
    }

    /// Labels occurring in the automaton, always including tau.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut labels: BTreeSet<Label> =
            self.transitions.iter().map(|t| t.label.clone()).collect();
        labels.insert(Label::Tau);
        labels
    }

    pub fn check_state(&self, s: StateId) -> Result<(), PaError> {
        if s < self.names.len() {
            Ok(())
        } else {
            Err(PaError::UnknownState(s))
        }
    }

    /// Disjoint union of two automata. States of `b` are shifted by `a.num_states()` and
    /// renamed with a `'` suffix on collisions; the initial state of the union is `a`'s.
    pub fn disjoint_union(a: &Pa, b: &Pa) -> (Pa, usize) {
        let offset = a.num_states();
        let mut builder = PaBuilder::new();
        for name in &a.names {
            builder.add_state(name.clone()).expect("names of a PA are unique");
        }
        for name in &b.names {
            let mut candidate = name.clone();
            while builder.state_id(&candidate).is_some() {
                candidate.push('\'');
            }
            builder.add_state(candidate).expect("fresh name");
        }
        for t in &a.transitions {
            builder.add_transition(t.source, t.label.clone(), t.dist.clone());
        }
        for t in &b.transitions {
            builder.add_transition(t.source + offset, t.label.clone(), t.dist.map(|s| s + offset));
        }
        builder.set_initial(a.initial);
        (builder.build().expect("union of valid PAs is valid"), offset)
    }

    /// Restriction to the states reachable from the initial state, renumbered in BFS order.
    pub fn reachable_part(&self) -> Pa {
        let mut order = vec![self.initial];
        let mut index = vec![usize::MAX; self.num_states()];
        index[self.initial] = 0;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for &t in &self.outgoing[s] {
                for &succ in self.transitions[t].dist.support() {
                    if index[succ] == usize::MAX {
                        index[succ] = order.len();
                        order.push(succ);
                    }
                }
            }
        }
        let mut builder = PaBuilder::new();
        for &s in &order {
            builder.add_state(self.names[s].clone()).expect("unique names");
        }
        for &s in &order {
            for &t in &self.outgoing[s] {
                let tr = &self.transitions[t];
                builder.add_transition(index[s], tr.label.clone(), tr.dist.map(|x| index[*x]));
            }
        }
        builder.set_initial(0);
        builder.build().expect("reachable part of a valid PA is valid")
    }
}

impl fmt::Debug for Pa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::fixture::write_fixture(self))
    }
}

/// Incremental construction of a [`Pa`]. Identical transitions are stored once.
#[derive(Default)]
pub struct PaBuilder {
    names: Vec<String>,
    by_name: HashMap<String, StateId>,
    initial: Option<StateId>,
    transitions: Vec<Transition>,
    seen: HashMap<Transition, TransitionId>,
}

impl PaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId, PaError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(PaError::DuplicateState(name));
        }
        let id = self.names.len();
        self.by_name.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    /// Returns the id of `name`, creating the state if needed.
    pub fn state(&mut self, name: &str) -> StateId {
        match self.by_name.get(name) {
            Some(&id) => id,
            None => self.add_state(name).expect("checked absent"),
        }
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.by_name.get(name).copied()
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn set_initial(&mut self, s: StateId) {
        self.initial = Some(s);
    }

    /// Adds a transition, returning its id. A transition equal to an existing one is not
    /// duplicated and the existing id is returned.
    pub fn add_transition(&mut self, source: StateId, label: Label, dist: Distribution) -> TransitionId {
        let tr = Transition { source, label, dist };
        if let Some(&id) = self.seen.get(&tr) {
            return id;
        }
        let id = self.transitions.len();
        self.seen.insert(tr.clone(), id);
        self.transitions.push(tr);
        id
    }

    pub fn build(self) -> Result<Pa, PaError> {
        let n = self.names.len();
        let initial = self.initial.ok_or(PaError::NoInitial)?;
        if initial >= n {
            return Err(PaError::UnknownState(initial));
        }
        let mut outgoing = vec![Vec::new(); n];
        for (id, t) in self.transitions.iter().enumerate() {
            if t.source >= n {
                return Err(PaError::UnknownState(t.source));
            }
            if let Some(&bad) = t.dist.support().find(|&&s| s >= n) {
                return Err(PaError::UnknownState(bad));
            }
            outgoing[t.source].push(id);
        }
        Ok(Pa { names: self.names, initial, transitions: self.transitions, outgoing })
    }
}
