//! On-the-fly generation of the reachable automaton of a linear process equation, with
//! optional confluence reduction.
//!
//! Reduction replaces each state by a representative found by following confluent
//! summands: the lowest-numbered enabled one, step by step, until no confluent summand
//! is enabled. When that walk runs into a cycle, the whole confluent subgraph below the
//! start is searched for terminal components and the lexicographically smallest
//! valuation of the chosen one is taken.
//!
//! Two storage disciplines are offered. [`Mode::ExpandViaRepresentative`] stores the
//! states reached by exploration and gives each the transitions of its representative,
//! targets unresolved; this is the accounting that reproduces the published leader
//! election figures. [`Mode::Canonical`] stores representatives only and resolves
//! every target, which yields the quotient by the representation map.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use lppe::{render_state, state_transitions, Generated, Limits, LppeError, Spec, State};
use pa_core::graph::{tarjan_scc, terminal_sccs};
use pa_core::{Distribution, Label, Pa, PaBuilder};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    ExpandViaRepresentative,
    Canonical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Order {
    #[default]
    BreadthFirst,
    DepthFirst,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub order: Order,
    pub limits: Limits,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    pub states: usize,
    pub transitions: usize,
    /// Stored states plus the states passed through while resolving representatives.
    pub visited_states: usize,
    /// Stored transitions plus the confluent steps taken while resolving.
    pub visited_transitions: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error(transparent)]
    Lppe(#[from] LppeError),
    #[error("state space exceeds the cap of {cap} states ({} states, {} transitions stored so far)", partial.states, partial.transitions)]
    StateCap { cap: usize, partial: GenStats },
    #[error("summand {summand} was marked confluent but generates a non-tau or probabilistic transition in state {state}")]
    NotDeterministic { summand: usize, state: String },
}

/// Generated state space. `states[k]` is the valuation of state `k`, `origins[t]` the
/// summands that generate transition `t`.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub pa: Pa,
    pub states: Vec<State>,
    pub origins: Vec<BTreeSet<usize>>,
    pub stats: GenStats,
}

/// Where a state's confluent steps lead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub representative: State,
    /// States traversed other than the start and the representative.
    pub intermediates: Vec<State>,
    /// Confluent transitions followed or examined.
    pub steps: usize,
}

fn confluent_step(spec: &Spec, t: &Generated, g: &State) -> Result<State, GenError> {
    match (&t.label, t.dist.dirac_target()) {
        (Label::Tau, Some(target)) => Ok(target.clone()),
        _ => Err(GenError::NotDeterministic { summand: t.summand + 1, state: render_state(spec, g) }),
    }
}

pub fn resolve(spec: &Spec, g: &State, confluent: &BTreeSet<usize>, limits: &Limits) -> Result<Resolution, GenError> {
    let mut path = vec![g.clone()];
    let mut on_path: HashSet<State> = HashSet::from([g.clone()]);
    loop {
        let cur = path.last().unwrap();
        let ts = state_transitions(spec, cur, limits)?;
        let Some(t) = ts.iter().find(|t| confluent.contains(&t.summand)) else {
            let representative = path.pop().unwrap();
            let intermediates = if path.is_empty() { Vec::new() } else { path.split_off(1) };
            let steps = intermediates.len() + usize::from(&representative != g);
            return Ok(Resolution { representative, intermediates, steps });
        };
        let next = confluent_step(spec, t, cur)?;
        if !on_path.insert(next.clone()) {
            return resolve_cyclic(spec, g, confluent, limits);
        }
        path.push(next);
    }
}

/// Searches every confluent step below `g` and picks the smallest valuation of the
/// terminal component that holds the smallest terminal valuation overall.
fn resolve_cyclic(spec: &Spec, g: &State, confluent: &BTreeSet<usize>, limits: &Limits) -> Result<Resolution, GenError> {
    let mut index: HashMap<State, usize> = HashMap::from([(g.clone(), 0)]);
    let mut nodes = vec![g.clone()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut steps = 0;
    let mut k = 0;
    while k < nodes.len() {
        let cur = nodes[k].clone();
        let mut out = Vec::new();
        for t in state_transitions(spec, &cur, limits)?.iter().filter(|t| confluent.contains(&t.summand)) {
            let next = confluent_step(spec, t, &cur)?;
            steps += 1;
            let id = *index.entry(next.clone()).or_insert_with(|| {
                nodes.push(next);
                nodes.len() - 1
            });
            out.push(id);
        }
        succ.push(out);
        k += 1;
    }
    let sccs = tarjan_scc(nodes.len(), &succ);
    let representative = terminal_sccs(nodes.len(), &succ, &sccs)
        .into_iter()
        .map(|c| sccs[c].iter().map(|&v| &nodes[v]).min().unwrap())
        .min()
        .unwrap()
        .clone();
    let intermediates = nodes.iter().filter(|s| *s != g && **s != representative).cloned().collect();
    Ok(Resolution { representative, intermediates, steps })
}

struct Explorer<'a> {
    spec: &'a Spec,
    confluent: &'a BTreeSet<usize>,
    options: &'a Options,
    index: HashMap<State, usize>,
    states: Vec<State>,
    builder: PaBuilder,
    origins: Vec<BTreeSet<usize>>,
    pending: VecDeque<usize>,
    passed: HashSet<State>,
    steps: usize,
    resolved: HashMap<State, State>,
    start: Instant,
}

impl Explorer<'_> {
    fn stats(&self) -> GenStats {
        let extra = self.passed.iter().filter(|s| !self.index.contains_key(*s)).count();
        GenStats {
            states: self.states.len(),
            transitions: self.origins.len(),
            visited_states: self.states.len() + extra,
            visited_transitions: self.origins.len() + self.steps,
            wall_time: self.start.elapsed(),
        }
    }

    fn intern(&mut self, s: &State) -> Result<usize, GenError> {
        if let Some(&id) = self.index.get(s) {
            return Ok(id);
        }
        let cap = self.options.limits.state_cap;
        if self.states.len() >= cap {
            return Err(GenError::StateCap { cap, partial: self.stats() });
        }
        let id = self.builder.add_state(render_state(self.spec, s)).expect("valuations are distinct");
        self.index.insert(s.clone(), id);
        self.states.push(s.clone());
        self.pending.push_back(id);
        Ok(id)
    }

    fn resolve(&mut self, s: &State) -> Result<State, GenError> {
        if self.confluent.is_empty() {
            return Ok(s.clone());
        }
        if let Some(r) = self.resolved.get(s) {
            return Ok(r.clone());
        }
        let res = resolve(self.spec, s, self.confluent, &self.options.limits)?;
        self.steps += res.steps;
        self.passed.extend(res.intermediates);
        if self.options.mode == Mode::Canonical {
            self.passed.insert(s.clone());
            self.passed.insert(res.representative.clone());
        }
        self.resolved.insert(s.clone(), res.representative.clone());
        Ok(res.representative)
    }

    fn run(mut self) -> Result<Exploration, GenError> {
        let canonical = self.options.mode == Mode::Canonical;
        let init = self.spec.initial_state();
        let init = if canonical { self.resolve(&init)? } else { init };
        self.intern(&init)?;
        loop {
            let next = match self.options.order {
                Order::BreadthFirst => self.pending.pop_front(),
                Order::DepthFirst => self.pending.pop_back(),
            };
            let Some(id) = next else { break };
            let s = self.states[id].clone();
            let rep = if canonical { s } else { self.resolve(&s)? };
            for t in state_transitions(self.spec, &rep, &self.options.limits)? {
                if self.confluent.contains(&t.summand) {
                    continue;
                }
                let mut entries = Vec::with_capacity(t.dist.len());
                for (target, p) in t.dist.iter() {
                    let target = if canonical { self.resolve(target)? } else { target.clone() };
                    entries.push((self.intern(&target)?, p.clone()));
                }
                let dist = Distribution::new(entries).expect("masses of a distribution");
                let tid = self.builder.add_transition(id, t.label, dist);
                if tid == self.origins.len() {
                    self.origins.push(BTreeSet::new());
                }
                self.origins[tid].insert(t.summand);
            }
        }
        let stats = self.stats();
        let mut builder = self.builder;
        builder.set_initial(0);
        Ok(Exploration { pa: builder.build().expect("targets are interned"), states: self.states, origins: self.origins, stats })
    }
}

pub fn explore(spec: &Spec) -> Result<Exploration, GenError> {
    explore_with(spec, &Options::default())
}

/// The full reachable state space; visited counts equal stored counts.
pub fn explore_with(spec: &Spec, options: &Options) -> Result<Exploration, GenError> {
    explore_reduced_with(spec, &BTreeSet::new(), options)
}

pub fn explore_reduced(spec: &Spec, confluent: &BTreeSet<usize>) -> Result<Exploration, GenError> {
    explore_reduced_with(spec, confluent, &Options::default())
}

/// Reduced generation. Soundness requires `confluent` to contain only summands whose
/// transitions are confluent, for instance the output of symbolic detection.
pub fn explore_reduced_with(spec: &Spec, confluent: &BTreeSet<usize>, options: &Options) -> Result<Exploration, GenError> {
    let explorer = Explorer {
        spec,
        confluent,
        options,
        index: HashMap::new(),
        states: Vec::new(),
        builder: PaBuilder::new(),
        origins: Vec::new(),
        pending: VecDeque::new(),
        passed: HashSet::new(),
        steps: 0,
        resolved: HashMap::new(),
        start: Instant::now(),
    };
    explorer.run()
}
