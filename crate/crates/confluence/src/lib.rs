//! Confluence of designated tau transitions.
//!
//! A [`ConfluentSet`] marks some tau transitions with Dirac targets. The three checkers
//! decide weak, plain and strong probabilistic confluence of such a set; the first two
//! need the joinability relation, which [`joinability`] computes from the terminal SCCs of
//! the marked subgraph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use pa_core::graph::{component_index, tarjan_scc, terminal_sccs, weak_components};
use pa_core::{ClassId, Distribution, EquivRel, Label, Pa, Prob, StateId, TransitionId};
use thiserror::Error;

pub mod suite;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfluenceError {
    #[error("transition {0} is not a tau transition with a Dirac target")]
    NotTauDirac(TransitionId),
    #[error("unknown transition id {0}")]
    UnknownTransition(TransitionId),
}

/// A set of tau transitions with Dirac targets, identified by transition id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluentSet {
    members: BTreeSet<TransitionId>,
    /// `succ[s]`: sorted targets of marked transitions leaving `s`.
    succ: Vec<Vec<StateId>>,
}

impl ConfluentSet {
    pub fn new(pa: &Pa, members: impl IntoIterator<Item = TransitionId>) -> Result<Self, ConfluenceError> {
        let members: BTreeSet<TransitionId> = members.into_iter().collect();
        let mut succ = vec![Vec::new(); pa.num_states()];
        for &t in &members {
            if t >= pa.num_transitions() {
                return Err(ConfluenceError::UnknownTransition(t));
            }
            let tr = pa.transition(t);
            let Some(&target) = tr.dist.dirac_target().filter(|_| tr.label.is_tau()) else {
                return Err(ConfluenceError::NotTauDirac(t));
            };
            succ[tr.source].push(target);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(ConfluentSet { members, succ })
    }

    pub fn empty(pa: &Pa) -> Self {
        ConfluentSet { members: BTreeSet::new(), succ: vec![Vec::new(); pa.num_states()] }
    }

    /// Every tau transition with a Dirac target.
    pub fn all_tau_dirac(pa: &Pa) -> Self {
        let ids = (0..pa.num_transitions()).filter(|&t| pa.transition(t).is_tau_dirac());
        Self::new(pa, ids).expect("filtered to tau/Dirac")
    }

    pub fn members(&self) -> &BTreeSet<TransitionId> {
        &self.members
    }

    pub fn contains(&self, t: TransitionId) -> bool {
        self.members.contains(&t)
    }

    pub fn union(&self, pa: &Pa, other: &ConfluentSet) -> ConfluentSet {
        Self::new(pa, self.members.iter().chain(other.members.iter()).copied()).expect("both valid")
    }

    /// Successors of `s` along marked transitions.
    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.succ[s]
    }

    pub fn has_edge(&self, s: StateId, t: StateId) -> bool {
        self.succ[s].binary_search(&t).is_ok()
    }

    pub fn graph(&self) -> &[Vec<StateId>] {
        &self.succ
    }
}

/// Either the joinability relation or two terminal components that share a weak component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinabilityResult {
    Relation(EquivRel),
    Counterexample { left: StateId, right: StateId },
}

impl JoinabilityResult {
    pub fn relation(&self) -> Option<&EquivRel> {
        match self {
            JoinabilityResult::Relation(r) => Some(r),
            JoinabilityResult::Counterexample { .. } => None,
        }
    }
}

/// Joinability is an equivalence exactly when every weak component of the marked graph has
/// a single terminal SCC; the relation is then the partition into weak components.
pub fn joinability(pa: &Pa, c: &ConfluentSet) -> JoinabilityResult {
    let n = pa.num_states();
    let sccs = tarjan_scc(n, &c.succ);
    let comp = component_index(n, &sccs);
    let terminal = terminal_sccs(n, &c.succ, &sccs);
    let weak = weak_components(n, &c.succ);
    let mut weak_of = vec![0; n];
    for (i, members) in weak.iter().enumerate() {
        for &s in members {
            weak_of[s] = i;
        }
    }
    let mut seen: Vec<Option<StateId>> = vec![None; weak.len()];
    for &k in &terminal {
        let rep = sccs[k][0];
        let w = weak_of[rep];
        if let Some(other) = seen[w] {
            let (left, right) = (other.min(rep), other.max(rep));
            return JoinabilityResult::Counterexample { left, right };
        }
        seen[w] = Some(rep);
    }
    debug_assert!(terminal.iter().all(|&k| comp[sccs[k][0]] == k));
    JoinabilityResult::Relation(EquivRel::from_keys(&weak_of))
}

/// `mu ⇝ nu`: the support of `mu` splits into blocks, one per support state `t` of `nu`,
/// each of mass `nu(t)` and each stepping to `t` by a marked transition.
pub fn equiv_up_to_tauc(c: &ConfluentSet, mu: &Distribution, nu: &Distribution) -> bool {
    let mut xs: Vec<(StateId, Prob)> = mu.iter().map(|(&s, p)| (s, p.clone())).collect();
    xs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let ys: Vec<StateId> = nu.support().copied().collect();
    let mut remaining: Vec<Prob> = nu.iter().map(|(_, p)| p.clone()).collect();
    let compatible: Vec<Vec<usize>> =
        xs.iter().map(|(x, _)| (0..ys.len()).filter(|&j| c.has_edge(*x, ys[j])).collect()).collect();
    if compatible.iter().any(Vec::is_empty) {
        return false;
    }
    assign(&xs, &compatible, &mut remaining, 0)
}

fn assign(xs: &[(StateId, Prob)], compatible: &[Vec<usize>], remaining: &mut [Prob], i: usize) -> bool {
    if i == xs.len() {
        return remaining.iter().all(|r| r == &Prob::from_integer(0.into()));
    }
    // Bound: each target must still be fillable from the unassigned sources that reach it.
    for (j, need) in remaining.iter().enumerate() {
        let available: Prob = (i..xs.len()).filter(|&k| compatible[k].contains(&j)).map(|k| xs[k].1.clone()).sum();
        if &available < need {
            return false;
        }
    }
    for &j in &compatible[i] {
        if remaining[j] >= xs[i].1 {
            remaining[j] -= &xs[i].1;
            let ok = assign(xs, compatible, remaining, i + 1);
            remaining[j] += &xs[i].1;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Why a set fails a confluence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Joinability is not an equivalence: `left` and `right` lie in distinct terminal SCCs of
    /// one weak component.
    NotJoinable { left: StateId, right: StateId },
    /// Transition `transition` of `path[0]` is not mimicked at `path.last()`.
    Unmatched { path: Vec<StateId>, transition: TransitionId },
}

impl Violation {
    /// Stable single-line rendering with state names.
    pub fn render(&self, pa: &Pa) -> String {
        match self {
            Violation::NotJoinable { left, right } => format!(
                "not joinable: {} and {} reach different terminal components",
                pa.name(*left),
                pa.name(*right)
            ),
            Violation::Unmatched { path, transition } => {
                let names: Vec<&str> = path.iter().map(|&s| pa.name(s)).collect();
                let tr = pa.transition(*transition);
                format!("path {} : transition #{transition} {} -{}-> {} is not mimicked", names.join(" -tau_c-> "), pa.name(tr.source), tr.label, render_dist(pa, &tr.dist))
            }
        }
    }
}

fn render_dist(pa: &Pa, d: &Distribution) -> String {
    let parts: Vec<String> = d.iter().map(|(s, p)| format!("{}:{}", pa.name(*s), p)).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    Weak,
    Plain,
    Strong,
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notion::Weak => "weak",
            Notion::Plain => "prob",
            Notion::Strong => "strong",
        })
    }
}

/// Marked-graph paths from `s`: every reachable state with one shortest path to it.
fn paths_from(c: &ConfluentSet, s: StateId) -> Vec<(StateId, Vec<StateId>)> {
    let mut parent: std::collections::BTreeMap<StateId, StateId> = Default::default();
    let mut order = vec![s];
    let mut queue = VecDeque::from([s]);
    parent.insert(s, s);
    while let Some(u) = queue.pop_front() {
        for &w in c.successors(u) {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(u);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
        .into_iter()
        .map(|t| {
            let mut path = vec![t];
            let mut cur = t;
            while cur != s {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            (t, path)
        })
        .collect()
}

fn lifted_all(pa: &Pa, r: &EquivRel) -> Vec<Distribution<ClassId>> {
    pa.transitions().iter().map(|t| t.dist.map(|&w| r.class_of(w))).collect()
}

/// Does `u` directly mimic a step with `label` lifting to `target` (or absorb it as a tau
/// step into its own class)?
fn mimics(pa: &Pa, r: &EquivRel, lifted: &[Distribution<ClassId>], u: StateId, label: &Label, target: &Distribution<ClassId>) -> bool {
    (label.is_tau() && target.dirac_target() == Some(&r.class_of(u)))
        || pa.outgoing(u).iter().any(|&i| &pa.transition(i).label == label && &lifted[i] == target)
}

/// Checks `c` against a notion, returning the first violation found (in state-id order).
pub fn check(pa: &Pa, c: &ConfluentSet, notion: Notion) -> Result<(), Violation> {
    if notion == Notion::Strong {
        return check_strong(pa, c);
    }
    let r = match joinability(pa, c) {
        JoinabilityResult::Relation(r) => r,
        JoinabilityResult::Counterexample { left, right } => return Err(Violation::NotJoinable { left, right }),
    };
    let lifted = lifted_all(pa, &r);
    for s in pa.states() {
        if c.successors(s).is_empty() {
            continue;
        }
        let paths = paths_from(c, s);
        for (t, path) in &paths {
            if *t == s {
                continue;
            }
            for &i in pa.outgoing(s) {
                let label = &pa.transition(i).label;
                let ok = match notion {
                    Notion::Plain => mimics(pa, &r, &lifted, *t, label, &lifted[i]),
                    Notion::Weak => paths_from(c, *t).iter().any(|(u, _)| mimics(pa, &r, &lifted, *u, label, &lifted[i])),
                    Notion::Strong => unreachable!(),
                };
                if !ok {
                    return Err(Violation::Unmatched { path: path.clone(), transition: i });
                }
            }
        }
    }
    Ok(())
}

fn check_strong(pa: &Pa, c: &ConfluentSet) -> Result<(), Violation> {
    for &m in c.members() {
        let s = pa.transition(m).source;
        let t = *pa.transition(m).dist.dirac_target().expect("members are Dirac");
        for &i in pa.outgoing(s) {
            let tr = pa.transition(i);
            let ok = (tr.label.is_tau() && tr.dist.dirac_target() == Some(&t))
                || pa.outgoing(t).iter().any(|&j| {
                    let other = pa.transition(j);
                    other.label == tr.label && equiv_up_to_tauc(c, &tr.dist, &other.dist)
                });
            if !ok {
                return Err(Violation::Unmatched { path: vec![s, t], transition: i });
            }
        }
    }
    Ok(())
}

pub fn is_strongly_confluent(pa: &Pa, c: &ConfluentSet) -> bool {
    check(pa, c, Notion::Strong).is_ok()
}

pub fn is_confluent(pa: &Pa, c: &ConfluentSet) -> bool {
    check(pa, c, Notion::Plain).is_ok()
}

pub fn is_weakly_confluent(pa: &Pa, c: &ConfluentSet) -> bool {
    check(pa, c, Notion::Weak).is_ok()
}
