//! Deciding branching steps `s =a=>_R mu`.
//!
//! A scheduler for a branching step only ever visits states of `[s]_R` before its final
//! step, so it can be described by an occupation flow on that class: how much probability
//! mass enters each state and how it is split between outgoing transitions (and, for
//! `a = tau`, halting). Memoryless randomised flows realise every reachable final
//! distribution, so feasibility of the flow equations decides the step.
//!
//! For `a = tau` the flow may also halt in the start state itself. Without that option the
//! trivial step `s =tau=> 1_s` could not be mixed with real steps, and the robustness
//! property of branching bisimulation (matching weak steps instead of strong ones) fails
//! on small examples.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{One, Zero};
use pa_core::{ClassId, Distribution, EquivRel, Label, Pa, Prob, StateId, SubDistribution, TransitionId};

use crate::simplex::{feasible_point, Row};

/// Certificate for a branching step. `flow[(u, t)]` is the mass scheduled on transition `t`
/// at state `u`; `stops[u]` is mass halting in `u` after a tau step. An empty flow stands
/// for the trivial step `s =tau=> 1_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakStepWitness {
    pub start: StateId,
    pub label: Label,
    pub flow: BTreeMap<(StateId, TransitionId), Prob>,
    pub stops: BTreeMap<StateId, Prob>,
    pub final_dist: SubDistribution,
}

impl WeakStepWitness {
    fn trivial(start: StateId) -> Self {
        WeakStepWitness {
            start,
            label: Label::Tau,
            flow: BTreeMap::new(),
            stops: BTreeMap::new(),
            final_dist: Distribution::dirac(start).into(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.flow.is_empty() && self.stops.is_empty()
    }

    /// Flow table rows `(state, transition, mass)`; halting mass is listed with no transition.
    pub fn table(&self) -> Vec<(StateId, Option<TransitionId>, Prob)> {
        let mut rows: Vec<_> = self.flow.iter().map(|(&(s, t), p)| (s, Some(t), p.clone())).collect();
        rows.extend(self.stops.iter().map(|(&s, p)| (s, None, p.clone())));
        rows.sort();
        rows
    }
}

/// How final mass is aggregated before comparing with the target.
#[derive(Clone, Copy)]
pub(crate) enum Grouping<'a> {
    /// Target is an exact distribution over states.
    States,
    /// Target is a distribution over classes; `lifted[t]` is transition `t` lifted to them.
    Classes(&'a [Distribution<ClassId>]),
}

pub(crate) struct Query<'a> {
    pub pa: &'a Pa,
    pub r: &'a EquivRel,
    pub start: StateId,
    pub label: &'a Label,
    pub grouping: Grouping<'a>,
    pub target: &'a BTreeMap<usize, Prob>,
}

struct Opt {
    /// `None` is the halting option.
    trans: Option<TransitionId>,
    internal: Vec<(StateId, Prob)>,
    exits: Vec<(usize, Prob)>,
}

struct Region {
    /// Node 0 is the start state.
    nodes: Vec<StateId>,
    index: HashMap<StateId, usize>,
    opts: Vec<Vec<Opt>>,
}

impl Query<'_> {
    fn group_of_state(&self, s: StateId) -> usize {
        match self.grouping {
            Grouping::States => s,
            Grouping::Classes(_) => self.r.class_of(s),
        }
    }

    fn wanted(&self, g: usize) -> bool {
        self.target.contains_key(&g)
    }

    fn options(&self, u: StateId) -> Vec<Opt> {
        let cls = self.r.class_of(self.start);
        let tau_step = self.label.is_tau();
        let mut out = Vec::new();
        for &t in self.pa.outgoing(u) {
            let tr = self.pa.transition(t);
            if tr.label.is_tau() {
                let mut internal = Vec::new();
                let mut exits: BTreeMap<usize, Prob> = BTreeMap::new();
                for (&w, p) in tr.dist.iter() {
                    if self.r.class_of(w) == cls {
                        internal.push((w, p.clone()));
                    } else {
                        *exits.entry(self.group_of_state(w)).or_insert_with(Prob::zero) += p;
                    }
                }
                if !tau_step && !exits.is_empty() {
                    continue; // would leave the class before the visible step
                }
                if exits.keys().all(|&g| self.wanted(g)) {
                    out.push(Opt { trans: Some(t), internal, exits: exits.into_iter().collect() });
                }
            } else if &tr.label == self.label {
                let exits: Vec<(usize, Prob)> = match self.grouping {
                    Grouping::States => tr.dist.iter().map(|(&w, p)| (w, p.clone())).collect(),
                    Grouping::Classes(lifted) => lifted[t].iter().map(|(&c, p)| (c, p.clone())).collect(),
                };
                if exits.iter().all(|(g, _)| self.wanted(*g)) {
                    out.push(Opt { trans: Some(t), internal: Vec::new(), exits });
                }
            }
        }
        if tau_step && self.wanted(self.group_of_state(u)) {
            out.push(Opt { trans: None, internal: Vec::new(), exits: vec![(self.group_of_state(u), Prob::one())] });
        }
        out
    }

    /// Builds the flow region and prunes it to the nodes from which the flow can exit
    /// with probability one. Returns `None` when the start node is pruned.
    fn region(&self) -> Option<Region> {
        let mut region =
            Region { nodes: vec![self.start], index: HashMap::from([(self.start, 0)]), opts: Vec::new() };
        region.opts.push(self.options(self.start));
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(n) = queue.pop_front() {
            let succs: Vec<StateId> =
                region.opts[n].iter().flat_map(|o| o.internal.iter().map(|(w, _)| *w)).collect();
            for w in succs {
                if !region.index.contains_key(&w) {
                    let id = region.nodes.len();
                    region.index.insert(w, id);
                    region.nodes.push(w);
                    region.opts.push(self.options(w));
                    queue.push_back(id);
                }
            }
        }
        // Greatest fixpoint over "alive" nodes of the least fixpoint "can exit".
        let n = region.nodes.len();
        let mut alive = vec![true; n];
        loop {
            let ok = |o: &Opt, alive: &[bool]| o.internal.iter().all(|(w, _)| alive[region.index[w]]);
            let mut exits_ok = vec![false; n];
            let mut changed = true;
            while changed {
                changed = false;
                for v in 0..n {
                    if !alive[v] || exits_ok[v] {
                        continue;
                    }
                    let reach = region.opts[v].iter().any(|o| {
                        ok(o, &alive)
                            && (!o.exits.is_empty() || o.internal.iter().any(|(w, _)| exits_ok[region.index[w]]))
                    });
                    if reach {
                        exits_ok[v] = true;
                        changed = true;
                    }
                }
            }
            if exits_ok == alive {
                break;
            }
            alive = exits_ok;
        }
        if !alive[0] {
            return None;
        }
        // Drop options that can lead to dead nodes, then nodes no longer reachable.
        for v in 0..n {
            let opts = std::mem::take(&mut region.opts[v]);
            region.opts[v] = if alive[v] {
                opts.into_iter().filter(|o| o.internal.iter().all(|(w, _)| alive[region.index[w]])).collect()
            } else {
                Vec::new()
            };
        }
        Some(region)
    }

    fn single_group_target(&self) -> bool {
        self.target.len() == 1
    }

    /// Cheap necessary condition: every target group is fed by some option.
    fn groups_covered(&self, region: &Region) -> bool {
        self.target.keys().all(|g| region.opts.iter().flatten().any(|o| o.exits.iter().any(|(h, _)| h == g)))
    }

    fn solve(&self, region: &Region) -> Option<Vec<Vec<Prob>>> {
        let mut var_of: Vec<Vec<usize>> = Vec::with_capacity(region.nodes.len());
        let mut num_vars = 0;
        for opts in &region.opts {
            var_of.push((num_vars..num_vars + opts.len()).collect());
            num_vars += opts.len();
        }
        let mut node_rows: Vec<Vec<(usize, Prob)>> = vec![Vec::new(); region.nodes.len()];
        let mut group_rows: BTreeMap<usize, Vec<(usize, Prob)>> =
            self.target.keys().map(|&g| (g, Vec::new())).collect();
        for (v, opts) in region.opts.iter().enumerate() {
            for (k, o) in opts.iter().enumerate() {
                let x = var_of[v][k];
                node_rows[v].push((x, Prob::one()));
                for (w, p) in &o.internal {
                    node_rows[region.index[w]].push((x, -p.clone()));
                }
                for (g, p) in &o.exits {
                    group_rows.get_mut(g).expect("options only feed wanted groups").push((x, p.clone()));
                }
            }
        }
        let mut rows: Vec<Row> = Vec::new();
        for (v, coeffs) in node_rows.into_iter().enumerate() {
            let rhs = if v == 0 { Prob::one() } else { Prob::zero() };
            rows.push((coeffs, rhs));
        }
        for (g, coeffs) in group_rows {
            rows.push((coeffs, self.target[&g].clone()));
        }
        let x = feasible_point(num_vars, &rows)?;
        Some(var_of.iter().map(|vars| vars.iter().map(|&i| x[i].clone()).collect()).collect())
    }

    /// Full decision without a certificate.
    pub fn feasible(&self) -> bool {
        let Some(region) = self.region() else { return false };
        if self.single_group_target() {
            return true;
        }
        self.groups_covered(&region) && self.solve(&region).is_some()
    }

    /// Decision with a certificate, built from a solved flow.
    pub fn witness(&self) -> Option<WeakStepWitness> {
        let region = self.region()?;
        if !self.groups_covered(&region) {
            return None;
        }
        let x = self.solve(&region)?;
        // Keep only the part reachable from the start through positive flow; anything else
        // is circulation that never receives mass.
        let mut keep = vec![false; region.nodes.len()];
        keep[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (k, o) in region.opts[v].iter().enumerate() {
                if x[v][k].is_zero() {
                    continue;
                }
                for (w, _) in &o.internal {
                    let i = region.index[w];
                    if !keep[i] {
                        keep[i] = true;
                        queue.push_back(i);
                    }
                }
            }
        }
        let mut flow: BTreeMap<(StateId, TransitionId), Prob> = BTreeMap::new();
        let mut stops: BTreeMap<StateId, Prob> = BTreeMap::new();
        for v in (0..region.nodes.len()).filter(|&v| keep[v]) {
            let u = region.nodes[v];
            for (k, o) in region.opts[v].iter().enumerate() {
                if x[v][k].is_zero() {
                    continue;
                }
                match o.trans {
                    Some(t) => *flow.entry((u, t)).or_insert_with(Prob::zero) += &x[v][k],
                    None => *stops.entry(u).or_insert_with(Prob::zero) += &x[v][k],
                }
            }
        }
        let final_dist = induced_final(self.pa, self.r, self.start, self.label, &flow, &stops);
        Some(WeakStepWitness { start: self.start, label: self.label.clone(), flow, stops, final_dist })
    }
}

fn induced_final(
    pa: &Pa,
    r: &EquivRel,
    start: StateId,
    label: &Label,
    flow: &BTreeMap<(StateId, TransitionId), Prob>,
    stops: &BTreeMap<StateId, Prob>,
) -> SubDistribution {
    let cls = r.class_of(start);
    let mut fin: BTreeMap<StateId, Prob> = BTreeMap::new();
    for (&(_, t), m) in flow {
        let tr = pa.transition(t);
        let is_final_step = !tr.label.is_tau() || label.is_tau();
        if !is_final_step {
            continue;
        }
        for (&w, p) in tr.dist.iter() {
            if tr.label.is_tau() && r.class_of(w) == cls {
                continue; // arrives inside the class and is accounted for by `stops` or onward flow
            }
            *fin.entry(w).or_insert_with(Prob::zero) += m * p;
        }
    }
    for (&u, m) in stops {
        *fin.entry(u).or_insert_with(Prob::zero) += m;
    }
    SubDistribution::new(fin).unwrap_or_default()
}

/// Independent check of a witness against the flow equations and the target `mu`.
pub fn validate_witness(
    pa: &Pa,
    r: &EquivRel,
    s: StateId,
    a: &Label,
    mu: &Distribution,
    w: &WeakStepWitness,
) -> Result<(), String> {
    validate_with(pa, r, s, a, w, |fin| {
        if fin.as_map() == mu.as_map() {
            Ok(())
        } else {
            Err(format!("final distribution {fin:?} differs from target {mu:?}"))
        }
    })
}

/// Like [`validate_witness`] but only requires the final distribution to be `≡_R mu`.
pub fn validate_witness_mod_r(
    pa: &Pa,
    r: &EquivRel,
    s: StateId,
    a: &Label,
    mu: &Distribution,
    w: &WeakStepWitness,
) -> Result<(), String> {
    validate_with(pa, r, s, a, w, |fin| {
        let lifted = pa_core::class_masses(fin.iter(), r);
        let want = pa_core::class_masses(mu.iter(), r);
        if lifted == want {
            Ok(())
        } else {
            Err(format!("final distribution {fin:?} is not R-equivalent to {mu:?}"))
        }
    })
}

fn validate_with(
    pa: &Pa,
    r: &EquivRel,
    s: StateId,
    a: &Label,
    w: &WeakStepWitness,
    check_final: impl Fn(&SubDistribution) -> Result<(), String>,
) -> Result<(), String> {
    if w.start != s || &w.label != a && !w.is_trivial() {
        return Err("witness is for a different start state or label".into());
    }
    if w.is_trivial() {
        return if a.is_tau() { check_final(&Distribution::dirac(s).into()) } else { Err("empty witness for a visible step".into()) };
    }
    let cls = r.class_of(s);
    let mut inflow: BTreeMap<StateId, Prob> = BTreeMap::from([(s, Prob::one())]);
    let mut outflow: BTreeMap<StateId, Prob> = BTreeMap::new();
    let mut edges: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
    for (&(u, t), m) in &w.flow {
        if m <= &Prob::zero() {
            return Err(format!("non-positive flow on ({u}, {t})"));
        }
        if t >= pa.num_transitions() || pa.transition(t).source != u {
            return Err(format!("transition {t} does not leave state {u}"));
        }
        if r.class_of(u) != cls {
            return Err(format!("flow-carrying state {u} lies outside the class of {s}"));
        }
        let tr = pa.transition(t);
        *outflow.entry(u).or_insert_with(Prob::zero) += m;
        if tr.label.is_tau() {
            for (&v, p) in tr.dist.iter() {
                let inside = r.class_of(v) == cls;
                if !inside && !a.is_tau() {
                    return Err(format!("tau transition {t} leaves the class before the {a} step"));
                }
                if inside {
                    *inflow.entry(v).or_insert_with(Prob::zero) += m * p;
                    edges.entry(u).or_default().push(v);
                }
            }
        } else if &tr.label != a {
            return Err(format!("transition {t} carries label {} instead of {a}", tr.label));
        }
    }
    for (&u, m) in &w.stops {
        if !a.is_tau() {
            return Err("halting inside the class is only allowed for tau steps".into());
        }
        *outflow.entry(u).or_insert_with(Prob::zero) += m;
    }
    for u in inflow.keys().chain(outflow.keys()) {
        let i = inflow.get(u).cloned().unwrap_or_else(Prob::zero);
        let o = outflow.get(u).cloned().unwrap_or_else(Prob::zero);
        if i != o {
            return Err(format!("flow not conserved at state {u}: in {i}, out {o}"));
        }
    }
    // Every flow-carrying state must actually receive mass from the start.
    let mut seen = std::collections::BTreeSet::from([s]);
    let mut queue = vec![s];
    while let Some(u) = queue.pop() {
        for &v in edges.get(&u).into_iter().flatten() {
            if seen.insert(v) {
                queue.push(v);
            }
        }
    }
    if let Some(u) = outflow.keys().find(|u| !seen.contains(u)) {
        return Err(format!("state {u} carries flow that is unreachable from the start"));
    }
    let fin = induced_final(pa, r, s, a, &w.flow, &w.stops);
    if fin != w.final_dist {
        return Err("recorded final distribution disagrees with the flow".into());
    }
    if !fin.total().is_one() {
        return Err(format!("final mass {} is not 1", fin.total()));
    }
    check_final(&fin)
}

/// Decides `s =a=>_R mu` and returns a certificate when it holds.
pub fn decide_weak_branching_step(
    pa: &Pa,
    r: &EquivRel,
    s: StateId,
    a: &Label,
    mu: &Distribution,
) -> Option<WeakStepWitness> {
    if a.is_tau() && mu.dirac_target() == Some(&s) {
        return Some(WeakStepWitness::trivial(s));
    }
    if mu.support().any(|&w| w >= pa.num_states()) {
        return None;
    }
    let target: BTreeMap<usize, Prob> = mu.iter().map(|(&w, p)| (w, p.clone())).collect();
    let q = Query { pa, r, start: s, label: a, grouping: Grouping::States, target: &target };
    let w = q.witness()?;
    if let Err(e) = validate_witness(pa, r, s, a, mu, &w) {
        panic!("solver produced an invalid weak-step witness: {e}");
    }
    Some(w)
}

/// Decides whether `s =a=>_R nu` for some `nu` whose lifting to `r`'s classes is `target`,
/// returning a certificate.
pub fn decide_weak_branching_step_mod_r(
    pa: &Pa,
    r: &EquivRel,
    s: StateId,
    a: &Label,
    target: &Distribution<ClassId>,
) -> Option<WeakStepWitness> {
    if a.is_tau() && target.dirac_target() == Some(&r.class_of(s)) {
        return Some(WeakStepWitness::trivial(s));
    }
    let lifted: Vec<Distribution<ClassId>> =
        pa.transitions().iter().map(|t| t.dist.map(|&w| r.class_of(w))).collect();
    let target_map: BTreeMap<usize, Prob> = target.iter().map(|(&c, p)| (c, p.clone())).collect();
    let q = Query { pa, r, start: s, label: a, grouping: Grouping::Classes(&lifted), target: &target_map };
    q.witness()
}
