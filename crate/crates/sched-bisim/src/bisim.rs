use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use pa_core::{ClassId, Distribution, EquivRel, Label, Pa, Prob, StateId};

use crate::weak_step::{Grouping, Query};

/// Decides `t =a=>_R nu` for some `nu` lifting to `target`. `lifted[i]` must be transition
/// `i` lifted to the classes of `r`.
pub(crate) fn can_match(
    pa: &Pa,
    r: &EquivRel,
    lifted: &[Distribution<ClassId>],
    t: StateId,
    label: &Label,
    target: &Distribution<ClassId>,
) -> bool {
    let cls = r.class_of(t);
    if label.is_tau() && target.dirac_target() == Some(&cls) {
        return true;
    }
    let strong = |u: StateId| {
        pa.outgoing(u).iter().any(|&i| &pa.transition(i).label == label && &lifted[i] == target)
    };
    // Silent Dirac moves inside the class followed by one strong step.
    let mut seen = HashSet::from([t]);
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        if strong(u) {
            return true;
        }
        for &i in pa.outgoing(u) {
            let tr = pa.transition(i);
            if let (true, Some(&w)) = (tr.label.is_tau(), tr.dist.dirac_target()) {
                if r.class_of(w) == cls && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    let target_map: BTreeMap<usize, Prob> = target.iter().map(|(&c, p)| (c, p.clone())).collect();
    Query { pa, r, start: t, label, grouping: Grouping::Classes(lifted), target: &target_map }.feasible()
}

/// One refinement pass: splits each class by which of its members' strong steps each
/// member can match with a branching step.
pub fn refine_once(pa: &Pa, r: &EquivRel) -> EquivRel {
    let lifted: Vec<Distribution<ClassId>> =
        pa.transitions().iter().map(|t| t.dist.map(|&w| r.class_of(w))).collect();
    let mut keys: Vec<(ClassId, Vec<bool>)> = vec![(0, Vec::new()); pa.num_states()];
    for (c, members) in r.classes().iter().enumerate() {
        let mut reqs: BTreeSet<(&Label, &Distribution<ClassId>)> = BTreeSet::new();
        for &s in members {
            for &i in pa.outgoing(s) {
                let label = &pa.transition(i).label;
                if label.is_tau() && lifted[i].dirac_target() == Some(&c) {
                    continue; // every classmate matches this by not moving
                }
                reqs.insert((label, &lifted[i]));
            }
        }
        for &s in members {
            let signature = reqs.iter().map(|(l, d)| can_match(pa, r, &lifted, s, l, d)).collect();
            keys[s] = (c, signature);
        }
    }
    EquivRel::from_keys(&keys)
}

/// The coarsest branching probabilistic bisimulation, by refinement from the total relation.
pub fn coarsest_branching_bisim(pa: &Pa) -> EquivRel {
    let mut r = EquivRel::total(pa.num_states());
    loop {
        let next = refine_once(pa, &r);
        if next.num_classes() == r.num_classes() {
            return r;
        }
        r = next;
    }
}

/// Branching probabilistic bisimilarity of the initial states of two automata.
pub fn pa_bisimilar(a: &Pa, b: &Pa) -> bool {
    let (union, offset) = Pa::disjoint_union(a, b);
    let r = coarsest_branching_bisim(&union);
    r.related(a.initial(), b.initial() + offset)
}

/// Checks the bisimulation condition of `r` pair by pair: every strong step of a state must
/// be matched by a branching step of each classmate. Returns the first violation.
pub fn check_bisimulation(pa: &Pa, r: &EquivRel) -> Result<(), (StateId, StateId, usize)> {
    let lifted: Vec<Distribution<ClassId>> =
        pa.transitions().iter().map(|t| t.dist.map(|&w| r.class_of(w))).collect();
    for members in r.classes() {
        for &s in members {
            for &i in pa.outgoing(s) {
                let label = &pa.transition(i).label;
                for &t in members {
                    if t != s && !can_match(pa, r, &lifted, t, label, &lifted[i]) {
                        return Err((s, t, i));
                    }
                }
            }
        }
    }
    Ok(())
}
