//! Structural comparison of automata up to renaming of states.

use std::collections::BTreeMap;

use crate::{Distribution, Label, Pa, Prob, StateId};

/// Do the reachable parts of `a` and `b` coincide up to a bijective renaming of states that
/// maps initial state to initial state? State names are ignored.
///
/// Backtracking over candidate images, pruned by a per-state signature; meant for the small
/// automata used in tests and diagnostics.
pub fn isomorphic(a: &Pa, b: &Pa) -> bool {
    let a = a.reachable_part();
    let b = b.reachable_part();
    if a.num_states() != b.num_states() || a.num_transitions() != b.num_transitions() {
        return false;
    }
    let sig_a: Vec<_> = a.states().map(|s| signature(&a, s)).collect();
    let sig_b: Vec<_> = b.states().map(|s| signature(&b, s)).collect();
    let mut map = vec![usize::MAX; a.num_states()];
    let mut used = vec![false; b.num_states()];
    if sig_a[0] != sig_b[0] {
        return false;
    }
    // reachable_part renumbers in BFS order, so both initial states are 0.
    map[0] = 0;
    used[0] = true;
    extend(&a, &b, &sig_a, &sig_b, &mut map, &mut used, 1)
}

type Signature = BTreeMap<(Label, Vec<Prob>), usize>;

/// Labels with sorted probability vectors, counted.
fn signature(pa: &Pa, s: StateId) -> Signature {
    let mut sig = Signature::new();
    for &t in pa.outgoing(s) {
        let tr = pa.transition(t);
        let mut probs: Vec<Prob> = tr.dist.iter().map(|(_, p)| p.clone()).collect();
        probs.sort();
        *sig.entry((tr.label.clone(), probs)).or_default() += 1;
    }
    sig
}

fn extend(
    a: &Pa,
    b: &Pa,
    sig_a: &[Signature],
    sig_b: &[Signature],
    map: &mut [usize],
    used: &mut [bool],
    next: usize,
) -> bool {
    if next == a.num_states() {
        return same_transitions(a, b, map);
    }
    for y in b.states() {
        if used[y] || sig_a[next] != sig_b[y] {
            continue;
        }
        map[next] = y;
        used[y] = true;
        if consistent(a, b, map) && extend(a, b, sig_a, sig_b, map, used, next + 1) {
            return true;
        }
        used[y] = false;
        map[next] = usize::MAX;
    }
    false
}

/// Every transition of a mapped state whose targets are all mapped has an image in `b`.
fn consistent(a: &Pa, b: &Pa, map: &[usize]) -> bool {
    a.states().filter(|&s| map[s] != usize::MAX).all(|s| {
        a.outgoing(s).iter().all(|&t| {
            let tr = a.transition(t);
            if tr.dist.support().any(|x| map[*x] == usize::MAX) {
                return true;
            }
            let image: Distribution = tr.dist.map(|x| map[*x]);
            b.outgoing(map[s]).iter().any(|&u| b.transition(u).label == tr.label && b.transition(u).dist == image)
        })
    })
}

fn same_transitions(a: &Pa, b: &Pa, map: &[usize]) -> bool {
    // Transitions are stored without duplicates and the counts agree, so inclusion suffices.
    consistent(a, b, map)
}
