use std::collections::BTreeSet;

use confluence::ConfluentSet;
use gen::*;
use lppe::models::{load_bundled, BUNDLED_NAMES};
use lppe::{instantiate, parse, Limits, Spec};
use pa_core::isomorphic;
use sched_bisim::pa_bisimilar;
use symdetect::{detect, generated_by};

fn spec(name: &str) -> Spec {
    load_bundled(name).unwrap().unwrap()
}

fn counts(e: &Exploration) -> (usize, usize, usize, usize) {
    let s = &e.stats;
    (s.states, s.transitions, s.visited_states, s.visited_transitions)
}

fn canonical() -> Options {
    Options { mode: Mode::Canonical, ..Options::default() }
}

#[test]
fn unreduced_sizes() {
    assert_eq!(counts(&explore(&spec("leader")).unwrap()), (3763, 6158, 3763, 6158));
    assert_eq!(counts(&explore(&spec("example4")).unwrap()), (2, 4, 2, 4));
    let dead = parse("process D(x: {0..3} := 2)\n  false => go . D(x := 1)\n").unwrap();
    assert_eq!(counts(&explore(&dead).unwrap()), (1, 0, 1, 0));
}

#[test]
fn reduced_leader_matches_the_published_row() {
    let s = spec("leader");
    let c = detect(&s);
    assert_eq!(counts(&explore_reduced(&s, &c).unwrap()), (1399, 1922, 1471, 4022));
}

#[test]
fn canonical_mode_stores_representatives_only() {
    let s = spec("leader");
    let e = explore_reduced_with(&s, &detect(&s), &canonical()).unwrap();
    assert_eq!((e.stats.states, e.stats.transitions), (631, 758));
    assert!(e.stats.visited_states > e.stats.states);
}

#[test]
fn empty_confluent_set_is_plain_exploration() {
    for name in BUNDLED_NAMES {
        let s = spec(name);
        let full = instantiate(&s).unwrap();
        for mode in [Mode::ExpandViaRepresentative, Mode::Canonical] {
            let e = explore_reduced_with(&s, &BTreeSet::new(), &Options { mode, ..Options::default() }).unwrap();
            assert_eq!(e.pa, full.pa, "{name}");
            assert_eq!(e.states, full.states);
            assert_eq!(e.origins, full.origins);
        }
    }
}

#[test]
fn reduction_preserves_bisimilarity() {
    let s = spec("leader-2sided");
    let c = detect(&s);
    let full = explore(&s).unwrap();
    assert_eq!((full.stats.states, full.stats.transitions), (127, 198));
    for mode in [Mode::ExpandViaRepresentative, Mode::Canonical] {
        let reduced = explore_reduced_with(&s, &c, &Options { mode, ..Options::default() }).unwrap();
        assert!(reduced.stats.states < full.stats.states);
        assert!(pa_bisimilar(&full.pa, &reduced.pa), "{mode:?}");
        // No transition of the reduced space comes from a confluent summand.
        assert!(reduced.origins.iter().all(|o| o.is_disjoint(&c)));
    }
}

#[test]
fn canonical_mode_equals_the_offline_quotient() {
    let s = spec("leader-2sided");
    let c = detect(&s);
    let full = instantiate(&s).unwrap();
    let set = ConfluentSet::new(&full.pa, generated_by(&full, &c)).unwrap();
    let map = reduce::representation_map(&full.pa, &set).unwrap();
    let offline = reduce::quotient_by_map_direct(&full.pa, &set, &map);
    let online = explore_reduced_with(&s, &c, &canonical()).unwrap();
    assert!(isomorphic(&offline, &online.pa));
    let leader = spec("leader");
    let c = detect(&leader);
    let full = instantiate(&leader).unwrap();
    let set = ConfluentSet::new(&full.pa, generated_by(&full, &c)).unwrap();
    let map = reduce::representation_map(&full.pa, &set).unwrap();
    let offline = reduce::quotient_by_map_direct(&full.pa, &set, &map);
    let online = explore_reduced_with(&leader, &c, &canonical()).unwrap();
    assert_eq!((offline.num_states(), offline.num_transitions()), (631, 758));
    assert!(isomorphic(&offline, &online.pa));
}

type NamedTransition = (Vec<i64>, String, Vec<(Vec<i64>, String)>);

/// The transition relation with states named by their valuations.
fn by_valuation(e: &Exploration) -> BTreeSet<NamedTransition> {
    e.pa.transitions()
        .iter()
        .map(|t| {
            let mut dist: Vec<_> = t.dist.iter().map(|(s, p)| (e.states[*s].clone(), p.to_string())).collect();
            dist.sort();
            (e.states[t.source].clone(), t.label.to_string(), dist)
        })
        .collect()
}

#[test]
fn counts_do_not_depend_on_the_queue_discipline() {
    let s = spec("leader");
    let c = detect(&s);
    for mode in [Mode::ExpandViaRepresentative, Mode::Canonical] {
        let bfs = explore_reduced_with(&s, &c, &Options { mode, order: Order::BreadthFirst, ..Options::default() }).unwrap();
        let dfs = explore_reduced_with(&s, &c, &Options { mode, order: Order::DepthFirst, ..Options::default() }).unwrap();
        assert_eq!(counts(&bfs), counts(&dfs), "{mode:?}");
        assert_ne!(bfs.states, dfs.states);
        assert!(by_valuation(&bfs) == by_valuation(&dfs), "{mode:?}");
    }
}

#[test]
fn resolution_is_idempotent() {
    let s = spec("leader");
    let c = detect(&s);
    let limits = Limits::default();
    for g in explore(&s).unwrap().states.iter().step_by(37) {
        let r = resolve(&s, g, &c, &limits).unwrap();
        let again = resolve(&s, &r.representative, &c, &limits).unwrap();
        assert_eq!(again.representative, r.representative);
        assert_eq!((again.steps, again.intermediates.len()), (0, 0));
    }
}

#[test]
fn cycles_fall_back_to_terminal_components() {
    // x cycles 0 -> 1 -> 2 -> 0 under the first summand; the second drains x = 2 to 3.
    let s = parse(
        "process C(x: {0..3} := 0)\n  x < 3 => tau . C(x := if x = 2 then 0 else x + 1)\n+ x = 2 => tau . C(x := 3)\n+ x = 3 => done . C()\n",
    )
    .unwrap();
    let c: BTreeSet<usize> = [0, 1].into();
    let r = resolve(&s, &vec![0], &c, &Limits::default()).unwrap();
    assert_eq!(r.representative, vec![3]);
    assert_eq!(r.intermediates, vec![vec![1], vec![2]]);
    // A pure cycle is its own terminal component; the smallest valuation represents it.
    let s = parse("process C(x: {0..2} := 1)\n  true => tau . C(x := if x = 2 then 0 else x + 1)\n+ true => look(x) . C()\n").unwrap();
    let c: BTreeSet<usize> = [0].into();
    assert_eq!(resolve(&s, &vec![1], &c, &Limits::default()).unwrap().representative, vec![0]);
    let e = explore_reduced_with(&s, &c, &canonical()).unwrap();
    assert_eq!((e.stats.states, e.stats.transitions), (1, 1));
    assert_eq!(e.pa.transition(0).label.to_string(), "look(0)");
    // Expanding via the representative keeps the initial state 1 and reaches 0 itself.
    let e = explore_reduced(&s, &c).unwrap();
    assert_eq!(e.states, vec![vec![1], vec![0]]);
    assert_eq!((e.stats.states, e.stats.transitions), (2, 2));
}

#[test]
fn marking_a_probabilistic_summand_is_rejected() {
    let s = spec("leader");
    let err = explore_reduced(&s, &[0].into()).unwrap_err();
    assert!(matches!(err, GenError::NotDeterministic { summand: 1, .. }), "{err}");
}

#[test]
fn state_cap_reports_partial_statistics() {
    let s = spec("leader");
    let options = Options { limits: Limits { state_cap: 100, ..Limits::default() }, ..Options::default() };
    match explore_with(&s, &options) {
        Err(GenError::StateCap { cap: 100, partial }) => {
            assert_eq!(partial.states, 100);
            assert!(partial.transitions > 0);
        }
        other => panic!("{other:?}"),
    }
}
