use pa_core::fixture::load_bundled;
use pa_core::{dist_eq_mod_r, Distribution, EquivRel, Label, Pa, Prob, StateId};
use sched_bisim::*;

fn q(n: i64, d: i64) -> Prob {
    Prob::new(n.into(), d.into())
}

fn st(pa: &Pa, name: &str) -> StateId {
    pa.state_by_name(name).unwrap()
}

#[test]
fn trivial_tau_step() {
    let pa = load_bundled("FIG1").unwrap();
    for s in pa.states() {
        let w = decide_weak_branching_step(&pa, &EquivRel::identity(pa.num_states()), s, &Label::Tau, &Distribution::dirac(s))
            .unwrap();
        assert!(w.is_trivial());
    }
}

#[test]
fn example_one_branching_step() {
    let pa = load_bundled("FIG1").unwrap();
    let mu = Distribution::new(
        [("s1", 8), ("s2", 7), ("s3", 1), ("s4", 4), ("s5", 4)].map(|(n, k)| (st(&pa, n), q(k, 24))),
    )
    .unwrap();
    let total = EquivRel::total(pa.num_states());
    let s = st(&pa, "s");
    let w = decide_weak_branching_step(&pa, &total, s, &Label::visible("a"), &mu).unwrap();
    assert_eq!(w.final_dist, mu.clone().into());
    validate_witness(&pa, &total, s, &Label::visible("a"), &mu, &w).unwrap();
    // Under the identity relation the silent moves are no longer inert.
    let id = EquivRel::identity(pa.num_states());
    assert!(decide_weak_branching_step(&pa, &id, s, &Label::visible("a"), &mu).is_none());
    // Nor can the b-step be reached after silent moves.
    assert!(decide_weak_branching_step(&pa, &total, s, &Label::visible("b"), &mu).is_none());
}

#[test]
fn dice_second_throw_cannot_reach_first_players_outcomes() {
    let pa = load_bundled("DICE").unwrap();
    let r = coarsest_branching_bisim(&pa);
    let hx = st(&pa, "HX");
    let mu = pa.transition(pa.outgoing(hx)[0]).dist.clone();
    assert_eq!(pa.transition(pa.outgoing(hx)[0]).label, Label::visible("throw2"));
    let xx = st(&pa, "XX");
    assert!(decide_weak_branching_step(&pa, &r, xx, &Label::visible("throw2"), &mu).is_none());

    // Oracle: the class of XX is {XX} and its only throw2 step goes to {XH, XT}; there is
    // no other memoryless flow, so the reachable finals are exactly that distribution.
    assert_eq!(r.class(r.class_of(xx)), &[xx]);
    let only = pa.outgoing(xx).iter().filter(|&&t| pa.transition(t).label == Label::visible("throw2")).count();
    assert_eq!(only, 1);
}

#[test]
fn witnesses_validate_and_lifted_decisions_agree() {
    for name in ["FIG1", "FIG4A", "FIG4B", "DICE"] {
        let pa = load_bundled(name).unwrap();
        let r = coarsest_branching_bisim(&pa);
        for s in pa.states() {
            for (i, tr) in pa.transitions().iter().enumerate() {
                if !r.related(s, tr.source) {
                    continue;
                }
                let target = tr.dist.map(|&w| r.class_of(w));
                let w = decide_weak_branching_step_mod_r(&pa, &r, s, &tr.label, &target)
                    .unwrap_or_else(|| panic!("{name}: state {s} cannot match transition {i}"));
                validate_witness_mod_r(&pa, &r, s, &tr.label, &tr.dist, &w).unwrap();
                assert!(dist_eq_mod_r(&w.final_dist.to_distribution().unwrap(), &tr.dist, &r).unwrap());
            }
        }
    }
}

#[test]
fn tampered_witness_is_rejected() {
    let pa = load_bundled("FIG1").unwrap();
    let total = EquivRel::total(pa.num_states());
    let s = st(&pa, "s");
    let mu = Distribution::new([(st(&pa, "s4"), q(1, 2)), (st(&pa, "s5"), q(1, 2))]).unwrap();
    let a = Label::visible("a");
    let mut w = decide_weak_branching_step(&pa, &total, s, &a, &mu).unwrap();
    validate_witness(&pa, &total, s, &a, &mu, &w).unwrap();
    let key = *w.flow.keys().next().unwrap();
    *w.flow.get_mut(&key).unwrap() = q(1, 2);
    assert!(validate_witness(&pa, &total, s, &a, &mu, &w).is_err());
}
