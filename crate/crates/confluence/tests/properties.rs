//! Randomised properties over small automata: implication chain, union closure, bisimilar
//! endpoints, the up-to-tau_c lemma and joinability classes.

use confluence::suite::{pinned_cases, run_suite, Property, SuiteReport};
use confluence::*;

fn run() -> SuiteReport {
    let count = std::env::var("PAS").ok().and_then(|v| v.parse().ok()).unwrap_or(600);
    run_suite(2024, count)
}

#[test]
fn properties_that_hold_have_no_violations() {
    let report = run();
    println!("{}", report.summary());
    let holding = [
        Property::PlainImpliesWeak,
        Property::UnionClosure(Notion::Strong),
        Property::BisimilarEndpoints,
        Property::UpToTaucImpliesClassEquality,
        Property::JoinableClassesShareDescendant,
    ];
    let bad: Vec<String> =
        report.violations.iter().filter(|v| holding.contains(&v.property)).take(5).map(|v| v.to_string()).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n---\n"));
    assert!(report.random_pas >= 500);
}

#[test]
fn random_draws_exercise_every_notion() {
    let report = run_suite(7, 200);
    assert!(report.verdicts.iter().all(|&n| n > 50), "{:?}", report.verdicts);
    assert!(report.unions_checked > 100 && report.endpoint_pairs > 100 && report.lemma_pairs > 100);
}

#[test]
fn strong_confluence_does_not_imply_joinability() {
    let (pa, sets) = &pinned_cases()[0];
    let c = &sets[0];
    assert!(is_strongly_confluent(pa, c));
    assert!(!is_confluent(pa, c));
    assert!(!is_weakly_confluent(pa, c));
    let t = pa.state_by_name("t").unwrap();
    let u = pa.state_by_name("u").unwrap();
    assert_eq!(joinability(pa, c), JoinabilityResult::Counterexample { left: t, right: u });
}

#[test]
fn weak_confluence_is_not_closed_under_union() {
    let (pa, sets) = &pinned_cases()[1];
    assert!(is_weakly_confluent(pa, &sets[0]) && is_weakly_confluent(pa, &sets[1]));
    let u = sets[0].union(pa, &sets[1]);
    // Joinability survives the union; the failure is in mimicking.
    assert_eq!(joinability(pa, &u).relation().map(|r| r.num_classes()), Some(1));
    let err = check(pa, &u, Notion::Weak).unwrap_err();
    assert_eq!(err.render(pa), "path x1 -tau_c-> x2 -tau_c-> x0 : transition #7 x1 -a-> {x0:1} is not mimicked");
    // The endpoints are still bisimilar, so the union is harmless for reduction purposes.
    let r = sched_bisim::coarsest_branching_bisim(pa);
    assert_eq!(r.num_classes(), 1);
}

#[test]
fn plain_confluence_is_not_closed_under_union() {
    let (pa, sets) = &pinned_cases()[2];
    assert!(is_confluent(pa, &sets[0]) && is_confluent(pa, &sets[1]));
    let u = sets[0].union(pa, &sets[1]);
    assert!(matches!(check(pa, &u, Notion::Plain), Err(Violation::NotJoinable { .. })));
    assert!(!is_weakly_confluent(pa, &u));
}

#[test]
fn pinned_cases_are_reported_by_the_suite() {
    let report = run_suite(0, 0);
    assert_eq!(report.pinned_pas, 3);
    assert_eq!(report.count(Property::StrongImpliesPlain), 1);
    assert!(report.count(Property::UnionClosure(Notion::Weak)) >= 2);
    assert_eq!(report.count(Property::UnionClosure(Notion::Plain)), 1);
}
