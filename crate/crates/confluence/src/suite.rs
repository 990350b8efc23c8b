//! Randomised property suite for the confluence notions.
//!
//! Small automata are drawn from a seeded generator, a few candidate sets are marked on
//! each, and every claimed relationship between the notions is checked on them. A handful
//! of pinned automata found by earlier runs of the same generator are always checked too;
//! they are counterexamples to the implication from strong to plain confluence and to
//! closure under union, so a report built from them is never clean.

use std::fmt;
use std::time::{Duration, Instant};

use pa_core::fixture::parse_fixture;
use pa_core::graph::reachable;
use pa_core::{dist_eq_mod_r, Distribution, Label, Pa, PaBuilder, Prob, StateId, TransitionId};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sched_bisim::coarsest_branching_bisim;

use crate::{
    equiv_up_to_tauc, is_confluent, is_strongly_confluent, is_weakly_confluent, joinability, ConfluentSet,
    JoinabilityResult, Notion,
};

/// A claimed relationship that the suite checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    StrongImpliesPlain,
    PlainImpliesWeak,
    UnionClosure(Notion),
    BisimilarEndpoints,
    UpToTaucImpliesClassEquality,
    JoinableClassesShareDescendant,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::StrongImpliesPlain => f.write_str("strong implies prob"),
            Property::PlainImpliesWeak => f.write_str("prob implies weak"),
            Property::UnionClosure(n) => write!(f, "union closure ({n})"),
            Property::BisimilarEndpoints => f.write_str("bisimilar endpoints"),
            Property::UpToTaucImpliesClassEquality => f.write_str("up-to-tau_c implies class equality"),
            Property::JoinableClassesShareDescendant => f.write_str("joinable classes share a descendant"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropertyViolation {
    pub property: Property,
    pub pa: Pa,
    /// The marked set(s) involved, as transition ids.
    pub sets: Vec<Vec<TransitionId>>,
    /// True when the automaton is one of the pinned cases rather than a fresh draw.
    pub pinned: bool,
}

impl fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} fails for sets {:?}{}:", self.property, self.sets, if self.pinned { " (pinned)" } else { "" })?;
        write!(f, "{:?}", self.pa)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub random_pas: usize,
    pub pinned_pas: usize,
    /// Sets passing the strong, plain and weak checkers.
    pub verdicts: [usize; 3],
    pub unions_checked: usize,
    pub endpoint_pairs: usize,
    pub lemma_pairs: usize,
    pub violations: Vec<PropertyViolation>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn count(&self, property: Property) -> usize {
        self.violations.iter().filter(|v| v.property == property).count()
    }

    pub fn summary(&self) -> String {
        let mut props: Vec<Property> = self.violations.iter().map(|v| v.property).collect();
        props.sort();
        props.dedup();
        let failing: Vec<String> = props.iter().map(|&p| format!("{p}: {}", self.count(p))).collect();
        format!(
            "{} random + {} pinned PAs, strong/prob/weak sets {:?}, {} unions, {} endpoint pairs, {} lemma pairs, {} violations{}{} in {:.2?}",
            self.random_pas,
            self.pinned_pas,
            self.verdicts,
            self.unions_checked,
            self.endpoint_pairs,
            self.lemma_pairs,
            self.violations.len(),
            if failing.is_empty() { "" } else { " -- " },
            failing.join(", "),
            self.elapsed
        )
    }
}

/// Up to 8 states and 12 transitions; most transitions are tau with a Dirac target since
/// only those can be marked.
pub fn random_pa(rng: &mut StdRng) -> Pa {
    let n = rng.gen_range(1..=8);
    let mut b = PaBuilder::new();
    for i in 0..n {
        b.add_state(format!("x{i}")).expect("fresh names");
    }
    for _ in 0..rng.gen_range(0..=12) {
        let src = rng.gen_range(0..n);
        let roll = rng.gen_range(0..10);
        let (label, dist) = if roll < 6 {
            (Label::Tau, Distribution::dirac(rng.gen_range(0..n)))
        } else {
            let label = match roll {
                6 => Label::Tau,
                7 | 8 => Label::visible("a"),
                _ => Label::visible("b"),
            };
            let weights: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=3)).collect();
            let total: i64 = weights.iter().sum();
            let entries: Vec<(StateId, Prob)> =
                weights.into_iter().map(|w| (rng.gen_range(0..n), Prob::new(w.into(), total.into()))).collect();
            (label, Distribution::new(entries).expect("weights sum to one"))
        };
        b.add_transition(src, label, dist);
    }
    b.set_initial(0);
    b.build().expect("states declared")
}

pub fn random_subset(rng: &mut StdRng, pa: &Pa) -> ConfluentSet {
    let p = rng.gen_range(0.2..1.0);
    let picked: Vec<TransitionId> =
        (0..pa.num_transitions()).filter(|&t| pa.transition(t).is_tau_dirac()).filter(|_| rng.gen_bool(p)).collect();
    ConfluentSet::new(pa, picked).expect("tau/Dirac candidates")
}

/// Fixture text and marked sets of the pinned automata.
const PINNED: &[(&str, &[&[TransitionId]])] = &[
    // Strongly confluent, but t and u are distinct terminal components both reachable from s.
    (
        "state s\nstate t\nstate u\ninit s\n\
         trans s tau { t:1 }\ntrans s tau { u:1 }\ntrans t tau { t:1 }\ntrans u tau { u:1 }\n\
         trans t tau { u:1 }\ntrans u tau { t:1 }\n",
        &[&[0, 1, 2, 3]],
    ),
    // Each set is weakly confluent. Their union joins all three states, after which the
    // a-step of x1 must be mimicked from x0, which has no a-step and no marked successor.
    (
        "state x0\nstate x1\nstate x2\ninit x0\n\
         trans x2 tau { x0:1 }\ntrans x2 tau { x1:1 }\ntrans x1 tau { x2:1 }\ntrans x1 tau { x0:1 }\n\
         trans x0 b { x1:1 }\ntrans x2 tau { x2:1 }\ntrans x0 tau { x1:1 }\ntrans x1 a { x0:1 }\n",
        &[&[1, 2], &[0]],
    ),
    // Each set is confluent. Their union sends x1 to the two sinks x0 and x2, so joinability
    // stops being transitive.
    (
        "state x0\nstate x1\nstate x2\ninit x0\n\
         trans x0 b { x0:3/4, x2:1/4 }\ntrans x2 tau { x0:1 }\ntrans x2 b { x1:1 }\n\
         trans x2 tau { x1:1 }\ntrans x2 tau { x0:1/5, x1:3/5, x2:1/5 }\ntrans x1 tau { x2:1 }\n\
         trans x0 tau { x2:1 }\ntrans x2 a { x0:1/5, x2:4/5 }\ntrans x1 tau { x0:1 }\n",
        &[&[8], &[5]],
    ),
];

pub fn pinned_cases() -> Vec<(Pa, Vec<ConfluentSet>)> {
    PINNED
        .iter()
        .map(|(text, sets)| {
            let pa = parse_fixture(text).expect("pinned fixture parses");
            let sets = sets.iter().map(|ids| ConfluentSet::new(&pa, ids.iter().copied()).expect("pinned set")).collect();
            (pa, sets)
        })
        .collect()
}

/// Checks every property on one automaton with the given marked sets.
pub fn check_instance(pa: &Pa, sets: &[ConfluentSet], pinned: bool, report: &mut SuiteReport) {
    let mut fail = |property: Property, sets: Vec<Vec<TransitionId>>| {
        report.violations.push(PropertyViolation { property, pa: pa.clone(), sets, pinned });
    };
    let ids = |c: &ConfluentSet| c.members().iter().copied().collect::<Vec<_>>();
    let mut bisim = None;
    let mut verdicts_per_set = Vec::new();
    for c in sets {
        let v = [is_strongly_confluent(pa, c), is_confluent(pa, c), is_weakly_confluent(pa, c)];
        for (i, &b) in v.iter().enumerate() {
            report.verdicts[i] += b as usize;
        }
        if v[0] && !v[1] {
            fail(Property::StrongImpliesPlain, vec![ids(c)]);
        }
        if v[1] && !v[2] {
            fail(Property::PlainImpliesWeak, vec![ids(c)]);
        }
        if v[2] {
            let r = bisim.get_or_insert_with(|| coarsest_branching_bisim(pa));
            for &m in c.members() {
                let tr = pa.transition(m);
                report.endpoint_pairs += 1;
                if !r.related(tr.source, *tr.dist.dirac_target().expect("marked")) {
                    fail(Property::BisimilarEndpoints, vec![ids(c)]);
                }
            }
        }
        if let JoinabilityResult::Relation(r) = joinability(pa, c) {
            for t1 in pa.transitions() {
                for t2 in pa.transitions() {
                    if equiv_up_to_tauc(c, &t1.dist, &t2.dist) {
                        report.lemma_pairs += 1;
                        if !dist_eq_mod_r(&t1.dist, &t2.dist, &r).expect("same carrier") {
                            fail(Property::UpToTaucImpliesClassEquality, vec![ids(c)]);
                        }
                    }
                }
            }
            let reach: Vec<Vec<StateId>> = pa.states().map(|s| reachable(s, c.graph())).collect();
            let share = |a: StateId, b: StateId| reach[a].iter().any(|x| reach[b].contains(x));
            if r.classes().iter().any(|class| class.iter().any(|&a| class.iter().any(|&b| !share(a, b)))) {
                fail(Property::JoinableClassesShareDescendant, vec![ids(c)]);
            }
        }
        verdicts_per_set.push(v);
    }
    for (k, notion) in [Notion::Strong, Notion::Plain, Notion::Weak].into_iter().enumerate() {
        let passing: Vec<&ConfluentSet> =
            sets.iter().zip(&verdicts_per_set).filter(|(_, v)| v[k]).map(|(c, _)| c).collect();
        for (i, c1) in passing.iter().enumerate() {
            for c2 in &passing[i + 1..] {
                report.unions_checked += 1;
                let u = c1.union(pa, c2);
                let holds = match notion {
                    Notion::Strong => is_strongly_confluent(pa, &u),
                    Notion::Plain => is_confluent(pa, &u),
                    Notion::Weak => is_weakly_confluent(pa, &u),
                };
                if !holds {
                    fail(Property::UnionClosure(notion), vec![ids(c1), ids(c2)]);
                }
            }
        }
    }
}

/// Runs `count` random automata (four candidate sets each) plus the pinned cases.
pub fn run_suite(seed: u64, count: usize) -> SuiteReport {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = SuiteReport::default();
    while report.random_pas < count {
        let pa = random_pa(&mut rng);
        if !pa.transitions().iter().any(|t| t.is_tau_dirac()) {
            continue;
        }
        report.random_pas += 1;
        let sets: Vec<ConfluentSet> = (0..4).map(|_| random_subset(&mut rng, &pa)).collect();
        check_instance(&pa, &sets, false, &mut report);
    }
    for (pa, sets) in pinned_cases() {
        report.pinned_pas += 1;
        check_instance(&pa, &sets, true, &mut report);
    }
    report.elapsed = started.elapsed();
    report
}
