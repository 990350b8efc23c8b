//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria cannot be met as written and are expected to fail; their lines say why.
//! The run fails if any other criterion fails, and also if an expected failure starts
//! passing, so that the explanation is revisited.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use confluence::suite::{run_suite, Property};
use confluence::{is_confluent, is_strongly_confluent, is_weakly_confluent, joinability, ConfluentSet, Notion};
use gen::{explore, explore_reduced};
use pa_core::fixture::load_bundled;
use pa_core::{isomorphic, EquivRel, Label, Pa, Path, Prob, StateId, SubDistribution, TransitionId};
use probconf::run;
use rand::rngs::StdRng;
use rand::SeedableRng;
use sched_bisim::{final_distribution, pa_bisimilar, path_probability, Choice, FiniteScheduler};
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> probconf::Verdict {
    run(std::iter::once("probconf").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let v = cli(args);
    assert_eq!(v.code, 0, "{args:?}: {}", v.stderr);
    serde_json::from_str(&v.stdout).expect("JSON payload")
}

fn count(v: &Value, key: &str) -> u64 {
    v[key].as_u64().unwrap_or_else(|| panic!("missing {key}"))
}

fn q(n: i64, d: i64) -> Prob {
    Prob::new(n.into(), d.into())
}

fn unreduced_leader() -> Outcome {
    let started = Instant::now();
    let v = json(&["generate", "leader", "--json"]);
    let elapsed = started.elapsed();
    let (s, t) = (count(&v, "states"), count(&v, "transitions"));
    outcome(
        (s, t) == (3763, 6158) && elapsed < Duration::from_secs(5),
        format!("generate leader: {s} states, {t} transitions in {:.2} s (want 3763, 6158, under 5 s)", elapsed.as_secs_f64()),
    )
}

fn reduced_leader() -> Outcome {
    let v = json(&["generate", "leader", "--reduce", "--json"]);
    let (s, t) = (count(&v, "states"), count(&v, "transitions"));
    outcome((s, t) == (1399, 1922), format!("generate leader --reduce: {s} states, {t} transitions (want 1399, 1922)"))
}

fn detection() -> Outcome {
    let spec = lppe::models::load_bundled("leader").unwrap().unwrap();
    let found: Vec<usize> = symdetect::detect(&spec).iter().map(|i| i + 1).collect();
    let printed = cli(&["detect", "leader"]).stdout;
    let listed = printed.contains("confluent:  {3, 4, 5, 6}\n");
    outcome(found == [3, 4, 5, 6] && listed, format!("detect leader: summands {found:?} (want [3, 4, 5, 6])"))
}

fn visited_counts() -> Outcome {
    let v = json(&["generate", "leader", "--reduce", "--json"]);
    let (vs, vt) = (count(&v, "visited_states"), count(&v, "visited_transitions"));
    let within = |x: u64, target: f64| (x as f64 - target).abs() <= 0.1 * target;
    outcome(
        within(vs, 1471.0) && within(vt, 4022.0),
        format!("visited {vs} states, {vt} transitions (want 1471 and 4022, within 10%)"),
    )
}

fn reduction_is_bisimilar() -> Outcome {
    let spec = lppe::models::load_bundled("leader-2sided").unwrap().unwrap();
    let c = symdetect::detect(&spec);
    let full = explore(&spec).unwrap();
    let reduced = explore_reduced(&spec, &c).unwrap();
    let small = pa_bisimilar(&full.pa, &reduced.pa);

    let fig4a = load_bundled("FIG4A").unwrap();
    let marked = ConfluentSet::all_tau_dirac(&fig4a);
    let r = joinability(&fig4a, &marked).relation().cloned().expect("weakly confluent");
    let fig4a_ok = pa_bisimilar(&fig4a, &reduce::quotient(&fig4a, &r));

    let fig4b = load_bundled("FIG4B").unwrap();
    let marked = ConfluentSet::all_tau_dirac(&fig4b);
    let fig4b_ok = pa_bisimilar(&fig4b, &reduce::quotient_by_representatives(&fig4b, &marked).unwrap());

    outcome(
        small && fig4a_ok && fig4b_ok,
        format!(
            "2-sided leader {}/{} vs {}/{}: {small}; FIG4A modulo joinability: {fig4a_ok}; FIG4B by representatives: {fig4b_ok}",
            full.stats.states, full.stats.transitions, reduced.stats.states, reduced.stats.transitions
        ),
    )
}

fn st(pa: &Pa, name: &str) -> StateId {
    pa.state_by_name(name).unwrap()
}

fn tr(pa: &Pa, src: &str, label: &str, targets: &[&str]) -> TransitionId {
    *pa.outgoing(st(pa, src))
        .iter()
        .find(|&&t| {
            let t = pa.transition(t);
            t.label == Label::parse(label) && t.dist.support().map(|&x| pa.name(x)).eq(targets.iter().copied())
        })
        .unwrap()
}

fn scheduler_arithmetic() -> Outcome {
    let pa = load_bundled("FIG1").unwrap();
    let choice = |pairs: Vec<(TransitionId, Prob)>| -> Choice { pairs.into_iter().map(|(t, p)| (Some(t), p)).collect() };
    let mut sched = FiniteScheduler::new();
    let plan = [
        ("s", vec![(tr(&pa, "s", "tau", &["t2"]), q(2, 3)), (tr(&pa, "s", "tau", &["t3"]), q(1, 3))]),
        ("t2", vec![(tr(&pa, "t2", "a", &["s1"]), q(1, 2)), (tr(&pa, "t2", "tau", &["t4"]), q(1, 2))]),
        ("t3", vec![(tr(&pa, "t3", "a", &["s4", "s5"]), q(1, 1))]),
        ("t4", vec![(tr(&pa, "t4", "a", &["s2"]), q(3, 4)), (tr(&pa, "t4", "a", &["s2", "s3"]), q(1, 4))]),
    ];
    for (state, pairs) in plan {
        sched.set_state(&pa, st(&pa, state), choice(pairs)).unwrap();
    }
    let fin = final_distribution(&pa, &sched, st(&pa, "s")).unwrap();
    let want =
        SubDistribution::new([("s1", 8), ("s2", 7), ("s3", 1), ("s4", 4), ("s5", 4)].map(|(n, k)| (st(&pa, n), q(k, 24))))
            .unwrap();
    let [s, t2, t4, s2] = ["s", "t2", "t4", "s2"].map(|n| st(&pa, n));
    let base = [(tr(&pa, "s", "tau", &["t2"]), t2), (tr(&pa, "t2", "tau", &["t4"]), t4)];
    let p1 = path_probability(&pa, &sched, &Path::from_steps(&pa, s, base.into_iter().chain([(tr(&pa, "t4", "a", &["s2"]), s2)])).unwrap());
    let p2 = path_probability(
        &pa,
        &sched,
        &Path::from_steps(&pa, s, base.into_iter().chain([(tr(&pa, "t4", "a", &["s2", "s3"]), s2)])).unwrap(),
    );
    let shown: Vec<String> = fin.iter().map(|(k, p)| format!("{}:{p}", pa.name(*k))).collect();
    outcome(
        fin == want && p1 == q(6, 24) && p2 == q(1, 24),
        format!("final distribution {{{}}}, path probabilities {p1} and {p2} (want 1/4 = 6/24 and 1/24)", shown.join(", ")),
    )
}

fn figure_classification() -> Outcome {
    let a = load_bundled("FIG4A").unwrap();
    let ca = ConfluentSet::all_tau_dirac(&a);
    let b = load_bundled("FIG4B").unwrap();
    let cb = ConfluentSet::all_tau_dirac(&b);
    let (weak, plain, strong_b) = (is_weakly_confluent(&a, &ca), is_confluent(&a, &ca), is_strongly_confluent(&b, &cb));
    outcome(
        weak && !plain && strong_b,
        format!("FIG4A weak {weak}, {} {plain}; FIG4B strong {strong_b} (want true, false, true)", Notion::Plain),
    )
}

fn dice_negative_control() -> Outcome {
    let dice = load_bundled("DICE").unwrap();
    let wrong = load_bundled("DICE-WRONG").unwrap();
    let merged: Vec<StateId> = ["XX", "HX", "TX"].iter().map(|n| st(&dice, n)).collect();
    let mut classes = vec![merged.clone()];
    classes.extend(dice.states().filter(|s| !merged.contains(s)).map(|s| vec![s]));
    let q = reduce::quotient(&dice, &EquivRel::from_classes(dice.num_states(), &classes).unwrap());
    let same_shape = isomorphic(&q, &wrong);
    let distinguished = !pa_bisimilar(&dice, &wrong);
    outcome(
        same_shape && distinguished,
        format!(
            "quotient of DICE by {{XX,HX,TX}} isomorphic to DICE-WRONG: {same_shape}; DICE not bisimilar to DICE-WRONG: {distinguished}"
        ),
    )
}

fn property_suites() -> Outcome {
    let report = run_suite(2024, 1000);
    let broken: BTreeSet<String> = report.violations.iter().map(|v| v.property.to_string()).collect();
    let must_hold = [Property::PlainImpliesWeak, Property::BisimilarEndpoints, Property::UpToTaucImpliesClassEquality];
    let core_ok = must_hold.iter().all(|&p| report.count(p) == 0);
    outcome(
        report.violations.is_empty() && report.elapsed < Duration::from_secs(120),
        format!(
            "{}; failing: {:?}; plain=>weak, endpoint bisimilarity and the up-to-tau_c lemma hold: {core_ok}",
            report.summary(),
            broken
        ),
    )
}

fn detection_soundness() -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut specs: Vec<(String, lppe::Spec)> = lppe::models::BUNDLED_NAMES
        .iter()
        .map(|n| (n.to_string(), lppe::models::load_bundled(n).unwrap().unwrap()))
        .collect();
    let mut rng = StdRng::seed_from_u64(10);
    specs.extend((0..60).map(|k| (format!("random #{k}"), symdetect::random::random_spec(&mut rng))));
    let mut marked = 0;
    for (name, spec) in &specs {
        let inst = lppe::instantiate(spec).unwrap();
        let c = ConfluentSet::new(&inst.pa, symdetect::generated_by(&inst, &symdetect::detect(spec))).unwrap();
        marked += c.members().len();
        checked += 1;
        if !is_strongly_confluent(&inst.pa, &c) {
            violations.push(name.clone());
        }
    }
    outcome(
        violations.is_empty() && checked >= 63,
        format!("{checked} specifications (3 bundled, 60 random), {marked} detected transitions, violations: {violations:?}"),
    )
}

/// Criteria that cannot pass as stated, with the reason printed next to the verdict.
const KNOWN_DEFECTS: [(u32, &str); 2] = [
    (
        8,
        "the wrong-reduction figure prunes XX's throw2 by priority; no equivalence quotient produces it (the merged state keeps three throw2 steps)",
    ),
    (
        9,
        "strong does not imply plain confluence (joinability need not be an equivalence), and weak and plain confluence are not closed under union; counterexamples are pinned in the suite",
    ),
];

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "unreduced leader size", unreduced_leader),
        (2, "reduced leader size", reduced_leader),
        (3, "symbolic detection on leader", detection),
        (4, "visited counts", visited_counts),
        (5, "reduction preserves bisimilarity", reduction_is_bisimilar),
        (6, "scheduler arithmetic", scheduler_arithmetic),
        (7, "confluence of the figure examples", figure_classification),
        (8, "DICE negative control", dice_negative_control),
        (9, "property suites", property_suites),
        (10, "soundness of detection", detection_soundness),
    ];
    let mut unexpected = Vec::new();
    for (id, title, check) in criteria {
        let o = check();
        let known = KNOWN_DEFECTS.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        match (o.pass, known) {
            (true, None) => println!("[{verdict}] {id}. {title}: {}", o.detail),
            (false, Some(why)) => println!("[{verdict}] {id}. {title}: {} (expected: {why})", o.detail),
            (false, None) => {
                println!("[{verdict}] {id}. {title}: {}", o.detail);
                unexpected.push(id);
            }
            (true, Some(_)) => {
                println!("[{verdict}] {id}. {title}: {} (listed as a known defect; revisit)", o.detail);
                unexpected.push(id);
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
