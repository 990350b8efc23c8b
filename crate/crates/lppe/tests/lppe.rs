use std::collections::BTreeSet;

use lppe::models::{load_bundled, EXAMPLE4, LEADER, LEADER_2SIDED};
use lppe::*;
use pa_core::{Label, Prob};

fn q(n: i64, d: i64) -> Prob {
    Prob::new(n.into(), d.into())
}

fn spec(name: &str) -> Spec {
    load_bundled(name).unwrap().unwrap()
}

#[test]
fn bundled_models_parse() {
    let leader = spec("leader");
    assert_eq!(leader.summands.len(), 12);
    assert_eq!(leader.globals.len(), 10);
    let ex = spec("example4");
    assert_eq!((ex.globals.len(), ex.summands.len()), (1, 2));
    assert_eq!(spec("leader-2sided").summands.len(), 12);
}

#[test]
fn syntax_errors_point_at_the_offending_token() {
    let text = "process X(pc: {1..2} := 1)\n  pc= => beep . X()\n";
    match parse(text) {
        Err(LppeError::Syntax { line, col, msg }) => {
            assert_eq!((line, col), (2, 7));
            assert!(msg.contains("`=>`"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn resolution_and_sort_errors() {
    let unknown = parse("process X(pc: {1..2} := 1)\n  qc = 1 => beep . X()\n");
    assert!(matches!(unknown, Err(LppeError::UnknownVariable { line: 2, col: 3, .. })), "{unknown:?}");
    let bad_guard = parse("process X(pc: {1..2} := 1)\n  pc + 1 => beep . X()\n");
    assert!(matches!(bad_guard, Err(LppeError::SortMismatch { .. })), "{bad_guard:?}");
    let bad_assign = parse("process X(pc: {1..2} := 1, b: Bool := true)\n  true => beep . X(b := pc)\n");
    assert!(matches!(bad_assign, Err(LppeError::SortMismatch { .. })), "{bad_assign:?}");
    let bad_init = parse("process X(pc: {1..2} := 3)\n  true => beep . X()\n");
    assert!(matches!(bad_init, Err(LppeError::SortMismatch { .. })), "{bad_init:?}");
    let dup = parse("process X(pc: {1..2} := 1, pc: Bool := true)\n");
    assert!(matches!(dup, Err(LppeError::Duplicate { .. })), "{dup:?}");
    // Probabilistic binders are not in scope in the guard.
    let scope = parse("process X(pc: {1..2} := 1)\n  i = 1 => beep . psum i: {1..2} of 1/2 . X(pc := i)\n");
    assert!(matches!(scope, Err(LppeError::UnknownVariable { .. })), "{scope:?}");
    let div = parse("process X(pc: {1..2} := 1)\n  true => beep . psum i: {1..2} of 1/pc . X(pc := i)\n");
    assert!(matches!(div, Err(LppeError::Syntax { .. })), "{div:?}");
}

fn eval_in(spec: &Spec, src: &str, env: &[(&str, Value)]) -> Value {
    let text = format!("{}\n  {src} => beep . X()\n", lppe::render_spec(spec).lines().next().unwrap());
    let parsed = parse(&text).unwrap();
    let guard = &parsed.summands[0].guard;
    eval(guard, &|v: &Var| match v {
        Var::Global(k) => env.iter().find(|(n, _)| *n == parsed.globals[*k].name).map(|(_, x)| x.clone()),
        _ => None,
    })
    .unwrap()
}

#[test]
fn evaluation_examples() {
    let s = parse("process X(pc: {1..2} := 1, d_2: {1..6} := 1, e_2: {1..6} := 1)\n").unwrap();
    assert_eq!(eval_in(&s, "pc = 1", &[("pc", Value::Int(1))]), Value::Bool(true));
    assert_eq!(eval_in(&s, "d_2 > e_2", &[("d_2", Value::Int(3)), ("e_2", Value::Int(5))]), Value::Bool(false));
    assert_eq!(eval_in(&s, "pc/3 = 2/3", &[("pc", Value::Int(2))]), Value::Bool(true));
    assert_eq!(eval_in(&s, "(if pc = 2 then 0.5 else 1) * 2 = 1", &[("pc", Value::Int(2))]), Value::Bool(true));
    let w = Expr::<Var>::Div(Box::new(Expr::Var(Var::Prob(0))), 3);
    assert_eq!(eval(&w, &|_| Some(Value::Int(2))).unwrap(), Value::Rat(q(2, 3)));
}

#[test]
fn example4_transitions() {
    let s = spec("example4");
    let pc1 = vec![1];
    let out = summand_transitions(&s, &pc1, 0).unwrap();
    assert_eq!(out.len(), 3);
    let (label, dist) = &out[1];
    assert_eq!(label, &Label::visible("output(2)"));
    assert_eq!(dist.prob(&vec![1]), q(1, 3));
    assert_eq!(dist.prob(&vec![2]), q(2, 3));
    assert!(summand_transitions(&s, &pc1, 1).unwrap().is_empty());
    let inst = instantiate(&s).unwrap();
    assert_eq!((inst.pa.num_states(), inst.pa.num_transitions()), (2, 4));
    assert_eq!(inst.pa.names(), ["1", "2"]);
}

#[test]
fn equal_targets_add_their_weights() {
    let s = parse("process X(x: {0..3} := 0)\n  x = 0 => go . psum i: {1..4} of 1/4 . X(x := if i <= 3 then 1 else 2)\n").unwrap();
    let out = summand_transitions(&s, &vec![0], 0).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].1.prob(&vec![1]), q(3, 4));
    assert_eq!(out[0].1.prob(&vec![2]), q(1, 4));
}

#[test]
fn ill_formed_weights_are_reported() {
    let s = parse("process X(x: {0..3} := 0)\n  sum n: {1..2} . x = 0 => go(n) . psum i: {1..2} of n/3 . X(x := i)\n").unwrap();
    let err = summand_transitions(&s, &vec![0], 0).unwrap_err();
    assert_eq!(err.to_string(), "summand 1 at state 0 with locals [n=1]: weights sum to 2/3");
    let s = parse("process X(x: {0..1} := 0)\n  true => go . X(x := x + 1)\n").unwrap();
    let err = instantiate(&s).unwrap_err();
    assert!(err.to_string().contains("outside its sort"), "{err}");
}

#[test]
fn leader_first_summand_throws_a_die() {
    let s = spec("leader");
    let out = summand_transitions(&s, &s.initial_state(), 0).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].0, Label::Tau);
    assert_eq!(out[0].1.len(), 6);
    assert!(out[0].1.iter().all(|(_, p)| *p == q(1, 6)));
}

#[test]
fn leader_instantiates_to_the_published_size() {
    let inst = instantiate(&spec("leader")).unwrap();
    assert_eq!((inst.pa.num_states(), inst.pa.num_transitions()), (3763, 6158));
    let labels: BTreeSet<String> = inst.pa.labels().iter().map(|l| l.to_string()).collect();
    assert!(labels.contains("leader(one)") && labels.contains("follower(two)"), "{labels:?}");
    assert!(inst.origins.iter().all(|o| o.len() == 1));
    let small = instantiate(&spec("leader-2sided")).unwrap();
    assert_eq!((small.pa.num_states(), small.pa.num_transitions()), (127, 198));
}

#[test]
fn false_guards_give_a_single_state() {
    let s = parse("process X(x: {0..3} := 2)\n  false => go . X(x := 1)\n").unwrap();
    let inst = instantiate(&s).unwrap();
    assert_eq!((inst.pa.num_states(), inst.pa.num_transitions()), (1, 0));
}

#[test]
fn instantiation_is_deterministic() {
    let a = instantiate(&parse(LEADER).unwrap()).unwrap();
    let b = instantiate(&parse(LEADER).unwrap()).unwrap();
    assert_eq!(a.states, b.states);
    assert_eq!(format!("{:?}", a.pa), format!("{:?}", b.pa));
}

#[test]
fn caps_fail_fast() {
    let s = spec("leader");
    let tight = Limits { enumeration_cap: 5, state_cap: 10 };
    assert!(matches!(instantiate_with(&s, &tight), Err(LppeError::EnumerationCap { summand: 0, count: 6, cap: 5 })));
    let tight = Limits { enumeration_cap: 100, state_cap: 10 };
    assert_eq!(instantiate_with(&s, &tight).unwrap_err(), LppeError::StateCap { cap: 10 });
}

#[test]
fn bundled_models_round_trip() {
    for text in [EXAMPLE4, LEADER, LEADER_2SIDED] {
        let s = parse(text).unwrap();
        let printed = render_spec(&s);
        let again = parse(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(again, s);
        assert_eq!(render_spec(&again), printed);
    }
}
