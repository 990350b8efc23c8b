//! Random small specifications for soundness testing.
//!
//! Globals are a few small integer ranges and booleans; summands touch one or two of them
//! so that disjointness and guard clashes both occur, and a good share are tau summands
//! with deterministic targets so that detection has candidates to work on.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use lppe::Spec;

const INTS: [&str; 3] = ["x", "y", "z"];
const BOOLS: [&str; 2] = ["p", "q"];
const MAX: i64 = 2;

fn int_atom(rng: &mut StdRng, v: &str) -> String {
    let c = rng.gen_range(0..=MAX);
    match rng.gen_range(0..5) {
        0 | 1 => format!("{v} = {c}"),
        2 => format!("{v} != {c}"),
        3 => format!("{v} < {}", c + 1),
        _ => format!("{v} <= {}", INTS.choose(rng).unwrap()),
    }
}

fn bool_atom(rng: &mut StdRng, v: &str) -> String {
    if rng.gen() {
        v.to_string()
    } else {
        format!("!{v}")
    }
}

/// A value for integer global `v`, possibly using the local binder `n` and the
/// probabilistic binder `e`, both ranging over `{0..1}`.
fn int_update(rng: &mut StdRng, v: &str, local: bool, prob: bool) -> String {
    let options = 4 + local as usize + prob as usize;
    match rng.gen_range(0..options) {
        0 => rng.gen_range(0..=MAX).to_string(),
        1 => INTS.choose(rng).unwrap().to_string(),
        2 => format!("if {v} < {MAX} then {v} + 1 else 0"),
        3 => format!("reset({v})"),
        4 if local => "n".into(),
        _ => "e".into(),
    }
}

fn bool_update(rng: &mut StdRng, v: &str, prob: bool) -> String {
    match rng.gen_range(0..4 + prob as usize) {
        0 => "true".into(),
        1 => "false".into(),
        2 => format!("!{v}"),
        3 => BOOLS.choose(rng).unwrap().to_string(),
        _ => "e = 1".into(),
    }
}

fn summand(rng: &mut StdRng) -> String {
    let local = rng.gen_bool(0.25);
    let prob = rng.gen_bool(0.3);
    let tau = rng.gen_bool(0.65);
    let mut vars: Vec<&str> = INTS.iter().chain(&BOOLS).copied().collect();
    vars.shuffle(rng);
    let touched = &vars[..rng.gen_range(1..=2)];

    let mut guard = Vec::new();
    for v in touched {
        if rng.gen_bool(0.8) {
            guard.push(if BOOLS.contains(v) { bool_atom(rng, v) } else { int_atom(rng, v) });
        }
    }
    if local && rng.gen() {
        guard.push(format!("n = {}", rng.gen_range(0..2)));
    }
    let guard = if guard.is_empty() { "true".to_string() } else { guard.join(" && ") };

    let mut updates = Vec::new();
    for v in touched {
        if rng.gen_bool(0.8) {
            let rhs = if BOOLS.contains(v) { bool_update(rng, v, prob) } else { int_update(rng, v, local, prob) };
            updates.push(if rhs.starts_with("reset") { rhs } else { format!("{v} := {rhs}") });
        }
    }

    let action = if tau {
        "tau".to_string()
    } else if rng.gen() {
        format!("a({})", touched[0])
    } else {
        ["b", "c"].choose(rng).unwrap().to_string()
    };
    let sum = if local { "sum n: {0..1} . " } else { "" };
    let psum = if prob {
        let w = if rng.gen() { "1/2" } else { "if e = 0 then 0.25 else 0.75" };
        format!("psum e: {{0..1}} of {w} . ")
    } else {
        String::new()
    };
    format!("{sum}{guard} => {action} . {psum}R({})", updates.join(", "))
}

/// Source text of a random specification with 2 to 5 summands.
pub fn random_spec_text(rng: &mut StdRng) -> String {
    let mut params: Vec<String> = INTS.iter().map(|v| format!("{v}: {{0..{MAX}}} := {}", rng.gen_range(0..=MAX))).collect();
    params.extend(BOOLS.iter().map(|v| format!("{v}: Bool := {}", rng.gen::<bool>())));
    let mut text = format!("process R({})\n", params.join(", "));
    for k in 0..rng.gen_range(2..=5) {
        text.push_str(&format!("{} {}\n", if k == 0 { " " } else { "+" }, summand(rng)));
    }
    text
}

pub fn random_spec(rng: &mut StdRng) -> Spec {
    let text = random_spec_text(rng);
    lppe::parse(&text).unwrap_or_else(|e| panic!("generated specification does not parse: {e}\n{text}"))
}
