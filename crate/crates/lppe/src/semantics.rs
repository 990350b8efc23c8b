//! Operational semantics: the transitions a summand generates in a concrete state, and
//! breadth-first instantiation of the reachable automaton.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Signed;
use pa_core::{Distribution, Label, Pa, PaBuilder, Prob};

use crate::ast::{Binder, Expr, Spec, Value, Var};
use crate::eval::eval;
use crate::LppeError;

/// A valuation of the globals, in declaration order. Booleans are 0/1, enumeration
/// constants their 1-based position.
pub type State = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of local times probabilistic combinations one summand may enumerate.
    pub enumeration_cap: u128,
    /// Largest number of states [`instantiate_with`] stores.
    pub state_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration_cap: 1_000_000, state_cap: 2_000_000 }
    }
}

/// One transition as generated by a summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub summand: usize,
    pub label: Label,
    pub dist: Distribution<State>,
}

/// Compact rendering of a state, e.g. `1|false|4`; safe as a fixture state name.
pub fn render_state(spec: &Spec, g: &State) -> String {
    spec.globals.iter().zip(g).map(|(d, &c)| d.sort.value_of(c).render(&spec.enums)).collect::<Vec<_>>().join("|")
}

/// Every assignment to `binders`, in lexicographic order of codes.
fn assignments(spec: &Spec, binders: &[Binder]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for b in binders {
        let codes: Vec<i64> = b.sort.codes(&spec.enums).collect();
        out = out.into_iter().flat_map(|prefix| codes.iter().map(move |&c| [prefix.clone(), vec![c]].concat())).collect();
    }
    out
}

struct Env<'a> {
    spec: &'a Spec,
    summand: usize,
    g: &'a [i64],
    d: &'a [i64],
    e: &'a [i64],
}

impl Env<'_> {
    fn lookup(&self, v: &Var) -> Option<Value> {
        let code = match v {
            Var::Global(k) => *self.g.get(*k)?,
            Var::Local(k) => *self.d.get(*k)?,
            Var::Prob(k) => *self.e.get(*k)?,
        };
        Some(self.spec.sort_of(self.summand, v).value_of(code))
    }

    fn eval(&self, e: &Expr) -> Result<Value, LppeError> {
        eval(e, &|v| self.lookup(v))
    }
}

pub fn summand_transitions(spec: &Spec, g: &State, i: usize) -> Result<Vec<(Label, Distribution<State>)>, LppeError> {
    summand_transitions_with(spec, g, i, &Limits::default())
}

/// The transitions summand `i` generates in state `g`: one per enabled choice of local
/// variables, with the weights of probabilistic choices that lead to the same next state
/// added up. Duplicates are dropped, first occurrence first.
pub fn summand_transitions_with(
    spec: &Spec,
    g: &State,
    i: usize,
    limits: &Limits,
) -> Result<Vec<(Label, Distribution<State>)>, LppeError> {
    let s = &spec.summands[i];
    let count = s.locals.iter().chain(&s.probs).map(|b| b.sort.size(&spec.enums)).product::<u128>();
    if count > limits.enumeration_cap {
        return Err(LppeError::EnumerationCap { summand: i, count, cap: limits.enumeration_cap });
    }
    let next = s.next(&spec.globals);
    let prob_choices = assignments(spec, &s.probs);
    let mut out: Vec<(Label, Distribution<State>)> = Vec::new();
    for d in assignments(spec, &s.locals) {
        let env = Env { spec, summand: i, g, d: &d, e: &[] };
        let ill = |msg: String| LppeError::IllFormedSummand {
            summand: i + 1,
            state: render_state(spec, g),
            locals: s
                .locals
                .iter()
                .zip(&d)
                .map(|(b, &c)| format!("{}={}", b.name, b.sort.value_of(c).render(&spec.enums)))
                .collect::<Vec<_>>()
                .join(", "),
            msg,
        };
        if !env.eval(&s.guard)?.as_bool().expect("guards are typed boolean") {
            continue;
        }
        let label = if s.is_tau() {
            Label::Tau
        } else if s.args.is_empty() {
            Label::visible(s.action.clone())
        } else {
            let args: Result<Vec<String>, LppeError> =
                s.args.iter().map(|a| Ok(env.eval(a)?.render(&spec.enums))).collect();
            Label::visible(format!("{}({})", s.action, args?.join(",")))
        };
        let mut masses: BTreeMap<State, Prob> = BTreeMap::new();
        for e in &prob_choices {
            let env = Env { spec, summand: i, g, d: &d, e };
            let w = env.eval(&s.weight)?.as_prob().expect("weights are typed numeric");
            if w.is_negative() {
                return Err(ill(format!("negative weight {w}")));
            }
            let mut target = State::with_capacity(next.len());
            for (k, n) in next.iter().enumerate() {
                let v = env.eval(n)?;
                let Some(code) = spec.globals[k].sort.code_of(&v) else {
                    return Err(ill(format!(
                        "next value {} of `{}` is outside its sort",
                        v.render(&spec.enums),
                        spec.globals[k].name
                    )));
                };
                target.push(code);
            }
            *masses.entry(target).or_insert_with(crate::ast::zero) += w;
        }
        let total: Prob = masses.values().sum();
        if total != crate::ast::one() {
            return Err(ill(format!("weights sum to {total}")));
        }
        let dist = Distribution::new(masses).expect("checked to sum to one");
        if !out.iter().any(|(l, x)| l == &label && x == &dist) {
            out.push((label, dist));
        }
    }
    Ok(out)
}

/// All transitions of `g`, summand by summand.
pub fn state_transitions(spec: &Spec, g: &State, limits: &Limits) -> Result<Vec<Generated>, LppeError> {
    let mut out = Vec::new();
    for i in 0..spec.summands.len() {
        for (label, dist) in summand_transitions_with(spec, g, i, limits)? {
            out.push(Generated { summand: i, label, dist });
        }
    }
    Ok(out)
}

/// The reachable automaton together with the valuation of each state and, per transition,
/// the summands that generate it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub pa: Pa,
    pub states: Vec<State>,
    pub origins: Vec<BTreeSet<usize>>,
}

pub fn instantiate(spec: &Spec) -> Result<Instance, LppeError> {
    instantiate_with(spec, &Limits::default())
}

/// Breadth-first exploration from the initial valuation. State ids follow discovery
/// order, so the numbering is a function of the spec alone.
pub fn instantiate_with(spec: &Spec, limits: &Limits) -> Result<Instance, LppeError> {
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut builder = PaBuilder::new();
    let mut origins: Vec<BTreeSet<usize>> = Vec::new();
    let mut intern = |s: &State, states: &mut Vec<State>, builder: &mut PaBuilder| -> Result<usize, LppeError> {
        if let Some(&id) = index.get(s) {
            return Ok(id);
        }
        if states.len() >= limits.state_cap {
            return Err(LppeError::StateCap { cap: limits.state_cap });
        }
        let id = builder.add_state(render_state(spec, s)).expect("valuations are distinct");
        index.insert(s.clone(), id);
        states.push(s.clone());
        Ok(id)
    };
    let init = spec.initial_state();
    intern(&init, &mut states, &mut builder)?;
    let mut head = 0;
    while head < states.len() {
        let g = states[head].clone();
        for t in state_transitions(spec, &g, limits)? {
            let mut entries = Vec::with_capacity(t.dist.len());
            for (target, p) in t.dist.iter() {
                entries.push((intern(target, &mut states, &mut builder)?, p.clone()));
            }
            let dist = Distribution::new(entries).expect("already normalised");
            let id = builder.add_transition(head, t.label, dist);
            if id == origins.len() {
                origins.push(BTreeSet::new());
            }
            origins[id].insert(t.summand);
        }
        head += 1;
    }
    builder.set_initial(0);
    Ok(Instance { pa: builder.build().expect("all targets interned"), states, origins })
}
