use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use lppe::{eval, Expr, Spec, UpdateRhs, Var};

use crate::obligation::{var_sort, ObVar, Obligation};
use crate::simplify::{conjuncts, simplify};

/// Which heuristic closed an obligation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// The two guards cannot hold together.
    ContradictoryGuards,
    /// The summands neither read nor write a common global.
    DisjointVariables,
    /// A summand without local binders paired with itself takes the same step twice.
    SelfCommutation,
    /// The whole formula folds to `true`.
    Folding,
}

impl Rule {
    pub fn short(self) -> &'static str {
        match self {
            Rule::ContradictoryGuards => "h1",
            Rule::DisjointVariables => "h2",
            Rule::SelfCommutation => "h3",
            Rule::Folding => "fold",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let long = match self {
            Rule::ContradictoryGuards => "contradictory guards",
            Rule::DisjointVariables => "disjoint variables",
            Rule::SelfCommutation => "self-commutation",
            Rule::Folding => "constant folding",
        };
        write!(f, "{} ({long})", self.short())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofResult {
    Proven(Rule),
    Unknown(String),
}

impl ProofResult {
    pub fn is_proven(&self) -> bool {
        matches!(self, ProofResult::Proven(_))
    }
}

impl fmt::Display for ProofResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofResult::Proven(r) => write!(f, "proven by {r}"),
            ProofResult::Unknown(why) => write!(f, "unknown: {why}"),
        }
    }
}

/// Globals a summand reads (guard, action arguments, weight, explicit updates) and writes
/// (globals whose next value is not syntactically their current value).
pub fn footprint(spec: &Spec, i: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let s = &spec.summands[i];
    let mut reads = BTreeSet::new();
    let mut note = |e: &Expr| {
        e.visit_vars(&mut |v| {
            if let Var::Global(k) = v {
                reads.insert(*k);
            }
        })
    };
    note(&s.guard);
    s.args.iter().for_each(&mut note);
    note(&s.weight);
    for u in &s.updates {
        if let UpdateRhs::Expr(e) = &u.rhs {
            note(e);
        }
    }
    let writes = s
        .next(&spec.globals)
        .iter()
        .enumerate()
        .filter(|(k, e)| **e != Expr::Var(Var::Global(*k)))
        .map(|(k, _)| k)
        .collect();
    (reads, writes)
}

/// Largest sort the contradiction search enumerates for a single variable.
const DOMAIN_CAP: u128 = 1 << 16;

/// Looks for a variable whose sort has no value satisfying every hypothesis conjunct that
/// mentions only that variable. Covers `x = 2 && x = 4`, `b && !b` and range clashes.
fn contradiction(spec: &Spec, ob: &Obligation, hypothesis: &Expr<ObVar>) -> Option<String> {
    let mut by_var: BTreeMap<ObVar, Vec<Expr<ObVar>>> = BTreeMap::new();
    for c in conjuncts(hypothesis) {
        if c == Expr::Bool(false) {
            return Some("hypothesis folds to false".into());
        }
        let mut vs = BTreeSet::new();
        c.visit_vars(&mut |v| {
            vs.insert(*v);
        });
        if vs.len() == 1 {
            by_var.entry(*vs.iter().next().unwrap()).or_default().push(c);
        }
    }
    for (v, atoms) in by_var {
        let sort = var_sort(spec, ob, &v);
        if sort.size(&spec.enums) > DOMAIN_CAP {
            continue;
        }
        let satisfiable = sort.codes(&spec.enums).any(|code| {
            let val = sort.value_of(code);
            atoms.iter().all(|a| !matches!(eval(a, &|_: &ObVar| Some(val.clone())), Ok(lppe::Value::Bool(false))))
        });
        if !satisfiable {
            let name = crate::obligation::var_name(spec, ob, &v);
            return Some(format!("no value of {name} satisfies both guards"));
        }
    }
    None
}

/// Substitutes into `e` the values the hypothesis pins down: `b`, `!b` and `x = c`
/// conjuncts. Only used on the conclusion, where the hypothesis may be assumed.
fn assume(hypothesis: &Expr<ObVar>, e: &Expr<ObVar>) -> Expr<ObVar> {
    let mut known: BTreeMap<ObVar, Expr<ObVar>> = BTreeMap::new();
    for c in conjuncts(hypothesis) {
        match &c {
            Expr::Var(v) => {
                known.insert(*v, Expr::Bool(true));
            }
            Expr::Not(a) => {
                if let Expr::Var(v) = **a {
                    known.insert(v, Expr::Bool(false));
                }
            }
            Expr::Bin(lppe::BinOp::Eq, a, b) => match (&**a, &**b) {
                (Expr::Var(v), l) | (l, Expr::Var(v)) if l.as_literal().is_some() => {
                    known.insert(*v, l.clone());
                }
                _ => {}
            },
            _ => {}
        }
    }
    e.subst(&mut |v| known.get(v).cloned().unwrap_or(Expr::Var(*v)))
}

/// Tries the heuristics in a fixed order; the first that applies wins.
pub fn discharge(ob: &Obligation, spec: &Spec) -> ProofResult {
    let hypothesis = simplify(&ob.hypothesis);
    if contradiction(spec, ob, &hypothesis).is_some() {
        return ProofResult::Proven(Rule::ContradictoryGuards);
    }
    let (ri, wi) = footprint(spec, ob.i);
    let (rj, wj) = footprint(spec, ob.j);
    let used_i: BTreeSet<usize> = ri.union(&wi).copied().collect();
    let used_j: BTreeSet<usize> = rj.union(&wj).copied().collect();
    if ob.i != ob.j && used_i.is_disjoint(&used_j) {
        return ProofResult::Proven(Rule::DisjointVariables);
    }
    if ob.i == ob.j && spec.summands[ob.i].locals.is_empty() {
        return ProofResult::Proven(Rule::SelfCommutation);
    }
    let conclusion = Expr::bin(lppe::BinOp::Or, ob.same_target.clone(), ob.commutation.clone());
    if simplify(&assume(&hypothesis, &conclusion)) == Expr::Bool(true) {
        return ProofResult::Proven(Rule::Folding);
    }
    let shared: Vec<&str> = used_i.intersection(&used_j).map(|&k| spec.globals[k].name.as_str()).collect();
    ProofResult::Unknown(if shared.is_empty() {
        "no rule applies".into()
    } else {
        format!("guards may overlap and both use {}", shared.join(", "))
    })
}
