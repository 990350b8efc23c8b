use std::fmt;

use lppe::{render_expr, BinOp, Expr, Sort, Spec, Var};

use crate::simplify::{conjunction, conjuncts};
use crate::SymError;

/// Variables of an obligation. The two summands get separate copies of their binders so
/// that a summand paired with itself quantifies over two independent local choices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObVar {
    Global(usize),
    /// Nondeterministic binder of the confluent candidate `i`.
    LocalI(usize),
    /// Nondeterministic binder of the partner summand `j`.
    LocalJ(usize),
    /// Probabilistic binder of `j`.
    ProbJ(usize),
}

/// The commutation condition for candidate `i` against summand `j`, read as
/// `hypothesis -> (same_target || commutation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub i: usize,
    pub j: usize,
    /// Both guards hold in the current state.
    pub hypothesis: Expr<ObVar>,
    /// `i = j` and both choices lead to the same state; literally `false` when `i != j`.
    pub same_target: Expr<ObVar>,
    /// Each side stays enabled after the other, `j`'s action and weight are unchanged by
    /// `i`, and both orders reach the same state.
    pub commutation: Expr<ObVar>,
}

impl Obligation {
    pub fn formula(&self) -> Expr<ObVar> {
        Expr::bin(
            BinOp::Or,
            Expr::Not(Box::new(self.hypothesis.clone())),
            Expr::bin(BinOp::Or, self.same_target.clone(), self.commutation.clone()),
        )
    }

    pub fn hypothesis_conjuncts(&self) -> Vec<Expr<ObVar>> {
        conjuncts(&self.hypothesis)
    }

    /// Every variable the formula quantifies over, in a fixed order.
    pub fn variables(&self) -> Vec<ObVar> {
        let mut vs = Vec::new();
        self.formula().visit_vars(&mut |v| vs.push(*v));
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn display<'a>(&'a self, spec: &'a Spec) -> impl fmt::Display + 'a {
        ObligationDisplay { ob: self, spec }
    }
}

struct ObligationDisplay<'a> {
    ob: &'a Obligation,
    spec: &'a Spec,
}

impl fmt::Display for ObligationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: &ObVar| var_name(self.spec, self.ob, v);
        let show = |e: &Expr<ObVar>| render_expr(e, &self.spec.enums, &name);
        writeln!(f, "obligation for summands {} and {}", self.ob.i + 1, self.ob.j + 1)?;
        writeln!(f, "  if     {}", show(&self.ob.hypothesis))?;
        writeln!(f, "  then   {}", show(&self.ob.same_target))?;
        let parts = conjuncts(&self.ob.commutation);
        for (k, c) in parts.iter().enumerate() {
            writeln!(f, "  {} {}", if k == 0 { "or    " } else { "   and" }, show(c))?;
        }
        Ok(())
    }
}

/// Readable names: globals as declared, binders prefixed with the side they belong to.
pub fn var_name(spec: &Spec, ob: &Obligation, v: &ObVar) -> String {
    match v {
        ObVar::Global(k) => spec.globals[*k].name.clone(),
        ObVar::LocalI(k) => format!("i.{}", spec.summands[ob.i].locals[*k].name),
        ObVar::LocalJ(k) => format!("j.{}", spec.summands[ob.j].locals[*k].name),
        ObVar::ProbJ(k) => format!("j.{}", spec.summands[ob.j].probs[*k].name),
    }
}

pub fn var_sort<'a>(spec: &'a Spec, ob: &Obligation, v: &ObVar) -> &'a Sort {
    match v {
        ObVar::Global(k) => &spec.globals[*k].sort,
        ObVar::LocalI(k) => &spec.summands[ob.i].locals[*k].sort,
        ObVar::LocalJ(k) => &spec.summands[ob.j].locals[*k].sort,
        ObVar::ProbJ(k) => &spec.summands[ob.j].probs[*k].sort,
    }
}

/// A candidate is a tau summand whose probabilistic choice is trivial: at most one value
/// for its probabilistic binders, or weight literally one with a next state that ignores
/// them.
pub fn is_candidate(spec: &Spec, i: usize) -> bool {
    let s = &spec.summands[i];
    if !s.is_tau() {
        return false;
    }
    let choices: u128 = s.probs.iter().map(|b| b.sort.size(&spec.enums)).product();
    let unit_weight = matches!(s.weight.as_literal(), Some(lppe::Value::Int(1)));
    choices <= 1 || (unit_weight && !s.next(&spec.globals).iter().any(|n| n.mentions(|v| matches!(v, Var::Prob(_)))))
}

pub fn candidate_summands(spec: &Spec) -> Vec<usize> {
    (0..spec.summands.len()).filter(|&i| is_candidate(spec, i)).collect()
}

/// Rewrites an expression of summand `s` into obligation variables: globals become
/// `globals[k]`, binders are tagged with the side `s` plays.
fn place(e: &Expr, globals: &[Expr<ObVar>], side: Side, unique_prob: &[Expr<ObVar>]) -> Expr<ObVar> {
    e.subst(&mut |v| match v {
        Var::Global(k) => globals[*k].clone(),
        Var::Local(k) => Expr::Var(match side {
            Side::I => ObVar::LocalI(*k),
            Side::J => ObVar::LocalJ(*k),
        }),
        Var::Prob(k) => match side {
            Side::I => unique_prob[*k].clone(),
            Side::J => Expr::Var(ObVar::ProbJ(*k)),
        },
    })
}

#[derive(Clone, Copy)]
enum Side {
    I,
    J,
}

fn equal_vectors(a: &[Expr<ObVar>], b: &[Expr<ObVar>]) -> Vec<Expr<ObVar>> {
    a.iter().zip(b).map(|(x, y)| Expr::bin(BinOp::Eq, x.clone(), y.clone())).collect()
}

/// Builds the obligation for candidate `i` against summand `j`. The next state of `i` is
/// its unique target, so its probabilistic binders are fixed to their first value.
pub fn obligation(spec: &Spec, i: usize, j: usize) -> Result<Obligation, SymError> {
    let n = spec.summands.len();
    for k in [i, j] {
        if k >= n {
            return Err(SymError::NoSuchSummand { summand: k + 1, count: n });
        }
    }
    if !is_candidate(spec, i) {
        return Err(SymError::NotCandidate { summand: i + 1 });
    }
    let (si, sj) = (&spec.summands[i], &spec.summands[j]);
    let g: Vec<Expr<ObVar>> = (0..spec.globals.len()).map(|k| Expr::Var(ObVar::Global(k))).collect();
    let e_i: Vec<Expr<ObVar>> = si
        .probs
        .iter()
        .map(|b| Expr::value_literal(&b.sort.value_of(*b.sort.codes(&spec.enums).start())))
        .collect();
    let next_i = si.next(&spec.globals);
    let next_j = sj.next(&spec.globals);

    let n_i = |at: &[Expr<ObVar>]| -> Vec<Expr<ObVar>> { next_i.iter().map(|e| place(e, at, Side::I, &e_i)).collect() };
    let n_j = |at: &[Expr<ObVar>]| -> Vec<Expr<ObVar>> { next_j.iter().map(|e| place(e, at, Side::J, &[])).collect() };
    let ni_g = n_i(&g);
    let nj_g = n_j(&g);

    let c_i = |at: &[Expr<ObVar>]| place(&si.guard, at, Side::I, &e_i);
    let c_j = |at: &[Expr<ObVar>]| place(&sj.guard, at, Side::J, &[]);

    let hypothesis = Expr::bin(BinOp::And, c_i(&g), c_j(&g));
    let same_target = if i == j {
        // With `i = j` the partner's target is unique too; fix its binders like `i`'s.
        let nj_unique: Vec<Expr<ObVar>> =
            next_j.iter().map(|e| place(e, &g, Side::J, &[]).subst(&mut |v| unique_j(v, &e_i))).collect();
        conjunction(equal_vectors(&ni_g, &nj_unique))
    } else {
        Expr::Bool(false)
    };

    let mut parts = vec![c_j(&ni_g), c_i(&nj_g)];
    for a in &sj.args {
        parts.push(Expr::bin(BinOp::Eq, place(a, &g, Side::J, &[]), place(a, &ni_g, Side::J, &[])));
    }
    parts.push(Expr::bin(BinOp::Eq, place(&sj.weight, &g, Side::J, &[]), place(&sj.weight, &ni_g, Side::J, &[])));
    parts.extend(equal_vectors(&n_j(&ni_g), &n_i(&nj_g)));
    Ok(Obligation { i, j, hypothesis, same_target, commutation: conjunction(parts) })
}

fn unique_j(v: &ObVar, e_i: &[Expr<ObVar>]) -> Expr<ObVar> {
    match v {
        ObVar::ProbJ(k) => e_i[*k].clone(),
        other => Expr::Var(*other),
    }
}
