//! Bottom-up constant folding with a handful of syntactic identities.

use lppe::{eval, BinOp, Expr, Value};

fn lit<V>(v: &Value) -> Expr<V> {
    Expr::value_literal(v)
}

fn as_bool<V>(e: &Expr<V>) -> Option<bool> {
    match e {
        Expr::Bool(b) => Some(*b),
        _ => None,
    }
}

/// Folds closed subterms, short-circuits connectives and decides comparisons between
/// syntactically identical operands. The result is equivalent under every assignment.
pub fn simplify<V: Clone + PartialEq>(e: &Expr<V>) -> Expr<V> {
    let folded = match e {
        Expr::Bool(_) | Expr::Int(_) | Expr::Rat(_) | Expr::Const { .. } | Expr::Var(_) => return e.clone(),
        Expr::Not(a) => match simplify(a) {
            Expr::Bool(b) => Expr::Bool(!b),
            Expr::Not(inner) => *inner,
            a => Expr::Not(Box::new(a)),
        },
        Expr::Neg(a) => Expr::Neg(Box::new(simplify(a))),
        Expr::Div(a, d) => Expr::Div(Box::new(simplify(a)), *d),
        Expr::Ite(c, a, b) => {
            let (c, a, b) = (simplify(c), simplify(a), simplify(b));
            match (as_bool(&c), as_bool(&a), as_bool(&b)) {
                (Some(true), ..) => return a,
                (Some(false), ..) => return b,
                (None, Some(true), Some(false)) => return c,
                (None, Some(false), Some(true)) => return simplify(&Expr::Not(Box::new(c))),
                _ if a == b => return a,
                _ => Expr::Ite(Box::new(c), Box::new(a), Box::new(b)),
            }
        }
        Expr::Bin(op, a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match op {
                BinOp::And => match (as_bool(&a), as_bool(&b)) {
                    (Some(false), _) | (_, Some(false)) => return Expr::Bool(false),
                    (Some(true), _) => return b,
                    (_, Some(true)) => return a,
                    _ => {}
                },
                BinOp::Or => match (as_bool(&a), as_bool(&b)) {
                    (Some(true), _) | (_, Some(true)) => return Expr::Bool(true),
                    (Some(false), _) => return b,
                    (_, Some(false)) => return a,
                    _ => {}
                },
                BinOp::Eq | BinOp::Le | BinOp::Ge if a == b => return Expr::Bool(true),
                BinOp::Ne | BinOp::Lt | BinOp::Gt if a == b => return Expr::Bool(false),
                _ => {}
            }
            Expr::Bin(*op, Box::new(a), Box::new(b))
        }
    };
    let closed = !folded.mentions(|_| true);
    if closed {
        if let Ok(v) = eval(&folded, &|_: &V| None) {
            return lit(&v);
        }
    }
    folded
}

/// The conjuncts of `e`, with nested conjunctions flattened.
pub fn conjuncts<V: Clone>(e: &Expr<V>) -> Vec<Expr<V>> {
    match e {
        Expr::Bin(BinOp::And, a, b) => {
            let mut out = conjuncts(a);
            out.extend(conjuncts(b));
            out
        }
        _ => vec![e.clone()],
    }
}

/// Right-nested conjunction; `true` when empty.
pub fn conjunction<V>(parts: impl IntoIterator<Item = Expr<V>>) -> Expr<V> {
    let mut parts: Vec<Expr<V>> = parts.into_iter().collect();
    let Some(mut acc) = parts.pop() else { return Expr::Bool(true) };
    while let Some(p) = parts.pop() {
        acc = Expr::bin(BinOp::And, p, acc);
    }
    acc
}
