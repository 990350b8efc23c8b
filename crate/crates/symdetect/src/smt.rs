//! SMT-LIB 2 export of obligations. The formula is asserted negated, so `unsat` from a
//! solver means the obligation holds.

use lppe::{BinOp, Expr, Sort, Spec, Type};

use crate::obligation::{var_name, var_sort, ObVar, Obligation};

fn symbol(name: &str) -> String {
    format!("|{name}|")
}

fn ty(e: &Expr<ObVar>, spec: &Spec, ob: &Obligation) -> Type {
    match e {
        Expr::Bool(_) | Expr::Not(_) => Type::Bool,
        Expr::Int(_) => Type::Int,
        Expr::Rat(p) if p.is_integer() => Type::Int,
        Expr::Rat(_) | Expr::Div(..) => Type::Rat,
        Expr::Const { ty, .. } => Type::Enum(*ty),
        Expr::Var(v) => var_sort(spec, ob, v).ty(),
        Expr::Neg(a) => ty(a, spec, ob),
        Expr::Ite(_, a, b) => match (ty(a, spec, ob), ty(b, spec, ob)) {
            (Type::Int, Type::Rat) | (Type::Rat, Type::Int) => Type::Rat,
            (t, _) => t,
        },
        Expr::Bin(op, a, b) => match op {
            BinOp::Add | BinOp::Sub | BinOp::Mul => match (ty(a, spec, ob), ty(b, spec, ob)) {
                (Type::Int, Type::Int) => Type::Int,
                _ => Type::Rat,
            },
            _ => Type::Bool,
        },
    }
}

fn term(e: &Expr<ObVar>, want_real: bool, spec: &Spec, ob: &Obligation) -> String {
    let t = ty(e, spec, ob);
    let raw = match e {
        Expr::Bool(b) => b.to_string(),
        Expr::Int(i) if *i < 0 => format!("(- {})", -(*i as i128)),
        Expr::Int(i) => i.to_string(),
        Expr::Rat(p) => {
            let (n, d) = (p.numer().clone(), p.denom().clone());
            let num = if n < 0.into() { format!("(- {}.0)", -n) } else { format!("{n}.0") };
            if d == 1.into() && !want_real {
                return num.replace(".0", "");
            }
            format!("(/ {num} {d}.0)")
        }
        Expr::Const { code, .. } => code.to_string(),
        Expr::Var(v) => symbol(&var_name(spec, ob, v)),
        Expr::Not(a) => format!("(not {})", term(a, false, spec, ob)),
        Expr::Neg(a) => format!("(- {})", term(a, want_real, spec, ob)),
        Expr::Div(a, d) => format!("(/ {} {d}.0)", term(a, true, spec, ob)),
        Expr::Ite(c, a, b) => {
            let real = want_real || t == Type::Rat;
            format!("(ite {} {} {})", term(c, false, spec, ob), term(a, real, spec, ob), term(b, real, spec, ob))
        }
        Expr::Bin(op, a, b) => {
            let real = match op {
                BinOp::And | BinOp::Or => false,
                _ => want_real || ty(a, spec, ob) == Type::Rat || ty(b, spec, ob) == Type::Rat,
            };
            let f = match op {
                BinOp::Ne => "distinct",
                BinOp::And => "and",
                BinOp::Or => "or",
                other => other.symbol(),
            };
            format!("({f} {} {})", term(a, real, spec, ob), term(b, real, spec, ob))
        }
    };
    if want_real && t == Type::Int && !matches!(e, Expr::Rat(_)) {
        format!("(to_real {raw})")
    } else {
        raw
    }
}

/// A self-contained script: one constant per quantified variable, range assertions for
/// its sort, and the negated obligation.
pub fn to_smtlib(ob: &Obligation, spec: &Spec) -> String {
    let mut out = format!("; commutation of summand {} with summand {}\n(set-logic QF_LIRA)\n", ob.i + 1, ob.j + 1);
    for v in ob.variables() {
        let name = symbol(&var_name(spec, ob, &v));
        match var_sort(spec, ob, &v) {
            Sort::Bool => out.push_str(&format!("(declare-const {name} Bool)\n")),
            s => {
                let r = s.codes(&spec.enums);
                let (lo, hi) = (*r.start(), *r.end());
                let lit = |x: i64| if x < 0 { format!("(- {})", -(x as i128)) } else { x.to_string() };
                out.push_str(&format!("(declare-const {name} Int)\n(assert (<= {} {name} {}))\n", lit(lo), lit(hi)));
            }
        }
    }
    out.push_str(&format!("(assert (not {}))\n(check-sat)\n", term(&ob.formula(), false, spec, ob)));
    out
}
