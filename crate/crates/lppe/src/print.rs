//! Pretty-printing in the concrete syntax accepted by the parser.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use pa_core::Prob;

use crate::ast::*;

/// Renders an expression with minimal parentheses; `name` spells variables.
pub fn render_expr<V>(e: &Expr<V>, enums: &[EnumDecl], name: &impl Fn(&V) -> String) -> String {
    let mut out = String::new();
    go(e, 0, enums, name, &mut out);
    out
}

fn level<V>(e: &Expr<V>) -> u8 {
    match e {
        Expr::Ite(..) => 0,
        Expr::Bin(op, ..) => op.precedence(),
        Expr::Not(_) => 3,
        Expr::Div(..) => 6,
        Expr::Neg(_) => 7,
        Expr::Int(i) if *i < 0 => 7,
        Expr::Rat(p) if p.is_negative() => 7,
        _ => 8,
    }
}

fn go<V>(e: &Expr<V>, min: u8, enums: &[EnumDecl], name: &impl Fn(&V) -> String, out: &mut String) {
    let paren = level(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Bool(b) => write!(out, "{b}").unwrap(),
        Expr::Int(i) => write!(out, "{i}").unwrap(),
        Expr::Rat(p) => out.push_str(&rational_literal(p)),
        Expr::Const { ty, code } => out.push_str(&enums[*ty].constants[(*code - 1) as usize]),
        Expr::Var(v) => out.push_str(&name(v)),
        Expr::Not(a) => {
            out.push('!');
            go(a, 3, enums, name, out);
        }
        Expr::Neg(a) => {
            out.push('-');
            go(a, 8, enums, name, out);
        }
        Expr::Div(a, d) => {
            go(a, 6, enums, name, out);
            write!(out, "/{d}").unwrap();
        }
        Expr::Bin(op, a, b) => {
            let p = op.precedence();
            // Comparisons do not chain, so both sides bind tighter.
            go(a, if p == 4 { 5 } else { p }, enums, name, out);
            write!(out, " {} ", op.symbol()).unwrap();
            go(b, p + 1, enums, name, out);
        }
        Expr::Ite(c, a, b) => {
            out.push_str("if ");
            go(c, 0, enums, name, out);
            out.push_str(" then ");
            go(a, 0, enums, name, out);
            out.push_str(" else ");
            go(b, 0, enums, name, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Decimal notation when the denominator allows it, otherwise a parenthesised quotient.
fn rational_literal(p: &Prob) -> String {
    let mut den = p.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("({}/{})", p.numer(), p.denom());
    }
    let digits = twos.max(fives).max(1) as usize;
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (p * Prob::from_integer(scale.clone())).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    format!("{sign}{}.{:0>width$}", &abs / &scale, (&abs % &scale).to_string(), width = digits)
}

pub fn render_sort(s: &Sort, enums: &[EnumDecl]) -> String {
    match s {
        Sort::Bool => "Bool".into(),
        Sort::Range(lo, hi) => format!("{{{lo}..{hi}}}"),
        Sort::Enum(e) => enums[*e].name.clone(),
    }
}

fn binders(bs: &[Binder], enums: &[EnumDecl]) -> String {
    bs.iter().map(|b| format!("{}: {}", b.name, render_sort(&b.sort, enums))).collect::<Vec<_>>().join(", ")
}

/// Renders one summand on a single line.
pub fn render_summand(spec: &Spec, i: usize) -> String {
    let s = &spec.summands[i];
    let name = |v: &Var| spec.var_name(i, v).to_string();
    let mut out = String::new();
    if !s.locals.is_empty() {
        write!(out, "sum {} . ", binders(&s.locals, &spec.enums)).unwrap();
    }
    write!(out, "{} => {}", render_expr(&s.guard, &spec.enums, &name), s.action).unwrap();
    if !s.args.is_empty() {
        let args: Vec<String> = s.args.iter().map(|a| render_expr(a, &spec.enums, &name)).collect();
        write!(out, "({})", args.join(", ")).unwrap();
    }
    if !s.probs.is_empty() || s.weight != Expr::Int(1) {
        let bs = binders(&s.probs, &spec.enums);
        let bs = if bs.is_empty() { String::new() } else { format!("{bs} ") };
        write!(out, " . psum {bs}of {}", render_expr(&s.weight, &spec.enums, &name))
            .unwrap();
    }
    let updates: Vec<String> = s
        .updates
        .iter()
        .map(|u| match &u.rhs {
            UpdateRhs::Reset => format!("reset({})", spec.globals[u.global].name),
            UpdateRhs::Expr(e) => format!("{} := {}", spec.globals[u.global].name, render_expr(e, &spec.enums, &name)),
        })
        .collect();
    write!(out, " . {}({})", spec.name, updates.join(", ")).unwrap();
    out
}

pub fn render_spec(spec: &Spec) -> String {
    let mut out = String::new();
    for e in &spec.enums {
        writeln!(out, "type {} = {{{}}}", e.name, e.constants.join(", ")).unwrap();
    }
    let params: Vec<String> = spec
        .globals
        .iter()
        .map(|g| format!("{}: {} := {}", g.name, render_sort(&g.sort, &spec.enums), g.init.render(&spec.enums)))
        .collect();
    writeln!(out, "process {}({})", spec.name, params.join(", ")).unwrap();
    for i in 0..spec.summands.len() {
        writeln!(out, "{} {}", if i == 0 { " " } else { "+" }, render_summand(spec, i)).unwrap();
    }
    out
}
