use std::fmt;

use num_traits::{One, Zero};
use pa_core::Prob;

/// Domain of a variable: booleans, an inclusive integer range, or a declared enumeration
/// whose constants are represented by the integers `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Range(i64, i64),
    Enum(usize),
}

impl Sort {
    /// Values in increasing order, encoded as in [`crate::State`]: booleans as 0/1.
    pub fn codes(&self, enums: &[EnumDecl]) -> std::ops::RangeInclusive<i64> {
        match self {
            Sort::Bool => 0..=1,
            Sort::Range(lo, hi) => *lo..=*hi,
            Sort::Enum(e) => 1..=enums[*e].constants.len() as i64,
        }
    }

    pub fn size(&self, enums: &[EnumDecl]) -> u128 {
        let r = self.codes(enums);
        (r.end() - r.start() + 1) as u128
    }

    pub fn ty(&self) -> Type {
        match self {
            Sort::Bool => Type::Bool,
            Sort::Range(..) => Type::Int,
            Sort::Enum(e) => Type::Enum(*e),
        }
    }

    pub fn value_of(&self, code: i64) -> Value {
        match self {
            Sort::Bool => Value::Bool(code != 0),
            Sort::Range(..) => Value::Int(code),
            Sort::Enum(e) => Value::Enum(*e, code),
        }
    }

    /// The code of `v` if it lies in this sort.
    pub fn code_of(&self, v: &Value) -> Option<i64> {
        match (self, v) {
            (Sort::Bool, Value::Bool(b)) => Some(*b as i64),
            (Sort::Range(lo, hi), Value::Int(i)) if lo <= i && i <= hi => Some(*i),
            (Sort::Enum(e), Value::Enum(f, c)) if e == f => Some(*c),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Bool,
    Int,
    Rat,
    Enum(usize),
}

impl Type {
    pub fn is_numeric(self) -> bool {
        matches!(self, Type::Int | Type::Rat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnumDecl {
    pub name: String,
    pub constants: Vec<String>,
}

/// A runtime value. Rationals with denominator one are always normalised to `Int`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Rat(Prob),
    Enum(usize, i64),
}

impl Value {
    pub fn rat(p: Prob) -> Value {
        if p.is_integer() {
            if let Ok(i) = i64::try_from(p.to_integer()) {
                return Value::Int(i);
            }
        }
        Value::Rat(p)
    }

    pub fn as_prob(&self) -> Option<Prob> {
        match self {
            Value::Int(i) => Some(Prob::from_integer((*i).into())),
            Value::Rat(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn render(&self, enums: &[EnumDecl]) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Rat(p) => p.to_string(),
            Value::Enum(e, c) => enums[*e].constants[(*c - 1) as usize].clone(),
        }
    }
}

/// Variable references after name resolution: summand binders shadow globals, and
/// probabilistic binders shadow nondeterministic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Global(usize),
    Local(usize),
    Prob(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }
}

/// Expression tree, generic over how variables are named so that the symbolic analysis
/// can rename binders of two summands apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr<V = Var> {
    Bool(bool),
    Int(i64),
    /// Exact rational literal, written as a decimal (`1.0`, `0.25`).
    Rat(Prob),
    Const { ty: usize, code: i64 },
    Var(V),
    Not(Box<Expr<V>>),
    Neg(Box<Expr<V>>),
    Bin(BinOp, Box<Expr<V>>, Box<Expr<V>>),
    /// Division by a nonzero integer literal; the only division the language has.
    Div(Box<Expr<V>>, i64),
    Ite(Box<Expr<V>>, Box<Expr<V>>, Box<Expr<V>>),
}

impl<V> Expr<V> {
    pub fn bin(op: BinOp, a: Expr<V>, b: Expr<V>) -> Expr<V> {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> W) -> Expr<W> {
        self.subst(&mut |v| Expr::Var(f(v)))
    }

    /// Replaces every variable by an expression.
    pub fn subst<W>(&self, f: &mut impl FnMut(&V) -> Expr<W>) -> Expr<W> {
        match self {
            Expr::Bool(b) => Expr::Bool(*b),
            Expr::Int(i) => Expr::Int(*i),
            Expr::Rat(p) => Expr::Rat(p.clone()),
            Expr::Const { ty, code } => Expr::Const { ty: *ty, code: *code },
            Expr::Var(v) => f(v),
            Expr::Not(a) => Expr::Not(Box::new(a.subst(f))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.subst(f))),
            Expr::Bin(op, a, b) => {
                let a = a.subst(f);
                Expr::Bin(*op, Box::new(a), Box::new(b.subst(f)))
            }
            Expr::Div(a, d) => Expr::Div(Box::new(a.subst(f)), *d),
            Expr::Ite(c, a, b) => {
                let c = c.subst(f);
                let a = a.subst(f);
                Expr::Ite(Box::new(c), Box::new(a), Box::new(b.subst(f)))
            }
        }
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(&V)) {
        match self {
            Expr::Bool(_) | Expr::Int(_) | Expr::Rat(_) | Expr::Const { .. } => {}
            Expr::Var(v) => f(v),
            Expr::Not(a) | Expr::Neg(a) | Expr::Div(a, _) => a.visit_vars(f),
            Expr::Bin(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Expr::Ite(c, a, b) => {
                c.visit_vars(f);
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    pub fn mentions(&self, pred: impl Fn(&V) -> bool) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= pred(v));
        found
    }

    pub fn value_literal(v: &Value) -> Expr<V> {
        match v {
            Value::Bool(b) => Expr::Bool(*b),
            Value::Int(i) => Expr::Int(*i),
            Value::Rat(p) => Expr::Rat(p.clone()),
            Value::Enum(e, c) => Expr::Const { ty: *e, code: *c },
        }
    }

    /// The literal's value, if this is a literal.
    pub fn as_literal(&self) -> Option<Value> {
        match self {
            Expr::Bool(b) => Some(Value::Bool(*b)),
            Expr::Int(i) => Some(Value::Int(*i)),
            Expr::Rat(p) => Some(Value::rat(p.clone())),
            Expr::Const { ty, code } => Some(Value::Enum(*ty, *code)),
            _ => None,
        }
    }
}

/// A bound variable of a summand (`sum` or `psum`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub sort: Sort,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub sort: Sort,
    pub init: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UpdateRhs {
    Expr(Expr),
    /// Back to the declared initial value.
    Reset,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Update {
    pub global: usize,
    pub rhs: UpdateRhs,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Summand {
    pub locals: Vec<Binder>,
    pub guard: Expr,
    pub action: String,
    pub args: Vec<Expr>,
    pub probs: Vec<Binder>,
    pub weight: Expr,
    /// Explicit updates in source order; unlisted globals keep their value.
    pub updates: Vec<Update>,
}

impl Summand {
    pub fn is_tau(&self) -> bool {
        self.action == "tau"
    }

    /// Next-state expression for every global, with defaults and resets filled in.
    pub fn next(&self, globals: &[VarDecl]) -> Vec<Expr> {
        let mut next: Vec<Expr> = (0..globals.len()).map(|k| Expr::Var(Var::Global(k))).collect();
        for u in &self.updates {
            next[u.global] = match &u.rhs {
                UpdateRhs::Expr(e) => e.clone(),
                UpdateRhs::Reset => Expr::value_literal(&globals[u.global].init),
            };
        }
        next
    }
}

/// A linear process: typed globals with initial values and a list of summands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spec {
    pub name: String,
    pub enums: Vec<EnumDecl>,
    pub globals: Vec<VarDecl>,
    pub summands: Vec<Summand>,
}

impl Spec {
    pub fn global_index(&self, name: &str) -> Option<usize> {
        self.globals.iter().position(|g| g.name == name)
    }

    pub fn initial_state(&self) -> crate::State {
        self.globals.iter().map(|g| g.sort.code_of(&g.init).expect("initial values are checked")).collect()
    }

    /// Human-readable name of a variable inside summand `i`.
    pub fn var_name(&self, i: usize, v: &Var) -> &str {
        match v {
            Var::Global(k) => &self.globals[*k].name,
            Var::Local(k) => &self.summands[i].locals[*k].name,
            Var::Prob(k) => &self.summands[i].probs[*k].name,
        }
    }

    pub fn sort_of(&self, i: usize, v: &Var) -> &Sort {
        match v {
            Var::Global(k) => &self.globals[*k].sort,
            Var::Local(k) => &self.summands[i].locals[*k].sort,
            Var::Prob(k) => &self.summands[i].probs[*k].sort,
        }
    }
}

pub(crate) fn one() -> Prob {
    Prob::one()
}

pub(crate) fn zero() -> Prob {
    Prob::zero()
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => f.write_str("Bool"),
            Type::Int => f.write_str("integer"),
            Type::Rat => f.write_str("rational"),
            Type::Enum(e) => write!(f, "enumeration #{e}"),
        }
    }
}
