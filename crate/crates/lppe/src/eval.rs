use num_traits::Zero;

use crate::ast::{BinOp, Expr, Value};
use crate::LppeError;

fn err(msg: impl Into<String>) -> LppeError {
    LppeError::Eval(msg.into())
}

/// Evaluates `e`, looking variables up with `env`.
pub fn eval<V>(e: &Expr<V>, env: &impl Fn(&V) -> Option<Value>) -> Result<Value, LppeError> {
    Ok(match e {
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Int(i) => Value::Int(*i),
        Expr::Rat(p) => Value::rat(p.clone()),
        Expr::Const { ty, code } => Value::Enum(*ty, *code),
        Expr::Var(v) => env(v).ok_or_else(|| err("unbound variable"))?,
        Expr::Not(a) => Value::Bool(!eval(a, env)?.as_bool().ok_or_else(|| err("negation of a non-boolean"))?),
        Expr::Neg(a) => match eval(a, env)? {
            Value::Int(i) => Value::Int(i.checked_neg().ok_or_else(|| err("integer overflow"))?),
            Value::Rat(p) => Value::Rat(-p),
            _ => return Err(err("negation of a non-number")),
        },
        Expr::Div(a, d) => {
            let p = eval(a, env)?.as_prob().ok_or_else(|| err("division of a non-number"))?;
            Value::rat(p / pa_core::Prob::from_integer((*d).into()))
        }
        Expr::Ite(c, a, b) => {
            if eval(c, env)?.as_bool().ok_or_else(|| err("non-boolean condition"))? {
                eval(a, env)?
            } else {
                eval(b, env)?
            }
        }
        Expr::Bin(BinOp::And, a, b) => {
            let l = eval(a, env)?.as_bool().ok_or_else(|| err("conjunction of a non-boolean"))?;
            Value::Bool(l && eval(b, env)?.as_bool().ok_or_else(|| err("conjunction of a non-boolean"))?)
        }
        Expr::Bin(BinOp::Or, a, b) => {
            let l = eval(a, env)?.as_bool().ok_or_else(|| err("disjunction of a non-boolean"))?;
            Value::Bool(l || eval(b, env)?.as_bool().ok_or_else(|| err("disjunction of a non-boolean"))?)
        }
        Expr::Bin(op, a, b) => binary(*op, eval(a, env)?, eval(b, env)?)?,
    })
}

fn binary(op: BinOp, l: Value, r: Value) -> Result<Value, LppeError> {
    if let (Value::Int(x), Value::Int(y)) = (&l, &r) {
        let (x, y) = (*x, *y);
        let overflow = || err("integer overflow");
        return Ok(match op {
            BinOp::Add => Value::Int(x.checked_add(y).ok_or_else(overflow)?),
            BinOp::Sub => Value::Int(x.checked_sub(y).ok_or_else(overflow)?),
            BinOp::Mul => Value::Int(x.checked_mul(y).ok_or_else(overflow)?),
            BinOp::Eq => Value::Bool(x == y),
            BinOp::Ne => Value::Bool(x != y),
            BinOp::Lt => Value::Bool(x < y),
            BinOp::Le => Value::Bool(x <= y),
            BinOp::Gt => Value::Bool(x > y),
            BinOp::Ge => Value::Bool(x >= y),
            BinOp::And | BinOp::Or => unreachable!("handled lazily"),
        });
    }
    match op {
        BinOp::Eq => return Ok(Value::Bool(same(&l, &r)?)),
        BinOp::Ne => return Ok(Value::Bool(!same(&l, &r)?)),
        _ => {}
    }
    let (x, y) = match (l.as_prob(), r.as_prob()) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(err(format!("operator {} needs numbers", op.symbol()))),
    };
    Ok(match op {
        BinOp::Add => Value::rat(x + y),
        BinOp::Sub => Value::rat(x - y),
        BinOp::Mul => Value::rat(x * y),
        BinOp::Lt => Value::Bool(x < y),
        BinOp::Le => Value::Bool(x <= y),
        BinOp::Gt => Value::Bool(x > y),
        BinOp::Ge => Value::Bool(x >= y),
        _ => unreachable!(),
    })
}

fn same(l: &Value, r: &Value) -> Result<bool, LppeError> {
    match (l.as_prob(), r.as_prob()) {
        (Some(x), Some(y)) => Ok((x - y).is_zero()),
        (None, None) => match (l, r) {
            (Value::Bool(a), Value::Bool(b)) => Ok(a == b),
            (Value::Enum(e, a), Value::Enum(f, b)) if e == f => Ok(a == b),
            _ => Err(err("comparison of values of different sorts")),
        },
        _ => Err(err("comparison of values of different sorts")),
    }
}
