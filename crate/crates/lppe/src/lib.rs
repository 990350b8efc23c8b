//! Linear probabilistic process equations.
//!
//! A [`Spec`] has typed global variables with initial values and a list of summands, each
//! a guarded, probabilistic, symbolic transition. [`parse`] reads the concrete syntax,
//! [`render_spec`] prints it back, and [`instantiate`] explores the reachable automaton.
//!
//! ```text
//! type Id = {one, two}
//! process X(pc: {1..2} := 1, flag: Bool := false)
//!     sum n: {1..3} . pc = 1 => output(n) . psum i: {1..2} of i/3 . X(pc := i)
//!   + pc = 2 => beep . X(pc := 1, reset(flag))
//! ```
//!
//! A summand is `[sum binders .] guard => action[(args)] [. psum binders of weight] .
//! X(updates)`. Updates are `x := expr` or `reset(x)`; unlisted globals are unchanged, and
//! an omitted `psum` means a single target with weight one. `tau` is the hidden action.
//! Summand binders may reuse global names and shadow them. Division only accepts a nonzero
//! integer literal on the right. Summand indices in this API are 0-based.

mod ast;
mod error;
pub mod eval;
mod lexer;
pub mod models;
mod parser;
mod print;
mod semantics;

pub use ast::{BinOp, Binder, EnumDecl, Expr, Sort, Spec, Summand, Type, Update, UpdateRhs, Value, Var, VarDecl};
pub use error::LppeError;
pub use eval::eval;
pub use parser::parse;
pub use print::{render_expr, render_sort, render_spec, render_summand};
pub use semantics::{
    instantiate, instantiate_with, render_state, state_transitions, summand_transitions, summand_transitions_with,
    Generated, Instance, Limits, State,
};
