//! Recursive-descent parser with inline name resolution and type checking.

use crate::ast::*;
use crate::lexer::{lex, Tok, Token};
use crate::LppeError;

const KEYWORDS: &[&str] =
    &["process", "type", "sum", "psum", "of", "reset", "if", "then", "else", "true", "false", "and", "or", "not", "Bool"];

pub fn parse(text: &str) -> Result<Spec, LppeError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, enums: Vec::new(), globals: Vec::new(), locals: Vec::new(), probs: None };
    p.spec()
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    enums: Vec<EnumDecl>,
    globals: Vec<VarDecl>,
    locals: Vec<Binder>,
    /// `None` while probabilistic binders are out of scope (guards and action arguments).
    probs: Option<Vec<Binder>>,
}

type Typed = (Expr, Type);

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.col)
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, LppeError> {
        let (line, col) = self.here();
        let found = match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Decimal(p) => format!("`{p}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        };
        Err(LppeError::Syntax { line, col, msg: format!("{}, found {found}", msg.into()) })
    }

    fn mismatch<T>(&self, at: (usize, usize), msg: impl Into<String>) -> Result<T, LppeError> {
        Err(LppeError::SortMismatch { line: at.0, col: at.1, msg: msg.into() })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.next();
        }
        hit
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        let hit = self.is_kw(k);
        if hit {
            self.next();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), LppeError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.syntax(format!("expected `{s}`"))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), LppeError> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.syntax(format!("expected `{k}`"))
        }
    }

    fn ident(&mut self) -> Result<(String, (usize, usize)), LppeError> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s, at))
            }
            _ => self.syntax("expected an identifier"),
        }
    }

    fn int(&mut self) -> Result<i64, LppeError> {
        let neg = self.eat_sym("-");
        match *self.peek() {
            Tok::Int(i) => {
                self.next();
                Ok(if neg { -i } else { i })
            }
            _ => self.syntax("expected an integer"),
        }
    }

    fn type_name(&self, t: Type) -> String {
        match t {
            Type::Enum(e) => self.enums[e].name.clone(),
            other => other.to_string(),
        }
    }

    fn spec(&mut self) -> Result<Spec, LppeError> {
        while self.is_kw("type") {
            self.enum_decl()?;
        }
        self.expect_kw("process")?;
        let (name, _) = self.ident()?;
        self.expect_sym("(")?;
        if !self.is_sym(")") {
            loop {
                self.param()?;
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        self.eat_sym("=");
        let mut summands = Vec::new();
        self.eat_sym("+");
        while *self.peek() != Tok::Eof {
            summands.push(self.summand(&name)?);
            self.eat_sym("+");
        }
        Ok(Spec { name, enums: std::mem::take(&mut self.enums), globals: std::mem::take(&mut self.globals), summands })
    }

    fn check_fresh(&self, name: &str, at: (usize, usize)) -> Result<(), LppeError> {
        let taken = self.globals.iter().any(|g| g.name == name)
            || self.enums.iter().any(|e| e.name == name || e.constants.iter().any(|c| c == name));
        if taken {
            Err(LppeError::Duplicate { line: at.0, col: at.1, name: name.to_string() })
        } else {
            Ok(())
        }
    }

    fn enum_decl(&mut self) -> Result<(), LppeError> {
        self.expect_kw("type")?;
        let (name, at) = self.ident()?;
        self.check_fresh(&name, at)?;
        self.expect_sym("=")?;
        self.expect_sym("{")?;
        let mut constants: Vec<String> = Vec::new();
        loop {
            let (c, at) = self.ident()?;
            self.check_fresh(&c, at)?;
            if constants.contains(&c) || c == name {
                return Err(LppeError::Duplicate { line: at.0, col: at.1, name: c });
            }
            constants.push(c);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym("}")?;
        self.enums.push(EnumDecl { name, constants });
        Ok(())
    }

    fn sort(&mut self) -> Result<Sort, LppeError> {
        if self.eat_kw("Bool") {
            return Ok(Sort::Bool);
        }
        let at = self.here();
        let (lo, hi) = if self.eat_sym("{") {
            let lo = self.int()?;
            let hi = if self.eat_sym("..") {
                self.int()?
            } else {
                let mut last = lo;
                while self.eat_sym(",") {
                    let v = self.int()?;
                    if v != last + 1 {
                        return self.mismatch(at, "integer sets must list consecutive values");
                    }
                    last = v;
                }
                last
            };
            self.expect_sym("}")?;
            (lo, hi)
        } else if let Tok::Ident(name) = self.peek().clone() {
            if let Some(e) = self.enums.iter().position(|d| d.name == name) {
                self.next();
                return Ok(Sort::Enum(e));
            }
            return self.syntax("expected a sort");
        } else {
            let lo = self.int()?;
            self.expect_sym("..")?;
            (lo, self.int()?)
        };
        if lo > hi {
            return self.mismatch(at, format!("empty range {lo}..{hi}"));
        }
        Ok(Sort::Range(lo, hi))
    }

    fn param(&mut self) -> Result<(), LppeError> {
        let (name, at) = self.ident()?;
        self.check_fresh(&name, at)?;
        self.expect_sym(":")?;
        let sort = self.sort()?;
        self.expect_sym(":=")?;
        let at_init = self.here();
        let (e, _) = self.expr()?;
        let init = crate::eval::eval(&e, &|_: &Var| None).ok();
        let Some(init) = init.filter(|v| sort.code_of(v).is_some()) else {
            return self.mismatch(at_init, format!("initial value of `{name}` is not a constant of its sort"));
        };
        self.globals.push(VarDecl { name, sort, init });
        Ok(())
    }

    fn binders(&mut self) -> Result<Vec<Binder>, LppeError> {
        let mut out: Vec<Binder> = Vec::new();
        loop {
            let (name, at) = self.ident()?;
            if out.iter().any(|b| b.name == name) {
                return Err(LppeError::Duplicate { line: at.0, col: at.1, name });
            }
            self.expect_sym(":")?;
            out.push(Binder { name, sort: self.sort()? });
            if !self.eat_sym(",") {
                break;
            }
        }
        Ok(out)
    }

    fn summand(&mut self, process: &str) -> Result<Summand, LppeError> {
        self.locals = Vec::new();
        self.probs = None;
        if self.eat_kw("sum") {
            self.locals = self.binders()?;
            self.expect_sym(".")?;
        }
        let at = self.here();
        let (guard, ty) = self.expr()?;
        if ty != Type::Bool {
            return self.mismatch(at, format!("guard has sort {}", self.type_name(ty)));
        }
        self.expect_sym("=>")?;
        let (action, at_action) = match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) || s == "tau" => {
                let at = self.here();
                self.next();
                (s, at)
            }
            _ => return self.syntax("expected an action name"),
        };
        let mut args = Vec::new();
        if self.eat_sym("(") {
            loop {
                args.push(self.expr()?.0);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(")")?;
        }
        if action == "tau" && !args.is_empty() {
            return self.mismatch(at_action, "tau takes no arguments");
        }
        self.expect_sym(".")?;
        let (probs, weight) = if self.eat_kw("psum") {
            let probs = if self.is_kw("of") { Vec::new() } else { self.binders()? };
            self.probs = Some(probs.clone());
            self.expect_kw("of")?;
            let at = self.here();
            let (w, ty) = self.expr()?;
            if !ty.is_numeric() {
                return self.mismatch(at, format!("weight has sort {}", self.type_name(ty)));
            }
            self.expect_sym(".")?;
            (probs, w)
        } else {
            self.probs = Some(Vec::new());
            (Vec::new(), Expr::Int(1))
        };
        let (name, _) = self.ident()?;
        if name != process {
            return self.syntax(format!("expected a call of `{process}`"));
        }
        self.expect_sym("(")?;
        let mut updates: Vec<Update> = Vec::new();
        if !self.is_sym(")") {
            loop {
                updates.push(self.update(&updates)?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        Ok(Summand { locals: std::mem::take(&mut self.locals), guard, action, args, probs, weight, updates })
    }

    fn update(&mut self, earlier: &[Update]) -> Result<Update, LppeError> {
        let reset = self.eat_kw("reset");
        if reset {
            self.expect_sym("(")?;
        }
        let (name, at) = self.ident()?;
        let Some(global) = self.globals.iter().position(|g| g.name == name) else {
            return Err(LppeError::UnknownVariable { line: at.0, col: at.1, name });
        };
        if earlier.iter().any(|u| u.global == global) {
            return Err(LppeError::Duplicate { line: at.0, col: at.1, name });
        }
        if reset {
            self.expect_sym(")")?;
            return Ok(Update { global, rhs: UpdateRhs::Reset });
        }
        self.expect_sym(":=")?;
        let at_rhs = self.here();
        let (e, ty) = self.expr()?;
        let want = self.globals[global].sort.ty();
        if ty != want {
            return self.mismatch(
                at_rhs,
                format!("`{name}` has sort {} but is assigned a {}", self.type_name(want), self.type_name(ty)),
            );
        }
        Ok(Update { global, rhs: UpdateRhs::Expr(e) })
    }

    fn expr(&mut self) -> Result<Typed, LppeError> {
        if self.eat_kw("if") {
            let at = self.here();
            let (c, ct) = self.expr()?;
            if ct != Type::Bool {
                return self.mismatch(at, "condition must be boolean");
            }
            self.expect_kw("then")?;
            let at_a = self.here();
            let (a, at_) = self.expr()?;
            self.expect_kw("else")?;
            let (b, bt) = self.expr()?;
            let ty = join(at_, bt).map_or_else(|| self.mismatch(at_a, "branches have different sorts"), Ok)?;
            return Ok((Expr::Ite(Box::new(c), Box::new(a), Box::new(b)), ty));
        }
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::Sym("||") => BinOp::Or,
            Tok::Ident(s) if s == "or" => BinOp::Or,
            Tok::Sym("&&") => BinOp::And,
            Tok::Ident(s) if s == "and" => BinOp::And,
            Tok::Sym("=") => BinOp::Eq,
            Tok::Sym("!=") => BinOp::Ne,
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Sym("+") => BinOp::Add,
            Tok::Sym("-") => BinOp::Sub,
            Tok::Sym("*") => BinOp::Mul,
            _ => return None,
        })
    }

    /// Precedence climbing. Level 3 is prefix negation, handled in `unary`; comparisons
    /// do not chain.
    fn binary(&mut self, min: u8) -> Result<Typed, LppeError> {
        let mut lhs = self.unary(min)?;
        loop {
            if self.is_sym("/") && min <= 6 {
                self.next();
                let at = self.here();
                let d = match *self.peek() {
                    Tok::Int(d) if d != 0 => d,
                    _ => return self.syntax("division needs a nonzero integer literal on the right"),
                };
                self.next();
                if !lhs.1.is_numeric() {
                    return self.mismatch(at, "division of a non-number");
                }
                lhs = (Expr::Div(Box::new(lhs.0), d), Type::Rat);
                continue;
            }
            let Some(op) = self.binop() else { break };
            let prec = op.precedence();
            if prec < min {
                break;
            }
            let at = self.here();
            self.next();
            let rhs = self.binary(prec + 1)?;
            lhs = self.combine(op, lhs, rhs, at)?;
            if prec == 4 && self.binop().is_some_and(|o| o.precedence() == 4) {
                return self.syntax("comparisons do not chain; add parentheses");
            }
        }
        Ok(lhs)
    }

    fn combine(&self, op: BinOp, (a, at): Typed, (b, bt): Typed, pos: (usize, usize)) -> Result<Typed, LppeError> {
        let ty = match op {
            BinOp::And | BinOp::Or if at == Type::Bool && bt == Type::Bool => Type::Bool,
            BinOp::Add | BinOp::Sub | BinOp::Mul if at.is_numeric() && bt.is_numeric() => {
                if at == Type::Int && bt == Type::Int {
                    Type::Int
                } else {
                    Type::Rat
                }
            }
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge if at.is_numeric() && bt.is_numeric() => Type::Bool,
            BinOp::Eq | BinOp::Ne if join(at, bt).is_some() => Type::Bool,
            _ => {
                return self.mismatch(
                    pos,
                    format!("operator `{}` applied to {} and {}", op.symbol(), self.type_name(at), self.type_name(bt)),
                )
            }
        };
        Ok((Expr::bin(op, a, b), ty))
    }

    fn unary(&mut self, min: u8) -> Result<Typed, LppeError> {
        if min <= 3 && (self.is_sym("!") || self.is_kw("not")) {
            let at = self.here();
            self.next();
            let (e, ty) = self.binary(3)?;
            if ty != Type::Bool {
                return self.mismatch(at, "negation of a non-boolean");
            }
            return Ok((Expr::Not(Box::new(e)), Type::Bool));
        }
        if self.is_sym("-") {
            let at = self.here();
            self.next();
            let (e, ty) = self.unary(7)?;
            if !ty.is_numeric() {
                return self.mismatch(at, "negation of a non-number");
            }
            // Negative literals are literals, so printing and re-parsing is stable.
            return Ok(match e {
                Expr::Int(i) => (Expr::Int(i.checked_neg().ok_or(LppeError::Syntax { line: at.0, col: at.1, msg: "numeric literal out of range".into() })?), ty),
                Expr::Rat(p) => (Expr::Rat(-p), ty),
                e => (Expr::Neg(Box::new(e)), ty),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Typed, LppeError> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Int(i) => {
                self.next();
                Ok((Expr::Int(i), Type::Int))
            }
            Tok::Decimal(p) => {
                self.next();
                Ok((Expr::Rat(p), Type::Rat))
            }
            Tok::Sym("(") => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.next();
                Ok((Expr::Bool(s == "true"), Type::Bool))
            }
            Tok::Ident(s) if s == "if" => self.expr(),
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                self.resolve(&s, at)
            }
            _ => self.syntax("expected an expression"),
        }
    }

    fn resolve(&self, name: &str, at: (usize, usize)) -> Result<Typed, LppeError> {
        if let Some(probs) = &self.probs {
            if let Some(k) = probs.iter().position(|b| b.name == name) {
                return Ok((Expr::Var(Var::Prob(k)), probs[k].sort.ty()));
            }
        }
        if let Some(k) = self.locals.iter().position(|b| b.name == name) {
            return Ok((Expr::Var(Var::Local(k)), self.locals[k].sort.ty()));
        }
        if let Some(k) = self.globals.iter().position(|g| g.name == name) {
            return Ok((Expr::Var(Var::Global(k)), self.globals[k].sort.ty()));
        }
        for (e, decl) in self.enums.iter().enumerate() {
            if let Some(c) = decl.constants.iter().position(|c| c == name) {
                return Ok((Expr::Const { ty: e, code: c as i64 + 1 }, Type::Enum(e)));
            }
        }
        Err(LppeError::UnknownVariable { line: at.0, col: at.1, name: name.to_string() })
    }
}

fn join(a: Type, b: Type) -> Option<Type> {
    match (a, b) {
        _ if a == b => Some(a),
        (x, y) if x.is_numeric() && y.is_numeric() => Some(Type::Rat),
        _ => None,
    }
}
