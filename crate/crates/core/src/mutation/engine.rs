//! Mutant generation and application.
//!
//! Generation walks the checked program once, collects every candidate
//! rewrite of the active operators, orders them by (target NodeId, operator
//! name, replacement text), drops candidates whose mutated canonical text
//! equals the original or an earlier candidate, and numbers the survivors
//! densely from zero.

use super::operators::{Membership, Operator, OperatorSet};
use crate::lang::ast::*;
use crate::lang::parser::{parse_expr, parse_stmt};
use crate::lang::printer::{case_to_string, expr_to_string, pretty_print, stmt_to_string};
use crate::lang::rewrite::{apply_edit, Edit};
use crate::lang::{check, LangError, TypeInfo};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MutationError {
    #[error("stale descriptor for mutant {id}: {reason}")]
    StaleDescriptor { id: u32, reason: String },
    #[error("mutant {id} does not produce a valid program: {source}")]
    Invalid {
        id: u32,
        #[source]
        source: LangError,
    },
}

/// One single-point syntactic change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantDescriptor {
    pub id: u32,
    pub operator: Operator,
    pub target: NodeId,
    pub span: Span,
    /// Canonical text of the target node before the change.
    pub original: String,
    /// Canonical text of the replacement; empty for deletions.
    pub replacement: String,
    pub description: String,
}

impl MutantDescriptor {
    pub fn membership(&self) -> Membership {
        self.operator.membership()
    }
}

/// A generated mutant: its descriptor and the canonical text of the mutated program.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub descriptor: MutantDescriptor,
    pub text: String,
}

struct Candidate {
    operator: Operator,
    target: NodeId,
    span: Span,
    original: String,
    replacement: String,
    edit: Edit,
    function: String,
}

/// All mutants of `program` under `set`, deduplicated and numbered.
///
/// `program` must have passed the static check (as returned by [`crate::lang::parse`]).
pub fn generate(program: &Program, set: OperatorSet) -> Vec<Mutant> {
    let types = check(program).expect("generate requires a statically checked program");
    let mut collector = Collector {
        types: &types,
        set,
        function: String::new(),
        ret: Kind::Void,
        out: Vec::new(),
    };
    for f in &program.functions {
        collector.function = f.name.clone();
        collector.ret = f.ret;
        collector.block(&f.body);
    }
    let mut candidates = collector.out;
    candidates.sort_by(|a, b| {
        (a.target, a.operator.name(), &a.replacement).cmp(&(b.target, b.operator.name(), &b.replacement))
    });

    let original_text = pretty_print(program);
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(original_text);
    let mut mutants = Vec::new();
    for c in candidates {
        let mut mutated = program.clone();
        let applied = apply_edit(&mut mutated, c.target, c.edit.clone());
        debug_assert!(applied, "candidate edit must hit its target");
        let text = pretty_print(&mutated);
        if !seen.insert(text.clone()) {
            continue;
        }
        let id = mutants.len() as u32;
        let description = describe(&c);
        mutants.push(Mutant {
            descriptor: MutantDescriptor {
                id,
                operator: c.operator,
                target: c.target,
                span: c.span,
                original: c.original,
                replacement: c.replacement,
                description,
            },
            text,
        });
    }
    mutants
}

/// Descriptor-only view of [`generate`].
pub fn generate_mutants(program: &Program, set: OperatorSet) -> Vec<MutantDescriptor> {
    generate(program, set).into_iter().map(|m| m.descriptor).collect()
}

fn describe(c: &Candidate) -> String {
    let what = if c.replacement.is_empty() {
        format!("deleted `{}`", first_line(&c.original))
    } else {
        format!("replaced `{}` with `{}`", first_line(&c.original), first_line(&c.replacement))
    };
    format!("{}: {} at {} in `{}`", c.operator, what, c.span, c.function)
}

fn first_line(s: &str) -> String {
    let mut lines = s.lines();
    let first = lines.next().unwrap_or("").trim().to_string();
    if lines.next().is_some() {
        format!("{first} ...")
    } else {
        first
    }
}

/// Applies `m` to `program`, returning a fresh renumbered program.
pub fn apply_mutant(program: &Program, m: &MutantDescriptor) -> Result<Program, MutationError> {
    let stale = |reason: String| MutationError::StaleDescriptor { id: m.id, reason };
    let node = program
        .find(m.target)
        .ok_or_else(|| stale(format!("no node {}", m.target)))?;
    if node.span() != m.span {
        return Err(stale(format!("span {} does not match node at {}", m.span, node.span())));
    }
    let (original, edit) = match node {
        NodeRef::Expr(e) => {
            let replacement = parse_expr(&m.replacement).map_err(|e| stale(e.to_string()))?;
            (expr_to_string(e), Edit::ReplaceExpr(replacement))
        }
        NodeRef::Stmt(s) if m.replacement.is_empty() => (stmt_to_string(s), Edit::RemoveStmt),
        NodeRef::Stmt(s) => {
            let replacement = parse_stmt(&m.replacement).map_err(|e| stale(e.to_string()))?;
            (stmt_to_string(s), Edit::ReplaceStmt(replacement))
        }
        NodeRef::Case(c) if m.replacement.is_empty() => (case_to_string(c), Edit::RemoveCase),
        other => return Err(stale(format!("node {} cannot be mutated", other.id()))),
    };
    if original != m.original {
        return Err(stale(format!("expected `{}`, found `{}`", m.original, original)));
    }
    let mut mutated = program.clone();
    if !apply_edit(&mut mutated, m.target, edit) {
        return Err(stale(format!("edit did not apply at {}", m.target)));
    }
    mutated.renumber();
    check(&mutated).map_err(|source| MutationError::Invalid { id: m.id, source })?;
    Ok(mutated)
}

fn lit_int(v: i64) -> Expr {
    Expr::new(ExprKind::IntLit(v), Span::default())
}

fn lit_bool(b: bool) -> Expr {
    Expr::new(ExprKind::BoolLit(b), Span::default())
}

fn default_value(kind: Kind) -> Expr {
    match kind {
        Kind::Bool => lit_bool(false),
        _ => lit_int(0),
    }
}

fn negated(e: &Expr) -> Expr {
    Expr::new(ExprKind::Unary(UnaryOp::Not, Box::new(e.clone())), Span::default())
}

fn is_literal(e: &Expr, value: &Expr) -> bool {
    e.kind == value.kind
}

fn cond_boundary(op: BinaryOp) -> Option<BinaryOp> {
    use BinaryOp::*;
    match op {
        Lt => Some(Le),
        Le => Some(Lt),
        Gt => Some(Ge),
        Ge => Some(Gt),
        _ => None,
    }
}

fn negate_cond(op: BinaryOp) -> Option<BinaryOp> {
    use BinaryOp::*;
    match op {
        Eq => Some(Ne),
        Ne => Some(Eq),
        Lt => Some(Ge),
        Ge => Some(Lt),
        Gt => Some(Le),
        Le => Some(Gt),
        _ => None,
    }
}

fn math(op: BinaryOp) -> Option<BinaryOp> {
    use BinaryOp::*;
    match op {
        Add => Some(Sub),
        Sub => Some(Add),
        Mul => Some(Div),
        Div => Some(Mul),
        Rem => Some(Mul),
        _ => None,
    }
}

struct Collector<'a> {
    types: &'a TypeInfo,
    set: OperatorSet,
    function: String,
    ret: Kind,
    out: Vec<Candidate>,
}

impl Collector<'_> {
    /// True when `op` should emit in this run (active and not absorbed).
    fn active(&self, op: Operator) -> bool {
        if !self.set.contains(op) {
            return false;
        }
        match op.absorbed_by() {
            Some(by) => !self.set.contains(by),
            None => true,
        }
    }

    fn push_expr(&mut self, op: Operator, target: &Expr, replacement: Expr) {
        let replacement_text = expr_to_string(&replacement);
        self.out.push(Candidate {
            operator: op,
            target: target.id,
            span: target.span,
            original: expr_to_string(target),
            replacement: replacement_text,
            edit: Edit::ReplaceExpr(replacement),
            function: self.function.clone(),
        });
    }

    fn push_stmt(&mut self, op: Operator, target: &Stmt, replacement: Option<Stmt>) {
        let (replacement_text, edit) = match replacement {
            Some(s) => (stmt_to_string(&s), Edit::ReplaceStmt(s)),
            None => (String::new(), Edit::RemoveStmt),
        };
        self.out.push(Candidate {
            operator: op,
            target: target.id,
            span: target.span,
            original: stmt_to_string(target),
            replacement: replacement_text,
            edit,
            function: self.function.clone(),
        });
    }

    fn block(&mut self, b: &Block) {
        for s in &b.stmts {
            self.stmt(s);
        }
    }

    fn condition(&mut self, cond: &Expr) {
        if self.active(Operator::RemoveCond) {
            for value in [true, false] {
                let lit = lit_bool(value);
                if !is_literal(cond, &lit) {
                    self.push_expr(Operator::RemoveCond, cond, lit);
                }
            }
        }
        self.expr(cond);
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::VarDecl { name, kind, init } => {
                let default = default_value(*kind);
                if self.active(Operator::MemberVariable) && !is_literal(init, &default) {
                    let replacement = Stmt::new(
                        StmtKind::VarDecl {
                            name: name.clone(),
                            kind: *kind,
                            init: default,
                        },
                        s.span,
                    );
                    self.push_stmt(Operator::MemberVariable, s, Some(replacement));
                }
                self.expr(init);
            }
            StmtKind::Assign { name, value } => {
                let kind = self.types.kind_of(value.id).unwrap_or(Kind::Int);
                let default = default_value(kind);
                if self.active(Operator::MemberVariable) && !is_literal(value, &default) {
                    let replacement = Stmt::new(
                        StmtKind::Assign {
                            name: name.clone(),
                            value: default,
                        },
                        s.span,
                    );
                    self.push_stmt(Operator::MemberVariable, s, Some(replacement));
                }
                self.expr(value);
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                self.condition(cond);
                self.block(then_block);
                if let Some(e) = else_branch {
                    self.stmt(e);
                }
            }
            StmtKind::While { cond, body } => {
                self.condition(cond);
                self.block(body);
            }
            StmtKind::Switch {
                scrutinee,
                cases,
                default,
            } => {
                self.expr(scrutinee);
                for c in cases {
                    if default.is_some() && self.active(Operator::Switch) {
                        self.out.push(Candidate {
                            operator: Operator::Switch,
                            target: c.id,
                            span: c.span,
                            original: case_to_string(c),
                            replacement: String::new(),
                            edit: Edit::RemoveCase,
                            function: self.function.clone(),
                        });
                    }
                    self.block(&c.body);
                }
                if let Some(d) = default {
                    self.block(d);
                }
            }
            StmtKind::Return(Some(e)) => {
                if self.active(Operator::ReturnValues) {
                    let new_value = match self.ret {
                        Kind::Bool => Some(negated(e)),
                        Kind::Int if e.kind == ExprKind::IntLit(0) => Some(lit_int(1)),
                        Kind::Int => Some(Expr::new(
                            ExprKind::Binary(BinaryOp::Add, Box::new(e.clone()), Box::new(lit_int(1))),
                            Span::default(),
                        )),
                        Kind::Void => None,
                    };
                    if let Some(v) = new_value {
                        let replacement = Stmt::new(StmtKind::Return(Some(v)), s.span);
                        self.push_stmt(Operator::ReturnValues, s, Some(replacement));
                    }
                }
                self.expr(e);
            }
            StmtKind::Return(None) => {}
            StmtKind::Expr(e) => {
                let void_call = matches!(&e.kind, ExprKind::Call(..))
                    && self.types.kind_of(e.id) == Some(Kind::Void);
                if void_call && self.active(Operator::VoidMethodCall) {
                    self.push_stmt(Operator::VoidMethodCall, s, None);
                }
                self.expr(e);
            }
            StmtKind::Block(b) => self.block(b),
        }
    }

    fn binary(&mut self, e: &Expr, op: BinaryOp, l: &Expr, r: &Expr) {
        let with_op = |new_op: BinaryOp| {
            Expr::new(
                ExprKind::Binary(new_op, Box::new(l.clone()), Box::new(r.clone())),
                Span::default(),
            )
        };
        if self.active(Operator::CondBoundary) {
            if let Some(to) = cond_boundary(op) {
                self.push_expr(Operator::CondBoundary, e, with_op(to));
            }
        }
        if self.active(Operator::NegateCond) {
            if let Some(to) = negate_cond(op) {
                self.push_expr(Operator::NegateCond, e, with_op(to));
            }
        }
        if self.active(Operator::Math) {
            if let Some(to) = math(op) {
                self.push_expr(Operator::Math, e, with_op(to));
            }
        }
        if self.active(Operator::ROR) && op.class() == BinaryClass::Relational {
            for to in BinaryOp::RELATIONAL.into_iter().filter(|o| *o != op) {
                self.push_expr(Operator::ROR, e, with_op(to));
            }
        }
        if op.class() == BinaryClass::Arithmetic {
            if self.active(Operator::AOR) {
                for to in BinaryOp::ARITHMETIC.into_iter().filter(|o| *o != op) {
                    self.push_expr(Operator::AOR, e, with_op(to));
                }
            }
            if self.active(Operator::AOD) {
                self.push_expr(Operator::AOD, e, l.clone());
                self.push_expr(Operator::AOD, e, r.clone());
            }
        }
        if self.active(Operator::OBBN) {
            match op {
                BinaryOp::BitAnd => self.push_expr(Operator::OBBN, e, with_op(BinaryOp::BitOr)),
                BinaryOp::BitOr => self.push_expr(Operator::OBBN, e, with_op(BinaryOp::BitAnd)),
                _ => {}
            }
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::IntLit(a) => {
                let a = *a;
                if self.active(Operator::InlineConst) {
                    let to = if a == 1 { 0 } else { a.wrapping_add(1) };
                    self.push_expr(Operator::InlineConst, e, lit_int(to));
                }
                if self.active(Operator::CRCR) {
                    let mut emitted = Vec::new();
                    for to in [a.wrapping_neg(), 1, 0, a.wrapping_add(1), a.wrapping_sub(1)] {
                        if to != a && !emitted.contains(&to) {
                            emitted.push(to);
                            self.push_expr(Operator::CRCR, e, lit_int(to));
                        }
                    }
                }
            }
            ExprKind::BoolLit(b) => {
                // CRCR covers int constants only, so bool flips stay with InlineConst.
                if self.set.contains(Operator::InlineConst) {
                    self.push_expr(Operator::InlineConst, e, lit_bool(!b));
                }
            }
            ExprKind::Var(name) => match self.types.kind_of(e.id) {
                Some(Kind::Int) => {
                    if self.active(Operator::ABS) {
                        let neg = Expr::new(ExprKind::Unary(UnaryOp::Neg, Box::new(e.clone())), Span::default());
                        self.push_expr(Operator::ABS, e, neg);
                    }
                    if self.active(Operator::UOI) {
                        for op in [UpdateOp::PostInc, UpdateOp::PostDec] {
                            let upd = Expr::new(ExprKind::Update(op, name.clone()), Span::default());
                            self.push_expr(Operator::UOI, e, upd);
                        }
                    }
                }
                Some(Kind::Bool) if self.active(Operator::UOI) => {
                    self.push_expr(Operator::UOI, e, negated(e));
                }
                _ => {}
            },
            ExprKind::Update(op, name) => {
                if self.active(Operator::Increments) {
                    let flipped = Expr::new(ExprKind::Update(op.flipped(), name.clone()), Span::default());
                    self.push_expr(Operator::Increments, e, flipped);
                }
                if self.active(Operator::UOI) {
                    let var = Expr::new(ExprKind::Var(name.clone()), Span::default());
                    self.push_expr(Operator::UOI, e, var);
                }
            }
            ExprKind::Unary(op, inner) => {
                if *op == UnaryOp::Neg
                    && matches!(inner.kind, ExprKind::Var(_))
                    && self.active(Operator::InvertNeg)
                {
                    self.push_expr(Operator::InvertNeg, e, (**inner).clone());
                }
                if self.active(Operator::UOI) {
                    self.push_expr(Operator::UOI, e, (**inner).clone());
                }
                self.expr(inner);
            }
            ExprKind::Binary(op, l, r) => {
                self.binary(e, *op, l, r);
                self.expr(l);
                self.expr(r);
            }
            ExprKind::Call(_, args) => {
                match self.types.kind_of(e.id) {
                    Some(k @ (Kind::Int | Kind::Bool)) if self.active(Operator::MethodCall) => {
                        self.push_expr(Operator::MethodCall, e, default_value(k));
                    }
                    _ => {}
                }
                for a in args {
                    self.expr(a);
                }
            }
        }
    }
}
