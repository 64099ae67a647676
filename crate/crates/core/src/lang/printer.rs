//! Canonical pretty-printer. Two-space indentation, one statement per line,
//! minimal parentheses. The output always re-parses to the same tree.

use super::ast::*;
use std::fmt::Write;

const PREC_PREFIX: u8 = 10;
const PREC_POSTFIX: u8 = 11;
const PREC_ATOM: u8 = 12;

pub fn pretty_print(p: &Program) -> String {
    let mut out = String::new();
    for (i, f) in p.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let params: Vec<String> = f
            .params
            .iter()
            .map(|p| format!("{}: {}", p.name, p.kind))
            .collect();
        let _ = write!(out, "fn {}({}) -> {} ", f.name, params.join(", "), f.ret);
        block(&f.body, 0, &mut out);
        out.push('\n');
    }
    out
}

/// Canonical text of one statement, indented at depth 0, without trailing newline.
pub fn stmt_to_string(s: &Stmt) -> String {
    let mut out = String::new();
    stmt(s, 0, &mut out);
    out.trim_end_matches('\n').to_string()
}

/// Canonical text of a switch arm, without trailing newline.
pub fn case_to_string(c: &SwitchCase) -> String {
    let mut out = String::new();
    case(c, 0, &mut out);
    out.trim_end_matches('\n').to_string()
}

pub fn block_to_string(b: &Block) -> String {
    let mut out = String::new();
    block(b, 0, &mut out);
    out
}

pub fn expr_to_string(e: &Expr) -> String {
    let mut out = String::new();
    expr(e, &mut out);
    out
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// Writes `{`, the statements, and the closing `}` (no trailing newline).
fn block(b: &Block, depth: usize, out: &mut String) {
    out.push_str("{\n");
    for s in &b.stmts {
        stmt(s, depth + 1, out);
    }
    indent(depth, out);
    out.push('}');
}

fn case(c: &SwitchCase, depth: usize, out: &mut String) {
    indent(depth, out);
    let _ = write!(out, "case {}: ", c.label);
    block(&c.body, depth, out);
    out.push('\n');
}

fn stmt(s: &Stmt, depth: usize, out: &mut String) {
    indent(depth, out);
    match &s.kind {
        StmtKind::VarDecl { name, kind, init } => {
            let _ = write!(out, "let {name}: {kind} = ");
            expr(init, out);
            out.push_str(";\n");
        }
        StmtKind::Assign { name, value } => {
            let _ = write!(out, "{name} = ");
            expr(value, out);
            out.push_str(";\n");
        }
        StmtKind::If { .. } => {
            if_chain(s, depth, out);
            out.push('\n');
        }
        StmtKind::While { cond, body } => {
            out.push_str("while (");
            expr(cond, out);
            out.push_str(") ");
            block(body, depth, out);
            out.push('\n');
        }
        StmtKind::Switch {
            scrutinee,
            cases,
            default,
        } => {
            out.push_str("switch (");
            expr(scrutinee, out);
            out.push_str(") {\n");
            for c in cases {
                case(c, depth + 1, out);
            }
            if let Some(d) = default {
                indent(depth + 1, out);
                out.push_str("default: ");
                block(d, depth + 1, out);
                out.push('\n');
            }
            indent(depth, out);
            out.push_str("}\n");
        }
        StmtKind::Return(None) => out.push_str("return;\n"),
        StmtKind::Return(Some(e)) => {
            out.push_str("return ");
            expr(e, out);
            out.push_str(";\n");
        }
        StmtKind::Expr(e) => {
            expr(e, out);
            out.push_str(";\n");
        }
        StmtKind::Block(b) => {
            block(b, depth, out);
            out.push('\n');
        }
    }
}

/// `if (...) { } else if (...) { } else { }` without the trailing newline.
fn if_chain(s: &Stmt, depth: usize, out: &mut String) {
    if let StmtKind::If {
        cond,
        then_block,
        else_branch,
    } = &s.kind
    {
        out.push_str("if (");
        expr(cond, out);
        out.push_str(") ");
        block(then_block, depth, out);
        match else_branch.as_deref() {
            None => {}
            Some(Stmt {
                kind: StmtKind::Block(b),
                ..
            }) => {
                out.push_str(" else ");
                block(b, depth, out);
            }
            Some(nested) => {
                out.push_str(" else ");
                if_chain(nested, depth, out);
            }
        }
    }
}

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, _, _) => op.precedence(),
        ExprKind::Unary(..) => PREC_PREFIX,
        ExprKind::Update(op, _) if op.is_prefix() => PREC_PREFIX,
        ExprKind::Update(..) => PREC_POSTFIX,
        ExprKind::IntLit(v) if *v < 0 => PREC_PREFIX,
        _ => PREC_ATOM,
    }
}

fn parenthesized(e: &Expr, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        expr(e, out);
        out.push(')');
    } else {
        expr(e, out);
    }
}

fn expr(e: &Expr, out: &mut String) {
    match &e.kind {
        ExprKind::IntLit(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::BoolLit(b) => {
            let _ = write!(out, "{b}");
        }
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Update(op, name) => {
            if op.is_prefix() {
                out.push_str(op.symbol());
                out.push_str(name);
            } else {
                out.push_str(name);
                out.push_str(op.symbol());
            }
        }
        ExprKind::Unary(op, inner) => {
            out.push_str(op.symbol());
            // `-5` would re-parse as a literal and `--x` as a decrement.
            let wrap = precedence(inner) < PREC_PREFIX
                || (*op == UnaryOp::Neg
                    && (matches!(inner.kind, ExprKind::IntLit(_)) || starts_with_minus(inner)));
            parenthesized(inner, wrap, out);
        }
        ExprKind::Binary(op, l, r) => {
            let p = op.precedence();
            parenthesized(l, precedence(l) < p, out);
            let _ = write!(out, " {} ", op.symbol());
            parenthesized(r, precedence(r) <= p, out);
        }
        ExprKind::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr(a, out);
            }
            out.push(')');
        }
    }
}

fn starts_with_minus(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::IntLit(v) => *v < 0,
        ExprKind::Unary(UnaryOp::Neg, _) => true,
        ExprKind::Update(UpdateOp::PreDec, _) => true,
        ExprKind::Binary(_, l, _) => starts_with_minus(l),
        _ => false,
    }
}
