//! In-place single-node edits addressed by NodeId.

use super::ast::*;

#[derive(Debug, Clone)]
pub enum Edit {
    ReplaceExpr(Expr),
    ReplaceStmt(Stmt),
    /// Delete a statement from its enclosing block.
    RemoveStmt,
    /// Delete a `case` arm from its switch.
    RemoveCase,
}

/// Applies `edit` at `target`. Returns false when no node of the matching
/// shape carries that id. NodeIds are left stale; call [`Program::renumber`].
pub fn apply_edit(p: &mut Program, target: NodeId, edit: Edit) -> bool {
    let mut slot = Some(edit);
    for f in &mut p.functions {
        if edit_block(&mut f.body, target, &mut slot) {
            return true;
        }
    }
    false
}

fn edit_block(b: &mut Block, target: NodeId, edit: &mut Option<Edit>) -> bool {
    if let Some(pos) = b.stmts.iter().position(|s| s.id == target) {
        match edit.take() {
            Some(Edit::RemoveStmt) => {
                b.stmts.remove(pos);
                return true;
            }
            Some(Edit::ReplaceStmt(mut s)) => {
                s.span = b.stmts[pos].span;
                b.stmts[pos] = s;
                return true;
            }
            other => {
                *edit = other;
                return false;
            }
        }
    }
    b.stmts.iter_mut().any(|s| edit_stmt(s, target, edit))
}

fn edit_stmt(s: &mut Stmt, target: NodeId, edit: &mut Option<Edit>) -> bool {
    match &mut s.kind {
        StmtKind::VarDecl { init, .. } => edit_expr(init, target, edit),
        StmtKind::Assign { value, .. } => edit_expr(value, target, edit),
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            if edit_expr(cond, target, edit) || edit_block(then_block, target, edit) {
                return true;
            }
            match else_branch {
                Some(e) if e.id == target => match edit.take() {
                    Some(Edit::ReplaceStmt(mut new)) => {
                        new.span = e.span;
                        **e = new;
                        true
                    }
                    other => {
                        *edit = other;
                        false
                    }
                },
                Some(e) => edit_stmt(e, target, edit),
                None => false,
            }
        }
        StmtKind::While { cond, body } => edit_expr(cond, target, edit) || edit_block(body, target, edit),
        StmtKind::Switch {
            scrutinee,
            cases,
            default,
        } => {
            if edit_expr(scrutinee, target, edit) {
                return true;
            }
            if let Some(pos) = cases.iter().position(|c| c.id == target) {
                return match edit.take() {
                    Some(Edit::RemoveCase) => {
                        cases.remove(pos);
                        true
                    }
                    other => {
                        *edit = other;
                        false
                    }
                };
            }
            cases.iter_mut().any(|c| edit_block(&mut c.body, target, edit))
                || default.as_mut().is_some_and(|d| edit_block(d, target, edit))
        }
        StmtKind::Return(Some(e)) | StmtKind::Expr(e) => edit_expr(e, target, edit),
        StmtKind::Return(None) => false,
        StmtKind::Block(b) => edit_block(b, target, edit),
    }
}

fn edit_expr(e: &mut Expr, target: NodeId, edit: &mut Option<Edit>) -> bool {
    if e.id == target {
        return match edit.take() {
            Some(Edit::ReplaceExpr(mut new)) => {
                new.span = e.span;
                *e = new;
                true
            }
            other => {
                *edit = other;
                false
            }
        };
    }
    match &mut e.kind {
        ExprKind::Unary(_, inner) => edit_expr(inner, target, edit),
        ExprKind::Binary(_, l, r) => edit_expr(l, target, edit) || edit_expr(r, target, edit),
        ExprKind::Call(_, args) => args.iter_mut().any(|a| edit_expr(a, target, edit)),
        _ => false,
    }
}
