//! Static kind checking. Runs before any execution and yields the kind of
//! every expression node, which the mutation engine uses to pick sites.

use super::ast::*;
use super::LangError;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Signature {
    pub params: Vec<Kind>,
    pub ret: Kind,
}

/// Result of a successful check.
#[derive(Debug, Clone)]
pub struct TypeInfo {
    expr_kinds: Vec<Option<Kind>>,
    pub signatures: HashMap<String, Signature>,
}

impl TypeInfo {
    pub fn kind_of(&self, id: NodeId) -> Option<Kind> {
        self.expr_kinds.get(id.0 as usize).copied().flatten()
    }

    pub fn signature(&self, name: &str) -> Option<&Signature> {
        self.signatures.get(name)
    }
}

pub fn check(p: &Program) -> Result<TypeInfo, LangError> {
    let mut signatures = HashMap::new();
    for f in &p.functions {
        let sig = Signature {
            params: f.params.iter().map(|p| p.kind).collect(),
            ret: f.ret,
        };
        if signatures.insert(f.name.clone(), sig).is_some() {
            return Err(static_err(f.id, f.span, format!("duplicate function `{}`", f.name)));
        }
    }
    let mut checker = Checker {
        signatures: &signatures,
        scopes: Vec::new(),
        kinds: vec![None; p.node_count()],
        ret: Kind::Void,
    };
    for f in &p.functions {
        checker.ret = f.ret;
        checker.scopes = vec![HashMap::new()];
        for param in &f.params {
            if checker.scopes[0].insert(param.name.clone(), param.kind).is_some() {
                return Err(static_err(
                    f.id,
                    f.span,
                    format!("duplicate parameter `{}`", param.name),
                ));
            }
        }
        checker.block(&f.body)?;
    }
    let expr_kinds = checker.kinds;
    Ok(TypeInfo {
        expr_kinds,
        signatures,
    })
}

fn static_err(node: NodeId, span: Span, message: String) -> LangError {
    LangError::Static {
        node,
        line: span.line,
        column: span.column,
        message,
    }
}

struct Checker<'a> {
    signatures: &'a HashMap<String, Signature>,
    scopes: Vec<HashMap<String, Kind>>,
    kinds: Vec<Option<Kind>>,
    ret: Kind,
}

impl Checker<'_> {
    fn lookup(&self, name: &str) -> Option<Kind> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn block(&mut self, b: &Block) -> Result<(), LangError> {
        self.scopes.push(HashMap::new());
        for s in &b.stmts {
            self.stmt(s)?;
        }
        self.scopes.pop();
        Ok(())
    }

    fn expect(&mut self, e: &Expr, want: Kind, what: &str) -> Result<(), LangError> {
        let got = self.expr(e)?;
        if got != want {
            return Err(static_err(
                e.id,
                e.span,
                format!("{what} must be {want}, found {got}"),
            ));
        }
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt) -> Result<(), LangError> {
        match &s.kind {
            StmtKind::VarDecl { name, kind, init } => {
                self.expect(init, *kind, "initializer")?;
                let scope = self.scopes.last_mut().expect("scope");
                if scope.insert(name.clone(), *kind).is_some() {
                    return Err(static_err(s.id, s.span, format!("`{name}` redeclared in the same scope")));
                }
            }
            StmtKind::Assign { name, value } => {
                let kind = self
                    .lookup(name)
                    .ok_or_else(|| static_err(s.id, s.span, format!("unknown variable `{name}`")))?;
                self.expect(value, kind, "assigned value")?;
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                self.expect(cond, Kind::Bool, "condition")?;
                self.block(then_block)?;
                if let Some(e) = else_branch {
                    self.stmt(e)?;
                }
            }
            StmtKind::While { cond, body } => {
                self.expect(cond, Kind::Bool, "condition")?;
                self.block(body)?;
            }
            StmtKind::Switch {
                scrutinee,
                cases,
                default,
            } => {
                self.expect(scrutinee, Kind::Int, "switch scrutinee")?;
                let mut seen = std::collections::HashSet::new();
                for c in cases {
                    if !seen.insert(c.label) {
                        return Err(static_err(c.id, c.span, format!("duplicate case label {}", c.label)));
                    }
                    self.block(&c.body)?;
                }
                if let Some(d) = default {
                    self.block(d)?;
                }
            }
            StmtKind::Return(value) => match (value, self.ret) {
                (None, Kind::Void) => {}
                (None, k) => {
                    return Err(static_err(s.id, s.span, format!("return without value in {k} function")))
                }
                (Some(e), Kind::Void) => {
                    return Err(static_err(e.id, e.span, "return with value in void function".into()))
                }
                (Some(e), k) => self.expect(e, k, "returned value")?,
            },
            StmtKind::Expr(e) => {
                self.expr(e)?;
            }
            StmtKind::Block(b) => self.block(b)?,
        }
        Ok(())
    }

    fn operand(&mut self, e: &Expr, want: Kind, what: &str) -> Result<(), LangError> {
        self.expect(e, want, what)
    }

    fn expr(&mut self, e: &Expr) -> Result<Kind, LangError> {
        let kind = match &e.kind {
            ExprKind::IntLit(_) => Kind::Int,
            ExprKind::BoolLit(_) => Kind::Bool,
            ExprKind::Var(name) => self
                .lookup(name)
                .ok_or_else(|| static_err(e.id, e.span, format!("unknown variable `{name}`")))?,
            ExprKind::Update(_, name) => match self.lookup(name) {
                Some(Kind::Int) => Kind::Int,
                Some(k) => {
                    return Err(static_err(e.id, e.span, format!("cannot increment {k} variable `{name}`")))
                }
                None => return Err(static_err(e.id, e.span, format!("unknown variable `{name}`"))),
            },
            ExprKind::Unary(UnaryOp::Neg, inner) => {
                self.operand(inner, Kind::Int, "operand of `-`")?;
                Kind::Int
            }
            ExprKind::Unary(UnaryOp::Not, inner) => {
                self.operand(inner, Kind::Bool, "operand of `!`")?;
                Kind::Bool
            }
            ExprKind::Binary(op, l, r) => {
                let what = format!("operand of `{}`", op.symbol());
                self.operand(l, op.operand_kind(), &what)?;
                self.operand(r, op.operand_kind(), &what)?;
                op.result_kind()
            }
            ExprKind::Call(name, args) => {
                let sig = self
                    .signatures
                    .get(name)
                    .ok_or_else(|| static_err(e.id, e.span, format!("unknown function `{name}`")))?
                    .clone();
                if sig.params.len() != args.len() {
                    return Err(static_err(
                        e.id,
                        e.span,
                        format!("`{name}` expects {} arguments, got {}", sig.params.len(), args.len()),
                    ));
                }
                for (a, k) in args.iter().zip(&sig.params) {
                    self.operand(a, *k, "argument")?;
                }
                sig.ret
            }
        };
        if let Some(slot) = self.kinds.get_mut(e.id.0 as usize) {
            *slot = Some(kind);
        }
        Ok(kind)
    }
}

#[cfg(test)]
mod tests {
    use crate::lang::{parse, LangError};

    fn err(src: &str) -> String {
        match parse(src) {
            Err(LangError::Static { message, .. }) => message,
            other => panic!("expected static error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_kind_mismatches() {
        assert!(err("fn main() -> int { return true; }").contains("returned value"));
        assert!(err("fn main() -> bool { return 1 && 2; }").contains("`&&`"));
        assert!(err("fn main() -> int { let b: bool = true; b++; return 0; }").contains("increment"));
        assert!(err("fn main() -> int { if (1) { } return 0; }").contains("condition"));
    }

    #[test]
    fn rejects_unknown_names_and_arity() {
        assert!(err("fn main() -> int { return x; }").contains("unknown variable"));
        assert!(err("fn f(a: int) -> int { return a; } fn main() -> int { return f(); }").contains("expects 1"));
        assert!(err("fn v() -> void { } fn main() -> int { return v() + 1; }").contains("must be int"));
    }

    #[test]
    fn rejects_duplicate_case_labels() {
        assert!(err("fn main() -> int { switch (1) { case 1: { } case 1: { } } return 0; }").contains("duplicate"));
    }

    #[test]
    fn inner_scopes_may_shadow() {
        parse("fn main() -> int { let a: int = 1; { let a: int = 2; } return a; }").unwrap();
    }
}
