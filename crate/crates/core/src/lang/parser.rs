//! Recursive-descent parser.
//!
//! ```text
//! program  := function*
//! function := "fn" IDENT "(" (param ("," param)*)? ")" "->" type block
//! param    := IDENT ":" type
//! block    := "{" stmt* "}"
//! stmt     := "let" IDENT ":" type "=" expr ";"
//!           | IDENT "=" expr ";"
//!           | "if" "(" expr ")" block ("else" (block | if-stmt))?
//!           | "while" "(" expr ")" block
//!           | "switch" "(" expr ")" "{" ("case" "-"? INT ":" block)* ("default" ":" block)? "}"
//!           | "return" expr? ";"
//!           | block
//!           | expr ";"
//! expr     := binary expression, C precedence, left-associative
//! unary    := ("-" | "!") unary | ("++" | "--") IDENT | postfix
//! postfix  := IDENT ("++" | "--") | IDENT "(" args ")" | primary
//! ```
//!
//! A `-` directly followed by an integer literal folds into a negative literal.

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::LangError;

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Return kind of the function being parsed; `return;` is only valid in void ones.
    ret: Option<Kind>,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, LangError> {
        Ok(Parser {
            tokens: tokenize(src)?,
            pos: 0,
            ret: None,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> LangError {
        let t = &self.tokens[self.pos];
        LangError::Syntax {
            line: t.span.line,
            column: t.span.column,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, LangError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(what))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), LangError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let t = self.bump();
                Ok((name, t.span))
            }
            _ => Err(self.error("identifier")),
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_eof(&self) -> Result<(), LangError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    pub fn program(&mut self) -> Result<Program, LangError> {
        let mut functions = Vec::new();
        while !self.at_eof() {
            functions.push(self.function()?);
        }
        Ok(Program { functions })
    }

    fn kind(&mut self, allow_void: bool) -> Result<Kind, LangError> {
        let k = match self.peek() {
            Tok::IntKw => Kind::Int,
            Tok::BoolKw => Kind::Bool,
            Tok::VoidKw if allow_void => Kind::Void,
            _ if allow_void => return Err(self.error("`int`, `bool` or `void`")),
            _ => return Err(self.error("`int` or `bool`")),
        };
        self.bump();
        Ok(k)
    }

    fn function(&mut self) -> Result<FunctionDef, LangError> {
        let start = self.expect(Tok::Fn, "`fn`")?.span;
        let (name, _) = self.ident()?;
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                let (pname, _) = self.ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let kind = self.kind(false)?;
                params.push(Param { name: pname, kind });
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Arrow, "`->`")?;
        let ret = self.kind(true)?;
        self.ret = Some(ret);
        let body = self.block()?;
        self.ret = None;
        Ok(FunctionDef {
            id: NodeId::default(),
            span: start.to(body.span),
            name,
            params,
            ret,
            body,
        })
    }

    pub fn block(&mut self) -> Result<Block, LangError> {
        let start = self.expect(Tok::LBrace, "`{`")?.span;
        let mut stmts = Vec::new();
        while *self.peek() != Tok::RBrace {
            if self.at_eof() {
                return Err(self.error("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        let end = self.bump().span;
        Ok(Block {
            id: NodeId::default(),
            span: start.to(end),
            stmts,
        })
    }

    pub fn stmt(&mut self) -> Result<Stmt, LangError> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Let => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let kind = self.kind(false)?;
                self.expect(Tok::Assign, "`=`")?;
                let init = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::VarDecl { name, kind, init }
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::Assign => {
                self.bump();
                self.bump();
                let value = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Assign { name, value }
            }
            Tok::If => return self.if_stmt(),
            Tok::While => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let cond = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let body = self.block()?;
                StmtKind::While { cond, body }
            }
            Tok::Switch => self.switch()?,
            Tok::Return => {
                self.bump();
                if *self.peek() == Tok::Semi && self.ret.is_none_or(|k| k == Kind::Void) {
                    self.bump();
                    StmtKind::Return(None)
                } else {
                    let e = self.expr()?;
                    self.expect(Tok::Semi, "`;`")?;
                    StmtKind::Return(Some(e))
                }
            }
            Tok::LBrace => StmtKind::Block(self.block()?),
            _ => {
                let e = self.expr()?;
                self.expect(Tok::Semi, "`;`")?;
                StmtKind::Expr(e)
            }
        };
        Ok(Stmt::new(kind, start.to(self.prev_span())))
    }

    fn if_stmt(&mut self) -> Result<Stmt, LangError> {
        let start = self.expect(Tok::If, "`if`")?.span;
        self.expect(Tok::LParen, "`(`")?;
        let cond = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        let then_block = self.block()?;
        let else_branch = if *self.peek() == Tok::Else {
            self.bump();
            if *self.peek() == Tok::If {
                Some(Box::new(self.if_stmt()?))
            } else {
                let b = self.block()?;
                let span = b.span;
                Some(Box::new(Stmt::new(StmtKind::Block(b), span)))
            }
        } else {
            None
        };
        Ok(Stmt::new(
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            },
            start.to(self.prev_span()),
        ))
    }

    fn switch(&mut self) -> Result<StmtKind, LangError> {
        self.expect(Tok::Switch, "`switch`")?;
        self.expect(Tok::LParen, "`(`")?;
        let scrutinee = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut cases = Vec::new();
        let mut default = None;
        loop {
            match self.peek() {
                Tok::Case if default.is_none() => {
                    let start = self.bump().span;
                    let label = self.case_label()?;
                    self.expect(Tok::Colon, "`:`")?;
                    let body = self.block()?;
                    cases.push(SwitchCase {
                        id: NodeId::default(),
                        span: start.to(body.span),
                        label,
                        body,
                    });
                }
                Tok::Default if default.is_none() => {
                    self.bump();
                    self.expect(Tok::Colon, "`:`")?;
                    default = Some(self.block()?);
                }
                Tok::RBrace => {
                    self.bump();
                    break;
                }
                _ if default.is_some() => return Err(self.error("`}` after default arm")),
                _ => return Err(self.error("`case`, `default` or `}`")),
            }
        }
        Ok(StmtKind::Switch {
            scrutinee,
            cases,
            default,
        })
    }

    fn case_label(&mut self) -> Result<i64, LangError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Int(v) => {
                let value = int_value(v, negative).ok_or_else(|| self.error("64-bit integer"))?;
                self.bump();
                Ok(value)
            }
            _ => Err(self.error("integer case label")),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, LangError> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        Some(match self.peek() {
            Tok::OrOr => BinaryOp::Or,
            Tok::AndAnd => BinaryOp::And,
            Tok::Pipe => BinaryOp::BitOr,
            Tok::Caret => BinaryOp::BitXor,
            Tok::Amp => BinaryOp::BitAnd,
            Tok::EqEq => BinaryOp::Eq,
            Tok::Ne => BinaryOp::Ne,
            Tok::Lt => BinaryOp::Lt,
            Tok::Le => BinaryOp::Le,
            Tok::Gt => BinaryOp::Gt,
            Tok::Ge => BinaryOp::Ge,
            Tok::Plus => BinaryOp::Add,
            Tok::Minus => BinaryOp::Sub,
            Tok::Star => BinaryOp::Mul,
            Tok::Slash => BinaryOp::Div,
            Tok::Percent => BinaryOp::Rem,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                if let Tok::Int(v) = *self.peek() {
                    let value = int_value(v, true).ok_or_else(|| self.error("64-bit integer"))?;
                    let end = self.bump().span;
                    return Ok(Expr::new(ExprKind::IntLit(value), start.to(end)));
                }
                let inner = self.unary()?;
                let span = start.to(inner.span);
                Ok(Expr::new(ExprKind::Unary(UnaryOp::Neg, Box::new(inner)), span))
            }
            Tok::Bang => {
                self.bump();
                let inner = self.unary()?;
                let span = start.to(inner.span);
                Ok(Expr::new(ExprKind::Unary(UnaryOp::Not, Box::new(inner)), span))
            }
            Tok::PlusPlus | Tok::MinusMinus => {
                let op = if *self.peek() == Tok::PlusPlus {
                    UpdateOp::PreInc
                } else {
                    UpdateOp::PreDec
                };
                self.bump();
                let (name, end) = self.ident().map_err(|_| self.error("variable after prefix update"))?;
                Ok(Expr::new(ExprKind::Update(op, name), start.to(end)))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr, LangError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                match self.peek() {
                    Tok::PlusPlus | Tok::MinusMinus => {
                        let op = if *self.peek() == Tok::PlusPlus {
                            UpdateOp::PostInc
                        } else {
                            UpdateOp::PostDec
                        };
                        let end = self.bump().span;
                        Ok(Expr::new(ExprKind::Update(op, name), start.to(end)))
                    }
                    Tok::LParen => {
                        self.bump();
                        let mut args = Vec::new();
                        if *self.peek() != Tok::RParen {
                            loop {
                                args.push(self.expr()?);
                                if *self.peek() == Tok::Comma {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        let end = self.expect(Tok::RParen, "`)`")?.span;
                        Ok(Expr::new(ExprKind::Call(name, args), start.to(end)))
                    }
                    _ => Ok(Expr::new(ExprKind::Var(name), start)),
                }
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, LangError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(v) => {
                let value = int_value(v, false).ok_or_else(|| self.error("64-bit integer"))?;
                self.bump();
                Ok(Expr::new(ExprKind::IntLit(value), start))
            }
            Tok::True | Tok::False => {
                let b = *self.peek() == Tok::True;
                self.bump();
                Ok(Expr::new(ExprKind::BoolLit(b), start))
            }
            Tok::LParen => {
                self.bump();
                let mut e = self.expr()?;
                let end = self.expect(Tok::RParen, "`)`")?.span;
                e.span = start.to(end);
                Ok(e)
            }
            _ => Err(self.error("expression")),
        }
    }
}

fn int_value(magnitude: u64, negative: bool) -> Option<i64> {
    if negative {
        if magnitude == 1u64 << 63 {
            Some(i64::MIN)
        } else {
            i64::try_from(magnitude).ok().map(|v| -v)
        }
    } else {
        i64::try_from(magnitude).ok()
    }
}

/// Parses a standalone expression (used for replacement fragments).
pub fn parse_expr(src: &str) -> Result<Expr, LangError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a single standalone statement.
pub fn parse_stmt(src: &str) -> Result<Stmt, LangError> {
    let mut p = Parser::new(src)?;
    let s = p.stmt()?;
    p.expect_eof()?;
    Ok(s)
}
