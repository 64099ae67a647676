//! Syntax tree for MiniLang.
//!
//! Every statement, expression, switch arm and function carries a [`NodeId`]
//! assigned in preorder by [`Program::renumber`], plus the [`Span`] it was
//! parsed from. Nodes synthesized by the mutation engine inherit the span of
//! the node they replace.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Preorder index of a node inside one [`Program`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Source location: 1-based line/column of the first byte plus the byte range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: u32,
    pub column: u32,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            line: self.line,
            column: self.column,
            start: self.start,
            end: other.end.max(self.end),
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Static kind of a value or function result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Int,
    Bool,
    Void,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Int => "int",
            Kind::Bool => "bool",
            Kind::Void => "void",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Not,
}

impl UnaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Not => "!",
        }
    }
}

/// Pre/post increment and decrement. The operand is always a plain variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateOp {
    PreInc,
    PreDec,
    PostInc,
    PostDec,
}

impl UpdateOp {
    pub const ALL: [UpdateOp; 4] = [
        UpdateOp::PostInc,
        UpdateOp::PreInc,
        UpdateOp::PostDec,
        UpdateOp::PreDec,
    ];

    pub fn is_prefix(self) -> bool {
        matches!(self, UpdateOp::PreInc | UpdateOp::PreDec)
    }

    pub fn is_increment(self) -> bool {
        matches!(self, UpdateOp::PreInc | UpdateOp::PostInc)
    }

    /// `++` becomes `--` and vice versa, keeping the prefix/postfix position.
    pub fn flipped(self) -> UpdateOp {
        match self {
            UpdateOp::PreInc => UpdateOp::PreDec,
            UpdateOp::PreDec => UpdateOp::PreInc,
            UpdateOp::PostInc => UpdateOp::PostDec,
            UpdateOp::PostDec => UpdateOp::PostInc,
        }
    }

    pub fn symbol(self) -> &'static str {
        if self.is_increment() {
            "++"
        } else {
            "--"
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    BitAnd,
    BitOr,
    BitXor,
}

/// Operand/result typing class of a binary operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryClass {
    Arithmetic,
    Relational,
    Logical,
    Bitwise,
}

impl BinaryOp {
    pub const ARITHMETIC: [BinaryOp; 5] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Rem,
    ];
    pub const RELATIONAL: [BinaryOp; 6] = [
        BinaryOp::Lt,
        BinaryOp::Le,
        BinaryOp::Gt,
        BinaryOp::Ge,
        BinaryOp::Eq,
        BinaryOp::Ne,
    ];

    pub fn class(self) -> BinaryClass {
        use BinaryOp::*;
        match self {
            Add | Sub | Mul | Div | Rem => BinaryClass::Arithmetic,
            Lt | Le | Gt | Ge | Eq | Ne => BinaryClass::Relational,
            And | Or => BinaryClass::Logical,
            BitAnd | BitOr | BitXor => BinaryClass::Bitwise,
        }
    }

    pub fn symbol(self) -> &'static str {
        use BinaryOp::*;
        match self {
            Add => "+",
            Sub => "-",
            Mul => "*",
            Div => "/",
            Rem => "%",
            Lt => "<",
            Le => "<=",
            Gt => ">",
            Ge => ">=",
            Eq => "==",
            Ne => "!=",
            And => "&&",
            Or => "||",
            BitAnd => "&",
            BitOr => "|",
            BitXor => "^",
        }
    }

    /// Binding strength; larger binds tighter. All levels are left-associative.
    pub fn precedence(self) -> u8 {
        use BinaryOp::*;
        match self {
            Or => 1,
            And => 2,
            BitOr => 3,
            BitXor => 4,
            BitAnd => 5,
            Eq | Ne => 6,
            Lt | Le | Gt | Ge => 7,
            Add | Sub => 8,
            Mul | Div | Rem => 9,
        }
    }

    pub fn operand_kind(self) -> Kind {
        match self.class() {
            BinaryClass::Logical => Kind::Bool,
            _ => Kind::Int,
        }
    }

    pub fn result_kind(self) -> Kind {
        match self.class() {
            BinaryClass::Arithmetic | BinaryClass::Bitwise => Kind::Int,
            BinaryClass::Relational | BinaryClass::Logical => Kind::Bool,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub id: NodeId,
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    IntLit(i64),
    BoolLit(bool),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Update(UpdateOp, String),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr {
            id: NodeId::default(),
            span,
            kind,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::Unary(_, e) => vec![e],
            ExprKind::Binary(_, l, r) => vec![l, r],
            ExprKind::Call(_, args) => args.iter().collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub id: NodeId,
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    VarDecl {
        name: String,
        kind: Kind,
        init: Expr,
    },
    Assign {
        name: String,
        value: Expr,
    },
    If {
        cond: Expr,
        then_block: Block,
        /// Either a `Block` or a nested `If` statement (`else if`).
        else_branch: Option<Box<Stmt>>,
    },
    While {
        cond: Expr,
        body: Block,
    },
    Switch {
        scrutinee: Expr,
        cases: Vec<SwitchCase>,
        default: Option<Block>,
    },
    Return(Option<Expr>),
    Expr(Expr),
    Block(Block),
}

impl Stmt {
    pub fn new(kind: StmtKind, span: Span) -> Stmt {
        Stmt {
            id: NodeId::default(),
            span,
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub id: NodeId,
    pub span: Span,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchCase {
    pub id: NodeId,
    pub span: Span,
    pub label: i64,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub id: NodeId,
    pub span: Span,
    pub name: String,
    pub params: Vec<Param>,
    pub ret: Kind,
    pub body: Block,
}

/// A parsed compilation unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub functions: Vec<FunctionDef>,
}

/// Borrowed view of any numbered node.
#[derive(Debug, Clone, Copy)]
pub enum NodeRef<'a> {
    Function(&'a FunctionDef),
    Block(&'a Block),
    Stmt(&'a Stmt),
    Case(&'a SwitchCase),
    Expr(&'a Expr),
}

impl NodeRef<'_> {
    pub fn id(&self) -> NodeId {
        match self {
            NodeRef::Function(f) => f.id,
            NodeRef::Block(b) => b.id,
            NodeRef::Stmt(s) => s.id,
            NodeRef::Case(c) => c.id,
            NodeRef::Expr(e) => e.id,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            NodeRef::Function(f) => f.span,
            NodeRef::Block(b) => b.span,
            NodeRef::Stmt(s) => s.span,
            NodeRef::Case(c) => c.span,
            NodeRef::Expr(e) => e.span,
        }
    }
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&FunctionDef> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn main(&self) -> Option<&FunctionDef> {
        self.function("main")
    }

    /// Reassigns NodeIds in preorder. Returns the number of nodes.
    pub fn renumber(&mut self) -> u32 {
        let mut next = 0u32;
        let mut take = || {
            let id = NodeId(next);
            next += 1;
            id
        };
        for f in &mut self.functions {
            f.id = take();
            renumber_block(&mut f.body, &mut take);
        }
        next
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Preorder traversal over every numbered node.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(NodeRef<'a>)) {
        for func in &self.functions {
            f(NodeRef::Function(func));
            visit_block(&func.body, f);
        }
    }

    pub fn find(&self, id: NodeId) -> Option<NodeRef<'_>> {
        let mut found = None;
        self.visit(&mut |n| {
            if found.is_none() && n.id() == id {
                found = Some(n);
            }
        });
        found
    }

    /// Copy with every span zeroed, for structural comparison.
    pub fn without_spans(&self) -> Program {
        let mut p = self.clone();
        for f in &mut p.functions {
            f.span = Span::default();
            strip_block(&mut f.body);
        }
        p
    }

    pub fn structurally_eq(&self, other: &Program) -> bool {
        self.without_spans() == other.without_spans()
    }
}

fn renumber_block(b: &mut Block, take: &mut dyn FnMut() -> NodeId) {
    b.id = take();
    for s in &mut b.stmts {
        renumber_stmt(s, take);
    }
}

pub(crate) fn renumber_stmt(s: &mut Stmt, take: &mut dyn FnMut() -> NodeId) {
    s.id = take();
    match &mut s.kind {
        StmtKind::VarDecl { init, .. } => renumber_expr(init, take),
        StmtKind::Assign { value, .. } => renumber_expr(value, take),
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            renumber_expr(cond, take);
            renumber_block(then_block, take);
            if let Some(e) = else_branch {
                renumber_stmt(e, take);
            }
        }
        StmtKind::While { cond, body } => {
            renumber_expr(cond, take);
            renumber_block(body, take);
        }
        StmtKind::Switch {
            scrutinee,
            cases,
            default,
        } => {
            renumber_expr(scrutinee, take);
            for c in cases {
                c.id = take();
                renumber_block(&mut c.body, take);
            }
            if let Some(d) = default {
                renumber_block(d, take);
            }
        }
        StmtKind::Return(Some(e)) | StmtKind::Expr(e) => renumber_expr(e, take),
        StmtKind::Return(None) => {}
        StmtKind::Block(b) => renumber_block(b, take),
    }
}

pub(crate) fn renumber_expr(e: &mut Expr, take: &mut dyn FnMut() -> NodeId) {
    e.id = take();
    match &mut e.kind {
        ExprKind::Unary(_, inner) => renumber_expr(inner, take),
        ExprKind::Binary(_, l, r) => {
            renumber_expr(l, take);
            renumber_expr(r, take);
        }
        ExprKind::Call(_, args) => {
            for a in args {
                renumber_expr(a, take);
            }
        }
        _ => {}
    }
}

impl Block {
    /// Preorder walk over this block and everything nested in it.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(NodeRef<'a>)) {
        visit_block(self, f);
    }
}

fn visit_block<'a>(b: &'a Block, f: &mut dyn FnMut(NodeRef<'a>)) {
    f(NodeRef::Block(b));
    for s in &b.stmts {
        visit_stmt(s, f);
    }
}

fn visit_stmt<'a>(s: &'a Stmt, f: &mut dyn FnMut(NodeRef<'a>)) {
    f(NodeRef::Stmt(s));
    match &s.kind {
        StmtKind::VarDecl { init, .. } => visit_expr(init, f),
        StmtKind::Assign { value, .. } => visit_expr(value, f),
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            visit_expr(cond, f);
            visit_block(then_block, f);
            if let Some(e) = else_branch {
                visit_stmt(e, f);
            }
        }
        StmtKind::While { cond, body } => {
            visit_expr(cond, f);
            visit_block(body, f);
        }
        StmtKind::Switch {
            scrutinee,
            cases,
            default,
        } => {
            visit_expr(scrutinee, f);
            for c in cases {
                f(NodeRef::Case(c));
                visit_block(&c.body, f);
            }
            if let Some(d) = default {
                visit_block(d, f);
            }
        }
        StmtKind::Return(Some(e)) | StmtKind::Expr(e) => visit_expr(e, f),
        StmtKind::Return(None) => {}
        StmtKind::Block(b) => visit_block(b, f),
    }
}

fn visit_expr<'a>(e: &'a Expr, f: &mut dyn FnMut(NodeRef<'a>)) {
    f(NodeRef::Expr(e));
    for c in e.children() {
        visit_expr(c, f);
    }
}

fn strip_block(b: &mut Block) {
    b.span = Span::default();
    for s in &mut b.stmts {
        strip_stmt(s);
    }
}

fn strip_stmt(s: &mut Stmt) {
    s.span = Span::default();
    match &mut s.kind {
        StmtKind::VarDecl { init, .. } => strip_expr(init),
        StmtKind::Assign { value, .. } => strip_expr(value),
        StmtKind::If {
            cond,
            then_block,
            else_branch,
        } => {
            strip_expr(cond);
            strip_block(then_block);
            if let Some(e) = else_branch {
                strip_stmt(e);
            }
        }
        StmtKind::While { cond, body } => {
            strip_expr(cond);
            strip_block(body);
        }
        StmtKind::Switch {
            scrutinee,
            cases,
            default,
        } => {
            strip_expr(scrutinee);
            for c in cases {
                c.span = Span::default();
                strip_block(&mut c.body);
            }
            if let Some(d) = default {
                strip_block(d);
            }
        }
        StmtKind::Return(Some(e)) | StmtKind::Expr(e) => strip_expr(e),
        StmtKind::Return(None) => {}
        StmtKind::Block(b) => strip_block(b),
    }
}

fn strip_expr(e: &mut Expr) {
    e.span = Span::default();
    match &mut e.kind {
        ExprKind::Unary(_, inner) => strip_expr(inner),
        ExprKind::Binary(_, l, r) => {
            strip_expr(l);
            strip_expr(r);
        }
        ExprKind::Call(_, args) => args.iter_mut().for_each(strip_expr),
        _ => {}
    }
}
