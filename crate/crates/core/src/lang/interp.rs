//! Deterministic tree-walking interpreter with a step budget.
//!
//! Every evaluated statement, block and expression node costs one step,
//! charged before the node is evaluated. Function definitions are not
//! charged; a call charges its `Call` node and then the callee's body block.

use super::ast::*;
use super::LangError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Nested call limit; exceeding it traps instead of exhausting the host stack.
pub const MAX_CALL_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
    /// Result of a void function.
    Void(()),
}

impl Value {
    pub const VOID: Value = Value::Void(());

    pub fn kind(&self) -> Kind {
        match self {
            Value::Int(_) => Kind::Int,
            Value::Bool(_) => Kind::Bool,
            Value::Void(()) => Kind::Void,
        }
    }

    fn as_int(self) -> i64 {
        match self {
            Value::Int(v) => v,
            other => unreachable!("checked program produced {other:?} where int was expected"),
        }
    }

    fn as_bool(self) -> bool {
        match self {
            Value::Bool(b) => b,
            other => unreachable!("checked program produced {other:?} where bool was expected"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Void(()) => f.write_str("void"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrapKind {
    DivByZero,
    MissingReturn,
    UnknownVariable,
    StackOverflow,
}

impl TrapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TrapKind::DivByZero => "div-by-zero",
            TrapKind::MissingReturn => "missing-return",
            TrapKind::UnknownVariable => "unknown-variable",
            TrapKind::StackOverflow => "stack-overflow",
        }
    }
}

impl fmt::Display for TrapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Returned(Value),
    Trap(TrapKind),
    BudgetExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Returned(v) => write!(f, "returned {v}"),
            Status::Trap(k) => write!(f, "trap {k}"),
            Status::BudgetExceeded => f.write_str("budget exceeded"),
        }
    }
}

/// Observable result of one execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub status: Status,
    pub steps: u64,
    /// FNV-1a digest of the executed NodeId sequence.
    pub trace_hash: u64,
}

enum Halt {
    Trap(TrapKind),
    Budget,
}

enum Flow {
    Normal,
    Return(Value),
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

struct Machine<'p> {
    program: &'p Program,
    budget: u64,
    steps: u64,
    trace: u64,
    depth: usize,
    coverage: Option<&'p mut Vec<bool>>,
    frames: Vec<Frame>,
}

#[derive(Default)]
struct Frame {
    vars: Vec<(String, Value)>,
    marks: Vec<usize>,
}

impl Frame {
    fn lookup(&self, name: &str) -> Option<usize> {
        self.vars.iter().rposition(|(n, _)| n == name)
    }
}

/// Runs `entry(args)` under `budget` steps.
///
/// Only precondition violations (missing entry, wrong arity or argument
/// kinds) are reported as errors; every runtime behavior is an [`Outcome`].
pub fn execute(program: &Program, entry: &str, args: &[Value], budget: u64) -> Result<Outcome, LangError> {
    run(program, entry, args, budget, None)
}

/// Like [`execute`], additionally marking every evaluated NodeId in `coverage`.
pub fn execute_with_coverage(
    program: &Program,
    entry: &str,
    args: &[Value],
    budget: u64,
    coverage: &mut Vec<bool>,
) -> Result<Outcome, LangError> {
    let n = program.node_count();
    if coverage.len() < n {
        coverage.resize(n, false);
    }
    run(program, entry, args, budget, Some(coverage))
}

fn run(
    program: &Program,
    entry: &str,
    args: &[Value],
    budget: u64,
    coverage: Option<&mut Vec<bool>>,
) -> Result<Outcome, LangError> {
    let f = program
        .function(entry)
        .ok_or_else(|| LangError::Entry(format!("no function named `{entry}`")))?;
    if f.params.len() != args.len() {
        return Err(LangError::Entry(format!(
            "`{entry}` takes {} arguments, test supplies {}",
            f.params.len(),
            args.len()
        )));
    }
    for (p, a) in f.params.iter().zip(args) {
        if p.kind != a.kind() {
            return Err(LangError::Entry(format!(
                "argument `{}` of `{entry}` is {}, test supplies {}",
                p.name,
                p.kind,
                a.kind()
            )));
        }
    }
    let mut m = Machine {
        program,
        budget,
        steps: 0,
        trace: FNV_OFFSET,
        depth: 0,
        coverage,
        frames: Vec::new(),
    };
    let status = match m.call(f, args.to_vec()) {
        Ok(v) => Status::Returned(v),
        Err(Halt::Trap(k)) => Status::Trap(k),
        Err(Halt::Budget) => Status::BudgetExceeded,
    };
    Ok(Outcome {
        status,
        steps: m.steps,
        trace_hash: m.trace,
    })
}

impl Machine<'_> {
    fn tick(&mut self, id: NodeId) -> Result<(), Halt> {
        if self.steps >= self.budget {
            return Err(Halt::Budget);
        }
        self.steps += 1;
        for b in id.0.to_le_bytes() {
            self.trace ^= u64::from(b);
            self.trace = self.trace.wrapping_mul(FNV_PRIME);
        }
        if let Some(cov) = self.coverage.as_deref_mut() {
            if let Some(slot) = cov.get_mut(id.0 as usize) {
                *slot = true;
            }
        }
        Ok(())
    }

    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("active frame")
    }

    fn call(&mut self, f: &FunctionDef, args: Vec<Value>) -> Result<Value, Halt> {
        if self.depth >= MAX_CALL_DEPTH {
            return Err(Halt::Trap(TrapKind::StackOverflow));
        }
        self.depth += 1;
        let vars = f.params.iter().map(|p| p.name.clone()).zip(args).collect();
        self.frames.push(Frame {
            vars,
            marks: Vec::new(),
        });
        let flow = self.block(&f.body);
        self.frames.pop();
        self.depth -= 1;
        match flow? {
            Flow::Return(v) => Ok(v),
            Flow::Normal if f.ret == Kind::Void => Ok(Value::VOID),
            Flow::Normal => Err(Halt::Trap(TrapKind::MissingReturn)),
        }
    }

    fn block(&mut self, b: &Block) -> Result<Flow, Halt> {
        self.tick(b.id)?;
        let mark = self.frame().vars.len();
        self.frame().marks.push(mark);
        let mut result = Ok(Flow::Normal);
        for s in &b.stmts {
            match self.stmt(s) {
                Ok(Flow::Normal) => {}
                other => {
                    result = other;
                    break;
                }
            }
        }
        let frame = self.frame();
        let mark = frame.marks.pop().expect("scope mark");
        frame.vars.truncate(mark);
        result
    }

    fn stmt(&mut self, s: &Stmt) -> Result<Flow, Halt> {
        self.tick(s.id)?;
        match &s.kind {
            StmtKind::VarDecl { name, init, .. } => {
                let v = self.expr(init)?;
                self.frame().vars.push((name.clone(), v));
            }
            StmtKind::Assign { name, value } => {
                let v = self.expr(value)?;
                let frame = self.frame();
                let slot = frame.lookup(name).ok_or(Halt::Trap(TrapKind::UnknownVariable))?;
                frame.vars[slot].1 = v;
            }
            StmtKind::If {
                cond,
                then_block,
                else_branch,
            } => {
                if self.expr(cond)?.as_bool() {
                    return self.block(then_block);
                } else if let Some(e) = else_branch {
                    return self.stmt(e);
                }
            }
            StmtKind::While { cond, body } => {
                while self.expr(cond)?.as_bool() {
                    if let Flow::Return(v) = self.block(body)? {
                        return Ok(Flow::Return(v));
                    }
                }
            }
            StmtKind::Switch {
                scrutinee,
                cases,
                default,
            } => {
                let key = self.expr(scrutinee)?.as_int();
                if let Some(c) = cases.iter().find(|c| c.label == key) {
                    return self.block(&c.body);
                } else if let Some(d) = default {
                    return self.block(d);
                }
            }
            StmtKind::Return(None) => return Ok(Flow::Return(Value::VOID)),
            StmtKind::Return(Some(e)) => {
                let v = self.expr(e)?;
                return Ok(Flow::Return(v));
            }
            StmtKind::Expr(e) => {
                self.expr(e)?;
            }
            StmtKind::Block(b) => return self.block(b),
        }
        Ok(Flow::Normal)
    }

    fn expr(&mut self, e: &Expr) -> Result<Value, Halt> {
        self.tick(e.id)?;
        Ok(match &e.kind {
            ExprKind::IntLit(v) => Value::Int(*v),
            ExprKind::BoolLit(b) => Value::Bool(*b),
            ExprKind::Var(name) => {
                let frame = self.frame();
                let slot = frame.lookup(name).ok_or(Halt::Trap(TrapKind::UnknownVariable))?;
                frame.vars[slot].1
            }
            ExprKind::Update(op, name) => {
                let frame = self.frame();
                let slot = frame.lookup(name).ok_or(Halt::Trap(TrapKind::UnknownVariable))?;
                let old = frame.vars[slot].1.as_int();
                let new = if op.is_increment() {
                    old.wrapping_add(1)
                } else {
                    old.wrapping_sub(1)
                };
                frame.vars[slot].1 = Value::Int(new);
                Value::Int(if op.is_prefix() { new } else { old })
            }
            ExprKind::Unary(UnaryOp::Neg, inner) => Value::Int(self.expr(inner)?.as_int().wrapping_neg()),
            ExprKind::Unary(UnaryOp::Not, inner) => Value::Bool(!self.expr(inner)?.as_bool()),
            ExprKind::Binary(BinaryOp::And, l, r) => {
                Value::Bool(self.expr(l)?.as_bool() && self.expr(r)?.as_bool())
            }
            ExprKind::Binary(BinaryOp::Or, l, r) => {
                Value::Bool(self.expr(l)?.as_bool() || self.expr(r)?.as_bool())
            }
            ExprKind::Binary(op, l, r) => {
                let a = self.expr(l)?.as_int();
                let b = self.expr(r)?.as_int();
                binary(*op, a, b)?
            }
            ExprKind::Call(name, args) => {
                let mut values = Vec::with_capacity(args.len());
                for a in args {
                    values.push(self.expr(a)?);
                }
                let program = self.program;
                let f = program
                    .function(name)
                    .ok_or(Halt::Trap(TrapKind::UnknownVariable))?;
                self.call(f, values)?
            }
        })
    }
}

fn binary(op: BinaryOp, a: i64, b: i64) -> Result<Value, Halt> {
    use BinaryOp::*;
    Ok(match op {
        Add => Value::Int(a.wrapping_add(b)),
        Sub => Value::Int(a.wrapping_sub(b)),
        Mul => Value::Int(a.wrapping_mul(b)),
        Div if b == 0 => return Err(Halt::Trap(TrapKind::DivByZero)),
        Div => Value::Int(a.wrapping_div(b)),
        Rem if b == 0 => return Err(Halt::Trap(TrapKind::DivByZero)),
        Rem => Value::Int(a.wrapping_rem(b)),
        Lt => Value::Bool(a < b),
        Le => Value::Bool(a <= b),
        Gt => Value::Bool(a > b),
        Ge => Value::Bool(a >= b),
        Eq => Value::Bool(a == b),
        Ne => Value::Bool(a != b),
        BitAnd => Value::Int(a & b),
        BitOr => Value::Int(a | b),
        BitXor => Value::Int(a ^ b),
        And | Or => unreachable!("short-circuit operators handled by caller"),
    })
}
