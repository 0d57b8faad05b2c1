use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Instruction, Machine, MachineConfig, Operand, Reg, TraceEntry, WriteMode};
use crate::tropical::{self, EwOp, TieMode, TimeValue, Wavefront};

use super::ast::{BinOp, Expr};
use super::parser::parse;

/// Variable values for one evaluation. All wavefronts share one width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Wavefront>", into = "BTreeMap<String, Wavefront>")]
pub struct Bindings {
    vars: BTreeMap<String, Wavefront>,
    width: usize,
}

impl Bindings {
    /// An empty binding set has width 1, so constant expressions still have a shape.
    pub fn new(vars: BTreeMap<String, Wavefront>) -> Result<Self> {
        let mut width = None;
        for w in vars.values() {
            match width {
                None if w.is_empty() => {
                    return Err(Error::InvalidArgument("bound wavefronts must be non-empty".into()))
                }
                None => width = Some(w.len()),
                Some(n) if n != w.len() => {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: w.len(),
                    })
                }
                Some(_) => {}
            }
        }
        Ok(Bindings {
            vars,
            width: width.unwrap_or(1),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bindings: {e}")))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, name: &str) -> Option<&Wavefront> {
        self.vars.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Wavefront)> {
        self.vars.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl TryFrom<BTreeMap<String, Wavefront>> for Bindings {
    type Error = Error;

    fn try_from(vars: BTreeMap<String, Wavefront>) -> Result<Self> {
        Bindings::new(vars)
    }
}

impl From<Bindings> for BTreeMap<String, Wavefront> {
    fn from(b: Bindings) -> Self {
        b.vars
    }
}

/// A compiled expression: straight-line code plus where its inputs and
/// result live.
#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub program: Vec<Instruction>,
    /// A register, or an immediate when the whole expression folded to a constant.
    pub result: Operand,
    /// Variables occupy the lowest registers in name order.
    pub var_regs: BTreeMap<String, Reg>,
    pub registers_used: usize,
}

impl Compiled {
    pub fn transitions(&self) -> usize {
        self.program
            .iter()
            .map(|i| match i {
                Instruction::TropMul { .. } => 2,
                _ => 1,
            })
            .sum()
    }
}

struct Emitter {
    program: Vec<Instruction>,
    var_regs: BTreeMap<String, Reg>,
    next: usize,
}

fn fold(op: BinOp, a: TimeValue, b: TimeValue) -> Result<TimeValue> {
    Ok(match op {
        BinOp::Add => tropical::t_add(a, b),
        BinOp::Max => tropical::t_max(a, b),
        BinOp::Mul => a.checked_delay(b).ok_or(Error::TickOverflow)?,
        BinOp::Inhibit => tropical::t_inhibit(a, b, TieMode::StrictBlock),
    })
}

fn reg_index(i: usize) -> Result<Reg> {
    u16::try_from(i)
        .map(Reg)
        .map_err(|_| Error::InvalidArgument("expression needs too many registers".into()))
}

impl Emitter {
    fn fresh(&mut self) -> Result<Reg> {
        let r = reg_index(self.next)?;
        self.next += 1;
        Ok(r)
    }

    fn emit(&mut self, e: &Expr) -> Result<Operand> {
        match e {
            Expr::Var(name) => Ok(Operand::Reg(self.var_regs[name])),
            Expr::Const(t) => Ok(Operand::Imm(*t)),
            Expr::Binary { op, lhs, rhs } => {
                let a = self.emit(lhs)?;
                let b = self.emit(rhs)?;
                let mode = WriteMode::Direct;
                let instr = match (op, a, b) {
                    (_, Operand::Imm(x), Operand::Imm(y)) => return Ok(Operand::Imm(fold(*op, x, y)?)),
                    (BinOp::Mul, Operand::Reg(x), Operand::Reg(y)) => {
                        let dst = self.fresh()?;
                        Instruction::TropMul { lhs: x, rhs: y, dst, mode }
                    }
                    (BinOp::Mul, Operand::Imm(c), Operand::Reg(x))
                    | (BinOp::Mul, Operand::Reg(x), Operand::Imm(c)) => {
                        let dst = self.fresh()?;
                        Instruction::Scale { src: x, delay: c, dst, mode }
                    }
                    (BinOp::Add, lhs, rhs) => Instruction::EwMin { lhs, rhs, dst: self.fresh()?, mode },
                    (BinOp::Max, lhs, rhs) => Instruction::EwMax { lhs, rhs, dst: self.fresh()?, mode },
                    (BinOp::Inhibit, inhibitor, data) => Instruction::EwInhibit {
                        inhibitor,
                        data,
                        dst: self.fresh()?,
                        mode,
                        tie: TieMode::StrictBlock,
                    },
                };
                let dst = instr.dest_reg().expect("arithmetic instructions write a register");
                self.program.push(instr);
                Ok(Operand::Reg(dst))
            }
        }
    }
}

/// Compile to straight-line machine code in post order.
///
/// Every intermediate gets a fresh register, so no instruction ever reads
/// its own destination. Constant subtrees are folded on the host.
pub fn compile(e: &Expr) -> Result<Compiled> {
    let var_regs = e
        .variables()
        .into_iter()
        .enumerate()
        .map(|(i, v)| Ok((v.to_string(), reg_index(i)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mut em = Emitter {
        program: Vec::new(),
        next: var_regs.len(),
        var_regs,
    };
    let result = em.emit(e)?;
    Ok(Compiled {
        program: em.program,
        result,
        var_regs: em.var_regs,
        registers_used: em.next,
    })
}

/// Result of running an expression on a machine.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Wavefront,
    pub compiled: Compiled,
    pub trace: Vec<TraceEntry>,
}

/// Compile `e` and run it on a fresh machine sized to the bindings.
///
/// Width and register count of `base` are overridden; range and cost
/// settings are kept.
pub fn evaluate_expr(e: &Expr, bindings: &Bindings, base: &MachineConfig) -> Result<Evaluation> {
    let compiled = compile(e)?;
    let config = base
        .clone()
        .with_width(bindings.width())
        .with_registers(compiled.registers_used.max(8));
    let mut machine = Machine::new(config)?;
    for (name, reg) in &compiled.var_regs {
        let w = bindings
            .get(name)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
        machine.load(*reg, w)?;
    }
    let trace = machine.run(&compiled.program).map_err(|e| e.error)?;
    let value = match compiled.result {
        Operand::Reg(r) => machine.read(r)?.clone(),
        Operand::Imm(t) => Wavefront::splat(bindings.width(), t),
    };
    Ok(Evaluation {
        value,
        compiled,
        trace,
    })
}

/// Parse, compile and run.
pub fn evaluate(src: &str, bindings: &Bindings, base: &MachineConfig) -> Result<Evaluation> {
    evaluate_expr(&parse(src)?, bindings, base)
}

/// Reference evaluation straight from the operator definitions, no machine.
pub fn direct_eval(e: &Expr, bindings: &Bindings) -> Result<Wavefront> {
    let width = bindings.width();
    match e {
        Expr::Var(name) => bindings
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnboundVariable(name.clone())),
        Expr::Const(t) => Ok(Wavefront::splat(width, *t)),
        Expr::Binary { op, lhs, rhs } => {
            let u = direct_eval(lhs, bindings)?;
            let v = direct_eval(rhs, bindings)?;
            match op {
                BinOp::Add => tropical::ew(EwOp::Min, &u, &v, TieMode::StrictBlock),
                BinOp::Max => tropical::ew(EwOp::Max, &u, &v, TieMode::StrictBlock),
                BinOp::Inhibit => tropical::ew(EwOp::Inhibit, &u, &v, TieMode::StrictBlock),
                BinOp::Mul => u
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a.checked_delay(*b).ok_or(Error::TickOverflow))
                    .collect(),
            }
        }
    }
}
