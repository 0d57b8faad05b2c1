use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tropical::{TieMode, TimeValue, TropicalMatrix};

/// Address of a vector register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Reg(pub u16);

/// Address of a matrix bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bank(pub u16);

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

impl fmt::Display for Bank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Source of an element-wise operand: a register, or a constant broadcast
/// from a static delay line (costs no memory read).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operand {
    Reg(Reg),
    Imm(TimeValue),
}

impl Operand {
    pub fn reg(&self) -> Option<Reg> {
        match self {
            Operand::Reg(r) => Some(*r),
            Operand::Imm(_) => None,
        }
    }
}

impl From<Reg> for Operand {
    fn from(r: Reg) -> Self {
        Operand::Reg(r)
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Reg(r) => write!(f, "{r}"),
            Operand::Imm(t) => write!(f, "#{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WriteMode {
    /// `:=`
    #[default]
    Direct,
    /// `:≅`, store the normalized shape and emit the norm constant.
    Projective,
}

/// Half-open element range `[start, end)` of a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub reg: Reg,
    pub start: usize,
    pub end: usize,
}

impl Slice {
    pub fn new(reg: Reg, start: usize, end: usize) -> Self {
        Slice { reg, start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One state-machine transition (or a fixed short sequence of them).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instruction {
    Vmm {
        bank: Bank,
        src: Reg,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    EwMin {
        lhs: Operand,
        rhs: Operand,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    EwMax {
        lhs: Operand,
        rhs: Operand,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    EwInhibit {
        inhibitor: Operand,
        data: Operand,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
        #[serde(default)]
        tie: TieMode,
    },
    /// Element-wise tropical product of two stored wavefronts, done as a
    /// store phase followed by a playback phase.
    #[serde(rename = "tropmul")]
    TropMul {
        lhs: Reg,
        rhs: Reg,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    Argmin {
        src: Reg,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    /// `t_max = None` uses the machine's dynamic range.
    Binarize {
        src: Reg,
        dst: Reg,
        #[serde(default)]
        t_max: Option<TimeValue>,
        #[serde(default)]
        mode: WriteMode,
    },
    Coincidence {
        lhs: Reg,
        rhs: Reg,
        dst: Reg,
        epsilon: u64,
        #[serde(default)]
        mode: WriteMode,
    },
    MinReduce {
        src: Reg,
        dst: Reg,
    },
    MaxReduce {
        src: Reg,
        dst: Reg,
    },
    Scale {
        src: Reg,
        delay: TimeValue,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
    WriteColumn {
        bank: Bank,
        select: Reg,
        src: Reg,
    },
    InhibitRows {
        bank: Bank,
        mask: Reg,
    },
    ProgramMatrix {
        bank: Bank,
        matrix: TropicalMatrix,
    },
    /// Gather slices of registers into a destination. The addressing is
    /// digital; the data still passes through a read and a write.
    Move {
        parts: Vec<Slice>,
        dst: Reg,
        #[serde(default)]
        mode: WriteMode,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Opcode {
    Vmm,
    EwMin,
    EwMax,
    EwInhibit,
    Tropmul,
    Argmin,
    Binarize,
    Coincidence,
    MinReduce,
    MaxReduce,
    Scale,
    WriteColumn,
    InhibitRows,
    ProgramMatrix,
    Move,
}

impl Opcode {
    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Vmm => "VMM",
            Opcode::EwMin => "EW_MIN",
            Opcode::EwMax => "EW_MAX",
            Opcode::EwInhibit => "EW_INHIBIT",
            Opcode::Tropmul => "TROPMUL",
            Opcode::Argmin => "ARGMIN",
            Opcode::Binarize => "BINARIZE",
            Opcode::Coincidence => "COINCIDENCE",
            Opcode::MinReduce => "MIN_REDUCE",
            Opcode::MaxReduce => "MAX_REDUCE",
            Opcode::Scale => "SCALE",
            Opcode::WriteColumn => "WRITE_COLUMN",
            Opcode::InhibitRows => "INHIBIT_ROWS",
            Opcode::ProgramMatrix => "PROGRAM_MATRIX",
            Opcode::Move => "MOVE",
        }
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl Instruction {
    pub fn opcode(&self) -> Opcode {
        match self {
            Instruction::Vmm { .. } => Opcode::Vmm,
            Instruction::EwMin { .. } => Opcode::EwMin,
            Instruction::EwMax { .. } => Opcode::EwMax,
            Instruction::EwInhibit { .. } => Opcode::EwInhibit,
            Instruction::TropMul { .. } => Opcode::Tropmul,
            Instruction::Argmin { .. } => Opcode::Argmin,
            Instruction::Binarize { .. } => Opcode::Binarize,
            Instruction::Coincidence { .. } => Opcode::Coincidence,
            Instruction::MinReduce { .. } => Opcode::MinReduce,
            Instruction::MaxReduce { .. } => Opcode::MaxReduce,
            Instruction::Scale { .. } => Opcode::Scale,
            Instruction::WriteColumn { .. } => Opcode::WriteColumn,
            Instruction::InhibitRows { .. } => Opcode::InhibitRows,
            Instruction::ProgramMatrix { .. } => Opcode::ProgramMatrix,
            Instruction::Move { .. } => Opcode::Move,
        }
    }

    /// Registers read by this instruction.
    pub fn source_regs(&self) -> Vec<Reg> {
        use Instruction::*;
        match self {
            Vmm { src, .. }
            | Argmin { src, .. }
            | Binarize { src, .. }
            | MinReduce { src, .. }
            | MaxReduce { src, .. }
            | Scale { src, .. } => vec![*src],
            EwMin { lhs, rhs, .. } | EwMax { lhs, rhs, .. } => {
                lhs.reg().into_iter().chain(rhs.reg()).collect()
            }
            EwInhibit { inhibitor, data, .. } => {
                inhibitor.reg().into_iter().chain(data.reg()).collect()
            }
            TropMul { lhs, rhs, .. } | Coincidence { lhs, rhs, .. } => vec![*lhs, *rhs],
            WriteColumn { select, src, .. } => vec![*select, *src],
            InhibitRows { mask, .. } => vec![*mask],
            ProgramMatrix { .. } => vec![],
            Move { parts, .. } => parts.iter().map(|p| p.reg).collect(),
        }
    }

    /// Destination register, if the result lands in the register file.
    pub fn dest_reg(&self) -> Option<Reg> {
        use Instruction::*;
        match self {
            Vmm { dst, .. }
            | EwMin { dst, .. }
            | EwMax { dst, .. }
            | EwInhibit { dst, .. }
            | TropMul { dst, .. }
            | Argmin { dst, .. }
            | Binarize { dst, .. }
            | Coincidence { dst, .. }
            | MinReduce { dst, .. }
            | MaxReduce { dst, .. }
            | Scale { dst, .. }
            | Move { dst, .. } => Some(*dst),
            WriteColumn { .. } | InhibitRows { .. } | ProgramMatrix { .. } => None,
        }
    }
}

fn mode_suffix(mode: &WriteMode) -> &'static str {
    match mode {
        WriteMode::Direct => ":=",
        WriteMode::Projective => ":~",
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Instruction::*;
        let op = self.opcode();
        match self {
            Vmm { bank, src, dst, mode } => write!(f, "{dst} {} {op} {bank}, {src}", mode_suffix(mode)),
            EwMin { lhs, rhs, dst, mode } | EwMax { lhs, rhs, dst, mode } => {
                write!(f, "{dst} {} {op} {lhs}, {rhs}", mode_suffix(mode))
            }
            EwInhibit { inhibitor, data, dst, mode, .. } => {
                write!(f, "{dst} {} {op} {inhibitor}, {data}", mode_suffix(mode))
            }
            TropMul { lhs, rhs, dst, mode } => write!(f, "{dst} {} {op} {lhs}, {rhs}", mode_suffix(mode)),
            Argmin { src, dst, mode } => write!(f, "{dst} {} {op} {src}", mode_suffix(mode)),
            Binarize { src, dst, t_max, mode } => match t_max {
                Some(t) => write!(f, "{dst} {} {op} {src}, #{t}", mode_suffix(mode)),
                None => write!(f, "{dst} {} {op} {src}", mode_suffix(mode)),
            },
            Coincidence { lhs, rhs, dst, epsilon, mode } => {
                write!(f, "{dst} {} {op} {lhs}, {rhs}, eps={epsilon}", mode_suffix(mode))
            }
            MinReduce { src, dst } | MaxReduce { src, dst } => write!(f, "{dst} := {op} {src}"),
            Scale { src, delay, dst, mode } => write!(f, "{dst} {} {op} #{delay}, {src}", mode_suffix(mode)),
            WriteColumn { bank, select, src } => write!(f, "{op} {bank}[{select}] <- {src}"),
            InhibitRows { bank, mask } => write!(f, "{op} {bank}, {mask}"),
            ProgramMatrix { bank, matrix } => write!(f, "{op} {bank} ({0}x{0})", matrix.n()),
            Move { parts, dst, mode } => {
                write!(f, "{dst} {} {op}", mode_suffix(mode))?;
                for (i, p) in parts.iter().enumerate() {
                    let sep = if i == 0 { " " } else { ", " };
                    write!(f, "{sep}{}[{}..{}]", p.reg, p.start, p.end)?;
                }
                Ok(())
            }
        }
    }
}
